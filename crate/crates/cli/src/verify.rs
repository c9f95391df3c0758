//! The acceptance suite behind `relquant verify`.
//!
//! Each criterion returns a list of named checks with the measured value
//! and the threshold it was held to. Output is free of timings so that
//! repeated runs are byte-identical.

use std::fmt;

use relquant_core::algebra::{
    classify_spin, difference_squared_value, observable_sum, rep_pq, rep_pr, Matrix2, SpinKind,
    SpinParameter,
};
use relquant_core::bargmann::{
    build_basis, harmonic_oscillator_check, toeplitz_matrix, PolySymbol, QuadratureSpec,
};
use relquant_core::cone_symbol::{
    asymptotic_convergence, lambda_oracle, lambda_reduced, linspace, minkowski_q, mu_reduced,
    ConeConfig, FourMomentum, OracleMethod, QuadParams, RadialTable,
};
use relquant_core::evolution::{
    compare_exact_vs_approx, evolve, group_velocity_check, make_gaussian_packet,
    momentum_observable_expectation, to_momentum, to_position, EvolutionConfig,
    EvolutionSymbol, GridSpec,
};
use relquant_core::spectrum::{finite_section, finite_section_quadrature, spectrum_range};

use crate::config::RunConfig;

pub const CRITERIA: [u8; 8] = [1, 2, 3, 4, 5, 6, 7, 8];

/// Seed of the Monte-Carlo bracket in criterion 3.
pub const MONTE_CARLO_SEED: u64 = 1;
pub const MONTE_CARLO_SAMPLES: usize = 1_000_000;
/// Calibrated bound on the t = 16 asymptotic deviation (measured 1.30e-3).
pub const ASYMPTOTIC_T16_BOUND: f64 = 1.5e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    pub passed: bool,
    pub measured: String,
    pub threshold: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] {}: measured {} (threshold {})",
            if self.passed { "PASS" } else { "FAIL" },
            self.criterion,
            self.name,
            self.measured,
            self.threshold
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn criterion_passed(&self, criterion: u8) -> bool {
        self.checks
            .iter()
            .filter(|c| c.criterion == criterion)
            .all(|c| c.passed)
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("criterion,check,status,measured,threshold\n");
        for c in &self.checks {
            out += &format!(
                "{},{},{},\"{}\",\"{}\"\n",
                c.criterion,
                c.name,
                if c.passed { "pass" } else { "fail" },
                c.measured,
                c.threshold
            );
        }
        out
    }
}

struct Builder {
    criterion: u8,
    checks: Vec<Check>,
}

impl Builder {
    fn new(criterion: u8) -> Self {
        Self {
            criterion,
            checks: Vec::new(),
        }
    }

    fn push(&mut self, name: &str, passed: bool, measured: String, threshold: String) {
        self.checks.push(Check {
            criterion: self.criterion,
            name: name.into(),
            passed,
            measured,
            threshold,
        });
    }

    fn at_most(&mut self, name: &str, measured: f64, bound: f64) {
        self.push(name, measured <= bound, format!("{measured:e}"), format!("<= {bound:e}"));
    }

    fn below(&mut self, name: &str, measured: f64, bound: f64) {
        self.push(name, measured < bound, format!("{measured:e}"), format!("< {bound:e}"));
    }

    fn above(&mut self, name: &str, measured: f64, bound: f64) {
        self.push(name, measured > bound, format!("{measured:e}"), format!("> {bound:e}"));
    }

    fn holds(&mut self, name: &str, passed: bool, measured: String, threshold: &str) {
        self.push(name, passed, measured, threshold.into());
    }
}

type Outcome = relquant_core::Result<Vec<Check>>;

/// Runs the selected criteria. A criterion that cannot be evaluated is
/// reported as a single failing check carrying the error.
pub fn run_suite(criteria: &[u8], config: &RunConfig) -> VerifyReport {
    let mut report = VerifyReport::default();
    for &k in criteria {
        let outcome = run_criterion(k, config);
        match outcome {
            Ok(checks) => report.checks.extend(checks),
            Err(e) => report.checks.push(Check {
                criterion: k,
                name: "evaluation".into(),
                passed: false,
                measured: e.to_string(),
                threshold: "completes without error".into(),
            }),
        }
    }
    report
}

pub fn run_criterion(k: u8, config: &RunConfig) -> Outcome {
    let qp = config.quadrature;
    match k {
        1 => two_projection_representation(),
        2 => toeplitz_oscillator(),
        3 => oracle_equivalence(&qp),
        4 => positivity_and_range(&qp),
        5 => asymptotics(&qp),
        6 => spectrum_filling(&qp),
        7 => evolution_contracts(&qp),
        8 => cli_determinism(config),
        _ => Err(relquant_core::Error::Config(format!("no acceptance criterion {k}"))),
    }
}

fn two_projection_representation() -> Outcome {
    let mut b = Builder::new(1);
    let (mut idem, mut sym, mut diff) = (0.0f64, 0.0f64, 0.0f64);
    let mut worst_classified = true;
    for p in linspace(0.0, 1.0, 1000) {
        let sp = SpinParameter::new(p)?;
        for m in [rep_pq(sp), rep_pr()] {
            idem = idem.max((m * m).max_abs_diff(&m));
            sym = sym.max(m.max_abs_diff(&m.transpose()));
        }
        let d = rep_pq(sp) - rep_pr();
        diff = diff.max((d * d).max_abs_diff(&Matrix2::IDENTITY.scale(p)));
        worst_classified &= difference_squared_value(sp).is_ok();
    }
    b.at_most("projections idempotent", idem, 1e-14);
    b.at_most("projections symmetric", sym, 1e-14);
    b.at_most("(P_Q - P_R)^2 = p I", diff, 1e-12);
    b.holds(
        "difference square consistent",
        worst_classified,
        format!("{worst_classified}"),
        "true at all 1000 samples",
    );
    let table = [
        (0.0, [2.0, 0.0, 0.0, 0.0], SpinKind::Scalar),
        (0.5, [1.5, 0.5, 0.5, 0.5], SpinKind::Spinor),
        (1.0, [1.0, 0.0, 0.0, 1.0], SpinKind::Vector),
    ];
    for (p, entries, kind) in table {
        let sp = SpinParameter::new(p)?;
        let got = observable_sum(sp).entries();
        let class = classify_spin(sp).kind;
        b.holds(
            &format!("P_Q + P_R at p = {p}"),
            got == entries && class == kind,
            format!("{got:?} {class}"),
            &format!("{entries:?} {kind}"),
        );
    }
    Ok(b.checks)
}

fn toeplitz_oscillator() -> Outcome {
    let mut b = Builder::new(2);
    b.at_most("n=1 cap=5 equals diag(1..6)", harmonic_oscillator_check(1, 5)?, 1e-8);
    let basis = build_basis(2, 3)?;
    let h = PolySymbol::harmonic_oscillator(2);
    let t = toeplitz_matrix(&h, &basis, QuadratureSpec::exact_for(&h, &basis))?;
    let mut expected: Vec<f64> = basis.indices.iter().map(|a| 2.0 + f64::from(a.total_degree())).collect();
    expected.sort_by(f64::total_cmp);
    let got = t.eigenvalues();
    let dev = got
        .iter()
        .zip(&expected)
        .map(|(a, e)| (a - e).abs())
        .fold(0.0, f64::max);
    b.at_most("n=2 cap=3 eigenvalues 2+|alpha|", dev, 1e-8);
    Ok(b.checks)
}

fn oracle_equivalence(qp: &QuadParams) -> Outcome {
    let mut b = Builder::new(3);
    let cfg = ConeConfig::default();
    let (mut worst_grid, mut worst_z, mut unresolved, mut unresolved_max) = (0.0f64, 0.0f64, 0, 0.0f64);
    for s in linspace(-4.0, 4.0, 9) {
        for rho in linspace(0.0, 4.0, 5) {
            let xi = FourMomentum::new(s, rho, 0.0, 0.0);
            let reduced = lambda_reduced(s, rho, &cfg, qp)?;
            let grid = lambda_oracle(&xi, &cfg, OracleMethod::TensorGrid { nodes: 32 })?;
            let tol = (5e-3 * grid.value.abs()).max(1e-4);
            worst_grid = worst_grid.max((reduced - grid.value).abs() / tol);
            let mc = lambda_oracle(
                &xi,
                &cfg,
                OracleMethod::MonteCarlo {
                    samples: MONTE_CARLO_SAMPLES,
                    seed: MONTE_CARLO_SEED,
                },
            )?;
            if mc.error_estimate > 0.0 {
                worst_z = worst_z.max((reduced - mc.value).abs() / mc.error_estimate);
            } else {
                // No sample landed in the cone; only a bound is available.
                unresolved += 1;
                unresolved_max = unresolved_max.max(reduced);
            }
        }
    }
    b.at_most("tensor grid 32: |diff| / max(1e-4, 0.5% rel)", worst_grid, 1.0);
    b.at_most("Monte Carlo 1e6: |diff| / sigma", worst_z, 3.0);
    b.holds(
        "Monte Carlo without cone hits",
        unresolved_max < 1e-4,
        format!("{unresolved} points, max lambda {unresolved_max:e}"),
        "lambda < 1e-4 at such points",
    );
    Ok(b.checks)
}

/// Orders points by `μ`, reading it from whichever of `ln μ`, `ln(1 - μ)`
/// is resolved.
fn mu_key(ln_mu: f64, ln_one_minus_mu: f64) -> (bool, f64) {
    if ln_mu < -std::f64::consts::LN_2 {
        (false, ln_mu)
    } else {
        (true, -ln_one_minus_mu)
    }
}

fn positivity_and_range(qp: &QuadParams) -> Outcome {
    let mut b = Builder::new(4);
    let cfg = ConeConfig::default();
    let table = RadialTable::build_default(cfg, *qp)?;
    let finite = table.ln_lambda.iter().all(|l| l.is_finite());
    let min_lambda = table.ln_lambda.iter().copied().fold(f64::INFINITY, f64::min).exp();
    b.holds(
        "lambda > 0 on the default table",
        finite && min_lambda >= 0.0,
        format!("min ln lambda finite: {finite}"),
        "all finite",
    );
    let top_mu = table.ln_mu.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let top_comp = table.ln_one_minus_mu.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    b.below("max ln mu", top_mu, 0.0);
    b.below("max ln(1 - mu)", top_comp, 0.0);
    b.above("mu(10, 0)", mu_reduced(10.0, 0.0, &cfg, qp)?, 0.999);
    b.below("mu(-10, 0)", mu_reduced(-10.0, 0.0, &cfg, qp)?, 1e-6);
    let (ns, nr) = table.shape();
    let key = |i: usize, j: usize| {
        let k = i * nr + j;
        mu_key(table.ln_mu[k], table.ln_one_minus_mu[k])
    };
    let strictly_less = |a: (bool, f64), c: (bool, f64)| a < c;
    let mut s_violations = 0;
    let mut rho_violations = 0;
    for i in 0..ns {
        for j in 0..nr {
            if i + 1 < ns && !strictly_less(key(i, j), key(i + 1, j)) {
                s_violations += 1;
            }
            if j + 1 < nr && !strictly_less(key(i, j + 1), key(i, j)) {
                rho_violations += 1;
            }
        }
    }
    b.at_most("non-increasing steps of mu in s", s_violations as f64, 0.0);
    b.at_most("non-decreasing steps of mu in rho", rho_violations as f64, 0.0);
    Ok(b.checks)
}

fn asymptotics(qp: &QuadParams) -> Outcome {
    let mut b = Builder::new(5);
    let rows = asymptotic_convergence(
        &FourMomentum::new(2.0, 1.0, 0.0, 0.0),
        &[2.0, 4.0, 8.0, 16.0],
        &ConeConfig::default(),
        qp,
    )?;
    let dev: Vec<f64> = rows.iter().map(|r| r.relative_deviation()).collect();
    let decreasing = dev.windows(2).all(|w| w[1] < w[0]);
    b.holds(
        "deviation strictly decreasing over t = 2, 4, 8, 16",
        decreasing,
        dev.iter().map(|d| format!("{d:e}")).collect::<Vec<_>>().join(" "),
        "strictly decreasing",
    );
    b.at_most("deviation(16) / deviation(2)", dev[3] / dev[0], 1.0 / 3.0);
    b.at_most("deviation(16)", dev[3], ASYMPTOTIC_T16_BOUND);
    Ok(b.checks)
}

fn spectrum_filling(qp: &QuadParams) -> Outcome {
    let mut b = Builder::new(6);
    let table = RadialTable::build_default(ConeConfig::default(), *qp)?;
    let quad = finite_section_quadrature(64);
    let sections = [4, 16, 64]
        .iter()
        .map(|&n| finite_section(n, 0.0, &table, quad))
        .collect::<relquant_core::Result<Vec<_>>>()?;
    let lo = sections.iter().map(|s| s.min_eigenvalue()).fold(f64::INFINITY, f64::min);
    let hi = sections.iter().map(|s| s.max_eigenvalue()).fold(f64::NEG_INFINITY, f64::max);
    b.holds(
        "section eigenvalues in [-1e-8, 1 + 1e-8]",
        lo >= -1e-8 && hi <= 1.0 + 1e-8,
        format!("[{lo:e}, {hi:e}]"),
        "[-1e-8, 1+1e-8]",
    );
    let mins: Vec<f64> = sections.iter().map(|s| s.min_eigenvalue()).collect();
    let maxs: Vec<f64> = sections.iter().map(|s| s.max_eigenvalue()).collect();
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(" ");
    b.holds(
        "min eigenvalue decreasing in N = 4, 16, 64",
        mins.windows(2).all(|w| w[1] <= w[0]),
        fmt(&mins),
        "non-increasing",
    );
    b.holds(
        "max eigenvalue increasing in N = 4, 16, 64",
        maxs.windows(2).all(|w| w[1] >= w[0]),
        fmt(&maxs),
        "non-decreasing",
    );
    b.below("N=64 min eigenvalue", mins[2], 0.01);
    b.above("N=64 max eigenvalue", maxs[2], 0.99);
    let report = spectrum_range(&table)?;
    b.below("observed min of 1 - mu", report.observed_min, 1e-3);
    b.above("observed max of 1 - mu", report.observed_max, 0.999);
    b.at_most("empty histogram bins of 64", report.empty_bins() as f64, 0.0);
    Ok(b.checks)
}

fn evolution_contracts(qp: &QuadParams) -> Outcome {
    let mut b = Builder::new(7);
    let cfg = ConeConfig::default();
    let table = RadialTable::build_default(cfg, *qp)?;
    let grid = GridSpec::uniform(2, 256, 6.0)?;
    let packet = make_gaussian_packet(&grid, &FourMomentum::new(3.0, 1.0, 0.0, 0.0), &[0.2, 0.2])?;
    let ec = |tau| EvolutionConfig {
        symbol: EvolutionSymbol::Exact(&table),
        tau,
        cfg,
    };
    let evolved = evolve(&packet, &ec(0.5))?;
    b.at_most("norm change", (evolved.norm() - packet.norm()).abs(), 1e-12);
    let lambda_at = |xi: &FourMomentum| {
        table.interpolate_lambda(xi.time(), xi.spatial_norm()).unwrap_or(f64::NAN)
    };
    let xi_0 = |xi: &FourMomentum| xi.0[0];
    let observables: [&(dyn Fn(&FourMomentum) -> f64 + Sync); 3] = [&minkowski_q, &lambda_at, &xi_0];
    let mut worst = 0.0f64;
    for f in observables {
        let d = momentum_observable_expectation(&evolved, f) - momentum_observable_expectation(&packet, f);
        worst = worst.max(d.abs());
    }
    b.at_most("momentum observable drift (q, lambda, xi_0)", worst, 1e-12);
    let twice = evolve(&evolve(&packet, &ec(0.2))?, &ec(0.3))?;
    let composed = twice
        .amplitudes
        .iter()
        .zip(&evolved.amplitudes)
        .map(|(a, c)| (a - c).norm())
        .fold(0.0, f64::max);
    b.at_most("composition tau = 0.2 + 0.3", composed, 1e-13);
    let round = to_momentum(&to_position(&evolved)).distance(&evolved)?;
    b.at_most("Fourier round trip", round, 1e-10);
    let gv = group_velocity_check(&packet, &ec(0.5))?;
    b.below("group velocity relative error at (3, 1)", gv.rel_err, 0.05);

    let wide = RadialTable::build(linspace(-24.0, 24.0, 97), linspace(0.0, 24.0, 49), cfg, *qp)?;
    let big = GridSpec::uniform(2, 128, 24.0)?;
    let mut disc = Vec::new();
    for t in [2.0, 4.0, 8.0] {
        let p = make_gaussian_packet(&big, &FourMomentum::new(2.0 * t, t, 0.0, 0.0), &[1.5, 1.5])?;
        disc.push(compare_exact_vs_approx(&p, 4.0 / (t * t), &wide, &cfg)?);
    }
    b.holds(
        "exact vs approximation discrepancy at t = 2, 4, 8",
        disc.windows(2).all(|w| w[1] < w[0]),
        disc.iter().map(|d| format!("{d:e}")).collect::<Vec<_>>().join(" "),
        "strictly decreasing",
    );
    Ok(b.checks)
}

fn cli_determinism(config: &RunConfig) -> Outcome {
    let mut b = Builder::new(8);
    let argv = ["relquant", "lambda", "--s", "-1:1:1", "--rho", "0:1:1", "--mc-samples", "100000"];
    let first = crate::render(&argv, config);
    let second = crate::render(&argv, config);
    let identical = matches!((&first, &second), (Ok(a), Ok(c)) if a == c);
    b.holds(
        "lambda output byte-identical across runs",
        identical,
        format!("{} bytes", first.as_ref().map(|s| s.len()).unwrap_or(0)),
        "identical",
    );
    let mut reseeded = config.clone();
    reseeded.seed = config.seed.wrapping_add(1);
    let other = crate::render(&argv, &reseeded);
    let changed = match (&first, &other) {
        (Ok(a), Ok(c)) => seed_only_changes_mc(a, c),
        _ => false,
    };
    b.holds(
        "new seed changes only Monte-Carlo columns",
        changed,
        format!("{changed}"),
        "true",
    );
    Ok(b.checks)
}

fn seed_only_changes_mc(a: &str, c: &str) -> bool {
    let rows = |s: &str| -> Vec<Vec<String>> {
        s.lines()
            .filter(|l| !l.starts_with('#'))
            .map(|l| l.split(',').map(String::from).collect())
            .collect()
    };
    let (ra, rc) = (rows(a), rows(c));
    if ra.len() != rc.len() || ra.is_empty() || ra[0] != rc[0] {
        return false;
    }
    let mc: Vec<usize> = ra[0]
        .iter()
        .enumerate()
        .filter(|(_, h)| h.starts_with("mc_"))
        .map(|(i, _)| i)
        .collect();
    let mut any_mc_change = false;
    for (x, y) in ra.iter().zip(&rc).skip(1) {
        for (i, (u, v)) in x.iter().zip(y).enumerate() {
            if mc.contains(&i) {
                any_mc_change |= u != v;
            } else if u != v {
                return false;
            }
        }
    }
    any_mc_change
}
