//! Subcommand arguments and the outputs they produce.

use clap::Args;
use serde::Serialize;
use serde_json::json;

use relquant_core::algebra::{
    classify_spin, commutator_norm, difference_squared_value, observable_sum, rep_pq, SpinParameter,
};
use relquant_core::bargmann::{build_basis, toeplitz_matrix, PolySymbol, QuadratureSpec};
use relquant_core::cone_symbol::{
    asymptotic_convergence, lambda_oracle, ln_lambda_reduced, ln_mu_reduced, minkowski_q,
    FourMomentum, OracleMethod, RadialTable,
};
use relquant_core::evolution::{
    centroid_position, evolve_with_symbol, make_gaussian_packet, momentum_observable_expectation,
    symbol_values, to_position, EvolutionSymbol, GridSpec,
};
use relquant_core::spectrum::{
    finite_section, finite_section_quadrature, spectrum_range_with_bins,
};

use crate::config::{parse_list, parse_range, ConfigError, Provenance, Representation, RunConfig, SymbolKind};
use crate::verify::{run_suite, CRITERIA};
use crate::{Command, RunError, Status};

/// One named output file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub name: String,
    pub body: String,
}

impl Output {
    fn new(name: impl Into<String>, body: String) -> Self {
        Self {
            name: name.into(),
            body,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AlgebraArgs {
    /// Comma-separated spin parameters in [0, 1].
    #[arg(long, default_value = "0,0.5,1")]
    pub p: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ToeplitzArgs {
    /// Degrees of freedom.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Maximal total degree of the Fock basis.
    #[arg(long, default_value_t = 5)]
    pub cap: u32,
    /// `oscillator`, `one`, `q<j>` or `p<j>` (axes counted from 1).
    #[arg(long, default_value = "oscillator")]
    pub symbol: String,
    /// Gauss-Hermite nodes per axis; chosen automatically when absent.
    #[arg(long)]
    pub nodes: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GridArgs {
    /// Range `min:max:step` of ξ₀.
    #[arg(long, default_value = "-4:4:1", allow_hyphen_values = true)]
    pub s: String,
    /// Range `min:max:step` of |ξ⃗|.
    #[arg(long, default_value = "0:4:1", allow_hyphen_values = true)]
    pub rho: String,
    /// Adds a Monte-Carlo estimate of λ with this many samples.
    #[arg(long)]
    pub mc_samples: Option<usize>,
    /// Adds a tensor Gauss-Hermite estimate of λ with this many nodes per axis.
    #[arg(long)]
    pub tensor_nodes: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AsymptoticsArgs {
    /// Direction ξ as four comma-separated components.
    #[arg(long, default_value = "2,1,0,0", allow_hyphen_values = true)]
    pub xi: String,
    /// Increasing scale factors.
    #[arg(long, default_value = "1,2,4,8,16")]
    pub t: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SpectrumArgs {
    /// Finite-section sizes.
    #[arg(long, default_value = "4,16,64")]
    pub sizes: String,
    /// Fixed |ξ⃗| of the finite-section slice.
    #[arg(long, default_value_t = 0.0)]
    pub rho0: f64,
    #[arg(long, default_value_t = 64)]
    pub bins: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvolveArgs {
    /// Integrates λ at every node instead of using the cached table.
    #[arg(long)]
    pub direct: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    /// Subset of criteria to run, comma-separated; all by default.
    #[arg(long)]
    pub criteria: Option<String>,
}

pub fn execute(command: &Command, config: &RunConfig) -> Result<(Vec<Output>, Status), RunError> {
    let prov = Provenance::new(config, command);
    let outputs = match command {
        Command::Algebra(a) => algebra(a, &prov)?,
        Command::Toeplitz(a) => toeplitz(a, &prov)?,
        Command::Lambda(a) => grid_table(a, config, &prov, "lambda.csv")?,
        Command::Mu(a) => grid_table(a, config, &prov, "mu.csv")?,
        Command::Asymptotics(a) => asymptotics(a, config, &prov)?,
        Command::Spectrum(a) => spectrum(a, config, &prov)?,
        Command::Evolve(a) => evolve(a, config, &prov)?,
        Command::Verify(a) => return verify(a, config),
    };
    Ok((outputs, Status::Ok))
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

fn csv(prov: &Provenance, header: &str, rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = prov.csv_header();
    out += header;
    out.push('\n');
    for r in rows {
        out += &r.join(",");
        out.push('\n');
    }
    out
}

fn json_output(prov: &Provenance, mut value: serde_json::Value) -> String {
    value["provenance"] = json!(prov);
    let mut s = serde_json::to_string_pretty(&value).expect("JSON values serialize");
    s.push('\n');
    s
}

fn algebra(a: &AlgebraArgs, prov: &Provenance) -> Result<Vec<Output>, RunError> {
    let mut rows = Vec::new();
    for p in parse_list(&a.p)? {
        let sp = SpinParameter::new(p)?;
        let class = classify_spin(sp);
        let mut row = vec![num(p)];
        row.extend(rep_pq(sp).entries().iter().map(|&v| num(v)));
        row.extend(observable_sum(sp).entries().iter().map(|&v| num(v)));
        row.push(num(difference_squared_value(sp)?));
        row.push(num(commutator_norm(sp)));
        row.push(class.kind.to_string());
        row.push(class.representation_dimension.to_string());
        row.push(class.reducible.to_string());
        rows.push(row);
    }
    let header = "p,pq_11,pq_12,pq_21,pq_22,sum_11,sum_12,sum_21,sum_22,difference_squared,commutator_norm,spin,dimension,reducible";
    Ok(vec![Output::new("algebra.csv", csv(prov, header, rows))])
}

fn parse_symbol(text: &str, n: usize) -> Result<PolySymbol, ConfigError> {
    let axis = |rest: &str| {
        rest.parse::<usize>()
            .ok()
            .filter(|&j| j >= 1 && j <= n)
            .map(|j| j - 1)
            .ok_or_else(|| ConfigError(format!("symbol {text:?} needs an axis in 1..={n}")))
    };
    match text {
        "oscillator" => Ok(PolySymbol::harmonic_oscillator(n)),
        "one" => Ok(PolySymbol::constant(n, 1.0)),
        _ if text.starts_with('q') => Ok(PolySymbol::q(n, axis(&text[1..])?)),
        _ if text.starts_with('p') => Ok(PolySymbol::p(n, axis(&text[1..])?)),
        _ => Err(ConfigError(format!("unknown symbol {text:?}"))),
    }
}

fn toeplitz(a: &ToeplitzArgs, prov: &Provenance) -> Result<Vec<Output>, RunError> {
    let basis = build_basis(a.n, a.cap)?;
    let symbol = parse_symbol(&a.symbol, a.n)?;
    let quad = match a.nodes {
        Some(nodes_per_axis) => QuadratureSpec { nodes_per_axis },
        None => QuadratureSpec::exact_for(&symbol, &basis),
    };
    let t = toeplitz_matrix(&symbol, &basis, quad)?;
    let label = |k: usize| {
        basis.indices[k]
            .0
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(";")
    };
    let mut rows = Vec::new();
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            let z = t.entries[(i, j)];
            rows.push(vec![i.to_string(), j.to_string(), label(i), label(j), num(z.re), num(z.im)]);
        }
    }
    let eig_rows = t
        .eigenvalues()
        .into_iter()
        .enumerate()
        .map(|(k, v)| vec![k.to_string(), num(v)]);
    Ok(vec![
        Output::new("toeplitz.csv", csv(prov, "row,col,alpha_row,alpha_col,re,im", rows)),
        Output::new("toeplitz_eigenvalues.csv", csv(prov, "index,eigenvalue", eig_rows)),
    ])
}

fn grid_table(a: &GridArgs, config: &RunConfig, prov: &Provenance, name: &str) -> Result<Vec<Output>, RunError> {
    let cfg = config.cone();
    let qp = config.quadrature;
    let (s_values, rho_values) = (parse_range(&a.s)?, parse_range(&a.rho)?);
    let mut header = String::from("s,rho,lambda,mu");
    if a.mc_samples.is_some() {
        header += ",mc_lambda,mc_stderr";
    }
    if a.tensor_nodes.is_some() {
        header += ",grid_lambda,grid_error";
    }
    let mut rows = Vec::new();
    for &s in &s_values {
        for &rho in &rho_values {
            let mut row = vec![
                num(s),
                num(rho),
                num(ln_lambda_reduced(s, rho, &cfg, &qp)?.exp()),
                num(ln_mu_reduced(s, rho, &cfg, &qp)?.exp()),
            ];
            let xi = FourMomentum::new(s, rho, 0.0, 0.0);
            if let Some(samples) = a.mc_samples {
                let e = lambda_oracle(&xi, &cfg, OracleMethod::MonteCarlo { samples, seed: config.seed })?;
                row.extend([num(e.value), num(e.error_estimate)]);
            }
            if let Some(nodes) = a.tensor_nodes {
                let e = lambda_oracle(&xi, &cfg, OracleMethod::TensorGrid { nodes })?;
                row.extend([num(e.value), num(e.error_estimate)]);
            }
            rows.push(row);
        }
    }
    Ok(vec![Output::new(name, csv(prov, &header, rows))])
}

fn asymptotics(a: &AsymptoticsArgs, config: &RunConfig, prov: &Provenance) -> Result<Vec<Output>, RunError> {
    let xi = parse_list(&a.xi)?;
    let xi: [f64; 4] = xi
        .try_into()
        .map_err(|_| ConfigError("--xi needs exactly four components".into()))?;
    let rows = asymptotic_convergence(&FourMomentum(xi), &parse_list(&a.t)?, &config.cone(), &config.quadrature)?;
    let rows = rows
        .iter()
        .map(|r| vec![num(r.t), num(r.scaled_lambda), num(r.leading), num(r.ratio)]);
    Ok(vec![Output::new(
        "asymptotics.csv",
        csv(prov, "t,scaled_lambda,leading,ratio", rows),
    )])
}

fn build_table(config: &RunConfig) -> Result<RadialTable, RunError> {
    Ok(RadialTable::build(
        config.table.s.points(),
        config.table.rho.points(),
        config.cone(),
        config.quadrature,
    )?)
}

fn spectrum(a: &SpectrumArgs, config: &RunConfig, prov: &Provenance) -> Result<Vec<Output>, RunError> {
    let sizes: Vec<usize> = parse_list(&a.sizes)?
        .into_iter()
        .map(|v| {
            (v >= 2.0 && v.fract() == 0.0)
                .then_some(v as usize)
                .ok_or_else(|| ConfigError(format!("section size {v} is not an integer ≥ 2")))
        })
        .collect::<Result<_, _>>()?;
    let table = build_table(config)?;
    let report = spectrum_range_with_bins(&table, a.bins)?;
    let quad = finite_section_quadrature(sizes.iter().copied().max().unwrap_or(2));
    let sections = sizes
        .iter()
        .map(|&n| {
            let fs = finite_section(n, a.rho0, &table, quad)?;
            Ok(json!({ "size": n, "rho0": a.rho0, "eigenvalues": fs.eigenvalues }))
        })
        .collect::<Result<Vec<_>, RunError>>()?;
    let summary = json!({
        "observed_min": report.observed_min,
        "observed_max": report.observed_max,
        "max_gap": report.max_gap,
        "samples": report.samples,
        "empty_bins": report.empty_bins(),
        "quadrature_nodes": quad.nodes_per_axis,
        "sections": sections,
    });
    let bins = report.coverage_histogram.len() as f64;
    let hist = report.coverage_histogram.iter().enumerate().map(|(k, c)| {
        vec![
            k.to_string(),
            num(k as f64 / bins),
            num((k + 1) as f64 / bins),
            c.to_string(),
        ]
    });
    Ok(vec![
        Output::new("spectrum.json", json_output(prov, summary)),
        Output::new("spectrum_histogram.csv", csv(prov, "bin,lower,upper,count", hist)),
    ])
}

fn evolve(a: &EvolveArgs, config: &RunConfig, prov: &Provenance) -> Result<Vec<Output>, RunError> {
    let spec = &config.evolution;
    let cfg = config.cone();
    let grid = GridSpec::new(
        spec.points_per_axis.clone(),
        spec.half_widths.iter().map(|&l| [-l, l]).collect(),
    )?;
    let packet = make_gaussian_packet(&grid, &FourMomentum(spec.center), &spec.widths)?;
    let table;
    let kind = if a.direct { SymbolKind::Direct } else { spec.symbol };
    let symbol = match kind {
        SymbolKind::Exact => {
            table = build_table(config)?;
            EvolutionSymbol::Exact(&table)
        }
        SymbolKind::Direct => EvolutionSymbol::Direct(config.quadrature),
        SymbolKind::Approximation => EvolutionSymbol::Approximation {
            cone_cutoff: spec.cone_cutoff,
        },
    };
    let lambda = symbol_values(&grid, symbol, &cfg)?;
    let axes: Vec<String> = (0..grid.dims)
        .map(|k| match spec.representation {
            Representation::Momentum => format!("xi{k}"),
            Representation::Position => format!("x{k}"),
        })
        .collect();
    let header = format!("{},re,im,abs2", axes.join(","));
    let mut outputs = Vec::new();
    let mut snapshots = Vec::new();
    for (i, &tau) in spec.taus.iter().enumerate() {
        let state = evolve_with_symbol(&packet, &lambda, tau, cfg.hbar)?;
        let position = to_position(&state);
        let lambda_mean = {
            let w: Vec<f64> = state.amplitudes.iter().map(|z| z.norm_sqr()).collect();
            w.iter().zip(&lambda).map(|(a, l)| a * l).sum::<f64>() / w.iter().sum::<f64>()
        };
        snapshots.push(json!({
            "tau": tau,
            "norm": state.norm(),
            "expectation_q": momentum_observable_expectation(&state, minkowski_q),
            "expectation_lambda": lambda_mean,
            "centroid_momentum": state.centroid_momentum(),
            "centroid_position": centroid_position(&position),
        }));
        let values = match spec.representation {
            Representation::Momentum => &state.amplitudes,
            Representation::Position => &position.values,
        };
        let coords = |k| match spec.representation {
            Representation::Momentum => grid.coordinates(k),
            Representation::Position => grid.position_coordinates(k),
        };
        let rows = values.iter().enumerate().map(|(k, z)| {
            let mut row: Vec<String> = coords(k).into_iter().map(num).collect();
            row.extend([num(z.re), num(z.im), num(z.norm_sqr())]);
            row
        });
        outputs.push(Output::new(format!("snapshot_{i:03}.csv"), csv(prov, &header, rows)));
    }
    let summary = json!({
        "symbol": kind,
        "representation": spec.representation,
        "grid": grid,
        "snapshots": snapshots,
    });
    outputs.push(Output::new("evolution_summary.json", json_output(prov, summary)));
    Ok(outputs)
}

fn verify(a: &VerifyArgs, config: &RunConfig) -> Result<(Vec<Output>, Status), RunError> {
    let criteria: Vec<u8> = match &a.criteria {
        None => CRITERIA.to_vec(),
        Some(list) => parse_list(list)?
            .into_iter()
            .map(|v| {
                CRITERIA
                    .iter()
                    .copied()
                    .find(|&c| f64::from(c) == v)
                    .ok_or_else(|| ConfigError(format!("no acceptance criterion {v}")))
            })
            .collect::<Result<_, _>>()?,
    };
    let report = run_suite(&criteria, config);
    let mut text: String = report.checks.iter().map(|c| format!("{c}\n")).collect();
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    text += &format!(
        "{}: {} checks, {} failed\n",
        if failed == 0 { "PASS" } else { "FAIL" },
        report.checks.len(),
        failed
    );
    let status = if report.passed() { Status::Ok } else { Status::VerifyFailed };
    Ok((vec![Output::new("verify.txt", text)], status))
}
