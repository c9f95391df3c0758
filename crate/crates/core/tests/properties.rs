//! Property tests for the invariants shared across modules.

use num_complex::Complex64;
use proptest::prelude::*;

use relquant_core::algebra::*;
use relquant_core::bargmann::*;
use relquant_core::cone_symbol::*;
use relquant_core::evolution::*;

fn spin() -> impl Strategy<Value = SpinParameter> {
    (0.0..=1.0f64).prop_map(|p| SpinParameter::new(p).unwrap())
}

fn word() -> impl Strategy<Value = Vec<Generator>> {
    prop::collection::vec(prop_oneof![Just(Generator::Q), Just(Generator::R)], 1..12)
}

proptest! {
    #[test]
    fn projections_are_idempotent_and_symmetric(p in spin()) {
        for m in [rep_pq(p), rep_pr()] {
            prop_assert!((m * m).max_abs_diff(&m) < 1e-14);
            prop_assert!(m.is_symmetric(1e-14));
        }
        prop_assert!((difference_squared_value(p).unwrap() - p.value()).abs() == 0.0);
    }

    #[test]
    fn repeated_letters_collapse(p in spin(), w in word()) {
        let mut reduced = w.clone();
        reduced.dedup();
        let full = represent_word(&w, p).unwrap();
        let short = represent_word(&reduced, p).unwrap();
        prop_assert!(full.max_abs_diff(&short) < 1e-12);
    }

    #[test]
    fn sandwich_scales_the_quantum_projection(p in spin()) {
        use Generator::{Q, R};
        let qrq = represent_word(&[Q, R, Q], p).unwrap();
        prop_assert!(qrq.max_abs_diff(&rep_pq(p).scale(1.0 - p.value())) < 1e-14);
    }

    #[test]
    fn commutator_vanishes_only_at_endpoints(p in 0.01..0.99f64) {
        let p = SpinParameter::new(p).unwrap();
        prop_assert!(commutator_norm(p) > 0.0);
        prop_assert_eq!(classify_spin(p).kind, SpinKind::Spinor);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn toeplitz_is_linear_and_hermitian(
        a in -2.0..2.0f64, b in -2.0..2.0f64,
        f in (0u32..3, 0u32..3), g in (0u32..3, 0u32..3),
    ) {
        let basis = build_basis(1, 4).unwrap();
        let sf = PolySymbol::monomial(1.0, vec![f.0], vec![f.1]).unwrap();
        let sg = PolySymbol::monomial(1.0, vec![g.0], vec![g.1]).unwrap();
        let sum = sf.clone().scaled(a).plus(sg.clone().scaled(b)).unwrap();
        let quad = QuadratureSpec { nodes_per_axis: 24 };
        let tf = toeplitz_matrix(&sf, &basis, quad).unwrap();
        let tg = toeplitz_matrix(&sg, &basis, quad).unwrap();
        let ts = toeplitz_matrix(&sum, &basis, quad).unwrap();
        let combo = tf.entries.map(|z| z * a) + tg.entries.map(|z| z * b);
        prop_assert!(ts.max_abs_diff(&combo) < 1e-10);
        prop_assert!(ts.hermitian_defect() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn symbol_is_rotation_invariant(
        s in -4.0..4.0f64, rho in 0.0..4.0f64,
        theta in 0.0..std::f64::consts::PI, phi in 0.0..std::f64::consts::TAU,
    ) {
        let cfg = ConeConfig::default();
        let qp = QuadParams::default();
        let xi = FourMomentum::new(s, rho * theta.sin() * phi.cos(), rho * theta.sin() * phi.sin(), rho * theta.cos());
        let rotated = lambda(&xi, &cfg, &qp).unwrap();
        let axis = lambda_reduced(s, rho, &cfg, &qp).unwrap();
        prop_assert!((rotated / axis - 1.0).abs() < 1e-9);
    }

    #[test]
    fn past_cone_mirrors_future_cone(s in -5.0..5.0f64, rho in 0.0..4.0f64) {
        let future = ConeConfig::default();
        let past = future.with_orientation(Orientation::Past);
        let qp = QuadParams::default();
        let a = ln_lambda_reduced(s, rho, &past, &qp).unwrap();
        let b = ln_lambda_reduced(-s, rho, &future, &qp).unwrap();
        prop_assert_eq!(a, b);
        let a = ln_mu_reduced(s, rho, &past, &qp).unwrap();
        let b = ln_mu_reduced(-s, rho, &future, &qp).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn mu_is_monotone(s in -8.0..8.0f64, rho in 0.0..5.0f64) {
        let cfg = ConeConfig::default();
        let qp = QuadParams::default();
        let h = 0.05;
        // Compare through whichever of μ, 1 - μ is small enough to resolve.
        let key = |s: f64, r: f64| {
            let lm = ln_mu_reduced(s, r, &cfg, &qp).unwrap();
            if lm < -std::f64::consts::LN_2 {
                (true, lm)
            } else {
                (false, -ln_one_minus_mu_reduced(s, r, &cfg, &qp).unwrap())
            }
        };
        let increases = |a: (bool, f64), b: (bool, f64)| match (a.0, b.0) {
            (true, false) => true,
            (false, true) => false,
            _ => b.1 > a.1,
        };
        prop_assert!(increases(key(s, rho), key(s + h, rho)));
        prop_assert!(increases(key(s, rho + h), key(s, rho)));
    }

    #[test]
    fn lambda_is_positive(s in -10.0..10.0f64, rho in 0.0..6.0f64) {
        let v = ln_lambda_reduced(s, rho, &ConeConfig::default(), &QuadParams::default()).unwrap();
        prop_assert!(v.is_finite());
    }
}

fn packet() -> WavePacket {
    let grid = GridSpec::uniform(2, 64, 8.0).unwrap();
    make_gaussian_packet(&grid, &FourMomentum::new(3.0, 1.0, 0.0, 0.0), &[1.0, 1.2]).unwrap()
}

fn approx(tau: f64) -> EvolutionConfig<'static> {
    EvolutionConfig {
        symbol: EvolutionSymbol::Approximation { cone_cutoff: true },
        tau,
        cfg: ConeConfig::default(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn evolution_preserves_norm_and_composes(t1 in -3.0..3.0f64, t2 in -3.0..3.0f64) {
        let p = packet();
        let a = evolve(&evolve(&p, &approx(t1)).unwrap(), &approx(t2)).unwrap();
        let b = evolve(&p, &approx(t1 + t2)).unwrap();
        prop_assert!((a.norm() - p.norm()).abs() < 1e-13);
        let worst = a.amplitudes.iter().zip(&b.amplitudes).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        prop_assert!(worst < 1e-13);
    }

    #[test]
    fn momentum_observables_are_conserved(t in -5.0..5.0f64, k in -2.0..2.0f64) {
        let p = packet();
        let q = evolve(&p, &approx(t)).unwrap();
        let f = |xi: &FourMomentum| (k * xi.0[0]).sin() + xi.0[1] * xi.0[1];
        prop_assert!((momentum_observable_expectation(&p, f) - momentum_observable_expectation(&q, f)).abs() < 1e-12);
    }

    #[test]
    fn fourier_round_trip(t in -2.0..2.0f64) {
        let p = evolve(&packet(), &approx(t)).unwrap();
        let back = to_momentum(&to_position(&p));
        prop_assert!(back.distance(&p).unwrap() < 1e-10);
        prop_assert!((to_position(&p).norm() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn synthesized_hermite_functions_are_normalized() {
    let basis = build_basis(1, 6).unwrap();
    let x: Vec<f64> = (0..2001).map(|i| -10.0 + i as f64 * 0.01).collect();
    for k in 0..basis.len() {
        let mut c = vec![Complex64::new(0.0, 0.0); basis.len()];
        c[k] = Complex64::new(1.0, 0.0);
        let f = bargmann_synthesis_1d(&basis, &c, &x).unwrap();
        let n: f64 = f.iter().map(|z| z.norm_sqr()).sum::<f64>() * 0.01;
        assert!((n - 1.0).abs() < 1e-8, "k={k}: {n}");
    }
}
