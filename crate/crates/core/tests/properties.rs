use lossdiv::duality::{conjugate, psi_from_f, psi_tilde_from_loss, ConjugateMethod, GridSpec};
use lossdiv::equivalence::{default_c_grid, default_q_grid, dominance_check, standard_grid, symmetry_check, Dominance};
use lossdiv::erm::{excess_identity, excess_risk_bound, FunctionClassSpec};
use lossdiv::measures::{f_divergence, induce_measures};
use lossdiv::minimize::log_grid;
use lossdiv::risk::{optimal_phi_risk, verify_correspondence};
use lossdiv::rng::SampleStream;
use lossdiv::{BaseGenerator, Discriminant, Generator, JointMeasure, LossKind, Quantizer, SourceSpec, SurrogateLoss};
use proptest::prelude::*;

const CONVEX: [LossKind; 5] =
    [LossKind::Hinge, LossKind::Exponential, LossKind::Logistic, LossKind::LeastSquares, LossKind::SymKl];

fn measure(seed: u64, cells: usize) -> JointMeasure {
    SampleStream::new(seed, 0).joint_measure(cells)
}

#[test]
fn biconjugate_recovers_the_generator() {
    let us = log_grid(1e-2, 1e2, 1000);
    for name in Generator::CATALOG {
        let f = Generator::from_name(name).unwrap();
        let fss = conjugate(&f, ConjugateMethod::Exact).unwrap().conjugate(GridSpec::symmetric(1e3, 20_000));
        let worst = us.iter().map(|&u| (fss.eval(u).unwrap() - f.eval(u)).abs()).fold(0.0, f64::max);
        assert!(worst <= 1e-6, "{name}: {worst:e}");
    }
}

/// Points strictly inside `(β₁, β₂)`, clipped to a finite window.
fn interior(kind: LossKind) -> (f64, f64) {
    match kind {
        LossKind::Hinge => (0.01, 1.99),
        LossKind::Exponential => (0.05, 20.0),
        LossKind::Logistic => (0.05, 5.0),
        LossKind::LeastSquares => (0.01, 3.99),
        _ => (-3.0, 3.0),
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn psi_tilde_matches_psi(k in 0usize..5, t in 0.0f64..1.0) {
        let kind = CONVEX[k];
        let (lo, hi) = interior(kind);
        let b = lo + t * (hi - lo);
        let from_loss = psi_tilde_from_loss(&SurrogateLoss::catalog(kind)).unwrap().eval(b).unwrap();
        let from_f = psi_from_f(&kind.generator()).unwrap().eval(b).unwrap();
        prop_assert!((from_loss - from_f).abs() <= 1e-6 * from_f.abs().max(1.0), "{} at {b}: {from_loss} vs {from_f}", kind.name());
    }

    #[test]
    fn correspondence_on_random_measures(k in 0usize..5, seed in any::<u64>(), cells in 2usize..9) {
        let kind = CONVEX[k];
        let m = measure(seed, cells);
        let r = verify_correspondence(&SurrogateLoss::catalog(kind), &kind.generator(), &m, 1e-6).unwrap();
        prop_assert!(r.pass, "{}: residual {}", kind.name(), r.correspondence_residual);
        prop_assert!(r.phi_risk >= r.optimal_phi_risk - 1e-12);
    }

    #[test]
    fn optimal_risk_is_concave(k in 0usize..5, s1 in any::<u64>(), s2 in any::<u64>(), lam in 0.0f64..1.0, cells in 2usize..6) {
        let phi = SurrogateLoss::catalog(CONVEX[k]);
        let (m1, m2) = (measure(s1, cells), measure(s2, cells));
        let mix = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| lam * x + (1.0 - lam) * y).collect::<Vec<_>>();
        let m = JointMeasure::new(mix(m1.mu(), m2.mu()), mix(m1.pi(), m2.pi())).unwrap();
        let lhs = optimal_phi_risk(&phi, &m).0;
        let rhs = lam * optimal_phi_risk(&phi, &m1).0 + (1.0 - lam) * optimal_phi_risk(&phi, &m2).0;
        prop_assert!(lhs >= rhs - 1e-9, "{lhs} < {rhs}");
    }

    #[test]
    fn optimal_risk_ignores_cell_order(k in 0usize..5, seed in any::<u64>(), perm in Just((0..6).collect::<Vec<usize>>()).prop_shuffle()) {
        let phi = SurrogateLoss::catalog(CONVEX[k]);
        let m = measure(seed, 6);
        let a = optimal_phi_risk(&phi, &m).0;
        let b = optimal_phi_risk(&phi, &m.permuted(&perm)).0;
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn symmetric_generators_are_swap_invariant(g in 0usize..5, seed in any::<u64>(), cells in 2usize..9) {
        let f = Generator::from_name(Generator::CATALOG[g]).unwrap();
        prop_assert!(symmetry_check(&f, &standard_grid()));
        let m = measure(seed, cells);
        let (a, b) = (f_divergence(&f, &m).unwrap(), f_divergence(&f, &m.swapped()).unwrap());
        prop_assert!((a - b).abs() <= 1e-12);
    }

    /// Affinely related generators rank every pair of thresholds the same way.
    #[test]
    fn affine_generators_order_quantizers_alike(
        g in 0usize..4, c in 0.1f64..10.0, a in -3.0f64..3.0, b in -3.0f64..3.0,
        t1 in 0.001f64..0.999, t2 in 0.001f64..0.999, q in 0.1f64..0.9,
    ) {
        let (f1, base) = [
            (Generator::variational(), BaseGenerator::MinCapped(1.0)),
            (Generator::hellinger(), BaseGenerator::Hellinger),
            (Generator::triangular(), BaseGenerator::Triangular),
            (Generator::capacitory(), BaseGenerator::Capacitory),
        ][g].clone();
        // variational() is 2·(−min(u, 1))
        let scale = if g == 0 { 2.0 * c } else { c };
        let f2 = Generator::affine(base, scale, a, b);
        let src = SourceSpec::uniform_pair(1.0, 2.0, 4.0, q).unwrap();
        let div = |f: &Generator, t: f64| f_divergence(f, &induce_measures(&Quantizer::threshold(1.0 + t).unwrap(), &src).unwrap()).unwrap();
        let d1 = div(&f1, t1) - div(&f1, t2);
        let d2 = div(&f2, t1) - div(&f2, t2);
        prop_assert!((d2 - c * d1).abs() <= 1e-9 * (1.0 + c));
        if d1.abs() > 1e-9 {
            prop_assert_eq!(d1 > 0.0, d2 > 0.0);
        }
    }

    #[test]
    fn excess_risk_bound_holds_for_random_draws(seed in any::<u64>()) {
        let mut s = SampleStream::new(seed, 0);
        let a = s.uniform_in(0.2, 2.0);
        let b = a + s.uniform_in(0.2, 2.0);
        let c = b + s.uniform_in(0.2, 3.0);
        let src = SourceSpec::uniform_pair(a, b, c, s.uniform_in(0.1, 0.9)).unwrap();
        let fc = FunctionClassSpec::threshold_grid(&src, 11, 4.0).unwrap();
        let q = Quantizer::threshold(s.uniform_in(a + 1e-3 * (b - a), b - 1e-3 * (b - a))).unwrap();
        let gamma = Discriminant::new(vec![s.uniform_in(-4.0, 4.0), s.uniform_in(-4.0, 4.0)]);
        let hinge = SurrogateLoss::catalog(LossKind::Hinge);
        let (lhs, rhs) = excess_risk_bound(&hinge, &gamma, &q, &src, &fc).unwrap();
        prop_assert!(lhs <= rhs + 1e-10);
        let (phi_excess, bayes_excess) = excess_identity(&hinge, &q, &src, &fc).unwrap();
        prop_assert!((phi_excess - bayes_excess).abs() <= 1e-8);
    }
}

#[test]
fn kl_is_not_swap_invariant() {
    let m = JointMeasure::new(vec![0.4, 0.1], vec![0.2, 0.3]).unwrap();
    let f = Generator::kl();
    assert!(!symmetry_check(&f, &standard_grid()));
    let (a, b) = (f_divergence(&f, &m).unwrap(), f_divergence(&f, &m.swapped()).unwrap());
    assert!((a - b).abs() > 1e-3);
}

/// A garbling of a quantizer is dominated by it, and then every loss ranks
/// the two the same way.
#[test]
fn dominance_implies_every_loss_agrees() {
    let mut s = SampleStream::new(21, 0);
    for _ in 0..20 {
        let mut draw = |n: usize| {
            let w: Vec<f64> = (0..n).map(|_| s.uniform_in(0.05, 1.0)).collect();
            let t: f64 = w.iter().sum();
            w.into_iter().map(|x| x / t).collect::<Vec<f64>>()
        };
        let (pos, neg) = (draw(4), draw(4));
        let garble: Vec<Vec<f64>> = (0..4).map(|_| draw(2)).collect();
        let src = SourceSpec::binned(pos, neg, 0.45).unwrap();
        let fine = Quantizer::deterministic(&[0, 1, 2, 3], 4).unwrap();
        let coarse = Quantizer::table(garble).unwrap();
        let r = dominance_check(&fine, &coarse, &src, &default_q_grid(), &default_c_grid()).unwrap();
        assert!(matches!(r.verdict_bayes(), Dominance::First | Dominance::Both));
        assert_eq!(r.verdict_bayes(), r.verdict_divergence());
        let (mf, mc) = (induce_measures(&fine, &src).unwrap(), induce_measures(&coarse, &src).unwrap());
        for k in CONVEX {
            let phi = SurrogateLoss::catalog(k);
            assert!(optimal_phi_risk(&phi, &mf).0 <= optimal_phi_risk(&phi, &mc).0 + 1e-9, "{}", k.name());
        }
    }
}
