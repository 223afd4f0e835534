//! When do two generators rank quantizers the same way?
//!
//! Two f-divergences order every pair of quantizers identically exactly when
//! `f₁ = c·f₂ + a·u + b` with `c > 0`. This module fits that relation on a
//! grid, tests membership of the variational family `−c·min(u, 1) + a·u + b`,
//! checks the symmetry `f(u) = u·f(1/u)` and 1-coercivity, and compares two
//! quantizers through Bayes risks across priors and through the divergences
//! `−min(u, c)`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::measures::{bayes_risk, f_divergence, induce_measures, Quantizer, SourceSpec};
use crate::minimize::log_grid;

/// Default acceptance tolerance for fits between closed-form generators.
pub const FIT_TOL: f64 = 1e-6;
/// Fit tolerance when either generator is tabulated or numerically induced.
pub const FIT_TOL_NUMERIC: f64 = 1e-3;
/// Normalized Gram determinant below which the fit is degenerate.
pub const DEGENERATE_DET: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub c: f64,
    pub a: f64,
    pub b: f64,
    pub residual: f64,
    pub verdict: bool,
}

/// 200 log-spaced points on `[10⁻², 10²]` plus `u = 1`, where `min(u, 1)` kinks.
pub fn standard_grid() -> Vec<f64> {
    let mut g = log_grid(1e-2, 1e2, 200);
    g.push(1.0);
    g.sort_by(f64::total_cmp);
    g
}

pub fn fit_tolerance(f1: &Generator, f2: &Generator) -> f64 {
    let closed = |f: &Generator| matches!(f, Generator::Closed(_));
    if closed(f1) && closed(f2) {
        FIT_TOL
    } else {
        FIT_TOL_NUMERIC
    }
}

/// Least-squares fit of `f₁ ≈ c·f₂ + a·u + b` on `grid`.
pub fn affine_fit(f1: &Generator, f2: &Generator, grid: &[f64]) -> Result<EquivalenceReport> {
    affine_fit_with(f1, f2, grid, fit_tolerance(f1, f2))
}

pub fn affine_fit_with(f1: &Generator, f2: &Generator, grid: &[f64], tol: f64) -> Result<EquivalenceReport> {
    let y: Vec<f64> = grid.iter().map(|&u| f1.eval(u)).collect();
    let x: Vec<f64> = grid.iter().map(|&u| f2.eval(u)).collect();
    if y.iter().chain(&x).any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("generators must be finite on the fit grid"));
    }
    // columns (f₂(u), u, 1)
    let cols = |k: usize, i: usize| match k {
        0 => x[i],
        1 => grid[i],
        _ => 1.0,
    };
    let mut gram = [[0.0_f64; 3]; 3];
    let mut rhs = [0.0_f64; 3];
    for i in 0..grid.len() {
        for r in 0..3 {
            rhs[r] += cols(r, i) * y[i];
            for s in 0..3 {
                gram[r][s] += cols(r, i) * cols(s, i);
            }
        }
    }
    let det = det3(&gram);
    let scale = gram[0][0] * gram[1][1] * gram[2][2];
    let normalized = if scale > 0.0 { det / scale } else { 0.0 };
    if !(normalized.abs() > DEGENERATE_DET) {
        return Err(Error::DegenerateFit { det: normalized });
    }
    let solve = |k: usize| {
        let mut m = gram;
        for r in 0..3 {
            m[r][k] = rhs[r];
        }
        det3(&m) / det
    };
    let (c, a, b) = (solve(0), solve(1), solve(2));
    let residual = (0..grid.len()).map(|i| (y[i] - c * x[i] - a * grid[i] - b).abs()).fold(0.0, f64::max);
    Ok(EquivalenceReport { c, a, b, residual, verdict: residual <= tol && c > 0.0 })
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Fit against `−min(u, 1)` on the standard grid.
pub fn variational_family_check(f: &Generator) -> Result<EquivalenceReport> {
    affine_fit(f, &Generator::min_capped(1.0), &standard_grid())
}

/// `|f(u) − u·f(1/u)| ≤ 1e−9` on every grid point.
pub fn symmetry_check(f: &Generator, grid: &[f64]) -> bool {
    grid.iter().filter(|&&u| u > 0.0).all(|&u| (f.eval(u) - u * f.eval(1.0 / u)).abs() <= 1e-9)
}

/// 1-coercivity, judged from `f(U)/U` at `U ∈ {10², 10⁴, 10⁶}`: the ratio must
/// keep growing without its increments collapsing, as they do for generators
/// with a finite asymptotic slope.
pub fn coercivity_check(f: &Generator) -> bool {
    let r: Vec<f64> = [1e2, 1e4, 1e6].iter().map(|&u| f.eval(u) / u).collect();
    if r.iter().any(|v| !v.is_finite()) {
        return false;
    }
    let (d1, d2) = (r[1] - r[0], r[2] - r[1]);
    d1 > 1e-3 && d2 > 1e-3 && d2 >= 0.5 * d1
}

/// One prior and its matching divergence parameter, with both quantizers'
/// values under each condition.
#[derive(Debug, Clone, PartialEq)]
pub struct DominancePoint {
    pub q: f64,
    pub c: f64,
    pub bayes1: f64,
    pub bayes2: f64,
    pub div1: f64,
    pub div2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominanceReport {
    pub points: Vec<DominancePoint>,
    /// `R_Bayes(Q₁) ≤ R_Bayes(Q₂)` under every prior.
    pub bayes_1_dominates: bool,
    pub bayes_2_dominates: bool,
    /// `I_f(Q₁) ≥ I_f(Q₂)` for every `f = −min(u, c)`.
    pub divergence_1_dominates: bool,
    pub divergence_2_dominates: bool,
    /// The pointwise orderings of the two conditions coincide everywhere.
    pub agreement: bool,
}

impl DominanceReport {
    pub fn verdict_bayes(&self) -> Dominance {
        Dominance::from_flags(self.bayes_1_dominates, self.bayes_2_dominates)
    }

    pub fn verdict_divergence(&self) -> Dominance {
        Dominance::from_flags(self.divergence_1_dominates, self.divergence_2_dominates)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    Both,
    First,
    Second,
    Neither,
}

impl Dominance {
    fn from_flags(first: bool, second: bool) -> Self {
        match (first, second) {
            (true, true) => Self::Both,
            (true, false) => Self::First,
            (false, true) => Self::Second,
            (false, false) => Self::Neither,
        }
    }
}

/// The priors `0.05, 0.10, …, 0.95`.
pub fn default_q_grid() -> Vec<f64> {
    (1..20).map(|k| k as f64 * 0.05).collect()
}

/// 25 log-spaced values on `[0.1, 10]`.
pub fn default_c_grid() -> Vec<f64> {
    log_grid(0.1, 10.0, 25)
}

/// `−min(u, c)` evaluated on measures built with source priors `(p₀, q₀)` is
/// a negative multiple of the Bayes risk under the prior `q'` with
/// `c = (q'/(1 − q'))·(p₀/q₀)`.
pub fn c_for_prior(qp: f64, src: &SourceSpec) -> f64 {
    qp / (1.0 - qp) * src.priors.p() / src.priors.q()
}

pub fn prior_for_c(c: f64, src: &SourceSpec) -> f64 {
    let k = c * src.priors.q() / src.priors.p();
    k / (1.0 + k)
}

/// Union of the prior grid and the images of the `c` grid, so that every
/// prior has its matching `c` and vice versa.
pub fn closed_prior_grid(q_grid: &[f64], c_grid: &[f64], src: &SourceSpec) -> Vec<f64> {
    let mut qs: Vec<f64> = q_grid.iter().copied().chain(c_grid.iter().map(|&c| prior_for_c(c, src))).collect();
    qs.sort_by(f64::total_cmp);
    qs.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
    qs
}

const ORDER_TOL: f64 = 1e-12;

fn le(x: f64, y: f64) -> bool {
    x <= y + ORDER_TOL * x.abs().max(y.abs()).max(1.0)
}

/// Compare two quantizers of `src` by Bayes risk under each prior and by the
/// divergences `−min(u, c)` at the matching `c`.
pub fn dominance_check(
    q1: &Quantizer,
    q2: &Quantizer,
    src: &SourceSpec,
    q_grid: &[f64],
    c_grid: &[f64],
) -> Result<DominanceReport> {
    let mut points = Vec::new();
    for qp in closed_prior_grid(q_grid, c_grid, src) {
        let c = c_for_prior(qp, src);
        let shifted = src.with_q(qp)?;
        let f = Generator::min_capped(c);
        points.push(DominancePoint {
            q: qp,
            c,
            bayes1: bayes_risk(&induce_measures(q1, &shifted)?),
            bayes2: bayes_risk(&induce_measures(q2, &shifted)?),
            div1: f_divergence(&f, &induce_measures(q1, src)?)?,
            div2: f_divergence(&f, &induce_measures(q2, src)?)?,
        });
    }
    let bayes_1_dominates = points.iter().all(|p| le(p.bayes1, p.bayes2));
    let bayes_2_dominates = points.iter().all(|p| le(p.bayes2, p.bayes1));
    let divergence_1_dominates = points.iter().all(|p| le(p.div2, p.div1));
    let divergence_2_dominates = points.iter().all(|p| le(p.div1, p.div2));
    let agreement = points
        .iter()
        .all(|p| le(p.bayes1, p.bayes2) == le(p.div2, p.div1) && le(p.bayes2, p.bayes1) == le(p.div1, p.div2));
    Ok(DominanceReport {
        points,
        bayes_1_dominates,
        bayes_2_dominates,
        divergence_1_dominates,
        divergence_2_dominates,
        agreement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::BaseGenerator;
    use crate::losses::{f_from_loss, LossKind, SurrogateLoss};
    use approx::assert_abs_diff_eq;

    #[test]
    fn affine_pair_is_recovered() {
        let f1 = Generator::variational();
        let f2 = Generator::affine(BaseGenerator::MinCapped(1.0), 6.0, 2.0, -1.0);
        let grid = standard_grid();
        let r = affine_fit(&f2, &f1, &grid).unwrap();
        assert!(r.verdict);
        assert_abs_diff_eq!(r.c, 3.0, epsilon = 1e-8);
        assert_abs_diff_eq!(r.a, 2.0, epsilon = 1e-8);
        assert_abs_diff_eq!(r.b, -1.0, epsilon = 1e-8);
        let back = affine_fit(&f1, &f2, &grid).unwrap();
        assert_abs_diff_eq!(back.c, 1.0 / 3.0, epsilon = 1e-8);
    }

    #[test]
    fn variational_and_hellinger_differ() {
        let r = affine_fit(&Generator::variational(), &Generator::hellinger(), &log_grid(0.1, 10.0, 200)).unwrap();
        assert!(!r.verdict);
        assert!(r.residual > 0.01);
    }

    #[test]
    fn identity_fit() {
        for name in Generator::CATALOG {
            let f = Generator::from_name(name).unwrap();
            let r = affine_fit(&f, &f, &standard_grid()).unwrap();
            assert!(r.verdict, "{name}");
            assert_abs_diff_eq!(r.c, 1.0, epsilon = 1e-9);
            assert!(r.residual <= 1e-12, "{name}: {}", r.residual);
        }
    }

    #[test]
    fn affine_target_is_degenerate() {
        let r = affine_fit(&Generator::hellinger(), &Generator::linear(2.0, 1.0), &standard_grid());
        assert!(matches!(r, Err(Error::DegenerateFit { .. })));
    }

    #[test]
    fn variational_family_members() {
        let hinge = Generator::induced(SurrogateLoss::catalog(LossKind::Hinge));
        let r = variational_family_check(&hinge).unwrap();
        assert!(r.verdict);
        assert_abs_diff_eq!(r.c, 2.0, epsilon = 1e-6);
        assert_abs_diff_eq!(r.a, 0.0, epsilon = 1e-6);
        assert_abs_diff_eq!(r.b, 0.0, epsilon = 1e-6);
        assert!(!variational_family_check(&Generator::hellinger()).unwrap().verdict);
        let shifted = Generator::affine(BaseGenerator::MinCapped(1.0), 1.0, 5.0, 3.0);
        let r = variational_family_check(&shifted).unwrap();
        assert!(r.verdict);
        assert_abs_diff_eq!(r.c, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r.a, 5.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r.b, 3.0, epsilon = 1e-9);
        // the hinge generator really is −2min(u, 1)
        assert_abs_diff_eq!(f_from_loss(&SurrogateLoss::catalog(LossKind::Hinge), 3.0).unwrap(), -2.0, epsilon = 1e-9);
    }

    #[test]
    fn symmetry_examples() {
        let grid = standard_grid();
        assert!(symmetry_check(&Generator::hellinger(), &grid));
        assert!(symmetry_check(&Generator::symmetric_kl(), &grid));
        assert!(!symmetry_check(&Generator::kl(), &grid));
    }

    #[test]
    fn coercivity_examples() {
        assert!(coercivity_check(&Generator::symmetric_kl()));
        assert!(coercivity_check(&Generator::closed(BaseGenerator::Square)));
        for f in [Generator::variational(), Generator::capacitory(), Generator::hellinger()] {
            assert!(!coercivity_check(&f), "{f:?}");
        }
    }

    #[test]
    fn prior_and_c_maps_are_inverse() {
        let src = SourceSpec::uniform_pair(1.0, 2.0, 4.0, 0.3).unwrap();
        for q in default_q_grid() {
            assert_abs_diff_eq!(prior_for_c(c_for_prior(q, &src), &src), q, epsilon = 1e-14);
        }
    }

    #[test]
    fn identical_quantizers_dominate_each_other() {
        let src = SourceSpec::uniform_pair(1.0, 2.0, 4.0, 0.5).unwrap();
        let q = Quantizer::threshold(1.5).unwrap();
        let r = dominance_check(&q, &q, &src, &default_q_grid(), &default_c_grid()).unwrap();
        assert_eq!(r.verdict_bayes(), Dominance::Both);
        assert_eq!(r.verdict_divergence(), Dominance::Both);
        assert!(r.agreement);
    }
}
