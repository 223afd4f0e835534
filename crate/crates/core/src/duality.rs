//! Convex conjugation and the function `Ψ(β) = f*(−β)`.
//!
//! A divergence generator `f` is realizable by a decreasing convex margin loss
//! exactly when `Ψ` is decreasing and convex, is an involution on
//! `(β₁, β₂)` and has a fixed point `u*` there, where
//! `β₁ = inf{β : Ψ(β) < +∞}` and `β₂ = inf{β : Ψ(β) ≤ inf Ψ}`.
//!
//! Conjugates are evaluated either exactly (closed forms and tables) or by a
//! supremum over a [`GridSpec`] refined by ternary search between the grid
//! neighbours of the best point.

use alloc::boxed::Box;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use crate::error::{Error, Result};
use crate::generator::{Generator, Recession};
use crate::losses::SurrogateLoss;
use crate::minimize::{bisect_boundary, bisect_decreasing_root, linear_grid, ternary_min};

/// Argument tolerance for the bisections on `β`.
pub const BISECT_TOL: f64 = 1e-10;
/// Halving cap for those bisections.
pub const BISECT_MAX_ITER: usize = 200;
/// Relative slack for deciding that `Ψ` has reached its infimum. Where `Ψ`
/// meets its plateau tangentially, `β₂` is only resolved to about the square
/// root of this.
pub const PLATEAU_SLACK: f64 = 1e-15;

/// Abscissae for a numerical conjugate. `lower_edge`/`upper_edge` mark ends
/// that are true domain boundaries, where a maximizer is legitimate.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub points: Vec<f64>,
    pub lower_edge: bool,
    pub upper_edge: bool,
}

impl GridSpec {
    /// `0` followed by `n/2` geometric points on `[1e-8, 1]` and `n/2` linear
    /// points on `(1, hi]`; the lower end is the domain boundary `u = 0`.
    pub fn hybrid(hi: f64, n: usize) -> Self {
        let half = n / 2;
        let mut points = Vec::with_capacity(n + 1);
        points.push(0.0);
        for k in 0..half {
            points.push(1e-8 * (1e8_f64).powf(k as f64 / (half - 1) as f64));
        }
        for k in 1..=half {
            points.push(1.0 + (hi - 1.0) * k as f64 / half as f64);
        }
        Self { points, lower_edge: true, upper_edge: false }
    }

    /// The default primal grid: hybrid on `[0, 10³]` with `2·10⁴` points.
    pub fn default_primal() -> Self {
        Self::hybrid(1e3, 20_000)
    }

    /// A grid on the whole line for conjugating a conjugate: mirrored
    /// geometric spacing around zero out to `±hi`.
    pub fn symmetric(hi: f64, n: usize) -> Self {
        let half = n / 2;
        let mut pos: Vec<f64> =
            (0..half).map(|k| 1e-8 * (hi / 1e-8).powf(k as f64 / (half - 1) as f64)).collect();
        let mut points: Vec<f64> = pos.iter().rev().map(|x| -x).collect();
        points.push(0.0);
        points.append(&mut pos);
        Self { points, lower_edge: false, upper_edge: false }
    }
}

/// How a conjugate is evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum ConjugateMethod {
    Exact,
    Grid(GridSpec),
}

#[derive(Debug, Clone, PartialEq)]
enum Primal {
    Generator(Generator),
    Conjugate(Box<Conjugate>),
}

/// The Legendre transform `f*(v) = sup_u (u·v − f(u))` of a generator (or of
/// another conjugate), evaluated on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct Conjugate {
    primal: Primal,
    method: ConjugateMethod,
}

/// Conjugate of a generator.
pub fn conjugate(f: &Generator, method: ConjugateMethod) -> Result<Conjugate> {
    if method == ConjugateMethod::Exact && !f.has_exact_conjugate() {
        return Err(Error::NoExactConjugate);
    }
    Ok(Conjugate { primal: Primal::Generator(f.clone()), method })
}

impl Conjugate {
    /// Conjugate of this conjugate over the whole line; by lower
    /// semicontinuity and convexity this reproduces the generator.
    pub fn conjugate(&self, grid: GridSpec) -> Conjugate {
        Conjugate { primal: Primal::Conjugate(Box::new(self.clone())), method: ConjugateMethod::Grid(grid) }
    }

    pub fn method(&self) -> &ConjugateMethod {
        &self.method
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.method, ConjugateMethod::Exact)
    }

    pub fn eval(&self, v: f64) -> Result<f64> {
        match (&self.primal, &self.method) {
            (Primal::Generator(f), ConjugateMethod::Exact) => f.exact_conjugate(v),
            (Primal::Generator(f), ConjugateMethod::Grid(grid)) => {
                grid_sup(|u| Ok(f.eval(u)), v, grid, Some(f.recession()))
            }
            (Primal::Conjugate(inner), ConjugateMethod::Grid(grid)) => {
                grid_sup(|x| inner.eval(x), v, grid, None)
            }
            (Primal::Conjugate(_), ConjugateMethod::Exact) => Err(Error::NoExactConjugate),
        }
    }
}

/// `sup_{x ∈ grid} (v·x − fun(x))` refined between the neighbours of the best
/// grid point.
fn grid_sup<F: Fn(f64) -> Result<f64>>(
    fun: F,
    v: f64,
    grid: &GridSpec,
    recession: Option<Recession>,
) -> Result<f64> {
    if let Some(r) = recession {
        if v > r.slope || (v == r.slope && !r.bounded) {
            return Ok(f64::INFINITY);
        }
        if v == r.slope && r.limit.is_finite() {
            return Ok(r.limit);
        }
    }
    let pts = &grid.points;
    let mut best: Option<(usize, f64)> = None;
    for (k, &x) in pts.iter().enumerate() {
        let fx = fun(x)?;
        if !fx.is_finite() {
            continue;
        }
        let val = v * x - fx;
        if best.is_none_or(|(_, b)| val > b) {
            best = Some((k, val));
        }
    }
    let Some((k, val)) = best else {
        return Err(Error::InvalidArgument("function is +inf on the whole grid"));
    };
    let last = pts.len() - 1;
    if (k == 0 && !grid.lower_edge) || (k == last && !grid.upper_edge) {
        return Err(Error::GridTooNarrow { arg: v });
    }
    let lo = pts[k.saturating_sub(1)];
    let hi = pts[(k + 1).min(last)];
    let neg = |x: f64| match fun(x) {
        Ok(fx) if fx.is_finite() => fx - v * x,
        _ => f64::INFINITY,
    };
    let refined = -ternary_min(neg, lo, hi, 1e-14 * hi.abs().max(1e-300)).value;
    Ok(if refined > val { refined } else { val })
}

#[derive(Debug, Clone, PartialEq)]
enum PsiSource {
    /// `Ψ(β) = f*(−β)`.
    Dual(Conjugate),
    /// `Ψ̃(β) = φ(−φ⁻¹(β))`.
    Loss(Box<SurrogateLoss>),
}

/// `Ψ` together with `β₁`, `β₂` and the fixed point `u*`.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiFunction {
    source: PsiSource,
    beta1: f64,
    beta2: f64,
    u_star: f64,
}

impl PsiFunction {
    pub fn eval(&self, beta: f64) -> Result<f64> {
        match &self.source {
            PsiSource::Dual(conj) => conj.eval(-beta),
            PsiSource::Loss(phi) => Ok(psi_tilde_eval(phi, beta)),
        }
    }

    pub fn beta1(&self) -> f64 {
        self.beta1
    }

    pub fn beta2(&self) -> f64 {
        self.beta2
    }

    pub fn u_star(&self) -> f64 {
        self.u_star
    }

    /// True when evaluation cannot fail (no grid approximation involved).
    pub fn is_exact(&self) -> bool {
        match &self.source {
            PsiSource::Dual(conj) => conj.is_exact(),
            PsiSource::Loss(_) => true,
        }
    }

    /// A finite window for sampling: `(β₁, β₂)` with infinite ends replaced
    /// by `u* ∓ span`.
    pub fn window(&self, span: f64) -> (f64, f64) {
        let lo = if self.beta1.is_finite() { self.beta1 } else { self.u_star - span };
        let hi = if self.beta2.is_finite() { self.beta2 } else { self.u_star + span };
        (lo, hi)
    }
}

/// `Ψ(β) = f*(−β)` using the exact conjugate when one exists and the default
/// primal grid otherwise.
pub fn psi_from_f(f: &Generator) -> Result<PsiFunction> {
    let method = if f.has_exact_conjugate() {
        ConjugateMethod::Exact
    } else {
        ConjugateMethod::Grid(GridSpec::default_primal())
    };
    psi_from_f_with(f, method)
}

pub fn psi_from_f_with(f: &Generator, method: ConjugateMethod) -> Result<PsiFunction> {
    let conj = conjugate(f, method)?;
    let eval = |b: f64| conj.eval(-b);
    let (beta1, beta2) = match f.exact_psi_bounds() {
        Some(bounds) => bounds,
        None => locate_bounds(&eval)?,
    };
    let u_star = fixed_point(&eval, beta1, beta2)?;
    Ok(PsiFunction { source: PsiSource::Dual(conj), beta1, beta2, u_star })
}

/// `β₁` by bisection on finiteness, `β₂` by bisection on reaching `inf Ψ`.
/// Evaluation errors count as finite values.
pub fn locate_bounds<E: Fn(f64) -> Result<f64>>(eval: &E) -> Result<(f64, f64)> {
    let is_finite = |b: f64| !matches!(eval(b), Ok(v) if v == f64::INFINITY);
    let far = (2.0_f64).powi(40);

    let mut anchor = None;
    for k in 0..=40 {
        let s = (2.0_f64).powi(k) - 1.0;
        for b in [s, -s] {
            if is_finite(b) {
                anchor = Some(b);
                break;
            }
        }
        if anchor.is_some() {
            break;
        }
    }
    let anchor = anchor.ok_or(Error::InvalidArgument("psi is +inf everywhere"))?;

    let mut step = 1.0;
    let mut bad = anchor - step;
    while is_finite(bad) && bad > -far {
        step *= 2.0;
        bad = anchor - step;
    }
    let beta1 = if is_finite(bad) {
        f64::NEG_INFINITY
    } else {
        bisect_boundary(is_finite, bad, anchor, BISECT_TOL, BISECT_MAX_ITER)
    };

    let value = |b: f64| eval(b).ok().filter(|v| v.is_finite());
    let start = if beta1.is_finite() { beta1 } else { anchor };
    let top = start + far;
    let beta2 = match (value(top), value(start + far / 2.0)) {
        (Some(inf), Some(half)) if half <= inf + PLATEAU_SLACK * inf.abs().max(1.0) => {
            let level = inf + PLATEAU_SLACK * inf.abs().max(1.0);
            let reached = |b: f64| value(b).is_some_and(|v| v <= level);
            let mut good = start + 1.0;
            while !reached(good) {
                good = start + 2.0 * (good - start);
            }
            bisect_boundary(reached, start, good, BISECT_TOL, BISECT_MAX_ITER)
        }
        _ => f64::INFINITY,
    };
    Ok((beta1, beta2))
}

/// Fixed point of `Ψ` on `(β₁, β₂)` by bisection on the decreasing map `Ψ(β) − β`.
fn fixed_point<E: Fn(f64) -> Result<f64>>(eval: &E, beta1: f64, beta2: f64) -> Result<f64> {
    if !(beta1 < beta2) {
        return Err(Error::NoFixedPoint);
    }
    let gap = |b: f64| eval(b).map(|v| v - b);
    let far = (2.0_f64).powi(40);

    let lo = if beta1.is_finite() {
        beta1
    } else {
        let mut lo = -1.0;
        while gap(lo)? <= 0.0 {
            lo *= 2.0;
            if lo < -far {
                return Err(Error::NoFixedPoint);
            }
        }
        lo
    };
    if gap(lo)? < 0.0 {
        return Err(Error::NoFixedPoint);
    }
    let hi = if beta2.is_finite() {
        beta2
    } else {
        let mut hi = lo.max(0.0) + 1.0;
        while gap(hi)? > 0.0 {
            hi = lo.max(0.0) + 2.0 * (hi - lo.max(0.0));
            if hi > far {
                return Err(Error::NoFixedPoint);
            }
        }
        hi
    };
    if gap(hi)? > 0.0 {
        return Err(Error::NoFixedPoint);
    }
    // propagate grid failures met during the search
    let mut failure = None;
    let root = bisect_decreasing_root(
        |b| match gap(b) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        lo,
        hi,
        BISECT_TOL,
        BISECT_MAX_ITER,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    if !(root > beta1 && root < beta2) {
        return Err(Error::NoFixedPoint);
    }
    Ok(root)
}

/// One line of a [`ConditionReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionRow {
    pub condition: &'static str,
    pub pass: bool,
    /// `β` at which the worst residual was seen.
    pub witness_beta: Option<f64>,
    pub residual: f64,
}

/// Outcome of checking the three realizability conditions on `Ψ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub rows: Vec<ConditionRow>,
}

impl ConditionReport {
    pub fn decreasing_convex(&self) -> bool {
        self.rows[0].pass
    }

    pub fn involution(&self) -> bool {
        self.rows[1].pass
    }

    pub fn fixed_point(&self) -> bool {
        self.rows[2].pass
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

const CHECK_POINTS: usize = 401;
const CHECK_SPAN: f64 = 10.0;

/// Check (i) decreasing and convex, (ii) `Ψ(Ψ(β)) = β` on the interior of
/// `(β₁, β₂)`, (iii) `Ψ(u*) = u*` with `β₁ < u* < β₂`, all within `tol`.
pub fn check_realizability(psi: &PsiFunction, tol: f64) -> ConditionReport {
    let (lo, hi) = psi.window(CHECK_SPAN);
    ConditionReport {
        rows: alloc::vec![
            check_decreasing_convex(psi, lo, hi, tol),
            check_involution(psi, lo, hi, tol),
            check_fixed_point(psi, tol),
        ],
    }
}

fn check_decreasing_convex(psi: &PsiFunction, lo: f64, hi: f64, tol: f64) -> ConditionRow {
    // (lo, hi], skipping the left end where Ψ may jump to +inf
    let grid: Vec<f64> = linear_grid(lo, hi, CHECK_POINTS).into_iter().skip(1).collect();
    let mut worst = (0.0_f64, None);
    let mut pass = true;
    let values: Vec<Option<f64>> = grid.iter().map(|&b| psi.eval(b).ok()).collect();
    for k in 0..grid.len() {
        let Some(v0) = values[k] else {
            pass = false;
            worst = (f64::INFINITY, Some(grid[k]));
            continue;
        };
        if k + 1 < grid.len() {
            if let Some(v1) = values[k + 1] {
                let rise = v1 - v0;
                if rise > worst.0 {
                    worst = (rise, Some(grid[k + 1]));
                }
                if rise > tol {
                    pass = false;
                }
            }
        }
        if k + 2 < grid.len() {
            if let (Some(v2), Ok(mid)) = (values[k + 2], psi.eval(grid[k + 1])) {
                if v0.is_finite() && v2.is_finite() {
                    let excess = mid - 0.5 * (v0 + v2);
                    if excess > worst.0 {
                        worst = (excess, Some(grid[k + 1]));
                    }
                    if excess > tol {
                        pass = false;
                    }
                }
            }
        }
    }
    ConditionRow { condition: "decreasing_convex", pass, witness_beta: worst.1, residual: worst.0.max(0.0) }
}

fn check_involution(psi: &PsiFunction, lo: f64, hi: f64, tol: f64) -> ConditionRow {
    let delta = 1e-3 * (hi - lo);
    let grid = linear_grid(lo + delta, hi - delta, CHECK_POINTS);
    let mut worst = (0.0_f64, None);
    for b in grid {
        let r = match psi.eval(b).and_then(|v| psi.eval(v)) {
            Ok(v) => (v - b).abs(),
            Err(_) => f64::INFINITY,
        };
        let r = if r.is_nan() { f64::INFINITY } else { r };
        if r > worst.0 {
            worst = (r, Some(b));
        }
    }
    ConditionRow { condition: "involution", pass: worst.0 <= tol, witness_beta: worst.1, residual: worst.0 }
}

fn check_fixed_point(psi: &PsiFunction, tol: f64) -> ConditionRow {
    let u = psi.u_star;
    let residual = psi.eval(u).map(|v| (v - u).abs()).unwrap_or(f64::INFINITY);
    let inside = u > psi.beta1 && u < psi.beta2;
    ConditionRow { condition: "fixed_point", pass: inside && residual <= tol, witness_beta: Some(u), residual }
}

/// `φ⁻¹(β) = inf{α : φ(α) ≤ β}`, `+∞` when the set is empty.
///
/// The sublevel sets of a convex loss are intervals, so the left end is found
/// by bisection between a point inside the set and one to its left.
pub fn phi_inverse(phi: &SurrogateLoss, beta: f64) -> f64 {
    let inf = phi.infimum();
    let alpha_star = phi.alpha_star();
    if beta < inf || (beta == inf && !alpha_star.is_finite()) {
        return f64::INFINITY;
    }
    let far = (2.0_f64).powi(60);
    let inside = |a: f64| phi.eval(a) <= beta;
    let good = if alpha_star.is_finite() && inside(alpha_star) {
        alpha_star
    } else {
        let mut g = 0.0;
        let mut step = 1.0;
        while !inside(g) {
            g = step;
            step *= 2.0;
            if g > far {
                return f64::INFINITY;
            }
        }
        g
    };
    let mut step = 1.0;
    let mut bad = good - step;
    while inside(bad) {
        step *= 2.0;
        bad = good - step;
        if bad < -far {
            return f64::NEG_INFINITY;
        }
    }
    bisect_boundary(inside, bad, good, 1e-13 * good.abs().max(1.0), 400)
}

fn psi_tilde_eval(phi: &SurrogateLoss, beta: f64) -> f64 {
    let a = phi_inverse(phi, beta);
    if a.is_finite() {
        phi.eval(-a)
    } else {
        f64::INFINITY
    }
}

/// `Ψ̃(β) = φ(−φ⁻¹(β))` with `β̃₁ = φ(α*)` and `β̃₂ = φ(−α*)`.
pub fn psi_tilde_from_loss(phi: &SurrogateLoss) -> Result<PsiFunction> {
    let alpha_star = phi.alpha_star();
    let (beta1, beta2) = if alpha_star.is_finite() {
        (phi.eval(alpha_star), phi.eval(-alpha_star))
    } else {
        (phi.infimum(), f64::INFINITY)
    };
    let eval = |b: f64| Ok(psi_tilde_eval(phi, b));
    let u_star = fixed_point(&eval, beta1, beta2)?;
    Ok(PsiFunction { source: PsiSource::Loss(Box::new(phi.clone())), beta1, beta2, u_star })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::BaseGenerator;
    use crate::losses::LossKind;
    use approx::assert_abs_diff_eq;

    fn psi(f: &Generator) -> PsiFunction {
        psi_from_f(f).unwrap()
    }

    #[test]
    fn grid_conjugate_at_the_recession_slope() {
        // sup_u 4u/(u+1) = 4 is only approached as u grows
        let p = psi_from_f_with(&Generator::triangular(), ConjugateMethod::Grid(GridSpec::default_primal())).unwrap();
        assert_eq!(p.eval(0.0).unwrap(), 4.0);
        assert_abs_diff_eq!(p.eval(1.0).unwrap(), 1.0, epsilon = 1e-9);
        let v = psi_from_f_with(&Generator::variational(), ConjugateMethod::Grid(GridSpec::default_primal())).unwrap();
        assert_eq!(v.eval(0.0).unwrap(), 2.0);
    }

    #[test]
    fn variational_psi() {
        let p = psi(&Generator::variational());
        assert_abs_diff_eq!(p.eval(0.5).unwrap(), 1.5, epsilon = 1e-15);
        assert_eq!(p.eval(-0.1).unwrap(), f64::INFINITY);
        assert_eq!(p.eval(3.0).unwrap(), 0.0);
        assert_eq!((p.beta1(), p.beta2()), (0.0, 2.0));
        assert_abs_diff_eq!(p.u_star(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn hellinger_psi() {
        let p = psi(&Generator::hellinger());
        assert_abs_diff_eq!(p.eval(2.0).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(p.u_star(), 1.0, epsilon = 1e-9);
        assert_eq!(p.beta2(), f64::INFINITY);
    }

    #[test]
    fn triangular_and_capacitory_psi() {
        let t = psi(&Generator::triangular());
        assert_abs_diff_eq!(t.u_star(), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(t.eval(2.25).unwrap(), 0.25, epsilon = 1e-14);
        assert_eq!((t.beta1(), t.beta2()), (0.0, 4.0));
        let c = psi(&Generator::capacitory());
        assert_abs_diff_eq!(c.u_star(), core::f64::consts::LN_2, epsilon = 1e-9);
        let b: f64 = 0.7;
        assert_abs_diff_eq!(c.eval(b).unwrap(), b - (b.exp() - 1.0).ln(), epsilon = 1e-14);
    }

    #[test]
    fn symmetric_kl_psi_is_an_involution_through_zero() {
        let p = psi(&Generator::symmetric_kl());
        assert_abs_diff_eq!(p.u_star(), 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(p.eval(0.0).unwrap(), 0.0, epsilon = 1e-14);
        for b in [-3.0, -0.5, 0.25, 2.0, 7.0] {
            let back = p.eval(p.eval(b).unwrap()).unwrap();
            assert_abs_diff_eq!(back, b, epsilon = 1e-9);
        }
        let r = check_realizability(&p, 1e-8);
        assert!(r.all_pass(), "{r:?}");
    }

    #[test]
    fn linear_generator_has_no_fixed_point() {
        assert_eq!(psi_from_f(&Generator::linear(1.0, 0.0)), Err(Error::NoFixedPoint));
    }

    #[test]
    fn kl_fails_involution_only() {
        let r = check_realizability(&psi(&Generator::kl()), 1e-6);
        assert!(r.decreasing_convex());
        assert!(!r.involution());
        assert!(r.fixed_point());
    }

    #[test]
    fn hellinger_and_hinge_pass_all_conditions() {
        for f in [Generator::hellinger(), Generator::variational(), Generator::triangular()] {
            let r = check_realizability(&psi(&f), 1e-9);
            assert!(r.all_pass(), "{f:?}: {r:?}");
        }
    }

    #[test]
    fn grid_conjugate_matches_exact() {
        let f = Generator::hellinger();
        let grid = conjugate(&f, ConjugateMethod::Grid(GridSpec::default_primal())).unwrap();
        for v in [-0.1, -0.5, -2.0, -10.0] {
            assert_abs_diff_eq!(grid.eval(v).unwrap(), f.exact_conjugate(v).unwrap(), epsilon = 1e-8);
        }
        assert_eq!(grid.eval(0.0).unwrap(), f64::INFINITY);
        assert!(matches!(grid.eval(-1e-3), Err(Error::GridTooNarrow { .. })));
    }

    #[test]
    fn bisection_bounds_agree_with_closed_forms() {
        for f in [Generator::variational(), Generator::triangular(), Generator::hellinger()] {
            let conj = conjugate(&f, ConjugateMethod::Exact).unwrap();
            let (b1, b2) = locate_bounds(&|b: f64| conj.eval(-b)).unwrap();
            let (e1, e2) = f.exact_psi_bounds().unwrap();
            assert_abs_diff_eq!(b1, e1, epsilon = 1e-9);
            if e2.is_finite() {
                // triangular meets its plateau quadratically
                assert_abs_diff_eq!(b2, e2, epsilon = 1e-6);
            } else {
                assert_eq!(b2, f64::INFINITY);
            }
        }
        let scaled = Generator::affine(BaseGenerator::MinCapped(1.0), 3.0, 0.5, 0.0);
        let conj = conjugate(&scaled, ConjugateMethod::Exact).unwrap();
        let (b1, b2) = locate_bounds(&|b: f64| conj.eval(-b)).unwrap();
        assert_abs_diff_eq!(b1, -0.5, epsilon = 1e-9);
        assert_abs_diff_eq!(b2, 2.5, epsilon = 1e-9);
    }

    #[test]
    fn phi_inverse_examples() {
        let hinge = SurrogateLoss::catalog(LossKind::Hinge);
        assert_abs_diff_eq!(phi_inverse(&hinge, 0.5), 0.5, epsilon = 1e-12);
        assert_eq!(phi_inverse(&hinge, -0.1), f64::INFINITY);
        let exp = SurrogateLoss::catalog(LossKind::Exponential);
        assert_abs_diff_eq!(phi_inverse(&exp, 1.0), 0.0, epsilon = 1e-12);
        assert_eq!(phi_inverse(&exp, 0.0), f64::INFINITY);
    }

    #[test]
    fn psi_tilde_of_catalog_losses() {
        let hinge = psi_tilde_from_loss(&SurrogateLoss::catalog(LossKind::Hinge)).unwrap();
        let exact = psi(&Generator::variational());
        for b in [0.0, 0.3, 1.0, 1.9, 2.0, 2.5] {
            assert_abs_diff_eq!(hinge.eval(b).unwrap(), exact.eval(b).unwrap(), epsilon = 1e-10);
        }
        assert_eq!(hinge.eval(-0.01).unwrap(), f64::INFINITY);
        assert_eq!((hinge.beta1(), hinge.beta2()), (0.0, 2.0));

        let exp = psi_tilde_from_loss(&SurrogateLoss::catalog(LossKind::Exponential)).unwrap();
        for b in [0.1, 0.5, 1.0, 4.0] {
            assert_abs_diff_eq!(exp.eval(b).unwrap(), 1.0 / b, epsilon = 1e-9);
        }

        let ls = psi_tilde_from_loss(&SurrogateLoss::catalog(LossKind::LeastSquares)).unwrap();
        for b in [0.0, 0.5, 1.0, 2.0, 3.9] {
            assert_abs_diff_eq!(ls.eval(b).unwrap(), (2.0 - b.sqrt()).powi(2), epsilon = 1e-9);
        }
        assert_abs_diff_eq!(ls.u_star(), 1.0, epsilon = 1e-9);
    }
}
