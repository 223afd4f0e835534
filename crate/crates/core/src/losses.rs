//! Margin losses `φ(α)`, the map `φ ↦ f`, and the converse construction of a
//! loss from a generator `f` and a link `g`.
//!
//! The forward map is `f(u) = −inf_α (φ(−α) + u·φ(α))`. The converse takes
//! `Ψ(β) = f*(−β)` with fixed point `u*` and sets
//!
//! ```text
//! φ(α) = u*                 α = 0
//!        Ψ(g(α + u*))       α > 0
//!        g(−α + u*)         α < 0
//! ```

use alloc::boxed::Box;
use alloc::string::String;

#[allow(unused_imports)]
use num_traits::Float;
use crate::duality::{check_realizability, psi_from_f, PsiFunction};
use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::minimize::{bisect_boundary, grid_min, linear_grid, ternary_min, Minimum};

/// Margin bracket for the inner minimization of the forward map.
pub const ALPHA_BRACKET: f64 = 50.0;
/// Argument tolerance of the convex (ternary) path.
pub const ALPHA_TOL: f64 = 1e-10;
/// Grid size of the non-convex path.
pub const NONCONVEX_GRID: usize = 100_001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LossKind {
    ZeroOne,
    Hinge,
    Exponential,
    Logistic,
    LeastSquares,
    SymKl,
    /// `(2 − e^α)₊` for `α ≤ 0`, `e^{−α}` for `α > 0`: decreasing, not convex,
    /// and it still induces the variational generator.
    NonconvexExp,
}

impl LossKind {
    pub const ALL: [LossKind; 7] = [
        Self::ZeroOne,
        Self::Hinge,
        Self::Exponential,
        Self::Logistic,
        Self::LeastSquares,
        Self::SymKl,
        Self::NonconvexExp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::ZeroOne => "zero_one",
            Self::Hinge => "hinge",
            Self::Exponential => "exponential",
            Self::Logistic => "logistic",
            Self::LeastSquares => "least_squares",
            Self::SymKl => "sym_kl",
            Self::NonconvexExp => "nonconvex_exp",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn eval(self, a: f64) -> f64 {
        match self {
            // sign(0) = −1, so a zero margin counts as an error
            Self::ZeroOne => {
                if a > 0.0 {
                    0.0
                } else {
                    1.0
                }
            }
            Self::Hinge => (1.0 - a).max(0.0),
            Self::Exponential => (-a).exp(),
            Self::Logistic => {
                // log(1 + e^{−a}) without overflow for very negative a
                if a < 0.0 {
                    -a + a.exp().ln_1p()
                } else {
                    (-a).exp().ln_1p()
                }
            }
            Self::LeastSquares => (1.0 - a) * (1.0 - a),
            Self::SymKl => (-a).exp_m1() - a,
            Self::NonconvexExp => {
                if a <= 0.0 {
                    (2.0 - a.exp()).max(0.0)
                } else {
                    (-a).exp()
                }
            }
        }
    }

    pub fn is_convex(self) -> bool {
        !matches!(self, Self::ZeroOne | Self::NonconvexExp)
    }

    pub fn is_decreasing(self) -> bool {
        !matches!(self, Self::LeastSquares)
    }

    pub fn alpha_star(self) -> f64 {
        match self {
            Self::ZeroOne => 0.0,
            Self::Hinge | Self::LeastSquares => 1.0,
            Self::Exponential | Self::Logistic | Self::SymKl | Self::NonconvexExp => f64::INFINITY,
        }
    }

    pub fn infimum(self) -> f64 {
        match self {
            Self::SymKl => f64::NEG_INFINITY,
            _ => 0.0,
        }
    }

    /// The closed-form generator this loss induces.
    pub fn generator(self) -> Generator {
        match self {
            Self::ZeroOne => Generator::min_capped(1.0),
            Self::Hinge | Self::NonconvexExp => Generator::variational(),
            Self::Exponential => Generator::hellinger(),
            Self::Logistic => Generator::capacitory(),
            Self::LeastSquares => Generator::triangular(),
            Self::SymKl => Generator::symmetric_kl(),
        }
    }

    /// The link that rebuilds this loss from its generator, where one exists.
    pub fn link(self) -> Option<GLink> {
        Some(match self {
            Self::Hinge => GLink::Identity,
            Self::Exponential => GLink::ExpShift,
            Self::LeastSquares => GLink::Square,
            Self::Logistic => GLink::Logistic,
            Self::SymKl => GLink::SymKl,
            Self::ZeroOne | Self::NonconvexExp => return None,
        })
    }
}

/// Link functions `g` on `[u*, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GLink {
    /// `u`
    Identity,
    /// `e^{u−1}`
    ExpShift,
    /// `u²`
    Square,
    /// `log(1 + e^u/2)`
    Logistic,
    /// `e^u + u − 1`
    SymKl,
    /// `u + (u − 2)₊²`: the identity on `[1, 2]`, then convex growth.
    IdentityThenQuadratic,
}

impl GLink {
    pub fn eval(self, u: f64) -> f64 {
        match self {
            Self::Identity => u,
            Self::ExpShift => (u - 1.0).exp(),
            Self::Square => u * u,
            Self::Logistic => (0.5 * u.exp()).ln_1p(),
            Self::SymKl => u.exp_m1() + u,
            Self::IdentityThenQuadratic => u + (u - 2.0).max(0.0).powi(2),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Identity => "u",
            Self::ExpShift => "exp(u-1)",
            Self::Square => "u^2",
            Self::Logistic => "log(1+exp(u)/2)",
            Self::SymKl => "exp(u)+u-1",
            Self::IdentityThenQuadratic => "u+(u-2)_+^2",
        }
    }

    /// `g(u*) = u*`, a positive right slope at `u*`, and monotonicity and
    /// midpoint convexity on `[u*, u* + 20]`.
    pub fn validate(self, u_star: f64) -> Result<()> {
        if (self.eval(u_star) - u_star).abs() > 1e-12 * u_star.abs().max(1.0) + 1e-9 {
            return Err(Error::BadLink("g(u*) != u*"));
        }
        let h = 1e-6;
        if (self.eval(u_star + h) - self.eval(u_star)) / h <= 0.0 {
            return Err(Error::BadLink("right slope at u* is not positive"));
        }
        let grid = linear_grid(u_star, u_star + 20.0, 2001);
        for w in grid.windows(2) {
            let (a, b) = (self.eval(w[0]), self.eval(w[1]));
            if !(b > a) {
                return Err(Error::BadLink("not increasing"));
            }
            let mid = self.eval(0.5 * (w[0] + w[1]));
            if mid > 0.5 * (a + b) + 1e-12 * b.abs().max(1.0) {
                return Err(Error::BadLink("not convex"));
            }
        }
        Ok(())
    }

    /// `g⁻¹(y)` on `[u*, ∞)`, by bisection.
    fn inverse(self, y: f64, u_star: f64) -> f64 {
        if !y.is_finite() {
            return y;
        }
        let mut hi = u_star + 1.0;
        while self.eval(hi) < y {
            hi = u_star + 2.0 * (hi - u_star);
            if hi > 1e300 {
                return f64::INFINITY;
            }
        }
        bisect_boundary(|u| self.eval(u) >= y, u_star, hi, 1e-13 * hi.abs().max(1.0), 400)
    }
}

/// A loss given by a plain function, for test vectors outside the catalog.
#[derive(Debug, Clone, Copy)]
pub struct CustomLoss {
    pub name: &'static str,
    pub eval: fn(f64) -> f64,
    pub convex: bool,
    pub decreasing: bool,
    pub alpha_star: f64,
    pub infimum: f64,
}

impl PartialEq for CustomLoss {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.convex == other.convex
            && self.decreasing == other.decreasing
            && self.alpha_star.to_bits() == other.alpha_star.to_bits()
            && self.infimum.to_bits() == other.infimum.to_bits()
    }
}

/// A loss built from `(f, g)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstructedLoss {
    generator: Generator,
    psi: PsiFunction,
    link: GLink,
    convex: bool,
    alpha_star: f64,
    infimum: f64,
}

impl ConstructedLoss {
    pub fn eval(&self, a: f64) -> f64 {
        let u = self.psi.u_star();
        if a == 0.0 {
            u
        } else if a > 0.0 {
            self.psi.eval(self.link.eval(a + u)).unwrap_or(f64::INFINITY)
        } else {
            self.link.eval(-a + u)
        }
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn psi(&self) -> &PsiFunction {
        &self.psi
    }

    pub fn link(&self) -> GLink {
        self.link
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SurrogateLoss {
    Catalog(LossKind),
    Constructed(Box<ConstructedLoss>),
    Custom(CustomLoss),
}

impl SurrogateLoss {
    pub fn catalog(kind: LossKind) -> Self {
        Self::Catalog(kind)
    }

    pub fn from_name(name: &str) -> Option<Self> {
        LossKind::from_name(name).map(Self::Catalog)
    }

    pub fn eval(&self, a: f64) -> f64 {
        match self {
            Self::Catalog(k) => k.eval(a),
            Self::Constructed(c) => c.eval(a),
            Self::Custom(c) => (c.eval)(a),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Self::Catalog(k) => k.name(),
            Self::Constructed(_) => "constructed",
            Self::Custom(c) => c.name,
        }
    }

    pub fn kind(&self) -> Option<LossKind> {
        match self {
            Self::Catalog(k) => Some(*k),
            _ => None,
        }
    }

    pub fn is_convex(&self) -> bool {
        match self {
            Self::Catalog(k) => k.is_convex(),
            Self::Constructed(c) => c.convex,
            Self::Custom(c) => c.convex,
        }
    }

    pub fn is_decreasing(&self) -> bool {
        match self {
            Self::Catalog(k) => k.is_decreasing(),
            Self::Constructed(_) => true,
            Self::Custom(c) => c.decreasing,
        }
    }

    /// `α* = inf{α : φ(α) = inf φ}`, `+∞` when the infimum is not attained.
    pub fn alpha_star(&self) -> f64 {
        match self {
            Self::Catalog(k) => k.alpha_star(),
            Self::Constructed(c) => c.alpha_star,
            Self::Custom(c) => c.alpha_star,
        }
    }

    pub fn infimum(&self) -> f64 {
        match self {
            Self::Catalog(k) => k.infimum(),
            Self::Constructed(c) => c.infimum,
            Self::Custom(c) => c.infimum,
        }
    }

    /// `φ(0)`, which equals `u*` of the induced generator.
    pub fn u_star(&self) -> f64 {
        self.eval(0.0)
    }

    /// The closed-form generator of a catalog loss.
    pub fn closed_generator(&self) -> Option<Generator> {
        match self {
            Self::Catalog(k) => Some(k.generator()),
            Self::Constructed(c) => Some(c.generator.clone()),
            Self::Custom(_) => None,
        }
    }
}

/// Minimize `obj` over margins in `[−bracket, bracket]`, by ternary search for
/// convex losses and by a dense grid otherwise.
pub(crate) fn minimize_margin<F: Fn(f64) -> f64>(convex: bool, obj: F, bracket: f64) -> Minimum {
    if convex {
        ternary_min(obj, -bracket, bracket, ALPHA_TOL)
    } else {
        grid_min(obj, -bracket, bracket, NONCONVEX_GRID, ALPHA_TOL)
    }
}

/// `f(u) = −inf_α (φ(−α) + u·φ(α))`.
pub fn f_from_loss(phi: &SurrogateLoss, u: f64) -> Result<f64> {
    if !(u >= 0.0) {
        return Err(Error::InvalidArgument("u must be nonnegative"));
    }
    let obj = |a: f64| {
        let (l, r) = (phi.eval(-a), phi.eval(a));
        // 0·(+∞) is taken as 0 so that u = 0 only sees φ(−α)
        if u == 0.0 {
            l
        } else {
            l + u * r
        }
    };
    let m = minimize_margin(phi.is_convex(), obj, ALPHA_BRACKET);
    if m.value == f64::NEG_INFINITY {
        return Err(Error::Unbounded);
    }
    // a minimizer pinned to the bracket with further decrease outside it
    let edge = ALPHA_BRACKET - 1e-6;
    if m.arg.abs() >= edge {
        let beyond = obj(2.0 * ALPHA_BRACKET * m.arg.signum());
        if beyond < m.value - 1e-9 * m.value.abs().max(1.0) {
            return Err(Error::Unbounded);
        }
    }
    Ok(-m.value)
}

/// Build `φ` from `f` and `g`.
pub fn loss_from_f(f: &Generator, g: GLink) -> Result<SurrogateLoss> {
    let psi = psi_from_f(f).map_err(|e| match e {
        Error::NoFixedPoint => Error::UnrealizableDivergence("psi has no fixed point"),
        other => other,
    })?;
    let tol = if psi.is_exact() { 1e-8 } else { 1e-4 };
    let report = check_realizability(&psi, tol);
    if !report.decreasing_convex() {
        return Err(Error::UnrealizableDivergence("psi is not decreasing and convex"));
    }
    if !report.involution() {
        return Err(Error::UnrealizableDivergence("psi is not an involution"));
    }
    if !report.fixed_point() {
        return Err(Error::UnrealizableDivergence("psi has no fixed point"));
    }
    let u_star = psi.u_star();
    g.validate(u_star)?;

    let beta2 = psi.beta2();
    let (alpha_star, infimum) = if beta2.is_finite() {
        (g.inverse(beta2, u_star) - u_star, psi.eval(beta2)?)
    } else {
        // Ψ(β) → −f(0) as β → ∞
        (f64::INFINITY, -f.eval(0.0))
    };
    let mut loss = ConstructedLoss { generator: f.clone(), psi, link: g, convex: true, alpha_star, infimum };
    loss.convex = midpoint_convex(|a| loss.eval(a), -10.0, 10.0, 2001, 1e-9);
    Ok(SurrogateLoss::Constructed(Box::new(loss)))
}

fn midpoint_convex<F: Fn(f64) -> f64>(phi: F, lo: f64, hi: f64, n: usize, tol: f64) -> bool {
    let grid = linear_grid(lo, hi, n);
    grid.windows(3).all(|w| {
        let (a, m, b) = (phi(w[0]), phi(w[1]), phi(w[2]));
        !(a.is_finite() && b.is_finite()) || m <= 0.5 * (a + b) + tol * m.abs().max(1.0)
    })
}

/// Sampled convexity on `[lo, hi]`.
pub fn is_midpoint_convex(phi: &SurrogateLoss, lo: f64, hi: f64, n: usize) -> bool {
    midpoint_convex(|a| phi.eval(a), lo, hi, n, 1e-9)
}

/// A convex loss is calibrated iff it is differentiable at 0 with negative
/// slope. One-sided quotients are taken at `h ∈ {1e−3, 1e−5, 1e−7}`; they
/// must agree within `1e−6` at the smallest step, the symmetric quotients
/// must have settled between the last two steps, and both must be negative.
pub fn check_calibration_convex(phi: &SurrogateLoss) -> Result<bool> {
    if !phi.is_convex() {
        return Err(Error::NotConvex);
    }
    let at0 = phi.eval(0.0);
    let quotients = [1e-3, 1e-5, 1e-7].map(|h| {
        let left = (at0 - phi.eval(-h)) / h;
        let right = (phi.eval(h) - at0) / h;
        (left, right)
    });
    let (left, right) = quotients[2];
    let sym = |k: usize| 0.5 * (quotients[k].0 + quotients[k].1);
    let agree = (left - right).abs() <= 1e-6 && (sym(1) - sym(2)).abs() <= 1e-6;
    Ok(agree && left < 0.0 && right < 0.0)
}

/// Sampled classification calibration: for each `(a, b)` with `a ≠ b`, the
/// infimum of `a·φ(α) + b·φ(−α)` over margins of the wrong sign must exceed
/// the infimum over the rest. Both infima are taken over a dense grid.
pub fn check_calibration_general(phi: &SurrogateLoss, pairs: &[(f64, f64)]) -> bool {
    let grid = linear_grid(-ALPHA_BRACKET, ALPHA_BRACKET, NONCONVEX_GRID);
    let values: alloc::vec::Vec<(f64, f64)> = grid.iter().map(|&a| (phi.eval(a), phi.eval(-a))).collect();
    pairs.iter().filter(|(a, b)| a != b).all(|&(a, b)| {
        let mut wrong = f64::INFINITY;
        let mut right = f64::INFINITY;
        for (&alpha, &(pa, pm)) in grid.iter().zip(&values) {
            let v = a * pa + b * pm;
            if alpha * (a - b) < 0.0 {
                wrong = wrong.min(v);
            } else {
                right = right.min(v);
            }
        }
        wrong > right + 1e-12 * right.abs().max(1.0)
    })
}

/// `φ(α* − ε) ≥ φ(α* + ε)` for every sampled `ε`; vacuous when `α* = +∞`.
pub fn check_a3(phi: &SurrogateLoss, eps_grid: &[f64]) -> bool {
    let s = phi.alpha_star();
    if !s.is_finite() {
        return true;
    }
    eps_grid.iter().all(|&e| {
        let (lo, hi) = (phi.eval(s - e), phi.eval(s + e));
        lo >= hi - 1e-12 * hi.abs().max(1.0)
    })
}

/// Human-readable form of a catalog loss.
pub fn formula(kind: LossKind) -> String {
    String::from(match kind {
        LossKind::ZeroOne => "1[a <= 0]",
        LossKind::Hinge => "(1-a)_+",
        LossKind::Exponential => "exp(-a)",
        LossKind::Logistic => "log(1+exp(-a))",
        LossKind::LeastSquares => "(1-a)^2",
        LossKind::SymKl => "exp(-a)-a-1",
        LossKind::NonconvexExp => "(2-exp(a))_+ for a<=0, exp(-a) for a>0",
    })
}
