//! Convex generators `f : [0, ∞) → ℝ ∪ {+∞}` of f-divergences.
//!
//! Every generator is extended by `f(u) = +∞` for `u < 0`, so conjugates are
//! suprema over `u ≥ 0`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use crate::error::{Error, Result};
use crate::losses::{f_from_loss, SurrogateLoss};

/// Closed-form building blocks. Each entry documents its value for `u ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaseGenerator {
    /// `−min(u, cap)`.
    MinCapped(f64),
    /// `−2√u` (Bhattacharyya form of the Hellinger distance).
    Hellinger,
    /// `−4u/(u + 1)` (harmonic form of triangular discrimination).
    Triangular,
    /// `−u log((u + 1)/u) − log(u + 1)` (capacity discrimination).
    Capacitory,
    /// `−log u + u log u` (symmetric KL).
    SymmetricKl,
    /// `u log u` (KL divergence).
    Kl,
    /// `u²`.
    Square,
    /// `0`; together with the affine part this gives linear generators.
    Zero,
}

/// Asymptotic behaviour of a generator: `slope = lim f(u)/u`, whether
/// `sup_u (slope·u − f(u))` is finite, and that supremum (`NaN` when unknown).
/// For convex `f` the supremum is the limit as `u → ∞`, so it is not attained
/// on any finite grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Recession {
    pub slope: f64,
    pub bounded: bool,
    pub limit: f64,
}

impl BaseGenerator {
    pub fn eval(self, u: f64) -> f64 {
        if u < 0.0 || u.is_nan() {
            return f64::INFINITY;
        }
        match self {
            Self::MinCapped(cap) => -u.min(cap),
            Self::Hellinger => -2.0 * u.sqrt(),
            Self::Triangular => -4.0 * u / (u + 1.0),
            Self::Capacitory => {
                if u == 0.0 {
                    0.0
                } else {
                    -u * (1.0 / u).ln_1p() - u.ln_1p()
                }
            }
            Self::SymmetricKl => {
                if u == 0.0 {
                    f64::INFINITY
                } else {
                    (u - 1.0) * u.ln()
                }
            }
            Self::Kl => {
                if u == 0.0 {
                    0.0
                } else {
                    u * u.ln()
                }
            }
            Self::Square => u * u,
            Self::Zero => 0.0,
        }
    }

    /// Exact conjugate `sup_{u ≥ 0} (u·v − h(u))`.
    pub fn conjugate(self, v: f64) -> f64 {
        match self {
            Self::MinCapped(cap) => {
                if v > 0.0 {
                    f64::INFINITY
                } else if v >= -1.0 {
                    cap * (1.0 + v)
                } else {
                    0.0
                }
            }
            Self::Hellinger => {
                if v >= 0.0 {
                    f64::INFINITY
                } else {
                    -1.0 / v
                }
            }
            Self::Triangular => {
                if v > 0.0 {
                    f64::INFINITY
                } else {
                    let w = -v;
                    if w <= 4.0 {
                        (2.0 - w.sqrt()).powi(2)
                    } else {
                        0.0
                    }
                }
            }
            Self::Capacitory => {
                if v >= 0.0 {
                    f64::INFINITY
                } else {
                    // w - log(e^w - 1) written without cancellation
                    -(-(v.exp())).ln_1p()
                }
            }
            Self::SymmetricKl => {
                // maximizer u solves 1/u - log u = 1 - v; with w = 1/u this is
                // w + log w = 1 - v and the value is w + 1/w + v - 2
                let w = solve_w_plus_log_w(1.0 - v);
                w + 1.0 / w + v - 2.0
            }
            Self::Kl => (v - 1.0).exp(),
            Self::Square => {
                if v >= 0.0 {
                    0.25 * v * v
                } else {
                    0.0
                }
            }
            Self::Zero => {
                if v > 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
        }
    }

    pub fn recession(self) -> Recession {
        match self {
            Self::MinCapped(cap) => Recession { slope: 0.0, bounded: true, limit: cap },
            Self::Triangular => Recession { slope: 0.0, bounded: true, limit: 4.0 },
            Self::Zero => Recession { slope: 0.0, bounded: true, limit: 0.0 },
            Self::Hellinger | Self::Capacitory => Recession { slope: 0.0, bounded: false, limit: f64::INFINITY },
            Self::SymmetricKl | Self::Kl | Self::Square => {
                Recession { slope: f64::INFINITY, bounded: false, limit: f64::INFINITY }
            }
        }
    }

    /// `(β₁, β₂)` of `Ψ_h(β) = h*(−β)`.
    pub fn psi_bounds(self) -> (f64, f64) {
        match self {
            Self::MinCapped(_) => (0.0, 1.0),
            Self::Hellinger | Self::Capacitory => (0.0, f64::INFINITY),
            Self::Triangular => (0.0, 4.0),
            Self::SymmetricKl | Self::Kl => (f64::NEG_INFINITY, f64::INFINITY),
            Self::Square => (f64::NEG_INFINITY, 0.0),
            Self::Zero => (0.0, 0.0),
        }
    }

    fn formula(self) -> String {
        match self {
            Self::MinCapped(cap) => format!("-min(u,{cap})"),
            Self::Hellinger => "-2sqrt(u)".into(),
            Self::Triangular => "-4u/(u+1)".into(),
            Self::Capacitory => "-u log((u+1)/u) - log(u+1)".into(),
            Self::SymmetricKl => "-log u + u log u".into(),
            Self::Kl => "u log u".into(),
            Self::Square => "u^2".into(),
            Self::Zero => "0".into(),
        }
    }
}

/// Solve `w + log w = y` for `w > 0`.
///
/// Newton on `t = log w` for `e^t + t = y`; the map is convex and increasing,
/// so iterates started to the right of the root decrease monotonically to it.
pub(crate) fn solve_w_plus_log_w(y: f64) -> f64 {
    let mut t = if y > 1.0 { y.ln() } else { y };
    for _ in 0..100 {
        let et = t.exp();
        let step = (et + t - y) / (et + 1.0);
        t -= step;
        if step.abs() <= 1e-16 * t.abs().max(1.0) {
            break;
        }
    }
    t.exp()
}

/// `f(u) = scale·h(u) + slope·u + offset` with `scale > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedGenerator {
    pub base: BaseGenerator,
    pub scale: f64,
    pub slope: f64,
    pub offset: f64,
}

impl ClosedGenerator {
    pub fn eval(&self, u: f64) -> f64 {
        let h = self.base.eval(u);
        if h == f64::INFINITY {
            return h;
        }
        self.scale * h + self.slope * u + self.offset
    }

    /// `f*(v) = scale·h*((v − slope)/scale) − offset`.
    pub fn conjugate(&self, v: f64) -> f64 {
        let h = self.base.conjugate((v - self.slope) / self.scale);
        if h == f64::INFINITY {
            return h;
        }
        self.scale * h - self.offset
    }

    pub fn recession(&self) -> Recession {
        let r = self.base.recession();
        Recession { slope: self.scale * r.slope + self.slope, bounded: r.bounded, limit: self.scale * r.limit - self.offset }
    }

    /// `(β₁, β₂)` of `Ψ_f(β) = scale·Ψ_h((β + slope)/scale) − offset`.
    pub fn psi_bounds(&self) -> (f64, f64) {
        let (b1, b2) = self.base.psi_bounds();
        (self.scale * b1 - self.slope, self.scale * b2 - self.slope)
    }
}

/// Piecewise-linear generator through `(u_k, f_k)`; `+∞` outside the table.
#[derive(Debug, Clone, PartialEq)]
pub struct Tabulated {
    u: Vec<f64>,
    f: Vec<f64>,
}

impl Tabulated {
    pub fn new(u: Vec<f64>, f: Vec<f64>) -> Result<Self> {
        if u.len() != f.len() || u.len() < 2 {
            return Err(Error::InvalidArgument("table needs at least two (u, f) pairs"));
        }
        if u[0] < 0.0 || u.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument("table abscissae must be nonnegative and increasing"));
        }
        if f.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("table values must be finite"));
        }
        Ok(Self { u, f })
    }

    /// Sample `g` on the given abscissae.
    pub fn sample(g: &Generator, u: Vec<f64>) -> Result<Self> {
        let f = u.iter().map(|&x| g.eval(x)).collect();
        Self::new(u, f)
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.u.iter().copied().zip(self.f.iter().copied())
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.u.len();
        if !(x >= self.u[0] && x <= self.u[n - 1]) {
            return f64::INFINITY;
        }
        let k = self.u.partition_point(|&v| v <= x).clamp(1, n - 1);
        let (u0, u1) = (self.u[k - 1], self.u[k]);
        let w = (x - u0) / (u1 - u0);
        self.f[k - 1] + w * (self.f[k] - self.f[k - 1])
    }

    /// Exact conjugate of the interpolant: the supremum sits on a vertex.
    pub fn conjugate(&self, v: f64) -> f64 {
        self.points().map(|(u, f)| v * u - f).fold(f64::NEG_INFINITY, f64::max)
    }

    /// `(β₁, β₂)` of `Ψ(β) = max_k (−β u_k − f_k)`.
    pub fn psi_bounds(&self) -> (f64, f64) {
        if self.u[0] > 0.0 {
            return (f64::NEG_INFINITY, f64::INFINITY);
        }
        let f0 = self.f[0];
        let b2 = self.points().skip(1).map(|(u, f)| (f0 - f) / u).fold(f64::NEG_INFINITY, f64::max);
        (f64::NEG_INFINITY, b2)
    }
}

/// A convex generator.
#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    Closed(ClosedGenerator),
    Tabulated(Tabulated),
    /// `f(u) = −inf_α (φ(−α) + φ(α)·u)` for a loss `φ`.
    Induced(Box<SurrogateLoss>),
}

impl Generator {
    pub fn closed(base: BaseGenerator) -> Self {
        Self::affine(base, 1.0, 0.0, 0.0)
    }

    /// `scale·base(u) + slope·u + offset`.
    pub fn affine(base: BaseGenerator, scale: f64, slope: f64, offset: f64) -> Self {
        Self::Closed(ClosedGenerator { base, scale, slope, offset })
    }

    pub fn linear(slope: f64, offset: f64) -> Self {
        Self::affine(BaseGenerator::Zero, 1.0, slope, offset)
    }

    /// `−min(u, cap)`.
    pub fn min_capped(cap: f64) -> Self {
        Self::closed(BaseGenerator::MinCapped(cap))
    }

    /// Variational distance generator `−2 min(u, 1)`.
    pub fn variational() -> Self {
        Self::affine(BaseGenerator::MinCapped(1.0), 2.0, 0.0, 0.0)
    }

    pub fn hellinger() -> Self {
        Self::closed(BaseGenerator::Hellinger)
    }

    pub fn triangular() -> Self {
        Self::closed(BaseGenerator::Triangular)
    }

    pub fn capacitory() -> Self {
        Self::closed(BaseGenerator::Capacitory)
    }

    pub fn symmetric_kl() -> Self {
        Self::closed(BaseGenerator::SymmetricKl)
    }

    pub fn kl() -> Self {
        Self::closed(BaseGenerator::Kl)
    }

    pub fn induced(loss: SurrogateLoss) -> Self {
        Self::Induced(Box::new(loss))
    }

    pub const CATALOG: [&'static str; 6] =
        ["variational", "hellinger", "triangular", "capacitory", "symmetric_kl", "kl"];

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "variational" => Self::variational(),
            "hellinger" => Self::hellinger(),
            "triangular" => Self::triangular(),
            "capacitory" => Self::capacitory(),
            "symmetric_kl" => Self::symmetric_kl(),
            "kl" => Self::kl(),
            _ => return None,
        })
    }

    pub fn eval(&self, u: f64) -> f64 {
        match self {
            Self::Closed(g) => g.eval(u),
            Self::Tabulated(t) => t.eval(u),
            Self::Induced(loss) => {
                if u < 0.0 {
                    return f64::INFINITY;
                }
                f_from_loss(loss, u).unwrap_or(f64::INFINITY)
            }
        }
    }

    /// Exact conjugate when one is available.
    pub fn exact_conjugate(&self, v: f64) -> Result<f64> {
        match self {
            Self::Closed(g) => Ok(g.conjugate(v)),
            Self::Tabulated(t) => Ok(t.conjugate(v)),
            Self::Induced(_) => Err(Error::NoExactConjugate),
        }
    }

    pub fn has_exact_conjugate(&self) -> bool {
        !matches!(self, Self::Induced(_))
    }

    pub fn recession(&self) -> Recession {
        match self {
            Self::Closed(g) => g.recession(),
            Self::Tabulated(_) => Recession { slope: f64::INFINITY, bounded: false, limit: f64::INFINITY },
            Self::Induced(loss) => {
                let inf = loss.infimum();
                Recession { slope: -inf, bounded: loss.alpha_star().is_finite(), limit: f64::NAN }
            }
        }
    }

    /// Exact `(β₁, β₂)` when the generator has a closed form or a table.
    pub fn exact_psi_bounds(&self) -> Option<(f64, f64)> {
        match self {
            Self::Closed(g) => Some(g.psi_bounds()),
            Self::Tabulated(t) => Some(t.psi_bounds()),
            Self::Induced(_) => None,
        }
    }

    /// Midpoint convexity on consecutive triples of `grid`.
    pub fn is_convex_on(&self, grid: &[f64], tol: f64) -> bool {
        grid.windows(2).all(|w| {
            let (a, b) = (w[0], w[1]);
            let (fa, fb) = (self.eval(a), self.eval(b));
            if !(fa.is_finite() && fb.is_finite()) {
                return true;
            }
            self.eval(0.5 * (a + b)) <= 0.5 * (fa + fb) + tol
        })
    }

    pub fn formula(&self) -> String {
        match self {
            Self::Closed(g) => {
                let mut s = if g.scale == 1.0 {
                    g.base.formula()
                } else {
                    format!("{}*({})", g.scale, g.base.formula())
                };
                if g.slope != 0.0 {
                    s = format!("{s} + {}u", g.slope);
                }
                if g.offset != 0.0 {
                    s = format!("{s} + {}", g.offset);
                }
                s
            }
            Self::Tabulated(t) => format!("tabulated({} points)", t.u.len()),
            Self::Induced(loss) => format!("induced({})", loss.name()),
        }
    }
}
