//! φ-risks of a discriminant on a joint measure and the identity
//! `R_φ(Q) = −I_f(μ, π)` linking the optimal φ-risk to the induced
//! f-divergence.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::losses::{f_from_loss, minimize_margin, LossKind, SurrogateLoss};
use crate::measures::{bayes_risk, f_divergence, JointMeasure};
use crate::minimize::log_grid;

/// `γ(z)` for each cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Discriminant {
    values: Vec<f64>,
}

impl Discriminant {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn constant(value: f64, z_count: usize) -> Self {
        Self { values: alloc::vec![value; z_count] }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn flipped(&self) -> Self {
        Self { values: self.values.iter().map(|g| -g).collect() }
    }

    fn check(&self, m: &JointMeasure) -> Result<()> {
        if self.len() != m.z_count() {
            return Err(Error::DimensionMismatch { expected: m.z_count(), got: self.len() });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RiskReport {
    pub phi_risk: f64,
    pub optimal_phi_risk: f64,
    pub bayes_risk_of_pair: f64,
    pub bayes_risk_of_q: f64,
    pub divergence_value: f64,
    pub correspondence_residual: f64,
    pub pass: bool,
}

/// `Σ_z φ(γ(z))·μ(z) + φ(−γ(z))·π(z)`.
pub fn phi_risk(phi: &SurrogateLoss, gamma: &Discriminant, m: &JointMeasure) -> Result<f64> {
    gamma.check(m)?;
    let mut total = 0.0;
    for (z, mu, pi) in m.rows() {
        let g = gamma.values[z];
        let term = phi.eval(g) * mu + phi.eval(-g) * pi;
        if !term.is_finite() {
            return Err(Error::InfiniteRisk { z });
        }
        total += term;
    }
    Ok(total)
}

/// Margin bracket for cell `z`: `50 + |log(μ/π)|`.
pub fn cell_bracket(mu: f64, pi: f64) -> f64 {
    50.0 + (mu / pi).ln().abs()
}

/// `Σ_z inf_α (φ(α)·μ(z) + φ(−α)·π(z))` and the per-cell minimizers. Where
/// the infimum is attained on an interval the smallest minimizer is reported.
pub fn optimal_phi_risk(phi: &SurrogateLoss, m: &JointMeasure) -> (f64, Discriminant) {
    let mut total = 0.0;
    let mut gamma = Vec::with_capacity(m.z_count());
    for (_, mu, pi) in m.rows() {
        let obj = |a: f64| phi.eval(a) * mu + phi.eval(-a) * pi;
        let best = minimize_margin(phi.is_convex(), obj, cell_bracket(mu, pi));
        total += best.value;
        gamma.push(best.arg);
    }
    (total, Discriminant::new(gamma))
}

/// The known per-cell minimizers of the catalog losses.
pub fn closed_form_discriminant(kind: LossKind, m: &JointMeasure) -> Result<Discriminant> {
    let rule: fn(f64, f64) -> f64 = match kind {
        LossKind::ZeroOne | LossKind::Hinge => |mu, pi| if mu - pi > 0.0 { 1.0 } else { -1.0 },
        LossKind::Exponential => |mu, pi| 0.5 * (mu / pi).ln(),
        LossKind::LeastSquares => |mu, pi| (mu - pi) / (mu + pi),
        LossKind::Logistic | LossKind::SymKl => |mu, pi| (mu / pi).ln(),
        LossKind::NonconvexExp => return Err(Error::InvalidArgument("no closed-form discriminant")),
    };
    Ok(Discriminant::new(m.rows().map(|(_, mu, pi)| rule(mu, pi)).collect()))
}

/// 0–1 risk of deciding `sign(γ(z))` in every cell, with `sign(0) = −1`.
pub fn bayes_risk_of_pair(gamma: &Discriminant, m: &JointMeasure) -> Result<f64> {
    gamma.check(m)?;
    Ok(m.rows().map(|(z, mu, pi)| if gamma.values[z] > 0.0 { pi } else { mu }).sum())
}

/// Tolerance for the identity: tight for exact conjugates, looser otherwise.
pub fn default_tolerance(f: &Generator) -> f64 {
    if f.has_exact_conjugate() {
        1e-6
    } else {
        1e-4
    }
}

/// Risks of `gamma` on `m` next to the optimal φ-risk and `I_f`.
pub fn risk_report(
    phi: &SurrogateLoss,
    f: &Generator,
    gamma: &Discriminant,
    m: &JointMeasure,
    tol: f64,
) -> Result<RiskReport> {
    let (optimal, _) = optimal_phi_risk(phi, m);
    let divergence = f_divergence(f, m)?;
    let residual = (optimal + divergence).abs();
    Ok(RiskReport {
        phi_risk: phi_risk(phi, gamma, m)?,
        optimal_phi_risk: optimal,
        bayes_risk_of_pair: bayes_risk_of_pair(gamma, m)?,
        bayes_risk_of_q: bayes_risk(m),
        divergence_value: divergence,
        correspondence_residual: residual,
        pass: residual <= tol,
    })
}

/// Check that `f` is the generator of `φ` on a log grid, then compare the
/// optimal φ-risk with `−I_f(μ, π)`.
pub fn verify_correspondence(phi: &SurrogateLoss, f: &Generator, m: &JointMeasure, tol: f64) -> Result<RiskReport> {
    for u in log_grid(1e-2, 1e2, 41) {
        let residual = (f_from_loss(phi, u)? - f.eval(u)).abs();
        if !(residual <= tol) {
            return Err(Error::MismatchedPair { u, residual });
        }
    }
    let (_, gamma) = optimal_phi_risk(phi, m);
    risk_report(phi, f, &gamma, m, tol)
}
