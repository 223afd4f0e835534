//! Finite measures induced by a quantizer, f-divergences and the Bayes risk.
//!
//! For a quantizer `Q(z|x)` and class priors `p = P(Y = 1)`, `q = P(Y = −1)`,
//! the induced measures are `μ(z) = P(Y = 1, Z = z)` and
//! `π(z) = P(Y = −1, Z = z)`. Both must be strictly positive; a cell with
//! zero mass is rejected rather than smoothed.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use crate::error::{Error, Result};
use crate::generator::Generator;

/// Consistency tolerance for sums of masses.
pub const MASS_TOL: f64 = 1e-12;

/// Class priors. `q` is stored as `1 - p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Priors {
    p: f64,
    q: f64,
}

impl Priors {
    pub fn from_p(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidPriors { p, q: 1.0 - p });
        }
        Ok(Self { p, q: 1.0 - p })
    }

    /// Priors from `q = P(Y = −1)`.
    pub fn from_q(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidPriors { p: 1.0 - q, q });
        }
        Ok(Self { p: 1.0 - q, q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

/// Strictly positive `μ`, `π` on a finite `Z`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointMeasure {
    mu: Vec<f64>,
    pi: Vec<f64>,
    priors: Priors,
}

impl JointMeasure {
    /// Build from `μ` and `π`; the priors are read off the totals, which must
    /// add up to one.
    pub fn new(mu: Vec<f64>, pi: Vec<f64>) -> Result<Self> {
        check_cells(&mu, &pi)?;
        let p: f64 = mu.iter().sum();
        let q: f64 = pi.iter().sum();
        if (p + q - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidMeasure("total mass must be one"));
        }
        let priors = Priors::from_p(p)?;
        Ok(Self { mu, pi, priors })
    }

    pub fn with_priors(mu: Vec<f64>, pi: Vec<f64>, priors: Priors) -> Result<Self> {
        check_cells(&mu, &pi)?;
        let p: f64 = mu.iter().sum();
        let q: f64 = pi.iter().sum();
        if (p - priors.p()).abs() > MASS_TOL || (q - priors.q()).abs() > MASS_TOL {
            return Err(Error::InvalidMeasure("cell masses do not sum to the priors"));
        }
        Ok(Self { mu, pi, priors })
    }

    pub(crate) fn with_priors_unchecked(mu: Vec<f64>, pi: Vec<f64>, priors: Priors) -> Self {
        Self { mu, pi, priors }
    }

    pub fn z_count(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn pi(&self) -> &[f64] {
        &self.pi
    }

    pub fn priors(&self) -> Priors {
        self.priors
    }

    /// Likelihood ratios `μ(z)/π(z)`.
    pub fn ratios(&self) -> impl Iterator<Item = f64> + '_ {
        self.mu.iter().zip(&self.pi).map(|(m, p)| m / p)
    }

    /// `(z, μ(z), π(z))` rows, `z` counted from zero.
    pub fn rows(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        self.mu.iter().zip(&self.pi).enumerate().map(|(z, (&m, &p))| (z, m, p))
    }

    /// The same measure with the roles of `μ` and `π` exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            mu: self.pi.clone(),
            pi: self.mu.clone(),
            priors: Priors { p: self.priors.q, q: self.priors.p },
        }
    }

    /// Class-conditional distributions `(P(z|Y=1), P(z|Y=−1))`.
    pub fn class_conditionals(&self) -> (Vec<f64>, Vec<f64>) {
        let p = self.priors.p();
        let q = self.priors.q();
        (self.mu.iter().map(|m| m / p).collect(), self.pi.iter().map(|x| x / q).collect())
    }

    /// Cells permuted by `perm` (`perm[k]` is the old index of new cell `k`).
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            mu: perm.iter().map(|&k| self.mu[k]).collect(),
            pi: perm.iter().map(|&k| self.pi[k]).collect(),
            priors: self.priors,
        }
    }
}

fn check_cells(mu: &[f64], pi: &[f64]) -> Result<()> {
    if mu.len() != pi.len() {
        return Err(Error::DimensionMismatch { expected: mu.len(), got: pi.len() });
    }
    if mu.is_empty() {
        return Err(Error::InvalidMeasure("Z must be non-empty"));
    }
    for (z, (&m, &p)) in mu.iter().zip(pi).enumerate() {
        if !(m.is_finite() && p.is_finite()) || m < 0.0 || p < 0.0 {
            return Err(Error::InvalidMeasure("masses must be finite and nonnegative"));
        }
        if m == 0.0 || p == 0.0 {
            return Err(Error::ZeroMassBin { z, mu: m, pi: p });
        }
    }
    Ok(())
}

/// A quantizer `Q(z|x)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Quantizer {
    /// Deterministic cut of a scalar covariate. Cell 0 collects `x < t`,
    /// cell 1 collects `x >= t`.
    Threshold(f64),
    /// Stochastic table: row `b` is the distribution over `Z` for covariate bin `b`.
    Table(Vec<Vec<f64>>),
}

impl Quantizer {
    pub fn threshold(t: f64) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::InvalidQuantizer("threshold must be finite"));
        }
        Ok(Self::Threshold(t))
    }

    pub fn table(rows: Vec<Vec<f64>>) -> Result<Self> {
        let width = rows.first().map(Vec::len).unwrap_or(0);
        if rows.is_empty() || width == 0 {
            return Err(Error::InvalidQuantizer("table must be non-empty"));
        }
        for row in &rows {
            if row.len() != width {
                return Err(Error::InvalidQuantizer("ragged table"));
            }
            if row.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
                return Err(Error::InvalidQuantizer("table entries must be nonnegative"));
            }
            if (row.iter().sum::<f64>() - 1.0).abs() > MASS_TOL {
                return Err(Error::InvalidQuantizer("table rows must sum to one"));
            }
        }
        Ok(Self::Table(rows))
    }

    /// Deterministic table sending bin `b` to cell `assignment[b]`.
    pub fn deterministic(assignment: &[usize], z_count: usize) -> Result<Self> {
        if assignment.iter().any(|&z| z >= z_count) {
            return Err(Error::InvalidQuantizer("cell index out of range"));
        }
        let rows = assignment
            .iter()
            .map(|&z| {
                let mut row = alloc::vec![0.0; z_count];
                row[z] = 1.0;
                row
            })
            .collect();
        Ok(Self::Table(rows))
    }

    pub fn z_count(&self) -> usize {
        match self {
            Self::Threshold(_) => 2,
            Self::Table(rows) => rows[0].len(),
        }
    }

    /// Probability of cell `z` given covariate `x` (a bin index for tables).
    pub fn prob(&self, z: usize, x: f64) -> f64 {
        match self {
            Self::Threshold(t) => {
                let cell = if x < *t { 0 } else { 1 };
                if z == cell {
                    1.0
                } else {
                    0.0
                }
            }
            Self::Table(rows) => rows[x as usize][z],
        }
    }
}

/// Class-conditional structure of the covariate.
#[derive(Debug, Clone, PartialEq)]
pub enum SourceKind {
    /// `X | Y = −1 ~ Uniform[0, b]`, `X | Y = 1 ~ Uniform[a, c]`, `0 < a < b < c`.
    UniformPair { a: f64, b: f64, c: f64 },
    /// Pre-binned covariate: `pos[k] = P(X = k | Y = 1)`, `neg[k] = P(X = k | Y = −1)`.
    Binned { pos: Vec<f64>, neg: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SourceSpec {
    pub kind: SourceKind,
    pub priors: Priors,
}

impl SourceSpec {
    pub fn uniform_pair(a: f64, b: f64, c: f64, q: f64) -> Result<Self> {
        if !(0.0 < a && a < b && b < c && c.is_finite()) {
            return Err(Error::InvalidSource("need 0 < a < b < c"));
        }
        Ok(Self { kind: SourceKind::UniformPair { a, b, c }, priors: Priors::from_q(q)? })
    }

    pub fn binned(pos: Vec<f64>, neg: Vec<f64>, q: f64) -> Result<Self> {
        if pos.len() != neg.len() || pos.is_empty() {
            return Err(Error::InvalidSource("class masses must have equal non-zero length"));
        }
        for masses in [&pos, &neg] {
            if masses.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
                return Err(Error::InvalidSource("bin masses must be nonnegative"));
            }
            if (masses.iter().sum::<f64>() - 1.0).abs() > MASS_TOL {
                return Err(Error::InvalidSource("each class must sum to one"));
            }
        }
        Ok(Self { kind: SourceKind::Binned { pos, neg }, priors: Priors::from_q(q)? })
    }

    /// Same covariate structure under different priors.
    pub fn with_q(&self, q: f64) -> Result<Self> {
        Ok(Self { kind: self.kind.clone(), priors: Priors::from_q(q)? })
    }

    pub fn bin_count(&self) -> Option<usize> {
        match &self.kind {
            SourceKind::Binned { pos, .. } => Some(pos.len()),
            SourceKind::UniformPair { .. } => None,
        }
    }
}

/// Raw induced masses `(μ, π)`; cells may be empty.
pub fn induce_masses(quantizer: &Quantizer, src: &SourceSpec) -> Result<(Vec<f64>, Vec<f64>)> {
    let p = src.priors.p();
    let q = src.priors.q();
    match (quantizer, &src.kind) {
        (Quantizer::Threshold(t), SourceKind::UniformPair { a, b, c }) => {
            let t = *t;
            if !(t > *a && t < *b) {
                return Err(Error::InvalidQuantizer("threshold must lie strictly inside (a, b)"));
            }
            let mu = alloc::vec![p * (t - a) / (c - a), p * (c - t) / (c - a)];
            let pi = alloc::vec![q * t / b, q * (b - t) / b];
            Ok((mu, pi))
        }
        (Quantizer::Table(rows), SourceKind::Binned { pos, neg }) => {
            if rows.len() != pos.len() {
                return Err(Error::IncompatibleQuantizer("table rows must match source bins"));
            }
            let z_count = quantizer.z_count();
            let mut mu = alloc::vec![0.0; z_count];
            let mut pi = alloc::vec![0.0; z_count];
            for (row, (&wp, &wn)) in rows.iter().zip(pos.iter().zip(neg)) {
                for (z, &qz) in row.iter().enumerate() {
                    mu[z] += p * wp * qz;
                    pi[z] += q * wn * qz;
                }
            }
            Ok((mu, pi))
        }
        (Quantizer::Threshold(_), SourceKind::Binned { .. }) => {
            Err(Error::IncompatibleQuantizer("threshold quantizers need a uniform_pair source"))
        }
        (Quantizer::Table(_), SourceKind::UniformPair { .. }) => {
            Err(Error::IncompatibleQuantizer("table quantizers need a binned source"))
        }
    }
}

/// `μ`, `π` induced by `quantizer` on `src`.
pub fn induce_measures(quantizer: &Quantizer, src: &SourceSpec) -> Result<JointMeasure> {
    let (mu, pi) = induce_masses(quantizer, src)?;
    check_cells(&mu, &pi)?;
    Ok(JointMeasure { mu, pi, priors: src.priors })
}

/// `I_f(μ, π) = Σ_z π(z) f(μ(z)/π(z))`.
pub fn f_divergence(f: &Generator, m: &JointMeasure) -> Result<f64> {
    let mut total = 0.0;
    for (&mu, &pi) in m.mu.iter().zip(&m.pi) {
        let ratio = mu / pi;
        let value = f.eval(ratio);
        if !value.is_finite() {
            return Err(Error::InfiniteValue { ratio });
        }
        total += pi * value;
    }
    Ok(total)
}

/// Divergences with their own closed forms, independent of [`f_divergence`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedDivergence {
    /// `V(μ, π) = Σ |μ − π|`.
    Variational,
    /// Squared Hellinger distance `h² = ½ Σ (√μ − √π)²`.
    HellingerTerm,
    /// Triangular discrimination `Δ = Σ (μ − π)² / (μ + π)`.
    Triangular,
    /// Capacity discrimination `C = KL(μ ‖ (μ+π)/2) + KL(π ‖ (μ+π)/2)`.
    Capacitory,
    /// `KL(μ‖π) + KL(π‖μ)`.
    SymmetricKl,
}

impl NamedDivergence {
    pub const ALL: [NamedDivergence; 5] = [
        Self::Variational,
        Self::HellingerTerm,
        Self::Triangular,
        Self::Capacitory,
        Self::SymmetricKl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Variational => "variational",
            Self::HellingerTerm => "hellinger_term",
            Self::Triangular => "triangular",
            Self::Capacitory => "capacitory",
            Self::SymmetricKl => "symmetric_kl",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|d| d.name() == name)
    }
}

pub fn named_divergence(name: NamedDivergence, m: &JointMeasure) -> f64 {
    let cells = m.mu.iter().zip(&m.pi);
    match name {
        NamedDivergence::Variational => cells.map(|(a, b)| (a - b).abs()).sum(),
        NamedDivergence::HellingerTerm => {
            0.5 * cells.map(|(a, b)| (a.sqrt() - b.sqrt()).powi(2)).sum::<f64>()
        }
        NamedDivergence::Triangular => cells.map(|(a, b)| (a - b).powi(2) / (a + b)).sum(),
        NamedDivergence::Capacitory => cells
            .map(|(&a, &b)| {
                let mid = 0.5 * (a + b);
                a * (a / mid).ln() + b * (b / mid).ln()
            })
            .sum(),
        NamedDivergence::SymmetricKl => cells.map(|(&a, &b)| (a - b) * (a / b).ln()).sum(),
    }
}

/// `R_Bayes(Q) = Σ_z min(μ(z), π(z))`.
pub fn bayes_risk(m: &JointMeasure) -> f64 {
    min_mass(&m.mu, &m.pi)
}

pub(crate) fn min_mass(mu: &[f64], pi: &[f64]) -> f64 {
    mu.iter().zip(pi).map(|(a, b)| a.min(*b)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{BaseGenerator, Generator};
    use approx::assert_abs_diff_eq;

    fn example() -> JointMeasure {
        JointMeasure::new(alloc::vec![0.3, 0.2], alloc::vec![0.1, 0.4]).unwrap()
    }

    #[test]
    fn threshold_mass_formulas() {
        let src = SourceSpec::uniform_pair(1.0, 2.0, 4.0, 0.5).unwrap();
        let m = induce_measures(&Quantizer::Threshold(1.5), &src).unwrap();
        assert_abs_diff_eq!(m.mu()[0], 1.0 / 12.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.mu()[1], 5.0 / 12.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.pi()[0], 0.375, epsilon = 1e-15);
        assert_abs_diff_eq!(m.pi()[1], 0.125, epsilon = 1e-15);
        assert_abs_diff_eq!(bayes_risk(&m), 1.0 / 12.0 + 0.125, epsilon = 1e-15);
    }

    #[test]
    fn identity_table_halves_class_masses() {
        let src = SourceSpec::binned(alloc::vec![0.6, 0.4], alloc::vec![0.2, 0.8], 0.5).unwrap();
        let q = Quantizer::deterministic(&[0, 1], 2).unwrap();
        let m = induce_measures(&q, &src).unwrap();
        assert_abs_diff_eq!(m.mu()[0], 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(m.mu()[1], 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(m.pi()[0], 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(m.pi()[1], 0.4, epsilon = 1e-15);
    }

    #[test]
    fn uniform_rows_mix_everything() {
        let src = SourceSpec::binned(alloc::vec![0.6, 0.4], alloc::vec![0.2, 0.8], 0.5).unwrap();
        let q = Quantizer::table(alloc::vec![alloc::vec![0.5, 0.5], alloc::vec![0.5, 0.5]]).unwrap();
        let m = induce_measures(&q, &src).unwrap();
        for v in m.mu().iter().chain(m.pi()) {
            assert_abs_diff_eq!(*v, 0.25, epsilon = 1e-15);
        }
    }

    #[test]
    fn zero_mass_and_kind_mismatch_are_rejected() {
        let src = SourceSpec::binned(alloc::vec![1.0, 0.0], alloc::vec![0.5, 0.5], 0.5).unwrap();
        let q = Quantizer::deterministic(&[0, 1], 2).unwrap();
        assert!(matches!(induce_measures(&q, &src), Err(Error::ZeroMassBin { z: 1, .. })));
        assert!(matches!(
            induce_measures(&Quantizer::Threshold(0.5), &src),
            Err(Error::IncompatibleQuantizer(_))
        ));
        let uni = SourceSpec::uniform_pair(1.0, 2.0, 4.0, 0.5).unwrap();
        assert!(matches!(induce_measures(&q, &uni), Err(Error::IncompatibleQuantizer(_))));
        assert!(induce_measures(&Quantizer::Threshold(2.5), &uni).is_err());
    }

    #[test]
    fn table_validation() {
        assert!(Quantizer::table(alloc::vec![alloc::vec![0.7, 0.2]]).is_err());
        assert!(Quantizer::table(alloc::vec![alloc::vec![1.2, -0.2]]).is_err());
        assert!(Quantizer::table(alloc::vec![alloc::vec![1.0], alloc::vec![0.5, 0.5]]).is_err());
    }

    #[test]
    fn hellinger_generator_sum() {
        let f = Generator::closed(BaseGenerator::Hellinger);
        let v = f_divergence(&f, &example()).unwrap();
        let expected = 0.1 * (-2.0 * 3.0_f64.sqrt()) + 0.4 * (-2.0 * 0.5_f64.sqrt());
        assert_abs_diff_eq!(v, expected, epsilon = 1e-15);
        // 2·Σ√(μπ) is 0.9120956, a little under the rounded 0.912097
        assert_abs_diff_eq!(v, -0.912097, epsilon = 2e-6);
    }

    #[test]
    fn linear_generator_only_sees_priors() {
        let f = Generator::linear(1.0, -1.0);
        let m = example();
        let v = f_divergence(&f, &m).unwrap();
        assert_abs_diff_eq!(v, m.priors().p() - m.priors().q(), epsilon = 1e-15);
    }

    #[test]
    fn equal_measures() {
        let m = JointMeasure::new(alloc::vec![0.2, 0.3], alloc::vec![0.2, 0.3]).unwrap();
        let f = Generator::min_capped(1.0);
        assert_abs_diff_eq!(f_divergence(&f, &m).unwrap(), -0.5, epsilon = 1e-15);
        for d in NamedDivergence::ALL {
            assert_abs_diff_eq!(named_divergence(d, &m), 0.0, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(bayes_risk(&m), m.priors().q(), epsilon = 1e-15);
    }

    #[test]
    fn named_values_on_example() {
        let m = example();
        assert_abs_diff_eq!(named_divergence(NamedDivergence::Variational, &m), 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(bayes_risk(&m), 0.3, epsilon = 1e-15);
        let skl = named_divergence(NamedDivergence::SymmetricKl, &m);
        let via_f = f_divergence(&Generator::closed(BaseGenerator::SymmetricKl), &m).unwrap();
        assert_abs_diff_eq!(skl, via_f, epsilon = 1e-9);
    }

    #[test]
    fn infinite_generator_value_is_an_error() {
        // a table on [0.5, 10] is +inf outside it; the ratio of cell 1 is ~4e-300
        let f = Generator::Tabulated(
            crate::generator::Tabulated::new(alloc::vec![0.5, 1.0, 10.0], alloc::vec![1.0, 0.0, 5.0]).unwrap(),
        );
        let m = JointMeasure::new(alloc::vec![0.5, 1e-300], alloc::vec![0.25, 0.25]).unwrap();
        assert!(matches!(f_divergence(&f, &m), Err(Error::InfiniteValue { .. })));
    }
}
