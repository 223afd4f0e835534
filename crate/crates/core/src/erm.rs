//! Synthetic samples, joint empirical risk minimization over a discriminant
//! and a quantizer, and the population quantities used to judge the result.
//!
//! Discriminants are confined to `[−B, B]` per cell. Quantizers come from a
//! finite family: a threshold grid on a `uniform_pair` source, or `k`-cell
//! tables on a binned source. `R*_Bayes` is the smallest Bayes risk over that
//! same family, so the excess Bayes risk measures how far ERM is from the best
//! member of the class it searches.

use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use crate::equivalence::variational_family_check;
use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::losses::SurrogateLoss;
use crate::measures::{bayes_risk, f_divergence, induce_masses, induce_measures, min_mass, Quantizer, SourceKind, SourceSpec};
use crate::minimize::{linear_grid, ternary_min};
use crate::risk::{bayes_risk_of_pair, optimal_phi_risk, phi_risk, Discriminant};
use crate::rng::SampleStream;

/// Tolerance on `γ` in the per-cell minimizations.
pub const GAMMA_TOL: f64 = 1e-10;
/// Stop alternating minimization once a round improves by less than this.
pub const ALT_MIN_TOL: f64 = 1e-10;
pub const ALT_MAX_ROUNDS: usize = 100;
/// Largest number of deterministic tables enumerated for `R*_Bayes`.
pub const MAX_TABLE_ENUMERATION: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    x: Vec<f64>,
    y: Vec<i8>,
    seed: Option<u64>,
    src: SourceSpec,
}

impl SampleSet {
    /// A hand-built sample; labels must be `±1`.
    pub fn from_pairs(x: Vec<f64>, y: Vec<i8>, src: SourceSpec) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::EmptySample);
        }
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch { expected: x.len(), got: y.len() });
        }
        if y.iter().any(|&l| l != 1 && l != -1) {
            return Err(Error::InvalidArgument("labels must be +1 or -1"));
        }
        Ok(Self { x, y, seed: None, src })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[i8] {
        &self.y
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn src(&self) -> &SourceSpec {
        &self.src
    }

    /// The sample followed by a copy of itself.
    pub fn doubled(&self) -> Self {
        let mut out = self.clone();
        out.x.extend_from_slice(&self.x);
        out.y.extend_from_slice(&self.y);
        out
    }
}

/// Draw `n` labelled points: `Y = −1` with probability `q`, then `X` from the
/// class-conditional law. Points are drawn one at a time from stream 0 of
/// `seed`, so a smaller `n` yields a prefix of a larger one.
pub fn generate_samples(src: &SourceSpec, n: usize, seed: u64) -> Result<SampleSet> {
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let mut rng = SampleStream::new(seed, 0);
    let q = src.priors.q();
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for _ in 0..n {
        let label: i8 = if rng.uniform() < q { -1 } else { 1 };
        let xi = match &src.kind {
            SourceKind::UniformPair { a, b, c } => {
                if label < 0 {
                    rng.uniform_in(0.0, *b)
                } else {
                    rng.uniform_in(*a, *c)
                }
            }
            SourceKind::Binned { pos, neg } => {
                let w = if label < 0 { neg } else { pos };
                draw_bin(w, rng.uniform()) as f64
            }
        };
        x.push(xi);
        y.push(label);
    }
    Ok(SampleSet { x, y, seed: Some(seed), src: src.clone() })
}

/// Inverse-CDF draw, skipping empty bins.
fn draw_bin(weights: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    let mut last = 0;
    for (k, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        acc += w;
        last = k;
        if u < acc {
            return k;
        }
    }
    last
}

#[derive(Debug, Clone, PartialEq)]
pub enum QuantizerFamily {
    ThresholdGrid(Vec<f64>),
    TableBins(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionClassSpec {
    pub gamma_bound: f64,
    pub family: QuantizerFamily,
}

impl FunctionClassSpec {
    /// `points` thresholds `a + (b − a)·k/(points + 1)`, `k = 1..=points`.
    pub fn threshold_grid(src: &SourceSpec, points: usize, gamma_bound: f64) -> Result<Self> {
        let SourceKind::UniformPair { a, b, .. } = src.kind else {
            return Err(Error::InvalidFunctionClass("threshold grids need a uniform_pair source"));
        };
        let grid = (1..=points).map(|k| a + (b - a) * k as f64 / (points + 1) as f64).collect();
        let fc = Self { gamma_bound, family: QuantizerFamily::ThresholdGrid(grid) };
        fc.validate(src)?;
        Ok(fc)
    }

    pub fn table_bins(k: usize, gamma_bound: f64) -> Self {
        Self { gamma_bound, family: QuantizerFamily::TableBins(k) }
    }

    pub fn validate(&self, src: &SourceSpec) -> Result<()> {
        if !(self.gamma_bound > 0.0 && self.gamma_bound.is_finite()) {
            return Err(Error::InvalidFunctionClass("gamma bound must be positive and finite"));
        }
        match (&self.family, &src.kind) {
            (QuantizerFamily::ThresholdGrid(ts), SourceKind::UniformPair { a, b, .. }) => {
                if ts.is_empty() || ts.iter().any(|t| !(t > a && t < b)) {
                    return Err(Error::InvalidFunctionClass("thresholds must lie strictly inside (a, b)"));
                }
                Ok(())
            }
            (QuantizerFamily::TableBins(k), SourceKind::Binned { pos, .. }) => {
                if *k == 0 {
                    return Err(Error::InvalidFunctionClass("need at least one cell"));
                }
                let count = (*k as f64).powi(pos.len() as i32);
                if count > MAX_TABLE_ENUMERATION as f64 {
                    return Err(Error::InvalidFunctionClass("too many deterministic tables to enumerate"));
                }
                Ok(())
            }
            _ => Err(Error::InvalidFunctionClass("quantizer family does not match the source")),
        }
    }

    /// Every quantizer of the family (deterministic tables for `table_bins`).
    pub fn members(&self, src: &SourceSpec) -> Result<Vec<Quantizer>> {
        self.validate(src)?;
        match &self.family {
            QuantizerFamily::ThresholdGrid(ts) => ts.iter().map(|&t| Quantizer::threshold(t)).collect(),
            QuantizerFamily::TableBins(k) => {
                let bins = src.bin_count().unwrap_or(0);
                let total = k.pow(bins as u32);
                (0..total)
                    .map(|mut code| {
                        let assign: Vec<usize> = (0..bins)
                            .map(|_| {
                                let z = code % k;
                                code /= k;
                                z
                            })
                            .collect();
                        Quantizer::deterministic(&assign, *k)
                    })
                    .collect()
            }
        }
    }
}

/// `M_n = max |φ(α)|` over `α ∈ [−B, B]`, sampled on 1001 points.
pub fn loss_bound(phi: &SurrogateLoss, gamma_bound: f64) -> f64 {
    linear_grid(-gamma_bound, gamma_bound, 1001).into_iter().map(|a| phi.eval(a).abs()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErmResult {
    pub gamma_star: Discriminant,
    pub q_star: Quantizer,
    pub empirical_risk: f64,
    pub population_phi_risk: f64,
    pub bayes_risk: f64,
    pub excess_bayes: f64,
    /// Position of the chosen threshold in the grid.
    pub t_index: Option<usize>,
    /// Objective after each round of alternating minimization.
    pub objective_trace: Vec<f64>,
}

/// `(1/n) Σᵢ Σ_z φ(yᵢ·γ(z))·Q(z|xᵢ)`.
pub fn empirical_phi_risk(phi: &SurrogateLoss, gamma: &Discriminant, q: &Quantizer, s: &SampleSet) -> Result<f64> {
    if gamma.len() != q.z_count() {
        return Err(Error::DimensionMismatch { expected: q.z_count(), got: gamma.len() });
    }
    let mut total = 0.0;
    for (&x, &y) in s.x.iter().zip(&s.y) {
        for (z, &g) in gamma.values().iter().enumerate() {
            let w = q.prob(z, x);
            if w > 0.0 {
                total += phi.eval(f64::from(y) * g) * w;
            }
        }
    }
    Ok(total / s.len() as f64)
}

/// Best `γ` for one cell holding `pos` positive and `neg` negative points.
fn cell_fit(phi: &SurrogateLoss, pos: f64, neg: f64, n: f64, bound: f64) -> (f64, f64) {
    let m = ternary_min(|g| (pos * phi.eval(g) + neg * phi.eval(-g)) / n, -bound, bound, GAMMA_TOL);
    (m.arg, m.value)
}

/// Minimize the empirical φ-risk jointly over `γ ∈ [−B, B]^Z` and the
/// quantizer family.
///
/// Threshold grids are searched exhaustively; ties go to the lowest threshold.
/// Tables use alternating minimization from the contiguous assignment
/// `bin b ↦ ⌊b·k / bins⌋`.
pub fn joint_erm(phi: &SurrogateLoss, s: &SampleSet, fc: &FunctionClassSpec) -> Result<ErmResult> {
    if !phi.is_convex() {
        return Err(Error::NonConvexLoss("joint ERM needs a convex loss"));
    }
    fc.validate(&s.src)?;
    if !loss_bound(phi, fc.gamma_bound).is_finite() {
        return Err(Error::InvalidFunctionClass("loss is unbounded on [-B, B]"));
    }
    let n = s.len() as f64;
    let bound = fc.gamma_bound;
    let (gamma, quantizer, risk, t_index, trace) = match &fc.family {
        QuantizerFamily::ThresholdGrid(ts) => {
            let mut pos: Vec<f64> = Vec::new();
            let mut neg: Vec<f64> = Vec::new();
            for (&x, &y) in s.x.iter().zip(&s.y) {
                if y > 0 {
                    pos.push(x);
                } else {
                    neg.push(x);
                }
            }
            pos.sort_by(f64::total_cmp);
            neg.sort_by(f64::total_cmp);
            let mut best: Option<(f64, usize, [f64; 2])> = None;
            for (k, &t) in ts.iter().enumerate() {
                let p0 = pos.partition_point(|&x| x < t) as f64;
                let n0 = neg.partition_point(|&x| x < t) as f64;
                let cells = [(p0, n0), (pos.len() as f64 - p0, neg.len() as f64 - n0)];
                let fits = cells.map(|(p, m)| cell_fit(phi, p, m, n, bound));
                let total = fits[0].1 + fits[1].1;
                if best.is_none_or(|(b, _, _)| total < b) {
                    best = Some((total, k, [fits[0].0, fits[1].0]));
                }
            }
            let (risk, k, g) = best.expect("grid is non-empty");
            (Discriminant::new(g.to_vec()), Quantizer::threshold(ts[k])?, risk, Some(k), Vec::new())
        }
        QuantizerFamily::TableBins(k) => {
            let (gamma, q, risk, trace) = alternating_min(phi, s, *k, bound)?;
            (gamma, q, risk, None, trace)
        }
    };
    let (mu, pi) = induce_masses(&quantizer, &s.src)?;
    let population_phi_risk = raw_phi_risk(phi, &gamma, &mu, &pi);
    let bayes = raw_pair_bayes(&gamma, &mu, &pi);
    let excess = bayes - family_bayes_optimum(&s.src, fc)?;
    Ok(ErmResult {
        gamma_star: gamma,
        q_star: quantizer,
        empirical_risk: risk,
        population_phi_risk,
        bayes_risk: bayes,
        excess_bayes: excess,
        t_index,
        objective_trace: trace,
    })
}

fn alternating_min(
    phi: &SurrogateLoss,
    s: &SampleSet,
    k: usize,
    bound: f64,
) -> Result<(Discriminant, Quantizer, f64, Vec<f64>)> {
    let bins = s.src.bin_count().ok_or(Error::InvalidFunctionClass("table bins need a binned source"))?;
    let n = s.len() as f64;
    let mut counts = alloc::vec![(0.0_f64, 0.0_f64); bins];
    for (&x, &y) in s.x.iter().zip(&s.y) {
        let b = x as usize;
        if b >= bins {
            return Err(Error::InvalidArgument("sample bin out of range"));
        }
        if y > 0 {
            counts[b].0 += 1.0;
        } else {
            counts[b].1 += 1.0;
        }
    }
    let mut assign: Vec<usize> = (0..bins).map(|b| b * k / bins).collect();
    let mut gamma = alloc::vec![0.0; k];
    let mut trace = Vec::new();
    let mut previous = f64::INFINITY;
    for _ in 0..ALT_MAX_ROUNDS {
        // γ-step: pool the bins of each cell
        let mut pooled = alloc::vec![(0.0, 0.0); k];
        for (b, &z) in assign.iter().enumerate() {
            pooled[z].0 += counts[b].0;
            pooled[z].1 += counts[b].1;
        }
        for (z, &(p, m)) in pooled.iter().enumerate() {
            gamma[z] = cell_fit(phi, p, m, n, bound).0;
        }
        // Q-step: each bin moves to its cheapest cell, lowest index on ties
        let loss_pos: Vec<f64> = gamma.iter().map(|&g| phi.eval(g)).collect();
        let loss_neg: Vec<f64> = gamma.iter().map(|&g| phi.eval(-g)).collect();
        let mut objective = 0.0;
        for (b, &(p, m)) in counts.iter().enumerate() {
            let cost = |z: usize| p * loss_pos[z] + m * loss_neg[z];
            let mut best = 0;
            for z in 1..k {
                if cost(z) < cost(best) {
                    best = z;
                }
            }
            assign[b] = best;
            objective += cost(best);
        }
        objective /= n;
        trace.push(objective);
        let done = previous - objective < ALT_MIN_TOL;
        previous = objective;
        if done {
            break;
        }
    }
    let risk = *trace.last().expect("at least one round");
    Ok((Discriminant::new(gamma), Quantizer::deterministic(&assign, k)?, risk, trace))
}

/// φ-risk on raw masses; empty cells contribute nothing.
fn raw_phi_risk(phi: &SurrogateLoss, gamma: &Discriminant, mu: &[f64], pi: &[f64]) -> f64 {
    let mut total = 0.0;
    for (z, &g) in gamma.values().iter().enumerate() {
        if mu[z] > 0.0 {
            total += phi.eval(g) * mu[z];
        }
        if pi[z] > 0.0 {
            total += phi.eval(-g) * pi[z];
        }
    }
    total
}

fn raw_pair_bayes(gamma: &Discriminant, mu: &[f64], pi: &[f64]) -> f64 {
    gamma.values().iter().enumerate().map(|(z, &g)| if g > 0.0 { pi[z] } else { mu[z] }).sum()
}

/// `min_Q R_Bayes(Q)` over the quantizer family.
pub fn family_bayes_optimum(src: &SourceSpec, fc: &FunctionClassSpec) -> Result<f64> {
    let mut best = f64::INFINITY;
    for q in fc.members(src)? {
        let (mu, pi) = induce_masses(&q, src)?;
        best = best.min(min_mass(&mu, &pi));
    }
    Ok(best)
}

/// Population excess Bayes risk of `(γ, Q)` over the family optimum.
pub fn excess_bayes_risk(gamma: &Discriminant, q: &Quantizer, src: &SourceSpec, fc: &FunctionClassSpec) -> Result<f64> {
    let (mu, pi) = induce_masses(q, src)?;
    if gamma.len() != mu.len() {
        return Err(Error::DimensionMismatch { expected: mu.len(), got: gamma.len() });
    }
    Ok(raw_pair_bayes(gamma, &mu, &pi) - family_bayes_optimum(src, fc)?)
}

/// The constant `c` of a loss whose generator is `−c·min(u, 1) + a·u + b`
/// with `a = b`.
pub fn variational_constant(phi: &SurrogateLoss) -> Result<f64> {
    let f = phi.closed_generator().unwrap_or_else(|| Generator::induced(phi.clone()));
    let r = variational_family_check(&f)?;
    if !r.verdict || (r.a - r.b).abs() > 1e-6 {
        return Err(Error::NotVariationalFamily { residual: r.residual, c: r.c });
    }
    Ok(r.c)
}

/// Both sides of `c/2·(R_Bayes(γ, Q) − R*_Bayes) ≤ R_φ(γ, Q) − R*_φ`, with the
/// optima taken over the family together with `Q` itself.
pub fn excess_risk_bound(
    phi: &SurrogateLoss,
    gamma: &Discriminant,
    q: &Quantizer,
    src: &SourceSpec,
    fc: &FunctionClassSpec,
) -> Result<(f64, f64)> {
    let c = variational_constant(phi)?;
    let m = induce_measures(q, src)?;
    let (bayes_star, phi_star) = family_optima(phi, q, src, fc)?;
    let lhs = 0.5 * c * (bayes_risk_of_pair(gamma, &m)? - bayes_star);
    let rhs = phi_risk(phi, gamma, &m)? - phi_star;
    Ok((lhs, rhs))
}

/// `(R_φ(Q) − R*_φ, c·(R_Bayes(Q) − R*_Bayes))`; the two agree for losses in
/// the variational family with `a = b`.
pub fn excess_identity(phi: &SurrogateLoss, q: &Quantizer, src: &SourceSpec, fc: &FunctionClassSpec) -> Result<(f64, f64)> {
    let c = variational_constant(phi)?;
    let m = induce_measures(q, src)?;
    let (bayes_star, phi_star) = family_optima(phi, q, src, fc)?;
    Ok((optimal_phi_risk(phi, &m).0 - phi_star, c * (bayes_risk(&m) - bayes_star)))
}

fn family_optima(phi: &SurrogateLoss, q: &Quantizer, src: &SourceSpec, fc: &FunctionClassSpec) -> Result<(f64, f64)> {
    let mut bayes_star = f64::INFINITY;
    let mut phi_star = f64::INFINITY;
    for member in fc.members(src)?.iter().chain(core::iter::once(q)) {
        let m = induce_measures(member, src)?;
        bayes_star = bayes_star.min(bayes_risk(&m));
        phi_star = phi_star.min(optimal_phi_risk(phi, &m).0);
    }
    Ok((bayes_star, phi_star))
}

/// One replicate of the consistency experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyRow {
    pub loss: String,
    pub n: usize,
    pub seed: u64,
    pub excess_bayes: f64,
    pub t_selected: Option<f64>,
}

pub fn consistency_run(
    phi: &SurrogateLoss,
    n: usize,
    seed: u64,
    src: &SourceSpec,
    fc: &FunctionClassSpec,
) -> Result<ConsistencyRow> {
    let s = generate_samples(src, n, seed)?;
    let r = joint_erm(phi, &s, fc)?;
    let t_selected = match r.q_star {
        Quantizer::Threshold(t) => Some(t),
        Quantizer::Table(_) => None,
    };
    Ok(ConsistencyRow { loss: String::from(phi.name()), n, seed, excess_bayes: r.excess_bayes, t_selected })
}

/// Every `(loss, n, seed)` replicate, in that nesting order.
pub fn consistency_sweep(
    losses: &[SurrogateLoss],
    n_list: &[usize],
    seeds: &[u64],
    src: &SourceSpec,
    fc: &FunctionClassSpec,
) -> Result<Vec<ConsistencyRow>> {
    let mut rows = Vec::new();
    for phi in losses {
        if !phi.is_convex() {
            return Err(Error::NonConvexLoss("consistency needs convex losses"));
        }
        for &n in n_list {
            for &seed in seeds {
                rows.push(consistency_run(phi, n, seed, src, fc)?);
            }
        }
    }
    Ok(rows)
}

/// Median of a non-empty slice (mean of the middle pair for even lengths).
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

/// Per-`(loss, n)` medians of the excess Bayes risk, in first-seen order.
pub fn median_summary(rows: &[ConsistencyRow]) -> Vec<(String, usize, f64)> {
    let mut keys: Vec<(String, usize)> = Vec::new();
    for r in rows {
        if !keys.iter().any(|(l, n)| *l == r.loss && *n == r.n) {
            keys.push((r.loss.clone(), r.n));
        }
    }
    keys.into_iter()
        .map(|(loss, n)| {
            let vals: Vec<f64> = rows.iter().filter(|r| r.loss == loss && r.n == n).map(|r| r.excess_bayes).collect();
            let med = median(&vals);
            (loss, n, med)
        })
        .collect()
}

/// A source on which two generators pick different thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct MismatchWitness {
    pub src: SourceSpec,
    pub thresholds: Vec<f64>,
    /// `−I_{f₁}` at each threshold.
    pub risk_f1: Vec<f64>,
    pub risk_f2: Vec<f64>,
    pub bayes: Vec<f64>,
    pub argmin_f1: usize,
    pub argmin_f2: usize,
    /// `R_Bayes` at the `f₂` choice minus `R_Bayes` at the `f₁` choice.
    pub gap: f64,
}

/// Sources `(a, b, c, q)` with `a ∈ {0.25, 0.5, 1, 2}`, `b − a ∈ {0.5, 1, 2, 4}`,
/// `c − b ∈ {0.5, 1, 2, 4, 8}` and `q ∈ {0.1, …, 0.9}`.
pub fn default_source_grid() -> Vec<SourceSpec> {
    let mut out = Vec::new();
    for a in [0.25, 0.5, 1.0, 2.0] {
        for db in [0.5, 1.0, 2.0, 4.0] {
            for dc in [0.5, 1.0, 2.0, 4.0, 8.0] {
                for k in 1..10 {
                    let b = a + db;
                    let src = SourceSpec::uniform_pair(a, b, b + dc, k as f64 / 10.0).expect("valid by construction");
                    out.push(src);
                }
            }
        }
    }
    out
}

/// Lowest index whose value is within a relative `1e−12` of the minimum, and
/// that level.
fn near_argmin(values: &[f64]) -> (usize, f64) {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let level = min + 1e-12 * min.abs().max(1.0);
    (values.iter().position(|&v| v <= level).unwrap_or(0), level)
}

/// Search `sources` for one where minimizing `−I_{f₁}` and `−I_{f₂}` over a
/// `points`-threshold grid select different thresholds: each generator's
/// choice must be strictly worse under the other, beyond round-off ties.
///
/// Witnesses are ranked by the smaller of the Bayes-risk gap and the margin
/// by which `f₂` prefers its own threshold, so the returned source is one
/// where the disagreement is both costly and clear-cut.
pub fn quantizer_mismatch(f1: &Generator, f2: &Generator, sources: &[SourceSpec], points: usize) -> Result<MismatchWitness> {
    let mut best: Option<(f64, MismatchWitness)> = None;
    for src in sources {
        let fc = FunctionClassSpec::threshold_grid(src, points, 1.0)?;
        let QuantizerFamily::ThresholdGrid(ts) = fc.family else { unreachable!() };
        let mut risk_f1 = Vec::with_capacity(ts.len());
        let mut risk_f2 = Vec::with_capacity(ts.len());
        let mut bayes = Vec::with_capacity(ts.len());
        for &t in &ts {
            let m = induce_measures(&Quantizer::threshold(t)?, src)?;
            risk_f1.push(-f_divergence(f1, &m)?);
            risk_f2.push(-f_divergence(f2, &m)?);
            bayes.push(bayes_risk(&m));
        }
        let (i1, level1) = near_argmin(&risk_f1);
        let (i2, level2) = near_argmin(&risk_f2);
        if risk_f1[i2] <= level1 || risk_f2[i1] <= level2 {
            continue;
        }
        let gap = bayes[i2] - bayes[i1];
        let score = gap.min(risk_f2[i1] - risk_f2[i2]);
        if best.as_ref().is_none_or(|(s, _)| score > *s) {
            let w = MismatchWitness {
                src: src.clone(),
                thresholds: ts,
                risk_f1,
                risk_f2,
                bayes,
                argmin_f1: i1,
                argmin_f2: i2,
                gap,
            };
            best = Some((score, w));
        }
    }
    best.map(|(_, w)| w).ok_or(Error::NoWitnessFound)
}
