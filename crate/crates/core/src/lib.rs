//! Margin-based surrogate losses and the f-divergences they induce.
//!
//! The crate is `no_std` (it needs `alloc`). It covers:
//!
//! * [`measures`]: the finite measures `μ`, `π` a quantizer induces on `Z`,
//!   f-divergences, named divergences and the Bayes risk.
//! * [`generator`] and [`duality`]: convex generators `f`, their conjugates,
//!   `Ψ(β) = f*(−β)` and the realizability conditions on it.
//! * [`losses`]: the loss catalog, the loss → generator map and the
//!   generator + link → loss construction.
//! * [`risk`]: φ-risks, optimal φ-risks and the identity `R_φ(Q) = −I_f(μ, π)`.
//! * [`equivalence`]: affine equivalence of generators, symmetry, coercivity
//!   and Blackwell dominance of quantizers.
//! * [`erm`]: synthetic samples, joint (discriminant, quantizer) empirical
//!   risk minimization and the consistency / mismatch experiments.
//!
//! Extended reals are plain `f64` values where `+∞` is `f64::INFINITY`;
//! `−∞` is never produced by a generator.
#![no_std]

extern crate alloc;

pub mod duality;
pub mod equivalence;
pub mod erm;
pub mod error;
pub mod generator;
pub mod losses;
pub mod measures;
pub mod minimize;
pub mod risk;
pub mod rng;

pub use duality::{ConditionReport, Conjugate, ConjugateMethod, GridSpec, PsiFunction};
pub use error::{Error, Result};
pub use generator::{BaseGenerator, Generator};
pub use losses::{GLink, LossKind, SurrogateLoss};
pub use measures::{JointMeasure, Priors, Quantizer, SourceSpec};
pub use risk::{Discriminant, RiskReport};
