//! Hybrid fuzzy dynamic systems on time scales.
//!
//! Fuzzy numbers are stored as α-cuts on a shared grid ([`fuzzy`]); time
//! scales are finite sorted point sets ([`timescale`]). [`hukuhara`] provides
//! the Δ-Hukuhara derivative, [`hybrid`] and [`comparison`] solve the switched
//! fuzzy system and its scalar comparison system, and [`stability`] samples
//! practical-stability properties of both. [`dsl`] parses the expression
//! language used in configuration files.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`). The DSL
//! evaluates in `f64`; the aliases below name the common instantiations.

// Negated comparisons are deliberate: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod comparison;
pub mod dsl;
pub mod error;
pub mod fuzzy;
pub mod hukuhara;
pub mod hybrid;
pub mod io;
pub mod scalar;
pub mod stability;
pub mod timescale;

pub use error::{Error, Result, Span};
pub use scalar::Scalar;

pub type AlphaGridF64 = fuzzy::AlphaGrid<f64>;
pub type FuzzyNumberF64 = fuzzy::FuzzyNumber<f64>;
pub type FuzzyVectorF64 = fuzzy::FuzzyVector<f64>;
pub type TimeScaleF64 = timescale::TimeScale<f64>;
pub type FuzzyTrajectoryF64 = hukuhara::FuzzyTrajectory<f64>;
pub type HybridFuzzySystemF64 = hybrid::HybridFuzzySystem<f64>;
pub type ScalarHybridSystemF64 = comparison::ScalarHybridSystem<f64>;
pub type LyapunovFnF64 = stability::LyapunovFn<f64>;
pub type ClassKPairF64 = stability::ClassKPair<f64>;

pub type AlphaGridF32 = fuzzy::AlphaGrid<f32>;
pub type FuzzyNumberF32 = fuzzy::FuzzyNumber<f32>;
pub type FuzzyVectorF32 = fuzzy::FuzzyVector<f32>;
pub type TimeScaleF32 = timescale::TimeScale<f32>;
pub type FuzzyTrajectoryF32 = hukuhara::FuzzyTrajectory<f32>;
pub type HybridFuzzySystemF32 = hybrid::HybridFuzzySystem<f32>;
pub type ScalarHybridSystemF32 = comparison::ScalarHybridSystem<f32>;
