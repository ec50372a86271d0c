//! Fuzzy numbers and fuzzy vectors in α-cut form.
//!
//! A fuzzy number is stored as one closed interval per level of a shared
//! [`AlphaGrid`]; every operation acts level by level. Fuzzy vectors are
//! tuples of fuzzy numbers (box-valued level sets), measured with the
//! max-norm Hausdorff metric.

mod grid;
mod interval;
mod number;
mod vector;

pub use grid::{AlphaGrid, DEFAULT_LEVELS};
pub use interval::{hausdorff_interval, Interval};
pub use number::{make_trapezoid, CutRecord, FuzzyNumber};
pub use vector::{vec_dist, FuzzyVector};
