use crate::scalar::Scalar;

/// Closed bounded interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Scalar> Interval<T> {
    pub fn new(lo: T, hi: T) -> Self {
        debug_assert!(lo <= hi, "interval endpoints out of order");
        Self { lo, hi }
    }

    pub fn point(x: T) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn width(&self) -> T {
        self.hi - self.lo
    }

    /// Largest endpoint magnitude, i.e. the Hausdorff distance to `{0}`.
    pub fn magnitude(&self) -> T {
        self.lo.abs().max(self.hi.abs())
    }
}

/// Hausdorff distance between two intervals.
///
/// For closed intervals the sup-inf expression collapses to the larger
/// endpoint gap.
pub fn hausdorff_interval<T: Scalar>(a: Interval<T>, b: Interval<T>) -> T {
    (a.lo - b.lo).abs().max((a.hi - b.hi).abs())
}
