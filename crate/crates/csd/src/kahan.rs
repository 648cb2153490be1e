//! Compensated summation.
//!
//! Long pairwise kernel sums mix terms spanning many orders of magnitude;
//! the accumulators here keep the rounding error of a length-n sum at
//! O(ε) instead of O(nε).

/// Kahan–Neumaier compensated accumulator.
///
/// The Neumaier variant also handles the case where the incoming term is
/// larger than the running sum, which happens routinely with Stein kernels
/// near the corners of the cube.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    /// Fold another accumulator into this one (fixed-order block reduction).
    #[inline]
    pub fn merge(&mut self, other: &KahanSum) {
        self.add(other.sum);
        self.add(other.compensation);
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}
