//! Compensated and order-deterministic summation.
//!
//! Every large sum in the toolkit goes through [`ordered_sum`]: the index
//! range is cut into fixed-size chunks, each chunk is accumulated with
//! Neumaier's compensated sum in index order, and the chunk totals are then
//! combined by a pairwise tree whose shape depends only on the chunk count.
//! The result is therefore bitwise identical for any rayon thread count,
//! including the serial path.

use std::ops::{Add, Sub};

use num_complex::Complex64;
use rayon::prelude::*;

/// Number of terms accumulated serially before a chunk is closed.
pub const CHUNK_LEN: usize = 1024;

/// Values that can be accumulated by [`CompensatedSum`].
pub trait Summand: Copy + Send + Sync + Add<Output = Self> + Sub<Output = Self> {
    fn zero() -> Self;
    /// Neumaier correction term for `sum = a + b`.
    fn correction(sum: Self, a: Self, b: Self) -> Self;
}

impl Summand for f64 {
    fn zero() -> Self {
        0.0
    }

    #[inline]
    fn correction(sum: f64, a: f64, b: f64) -> f64 {
        if a.abs() >= b.abs() {
            (a - sum) + b
        } else {
            (b - sum) + a
        }
    }
}

impl Summand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    #[inline]
    fn correction(sum: Complex64, a: Complex64, b: Complex64) -> Complex64 {
        Complex64::new(f64::correction(sum.re, a.re, b.re), f64::correction(sum.im, a.im, b.im))
    }
}

/// Neumaier (improved Kahan) accumulator.
#[derive(Clone, Copy, Debug)]
pub struct CompensatedSum<T: Summand> {
    sum: T,
    compensation: T,
}

impl<T: Summand> Default for CompensatedSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Summand> CompensatedSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            compensation: T::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, value: T) {
        let t = self.sum + value;
        self.compensation = self.compensation + T::correction(t, self.sum, value);
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.compensation
    }
}

impl<T: Summand> Extend<T> for CompensatedSum<T> {
    fn extend<I: IntoIterator<Item = T>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

/// Compensated sum of an iterator in iteration order.
pub fn compensated<T: Summand, I: IntoIterator<Item = T>>(iter: I) -> T {
    let mut acc = CompensatedSum::new();
    acc.extend(iter);
    acc.value()
}

/// Pairwise tree reduction with a fixed shape: split at `len / 2`.
pub fn pairwise<T: Summand>(values: &[T]) -> T {
    match values.len() {
        0 => T::zero(),
        1 => values[0],
        n => {
            let (a, b) = values.split_at(n / 2);
            pairwise(a) + pairwise(b)
        }
    }
}

fn chunk_total<T: Summand, F: Fn(usize) -> T>(chunk: usize, n: usize, term: &F) -> T {
    let start = chunk * CHUNK_LEN;
    let end = (start + CHUNK_LEN).min(n);
    compensated((start..end).map(term))
}

/// Deterministic parallel sum of `term(0) + ... + term(n - 1)`.
pub fn ordered_sum<T: Summand, F>(n: usize, term: F) -> T
where
    F: Fn(usize) -> T + Sync,
{
    let chunks = n.div_ceil(CHUNK_LEN);
    let totals: Vec<T> = (0..chunks).into_par_iter().map(|c| chunk_total(c, n, &term)).collect();
    pairwise(&totals)
}

/// Serial reference for [`ordered_sum`]; produces the same bits.
pub fn ordered_sum_serial<T: Summand, F>(n: usize, term: F) -> T
where
    F: Fn(usize) -> T,
{
    let chunks = n.div_ceil(CHUNK_LEN);
    let totals: Vec<T> = (0..chunks).map(|c| chunk_total(c, n, &term)).collect();
    pairwise(&totals)
}
