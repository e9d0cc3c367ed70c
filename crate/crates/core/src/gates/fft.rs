//! 3-D FFT over x-fastest arrays, applied one axis at a time.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{FftDirection, FftPlanner};

/// In-place unnormalized 3-D transform of `data` laid out x-fastest.
pub(crate) fn fft3(data: &mut [Complex64], dims: [usize; 3], direction: FftDirection) {
    let [nx, ny, nz] = dims;
    debug_assert_eq!(data.len(), nx * ny * nz);
    let mut planner = FftPlanner::new();

    // x lines are contiguous
    let fx = planner.plan_fft(nx, direction);
    data.par_chunks_mut(nx).for_each(|line| fx.process(line));

    // y lines: within each z-slab, stride nx
    let fy = planner.plan_fft(ny, direction);
    data.par_chunks_mut(nx * ny).for_each(|slab| {
        let mut line = vec![Complex64::default(); ny];
        for i in 0..nx {
            for j in 0..ny {
                line[j] = slab[i + nx * j];
            }
            fy.process(&mut line);
            for j in 0..ny {
                slab[i + nx * j] = line[j];
            }
        }
    });

    // z lines: gather per (i, j) column; transpose through a scratch buffer
    let fz = planner.plan_fft(nz, direction);
    let plane = nx * ny;
    let mut columns: Vec<Complex64> = vec![Complex64::default(); data.len()];
    columns.par_chunks_mut(nz).enumerate().for_each(|(col, line)| {
        for (k, v) in line.iter_mut().enumerate() {
            *v = data[col + plane * k];
        }
        fz.process(line);
    });
    data.par_chunks_mut(plane).enumerate().for_each(|(k, slab)| {
        for (col, v) in slab.iter_mut().enumerate() {
            *v = columns[col * nz + k];
        }
    });
}

/// Signed frequency index of FFT bin `m` for an axis of length `n`.
pub(crate) fn signed_index(m: usize, n: usize) -> i64 {
    if m < n.div_ceil(2) {
        m as i64
    } else {
        m as i64 - n as i64
    }
}

/// Angular wavenumber of FFT bin `m` for `n` samples at spacing `h`.
pub(crate) fn wavenumber(m: usize, n: usize, h: f64) -> f64 {
    2.0 * PI * signed_index(m, n) as f64 / (n as f64 * h)
}

/// True for the unpaired Nyquist bin of an even-length axis.
pub(crate) fn is_nyquist(m: usize, n: usize) -> bool {
    n.is_multiple_of(2) && m == n / 2
}

/// Bin holding the negated frequency of bin `m`.
pub(crate) fn mirror(m: usize, n: usize) -> usize {
    (n - m) % n
}
