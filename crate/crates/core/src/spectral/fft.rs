use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use crate::par;

/// Unnormalized in-place FFT over a row-major `n^dim` array.
///
/// Each pass transforms the contiguous last axis and then rotates the axes
/// by one with a transpose, so after `dim` passes every axis has been
/// transformed and the original layout is restored.
pub fn fft_nd(data: &mut Vec<Complex64>, dim: usize, n: usize, direction: FftDirection) {
    debug_assert_eq!(data.len(), n.pow(dim as u32));
    let fft = FftPlanner::new().plan_fft(n, direction);
    let rest = data.len() / n;
    let mut buf = vec![Complex64::new(0.0, 0.0); data.len()];
    for _ in 0..dim {
        par::for_each_chunk_mut(data, n, |line| {
            let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
            fft.process_with_scratch(line, &mut scratch);
        });
        if dim > 1 {
            // (rest, n) -> (n, rest)
            transpose(data, &mut buf, rest, n);
            std::mem::swap(data, &mut buf);
        }
    }
}

fn transpose(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize) {
    // dst has shape (cols, rows)
    par::for_each_chunk_mut_indexed(dst, rows, |c, out| {
        for (r, slot) in out.iter_mut().enumerate() {
            *slot = src[r * cols + c];
        }
    });
}

/// Type-I discrete sine transform,
/// `X_k = Σ_{i=1}^{N} x_i sin(π k i / (N+1))` for `k = 1..N`,
/// through an FFT of length `2(N+1)` of the odd extension.
/// Input and output are indexed from zero (`x[0] = x_1`).
pub fn dst1(x: &[Complex64]) -> Vec<Complex64> {
    let n = x.len();
    let m = 2 * (n + 1);
    let mut y = vec![Complex64::new(0.0, 0.0); m];
    for (i, v) in x.iter().enumerate() {
        y[i + 1] = *v;
        y[m - 1 - i] = -*v;
    }
    let fft = FftPlanner::new().plan_fft_forward(m);
    fft.process(&mut y);
    // Y_k = -2i X_k
    (1..=n).map(|k| y[k] * Complex64::new(0.0, 0.5)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn dst_matches_direct_sum() {
        let x: Vec<Complex64> = (0..13)
            .map(|i| Complex64::new((i as f64 * 0.7).sin(), (i as f64).cos()))
            .collect();
        let got = dst1(&x);
        let n = x.len();
        for k in 1..=n {
            let want: Complex64 = (1..=n)
                .map(|i| x[i - 1] * (PI * (k * i) as f64 / (n + 1) as f64).sin())
                .sum();
            assert!((got[k - 1] - want).norm() < 1e-12);
        }
    }

    #[test]
    fn nd_fft_matches_direct_dft() {
        let n = 4;
        let data: Vec<Complex64> = (0..n * n * n)
            .map(|i| Complex64::new((i as f64 * 0.31).sin(), (i as f64 * 0.17).cos()))
            .collect();
        let mut got = data.clone();
        fft_nd(&mut got, 3, n, FftDirection::Forward);
        for k in 0..n * n * n {
            let kk = [k / 16, (k / 4) % 4, k % 4];
            let mut want = Complex64::new(0.0, 0.0);
            for (j, v) in data.iter().enumerate() {
                let jj = [j / 16, (j / 4) % 4, j % 4];
                let phase: usize = (0..3).map(|a| kk[a] * jj[a]).sum();
                want += v * Complex64::from_polar(1.0, -2.0 * PI * phase as f64 / n as f64);
            }
            assert!((got[k] - want).norm() < 1e-11);
        }
    }
}
