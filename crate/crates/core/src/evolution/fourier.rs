//! Unitary discrete Fourier transform between the momentum grid and its
//! dual position grid.
//!
//! With `ξ_j = -L + j dξ` and `x_k = (k - N/2) dx`, `dx dξ = 2π/N`, the phase
//! `e^{iξ_j x_k}` factors as `(-1)^{j + k - N/2} e^{2πi jk/N}`, so each axis
//! is a sign modulation around an unnormalized FFT.

use num_complex::Complex64;
use rustfft::FftPlanner;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Direction {
    /// `Σ_j φ_j e^{+iξ_j x_k}`
    ToPosition,
    /// `Σ_k f_k e^{-iξ_j x_k}`
    ToMomentum,
}

fn sign(i: usize) -> f64 {
    if i.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Transforms `data` (row-major, `shape[0]` outermost) in place along every
/// axis, without the `(dξ/√2π)^d` or `(dx/√2π)^d` scale.
pub(crate) fn transform(data: &mut [Complex64], shape: &[usize], direction: Direction) {
    let mut planner = FftPlanner::<f64>::new();
    let total: usize = shape.iter().product();
    debug_assert_eq!(total, data.len());
    let mut stride = total;
    for &n in shape {
        stride /= n;
        let fft = match direction {
            Direction::ToPosition => planner.plan_fft_inverse(n),
            Direction::ToMomentum => planner.plan_fft_forward(n),
        };
        let half = n / 2;
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        let block = n * stride;
        for base in (0..total).step_by(block) {
            for offset in 0..stride {
                let start = base + offset;
                for (i, v) in line.iter_mut().enumerate() {
                    *v = data[start + i * stride] * sign(i);
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (i, v) in line.iter().enumerate() {
                    data[start + i * stride] = v * sign(i + half);
                }
            }
        }
    }
}
