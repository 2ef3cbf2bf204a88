//! Arbitrary-length DFT by Bluestein's chirp-z reduction.
//!
//! Computes `X[a] = sum_x input[x] * exp(+2 pi i a x / n)`. Writing
//! `a x = (a^2 + x^2 - (a - x)^2) / 2` turns the transform into a linear
//! convolution with the chirp `exp(-i pi k^2 / n)`, which is evaluated with
//! power-of-two FFTs of length `L >= 2n - 1`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

/// `exp(i pi k^2 / n)` for `k = 0..n`, with `k^2` reduced mod `2n` in
/// integers so the phase carries no rounding from large `k`.
fn chirp(n: usize) -> Vec<Complex64> {
    let two_n = 2 * n as u128;
    (0..n)
        .map(|k| {
            let r = (k as u128 * k as u128) % two_n;
            Complex64::from_polar(1.0, PI * r as f64 / n as f64)
        })
        .collect()
}

/// Transform with positive exponent. `input.len()` may be any length.
pub fn dft_positive(input: &[Complex64]) -> Vec<Complex64> {
    let n = input.len();
    if n <= 1 {
        return input.to_vec();
    }
    let w = chirp(n);
    let len = (2 * n - 1).next_power_of_two();

    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(len);
    let inverse = planner.plan_fft_inverse(len);

    let zero = Complex64::new(0.0, 0.0);
    let mut signal = vec![zero; len];
    for (slot, (&x, &c)) in signal.iter_mut().zip(input.iter().zip(&w)) {
        *slot = x * c;
    }
    let mut kernel = vec![zero; len];
    kernel[0] = w[0].conj();
    for k in 1..n {
        let c = w[k].conj();
        kernel[k] = c;
        kernel[len - k] = c;
    }

    forward.process(&mut signal);
    forward.process(&mut kernel);
    for (s, k) in signal.iter_mut().zip(&kernel) {
        *s *= k;
    }
    inverse.process(&mut signal);

    let scale = 1.0 / len as f64;
    signal
        .iter()
        .zip(&w)
        .take(n)
        .map(|(&s, &c)| s * c * scale)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct(input: &[Complex64]) -> Vec<Complex64> {
        let n = input.len();
        (0..n)
            .map(|a| {
                input
                    .iter()
                    .enumerate()
                    .map(|(x, &v)| {
                        let r = (a * x) % n;
                        v * Complex64::from_polar(1.0, 2.0 * PI * r as f64 / n as f64)
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn matches_direct_transform_on_odd_lengths() {
        for n in [1usize, 2, 3, 5, 7, 12, 31, 97, 128, 257] {
            let input: Vec<Complex64> = (0..n)
                .map(|i| Complex64::new((i as f64 * 0.7).sin(), (i as f64 * 1.3).cos()))
                .collect();
            let fast = dft_positive(&input);
            let slow = direct(&input);
            for (f, s) in fast.iter().zip(&slow) {
                assert!((f - s).norm() < 1e-9 * n as f64, "n={n}");
            }
        }
    }

    #[test]
    fn delta_transforms_to_constant() {
        let mut input = vec![Complex64::new(0.0, 0.0); 11];
        input[0] = Complex64::new(1.0, 0.0);
        for v in dft_positive(&input) {
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }
}
