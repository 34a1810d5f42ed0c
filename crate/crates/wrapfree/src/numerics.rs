//! Small numerical kernels shared by the transform modules.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Polynomial extrapolation to zero of samples `(s_k, v_k)` (Neville scheme).
pub fn extrapolate_to_zero(s: &[f64], v: &[Complex64]) -> Complex64 {
    assert_eq!(s.len(), v.len());
    assert!(!s.is_empty());
    let mut p = v.to_vec();
    let n = s.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (s[i + m] * p[i] - s[i] * p[i + 1]) / (s[i + m] - s[i]);
        }
    }
    p[0]
}

/// Real-valued variant of [`extrapolate_to_zero`].
pub fn extrapolate_to_zero_real(s: &[f64], v: &[f64]) -> f64 {
    let cv: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    extrapolate_to_zero(s, &cv).re
}

/// Trigamma `ψ'(x)` for `x > 0`.
pub fn trigamma(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 20.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let x2 = 1.0 / (x * x);
    acc + 1.0 / x
        + x2 / 2.0
        + (1.0 / x) * x2 * (1.0 / 6.0 - x2 * (1.0 / 30.0 - x2 * (1.0 / 42.0 - x2 / 30.0)))
}

/// Taylor coefficients `a_0..a_{n-1}` of an analytic function sampled on `|z| = r`.
///
/// `f` is evaluated at `m ≥ n` equally spaced points; aliasing is of order `r^m`.
pub fn taylor_coefficients<E>(
    f: impl Fn(Complex64) -> Result<Complex64, E>,
    r: f64,
    n: usize,
    m: usize,
) -> Result<Vec<Complex64>, E> {
    assert!(m >= n);
    let mut buf = Vec::with_capacity(m);
    for k in 0..m {
        buf.push(f(Complex64::from_polar(r, TAU * k as f64 / m as f64))?);
    }
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(m).process(&mut buf);
    Ok(buf
        .iter()
        .take(n)
        .enumerate()
        .map(|(k, c)| c / (m as f64 * r.powi(k as i32)))
        .collect())
}

/// Counts strict interior local maxima of a sampled sequence.
pub fn count_local_maxima(v: &[f64]) -> usize {
    v.windows(3).filter(|w| w[1] > w[0] && w[1] > w[2]).count()
}

/// `cot(x)` for complex argument.
///
/// Written through `e^{±2iz}` so that large `|Im z|` does not overflow.
pub fn cot(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    if z.im >= 0.0 {
        let q = (2.0 * i * z).exp();
        i * (q + 1.0) / (q - 1.0)
    } else {
        let q = (-2.0 * i * z).exp();
        i * (1.0 + q) / (1.0 - q)
    }
}

/// Uniform grid of `n` points on `[a, b]`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect(),
    }
}

/// `n` equally spaced angles `2πk/n` in `[0, 2π)`.
pub fn angle_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| TAU * k as f64 / n as f64).collect()
}

/// Wrapped Cauchy density `(1/2π)(1 − e^{−2t})/|e^{ix} − e^{−t}|²` with respect to `dx`.
pub fn wrapped_cauchy_density(t: f64, x: f64) -> f64 {
    let q = (-t).exp();
    let d = Complex64::from_polar(1.0, x) - q;
    (1.0 - q * q) / (2.0 * PI * d.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extrapolation_is_exact_on_quadratics() {
        let s = [1e-2, 1e-3, 1e-4];
        let v: Vec<f64> = s.iter().map(|x| 3.0 + 2.0 * x - 5.0 * x * x).collect();
        assert!((extrapolate_to_zero_real(&s, &v) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn trigamma_known_values() {
        assert!((trigamma(1.0) - PI * PI / 6.0).abs() < 1e-12);
        assert!((trigamma(0.5) - PI * PI / 2.0).abs() < 1e-12);
        let direct: f64 = (0..2_000_000).map(|k| 1.0 / ((k as f64 + 65.3) * (k as f64 + 65.3))).sum();
        assert!((trigamma(65.3) - direct).abs() < 1e-6);
    }

    #[test]
    fn taylor_of_exponential() {
        let c = taylor_coefficients(|z| Ok::<_, ()>(z.exp()), 0.5, 8, 64).unwrap();
        let mut fact = 1.0;
        for (k, ck) in c.iter().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            assert!((ck - 1.0 / fact).norm() < 1e-13);
        }
    }
}
