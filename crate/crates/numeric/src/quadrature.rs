//! Deterministic quadrature for the limit of the shell integrals.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bump::{profile, BumpFunction};

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // Tricomi's initial guess, then Newton on P_n
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// `int_{|z - c| < rho} profile(|z - c| / rho) |z|^{-2a} dlambda`, in polar
/// coordinates around `c` (Gauss-Legendre in the radius, trapezoid in the
/// angle). Requires `|c| > rho` when `a > 0`.
pub fn weighted_disc_integral(c: Complex64, rho: f64, a: f64) -> f64 {
    const ANGLES: usize = 512;
    let nodes = gauss_legendre(64);
    let mut total = 0.0;
    for (x, w) in nodes {
        let s = 0.5 * (x + 1.0);
        let mut ring = 0.0;
        for j in 0..ANGLES {
            let theta = 2.0 * PI * j as f64 / ANGLES as f64;
            let z = c + Complex64::from_polar(rho * s, theta);
            ring += z.norm_sqr().powf(-a);
        }
        ring *= 2.0 * PI / ANGLES as f64;
        total += 0.5 * w * s * profile(s) * ring;
    }
    total * rho * rho
}

/// `pi * int g prod_k |z_k|^{-2 a_k} dlambda`, the limit of the shell
/// integrals as `t -> -infinity`.
pub fn limit_reference(a: &[f64], g: &BumpFunction) -> f64 {
    PI * g
        .center
        .iter()
        .zip(&g.radii)
        .enumerate()
        .map(|(k, (c, r))| weighted_disc_integral(*c, *r, a.get(k).copied().unwrap_or(0.0)))
        .product::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rules_are_exact_on_polynomials() {
        let rule = gauss_legendre(8);
        let w: f64 = rule.iter().map(|(_, w)| w).sum();
        assert!((w - 2.0).abs() < 1e-14);
        // degree 14 is within 2n - 1 = 15
        let i: f64 = rule.iter().map(|(x, w)| w * x.powi(14)).sum();
        assert!((i - 2.0 / 15.0).abs() < 1e-14);
    }

    #[test]
    fn unweighted_disc_integral() {
        // 2 pi rho^2 int_0^1 s (1 - s^2)^2 ds = pi rho^2 / 3
        let v = weighted_disc_integral(Complex64::new(0.5, 0.0), 0.1, 0.0);
        assert!((v - PI * 0.01 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn centered_power_weight() {
        // |z - c| small against |c|: the weight is nearly constant |c|^{-2a}
        let c = Complex64::new(10.0, 0.0);
        let v = weighted_disc_integral(c, 0.01, 0.5);
        let flat = PI * 1e-4 / 3.0 / 10.0;
        assert!((v / flat - 1.0).abs() < 1e-5);
    }
}
