//! Shell integrals `int_{t < psi < t+1} g~ e^{-psi} dlambda_n` for monomial
//! weights `psi = log(|z_n|^2 prod_k |z_k|^{2 a_k})`.
//!
//! With `u = log|z_n|` the shell is the slab
//! `(t - 2 log A)/2 < u < (t + 1 - 2 log A)/2`, `A = prod |z_k|^{a_k}`, of width
//! one half, and `e^{-psi} dlambda(z_n) = A^{-2} du dtheta`. Sampling `z'`
//! uniformly on the support of `g` and `u` uniformly in the slab therefore
//! gives an estimator without rejection for every `t`.

use std::f64::consts::PI;

use num_complex::Complex64;
use pairsing_core::ohsawa::MonomialWeight;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bump::{BumpFunction, Extension};
use crate::error::{NumericError, Result};
use crate::quadrature::limit_reference;
use crate::sampler::{accumulate, Budget};

pub const MIN_SAMPLES: u64 = 10_000;
pub const MAX_SHELL_T: f64 = -3.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShellEstimate {
    pub t: f64,
    #[serde(rename = "estimate")]
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

fn check_setup(w: &MonomialWeight, g: &BumpFunction, ts: &[f64], budget: &Budget) -> Result<()> {
    if g.dim() + 1 != w.n {
        return Err(NumericError::InvalidParameter(format!(
            "bump on C^{} for a weight on C^{}",
            g.dim(),
            w.n
        )));
    }
    if !w.a.is_empty() && g.min_modulus(w.a.len()) <= 0.0 {
        return Err(NumericError::InvalidParameter(
            "bump support meets a pole of the weight".into(),
        ));
    }
    if let Some(t) = ts.iter().find(|t| !(t.is_finite() && **t <= MAX_SHELL_T)) {
        return Err(NumericError::InvalidParameter(format!(
            "shell level t = {t} must be <= {MAX_SHELL_T}"
        )));
    }
    if budget.samples < MIN_SAMPLES {
        return Err(NumericError::InvalidParameter(format!(
            "{} samples, at least {MIN_SAMPLES} required",
            budget.samples
        )));
    }
    Ok(())
}

/// Shell estimates at every level in `ts`, all from the same draws.
pub fn shell_estimates(
    w: &MonomialWeight,
    g: &BumpFunction,
    extension: Extension,
    ts: &[f64],
    budget: &Budget,
) -> Result<Vec<ShellEstimate>> {
    check_setup(w, g, ts, budget)?;
    let a = w.a_f64();
    let volume = g.volume();
    let dim = g.dim();
    let moments = accumulate(budget, ts.len(), |rng, out| {
        let mut z = Vec::with_capacity(dim);
        for (c, r) in g.center.iter().zip(&g.radii) {
            let s: f64 = rng.random::<f64>().sqrt();
            let theta = 2.0 * PI * rng.random::<f64>();
            z.push(c + Complex64::from_polar(r * s, theta));
        }
        let v: f64 = rng.random();
        let log_a: f64 = a.iter().zip(&z).map(|(a, z)| a * z.norm().ln()).sum();
        // volume * g * A^{-2} * (2 pi) * (slab width 1/2)
        let base = volume * g.eval(&z) * (-2.0 * log_a).exp() * PI;
        for (o, &t) in out.iter_mut().zip(ts) {
            let u = 0.5 * (t - 2.0 * log_a) + 0.5 * v;
            *o = base * extension.factor(u.exp());
        }
    })?;
    Ok(ts
        .iter()
        .zip(moments)
        .map(|(&t, m)| ShellEstimate {
            t,
            value: m.mean,
            std_error: m.std_error,
            samples: budget.samples,
            seed: budget.seed,
        })
        .collect())
}

pub fn shell_integral(
    w: &MonomialWeight,
    g: &BumpFunction,
    extension: Extension,
    t: f64,
    budget: &Budget,
) -> Result<ShellEstimate> {
    Ok(shell_estimates(w, g, extension, &[t], budget)?.remove(0))
}

/// Least-squares fit of `value(t) = limit - amplitude * e^{exponent * t}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub limit: f64,
    pub amplitude: f64,
    pub exponent: f64,
    /// Root-mean-square residual.
    pub residual: f64,
}

fn linear_part(ts: &[f64], vs: &[f64], kappa: f64) -> (f64, f64, f64) {
    let n = ts.len() as f64;
    let xs: Vec<f64> = ts.iter().map(|t| (kappa * t).exp()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let mv = vs.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxv: f64 = xs.iter().zip(vs).map(|(x, v)| (x - mx) * (v - mv)).sum();
    let slope = if sxx > 0.0 { sxv / sxx } else { 0.0 };
    let limit = mv - slope * mx;
    let sse = xs.iter().zip(vs).map(|(x, v)| (v - limit - slope * x).powi(2)).sum();
    (limit, -slope, sse)
}

/// Variable projection: for fixed exponent the model is linear in
/// `(limit, amplitude)`; the exponent is found by a log-spaced scan followed
/// by golden-section refinement.
pub fn fit_decay(ts: &[f64], vs: &[f64]) -> Result<DecayFit, String> {
    if ts.len() != vs.len() || ts.len() < 3 {
        return Err(format!("need at least 3 points, got {}", ts.len().min(vs.len())));
    }
    if vs.iter().chain(ts).any(|x| !x.is_finite()) {
        return Err("non-finite data".into());
    }
    let sse = |k: f64| linear_part(ts, vs, k).2;
    let (lo, hi, steps) = (1e-3f64.ln(), 10f64.ln(), 400);
    let grid: Vec<f64> = (0..=steps)
        .map(|i| (lo + (hi - lo) * i as f64 / steps as f64).exp())
        .collect();
    let best = (0..grid.len())
        .min_by(|&i, &j| sse(grid[i]).total_cmp(&sse(grid[j])))
        .expect("non-empty grid");
    if best == 0 || best == grid.len() - 1 {
        return Err(format!(
            "decay exponent at the edge of the search range ({})",
            grid[best]
        ));
    }
    let (mut a, mut b) = (grid[best - 1], grid[best + 1]);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut c, mut d) = (b - phi * (b - a), a + phi * (b - a));
    for _ in 0..200 {
        if sse(c) < sse(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - phi * (b - a);
        d = a + phi * (b - a);
        if (b - a).abs() < 1e-14 * b.abs() {
            break;
        }
    }
    let exponent = 0.5 * (a + b);
    let (limit, amplitude, sse) = linear_part(ts, vs, exponent);
    Ok(DecayFit {
        limit,
        amplitude,
        exponent,
        residual: (sse / ts.len() as f64).sqrt(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitReport {
    pub estimates: Vec<ShellEstimate>,
    pub fit: Option<DecayFit>,
    pub fit_error: Option<String>,
    /// `pi * int g prod |z_k|^{-2 a_k}` by quadrature.
    pub reference: f64,
    /// `|fit.limit - reference| / reference`.
    pub relative_error: Option<f64>,
}

pub const MIN_GRID: usize = 4;

/// Fits the tapered shell integrals over a decreasing grid of levels.
pub fn limit_convergence_check(
    w: &MonomialWeight,
    g: &BumpFunction,
    t_grid: &[f64],
    budget: &Budget,
) -> Result<LimitReport> {
    if t_grid.len() < MIN_GRID {
        return Err(NumericError::InsufficientGrid {
            needed: MIN_GRID,
            got: t_grid.len(),
        });
    }
    if t_grid.windows(2).any(|p| p[1] >= p[0]) {
        return Err(NumericError::InvalidParameter(
            "t grid must be strictly decreasing".into(),
        ));
    }
    let estimates = shell_estimates(w, g, Extension::Tapered, t_grid, budget)?;
    let reference = limit_reference(&w.a_f64(), g);
    let vs: Vec<f64> = estimates.iter().map(|e| e.value).collect();
    let (fit, fit_error) = match fit_decay(t_grid, &vs) {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(e)),
    };
    let relative_error = fit.map(|f| (f.limit - reference).abs() / reference.abs());
    Ok(LimitReport {
        estimates,
        fit,
        fit_error,
        reference,
        relative_error,
    })
}

/// `|shell(ext_a) - shell(ext_b)|` at one level, both runs from one seed.
pub fn extension_difference(
    w: &MonomialWeight,
    g: &BumpFunction,
    ext_a: Extension,
    ext_b: Extension,
    t: f64,
    budget: &Budget,
) -> Result<f64> {
    let a = shell_integral(w, g, ext_a, t, budget)?;
    let b = shell_integral(w, g, ext_b, t, budget)?;
    Ok((a.value - b.value).abs())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtensionReport {
    pub t: Vec<f64>,
    pub tapered: Vec<ShellEstimate>,
    pub product_bump: Vec<ShellEstimate>,
    pub differences: Vec<f64>,
    /// Every difference is smaller than the one at the previous (larger) level.
    pub shrinks: bool,
}

pub const MAX_EXTENSION_T: f64 = -10.0;

pub fn extension_independence_check(
    w: &MonomialWeight,
    g: &BumpFunction,
    t: &[f64],
    budget: &Budget,
) -> Result<ExtensionReport> {
    if t.len() < 2 {
        return Err(NumericError::InsufficientGrid {
            needed: 2,
            got: t.len(),
        });
    }
    if let Some(bad) = t.iter().find(|t| **t > MAX_EXTENSION_T) {
        return Err(NumericError::InvalidParameter(format!(
            "level {bad} must be <= {MAX_EXTENSION_T}"
        )));
    }
    let mut t = t.to_vec();
    t.sort_by(|a, b| b.total_cmp(a));
    let tapered = shell_estimates(w, g, Extension::Tapered, &t, budget)?;
    let product_bump = shell_estimates(w, g, Extension::ProductBump, &t, budget)?;
    let differences: Vec<f64> = tapered
        .iter()
        .zip(&product_bump)
        .map(|(a, b)| (a.value - b.value).abs())
        .collect();
    let shrinks = differences.windows(2).all(|d| d[1] < d[0]);
    Ok(ExtensionReport {
        t,
        tapered,
        product_bump,
        differences,
        shrinks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use pairsing_core::Rational;

    fn weight_half() -> MonomialWeight {
        MonomialWeight::new(2, vec![Rational::new(1, 2)]).unwrap()
    }

    fn bump() -> BumpFunction {
        BumpFunction::real(&[0.5], &[0.1]).unwrap()
    }

    #[test]
    fn rejects_bad_setups() {
        let b = Budget::new(20_000, 0);
        assert!(shell_integral(&weight_half(), &bump(), Extension::Tapered, -2.0, &b).is_err());
        assert!(shell_integral(&weight_half(), &bump(), Extension::Tapered, -5.0, &Budget::new(100, 0)).is_err());
        let touching = BumpFunction::real(&[0.05], &[0.1]).unwrap();
        assert!(shell_integral(&weight_half(), &touching, Extension::Tapered, -5.0, &b).is_err());
        let wrong_dim = BumpFunction::real(&[0.5, 0.5], &[0.1, 0.1]).unwrap();
        assert!(shell_integral(&weight_half(), &wrong_dim, Extension::Tapered, -5.0, &b).is_err());
    }

    #[test]
    fn insufficient_grid() {
        let r = limit_convergence_check(&weight_half(), &bump(), &[-8.0, -12.0, -16.0], &Budget::new(20_000, 0));
        assert!(matches!(r, Err(NumericError::InsufficientGrid { needed: 4, got: 3 })));
    }

    #[test]
    fn fit_recovers_synthetic_decay() {
        let ts = [-3.0f64, -5.0, -7.0, -9.0, -11.0];
        let vs: Vec<f64> = ts.iter().map(|t| 2.0 - 0.7 * (0.8 * t).exp()).collect();
        let f = fit_decay(&ts, &vs).unwrap();
        assert!((f.exponent - 0.8).abs() < 1e-6, "{f:?}");
        assert!((f.limit - 2.0).abs() < 1e-9);
        assert!((f.amplitude - 0.7).abs() < 1e-6);
    }

    #[test]
    fn identical_extensions_differ_by_nothing() {
        let b = Budget::new(20_000, 3);
        let d = extension_difference(
            &weight_half(),
            &bump(),
            Extension::Tapered,
            Extension::Tapered,
            -12.0,
            &b,
        )
        .unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn estimates_are_nonnegative() {
        let b = Budget::new(20_000, 5);
        for ext in [Extension::Tapered, Extension::ProductBump] {
            for e in shell_estimates(&weight_half(), &bump(), ext, &[-3.0, -10.0, -30.0], &b).unwrap() {
                assert!(e.value >= 0.0);
            }
        }
    }
}
