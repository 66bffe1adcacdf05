//! Integrability probes for `psi = log|f|^2`, `f = z_1^d + ... + z_n^d`.
//!
//! Both probes integrate over `C^n` through the partition of unity
//! `chi_j = |d_j f|^2 / |grad f|^2` and the change of variables
//! `(z_{-j}, z_j) -> (z_{-j}, w = f)`, under which `chi_j dlambda_n` becomes
//! `dlambda(z_{-j}) dlambda(w) / |grad f|^2` summed over the `d` roots `z_j`.
//! All roots share the modulus `|w - sum_{k != j} z_k^d|^{1/d}`, and every
//! integrand here is radial, so the root sum is `d` times one term. The
//! integrand is symmetric in the coordinates, so the `n` charts contribute
//! equally.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::bump::profile;
use crate::error::{NumericError, Result};
use crate::sampler::{accumulate, Budget};
use crate::shell::{ShellEstimate, MAX_SHELL_T, MIN_SAMPLES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Trend {
    Convergent,
    Divergent,
    Inconclusive,
}

impl std::fmt::Display for Trend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Trend::Convergent => "CONVERGENT",
            Trend::Divergent => "DIVERGENT",
            Trend::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Growth from the first to the last estimate that counts as divergence.
pub const DIVERGENCE_FACTOR: f64 = 3.0;
/// Largest relative gap between consecutive tail estimates of a convergent
/// sequence.
pub const CAUCHY_TOLERANCE: f64 = 0.05;

/// DIVERGENT: strictly increasing with `last / first >= 3`. CONVERGENT: the
/// last two consecutive gaps are below 5% of the later value. Anything else
/// is INCONCLUSIVE.
pub fn classify_trend(values: &[f64]) -> Trend {
    if values.len() < 3 || values.iter().any(|v| !v.is_finite()) {
        return Trend::Inconclusive;
    }
    let increasing = values.windows(2).all(|p| p[1] > p[0]);
    let first = values[0];
    let last = values[values.len() - 1];
    if increasing && first > 0.0 && last >= DIVERGENCE_FACTOR * first {
        return Trend::Divergent;
    }
    let tail = &values[values.len() - 3..];
    let cauchy = tail
        .windows(2)
        .all(|p| p[1] != 0.0 && ((p[1] - p[0]) / p[1]).abs() < CAUCHY_TOLERANCE);
    if cauchy {
        Trend::Convergent
    } else {
        Trend::Inconclusive
    }
}

/// The answer of the exact layer: the Ohsawa measure of the Fermat cone is
/// locally integrable iff `d <= n - 1`.
pub fn expected_trend(n: u32, d: u32) -> Trend {
    if d < n {
        Trend::Convergent
    } else {
        Trend::Divergent
    }
}

fn check_range(n: u32, d: u32) -> Result<()> {
    if !(2..=4).contains(&n) || !(1..=6).contains(&d) {
        return Err(NumericError::InvalidParameter(format!(
            "(n, d) = ({n}, {d}) outside 2 <= n <= 4, 1 <= d <= 6"
        )));
    }
    Ok(())
}

fn check_budget(budget: &Budget) -> Result<()> {
    if budget.samples < MIN_SAMPLES {
        return Err(NumericError::InvalidParameter(format!(
            "{} samples, at least {MIN_SAMPLES} required",
            budget.samples
        )));
    }
    Ok(())
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Draws `z_{-j} in C^{n-1}` with a radial density: log-uniform radius on
/// `[rho_lo, r_max]` mixed with a uniform ball of radius `rho_lo`.
struct RadialSampler {
    complex_dim: usize,
    rho_lo: f64,
    r_max: f64,
    inner_weight: f64,
    sphere_area: f64,
    ball_volume: f64,
}

impl RadialSampler {
    fn new(complex_dim: usize, rho_lo: f64, r_max: f64) -> Self {
        let k = complex_dim as u32;
        let pi_k = PI.powi(k as i32);
        RadialSampler {
            complex_dim,
            rho_lo,
            r_max,
            inner_weight: 0.05,
            // unit sphere S^{2k-1} and unit ball B^{2k} in R^{2k}
            sphere_area: 2.0 * pi_k / factorial(k - 1),
            ball_volume: pi_k / factorial(k),
        }
    }

    /// Fills `z` and returns `1 / density(z)`.
    fn sample(&self, rng: &mut ChaCha8Rng, z: &mut [Complex64]) -> f64 {
        let m = 2 * self.complex_dim;
        let mut norm_sq = 0.0;
        for zk in z.iter_mut() {
            let (x, y): (f64, f64) = (rng.sample(StandardNormal), rng.sample(StandardNormal));
            *zk = Complex64::new(x, y);
            norm_sq += x * x + y * y;
        }
        let log_ratio = (self.r_max / self.rho_lo).ln();
        let u: f64 = rng.random();
        let (rho, inv_density) = if u < self.inner_weight {
            let rho = self.rho_lo * (u / self.inner_weight).powf(1.0 / m as f64);
            (rho, self.ball_volume * self.rho_lo.powi(m as i32) / self.inner_weight)
        } else {
            let s = (u - self.inner_weight) / (1.0 - self.inner_weight);
            let rho = self.rho_lo * (s * log_ratio).exp();
            (
                rho,
                self.sphere_area * rho.powi(m as i32) * log_ratio / (1.0 - self.inner_weight),
            )
        };
        let scale = rho / norm_sq.sqrt();
        for zk in z.iter_mut() {
            *zk *= scale;
        }
        inv_density
    }
}

/// `|z_{-j}|^2`, `sum_{k != j} |z_k|^{2(d-1)}` and `sum_{k != j} z_k^d`.
fn partial_sums(z: &[Complex64], d: u32) -> (f64, f64, Complex64) {
    let mut sq = 0.0;
    let mut grad = 0.0;
    let mut power = Complex64::new(0.0, 0.0);
    for zk in z {
        let r2 = zk.norm_sqr();
        sq += r2;
        grad += r2.powi(d as i32 - 1);
        power += zk.powu(d);
    }
    (sq, grad, power)
}

/// `sum over roots of weight(|z|^2) / |grad f|^2` for `f = w` above `z_{-j}`.
fn root_sum(d: u32, sq: f64, grad: f64, power: Complex64, w: Complex64, weight: impl Fn(f64) -> f64) -> f64 {
    let df = f64::from(d);
    let r2 = (w - power).norm().powf(2.0 / df);
    let grad_f = df * df * (grad + r2.powi(d as i32 - 1));
    df * weight(sq + r2) / grad_f
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FermatProbe {
    pub n: u32,
    pub d: u32,
    pub t_grid: Vec<f64>,
    pub estimates: Vec<ShellEstimate>,
    pub trend: Trend,
    pub expected: Trend,
}

pub const DEFAULT_T_GRID: [f64; 4] = [-8.0, -12.0, -16.0, -20.0];

/// Radius of the bump `profile(|z| / R)` around the cone point.
pub const FERMAT_BUMP_RADIUS: f64 = 1.0;

fn check_grid(grid: &[f64], what: &str) -> Result<()> {
    if grid.len() < 3 {
        return Err(NumericError::InsufficientGrid {
            needed: 3,
            got: grid.len(),
        });
    }
    if grid.windows(2).any(|p| p[1] >= p[0]) {
        return Err(NumericError::InvalidParameter(format!(
            "{what} grid must be strictly decreasing"
        )));
    }
    Ok(())
}

/// Shell integrals `int_{t < log|f|^2 < t+1} g~ |f|^{-2} dlambda_n` with
/// `g~ = profile(|z|)`, on a decreasing grid of levels.
pub fn fermat_probe(n: u32, d: u32, t_grid: &[f64], budget: &Budget) -> Result<FermatProbe> {
    check_range(n, d)?;
    check_budget(budget)?;
    check_grid(t_grid, "t")?;
    if let Some(t) = t_grid.iter().find(|t| !(t.is_finite() && **t <= MAX_SHELL_T)) {
        return Err(NumericError::InvalidParameter(format!(
            "shell level t = {t} must be <= {MAX_SHELL_T}"
        )));
    }
    let t_min = t_grid.iter().copied().fold(f64::INFINITY, f64::min);
    // the shell at level t sits at |z| ~ e^{t / 2d}
    let rho_lo = (t_min / (2.0 * f64::from(d))).exp() * (-2.0f64).exp();
    let sampler = RadialSampler::new(n as usize - 1, rho_lo, FERMAT_BUMP_RADIUS);
    let moments = accumulate(budget, t_grid.len(), |rng, out| {
        let mut z = vec![Complex64::new(0.0, 0.0); n as usize - 1];
        let inv_p = sampler.sample(rng, &mut z);
        let (sq, grad, power) = partial_sums(&z, d);
        let v: f64 = rng.random();
        let theta = 2.0 * PI * rng.random::<f64>();
        for (o, &t) in out.iter_mut().zip(t_grid) {
            // log-radial w on the slab t/2 < log|w| < (t+1)/2: dlambda(w) / |w|^2 = du dtheta
            let w = Complex64::from_polar((0.5 * t + 0.5 * v).exp(), theta);
            let s = root_sum(d, sq, grad, power, w, |r2| profile(r2.sqrt() / FERMAT_BUMP_RADIUS));
            *o = f64::from(n) * PI * s * inv_p;
        }
    })?;
    let estimates: Vec<ShellEstimate> = t_grid
        .iter()
        .zip(moments)
        .map(|(&t, m)| ShellEstimate {
            t,
            value: m.mean,
            std_error: m.std_error,
            samples: budget.samples,
            seed: budget.seed,
        })
        .collect();
    let trend = classify_trend(&estimates.iter().map(|e| e.value).collect::<Vec<_>>());
    Ok(FermatProbe {
        n,
        d,
        t_grid: t_grid.to_vec(),
        estimates,
        trend,
        expected: expected_trend(n, d),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TubeEstimate {
    pub delta: f64,
    #[serde(rename = "estimate")]
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DfProbe {
    pub n: u32,
    pub d: u32,
    pub delta_grid: Vec<f64>,
    pub estimates: Vec<TubeEstimate>,
    pub trend: Trend,
    pub expected: Trend,
}

pub const DEFAULT_DELTA_GRID: [f64; 4] = [1e-2, 1e-10, 1e-20, 1e-30];

/// `vol({|f| < delta} ∩ {|z| < 1}) / (pi delta^2)` on a decreasing grid of
/// tube radii. By the co-area formula this tends to
/// `int_{f = 0, |z| < 1} dsigma / |grad f|^2`.
pub fn df_density_probe(n: u32, d: u32, delta_grid: &[f64], budget: &Budget) -> Result<DfProbe> {
    check_range(n, d)?;
    check_budget(budget)?;
    check_grid(delta_grid, "tube radius")?;
    if let Some(x) = delta_grid.iter().find(|x| !(x.is_finite() && **x > 0.0 && **x < 1.0)) {
        return Err(NumericError::InvalidParameter(format!(
            "tube radius {x} must lie in (0, 1)"
        )));
    }
    let delta_min = delta_grid.iter().copied().fold(f64::INFINITY, f64::min);
    let rho_lo = delta_min.powf(1.0 / f64::from(d)) * (-2.0f64).exp();
    let sampler = RadialSampler::new(n as usize - 1, rho_lo, 1.0);
    let moments = accumulate(budget, delta_grid.len(), |rng, out| {
        let mut z = vec![Complex64::new(0.0, 0.0); n as usize - 1];
        let inv_p = sampler.sample(rng, &mut z);
        let (sq, grad, power) = partial_sums(&z, d);
        let s: f64 = rng.random::<f64>().sqrt();
        let theta = 2.0 * PI * rng.random::<f64>();
        for (o, &delta) in out.iter_mut().zip(delta_grid) {
            // w uniform in the disc |w| < delta
            let w = Complex64::from_polar(delta * s, theta);
            let r = root_sum(d, sq, grad, power, w, |r2| if r2 < 1.0 { 1.0 } else { 0.0 });
            *o = f64::from(n) * r * inv_p;
        }
    })?;
    let estimates: Vec<TubeEstimate> = delta_grid
        .iter()
        .zip(moments)
        .map(|(&delta, m)| TubeEstimate {
            delta,
            value: m.mean,
            std_error: m.std_error,
            samples: budget.samples,
            seed: budget.seed,
        })
        .collect();
    let trend = classify_trend(&estimates.iter().map(|e| e.value).collect::<Vec<_>>());
    Ok(DfProbe {
        n,
        d,
        delta_grid: delta_grid.to_vec(),
        estimates,
        trend,
        expected: expected_trend(n, d),
    })
}
