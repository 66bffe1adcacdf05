use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{NumericError, Result};

/// The quartic spline `(1 - s^2)^2` on `[0, 1)`, zero beyond.
pub fn profile(s: f64) -> f64 {
    if s < 1.0 {
        let u = 1.0 - s * s;
        u * u
    } else {
        0.0
    }
}

/// `g(z_1..z_{n-1}) = prod_k profile(|z_k - c_k| / rho_k)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BumpFunction {
    pub center: Vec<Complex64>,
    pub radii: Vec<f64>,
}

impl BumpFunction {
    pub fn new(center: Vec<Complex64>, radii: Vec<f64>) -> Result<Self> {
        if center.len() != radii.len() {
            return Err(NumericError::InvalidParameter(format!(
                "{} centers for {} radii",
                center.len(),
                radii.len()
            )));
        }
        if let Some(r) = radii.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
            return Err(NumericError::EmptyRegion(format!("bump radius {r}")));
        }
        Ok(BumpFunction { center, radii })
    }

    /// Bump on real centers, the common case in tests and the CLI.
    pub fn real(center: &[f64], radii: &[f64]) -> Result<Self> {
        BumpFunction::new(center.iter().map(|&c| Complex64::new(c, 0.0)).collect(), radii.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// Smallest `|z_k|` on the support over the first `n_weighted` coordinates.
    pub fn min_modulus(&self, n_weighted: usize) -> f64 {
        self.center
            .iter()
            .zip(&self.radii)
            .take(n_weighted)
            .map(|(c, r)| c.norm() - r)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn volume(&self) -> f64 {
        self.radii.iter().map(|r| std::f64::consts::PI * r * r).product()
    }

    pub fn eval(&self, z: &[Complex64]) -> f64 {
        self.center
            .iter()
            .zip(&self.radii)
            .zip(z)
            .map(|((c, r), z)| profile((z - c).norm() / r))
            .product()
    }
}

/// How `g` is extended off `Y = {z_n = 0}`: `g~ = g(z') h(|z_n|)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extension {
    /// `h(r) = (1 - r^2)^2`.
    ProductBump,
    /// `h(r) = max(0, 1 - r)`.
    Tapered,
}

impl Extension {
    pub fn factor(self, r: f64) -> f64 {
        match self {
            Extension::ProductBump => profile(r),
            Extension::Tapered => (1.0 - r).max(0.0),
        }
    }
}

impl fmt::Display for Extension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Extension::ProductBump => "product_bump",
            Extension::Tapered => "tapered",
        })
    }
}

impl FromStr for Extension {
    type Err = NumericError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "product_bump" => Ok(Extension::ProductBump),
            "tapered" => Ok(Extension::Tapered),
            _ => Err(NumericError::UnknownExtension(s.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_shape() {
        assert_eq!(profile(0.0), 1.0);
        assert_eq!(profile(1.0), 0.0);
        assert_eq!(profile(2.0), 0.0);
        assert!((profile(0.5) - 0.5625).abs() < 1e-15);
    }

    #[test]
    fn bump_validation() {
        assert!(BumpFunction::real(&[0.5], &[0.0]).is_err());
        assert!(BumpFunction::real(&[0.5, 0.1], &[0.1]).is_err());
        let b = BumpFunction::real(&[0.5], &[0.1]).unwrap();
        assert!((b.min_modulus(1) - 0.4).abs() < 1e-15);
        assert_eq!(b.eval(&[Complex64::new(0.5, 0.0)]), 1.0);
        assert_eq!(b.eval(&[Complex64::new(0.65, 0.0)]), 0.0);
    }

    #[test]
    fn extension_tags() {
        assert_eq!("tapered".parse::<Extension>().unwrap(), Extension::Tapered);
        assert_eq!("product-bump".parse::<Extension>().unwrap(), Extension::ProductBump);
        assert!("gaussian".parse::<Extension>().is_err());
        assert_eq!(Extension::Tapered.factor(0.25), 0.75);
        assert_eq!(Extension::Tapered.factor(3.0), 0.0);
    }
}
