//! The pole divisor of the Ohsawa measure `dV[psi]` on `Y'` and its local
//! integrability.
//!
//! For `psi` with poles along `Y + D`, the measure `dV[psi]` pulled back to
//! `Y'` has density `|w|^{-2 P}` against a smooth volume, where
//!
//! ```text
//! P = (f^*Y - Y' + f^*D - K_{X'/X} - Z)|_{Y'}   (+ f^*B|_{Y'} with the twist e^{-phi_B})
//! ```
//!
//! and `Z` collects zeros of `dV_X` beyond the Jacobian of `f`. The measure is
//! locally integrable iff every coefficient of `P` is `< 1`.

use serde::Serialize;

use crate::adjunction::{klt_of_different, restrict_to_yprime};
use crate::divisor::{PrimeId, QDivisor, Space};
use crate::error::{Error, Result};
use crate::model::{BoundarySpec, SncModel};
use crate::rational::Rational;
use crate::singularities::Verdict;

/// The auxiliary divisor `D` of `psi`: its components on `X` and its pullback
/// to `X'` (whose strict-transform records must be present in the model).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxDivisor {
    pub on_x: QDivisor,
    pub pullback: QDivisor,
}

impl AuxDivisor {
    pub fn zero() -> Self {
        AuxDivisor {
            on_x: QDivisor::zero(Space::Ambient),
            pullback: QDivisor::zero(Space::Resolution),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OhsawaSetup {
    pub model: SncModel,
    pub aux_divisor: AuxDivisor,
    /// Zeros of `dV_X` on `X'` beyond `K_{X'/X}`.
    pub volume_zeros: QDivisor,
    /// `B` of the twist `e^{-phi_B}`; must be the model's boundary.
    pub twist: Option<BoundarySpec>,
}

impl OhsawaSetup {
    /// `psi = log|s_Y|^2`, no twist, `Z` taken from the model.
    pub fn plain(model: SncModel) -> Self {
        let volume_zeros = model.volume_zeros.clone();
        OhsawaSetup {
            model,
            aux_divisor: AuxDivisor::zero(),
            volume_zeros,
            twist: None,
        }
    }

    /// As [`OhsawaSetup::plain`] with the twist by the model's own boundary.
    pub fn twisted(model: SncModel) -> Self {
        let twist = Some(model.boundary.clone());
        OhsawaSetup {
            twist,
            ..OhsawaSetup::plain(model)
        }
    }

    fn check(&self) -> Result<()> {
        self.model.ensure_valid()?;
        let y_id = &self.model.boundary.y_id;
        let y_prime = self.model.strict_y_id();
        let d = &self.aux_divisor;
        if d.on_x.space() != Space::Ambient {
            return Err(Error::NamespaceMismatch {
                left: d.on_x.space(),
                right: Space::Ambient,
            });
        }
        if d.on_x.contains(y_id) {
            return Err(Error::InvalidSetup(format!("D contains {y_id}")));
        }
        for z in [&d.pullback, &self.volume_zeros] {
            if z.space() != Space::Resolution {
                return Err(Error::NamespaceMismatch {
                    left: z.space(),
                    right: Space::Resolution,
                });
            }
            if z.contains(y_prime) {
                return Err(Error::ContainsStrictTransform(y_prime.to_string()));
            }
        }
        if !self.volume_zeros.is_effective() {
            return Err(Error::InvalidSetup("volume zeros Z must be effective".into()));
        }
        if let Some(b) = &self.twist {
            if *b != self.model.boundary {
                return Err(Error::InvalidSetup(
                    "twist boundary differs from the model boundary".into(),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegrabilityVerdict {
    pub integrable: bool,
    pub pole_divisor_on_yprime: QDivisor,
    pub blocking_curve: Option<PrimeId>,
}

pub fn pole_divisor(s: &OhsawaSetup) -> Result<QDivisor> {
    s.check()?;
    let m = &s.model;
    let y_prime = QDivisor::single(Space::Resolution, m.strict_y_id(), Rational::one());
    let mut upstairs = m
        .pullback_y()
        .sub(&y_prime)?
        .add(&s.aux_divisor.pullback)?
        .sub(&m.relative_canonical())?
        .sub(&s.volume_zeros)?;
    if s.twist.is_some() {
        upstairs = upstairs.add(&m.pullback_b())?;
    }
    Ok(restrict_to_yprime(m, &upstairs)?.on_yprime)
}

pub fn is_locally_integrable(s: &OhsawaSetup) -> Result<IntegrabilityVerdict> {
    let pole = pole_divisor(s)?;
    let (max, witness) = pole.max_coefficient();
    let integrable = max < Rational::one();
    Ok(IntegrabilityVerdict {
        integrable,
        blocking_curve: if integrable { None } else { witness },
        pole_divisor_on_yprime: pole,
    })
}

/// Integrability of `dV[psi]` (twisted by `B` when the setup says so) against
/// klt of the different of the same boundary.
pub fn theorem_equivalence_check(s: &OhsawaSetup) -> Result<bool> {
    let integrable = is_locally_integrable(s)?.integrable;
    let adjunction_model = match s.twist {
        Some(_) => s.model.clone(),
        None => s.model.without_boundary(),
    };
    let klt = klt_of_different(&adjunction_model)?.verdict == Verdict::Klt;
    Ok(integrable == klt)
}

/// `psi = log(|z_n|^2 prod_{k<=N} |z_k|^{2 a_k})` on `C^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialWeight {
    pub n: usize,
    pub a: Vec<Rational>,
}

impl MonomialWeight {
    pub fn new(n: usize, a: Vec<Rational>) -> Result<Self> {
        if n < 1 || a.len() >= n {
            return Err(Error::InvalidParameter(format!(
                "need N < n, got N = {} with n = {n}",
                a.len()
            )));
        }
        if a.iter().any(Rational::is_negative) {
            return Err(Error::InvalidParameter("weight exponents must be >= 0".into()));
        }
        Ok(MonomialWeight { n, a })
    }

    pub fn a_f64(&self) -> Vec<f64> {
        self.a.iter().map(Rational::to_f64).collect()
    }
}

/// Exponents of the density of `dV[psi]` on `{z_n = 0}` in the coordinates
/// `z_1..z_N`: `-2 a_k + beta_k`, where `|z_k|^{beta_k}` are zeros of `dV_X`.
pub fn smooth_density_exponents(w: &MonomialWeight, beta: &[Rational]) -> Result<Vec<Rational>> {
    if beta.len() != w.a.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} volume exponents for {} weight exponents",
            beta.len(),
            w.a.len()
        )));
    }
    Ok(w.a
        .iter()
        .zip(beta)
        .map(|(a, b)| b - &(a * &Rational::from(2)))
        .collect())
}
