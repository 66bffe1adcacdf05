//! The adjoint ideal `Adj(X, Y; B) = f_* O(K_{X'} - floor(f^*(K_X + Y + B)) + Y')`
//! as vanishing orders along the divisors of `X'`, and membership of germs
//! whose pullback is a monomial in a chart of `X'`.
//!
//! Membership is decided two ways: by the floor conditions
//! `ord_R(g o f) >= floor(b + c - d)`, and by the integrability inequalities
//! of the weight `e^{-(1+eps) phi_B} / (|s|^2 log^2 |s|)` evaluated at a
//! concrete `eps` inside the stable range.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{DivisorRecord, SncModel};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanishingOrderSpec {
    /// One entry per record of the model, zero where nothing is required.
    pub required_orders: BTreeMap<String, u64>,
}

impl VanishingOrderSpec {
    pub fn order(&self, id: &str) -> u64 {
        self.required_orders.get(id).copied().unwrap_or(0)
    }
}

fn required_order(r: &DivisorRecord) -> Result<u64> {
    let e = &r.mult_in_pullback_y + &r.mult_in_pullback_b - &r.rel_canonical;
    let mut fl = e.floor_int();
    if r.kind.is_strict_y() {
        fl -= 1;
    }
    if fl.sign() == num_bigint::Sign::Minus {
        return Ok(0);
    }
    fl.to_u64()
        .ok_or_else(|| Error::InvalidParameter(format!("vanishing order on {} overflows", r.id)))
}

pub fn vanishing_orders(m: &SncModel) -> Result<VanishingOrderSpec> {
    m.ensure_valid()?;
    let required_orders = m
        .records
        .iter()
        .map(|r| Ok((r.id.clone(), required_order(r)?)))
        .collect::<Result<_>>()?;
    Ok(VanishingOrderSpec { required_orders })
}

/// `Adj = O_X` near `Y`.
pub fn is_trivial(m: &SncModel) -> Result<bool> {
    Ok(vanishing_orders(m)?.required_orders.values().all(|&o| o == 0))
}

/// What a chart coordinate `w_i` cuts out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChartCoord {
    Divisor(String),
    Free,
}

/// A coordinate chart of `X'` in which the relevant divisors are coordinate
/// hyperplanes. Divisors not listed do not pass through the chart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chart {
    pub coords: Vec<ChartCoord>,
}

impl Chart {
    pub fn new(coords: Vec<ChartCoord>) -> Self {
        Chart { coords }
    }

    fn check<'m>(&self, m: &'m SncModel, g: &MonomialGerm) -> Result<Vec<Option<&'m DivisorRecord>>> {
        if g.exponents.len() != self.coords.len() {
            return Err(Error::InvalidChart(format!(
                "germ has {} exponents for {} coordinates",
                g.exponents.len(),
                self.coords.len()
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        self.coords
            .iter()
            .map(|c| match c {
                ChartCoord::Free => Ok(None),
                ChartCoord::Divisor(id) => {
                    if !seen.insert(id.as_str()) {
                        return Err(Error::InvalidChart(format!("{id} is assigned to two coordinates")));
                    }
                    m.record(id)
                        .map(Some)
                        .ok_or_else(|| Error::InvalidChart(format!("{id} is not a divisor of the model")))
                }
            })
            .collect()
    }
}

/// `g o f = prod w_i^{alpha_i}` in the coordinates of a chart.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialGerm {
    pub exponents: Vec<u64>,
}

impl MonomialGerm {
    pub fn new(exponents: Vec<u64>) -> Self {
        MonomialGerm { exponents }
    }

    pub fn times(&self, other: &MonomialGerm) -> MonomialGerm {
        MonomialGerm {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// Membership through the floor conditions on vanishing orders.
pub fn monomial_membership(m: &SncModel, chart: &Chart, g: &MonomialGerm) -> Result<bool> {
    let records = chart.check(m, g)?;
    let orders = vanishing_orders(m)?;
    Ok(records
        .iter()
        .zip(&g.exponents)
        .all(|(r, &alpha)| r.is_none_or(|r| alpha >= orders.order(&r.id))))
}

/// Membership through the integrability inequalities of the weighted
/// integral at `eps = eps_0 / 2` (or `eps = 1` when unbounded).
///
/// Along `Y'` the `log^2` factor makes `alpha >= 0` sufficient; along
/// divisors with `b > 0` the inequality `alpha >= (1+eps) b + c - d - 1` is
/// non-strict; along the rest it is `alpha > c - d - 1`.
pub fn monomial_membership_by_weight(m: &SncModel, chart: &Chart, g: &MonomialGerm) -> Result<bool> {
    let records = chart.check(m, g)?;
    let eps = match epsilon_threshold(m)? {
        EpsilonThreshold::Unbounded => Rational::one(),
        EpsilonThreshold::Finite(e0) => e0 / Rational::from(2),
    };
    let one = Rational::one();
    Ok(records.iter().zip(&g.exponents).all(|(r, &alpha)| {
        let Some(r) = r else { return true };
        if r.kind.is_strict_y() {
            return true;
        }
        let alpha = Rational::from(alpha as i64);
        let cd = &r.mult_in_pullback_y - &r.rel_canonical;
        if r.mult_in_pullback_b.is_positive() {
            let rhs = (&one + &eps) * &r.mult_in_pullback_b + cd - &one;
            alpha >= rhs
        } else {
            alpha > cd - &one
        }
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum EpsilonThreshold {
    Finite(Rational),
    Unbounded,
}

impl fmt::Display for EpsilonThreshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EpsilonThreshold::Finite(e) => write!(f, "{e}"),
            EpsilonThreshold::Unbounded => f.write_str("unbounded"),
        }
    }
}

/// The largest `eps_0` such that no `floor((1+eps) b + c - d)` changes for
/// `0 < eps < eps_0`.
pub fn epsilon_threshold(m: &SncModel) -> Result<EpsilonThreshold> {
    m.ensure_valid()?;
    if !m.boundary.is_effective() {
        return Err(Error::NonEffectiveBoundary(
            m.boundary
                .components
                .iter()
                .filter(|(_, c)| c.is_negative())
                .map(|(k, _)| k.as_str())
                .collect::<Vec<_>>()
                .join(", "),
        ));
    }
    let best = m
        .records
        .iter()
        .filter(|r| r.mult_in_pullback_b.is_positive())
        .map(|r| {
            let x = &r.mult_in_pullback_b + &r.mult_in_pullback_y - &r.rel_canonical;
            (x.floor() + Rational::one() - x) / &r.mult_in_pullback_b
        })
        .min();
    Ok(best.map_or(EpsilonThreshold::Unbounded, EpsilonThreshold::Finite))
}
