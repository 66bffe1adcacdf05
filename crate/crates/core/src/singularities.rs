//! Discrepancies and klt/plt/lc classification from a log resolution.
//!
//! With `K_{X'} + Delta_{X'} = f^*(K_X + Y + B)`, the coefficient of a record
//! in `Delta_{X'}` is `c + b - d` (pullback of `Y`, pullback of `B`, minus the
//! relative canonical coefficient); its discrepancy is the negative of that.
//! On an snc model the pair is lc iff every coefficient is `<= 1`, and plt
//! near `Y` iff `Y'` is the only divisor with coefficient `>= 1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::divisor::{PrimeId, QDivisor, Space};
use crate::error::{Error, Result};
use crate::model::SncModel;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Klt,
    Plt,
    Lc,
    NotLc,
}

impl Verdict {
    /// `NOT_LC < LC < PLT = KLT`.
    pub fn rank(self) -> u8 {
        match self {
            Verdict::NotLc => 0,
            Verdict::Lc => 1,
            Verdict::Plt | Verdict::Klt => 2,
        }
    }

    pub fn is_lc(self) -> bool {
        self != Verdict::NotLc
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Klt => "KLT",
            Verdict::Plt => "PLT",
            Verdict::Lc => "LC",
            Verdict::NotLc => "NOT_LC",
        })
    }
}

/// A verdict with the divisor of largest boundary coefficient as witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairClass {
    pub verdict: Verdict,
    pub witness: Option<PrimeId>,
    pub witness_discrepancy: Option<Rational>,
}

impl fmt::Display for PairClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.verdict)?;
        if let (Some(w), Some(a)) = (&self.witness, &self.witness_discrepancy) {
            write!(f, " (witness {} at discrepancy {a})", w.name)?;
        }
        Ok(())
    }
}

/// `Delta_{X'}` with `K_{X'} + Delta_{X'} = f^*(K_X + Y + B)`.
pub fn delta_prime(m: &SncModel) -> Result<QDivisor> {
    m.ensure_valid()?;
    Ok(QDivisor::from_terms(
        Space::Resolution,
        m.records.iter().map(|r| {
            (
                r.id.clone(),
                &r.mult_in_pullback_y + &r.mult_in_pullback_b - &r.rel_canonical,
            )
        }),
    ))
}

/// `a(E, X, Y + B)` for a divisor `E` of the model.
pub fn discrepancy(m: &SncModel, e: &str) -> Result<Rational> {
    let delta = delta_prime(m)?;
    if m.record(e).is_none() {
        return Err(Error::UnknownDivisor(e.to_string()));
    }
    Ok(-delta.coeff(e))
}

/// Classification of `(X, Y + B)` near `Y`. Never returns `KLT`, since `Y'`
/// carries coefficient exactly one.
pub fn classify_pair(m: &SncModel) -> Result<PairClass> {
    let delta = delta_prime(m)?;
    let y = m.strict_y_id().to_string();
    let rest = delta.filter(|name| name != y);
    let (max, witness) = rest.max_coefficient();
    let one = Rational::one();
    let verdict = if max > one {
        Verdict::NotLc
    } else if max == one {
        Verdict::Lc
    } else {
        Verdict::Plt
    };
    let (witness, discrepancy) = match witness {
        Some(w) => (w, -max),
        // only Y' itself: it is the distinguished divisor at discrepancy -1
        None => (
            PrimeId {
                space: Space::Resolution,
                name: y,
            },
            Rational::from(-1),
        ),
    };
    Ok(PairClass {
        verdict,
        witness: Some(witness),
        witness_discrepancy: Some(discrepancy),
    })
}

/// klt/lc test of `(V, D)` for an snc boundary `D` on a smooth `V`.
pub fn classify_absolute(d: &QDivisor) -> PairClass {
    let (max, witness) = d.max_coefficient();
    let one = Rational::one();
    let verdict = if max > one {
        Verdict::NotLc
    } else if max == one {
        Verdict::Lc
    } else {
        Verdict::Klt
    };
    let witness_discrepancy = witness.as_ref().map(|_| -max);
    PairClass {
        verdict,
        witness,
        witness_discrepancy,
    }
}
