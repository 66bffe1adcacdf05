//! Formal Q-divisors: finite sums of named prime divisors with exact rational
//! coefficients.
//!
//! Every divisor lives in one [`Space`] (the ambient `X`, the resolution `X'`,
//! the strict transform `Y'`, or the normalization `Y^nu`). Arithmetic between
//! divisors of different spaces is rejected at runtime. Zero coefficients are
//! never stored, so `support()` is exactly the key set.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// The ambient space a prime divisor lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    /// The original variety `X`.
    Ambient,
    /// The log resolution `X'`.
    Resolution,
    /// The strict transform `Y'` of `Y`.
    StrictTransform,
    /// The normalization `Y^nu` of `Y`.
    Normalization,
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Space::Ambient => "X",
            Space::Resolution => "X'",
            Space::StrictTransform => "Y'",
            Space::Normalization => "Y^nu",
        })
    }
}

/// A prime divisor identified by name within a space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimeId {
    pub space: Space,
    pub name: String,
}

impl PrimeId {
    pub fn new(space: Space, name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::Parse("empty prime divisor name".into()));
        }
        Ok(PrimeId { space, name })
    }
}

impl fmt::Display for PrimeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.name, self.space)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QDivisor {
    space: Space,
    terms: BTreeMap<String, Rational>,
}

impl QDivisor {
    pub fn zero(space: Space) -> Self {
        QDivisor {
            space,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a divisor from `(name, coefficient)` pairs; repeated names add up.
    pub fn from_terms<I, S>(space: Space, terms: I) -> Self
    where
        I: IntoIterator<Item = (S, Rational)>,
        S: Into<String>,
    {
        let mut d = QDivisor::zero(space);
        for (name, c) in terms {
            d.add_term(name, c);
        }
        d
    }

    pub fn single(space: Space, name: impl Into<String>, coeff: Rational) -> Self {
        QDivisor::from_terms(space, [(name.into(), coeff)])
    }

    pub fn space(&self) -> Space {
        self.space
    }

    /// Coefficient of `name`; absent names have coefficient zero.
    pub fn coeff(&self, name: &str) -> Rational {
        self.terms.get(name).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeff_of(&self, id: &PrimeId) -> Result<Rational> {
        self.check_space(id.space)?;
        Ok(self.coeff(&id.name))
    }

    pub fn add_term(&mut self, name: impl Into<String>, coeff: Rational) {
        let name = name.into();
        let updated = self.coeff(&name) + coeff;
        if updated.is_zero() {
            self.terms.remove(&name);
        } else {
            self.terms.insert(name, updated);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.terms.contains_key(name)
    }

    pub fn support(&self) -> impl Iterator<Item = PrimeId> + '_ {
        self.terms.keys().map(|n| PrimeId {
            space: self.space,
            name: n.clone(),
        })
    }

    /// Name-ordered `(name, coefficient)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &Rational)> {
        self.terms.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn terms(&self) -> &BTreeMap<String, Rational> {
        &self.terms
    }

    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    fn check_space(&self, other: Space) -> Result<()> {
        if self.space == other {
            Ok(())
        } else {
            Err(Error::NamespaceMismatch {
                left: self.space,
                right: other,
            })
        }
    }

    pub fn add(&self, other: &QDivisor) -> Result<QDivisor> {
        self.check_space(other.space)?;
        let mut out = self.clone();
        for (name, c) in &other.terms {
            out.add_term(name.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &QDivisor) -> Result<QDivisor> {
        self.add(&other.negate())
    }

    pub fn negate(&self) -> QDivisor {
        self.scale(&Rational::from(-1))
    }

    pub fn scale(&self, c: &Rational) -> QDivisor {
        if c.is_zero() {
            return QDivisor::zero(self.space);
        }
        QDivisor {
            space: self.space,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    /// Round every coefficient down to an integer.
    pub fn floor_divisor(&self) -> QDivisor {
        QDivisor::from_terms(self.space, self.terms.iter().map(|(k, v)| (k.clone(), v.floor())))
    }

    /// Largest coefficient and a divisor attaining it. Ties go to the
    /// lexicographically smallest name; the empty divisor yields `(0, None)`.
    pub fn max_coefficient(&self) -> (Rational, Option<PrimeId>) {
        let mut best: Option<(&String, &Rational)> = None;
        for (name, c) in &self.terms {
            match best {
                Some((_, b)) if c <= b => {}
                _ => best = Some((name, c)),
            }
        }
        match best {
            None => (Rational::zero(), None),
            Some((name, c)) => (
                c.clone(),
                Some(PrimeId {
                    space: self.space,
                    name: name.clone(),
                }),
            ),
        }
    }

    /// Keeps only the terms whose names satisfy `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&str) -> bool) -> QDivisor {
        QDivisor {
            space: self.space,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Same names and coefficients, reinterpreted on another space.
    pub fn relabel(&self, space: Space) -> QDivisor {
        QDivisor {
            space,
            terms: self.terms.clone(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("divisor serialization is infallible")
    }

    /// Parses the `{"name": "num/den", ...}` object form.
    pub fn from_json(space: Space, value: &serde_json::Value) -> Result<QDivisor> {
        let map: BTreeMap<String, Rational> = serde_json::from_value(value.clone())?;
        Self::from_map(space, map)
    }

    pub fn from_map(space: Space, map: BTreeMap<String, Rational>) -> Result<QDivisor> {
        if map.keys().any(|k| k.is_empty()) {
            return Err(Error::Parse("empty prime divisor name".into()));
        }
        Ok(QDivisor::from_terms(space, map))
    }
}

impl Serialize for QDivisor {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.terms.len()))?;
        for (k, v) in &self.terms {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl fmt::Display for QDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(k, v)| format!("{v}*[{k}]")).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for QDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QDivisor<{}>{{", self.space)?;
        for (i, (k, v)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}: {v}")?;
        }
        f.write_str("}")
    }
}
