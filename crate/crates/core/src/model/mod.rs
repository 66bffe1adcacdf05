//! Log resolutions `f: X' -> X` of a pair `(X, Y + B)` as validated
//! combinatorial data.
//!
//! A model never computes a resolution. It records, for every prime divisor
//! on `X'` relevant near `Y`, its multiplicity in `f^*Y` and `f^*B`, its
//! coefficient in the relative canonical divisor `K_{X'} - f^*K_X`, and how it
//! meets the strict transform `Y'`.

mod families;
mod json;
mod pullback;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use families::{
    a_surface_model, cone_blowup_model, cone_with_hyperplane, fermat_model, kollar_example_model, node_model,
    smooth_identity_model, ConeModelParams,
};
pub use pullback::solve_pullback_coefficients;

use crate::divisor::{QDivisor, Space};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// `B = sum b_j B_j` on `X` together with the name of `Y` (coefficient 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundarySpec {
    pub y_id: String,
    pub components: BTreeMap<String, Rational>,
}

impl BoundarySpec {
    pub fn new(y_id: impl Into<String>) -> Self {
        BoundarySpec {
            y_id: y_id.into(),
            components: BTreeMap::new(),
        }
    }

    pub fn with(mut self, name: impl Into<String>, coeff: Rational) -> Self {
        self.components.insert(name.into(), coeff);
        self
    }

    pub fn coefficient(&self, name: &str) -> Option<&Rational> {
        self.components.get(name)
    }

    pub fn is_effective(&self) -> bool {
        self.components.values().all(|c| !c.is_negative())
    }

    /// `true` when every coefficient is zero (no twist, no boundary).
    pub fn is_trivial(&self) -> bool {
        self.components.values().all(Rational::is_zero)
    }

    pub fn as_divisor(&self) -> QDivisor {
        QDivisor::from_terms(
            Space::Ambient,
            self.components.iter().map(|(k, v)| (k.clone(), v.clone())),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RecordKind {
    StrictY,
    /// Strict transform of the named boundary component.
    StrictB(String),
    Exceptional,
}

impl RecordKind {
    pub fn is_strict_y(&self) -> bool {
        matches!(self, RecordKind::StrictY)
    }
}

impl fmt::Display for RecordKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecordKind::StrictY => f.write_str("strict_y"),
            RecordKind::StrictB(b) => write!(f, "strict_b:{b}"),
            RecordKind::Exceptional => f.write_str("exceptional"),
        }
    }
}

/// Codimension of the image of a `Y'`-curve in `Y^nu`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ImageCodim {
    One,
    /// Two or more: the curve is contracted by `Y' -> Y^nu`.
    Big,
}

/// One component of `R|_{Y'}` for a record `R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Incidence {
    pub curve: String,
    pub mult: u32,
    pub image_codim: ImageCodim,
}

impl Incidence {
    pub fn new(curve: impl Into<String>, mult: u32, image_codim: ImageCodim) -> Self {
        Incidence {
            curve: curve.into(),
            mult,
            image_codim,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorRecord {
    pub id: String,
    pub kind: RecordKind,
    /// Coefficient in `f^*Y`.
    pub mult_in_pullback_y: Rational,
    /// Coefficient in `f^*B` (already weighted by the `b_j`).
    pub mult_in_pullback_b: Rational,
    /// Coefficient in `K_{X'} - f^*K_X`.
    pub rel_canonical: Rational,
    pub restriction: Vec<Incidence>,
}

impl DivisorRecord {
    pub fn strict_y(id: impl Into<String>) -> Self {
        DivisorRecord {
            id: id.into(),
            kind: RecordKind::StrictY,
            mult_in_pullback_y: Rational::one(),
            mult_in_pullback_b: Rational::zero(),
            rel_canonical: Rational::zero(),
            restriction: Vec::new(),
        }
    }

    pub fn strict_b(id: impl Into<String>, component: impl Into<String>, b: Rational) -> Self {
        DivisorRecord {
            id: id.into(),
            kind: RecordKind::StrictB(component.into()),
            mult_in_pullback_y: Rational::zero(),
            mult_in_pullback_b: b,
            rel_canonical: Rational::zero(),
            restriction: Vec::new(),
        }
    }

    pub fn exceptional(id: impl Into<String>, c: Rational, b: Rational, rel_canonical: Rational) -> Self {
        DivisorRecord {
            id: id.into(),
            kind: RecordKind::Exceptional,
            mult_in_pullback_y: c,
            mult_in_pullback_b: b,
            rel_canonical,
            restriction: Vec::new(),
        }
    }

    pub fn meeting(mut self, incidence: Incidence) -> Self {
        self.restriction.push(incidence);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SncModel {
    pub boundary: BoundarySpec,
    pub records: Vec<DivisorRecord>,
    pub x_smooth: bool,
    /// Extra zeros of `dV_X`, pulled back to `X'`.
    pub volume_zeros: QDivisor,
}

impl SncModel {
    pub fn new(boundary: BoundarySpec, records: Vec<DivisorRecord>, x_smooth: bool) -> Self {
        SncModel {
            boundary,
            records,
            x_smooth,
            volume_zeros: QDivisor::zero(Space::Resolution),
        }
    }

    pub fn record(&self, id: &str) -> Option<&DivisorRecord> {
        self.records.iter().find(|r| r.id == id)
    }

    pub fn strict_y(&self) -> Option<&DivisorRecord> {
        self.records.iter().find(|r| r.kind.is_strict_y())
    }

    /// Name of `Y'`. Only call on validated models.
    pub fn strict_y_id(&self) -> &str {
        &self.strict_y().expect("validated model has a strict transform of Y").id
    }

    pub fn image_codim(&self, curve: &str) -> Option<ImageCodim> {
        self.records
            .iter()
            .flat_map(|r| r.restriction.iter())
            .find(|i| i.curve == curve)
            .map(|i| i.image_codim)
    }

    /// All curves on `Y'` named by some restriction entry.
    pub fn yprime_curves(&self) -> BTreeSet<&str> {
        self.records
            .iter()
            .flat_map(|r| r.restriction.iter().map(|i| i.curve.as_str()))
            .collect()
    }

    /// `f^*Y` on `X'`.
    pub fn pullback_y(&self) -> QDivisor {
        self.column(|r| r.mult_in_pullback_y.clone())
    }

    /// `f^*B` on `X'`.
    pub fn pullback_b(&self) -> QDivisor {
        self.column(|r| r.mult_in_pullback_b.clone())
    }

    /// `K_{X'} - f^*K_X`.
    pub fn relative_canonical(&self) -> QDivisor {
        self.column(|r| r.rel_canonical.clone())
    }

    fn column(&self, f: impl Fn(&DivisorRecord) -> Rational) -> QDivisor {
        QDivisor::from_terms(Space::Resolution, self.records.iter().map(|r| (r.id.clone(), f(r))))
    }

    /// The same resolution viewed as a log resolution of `(X, Y)`: every
    /// boundary coefficient and every `f^*B` multiplicity set to zero.
    pub fn without_boundary(&self) -> SncModel {
        let mut m = self.clone();
        for c in m.boundary.components.values_mut() {
            *c = Rational::zero();
        }
        for r in &mut m.records {
            r.mult_in_pullback_b = Rational::zero();
        }
        m
    }

    /// Fails with [`Error::InvalidModel`] unless `validate` finds nothing.
    pub fn ensure_valid(&self) -> Result<()> {
        let v = validate(self);
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidModel(v))
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json::to_json(self)
    }

    pub fn from_json(value: &serde_json::Value) -> Result<SncModel> {
        json::from_json(value)
    }

    pub fn from_json_str(s: &str) -> Result<SncModel> {
        let v: serde_json::Value = serde_json::from_str(s)?;
        json::from_json(&v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    MissingStrictTransform,
    DuplicateStrictTransform,
    DuplicateId,
    EmptyId,
    StrictTransformMultiplicity,
    StrictTransformRestriction,
    NegativeRelativeCanonical,
    NonIntegralRelativeCanonical,
    StrictRelativeCanonical,
    NegativePullbackMultiplicity,
    StrictBoundaryInPullbackY,
    UnknownBoundaryComponent,
    DuplicateBoundaryTransform,
    BoundaryCoefficientMismatch,
    YInBoundary,
    InconsistentImageCodim,
    ZeroRestrictionMultiplicity,
    VolumeZeroUnknownDivisor,
    VolumeZeroNotEffective,
    VolumeZeroOnStrictTransform,
    /// Warning only: the snc condition on `(Delta_{X'} - Y')|_{Y'}` is trusted.
    SncTrusted,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::MissingStrictTransform => "missing-strict-transform",
            Rule::DuplicateStrictTransform => "duplicate-strict-transform",
            Rule::DuplicateId => "duplicate-id",
            Rule::EmptyId => "empty-id",
            Rule::StrictTransformMultiplicity => "strict-transform-multiplicity",
            Rule::StrictTransformRestriction => "strict-transform-restriction",
            Rule::NegativeRelativeCanonical => "negative-relative-canonical",
            Rule::NonIntegralRelativeCanonical => "non-integral-relative-canonical",
            Rule::StrictRelativeCanonical => "strict-relative-canonical",
            Rule::NegativePullbackMultiplicity => "negative-pullback-multiplicity",
            Rule::StrictBoundaryInPullbackY => "strict-boundary-in-pullback-y",
            Rule::UnknownBoundaryComponent => "unknown-boundary-component",
            Rule::DuplicateBoundaryTransform => "duplicate-boundary-transform",
            Rule::BoundaryCoefficientMismatch => "boundary-coefficient-mismatch",
            Rule::YInBoundary => "y-in-boundary",
            Rule::InconsistentImageCodim => "inconsistent-image-codim",
            Rule::ZeroRestrictionMultiplicity => "zero-restriction-multiplicity",
            Rule::VolumeZeroUnknownDivisor => "volume-zero-unknown-divisor",
            Rule::VolumeZeroNotEffective => "volume-zero-not-effective",
            Rule::VolumeZeroOnStrictTransform => "volume-zero-on-strict-transform",
            Rule::SncTrusted => "snc-trusted",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A broken invariant, naming the offending record (or `boundary`/`model`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub subject: String,
    pub rule: Rule,
}

impl Violation {
    fn new(subject: impl Into<String>, rule: Rule) -> Self {
        Violation {
            subject: subject.into(),
            rule,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.rule, self.subject)
    }
}

/// Checks every structural invariant of a model. An empty list means valid.
pub fn validate(m: &SncModel) -> Vec<Violation> {
    let mut out = Vec::new();

    let strict: Vec<&DivisorRecord> = m.records.iter().filter(|r| r.kind.is_strict_y()).collect();
    match strict.len() {
        0 => out.push(Violation::new("model", Rule::MissingStrictTransform)),
        1 => {}
        _ => {
            for r in &strict[1..] {
                out.push(Violation::new(&r.id, Rule::DuplicateStrictTransform));
            }
        }
    }

    if m.boundary.components.contains_key(&m.boundary.y_id) {
        out.push(Violation::new(&m.boundary.y_id, Rule::YInBoundary));
    }

    let mut seen_ids = BTreeSet::new();
    let mut seen_components = BTreeSet::new();
    let mut codims: BTreeMap<&str, ImageCodim> = BTreeMap::new();
    let mut codim_conflicts = BTreeSet::new();

    for r in &m.records {
        if r.id.is_empty() {
            out.push(Violation::new("<empty>", Rule::EmptyId));
        }
        if !seen_ids.insert(r.id.as_str()) {
            out.push(Violation::new(&r.id, Rule::DuplicateId));
        }
        if r.mult_in_pullback_y.is_negative() {
            out.push(Violation::new(&r.id, Rule::NegativePullbackMultiplicity));
        }
        match &r.kind {
            RecordKind::StrictY => {
                if r.mult_in_pullback_y != Rational::one() || !r.mult_in_pullback_b.is_zero() {
                    out.push(Violation::new(&r.id, Rule::StrictTransformMultiplicity));
                }
                if !r.restriction.is_empty() {
                    out.push(Violation::new(&r.id, Rule::StrictTransformRestriction));
                }
            }
            RecordKind::StrictB(component) => {
                if !r.mult_in_pullback_y.is_zero() {
                    out.push(Violation::new(&r.id, Rule::StrictBoundaryInPullbackY));
                }
                match m.boundary.coefficient(component) {
                    None => out.push(Violation::new(&r.id, Rule::UnknownBoundaryComponent)),
                    Some(b) if *b != r.mult_in_pullback_b => {
                        out.push(Violation::new(&r.id, Rule::BoundaryCoefficientMismatch))
                    }
                    Some(_) => {}
                }
                if !seen_components.insert(component.as_str()) {
                    out.push(Violation::new(&r.id, Rule::DuplicateBoundaryTransform));
                }
            }
            RecordKind::Exceptional => {}
        }
        if !matches!(r.kind, RecordKind::Exceptional) && !r.rel_canonical.is_zero() {
            out.push(Violation::new(&r.id, Rule::StrictRelativeCanonical));
        }
        if m.x_smooth {
            if r.rel_canonical.is_negative() {
                out.push(Violation::new(&r.id, Rule::NegativeRelativeCanonical));
            }
            if !r.rel_canonical.is_integer() {
                out.push(Violation::new(&r.id, Rule::NonIntegralRelativeCanonical));
            }
        }
        for inc in &r.restriction {
            if inc.mult == 0 {
                out.push(Violation::new(&r.id, Rule::ZeroRestrictionMultiplicity));
            }
            match codims.get(inc.curve.as_str()) {
                Some(c) if *c != inc.image_codim => {
                    if codim_conflicts.insert(inc.curve.as_str()) {
                        out.push(Violation::new(&inc.curve, Rule::InconsistentImageCodim));
                    }
                }
                Some(_) => {}
                None => {
                    codims.insert(&inc.curve, inc.image_codim);
                }
            }
        }
    }

    for (name, c) in m.volume_zeros.iter() {
        match m.record(name) {
            None => out.push(Violation::new(name, Rule::VolumeZeroUnknownDivisor)),
            Some(r) if r.kind.is_strict_y() => out.push(Violation::new(name, Rule::VolumeZeroOnStrictTransform)),
            Some(_) => {}
        }
        if c.is_negative() {
            out.push(Violation::new(name, Rule::VolumeZeroNotEffective));
        }
    }

    out
}

/// Conditions that cannot be decided from coefficient data and are trusted.
pub fn warnings(m: &SncModel) -> Vec<Violation> {
    let _ = m;
    vec![Violation::new("model", Rule::SncTrusted)]
}
