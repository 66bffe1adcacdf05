//! Restriction to `Y'`, the different on `Y^nu`, and the inversion of
//! adjunction check.
//!
//! `Diff(B)` is the divisorial pushforward of `(Delta_{X'} - Y')|_{Y'}` along
//! `Y' -> Y^nu`: curves contracted to codimension two or more are dropped.
//! klt-ness of the different is decided upstairs on `Y'`, where nothing has
//! been dropped yet.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::divisor::{QDivisor, Space};
use crate::error::{Error, Result};
use crate::model::{ImageCodim, SncModel};
use crate::rational::Rational;
use crate::singularities::{classify_absolute, classify_pair, delta_prime, PairClass, Verdict};

/// A divisor on `Y'` together with the `X'`-records that produced each curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedDivisor {
    pub on_yprime: QDivisor,
    pub provenance: BTreeMap<String, BTreeSet<String>>,
}

/// `d|_{Y'}` for a divisor `d` on `X'` not containing `Y'`.
pub fn restrict_to_yprime(m: &SncModel, d: &QDivisor) -> Result<RestrictedDivisor> {
    if d.space() != Space::Resolution {
        return Err(Error::NamespaceMismatch {
            left: d.space(),
            right: Space::Resolution,
        });
    }
    let y = m
        .strict_y()
        .ok_or_else(|| Error::InvalidSetup("model has no strict transform of Y".into()))?;
    if d.contains(&y.id) {
        return Err(Error::ContainsStrictTransform(y.id.clone()));
    }
    let mut on_yprime = QDivisor::zero(Space::StrictTransform);
    let mut provenance: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for (name, coeff) in d.iter() {
        let record = m.record(name).ok_or_else(|| Error::UnknownDivisor(name.to_string()))?;
        for inc in &record.restriction {
            on_yprime.add_term(inc.curve.clone(), coeff * &Rational::from(i64::from(inc.mult)));
            provenance
                .entry(inc.curve.clone())
                .or_default()
                .insert(record.id.clone());
        }
    }
    // curves whose contributions cancelled keep no provenance
    provenance.retain(|curve, _| on_yprime.contains(curve));
    Ok(RestrictedDivisor { on_yprime, provenance })
}

/// Keeps the curves whose image in `Y^nu` is a divisor.
pub fn pushforward_to_ynu(m: &SncModel, r: &RestrictedDivisor) -> QDivisor {
    r.on_yprime
        .filter(|curve| m.image_codim(curve) == Some(ImageCodim::One))
        .relabel(Space::Normalization)
}

/// `(Delta_{X'} - Y')|_{Y'}`.
pub fn restricted_boundary(m: &SncModel) -> Result<RestrictedDivisor> {
    let delta = delta_prime(m)?;
    let y = QDivisor::single(Space::Resolution, m.strict_y_id(), Rational::one());
    restrict_to_yprime(m, &delta.sub(&y)?)
}

/// `Diff(B)` on `Y^nu`.
pub fn different(m: &SncModel) -> Result<QDivisor> {
    Ok(pushforward_to_ynu(m, &restricted_boundary(m)?))
}

/// klt of the different, decided on `Y'`.
pub fn klt_of_different(m: &SncModel) -> Result<PairClass> {
    Ok(classify_absolute(&restricted_boundary(m)?.on_yprime))
}

/// klt of `(Y^nu, Diff(B))` from the pushed-forward divisor alone.
///
/// Curves contracted by `Y' -> Y^nu` are invisible here, so this can report
/// KLT while [`klt_of_different`] does not (cone points with `d >= n`).
pub fn klt_on_ynu(m: &SncModel) -> Result<PairClass> {
    Ok(classify_absolute(&different(m)?))
}

/// `Diff(B) = Diff(0) + B|_{Y^nu}`, checked exactly.
pub fn diff_decomposition_check(m: &SncModel) -> Result<bool> {
    let with_b = different(m)?;
    let without = different(&m.without_boundary())?;
    let b_restricted = pushforward_to_ynu(m, &restrict_to_yprime(m, &m.pullback_b())?);
    Ok(with_b == without.add(&b_restricted)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InversionReport {
    pub klt_of_different: PairClass,
    pub plt_near_y: PairClass,
    pub consistent: bool,
    /// `B` effective, the hypothesis under which the two sides must agree.
    pub applicable: bool,
}

pub fn inversion_check(m: &SncModel) -> Result<InversionReport> {
    let klt = klt_of_different(m)?;
    let plt = classify_pair(m)?;
    let consistent = (klt.verdict == Verdict::Klt) == (plt.verdict == Verdict::Plt);
    Ok(InversionReport {
        klt_of_different: klt,
        plt_near_y: plt,
        consistent,
        applicable: m.boundary.is_effective(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        a_surface_model, cone_blowup_model, cone_with_hyperplane, fermat_model, kollar_example_model, node_model,
        smooth_identity_model, ConeModelParams, DivisorRecord, Incidence,
    };

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn res(terms: &[(&str, Rational)]) -> QDivisor {
        QDivisor::from_terms(Space::Resolution, terms.iter().map(|(k, v)| (*k, v.clone())))
    }

    #[test]
    fn restriction_examples() {
        let r = restrict_to_yprime(&node_model(), &res(&[("E", q(1, 1))])).unwrap();
        assert_eq!(
            r.on_yprime,
            QDivisor::from_terms(Space::StrictTransform, [("p1", q(1, 1)), ("p2", q(1, 1))])
        );
        assert_eq!(r.provenance["p1"], BTreeSet::from(["E".to_string()]));

        let f = fermat_model(3, 2).unwrap();
        let r = restrict_to_yprime(&f, &res(&[("E", q(0, 1))])).unwrap();
        assert!(r.on_yprime.is_empty());
        assert!(r.provenance.is_empty());
    }

    #[test]
    fn restriction_rejects_strict_transform_and_unknowns() {
        let m = node_model();
        assert!(matches!(
            restrict_to_yprime(&m, &res(&[("Y'", q(1, 1))])),
            Err(Error::ContainsStrictTransform(_))
        ));
        assert!(matches!(
            restrict_to_yprime(&m, &res(&[("F", q(1, 1))])),
            Err(Error::UnknownDivisor(_))
        ));
        let wrong_space = QDivisor::single(Space::Ambient, "E", q(1, 1));
        assert!(matches!(
            restrict_to_yprime(&m, &wrong_space),
            Err(Error::NamespaceMismatch { .. })
        ));
    }

    #[test]
    fn restriction_with_multiplicity() {
        // two points, the second with multiplicity 2 (tacnode-like branch data)
        let m = cone_blowup_model(ConeModelParams::new(2, 3, 2).unwrap()).unwrap();
        let r = restrict_to_yprime(&m, &res(&[("E", q(1, 3))])).unwrap();
        assert_eq!(
            r.on_yprime,
            QDivisor::from_terms(Space::StrictTransform, [("p1", q(1, 3)), ("p2", q(2, 3))])
        );
    }

    #[test]
    fn pushforward_keeps_only_codim_one() {
        let mut m = node_model();
        m.records.push(
            DivisorRecord::exceptional("F", q(3, 1), q(0, 1), q(2, 1)).meeting(Incidence::new("C", 1, ImageCodim::Big)),
        );
        let r = restrict_to_yprime(&m, &res(&[("E", q(1, 2)), ("F", q(5, 1))])).unwrap();
        assert_eq!(r.on_yprime.len(), 3);
        let pushed = pushforward_to_ynu(&m, &r);
        assert_eq!(
            pushed,
            QDivisor::from_terms(Space::Normalization, [("p1", q(1, 2)), ("p2", q(1, 2))])
        );
    }

    #[test]
    fn different_examples() {
        for mm in 2..=6i64 {
            let d = different(&a_surface_model(mm as u32).unwrap()).unwrap();
            assert_eq!(d, QDivisor::single(Space::Normalization, "p", q(mm - 1, mm)));
        }
        assert_eq!(
            different(&node_model()).unwrap(),
            QDivisor::from_terms(Space::Normalization, [("p1", q(1, 1)), ("p2", q(1, 1))])
        );
        for n in 3..=6 {
            for d in 1..=9 {
                assert!(different(&fermat_model(n, d).unwrap()).unwrap().is_empty());
            }
        }
        assert!(different(&smooth_identity_model()).unwrap().is_empty());
    }

    #[test]
    fn upstairs_governs_when_dropped_curves_reach_one() {
        let m = fermat_model(3, 4).unwrap();
        assert_eq!(klt_on_ynu(&m).unwrap().verdict, Verdict::Klt);
        let up = klt_of_different(&m).unwrap();
        assert_eq!(up.verdict, Verdict::NotLc);
        assert_eq!(up.witness.unwrap().name, "C");
        // below one everything agrees
        let m = fermat_model(3, 2).unwrap();
        assert_eq!(klt_on_ynu(&m).unwrap().verdict, klt_of_different(&m).unwrap().verdict);
    }

    #[test]
    fn decomposition_examples() {
        assert!(diff_decomposition_check(&node_model()).unwrap());
        assert!(diff_decomposition_check(&kollar_example_model()).unwrap());
        let twisted = cone_with_hyperplane(ConeModelParams::fermat(3, 2).unwrap(), q(1, 2)).unwrap();
        assert!(diff_decomposition_check(&twisted).unwrap());
        // hand computation: Delta' - Y' = (1/2)E + (1/2)H', E ∩ Y' is contracted,
        // H' ∩ Y' is the pair of lines h1 + h2
        assert_eq!(
            different(&twisted).unwrap(),
            QDivisor::from_terms(Space::Normalization, [("h1", q(1, 2)), ("h2", q(1, 2))])
        );
    }

    #[test]
    fn inversion_examples() {
        let r = inversion_check(&fermat_model(3, 2).unwrap()).unwrap();
        assert_eq!(
            (r.klt_of_different.verdict, r.plt_near_y.verdict),
            (Verdict::Klt, Verdict::Plt)
        );
        assert!(r.consistent && r.applicable);

        let r = inversion_check(&node_model()).unwrap();
        assert_eq!(
            (r.klt_of_different.verdict, r.plt_near_y.verdict),
            (Verdict::Lc, Verdict::Lc)
        );
        assert!(r.consistent && r.applicable);

        let r = inversion_check(&kollar_example_model()).unwrap();
        assert_eq!(r.klt_of_different.verdict, Verdict::Klt);
        assert_eq!(r.plt_near_y.verdict, Verdict::NotLc);
        assert!(!r.consistent);
        assert!(!r.applicable);
    }
}
