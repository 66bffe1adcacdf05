use pairsing_core::adjoint::{is_trivial, vanishing_orders};
use pairsing_core::adjunction::{pushforward_to_ynu, restrict_to_yprime, RestrictedDivisor};
use pairsing_core::model::{
    a_surface_model, cone_blowup_model, cone_with_hyperplane, validate, ConeModelParams, DivisorRecord, ImageCodim,
    Incidence,
};
use pairsing_core::singularities::{classify_absolute, classify_pair};
use pairsing_core::{QDivisor, Rational, SncModel, Space, Verdict};
use proptest::prelude::*;

const NAMES: [&str; 6] = ["A", "B", "C", "E1", "E2", "p"];

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| Rational::new(n, d))
}

fn nonneg_rational() -> impl Strategy<Value = Rational> {
    (0i64..=40, 1i64..=12).prop_map(|(n, d)| Rational::new(n, d))
}

fn divisor(space: Space) -> impl Strategy<Value = QDivisor> {
    prop::collection::vec((prop::sample::select(&NAMES[..]), rational()), 0..6).prop_map(move |terms| {
        let mut d = QDivisor::zero(space);
        for (n, c) in terms {
            d.add_term(n, c);
        }
        d
    })
}

fn effective(space: Space) -> impl Strategy<Value = QDivisor> {
    prop::collection::vec((prop::sample::select(&NAMES[..]), nonneg_rational()), 0..6)
        .prop_map(move |terms| QDivisor::from_terms(space, terms))
}

fn no_stored_zeros(d: &QDivisor) -> bool {
    d.iter().all(|(_, c)| !c.is_zero())
}

fn verdict_rank(v: Verdict) -> u8 {
    v.rank()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn addition_is_associative_and_commutative(
        a in divisor(Space::Resolution), b in divisor(Space::Resolution), c in divisor(Space::Resolution)
    ) {
        let ab = a.add(&b).unwrap();
        prop_assert_eq!(&ab, &b.add(&a).unwrap());
        prop_assert_eq!(ab.add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
        prop_assert!(a.add(&a.negate()).unwrap().is_empty());
        prop_assert!(no_stored_zeros(&ab));
    }

    #[test]
    fn scaling_distributes(a in divisor(Space::Ambient), b in divisor(Space::Ambient), s in rational(), t in rational()) {
        let lhs = a.add(&b).unwrap().scale(&s);
        prop_assert_eq!(&lhs, &a.scale(&s).add(&b.scale(&s)).unwrap());
        prop_assert_eq!(a.scale(&(&s + &t)), a.scale(&s).add(&a.scale(&t)).unwrap());
        prop_assert!(a.scale(&Rational::zero()).is_empty());
        prop_assert!(no_stored_zeros(&lhs));
    }

    #[test]
    fn floor_laws(a in divisor(Space::Resolution)) {
        let f = a.floor_divisor();
        prop_assert_eq!(&f.floor_divisor(), &f);
        prop_assert!(f.iter().all(|(_, c)| c.is_integer()));
        prop_assert!(no_stored_zeros(&f));
        let frac = a.sub(&f).unwrap();
        for name in NAMES {
            let c = frac.coeff(name);
            prop_assert!(!c.is_negative() && c < Rational::one(), "{} has fractional part {}", name, c);
            prop_assert!(f.coeff(name) <= a.coeff(name));
        }
    }

    #[test]
    fn namespaces_never_mix(a in divisor(Space::Resolution), b in divisor(Space::StrictTransform)) {
        prop_assert!(a.add(&b).is_err());
        prop_assert!(b.sub(&a).is_err());
    }

    #[test]
    fn json_round_trip(a in divisor(Space::Normalization)) {
        let text = serde_json::to_string(&a.to_json()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(QDivisor::from_json(Space::Normalization, &v).unwrap(), a);
    }

    #[test]
    fn classification_is_monotone_under_effective_enlargement(
        d in divisor(Space::Normalization), extra in effective(Space::Normalization)
    ) {
        let before = classify_absolute(&d).verdict;
        let after = classify_absolute(&d.add(&extra).unwrap()).verdict;
        prop_assert!(verdict_rank(after) <= verdict_rank(before));
    }

    #[test]
    fn pushforward_codimension_rule(
        coeffs in prop::collection::vec(rational(), 4),
        codims in prop::collection::vec(any::<bool>(), 4),
    ) {
        let (model, curves) = model_with_curves(&codims);
        let on_yprime = QDivisor::from_terms(
            Space::StrictTransform,
            curves.iter().cloned().zip(coeffs.iter().cloned()),
        );
        let r = RestrictedDivisor { on_yprime: on_yprime.clone(), provenance: Default::default() };
        let pushed = pushforward_to_ynu(&model, &r);
        prop_assert_eq!(pushed.space(), Space::Normalization);
        for ((curve, c), codim_one) in curves.iter().zip(&coeffs).zip(&codims) {
            let expected = if *codim_one { c.clone() } else { Rational::zero() };
            prop_assert_eq!(pushed.coeff(curve), expected);
        }
    }

    #[test]
    fn restriction_is_linear(
        s in rational(),
        d1 in prop::collection::vec(rational(), 4),
        d2 in prop::collection::vec(rational(), 4),
        codims in prop::collection::vec(any::<bool>(), 4),
    ) {
        let (model, _) = model_with_curves(&codims);
        let ids = ["F0", "F1", "F2", "F3"];
        let mk = |v: &[Rational]| QDivisor::from_terms(Space::Resolution, ids.iter().copied().zip(v.iter().cloned()));
        let (a, b) = (mk(&d1), mk(&d2));
        let lhs = restrict_to_yprime(&model, &a.scale(&s).add(&b).unwrap()).unwrap().on_yprime;
        let ra = restrict_to_yprime(&model, &a).unwrap().on_yprime;
        let rb = restrict_to_yprime(&model, &b).unwrap().on_yprime;
        prop_assert_eq!(lhs, ra.scale(&s).add(&rb).unwrap());
    }

    #[test]
    fn adjoint_orders_grow_with_effective_boundary(
        n in 2u32..=6, d in 1u32..=9, b1 in nonneg_rational(), extra in nonneg_rational()
    ) {
        let p = ConeModelParams::fermat(n, d).unwrap();
        let small = cone_with_hyperplane(p, b1.clone()).unwrap();
        let large = cone_with_hyperplane(p, &b1 + &extra).unwrap();
        let (os, ol) = (vanishing_orders(&small).unwrap(), vanishing_orders(&large).unwrap());
        for (id, o) in &os.required_orders {
            prop_assert!(ol.order(id) >= *o, "order on {} dropped", id);
        }
    }

    #[test]
    fn adjoint_triviality_matches_plt(
        n in 2u32..=6, d in 1u32..=9, b in nonneg_rational()
    ) {
        let m = cone_with_hyperplane(ConeModelParams::fermat(n, d).unwrap(), b).unwrap();
        prop_assert_eq!(is_trivial(&m).unwrap(), classify_pair(&m).unwrap().verdict == Verdict::Plt);
    }
}

/// A smooth-`X` model with one exceptional record per curve, four curves
/// `q0..q3` of the given codimensions on `Y'`.
fn model_with_curves(codim_one: &[bool]) -> (SncModel, Vec<String>) {
    let mut m = pairsing_core::model::smooth_identity_model();
    let mut curves = Vec::new();
    for (i, one) in codim_one.iter().enumerate() {
        let curve = format!("q{i}");
        let codim = if *one { ImageCodim::One } else { ImageCodim::Big };
        m.records.push(
            DivisorRecord::exceptional(format!("F{i}"), Rational::from(2), Rational::zero(), Rational::one())
                .meeting(Incidence::new(curve.clone(), 1 + i as u32 % 2, codim)),
        );
        curves.push(curve);
    }
    assert!(validate(&m).is_empty());
    (m, curves)
}

#[test]
fn cone_models_round_trip_through_json() {
    for n in 2..=6 {
        for d in 1..=9 {
            let m = cone_blowup_model(ConeModelParams::fermat(n, d).unwrap()).unwrap();
            let back = SncModel::from_json_str(&m.to_json().to_string()).unwrap();
            assert_eq!(back, m);
        }
    }
    for mm in 1..=8 {
        let m = a_surface_model(mm).unwrap();
        assert_eq!(SncModel::from_json(&m.to_json()).unwrap(), m);
    }
}

#[test]
fn triviality_matches_plt_on_fixtures() {
    use pairsing_core::model::{kollar_example_model, node_model};
    for m in [node_model(), kollar_example_model()] {
        assert_eq!(
            is_trivial(&m).unwrap(),
            classify_pair(&m).unwrap().verdict == Verdict::Plt
        );
    }
    for mm in 1..=8 {
        let m = a_surface_model(mm).unwrap();
        assert!(is_trivial(&m).unwrap());
        assert_eq!(classify_pair(&m).unwrap().verdict, Verdict::Plt);
    }
}
