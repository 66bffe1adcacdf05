//! Built-in resolution data for the standard example families.

use super::pullback::{a_chain_matrix, solve_pullback_coefficients};
use super::{BoundarySpec, DivisorRecord, ImageCodim, Incidence, SncModel};
use crate::error::{Error, Result};
use crate::rational::Rational;

pub const Y: &str = "Y";
pub const Y_PRIME: &str = "Y'";
pub const E: &str = "E";

/// A hypersurface of multiplicity `d` at the origin of `C^n` whose
/// projectivized tangent cone is smooth, resolved by one point blowup.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConeModelParams {
    pub n: u32,
    pub d: u32,
    /// Number of prime components of `E ∩ Y'`.
    pub branch_count: u32,
}

impl ConeModelParams {
    pub fn new(n: u32, d: u32, branch_count: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("ambient dimension n = {n} < 2")));
        }
        if d < 1 {
            return Err(Error::InvalidParameter(format!("multiplicity d = {d} < 1")));
        }
        if branch_count < 1 || branch_count > d {
            return Err(Error::InvalidParameter(format!(
                "branch count {branch_count} must lie in 1..={d}"
            )));
        }
        Ok(ConeModelParams { n, d, branch_count })
    }

    /// The Fermat cone `z_1^d + ... + z_n^d = 0`: `d` points on the
    /// exceptional curve when `n = 2`, one smooth hypersurface of `P^{n-1}`
    /// otherwise.
    pub fn fermat(n: u32, d: u32) -> Result<Self> {
        ConeModelParams::new(n, d, if n == 2 { d.max(1) } else { 1 })
    }
}

/// `X` smooth, `Y` smooth, `f` the identity.
pub fn smooth_identity_model() -> SncModel {
    SncModel::new(BoundarySpec::new(Y), vec![DivisorRecord::strict_y(Y_PRIME)], true)
}

fn branch_incidences(p: &ConeModelParams) -> Vec<Incidence> {
    let k = p.branch_count;
    if p.n == 2 {
        // points on the curve Y'; multiplicities add up to E . Y' = d
        (1..=k)
            .map(|i| {
                let mult = if i == k { p.d - (k - 1) } else { 1 };
                Incidence::new(format!("p{i}"), mult, ImageCodim::One)
            })
            .collect()
    } else if k == 1 {
        vec![Incidence::new("C", 1, ImageCodim::Big)]
    } else {
        (1..=k)
            .map(|i| Incidence::new(format!("C{i}"), 1, ImageCodim::Big))
            .collect()
    }
}

pub fn cone_blowup_model(p: ConeModelParams) -> Result<SncModel> {
    let p = ConeModelParams::new(p.n, p.d, p.branch_count)?;
    let mut e = DivisorRecord::exceptional(
        E,
        Rational::from(i64::from(p.d)),
        Rational::zero(),
        Rational::from(i64::from(p.n) - 1),
    );
    e.restriction = branch_incidences(&p);
    Ok(SncModel::new(
        BoundarySpec::new(Y),
        vec![DivisorRecord::strict_y(Y_PRIME), e],
        true,
    ))
}

pub fn fermat_model(n: u32, d: u32) -> Result<SncModel> {
    cone_blowup_model(ConeModelParams::fermat(n, d)?)
}

/// The node `y^2 = x^2 (x + 1)` resolved by one blowup of the origin.
pub fn node_model() -> SncModel {
    cone_blowup_model(ConeModelParams {
        n: 2,
        d: 2,
        branch_count: 2,
    })
    .expect("node parameters are valid")
}

/// A cone model with `B = coeff * H`, `H` a hyperplane through the origin
/// transverse to the tangent cone. `H` has multiplicity one at the origin, so
/// `E` appears in `f^*B` with coefficient `coeff`.
pub fn cone_with_hyperplane(p: ConeModelParams, coeff: Rational) -> Result<SncModel> {
    let mut m = cone_blowup_model(p)?;
    m.boundary = m.boundary.with("H", coeff.clone());
    let mut h = DivisorRecord::strict_b("H'", "H", coeff.clone());
    // H' ∩ Y' is the strict transform of the cone H ∩ Y: empty for curves,
    // d lines for surfaces, one irreducible cone beyond that.
    h.restriction = match p.n {
        2 => Vec::new(),
        3 => (1..=p.d)
            .map(|i| Incidence::new(format!("h{i}"), 1, ImageCodim::One))
            .collect(),
        _ => vec![Incidence::new("h", 1, ImageCodim::One)],
    };
    for r in &mut m.records {
        if r.id == E {
            r.mult_in_pullback_b = coeff.clone();
        }
    }
    m.records.push(h);
    Ok(m)
}

/// Minimal resolution of the `A_{m-1}` surface point `xy = z^m` with
/// `Y = (y = z = 0)`: a chain `E_1, ..., E_{m-1}` of crepant `(-2)`-curves,
/// `Y'` meeting `E_1` once. The `f^*Y` multiplicities come from the
/// numerical-pullback system.
pub fn a_surface_model(m: u32) -> Result<SncModel> {
    if m < 1 {
        return Err(Error::InvalidParameter(format!("a-surface index m = {m} < 1")));
    }
    if m == 1 {
        return Ok(smooth_identity_model());
    }
    let len = (m - 1) as usize;
    let mut strict_dot = vec![0i64; len];
    strict_dot[0] = 1;
    let c = solve_pullback_coefficients(&a_chain_matrix(len), &strict_dot)?;
    let mut records = vec![DivisorRecord::strict_y(Y_PRIME)];
    for (i, ci) in c.into_iter().enumerate() {
        let mut e = DivisorRecord::exceptional(format!("E{}", i + 1), ci, Rational::zero(), Rational::zero());
        if i == 0 {
            e = e.meeting(Incidence::new("p", 1, ImageCodim::One));
        }
        records.push(e);
    }
    Ok(SncModel::new(BoundarySpec::new(Y), records, false))
}

/// `X = C^2`, `Y = (x = 0)`, `B = 2(x - y = 0) - 2(x + y = 0)`, resolved by
/// one blowup of the origin. `B|_Y = 0` although `(X, Y + B)` is not lc.
pub fn kollar_example_model() -> SncModel {
    let two = Rational::from(2);
    let boundary = BoundarySpec::new(Y).with("H1", two.clone()).with("H2", -two.clone());
    let records = vec![
        DivisorRecord::strict_y(Y_PRIME),
        DivisorRecord::strict_b("H1'", "H1", two.clone()),
        DivisorRecord::strict_b("H2'", "H2", -two),
        // mult_0 B = 2 - 2 = 0; the three strict transforms separate
        DivisorRecord::exceptional(E, Rational::one(), Rational::zero(), Rational::one()).meeting(Incidence::new(
            "p",
            1,
            ImageCodim::One,
        )),
    ];
    SncModel::new(boundary, records, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn fermat_3_2() {
        let m = cone_blowup_model(ConeModelParams::new(3, 2, 1).unwrap()).unwrap();
        assert!(validate(&m).is_empty());
        let e = m.record(E).unwrap();
        assert_eq!(e.mult_in_pullback_y, q(2, 1));
        assert_eq!(e.rel_canonical, q(2, 1));
        assert_eq!(e.restriction, vec![Incidence::new("C", 1, ImageCodim::Big)]);
    }

    #[test]
    fn node_has_two_codim_one_points() {
        let m = node_model();
        let e = m.record(E).unwrap();
        assert_eq!(e.mult_in_pullback_y, q(2, 1));
        assert_eq!(e.rel_canonical, q(1, 1));
        assert_eq!(
            e.restriction,
            vec![
                Incidence::new("p1", 1, ImageCodim::One),
                Incidence::new("p2", 1, ImageCodim::One)
            ]
        );
    }

    #[test]
    fn smooth_point_blown_up() {
        let m = cone_blowup_model(ConeModelParams::new(2, 1, 1).unwrap()).unwrap();
        let e = m.record(E).unwrap();
        assert_eq!(
            (e.mult_in_pullback_y.clone(), e.rel_canonical.clone()),
            (q(1, 1), q(1, 1))
        );
    }

    #[test]
    fn cone_parameter_errors() {
        assert!(ConeModelParams::new(1, 2, 1).is_err());
        assert!(ConeModelParams::new(3, 0, 1).is_err());
        assert!(ConeModelParams::new(2, 2, 3).is_err());
        assert!(cone_blowup_model(ConeModelParams {
            n: 1,
            d: 1,
            branch_count: 1
        })
        .is_err());
    }

    #[test]
    fn a_surface_chain() {
        let m1 = a_surface_model(1).unwrap();
        assert_eq!(m1, smooth_identity_model());
        let m2 = a_surface_model(2).unwrap();
        assert!(!m2.x_smooth);
        assert_eq!(m2.record("E1").unwrap().mult_in_pullback_y, q(1, 2));
        let m4 = a_surface_model(4).unwrap();
        assert!(validate(&m4).is_empty());
        let c: Vec<_> = (1..=3)
            .map(|i| m4.record(&format!("E{i}")).unwrap().mult_in_pullback_y.clone())
            .collect();
        assert_eq!(c, vec![q(3, 4), q(1, 2), q(1, 4)]);
        assert!(m4.records.iter().all(|r| r.rel_canonical.is_zero()));
        assert!(a_surface_model(0).is_err());
    }

    #[test]
    fn kollar_model() {
        let m = kollar_example_model();
        assert!(validate(&m).is_empty());
        let e = m.record(E).unwrap();
        assert!(e.mult_in_pullback_b.is_zero());
        assert_eq!(m.record("H1'").unwrap().mult_in_pullback_b, q(2, 1));
        assert_eq!(m.record("H2'").unwrap().mult_in_pullback_b, q(-2, 1));
    }

    #[test]
    fn hyperplane_twist_is_valid() {
        for n in 2..=5 {
            let m = cone_with_hyperplane(ConeModelParams::fermat(n, 2).unwrap(), q(1, 2)).unwrap();
            assert!(validate(&m).is_empty(), "{:?}", validate(&m));
            assert_eq!(m.record(E).unwrap().mult_in_pullback_b, q(1, 2));
        }
    }
}
