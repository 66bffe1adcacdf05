//! Inline family names accepted in place of a model document.

use pairsing_core::model::{a_surface_model, fermat_model, kollar_example_model, node_model, smooth_identity_model};
use pairsing_core::ohsawa::MonomialWeight;
use pairsing_core::{Rational, SncModel};

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Fermat { n: u32, d: u32 },
    Node,
    ASurface { m: u32 },
    Kollar,
    Identity,
    Monomial(MonomialWeight),
    FermatTable { n: (u32, u32), d: (u32, u32) },
}

fn int(s: &str, what: &str) -> Result<u32, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("{what}: expected a non-negative integer, got {s:?}"))
}

fn range(s: &str) -> Result<(u32, u32), String> {
    match s.split_once('-') {
        Some((a, b)) => Ok((int(a, "range start")?, int(b, "range end")?)),
        None => {
            let v = int(s, "range")?;
            Ok((v, v))
        }
    }
}

impl Family {
    pub fn parse(arg: &str) -> Result<Family, String> {
        let (head, rest) = arg.split_once(':').unwrap_or((arg, ""));
        match (head, rest) {
            ("node", "") => Ok(Family::Node),
            ("kollar", "") => Ok(Family::Kollar),
            ("identity", "") => Ok(Family::Identity),
            ("fermat", args) => {
                let (n, d) = args.split_once(',').ok_or("fermat needs n,d")?;
                Ok(Family::Fermat {
                    n: int(n, "n")?,
                    d: int(d, "d")?,
                })
            }
            ("a-surface", m) => Ok(Family::ASurface { m: int(m, "m")? }),
            ("monomial", args) => {
                let (n, a) = args.split_once(':').unwrap_or((args, ""));
                let a = if a.is_empty() {
                    Vec::new()
                } else {
                    a.split(',')
                        .map(|x| {
                            x.trim()
                                .parse::<Rational>()
                                .map_err(|e| format!("weight exponent {x:?}: {e}"))
                        })
                        .collect::<Result<_, _>>()?
                };
                let w = MonomialWeight::new(int(n, "n")? as usize, a).map_err(|e| e.to_string())?;
                Ok(Family::Monomial(w))
            }
            ("fermat-table", args) => {
                let (n, d) = args.split_once(',').ok_or("fermat-table needs N_RANGE,D_RANGE")?;
                Ok(Family::FermatTable {
                    n: range(n)?,
                    d: range(d)?,
                })
            }
            _ => Err(format!(
                "unknown family {arg:?} (expected fermat:n,d | node | a-surface:m | kollar | identity | \
                 monomial:n[:a1,..] | fermat-table:N1-N2,D1-D2)"
            )),
        }
    }

    /// The resolution model of a geometric family.
    pub fn model(&self) -> Result<SncModel, String> {
        match self {
            Family::Fermat { n, d } => fermat_model(*n, *d).map_err(|e| e.to_string()),
            Family::Node => Ok(node_model()),
            Family::ASurface { m } => a_surface_model(*m).map_err(|e| e.to_string()),
            Family::Kollar => Ok(kollar_example_model()),
            Family::Identity => Ok(smooth_identity_model()),
            Family::Monomial(_) | Family::FermatTable { .. } => {
                Err("this family has no resolution model; use verify-numeric or family".into())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_names() {
        assert_eq!(Family::parse("fermat:3,2").unwrap(), Family::Fermat { n: 3, d: 2 });
        assert_eq!(Family::parse("a-surface:4").unwrap(), Family::ASurface { m: 4 });
        assert_eq!(Family::parse("node").unwrap(), Family::Node);
        assert_eq!(
            Family::parse("fermat-table:2-6,1-9").unwrap(),
            Family::FermatTable { n: (2, 6), d: (1, 9) }
        );
        assert_eq!(
            Family::parse("fermat-table:3,3").unwrap(),
            Family::FermatTable { n: (3, 3), d: (3, 3) }
        );
        match Family::parse("monomial:3:1/3,1/4").unwrap() {
            Family::Monomial(w) => assert_eq!(w.a, vec![Rational::new(1, 3), Rational::new(1, 4)]),
            other => panic!("{other:?}"),
        }
        assert!(matches!(Family::parse("monomial:2").unwrap(), Family::Monomial(_)));
    }

    #[test]
    fn rejects_junk() {
        for bad in [
            "fermat:3",
            "fermat:x,2",
            "cusp",
            "a-surface:",
            "monomial:2:1/2,1/3",
            "node:1",
        ] {
            assert!(Family::parse(bad).is_err(), "{bad}");
        }
        assert!(Family::parse("a-surface:0").unwrap().model().is_err());
    }
}
