//! The JSON document form of a model.
//!
//! ```json
//! {
//!   "boundary": {"y": "Y", "components": {"H1": "2/1"}},
//!   "records": [{"id": "E", "kind": "exceptional", "c": "2/1", "b_pullback": "0/1",
//!                "rel_canonical": "1/1",
//!                "restriction": [{"curve": "p1", "mult": 1, "image_codim": 1}]}],
//!   "x_smooth": true,
//!   "volume_zeros": {}
//! }
//! ```
//!
//! `kind` is `strict_y`, `exceptional` or `strict_b:<component>`;
//! `image_codim` is `1`, or `"big"` (any integer >= 2 is also accepted).

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{BoundarySpec, DivisorRecord, ImageCodim, Incidence, RecordKind, SncModel};
use crate::divisor::{QDivisor, Space};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    boundary: BoundaryDoc,
    records: Vec<RecordDoc>,
    x_smooth: bool,
    #[serde(default)]
    volume_zeros: BTreeMap<String, Rational>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundaryDoc {
    y: String,
    #[serde(default)]
    components: BTreeMap<String, Rational>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RecordDoc {
    id: String,
    kind: KindDoc,
    c: Rational,
    b_pullback: Rational,
    rel_canonical: Rational,
    #[serde(default)]
    restriction: Vec<IncidenceDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IncidenceDoc {
    curve: String,
    mult: u32,
    image_codim: CodimDoc,
}

struct KindDoc(RecordKind);

impl Serialize for KindDoc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for KindDoc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let kind = match s.as_str() {
            "strict_y" => RecordKind::StrictY,
            "exceptional" => RecordKind::Exceptional,
            other => match other.strip_prefix("strict_b:") {
                Some(c) if !c.is_empty() => RecordKind::StrictB(c.to_string()),
                _ => return Err(serde::de::Error::custom(format!("unknown record kind {other:?}"))),
            },
        };
        Ok(KindDoc(kind))
    }
}

struct CodimDoc(ImageCodim);

impl Serialize for CodimDoc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0 {
            ImageCodim::One => s.serialize_u32(1),
            ImageCodim::Big => s.serialize_str("big"),
        }
    }
}

impl<'de> Deserialize<'de> for CodimDoc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(1) => Ok(CodimDoc(ImageCodim::One)),
            Raw::Num(n) if n >= 2 => Ok(CodimDoc(ImageCodim::Big)),
            Raw::Text(t) if t == "big" => Ok(CodimDoc(ImageCodim::Big)),
            _ => Err(serde::de::Error::custom(
                "image_codim must be 1, an integer >= 2, or \"big\"",
            )),
        }
    }
}

pub(super) fn to_json(m: &SncModel) -> serde_json::Value {
    let doc = ModelDoc {
        boundary: BoundaryDoc {
            y: m.boundary.y_id.clone(),
            components: m.boundary.components.clone(),
        },
        records: m
            .records
            .iter()
            .map(|r| RecordDoc {
                id: r.id.clone(),
                kind: KindDoc(r.kind.clone()),
                c: r.mult_in_pullback_y.clone(),
                b_pullback: r.mult_in_pullback_b.clone(),
                rel_canonical: r.rel_canonical.clone(),
                restriction: r
                    .restriction
                    .iter()
                    .map(|i| IncidenceDoc {
                        curve: i.curve.clone(),
                        mult: i.mult,
                        image_codim: CodimDoc(i.image_codim),
                    })
                    .collect(),
            })
            .collect(),
        x_smooth: m.x_smooth,
        volume_zeros: m.volume_zeros.terms().clone(),
    };
    serde_json::to_value(doc).expect("model serialization is infallible")
}

pub(super) fn from_json(v: &serde_json::Value) -> Result<SncModel> {
    let doc: ModelDoc = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
    let boundary = BoundarySpec {
        y_id: doc.boundary.y,
        components: doc.boundary.components,
    };
    let records = doc
        .records
        .into_iter()
        .map(|r| DivisorRecord {
            id: r.id,
            kind: r.kind.0,
            mult_in_pullback_y: r.c,
            mult_in_pullback_b: r.b_pullback,
            rel_canonical: r.rel_canonical,
            restriction: r
                .restriction
                .into_iter()
                .map(|i| Incidence {
                    curve: i.curve,
                    mult: i.mult,
                    image_codim: i.image_codim.0,
                })
                .collect(),
        })
        .collect();
    Ok(SncModel {
        boundary,
        records,
        x_smooth: doc.x_smooth,
        volume_zeros: QDivisor::from_map(Space::Resolution, doc.volume_zeros)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{a_surface_model, kollar_example_model, node_model, validate};

    #[test]
    fn families_round_trip() {
        for m in [node_model(), kollar_example_model(), a_surface_model(5).unwrap()] {
            let text = serde_json::to_string(&m.to_json()).unwrap();
            let back = SncModel::from_json_str(&text).unwrap();
            assert!(validate(&back).is_empty());
            assert_eq!(back, m);
        }
    }

    #[test]
    fn document_shape() {
        let v = kollar_example_model().to_json();
        assert_eq!(v["boundary"]["components"]["H2"], "-2/1");
        assert_eq!(v["records"][1]["kind"], "strict_b:H1");
        assert_eq!(v["records"][3]["restriction"][0]["image_codim"], 1);
        assert_eq!(v["records"][3]["rel_canonical"], "1/1");
    }

    #[test]
    fn accepts_codim_variants_and_rejects_junk() {
        let doc = |codim: serde_json::Value| {
            serde_json::json!({
                "boundary": {"y": "Y"},
                "records": [
                    {"id": "Y'", "kind": "strict_y", "c": "1", "b_pullback": "0", "rel_canonical": "0"},
                    {"id": "E", "kind": "exceptional", "c": "3", "b_pullback": "0", "rel_canonical": "2",
                     "restriction": [{"curve": "C", "mult": 1, "image_codim": codim}]}
                ],
                "x_smooth": true
            })
        };
        for ok in [
            serde_json::json!(1),
            serde_json::json!(2),
            serde_json::json!(5),
            serde_json::json!("big"),
        ] {
            assert!(SncModel::from_json(&doc(ok)).is_ok());
        }
        for bad in [serde_json::json!(0), serde_json::json!("small"), serde_json::json!(-1)] {
            assert!(SncModel::from_json(&doc(bad)).is_err());
        }
        let mut unknown_kind = doc(serde_json::json!(1));
        unknown_kind["records"][1]["kind"] = "weird".into();
        assert!(SncModel::from_json(&unknown_kind).is_err());
        let mut bad_rational = doc(serde_json::json!(1));
        bad_rational["records"][1]["c"] = "1/0".into();
        assert!(SncModel::from_json(&bad_rational).is_err());
    }
}
