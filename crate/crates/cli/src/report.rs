//! Report documents. Every field is plain data so that a JSON report parses
//! back into an equal value.

use std::collections::BTreeMap;
use std::fmt::Write;

use pairsing_core::adjunction::InversionReport;
use pairsing_core::model::Violation;
use pairsing_core::{PairClass, QDivisor};
use pairsing_numeric::fermat::{DfProbe, FermatProbe};
use pairsing_numeric::shell::{ExtensionReport, LimitReport};
use serde::{Deserialize, Serialize};

use crate::table::FermatTable;

/// Divisor as `name -> "num/den"`, name-sorted.
pub type DivisorMap = BTreeMap<String, String>;

pub fn divisor_map(d: &QDivisor) -> DivisorMap {
    d.iter().map(|(k, v)| (k.to_string(), v.to_fraction_string())).collect()
}

fn divisor_text(d: &DivisorMap) -> String {
    if d.is_empty() {
        return "0".into();
    }
    d.iter()
        .map(|(k, v)| match v.strip_suffix("/1") {
            Some("1") => format!("[{k}]"),
            Some(int) => format!("{int}*[{k}]"),
            None => format!("{v}*[{k}]"),
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub verdict: String,
    pub witness: Option<String>,
    pub witness_discrepancy: Option<String>,
}

impl From<&PairClass> for ClassReport {
    fn from(c: &PairClass) -> Self {
        ClassReport {
            verdict: c.verdict.to_string(),
            witness: c.witness.as_ref().map(|w| w.name.clone()),
            witness_discrepancy: c.witness_discrepancy.as_ref().map(|a| a.to_fraction_string()),
        }
    }
}

impl ClassReport {
    fn text(&self) -> String {
        match (&self.witness, &self.witness_discrepancy) {
            (Some(w), Some(a)) => {
                format!(
                    "{} (witness {w}, discrepancy {})",
                    self.verdict,
                    a.strip_suffix("/1").unwrap_or(a)
                )
            }
            _ => self.verdict.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub subject: String,
    pub rule: String,
}

impl From<&Violation> for ViolationReport {
    fn from(v: &Violation) -> Self {
        ViolationReport {
            subject: v.subject.clone(),
            rule: v.rule.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InversionDoc {
    pub klt_of_different: ClassReport,
    pub plt_near_y: ClassReport,
    pub consistent: bool,
    pub applicable: bool,
}

impl From<&InversionReport> for InversionDoc {
    fn from(r: &InversionReport) -> Self {
        InversionDoc {
            klt_of_different: (&r.klt_of_different).into(),
            plt_near_y: (&r.plt_near_y).into(),
            consistent: r.consistent,
            applicable: r.applicable,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OhsawaDoc {
    pub integrable: bool,
    pub pole_divisor: DivisorMap,
    pub blocking_curve: Option<String>,
    /// Whether the verdict agrees with klt of the different.
    pub matches_klt_of_different: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjointDoc {
    pub required_orders: BTreeMap<String, u64>,
    pub trivial: bool,
    /// `"unbounded"`, a rational, or absent for non-effective `B`.
    pub epsilon_threshold: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyDoc {
    pub pair: ClassReport,
    pub different: DivisorMap,
    pub ohsawa: OhsawaDoc,
    pub adjoint_trivial: bool,
    /// Integrability of the Ohsawa measure agrees with klt of the different.
    pub integrability_matches_klt: bool,
    pub inversion: InversionDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericDoc {
    pub fermat: Option<FermatProbe>,
    pub df_density: Option<DfProbe>,
    pub limit: Option<LimitReport>,
    pub extension: Option<ExtensionReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verb", rename_all = "kebab-case")]
pub enum Report {
    Validate {
        valid: bool,
        violations: Vec<ViolationReport>,
        warnings: Vec<ViolationReport>,
    },
    Classify(ClassifyDoc),
    Different {
        different: DivisorMap,
        restricted_on_yprime: DivisorMap,
        klt_of_different: ClassReport,
        decomposition_holds: bool,
    },
    Ohsawa(OhsawaDoc),
    Adjoint(AdjointDoc),
    Inversion(InversionDoc),
    VerifyNumeric(NumericDoc),
    Family {
        model: serde_json::Value,
    },
    FermatTable(FermatTable),
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut o = String::new();
        match self {
            Report::Validate {
                valid,
                violations,
                warnings,
            } => {
                let _ = writeln!(o, "valid: {}", yes(*valid));
                for v in violations {
                    let _ = writeln!(o, "  error   {} ({})", v.rule, v.subject);
                }
                for v in warnings {
                    let _ = writeln!(o, "  warning {} ({})", v.rule, v.subject);
                }
            }
            Report::Classify(c) => {
                let rows = [
                    ("pair near Y", c.pair.text()),
                    ("Diff(B)", divisor_text(&c.different)),
                    (
                        "Ohsawa measure",
                        format!(
                            "{} (poles {})",
                            if c.ohsawa.integrable {
                                "integrable"
                            } else {
                                "not integrable"
                            },
                            divisor_text(&c.ohsawa.pole_divisor)
                        ),
                    ),
                    (
                        "adjoint ideal",
                        if c.adjoint_trivial { "trivial" } else { "nontrivial" }.into(),
                    ),
                    ("klt of Diff(B)", c.inversion.klt_of_different.text()),
                    ("integrable <=> klt", yes(c.integrability_matches_klt).into()),
                    (
                        "klt <=> plt",
                        format!(
                            "{} (applicable: {})",
                            yes(c.inversion.consistent),
                            yes(c.inversion.applicable)
                        ),
                    ),
                ];
                for (k, v) in rows {
                    let _ = writeln!(o, "{k:<20} {v}");
                }
            }
            Report::Different {
                different,
                restricted_on_yprime,
                klt_of_different,
                decomposition_holds,
            } => {
                let _ = writeln!(o, "Diff(B)            {}", divisor_text(different));
                let _ = writeln!(o, "on Y'              {}", divisor_text(restricted_on_yprime));
                let _ = writeln!(o, "klt of Diff(B)     {}", klt_of_different.text());
                let _ = writeln!(o, "Diff(B) = Diff(0) + B|_Y  {}", yes(*decomposition_holds));
            }
            Report::Ohsawa(d) => {
                let _ = writeln!(o, "integrable         {}", yes(d.integrable));
                let _ = writeln!(o, "pole divisor       {}", divisor_text(&d.pole_divisor));
                if let Some(b) = &d.blocking_curve {
                    let _ = writeln!(o, "blocking curve     {b}");
                }
                let _ = writeln!(o, "matches klt        {}", yes(d.matches_klt_of_different));
            }
            Report::Adjoint(a) => {
                let _ = writeln!(o, "trivial            {}", yes(a.trivial));
                for (k, v) in &a.required_orders {
                    let _ = writeln!(o, "  ord {k:<14} >= {v}");
                }
                let eps = a.epsilon_threshold.as_deref().unwrap_or("n/a (B not effective)");
                let _ = writeln!(o, "epsilon threshold  {eps}");
            }
            Report::Inversion(i) => {
                let _ = writeln!(o, "klt of Diff(B)     {}", i.klt_of_different.text());
                let _ = writeln!(o, "plt near Y         {}", i.plt_near_y.text());
                let _ = writeln!(o, "consistent         {}", yes(i.consistent));
                let _ = writeln!(o, "applicable         {}", yes(i.applicable));
            }
            Report::VerifyNumeric(n) => numeric_text(&mut o, n),
            Report::Family { model } => {
                o = serde_json::to_string_pretty(model).expect("model serializes");
                o.push('\n');
            }
            Report::FermatTable(t) => o = t.to_text(),
        }
        o
    }
}

fn numeric_text(o: &mut String, n: &NumericDoc) {
    if let Some(p) = &n.fermat {
        let _ = writeln!(
            o,
            "shell integrals of log|z_1^{d} + ... + z_{n}^{d}|^2",
            d = p.d,
            n = p.n
        );
        for e in &p.estimates {
            let _ = writeln!(o, "  t = {:>6}  {:.6e} +- {:.1e}", e.t, e.value, e.std_error);
        }
        let _ = writeln!(o, "  trend {} (exact layer: {})", p.trend, p.expected);
    }
    if let Some(p) = &n.df_density {
        let _ = writeln!(o, "tube volumes / (pi delta^2)");
        for e in &p.estimates {
            let _ = writeln!(o, "  delta = {:>7.0e}  {:.6e} +- {:.1e}", e.delta, e.value, e.std_error);
        }
        let _ = writeln!(o, "  trend {} (exact layer: {})", p.trend, p.expected);
    }
    if let Some(l) = &n.limit {
        let _ = writeln!(o, "tapered shell integrals");
        for e in &l.estimates {
            let _ = writeln!(o, "  t = {:>6}  {:.8e} +- {:.1e}", e.t, e.value, e.std_error);
        }
        match (&l.fit, &l.fit_error) {
            (Some(f), _) => {
                let _ = writeln!(
                    o,
                    "  fit L - C e^(k t): L = {:.8e}, C = {:.4e}, k = {:.6}, rms residual {:.1e}",
                    f.limit, f.amplitude, f.exponent, f.residual
                );
            }
            (None, Some(e)) => {
                let _ = writeln!(o, "  fit failed: {e}");
            }
            _ => {}
        }
        let _ = writeln!(o, "  quadrature limit {:.8e}", l.reference);
        if let Some(r) = l.relative_error {
            let _ = writeln!(o, "  relative error {r:.2e}");
        }
    }
    if let Some(x) = &n.extension {
        let _ = writeln!(o, "tapered vs product bump");
        for (t, d) in x.t.iter().zip(&x.differences) {
            let _ = writeln!(o, "  t = {t:>6}  |difference| {d:.4e}");
        }
        let _ = writeln!(o, "  shrinks {}", yes(x.shrinks));
    }
}
