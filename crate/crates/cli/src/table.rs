//! The consistency grid over Fermat cones.

use std::fmt::Write;

use pairsing_core::adjoint::is_trivial;
use pairsing_core::adjunction::klt_of_different;
use pairsing_core::model::fermat_model;
use pairsing_core::ohsawa::{is_locally_integrable, OhsawaSetup};
use pairsing_core::singularities::classify_pair;
use pairsing_core::Verdict;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FermatRow {
    pub n: u32,
    pub d: u32,
    pub klt_of_different: bool,
    pub plt: bool,
    pub ohsawa_integrable: bool,
    pub adjoint_trivial: bool,
    /// `d <= n - 1`.
    pub expected: bool,
}

impl FermatRow {
    pub fn consistent(&self) -> bool {
        [self.plt, self.ohsawa_integrable, self.adjoint_trivial, self.expected]
            .iter()
            .all(|&x| x == self.klt_of_different)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FermatTable {
    pub rows: Vec<FermatRow>,
    pub consistent: bool,
}

pub const N_RANGE: (u32, u32) = (2, 6);
pub const D_RANGE: (u32, u32) = (1, 9);

pub fn fermat_row(n: u32, d: u32) -> Result<FermatRow, String> {
    let m = fermat_model(n, d).map_err(|e| e.to_string())?;
    let err = |e: pairsing_core::Error| e.to_string();
    Ok(FermatRow {
        n,
        d,
        klt_of_different: klt_of_different(&m).map_err(err)?.verdict == Verdict::Klt,
        plt: classify_pair(&m).map_err(err)?.verdict == Verdict::Plt,
        ohsawa_integrable: is_locally_integrable(&OhsawaSetup::plain(m.clone()))
            .map_err(err)?
            .integrable,
        adjoint_trivial: is_trivial(&m).map_err(err)?,
        expected: d < n,
    })
}

pub fn emit_fermat_table(n_range: (u32, u32), d_range: (u32, u32)) -> Result<FermatTable, String> {
    let inside = |(lo, hi): (u32, u32), (min, max): (u32, u32)| min <= lo && lo <= hi && hi <= max;
    if !inside(n_range, N_RANGE) || !inside(d_range, D_RANGE) {
        return Err(format!(
            "ranges n {}-{}, d {}-{} must lie within n {}-{}, d {}-{}",
            n_range.0, n_range.1, d_range.0, d_range.1, N_RANGE.0, N_RANGE.1, D_RANGE.0, D_RANGE.1
        ));
    }
    let mut rows = Vec::new();
    for n in n_range.0..=n_range.1 {
        for d in d_range.0..=d_range.1 {
            rows.push(fermat_row(n, d)?);
        }
    }
    let consistent = rows.iter().all(FermatRow::consistent);
    Ok(FermatTable { rows, consistent })
}

impl FermatTable {
    pub fn to_text(&self) -> String {
        let mut o = String::from(" n  d  klt(Diff)  plt    integrable  adj=O  d<=n-1\n");
        let b = |x: bool| if x { "true" } else { "false" };
        for r in &self.rows {
            let line = format!(
                "{:>2} {:>2}  {:<9}  {:<5}  {:<10}  {:<5}  {:<5}{}",
                r.n,
                r.d,
                b(r.klt_of_different),
                b(r.plt),
                b(r.ohsawa_integrable),
                b(r.adjoint_trivial),
                b(r.expected),
                if r.consistent() { "" } else { "  <-- DISAGREEMENT" }
            );
            let _ = writeln!(o, "{}", line.trim_end());
        }
        let _ = writeln!(o, "{} rows, consistent: {}", self.rows.len(), b(self.consistent));
        o
    }
}
