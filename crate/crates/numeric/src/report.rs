//! CSV emission for external plotting.

use std::fmt::Write;

use crate::fermat::TubeEstimate;
use crate::shell::ShellEstimate;

pub fn shell_csv(estimates: &[ShellEstimate]) -> String {
    let mut out = String::from("t,estimate,std_error,samples,seed\n");
    for e in estimates {
        writeln!(out, "{},{},{},{},{}", e.t, e.value, e.std_error, e.samples, e.seed).expect("string write");
    }
    out
}

pub fn tube_csv(estimates: &[TubeEstimate]) -> String {
    let mut out = String::from("delta,estimate,std_error,samples,seed\n");
    for e in estimates {
        writeln!(
            out,
            "{:e},{},{},{},{}",
            e.delta, e.value, e.std_error, e.samples, e.seed
        )
        .expect("string write");
    }
    out
}
