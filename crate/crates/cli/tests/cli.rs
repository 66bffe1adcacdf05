use std::process::Command;

use pairsing_cli::report::Report;
use pairsing_cli::{run_args, Outcome, EXIT_INVALID, EXIT_OK};

fn run(args: &str) -> Outcome {
    run_args(std::iter::once("pairsing").chain(args.split_whitespace()))
}

fn json(args: &str) -> (Report, Outcome) {
    let out = run(&format!("{args} --format json"));
    assert_eq!(out.code, EXIT_OK, "{args}: {}", out.stderr);
    (serde_json::from_str(&out.stdout).unwrap(), out)
}

#[test]
fn classify_fermat_3_2() {
    let (r, _) = json("classify family fermat:3,2");
    let Report::Classify(c) = r else { panic!("wrong report") };
    assert_eq!(c.pair.verdict, "PLT");
    assert!(c.different.is_empty());
    assert!(c.ohsawa.integrable);
    assert!(c.adjoint_trivial);
    assert!(c.integrability_matches_klt && c.inversion.consistent && c.inversion.applicable);
}

#[test]
fn different_a_surface_4() {
    let (r, _) = json("different family a-surface:4");
    let Report::Different { different, .. } = r else {
        panic!("wrong report")
    };
    assert_eq!(different.len(), 1);
    assert_eq!(different["p"], "3/4");
    assert!(run("different family a-surface:4").stdout.contains("3/4*[p]"));
}

#[test]
fn classify_kollar() {
    let (r, _) = json("classify family kollar");
    let Report::Classify(c) = r else { panic!("wrong report") };
    assert_eq!(c.pair.verdict, "NOT_LC");
    assert!(!c.inversion.applicable);
    assert!(!c.inversion.consistent);
}

#[test]
fn family_names_work_without_keyword() {
    assert_eq!(run("classify node").stdout, run("classify family node").stdout);
}

#[test]
fn json_reports_round_trip() {
    for args in [
        "validate node",
        "classify fermat:4,3",
        "different kollar",
        "ohsawa fermat:3,4",
        "adjoint a-surface:3",
        "adjoint kollar",
        "inversion node",
        "family a-surface:2",
        "family fermat-table:2-4,1-5",
        "verify-numeric fermat:3,2 --samples 20000",
        "verify-numeric monomial:2:1/2 --samples 20000",
    ] {
        let (r, out) = json(args);
        assert_eq!(r.to_json() + "\n", out.stdout, "{args}");
        let again: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(again, r, "{args}");
    }
}

#[test]
fn fermat_table_has_45_consistent_rows() {
    let (r, _) = json("family fermat-table:2-6,1-9");
    let Report::FermatTable(t) = r else {
        panic!("wrong report")
    };
    assert_eq!(t.rows.len(), 45);
    assert!(t.consistent);
    for row in &t.rows {
        assert_eq!(row.klt_of_different, row.d < row.n);
    }
}

#[test]
fn invalid_inputs_exit_1_without_report() {
    for args in [
        "classify",
        "bogus node",
        "classify no-such-file.json",
        "classify fermat:3",
        "classify monomial:2:1/2",
        "verify-numeric node",
        "verify-numeric fermat:9,2",
        "verify-numeric fermat:3,2 --t-grid -8,-12",
        "family fermat-table:1-7,1-9",
        "classify node --format yaml",
    ] {
        let out = run(args);
        assert_eq!(out.code, EXIT_INVALID, "{args}");
        assert!(out.stdout.is_empty(), "{args}: {}", out.stdout);
        assert!(!out.stderr.is_empty(), "{args}");
    }
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(run("--help").code, EXIT_OK);
    assert_eq!(run("--version").code, EXIT_OK);
}

fn write_temp(name: &str, body: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("pairsing-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn model_files_are_read_and_validated() {
    let model = run("family node").stdout;
    let good = write_temp("node.json", &model);
    let out = run(&format!("classify {}", good.display()));
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(out.stdout, run("classify node").stdout);

    // drop the strict transform: a validation failure, listed on stdout
    let mut v: serde_json::Value = serde_json::from_str(&model).unwrap();
    v["records"].as_array_mut().unwrap().remove(0);
    let bad = write_temp("bad.json", &v.to_string());
    let out = run(&format!("classify {}", bad.display()));
    assert_eq!(out.code, EXIT_INVALID);
    assert!(out.stdout.contains("missing-strict-transform"), "{}", out.stdout);
    let out = run(&format!("validate {}", bad.display()));
    assert_eq!(out.code, EXIT_INVALID);
    assert!(out.stdout.contains("valid: no"));

    let garbage = write_temp("garbage.json", "{ not json");
    assert_eq!(run(&format!("classify {}", garbage.display())).code, EXIT_INVALID);
}

#[test]
fn out_writes_json_and_csv() {
    let dir = std::env::temp_dir().join(format!("pairsing-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let j = dir.join("r.json");
    let out = run(&format!(
        "verify-numeric fermat:3,2 --samples 20000 --format json --out {}",
        j.display()
    ));
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(std::fs::read_to_string(&j).unwrap(), out.stdout);

    let c = dir.join("r.csv");
    let out = run(&format!(
        "verify-numeric monomial:2:1/2 --samples 20000 --out {}",
        c.display()
    ));
    assert_eq!(out.code, EXIT_OK);
    let csv = std::fs::read_to_string(&c).unwrap();
    assert!(csv.starts_with("t,estimate,std_error,samples,seed\n"));
    assert_eq!(csv.lines().count(), 5);

    let c2 = dir.join("bad.csv");
    assert_eq!(run(&format!("classify node --out {}", c2.display())).code, EXIT_INVALID);
}

#[test]
fn seed_flag_and_t_grid() {
    let a = run("verify-numeric fermat:3,2 --samples 20000 --seed 7 --format json");
    let b = run("verify-numeric fermat:3,2 --samples 20000 --seed 7 --format json");
    let c = run("verify-numeric fermat:3,2 --samples 20000 --seed 8 --format json");
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let (r, _) = json("verify-numeric fermat:3,2 --samples 20000 --t-grid -6,-9,-14");
    let Report::VerifyNumeric(n) = r else {
        panic!("wrong report")
    };
    let ts: Vec<f64> = n.fermat.unwrap().estimates.iter().map(|e| e.t).collect();
    assert_eq!(ts, [-6.0, -9.0, -14.0]);
}

#[test]
fn binary_reads_seed_from_environment() {
    let bin = env!("CARGO_BIN_EXE_pairsing");
    let args = ["verify-numeric", "fermat:3,2", "--samples", "20000", "--format", "json"];
    let with_env = Command::new(bin).args(args).env("PAIRSING_SEED", "7").output().unwrap();
    assert!(with_env.status.success());
    let with_flag = Command::new(bin)
        .args(args)
        .args(["--seed", "7"])
        .env_remove("PAIRSING_SEED")
        .output()
        .unwrap();
    assert_eq!(with_env.stdout, with_flag.stdout);
    let v: serde_json::Value = serde_json::from_slice(&with_env.stdout).unwrap();
    assert_eq!(v["fermat"]["estimates"][0]["seed"], 7);

    let bad = Command::new(bin).args(["classify", "fermat:3"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_INVALID));
    assert!(bad.stdout.is_empty());
}
