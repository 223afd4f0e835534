//! CLI contract: output headers, exit codes and the output-directory override.

use std::path::Path;
use std::process::{Command, Output};

fn lossdiv(args: &[&str], env_dir: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lossdiv"));
    cmd.args(args).env_remove("LOSSDIV_OUT_DIR");
    if let Some(d) = env_dir {
        cmd.env("LOSSDIV_OUT_DIR", d);
    }
    cmd.output().unwrap()
}

fn header(dir: &Path, file: &str) -> String {
    let text = std::fs::read_to_string(dir.join(file)).unwrap();
    text.lines().next().unwrap().to_string()
}

#[test]
fn golden_headers() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let ds = d.to_str().unwrap();
    assert_eq!(lossdiv(&["--out-dir", ds, "verify", "--measures", "3"], None).status.code(), Some(0));
    assert_eq!(lossdiv(&["--out-dir", ds, "equiv", "--pairs", "3"], None).status.code(), Some(0));
    let erm = lossdiv(&["--out-dir", ds, "erm", "--n", "50,500", "--seeds", "2", "--mismatch", "hellinger"], None);
    assert!(matches!(erm.status.code(), Some(0 | 1)));
    assert_eq!(lossdiv(&["catalog", "--name", "hinge", "--export", ds], None).status.code(), Some(0));

    let golden = [
        ("correspondence.csv", "loss,generator,measure,z_count,optimal_phi_risk,divergence,residual,tol,pass"),
        ("conditions.csv", "loss,generator,check,role,pass,witness_beta,residual"),
        ("equivalence.csv", "f1,f2,c,a,b,residual,verdict"),
        ("generators.csv", "generator,symmetric,coercive,variational_family,c"),
        ("dominance.csv", "pair,a,b,c,q,t1,t2,verdict_bayes,verdict_divergence,agreement"),
        ("consistency.csv", "loss,n,seed,excess_bayes,t_selected,runtime_ms"),
        ("medians.csv", "loss,n,median_excess_bayes"),
        ("witness.csv", "t,risk_f1,risk_f2,bayes,argmin_f1,argmin_f2"),
        ("witness_summary.csv", "f1,f2,a,b,c,q,t_f1,t_f2,gap"),
        ("loss_hinge.csv", "x,value"),
        ("generator_hinge.csv", "x,value"),
        ("psi_hinge.csv", "x,value"),
    ];
    for (file, expected) in golden {
        assert_eq!(header(d, file), expected, "{file}");
    }
}

#[test]
fn catalog_listing() {
    let out = lossdiv(&["catalog"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("loss,phi,generator,psi,u_star,link"));
    let hinge = text.lines().find(|l| l.starts_with("hinge,")).unwrap();
    assert!(hinge.contains("2*(-min(u,1))") && hinge.contains("2-b on [0,2]") && hinge.ends_with(",u"));

    let out = lossdiv(&["catalog", "--name", "logistic"], None);
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text.lines().nth(1).unwrap();
    let u_star: f64 = row.rsplit(',').nth(1).unwrap().parse().unwrap();
    assert!((u_star - std::f64::consts::LN_2).abs() < 1e-6);
}

#[test]
fn usage_errors_exit_2() {
    let out = lossdiv(&["catalog", "--name", "nope"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("UnknownLoss"));

    let out = lossdiv(&["erm", "--losses", "zero_one"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NonConvexLoss"));

    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.toml");
    std::fs::write(&bad, "[verify]\nmeasure = 3\n").unwrap();
    let out = lossdiv(&["--config", bad.to_str().unwrap(), "verify"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown field"));

    std::fs::write(&bad, "[verify\n").unwrap();
    assert_eq!(lossdiv(&["--config", bad.to_str().unwrap(), "verify"], None).status.code(), Some(2));

    assert_eq!(lossdiv(&["frobnicate"], None).status.code(), Some(2));
}

#[test]
fn sym_kl_symmetry_and_coercivity_rows() {
    let tmp = tempfile::tempdir().unwrap();
    let ds = tmp.path().to_str().unwrap();
    let out = lossdiv(&["--out-dir", ds, "verify", "--loss", "sym_kl", "--measures", "5"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(tmp.path().join("conditions.csv")).unwrap();
    for check in ["symmetry", "coercivity"] {
        let row = text.lines().find(|l| l.contains(&format!(",{check},"))).unwrap();
        assert!(row.contains(",classify,true,"), "{row}");
    }
}

#[test]
fn failing_assertion_exits_1() {
    // a tolerance no numerical minimizer can meet
    let tmp = tempfile::tempdir().unwrap();
    let ds = tmp.path().to_str().unwrap();
    let out = lossdiv(&["--out-dir", ds, "verify", "--loss", "logistic", "--measures", "5", "--tol", "1e-300"], None);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn env_var_sets_output_dir() {
    let tmp = tempfile::tempdir().unwrap();
    let out = lossdiv(&["equiv", "--pairs", "2"], Some(tmp.path()));
    assert_eq!(out.status.code(), Some(0));
    assert!(tmp.path().join("dominance.csv").exists());
}

#[test]
fn config_file_drives_erm() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.toml");
    let out_dir = tmp.path().join("results");
    std::fs::write(
        &cfg,
        format!(
            "[output]\ndir = {:?}\n\n[source]\na = 1.0\nb = 2.0\nc = 4.0\nq = 0.5\n\n[erm]\nlosses = [\"exponential\"]\nn = [40]\nseeds = 3\n",
            out_dir.to_str().unwrap()
        ),
    )
    .unwrap();
    let out = lossdiv(&["--config", cfg.to_str().unwrap(), "erm"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(out_dir.join("consistency.csv")).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().skip(1).all(|l| l.starts_with("exponential,40,") && l.ends_with(',')));
}
