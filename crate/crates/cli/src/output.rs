use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

pub const OUT_DIR_ENV: &str = "LOSSDIV_OUT_DIR";

// Column order is part of the file contract; tests pin these exact headers.
pub const CORRESPONDENCE_HEADER: &[&str] =
    &["loss", "generator", "measure", "z_count", "optimal_phi_risk", "divergence", "residual", "tol", "pass"];
pub const CONDITIONS_HEADER: &[&str] = &["loss", "generator", "check", "role", "pass", "witness_beta", "residual"];
pub const EQUIVALENCE_HEADER: &[&str] = &["f1", "f2", "c", "a", "b", "residual", "verdict"];
pub const GENERATORS_HEADER: &[&str] = &["generator", "symmetric", "coercive", "variational_family", "c"];
pub const DOMINANCE_HEADER: &[&str] =
    &["pair", "a", "b", "c", "q", "t1", "t2", "verdict_bayes", "verdict_divergence", "agreement"];
pub const CONSISTENCY_HEADER: &[&str] = &["loss", "n", "seed", "excess_bayes", "t_selected", "runtime_ms"];
pub const MEDIANS_HEADER: &[&str] = &["loss", "n", "median_excess_bayes"];
pub const WITNESS_HEADER: &[&str] = &["t", "risk_f1", "risk_f2", "bayes", "argmin_f1", "argmin_f2"];
pub const WITNESS_SUMMARY_HEADER: &[&str] = &["f1", "f2", "a", "b", "c", "q", "t_f1", "t_f2", "gap"];
pub const CURVE_HEADER: &[&str] = &["x", "value"];

/// Flag, then config file, then environment, then `out`.
pub fn resolve_dir(flag: Option<&Path>, config: Option<&str>) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    if let Some(p) = config {
        return PathBuf::from(p);
    }
    match std::env::var_os(OUT_DIR_ENV) {
        Some(p) if !p.is_empty() => PathBuf::from(p),
        _ => PathBuf::from("out"),
    }
}

/// Shortest round-trip decimal, so reruns produce identical bytes.
pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn write_csv(dir: &Path, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let path = dir.join(name);
    let mut w = csv::Writer::from_path(&path).with_context(|| format!("cannot write {}", path.display()))?;
    w.write_record(header)?;
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(path)
}
