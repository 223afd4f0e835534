use std::path::Path;

use anyhow::{bail, Result};
use lossdiv::duality::{check_realizability, psi_from_f};
use lossdiv::equivalence::{coercivity_check, standard_grid, symmetry_check};
use lossdiv::risk::{default_tolerance, verify_correspondence};
use lossdiv::rng::SampleStream;
use lossdiv::{JointMeasure, SurrogateLoss};
use rayon::prelude::*;

use super::catalog::resolve;
use crate::output::{num, opt_num, write_csv, CONDITIONS_HEADER, CORRESPONDENCE_HEADER};

pub const DEFAULT_LOSSES: [&str; 5] = ["hinge", "exponential", "logistic", "least_squares", "sym_kl"];

pub struct VerifyArgs {
    pub losses: Vec<String>,
    pub measures: usize,
    pub seed: u64,
    pub min_cells: usize,
    pub max_cells: usize,
    pub tol: Option<f64>,
}

/// Measure `i` is drawn from replicate stream `i`, so the set of measures does
/// not depend on how many are requested.
pub fn random_measures(seed: u64, count: usize, min_cells: usize, max_cells: usize) -> Vec<JointMeasure> {
    (0..count as u64)
        .map(|i| {
            let mut s = SampleStream::new(seed, i);
            let z = min_cells + s.index(max_cells - min_cells + 1);
            s.joint_measure(z)
        })
        .collect()
}

pub fn run(args: &VerifyArgs, out: &Path) -> Result<bool> {
    if args.min_cells < 1 || args.max_cells < args.min_cells {
        bail!("need 1 <= min_cells <= max_cells");
    }
    if let Some(t) = args.tol {
        if !(t > 0.0) {
            bail!("tol must be positive");
        }
    }
    let kinds = args.losses.iter().map(|n| resolve(n)).collect::<Result<Vec<_>>>()?;
    let measures = random_measures(args.seed, args.measures, args.min_cells, args.max_cells);

    let jobs: Vec<(usize, usize)> = (0..kinds.len()).flat_map(|l| (0..measures.len()).map(move |i| (l, i))).collect();
    let rows: Vec<(bool, Vec<String>)> = jobs
        .par_iter()
        .map(|&(l, i)| {
            let k = kinds[l];
            let f = k.generator();
            let tol = args.tol.unwrap_or_else(|| default_tolerance(&f));
            let m = &measures[i];
            let head = vec![k.name().to_string(), f.formula(), i.to_string(), m.z_count().to_string()];
            match verify_correspondence(&SurrogateLoss::catalog(k), &f, m, tol) {
                Ok(r) => {
                    let tail = [num(r.optimal_phi_risk), num(r.divergence_value), num(r.correspondence_residual), num(tol), r.pass.to_string()];
                    (r.pass, head.into_iter().chain(tail).collect())
                }
                Err(e) => {
                    eprintln!("{} measure {i}: {e}", k.name());
                    let tail = [String::new(), String::new(), String::new(), num(tol), "false".to_string()];
                    (false, head.into_iter().chain(tail).collect())
                }
            }
        })
        .collect();
    let mut ok = rows.iter().all(|(p, _)| *p);
    let failures = rows.iter().filter(|(p, _)| !*p).count();
    let rows: Vec<Vec<String>> = rows.into_iter().map(|(_, r)| r).collect();
    write_csv(out, "correspondence.csv", CORRESPONDENCE_HEADER, &rows)?;

    // Realizability rows are assertions; symmetry and coercivity only classify.
    let mut cond_rows = Vec::new();
    let grid = standard_grid();
    for &k in &kinds {
        let f = k.generator();
        let psi = psi_from_f(&f)?;
        let tol = if psi.is_exact() { 1e-8 } else { 1e-4 };
        for row in check_realizability(&psi, tol).rows {
            ok &= row.pass;
            cond_rows.push(vec![
                k.name().to_string(),
                f.formula(),
                row.condition.to_string(),
                "assert".to_string(),
                row.pass.to_string(),
                opt_num(row.witness_beta),
                num(row.residual),
            ]);
        }
        for (check, pass) in [("symmetry", symmetry_check(&f, &grid)), ("coercivity", coercivity_check(&f))] {
            cond_rows.push(vec![
                k.name().to_string(),
                f.formula(),
                check.to_string(),
                "classify".to_string(),
                pass.to_string(),
                String::new(),
                String::new(),
            ]);
        }
    }
    write_csv(out, "conditions.csv", CONDITIONS_HEADER, &cond_rows)?;

    println!("verify: {} correspondence checks, {failures} failed; output in {}", rows.len(), out.display());
    Ok(ok)
}
