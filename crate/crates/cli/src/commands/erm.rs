use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, bail, Result};
use lossdiv::erm::{consistency_run, default_source_grid, median_summary, quantizer_mismatch, FunctionClassSpec};
use lossdiv::measures::SourceKind;
use lossdiv::{Generator, SourceSpec, SurrogateLoss};
use rayon::prelude::*;

use crate::output::{
    num, opt_num, write_csv, CONSISTENCY_HEADER, MEDIANS_HEADER, WITNESS_HEADER, WITNESS_SUMMARY_HEADER,
};

pub struct ErmArgs {
    pub losses: Vec<String>,
    pub n: Vec<usize>,
    pub seeds: u64,
    pub seed_base: u64,
    pub grid_points: usize,
    pub gamma_bound: f64,
    pub source: SourceSpec,
    pub mismatch: Option<String>,
    pub mismatch_base: String,
    pub timing: bool,
}

fn generator(name: &str) -> Result<Generator> {
    Generator::from_name(name).ok_or_else(|| anyhow!("UnknownGenerator: {name}"))
}

pub fn run(args: &ErmArgs, out: &Path) -> Result<bool> {
    let mut losses = Vec::new();
    for name in &args.losses {
        let phi = SurrogateLoss::from_name(name).ok_or_else(|| anyhow!("UnknownLoss: {name}"))?;
        if !phi.is_convex() {
            bail!("NonConvexLoss: {name} is not convex and the consistency experiment needs a convex loss");
        }
        losses.push(phi);
    }
    if args.n.is_empty() || args.n.contains(&0) {
        bail!("n must be a non-empty list of positive sample sizes");
    }
    let fc = FunctionClassSpec::threshold_grid(&args.source, args.grid_points, args.gamma_bound)?;
    fc.validate(&args.source)?;
    let mismatch = match &args.mismatch {
        Some(name) => Some((generator(&args.mismatch_base)?, generator(name)?, name.as_str())),
        None => None,
    };

    // Jobs are collected in (loss, n, seed) order whatever the thread count.
    let jobs: Vec<(usize, usize, u64)> = (0..losses.len())
        .flat_map(|l| args.n.iter().flat_map(move |&n| (0..args.seeds).map(move |r| (l, n, r))))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(l, n, r)| {
            let start = Instant::now();
            let row = consistency_run(&losses[l], n, args.seed_base + r, &args.source, &fc)?;
            Ok((row, start.elapsed().as_secs_f64() * 1e3))
        })
        .collect::<lossdiv::Result<Vec<_>>>()?;
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|(r, ms)| {
            vec![
                r.loss.clone(),
                r.n.to_string(),
                r.seed.to_string(),
                num(r.excess_bayes),
                opt_num(r.t_selected),
                if args.timing { format!("{ms:.3}") } else { String::new() },
            ]
        })
        .collect();
    write_csv(out, "consistency.csv", CONSISTENCY_HEADER, &csv_rows)?;

    let plain: Vec<_> = rows.into_iter().map(|(r, _)| r).collect();
    let summary = median_summary(&plain);
    let med_rows: Vec<Vec<String>> =
        summary.iter().map(|(l, n, m)| vec![l.clone(), n.to_string(), num(*m)]).collect();
    write_csv(out, "medians.csv", MEDIANS_HEADER, &med_rows)?;

    // The declared assertion: medians fall strictly as n grows.
    let mut ok = true;
    for phi in &losses {
        let meds: Vec<(usize, f64)> =
            summary.iter().filter(|(l, _, _)| l == phi.name()).map(|(_, n, m)| (*n, *m)).collect();
        let mut sorted = meds.clone();
        sorted.sort_by_key(|(n, _)| *n);
        let decreasing = sorted.windows(2).all(|w| w[1].1 < w[0].1);
        let listing: Vec<String> = sorted.iter().map(|(n, m)| format!("n={n}: {m}")).collect();
        println!("{}: median excess Bayes risk {}", phi.name(), listing.join(", "));
        if !decreasing {
            println!("{}: medians are not strictly decreasing in n", phi.name());
            ok = false;
        }
    }

    if let Some((f1, f2, name)) = mismatch {
        let w = quantizer_mismatch(&f1, &f2, &default_source_grid(), args.grid_points)?;
        let rows: Vec<Vec<String>> = (0..w.thresholds.len())
            .map(|i| {
                vec![
                    num(w.thresholds[i]),
                    num(w.risk_f1[i]),
                    num(w.risk_f2[i]),
                    num(w.bayes[i]),
                    u8::from(i == w.argmin_f1).to_string(),
                    u8::from(i == w.argmin_f2).to_string(),
                ]
            })
            .collect();
        write_csv(out, "witness.csv", WITNESS_HEADER, &rows)?;
        let SourceKind::UniformPair { a, b, c } = w.src.kind else { unreachable!("grid holds uniform pairs") };
        let summary = vec![vec![
            args.mismatch_base.clone(),
            name.to_string(),
            num(a),
            num(b),
            num(c),
            num(w.src.priors.q()),
            num(w.thresholds[w.argmin_f1]),
            num(w.thresholds[w.argmin_f2]),
            num(w.gap),
        ]];
        write_csv(out, "witness_summary.csv", WITNESS_SUMMARY_HEADER, &summary)?;
        println!(
            "mismatch {} vs {name}: source (a={a}, b={b}, c={c}, q={}), thresholds {} vs {}, Bayes gap {}",
            args.mismatch_base,
            w.src.priors.q(),
            w.thresholds[w.argmin_f1],
            w.thresholds[w.argmin_f2],
            w.gap
        );
        ok &= w.gap > 0.0 && w.argmin_f1 != w.argmin_f2;
    }
    println!("erm: output in {}", out.display());
    Ok(ok)
}
