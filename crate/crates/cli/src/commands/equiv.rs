use std::path::Path;

use anyhow::{anyhow, Result};
use lossdiv::equivalence::{
    affine_fit, coercivity_check, default_c_grid, default_q_grid, dominance_check, standard_grid, symmetry_check,
    variational_family_check, Dominance,
};
use lossdiv::erm::default_source_grid;
use lossdiv::measures::SourceKind;
use lossdiv::rng::SampleStream;
use lossdiv::{Generator, Quantizer};
use rayon::prelude::*;

use crate::output::{num, write_csv, DOMINANCE_HEADER, EQUIVALENCE_HEADER, GENERATORS_HEADER};

pub struct EquivArgs {
    pub generators: Vec<String>,
    pub pairs: usize,
    pub seed: u64,
}

fn verdict_name(d: Dominance) -> &'static str {
    match d {
        Dominance::Both => "both",
        Dominance::First => "first",
        Dominance::Second => "second",
        Dominance::Neither => "neither",
    }
}

/// Pair `i` draws a source from the default grid and two thresholds in
/// `(a, b)` from replicate stream `i`.
pub fn random_threshold_pair(seed: u64, i: u64) -> (lossdiv::SourceSpec, f64, f64) {
    let sources = default_source_grid();
    let mut s = SampleStream::new(seed, i);
    let src = sources[s.index(sources.len())].clone();
    let SourceKind::UniformPair { a, b, .. } = src.kind else { unreachable!("grid holds uniform pairs") };
    // keep thresholds off the open interval's ends
    let pad = 1e-3 * (b - a);
    let t1 = s.uniform_in(a + pad, b - pad);
    let t2 = s.uniform_in(a + pad, b - pad);
    (src, t1, t2)
}

pub fn run(args: &EquivArgs, out: &Path) -> Result<bool> {
    let gens = args
        .generators
        .iter()
        .map(|n| Generator::from_name(n).map(|g| (n.clone(), g)).ok_or_else(|| anyhow!("UnknownGenerator: {n}")))
        .collect::<Result<Vec<_>>>()?;
    let grid = standard_grid();

    let mut eq_rows = Vec::new();
    for (i, (n1, f1)) in gens.iter().enumerate() {
        for (n2, f2) in &gens[i + 1..] {
            let row = match affine_fit(f1, f2, &grid) {
                Ok(r) => vec![n1.clone(), n2.clone(), num(r.c), num(r.a), num(r.b), num(r.residual), r.verdict.to_string()],
                Err(e) => vec![n1.clone(), n2.clone(), String::new(), String::new(), String::new(), String::new(), format!("error: {e}")],
            };
            eq_rows.push(row);
        }
    }
    write_csv(out, "equivalence.csv", EQUIVALENCE_HEADER, &eq_rows)?;

    let mut gen_rows = Vec::new();
    for (name, f) in &gens {
        let (family, c) = match variational_family_check(f) {
            Ok(r) => (r.verdict, num(r.c)),
            Err(_) => (false, String::new()),
        };
        gen_rows.push(vec![
            name.clone(),
            symmetry_check(f, &grid).to_string(),
            coercivity_check(f).to_string(),
            family.to_string(),
            c,
        ]);
    }
    write_csv(out, "generators.csv", GENERATORS_HEADER, &gen_rows)?;

    let (q_grid, c_grid) = (default_q_grid(), default_c_grid());
    let dom: Vec<(bool, Vec<String>)> = (0..args.pairs as u64)
        .into_par_iter()
        .map(|i| -> Result<(bool, Vec<String>)> {
            let (src, t1, t2) = random_threshold_pair(args.seed, i);
            let SourceKind::UniformPair { a, b, c } = src.kind else { unreachable!() };
            let r = dominance_check(&Quantizer::threshold(t1)?, &Quantizer::threshold(t2)?, &src, &q_grid, &c_grid)?;
            let same = r.verdict_bayes() == r.verdict_divergence() && r.agreement;
            Ok((
                same,
                vec![
                    i.to_string(),
                    num(a),
                    num(b),
                    num(c),
                    num(src.priors.q()),
                    num(t1),
                    num(t2),
                    verdict_name(r.verdict_bayes()).to_string(),
                    verdict_name(r.verdict_divergence()).to_string(),
                    r.agreement.to_string(),
                ],
            ))
        })
        .collect::<Result<_>>()?;
    let ok = dom.iter().all(|(s, _)| *s);
    let disagreements = dom.iter().filter(|(s, _)| !*s).count();
    let dom_rows: Vec<Vec<String>> = dom.into_iter().map(|(_, r)| r).collect();
    write_csv(out, "dominance.csv", DOMINANCE_HEADER, &dom_rows)?;

    println!(
        "equiv: {} generator pairs, {} dominance pairs, {disagreements} verdict disagreements; output in {}",
        eq_rows.len(),
        dom_rows.len(),
        out.display()
    );
    Ok(ok)
}
