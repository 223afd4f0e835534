use std::path::Path;

use anyhow::{bail, Result};
use lossdiv::duality::psi_from_f;
use lossdiv::losses::formula;
use lossdiv::minimize::linear_grid;
use lossdiv::LossKind;

use crate::output::{num, write_csv, CURVE_HEADER};

fn psi_formula(kind: LossKind) -> &'static str {
    match kind {
        LossKind::ZeroOne => "1-b on [0,1], 0 beyond",
        LossKind::Hinge | LossKind::NonconvexExp => "2-b on [0,2], 0 beyond",
        LossKind::Exponential => "1/b",
        LossKind::Logistic => "b-log(exp(b)-1)",
        LossKind::LeastSquares => "(2-sqrt(b))^2 on [0,4], 0 beyond",
        LossKind::SymKl => "conjugate of (u-1)log u at -b",
    }
}

pub fn resolve(name: &str) -> Result<LossKind> {
    match LossKind::from_name(name) {
        Some(k) => Ok(k),
        None => bail!("UnknownLoss: {name} (known: {})", names()),
    }
}

fn names() -> String {
    LossKind::ALL.iter().map(|k| k.name()).collect::<Vec<_>>().join(", ")
}

pub fn run(name: Option<&str>, export: Option<&Path>) -> Result<bool> {
    let kinds = match name {
        Some(n) => vec![resolve(n)?],
        None => LossKind::ALL.to_vec(),
    };
    println!("loss,phi,generator,psi,u_star,link");
    for &k in &kinds {
        let f = k.generator();
        let u_star = psi_from_f(&f)?.u_star();
        let link = k.link().map(|g| g.name()).unwrap_or("none");
        println!("{},{},{},{},{},{}", k.name(), quote(&formula(k)), quote(&f.formula()), quote(psi_formula(k)), num(u_star), quote(link));
    }
    if let Some(dir) = export {
        for &k in &kinds {
            let loss: Vec<Vec<String>> = linear_grid(-3.0, 3.0, 601).into_iter().map(|a| vec![num(a), num(k.eval(a))]).collect();
            write_csv(dir, &format!("loss_{}.csv", k.name()), CURVE_HEADER, &loss)?;
            let f = k.generator();
            let gen: Vec<Vec<String>> = linear_grid(0.01, 5.0, 500).into_iter().map(|u| vec![num(u), num(f.eval(u))]).collect();
            write_csv(dir, &format!("generator_{}.csv", k.name()), CURVE_HEADER, &gen)?;
            let psi = psi_from_f(&f)?;
            let curve: Vec<Vec<String>> = linear_grid(0.05, 5.0, 496)
                .into_iter()
                .map(|b| vec![num(b), psi.eval(b).map(num).unwrap_or_default()])
                .collect();
            write_csv(dir, &format!("psi_{}.csv", k.name()), CURVE_HEADER, &curve)?;
        }
    }
    Ok(true)
}

fn quote(s: &str) -> String {
    if s.contains(',') {
        format!("\"{s}\"")
    } else {
        s.to_string()
    }
}
