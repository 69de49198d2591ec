//! Text, JSON and CSV renderings of results. Rationals are written as exact
//! `p/q` strings everywhere.

use prauction_core::equilibrium::EquilibriumResult;
use prauction_core::figure::RatioRow;
use prauction_core::oracle::{McEstimate, OracleResult};
use prauction_core::{BestResponseReport, BidProfile, PsiConstruction, Rational};
use serde_json::{json, Value};

use crate::error::CliResult;

fn strings(p: &BidProfile) -> Vec<String> {
    p.bids().iter().map(ToString::to_string).collect()
}

pub fn equilibrium_text(eq: &EquilibriumResult) -> String {
    format!(
        "{} (branch={}, fidelity={})",
        eq.value,
        eq.branch.as_str(),
        eq.fidelity.as_str()
    )
}

pub fn equilibrium_json(
    n: usize,
    beta: &Rational,
    ratio: &Rational,
    eq: &EquilibriumResult,
) -> Value {
    json!({
        "n": n,
        "beta": beta.to_string(),
        "R": ratio.to_string(),
        "value": eq.value.to_string(),
        "branch": eq.branch.as_str(),
        "fidelity": eq.fidelity.as_str(),
    })
}

pub fn psi_json(c: &PsiConstruction) -> Value {
    json!({
        "n": c.instance.n,
        "beta": c.instance.beta.to_string(),
        "R": c.instance.ratio.to_string(),
        "branch": c.branch.as_str(),
        "fidelity": c.fidelity.as_str(),
        "bids": strings(&c.bids),
    })
}

pub fn best_response_json(r: &BestResponseReport) -> Value {
    json!({
        "case": r.case_tag,
        "ell": r.ell_used,
        "guarantee": r.guarantee.to_string(),
        "achieved": r.achieved.to_string(),
        "fidelity": r.fidelity.as_str(),
        "bids": strings(&r.adversary_bids),
    })
}

pub fn best_response_text(r: &BestResponseReport) -> String {
    format!(
        "case={} ell={} guarantee={} achieved={} fidelity={}\nbids {}",
        r.case_tag,
        r.ell_used,
        r.guarantee,
        r.achieved,
        r.fidelity.as_str(),
        strings(&r.adversary_bids).join(" ")
    )
}

pub fn oracle_json(r: &OracleResult) -> Value {
    json!({
        "value": r.value.to_string(),
        "witness": strings(&r.witness),
        "nodesExplored": r.nodes_explored,
    })
}

pub fn oracle_text(r: &OracleResult) -> String {
    format!(
        "value={} nodes={}\nwitness {}",
        r.value,
        r.nodes_explored,
        strings(&r.witness).join(" ")
    )
}

pub fn minmax_json(value: &Rational, argmin: &BidProfile) -> Value {
    json!({ "value": value.to_string(), "argmin": strings(argmin) })
}

pub fn simulate_json(est: &McEstimate) -> Value {
    json!({
        "trials": est.trials,
        "mean": est.mean.to_string(),
        "meanDecimal": est.mean.to_f64(),
        "stderr": est.stderr,
    })
}

pub fn simulate_text(est: &McEstimate) -> String {
    format!(
        "mean={} stderr={:.6} trials={}",
        est.mean.to_decimal_string(6),
        est.stderr,
        est.trials
    )
}

pub fn ratios_csv(rows: &[RatioRow], decimals: Option<usize>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["n", "R", "equilibrium", "E_A", "E_D", "fidelity"];
    if decimals.is_some() {
        header.extend(["R_dec", "equilibrium_dec", "E_A_dec", "E_D_dec"]);
    }
    w.write_record(&header)?;
    for row in rows {
        let mut rec = vec![
            row.n.to_string(),
            row.ratio.to_string(),
            row.equilibrium.to_string(),
            row.e_a.to_string(),
            row.e_d.to_string(),
            row.fidelity.as_str().to_string(),
        ];
        if let Some(k) = decimals {
            for v in [&row.ratio, &row.equilibrium, &row.e_a, &row.e_d] {
                rec.push(v.to_decimal_string(k));
            }
        }
        w.write_record(&rec)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| crate::error::CliError::Input(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
