//! The full cross-verification grid: every odd `n ≤ nmax`, every `k`, and
//! every order `2l + 1` with `l ≤ lmax`.

use rayon::prelude::*;
use serde::Serialize;

use crate::closedform::{z_case1, SpectralParams};
use crate::exact::ExactScalar;
use crate::ktype_graph::{build_graph, KTypeGraph};
use crate::operators::{
    a_kl_eig, compare_with_spectrum, dirac_eig, verify_intertwinor, OperatorSpec, ScalarOperator,
};
use crate::recursion::{check_consistency, solve};
use crate::weights::Sign;

/// Shift one edge datum of every graph, to confirm the suite notices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaultInjection {
    pub edge: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub nmax: u32,
    pub lmax: u32,
    pub jmax: u32,
    pub fault: Option<FaultInjection>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SuiteRow {
    pub n: u32,
    pub k: u32,
    pub l: Option<u32>,
    pub check: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub nmax: u32,
    pub lmax: u32,
    pub jmax: u32,
    pub rows: Vec<SuiteRow>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SuiteRow> {
        self.rows.iter().filter(|r| !r.passed)
    }
}

/// Non-integral sample points; every edge datum is an integer for odd `n`.
const CYCLE_SAMPLES: [(i64, i64); 5] = [(1, 2), (1, 3), (-7, 5), (13, 4), (2, 9)];

pub fn run_suite(config: &SuiteConfig) -> SuiteReport {
    let cases: Vec<(u32, u32)> = (3..=config.nmax)
        .step_by(2)
        .flat_map(|n| (0..=(n - 1) / 2).map(move |k| (n, k)))
        .collect();
    let mut rows: Vec<SuiteRow> = cases
        .par_iter()
        .flat_map_iter(|&(n, k)| run_case(config, n, k))
        .collect();
    rows.sort();
    SuiteReport {
        nmax: config.nmax,
        lmax: config.lmax,
        jmax: config.jmax,
        rows,
    }
}

fn row(
    n: u32,
    k: u32,
    l: Option<u32>,
    check: &'static str,
    result: Result<(), String>,
) -> SuiteRow {
    let (passed, detail) = match result {
        Ok(()) => (true, String::new()),
        Err(d) => (false, d),
    };
    SuiteRow {
        n,
        k,
        l,
        check,
        passed,
        detail,
    }
}

fn case_graph(config: &SuiteConfig, n: u32, k: u32) -> Result<KTypeGraph, String> {
    let graph = build_graph(n, k, config.jmax).map_err(|e| e.to_string())?;
    match config.fault {
        Some(f) if f.edge < graph.edges().len() => graph
            .perturbed(f.edge, &ExactScalar::one())
            .map_err(|e| e.to_string()),
        _ => Ok(graph),
    }
}

fn run_case(config: &SuiteConfig, n: u32, k: u32) -> Vec<SuiteRow> {
    let mut rows = Vec::new();
    let graph = match case_graph(config, n, k) {
        Ok(g) => g,
        Err(e) => return vec![row(n, k, None, "graph", Err(e))],
    };
    rows.push(row(n, k, None, "graph", graph_sanity(&graph)));

    for l in 0..=config.lmax {
        let r = ExactScalar::frac(2 * i64::from(l) + 1, 2);
        rows.push(row(n, k, Some(l), "normalization", normalization(n, k, &r)));
        rows.push(row(
            n,
            k,
            Some(l),
            "recursion_vs_closedform",
            recursion_matches(&graph, &r),
        ));
        rows.push(row(
            n,
            k,
            Some(l),
            "intertwinor",
            intertwinor(n, k, l, config.jmax),
        ));
        if k >= 1 && l >= 1 {
            rows.push(row(
                n,
                k,
                Some(l),
                "a_kl_identity",
                a_kl_identity(n, k, l, config.jmax),
            ));
        }
    }
    if k == 0 {
        rows.push(row(n, k, None, "dirac", dirac(n, config.jmax)));
    }
    if k == 1 {
        rows.push(row(
            n,
            k,
            None,
            "rarita_schwinger",
            rarita_schwinger(n, config.jmax),
        ));
    }
    rows
}

fn graph_sanity(graph: &KTypeGraph) -> Result<(), String> {
    if !graph.is_connected() {
        return Err("graph is not connected".into());
    }
    let bad = graph.reversal_violations();
    if let Some(&e) = bad.first() {
        let edge = &graph.edges()[e];
        return Err(format!(
            "{} reversal violations, first {} -> {}",
            bad.len(),
            edge.src,
            edge.dst
        ));
    }
    if !graph.nodes_are_summands().map_err(|e| e.to_string())? {
        return Err("a node weight does not branch onto the bundle weight".into());
    }
    for (p, q) in CYCLE_SAMPLES {
        let r = ExactScalar::frac(p, q);
        let report = check_consistency(graph, &r).map_err(|e| e.to_string())?;
        let first = report.failures().next().cloned();
        if let Some(c) = first {
            let path: Vec<String> = c.nodes.iter().map(|n| n.to_string()).collect();
            return Err(format!(
                "r = {r}: cycle {} has product {}",
                path.join(" -> "),
                c.product
            ));
        }
    }
    Ok(())
}

fn normalization(n: u32, k: u32, r: &ExactScalar) -> Result<(), String> {
    let params = SpectralParams::new(n, k, r.clone()).map_err(|e| e.to_string())?;
    let base = crate::ktype_graph::base_node(n, k).map_err(|e| e.to_string())?;
    let z = params.z(&base).map_err(|e| e.to_string())?;
    if z.is_one() {
        Ok(())
    } else {
        Err(format!("spectral function at {base} is {z}"))
    }
}

fn recursion_matches(graph: &KTypeGraph, r: &ExactScalar) -> Result<(), String> {
    let table = solve(graph, r).map_err(|e| e.to_string())?;
    let params = SpectralParams::new(graph.n(), graph.k(), r.clone()).map_err(|e| e.to_string())?;
    for (id, mu) in table.entries() {
        let z = params.z(id).map_err(|e| e.to_string())?;
        if *mu != z {
            return Err(format!("{id}: recursion {mu}, closed form {z}"));
        }
    }
    Ok(())
}

fn intertwinor(n: u32, k: u32, l: u32, jmax: u32) -> Result<(), String> {
    let report = verify_intertwinor(n, k, l, jmax).map_err(|e| e.to_string())?;
    if report.passed() {
        Ok(())
    } else {
        Err(format!(
            "{} non-constant ratios, first constant {:?}",
            report.failures.len(),
            report.constant
        ))
    }
}

fn a_kl_identity(n: u32, k: u32, l: u32, jmax: u32) -> Result<(), String> {
    for j in 0..=jmax {
        for q in [0, 1] {
            a_kl_eig(n, k, l, j, q).map_err(|e| e.to_string())?;
        }
    }
    Ok(())
}

fn dirac(n: u32, jmax: u32) -> Result<(), String> {
    let half_n = ExactScalar::frac(i64::from(n), 2);
    for j in 0..=jmax {
        for eps in Sign::BOTH {
            let z = z_case1(n, &ExactScalar::half(), j, eps).map_err(|e| e.to_string())?;
            let d = dirac_eig(n, j, eps).map_err(|e| e.to_string())?;
            if &half_n * &z != d {
                return Err(format!(
                    "j = {j}, eps = {eps}: (n/2) Z = {}, Dirac = {d}",
                    &half_n * &z
                ));
            }
        }
    }
    Ok(())
}

fn rarita_schwinger(n: u32, jmax: u32) -> Result<(), String> {
    let model = ScalarOperator::new(OperatorSpec::AK0 { n, k: 1 }).map_err(|e| e.to_string())?;
    let report =
        compare_with_spectrum(&model, &ExactScalar::half(), jmax, 0).map_err(|e| e.to_string())?;
    let expected = ExactScalar::frac(i64::from(n) + 2, 2);
    match report.constant {
        Some(c) if report.failures.is_empty() && c == expected => Ok(()),
        other => Err(format!(
            "constant {other:?}, expected {expected}, {} failures",
            report.failures.len()
        )),
    }
}
