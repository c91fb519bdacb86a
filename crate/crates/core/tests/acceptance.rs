//! The ten acceptance criteria, each reported on one PASS/FAIL line.
//! Run with `cargo test -p intertwinor-core --test acceptance -- --nocapture`.

mod common;

use std::time::{Duration, Instant};

use common::{big_j, big_l, bundles, int, odd_poly, q, z1, z2};
use intertwinor_core::closedform::{z_case1, z_case2, SpectralParams};
use intertwinor_core::exact::ExactScalar;
use intertwinor_core::ktype_graph::{build_graph, KTypeGraph};
use intertwinor_core::operators::{
    a_k0_eig, a_kl_eig, a_l_coeff, d_odd_eig, product_eig, tt_star_eig, verify_intertwinor,
};
use intertwinor_core::recursion::{check_consistency, solve, RecursionError};
use intertwinor_core::weights::{KTypeId, Sign};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const NMAX: u32 = 11;
const JMAX: u32 = 40;
const LMAX: u32 = 5;
const TWO_R: [i64; 6] = [1, 3, 5, 7, 9, 11];
const NUMERIC_TOL: f64 = 1e-10;
const RECURSION_BUDGET: Duration = Duration::from_secs(5);

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Theorem value on any node, from the first-principles oracle.
fn oracle(id: &KTypeId, two_r: i64) -> ExactScalar {
    match id.q {
        None => z1(id.n, two_r, id.j, id.eps),
        Some(qq) => z2(id.n, id.k, two_r, id.j, qq, id.eps),
    }
}

fn normalization() -> Outcome {
    let mut count = 0;
    for (n, k) in bundles(NMAX) {
        for two_r in TWO_R {
            let r = q(two_r, 2);
            let z = if k == 0 {
                z_case1(n, &r, 0, Sign::Plus)
            } else {
                z_case2(n, k, &r, 0, 1, Sign::Plus)
            };
            let z = z.map_err(|e| format!("n={n} k={k} 2r={two_r}: {e}"))?;
            ensure(z.is_one(), || {
                format!("n={n} k={k} 2r={two_r}: base value {z}")
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} base values equal 1"))
}

fn recursion_vs_closed_form(graphs: &[KTypeGraph]) -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for g in graphs {
        for two_r in TWO_R {
            let r = q(two_r, 2);
            let params = SpectralParams::new(g.n(), g.k(), r.clone()).map_err(|e| e.to_string())?;
            let table =
                solve(g, &r).map_err(|e| format!("n={} k={} 2r={two_r}: {e}", g.n(), g.k()))?;
            for (id, mu) in table.entries() {
                let closed = params.z(id).map_err(|e| e.to_string())?;
                ensure(*mu == closed, || {
                    format!(
                        "{id} n={} 2r={two_r}: recursion {mu}, closed form {closed}",
                        g.n()
                    )
                })?;
                count += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    let mut oracle_count = 0;
    for g in graphs {
        for two_r in TWO_R {
            let table = solve(g, &q(two_r, 2)).map_err(|e| e.to_string())?;
            for (id, mu) in table.entries() {
                let want = oracle(id, two_r);
                ensure(*mu == want, || {
                    format!("{id} n={} 2r={two_r}: recursion {mu}, oracle {want}", g.n())
                })?;
                oracle_count += 1;
            }
        }
    }
    ensure(elapsed <= RECURSION_BUDGET, || {
        format!("took {elapsed:.2?}, budget {RECURSION_BUDGET:?}")
    })?;
    Ok(format!(
        "{count} node values equal, {oracle_count} also against the Gamma oracle, {elapsed:.2?}"
    ))
}

fn dirac() -> Outcome {
    let half = ExactScalar::half();
    let mut count = 0;
    for n in (3..=NMAX).step_by(2) {
        let half_n = q(i64::from(n), 2);
        for j in 0..=JMAX {
            for eps in Sign::BOTH {
                let lhs = &half_n * &z_case1(n, &half, j, eps).map_err(|e| e.to_string())?;
                let rhs = int(eps.value()) * big_j(n, j);
                ensure(lhs == rhs, || {
                    format!("n={n} j={j} eps={eps}: {lhs} vs {rhs}")
                })?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} eigenvalues"))
}

/// The single ratio `values[i] / spectral[i]`, or the first disagreement.
fn single_constant<I>(pairs: I) -> Result<ExactScalar, String>
where
    I: IntoIterator<Item = (String, ExactScalar, ExactScalar)>,
{
    let mut constant: Option<ExactScalar> = None;
    for (label, value, spectral) in pairs {
        let ratio = value
            .checked_div(&spectral)
            .map_err(|_| format!("{label}: spectral value is 0"))?;
        match &constant {
            None => constant = Some(ratio),
            Some(c) => ensure(*c == ratio, || {
                format!("{label}: ratio {ratio}, expected {c}")
            })?,
        }
    }
    constant.ok_or_else(|| "empty grid".into())
}

fn odd_dirac_powers() -> Outcome {
    let mut n3l1 = None;
    for n in (3..=NMAX).step_by(2) {
        for l in 0..=LMAX {
            let two_r = 2 * i64::from(l) + 1;
            let r = q(two_r, 2);
            let mut pairs = Vec::new();
            for j in 0..=JMAX {
                for eps in Sign::BOTH {
                    let d = d_odd_eig(n, l, j, eps).map_err(|e| e.to_string())?;
                    let z = z_case1(n, &r, j, eps).map_err(|e| e.to_string())?;
                    ensure(z == z1(n, two_r, j, eps), || {
                        format!("n={n} l={l} j={j}: closed form off the oracle")
                    })?;
                    pairs.push((format!("n={n} l={l} j={j} eps={eps}"), d, z));
                }
            }
            let c = single_constant(pairs)?;
            if (n, l) == (3, 1) {
                n3l1 = Some(c);
            }
        }
    }
    let c = n3l1.unwrap();
    ensure(c == q(15, 8), || {
        format!("n=3 l=1 constant {c}, expected 15/8")
    })?;
    Ok("one constant per (n, l); n=3 l=1 gives 15/8".into())
}

fn rarita_schwinger() -> Outcome {
    let half = ExactScalar::half();
    for n in (3..=NMAX).step_by(2) {
        let mut pairs = Vec::new();
        for j in 0..=JMAX {
            for qq in [0, 1] {
                for eps in Sign::BOTH {
                    let a = a_k0_eig(n, 1, j, qq, eps).map_err(|e| e.to_string())?;
                    let z = z_case2(n, 1, &half, j, qq, eps).map_err(|e| e.to_string())?;
                    pairs.push((format!("n={n} j={j} q={qq} eps={eps}"), a, z));
                }
            }
        }
        let c = single_constant(pairs)?;
        let want = q(i64::from(n) + 2, 2);
        ensure(c == want, || {
            format!("n={n}: constant {c}, expected {want}")
        })?;
    }
    Ok("constant n/2+1 for every n".into())
}

fn a_kl_identity() -> Outcome {
    let mut count = 0;
    for (n, k) in bundles(NMAX).into_iter().filter(|&(_, k)| k >= 1) {
        let gap = i64::from(n) - 2 * i64::from(k);
        for l in 1..=LMAX {
            let (l1, l2) = (i64::from(l), i64::from(l).pow(2));
            let a_l = a_l_coeff(n, k, l).map_err(|e| e.to_string())?;
            for j in 0..=JMAX {
                let ll = big_l(n, j);
                for qq in [0u8, 1] {
                    let a0 = a_k0_eig(n, k, j, qq, Sign::Plus).map_err(|e| e.to_string())?;
                    let tt = tt_star_eig(n, k, j, qq).map_err(|e| e.to_string())?;
                    let defining = &a0 * &a0 - int(l2) + &a_l * &tt;
                    let mut stated = &ll * &ll - int(l2);
                    if qq == 0 {
                        stated = stated * q(gap * gap - 4 * l2, (gap + 2).pow(2) - 4 * l2);
                    }
                    let lib = a_kl_eig(n, k, l, j, qq).map_err(|e| e.to_string())?;
                    ensure(defining == stated && lib == stated, || {
                        format!("n={n} k={k} l={l1} j={j} q={qq}: defining {defining}, stated {stated}, library {lib}")
                    })?;
                    count += 1;
                }
            }
        }
    }
    let example = a_kl_eig(5, 1, 1, 0, 0).map_err(|e| e.to_string())?;
    ensure(example == q(75, 28), || {
        format!("n=5 k=1 l=1 j=0 q=0 gives {example}")
    })?;
    Ok(format!(
        "{count} grid points; n=5 k=1 l=1 j=0 q=0 gives 75/28"
    ))
}

fn product_theorem() -> Outcome {
    let mut reports = 0;
    for (n, k) in bundles(NMAX) {
        let gap = i64::from(n) - 2 * i64::from(k);
        for l in 0..=LMAX {
            if k >= 1 {
                for j in 0..=JMAX {
                    for eps in Sign::BOTH {
                        let top = int(eps.value()) * odd_poly(&big_l(n, j), l);
                        let bottom = q(gap - 2 * i64::from(l), gap + 2 + 2 * i64::from(l)) * &top;
                        let p1 = product_eig(n, k, l, j, 1, eps).map_err(|e| e.to_string())?;
                        let p0 = product_eig(n, k, l, j, 0, eps).map_err(|e| e.to_string())?;
                        ensure(p1 == top && p0 == bottom, || {
                            format!("n={n} k={k} l={l} j={j} eps={eps}: product {p1}, {p0}")
                        })?;
                    }
                }
            }
            let report = verify_intertwinor(n, k, l, JMAX).map_err(|e| e.to_string())?;
            ensure(report.passed(), || {
                format!(
                    "n={n} k={k} l={l}: {} non-constant ratios",
                    report.failures.len()
                )
            })?;
            if (n, k, l) == (5, 1, 1) {
                let c = report.constant.clone().unwrap();
                ensure(c == q(315, 8), || {
                    format!("n=5 k=1 l=1 constant {c}, expected 315/8")
                })?;
            }
            reports += 1;
        }
    }
    Ok(format!(
        "{reports} intertwinor checks pass; n=5 k=1 l=1 constant 315/8"
    ))
}

/// A random rational with small numerator and denominator.
fn random_rational(rng: &mut ChaCha8Rng) -> ExactScalar {
    q(rng.gen_range(-120..=120), rng.gen_range(1..=12))
}

fn graph_sanity(graphs: &[KTypeGraph]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut cycles = 0;
    let mut skipped = 0;
    for g in graphs {
        let bad = g.reversal_violations();
        ensure(bad.is_empty(), || {
            format!("n={} k={}: {} reversal violations", g.n(), g.k(), bad.len())
        })?;
        let mut sampled = 0;
        while sampled < 20 {
            let r = random_rational(&mut rng);
            match check_consistency(g, &r) {
                Ok(report) => {
                    if let Some(c) = report.failures().next() {
                        return Err(format!(
                            "n={} k={} r={r}: cycle product {}",
                            g.n(),
                            g.k(),
                            c.product
                        ));
                    }
                    cycles += report.cycles.len();
                    sampled += 1;
                }
                Err(RecursionError::PoleEncountered { .. }) => skipped += 1,
                Err(e) => return Err(e.to_string()),
            }
        }
    }
    Ok(format!(
        "{cycles} cycle products equal 1 over {} graphs x 20 r ({skipped} pole draws redrawn)",
        graphs.len()
    ))
}

fn numeric_cross_check() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for (n, k) in bundles(NMAX) {
        for two_r in TWO_R {
            let params = SpectralParams::new(n, k, q(two_r, 2)).map_err(|e| e.to_string())?;
            for id in intertwinor_core::ktype_graph::enumerate_ktypes(n, k, JMAX)
                .map_err(|e| e.to_string())?
            {
                let exact = params.z(&id).map_err(|e| e.to_string())?.to_f64();
                let approx = params
                    .z_numeric(&id)
                    .map_err(|e| format!("{id} 2r={two_r}: {e}"))?;
                let rel = ((approx - exact) / exact).abs();
                ensure(rel <= NUMERIC_TOL, || {
                    format!("{id} n={n} 2r={two_r}: exact {exact:e}, numeric {approx:e}")
                })?;
                worst = worst.max(rel);
                count += 1;
            }
        }
    }
    Ok(format!("{count} values, worst relative error {worst:.2e}"))
}

/// Criterion 2 on one graph at one order.
fn detected_by_recursion(g: &KTypeGraph, two_r: i64) -> bool {
    let r = q(two_r, 2);
    let Ok(params) = SpectralParams::new(g.n(), g.k(), r.clone()) else {
        return true;
    };
    match solve(g, &r) {
        Err(_) => true,
        Ok(t) => t
            .entries()
            .iter()
            .any(|(id, mu)| params.z(id).map_or(true, |z| z != *mu)),
    }
}

/// Criterion 8 on one graph at a few sample points.
fn detected_by_sanity(g: &KTypeGraph, samples: &[ExactScalar]) -> bool {
    !g.reversal_violations().is_empty()
        || samples
            .iter()
            .any(|r| check_consistency(g, r).map_or(true, |rep| !rep.passed()))
}

fn fault_sensitivity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xfa17);
    let samples: Vec<ExactScalar> = (0..3).map(|_| q(rng.gen_range(-50..=50), 7)).collect();
    let one = ExactScalar::one();
    let mut mutants = 0;
    for (n, k) in bundles(NMAX) {
        let g = build_graph(n, k, 4).map_err(|e| e.to_string())?;
        let picks: Vec<usize> = (0..12).map(|_| rng.gen_range(0..g.edges().len())).collect();
        for e in picks {
            // One direction only, then both directions kept mutually inverse.
            let single = g.perturbed(e, &one).map_err(|e| e.to_string())?;
            let edge = &g.edges()[e];
            let back = g
                .find_edge(&edge.dst, &edge.src)
                .ok_or("missing reverse edge")?;
            let paired = single
                .perturbed(back, &-one.clone())
                .map_err(|e| e.to_string())?;
            for (label, m) in [("one-sided", &single), ("paired", &paired)] {
                let caught = detected_by_recursion(m, 3) || detected_by_sanity(m, &samples);
                ensure(caught, || {
                    format!(
                        "{label} mutation of {} -> {} (n={n} k={k}) went unnoticed",
                        edge.src, edge.dst
                    )
                })?;
                mutants += 1;
            }
        }
    }
    Ok(format!("{mutants} mutants all caught"))
}

#[test]
fn acceptance_criteria() {
    let graphs: Vec<KTypeGraph> = bundles(NMAX)
        .into_iter()
        .map(|(n, k)| build_graph(n, k, JMAX).unwrap())
        .collect();
    let criteria: [Criterion; 10] = [
        ("normalization", Box::new(normalization)),
        (
            "recursion equals closed form",
            Box::new(|| recursion_vs_closed_form(&graphs)),
        ),
        ("Dirac spectrum", Box::new(dirac)),
        ("odd powers of Dirac", Box::new(odd_dirac_powers)),
        ("Rarita-Schwinger", Box::new(rarita_schwinger)),
        ("A_kl identity", Box::new(a_kl_identity)),
        ("product theorem", Box::new(product_theorem)),
        ("graph sanity", Box::new(|| graph_sanity(&graphs))),
        ("numeric cross-check", Box::new(numeric_cross_check)),
        ("fault sensitivity", Box::new(fault_sensitivity)),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(why) => {
                println!("FAIL criterion {}: {name}: {why} [{elapsed:.2?}]", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
