//! Named verification suites with measured values and pass/fail per criterion.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arithmetic::{delta_dense_check, distance_set, index_sumset, iterated_sumset, GridSetD};
use crate::cells::group_offsets;
use crate::dyadic::{discretize, DyadicTree};
use crate::error::{Error, Result};
use crate::estimate::{assouad_estimate, box_estimate, growth_experiment, lower_estimate, GrowthOptions};
use crate::generators::{ifs_attractor, ifs_sum, iterated_ifs, moran_tree, reciprocal_tree, IfsSpec, Lengths, MoranSpec};
use crate::measure::{covering_bounds_check, default_window, TreeMeasure};
use crate::rational::Q;
use crate::sample::{random_level_probs, random_tree};

pub const SUITES: &[(&str, &[u32])] = &[
    ("entropy-lemmas", &[1, 2, 3]),
    ("cantor", &[4]),
    ("sumset", &[5]),
    ("growth", &[6]),
    ("reciprocal", &[7]),
    ("ifs-interval", &[8]),
    ("distance", &[9]),
    ("moran-atomic", &[10]),
    ("bracket", &[11]),
    ("all", &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11]),
];

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub seconds: f64,
    pub time_limit: f64,
    pub measured: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub criteria: Vec<CriterionResult>,
}

pub fn suite_ids(name: &str) -> Result<&'static [u32]> {
    SUITES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, ids)| *ids)
        .ok_or_else(|| {
            let known: Vec<&str> = SUITES.iter().map(|(n, _)| *n).collect();
            Error::arg(format!("unknown suite `{name}`; known suites: {}", known.join(", ")))
        })
}

pub fn run_suite(name: &str) -> Result<SuiteReport> {
    let criteria = suite_ids(name)?
        .iter()
        .map(|&id| run_criterion(id))
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport {
        suite: name.to_string(),
        passed: criteria.iter().all(|c| c.passed),
        criteria,
    })
}

type Check = fn() -> Result<(bool, Value)>;

pub fn run_criterion(id: u32) -> Result<CriterionResult> {
    let (name, limit, f): (&'static str, f64, Check) = match id {
        1 => ("entropy extremes", 1.0, entropy_extremes),
        2 => ("chain rules", 10.0, chain_rules),
        3 => ("entropy to covering", 60.0, entropy_to_covering),
        4 => ("cantor box dimension", 10.0, cantor_dimension),
        5 => ("cantor sumset saturation", 5.0, sumset_saturation),
        6 => ("moran dimension growth", 60.0, dimension_growth),
        7 => ("reciprocal density", 30.0, reciprocal_density),
        8 => ("finite-time interval", 30.0, ifs_interval),
        9 => ("distance set inequalities", 60.0, distance_inequalities),
        10 => ("moran non-atomicity", 10.0, moran_non_atomic),
        11 => ("counting bracket", 30.0, counting_bracket),
        _ => return Err(Error::arg(format!("no criterion {id}"))),
    };
    let start = Instant::now();
    let (ok, measured) = f()?;
    let seconds = start.elapsed().as_secs_f64();
    Ok(CriterionResult {
        id,
        name,
        passed: ok && seconds < limit,
        seconds,
        time_limit: limit,
        measured,
    })
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn sample_tree(rng: &mut ChaCha8Rng, depth: u32) -> DyadicTree {
    let probs = random_level_probs(rng, depth);
    random_tree(rng, 1, depth, &probs)
}

fn cantor(depth: u32) -> Result<DyadicTree> {
    ifs_attractor(&IfsSpec::two_map(Q::new(1, 3))?, depth)
}

fn entropy_extremes() -> Result<(bool, Value)> {
    let mut rng = rng(1);
    let (mut uniform_err, mut point_err, mut bound_excess) = (0f64, 0f64, f64::NEG_INFINITY);
    for _ in 0..100 {
        let depth = rng.gen_range(4..=12);
        let tree = std::sync::Arc::new(sample_tree(&mut rng, depth));
        let size = tree.leaves().len() as usize;
        let uniform = TreeMeasure::from_leaf_weights(tree.clone(), vec![1.0; size])?;
        uniform_err = uniform_err.max((uniform.entropy(depth)? - (size as f64).ln()).abs());
        for n in 0..=depth {
            let bound = (tree.level(n).len() as f64).ln();
            bound_excess = bound_excess.max(uniform.entropy(n)? - bound);
        }
        let mut w = vec![0.0; size];
        w[rng.gen_range(0..size)] = 1.0;
        let point = TreeMeasure::from_leaf_weights(tree, w)?;
        point_err = point_err.max(point.entropy(depth)?.abs());
    }
    let ok = uniform_err <= 1e-12 && point_err <= 1e-12 && bound_excess <= 1e-12;
    Ok((
        ok,
        json!({"max_uniform_error": uniform_err, "max_point_error": point_err, "max_excess_over_log_count": bound_excess}),
    ))
}

fn chain_rules() -> Result<(bool, Value)> {
    let mut rng = rng(2);
    let depth = 16;
    let (mut tele_err, mut block_err) = (0f64, 0f64);
    for _ in 0..100 {
        let tree = sample_tree(&mut rng, depth);
        let w: Vec<f64> = (0..tree.leaves().len()).map(|_| rng.gen::<f64>().powi(3) + 1e-9).collect();
        let mu = TreeMeasure::from_leaf_weights(tree, w)?;
        let steps: f64 = (0..depth).map(|i| mu.cond_entropy(i, i + 1)).sum::<Result<f64>>()?;
        tele_err = tele_err.max((mu.entropy(depth)? - mu.entropy(0)? - steps).abs());
        for m in [1, 3, 5] {
            for i in 0..=depth - m {
                let mut sum = 0.0;
                for (v, p) in mu.tree().vertices(i).zip(mu.level_masses(i)) {
                    sum += p * mu.local_entropy(v, m)?;
                }
                block_err = block_err.max((mu.cond_entropy(i, i + m)? - sum).abs());
            }
        }
    }
    Ok((
        tele_err <= 1e-9 && block_err <= 1e-9,
        json!({"max_telescoping_error": tele_err, "max_block_error": block_err}),
    ))
}

fn entropy_to_covering() -> Result<(bool, Value)> {
    let mut rng = rng(3);
    let n = 20;
    let mut rows = Vec::new();
    let mut ok = true;
    let trees: Vec<DyadicTree> = (0..200).map(|_| sample_tree(&mut rng, n)).collect();
    for eps in [0.05, 0.1, 0.2] {
        let m = default_window(eps);
        let (mut atomic_fired, mut uniform_fired, mut failures) = (0, 0, 0);
        for t in &trees {
            let mu = TreeMeasure::counting(t.clone())?;
            let profile = mu.scale_profile(eps, m, n)?;
            let report = covering_bounds_check(t, &profile, n)?;
            atomic_fired += report.atomic.fired as u32;
            uniform_fired += report.uniform.fired as u32;
            failures += !report.consistent() as u32;
        }
        ok &= failures == 0;
        rows.push(json!({"eps": eps, "m": m, "atomic_fired": atomic_fired, "uniform_fired": uniform_fired, "failures": failures}));
    }
    Ok((ok, Value::Array(rows)))
}

fn cantor_dimension() -> Result<(bool, Value)> {
    let truth = 2f64.ln() / 3f64.ln();
    let c = cantor(24)?;
    let b = box_estimate(&c, 16, 24)?;
    let a = assouad_estimate(&c, 12)?;
    let l = lower_estimate(&c, 12)?;
    let box_ok = (b.value() - truth).abs() <= 0.02;
    let assouad_ok = (a.value - truth).abs() <= 0.03;
    let order_ok = l.value <= b.value() && b.value() <= a.value;
    Ok((
        box_ok && assouad_ok && order_ok,
        json!({
            "box": b.value(), "box_upper": b.upper.value, "box_lower": b.lower.value,
            "assouad": a.value, "lower": l.value, "target": truth,
            "box_ok": box_ok, "assouad_ok": assouad_ok, "ordering_ok": order_ok,
        }),
    ))
}

fn sumset_saturation() -> Result<(bool, Value)> {
    let c = cantor(16)?;
    let (sum, report) = index_sumset(&c, &c, 16)?;
    // index sums reach at most 2·(2^n − 1), one short of the last cell
    let reachable = 2 * ((1u64 << 16) - 1) + 1;
    let filled = sum.level(16).count_range(0, reachable);
    Ok((
        filled == reachable && sum.span() == 2,
        json!({"occupied": report.count_exact, "index_range": reachable, "cells": sum.universe(16)}),
    ))
}

fn dimension_growth() -> Result<(bool, Value)> {
    let depth = 16;
    let f = moran_tree(&MoranSpec::new(2, Lengths::Geometric(Q::from_integer(4)))?, depth)?;
    let table = growth_experiment(&f, 4, depth, &GrowthOptions::for_depth(depth))?;
    let upper: Vec<f64> = table.rows.iter().map(|r| r.box_estimate.upper.value).collect();
    let lower: Vec<f64> = table.rows.iter().map(|r| r.lower.value).collect();
    let strictly = upper.windows(2).all(|w| w[1] > w[0]);
    let reached = upper[2] > 0.95;
    let lower_ok = lower.windows(2).all(|w| w[1] >= w[0]);
    Ok((
        strictly && reached && lower_ok,
        json!({
            "upper_box": upper, "lower": lower,
            "upper_strictly_increasing": strictly, "upper_above_0.95_at_k3": reached,
            "lower_non_decreasing": lower_ok,
        }),
    ))
}

fn reciprocal_density() -> Result<(bool, Value)> {
    let depth = 12;
    let f = reciprocal_tree(depth)?;
    let mut rows = Vec::new();
    let mut ok = true;
    for n in 1..=3u32 {
        let nf = iterated_sumset(&f, n, depth)?;
        let upper = (-(depth as f64) / (1u64 << n) as f64).exp2();
        let dense = delta_dense_check(&nf, depth, upper)?;
        let exponent = (nf.level(depth).len() as f64).log2() / depth as f64;
        let target = 1.0 - 1.0 / (1u64 << n) as f64;
        let dim_ok = exponent >= target - 0.05;
        ok &= dense && dim_ok;
        rows.push(json!({"n": n, "upper": upper, "delta_dense": dense, "exponent": exponent, "target": target}));
    }
    Ok((ok, Value::Array(rows)))
}

fn ifs_interval() -> Result<(bool, Value)> {
    let depth = 14;
    let mut rows = Vec::new();
    let mut ok = true;
    for r in [Q::new(1, 3), Q::new(1, 4)] {
        let phi = IfsSpec::two_map(r)?;
        let k = ((Q::from_integer(1) - r) / r).ceil().to_integer() as u32;
        let full = |k: u32| -> Result<bool> {
            let t = ifs_attractor(&iterated_ifs(&phi, k)?, depth)?;
            Ok(t.level(depth).count_range(0, k as u64 * (1 << depth)) == k as u64 * (1 << depth))
        };
        let at_k = full(k)?;
        let below = full(k - 1)?;
        ok &= at_k && !below;
        rows.push(json!({"r": crate::rational::format_rational(r), "k": k, "fills_at_k": at_k, "fills_at_k_minus_1": below}));
    }
    Ok((ok, Value::Array(rows)))
}

fn distance_inequalities() -> Result<(bool, Value)> {
    let depth = 10;
    let c = cantor(depth)?;
    let f = GridSetD::product(&[&c, &c])?;
    let d = distance_set(&f)?;
    let (af, ad) = (assouad_estimate(&f, 6)?.value, assouad_estimate(&d, 6)?.value);
    let (bf, bd) = (box_estimate(&f, depth / 2, depth)?.value(), box_estimate(&d, depth / 2, depth)?.value());
    let ok = ad >= af / 2.0 - 0.05 && bd >= bf / 2.0 - 0.05;
    Ok((
        ok,
        json!({"assouad_f": af, "assouad_d": ad, "box_f": bf, "box_d": bd}),
    ))
}

/// Generated Moran trees (`k` children per generation, lengths `c^-j`),
/// tagged by whether every occupied vertex of each level has the same
/// number of children.
pub fn moran_family(depth: u32) -> Result<Vec<(u32, i128, DyadicTree, bool)>> {
    let mut v = Vec::new();
    for k in 2..=4u32 {
        for c in (2 * k as i128 - 1)..=16 {
            let t = moran_tree(&MoranSpec::new(k, Lengths::Geometric(Q::from_integer(c)))?, depth)?;
            let regular = (0..depth).all(|n| {
                let offs = group_offsets(t.level(n), t.level(n + 1), 1);
                offs.windows(2).all(|w| w[1] - w[0] == offs[1] - offs[0])
            });
            v.push((k, c, t, regular));
        }
    }
    Ok(v)
}

fn moran_non_atomic() -> Result<(bool, Value)> {
    let (depth, eps, m) = (16, 0.25, 4);
    let mut rows = Vec::new();
    let mut total = 0;
    for (k, c, t, regular) in moran_family(depth)? {
        let mu = TreeMeasure::splitting(t)?;
        let (mut atomic, mut checked) = (0u64, 0u64);
        let mut min_h = f64::INFINITY;
        for level in 0..=depth - m {
            for v in mu.tree().vertices(level) {
                let h = mu.local_entropy(v, m)? / (m as f64 * std::f64::consts::LN_2);
                min_h = min_h.min(h);
                atomic += mu.classify_local(v, eps, m)?.is_atomic() as u64;
                checked += 1;
            }
        }
        if regular {
            total += atomic;
        }
        rows.push(json!({
            "k": k, "c": c, "level_regular": regular, "vertices": checked,
            "atomic": atomic, "min_avg_entropy": min_h,
        }));
    }
    Ok((total == 0, Value::Array(rows)))
}

fn random_ifs(rng: &mut ChaCha8Rng, r: Q) -> Result<IfsSpec> {
    let count = rng.gen_range(2..=3);
    let mut slots: Vec<i128> = (0..=4).collect();
    let mut t = Vec::new();
    for _ in 0..count {
        let s = slots.remove(rng.gen_range(0..slots.len()));
        t.push((Q::from_integer(1) - r) * Q::new(s, 4));
    }
    IfsSpec::new(r, t, 1)
}

fn counting_bracket() -> Result<(bool, Value)> {
    let mut rng = rng(11);
    let ratios = [Q::new(1, 3), Q::new(1, 4), Q::new(1, 5), Q::new(2, 5)];
    let (mut pairs, mut failures) = (0, 0);
    let (mut min_lo, mut min_hi) = (f64::INFINITY, f64::INFINITY);
    for _ in 0..30 {
        let r = ratios[rng.gen_range(0..ratios.len())];
        let (a, b) = (random_ifs(&mut rng, r)?, random_ifs(&mut rng, r)?);
        let s = ifs_sum(&a, &b)?;
        for n in [6, 9, 12] {
            let fa = ifs_attractor(&a, n)?;
            let fb = ifs_attractor(&b, n)?;
            let count = index_sumset(&fa, &fb, n)?.1.count_exact as f64;
            let exact = discretize(&mut s.oracle(), n, s.span())?.level(n).len() as f64;
            // slack in  N/2 ≤ #sums  and  #sums ≤ 2N
            let (lo, hi) = (count - exact / 2.0, 2.0 * exact - count);
            min_lo = min_lo.min(lo);
            min_hi = min_hi.min(hi);
            failures += (lo < 0.0 || hi < 0.0) as u32;
            pairs += 1;
        }
    }
    Ok((
        failures == 0,
        json!({"cases": pairs, "failures": failures, "min_lower_slack": min_lo, "min_upper_slack": min_hi}),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_resolve() {
        assert_eq!(suite_ids("all").unwrap().len(), 11);
        assert!(matches!(suite_ids("nonexistent"), Err(Error::Argument(_))));
        assert!(run_criterion(12).is_err());
    }

    #[test]
    fn sumset_suite_passes() {
        let r = run_suite("sumset").unwrap();
        assert!(r.passed, "{r:?}");
    }
}
