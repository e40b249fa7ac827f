//! Finite-scale box, Assouad and lower dimension estimates, and the
//! sumset dimension-growth experiment.

use serde::{Deserialize, Serialize};

use crate::arithmetic::{index_sumset, GridSetD};
use crate::cells::group_offsets;
use crate::dyadic::DyadicTree;
use crate::error::{Error, Result};

/// Occupancy counts across scales, for 1-d trees and `d`-dimensional grids.
pub trait Multiscale {
    fn dim(&self) -> u32;
    fn depth(&self) -> u32;
    fn span(&self) -> u64;
    /// Occupied cells at `level`.
    fn count(&self, level: u32) -> u64;
    /// Occupied descendants `m` levels below each occupied cell at `level`.
    fn local_counts(&self, level: u32, m: u32) -> Vec<u64>;
}

impl Multiscale for DyadicTree {
    fn dim(&self) -> u32 {
        1
    }

    fn depth(&self) -> u32 {
        self.max_depth()
    }

    fn span(&self) -> u64 {
        DyadicTree::span(self)
    }

    fn count(&self, level: u32) -> u64 {
        self.level(level).len()
    }

    fn local_counts(&self, level: u32, m: u32) -> Vec<u64> {
        let offs = group_offsets(self.level(level), self.level(level + m), m);
        offs.windows(2).map(|w| (w[1] - w[0]) as u64).collect()
    }
}

impl Multiscale for GridSetD {
    fn dim(&self) -> u32 {
        self.d() as u32
    }

    fn depth(&self) -> u32 {
        GridSetD::depth(self)
    }

    fn span(&self) -> u64 {
        GridSetD::span(self)
    }

    fn count(&self, level: u32) -> u64 {
        self.count_at(level)
    }

    fn local_counts(&self, level: u32, m: u32) -> Vec<u64> {
        self.descendant_counts(level, m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateKind {
    /// Largest per-scale exponent over the window.
    BoxUpper,
    /// Smallest per-scale exponent over the window.
    BoxLower,
    /// Least-squares slope of `log2 N` against the scale.
    BoxSlope,
    Assouad,
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Window {
    Scales { n_min: u32, n_max: u32 },
    Local { m: u32 },
}

/// One entry of `per_scale`: a level and a base-2 log count at it.
///
/// Box kinds record `log2 N(F, 2^-n)`; local kinds record the log of the
/// extreme descendant count among cells at level `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalePoint {
    pub n: u32,
    pub log2_count: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimEstimate {
    pub kind: EstimateKind,
    pub value: f64,
    pub window: Window,
    pub per_scale: Vec<ScalePoint>,
    /// Box exponents divide by `n + log2_span`.
    pub log2_span: f64,
}

impl DimEstimate {
    /// Recomputes `value` from `per_scale` by the declared formula.
    pub fn recompute(&self) -> f64 {
        let ratio = |p: &ScalePoint| p.log2_count / (p.n as f64 + self.log2_span);
        let local = |p: &ScalePoint| match self.window {
            Window::Local { m } => p.log2_count / m as f64,
            Window::Scales { .. } => f64::NAN,
        };
        let pts = &self.per_scale;
        match self.kind {
            EstimateKind::BoxUpper => pts.iter().map(ratio).fold(f64::NEG_INFINITY, f64::max),
            EstimateKind::BoxLower => pts.iter().map(ratio).fold(f64::INFINITY, f64::min),
            EstimateKind::BoxSlope => slope(pts).unwrap_or_else(|| ratio(&pts[0])),
            EstimateKind::Assouad => pts.iter().map(local).fold(f64::NEG_INFINITY, f64::max),
            EstimateKind::Lower => pts.iter().map(local).fold(f64::INFINITY, f64::min),
        }
    }
}

fn slope(pts: &[ScalePoint]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.n as f64).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.log2_count).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.n as f64 - mx) * (p.log2_count - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.n as f64 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

fn finish(kind: EstimateKind, window: Window, per_scale: Vec<ScalePoint>, log2_span: f64) -> DimEstimate {
    let mut e = DimEstimate {
        kind,
        value: 0.0,
        window,
        per_scale,
        log2_span,
    };
    e.value = e.recompute();
    e
}

/// Box-counting estimates over the scale window `n_min..=n_max`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxEstimate {
    pub upper: DimEstimate,
    pub lower: DimEstimate,
    pub slope: DimEstimate,
}

impl BoxEstimate {
    /// The headline value: the least-squares slope.
    pub fn value(&self) -> f64 {
        self.slope.value
    }

    pub fn all(&self) -> [&DimEstimate; 3] {
        [&self.slope, &self.upper, &self.lower]
    }
}

pub fn box_estimate<S: Multiscale + ?Sized>(set: &S, n_min: u32, n_max: u32) -> Result<BoxEstimate> {
    if n_min == 0 || n_min > n_max || n_max > set.depth() {
        return Err(Error::range(format!(
            "window ({n_min}, {n_max}) must satisfy 1 ≤ n_min ≤ n_max ≤ {}",
            set.depth()
        )));
    }
    if set.count(set.depth()) == 0 {
        return Err(Error::EmptySet);
    }
    let per_scale: Vec<ScalePoint> = (n_min..=n_max)
        .map(|n| ScalePoint {
            n,
            log2_count: (set.count(n) as f64).log2(),
        })
        .collect();
    let ls = (set.span() as f64).log2();
    let window = Window::Scales { n_min, n_max };
    Ok(BoxEstimate {
        upper: finish(EstimateKind::BoxUpper, window, per_scale.clone(), ls),
        lower: finish(EstimateKind::BoxLower, window, per_scale.clone(), ls),
        slope: finish(EstimateKind::BoxSlope, window, per_scale, ls),
    })
}

fn local_estimate<S: Multiscale + ?Sized>(set: &S, m: u32, kind: EstimateKind) -> Result<DimEstimate> {
    if m == 0 || m > set.depth() {
        return Err(Error::range(format!("window m = {m} must lie in 1..={}", set.depth())));
    }
    if set.count(set.depth()) == 0 {
        return Err(Error::EmptySet);
    }
    let per_scale = (0..=set.depth() - m)
        .map(|k| {
            let counts = set.local_counts(k, m);
            let pick = match kind {
                EstimateKind::Assouad => counts.iter().copied().max(),
                _ => counts.iter().copied().min(),
            };
            ScalePoint {
                n: k,
                log2_count: (pick.unwrap_or(1) as f64).log2(),
            }
        })
        .collect();
    Ok(finish(kind, Window::Local { m }, per_scale, (set.span() as f64).log2()))
}

/// Largest `log2(descendants m levels down)/m` over all occupied cells.
pub fn assouad_estimate<S: Multiscale + ?Sized>(set: &S, m: u32) -> Result<DimEstimate> {
    local_estimate(set, m, EstimateKind::Assouad)
}

/// Smallest `log2(descendants m levels down)/m` over all occupied cells.
pub fn lower_estimate<S: Multiscale + ?Sized>(set: &S, m: u32) -> Result<DimEstimate> {
    local_estimate(set, m, EstimateKind::Lower)
}

/// `log2(N(k+m)/N(k))/m`: the average local exponent at level `k`.
pub fn aligned_box_exponent<S: Multiscale + ?Sized>(set: &S, k: u32, m: u32) -> f64 {
    ((set.count(k + m) as f64).log2() - (set.count(k) as f64).log2()) / m as f64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthOptions {
    /// Box window is `n_min..=depth`.
    pub n_min: u32,
    /// Local window for the Assouad and lower estimates.
    pub m: u32,
    /// Upper-box values within `tol` of 1 count as saturated.
    pub tol: f64,
    /// Largest grid (`span·2^depth`) any `kF` may occupy.
    pub budget_cells: u64,
}

impl GrowthOptions {
    pub fn for_depth(depth: u32) -> Self {
        GrowthOptions {
            n_min: (depth / 2).max(1),
            m: (depth / 2).max(1),
            tol: 0.05,
            budget_cells: 1 << 28,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub k: u32,
    pub span: u64,
    pub box_estimate: BoxEstimate,
    pub assouad: DimEstimate,
    pub lower: DimEstimate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthTable {
    pub depth: u32,
    pub options: GrowthOptions,
    pub rows: Vec<GrowthRow>,
    /// Upper-box values strictly increase until they come within `tol` of 1.
    pub upper_increasing: bool,
    pub lower_non_decreasing: bool,
    /// First `k` whose upper-box value reaches `1 − tol`.
    pub saturated_at: Option<u32>,
}

/// Estimates for `kF`, `k = 1..=k_max`.
pub fn growth_experiment(base: &DyadicTree, k_max: u32, depth: u32, opts: &GrowthOptions) -> Result<GrowthTable> {
    if k_max < 1 {
        return Err(Error::arg("k_max must be at least 1"));
    }
    if depth > base.max_depth() {
        return Err(Error::range(format!(
            "depth {depth} exceeds the base tree depth {}",
            base.max_depth()
        )));
    }
    let cells_needed = (k_max as u64)
        .saturating_mul(base.span())
        .saturating_mul(1u64 << depth);
    if cells_needed > opts.budget_cells {
        return Err(Error::Resource(format!(
            "{k_max}-fold sums need a grid of {cells_needed} cells, budget is {}",
            opts.budget_cells
        )));
    }
    let f = base.truncate(depth)?;
    let mut rows = Vec::with_capacity(k_max as usize);
    let mut acc = f.clone();
    for k in 1..=k_max {
        if k > 1 {
            acc = index_sumset(&acc, &f, depth)?.0;
        }
        rows.push(GrowthRow {
            k,
            span: acc.span(),
            box_estimate: box_estimate(&acc, opts.n_min, depth)?,
            assouad: assouad_estimate(&acc, opts.m)?,
            lower: lower_estimate(&acc, opts.m)?,
        });
    }
    let upper: Vec<f64> = rows.iter().map(|r| r.box_estimate.upper.value).collect();
    let lower: Vec<f64> = rows.iter().map(|r| r.lower.value).collect();
    let saturated = |v: f64| v >= 1.0 - opts.tol;
    Ok(GrowthTable {
        depth,
        options: opts.clone(),
        upper_increasing: upper.windows(2).all(|w| saturated(w[0]) || w[1] > w[0]),
        lower_non_decreasing: lower.windows(2).all(|w| w[1] >= w[0]),
        saturated_at: rows.iter().find(|r| saturated(r.box_estimate.upper.value)).map(|r| r.k),
        rows,
    })
}

/// A serializable estimate tagged with the set it came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    pub set: String,
    pub kind: EstimateKind,
    #[serde(flatten)]
    pub window: WindowFields,
    pub value: f64,
    pub per_scale: Vec<(u32, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WindowFields {
    Scales { window: (u32, u32) },
    Local { m: u32 },
}

impl EstimateRow {
    pub fn new(set: impl Into<String>, e: &DimEstimate) -> Self {
        EstimateRow {
            set: set.into(),
            kind: e.kind,
            window: match e.window {
                Window::Scales { n_min, n_max } => WindowFields::Scales { window: (n_min, n_max) },
                Window::Local { m } => WindowFields::Local { m },
            },
            value: e.value,
            per_scale: e.per_scale.iter().map(|p| (p.n, p.log2_count)).collect(),
        }
    }
}

/// Plot-ready CSV: one line per scale of every estimate.
pub fn estimates_csv(rows: &[EstimateRow]) -> String {
    let mut s = String::from("set,kind,n,log2_count,value\n");
    for r in rows {
        let kind = serde_json::to_value(r.kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        for (n, y) in &r.per_scale {
            s.push_str(&format!("{},{kind},{n},{y},{}\n", csv_field(&r.set), r.value));
        }
    }
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
