//! Constructors for self-similar attractors, Moran sets, the reciprocal set
//! `{1/k}`, truncated additive semigroups, and Moran-subtree extraction.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cells::{BitGrid, CellSet};
use crate::dyadic::{check_span_depth, level_universe, DyadicInterval, DyadicTree, IntersectionOracle};
use crate::error::{Error, Result};
use crate::rational::{self, add, floor_scaled, mul, parse_rational, RationalInput, Q};

/// Cap on the number of generation pieces any constructor keeps in memory.
pub const PIECE_LIMIT: usize = 1 << 24;

/// Common-ratio iterated function system `{x ↦ r·x + t : t ∈ T}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IfsSpec {
    ratio: Q,
    translations: Vec<Q>,
    span: u64,
}

impl IfsSpec {
    pub fn new(ratio: Q, mut translations: Vec<Q>, span: u64) -> Result<Self> {
        if !(ratio > Q::zero() && ratio < Q::one()) {
            return Err(Error::spec(format!(
                "ratio {} must lie in (0, 1)",
                rational::format_rational(ratio)
            )));
        }
        if span == 0 {
            return Err(Error::spec("span must be positive"));
        }
        if translations.is_empty() {
            return Err(Error::spec("at least one translation is required"));
        }
        translations.sort();
        if translations.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::spec("translations must be distinct"));
        }
        let max_t = mul(Q::from_integer(span as i128), Q::one() - ratio)?;
        if let Some(t) = translations.iter().find(|t| **t < Q::zero() || **t > max_t) {
            return Err(Error::spec(format!(
                "translation {} outside [0, {}]",
                rational::format_rational(*t),
                rational::format_rational(max_t)
            )));
        }
        Ok(IfsSpec {
            ratio,
            translations,
            span,
        })
    }

    /// The smallest integer span that holds the attractor.
    pub fn with_minimal_span(ratio: Q, translations: Vec<Q>) -> Result<Self> {
        let one_minus = Q::one() - ratio;
        let max_t = translations.iter().copied().max().unwrap_or_else(Q::zero);
        let span = if one_minus > Q::zero() {
            (max_t / one_minus).ceil().to_integer().max(1) as u64
        } else {
            1
        };
        Self::new(ratio, translations, span)
    }

    /// `{r·x, r·x + (1 − r)}`.
    pub fn two_map(ratio: Q) -> Result<Self> {
        Self::new(ratio, vec![Q::zero(), Q::one() - ratio], 1)
    }

    pub fn ratio(&self) -> Q {
        self.ratio
    }

    pub fn translations(&self) -> &[Q] {
        &self.translations
    }

    pub fn span(&self) -> u64 {
        self.span
    }

    /// Convex hull `[min T/(1−r), max T/(1−r)]` of the attractor.
    pub fn hull(&self) -> (Q, Q) {
        let d = Q::one() - self.ratio;
        (self.translations[0] / d, self.translations[self.translations.len() - 1] / d)
    }

    /// Whether the first-generation images of the hull are pairwise disjoint.
    pub fn strong_separation(&self) -> bool {
        let (h0, h1) = self.hull();
        let len = self.ratio * (h1 - h0);
        self.translations.windows(2).all(|w| w[1] - w[0] > len)
    }

    /// An exact intersection oracle for the attractor.
    pub fn oracle(&self) -> IfsOracle<'_> {
        IfsOracle {
            spec: self,
            level: 0,
            accepted: HashMap::new(),
            previous: HashMap::new(),
        }
    }
}

/// Marks every level-`level` cell meeting the closed interval `[lo, hi]`,
/// assigning the right end of the span to the last cell.
fn mark_closed(bits: &mut BitGrid, lo: Q, hi: Q, level: u32) -> Result<()> {
    let last = bits.universe() - 1;
    let a = floor_scaled(lo, level)?.min(last);
    let b = floor_scaled(hi, level)?.min(last);
    for c in a..=b {
        bits.set(c);
    }
    Ok(())
}

fn cell_width(depth: u32) -> Q {
    Q::new(1, 1i128 << depth)
}

fn sorted_dedup(mut v: Vec<Q>) -> Vec<Q> {
    v.sort_unstable();
    v.dedup();
    v
}

/// Cells meeting the attractor.
///
/// The hull endpoints of every piece are attractor points, so their cells
/// are marked directly; a piece is refined further only while its hull still
/// spans an unmarked cell.
pub fn ifs_attractor(spec: &IfsSpec, depth: u32) -> Result<DyadicTree> {
    check_span_depth(spec.span, depth)?;
    let (h0, h1) = spec.hull();
    let mut bits = BitGrid::new(level_universe(spec.span, depth));
    let last = bits.universe() - 1;
    let mut pieces = vec![Q::zero()];
    let mut scale = Q::one();
    loop {
        let (s0, s1) = (mul(scale, h0)?, mul(scale, h1)?);
        let mut live = Vec::new();
        for &o in &pieces {
            let a = floor_scaled(add(o, s0)?, depth)?.min(last);
            let b = floor_scaled(add(o, s1)?, depth)?.min(last);
            bits.set(a);
            bits.set(b);
            if b > a + 1 && bits.count_range(a + 1, b) < b - a - 1 {
                live.push(o);
            }
        }
        if live.is_empty() {
            break;
        }
        let mut next = Vec::with_capacity(live.len() * spec.translations.len());
        for &o in &live {
            for &t in &spec.translations {
                next.push(add(o, mul(scale, t)?)?);
            }
        }
        pieces = sorted_dedup(next);
        if pieces.len() > PIECE_LIMIT {
            return Err(Error::Resource(format!(
                "attractor refinement needs more than {PIECE_LIMIT} pieces"
            )));
        }
        scale = mul(scale, spec.ratio)?;
    }
    DyadicTree::from_leaf_set(spec.span, depth, CellSet::from_bits(bits))
}

/// `kΦ`: same ratio, translations the `k`-fold sumset of `T`, span `k·B`.
pub fn iterated_ifs(spec: &IfsSpec, k: u32) -> Result<IfsSpec> {
    if k == 0 {
        return Err(Error::arg("k must be at least 1"));
    }
    let mut sums = vec![Q::zero()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(sums.len() * spec.translations.len());
        for &s in &sums {
            for &t in &spec.translations {
                next.push(add(s, t)?);
            }
        }
        sums = sorted_dedup(next);
    }
    IfsSpec::new(spec.ratio, sums, spec.span * k as u64)
}

/// The system whose attractor is `X(a) + X(b)`; both must share the ratio.
pub fn ifs_sum(a: &IfsSpec, b: &IfsSpec) -> Result<IfsSpec> {
    if a.ratio != b.ratio {
        return Err(Error::spec("sums of attractors need a common ratio"));
    }
    let mut t = Vec::with_capacity(a.translations.len() * b.translations.len());
    for &x in &a.translations {
        for &y in &b.translations {
            t.push(add(x, y)?);
        }
    }
    IfsSpec::new(a.ratio, sorted_dedup(t), a.span + b.span)
}

/// Decides whether the attractor meets a half-open cell by descending only
/// into pieces that strictly straddle it.
///
/// Pieces overlapping an accepted cell are remembered, so queries on its
/// children start from them instead of from the root.
pub struct IfsOracle<'a> {
    spec: &'a IfsSpec,
    level: u32,
    accepted: HashMap<u64, (Q, Vec<Q>)>,
    previous: HashMap<u64, (Q, Vec<Q>)>,
}

impl IntersectionOracle for IfsOracle<'_> {
    fn intersects(&mut self, cell: DyadicInterval) -> Result<bool> {
        if cell.level != self.level {
            self.previous = if cell.level == self.level + 1 {
                std::mem::take(&mut self.accepted)
            } else {
                HashMap::new()
            };
            self.accepted.clear();
            self.level = cell.level;
        }
        let spec = self.spec;
        let w = cell_width(cell.level);
        let a = mul(Q::from_integer(cell.index as i128), w)?;
        let b = add(a, w)?;
        let span = Q::from_integer(spec.span as i128);
        let last_cell = b == span;
        let inside = |x: Q| x >= a && (x < b || (last_cell && x == b));
        let (h0, h1) = spec.hull();
        let (mut scale, mut pieces) = match self.previous.get(&(cell.index / 2)) {
            Some((scale, pieces)) => (*scale, pieces.clone()),
            None => (Q::one(), vec![Q::zero()]),
        };
        loop {
            let (s0, s1) = (mul(scale, h0)?, mul(scale, h1)?);
            let mut meeting = Vec::new();
            let mut next = Vec::new();
            let mut hit = false;
            for &o in &pieces {
                let (lo, hi) = (add(o, s0)?, add(o, s1)?);
                if hi < a || lo >= b {
                    continue;
                }
                meeting.push(o);
                if inside(lo) || inside(hi) {
                    hit = true;
                } else if !hit {
                    for &t in &spec.translations {
                        next.push(add(o, mul(scale, t)?)?);
                    }
                }
            }
            if hit {
                self.accepted.insert(cell.index, (scale, meeting));
                return Ok(true);
            }
            if next.is_empty() {
                return Ok(false);
            }
            pieces = sorted_dedup(next);
            if pieces.len() > PIECE_LIMIT {
                return Err(Error::Resource("oracle refinement exploded".into()));
            }
            scale = mul(scale, spec.ratio)?;
        }
    }
}

/// Generation lengths of a Moran construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lengths {
    /// `l_j = c^-j`.
    Geometric(Q),
    /// `l_1, …, l_L`; the construction stops at generation `L`.
    Explicit(Vec<Q>),
}

impl Lengths {
    /// Parses `"c^-j"`.
    pub fn parse(s: &str) -> Result<Self> {
        let c = s
            .trim()
            .strip_suffix("^-j")
            .ok_or_else(|| Error::spec(format!("length sequence `{s}` is not of the form c^-j")))?;
        Ok(Lengths::Geometric(parse_rational(c)?))
    }
}

/// `k` children of length `l_{j+1}` per generation-`j` interval, placed
/// leftmost-first with gaps equal to the child length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoranSpec {
    k: u32,
    lengths: Lengths,
}

impl MoranSpec {
    pub fn new(k: u32, lengths: Lengths) -> Result<Self> {
        if k == 0 {
            return Err(Error::spec("branching k must be at least 1"));
        }
        let need = Q::from_integer(2 * k as i128 - 1);
        match &lengths {
            Lengths::Geometric(c) => {
                if *c <= Q::one() {
                    return Err(Error::spec("geometric base c must exceed 1"));
                }
                if *c < need {
                    return Err(Error::spec(format!(
                        "c^-j lengths with c = {} cannot fit {k} separated children",
                        rational::format_rational(*c)
                    )));
                }
            }
            Lengths::Explicit(ls) => {
                if ls.is_empty() {
                    return Err(Error::spec("explicit length list is empty"));
                }
                let mut prev = Q::one();
                for (j, &l) in ls.iter().enumerate() {
                    if l <= Q::zero() {
                        return Err(Error::spec(format!("length l_{} is not positive", j + 1)));
                    }
                    if mul(need, l)? > prev {
                        return Err(Error::spec(format!(
                            "generation {} cannot fit {k} separated children",
                            j + 1
                        )));
                    }
                    prev = l;
                }
            }
        }
        Ok(MoranSpec { k, lengths })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn lengths(&self) -> &Lengths {
        &self.lengths
    }

    fn length(&self, j: u32) -> Result<Q> {
        match &self.lengths {
            Lengths::Geometric(c) => Ok(Q::one() / checked_pow(*c, j)?),
            Lengths::Explicit(ls) => Ok(if j == 0 { Q::one() } else { ls[j as usize - 1] }),
        }
    }
}

/// Extent inside a generation-`j` interval of an explicit construction.
fn ext_after(ls: &[Q], j: usize, gaps: Q) -> Result<Q> {
    let mut ext = *ls.last().expect("validated nonempty");
    for i in (j..ls.len()).rev() {
        ext = add(ext, mul(gaps, ls[i])?)?;
    }
    Ok(ext)
}

fn checked_pow(c: Q, j: u32) -> Result<Q> {
    let mut out = Q::one();
    for _ in 0..j {
        out = mul(out, c)?;
    }
    Ok(out)
}

pub fn moran_tree(spec: &MoranSpec, depth: u32) -> Result<DyadicTree> {
    check_span_depth(1, depth)?;
    let width = cell_width(depth);
    let last_gen = match &spec.lengths {
        Lengths::Explicit(ls) => Some(ls.len() as u32),
        Lengths::Geometric(_) => None,
    };
    let mut starts = vec![Q::zero()];
    let mut j = 0u32;
    loop {
        if Some(j) == last_gen || moran_extent(spec, j)? < width {
            break;
        }
        let child = spec.length(j + 1)?;
        let step = mul(Q::from_integer(2), child)?;
        let mut next = Vec::with_capacity(starts.len() * spec.k as usize);
        for &a in &starts {
            for i in 0..spec.k {
                next.push(add(a, mul(Q::from_integer(i as i128), step)?)?);
            }
        }
        starts = next;
        if starts.len() > PIECE_LIMIT {
            return Err(Error::Resource(format!(
                "Moran construction needs more than {PIECE_LIMIT} intervals"
            )));
        }
        j += 1;
    }
    let ext = moran_extent(spec, j)?;
    let mut bits = BitGrid::new(level_universe(1, depth));
    for &a in &starts {
        mark_closed(&mut bits, a, add(a, ext)?, depth)?;
    }
    DyadicTree::from_leaf_set(1, depth, CellSet::from_bits(bits))
}

/// Diameter of the limit set inside one generation-`j` interval.
fn moran_extent(spec: &MoranSpec, j: u32) -> Result<Q> {
    let gaps = Q::from_integer(2 * spec.k as i128 - 2);
    match &spec.lengths {
        Lengths::Geometric(c) => Ok(gaps / checked_pow(*c, j)? / (*c - Q::one())),
        Lengths::Explicit(ls) => {
            if j as usize >= ls.len() {
                Ok(ls[ls.len() - 1])
            } else {
                ext_after(ls, j as usize, gaps)
            }
        }
    }
}

/// Thins `tree` to a Moran-type subtree: below every selected vertex at a
/// level divisible by `m`, exactly `⌊2^((s−eps)m − 1)⌋` pairwise
/// non-adjacent descendants `m` levels down are kept.
pub fn extract_moran_subset(tree: &DyadicTree, s: f64, eps: f64, m: u32) -> Result<DyadicTree> {
    if m == 0 {
        return Err(Error::arg("block length m must be at least 1"));
    }
    let blocks = tree.max_depth() / m;
    if blocks == 0 {
        return Err(Error::range(format!(
            "tree depth {} is shorter than one block of {m} levels",
            tree.max_depth()
        )));
    }
    let exponent = (s - eps) * m as f64 - 1.0;
    let keep = exponent.exp2().floor();
    if !(keep >= 1.0) {
        return Err(Error::arg(format!(
            "(s − eps)·m − 1 = {exponent} leaves no descendants to keep"
        )));
    }
    let keep = keep as u64;
    let mut selected: Vec<u64> = tree.level(0).to_vec();
    for b in 0..blocks {
        let (top, bottom) = (b * m, (b + 1) * m);
        let cells = tree.level(bottom).to_vec();
        let mut next = Vec::with_capacity(selected.len() * keep as usize);
        for &v in &selected {
            let lo = cells.partition_point(|&c| c < v << m);
            let hi = cells.partition_point(|&c| c < (v + 1) << m);
            let eligible = &cells[lo..hi];
            let separated = eligible.windows(2).all(|w| w[1] > w[0] + 1);
            let thinned: Vec<u64> = if separated {
                eligible.to_vec()
            } else {
                eligible.iter().copied().step_by(2).collect()
            };
            if (thinned.len() as u64) < keep {
                return Err(Error::Hypothesis {
                    level: top,
                    index: v,
                    found: thinned.len() as u64,
                    required: keep,
                });
            }
            next.extend_from_slice(&thinned[..keep as usize]);
        }
        selected = next;
    }
    DyadicTree::from_leaves(tree.span(), blocks * m, selected)
}

/// Cells of `{1/k : k ≥ 1} ∪ {0}`; the point 1 is clamped into the last cell.
pub fn reciprocal_tree(depth: u32) -> Result<DyadicTree> {
    if depth == 0 {
        return Err(Error::arg("reciprocal tree needs depth ≥ 1"));
    }
    check_span_depth(1, depth)?;
    let universe = level_universe(1, depth);
    let mut bits = BitGrid::new(universe);
    bits.set(0);
    for k in 1..=universe {
        bits.set((universe / k).min(universe - 1));
    }
    DyadicTree::from_leaf_set(1, depth, CellSet::from_bits(bits))
}

/// Outcome of grid saturation for a truncated semigroup.
#[derive(Clone, Debug)]
pub struct SemigroupTree {
    pub tree: DyadicTree,
    pub rounds: u32,
    pub fixpoint: bool,
    pub guard_bits: u32,
}

pub const SEMIGROUP_MAX_ROUNDS: u32 = 64;
const SEMIGROUP_GUARD_BITS: u32 = 6;
const SEMIGROUP_FINE_LOG2_LIMIT: u32 = 24;

/// All finite nonempty sums of `generators` below `bound`, saturated on a
/// grid a few bits finer than `depth`.
///
/// Each fine cell remembers the least and greatest genuine sums found in
/// it, and only those representatives are extended, so every marked fine
/// cell holds a true element.
pub fn semigroup_tree(generators: &[f64], bound: u64, depth: u32) -> Result<SemigroupTree> {
    if generators.is_empty() {
        return Err(Error::spec("semigroup needs at least one generator"));
    }
    if let Some(g) = generators.iter().find(|g| !(g.is_finite() && **g > 0.0)) {
        return Err(Error::spec(format!("generator {g} is not a positive real")));
    }
    if !bound.is_power_of_two() {
        return Err(Error::spec(format!("bound {bound} is not a power of two")));
    }
    check_span_depth(bound, depth)?;
    let coarse_log2 = bound.trailing_zeros() + depth;
    let guard = SEMIGROUP_GUARD_BITS.min(SEMIGROUP_FINE_LOG2_LIMIT.saturating_sub(coarse_log2));
    let fine_depth = depth + guard;
    let fine_universe = level_universe(bound, fine_depth);
    let scale = (fine_depth as f64).exp2();
    let limit = bound as f64;
    let cell = |x: f64| ((x * scale).floor() as u64).min(fine_universe - 1);

    let mut lo = vec![f64::INFINITY; fine_universe as usize];
    let mut hi = vec![f64::NEG_INFINITY; fine_universe as usize];
    let mut queued = vec![false; fine_universe as usize];
    let mut frontier = Vec::new();
    let offer = |x: f64, lo: &mut [f64], hi: &mut [f64], queued: &mut [bool], out: &mut Vec<u64>| {
        if x >= limit {
            return;
        }
        let c = cell(x) as usize;
        let mut changed = false;
        if x < lo[c] {
            lo[c] = x;
            changed = true;
        }
        if x > hi[c] {
            hi[c] = x;
            changed = true;
        }
        if changed && !queued[c] {
            queued[c] = true;
            out.push(c as u64);
        }
    };
    for &g in generators {
        offer(g, &mut lo, &mut hi, &mut queued, &mut frontier);
    }
    let mut rounds = 0;
    let mut fixpoint = frontier.is_empty();
    while !fixpoint && rounds < SEMIGROUP_MAX_ROUNDS {
        rounds += 1;
        for &c in &frontier {
            queued[c as usize] = false;
        }
        let mut next = Vec::new();
        for &c in &frontier {
            let (a, b) = (lo[c as usize], hi[c as usize]);
            for &g in generators {
                offer(a + g, &mut lo, &mut hi, &mut queued, &mut next);
                if b != a {
                    offer(b + g, &mut lo, &mut hi, &mut queued, &mut next);
                }
            }
        }
        frontier = next;
        fixpoint = frontier.is_empty();
    }
    let mut leaves: Vec<u64> = (0..fine_universe)
        .filter(|&c| lo[c as usize].is_finite())
        .map(|c| c >> guard)
        .collect();
    leaves.dedup();
    let tree = DyadicTree::from_leaf_set(
        bound,
        depth,
        CellSet::from_sorted(level_universe(bound, depth), leaves),
    )?;
    Ok(SemigroupTree {
        tree,
        rounds,
        fixpoint,
        guard_bits: guard,
    })
}

/// A positive real given as a JSON number, a rational string or `sqrt(x)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RealInput {
    Number(f64),
    Text(String),
}

impl RealInput {
    pub fn to_f64(&self) -> Result<f64> {
        match self {
            RealInput::Number(x) => Ok(*x),
            RealInput::Text(s) => {
                let t = s.trim();
                if let Some(inner) = t.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
                    Ok(rational::to_f64(parse_rational(inner)?).sqrt())
                } else {
                    Ok(rational::to_f64(parse_rational(t)?))
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LengthInput {
    Formula(String),
    List(Vec<RationalInput>),
}

/// Generator description as read from JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum GeneratorSpec {
    Ifs {
        r: RationalInput,
        translations: Vec<RationalInput>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        span: Option<u64>,
    },
    Moran {
        k: u32,
        lengths: LengthInput,
    },
    Reciprocal {},
    Semigroup {
        generators: Vec<RealInput>,
        bound: u64,
    },
    /// The whole of `[0, span)`.
    Interval {
        #[serde(default = "one")]
        span: u64,
    },
}

fn one() -> u64 {
    1
}

/// A generated tree plus any non-fatal notes from its construction.
#[derive(Clone, Debug)]
pub struct Generated {
    pub tree: DyadicTree,
    pub warnings: Vec<String>,
}

impl GeneratorSpec {
    pub fn ifs_spec(&self) -> Result<Option<IfsSpec>> {
        let GeneratorSpec::Ifs { r, translations, span } = self else {
            return Ok(None);
        };
        let r = r.to_rational()?;
        let t = translations
            .iter()
            .map(RationalInput::to_rational)
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(match span {
            Some(span) => IfsSpec::new(r, t, *span)?,
            None => IfsSpec::with_minimal_span(r, t)?,
        }))
    }

    pub fn moran_spec(&self) -> Result<Option<MoranSpec>> {
        let GeneratorSpec::Moran { k, lengths } = self else {
            return Ok(None);
        };
        let lengths = match lengths {
            LengthInput::Formula(s) => Lengths::parse(s)?,
            LengthInput::List(ls) => Lengths::Explicit(
                ls.iter().map(RationalInput::to_rational).collect::<Result<_>>()?,
            ),
        };
        Ok(Some(MoranSpec::new(*k, lengths)?))
    }

    /// Checks the spec without building anything.
    pub fn validate(&self) -> Result<()> {
        match self {
            GeneratorSpec::Ifs { .. } => self.ifs_spec().map(|_| ()),
            GeneratorSpec::Moran { .. } => self.moran_spec().map(|_| ()),
            GeneratorSpec::Reciprocal {} => Ok(()),
            GeneratorSpec::Semigroup { generators, bound } => {
                if generators.is_empty() {
                    return Err(Error::spec("semigroup needs at least one generator"));
                }
                for g in generators {
                    let x = g.to_f64()?;
                    if !(x.is_finite() && x > 0.0) {
                        return Err(Error::spec(format!("generator {x} is not a positive real")));
                    }
                }
                if !bound.is_power_of_two() {
                    return Err(Error::spec(format!("bound {bound} is not a power of two")));
                }
                Ok(())
            }
            GeneratorSpec::Interval { span } => {
                if *span == 0 {
                    return Err(Error::spec("span must be positive"));
                }
                Ok(())
            }
        }
    }

    /// Span of the tree this spec produces.
    pub fn span(&self) -> Result<u64> {
        Ok(match self {
            GeneratorSpec::Ifs { .. } => self.ifs_spec()?.expect("ifs").span(),
            GeneratorSpec::Semigroup { bound, .. } => *bound,
            GeneratorSpec::Interval { span } => *span,
            _ => 1,
        })
    }

    pub fn build(&self, depth: u32) -> Result<Generated> {
        self.validate()?;
        let mut warnings = Vec::new();
        let tree = match self {
            GeneratorSpec::Ifs { .. } => ifs_attractor(&self.ifs_spec()?.expect("ifs"), depth)?,
            GeneratorSpec::Moran { .. } => moran_tree(&self.moran_spec()?.expect("moran"), depth)?,
            GeneratorSpec::Reciprocal {} => reciprocal_tree(depth)?,
            GeneratorSpec::Semigroup { generators, bound } => {
                let g = generators.iter().map(RealInput::to_f64).collect::<Result<Vec<_>>>()?;
                let out = semigroup_tree(&g, *bound, depth)?;
                if !out.fixpoint {
                    warnings.push(format!(
                        "semigroup saturation stopped after {} rounds without reaching a fixpoint",
                        out.rounds
                    ));
                }
                out.tree
            }
            GeneratorSpec::Interval { span } => DyadicTree::full(*span, depth)?,
        };
        Ok(Generated { tree, warnings })
    }

    /// Short human-readable name.
    pub fn label(&self) -> String {
        match self {
            GeneratorSpec::Ifs { r, translations, .. } => {
                let show = |x: &RationalInput| match x {
                    RationalInput::Text(s) => s.clone(),
                    RationalInput::Number(n) => n.to_string(),
                };
                let t: Vec<String> = translations.iter().map(show).collect();
                format!("ifs(r={}, T={{{}}})", show(r), t.join(","))
            }
            GeneratorSpec::Moran { k, lengths } => match lengths {
                LengthInput::Formula(s) => format!("moran(k={k}, l={s})"),
                LengthInput::List(ls) => format!("moran(k={k}, {} lengths)", ls.len()),
            },
            GeneratorSpec::Reciprocal {} => "reciprocal".into(),
            GeneratorSpec::Semigroup { generators, bound } => {
                format!("semigroup({} generators, bound={bound})", generators.len())
            }
            GeneratorSpec::Interval { span } => format!("interval[0,{span})"),
        }
    }
}
