//! Dyadic intervals and the saturated trees of occupied cells that
//! represent discretized subsets of `[0, span)`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cells::CellSet;
use crate::error::{Error, Result};

pub const DEFAULT_MAX_DEPTH: u32 = 24;

/// Largest depth any tree may have; keeps `span << depth` well inside `u64`.
pub const DEPTH_LIMIT: u32 = 40;

/// The cell `[index·2^-level, (index+1)·2^-level)` inside `[0, span)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicInterval {
    pub level: u32,
    pub index: u64,
    pub span: u64,
}

impl DyadicInterval {
    pub fn bounds(&self) -> (f64, f64) {
        let w = self.width();
        (self.index as f64 * w, (self.index + 1) as f64 * w)
    }

    pub fn width(&self) -> f64 {
        (-(self.level as f64)).exp2()
    }

    /// Half-open membership.
    pub fn contains(&self, x: f64) -> bool {
        let (a, b) = self.bounds();
        a <= x && x < b
    }

    pub fn children(&self) -> [DyadicInterval; 2] {
        let c = |index| DyadicInterval {
            level: self.level + 1,
            index,
            span: self.span,
        };
        [c(2 * self.index), c(2 * self.index + 1)]
    }
}

pub fn level_universe(span: u64, level: u32) -> u64 {
    span << level
}

pub(crate) fn check_span_depth(span: u64, depth: u32) -> Result<()> {
    if span == 0 {
        return Err(Error::range("span must be positive"));
    }
    if depth > DEPTH_LIMIT || span.leading_zeros() <= depth + 1 {
        return Err(Error::range(format!(
            "span {span} at depth {depth} exceeds index headroom"
        )));
    }
    Ok(())
}

pub fn interval_of(level: u32, index: u64, span: u64) -> Result<DyadicInterval> {
    check_span_depth(span, level)?;
    let universe = level_universe(span, level);
    if index >= universe {
        return Err(Error::range(format!(
            "index {index} outside level {level} (size {universe})"
        )));
    }
    Ok(DyadicInterval { level, index, span })
}

/// The unique level-`level` cell containing `x`.
pub fn locate(x: f64, level: u32, span: u64) -> Result<DyadicInterval> {
    check_span_depth(span, level)?;
    if !(x >= 0.0 && x < span as f64) {
        return Err(Error::Domain(format!("{x} is outside [0, {span})")));
    }
    let scaled = x * (level as f64).exp2();
    let index = (scaled.floor() as u64).min(level_universe(span, level) - 1);
    Ok(DyadicInterval { level, index, span })
}

/// An occupied cell of a particular tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub level: u32,
    pub index: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// An occupied cell whose parent is not occupied.
    ParentMissing { level: u32, index: u64 },
    /// An occupied cell above the deepest level with no occupied child.
    Childless { level: u32, index: u64 },
    IndexOutOfRange { level: u32, index: u64 },
    LevelCount { expected: usize, found: usize },
}

/// Occupied dyadic cells at every level `0..=max_depth` over `[0, span)`.
///
/// Trees built through the public constructors are saturated: the deepest
/// level determines the rest by taking parents.
#[derive(Clone, PartialEq, Eq)]
pub struct DyadicTree {
    max_depth: u32,
    span: u64,
    levels: Vec<CellSet>,
}

impl std::fmt::Debug for DyadicTree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DyadicTree")
            .field("max_depth", &self.max_depth)
            .field("span", &self.span)
            .field("leaves", &self.leaves())
            .finish()
    }
}

impl DyadicTree {
    /// Saturates a deepest-level cell set upward.
    pub fn from_leaf_set(span: u64, depth: u32, leaves: CellSet) -> Result<Self> {
        check_span_depth(span, depth)?;
        let universe = level_universe(span, depth);
        if leaves.universe() != universe {
            return Err(Error::range(format!(
                "leaf universe {} does not match span {span} at depth {depth}",
                leaves.universe()
            )));
        }
        let mut levels = Vec::with_capacity(depth as usize + 1);
        levels.push(leaves);
        for _ in 0..depth {
            let up = levels.last().expect("nonempty").parents();
            levels.push(up);
        }
        levels.reverse();
        Ok(DyadicTree {
            max_depth: depth,
            span,
            levels,
        })
    }

    pub fn from_leaves(span: u64, depth: u32, leaves: Vec<u64>) -> Result<Self> {
        check_span_depth(span, depth)?;
        let universe = level_universe(span, depth);
        if let Some(&bad) = leaves.iter().find(|&&c| c >= universe) {
            return Err(Error::range(format!(
                "leaf index {bad} outside level {depth} (size {universe})"
            )));
        }
        Self::from_leaf_set(span, depth, CellSet::from_unsorted(universe, leaves))
    }

    /// Builds a tree from explicit per-level lists without enforcing the
    /// saturation invariants; [`DyadicTree::validate`] reports what is wrong.
    pub fn from_levels_unchecked(span: u64, depth: u32, levels: Vec<Vec<u64>>) -> Self {
        let levels = levels
            .into_iter()
            .enumerate()
            .map(|(n, cells)| {
                let max = cells.iter().copied().max().map_or(0, |m| m + 1);
                let universe = level_universe(span, n as u32).max(max);
                CellSet::from_unsorted(universe, cells)
            })
            .collect();
        DyadicTree {
            max_depth: depth,
            span,
            levels,
        }
    }

    pub fn empty(span: u64, depth: u32) -> Result<Self> {
        check_span_depth(span, depth)?;
        Self::from_leaf_set(span, depth, CellSet::empty(level_universe(span, depth)))
    }

    /// The whole of `[0, span)`.
    pub fn full(span: u64, depth: u32) -> Result<Self> {
        check_span_depth(span, depth)?;
        let u = level_universe(span, depth);
        Self::from_leaf_set(span, depth, CellSet::from_sorted(u, (0..u).collect()))
    }

    /// The tree of a single point.
    pub fn point(x: f64, span: u64, depth: u32) -> Result<Self> {
        let cell = locate(x, depth, span)?;
        Self::from_leaves(span, depth, vec![cell.index])
    }

    #[inline]
    pub fn max_depth(&self) -> u32 {
        self.max_depth
    }

    #[inline]
    pub fn span(&self) -> u64 {
        self.span
    }

    pub fn universe(&self, level: u32) -> u64 {
        level_universe(self.span, level)
    }

    pub fn level(&self, n: u32) -> &CellSet {
        &self.levels[n as usize]
    }

    pub fn leaves(&self) -> &CellSet {
        self.levels.last().expect("a tree has at least one level")
    }

    pub fn is_empty(&self) -> bool {
        self.leaves().is_empty()
    }

    fn check_level(&self, level: u32) -> Result<()> {
        if level > self.max_depth {
            return Err(Error::range(format!(
                "level {level} exceeds tree depth {}",
                self.max_depth
            )));
        }
        Ok(())
    }

    /// `N(F, 2^-level)`: the number of occupied cells at `level`.
    pub fn covering_count(&self, level: u32) -> Result<u64> {
        self.check_level(level)?;
        Ok(self.level(level).len())
    }

    pub fn vertex(&self, level: u32, index: u64) -> Result<Vertex> {
        if level > self.max_depth || !self.level(level).contains(index) {
            return Err(Error::InvalidVertex { level, index });
        }
        Ok(Vertex { level, index })
    }

    /// Every occupied vertex at `level`.
    pub fn vertices(&self, level: u32) -> impl Iterator<Item = Vertex> + '_ {
        self.level(level).iter().map(move |index| Vertex { level, index })
    }

    pub fn interval(&self, v: Vertex) -> DyadicInterval {
        DyadicInterval {
            level: v.level,
            index: v.index,
            span: self.span,
        }
    }

    fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v.level > self.max_depth || !self.level(v.level).contains(v.index) {
            return Err(Error::InvalidVertex {
                level: v.level,
                index: v.index,
            });
        }
        Ok(())
    }

    /// The part of the tree below `v`, rescaled so that `v` becomes `[0, 1)`.
    pub fn subtree(&self, v: Vertex) -> Result<DyadicTree> {
        self.check_vertex(v)?;
        let depth = self.max_depth - v.level;
        let rel = depth;
        let lo = v.index << rel;
        let hi = (v.index + 1) << rel;
        let leaves: Vec<u64> = self
            .leaves()
            .iter()
            .skip_while(|&c| c < lo)
            .take_while(|&c| c < hi)
            .map(|c| c - lo)
            .collect();
        DyadicTree::from_leaf_set(1, depth, CellSet::from_sorted(1u64 << depth, leaves))
    }

    /// Occupied cells `m` levels below `v`.
    pub fn descendant_count(&self, v: Vertex, m: u32) -> Result<u64> {
        self.check_vertex(v)?;
        let target = v.level.checked_add(m).filter(|&t| t <= self.max_depth).ok_or_else(|| {
            Error::range(format!(
                "level {} + {m} exceeds tree depth {}",
                v.level, self.max_depth
            ))
        })?;
        Ok(self
            .level(target)
            .count_range(v.index << m, (v.index + 1) << m))
    }

    /// Whether `v` has at least `2^((1-eps)·m)` descendants `m` levels below.
    pub fn is_full_branching(&self, v: Vertex, eps: f64, m: u32) -> Result<bool> {
        let count = self.descendant_count(v, m)?;
        Ok(count as f64 >= ((1.0 - eps) * m as f64).exp2())
    }

    /// Drops every level below `depth`.
    pub fn truncate(&self, depth: u32) -> Result<DyadicTree> {
        self.check_level(depth)?;
        Ok(DyadicTree {
            max_depth: depth,
            span: self.span,
            levels: self.levels[..=depth as usize].to_vec(),
        })
    }

    /// Re-expresses the tree over a larger span (cells keep their positions).
    pub fn with_span(&self, span: u64) -> Result<DyadicTree> {
        if span < self.span {
            return Err(Error::range("cannot shrink the span of a tree"));
        }
        check_span_depth(span, self.max_depth)?;
        let leaves = CellSet::from_sorted(level_universe(span, self.max_depth), self.leaves().to_vec());
        DyadicTree::from_leaf_set(span, self.max_depth, leaves)
    }

    /// Invariant violations: parent closure, leaf support, index range.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let expected = self.max_depth as usize + 1;
        if self.levels.len() != expected {
            out.push(Violation::LevelCount {
                expected,
                found: self.levels.len(),
            });
        }
        for (n, set) in self.levels.iter().enumerate() {
            let level = n as u32;
            let universe = level_universe(self.span, level);
            for c in set.iter() {
                if c >= universe {
                    out.push(Violation::IndexOutOfRange { level, index: c });
                }
                if n > 0 && !self.levels[n - 1].contains(c >> 1) {
                    out.push(Violation::ParentMissing { level, index: c });
                }
                if n + 1 < self.levels.len() && self.levels[n + 1].count_range(2 * c, 2 * c + 2) == 0 {
                    out.push(Violation::Childless { level, index: c });
                }
            }
        }
        out
    }

    /// Serializes to the line-oriented `dyadic-tree v1` format.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "dyadic-tree v1 depth={} span={}\n",
            self.max_depth, self.span
        );
        for (n, set) in self.levels.iter().enumerate() {
            write!(s, "{n}:").unwrap();
            if set.is_dense() {
                s.push_str(" RUNS ");
                let runs: Vec<String> = set.runs().iter().map(|(a, l)| format!("{a}:{l}")).collect();
                s.push_str(&runs.join(","));
            } else if !set.is_empty() {
                s.push(' ');
                let cells: Vec<String> = set.iter().map(|c| c.to_string()).collect();
                s.push_str(&cells.join(","));
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<DyadicTree> {
        let mut lines = text.lines().enumerate();
        let tree = parse_tree_lines(&mut lines)?;
        if let Some((i, l)) = lines.find(|(_, l)| !l.trim().is_empty()) {
            return Err(Error::Parse {
                line: i + 1,
                msg: format!("unexpected trailing content: {l}"),
            });
        }
        Ok(tree)
    }
}

pub(crate) fn parse_header(line: &str, magic: &str, lineno: usize) -> Result<Vec<(String, u64)>> {
    let perr = |msg: String| Error::Parse { line: lineno, msg };
    let rest = line
        .strip_prefix(magic)
        .ok_or_else(|| perr(format!("expected header starting with `{magic}`")))?;
    rest.split_whitespace()
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| perr(format!("malformed header field `{kv}`")))?;
            let v: u64 = v
                .parse()
                .map_err(|_| perr(format!("non-integer header value `{v}`")))?;
            Ok((k.to_string(), v))
        })
        .collect()
}

pub(crate) fn header_field(fields: &[(String, u64)], key: &str, lineno: usize) -> Result<u64> {
    fields
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| *v)
        .ok_or_else(|| Error::Parse {
            line: lineno,
            msg: format!("missing header field `{key}`"),
        })
}

/// Consumes a tree header and its level lines from `lines`.
pub(crate) fn parse_tree_lines<'a, I>(lines: &mut I) -> Result<DyadicTree>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    let (i0, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty input".into(),
    })?;
    let fields = parse_header(header, "dyadic-tree v1", i0 + 1)?;
    let depth = header_field(&fields, "depth", i0 + 1)? as u32;
    let span = header_field(&fields, "span", i0 + 1)?;
    check_span_depth(span, depth).map_err(|e| Error::Parse {
        line: i0 + 1,
        msg: e.to_string(),
    })?;

    let mut levels = Vec::with_capacity(depth as usize + 1);
    for n in 0..=depth {
        let (i, line) = lines.next().ok_or(Error::Parse {
            line: i0 + 2 + n as usize,
            msg: format!("missing level {n}"),
        })?;
        let perr = |msg: String| Error::Parse { line: i + 1, msg };
        let (lvl, body) = line
            .split_once(':')
            .ok_or_else(|| perr("expected `<level>: ...`".into()))?;
        if lvl.trim().parse::<u32>().ok() != Some(n) {
            return Err(perr(format!("expected level {n}")));
        }
        let universe = level_universe(span, n);
        let body = body.trim();
        let mut cells = Vec::new();
        if let Some(runs) = body.strip_prefix("RUNS") {
            for run in runs.trim().split(',').filter(|r| !r.is_empty()) {
                let (a, l) = run
                    .split_once(':')
                    .ok_or_else(|| perr(format!("malformed run `{run}`")))?;
                let a: u64 = a.parse().map_err(|_| perr(format!("bad run start `{a}`")))?;
                let l: u64 = l.parse().map_err(|_| perr(format!("bad run length `{l}`")))?;
                cells.extend(a..a + l);
            }
        } else if !body.is_empty() {
            for tok in body.split(',') {
                cells.push(tok.trim().parse::<u64>().map_err(|_| perr(format!("bad index `{tok}`")))?);
            }
        }
        if !cells.windows(2).all(|w| w[0] < w[1]) {
            return Err(perr("indices must be strictly increasing".into()));
        }
        if cells.last().is_some_and(|&c| c >= universe) {
            return Err(perr(format!("index outside level {n} (size {universe})")));
        }
        levels.push(CellSet::from_sorted(universe, cells));
    }
    let tree = DyadicTree {
        max_depth: depth,
        span,
        levels,
    };
    if let Some(v) = tree.validate().first() {
        return Err(Error::Parse {
            line: i0 + 1,
            msg: format!("tree is not saturated: {v:?}"),
        });
    }
    Ok(tree)
}

/// Answers "does the set meet this cell?", exactly or conservatively.
pub trait IntersectionOracle {
    fn intersects(&mut self, cell: DyadicInterval) -> Result<bool>;
}

impl<F> IntersectionOracle for F
where
    F: FnMut(DyadicInterval) -> Result<bool>,
{
    fn intersects(&mut self, cell: DyadicInterval) -> Result<bool> {
        self(cell)
    }
}

/// Builds `T_F` to `depth` by refining from the root, asking the oracle
/// only about children of cells it has already accepted.
pub fn discretize<O: IntersectionOracle>(oracle: &mut O, depth: u32, span: u64) -> Result<DyadicTree> {
    check_span_depth(span, depth)?;
    let mut frontier = Vec::new();
    for index in 0..span {
        let cell = DyadicInterval { level: 0, index, span };
        if oracle.intersects(cell)? {
            frontier.push(index);
        }
    }
    if frontier.is_empty() {
        return Err(Error::EmptySet);
    }
    for level in 1..=depth {
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for &p in &frontier {
            for index in [2 * p, 2 * p + 1] {
                if oracle.intersects(DyadicInterval { level, index, span })? {
                    next.push(index);
                }
            }
        }
        frontier = next;
    }
    if frontier.is_empty() {
        return Err(Error::EmptySet);
    }
    DyadicTree::from_leaf_set(span, depth, CellSet::from_sorted(level_universe(span, depth), frontier))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cantor_oracle(cell: DyadicInterval) -> Result<bool> {
        // Closed Cantor intervals at generation g, scaled by 3^g: [3^g·a, 3^g·a + 1].
        let (lo, hi) = cell.bounds();
        let g = 18u32;
        let scale = 3f64.powi(g as i32);
        let mut stack = vec![(0u64, 0u32)];
        while let Some((a, j)) = stack.pop() {
            let f = 3f64.powi((g - j) as i32);
            let (x0, x1) = ((a as f64) * f / scale, (a as f64 + 1.0) * f / scale);
            if x1 < lo || x0 >= hi {
                continue;
            }
            if j == g {
                return Ok(true);
            }
            stack.push((3 * a, j + 1));
            stack.push((3 * a + 2, j + 1));
        }
        Ok(false)
    }

    #[test]
    fn interval_of_examples() {
        assert_eq!(interval_of(0, 0, 1).unwrap().bounds(), (0.0, 1.0));
        assert_eq!(interval_of(2, 1, 1).unwrap().bounds(), (0.25, 0.5));
        assert_eq!(interval_of(1, 3, 2).unwrap().bounds(), (1.5, 2.0));
        assert!(matches!(interval_of(2, 4, 1), Err(Error::Range(_))));
    }

    #[test]
    fn locate_examples() {
        assert_eq!(locate(0.3, 2, 1).unwrap().index, 1);
        assert_eq!(locate(0.0, 5, 1).unwrap().index, 0);
        assert_eq!(locate(1.75, 1, 2).unwrap().index, 3);
        assert!(matches!(locate(1.0, 3, 1), Err(Error::Domain(_))));
        assert!(matches!(locate(-0.1, 3, 1), Err(Error::Domain(_))));
        assert!(matches!(locate(f64::NAN, 3, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn discretize_cantor_depth_3() {
        let t = discretize(&mut cantor_oracle, 3, 1).unwrap();
        assert_eq!(t.level(3).to_vec(), vec![0, 1, 2, 5, 6, 7]);
        assert_eq!(t.covering_count(3).unwrap(), 6);
        assert!(t.validate().is_empty());
        let root = t.vertex(0, 0).unwrap();
        assert_eq!(t.descendant_count(root, 3).unwrap(), 6);
        assert!(t.is_full_branching(root, 0.5, 3).unwrap());
    }

    #[test]
    fn discretize_full_and_singleton() {
        let full = discretize(&mut |_c: DyadicInterval| Ok(true), 5, 1).unwrap();
        assert_eq!(full.covering_count(5).unwrap(), 32);
        let single = discretize(&mut |c: DyadicInterval| Ok(c.index == 0), 5, 1).unwrap();
        for n in 0..=5 {
            assert_eq!(single.level(n).to_vec(), vec![0]);
        }
        let none = discretize(&mut |_c: DyadicInterval| Ok(false), 5, 1);
        assert!(matches!(none, Err(Error::EmptySet)));
        let failing = discretize(&mut |_c: DyadicInterval| Err(Error::Oracle("boom".into())), 5, 1);
        assert!(matches!(failing, Err(Error::Oracle(_))));
    }

    #[test]
    fn covering_count_examples() {
        let full = DyadicTree::full(1, 6).unwrap();
        assert_eq!(full.covering_count(6).unwrap(), 64);
        let single = DyadicTree::point(0.0, 1, 6).unwrap();
        assert_eq!(single.covering_count(4).unwrap(), 1);
        assert!(matches!(full.covering_count(7), Err(Error::Range(_))));
    }

    #[test]
    fn subtree_examples() {
        let full = DyadicTree::full(1, 6).unwrap();
        let v = full.vertex(2, 3).unwrap();
        assert_eq!(full.subtree(v).unwrap(), DyadicTree::full(1, 4).unwrap());

        let left = DyadicTree::point(0.0, 1, 5).unwrap();
        let sub = left.subtree(left.vertex(1, 0).unwrap()).unwrap();
        assert_eq!(sub, DyadicTree::point(0.0, 1, 4).unwrap());

        let cantor = discretize(&mut cantor_oracle, 6, 1).unwrap();
        let sub = cantor.subtree(cantor.vertex(2, 0).unwrap()).unwrap();
        assert_eq!(sub.level(1).to_vec(), vec![0, 1]);
        assert_eq!(sub.max_depth(), 4);

        assert!(matches!(
            cantor.subtree(Vertex { level: 3, index: 3 }),
            Err(Error::InvalidVertex { .. })
        ));
    }

    #[test]
    fn descendant_and_branching_examples() {
        let full = DyadicTree::full(1, 8).unwrap();
        let v = full.vertex(3, 5).unwrap();
        assert_eq!(full.descendant_count(v, 5).unwrap(), 32);
        assert!(full.is_full_branching(v, 0.1, 5).unwrap());
        assert!(matches!(full.descendant_count(v, 6), Err(Error::Range(_))));

        let single = DyadicTree::point(0.0, 1, 8).unwrap();
        let root = single.vertex(0, 0).unwrap();
        assert_eq!(single.descendant_count(root, 5).unwrap(), 1);
        assert!(!single.is_full_branching(root, 0.1, 5).unwrap());
    }

    #[test]
    fn validate_reports_violations() {
        let orphan = DyadicTree::from_levels_unchecked(1, 2, vec![vec![0], vec![0], vec![0, 3]]);
        assert_eq!(
            orphan.validate(),
            vec![Violation::ParentMissing { level: 2, index: 3 }]
        );
        let childless = DyadicTree::from_levels_unchecked(1, 2, vec![vec![0], vec![0, 1], vec![0]]);
        assert_eq!(
            childless.validate(),
            vec![Violation::Childless { level: 1, index: 1 }]
        );
        let out_of_range = DyadicTree::from_levels_unchecked(1, 1, vec![vec![0], vec![0, 2]]);
        assert!(out_of_range
            .validate()
            .contains(&Violation::IndexOutOfRange { level: 1, index: 2 }));
    }

    #[test]
    fn text_format_round_trip() {
        let t = DyadicTree::from_leaves(2, 4, vec![0, 1, 2, 3, 17, 30, 31]).unwrap();
        let text = t.to_text();
        assert!(text.starts_with("dyadic-tree v1 depth=4 span=2\n0: RUNS 0:2\n"));
        let back = DyadicTree::from_text(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_text(), text);

        let empty = DyadicTree::empty(1, 2).unwrap();
        assert_eq!(empty.to_text(), "dyadic-tree v1 depth=2 span=1\n0:\n1:\n2:\n");
        assert_eq!(DyadicTree::from_text(&empty.to_text()).unwrap(), empty);
    }

    #[test]
    fn text_format_rejects_garbage() {
        assert!(DyadicTree::from_text("").is_err());
        assert!(DyadicTree::from_text("dyadic-tree v1 depth=1 span=1\n0: 0\n").is_err());
        assert!(DyadicTree::from_text("dyadic-tree v1 depth=1 span=1\n0: 0\n1: 3\n").is_err());
        // not saturated: level 0 without children
        assert!(DyadicTree::from_text("dyadic-tree v1 depth=1 span=1\n0: 0\n1:\n").is_err());
    }
}
