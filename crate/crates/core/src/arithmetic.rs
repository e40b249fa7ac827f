//! Grid-exact sumsets, iterated sumsets, difference sets, δ-density checks
//! and distance sets.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cells::{BitGrid, CellSet};
use crate::dyadic::{check_span_depth, level_universe, locate, parse_header, header_field, DyadicTree};
use crate::error::{Error, Result};

/// Pair counts above this always use the bit-grid kernel.
const SPARSE_PAIR_LIMIT: u64 = 1 << 26;

/// Most cells `distance_set` accepts.
pub const DISTANCE_CELL_LIMIT: usize = 1_000_000;

/// `{i + j}` by shifting the bits of the larger operand once per cell of the
/// smaller one.
pub fn sumset_dense(a: &CellSet, b: &CellSet, universe: u64) -> CellSet {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut src = BitGrid::new(universe);
    for c in large.iter() {
        src.set(c);
    }
    let mut out = BitGrid::new(universe);
    for j in small.iter() {
        out.or_shifted(&src, j);
    }
    CellSet::from_bits(out)
}

/// `{i + j}` by collecting every pair sum.
pub fn sumset_sparse(a: &CellSet, b: &CellSet, universe: u64) -> CellSet {
    let bv = b.to_vec();
    let mut sums = Vec::with_capacity(a.len() as usize * bv.len());
    for i in a.iter() {
        sums.extend(bv.iter().map(|&j| i + j).filter(|&s| s < universe));
    }
    CellSet::from_unsorted(universe, sums)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    Dense,
    Sparse,
}

fn sumset_cells(a: &CellSet, b: &CellSet, universe: u64) -> (CellSet, Kernel) {
    let pairs = a.len().saturating_mul(b.len());
    if a.is_dense() || b.is_dense() || pairs > SPARSE_PAIR_LIMIT {
        (sumset_dense(a, b, universe), Kernel::Dense)
    } else {
        (sumset_sparse(a, b, universe), Kernel::Sparse)
    }
}

/// Exact count `#(F1(n) + F2(n))` and the implied range for `N(F1 + F2, 2^-n)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SumsetReport {
    pub level: u32,
    pub count_exact: u64,
    pub bracket: [f64; 2],
    pub kernel: Kernel,
}

impl SumsetReport {
    fn new(level: u32, count: u64, kernel: Kernel) -> Self {
        SumsetReport {
            level,
            count_exact: count,
            bracket: [count as f64 / 2.0, 2.0 * count as f64],
            kernel,
        }
    }
}

fn check_level(t: &DyadicTree, level: u32) -> Result<()> {
    if level > t.max_depth() {
        return Err(Error::range(format!(
            "level {level} exceeds tree depth {}",
            t.max_depth()
        )));
    }
    Ok(())
}

/// The tree of `{i + j : i ∈ a_n, j ∈ b_n}` over span `B1 + B2`, depth `level`.
pub fn index_sumset(a: &DyadicTree, b: &DyadicTree, level: u32) -> Result<(DyadicTree, SumsetReport)> {
    check_level(a, level)?;
    check_level(b, level)?;
    let span = a.span() + b.span();
    check_span_depth(span, level)?;
    let universe = level_universe(span, level);
    let (cells, kernel) = sumset_cells(a.level(level), b.level(level), universe);
    let report = SumsetReport::new(level, cells.len(), kernel);
    Ok((DyadicTree::from_leaf_set(span, level, cells)?, report))
}

/// `kA` at `level`, folding one copy of `A` in at a time.
pub fn iterated_sumset(a: &DyadicTree, k: u32, level: u32) -> Result<DyadicTree> {
    if k == 0 {
        return Err(Error::arg("k must be at least 1"));
    }
    check_level(a, level)?;
    let mut acc = a.truncate(level)?;
    for _ in 1..k {
        acc = index_sumset(&acc, a, level)?.0;
    }
    Ok(acc)
}

/// `{i − j}` shifted by `offset = max index` into `[0, 2·offset]`.
#[derive(Clone, Debug)]
pub struct DifferenceSet {
    pub tree: DyadicTree,
    pub offset: u64,
}

pub fn difference_set(a: &DyadicTree, level: u32) -> Result<DifferenceSet> {
    check_level(a, level)?;
    let span = 2 * a.span();
    check_span_depth(span, level)?;
    let universe = level_universe(span, level);
    let cells = a.level(level);
    let Some(offset) = cells.last() else {
        return Ok(DifferenceSet {
            tree: DyadicTree::empty(span, level)?,
            offset: 0,
        });
    };
    let reflected = CellSet::from_unsorted(universe, cells.iter().map(|j| offset - j).collect());
    let lifted = CellSet::from_sorted(universe, cells.to_vec());
    let (diff, _) = sumset_cells(&lifted, &reflected, universe);
    Ok(DifferenceSet {
        tree: DyadicTree::from_leaf_set(span, level, diff)?,
        offset,
    })
}

/// Whether every level-`delta_level` cell meeting `[0, upper]` is occupied or
/// adjacent to an occupied cell. This certifies `δ`-density with
/// `δ = 2·2^-delta_level`.
pub fn delta_dense_check(a: &DyadicTree, delta_level: u32, upper: f64) -> Result<bool> {
    check_level(a, delta_level)?;
    if !(upper >= 0.0 && upper <= a.span() as f64) {
        return Err(Error::range(format!("upper bound {upper} outside [0, {}]", a.span())));
    }
    let cells = a.level(delta_level);
    let universe = a.universe(delta_level);
    let last = ((upper * (delta_level as f64).exp2()).floor() as u64).min(universe - 1);
    Ok((0..=last).all(|c| cells.count_range(c.saturating_sub(1), c + 2) > 0))
}

/// Occupied cells of a `d`-dimensional `2^-depth` grid over `[0, span)^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSetD {
    d: usize,
    depth: u32,
    span: u64,
    /// Sorted, deduplicated coordinates, `d` per cell.
    coords: Vec<u64>,
}

impl GridSetD {
    pub fn new(d: usize, depth: u32, span: u64, cells: Vec<Vec<u64>>) -> Result<Self> {
        if !(1..=3).contains(&d) {
            return Err(Error::arg(format!("dimension {d} outside 1..=3")));
        }
        check_span_depth(span, depth)?;
        let universe = level_universe(span, depth);
        let mut cells = cells;
        for c in &cells {
            if c.len() != d {
                return Err(Error::arg(format!("cell {c:?} does not have {d} coordinates")));
            }
            if c.iter().any(|&x| x >= universe) {
                return Err(Error::range(format!("cell {c:?} outside the grid of side {universe}")));
            }
        }
        cells.sort_unstable();
        cells.dedup();
        Ok(GridSetD {
            d,
            depth,
            span,
            coords: cells.into_iter().flatten().collect(),
        })
    }

    /// The cells containing the given points, the far faces clamped inward.
    pub fn from_points(d: usize, depth: u32, span: u64, points: &[Vec<f64>]) -> Result<Self> {
        let cells = points
            .iter()
            .map(|p| {
                p.iter()
                    .map(|&x| {
                        if x == span as f64 {
                            Ok(level_universe(span, depth) - 1)
                        } else {
                            locate(x, depth, span).map(|c| c.index)
                        }
                    })
                    .collect::<Result<Vec<u64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(d, depth, span, cells)
    }

    /// Cartesian product of trees sharing depth and span.
    pub fn product(trees: &[&DyadicTree]) -> Result<Self> {
        let first = trees.first().ok_or_else(|| Error::arg("product of zero trees"))?;
        let (depth, span) = (first.max_depth(), first.span());
        if trees.iter().any(|t| t.max_depth() != depth || t.span() != span) {
            return Err(Error::arg("product factors must share depth and span"));
        }
        let mut cells: Vec<Vec<u64>> = vec![Vec::new()];
        for t in trees {
            let leaves = t.leaves().to_vec();
            cells = cells
                .iter()
                .flat_map(|prefix| {
                    leaves.iter().map(move |&c| {
                        let mut v = prefix.clone();
                        v.push(c);
                        v
                    })
                })
                .collect();
        }
        Self::new(trees.len(), depth, span, cells)
    }

    pub fn from_tree(tree: &DyadicTree) -> Self {
        GridSetD {
            d: 1,
            depth: tree.max_depth(),
            span: tree.span(),
            coords: tree.leaves().to_vec(),
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn span(&self) -> u64 {
        self.span
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.d
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn cells(&self) -> impl Iterator<Item = &[u64]> + '_ {
        self.coords.chunks_exact(self.d)
    }

    /// Packs the cell coordinates at `level` into one sortable key.
    fn key(&self, cell: &[u64], level: u32) -> u128 {
        let shift = self.depth - level;
        cell.iter()
            .fold(0u128, |acc, &x| (acc << 42) | (x >> shift) as u128)
    }

    fn keys(&self, level: u32) -> Vec<u128> {
        let mut keys: Vec<u128> = self.cells().map(|c| self.key(c, level)).collect();
        keys.sort_unstable();
        keys.dedup();
        keys
    }

    /// Occupied cells at a coarser `level`.
    pub fn count_at(&self, level: u32) -> u64 {
        self.keys(level.min(self.depth)).len() as u64
    }

    /// For every occupied cell at `level`, its number of occupied descendants
    /// `m` levels down.
    pub fn descendant_counts(&self, level: u32, m: u32) -> Vec<u64> {
        let fine = level + m;
        let mut pairs: Vec<(u128, u128)> = self
            .cells()
            .map(|c| (self.key(c, level), self.key(c, fine)))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        let mut out = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let j = i + pairs[i..].partition_point(|p| p.0 == pairs[i].0);
            out.push((j - i) as u64);
            i = j;
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("grid-set v1 d={} depth={} span={}\n", self.d, self.depth, self.span);
        for c in self.cells() {
            let parts: Vec<String> = c.iter().map(u64::to_string).collect();
            s.push_str(&parts.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let fields = parse_header(header, "grid-set v1", 1)?;
        let d = header_field(&fields, "d", 1)? as usize;
        let depth = header_field(&fields, "depth", 1)? as u32;
        let span = header_field(&fields, "span", 1)?;
        let mut cells = Vec::new();
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let cell = line
                .split_whitespace()
                .map(|t| t.parse::<u64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::Parse {
                    line: i + 1,
                    msg: format!("bad cell `{line}`"),
                })?;
            cells.push(cell);
        }
        Self::new(d, depth, span, cells)
    }
}

/// Side of the widening window, in cells, for distances of points known
/// only up to their `d`-dimensional cells.
fn widening(d: usize) -> u64 {
    (d as f64).sqrt().ceil() as u64
}

/// Cells of `D(F) = {|x − y|}` at the grid's depth, over span `⌈span·√d⌉`.
///
/// For every pair of cells the centre-to-centre distance is located exactly
/// via an integer square root and widened by `⌈√d⌉` cells on each side,
/// which covers every distance between points of the two cells.
pub fn distance_set(f: &GridSetD) -> Result<DyadicTree> {
    if f.is_empty() {
        return Err(Error::EmptySet);
    }
    if f.len() > DISTANCE_CELL_LIMIT {
        return Err(Error::Resource(format!(
            "{} cells exceed the distance-set limit of {DISTANCE_CELL_LIMIT}; coarsen first",
            f.len()
        )));
    }
    let span = ((f.span as f64) * (f.d as f64).sqrt()).ceil() as u64;
    check_span_depth(span, f.depth)?;
    let universe = level_universe(span, f.depth);
    let side = level_universe(f.span, f.depth);
    let max_sq = f.d as u64 * (side - 1) * (side - 1);
    let cells: Vec<&[u64]> = f.cells().collect();
    let sq = |a: &[u64], b: &[u64]| -> u64 {
        a.iter().zip(b).map(|(&x, &y)| x.abs_diff(y).pow(2)).sum()
    };

    // Collect distinct squared distances first when they fit a bit grid.
    let roots: Vec<u64> = if max_sq < (1 << 32) {
        let seen = cells
            .par_iter()
            .enumerate()
            .fold(
                || BitGrid::new(max_sq + 1),
                |mut acc, (i, a)| {
                    for b in &cells[i..] {
                        acc.set(sq(a, b));
                    }
                    acc
                },
            )
            .reduce(
                || BitGrid::new(max_sq + 1),
                |mut x, y| {
                    x.or_assign(&y);
                    x
                },
            );
        let mut r: Vec<u64> = seen.iter().map(|s| s.isqrt()).collect();
        r.dedup();
        r
    } else {
        let marked = cells
            .par_iter()
            .enumerate()
            .fold(
                || BitGrid::new(universe),
                |mut acc, (i, a)| {
                    for b in &cells[i..] {
                        acc.set(sq(a, b).isqrt().min(universe - 1));
                    }
                    acc
                },
            )
            .reduce(
                || BitGrid::new(universe),
                |mut x, y| {
                    x.or_assign(&y);
                    x
                },
            );
        marked.iter().collect()
    };
    let w = widening(f.d);
    let mut out = BitGrid::new(universe);
    for q in roots {
        for c in q.saturating_sub(w)..=(q + w).min(universe - 1) {
            out.set(c);
        }
    }
    DyadicTree::from_leaf_set(span, f.depth, CellSet::from_bits(out))
}

/// Cells of `f` whose centres lie in the closed annulus around `center`.
pub fn annulus_cells(f: &GridSetD, center: &[f64], inner: f64, width: f64) -> Result<Vec<Vec<u64>>> {
    if !(width > 0.0) {
        return Err(Error::Domain(format!("annulus width {width} must be positive")));
    }
    if center.len() != f.d {
        return Err(Error::arg(format!(
            "center has {} coordinates, grid has {}",
            center.len(),
            f.d
        )));
    }
    let h = (-(f.depth as f64)).exp2();
    Ok(f.cells()
        .filter(|c| {
            let r = c
                .iter()
                .zip(center)
                .map(|(&i, &x)| ((i as f64 + 0.5) * h - x).powi(2))
                .sum::<f64>()
                .sqrt();
            r >= inner && r <= inner + width
        })
        .map(<[u64]>::to_vec)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{ifs_attractor, reciprocal_tree, IfsSpec};
    use crate::rational::parse_rational;
    use proptest::prelude::*;

    fn cantor(depth: u32) -> DyadicTree {
        ifs_attractor(&IfsSpec::two_map(parse_rational("1/3").unwrap()).unwrap(), depth).unwrap()
    }

    fn leaves(span: u64, depth: u32, cells: &[u64]) -> DyadicTree {
        DyadicTree::from_leaves(span, depth, cells.to_vec()).unwrap()
    }

    /// Every pair sum, no cleverness.
    fn brute_sumset(a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut v: Vec<u64> = a.iter().flat_map(|&i| b.iter().map(move |&j| i + j)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    #[test]
    fn index_sumset_examples() {
        let a = leaves(1, 2, &[0, 2]);
        let (s, r) = index_sumset(&a, &a, 2).unwrap();
        assert_eq!(s.level(2).to_vec(), vec![0, 2, 4]);
        assert_eq!(s.span(), 2);
        assert_eq!(r.count_exact, 3);
        assert_eq!(r.bracket, [1.5, 6.0]);

        let c = cantor(10);
        let (cc, _) = index_sumset(&c, &c, 10).unwrap();
        assert_eq!(cc.level(10).to_vec(), (0..=2 * 1024 - 2).collect::<Vec<_>>());

        let zero = DyadicTree::point(0.0, 1, 10).unwrap();
        let (s, _) = index_sumset(&c, &zero, 10).unwrap();
        assert_eq!(s.leaves().to_vec(), c.leaves().to_vec());

        let (e, r) = index_sumset(&c, &DyadicTree::empty(1, 10).unwrap(), 10).unwrap();
        assert!(e.is_empty());
        assert_eq!(r.count_exact, 0);
        assert!(matches!(index_sumset(&c, &c, 11), Err(Error::Range(_))));
    }

    #[test]
    fn iterated_sumset_examples() {
        let c = cantor(10);
        assert_eq!(iterated_sumset(&c, 1, 10).unwrap(), c);
        assert_eq!(iterated_sumset(&c, 2, 10).unwrap(), index_sumset(&c, &c, 10).unwrap().0);

        // brute force over three reciprocals at level 12
        let r = reciprocal_tree(12).unwrap();
        let three = iterated_sumset(&r, 3, 12).unwrap();
        let base = r.leaves().to_vec();
        let brute = brute_sumset(&brute_sumset(&base, &base), &base);
        assert_eq!(three.leaves().to_vec(), brute);
        let bound: f64 = 12.0 * (1.0 - 0.125);
        assert!(three.covering_count(12).unwrap() as f64 >= bound.exp2() / 2.0);
    }

    #[test]
    fn difference_set_examples() {
        let d = difference_set(&leaves(1, 2, &[0, 2]), 2).unwrap();
        assert_eq!(d.tree.level(2).to_vec(), vec![0, 2, 4]);
        assert_eq!(d.offset, 2);

        let d = difference_set(&DyadicTree::point(0.0, 1, 5).unwrap(), 5).unwrap();
        assert_eq!(d.tree.level(5).to_vec(), vec![0]);
        assert_eq!(d.offset, 0);

        let c = cantor(10);
        let d = difference_set(&c, 10).unwrap();
        assert_eq!(d.offset, 1023);
        assert_eq!(d.tree.level(10).to_vec(), (0..=2046).collect::<Vec<_>>());
    }

    #[test]
    fn difference_set_is_symmetric() {
        let t = leaves(1, 6, &[1, 5, 6, 20, 41, 42, 63]);
        let d = difference_set(&t, 6).unwrap();
        let cells = d.tree.leaves();
        for c in cells.iter() {
            assert!(cells.contains(2 * d.offset - c));
        }
    }

    #[test]
    fn delta_dense_examples() {
        assert!(delta_dense_check(&DyadicTree::full(1, 8).unwrap(), 8, 1.0).unwrap());
        assert!(!delta_dense_check(&DyadicTree::point(0.0, 1, 8).unwrap(), 8, 0.5).unwrap());
        let r2 = iterated_sumset(&reciprocal_tree(8).unwrap(), 2, 8).unwrap();
        assert!(delta_dense_check(&r2, 8, 0.25).unwrap());
        assert!(matches!(
            delta_dense_check(&DyadicTree::full(1, 8).unwrap(), 8, 1.5),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn distance_set_examples() {
        let depth = 9;
        let pts = GridSetD::from_points(1, depth, 1, &[vec![0.0], vec![1.0 / 3.0], vec![1.0]]).unwrap();
        let d = distance_set(&pts).unwrap();
        for x in [0.0, 1.0 / 3.0, 2.0 / 3.0] {
            assert!(d.leaves().contains(locate(x, depth, 1).unwrap().index), "{x}");
        }
        assert!(d.leaves().contains((1 << depth) - 1));
        // cell-level widening keeps the marks near the true distances
        assert!(d.leaves().len() <= 4 * 3);

        let corners: Vec<Vec<f64>> = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
        let sq = GridSetD::from_points(2, depth, 1, &corners).unwrap();
        let d = distance_set(&sq).unwrap();
        assert_eq!(d.span(), 2);
        for x in [0.0, 1.0, 2f64.sqrt()] {
            assert!(d.leaves().contains(locate(x, depth, 2).unwrap().index), "{x}");
        }

        let c = cantor(8);
        let dust = GridSetD::product(&[&c, &c]).unwrap();
        let dd = distance_set(&dust).unwrap();
        assert!(dd.covering_count(8).unwrap() >= c.covering_count(8).unwrap());
        for cell in c.leaves().iter() {
            assert!(dd.leaves().contains(cell));
        }
    }

    #[test]
    fn distance_set_covers_true_distances() {
        // random points, each distance between actual points must land in a marked cell
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for d in 1..=3usize {
            let pts: Vec<Vec<f64>> = (0..40).map(|_| (0..d).map(|_| rng.gen::<f64>()).collect()).collect();
            let g = GridSetD::from_points(d, 7, 1, &pts).unwrap();
            let ds = distance_set(&g).unwrap();
            for p in &pts {
                for q in &pts {
                    let r = p.iter().zip(q).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
                    let cell = locate(r, 7, ds.span()).unwrap().index;
                    assert!(ds.leaves().contains(cell), "d={d} r={r}");
                }
            }
        }
    }

    #[test]
    fn distance_set_resource_guard() {
        let big = GridSetD {
            d: 1,
            depth: 20,
            span: 1,
            coords: (0..(DISTANCE_CELL_LIMIT as u64 + 1)).collect(),
        };
        assert!(matches!(distance_set(&big), Err(Error::Resource(_))));
    }

    #[test]
    fn annulus_examples() {
        let full = GridSetD::product(&[&DyadicTree::full(1, 3).unwrap(), &DyadicTree::full(1, 3).unwrap()]).unwrap();
        assert_eq!(annulus_cells(&full, &[0.0, 0.0], 0.0, 2f64.sqrt()).unwrap().len(), 64);
        assert!(annulus_cells(&full, &[0.0, 0.0], 2.0, 0.5).unwrap().is_empty());

        let corners: Vec<Vec<f64>> = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
        let sq = GridSetD::from_points(2, 10, 1, &corners).unwrap();
        let ring = annulus_cells(&sq, &[0.0, 0.0], 0.9, 0.2).unwrap();
        assert_eq!(ring, vec![vec![0, 1023], vec![1023, 0]]);
        assert!(matches!(annulus_cells(&sq, &[0.0, 0.0], 0.9, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn grid_set_text_round_trip() {
        let c = cantor(4);
        let g = GridSetD::product(&[&c, &c]).unwrap();
        let text = g.to_text();
        assert!(text.starts_with("grid-set v1 d=2 depth=4 span=1\n0 0\n"));
        assert_eq!(GridSetD::from_text(&text).unwrap(), g);
        assert!(GridSetD::from_text("grid-set v1 d=2 depth=2 span=1\n0 9\n").is_err());
    }

    #[test]
    fn grid_descendant_counts() {
        let full = GridSetD::product(&[&DyadicTree::full(1, 4).unwrap(), &DyadicTree::full(1, 4).unwrap()]).unwrap();
        assert_eq!(full.count_at(2), 16);
        assert!(full.descendant_counts(1, 2).iter().all(|&c| c == 16));
    }

    fn arb_cells(universe: u64) -> impl Strategy<Value = Vec<u64>> {
        proptest::collection::btree_set(0..universe, 1..60).prop_map(|s| s.into_iter().collect())
    }

    proptest! {
        #[test]
        fn kernels_agree(a in arb_cells(256), b in arb_cells(256)) {
            let (sa, sb) = (CellSet::from_sorted(256, a.clone()), CellSet::from_sorted(256, b.clone()));
            let dense = sumset_dense(&sa, &sb, 512);
            let sparse = sumset_sparse(&sa, &sb, 512);
            prop_assert_eq!(&dense, &sparse);
            prop_assert_eq!(dense.to_vec(), brute_sumset(&a, &b));
        }

        #[test]
        fn sumset_commutes_and_associates(a in arb_cells(64), b in arb_cells(64), c in arb_cells(64)) {
            let (ta, tb, tc) = (leaves(1, 6, &a), leaves(1, 6, &b), leaves(1, 6, &c));
            let ab = index_sumset(&ta, &tb, 6).unwrap().0;
            prop_assert_eq!(&ab, &index_sumset(&tb, &ta, 6).unwrap().0);
            let left = index_sumset(&ab, &tc, 6).unwrap().0;
            let right = index_sumset(&ta, &index_sumset(&tb, &tc, 6).unwrap().0, 6).unwrap().0;
            prop_assert_eq!(left.leaves().to_vec(), right.leaves().to_vec());
        }

        #[test]
        fn sumset_is_monotone(a in arb_cells(64), extra in arb_cells(64), k in 1u32..4) {
            let mut b = a.clone();
            b.extend(extra);
            let (ta, tb) = (leaves(1, 6, &a), DyadicTree::from_leaves(1, 6, b).unwrap());
            let ka = iterated_sumset(&ta, k, 6).unwrap();
            let kb = iterated_sumset(&tb, k, 6).unwrap();
            prop_assert!(ka.leaves().iter().all(|c| kb.leaves().contains(c)));
        }

        #[test]
        fn difference_contains_reflected_sum(a in arb_cells(64)) {
            let t = leaves(1, 6, &a);
            let d = difference_set(&t, 6).unwrap();
            let max = *a.last().unwrap();
            let refl: Vec<u64> = a.iter().map(|&j| max - j).collect();
            for s in brute_sumset(&a, &refl) {
                prop_assert!(d.tree.leaves().contains(s));
            }
        }
    }
}
