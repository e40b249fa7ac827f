//! Probability measures on dyadic trees, their entropies and the
//! per-scale uniform/atomic diagnostics.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cells::group_offsets;
use crate::dyadic::{parse_tree_lines, DyadicTree, Vertex};
use crate::error::{Error, Result};

const MASS_TOL: f64 = 1e-12;
const CLASS_TOL: f64 = 1e-12;

/// `m = ⌊log2(1/eps)⌋`, at least 1.
pub fn default_window(eps: f64) -> u32 {
    ((1.0 / eps).log2().floor() as u32).max(1)
}

fn plogp_sum(masses: &[f64], norm: f64) -> f64 {
    masses
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| {
            let q = p / norm;
            -q * q.ln()
        })
        .sum::<f64>()
        .max(0.0)
}

/// A probability measure carried by the occupied cells of a tree.
#[derive(Clone, Debug)]
pub struct TreeMeasure {
    tree: Arc<DyadicTree>,
    /// `masses[n][p]` is the mass of the `p`-th occupied cell of level `n`.
    masses: Vec<Vec<f64>>,
}

impl TreeMeasure {
    fn nonempty(tree: &DyadicTree) -> Result<()> {
        if tree.is_empty() {
            Err(Error::EmptySet)
        } else {
            Ok(())
        }
    }

    /// Sums leaf masses upward.
    fn from_leaf_masses(tree: Arc<DyadicTree>, leaf: Vec<f64>) -> Self {
        let depth = tree.max_depth();
        let mut masses = vec![Vec::new(); depth as usize + 1];
        masses[depth as usize] = leaf;
        for n in (0..depth).rev() {
            let offs = group_offsets(tree.level(n), tree.level(n + 1), 1);
            let below = &masses[n as usize + 1];
            let up = offs.windows(2).map(|w| below[w[0]..w[1]].iter().sum()).collect();
            masses[n as usize] = up;
        }
        TreeMeasure { tree, masses }
    }

    /// Uniform mass on the deepest-level cells.
    pub fn counting(tree: impl Into<Arc<DyadicTree>>) -> Result<Self> {
        let tree = tree.into();
        Self::nonempty(&tree)?;
        let n = tree.leaves().len();
        Ok(Self::from_leaf_masses(tree, vec![1.0 / n as f64; n as usize]))
    }

    /// Each cell's mass divided equally among its occupied children.
    pub fn splitting(tree: impl Into<Arc<DyadicTree>>) -> Result<Self> {
        let tree = tree.into();
        Self::nonempty(&tree)?;
        let depth = tree.max_depth();
        let roots = tree.level(0).len();
        let mut masses = Vec::with_capacity(depth as usize + 1);
        masses.push(vec![1.0 / roots as f64; roots as usize]);
        for n in 0..depth {
            let offs = group_offsets(tree.level(n), tree.level(n + 1), 1);
            let parent: &Vec<f64> = masses.last().expect("nonempty");
            let mut next = Vec::with_capacity(tree.level(n + 1).len() as usize);
            for (p, w) in offs.windows(2).enumerate() {
                let share = parent[p] / (w[1] - w[0]) as f64;
                next.extend(std::iter::repeat_n(share, w[1] - w[0]));
            }
            masses.push(next);
        }
        Ok(TreeMeasure { tree, masses })
    }

    /// Normalized non-negative weights on the deepest-level cells, in cell order.
    pub fn from_leaf_weights(tree: impl Into<Arc<DyadicTree>>, weights: Vec<f64>) -> Result<Self> {
        let tree = tree.into();
        Self::nonempty(&tree)?;
        if weights.len() as u64 != tree.leaves().len() {
            return Err(Error::arg(format!(
                "{} weights for {} leaves",
                weights.len(),
                tree.leaves().len()
            )));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::Mass("weights must be finite and non-negative".into()));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::Mass("weights sum to zero".into()));
        }
        let leaf = weights.into_iter().map(|w| w / total).collect();
        Ok(Self::from_leaf_masses(tree, leaf))
    }

    pub fn tree(&self) -> &Arc<DyadicTree> {
        &self.tree
    }

    pub fn max_depth(&self) -> u32 {
        self.tree.max_depth()
    }

    /// Masses of the occupied cells of level `n`, in cell order.
    pub fn level_masses(&self, n: u32) -> &[f64] {
        &self.masses[n as usize]
    }

    fn position(&self, level: u32, index: u64) -> Option<usize> {
        let set = self.tree.level(level);
        set.contains(index).then(|| set.count_range(0, index) as usize)
    }

    /// `μ(D_level(index))`; zero for unoccupied cells.
    pub fn mass(&self, level: u32, index: u64) -> f64 {
        if level > self.max_depth() {
            return 0.0;
        }
        self.position(level, index)
            .map_or(0.0, |p| self.masses[level as usize][p])
    }

    fn check_level(&self, n: u32) -> Result<()> {
        if n > self.max_depth() {
            return Err(Error::range(format!(
                "level {n} exceeds tree depth {}",
                self.max_depth()
            )));
        }
        Ok(())
    }

    fn vertex_mass(&self, v: Vertex) -> Result<f64> {
        self.check_level(v.level)
            .map_err(|_| Error::InvalidVertex { level: v.level, index: v.index })?;
        let p = self
            .position(v.level, v.index)
            .ok_or(Error::InvalidVertex { level: v.level, index: v.index })?;
        let mass = self.masses[v.level as usize][p];
        if mass <= 0.0 {
            return Err(Error::ZeroMass { level: v.level, index: v.index });
        }
        Ok(mass)
    }

    /// Masses `m` levels below `v`, still unnormalized.
    fn masses_below(&self, v: Vertex, m: u32) -> &[f64] {
        let target = v.level + m;
        let set = self.tree.level(target);
        let lo = set.count_range(0, v.index << m) as usize;
        let len = set.count_range(v.index << m, (v.index + 1) << m) as usize;
        &self.masses[target as usize][lo..lo + len]
    }

    /// `μ^v`: the measure restricted to `v`, normalized and rescaled to `[0, 1)`.
    pub fn restrict_renormalize(&self, v: Vertex) -> Result<TreeMeasure> {
        let total = self.vertex_mass(v)?;
        let sub = Arc::new(self.tree.subtree(v)?);
        let masses = (0..=sub.max_depth())
            .map(|m| self.masses_below(v, m).iter().map(|&p| p / total).collect())
            .collect();
        Ok(TreeMeasure { tree: sub, masses })
    }

    /// `H(μ, D_n)` in nats.
    pub fn entropy(&self, n: u32) -> Result<f64> {
        self.check_level(n)?;
        Ok(plogp_sum(&self.masses[n as usize], 1.0))
    }

    /// `H_n(μ) = H(μ, D_n) / (n log 2)`.
    pub fn avg_entropy(&self, n: u32) -> Result<f64> {
        if n == 0 {
            return Err(Error::Domain("averaged entropy needs n ≥ 1".into()));
        }
        Ok(self.entropy(n)? / (n as f64 * std::f64::consts::LN_2))
    }

    /// `H(μ, D_j | D_i) = H(μ, D_j) − H(μ, D_i)`.
    pub fn cond_entropy(&self, i: u32, j: u32) -> Result<f64> {
        if i >= j {
            return Err(Error::arg(format!("conditional entropy needs i < j, got {i}, {j}")));
        }
        Ok((self.entropy(j)? - self.entropy(i)?).max(0.0))
    }

    /// `H(μ^v, D_m)` computed in place.
    pub fn local_entropy(&self, v: Vertex, m: u32) -> Result<f64> {
        let total = self.vertex_mass(v)?;
        self.check_level(v.level.saturating_add(m))?;
        Ok(plogp_sum(self.masses_below(v, m), total))
    }

    /// Uniform/atomic classification of `μ^v` at window `m`.
    pub fn classify_local(&self, v: Vertex, eps: f64, m: u32) -> Result<LocalClass> {
        if m == 0 {
            return Err(Error::Domain("window m must be ≥ 1".into()));
        }
        let h = self.local_entropy(v, m)? / (m as f64 * std::f64::consts::LN_2);
        Ok(LocalClass::from_avg_entropy(h, eps))
    }

    /// Per-level uniform and atomic mass fractions for levels `0..=n`.
    ///
    /// Windows reaching past the deepest level are clipped there, with each
    /// deepest-level cell treated as an atom; `H_m` keeps its `m log 2`
    /// normalization.
    pub fn scale_profile(&self, eps: f64, m: u32, n: u32) -> Result<ScaleProfile> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::Domain(format!("eps must lie in (0, 1), got {eps}")));
        }
        if m == 0 {
            return Err(Error::Domain("window m must be ≥ 1".into()));
        }
        self.check_level(n)?;
        let depth = self.max_depth();
        let norm = m as f64 * std::f64::consts::LN_2;
        let mut levels = Vec::with_capacity(n as usize + 1);
        let (mut uniform, mut atomic) = (Vec::new(), Vec::new());
        for k in 0..=n {
            let target = (k + m).min(depth);
            let shift = target - k;
            let offs = group_offsets(self.tree.level(k), self.tree.level(target), shift);
            let above = &self.masses[k as usize];
            let below = &self.masses[target as usize];
            let (mut uf, mut af) = (0.0, 0.0);
            for (p, w) in offs.windows(2).enumerate() {
                let mv = above[p];
                if mv <= 0.0 {
                    continue;
                }
                let h = plogp_sum(&below[w[0]..w[1]], mv) / norm;
                let class = LocalClass::from_avg_entropy(h, eps);
                if class.is_uniform() {
                    uf += mv;
                }
                if class.is_atomic() {
                    af += mv;
                }
            }
            let (uf, af) = (uf.clamp(0.0, 1.0), af.clamp(0.0, 1.0));
            if uf > 1.0 - eps {
                uniform.push(k);
            }
            if af > 1.0 - eps {
                atomic.push(k);
            }
            levels.push(LevelFractions {
                k,
                uniform_frac: uf,
                atomic_frac: af,
            });
        }
        Ok(ScaleProfile {
            eps,
            m,
            n,
            levels,
            uniform_levels: uniform,
            atomic_levels: atomic,
        })
    }

    /// Tree text followed by one `mass <level> <index> <value>` line per cell.
    pub fn to_text(&self) -> String {
        let mut s = self.tree.to_text();
        for n in 0..=self.max_depth() {
            for (c, p) in self.tree.level(n).iter().zip(&self.masses[n as usize]) {
                s.push_str(&format!("mass {n} {c} {p:.16e}\n"));
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<TreeMeasure> {
        let mut lines = text.lines().enumerate();
        let tree = Arc::new(parse_tree_lines(&mut lines)?);
        let mut masses: Vec<Vec<f64>> = (0..=tree.max_depth())
            .map(|n| Vec::with_capacity(tree.level(n).len() as usize))
            .collect();
        let mut expected = (0..=tree.max_depth()).flat_map(|n| tree.level(n).iter().map(move |c| (n, c)));
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let perr = |msg: String| Error::Parse { line: i + 1, msg };
            let toks: Vec<&str> = line.split_whitespace().collect();
            let [kw, lvl, idx, val] = toks[..] else {
                return Err(perr("expected `mass <level> <index> <value>`".into()));
            };
            if kw != "mass" {
                return Err(perr(format!("unexpected keyword `{kw}`")));
            }
            let lvl: u32 = lvl.parse().map_err(|_| perr(format!("bad level `{lvl}`")))?;
            let idx: u64 = idx.parse().map_err(|_| perr(format!("bad index `{idx}`")))?;
            let val: f64 = val.parse().map_err(|_| perr(format!("bad mass `{val}`")))?;
            if expected.next() != Some((lvl, idx)) {
                return Err(perr(format!("mass line for ({lvl}, {idx}) out of cell order")));
            }
            if !(val.is_finite() && val >= 0.0) {
                return Err(perr(format!("mass {val} is not a probability")));
            }
            masses[lvl as usize].push(val);
        }
        if expected.next().is_some() {
            return Err(Error::Parse {
                line: text.lines().count(),
                msg: "missing mass lines".into(),
            });
        }
        let mu = TreeMeasure { tree, masses };
        mu.check_consistency()?;
        Ok(mu)
    }

    /// Total mass 1 and children summing to their parent, within `1e-12`.
    pub fn check_consistency(&self) -> Result<()> {
        let total: f64 = self.masses[0].iter().sum();
        if (total - 1.0).abs() > MASS_TOL * self.masses[0].len().max(1) as f64 {
            return Err(Error::Mass(format!("total mass {total} is not 1")));
        }
        for n in 0..self.max_depth() {
            let offs = group_offsets(self.tree.level(n), self.tree.level(n + 1), 1);
            for (p, w) in offs.windows(2).enumerate() {
                let parent = self.masses[n as usize][p];
                let sum: f64 = self.masses[n as usize + 1][w[0]..w[1]].iter().sum();
                if (sum - parent).abs() > MASS_TOL {
                    let index = self.tree.level(n).iter().nth(p).unwrap_or(0);
                    return Err(Error::Mass(format!(
                        "children of ({n}, {index}) sum to {sum}, parent has {parent}"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalClass {
    Uniform,
    Atomic,
    Neither,
    Both,
}

impl LocalClass {
    pub fn from_avg_entropy(h: f64, eps: f64) -> Self {
        let u = h >= 1.0 - eps - CLASS_TOL;
        let a = h <= eps + CLASS_TOL;
        match (u, a) {
            (true, true) => LocalClass::Both,
            (true, false) => LocalClass::Uniform,
            (false, true) => LocalClass::Atomic,
            (false, false) => LocalClass::Neither,
        }
    }

    pub fn is_uniform(self) -> bool {
        matches!(self, LocalClass::Uniform | LocalClass::Both)
    }

    pub fn is_atomic(self) -> bool {
        matches!(self, LocalClass::Atomic | LocalClass::Both)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelFractions {
    pub k: u32,
    pub uniform_frac: f64,
    pub atomic_frac: f64,
}

/// Levels whose uniform (`I`) or atomic (`J`) mass fraction exceeds `1 − eps`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleProfile {
    pub eps: f64,
    pub m: u32,
    pub n: u32,
    pub levels: Vec<LevelFractions>,
    #[serde(rename = "I")]
    pub uniform_levels: Vec<u32>,
    #[serde(rename = "J")]
    pub atomic_levels: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub fired: bool,
    pub level_count: usize,
    pub required_levels: f64,
    /// `log2` of the bound on `N(F, 2^-n)`.
    pub log2_bound: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringReport {
    pub n: u32,
    pub eps: f64,
    pub m: u32,
    pub covering_count: u64,
    /// `#J ≥ (1−eps)n ⇒ N ≤ 2^(5 eps n)`.
    pub atomic: BoundCheck,
    /// `#I ≥ (1−eps)n ⇒ N ≥ 2^((1−eps)^3 n)`.
    pub uniform: BoundCheck,
    /// Greedy cover of `I` by windows `[k, k+m)`.
    pub uniform_cover: Vec<(u32, u32)>,
    pub atomic_convention: String,
}

impl CoveringReport {
    /// False only when a hypothesis fired and its conclusion failed.
    pub fn consistent(&self) -> bool {
        (!self.atomic.fired || self.atomic.holds) && (!self.uniform.fired || self.uniform.holds)
    }
}

/// Checks both covering conclusions for a tree of depth `n` and a profile of
/// its counting measure.
pub fn covering_bounds_check(tree: &DyadicTree, profile: &ScaleProfile, n: u32) -> Result<CoveringReport> {
    if tree.max_depth() != n || profile.n != n || profile.levels.len() != n as usize + 1 {
        return Err(Error::arg(format!(
            "profile depth {} and tree depth {} must both equal n = {n}",
            profile.n,
            tree.max_depth()
        )));
    }
    let eps = profile.eps;
    let count = tree.covering_count(n)?;
    let log2_count = (count as f64).log2();
    let required = (1.0 - eps) * n as f64;

    let atomic_bound = 5.0 * eps * n as f64;
    let atomic_fired = profile.atomic_levels.len() as f64 >= required;
    let atomic = BoundCheck {
        fired: atomic_fired,
        level_count: profile.atomic_levels.len(),
        required_levels: required,
        log2_bound: atomic_bound,
        holds: log2_count <= atomic_bound + 1e-9,
    };

    let uniform_bound = (1.0 - eps).powi(3) * n as f64;
    let uniform_fired = profile.uniform_levels.len() as f64 >= required;
    let uniform = BoundCheck {
        fired: uniform_fired,
        level_count: profile.uniform_levels.len(),
        required_levels: required,
        log2_bound: uniform_bound,
        holds: log2_count >= uniform_bound - 1e-9,
    };

    let mut cover = Vec::new();
    let mut next = 0u32;
    for &k in &profile.uniform_levels {
        if k >= next {
            cover.push((k, k + profile.m));
            next = k + profile.m;
        }
    }

    Ok(CoveringReport {
        n,
        eps,
        m: profile.m,
        covering_count: count,
        atomic,
        uniform,
        uniform_cover: cover,
        atomic_convention: "averaged: H_m(mu^v) <= eps".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{random_level_probs, random_tree};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::LN_2;

    fn cantor3() -> DyadicTree {
        DyadicTree::from_leaves(1, 3, vec![0, 1, 2, 5, 6, 7]).unwrap()
    }

    /// Alternates a fully branching level with a single-child level.
    fn alternating(depth: u32) -> DyadicTree {
        let mut cells = vec![0u64];
        for n in 0..depth {
            cells = if n % 2 == 0 {
                cells.iter().flat_map(|&c| [2 * c, 2 * c + 1]).collect()
            } else {
                cells.iter().map(|&c| 2 * c).collect()
            };
        }
        DyadicTree::from_leaves(1, depth, cells).unwrap()
    }

    #[test]
    fn counting_measure_examples() {
        let four = DyadicTree::from_leaves(1, 3, vec![0, 3, 4, 7]).unwrap();
        let mu = TreeMeasure::counting(four).unwrap();
        assert_eq!(mu.level_masses(3), &[0.25; 4]);

        let point = TreeMeasure::counting(DyadicTree::point(0.0, 1, 5).unwrap()).unwrap();
        for n in 0..=5 {
            assert_eq!(point.level_masses(n), &[1.0]);
        }

        let c = TreeMeasure::counting(cantor3()).unwrap();
        assert_abs_diff_eq!(c.mass(3, 5), 1.0 / 6.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.mass(1, 0), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(c.mass(1, 1), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(c.entropy(3).unwrap(), 6f64.ln(), epsilon = 1e-12);

        assert!(matches!(
            TreeMeasure::counting(DyadicTree::empty(1, 3).unwrap()),
            Err(Error::EmptySet)
        ));
    }

    #[test]
    fn splitting_measure_examples() {
        let full = TreeMeasure::splitting(DyadicTree::full(1, 6).unwrap()).unwrap();
        for n in 0..=6 {
            assert!(full.level_masses(n).iter().all(|&p| p == (-(n as f64)).exp2()));
        }
        let c = TreeMeasure::splitting(cantor3()).unwrap();
        assert_eq!(c.level_masses(3), &[0.125, 0.125, 0.25, 0.25, 0.125, 0.125]);
        c.check_consistency().unwrap();
    }

    #[test]
    fn restrict_renormalize_examples() {
        let c = TreeMeasure::splitting(cantor3()).unwrap();
        let sub = c.restrict_renormalize(Vertex { level: 1, index: 0 }).unwrap();
        assert_eq!(sub.tree().level(2).to_vec(), vec![0, 1, 2]);
        assert_eq!(sub.level_masses(2), &[0.25, 0.25, 0.5]);

        let full = TreeMeasure::splitting(DyadicTree::full(1, 6).unwrap()).unwrap();
        let sub = full.restrict_renormalize(Vertex { level: 2, index: 1 }).unwrap();
        let expect = TreeMeasure::splitting(DyadicTree::full(1, 4).unwrap()).unwrap();
        assert_eq!(sub.level_masses(4), expect.level_masses(4));

        let point = TreeMeasure::counting(DyadicTree::point(0.0, 1, 5).unwrap()).unwrap();
        let sub = point.restrict_renormalize(Vertex { level: 2, index: 0 }).unwrap();
        assert_eq!(sub.level_masses(3), &[1.0]);

        let w = TreeMeasure::from_leaf_weights(cantor3(), vec![1.0, 1.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            w.restrict_renormalize(Vertex { level: 1, index: 1 }),
            Err(Error::ZeroMass { .. })
        ));
    }

    #[test]
    fn entropy_examples() {
        let four = TreeMeasure::splitting(DyadicTree::full(1, 2).unwrap()).unwrap();
        assert_abs_diff_eq!(four.entropy(2).unwrap(), 2.0 * LN_2, epsilon = 1e-12);
        let point = TreeMeasure::counting(DyadicTree::point(0.3, 1, 8).unwrap()).unwrap();
        assert_eq!(point.entropy(8).unwrap(), 0.0);
        let c = TreeMeasure::splitting(cantor3()).unwrap();
        assert_abs_diff_eq!(c.entropy(3).unwrap(), 2.5 * LN_2, epsilon = 1e-12);
        assert!(matches!(c.entropy(4), Err(Error::Range(_))));
    }

    #[test]
    fn avg_and_conditional_entropy_examples() {
        let full = TreeMeasure::splitting(DyadicTree::full(1, 8).unwrap()).unwrap();
        assert_abs_diff_eq!(full.avg_entropy(8).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(full.cond_entropy(2, 3).unwrap(), LN_2, epsilon = 1e-12);
        let point = TreeMeasure::counting(DyadicTree::point(0.0, 1, 8).unwrap()).unwrap();
        assert_eq!(point.avg_entropy(8).unwrap(), 0.0);
        assert_eq!(point.cond_entropy(2, 3).unwrap(), 0.0);
        let c = TreeMeasure::splitting(cantor3()).unwrap();
        assert_abs_diff_eq!(c.avg_entropy(3).unwrap(), 2.5 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.cond_entropy(2, 3).unwrap(), 0.5 * LN_2, epsilon = 1e-12);
        assert!(matches!(c.avg_entropy(0), Err(Error::Domain(_))));
        assert!(matches!(c.cond_entropy(3, 2), Err(Error::Argument(_))));
    }

    #[test]
    fn classify_local_examples() {
        let full = TreeMeasure::splitting(DyadicTree::full(1, 10).unwrap()).unwrap();
        let v = Vertex { level: 3, index: 5 };
        assert_eq!(full.classify_local(v, 0.1, 5).unwrap(), LocalClass::Uniform);
        let point = TreeMeasure::counting(DyadicTree::point(0.0, 1, 10).unwrap()).unwrap();
        assert_eq!(
            point.classify_local(Vertex { level: 2, index: 0 }, 0.1, 5).unwrap(),
            LocalClass::Atomic
        );
        let c = TreeMeasure::splitting(cantor3()).unwrap();
        assert_eq!(
            c.classify_local(Vertex { level: 0, index: 0 }, 0.1, 3).unwrap(),
            LocalClass::Neither
        );
        assert!(matches!(c.classify_local(Vertex { level: 1, index: 0 }, 0.1, 3), Err(Error::Range(_))));
        assert_eq!(LocalClass::from_avg_entropy(0.5, 0.5), LocalClass::Both);
    }

    #[test]
    fn scale_profile_examples() {
        let full = TreeMeasure::splitting(DyadicTree::full(1, 15).unwrap()).unwrap();
        let p = full.scale_profile(0.1, 5, 10).unwrap();
        assert_eq!(p.uniform_levels, (0..=10).collect::<Vec<_>>());
        assert!(p.atomic_levels.is_empty());

        let point = TreeMeasure::counting(DyadicTree::point(0.0, 1, 15).unwrap()).unwrap();
        let p = point.scale_profile(0.1, 5, 10).unwrap();
        assert_eq!(p.atomic_levels, (0..=10).collect::<Vec<_>>());
        assert!(p.uniform_levels.is_empty());

        let alt = TreeMeasure::splitting(alternating(12)).unwrap();
        let p = alt.scale_profile(0.4, 1, 10).unwrap();
        assert_eq!(p.uniform_levels, vec![0, 2, 4, 6, 8, 10]);
        assert_eq!(p.atomic_levels, vec![1, 3, 5, 7, 9]);

        let json = serde_json::to_value(&p).unwrap();
        assert_eq!(json["I"][1], 2);
        assert_eq!(json["levels"][0]["uniform_frac"], 1.0);
    }

    #[test]
    fn scale_profile_clips_at_the_deepest_level() {
        let full = TreeMeasure::counting(DyadicTree::full(1, 20).unwrap()).unwrap();
        let p = full.scale_profile(0.1, 3, 20).unwrap();
        assert_eq!(p.uniform_levels, (0..=17).collect::<Vec<_>>());
        assert_eq!(p.atomic_levels, vec![20]);
    }

    #[test]
    fn covering_bounds_examples() {
        let point = DyadicTree::point(0.0, 1, 20).unwrap();
        let p = TreeMeasure::counting(point.clone()).unwrap().scale_profile(0.1, 3, 20).unwrap();
        let r = covering_bounds_check(&point, &p, 20).unwrap();
        assert!(r.atomic.fired && r.atomic.holds && !r.uniform.fired);

        let full = DyadicTree::full(1, 20).unwrap();
        let p = TreeMeasure::counting(full.clone()).unwrap().scale_profile(0.1, 3, 20).unwrap();
        let r = covering_bounds_check(&full, &p, 20).unwrap();
        assert!(r.uniform.fired && r.uniform.holds && !r.atomic.fired);
        assert_eq!(r.uniform_cover.first(), Some(&(0, 3)));
        assert!(r.consistent());

        assert!(matches!(covering_bounds_check(&full, &p, 19), Err(Error::Argument(_))));
    }

    #[test]
    fn text_round_trip() {
        let mu = TreeMeasure::counting(cantor3()).unwrap();
        let text = mu.to_text();
        assert!(text.contains("mass 3 5 1.6666666666666666e-1\n"));
        let back = TreeMeasure::from_text(&text).unwrap();
        assert_eq!(back.to_text(), text);

        let broken = text.replace("mass 1 1 5.0000000000000000e-1", "mass 1 1 4.0000000000000000e-1");
        assert!(matches!(TreeMeasure::from_text(&broken), Err(Error::Mass(_))));
    }

    fn arb_measure() -> impl Strategy<Value = TreeMeasure> {
        (any::<u64>(), 1u32..10, any::<bool>()).prop_map(|(seed, depth, split)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let probs = random_level_probs(&mut rng, depth);
            let tree = random_tree(&mut rng, 1, depth, &probs);
            if split {
                TreeMeasure::splitting(tree).unwrap()
            } else {
                TreeMeasure::counting(tree).unwrap()
            }
        })
    }

    proptest! {
        #[test]
        fn telescoping(mu in arb_measure()) {
            let d = mu.max_depth();
            let sum: f64 = (0..d).map(|i| mu.cond_entropy(i, i + 1).unwrap()).sum();
            prop_assert!((sum - mu.entropy(d).unwrap() + mu.entropy(0).unwrap()).abs() < 1e-9);
        }

        #[test]
        fn block_chain_rule(mu in arb_measure(), i in 0u32..9, m in 1u32..9) {
            let d = mu.max_depth();
            prop_assume!(i + m <= d);
            let rhs: f64 = mu.tree().vertices(i)
                .map(|v| mu.mass(v.level, v.index) * mu.restrict_renormalize(v).unwrap().entropy(m).unwrap())
                .sum();
            prop_assert!((mu.cond_entropy(i, i + m).unwrap() - rhs).abs() < 1e-9);
        }

        #[test]
        fn uniform_implies_full_branching(mu in arb_measure(), eps in 0.05f64..0.5, m in 1u32..6) {
            let tree = mu.tree().clone();
            for level in 0..=tree.max_depth().saturating_sub(m) {
                if level + m > tree.max_depth() { break; }
                for v in tree.vertices(level) {
                    if mu.classify_local(v, eps, m).unwrap().is_uniform() {
                        prop_assert!(tree.is_full_branching(v, eps, m).unwrap());
                    }
                }
            }
        }

        #[test]
        fn entropy_bounded_by_log_support(mu in arb_measure()) {
            for n in 0..=mu.max_depth() {
                let h = mu.entropy(n).unwrap();
                prop_assert!(h >= 0.0);
                prop_assert!(h <= (mu.tree().level(n).len() as f64).ln() + 1e-12);
            }
        }
    }
}
