//! Uniform plane trees with i.i.d. `{-1, 0, +1}` edge labels, the discrete
//! model whose zero-label count rescaled by `n^{-3/4}` approximates the local
//! time at 0 of ISE.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Parent of the root.
pub const ROOT: usize = usize::MAX;

/// Largest `n` accepted by [`enumerate_plane_trees`].
pub const MAX_ENUMERATION_EDGES: usize = 8;

/// Rooted plane tree with vertices numbered in preorder, so every parent
/// index is smaller than its children's.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlaneTree {
    n_edges: usize,
    parent: Vec<usize>,
    children: Vec<Vec<usize>>,
}

impl PlaneTree {
    /// Builds the tree coded by a Dyck path (`true` = up step).
    pub fn from_dyck(steps: &[bool]) -> Result<Self> {
        let n = steps.len() / 2;
        if !steps.len().is_multiple_of(2) || steps.iter().filter(|&&u| u).count() != n {
            return Err(Error::Input("not a balanced path".into()));
        }
        let mut parent = Vec::with_capacity(n + 1);
        let mut children = vec![Vec::new(); n + 1];
        parent.push(ROOT);
        let mut cur = 0usize;
        for &up in steps {
            if up {
                let v = parent.len();
                parent.push(cur);
                children[cur].push(v);
                cur = v;
            } else {
                if cur == 0 {
                    return Err(Error::Input("path goes below zero".into()));
                }
                cur = parent[cur];
            }
        }
        Ok(Self {
            n_edges: n,
            parent,
            children,
        })
    }

    /// Contour (Dyck) path: up when entering a child, down when leaving it.
    pub fn to_dyck(&self) -> Vec<bool> {
        let mut out = Vec::with_capacity(2 * self.n_edges);
        // (vertex, index of next child to visit)
        let mut stack = vec![(0usize, 0usize)];
        while let Some(top) = stack.last_mut() {
            let (v, i) = *top;
            if i < self.children[v].len() {
                top.1 += 1;
                out.push(true);
                stack.push((self.children[v][i], 0));
            } else {
                stack.pop();
                if !stack.is_empty() {
                    out.push(false);
                }
            }
        }
        out
    }

    /// Dyck path packed into an integer, most significant step first.
    pub fn dyck_code(&self) -> u64 {
        self.to_dyck()
            .iter()
            .fold(0u64, |acc, &up| (acc << 1) | u64::from(up))
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn n_vertices(&self) -> usize {
        self.n_edges + 1
    }

    pub fn parent(&self, v: usize) -> usize {
        self.parent[v]
    }

    pub fn parents(&self) -> &[usize] {
        &self.parent
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    /// The path tree `0 - 1 - ... - n`.
    pub fn path(n: usize) -> Self {
        let mut steps = vec![true; n];
        steps.extend(std::iter::repeat_n(false, n));
        Self::from_dyck(&steps).expect("a path is a Dyck path")
    }
}

/// Rotates a `±1` sequence with total sum `-1` so that every proper prefix
/// sum is nonnegative (cycle lemma), then drops the final down step.
pub fn cycle_lemma(steps: &[bool]) -> Result<Vec<bool>> {
    let ups = steps.iter().filter(|&&u| u).count();
    if steps.len() != 2 * ups + 1 {
        return Err(Error::Input("need n up steps and n + 1 down steps".into()));
    }
    let mut height = 0i64;
    let mut min = 0i64;
    let mut argmin = 0usize; // rotation start: just after the first minimum
    for (i, &up) in steps.iter().enumerate() {
        height += if up { 1 } else { -1 };
        if height < min {
            min = height;
            argmin = i + 1;
        }
    }
    let len = steps.len();
    let mut out: Vec<bool> = (0..len).map(|k| steps[(argmin + k) % len]).collect();
    debug_assert_eq!(out.last(), Some(&false));
    out.pop();
    Ok(out)
}

/// Uniform plane tree with `n` edges.
pub fn sample_plane_tree(n: usize, rng: &mut RngStream) -> Result<PlaneTree> {
    if n == 0 {
        return Err(Error::Domain("need at least one edge".into()));
    }
    let mut steps = vec![true; n];
    steps.extend(std::iter::repeat_n(false, n + 1));
    steps.shuffle(rng);
    PlaneTree::from_dyck(&cycle_lemma(&steps)?)
}

/// All plane trees with `n` edges, in lexicographic order of their Dyck paths
/// (up before down).
pub fn enumerate_plane_trees(n: usize) -> Result<Vec<PlaneTree>> {
    if n == 0 || n > MAX_ENUMERATION_EDGES {
        return Err(Error::Size(format!(
            "enumeration supports 1 <= n <= {MAX_ENUMERATION_EDGES}, got {n}"
        )));
    }
    fn rec(n: usize, up: usize, down: usize, path: &mut Vec<bool>, out: &mut Vec<PlaneTree>) {
        if up == n && down == n {
            out.push(PlaneTree::from_dyck(path).expect("generated paths are Dyck"));
            return;
        }
        if up < n {
            path.push(true);
            rec(n, up + 1, down, path, out);
            path.pop();
        }
        if down < up {
            path.push(false);
            rec(n, up, down + 1, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, 0, 0, &mut Vec::with_capacity(2 * n), &mut out);
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledTree {
    pub tree: PlaneTree,
    pub labels: Vec<i64>,
}

impl LabeledTree {
    /// Labels from per-vertex increments (`increments[0]` is ignored).
    pub fn from_increments(tree: PlaneTree, increments: &[i64]) -> Result<Self> {
        if increments.len() != tree.n_vertices() {
            return Err(Error::Input("one increment per vertex required".into()));
        }
        let mut labels = vec![0i64; tree.n_vertices()];
        for v in 1..tree.n_vertices() {
            let d = increments[v];
            if !(-1..=1).contains(&d) {
                return Err(Error::Input(format!("increment {d} not in {{-1, 0, 1}}")));
            }
            labels[v] = labels[tree.parent(v)] + d;
        }
        Ok(Self { tree, labels })
    }

    /// The labeling `-l`.
    pub fn negated(&self) -> Self {
        Self {
            tree: self.tree.clone(),
            labels: self.labels.iter().map(|l| -l).collect(),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.labels.len() == self.tree.n_vertices()
            && self.labels[0] == 0
            && (1..self.labels.len())
                .all(|v| (self.labels[v] - self.labels[self.tree.parent(v)]).abs() <= 1)
    }
}

fn increment(rng: &mut RngStream) -> i64 {
    rng.random_range(0..3i64) - 1
}

/// Root label 0 and i.i.d. uniform `{-1, 0, +1}` increments along edges.
pub fn assign_labels(tree: PlaneTree, rng: &mut RngStream) -> LabeledTree {
    let mut labels = vec![0i64; tree.n_vertices()];
    for v in 1..tree.n_vertices() {
        labels[v] = labels[tree.parent(v)] + increment(rng);
    }
    LabeledTree { tree, labels }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnakeStats {
    pub n_edges: usize,
    pub zero_count: usize,
    pub pos_count: usize,
    pub neg_count: usize,
}

pub fn stats(lt: &LabeledTree) -> SnakeStats {
    let (mut zero, mut pos, mut neg) = (0, 0, 0);
    for &l in &lt.labels {
        match l.signum() {
            0 => zero += 1,
            1 => pos += 1,
            _ => neg += 1,
        }
    }
    SnakeStats {
        n_edges: lt.tree.n_edges(),
        zero_count: zero,
        pos_count: pos,
        neg_count: neg,
    }
}

/// `n^{-3/4} #{v : l_v = 0}`.
pub fn rescaled_zero_count(s: &SnakeStats) -> f64 {
    s.zero_count as f64 * (s.n_edges as f64).powf(-0.75)
}

/// `#{v : l_v > 0} / (n + 1)`.
pub fn positive_fraction(s: &SnakeStats) -> f64 {
    s.pos_count as f64 / (s.n_edges + 1) as f64
}

/// `(#{l_v > 0} + #{l_v = 0}/2) / (n + 1)`: splits the zero-label vertices
/// evenly between the two signs, removing the `O(n^{-1/4})` mass at 0.
pub fn positive_fraction_symmetric(s: &SnakeStats) -> f64 {
    (s.pos_count as f64 + 0.5 * s.zero_count as f64) / (s.n_edges + 1) as f64
}

/// `2^{-1/4} 3^{-1/2}`, the constant relating `n^{-3/4} #S_n` to `L^0` under
/// `N_0(· | sigma = 1)` as stated in the discrete limit theorem.
pub fn stated_limit_constant() -> f64 {
    2f64.powf(-0.25) / 3f64.sqrt()
}

/// `3^{1/2} 2^{-3/4}`, the constant that makes the rescaled zero count converge
/// to `(3T)^{-1/2}` for this model (see the README discussion of the snake gate).
pub fn empirical_limit_constant() -> f64 {
    3f64.sqrt() * 2f64.powf(-0.75)
}

/// One draw: uniform tree with `n` edges, uniform labels, counts by sign.
pub fn sample_stats(n: usize, rng: &mut RngStream) -> Result<SnakeStats> {
    let tree = sample_plane_tree(n, rng)?;
    Ok(stats(&assign_labels(tree, rng)))
}

/// `E[zero_count]` for `n <= 4` by summing over all trees and all `3^n`
/// increment assignments; returned as `(numerator, denominator)`.
pub fn exact_mean_zero_count(n: usize) -> Result<(u64, u64)> {
    if n > 4 {
        return Err(Error::Size(format!("exhaustive mean supports n <= 4, got {n}")));
    }
    let trees = enumerate_plane_trees(n)?;
    let labelings = 3u64.pow(n as u32);
    let mut total = 0u64;
    for t in &trees {
        for code in 0..labelings {
            let mut inc = vec![0i64; n + 1];
            let mut c = code;
            for slot in inc.iter_mut().skip(1) {
                *slot = (c % 3) as i64 - 1;
                c /= 3;
            }
            let lt = LabeledTree::from_increments(t.clone(), &inc)?;
            total += stats(&lt).zero_count as u64;
        }
    }
    Ok((total, trees.len() as u64 * labelings))
}

#[cfg(test)]
mod tests {
    use super::*;

    const CATALAN: [usize; 9] = [1, 1, 2, 5, 14, 42, 132, 429, 1430];

    #[test]
    fn enumeration_counts_are_catalan() {
        for (n, &count) in CATALAN.iter().enumerate().skip(1) {
            let trees = enumerate_plane_trees(n).unwrap();
            assert_eq!(trees.len(), count);
            let mut codes: Vec<u64> = trees.iter().map(|t| t.dyck_code()).collect();
            codes.sort_unstable();
            codes.dedup();
            assert_eq!(codes.len(), CATALAN[n]);
        }
        assert!(enumerate_plane_trees(9).is_err());
        assert!(enumerate_plane_trees(0).is_err());
    }

    #[test]
    fn dyck_round_trip_is_identity() {
        for n in 1..=8 {
            for t in enumerate_plane_trees(n).unwrap() {
                let back = PlaneTree::from_dyck(&t.to_dyck()).unwrap();
                assert_eq!(back, t);
                assert_eq!(t.n_vertices(), n + 1);
                assert!((1..=n).all(|v| t.parent(v) < v));
            }
        }
    }

    #[test]
    fn cycle_lemma_yields_dyck_paths() {
        let mut r = RngStream::new(1, 0);
        for _ in 0..200 {
            let t = sample_plane_tree(7, &mut r).unwrap();
            let mut h = 0i64;
            for up in t.to_dyck() {
                h += if up { 1 } else { -1 };
                assert!(h >= 0);
            }
            assert_eq!(h, 0);
        }
        assert!(cycle_lemma(&[true, false]).is_err());
    }

    #[test]
    fn single_edge_tree_is_forced() {
        let mut r = RngStream::new(2, 0);
        for _ in 0..20 {
            assert_eq!(sample_plane_tree(1, &mut r).unwrap(), PlaneTree::path(1));
        }
    }

    #[test]
    fn stats_examples() {
        let t = PlaneTree::path(6);
        let flat = LabeledTree::from_increments(t.clone(), &[0; 7]).unwrap();
        assert_eq!(stats(&flat).zero_count, 7);
        let up = LabeledTree::from_increments(t, &[0, 1, 1, 1, 1, 1, 1]).unwrap();
        let s = stats(&up);
        assert_eq!((s.zero_count, s.pos_count, s.neg_count), (1, 6, 0));
        assert!(up.is_valid());
        let n = stats(&up.negated());
        assert_eq!((n.pos_count, n.neg_count), (0, 6));
    }

    #[test]
    fn random_labels_partition_vertices() {
        let mut r = RngStream::new(3, 0);
        for _ in 0..50 {
            let lt = assign_labels(sample_plane_tree(40, &mut r).unwrap(), &mut r);
            assert!(lt.is_valid());
            let s = stats(&lt);
            assert_eq!(s.zero_count + s.pos_count + s.neg_count, 41);
            assert!(s.zero_count >= 1);
        }
    }

    #[test]
    fn exact_small_means() {
        assert_eq!(exact_mean_zero_count(1).unwrap(), (4, 3));
        let (num, den) = exact_mean_zero_count(2).unwrap();
        // a two-step label sum is 0 w.p. 3/9, so each tree gives 1 + 1/3 + 1/3
        assert_eq!(num * 3, den * 5);
        assert!(exact_mean_zero_count(5).is_err());
    }

    #[test]
    fn constants() {
        assert!((stated_limit_constant() * empirical_limit_constant() - 2f64.powf(-1.0)).abs() < 1e-15);
    }
}
