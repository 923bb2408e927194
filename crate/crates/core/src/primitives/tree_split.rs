use crate::multigraph::{SpanningTree, VertexId};

use super::PrimitiveError;

/// Spanning tree with a nonnegative label on every covered vertex.
#[derive(Clone, Debug)]
pub struct LabeledTree {
    pub tree: SpanningTree,
    /// Labels in the slot order of `tree.vertices()`.
    labels: Vec<u64>,
    /// `X`: upper bound on every label.
    pub label_cap: u64,
    /// `D`: upper bound on the tree's maximum degree.
    pub max_deg: usize,
}

fn tree_degrees(tree: &SpanningTree) -> Vec<usize> {
    let mut deg = vec![0usize; tree.len()];
    for (c, p) in tree.parent_slots().iter().enumerate() {
        if let Some((p, _)) = p {
            deg[c] += 1;
            deg[*p as usize] += 1;
        }
    }
    deg
}

impl LabeledTree {
    /// Labels every tree vertex with `label(v)`; the caps are taken from the
    /// data.
    pub fn new(tree: SpanningTree, label: impl Fn(VertexId) -> u64) -> Self {
        let labels: Vec<u64> = tree.vertices().iter().map(|&v| label(v)).collect();
        let label_cap = labels.iter().copied().max().unwrap_or(0);
        let max_deg = tree_degrees(&tree).into_iter().max().unwrap_or(0);
        LabeledTree {
            tree,
            labels,
            label_cap,
            max_deg,
        }
    }

    /// Like [`LabeledTree::new`] with caller-declared bounds `X` and `D`.
    pub fn with_bounds(
        tree: SpanningTree,
        label: impl Fn(VertexId) -> u64,
        label_cap: u64,
        max_deg: usize,
    ) -> Result<Self, PrimitiveError> {
        let t = Self::new(tree, label);
        if t.label_cap > label_cap {
            return Err(PrimitiveError::LabelAboveCap {
                label: t.label_cap,
                cap: label_cap,
            });
        }
        if t.max_deg > max_deg {
            return Err(PrimitiveError::TreeDegreeAboveBound {
                degree: t.max_deg,
                bound: max_deg,
            });
        }
        Ok(LabeledTree {
            label_cap,
            max_deg,
            ..t
        })
    }

    pub fn label(&self, v: VertexId) -> Option<u64> {
        self.tree.slot_of(v).map(|s| self.labels[s])
    }

    pub fn total(&self) -> u64 {
        self.labels.iter().sum()
    }

    /// Upper end `D·t + X` of the label-sum window for threshold `t`.
    pub fn window_max(&self, threshold: u64) -> u64 {
        self.max_deg as u64 * threshold + self.label_cap
    }
}

/// Partitions the tree into connected pieces whose label sums lie in
/// `[t, D·t + X]`.
///
/// The tree is re-rooted at a leaf. A post-order pass accumulates the label
/// mass still attached to each vertex and cuts a vertex off its parent once
/// that mass reaches `t`. If the leftover piece containing the root ends up
/// below `t` it is merged into an adjacent piece.
pub fn tree_split(t: &LabeledTree, threshold: u64) -> Result<Vec<Vec<VertexId>>, PrimitiveError> {
    if threshold == 0 {
        return Err(PrimitiveError::ZeroThreshold);
    }
    let total = t.total();
    if total < threshold {
        return Err(PrimitiveError::LabelsBelowThreshold { total, threshold });
    }
    let n = t.tree.len();
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (c, p) in t.tree.parent_slots().iter().enumerate() {
        if let Some((p, _)) = p {
            adj[c].push(*p);
            adj[*p as usize].push(c as u32);
        }
    }
    // The last vertex in BFS order has no children, so it is a leaf.
    let leaf = n - 1;

    let mut parent = vec![u32::MAX; n];
    let mut preorder = Vec::with_capacity(n);
    let mut stack = vec![leaf as u32];
    parent[leaf] = leaf as u32;
    while let Some(x) = stack.pop() {
        preorder.push(x);
        for &y in adj[x as usize].iter().rev() {
            if parent[y as usize] == u32::MAX {
                parent[y as usize] = x;
                stack.push(y);
            }
        }
    }

    let mut extra = t.labels.clone();
    let mut cut = vec![false; n];
    for &x in preorder.iter().rev() {
        let x = x as usize;
        if x == leaf {
            continue;
        }
        if extra[x] >= threshold {
            cut[x] = true;
        } else {
            let p = parent[x] as usize;
            extra[p] += extra[x];
        }
    }

    let mut comp = vec![0u32; n];
    let mut count = 1u32;
    for &x in &preorder[1..] {
        let x = x as usize;
        comp[x] = if cut[x] {
            count += 1;
            count - 1
        } else {
            comp[parent[x] as usize]
        };
    }
    if extra[leaf] < threshold {
        let target = preorder[1..]
            .iter()
            .map(|&x| x as usize)
            .find(|&x| cut[x] && comp[parent[x] as usize] == 0)
            .map(|x| comp[x])
            .expect("total >= threshold implies some piece was cut next to the root piece");
        for c in comp.iter_mut() {
            if *c == 0 {
                *c = target;
            }
        }
    }

    let mut parts: Vec<Vec<VertexId>> = vec![Vec::new(); count as usize];
    let order = t.tree.vertices();
    for &x in &preorder {
        parts[comp[x as usize] as usize].push(order[x as usize]);
    }
    parts.retain(|p| !p.is_empty());
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::{bfs_spanning_tree, MultiGraph};
    use proptest::prelude::*;

    fn tree_of(n: usize, edges: &[(usize, usize)], root: usize) -> SpanningTree {
        let g = MultiGraph::from_edges(n, edges).unwrap();
        let all: Vec<_> = g.vertices().collect();
        bfs_spanning_tree(&g, &all, VertexId::from(root)).unwrap()
    }

    fn sums(t: &LabeledTree, parts: &[Vec<VertexId>]) -> Vec<u64> {
        parts.iter().map(|p| p.iter().map(|&v| t.label(v).unwrap()).sum()).collect()
    }

    #[test]
    fn path_of_four() {
        let tree = tree_of(4, &[(0, 1), (1, 2), (2, 3)], 0);
        let lt = LabeledTree::with_bounds(tree, |_| 1, 1, 2).unwrap();
        let parts = tree_split(&lt, 2).unwrap();
        assert_eq!(sums(&lt, &parts), vec![2, 2]);
    }

    #[test]
    fn single_vertex() {
        let tree = tree_of(1, &[], 0);
        let lt = LabeledTree::new(tree, |_| 5);
        let parts = tree_split(&lt, 3).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(sums(&lt, &parts), vec![5]);
        assert!(5 <= lt.window_max(3));
    }

    #[test]
    fn star_root_piece_merges() {
        let edges: Vec<_> = (1..7).map(|i| (0, i)).collect();
        let tree = tree_of(7, &edges, 0);
        let lt = LabeledTree::with_bounds(tree, |v| u64::from(v.0 != 0), 1, 6).unwrap();
        let parts = tree_split(&lt, 2).unwrap();
        let s = sums(&lt, &parts);
        assert_eq!(s.iter().sum::<u64>(), 6);
        assert!(s.iter().all(|&x| (2..=13).contains(&x)), "{s:?}");
    }

    #[test]
    fn rejects_low_total_and_zero_threshold() {
        let lt = LabeledTree::new(tree_of(2, &[(0, 1)], 0), |_| 1);
        assert_eq!(
            tree_split(&lt, 3).unwrap_err(),
            PrimitiveError::LabelsBelowThreshold { total: 2, threshold: 3 }
        );
        assert_eq!(tree_split(&lt, 0).unwrap_err(), PrimitiveError::ZeroThreshold);
    }

    fn connected_in_tree(tree: &SpanningTree, part: &[VertexId]) -> bool {
        // A vertex set of a tree is connected iff it spans |part| - 1 tree edges.
        let inside = |v: VertexId| part.contains(&v);
        let internal = part
            .iter()
            .filter(|&&v| tree.parent(v).is_some_and(|(p, _)| inside(p)))
            .count();
        internal + 1 == part.len()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]
        #[test]
        fn window_holds_on_random_trees(
            parents in prop::collection::vec(any::<prop::sample::Index>(), 0..60),
            labels in prop::collection::vec(0u64..=20, 61),
            max_children in 1usize..10,
            t_frac in 0.0f64..1.0,
        ) {
            // Random tree with degree <= max_children + 1.
            let n = parents.len() + 1;
            let mut child_count = vec![0usize; n];
            let mut edges = Vec::new();
            for (i, p) in parents.iter().enumerate() {
                let c = i + 1;
                let mut p = p.index(c);
                while child_count[p] >= max_children { p = (p + 1) % c; }
                child_count[p] += 1;
                edges.push((p, c));
            }
            let tree = tree_of(n, &edges, 0);
            let lt = LabeledTree::new(tree, |v| labels[v.index()]);
            let total = lt.total();
            prop_assume!(total >= 1);
            let threshold = 1 + ((total - 1) as f64 * t_frac) as u64;
            let parts = tree_split(&lt, threshold).unwrap();
            let s = sums(&lt, &parts);
            prop_assert_eq!(s.iter().sum::<u64>(), total);
            prop_assert_eq!(parts.iter().map(Vec::len).sum::<usize>(), n);
            for (part, &sum) in parts.iter().zip(&s) {
                prop_assert!(sum >= threshold && sum <= lt.window_max(threshold));
                prop_assert!(connected_in_tree(&lt.tree, part));
            }
        }
    }
}
