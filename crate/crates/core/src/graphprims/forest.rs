//! Spanning trees and the depot-rooted spanning forest.

use super::UnionFind;
use crate::instance::{Cost, Instance};

/// A spanning forest in which every tree contains exactly one depot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningForest {
    /// Tree edges `(a, b)` with `a < b`, in the order they were accepted.
    pub edges: Vec<(usize, usize)>,
    /// Depot owning each vertex's tree.
    pub root: Vec<usize>,
    pub cost: Cost,
}

/// Minimum-cost spanning forest with exactly one depot per tree.
///
/// Equivalent to contracting all depots into one vertex, taking a minimum
/// spanning tree and expanding again. Edges are scanned by
/// `(cost, smaller id, larger id)`, so a customer equidistant from two
/// depots joins the lower-numbered one.
pub fn depot_spanning_forest(inst: &Instance) -> SpanningForest {
    let size = inst.num_vertices();
    let k = inst.k();
    let mut uf = UnionFind::new(size);
    for u in 1..k {
        uf.union(0, u);
    }
    let mut candidates = Vec::with_capacity(size * size / 2);
    for a in 0..size {
        for b in (a + 1).max(k)..size {
            candidates.push((inst.cost(a, b), a, b));
        }
    }
    candidates.sort_unstable();
    let mut edges = Vec::with_capacity(size.saturating_sub(k));
    let mut cost = 0;
    for (c, a, b) in candidates {
        if uf.union(a, b) {
            edges.push((a, b));
            cost += c;
        }
    }
    let root = tree_roots(size, k, &edges);
    SpanningForest { edges, root, cost }
}

/// Minimum spanning tree over `vertices` (ties by ids), as edges `(a, b)`.
pub fn minimum_spanning_tree(inst: &Instance, vertices: &[usize]) -> Vec<(usize, usize)> {
    let mut sorted = vertices.to_vec();
    sorted.sort_unstable();
    let mut candidates = Vec::new();
    for (i, &a) in sorted.iter().enumerate() {
        for &b in &sorted[i + 1..] {
            candidates.push((inst.cost(a, b), a, b));
        }
    }
    candidates.sort_unstable();
    let mut uf = UnionFind::new(inst.num_vertices());
    candidates
        .into_iter()
        .filter(|&(_, a, b)| uf.union(a, b))
        .map(|(_, a, b)| (a, b))
        .collect()
}

fn tree_roots(size: usize, k: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let adj = adjacency(size, edges);
    let mut root = vec![usize::MAX; size];
    for u in 0..k {
        root[u] = u;
        let mut stack = vec![u];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if root[w] == usize::MAX {
                    root[w] = u;
                    stack.push(w);
                }
            }
        }
    }
    root
}

fn adjacency(size: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); size];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    adj
}

/// Preorder of the tree containing `root`, children visited by ascending id.
/// This is exactly the shortcut of the Euler tour of the doubled tree.
pub fn tree_preorder(size: usize, edges: &[(usize, usize)], root: usize) -> Vec<usize> {
    let adj = adjacency(size.max(root + 1), edges);
    let mut seen = vec![false; adj.len()];
    let mut order = Vec::new();
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        order.push(v);
        for &w in adj[v].iter().rev() {
            if !seen[w] {
                stack.push(w);
            }
        }
    }
    order
}
