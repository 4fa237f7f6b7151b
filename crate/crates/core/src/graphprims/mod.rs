//! Exact combinatorial primitives shared by the solvers.

mod euler;
mod flow;
mod forest;
mod matching;
mod modq;

pub use euler::{eulerian_tour, shortcut};
pub use flow::{min_cost_max_flow, Capacity, FlowArc, FlowNetwork, FlowResult};
pub use forest::{depot_spanning_forest, minimum_spanning_tree, tree_preorder, SpanningForest};
pub use matching::{min_cost_perfect_matching, Matching};
pub use modq::modq_cycle_cover;

use crate::instance::{Cost, Instance};

/// Whether a component set is an arbitrary edge structure or a cycle cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentKind {
    Generic,
    CycleCover,
}

/// A vertex set with an edge multiset over it.
///
/// For cycle covers `vertices` lists the cycle in traversal order and
/// `edges` holds the closing edges; a single vertex is a trivial cycle with
/// no edges, and a two-vertex cycle is a doubled edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl Component {
    pub fn cycle(order: Vec<usize>) -> Self {
        let edges = cycle_edges(&order);
        Component { vertices: order, edges }
    }

    pub fn cost(&self, inst: &Instance) -> Cost {
        self.edges.iter().map(|&(a, b)| inst.cost(a, b)).sum()
    }
}

/// Edge multiset of the closed cycle through `order`.
pub fn cycle_edges(order: &[usize]) -> Vec<(usize, usize)> {
    if order.len() < 2 {
        return Vec::new();
    }
    let mut edges: Vec<(usize, usize)> = order.windows(2).map(|w| (w[0], w[1])).collect();
    edges.push((order[order.len() - 1], order[0]));
    edges
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentSet {
    pub kind: ComponentKind,
    pub components: Vec<Component>,
}

impl ComponentSet {
    pub fn from_cycles(cycles: Vec<Vec<usize>>) -> Self {
        ComponentSet {
            kind: ComponentKind::CycleCover,
            components: cycles.into_iter().map(Component::cycle).collect(),
        }
    }

    pub fn cost(&self, inst: &Instance) -> Cost {
        self.components.iter().map(|c| c.cost(inst)).sum()
    }

    /// Vertex orders of the components (cycle orders for a cover).
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        self.components.iter().map(|c| c.vertices.clone()).collect()
    }

    /// `l(C)` summed over all components under the instance demands.
    pub fn lower_ell(&self, inst: &Instance) -> u64 {
        let demand: Vec<u64> = (0..inst.num_vertices()).map(|v| inst.demand(v)).collect();
        self.components
            .iter()
            .map(|c| lower_ell(&c.vertices, &demand, inst.capacity()))
            .sum()
    }

    /// Checks vertex-disjointness and coverage of `0..size`, plus the cycle
    /// shape when tagged as a cover.
    pub fn is_valid_cover(&self, size: usize) -> bool {
        let mut seen = vec![false; size];
        for c in &self.components {
            if c.vertices.is_empty() {
                return false;
            }
            for &v in &c.vertices {
                if v >= size || seen[v] {
                    return false;
                }
                seen[v] = true;
            }
            if self.kind == ComponentKind::CycleCover && c.edges != cycle_edges(&c.vertices) {
                return false;
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Vehicles needed by a component: `ceil(demand / Q)`, zero when it holds no
/// demand. `demand` is indexed by vertex id.
pub fn lower_ell(vertices: &[usize], demand: &[u64], capacity: u64) -> u64 {
    let total: u64 = vertices.iter().map(|&v| demand[v]).sum();
    total.div_ceil(capacity)
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// Connected components of the multigraph `(0..size, edges)` restricted to
/// vertices that `include` accepts, each sorted ascending, ordered by their
/// smallest vertex.
pub(crate) fn connected_components(
    size: usize,
    edges: &[(usize, usize)],
    include: impl Fn(usize) -> bool,
) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(size);
    for &(a, b) in edges {
        uf.union(a, b);
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; size];
    for v in (0..size).filter(|&v| include(v)) {
        let r = uf.find(v);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(v);
    }
    groups
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ell_examples() {
        let demand = vec![0, 3, 4, 5];
        assert_eq!(lower_ell(&[1, 2], &demand, 5), 2);
        assert_eq!(lower_ell(&[0], &demand, 5), 0);
        assert_eq!(lower_ell(&[3], &demand, 5), 1);
    }

    #[test]
    fn cover_validity() {
        let set = ComponentSet::from_cycles(vec![vec![0, 2], vec![1]]);
        assert!(set.is_valid_cover(3));
        assert!(!set.is_valid_cover(4));
        let overlapping = ComponentSet::from_cycles(vec![vec![0, 1], vec![1]]);
        assert!(!overlapping.is_valid_cover(2));
    }

    #[test]
    fn components_by_smallest_vertex() {
        let comps = connected_components(5, &[(3, 1), (4, 2)], |_| true);
        assert_eq!(comps, vec![vec![0], vec![1, 3], vec![2, 4]]);
    }
}
