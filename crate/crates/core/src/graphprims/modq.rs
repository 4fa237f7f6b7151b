//! Cycle covers whose cycles carry demand divisible by `Q`.
//!
//! A primal-dual constrained forest is grown for the proper function
//! `f(S) = 1` iff `demand(S) mod Q != 0`: all active components raise their
//! duals at the same rate until an edge between two components becomes
//! tight, which merges them. Afterwards every edge whose removal leaves both
//! sides divisible is dropped, and each remaining tree is doubled and
//! shortcut into a cycle. The result costs at most twice the cheapest
//! divisible cycle cover.

use num_traits::Zero;

use super::forest::tree_preorder;
use super::{ComponentSet, UnionFind};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::rational::Rational;

/// Divisible cycle cover over all vertices, with `depot_demands[u]` acting
/// as the demand of depot `u`.
pub fn modq_cycle_cover(inst: &Instance, depot_demands: &[u64]) -> Result<ComponentSet> {
    let q = inst.capacity();
    let k = inst.k();
    if depot_demands.len() != k {
        return Err(Error::contract(format!(
            "{} depot demands given for {k} depots",
            depot_demands.len()
        )));
    }
    if let Some(u) = (0..k).find(|&u| depot_demands[u] >= q) {
        return Err(Error::contract(format!("depot {u} demand {} is not below Q", depot_demands[u])));
    }
    let size = inst.num_vertices();
    let demand: Vec<u64> =
        (0..size).map(|v| if v < k { depot_demands[v] } else { inst.demand(v) }).collect();
    let total: u128 = demand.iter().map(|&d| u128::from(d)).sum();
    if !total.is_multiple_of(u128::from(q)) {
        return Err(Error::contract(format!("total demand {total} is not divisible by Q = {q}")));
    }

    let forest = grow_forest(inst, &demand, q);
    let kept = prune(size, &forest, &demand, q);

    let mut uf = UnionFind::new(size);
    for &(a, b) in &kept {
        uf.union(a, b);
    }
    let mut cycles = Vec::new();
    let mut done = vec![false; size];
    for v in 0..size {
        let r = uf.find(v);
        if done[r] {
            continue;
        }
        done[r] = true;
        cycles.push(tree_preorder(size, &kept, v));
    }
    for cycle in &cycles {
        let d: u64 = cycle.iter().map(|&v| demand[v] % q).sum();
        if !d.is_multiple_of(q) {
            return Err(Error::contract(format!("cycle {cycle:?} carries demand {d} not divisible by {q}")));
        }
    }
    Ok(ComponentSet::from_cycles(cycles))
}

fn grow_forest(inst: &Instance, demand: &[u64], q: u64) -> Vec<(usize, usize)> {
    let size = demand.len();
    let mut uf = UnionFind::new(size);
    let mut residue: Vec<u64> = demand.iter().map(|&d| d % q).collect();
    let mut load = vec![Rational::zero(); size];
    let mut forest = Vec::new();
    loop {
        let mut best: Option<(Rational, usize, usize)> = None;
        let roots: Vec<usize> = (0..size).map(|v| uf.find(v)).collect();
        for a in 0..size {
            for b in a + 1..size {
                let (ra, rb) = (roots[a], roots[b]);
                if ra == rb {
                    continue;
                }
                let rate = i128::from(residue[ra] != 0) + i128::from(residue[rb] != 0);
                if rate == 0 {
                    continue;
                }
                let slack = Rational::from_integer(i128::from(inst.cost(a, b))) - load[a] - load[b];
                let t = slack / Rational::from_integer(rate);
                // Strict comparison keeps the smallest edge id on ties.
                if best.as_ref().is_none_or(|(bt, _, _)| t < *bt) {
                    best = Some((t, a, b));
                }
            }
        }
        let Some((t, a, b)) = best else { break };
        for v in 0..size {
            if residue[roots[v]] != 0 {
                load[v] += t;
            }
        }
        let merged = (residue[roots[a]] + residue[roots[b]]) % q;
        uf.union(a, b);
        let r = uf.find(a);
        residue[r] = merged;
        forest.push((a, b));
    }
    forest
}

/// Drops every forest edge that separates a divisible subtree.
fn prune(size: usize, forest: &[(usize, usize)], demand: &[u64], q: u64) -> Vec<(usize, usize)> {
    let mut adj = vec![Vec::new(); size];
    for &(a, b) in forest {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut parent = vec![usize::MAX; size];
    let mut visited = vec![false; size];
    let mut sub: Vec<u64> = demand.iter().map(|&d| d % q).collect();
    let mut kept = Vec::new();
    for root in 0..size {
        if visited[root] {
            continue;
        }
        let mut order = Vec::new();
        let mut stack = vec![root];
        visited[root] = true;
        while let Some(v) = stack.pop() {
            order.push(v);
            for &w in &adj[v] {
                if !visited[w] {
                    visited[w] = true;
                    parent[w] = v;
                    stack.push(w);
                }
            }
        }
        for &v in order.iter().rev() {
            let p = parent[v];
            if p != usize::MAX {
                sub[p] = (sub[p] + sub[v]) % q;
            }
        }
        for &v in &order {
            let p = parent[v];
            if p != usize::MAX && !sub[v].is_multiple_of(q) {
                kept.push((p.min(v), p.max(v)));
            }
        }
    }
    kept.sort_unstable();
    kept
}
