//! XP algorithm: MD-TSP cover plus up to `k - 1` extra customer edges,
//! parity-repaired by a perfect matching.

use std::collections::BTreeSet;

use super::{eulerian_components_to_cycles, scan, Candidate, SolverKind, SolverResult};
use crate::error::Result;
use crate::graphprims::{connected_components, lower_ell, min_cost_perfect_matching, ComponentSet};
use crate::instance::Instance;
use crate::mdtsp::MdTspSolver;
use crate::rational::Rational;
use crate::transform::{transform, TransformInput};

pub fn alg1(inst: &Instance, mdtsp: &dyn MdTspSolver, max_iters: Option<u64>) -> Result<SolverResult> {
    if inst.n() == 0 {
        return Ok(super::empty_result(SolverKind::Alg1, inst));
    }
    let base = mdtsp.solve(inst)?;
    let pool = customer_edges(inst);
    let sets = edge_sets(pool.len(), inst.k().saturating_sub(1));
    let s = scan(sets, max_iters, |ids| {
        let extra: Vec<(usize, usize)> = ids.iter().map(|&i| pool[i]).collect();
        let Some(cover) = candidate_cover(inst, &base, &extra)? else { return Ok(None) };
        let out = transform(inst, TransformInput { cover: &cover, depot_demands: None })?;
        Ok(Some(Candidate::from_transform(inst, out)))
    })?;
    let mut r = s.into_result(SolverKind::Alg1, inst, "edge sets")?;
    r.claimed_ratio = Some(mdtsp.claimed_ratio() * Rational::from_integer(2) + Rational::from_integer(3));
    r.ratio_note = Some(format!("2 rho + 3 with the {} MD-TSP", mdtsp.name()));
    Ok(r)
}

/// Edges between customers, `(a, b)` with `a < b`, lexicographic.
pub fn customer_edges(inst: &Instance) -> Vec<(usize, usize)> {
    let c: Vec<usize> = inst.customers().collect();
    let mut out = Vec::with_capacity(c.len() * c.len().saturating_sub(1) / 2);
    for (i, &a) in c.iter().enumerate() {
        for &b in &c[i + 1..] {
            out.push((a, b));
        }
    }
    out
}

/// All index subsets of `0..m` of size `0..=max_size`, by size then
/// lexicographically.
pub fn edge_sets(m: usize, max_size: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..=max_size.min(m)).flat_map(move |j| Combinations::new(m, j))
}

/// Number of sets [`edge_sets`] yields.
pub fn edge_set_count(m: usize, max_size: usize) -> u128 {
    (0..=max_size.min(m)).map(|j| binomial(m as u128, j as u128)).sum()
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

struct Combinations {
    m: usize,
    cur: Option<Vec<usize>>,
}

impl Combinations {
    fn new(m: usize, j: usize) -> Self {
        Combinations { m, cur: (j <= m).then(|| (0..j).collect()) }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.cur.take()?;
        let j = cur.len();
        let mut next = cur.clone();
        // Advance the rightmost index that still has room.
        if let Some(i) = (0..j).rev().find(|&i| next[i] < self.m - j + i) {
            next[i] += 1;
            for l in i + 1..j {
                next[l] = next[l - 1] + 1;
            }
            self.cur = Some(next);
        }
        Some(cur)
    }
}

/// The cycle cover built from `base` plus `extra`, or `None` when the
/// candidate is filtered out (an extra edge already in the cover, or the
/// components need more than `m` vehicles).
pub fn candidate_cover(
    inst: &Instance,
    base: &ComponentSet,
    extra: &[(usize, usize)],
) -> Result<Option<ComponentSet>> {
    let size = inst.num_vertices();
    let base_edges: Vec<(usize, usize)> =
        base.components.iter().flat_map(|c| c.edges.iter().copied()).collect();
    let present: BTreeSet<(usize, usize)> = base_edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    if extra.iter().any(|e| present.contains(e)) {
        return Ok(None);
    }
    let mut edges = base_edges;
    edges.extend_from_slice(extra);
    let demand: Vec<u64> = (0..size).map(|v| inst.demand(v)).collect();
    let ell: u64 = connected_components(size, &edges, |_| true)
        .iter()
        .map(|comp| lower_ell(comp, &demand, inst.capacity()))
        .sum();
    if ell > inst.total_fleet() {
        return Ok(None);
    }
    let mut degree = vec![0usize; size];
    for &(a, b) in &edges {
        degree[a] += 1;
        degree[b] += 1;
    }
    let odd: Vec<usize> = (0..size).filter(|&v| degree[v] % 2 == 1).collect();
    let matching = min_cost_perfect_matching(&odd, |a, b| inst.cost(a, b))?;
    edges.extend(matching.pairs);
    eulerian_components_to_cycles(size, &edges).map(Some)
}
