//! FPT algorithm: enumerate partitions of the MD-TSP cycles and join each
//! block by a minimum-cost Eulerian extension.
//!
//! The extension of a block is computed exactly. Any optimal extension can
//! be shortcut (triangle inequality) into a tree-like family of closed
//! connectors, each touching every cycle it joins at exactly one vertex, where
//! two connectors share at most one cycle. So the cheapest extension for a
//! set `S` of cycles is either one connector through all of `S`, or two
//! cheapest extensions of subsets meeting in a single cycle. Connectors are
//! generalized TSP tours (one vertex per cycle); on two cycles a connector is
//! a doubled edge. Such a family uses at most `2(|S| - 1)` edges, none of
//! them inside a cycle.

use super::{eulerian_components_to_cycles, scan, Candidate, SolverKind, SolverResult};
use crate::error::Result;
use crate::graphprims::{cycle_edges, ComponentSet};
use crate::instance::{Cost, Instance};
use crate::mdtsp::MdTspSolver;
use crate::rational::Rational;
use crate::transform::{transform, TransformInput};

pub fn alg2(inst: &Instance, mdtsp: &dyn MdTspSolver, max_iters: Option<u64>) -> Result<SolverResult> {
    if inst.n() == 0 {
        return Ok(super::empty_result(SolverKind::Alg2, inst));
    }
    let base = mdtsp.solve(inst)?;
    let cycles: Vec<Vec<usize>> = base.cycles();
    let ext = Extension::new(inst, &cycles);
    let demand: Vec<u64> = cycles
        .iter()
        .map(|c| c.iter().map(|&v| inst.demand(v)).sum())
        .collect();
    let s = scan(set_partitions(cycles.len()), max_iters, |blocks| {
        let ell: u64 = blocks
            .iter()
            .map(|b| b.iter().map(|&i| demand[i]).sum::<u64>().div_ceil(inst.capacity()))
            .sum();
        if ell > inst.total_fleet() {
            return Ok(None);
        }
        let cover = block_cover(inst, &base, &ext, blocks)?;
        let out = transform(inst, TransformInput { cover: &cover, depot_demands: None })?;
        Ok(Some(Candidate::from_transform(inst, out)))
    })?;
    let mut r = s.into_result(SolverKind::Alg2, inst, "partitions")?;
    r.claimed_ratio = Some(mdtsp.claimed_ratio() * Rational::from_integer(2) + Rational::from_integer(3));
    r.ratio_note = Some(format!("2 rho + 3 with the {} MD-TSP", mdtsp.name()));
    Ok(r)
}

/// Cycle cover for one partition: each block's cycles plus its extension,
/// shortcut into a single cycle.
pub fn block_cover(inst: &Instance, base: &ComponentSet, ext: &Extension, blocks: &[Vec<usize>]) -> Result<ComponentSet> {
    let mut edges = Vec::new();
    for block in blocks {
        for &i in block {
            edges.extend_from_slice(&base.components[i].edges);
        }
        edges.extend(ext.edges(mask_of(block)));
    }
    eulerian_components_to_cycles(inst.num_vertices(), &edges)
}

fn mask_of(block: &[usize]) -> usize {
    block.iter().fold(0, |m, &i| m | 1 << i)
}

/// All set partitions of `0..k` via restricted growth strings, blocks
/// listed by smallest element.
pub fn set_partitions(k: usize) -> impl Iterator<Item = Vec<Vec<usize>>> {
    let mut rgs: Option<Vec<usize>> = Some(vec![0; k]);
    std::iter::from_fn(move || {
        let cur = rgs.take()?;
        let blocks = cur.iter().max().map_or(0, |&b| b + 1);
        let mut out = vec![Vec::new(); blocks];
        for (i, &b) in cur.iter().enumerate() {
            out[b].push(i);
        }
        // Next string: bump the rightmost position that may grow.
        let mut next = cur;
        for i in (1..k).rev() {
            let limit = next[..i].iter().max().copied().unwrap_or(0) + 1;
            if next[i] < limit {
                next[i] += 1;
                for x in &mut next[i + 1..] {
                    *x = 0;
                }
                rgs = Some(next);
                break;
            }
        }
        Some(out)
    })
}

/// Cheapest Eulerian extensions for every subset of a fixed cycle family.
pub struct Extension {
    /// Connector order (one vertex per cycle) for each subset of size >= 2.
    connector: Vec<Option<(Cost, Vec<usize>)>>,
    /// Best extension cost per subset; singletons cost 0.
    best: Vec<Cost>,
    /// How `best` was reached: `None` for one connector, or the split.
    split: Vec<Option<(usize, usize)>>,
}

impl Extension {
    pub fn new(inst: &Instance, cycles: &[Vec<usize>]) -> Self {
        let k = cycles.len();
        let full = 1usize << k;
        let mut connector = vec![None; full];
        for (mask, slot) in connector.iter_mut().enumerate() {
            if mask.count_ones() >= 2 {
                let groups: Vec<&[usize]> =
                    (0..k).filter(|i| mask >> i & 1 == 1).map(|i| cycles[i].as_slice()).collect();
                *slot = Some(generalized_tour(inst, &groups));
            }
        }
        let mut best = vec![Cost::MAX; full];
        let mut split = vec![None; full];
        // Masks in increasing popcount order guarantee sub-results exist.
        let mut order: Vec<usize> = (1..full).collect();
        order.sort_by_key(|m| (m.count_ones(), *m));
        for mask in order {
            if mask.count_ones() == 1 {
                best[mask] = 0;
                continue;
            }
            best[mask] = connector[mask].as_ref().map_or(Cost::MAX, |c| c.0);
            // Split into a (containing the lowest element) and b sharing one
            // cycle x: a | b == mask, a & b == {x}.
            for x in (0..k).filter(|x| mask >> x & 1 == 1) {
                let rest = mask & !(1 << x);
                let low = rest & rest.wrapping_neg();
                // a' ranges over proper non-empty subsets of rest holding its
                // lowest bit, so each unordered split is seen once.
                let mut sub = (rest - 1) & rest;
                loop {
                    if sub & low != 0 {
                        let a = sub | 1 << x;
                        let b = (rest & !sub) | 1 << x;
                        let c = best[a] + best[b];
                        if c < best[mask] {
                            best[mask] = c;
                            split[mask] = Some((a, b));
                        }
                    }
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & rest;
                }
            }
        }
        Extension { connector, best, split }
    }

    pub fn cost(&self, mask: usize) -> Cost {
        self.best[mask]
    }

    /// Extension edges for the cycles in `mask`.
    pub fn edges(&self, mask: usize) -> Vec<(usize, usize)> {
        if mask.count_ones() < 2 {
            return Vec::new();
        }
        match self.split[mask] {
            Some((a, b)) => {
                let mut e = self.edges(a);
                e.extend(self.edges(b));
                e
            }
            None => cycle_edges(&self.connector[mask].as_ref().expect("connector for |S| >= 2").1),
        }
    }
}

/// Cheapest closed tour taking exactly one vertex from every group.
fn generalized_tour(inst: &Instance, groups: &[&[usize]]) -> (Cost, Vec<usize>) {
    let g = groups.len();
    let rest = g - 1;
    let states = 1usize << rest;
    let mut best: (Cost, Vec<usize>) = (Cost::MAX, Vec::new());
    for &s in groups[0] {
        // dp[mask][(group, index)] over the other groups.
        let mut dp: Vec<Vec<Vec<(Cost, usize)>>> =
            (0..states).map(|_| groups[1..].iter().map(|gr| vec![(Cost::MAX, usize::MAX); gr.len()]).collect()).collect();
        for (j, gr) in groups[1..].iter().enumerate() {
            for (i, &v) in gr.iter().enumerate() {
                dp[1 << j][j][i] = (inst.cost(s, v), usize::MAX);
            }
        }
        for mask in 1..states {
            for j in 0..rest {
                if mask >> j & 1 == 0 {
                    continue;
                }
                for i in 0..groups[1 + j].len() {
                    let (c, _) = dp[mask][j][i];
                    if c == Cost::MAX {
                        continue;
                    }
                    let v = groups[1 + j][i];
                    for l in (0..rest).filter(|l| mask >> l & 1 == 0) {
                        let nm = mask | 1 << l;
                        for (t, &w) in groups[1 + l].iter().enumerate() {
                            let nc = c + inst.cost(v, w);
                            if nc < dp[nm][l][t].0 {
                                dp[nm][l][t] = (nc, j * 1_000_000 + i);
                            }
                        }
                    }
                }
            }
        }
        let last = states - 1;
        for j in 0..rest {
            for i in 0..groups[1 + j].len() {
                let (c, _) = dp[last][j][i];
                if c == Cost::MAX {
                    continue;
                }
                let total = c + inst.cost(groups[1 + j][i], s);
                if total < best.0 {
                    let mut order = Vec::with_capacity(g);
                    let (mut mask, mut jj, mut ii) = (last, j, i);
                    loop {
                        order.push(groups[1 + jj][ii]);
                        let p = dp[mask][jj][ii].1;
                        mask &= !(1 << jj);
                        if p == usize::MAX {
                            break;
                        }
                        jj = p / 1_000_000;
                        ii = p % 1_000_000;
                    }
                    order.push(s);
                    order.reverse();
                    best = (total, order);
                }
            }
        }
    }
    best
}
