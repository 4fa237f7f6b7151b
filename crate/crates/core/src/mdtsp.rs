//! Multiple-depot TSP: cover all vertices with exactly one cycle per depot.
//!
//! Solvers are pluggable; [`Forest2`] doubles the depot spanning forest
//! (ratio 2) and [`ExactMdTsp`] enumerates for small instances.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graphprims::{depot_spanning_forest, tree_preorder, ComponentSet};
use crate::instance::{Cost, Instance};
use crate::rational::Rational;

pub trait MdTspSolver: Send + Sync {
    fn name(&self) -> &'static str;

    /// Approximation ratio the solver guarantees.
    fn claimed_ratio(&self) -> Rational;

    /// `k` cycles, the `u`-th starting at depot `u`, covering every customer once.
    fn solve(&self, inst: &Instance) -> Result<ComponentSet>;
}

/// Doubled depot spanning forest, shortcut per tree.
#[derive(Clone, Copy, Debug, Default)]
pub struct Forest2;

impl MdTspSolver for Forest2 {
    fn name(&self) -> &'static str {
        "forest2"
    }

    fn claimed_ratio(&self) -> Rational {
        Rational::from_integer(2)
    }

    fn solve(&self, inst: &Instance) -> Result<ComponentSet> {
        Ok(solve_mdtsp(inst))
    }
}

/// Held-Karp per depot combined over customer subsets.
#[derive(Clone, Copy, Debug)]
pub struct ExactMdTsp {
    pub limit: usize,
}

impl Default for ExactMdTsp {
    fn default() -> Self {
        ExactMdTsp { limit: DEFAULT_EXACT_LIMIT }
    }
}

impl MdTspSolver for ExactMdTsp {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn claimed_ratio(&self) -> Rational {
        Rational::from_integer(1)
    }

    fn solve(&self, inst: &Instance) -> Result<ComponentSet> {
        solve_mdtsp_exact(inst, self.limit)
    }
}

/// Largest vertex count the exact solver accepts by default.
pub const DEFAULT_EXACT_LIMIT: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MdTspChoice {
    Forest2,
    Exact,
}

impl MdTspChoice {
    pub fn solver(self) -> Box<dyn MdTspSolver> {
        match self {
            MdTspChoice::Forest2 => Box::new(Forest2),
            MdTspChoice::Exact => Box::new(ExactMdTsp::default()),
        }
    }
}

impl FromStr for MdTspChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "forest2" => Ok(MdTspChoice::Forest2),
            "exact" => Ok(MdTspChoice::Exact),
            other => Err(format!("unknown MD-TSP solver `{other}` (expected forest2 or exact)")),
        }
    }
}

/// The forest-doubling 2-approximation.
pub fn solve_mdtsp(inst: &Instance) -> ComponentSet {
    let forest = depot_spanning_forest(inst);
    let cycles = inst
        .depots()
        .map(|u| tree_preorder(inst.num_vertices(), &forest.edges, u))
        .collect();
    ComponentSet::from_cycles(cycles)
}

/// Exact minimum-cost depot cycle cover, refusing instances above `limit`
/// vertices.
pub fn solve_mdtsp_exact(inst: &Instance, limit: usize) -> Result<ComponentSet> {
    let size = inst.num_vertices();
    if size > limit {
        return Err(Error::OracleLimit(format!(
            "exact MD-TSP limited to {limit} vertices, instance has {size}"
        )));
    }
    let k = inst.k();
    let n = inst.n();
    let full = (1usize << n) - 1;
    let tours: Vec<Vec<(Cost, Vec<usize>)>> = inst.depots().map(|u| held_karp(inst, u)).collect();

    // best[i][S]: cheapest way for depots 0..=i to cover customer subset S.
    let mut best = vec![vec![Cost::MAX; full + 1]; k];
    let mut pick = vec![vec![0usize; full + 1]; k];
    for s in 0..=full {
        best[0][s] = tours[0][s].0;
        pick[0][s] = s;
    }
    for i in 1..k {
        for s in 0..=full {
            // Enumerate subsets t of s served by depot i.
            let mut t = s;
            loop {
                let rest = best[i - 1][s & !t];
                if rest != Cost::MAX {
                    let c = rest + tours[i][t].0;
                    if c < best[i][s] {
                        best[i][s] = c;
                        pick[i][s] = t;
                    }
                }
                if t == 0 {
                    break;
                }
                t = (t - 1) & s;
            }
        }
    }
    let mut cycles = vec![Vec::new(); k];
    let mut s = full;
    for i in (0..k).rev() {
        let t = pick[i][s];
        cycles[i] = tours[i][t].1.clone();
        s &= !t;
    }
    Ok(ComponentSet::from_cycles(cycles))
}

/// For every customer subset, the cheapest cycle from depot `u` through it,
/// with its vertex order (depot first).
pub(crate) fn held_karp(inst: &Instance, u: usize) -> Vec<(Cost, Vec<usize>)> {
    let k = inst.k();
    let n = inst.n();
    let states = 1usize << n;
    let mut dp = vec![Cost::MAX; states * n.max(1)];
    let mut from = vec![usize::MAX; states * n.max(1)];
    for j in 0..n {
        dp[(1 << j) * n + j] = inst.cost(u, k + j);
    }
    for s in 1..states {
        for j in 0..n {
            let cur = dp[s * n + j];
            if s & (1 << j) == 0 || cur == Cost::MAX {
                continue;
            }
            for l in 0..n {
                if s & (1 << l) != 0 {
                    continue;
                }
                let next = s | (1 << l);
                let c = cur + inst.cost(k + j, k + l);
                if c < dp[next * n + l] {
                    dp[next * n + l] = c;
                    from[next * n + l] = j;
                }
            }
        }
    }
    let mut out = Vec::with_capacity(states);
    out.push((0, vec![u]));
    for s in 1..states {
        let mut best = (Cost::MAX, 0);
        for j in 0..n {
            if s & (1 << j) != 0 && dp[s * n + j] != Cost::MAX {
                let c = dp[s * n + j] + inst.cost(k + j, u);
                if c < best.0 {
                    best = (c, j);
                }
            }
        }
        let mut order = Vec::new();
        let (mut set, mut j) = (s, best.1);
        while set != 0 {
            order.push(k + j);
            let prev = from[set * n + j];
            set &= !(1 << j);
            j = prev;
        }
        order.push(u);
        order.reverse();
        out.push((best.0, order));
    }
    out
}
