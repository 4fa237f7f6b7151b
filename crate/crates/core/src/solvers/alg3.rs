//! Capacity-parameterized algorithm: guess each depot's dummy demand
//! `q_u in [0, Q)`, build a divisible cycle cover and transform it.

use std::collections::BTreeMap;

use super::{scan, Candidate, CoverStats, SolverKind, SolverResult};
use crate::error::Result;
use crate::graphprims::{modq_cycle_cover, ComponentSet};
use crate::instance::{Instance, Solution, Tour};
use crate::rational::Rational;
use crate::transform::{transform, TransformInput, TransformOutput};

pub fn alg3(inst: &Instance, max_iters: Option<u64>) -> Result<SolverResult> {
    if inst.n() == 0 {
        return Ok(super::empty_result(SolverKind::Alg3, inst));
    }
    let s = scan(depot_demand_guesses(inst), max_iters, |dd| {
        let it = iteration(inst, dd)?;
        let mut c = Candidate::from_transform(inst, it.output);
        c.solution = it.solution;
        c.cost = c.solution.cost(inst);
        c.covers = it.cover_stats;
        Ok(Some(c))
    })?;
    let mut r = s.into_result(SolverKind::Alg3, inst, "depot demand vectors")?;
    r.claimed_ratio = Some(Rational::from_integer(5));
    let cs = r.cover_stats;
    r.certificates.push(super::Certificate {
        name: "modq-divisibility",
        holds: cs.violations == 0,
        detail: format!("{} covers, {} cycles, {} not divisible by Q", cs.covers, cs.cycles, cs.violations),
    });
    Ok(r)
}

/// Every dummy-demand vector considered: free values for depots `0..k-1`
/// in lexicographic order, the last depot completing the total to a
/// multiple of `Q`, and the total never exceeding `mQ`.
pub fn depot_demand_guesses(inst: &Instance) -> impl Iterator<Item = Vec<u64>> {
    let q = inst.capacity();
    let k = inst.k();
    let p = inst.total_demand();
    let budget = (inst.total_fleet() * q).saturating_sub(p);
    let feasible = p <= inst.total_fleet() * q;
    let mut cur: Option<Vec<u64>> = feasible.then(|| vec![0; k.saturating_sub(1)]);
    std::iter::from_fn(move || loop {
        let free = cur.take()?;
        // Next free vector in lexicographic order under the budget.
        let mut next = free.clone();
        let mut advanced = false;
        for i in (0..next.len()).rev() {
            next[i] += 1;
            let partial: u64 = next[..=i].iter().sum();
            if next[i] < q && partial <= budget {
                for x in &mut next[i + 1..] {
                    *x = 0;
                }
                advanced = true;
                break;
            }
            next[i] = 0;
        }
        if advanced {
            cur = Some(next);
        }
        let partial: u64 = free.iter().sum();
        let last = (q - (p + partial) % q) % q;
        if partial + last <= budget {
            let mut dd = free;
            dd.push(last);
            return Some(dd);
        }
    })
}

/// One guess worked through.
pub struct Alg3Iteration {
    pub cover: ComponentSet,
    /// Raw transform output, depots still carrying dummy demand.
    pub output: TransformOutput,
    /// Final tours with depots shortcut out.
    pub solution: Solution,
    pub cover_stats: CoverStats,
}

pub fn iteration(inst: &Instance, depot_demands: &[u64]) -> Result<Alg3Iteration> {
    let cover = modq_cycle_cover(inst, depot_demands)?;
    let q = inst.capacity();
    let mut cover_stats = CoverStats { covers: 1, ..CoverStats::default() };
    for c in &cover.components {
        let d: u64 = c
            .vertices
            .iter()
            .map(|&v| if inst.is_depot(v) { depot_demands[v] } else { inst.demand(v) })
            .sum();
        cover_stats.cycles += 1;
        cover_stats.violations += u64::from(!d.is_multiple_of(q));
    }
    let output = transform(inst, TransformInput { cover: &cover, depot_demands: Some(depot_demands) })?;
    let solution = strip_depots(inst, &output.solution);
    Ok(Alg3Iteration { cover, output, solution, cover_stats })
}

/// Removes depots from tour interiors and dummy deliveries, drops tours that
/// serve nobody and renumbers vehicles densely per depot.
pub fn strip_depots(inst: &Instance, sol: &Solution) -> Solution {
    let mut used = vec![0usize; inst.k()];
    let mut tours = Vec::with_capacity(sol.tours.len());
    for t in &sol.tours {
        let lambda: BTreeMap<usize, u64> =
            t.lambda.iter().filter(|(&v, _)| inst.is_customer(v)).map(|(&v, &a)| (v, a)).collect();
        if lambda.is_empty() {
            continue;
        }
        let mut seq = vec![t.depot];
        seq.extend(t.seq.iter().copied().filter(|&v| inst.is_customer(v)));
        seq.push(t.depot);
        let vehicle = inst.vehicle_offset(t.depot) + used[t.depot];
        used[t.depot] += 1;
        tours.push(Tour { vehicle, depot: t.depot, seq, lambda });
    }
    Solution { tours }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_depot_forces_its_guess() {
        let inst = Instance::from_matrix(10, vec![3], vec![4, 9], vec![0; 9], None).unwrap();
        let all: Vec<Vec<u64>> = depot_demand_guesses(&inst).collect();
        assert_eq!(all, vec![vec![7]]);
    }

    #[test]
    fn tight_fleet_leaves_one_guess() {
        let inst = Instance::from_matrix(5, vec![1, 1, 1], vec![5, 5, 5], vec![0; 36], None).unwrap();
        let all: Vec<Vec<u64>> = depot_demand_guesses(&inst).collect();
        assert_eq!(all, vec![vec![0, 0, 0]]);
    }

    #[test]
    fn guesses_respect_budget() {
        // P = 3, mQ = 8: budget 5, totals must be = 1 mod 4 (P + sum = 0 mod 4).
        let inst = Instance::from_matrix(4, vec![1, 1], vec![3], vec![0; 9], None).unwrap();
        let all: Vec<Vec<u64>> = depot_demand_guesses(&inst).collect();
        assert_eq!(all, vec![vec![0, 1], vec![1, 0], vec![2, 3], vec![3, 2]]);
    }
}
