//! Single-depot split delivery VRP: Christofides tour, then the best-start
//! cycle split with capacity `Q`.

use super::{Certificate, SolverKind, SolverResult};
use crate::error::{Error, Result};
use crate::graphprims::{eulerian_tour, min_cost_perfect_matching, minimum_spanning_tree, shortcut};
use crate::instance::{Cost, Instance, Solution, Tour};
use crate::partition::{split_bound_sides, split_depot_cycle};
use crate::rational::Rational;

/// Christofides' tour over all vertices, starting at vertex 0.
pub fn christofides(inst: &Instance) -> Result<Vec<usize>> {
    let all: Vec<usize> = (0..inst.num_vertices()).collect();
    let mut edges = minimum_spanning_tree(inst, &all);
    if edges.is_empty() {
        return Ok(all);
    }
    let mut degree = vec![0usize; all.len()];
    for &(a, b) in &edges {
        degree[a] += 1;
        degree[b] += 1;
    }
    let odd: Vec<usize> = all.iter().copied().filter(|&v| degree[v] % 2 == 1).collect();
    edges.extend(min_cost_perfect_matching(&odd, |a, b| inst.cost(a, b))?.pairs);
    Ok(shortcut(&eulerian_tour(&edges, Some(0))?, |_| true))
}

pub fn sdvrp(inst: &Instance) -> Result<SolverResult> {
    if inst.k() != 1 {
        return Err(Error::WrongSolver {
            solver: "sdvrp".into(),
            reason: format!("needs exactly one depot, instance has {}", inst.k()),
        });
    }
    if inst.n() == 0 {
        return Ok(super::empty_result(SolverKind::Sdvrp, inst));
    }
    let tour = christofides(inst)?;
    let cycle: Vec<usize> = tour[1..].to_vec();
    let lambda: Vec<u64> = cycle.iter().map(|&v| inst.demand(v)).collect();
    let parts = split_depot_cycle(inst, 0, &cycle, &lambda, inst.capacity())?;
    let (lhs, rhs) = split_bound_sides(inst, 0, &cycle, &lambda, inst.capacity(), &parts);
    if parts.len() as u64 > inst.fleet(0) {
        return Err(Error::contract(format!(
            "{} tours needed but the depot has {} vehicles",
            parts.len(),
            inst.fleet(0)
        )));
    }
    let tours = parts
        .into_iter()
        .enumerate()
        .map(|(i, t)| Tour { vehicle: i, depot: 0, seq: t.seq, lambda: t.lambda })
        .collect();
    let mut r = SolverResult::new(SolverKind::Sdvrp, inst, Solution { tours });
    r.claimed_ratio = Some(Rational::new(5, 2));
    r.ratio_note = Some("alpha + 1 with Christofides (alpha = 3/2)".into());
    let tour_cost: Cost = inst.cycle_cost(&tour);
    r.certificates.push(Certificate {
        name: "cycle-split-bound",
        holds: lhs <= rhs,
        detail: format!("cost x Q = {lhs} <= (c(C) = {tour_cost}) x Q + radial = {rhs}"),
    });
    Ok(r)
}
