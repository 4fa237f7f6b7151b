//! Bi-factor `(5, 1 + eps)` algorithm: scale demands to units of
//! `delta = eps' Q / n`, run [`alg3`](super::alg3) on the scaled instance
//! (whose capacity `n ceil(1 + 1/eps')` is independent of `Q`), then map the
//! unit deliveries back to an exact integral assignment.
//!
//! `eps'` is half the integral slack actually available: tour loads must be
//! integers, so the usable bound is `F = floor((1 + eps) Q)` and
//! `eps' = (F - Q) / (2Q)`, which equals `eps / 2` whenever `eps Q` is an
//! integer. A scaled tour then carries at most `(1 + 2 eps') Q = F`. When no
//! slack exists (`F = Q`) the scaled detour buys nothing and alg3 runs on the
//! original instance.

use std::collections::BTreeMap;

use super::{alg3, Certificate, SolverKind, SolverResult};
use crate::error::{Error, Result};
use crate::graphprims::{min_cost_max_flow, Capacity, FlowNetwork};
use crate::instance::{Instance, Solution, Tour};
use crate::rational::{ceil, floor, Rational};

/// Scaling used for a given instance and user `eps`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scaling {
    /// Internal accuracy `eps'`.
    pub eps_inner: Rational,
    /// Demand unit `eps' Q / n`.
    pub unit: Rational,
    pub demands: Vec<u64>,
    pub capacity: u64,
    /// Integral load bound `floor((1 + eps) Q)` of the final tours.
    pub load_bound: u64,
}

/// The scaled demands and capacity, or `None` when `eps Q < 1` leaves no
/// integral slack.
pub fn scaling(inst: &Instance, eps: &Rational) -> Option<Scaling> {
    let q = Rational::from_integer(inst.capacity() as i128);
    let n = Rational::from_integer(inst.n() as i128);
    let load_bound = floor(&((Rational::from_integer(1) + eps) * q)) as u64;
    if load_bound == inst.capacity() || inst.n() == 0 {
        return None;
    }
    let eps_inner =
        Rational::new((load_bound - inst.capacity()) as i128, 2 * inst.capacity() as i128);
    let unit = eps_inner * q / n;
    let demands =
        inst.customers().map(|v| ceil(&(Rational::from_integer(inst.demand(v) as i128) / unit)) as u64).collect();
    let capacity = inst.n() as u64 * ceil(&(Rational::from_integer(1) + eps_inner.recip())) as u64;
    Some(Scaling { eps_inner, unit, demands, capacity, load_bound })
}

pub fn alg5(inst: &Instance, eps: &Rational, max_iters: Option<u64>) -> Result<SolverResult> {
    if *eps <= Rational::from_integer(0) {
        return Err(Error::InvalidInstance("eps must be positive".into()));
    }
    let gamma = Rational::from_integer(1) + eps;
    let Some(sc) = scaling(inst, eps) else {
        let mut r = alg3::alg3(inst, max_iters)?;
        r.solver = SolverKind::Alg5;
        r.gamma = gamma;
        r.ratio_note = Some("eps Q < 1 leaves no integral slack; solved at capacity Q".into());
        return Ok(r);
    };
    let scaled = inst.with_demands(sc.demands.clone(), sc.capacity)?;
    let inner = alg3::alg3(&scaled, max_iters)?;
    let (solution, exact) = integralize(inst, &inner.solution, &sc)?;

    let mut r = SolverResult::new(SolverKind::Alg5, inst, solution);
    r.gamma = gamma;
    r.claimed_ratio = Some(Rational::from_integer(5));
    r.iterations_run = inner.iterations_run;
    r.iterations_enumerated = inner.iterations_enumerated;
    r.guarantee_void = inner.guarantee_void;
    r.transform_stats = inner.transform_stats;
    r.cover_stats = inner.cover_stats;
    r.certificates = inner.certificates;
    r.certificates.push(Certificate {
        name: "rounding",
        holds: exact,
        detail: format!(
            "integral assignment within loads {} (unit {}, scaled Q {})",
            sc.load_bound, sc.unit, sc.capacity
        ),
    });
    Ok(r)
}

/// Maps a scaled solution back: tour `T` may serve customer `v` only if it
/// delivered scaled units there, and carries at most `F` in total. Scaled
/// loads are at most `F / delta` units, so the fractional rescaled-and-trimmed
/// assignment is feasible for this transportation problem and an integral
/// max-flow serves every customer exactly. Customers left without delivery
/// are shortcut out and empty tours dropped; both only lower the cost.
fn integralize(inst: &Instance, scaled: &Solution, sc: &Scaling) -> Result<(Solution, bool)> {
    let n = inst.n();
    let k = inst.k();
    let t = scaled.tours.len();
    let (s, sink) = (0, 1 + n + t);
    let mut net = FlowNetwork::new(n + t + 2, s, sink);
    for v in inst.customers() {
        net.add_arc(s, 1 + v - k, Capacity::Finite(inst.demand(v)), 0);
    }
    let mut arcs = Vec::new();
    for (i, tour) in scaled.tours.iter().enumerate() {
        for (&v, &a) in &tour.lambda {
            if a > 0 {
                arcs.push((i, v, net.add_arc(1 + v - k, 1 + n + i, Capacity::Unbounded, 0)));
            }
        }
        net.add_arc(1 + n + i, sink, Capacity::Finite(sc.load_bound), 0);
    }
    let flow = min_cost_max_flow(&net);
    let exact = flow.value == inst.total_demand();
    if !exact {
        return Err(Error::contract(format!(
            "rounding served {} of {} demand",
            flow.value,
            inst.total_demand()
        )));
    }
    let mut lambdas: Vec<BTreeMap<usize, u64>> = vec![BTreeMap::new(); t];
    for (i, v, arc) in arcs {
        if flow.flow[arc] > 0 {
            *lambdas[i].entry(v).or_insert(0) += flow.flow[arc];
        }
    }
    let mut used = vec![0usize; k];
    let mut tours = Vec::new();
    for (tour, lambda) in scaled.tours.iter().zip(lambdas) {
        if lambda.is_empty() {
            continue;
        }
        let seq: Vec<usize> =
            tour.seq.iter().copied().filter(|&v| inst.is_depot(v) || lambda.contains_key(&v)).collect();
        let vehicle = inst.vehicle_offset(tour.depot) + used[tour.depot];
        used[tour.depot] += 1;
        tours.push(Tour { vehicle, depot: tour.depot, seq, lambda });
    }
    Ok((Solution { tours }, exact))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaling_arithmetic() {
        let inst = Instance::from_matrix(100, vec![1], vec![30, 25, 10, 100], vec![0; 25], None).unwrap();
        let sc = scaling(&inst, &Rational::from_integer(1)).unwrap();
        assert_eq!(sc.eps_inner, Rational::new(1, 2));
        assert_eq!(sc.unit, Rational::new(25, 2));
        assert_eq!(sc.demands, vec![3, 2, 1, 8]);
        assert_eq!(sc.capacity, 12);
        assert_eq!(sc.load_bound, 200);
    }

    #[test]
    fn no_slack_when_eps_q_below_one() {
        let inst = Instance::from_matrix(3, vec![1], vec![1], vec![0; 4], None).unwrap();
        assert!(scaling(&inst, &Rational::new(1, 4)).is_none());
    }
}
