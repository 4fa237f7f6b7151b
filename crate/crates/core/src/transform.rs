//! Turns a cycle cover into tours: peel and extract capacity-`Q` paths on
//! every cycle, assign paths to depot vehicles by min-cost max-flow, then
//! route each path from its depot by doubling it together with the cheapest
//! depot connection.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graphprims::{lower_ell, min_cost_max_flow, Capacity, ComponentSet, FlowNetwork};
use crate::instance::{Cost, Instance, Solution, Tour};
use crate::partition::{extract_paths, peel_trivial, ExtractedPath};

/// A cover plus, optionally, dummy demands placed on the depots.
#[derive(Clone, Copy, Debug)]
pub struct TransformInput<'a> {
    pub cover: &'a ComponentSet,
    pub depot_demands: Option<&'a [u64]>,
}

/// Quantities checked on every invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformCertificate {
    pub cover_cost: Cost,
    /// Optimal cost of the path-to-depot assignment network.
    pub flow_opt: i128,
    pub solution_cost: Cost,
    /// `l(C)` of the cover under the effective demands.
    pub ell: u64,
    pub vehicles_used: u64,
    pub per_depot: Vec<u64>,
    /// `solution_cost <= 2 cover_cost + 2 flow_opt`.
    pub bound_ok: bool,
    /// `vehicles_used == ell`.
    pub vehicles_ok: bool,
    /// `per_depot[u] <= r_u` for every depot.
    pub fleet_ok: bool,
    /// Number of extracted paths (trivial ones included).
    pub paths: usize,
}

impl TransformCertificate {
    pub fn holds(&self) -> bool {
        self.bound_ok && self.vehicles_ok && self.fleet_ok
    }
}

#[derive(Clone, Debug)]
pub struct TransformOutput {
    /// Tours bound to vehicles. With depot dummy demands the tours may pass
    /// through depots and credit them; callers strip those.
    pub solution: Solution,
    pub certificate: TransformCertificate,
}

/// Effective per-vertex demand: customers keep `q_v`, depots get their dummy.
pub fn effective_demands(inst: &Instance, depot_demands: Option<&[u64]>) -> Vec<u64> {
    (0..inst.num_vertices())
        .map(|v| match (inst.is_depot(v), depot_demands) {
            (true, Some(d)) => d[v],
            (true, None) => 0,
            (false, _) => inst.demand(v),
        })
        .collect()
}

pub fn transform(inst: &Instance, input: TransformInput<'_>) -> Result<TransformOutput> {
    let q = inst.capacity();
    let k = inst.k();
    if let Some(d) = input.depot_demands {
        if d.len() != k {
            return Err(Error::contract("depot demand vector has the wrong length"));
        }
    }
    let demand = effective_demands(inst, input.depot_demands);
    let ell: u64 = input
        .cover
        .components
        .iter()
        .map(|c| lower_ell(&c.vertices, &demand, q))
        .sum();
    let m = inst.total_fleet();
    if ell > m {
        return Err(Error::contract(format!("cover needs {ell} vehicles but only {m} exist")));
    }

    // Paths per cycle, depots without demand shortcut away.
    let mut paths: Vec<ExtractedPath> = Vec::new();
    for comp in &input.cover.components {
        let kept: Vec<usize> = comp.vertices.iter().copied().filter(|&v| demand[v] > 0).collect();
        let d: Vec<u64> = kept.iter().map(|&v| demand[v]).collect();
        let (trivial, residual) = peel_trivial(&kept, &d, q);
        paths.extend(trivial);
        paths.extend(extract_paths(&kept, &residual, q)?);
    }

    let p = paths.len();
    let (s, t) = (0, p + k + 1);
    let mut net = FlowNetwork::new(p + k + 2, s, t);
    let mut assign_arcs = vec![Vec::with_capacity(k); p];
    for (i, path) in paths.iter().enumerate() {
        net.add_arc(s, 1 + i, Capacity::Finite(path.load), 0);
        for u in 0..k {
            let c = path.seq.iter().map(|&v| inst.cost(v, u)).min().unwrap_or(0);
            assign_arcs[i].push(net.add_arc(1 + i, 1 + p + u, Capacity::Unbounded, c));
        }
    }
    for u in 0..k {
        net.add_arc(1 + p + u, t, Capacity::Finite(inst.fleet(u)), 0);
    }
    let flow = min_cost_max_flow(&net);
    if flow.value != ell {
        return Err(Error::contract(format!(
            "vehicle assignment routed {} of {ell} paths",
            flow.value
        )));
    }

    let mut per_depot = vec![0u64; k];
    let mut tours = Vec::with_capacity(ell as usize);
    for (i, path) in paths.iter().enumerate() {
        for u in 0..k {
            let units = flow.flow[assign_arcs[i][u]];
            for _ in 0..units {
                let vehicle = inst.vehicle_offset(u) + per_depot[u] as usize;
                per_depot[u] += 1;
                tours.push(route_path(inst, u, vehicle, path));
            }
        }
    }

    let solution = Solution { tours };
    let cover_cost = input.cover.cost(inst);
    let solution_cost = solution.cost(inst);
    let vehicles_used: u64 = per_depot.iter().sum();
    let bound_ok = i128::from(solution_cost) <= 2 * i128::from(cover_cost) + 2 * flow.cost;
    let certificate = TransformCertificate {
        cover_cost,
        flow_opt: flow.cost,
        solution_cost,
        ell,
        vehicles_used,
        fleet_ok: (0..k).all(|u| per_depot[u] <= inst.fleet(u)),
        per_depot,
        bound_ok,
        vehicles_ok: vehicles_used == ell,
        paths: p,
    };
    Ok(TransformOutput { solution, certificate })
}

/// Tour for one vehicle of depot `u` serving `path`.
///
/// Trivial paths give `u v u` carrying `Q`. Otherwise the path is entered
/// at its vertex closest to `u`; doubling the path plus that connection and
/// shortcutting yields `u p_j p_j+1 .. p_l p_j-1 .. p_0 u`.
fn route_path(inst: &Instance, u: usize, vehicle: usize, path: &ExtractedPath) -> Tour {
    if path.is_trivial() {
        let v = path.seq[0];
        return Tour {
            vehicle,
            depot: u,
            seq: vec![u, v, u],
            lambda: BTreeMap::from([(v, path.assignment[0] / path.load)]),
        };
    }
    let entry = (0..path.seq.len())
        .min_by_key(|&i| (inst.cost(path.seq[i], u), i))
        .unwrap_or(0);
    let mut seq = Vec::with_capacity(path.seq.len() + 2);
    seq.push(u);
    seq.extend_from_slice(&path.seq[entry..]);
    seq.extend(path.seq[..entry].iter().rev());
    seq.push(u);
    let lambda = path.seq.iter().copied().zip(path.assignment.iter().copied()).collect();
    Tour { vehicle, depot: u, seq, lambda }
}

/// `(c(cover), flowOPT, c(sol) <= 2 c(cover) + 2 flowOPT)` for a solution
/// produced by [`transform`] on `input`.
pub fn transform_cost_certificate(
    inst: &Instance,
    input: TransformInput<'_>,
    sol: &Solution,
) -> Result<(Cost, i128, bool)> {
    let out = transform(inst, input)?;
    let cover_cost = out.certificate.cover_cost;
    let flow_opt = out.certificate.flow_opt;
    let ok = i128::from(sol.cost(inst)) <= 2 * i128::from(cover_cost) + 2 * flow_opt;
    Ok((cover_cost, flow_opt, ok))
}
