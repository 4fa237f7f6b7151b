//! Exact optimum for tiny instances, classical lower bounds, and ratio
//! audits against the optimum.
//!
//! The exact solver enumerates multisets of up to `m` customer subsets, one
//! per active vehicle. A multiset is feasible when a max-flow can route all
//! demand into tours of capacity `Q` touching only their own subset; its cost
//! is the cheapest depot assignment of the subsets (a min-cost flow with
//! depot fleets as capacities) under per-depot Held-Karp tour costs. Tours
//! visiting a customer without serving it are dominated by shortcutting, so
//! this covers every optimal solution.

use std::collections::BTreeMap;
use std::env;

use crate::error::{Error, Result};
use crate::graphprims::{min_cost_max_flow, Capacity, FlowNetwork, UnionFind};
use crate::instance::{check_solution, Cost, Instance, Solution, Tour};
use crate::mdtsp::{held_karp, solve_mdtsp_exact};
use crate::rational::Rational;
use crate::solvers::{alg1, alg3, SolverResult};
use crate::transform::{transform, TransformInput};

/// Size caps for [`solve_exact`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_customers: usize,
    pub max_capacity: u64,
    pub max_vehicles: u64,
    /// Largest allowed demand as a multiple of `Q`.
    pub max_demand_factor: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { max_customers: 5, max_capacity: 6, max_vehicles: 4, max_demand_factor: 2 }
    }
}

/// Environment variable overriding the default limits, e.g. `n=6,Q=8,m=4,qf=2`.
pub const ORACLE_LIMITS_ENV: &str = "MDSDVRP_ORACLE_LIMITS";

impl OracleLimits {
    /// Parses `key=value` pairs separated by commas; keys `n`, `Q`, `m`,
    /// `qf`. Unmentioned keys keep their defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lim = OracleLimits::default();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidInstance(format!("oracle limit `{part}` is not key=value")))?;
            let value: u64 = value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInstance(format!("oracle limit `{part}` has a non-integer value")))?;
            match key.trim() {
                "n" => lim.max_customers = value as usize,
                "Q" => lim.max_capacity = value,
                "m" => lim.max_vehicles = value,
                "qf" => lim.max_demand_factor = value,
                other => return Err(Error::InvalidInstance(format!("unknown oracle limit `{other}`"))),
            }
        }
        Ok(lim)
    }

    /// Defaults, overridden by [`ORACLE_LIMITS_ENV`] when set.
    pub fn from_env() -> Result<Self> {
        match env::var(ORACLE_LIMITS_ENV) {
            Ok(text) => Self::parse(&text),
            Err(_) => Ok(Self::default()),
        }
    }

    /// Why `inst` is out of reach, if it is.
    pub fn refusal(&self, inst: &Instance) -> Option<String> {
        let max_q = inst.demands().iter().copied().max().unwrap_or(0);
        if inst.n() > self.max_customers {
            Some(format!("n = {} exceeds {}", inst.n(), self.max_customers))
        } else if inst.capacity() > self.max_capacity {
            Some(format!("Q = {} exceeds {}", inst.capacity(), self.max_capacity))
        } else if inst.total_fleet() > self.max_vehicles {
            Some(format!("m = {} exceeds {}", inst.total_fleet(), self.max_vehicles))
        } else if max_q > self.max_demand_factor * inst.capacity() {
            Some(format!("demand {max_q} exceeds {} Q", self.max_demand_factor))
        } else {
            None
        }
    }

    pub fn admits(&self, inst: &Instance) -> bool {
        self.refusal(inst).is_none()
    }
}

#[derive(Clone, Debug)]
pub struct OracleResult {
    pub opt_cost: Cost,
    pub witness: Solution,
    /// Subset multisets examined.
    pub explored: u64,
}

/// Optimal solution by exhaustive enumeration.
pub fn solve_exact(inst: &Instance, limits: &OracleLimits) -> Result<OracleResult> {
    if let Some(why) = limits.refusal(inst) {
        return Err(Error::OracleLimit(why));
    }
    let n = inst.n();
    if n == 0 {
        return Ok(OracleResult { opt_cost: 0, witness: Solution::default(), explored: 1 });
    }
    let k = inst.k();
    let tsp: Vec<Vec<(Cost, Vec<usize>)>> = inst.depots().map(|u| held_karp(inst, u)).collect();
    let subsets: Vec<usize> = (1..1usize << n).collect();
    let cheapest: Vec<Cost> = subsets.iter().map(|&s| (0..k).map(|u| tsp[u][s].0).min().unwrap()).collect();
    let m = inst.total_fleet() as usize;
    let q = inst.capacity();
    let total = inst.total_demand();

    let mut search = Search {
        inst,
        tsp: &tsp,
        subsets: &subsets,
        cheapest: &cheapest,
        best: None,
        explored: 0,
        chosen: Vec::new(),
    };
    for size in (total.div_ceil(q) as usize).max(1)..=m {
        search.extend(0, size, 0);
    }
    let Some((opt_cost, witness)) = search.best else {
        return Err(Error::InvalidInstance("instance has no feasible solution".into()));
    };
    Ok(OracleResult { opt_cost, witness, explored: search.explored })
}

struct Search<'a> {
    inst: &'a Instance,
    tsp: &'a [Vec<(Cost, Vec<usize>)>],
    subsets: &'a [usize],
    cheapest: &'a [Cost],
    best: Option<(Cost, Solution)>,
    explored: u64,
    chosen: Vec<usize>,
}

impl Search<'_> {
    fn extend(&mut self, from: usize, left: usize, bound: Cost) {
        if self.best.as_ref().is_some_and(|(c, _)| bound >= *c) {
            return;
        }
        if left == 0 {
            self.explored += 1;
            self.evaluate();
            return;
        }
        for i in from..self.subsets.len() {
            self.chosen.push(i);
            self.extend(i, left - 1, bound + self.cheapest[i]);
            self.chosen.pop();
        }
    }

    fn evaluate(&mut self) {
        let inst = self.inst;
        let (n, k, q) = (inst.n(), inst.k(), inst.capacity());
        let masks: Vec<usize> = self.chosen.iter().map(|&i| self.subsets[i]).collect();
        let union = masks.iter().fold(0, |a, &m| a | m);
        if union != (1 << n) - 1 {
            return;
        }
        let t = masks.len();
        // Delivery: customers -> tours (capacity Q each).
        let mut net = FlowNetwork::new(n + t + 2, 0, n + t + 1);
        for j in 0..n {
            net.add_arc(0, 1 + j, Capacity::Finite(inst.demand(k + j)), 0);
        }
        let mut deliver = Vec::new();
        for (i, &mask) in masks.iter().enumerate() {
            for j in (0..n).filter(|j| mask >> j & 1 == 1) {
                deliver.push((i, k + j, net.add_arc(1 + j, 1 + n + i, Capacity::Unbounded, 0)));
            }
            net.add_arc(1 + n + i, n + t + 1, Capacity::Finite(q), 0);
        }
        let delivery = min_cost_max_flow(&net);
        if delivery.value != inst.total_demand() {
            return;
        }
        // Depots: tours -> depots with fleet capacities.
        let mut net = FlowNetwork::new(t + k + 2, 0, t + k + 1);
        let mut assign = Vec::new();
        for (i, &mask) in masks.iter().enumerate() {
            net.add_arc(0, 1 + i, Capacity::Finite(1), 0);
            for u in 0..k {
                assign.push((i, u, net.add_arc(1 + i, 1 + t + u, Capacity::Finite(1), self.tsp[u][mask].0)));
            }
        }
        for u in 0..k {
            net.add_arc(1 + t + u, t + k + 1, Capacity::Finite(inst.fleet(u)), 0);
        }
        let depots = min_cost_max_flow(&net);
        if depots.value != t as u64 {
            return;
        }
        let cost = depots.cost as Cost;
        if self.best.as_ref().is_some_and(|(c, _)| cost >= *c) {
            return;
        }
        let mut depot_of = vec![0; t];
        for &(i, u, arc) in &assign {
            if depots.flow[arc] > 0 {
                depot_of[i] = u;
            }
        }
        let mut lambdas = vec![BTreeMap::new(); t];
        for &(i, v, arc) in &deliver {
            if delivery.flow[arc] > 0 {
                lambdas[i].insert(v, delivery.flow[arc]);
            }
        }
        let mut used = vec![0usize; k];
        let mut tours = Vec::with_capacity(t);
        for (i, lambda) in lambdas.into_iter().enumerate() {
            let u = depot_of[i];
            let mut seq = self.tsp[u][masks[i]].1.clone();
            seq.push(u);
            tours.push(Tour { vehicle: inst.vehicle_offset(u) + used[u], depot: u, seq, lambda });
            used[u] += 1;
        }
        self.best = Some((cost, Solution { tours }));
    }
}

/// Classical single-depot lower bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBounds {
    /// `sum_v q_v 2 c(u, v) / Q`.
    pub radial: Rational,
    /// Optimal TSP tour through the depot and all customers.
    pub tour: Cost,
}

/// Largest vertex count for the exact tour bound.
pub const TOUR_BOUND_LIMIT: usize = 12;

pub fn vrp_lower_bounds(inst: &Instance) -> Result<LowerBounds> {
    if inst.k() != 1 {
        return Err(Error::InvalidInstance(format!("lower bounds need one depot, got {}", inst.k())));
    }
    let radial: i128 = inst
        .customers()
        .map(|v| 2 * i128::from(inst.demand(v)) * i128::from(inst.cost(0, v)))
        .sum();
    let tour = solve_mdtsp_exact(inst, TOUR_BOUND_LIMIT)?.cost(inst);
    Ok(LowerBounds { radial: Rational::new(radial, i128::from(inst.capacity())), tour })
}

/// `cost / opt`, with `0 / 0 = 1` and `None` for a positive cost over a
/// zero optimum.
pub fn ratio_of(cost: Cost, opt: Cost) -> Option<Rational> {
    match (cost, opt) {
        (0, 0) => Some(Rational::from_integer(1)),
        (_, 0) => None,
        _ => Some(Rational::new(i128::from(cost), i128::from(opt))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioAudit {
    pub cost: Cost,
    pub opt: Cost,
    /// `None` means infinite.
    pub ratio: Option<Rational>,
    pub claimed: Option<Rational>,
    /// Feasible at the solver's gamma.
    pub feasible: bool,
    /// `None` when the solver claims no ratio.
    pub within_claim: Option<bool>,
}

/// Compares a solver result with the optimum. For bi-factor solvers the
/// solution is checked at its relaxed capacity while the ratio is taken
/// against the optimum at capacity `Q`.
pub fn audit_ratio(inst: &Instance, result: &SolverResult, opt: &OracleResult) -> Result<RatioAudit> {
    let feasible = check_solution(inst, &result.solution, &result.gamma)?.feasible;
    let ratio = ratio_of(result.cost, opt.opt_cost);
    let within_claim = result
        .claimed_ratio
        .as_ref()
        .map(|c| feasible && ratio.as_ref().is_some_and(|r| r <= c));
    Ok(RatioAudit {
        cost: result.cost,
        opt: opt.opt_cost,
        ratio,
        claimed: result.claimed_ratio,
        feasible,
        within_claim,
    })
}

/// Dummy depot demands matching a known solution: `(Q - load_u mod Q) mod Q`
/// where `load_u` is the total delivered from depot `u`.
pub fn witness_depot_demands(inst: &Instance, sol: &Solution) -> Vec<u64> {
    let q = inst.capacity();
    let mut load = vec![0u64; inst.k()];
    for t in &sol.tours {
        load[t.depot] += t.load();
    }
    load.iter().map(|&l| (q - l % q) % q).collect()
}

/// Outcome of a `2 flowOPT <= OPT` audit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FlowAudit {
    pub checked: u64,
    pub violations: u64,
}

/// Runs the dummy-demand iteration guessed from the optimal witness and
/// checks `2 flowOPT <= OPT` on its transform.
pub fn audit_flow_divisible(inst: &Instance, opt: &OracleResult) -> Result<FlowAudit> {
    if inst.n() == 0 {
        return Ok(FlowAudit::default());
    }
    let dd = witness_depot_demands(inst, &opt.witness);
    let it = alg3::iteration(inst, &dd)?;
    let ok = 2 * it.output.certificate.flow_opt <= i128::from(opt.opt_cost);
    Ok(FlowAudit { checked: 1, violations: u64::from(!ok) })
}

/// Checks `2 flowOPT <= OPT` on every edge-set candidate whose cover keeps
/// each connected part of the optimal witness (tours joined through shared
/// customers or depots) inside one cycle.
pub fn audit_flow_good_covers(
    inst: &Instance,
    opt: &OracleResult,
    mdtsp: &dyn crate::mdtsp::MdTspSolver,
) -> Result<FlowAudit> {
    let mut audit = FlowAudit::default();
    if inst.n() == 0 {
        return Ok(audit);
    }
    let size = inst.num_vertices();
    let mut parts = UnionFind::new(size);
    for t in &opt.witness.tours {
        for w in t.seq.windows(2) {
            parts.union(w[0], w[1]);
        }
    }
    let base = mdtsp.solve(inst)?;
    let pool = alg1::customer_edges(inst);
    for ids in alg1::edge_sets(pool.len(), inst.k().saturating_sub(1)) {
        let extra: Vec<(usize, usize)> = ids.iter().map(|&i| pool[i]).collect();
        let Some(cover) = alg1::candidate_cover(inst, &base, &extra)? else { continue };
        let mut slot = vec![usize::MAX; size];
        for (ci, c) in cover.components.iter().enumerate() {
            for &v in &c.vertices {
                slot[v] = ci;
            }
        }
        let mut home: BTreeMap<usize, usize> = BTreeMap::new();
        let good = inst.customers().all(|v| *home.entry(parts.find(v)).or_insert(slot[v]) == slot[v]);
        if !good {
            continue;
        }
        let out = transform(inst, TransformInput { cover: &cover, depot_demands: None })?;
        audit.checked += 1;
        audit.violations += u64::from(2 * out.certificate.flow_opt > i128::from(opt.opt_cost));
    }
    Ok(audit)
}
