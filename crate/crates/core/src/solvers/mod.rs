//! End-to-end algorithms. Every solver returns a [`SolverResult`] whose
//! solution is feasible at the reported capacity factor `gamma`.

pub mod alg1;
pub mod alg2;
pub mod alg3;
pub mod alg4;
pub mod alg5;
pub mod sdvrp;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graphprims::{eulerian_tour, shortcut, ComponentSet};
use crate::instance::{Cost, Instance, Solution};
use crate::mdtsp::MdTspChoice;
use crate::rational::Rational;
use crate::transform::{TransformCertificate, TransformOutput};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SolverKind {
    Alg1,
    Alg2,
    Alg3,
    Alg4,
    Alg5,
    Sdvrp,
}

impl SolverKind {
    pub const ALL: [SolverKind; 6] = [
        SolverKind::Alg1,
        SolverKind::Alg2,
        SolverKind::Alg3,
        SolverKind::Alg4,
        SolverKind::Alg5,
        SolverKind::Sdvrp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Alg1 => "alg1",
            SolverKind::Alg2 => "alg2",
            SolverKind::Alg3 => "alg3",
            SolverKind::Alg4 => "alg4",
            SolverKind::Alg5 => "alg5",
            SolverKind::Sdvrp => "sdvrp",
        }
    }

    /// Whether the solver relaxes capacity to `(1 + eps) Q`.
    pub fn is_bifactor(self) -> bool {
        matches!(self, SolverKind::Alg4 | SolverKind::Alg5)
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        SolverKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown solver `{s}` (expected alg1..alg5 or sdvrp)"))
    }
}

/// Knobs shared by all solvers.
#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Capacity slack for the bi-factor solvers.
    pub eps: Rational,
    pub mdtsp: MdTspChoice,
    /// Cap on enumerated candidates; hitting it voids the guarantee.
    pub max_iters: Option<u64>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { eps: Rational::from_integer(1), mdtsp: MdTspChoice::Forest2, max_iters: None }
    }
}

/// A bound checked while solving.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub name: &'static str,
    pub holds: bool,
    pub detail: String,
}

/// Aggregate of the per-call checks made on every cover-to-tours conversion.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TransformStats {
    pub calls: u64,
    /// Calls where `c(T) <= 2 c(C) + 2 flowOPT` failed.
    pub bound_violations: u64,
    /// Calls whose vehicle count differed from `l(C)`.
    pub vehicle_violations: u64,
    /// Calls using more than `r_u` vehicles at some depot.
    pub fleet_violations: u64,
}

impl TransformStats {
    pub fn record(&mut self, cert: &TransformCertificate) {
        self.calls += 1;
        self.bound_violations += u64::from(!cert.bound_ok);
        self.vehicle_violations += u64::from(!cert.vehicles_ok);
        self.fleet_violations += u64::from(!cert.fleet_ok);
    }

    pub fn merge(&mut self, other: &TransformStats) {
        self.calls += other.calls;
        self.bound_violations += other.bound_violations;
        self.vehicle_violations += other.vehicle_violations;
        self.fleet_violations += other.fleet_violations;
    }

    pub fn violations(&self) -> u64 {
        self.bound_violations + self.vehicle_violations + self.fleet_violations
    }
}

/// Divisibility checks on the mod-Q covers built during a run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CoverStats {
    pub covers: u64,
    pub cycles: u64,
    pub violations: u64,
}

impl CoverStats {
    pub fn merge(&mut self, other: &CoverStats) {
        self.covers += other.covers;
        self.cycles += other.cycles;
        self.violations += other.violations;
    }
}

#[derive(Clone, Debug)]
pub struct SolverResult {
    pub solver: SolverKind,
    pub solution: Solution,
    pub cost: Cost,
    /// Proven approximation ratio, when the configuration certifies one.
    pub claimed_ratio: Option<Rational>,
    /// Explanation when `claimed_ratio` is absent or conditional.
    pub ratio_note: Option<String>,
    /// Capacity factor the solution respects.
    pub gamma: Rational,
    /// Candidates that passed the filters and were turned into solutions.
    pub iterations_run: u64,
    /// Candidates enumerated before filtering.
    pub iterations_enumerated: u64,
    /// Set when `max_iters` cut the enumeration short.
    pub guarantee_void: bool,
    pub certificates: Vec<Certificate>,
    pub transform_stats: TransformStats,
    pub cover_stats: CoverStats,
}

impl SolverResult {
    pub(crate) fn new(solver: SolverKind, inst: &Instance, solution: Solution) -> Self {
        let cost = solution.cost(inst);
        SolverResult {
            solver,
            solution,
            cost,
            claimed_ratio: None,
            ratio_note: None,
            gamma: Rational::from_integer(1),
            iterations_run: 1,
            iterations_enumerated: 1,
            guarantee_void: false,
            certificates: Vec::new(),
            transform_stats: TransformStats::default(),
            cover_stats: CoverStats::default(),
        }
    }

    pub fn certificates_hold(&self) -> bool {
        self.certificates.iter().all(|c| c.holds)
            && self.transform_stats.violations() == 0
            && self.cover_stats.violations == 0
    }

    pub(crate) fn push_transform_certificate(&mut self) {
        let s = self.transform_stats;
        if s.calls == 0 {
            return;
        }
        self.certificates.push(Certificate {
            name: "transform",
            holds: s.violations() == 0,
            detail: format!(
                "{} calls; bound violations {}, vehicle-count violations {}, fleet violations {}",
                s.calls, s.bound_violations, s.vehicle_violations, s.fleet_violations
            ),
        });
    }
}

/// Runs `kind` on `inst`.
pub fn solve(inst: &Instance, kind: SolverKind, opts: &SolveOptions) -> Result<SolverResult> {
    if opts.eps <= Rational::from_integer(0) && kind.is_bifactor() {
        return Err(Error::InvalidInstance("eps must be positive".into()));
    }
    match kind {
        SolverKind::Alg1 => alg1::alg1(inst, opts.mdtsp.solver().as_ref(), opts.max_iters),
        SolverKind::Alg2 => alg2::alg2(inst, opts.mdtsp.solver().as_ref(), opts.max_iters),
        SolverKind::Alg3 => alg3::alg3(inst, opts.max_iters),
        SolverKind::Alg4 => alg4::alg4(inst, &opts.eps, &alg4::NearestDepot),
        SolverKind::Alg5 => alg5::alg5(inst, &opts.eps, opts.max_iters),
        SolverKind::Sdvrp => sdvrp::sdvrp(inst),
    }
}

/// Shortcuts every connected component of the multigraph `(0..size, edges)`
/// into a cycle via an Euler tour from its smallest vertex. Vertices without
/// edges become trivial cycles.
pub(crate) fn eulerian_components_to_cycles(size: usize, edges: &[(usize, usize)]) -> Result<ComponentSet> {
    let groups = crate::graphprims::connected_components(size, edges, |_| true);
    let mut slot = vec![0usize; size];
    for (i, g) in groups.iter().enumerate() {
        for &v in g {
            slot[v] = i;
        }
    }
    let mut per: Vec<Vec<(usize, usize)>> = vec![Vec::new(); groups.len()];
    for &(a, b) in edges {
        per[slot[a]].push((a, b));
    }
    let mut cycles = Vec::with_capacity(groups.len());
    for (g, es) in groups.iter().zip(&per) {
        if es.is_empty() {
            cycles.push(vec![g[0]]);
        } else {
            let walk = eulerian_tour(es, Some(g[0]))?;
            cycles.push(shortcut(&walk, |_| true));
        }
    }
    Ok(ComponentSet::from_cycles(cycles))
}

/// Outcome of one enumeration candidate.
pub(crate) struct Candidate {
    pub solution: Solution,
    pub cost: Cost,
    pub stats: TransformStats,
    pub covers: CoverStats,
}

impl Candidate {
    pub fn from_transform(inst: &Instance, out: TransformOutput) -> Self {
        let mut stats = TransformStats::default();
        stats.record(&out.certificate);
        let cost = out.solution.cost(inst);
        Candidate { solution: out.solution, cost, stats, covers: CoverStats::default() }
    }
}

/// Outcome of scanning an enumeration.
pub(crate) struct Scan {
    /// Cheapest candidate and its enumeration index; earliest wins ties.
    pub best: Option<(u64, Candidate)>,
    pub run: u64,
    pub enumerated: u64,
    /// The cap stopped the enumeration before it was exhausted.
    pub truncated: bool,
    pub stats: TransformStats,
    pub covers: CoverStats,
}

const BATCH: usize = 1024;

/// Evaluates the enumeration in parallel batches, keeping the cheapest
/// candidate by `(cost, index)`. `eval` returns `None` for filtered items.
pub(crate) fn scan<T: Send + Sync>(
    items: impl Iterator<Item = T>,
    limit: Option<u64>,
    eval: impl Fn(&T) -> Result<Option<Candidate>> + Sync,
) -> Result<Scan> {
    let mut out = Scan {
        best: None,
        run: 0,
        enumerated: 0,
        truncated: false,
        stats: TransformStats::default(),
        covers: CoverStats::default(),
    };
    let mut items = items.peekable();
    loop {
        let room = limit.map_or(BATCH as u64, |l| (l - out.enumerated).min(BATCH as u64));
        if room == 0 {
            out.truncated = items.peek().is_some();
            break;
        }
        let batch: Vec<T> = items.by_ref().take(room as usize).collect();
        if batch.is_empty() {
            break;
        }
        let base = out.enumerated;
        out.enumerated += batch.len() as u64;
        let results: Vec<Result<Option<Candidate>>> = batch.par_iter().map(&eval).collect();
        for (i, r) in results.into_iter().enumerate() {
            let Some(c) = r? else { continue };
            out.run += 1;
            out.stats.merge(&c.stats);
            out.covers.merge(&c.covers);
            if out.best.as_ref().is_none_or(|(_, b)| c.cost < b.cost) {
                out.best = Some((base + i as u64, c));
            }
        }
    }
    Ok(out)
}

impl Scan {
    /// Builds the result from the best candidate, or explains why none
    /// survived.
    pub(crate) fn into_result(self, kind: SolverKind, inst: &Instance, what: &str) -> Result<SolverResult> {
        let Some((_, best)) = self.best else {
            return Err(Error::NoCandidate(format!(
                "{kind}: none of the {} enumerated {what} passed the vehicle filter (m = {})",
                self.enumerated,
                inst.total_fleet()
            )));
        };
        let mut r = SolverResult::new(kind, inst, best.solution);
        r.iterations_run = self.run;
        r.iterations_enumerated = self.enumerated;
        r.guarantee_void = self.truncated;
        r.transform_stats = self.stats;
        r.cover_stats = self.covers;
        r.push_transform_certificate();
        Ok(r)
    }
}

/// Result for an instance without customers.
pub(crate) fn empty_result(kind: SolverKind, inst: &Instance) -> SolverResult {
    let mut r = SolverResult::new(kind, inst, Solution::default());
    r.iterations_run = 0;
    r.iterations_enumerated = 0;
    r
}
