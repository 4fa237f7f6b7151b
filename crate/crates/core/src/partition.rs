//! Splitting demand along cycles: trivial-path peeling, capacity-`Q` path
//! extraction, and the best-start tour partition of a depot cycle.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::instance::{Cost, Instance};

/// A path of customers with the demand it delivers to each of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtractedPath {
    pub seq: Vec<usize>,
    /// Demand per vertex of `seq`, aligned with it.
    pub assignment: Vec<u64>,
    /// Vehicles the path consumes; above 1 only for trivial paths.
    pub load: u64,
}

impl ExtractedPath {
    pub fn demand(&self) -> u64 {
        self.assignment.iter().sum()
    }

    pub fn is_trivial(&self) -> bool {
        self.seq.len() == 1
    }
}

/// Splits off `floor(q_v / Q)` full vehicles for every vertex with
/// `q_v >= Q`. Returns the trivial paths and the residuals `q_v mod Q`
/// aligned with `cycle`.
pub fn peel_trivial(cycle: &[usize], demands: &[u64], capacity: u64) -> (Vec<ExtractedPath>, Vec<u64>) {
    let mut trivial = Vec::new();
    let mut residual = Vec::with_capacity(cycle.len());
    for (&v, &q) in cycle.iter().zip(demands) {
        let load = q / capacity;
        if load > 0 {
            trivial.push(ExtractedPath { seq: vec![v], assignment: vec![load * capacity], load });
        }
        residual.push(q % capacity);
    }
    (trivial, residual)
}

/// Cuts consecutive pieces of `min(Q, remaining)` demand out of the
/// sequence. Each piece ends at the first position where its demand is
/// reached; a partially served vertex starts the next piece. Zero entries
/// are skipped. Returns `(position, amount)` lists.
fn cut_pieces(residual: &[u64], capacity: u64) -> Vec<Vec<(usize, u64)>> {
    let mut rem: Vec<u64> = residual.to_vec();
    let mut total: u64 = rem.iter().sum();
    let mut pieces = Vec::new();
    let mut pos = 0;
    while total > 0 {
        let target = capacity.min(total);
        let mut got = 0;
        let mut piece = Vec::new();
        while got < target {
            while rem[pos] == 0 {
                pos += 1;
            }
            let take = rem[pos].min(target - got);
            piece.push((pos, take));
            rem[pos] -= take;
            got += take;
            if rem[pos] == 0 {
                pos += 1;
            }
        }
        total -= target;
        pieces.push(piece);
    }
    pieces
}

/// Extracts `ceil(sum q' / Q)` paths along `cycle`. Every path but possibly
/// the last carries exactly `Q`, and consecutive paths share at most the
/// vertex split between them.
pub fn extract_paths(cycle: &[usize], residual: &[u64], capacity: u64) -> Result<Vec<ExtractedPath>> {
    if cycle.len() != residual.len() {
        return Err(Error::contract("cycle and residual lengths differ"));
    }
    if let Some(i) = residual.iter().position(|&r| r >= capacity) {
        return Err(Error::contract(format!(
            "residual {} of vertex {} is not below Q = {capacity}",
            residual[i], cycle[i]
        )));
    }
    Ok(cut_pieces(residual, capacity)
        .into_iter()
        .map(|piece| ExtractedPath {
            seq: piece.iter().map(|&(p, _)| cycle[p]).collect(),
            assignment: piece.iter().map(|&(_, a)| a).collect(),
            load: 1,
        })
        .collect())
}

/// A tour from a depot that is not yet bound to a vehicle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepotTour {
    pub depot: usize,
    /// `u v1 .. vl u`.
    pub seq: Vec<usize>,
    pub lambda: BTreeMap<usize, u64>,
}

impl DepotTour {
    pub fn load(&self) -> u64 {
        self.lambda.values().sum()
    }
}

/// Partitions the depot cycle `u v1 .. vt u` (`cycle` lists `v1 .. vt`) into
/// `ceil(sum lambda / Q')` tours of load at most `Q'`.
///
/// A dummy vertex at the depot pads the total to a multiple of `Q'`; full
/// trivial tours are split off first; then every possible start of the
/// extraction is tried and the cheapest tour set wins (earliest start on
/// ties). The bound `cost <= c(C_u) + sum 2 lambda_i c(u, v_i) / Q'` is
/// checked before returning.
pub fn split_depot_cycle(
    inst: &Instance,
    depot: usize,
    cycle: &[usize],
    lambda: &[u64],
    q_prime: u64,
) -> Result<Vec<DepotTour>> {
    if cycle.len() != lambda.len() {
        return Err(Error::contract("cycle and demand lengths differ"));
    }
    if q_prime == 0 {
        return Err(Error::contract("capacity must be positive"));
    }
    let total: u64 = lambda.iter().sum();
    let dummy = (q_prime - total % q_prime) % q_prime;

    let mut tours = Vec::new();
    // Entries: None is the dummy at the depot.
    let mut entries: Vec<(Option<usize>, u64)> = vec![(None, dummy)];
    for (&v, &l) in cycle.iter().zip(lambda) {
        for _ in 0..l / q_prime {
            tours.push(DepotTour {
                depot,
                seq: vec![depot, v, depot],
                lambda: BTreeMap::from([(v, q_prime)]),
            });
        }
        entries.push((Some(v), l % q_prime));
    }
    entries.retain(|&(_, r)| r > 0);

    let mut best: Option<(Cost, Vec<DepotTour>)> = None;
    for start in 0..entries.len() {
        let rotated: Vec<(Option<usize>, u64)> =
            entries[start..].iter().chain(&entries[..start]).copied().collect();
        let residual: Vec<u64> = rotated.iter().map(|&(_, r)| r).collect();
        let mut cost = 0;
        let mut candidate = Vec::new();
        for piece in cut_pieces(&residual, q_prime) {
            let mut seq = vec![depot];
            let mut lam = BTreeMap::new();
            for (pos, amount) in piece {
                if let Some(v) = rotated[pos].0 {
                    seq.push(v);
                    *lam.entry(v).or_insert(0) += amount;
                }
            }
            seq.push(depot);
            cost += inst.walk_cost(&seq);
            candidate.push(DepotTour { depot, seq, lambda: lam });
        }
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, candidate));
        }
    }
    if let Some((_, extra)) = best {
        tours.extend(extra);
    }

    let (lhs, rhs) = split_bound_sides(inst, depot, cycle, lambda, q_prime, &tours);
    if lhs > rhs {
        return Err(Error::Certificate(format!(
            "depot {depot}: tour cost x Q' = {lhs} exceeds cycle-plus-radial bound {rhs}"
        )));
    }
    Ok(tours)
}

/// Both sides of the partition bound scaled by `Q'`:
/// `(c(tours) * Q', c(C_u) * Q' + sum 2 lambda_i c(u, v_i))`.
pub fn split_bound_sides(
    inst: &Instance,
    depot: usize,
    cycle: &[usize],
    lambda: &[u64],
    q_prime: u64,
    tours: &[DepotTour],
) -> (i128, i128) {
    let q = i128::from(q_prime);
    let tour_cost: i128 = tours.iter().map(|t| i128::from(inst.walk_cost(&t.seq))).sum();
    let mut closed = vec![depot];
    closed.extend_from_slice(cycle);
    let cycle_cost = i128::from(inst.cycle_cost(&closed));
    let radial: i128 = cycle
        .iter()
        .zip(lambda)
        .map(|(&v, &l)| 2 * i128::from(l) * i128::from(inst.cost(depot, v)))
        .sum();
    (tour_cost * q, cycle_cost * q + radial)
}
