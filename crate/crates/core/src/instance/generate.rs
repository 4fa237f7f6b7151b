//! Seeded random instances on the unit square.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Instance, Point};
use crate::error::{Error, Result};

/// How fleet sizes are chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FleetPolicy {
    /// `m * Q - sum q = 0`; one demand is nudged to a multiple of `Q`.
    Tight,
    /// `m * Q - sum q = s`; one demand is nudged so the identity holds.
    Slack(u64),
    /// `m = max(k, ceil(sum q / Q)) + extra`; demands untouched.
    Extra(u64),
}

impl std::str::FromStr for FleetPolicy {
    type Err = String;

    /// Accepts `tight`, `slack:<s>` and `extra:<e>`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        if s == "tight" {
            return Ok(FleetPolicy::Tight);
        }
        let parse = |v: &str| v.parse::<u64>().map_err(|_| format!("invalid fleet policy `{s}`"));
        if let Some(v) = s.strip_prefix("slack:") {
            return Ok(FleetPolicy::Slack(parse(v)?));
        }
        if let Some(v) = s.strip_prefix("extra:") {
            return Ok(FleetPolicy::Extra(parse(v)?));
        }
        Err(format!("invalid fleet policy `{s}` (expected tight, slack:<s> or extra:<e>)"))
    }
}

#[derive(Clone, Debug)]
pub struct GenSpec {
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub capacity: u64,
    /// Inclusive demand range.
    pub demand_range: (u64, u64),
    pub fleet: FleetPolicy,
}

pub fn generate_instance(spec: &GenSpec) -> Result<Instance> {
    if spec.k == 0 {
        return Err(Error::Generation("k must be at least 1".into()));
    }
    if spec.capacity == 0 {
        return Err(Error::Generation("capacity must be at least 1".into()));
    }
    let (lo, hi) = spec.demand_range;
    if lo == 0 || lo > hi {
        return Err(Error::Generation(format!("invalid demand range [{lo}, {hi}]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let points: Vec<Point> = (0..spec.k + spec.n)
        .map(|_| Point { x: rng.gen_range(0.0..1.0), y: rng.gen_range(0.0..1.0) })
        .collect();
    let mut demands: Vec<u64> = (0..spec.n).map(|_| rng.gen_range(lo..=hi)).collect();
    let q = spec.capacity;

    let vehicles = match spec.fleet {
        FleetPolicy::Tight => {
            nudge_to_residue(&mut demands, q, 0)?;
            demands.iter().sum::<u64>() / q
        }
        FleetPolicy::Slack(s) => {
            let target = (q - s % q) % q;
            nudge_to_residue(&mut demands, q, target)?;
            (demands.iter().sum::<u64>() + s) / q
        }
        FleetPolicy::Extra(e) => {
            let needed = demands.iter().sum::<u64>().div_ceil(q);
            needed.max(spec.k as u64) + e
        }
    };
    if vehicles < spec.k as u64 {
        return Err(Error::Generation(format!(
            "fleet policy {:?} yields m = {vehicles} vehicles but every one of the {} depots needs at least one (m >= k)",
            spec.fleet, spec.k
        )));
    }

    // every depot gets one vehicle, the rest are spread at random
    let mut fleets = vec![1u64; spec.k];
    for _ in 0..vehicles - spec.k as u64 {
        let u = rng.gen_range(0..spec.k);
        fleets[u] += 1;
    }
    Instance::from_points(q, fleets, demands, points)
}

/// Adjusts one demand so that the total is congruent to `residue` mod `q`.
/// Prefers lowering a demand (keeping it >= 1) and otherwise raises the last one.
fn nudge_to_residue(demands: &mut [u64], q: u64, residue: u64) -> Result<()> {
    let total: u64 = demands.iter().sum();
    let current = total % q;
    if current == residue {
        return Ok(());
    }
    if demands.is_empty() {
        return Err(Error::Generation(format!(
            "no customers to adjust: total demand 0 cannot be made congruent to {residue} mod {q}"
        )));
    }
    let down = (current + q - residue) % q;
    if let Some(d) = demands.iter_mut().rev().find(|d| **d > down) {
        *d -= down;
        return Ok(());
    }
    let up = (residue + q - current) % q;
    let last = demands.len() - 1;
    demands[last] += up;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(seed: u64, n: usize, k: usize, q: u64, range: (u64, u64), fleet: FleetPolicy) -> GenSpec {
        GenSpec { seed, n, k, capacity: q, demand_range: range, fleet }
    }

    #[test]
    fn tight_single_customer() {
        let inst = generate_instance(&spec(1, 1, 1, 5, (5, 5), FleetPolicy::Tight)).unwrap();
        assert_eq!(inst.total_fleet(), 1);
    }

    #[test]
    fn deterministic_per_seed() {
        let s = spec(42, 8, 2, 7, (1, 9), FleetPolicy::Extra(1));
        assert_eq!(generate_instance(&s).unwrap(), generate_instance(&s).unwrap());
        let other = spec(43, 8, 2, 7, (1, 9), FleetPolicy::Extra(1));
        assert_ne!(generate_instance(&s).unwrap(), generate_instance(&other).unwrap());
    }

    #[test]
    fn tight_nudges_total_to_multiple() {
        // 12 total with Q = 5 must land on 10 or 15
        let mut demands = vec![4, 4, 4];
        nudge_to_residue(&mut demands, 5, 0).unwrap();
        let total: u64 = demands.iter().sum();
        assert!(total == 10 || total == 15);
        for seed in 0..20 {
            let inst = generate_instance(&spec(seed, 6, 2, 5, (1, 6), FleetPolicy::Tight)).unwrap();
            assert_eq!(inst.total_fleet() * 5, inst.total_demand());
            assert!(inst.validate().is_empty());
        }
    }

    #[test]
    fn slack_identity() {
        for seed in 0..20 {
            let inst = generate_instance(&spec(seed, 5, 2, 6, (1, 6), FleetPolicy::Slack(4))).unwrap();
            assert_eq!(inst.total_fleet() * 6 - inst.total_demand(), 4);
        }
    }

    #[test]
    fn unachievable_tight_policy_errors() {
        // one unit of demand cannot fill three depots' worth of vehicles
        let err = generate_instance(&spec(1, 1, 3, 5, (1, 1), FleetPolicy::Tight)).unwrap_err();
        assert!(err.to_string().contains("m >= k"), "{err}");
    }

    #[test]
    fn policy_parsing() {
        assert_eq!("tight".parse::<FleetPolicy>().unwrap(), FleetPolicy::Tight);
        assert_eq!("slack:3".parse::<FleetPolicy>().unwrap(), FleetPolicy::Slack(3));
        assert_eq!("extra:0".parse::<FleetPolicy>().unwrap(), FleetPolicy::Extra(0));
        assert!("loose".parse::<FleetPolicy>().is_err());
    }
}
