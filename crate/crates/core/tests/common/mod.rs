//! Instance generators and brute-force references shared by the
//! integration tests. Every reference here is a plain enumeration that
//! shares no code with the library routine it checks.

#![allow(dead_code)]

use mdsdvrp::graphprims::{Capacity, FlowNetwork};
use mdsdvrp::instance::{generate_instance, FleetPolicy, GenSpec, Point};
use mdsdvrp::{Cost, Instance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_points(rng: &mut ChaCha8Rng, count: usize) -> Vec<Point> {
    (0..count).map(|_| Point { x: rng.gen(), y: rng.gen() }).collect()
}

/// Random instance with `n <= n_max`, `k <= k_max`, `Q <= q_max`, demands up
/// to `2Q` and zero to two spare vehicles.
pub fn sweep_instance(seed: u64, n_max: usize, k_max: usize, q_max: u64) -> Instance {
    let mut r = rng(seed);
    let n = r.gen_range(1..=n_max);
    let k = r.gen_range(1..=k_max);
    let q = r.gen_range(2..=q_max);
    let hi = if r.gen_bool(0.7) { q } else { 2 * q };
    let spec = GenSpec {
        seed: seed.wrapping_mul(0x9E37_79B9_7F4A_7C15),
        n,
        k,
        capacity: q,
        demand_range: (1, hi),
        fleet: FleetPolicy::Extra(r.gen_range(0..=2)),
    };
    generate_instance(&spec).expect("generator accepts the spec")
}

/// Instances within the default oracle caps (`n <= 5`, `Q <= 6`, `m <= 4`),
/// in seed order.
pub fn oracle_instances(count: usize, first_seed: u64) -> Vec<(u64, Instance)> {
    let mut out = Vec::new();
    let mut seed = first_seed;
    while out.len() < count {
        let mut r = rng(seed);
        let n = r.gen_range(1..=5);
        let k = r.gen_range(1..=3);
        let q = r.gen_range(2..=6);
        let spec = GenSpec {
            seed,
            n,
            k,
            capacity: q,
            demand_range: (1, if r.gen_bool(0.75) { q } else { 2 * q }),
            fleet: FleetPolicy::Extra(r.gen_range(0..=1)),
        };
        if let Ok(inst) = generate_instance(&spec) {
            if inst.total_fleet() <= 4 {
                out.push((seed, inst));
            }
        }
        seed += 1;
    }
    out
}

/// Iterated tour partitioning over the unit expansion of `lambda` (padded
/// with dummy units at the depot to a multiple of `qp`), best over every unit
/// offset. Full-capacity round trips are split off first.
pub fn unit_split_cost(inst: &Instance, u: usize, cycle: &[usize], lambda: &[u64], qp: u64) -> Cost {
    let total: u64 = lambda.iter().sum();
    let dummy = (qp - total % qp) % qp;
    let mut units: Vec<usize> = vec![u; dummy as usize];
    let mut fixed = 0;
    for (&v, &l) in cycle.iter().zip(lambda) {
        fixed += (l / qp) as Cost * 2 * inst.cost(u, v);
        units.extend(std::iter::repeat_n(v, (l % qp) as usize));
    }
    if units.is_empty() {
        return fixed;
    }
    let r = units.len();
    let qp = qp as usize;
    let mut best = Cost::MAX;
    for off in 0..r {
        let mut cost = 0;
        for seg in 0..r / qp {
            let mut seq = vec![u];
            for i in 0..qp {
                let v = units[(off + seg * qp + i) % r];
                if v != u && seq.last() != Some(&v) {
                    seq.push(v);
                }
            }
            seq.push(u);
            cost += seq.windows(2).map(|w| inst.cost(w[0], w[1])).sum::<Cost>();
        }
        best = best.min(cost);
    }
    fixed + best
}

/// Minimum-cost perfect matching by DP over vertex subsets.
pub fn matching_dp(size: usize, cost: &dyn Fn(usize, usize) -> Cost) -> Cost {
    let full = (1usize << size) - 1;
    let mut dp = vec![Cost::MAX; full + 1];
    dp[0] = 0;
    for mask in 0..full {
        if dp[mask] == Cost::MAX {
            continue;
        }
        let i = (0..size).find(|&i| mask >> i & 1 == 0).unwrap();
        for j in i + 1..size {
            if mask >> j & 1 == 0 {
                let next = mask | 1 << i | 1 << j;
                dp[next] = dp[next].min(dp[mask] + cost(i, j));
            }
        }
    }
    dp[full]
}

/// `(max flow value, min cost)` by enumerating every integral arc flow.
pub fn flow_brute(net: &FlowNetwork) -> (u64, i128) {
    let caps: Vec<u64> = net
        .arcs
        .iter()
        .map(|a| match a.cap {
            Capacity::Finite(c) => c,
            Capacity::Unbounded => panic!("brute force needs finite capacities"),
        })
        .collect();
    let mut flow = vec![0u64; caps.len()];
    let mut best: (u64, i128) = (0, 0);
    loop {
        let mut balance = vec![0i64; net.nodes];
        for (a, &f) in net.arcs.iter().zip(&flow) {
            balance[a.from] -= f as i64;
            balance[a.to] += f as i64;
        }
        let conserved = (0..net.nodes).all(|v| v == net.source || v == net.sink || balance[v] == 0);
        if conserved && balance[net.sink] >= 0 {
            let value = balance[net.sink] as u64;
            let cost: i128 = net.arcs.iter().zip(&flow).map(|(a, &f)| i128::from(a.cost) * f as i128).sum();
            if value > best.0 || (value == best.0 && cost < best.1) {
                best = (value, cost);
            }
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == flow.len() {
                return best;
            }
            if flow[i] < caps[i] {
                flow[i] += 1;
                break;
            }
            flow[i] = 0;
            i += 1;
        }
    }
}

/// Cheapest Hamiltonian cycle through `set` by permutations.
pub fn best_cycle(inst: &Instance, set: &[usize]) -> Cost {
    fn go(inst: &Instance, first: usize, last: usize, rest: &mut Vec<usize>, acc: Cost, best: &mut Cost) {
        if rest.is_empty() {
            *best = (*best).min(acc + inst.cost(last, first));
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            go(inst, first, v, rest, acc + inst.cost(last, v), best);
            rest.insert(i, v);
        }
    }
    if set.len() <= 1 {
        return 0;
    }
    let mut best = Cost::MAX;
    let mut rest = set[1..].to_vec();
    go(inst, set[0], set[0], &mut rest, 0, &mut best);
    best
}

/// Cheapest cycle cover whose cycles all carry demand divisible by `q`,
/// over every set partition of the vertices.
pub fn min_divisible_cover(inst: &Instance, demand: &[u64], q: u64) -> Cost {
    fn go(inst: &Instance, demand: &[u64], q: u64, v: usize, blocks: &mut Vec<Vec<usize>>, best: &mut Cost) {
        if v == demand.len() {
            if blocks.iter().all(|b| b.iter().map(|&x| demand[x]).sum::<u64>() % q == 0) {
                let c = blocks.iter().map(|b| best_cycle(inst, b)).sum();
                *best = (*best).min(c);
            }
            return;
        }
        for i in 0..blocks.len() {
            blocks[i].push(v);
            go(inst, demand, q, v + 1, blocks, best);
            blocks[i].pop();
        }
        blocks.push(vec![v]);
        go(inst, demand, q, v + 1, blocks, best);
        blocks.pop();
    }
    let mut best = Cost::MAX;
    go(inst, demand, q, 0, &mut Vec::new(), &mut best);
    best
}
