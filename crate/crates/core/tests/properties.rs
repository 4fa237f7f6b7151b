mod common;

use std::collections::BTreeMap;

use common::*;
use mdsdvrp::graphprims::{eulerian_tour, modq_cycle_cover, shortcut, ComponentSet};
use mdsdvrp::instance::{check_solution, parse_instance, write_instance};
use mdsdvrp::partition::{extract_paths, split_bound_sides, split_depot_cycle, peel_trivial};
use mdsdvrp::solvers::alg3;
use mdsdvrp::transform::{transform, TransformInput};
use mdsdvrp::{Instance, Rational};
use proptest::prelude::*;
use rand::Rng;

fn instance_strategy() -> impl Strategy<Value = Instance> {
    (0u64..10_000, 8usize..=10, 2usize..=3, 12u64..=15).prop_map(|(s, n, k, q)| sweep_instance(s, n, k, q))
}

fn star(inst: &Instance, t: usize) -> Vec<usize> {
    (inst.k()..inst.k() + t).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_format_round_trips(inst in instance_strategy()) {
        let text = write_instance(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(write_instance(&back), text);
    }

    #[test]
    fn shortcutting_never_costs_more(seed in 0u64..10_000, len in 2usize..9) {
        let inst = sweep_instance(seed, 10, 1, 10);
        let size = inst.num_vertices();
        let mut r = rng(seed);
        let walk: Vec<usize> = (0..len).map(|_| r.gen_range(0..size)).collect();
        let mut closed = walk.clone();
        closed.push(walk[0]);
        let cut = shortcut(&closed, |_| true);
        prop_assert!(inst.walk_cost(&cut) <= inst.walk_cost(&closed));
        let mut seen = cut[..cut.len() - 1].to_vec();
        seen.sort_unstable();
        seen.dedup();
        prop_assert_eq!(seen.len(), cut.len() - 1);
    }

    #[test]
    fn euler_tour_uses_every_edge_once(n in 2usize..8, extra in proptest::collection::vec((0usize..8, 0usize..8), 0..6)) {
        // a cycle plus each extra edge doubled keeps all degrees even
        let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        for (a, b) in extra {
            let (a, b) = (a % n, b % n);
            if a != b {
                edges.push((a, b));
                edges.push((b, a));
            }
        }
        let walk = eulerian_tour(&edges, Some(0)).unwrap();
        prop_assert_eq!(walk.len(), edges.len() + 1);
        prop_assert_eq!(walk[0], *walk.last().unwrap());
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        let mut want: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for &(a, b) in &edges {
            *want.entry(key(a, b)).or_default() += 1;
        }
        let mut got: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for w in walk.windows(2) {
            *got.entry(key(w[0], w[1])).or_default() += 1;
        }
        prop_assert_eq!(got, want);
    }

    #[test]
    fn cycle_split_count_and_bound(seed in 0u64..100_000, t in 1usize..8, qp in 1u64..9) {
        let mut r = rng(seed);
        let lambda: Vec<u64> = (0..t).map(|_| r.gen_range(0..=3 * qp)).collect();
        let pts = random_points(&mut r, t + 1);
        let inst = Instance::from_points(qp, vec![100], vec![1; t], pts).unwrap();
        let cycle = star(&inst, t);
        let tours = split_depot_cycle(&inst, 0, &cycle, &lambda, qp).unwrap();
        let total: u64 = lambda.iter().sum();
        prop_assert_eq!(tours.len() as u64, total.div_ceil(qp));
        prop_assert!(tours.iter().all(|x| x.load() <= qp && x.seq[0] == 0 && *x.seq.last().unwrap() == 0));
        let (lhs, rhs) = split_bound_sides(&inst, 0, &cycle, &lambda, qp, &tours);
        prop_assert!(lhs <= rhs);
    }

    #[test]
    fn peeling_and_extraction_conserve_demand(demands in proptest::collection::vec(0u64..30, 1..12), q in 1u64..10) {
        let cycle: Vec<usize> = (0..demands.len()).collect();
        let (trivial, residual) = peel_trivial(&cycle, &demands, q);
        let paths = extract_paths(&cycle, &residual, q).unwrap();
        let mut served = vec![0u64; demands.len()];
        for p in trivial.iter().chain(&paths) {
            for (&v, &a) in p.seq.iter().zip(&p.assignment) {
                served[v] += a;
            }
        }
        prop_assert_eq!(served, demands);
        prop_assert!(trivial.iter().all(|p| p.demand() == p.load * q));
        prop_assert!(paths.iter().filter(|p| p.demand() < q).count() <= 1);
        let total: u64 = residual.iter().sum();
        prop_assert_eq!(paths.len() as u64, total.div_ceil(q));
    }

    #[test]
    fn modq_covers_are_divisible(inst in instance_strategy()) {
        for dd in alg3::depot_demand_guesses(&inst).take(20) {
            let cover = modq_cycle_cover(&inst, &dd).unwrap();
            prop_assert!(cover.is_valid_cover(inst.num_vertices()));
            for c in &cover.components {
                let d: u64 = c.vertices.iter().map(|&v| if inst.is_depot(v) { dd[v] } else { inst.demand(v) }).sum();
                prop_assert_eq!(d % inst.capacity(), 0);
            }
        }
    }

    #[test]
    fn transform_meets_its_certificate(inst in instance_strategy(), split in 1usize..4) {
        // depot u leads the u-th contiguous block of customers
        let k = inst.k();
        let customers: Vec<usize> = inst.customers().collect();
        let blocks = k.min(split);
        let chunk = customers.len().div_ceil(blocks);
        let mut cycles: Vec<Vec<usize>> = (0..k).map(|u| vec![u]).collect();
        for (u, block) in customers.chunks(chunk).enumerate() {
            cycles[u].extend_from_slice(block);
        }
        let cover = ComponentSet::from_cycles(cycles);
        prop_assert!(cover.is_valid_cover(inst.num_vertices()));
        let ell = cover.lower_ell(&inst);
        prop_assume!(ell <= inst.total_fleet());
        match transform(&inst, TransformInput { cover: &cover, depot_demands: None }) {
            Ok(out) => {
                prop_assert!(out.certificate.holds(), "{:?}", out.certificate);
                prop_assert!(check_solution(&inst, &out.solution, &Rational::from_integer(1)).unwrap().feasible);
            }
            // fleets are random per depot, so the assignment may be infeasible
            Err(mdsdvrp::Error::Contract(_)) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}
