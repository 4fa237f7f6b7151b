//! Min-cost max-flow by successive shortest paths with Johnson potentials.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::instance::Cost;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Capacity {
    Finite(u64),
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowArc {
    pub from: usize,
    pub to: usize,
    pub cap: Capacity,
    pub cost: Cost,
}

/// Directed network with non-negative arc costs.
#[derive(Clone, Debug, Default)]
pub struct FlowNetwork {
    pub nodes: usize,
    pub arcs: Vec<FlowArc>,
    pub source: usize,
    pub sink: usize,
}

impl FlowNetwork {
    pub fn new(nodes: usize, source: usize, sink: usize) -> Self {
        FlowNetwork { nodes, arcs: Vec::new(), source, sink }
    }

    /// Adds an arc and returns its index.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: Capacity, cost: Cost) -> usize {
        debug_assert!(cost >= 0, "negative arc cost");
        self.arcs.push(FlowArc { from, to, cap, cost });
        self.arcs.len() - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowResult {
    /// Integral flow on each arc, in arc order.
    pub flow: Vec<u64>,
    pub value: u64,
    pub cost: i128,
}

struct Edge {
    to: usize,
    rev: usize,
    cap: u64,
    cost: i128,
}

/// Maximum s-t flow of minimum cost. Unbounded arcs are capped at the total
/// finite capacity leaving the source, which no max flow can exceed unless
/// the source has an unbounded path to the sink (then the total finite
/// capacity of all arcs plus one is used).
pub fn min_cost_max_flow(net: &FlowNetwork) -> FlowResult {
    let n = net.nodes;
    let finite_total: u64 = net
        .arcs
        .iter()
        .map(|a| match a.cap {
            Capacity::Finite(c) => c,
            Capacity::Unbounded => 0,
        })
        .sum();
    let infinity = finite_total.saturating_add(1);

    let mut graph: Vec<Vec<Edge>> = (0..n).map(|_| Vec::new()).collect();
    let mut handles = Vec::with_capacity(net.arcs.len());
    for arc in &net.arcs {
        let cap = match arc.cap {
            Capacity::Finite(c) => c,
            Capacity::Unbounded => infinity,
        };
        let fwd = graph[arc.from].len();
        let bwd = graph[arc.to].len() + usize::from(arc.from == arc.to);
        graph[arc.from].push(Edge { to: arc.to, rev: bwd, cap, cost: i128::from(arc.cost) });
        graph[arc.to].push(Edge { to: arc.from, rev: fwd, cap: 0, cost: -i128::from(arc.cost) });
        handles.push((arc.from, fwd));
    }

    let (s, t) = (net.source, net.sink);
    let mut potential = vec![0i128; n];
    let mut value = 0u64;
    let mut total = 0i128;
    if s != t {
        loop {
            // Dijkstra on reduced costs.
            let mut dist = vec![i128::MAX; n];
            let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
            let mut heap = BinaryHeap::new();
            dist[s] = 0;
            heap.push(Reverse((0i128, s)));
            while let Some(Reverse((d, v))) = heap.pop() {
                if d > dist[v] {
                    continue;
                }
                for (i, e) in graph[v].iter().enumerate() {
                    if e.cap == 0 {
                        continue;
                    }
                    let nd = d + e.cost + potential[v] - potential[e.to];
                    if nd < dist[e.to] {
                        dist[e.to] = nd;
                        prev[e.to] = Some((v, i));
                        heap.push(Reverse((nd, e.to)));
                    }
                }
            }
            if dist[t] == i128::MAX {
                break;
            }
            for v in 0..n {
                if dist[v] != i128::MAX {
                    potential[v] += dist[v];
                }
            }
            let mut push = u64::MAX;
            let mut v = t;
            while let Some((u, i)) = prev[v] {
                push = push.min(graph[u][i].cap);
                v = u;
            }
            let mut v = t;
            while let Some((u, i)) = prev[v] {
                graph[u][i].cap -= push;
                let rev = graph[u][i].rev;
                graph[v][rev].cap += push;
                total += graph[u][i].cost * i128::from(push);
                v = u;
            }
            value += push;
        }
    }

    let flow = net
        .arcs
        .iter()
        .zip(&handles)
        .map(|(arc, &(from, idx))| {
            let e = &graph[from][idx];
            graph[arc.to][e.rev].cap
        })
        .collect();
    FlowResult { flow, value, cost: total }
}
