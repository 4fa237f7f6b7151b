//! Eulerian tours (Hierholzer) and metric shortcutting.

use crate::error::{Error, Result};

/// Closed walk using every edge of the multigraph exactly once, starting at
/// `start` (or the smallest endpoint when `start` is `None`).
///
/// The walk lists the start vertex at both ends. An empty edge set yields
/// the one-vertex walk `[start]`.
pub fn eulerian_tour(edges: &[(usize, usize)], start: Option<usize>) -> Result<Vec<usize>> {
    let Some(size) = edges.iter().map(|&(a, b)| a.max(b) + 1).max() else {
        return Ok(start.into_iter().collect());
    };
    let start = start.unwrap_or_else(|| edges.iter().map(|&(a, b)| a.min(b)).min().unwrap());
    if start >= size {
        return Err(Error::contract(format!("start vertex {start} has no incident edge")));
    }
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); size];
    for (id, &(a, b)) in edges.iter().enumerate() {
        adj[a].push((b, id));
        if a != b {
            adj[b].push((a, id));
        } else {
            adj[a].push((a, id));
        }
    }
    if let Some(v) = (0..size).find(|&v| adj[v].len() % 2 == 1) {
        return Err(Error::contract(format!("vertex {v} has odd degree")));
    }
    if adj[start].is_empty() {
        return Err(Error::contract(format!("start vertex {start} has no incident edge")));
    }
    // Later neighbours are consumed first; reverse so the walk follows the
    // edge order given by the caller.
    for list in &mut adj {
        list.reverse();
    }
    let mut used = vec![false; edges.len()];
    let mut stack = vec![start];
    let mut walk = Vec::with_capacity(edges.len() + 1);
    while let Some(&v) = stack.last() {
        while let Some(&(_, id)) = adj[v].last() {
            if used[id] {
                adj[v].pop();
            } else {
                break;
            }
        }
        match adj[v].pop() {
            Some((w, id)) => {
                used[id] = true;
                stack.push(w);
            }
            None => {
                walk.push(v);
                stack.pop();
            }
        }
    }
    if walk.len() != edges.len() + 1 {
        return Err(Error::contract("edge set is disconnected"));
    }
    walk.reverse();
    Ok(walk)
}

/// Keeps the first visit of every vertex accepted by `keep`, preserving order.
/// By the triangle inequality the resulting cycle is no longer than the walk.
pub fn shortcut(walk: &[usize], keep: impl Fn(usize) -> bool) -> Vec<usize> {
    let mut seen = std::collections::HashSet::new();
    walk.iter().copied().filter(|&v| keep(v) && seen.insert(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Instance;

    #[test]
    fn triangle() {
        let walk = eulerian_tour(&[(0, 1), (1, 2), (2, 0)], None).unwrap();
        assert_eq!(walk, vec![0, 1, 2, 0]);
    }

    #[test]
    fn doubled_edge() {
        let walk = eulerian_tour(&[(0, 1), (0, 1)], Some(0)).unwrap();
        assert_eq!(walk, vec![0, 1, 0]);
        assert_eq!(shortcut(&walk, |_| true), vec![0, 1]);
    }

    #[test]
    fn odd_and_disconnected_rejected() {
        assert!(eulerian_tour(&[(0, 1)], None).is_err());
        assert!(eulerian_tour(&[(0, 1), (0, 1), (2, 3), (2, 3)], None).is_err());
    }

    #[test]
    fn shortcut_never_longer() {
        // a=0 b=1 c=2 on a line: b at 1, a at 0, c at 2 (distances in units)
        let costs = vec![0, 1, 2, 1, 0, 1, 2, 1, 0];
        let inst = Instance::from_matrix(1, vec![1], vec![1, 1], costs, None).unwrap();
        let walk = [0, 1, 0, 2, 0];
        let cycle = shortcut(&walk, |_| true);
        assert_eq!(cycle, vec![0, 1, 2]);
        assert!(inst.cycle_cost(&cycle) <= inst.walk_cost(&walk));
    }

    #[test]
    fn uses_every_edge_once() {
        let edges = [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)];
        let walk = eulerian_tour(&edges, Some(0)).unwrap();
        assert_eq!(walk.len(), edges.len() + 1);
        let mut used: Vec<(usize, usize)> =
            walk.windows(2).map(|w| (w[0].min(w[1]), w[0].max(w[1]))).collect();
        used.sort();
        let mut want: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        want.sort();
        assert_eq!(used, want);
    }
}
