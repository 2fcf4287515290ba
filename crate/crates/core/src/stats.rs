//! Topology summary: size, density, clustering, degree and distance.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::graph::{block_density, Graph};
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphStats<F> {
    #[serde(rename = "nodes")]
    pub node_count: usize,
    #[serde(rename = "edges")]
    pub edge_count: usize,
    pub density: F,
    #[serde(rename = "clustering")]
    pub clustering_coefficient: F,
    #[serde(rename = "avg_degree")]
    pub average_degree: F,
    #[serde(rename = "avg_distance")]
    pub average_distance: F,
}

/// Local clustering coefficient of `v`; `None` when `deg(v) < 2`.
pub fn local_clustering<F: Real>(g: &Graph, v: usize) -> Option<F> {
    let nbrs = g.neighbors(v);
    let k = nbrs.len();
    if k < 2 {
        return None;
    }
    let mut links = 0u64;
    for (i, &a) in nbrs.iter().enumerate() {
        for &b in &nbrs[i + 1..] {
            if g.has_edge(a, b) {
                links += 1;
            }
        }
    }
    Some(F::count(2 * links) / F::count((k * (k - 1)) as u64))
}

/// Summary statistics of `g`, normally called on its giant component.
///
/// The clustering coefficient averages the local coefficient over nodes of
/// degree at least two. The average distance runs over unordered pairs that
/// are mutually reachable.
pub fn graph_stats<F: Real>(g: &Graph) -> GraphStats<F> {
    let n = g.node_count();
    let all: Vec<usize> = (0..n).collect();
    let density = if n < 2 {
        F::zero()
    } else {
        block_density(g, &all)
    };

    let (sum_c, counted) = (0..n)
        .filter_map(|v| local_clustering::<F>(g, v))
        .fold((F::zero(), 0u64), |(s, c), x| (s + x, c + 1));
    let clustering = if counted == 0 {
        F::zero()
    } else {
        sum_c / F::count(counted)
    };

    let average_degree = if n == 0 {
        F::zero()
    } else {
        F::count(2 * g.edge_count() as u64) / F::count(n as u64)
    };

    let (dist_sum, pairs) = distance_totals(g);
    let average_distance = if pairs == 0 {
        F::zero()
    } else {
        F::count(dist_sum) / F::count(pairs)
    };

    GraphStats {
        node_count: n,
        edge_count: g.edge_count(),
        density,
        clustering_coefficient: clustering,
        average_degree,
        average_distance,
    }
}

/// Sum of shortest-path lengths and number of reachable unordered pairs.
fn distance_totals(g: &Graph) -> (u64, u64) {
    let n = g.node_count();
    let mut dist = vec![u32::MAX; n];
    let mut queue = VecDeque::new();
    let (mut total, mut pairs) = (0u64, 0u64);
    for s in 0..n {
        dist.fill(u32::MAX);
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for &u in g.neighbors(v) {
                if dist[u] == u32::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                    if u > s {
                        total += dist[u] as u64;
                        pairs += 1;
                    }
                }
            }
        }
    }
    (total, pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_stats() {
        let g = Graph::with_node_count(3, [(0, 1), (1, 2), (0, 2)]);
        let s: GraphStats<f64> = graph_stats(&g);
        assert_eq!(s.clustering_coefficient, 1.0);
        assert_eq!(s.average_distance, 1.0);
        assert_eq!(s.density, 1.0);
        assert_eq!(s.average_degree, 2.0);
    }

    #[test]
    fn path_stats() {
        let g = Graph::with_node_count(4, [(0, 1), (1, 2), (2, 3)]);
        let s: GraphStats<f64> = graph_stats(&g);
        assert_eq!(s.average_degree, 1.5);
        assert_eq!(s.clustering_coefficient, 0.0);
        // pair distances: three at 1, two at 2, one at 3
        assert!((s.average_distance - 10.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn json_keys() {
        let g = Graph::with_node_count(2, [(0, 1)]);
        let s: GraphStats<f64> = graph_stats(&g);
        let v = serde_json::to_value(s).unwrap();
        for key in [
            "nodes",
            "edges",
            "density",
            "clustering",
            "avg_degree",
            "avg_distance",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
    }
}
