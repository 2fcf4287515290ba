//! Local similarity indices used as reference predictors.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{ScoreMeta, ScoreTable};
use crate::graph::{Graph, NodeId};
use crate::real::Real;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineMethod {
    /// |Γ(i) ∩ Γ(j)|
    #[default]
    CommonNeighbors,
    /// |Γ(i) ∩ Γ(j)| / |Γ(i) ∪ Γ(j)|
    Jaccard,
    /// Σ 1 / ln deg(z) over common neighbours z
    AdamicAdar,
    /// Σ 1 / deg(z) over common neighbours z
    ResourceAllocation,
}

impl BaselineMethod {
    pub const ALL: [BaselineMethod; 4] = [
        BaselineMethod::CommonNeighbors,
        BaselineMethod::Jaccard,
        BaselineMethod::AdamicAdar,
        BaselineMethod::ResourceAllocation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BaselineMethod::CommonNeighbors => "cn",
            BaselineMethod::Jaccard => "jaccard",
            BaselineMethod::AdamicAdar => "aa",
            BaselineMethod::ResourceAllocation => "ra",
        }
    }
}

impl fmt::Display for BaselineMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BaselineMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cn" | "common_neighbors" | "common-neighbors" => Ok(BaselineMethod::CommonNeighbors),
            "jaccard" => Ok(BaselineMethod::Jaccard),
            "aa" | "adamic_adar" | "adamic-adar" => Ok(BaselineMethod::AdamicAdar),
            "ra" | "resource_allocation" | "resource-allocation" => {
                Ok(BaselineMethod::ResourceAllocation)
            }
            _ => Err(Error::UnknownMethod(s.to_string())),
        }
    }
}

/// Merge-walk over two sorted neighbour lists.
fn common_neighbors<'a>(a: &'a [NodeId], b: &'a [NodeId]) -> impl Iterator<Item = NodeId> + 'a {
    let (mut i, mut j) = (0, 0);
    std::iter::from_fn(move || {
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    let z = a[i];
                    i += 1;
                    j += 1;
                    return Some(z);
                }
            }
        }
        None
    })
}

/// Similarity of one pair under `method`.
pub fn pair_score<F: Real>(g: &Graph, method: BaselineMethod, a: NodeId, b: NodeId) -> F {
    let (na, nb) = (g.neighbors(a), g.neighbors(b));
    let common = common_neighbors(na, nb);
    match method {
        BaselineMethod::CommonNeighbors => F::count(common.count() as u64),
        BaselineMethod::Jaccard => {
            let inter = common.count();
            let union = na.len() + nb.len() - inter;
            if union == 0 {
                F::zero()
            } else {
                F::count(inter as u64) / F::count(union as u64)
            }
        }
        BaselineMethod::AdamicAdar => common.fold(F::zero(), |acc, z| {
            let d = g.degree(z);
            debug_assert!(d >= 2, "common neighbour of degree {d}");
            if d < 2 {
                acc
            } else {
                acc + F::count(d as u64).ln().recip()
            }
        }),
        BaselineMethod::ResourceAllocation => common.fold(F::zero(), |acc, z| {
            acc + F::count(g.degree(z) as u64).recip()
        }),
    }
}

/// Scores every unlinked pair of `g`. Scores are finite and non-negative
/// but not confined to (0, 1).
pub fn score_baseline<F: Real>(g: &Graph, method: BaselineMethod) -> Result<ScoreTable<F>> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let pairs = g.non_edges();
    let scores = pairs
        .iter()
        .map(|&(a, b)| pair_score(g, method, a, b))
        .collect();
    Ok(ScoreTable::from_sorted(
        pairs,
        scores,
        ScoreMeta {
            method: method.name().to_string(),
            threshold: None,
            samples: None,
            master_seed: None,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_common_neighbors() {
        let g = Graph::with_node_count(4, [(0, 1), (1, 2), (2, 3)]);
        let s: ScoreTable<f64> = score_baseline(&g, BaselineMethod::CommonNeighbors).unwrap();
        assert_eq!(s.get(0, 2), Some(1.0));
        assert_eq!(s.get(0, 3), Some(0.0));
    }

    #[test]
    fn clique_minus_edge() {
        // 4-clique on 0..4 without edge 0-2
        let g = Graph::with_node_count(4, [(0, 1), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let cn: f64 = pair_score(&g, BaselineMethod::CommonNeighbors, 0, 2);
        let jac: f64 = pair_score(&g, BaselineMethod::Jaccard, 0, 2);
        let ra: f64 = pair_score(&g, BaselineMethod::ResourceAllocation, 0, 2);
        let aa: f64 = pair_score(&g, BaselineMethod::AdamicAdar, 0, 2);
        assert_eq!(cn, 2.0);
        assert_eq!(jac, 1.0);
        assert!((ra - 2.0 / 3.0).abs() < 1e-15);
        assert!((aa - 2.0 / 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn parse_names() {
        for m in BaselineMethod::ALL {
            assert_eq!(m.name().parse::<BaselineMethod>().unwrap(), m);
        }
        assert!("katz".parse::<BaselineMethod>().is_err());
        assert_eq!(BaselineMethod::default(), BaselineMethod::CommonNeighbors);
    }

    #[test]
    fn symmetric_and_bounded_on_karate() {
        let g = crate::datasets::karate();
        for m in BaselineMethod::ALL {
            for (a, b) in g.non_edges() {
                let x: f64 = pair_score(&g, m, a, b);
                let y: f64 = pair_score(&g, m, b, a);
                assert_eq!(x, y);
                assert!(x.is_finite() && x >= 0.0);
            }
        }
    }
}
