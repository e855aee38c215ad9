//! Seed validation and the constants every formula reads off the seed.

use num_bigint::BigInt;

use crate::error::SeedError;
use crate::multigraph::{MultiGraph, VertexId};
use crate::Rational;

/// A seed graph with its hook relabelled to id 1.
///
/// The remaining vertices keep their input order as ids `2..=tau0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedSpec {
    graph: MultiGraph,
}

impl SeedSpec {
    pub fn new(graph: MultiGraph, hook: VertexId) -> Result<Self, SeedError> {
        if !graph.contains(hook) {
            return Err(SeedError::InvalidHook(hook.0));
        }
        if hook == VertexId::REFERENCE {
            return Ok(Self { graph });
        }
        let relabel = |v: VertexId| {
            if v == hook {
                VertexId(1)
            } else if v < hook {
                VertexId(v.0 + 1)
            } else {
                v
            }
        };
        let mut relabelled = MultiGraph::with_vertices(graph.vertex_count());
        for &(u, v) in graph.edges() {
            relabelled
                .add_edge(relabel(u), relabel(v))
                .expect("relabelling is a bijection on valid ids");
        }
        Ok(Self { graph: relabelled })
    }

    /// Complete graph on two vertices.
    pub fn k2() -> Self {
        Self::from_raw(2, &[(1, 2)])
    }

    /// Hook with a loop, joined to a middle vertex that carries a double
    /// edge to a bottom vertex.
    pub fn ps() -> Self {
        Self::from_raw(3, &[(1, 1), (1, 2), (2, 3), (2, 3)])
    }

    pub fn triangle() -> Self {
        Self::from_raw(3, &[(1, 2), (2, 3), (3, 1)])
    }

    /// Path on `len` vertices hooked at an end.
    pub fn path(len: u32) -> Self {
        let edges: Vec<_> = (1..len).map(|i| (i, i + 1)).collect();
        Self::from_raw(len as usize, &edges)
    }

    fn from_raw(count: usize, edges: &[(u32, u32)]) -> Self {
        Self {
            graph: MultiGraph::from_edges(count, edges).expect("built-in seed"),
        }
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    pub fn hook(&self) -> VertexId {
        VertexId::REFERENCE
    }
}

pub fn validate_seed(spec: &SeedSpec) -> Result<(), SeedError> {
    let order = spec.graph.vertex_count();
    if order < 2 {
        return Err(SeedError::TooSmall(order));
    }
    if !spec.graph.is_connected() {
        return Err(SeedError::Disconnected);
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedProfile {
    pub graph: MultiGraph,
    /// τ₀, the seed order.
    pub tau0: u64,
    /// η, the seed size (edge count).
    pub eta: u64,
    /// h* = deg(hook).
    pub hook_degree: u64,
    /// d*, the smallest seed degree.
    pub min_degree: u64,
    /// X₀, how many seed vertices have degree d*.
    pub min_degree_count: u64,
    /// Whether the hook itself has degree d*.
    pub hook_is_min: bool,
    /// T₀ = Σ_v d(v, hook).
    pub total_path_length: u64,
    /// D₀ = T₀ / τ₀.
    pub mean_depth: Rational,
    /// C₀(hook).
    pub hook_ecc: u32,
    pub diameter0: u32,
    pub depth_from_hook: Vec<u32>,
    pub ecc0: Vec<u32>,
    pub degree0: Vec<u64>,
}

impl SeedProfile {
    pub fn hook_indicator(&self) -> u64 {
        u64::from(self.hook_is_min)
    }

    /// Minimum-degree vertices contributed by each hooked copy, X₀ − 𝕀.
    pub fn min_degree_per_copy(&self) -> u64 {
        self.min_degree_count - self.hook_indicator()
    }

    pub fn depth_of(&self, v: VertexId) -> u32 {
        self.depth_from_hook[v.index()]
    }

    pub fn ecc_of(&self, v: VertexId) -> u32 {
        self.ecc0[v.index()]
    }

    pub fn degree_of(&self, v: VertexId) -> u64 {
        self.degree0[v.index()]
    }

    /// First non-hook vertex of minimum degree, if any.
    pub fn first_min_degree_vertex(&self) -> Option<VertexId> {
        self.graph
            .vertices()
            .skip(1)
            .find(|&v| self.degree_of(v) == self.min_degree)
    }
}

pub fn profile_seed(spec: &SeedSpec) -> Result<SeedProfile, SeedError> {
    validate_seed(spec)?;
    let graph = spec.graph.clone();
    let hook = spec.hook();
    let degree0 = graph.degrees().to_vec();
    let min_degree = *degree0.iter().min().expect("non-empty seed");
    let min_degree_count = degree0.iter().filter(|&&d| d == min_degree).count() as u64;
    let hook_degree = degree0[hook.index()];
    let depth_from_hook = graph
        .bfs_distances(hook)
        .map_err(|_| SeedError::Disconnected)?;
    let ecc0 = graph.eccentricities().map_err(|_| SeedError::Disconnected)?;
    let total_path_length: u64 = depth_from_hook.iter().map(|&d| u64::from(d)).sum();
    let tau0 = graph.vertex_count() as u64;
    Ok(SeedProfile {
        tau0,
        eta: graph.edge_count() as u64,
        hook_degree,
        min_degree,
        min_degree_count,
        hook_is_min: hook_degree == min_degree,
        total_path_length,
        mean_depth: Rational::new(BigInt::from(total_path_length), BigInt::from(tau0)),
        hook_ecc: ecc0[hook.index()],
        diameter0: *ecc0.iter().max().expect("non-empty seed"),
        depth_from_hook,
        ecc0,
        degree0,
        graph,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn ps_profile() {
        let p = profile_seed(&SeedSpec::ps()).unwrap();
        assert_eq!(p.tau0, 3);
        assert_eq!(p.eta, 4);
        assert_eq!(p.hook_degree, 3);
        assert_eq!(p.min_degree, 2);
        assert_eq!(p.min_degree_count, 1);
        assert!(!p.hook_is_min);
        assert_eq!(p.total_path_length, 3);
        assert_eq!(p.mean_depth, rat(1, 1));
        assert_eq!(p.hook_ecc, 2);
        assert_eq!(p.diameter0, 2);
        assert_eq!(p.degree0.iter().sum::<u64>(), 2 * p.eta);
    }

    #[test]
    fn k2_profile() {
        let p = profile_seed(&SeedSpec::k2()).unwrap();
        assert_eq!(
            (p.tau0, p.eta, p.hook_degree, p.min_degree, p.min_degree_count),
            (2, 1, 1, 1, 2)
        );
        assert!(p.hook_is_min);
        assert_eq!(p.total_path_length, 1);
        assert_eq!(p.mean_depth, rat(1, 2));
        assert_eq!((p.hook_ecc, p.diameter0), (1, 1));
    }

    #[test]
    fn triangle_profile() {
        let p = profile_seed(&SeedSpec::triangle()).unwrap();
        assert_eq!(
            (p.tau0, p.eta, p.hook_degree, p.min_degree, p.min_degree_count),
            (3, 3, 2, 2, 3)
        );
        assert!(p.hook_is_min);
        assert_eq!(p.total_path_length, 2);
    }

    #[test]
    fn hook_relabelled_to_one() {
        // path 1-2-3 hooked at the far end: 3 becomes 1, 1 -> 2, 2 -> 3
        let g = MultiGraph::from_edges(3, &[(1, 2), (2, 3)]).unwrap();
        let spec = SeedSpec::new(g, VertexId(3)).unwrap();
        let p = profile_seed(&spec).unwrap();
        assert_eq!(p.depth_from_hook, vec![0, 2, 1]);
        assert_eq!(p.hook_degree, 1);
        assert!(SeedSpec::new(MultiGraph::with_vertices(2), VertexId(3)).is_err());
    }

    #[test]
    fn rejects_bad_seeds() {
        let single = SeedSpec::new(MultiGraph::with_vertices(1), VertexId(1)).unwrap();
        assert_eq!(validate_seed(&single), Err(SeedError::TooSmall(1)));
        let split = MultiGraph::from_edges(4, &[(1, 2), (3, 4)]).unwrap();
        let split = SeedSpec::new(split, VertexId(1)).unwrap();
        assert_eq!(validate_seed(&split), Err(SeedError::Disconnected));
        assert!(validate_seed(&SeedSpec::ps()).is_ok());
    }

    #[test]
    fn metric_sanity_bounds() {
        for spec in [SeedSpec::k2(), SeedSpec::ps(), SeedSpec::triangle(), SeedSpec::path(5)] {
            let p = profile_seed(&spec).unwrap();
            assert_eq!(p.mean_depth.clone() * BigInt::from(p.tau0), rat(p.total_path_length as i64, 1));
            for &e in &p.ecc0 {
                assert!(e <= p.diameter0 && p.diameter0 <= 2 * e);
            }
            assert_eq!(p.hook_ecc, *p.depth_from_hook.iter().max().unwrap());
            assert!(p.min_degree_count >= 1);
        }
    }
}
