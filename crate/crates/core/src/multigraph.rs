//! Undirected multigraph with loops and parallel edges.
//!
//! Vertices carry dense 1-based ids. A loop adds 2 to its endpoint's degree
//! and 1 to the edge count; distances are taken over the simple support, so
//! loops and parallel copies never shorten a path.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Dense vertex id. Id 1 is always the reference vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    pub const REFERENCE: VertexId = VertexId(1);

    /// Zero-based slot of this id.
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    #[inline]
    pub fn from_index(index: usize) -> Self {
        VertexId(index as u32 + 1)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Neighbor {
    vertex: u32,
    multiplicity: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MultiGraph {
    edges: Vec<(VertexId, VertexId)>,
    adjacency: Vec<Vec<Neighbor>>,
    degrees: Vec<u64>,
}

impl MultiGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices(count: usize) -> Self {
        let mut g = Self::new();
        for _ in 0..count {
            g.add_vertex();
        }
        g
    }

    /// Builds a graph on `count` vertices from an edge list of raw ids.
    pub fn from_edges(count: usize, edges: &[(u32, u32)]) -> Result<Self, GraphError> {
        let mut g = Self::with_vertices(count);
        for &(u, v) in edges {
            g.add_edge(VertexId(u), VertexId(v))?;
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edge multiset in insertion order.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertex_count()).map(VertexId::from_index)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v.0 >= 1 && v.index() < self.vertex_count()
    }

    fn check(&self, v: VertexId) -> Result<(), GraphError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(GraphError::InvalidVertex {
                id: v.0,
                vertex_count: self.vertex_count(),
            })
        }
    }

    pub fn add_vertex(&mut self) -> VertexId {
        self.adjacency.push(Vec::new());
        self.degrees.push(0);
        VertexId(self.adjacency.len() as u32)
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        self.check(u)?;
        self.check(v)?;
        self.edges.push((u, v));
        Self::bump(&mut self.adjacency[u.index()], v.0);
        if u != v {
            Self::bump(&mut self.adjacency[v.index()], u.0);
        }
        self.degrees[u.index()] += 1;
        self.degrees[v.index()] += 1;
        Ok(())
    }

    fn bump(list: &mut Vec<Neighbor>, vertex: u32) {
        match list.iter_mut().find(|n| n.vertex == vertex) {
            Some(n) => n.multiplicity += 1,
            None => list.push(Neighbor {
                vertex,
                multiplicity: 1,
            }),
        }
    }

    pub fn degree(&self, v: VertexId) -> Result<u64, GraphError> {
        self.check(v)?;
        Ok(self.degrees[v.index()])
    }

    /// Degrees of all vertices, indexed by `VertexId::index`.
    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    /// Number of parallel copies of `{u, v}`; loops are reported per copy.
    pub fn multiplicity(&self, u: VertexId, v: VertexId) -> Result<u32, GraphError> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.adjacency[u.index()]
            .iter()
            .find(|n| n.vertex == v.0)
            .map_or(0, |n| n.multiplicity))
    }

    /// Distinct non-loop neighbours of `v`.
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adjacency[v.index()]
            .iter()
            .filter(move |n| n.vertex != v.0)
            .map(|n| VertexId(n.vertex))
    }

    /// Hop counts from `source`, indexed by `VertexId::index`.
    pub fn bfs_distances(&self, source: VertexId) -> Result<Vec<u32>, GraphError> {
        self.check(source)?;
        let n = self.vertex_count();
        let mut dist = vec![u32::MAX; n];
        let mut queue = VecDeque::with_capacity(n);
        dist[source.index()] = 0;
        queue.push_back(source.index());
        let mut seen = 1usize;
        while let Some(u) = queue.pop_front() {
            let du = dist[u];
            for nb in &self.adjacency[u] {
                let w = nb.vertex as usize - 1;
                if dist[w] == u32::MAX {
                    dist[w] = du + 1;
                    seen += 1;
                    queue.push_back(w);
                }
            }
        }
        if seen != n {
            return Err(GraphError::Disconnected {
                start: source.0,
                reached: seen,
                vertex_count: n,
            });
        }
        Ok(dist)
    }

    pub fn eccentricity(&self, v: VertexId) -> Result<u32, GraphError> {
        Ok(self.bfs_distances(v)?.into_iter().max().unwrap_or(0))
    }

    /// Eccentricity of every vertex by one BFS per source.
    pub fn eccentricities(&self) -> Result<Vec<u32>, GraphError> {
        self.vertices().map(|v| self.eccentricity(v)).collect()
    }

    /// Brute-force diameter over all sources.
    pub fn diameter(&self) -> Result<u32, GraphError> {
        Ok(self.eccentricities()?.into_iter().max().unwrap_or(0))
    }

    /// Full distance matrix, row `i` holding distances from `VertexId::from_index(i)`.
    pub fn all_pairs_distances(&self) -> Result<Vec<Vec<u32>>, GraphError> {
        self.vertices().map(|v| self.bfs_distances(v)).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() == 0 || self.bfs_distances(VertexId::REFERENCE).is_ok()
    }
}
