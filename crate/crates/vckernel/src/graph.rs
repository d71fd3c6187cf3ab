//! Mutable simple undirected graphs with stable vertex identities.
//!
//! Vertex ids are handed out monotonically and never reused, so that
//! modification records and the local isomorphism test can refer to vertices
//! across time. Adjacency is kept in ordered sets; all iteration over
//! vertices and neighborhoods is therefore deterministic.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use thiserror::Error;

/// Handle of a vertex. Ids stay valid (as names) after deletion; a deleted id
/// is never handed out again by the same graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} is not live")]
    InvalidVertex(VertexId),
    #[error("edge {{{0}, {1}}} already exists")]
    EdgeExists(VertexId, VertexId),
    #[error("edge {{{0}, {1}}} does not exist")]
    EdgeMissing(VertexId, VertexId),
    #[error("self-loop at vertex {0} rejected")]
    SelfLoop(VertexId),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

/// A simple undirected graph. No self-loops, no parallel edges.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
    next_id: u32,
    m: usize,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph with vertices `0..n` and the given edges.
    pub fn from_edges(n: u32, edges: &[(u32, u32)]) -> Self {
        let mut g = Graph::new();
        for _ in 0..n {
            g.add_vertex();
        }
        for &(u, v) in edges {
            g.add_edge(VertexId(u), VertexId(v)).expect("valid edge list");
        }
        g
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn is_live(&self, v: VertexId) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.keys().copied()
    }

    pub fn vertex_set(&self) -> BTreeSet<VertexId> {
        self.adj.keys().copied().collect()
    }

    /// Edges as ordered pairs (u < v), in sorted order.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.m);
        for (&u, nbrs) in &self.adj {
            for &v in nbrs.range(u..) {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn add_vertex(&mut self) -> VertexId {
        let id = VertexId(self.next_id);
        self.next_id += 1;
        self.adj.insert(id, BTreeSet::new());
        id
    }

    /// Re-inserts a vertex under a caller-chosen id. Used by parsers and by
    /// trace replay, which must reproduce recorded ids exactly.
    pub fn insert_vertex_with_id(&mut self, v: VertexId) -> Result<(), GraphError> {
        if self.adj.contains_key(&v) {
            return Err(GraphError::InvalidArgument("vertex id already live"));
        }
        self.next_id = self.next_id.max(v.0 + 1);
        self.adj.insert(v, BTreeSet::new());
        Ok(())
    }

    pub fn remove_vertex(&mut self, v: VertexId) -> Result<(), GraphError> {
        let nbrs = self.adj.remove(&v).ok_or(GraphError::InvalidVertex(v))?;
        self.m -= nbrs.len();
        for u in nbrs {
            self.adj.get_mut(&u).expect("symmetric adjacency").remove(&v);
        }
        Ok(())
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj.get(&u).is_some_and(|n| n.contains(&v))
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if !self.is_live(u) {
            return Err(GraphError::InvalidVertex(u));
        }
        if !self.is_live(v) {
            return Err(GraphError::InvalidVertex(v));
        }
        if self.has_edge(u, v) {
            return Err(GraphError::EdgeExists(u, v));
        }
        self.adj.get_mut(&u).unwrap().insert(v);
        self.adj.get_mut(&v).unwrap().insert(u);
        self.m += 1;
        Ok(())
    }

    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        if !self.is_live(u) {
            return Err(GraphError::InvalidVertex(u));
        }
        if !self.is_live(v) {
            return Err(GraphError::InvalidVertex(v));
        }
        if !self.has_edge(u, v) {
            return Err(GraphError::EdgeMissing(u, v));
        }
        self.adj.get_mut(&u).unwrap().remove(&v);
        self.adj.get_mut(&v).unwrap().remove(&u);
        self.m -= 1;
        Ok(())
    }

    pub fn degree(&self, v: VertexId) -> Result<usize, GraphError> {
        self.adj.get(&v).map(|n| n.len()).ok_or(GraphError::InvalidVertex(v))
    }

    pub fn neighbors(&self, v: VertexId) -> Result<&BTreeSet<VertexId>, GraphError> {
        self.adj.get(&v).ok_or(GraphError::InvalidVertex(v))
    }

    /// Closed neighborhood N[v].
    pub fn closed_neighbors(&self, v: VertexId) -> Result<BTreeSet<VertexId>, GraphError> {
        let mut out = self.neighbors(v)?.clone();
        out.insert(v);
        Ok(out)
    }

    /// Open neighborhood of a set: all neighbors of members, minus the set.
    pub fn set_neighbors(&self, s: &BTreeSet<VertexId>) -> Result<BTreeSet<VertexId>, GraphError> {
        let mut out = BTreeSet::new();
        for &v in s {
            out.extend(self.neighbors(v)?.iter().copied());
        }
        for v in s {
            out.remove(v);
        }
        Ok(out)
    }

    /// Closed neighborhood of a set, N[S].
    pub fn set_closed_neighbors(
        &self,
        s: &BTreeSet<VertexId>,
    ) -> Result<BTreeSet<VertexId>, GraphError> {
        let mut out = self.set_neighbors(s)?;
        out.extend(s.iter().copied());
        Ok(out)
    }

    /// Merges a vertex set into one fresh vertex whose neighborhood is
    /// N(S) \ S. A singleton merge relabels the vertex to a fresh id.
    pub fn merge_vertices(&mut self, s: &BTreeSet<VertexId>) -> Result<VertexId, GraphError> {
        if s.is_empty() {
            return Err(GraphError::InvalidArgument("merge of empty vertex set"));
        }
        let outside = self.set_neighbors(s)?;
        for &v in s {
            self.remove_vertex(v)?;
        }
        let merged = self.add_vertex();
        for u in outside {
            self.add_edge(merged, u)?;
        }
        Ok(merged)
    }

    /// All vertices at hop distance at most `radius` from `r`.
    pub fn ball(&self, r: VertexId, radius: usize) -> Result<BTreeSet<VertexId>, GraphError> {
        if !self.is_live(r) {
            return Err(GraphError::InvalidVertex(r));
        }
        let mut seen = BTreeSet::from([r]);
        let mut frontier = VecDeque::from([(r, 0usize)]);
        while let Some((v, d)) = frontier.pop_front() {
            if d == radius {
                continue;
            }
            for &u in self.adj[&v].iter() {
                if seen.insert(u) {
                    frontier.push_back((u, d + 1));
                }
            }
        }
        Ok(seen)
    }

    pub fn is_independent_set(&self, s: &BTreeSet<VertexId>) -> Result<bool, GraphError> {
        for &v in s {
            let nbrs = self.neighbors(v)?;
            if s.iter().any(|u| u != &v && nbrs.contains(u)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_clique(&self, s: &BTreeSet<VertexId>) -> Result<bool, GraphError> {
        let members: Vec<VertexId> = s.iter().copied().collect();
        for (i, &u) in members.iter().enumerate() {
            let nbrs = self.neighbors(u)?;
            for &v in &members[i + 1..] {
                if !nbrs.contains(&v) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Subgraph induced by `s`, keeping the original vertex ids.
    pub fn induced_subgraph(&self, s: &BTreeSet<VertexId>) -> Result<Graph, GraphError> {
        let mut g = Graph::new();
        for &v in s {
            if !self.is_live(v) {
                return Err(GraphError::InvalidVertex(v));
            }
            g.insert_vertex_with_id(v).unwrap();
        }
        for &v in s {
            for &u in self.adj[&v].iter() {
                if u > v && s.contains(&u) {
                    g.add_edge(v, u).unwrap();
                }
            }
        }
        Ok(g)
    }

    /// Complement of the subgraph induced by `s`.
    pub fn complement_of_induced(&self, s: &BTreeSet<VertexId>) -> Result<Graph, GraphError> {
        let induced = self.induced_subgraph(s)?;
        let mut g = Graph::new();
        let members: Vec<VertexId> = s.iter().copied().collect();
        for &v in &members {
            g.insert_vertex_with_id(v).unwrap();
        }
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                if !induced.has_edge(u, v) {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        Ok(g)
    }

    /// Checks adjacency symmetry, absence of self-loops, and the edge count.
    pub fn validate(&self) -> Result<(), GraphError> {
        let mut degree_sum = 0;
        for (&v, nbrs) in &self.adj {
            degree_sum += nbrs.len();
            if nbrs.contains(&v) {
                return Err(GraphError::SelfLoop(v));
            }
            for u in nbrs {
                let back = self.adj.get(u).ok_or(GraphError::InvalidVertex(*u))?;
                if !back.contains(&v) {
                    return Err(GraphError::InvalidArgument("asymmetric adjacency"));
                }
            }
        }
        if degree_sum != 2 * self.m {
            return Err(GraphError::InvalidArgument("edge count out of sync"));
        }
        Ok(())
    }
}

/// Whether the instance carries a real budget or runs in counting mode with
/// k initialized to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Counting,
    Budget,
}

/// A vertex cover instance: a graph together with the signed parameter k.
/// In counting mode k starts at 0 and may go negative; after reducing to an
/// empty graph, -k is the vertex cover number of the original graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub k: i64,
    pub mode: Mode,
}

impl Instance {
    pub fn counting(graph: Graph) -> Self {
        Instance { graph, k: 0, mode: Mode::Counting }
    }

    pub fn budget(graph: Graph, k: i64) -> Self {
        Instance { graph, k, mode: Mode::Budget }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(raw: &[u32]) -> BTreeSet<VertexId> {
        raw.iter().map(|&i| VertexId(i)).collect()
    }

    #[test]
    fn vertex_ids_are_never_reused() {
        let mut g = Graph::new();
        let a = g.add_vertex();
        let b = g.add_vertex();
        g.remove_vertex(b).unwrap();
        let c = g.add_vertex();
        let d = g.add_vertex();
        assert_eq!((a, c, d), (VertexId(0), VertexId(2), VertexId(3)));
        assert_eq!(g.vertex_set(), ids(&[0, 2, 3]));
    }

    #[test]
    fn add_vertex_keeps_edges() {
        let mut g = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        g.add_vertex();
        assert_eq!(g.num_vertices(), 4);
        assert_eq!(g.num_edges(), 3);
    }

    #[test]
    fn remove_vertex_updates_neighbors() {
        // triangle: removing one vertex leaves a single edge
        let mut g = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        g.remove_vertex(VertexId(2)).unwrap();
        assert_eq!(g.num_edges(), 1);
        assert!(g.has_edge(VertexId(0), VertexId(1)));

        // star center removal isolates the leaves
        let mut star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        star.remove_vertex(VertexId(0)).unwrap();
        assert_eq!(star.num_edges(), 0);
        assert_eq!(star.num_vertices(), 3);

        assert_eq!(star.remove_vertex(VertexId(0)), Err(GraphError::InvalidVertex(VertexId(0))));
    }

    #[test]
    fn edge_state_errors() {
        let mut g = Graph::from_edges(2, &[(0, 1)]);
        assert_eq!(
            g.add_edge(VertexId(0), VertexId(1)),
            Err(GraphError::EdgeExists(VertexId(0), VertexId(1)))
        );
        let mut p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        p3.add_edge(VertexId(0), VertexId(2)).unwrap();
        assert_eq!(p3.num_edges(), 3);
        p3.remove_edge(VertexId(0), VertexId(2)).unwrap();
        assert_eq!(p3.num_edges(), 2);
        assert_eq!(
            p3.remove_edge(VertexId(0), VertexId(2)),
            Err(GraphError::EdgeMissing(VertexId(0), VertexId(2)))
        );
    }

    #[test]
    fn merge_path_center() {
        // P3 collapses to one isolated vertex
        let mut g = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        let v = g.merge_vertices(&ids(&[0, 1, 2])).unwrap();
        assert_eq!(g.num_vertices(), 1);
        assert_eq!(g.degree(v).unwrap(), 0);

        // P5: merging the middle three leaves P3
        let mut p5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        let mid = p5.merge_vertices(&ids(&[1, 2, 3])).unwrap();
        assert_eq!(p5.num_vertices(), 3);
        assert!(p5.has_edge(mid, VertexId(0)));
        assert!(p5.has_edge(mid, VertexId(4)));
        assert!(!p5.has_edge(VertexId(0), VertexId(4)));
    }

    #[test]
    fn merge_singleton_relabels() {
        let mut g = Graph::from_edges(3, &[(0, 1), (0, 2)]);
        let fresh = g.merge_vertices(&ids(&[0])).unwrap();
        assert_eq!(fresh, VertexId(3));
        assert_eq!(g.neighbors(fresh).unwrap(), &ids(&[1, 2]));
    }

    #[test]
    fn merge_count_invariant() {
        let mut g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        let before = g.num_vertices();
        g.merge_vertices(&ids(&[0, 1, 2])).unwrap();
        assert_eq!(g.num_vertices(), before - 3 + 1);
        g.validate().unwrap();
    }

    #[test]
    fn ball_radii() {
        let p5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        assert_eq!(p5.ball(VertexId(2), 1).unwrap().len(), 3);
        assert_eq!(p5.ball(VertexId(2), 0).unwrap(), ids(&[2]));
        let c6 = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        assert_eq!(c6.ball(VertexId(0), 3).unwrap().len(), 6);
        // the whole connected component at diameter distance
        assert_eq!(p5.ball(VertexId(0), 4).unwrap().len(), 5);
    }

    #[test]
    fn structure_queries() {
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert!(c4.is_independent_set(&ids(&[0, 2])).unwrap());
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert!(k4.is_clique(&ids(&[0, 2, 3])).unwrap());
        let empty3 = Graph::from_edges(3, &[]);
        let comp = empty3.complement_of_induced(&ids(&[0, 1, 2])).unwrap();
        assert_eq!(comp.num_edges(), 3);
    }

    #[test]
    fn validate_after_mutations() {
        let mut g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        g.remove_vertex(VertexId(2)).unwrap();
        g.add_vertex();
        g.add_edge(VertexId(0), VertexId(4)).unwrap();
        g.validate().unwrap();
    }
}
