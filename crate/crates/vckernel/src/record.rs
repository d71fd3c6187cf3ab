//! Graph modification records.
//!
//! Every rule application is logged as a 4-tuple-style record: the removed
//! subgraph, the inserted subgraph, the boundary between them, and the change
//! of the parameter k, plus enough rule-specific choice data to replay the
//! step, to lift covers across it, and to restore inflated instances.

use crate::graph::{Graph, GraphError, Instance, VertexId};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
}

/// Identifiers of the forward (reduction) rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForwardRuleId {
    Deg0,
    Deg1,
    Deg2Fold,
    Deg3Is,
    DegGtK,
    Dom,
    Unconf,
    UnconfKappa,
    Desk,
    Cn,
    OeDel,
    Struct,
    /// Struction restricted to degree-2 vertices with adjacent neighbors.
    Triangle,
    Magnet,
    Lp,
}

impl ForwardRuleId {
    /// Preprocessing pipeline order used by the kernelize command.
    pub const PIPELINE_DEFAULT: &'static [ForwardRuleId] = &[
        ForwardRuleId::Deg1,
        ForwardRuleId::Deg2Fold,
        ForwardRuleId::Deg3Is,
        ForwardRuleId::UnconfKappa,
        ForwardRuleId::Cn,
        ForwardRuleId::Lp,
        ForwardRuleId::Struct,
        ForwardRuleId::Magnet,
        ForwardRuleId::OeDel,
    ];

    /// Every forward rule, in glossary order.
    pub const ALL: &'static [ForwardRuleId] = &[
        ForwardRuleId::Deg0,
        ForwardRuleId::Deg1,
        ForwardRuleId::Deg2Fold,
        ForwardRuleId::Deg3Is,
        ForwardRuleId::DegGtK,
        ForwardRuleId::Dom,
        ForwardRuleId::Unconf,
        ForwardRuleId::UnconfKappa,
        ForwardRuleId::Desk,
        ForwardRuleId::Cn,
        ForwardRuleId::OeDel,
        ForwardRuleId::Struct,
        ForwardRuleId::Triangle,
        ForwardRuleId::Magnet,
        ForwardRuleId::Lp,
    ];

    pub fn alias(self) -> &'static str {
        match self {
            ForwardRuleId::Deg0 => "Deg0",
            ForwardRuleId::Deg1 => "Deg1",
            ForwardRuleId::Deg2Fold => "Deg2",
            ForwardRuleId::Deg3Is => "Deg3",
            ForwardRuleId::DegGtK => "DegK",
            ForwardRuleId::Dom => "Dom",
            ForwardRuleId::Unconf => "Unconf1",
            ForwardRuleId::UnconfKappa => "Unconf",
            ForwardRuleId::Desk => "Desk",
            ForwardRuleId::Cn => "CN",
            ForwardRuleId::OeDel => "OE_Del",
            ForwardRuleId::Struct => "Struct",
            ForwardRuleId::Triangle => "Triangle",
            ForwardRuleId::Magnet => "Magnet",
            ForwardRuleId::Lp => "LP",
        }
    }

    pub fn from_alias(name: &str) -> Option<ForwardRuleId> {
        let lower = name.to_ascii_lowercase();
        ForwardRuleId::ALL.iter().copied().find(|r| r.alias().to_ascii_lowercase() == lower)
    }
}

impl std::fmt::Display for ForwardRuleId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.alias())
    }
}

/// Identifiers of the backward (inflation) rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackwardRuleId {
    Undeg2,
    Undeg3,
    Uncn,
    Undom,
    Ununconf,
    OeIns,
}

impl BackwardRuleId {
    pub const ALL: &'static [BackwardRuleId] = &[
        BackwardRuleId::Undeg2,
        BackwardRuleId::Undeg3,
        BackwardRuleId::Uncn,
        BackwardRuleId::Undom,
        BackwardRuleId::Ununconf,
        BackwardRuleId::OeIns,
    ];

    pub fn alias(self) -> &'static str {
        match self {
            BackwardRuleId::Undeg2 => "Undeg2",
            BackwardRuleId::Undeg3 => "Undeg3",
            BackwardRuleId::Uncn => "Uncn",
            BackwardRuleId::Undom => "Undom",
            BackwardRuleId::Ununconf => "Ununconf",
            BackwardRuleId::OeIns => "OE_Ins",
        }
    }

    pub fn from_alias(name: &str) -> Option<BackwardRuleId> {
        let lower = name.to_ascii_lowercase();
        BackwardRuleId::ALL.iter().copied().find(|r| r.alias().to_ascii_lowercase() == lower)
    }
}

impl std::fmt::Display for BackwardRuleId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.alias())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AnyRuleId {
    Forward(ForwardRuleId),
    Backward(BackwardRuleId),
}

impl std::fmt::Display for AnyRuleId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AnyRuleId::Forward(r) => r.fmt(f),
            AnyRuleId::Backward(r) => r.fmt(f),
        }
    }
}

/// One grow step of the unconfined check: the certificate sets (X, Y) whose
/// single outside neighbor was added to S.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnconfStep {
    pub x: Vec<VertexId>,
    pub y: Vec<VertexId>,
    pub grew: VertexId,
}

/// The full certificate trail of a successful unconfined check, ending in a
/// set X whose neighborhood is contained in N[S].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnconfTrajectory {
    pub steps: Vec<UnconfStep>,
    pub final_x: Vec<VertexId>,
    pub final_y: Vec<VertexId>,
}

/// Rule-specific choice data: the concrete nondeterministic decisions of the
/// application plus whatever the solution-lifting step needs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordChoice {
    Deg0 {
        v: VertexId,
    },
    Deg1 {
        v: VertexId,
        u: VertexId,
    },
    Deg2Fold {
        v: VertexId,
        a: VertexId,
        b: VertexId,
        merged: VertexId,
    },
    Deg3Is {
        v: VertexId,
        perm: [VertexId; 3],
    },
    DegGtK {
        v: VertexId,
    },
    Dom {
        u: VertexId,
        v: VertexId,
    },
    Unconf {
        v: VertexId,
    },
    UnconfKappa {
        v: VertexId,
        kappa: u32,
    },
    Desk {
        cycle: [VertexId; 4],
        a_out: Vec<VertexId>,
        b_out: Vec<VertexId>,
    },
    Cn {
        v: VertexId,
        c1: Vec<VertexId>,
        c2: Vec<VertexId>,
        matching: Vec<(VertexId, VertexId)>,
    },
    OeDel {
        a: VertexId,
        b: VertexId,
        c: VertexId,
        c_adjacent_to: VertexId,
    },
    Struct {
        v: VertexId,
        order: Vec<VertexId>,
        /// created vertex and the indices (into `order`) of its non-edge
        w_map: Vec<(VertexId, u32, u32)>,
    },
    Triangle {
        v: VertexId,
        u: VertexId,
        w: VertexId,
    },
    Magnet {
        a: VertexId,
        b: VertexId,
        c_new: VertexId,
        a_side: Vec<VertexId>,
        b_side: Vec<VertexId>,
        common: Vec<VertexId>,
    },
    Lp {
        v0: Vec<VertexId>,
        v1: Vec<VertexId>,
    },
    Undeg2 {
        v: VertexId,
        a: VertexId,
        b: VertexId,
    },
    Undeg3 {
        a: VertexId,
        b: VertexId,
        c: VertexId,
        v_new: VertexId,
        drops: Vec<(VertexId, VertexId)>,
    },
    Uncn {
        a: VertexId,
        b: VertexId,
        v_new: VertexId,
        c_new: VertexId,
        common: Vec<VertexId>,
    },
    Undom {
        v: VertexId,
        s: Vec<VertexId>,
        u_new: VertexId,
    },
    Ununconf {
        v_new: VertexId,
        s: Vec<VertexId>,
        trajectory: UnconfTrajectory,
    },
    OeIns {
        a: VertexId,
        b: VertexId,
        c: VertexId,
    },
}

/// A recorded graph modification: replaying it on the pre-image instance
/// reproduces the post-image bit-exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModificationRecord {
    pub step: usize,
    pub rule: AnyRuleId,
    pub direction: Direction,
    pub boundary: Vec<VertexId>,
    pub removed_vertices: Vec<VertexId>,
    pub removed_edges: Vec<(VertexId, VertexId)>,
    pub added_vertices: Vec<VertexId>,
    pub added_edges: Vec<(VertexId, VertexId)>,
    pub delta_k: i64,
    pub choice: RecordChoice,
}

impl ModificationRecord {
    /// Every vertex the modification touches: removed, added, or boundary.
    pub fn touched(&self) -> BTreeSet<VertexId> {
        self.removed_vertices
            .iter()
            .chain(&self.added_vertices)
            .chain(&self.boundary)
            .copied()
            .collect()
    }

    /// Modified vertices in the region-of-interest sense: added vertices and
    /// surviving endpoints of changed edges.
    pub fn modified_live(&self, post: &Graph) -> BTreeSet<VertexId> {
        let mut out: BTreeSet<VertexId> = self.added_vertices.iter().copied().collect();
        for &(u, v) in self.removed_edges.iter().chain(&self.added_edges) {
            for w in [u, v] {
                if post.is_live(w) {
                    out.insert(w);
                }
            }
        }
        out.retain(|w| post.is_live(*w));
        out
    }

    /// Applies the recorded structural patch to an instance.
    pub fn replay(&self, instance: &mut Instance) -> Result<(), GraphError> {
        for &(u, v) in &self.removed_edges {
            instance.graph.remove_edge(u, v)?;
        }
        for &v in &self.removed_vertices {
            if instance.graph.degree(v)? != 0 {
                return Err(GraphError::InvalidArgument("record removes a non-isolated vertex"));
            }
            instance.graph.remove_vertex(v)?;
        }
        for &v in &self.added_vertices {
            instance.graph.insert_vertex_with_id(v)?;
        }
        for &(u, v) in &self.added_edges {
            instance.graph.add_edge(u, v)?;
        }
        instance.k += self.delta_k;
        Ok(())
    }
}

/// Raw output of a rule application, before the engine assigns a step index
/// and computes the boundary.
#[derive(Debug, Clone)]
pub struct RecordParts {
    pub removed_vertices: Vec<VertexId>,
    pub removed_edges: Vec<(VertexId, VertexId)>,
    pub added_vertices: Vec<VertexId>,
    pub added_edges: Vec<(VertexId, VertexId)>,
    pub delta_k: i64,
    pub choice: RecordChoice,
}

impl RecordParts {
    pub fn boundary(&self) -> Vec<VertexId> {
        let removed: BTreeSet<VertexId> = self.removed_vertices.iter().copied().collect();
        let added: BTreeSet<VertexId> = self.added_vertices.iter().copied().collect();
        let mut out = BTreeSet::new();
        for &(u, v) in self.removed_edges.iter().chain(&self.added_edges) {
            for w in [u, v] {
                if !removed.contains(&w) && !added.contains(&w) {
                    out.insert(w);
                }
            }
        }
        out.into_iter().collect()
    }

    pub fn into_record(self, step: usize, rule: AnyRuleId, direction: Direction) -> ModificationRecord {
        let boundary = self.boundary();
        ModificationRecord {
            step,
            rule,
            direction,
            boundary,
            removed_vertices: self.removed_vertices,
            removed_edges: self.removed_edges,
            added_vertices: self.added_vertices,
            added_edges: self.added_edges,
            delta_k: self.delta_k,
            choice: self.choice,
        }
    }
}

/// Change logger: performs graph mutations while collecting the record parts.
pub(crate) struct Mutation<'g> {
    g: &'g mut Graph,
    removed_vertices: Vec<VertexId>,
    removed_edges: Vec<(VertexId, VertexId)>,
    added_vertices: Vec<VertexId>,
    added_edges: Vec<(VertexId, VertexId)>,
}

fn norm(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl<'g> Mutation<'g> {
    pub fn new(g: &'g mut Graph) -> Self {
        Mutation {
            g,
            removed_vertices: Vec::new(),
            removed_edges: Vec::new(),
            added_vertices: Vec::new(),
            added_edges: Vec::new(),
        }
    }

    pub fn graph(&self) -> &Graph {
        self.g
    }

    pub fn remove_vertex(&mut self, v: VertexId) -> Result<(), GraphError> {
        let nbrs: Vec<VertexId> = self.g.neighbors(v)?.iter().copied().collect();
        for u in nbrs {
            self.removed_edges.push(norm(v, u));
        }
        self.g.remove_vertex(v)?;
        self.removed_vertices.push(v);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        self.g.remove_edge(u, v)?;
        self.removed_edges.push(norm(u, v));
        Ok(())
    }

    pub fn add_vertex(&mut self) -> VertexId {
        let v = self.g.add_vertex();
        self.added_vertices.push(v);
        v
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        self.g.add_edge(u, v)?;
        self.added_edges.push(norm(u, v));
        Ok(())
    }

    pub fn add_edge_if_missing(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        if u != v && !self.g.has_edge(u, v) {
            self.add_edge(u, v)?;
        }
        Ok(())
    }

    pub fn finish(self, delta_k: i64, choice: RecordChoice) -> RecordParts {
        debug_assert!({
            let set: BTreeSet<_> = self.removed_edges.iter().collect();
            set.len() == self.removed_edges.len()
        });
        RecordParts {
            removed_vertices: self.removed_vertices,
            removed_edges: self.removed_edges,
            added_vertices: self.added_vertices,
            added_edges: self.added_edges,
            delta_k,
            choice,
        }
    }
}
