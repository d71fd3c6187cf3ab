//! The data reduction rules: forward (shrinking) and backward (inflating).
//!
//! Each rule comes as a site enumerator and an applier. A site names the
//! concrete vertices and choices of one nondeterministic application, so that
//! applying the same site to the same instance is always deterministic.
//! Appliers re-validate their preconditions and fail with a stale-site error
//! on instances that have moved on.

pub mod backward;
pub mod forward;
pub mod lp;

pub use crate::record::{AnyRuleId, BackwardRuleId, ForwardRuleId};

use crate::graph::{GraphError, VertexId};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RuleError {
    #[error("stale site: {0}")]
    StaleSite(String),
    #[error("rule not applicable: {0}")]
    NotApplicable(String),
    #[error("rule {0} requires budget mode")]
    RequiresBudgetMode(&'static str),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// One concrete forward-rule application.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForwardSite {
    Deg0 { v: VertexId },
    Deg1 { v: VertexId, u: VertexId },
    Deg2Fold { v: VertexId, a: VertexId, b: VertexId },
    Deg3Is { v: VertexId, perm: [VertexId; 3] },
    DegGtK { v: VertexId },
    Dom { u: VertexId, v: VertexId },
    Unconf { v: VertexId },
    UnconfKappa { v: VertexId, kappa: u32 },
    Desk { cycle: [VertexId; 4] },
    Cn { v: VertexId, c1: Vec<VertexId>, c2: Vec<VertexId> },
    OeDel { a: VertexId, b: VertexId, c: VertexId },
    Struct { v: VertexId, order: Vec<VertexId>, unguarded: bool },
    Triangle { v: VertexId, u: VertexId, w: VertexId },
    Magnet { a: VertexId, b: VertexId },
    Lp { v0: Vec<VertexId>, v1: Vec<VertexId> },
}

impl ForwardSite {
    pub fn rule(&self) -> ForwardRuleId {
        match self {
            ForwardSite::Deg0 { .. } => ForwardRuleId::Deg0,
            ForwardSite::Deg1 { .. } => ForwardRuleId::Deg1,
            ForwardSite::Deg2Fold { .. } => ForwardRuleId::Deg2Fold,
            ForwardSite::Deg3Is { .. } => ForwardRuleId::Deg3Is,
            ForwardSite::DegGtK { .. } => ForwardRuleId::DegGtK,
            ForwardSite::Dom { .. } => ForwardRuleId::Dom,
            ForwardSite::Unconf { .. } => ForwardRuleId::Unconf,
            ForwardSite::UnconfKappa { .. } => ForwardRuleId::UnconfKappa,
            ForwardSite::Desk { .. } => ForwardRuleId::Desk,
            ForwardSite::Cn { .. } => ForwardRuleId::Cn,
            ForwardSite::OeDel { .. } => ForwardRuleId::OeDel,
            ForwardSite::Struct { .. } => ForwardRuleId::Struct,
            ForwardSite::Triangle { .. } => ForwardRuleId::Triangle,
            ForwardSite::Magnet { .. } => ForwardRuleId::Magnet,
            ForwardSite::Lp { .. } => ForwardRuleId::Lp,
        }
    }

    /// The vertices that make the site relevant for a region of interest.
    pub fn relevant(&self) -> BTreeSet<VertexId> {
        match self {
            ForwardSite::Deg0 { v }
            | ForwardSite::DegGtK { v }
            | ForwardSite::Unconf { v }
            | ForwardSite::UnconfKappa { v, .. } => BTreeSet::from([*v]),
            ForwardSite::Deg1 { v, u } => BTreeSet::from([*v, *u]),
            ForwardSite::Deg2Fold { v, a, b } => BTreeSet::from([*v, *a, *b]),
            ForwardSite::Deg3Is { v, perm } => {
                let mut s = BTreeSet::from([*v]);
                s.extend(perm.iter().copied());
                s
            }
            ForwardSite::Dom { u, v } => BTreeSet::from([*u, *v]),
            ForwardSite::Desk { cycle } => cycle.iter().copied().collect(),
            ForwardSite::Cn { v, c1, c2 } => {
                let mut s = BTreeSet::from([*v]);
                s.extend(c1.iter().copied());
                s.extend(c2.iter().copied());
                s
            }
            ForwardSite::OeDel { a, b, c } => BTreeSet::from([*a, *b, *c]),
            ForwardSite::Struct { v, order, .. } => {
                let mut s = BTreeSet::from([*v]);
                s.extend(order.iter().copied());
                s
            }
            ForwardSite::Triangle { v, u, w } => BTreeSet::from([*v, *u, *w]),
            ForwardSite::Magnet { a, b } => BTreeSet::from([*a, *b]),
            ForwardSite::Lp { v0, v1 } => v0.iter().chain(v1).copied().collect(),
        }
    }
}

/// One concrete backward-rule application.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackwardSite {
    /// Split v into v, a, b; neighbors listed in `to_a` attach to a, those in
    /// `to_b` attach to b; listing a neighbor in both is allowed.
    Undeg2 { v: VertexId, to_a: Vec<VertexId>, to_b: Vec<VertexId> },
    /// Un-apply the degree-3 rule at the induced path a-b-c. `drops` picks
    /// the optional edge deletion for vertices adjacent to all of a, b, c.
    Undeg3 { a: VertexId, b: VertexId, c: VertexId, drops: Vec<(VertexId, VertexId)> },
    Uncn { a: VertexId, b: VertexId },
    Undom { v: VertexId, s: Vec<VertexId> },
    Ununconf { s: Vec<VertexId> },
    OeIns { a: VertexId, b: VertexId, c: VertexId },
}

impl BackwardSite {
    pub fn rule(&self) -> BackwardRuleId {
        match self {
            BackwardSite::Undeg2 { .. } => BackwardRuleId::Undeg2,
            BackwardSite::Undeg3 { .. } => BackwardRuleId::Undeg3,
            BackwardSite::Uncn { .. } => BackwardRuleId::Uncn,
            BackwardSite::Undom { .. } => BackwardRuleId::Undom,
            BackwardSite::Ununconf { .. } => BackwardRuleId::Ununconf,
            BackwardSite::OeIns { .. } => BackwardRuleId::OeIns,
        }
    }

    pub fn relevant(&self) -> BTreeSet<VertexId> {
        match self {
            BackwardSite::Undeg2 { v, to_a, to_b } => {
                let mut s = BTreeSet::from([*v]);
                s.extend(to_a.iter().copied());
                s.extend(to_b.iter().copied());
                s
            }
            BackwardSite::Undeg3 { a, b, c, .. } => BTreeSet::from([*a, *b, *c]),
            BackwardSite::Uncn { a, b } => BTreeSet::from([*a, *b]),
            BackwardSite::Undom { v, s } => {
                let mut out = BTreeSet::from([*v]);
                out.extend(s.iter().copied());
                out
            }
            BackwardSite::Ununconf { s } => s.iter().copied().collect(),
            BackwardSite::OeIns { a, b, c } => BTreeSet::from([*a, *b, *c]),
        }
    }
}

/// A site of either direction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnySite {
    Forward(ForwardSite),
    Backward(BackwardSite),
}

impl AnySite {
    pub fn rule(&self) -> AnyRuleId {
        match self {
            AnySite::Forward(s) => AnyRuleId::Forward(s.rule()),
            AnySite::Backward(s) => AnyRuleId::Backward(s.rule()),
        }
    }

    pub fn relevant(&self) -> BTreeSet<VertexId> {
        match self {
            AnySite::Forward(s) => s.relevant(),
            AnySite::Backward(s) => s.relevant(),
        }
    }
}
