//! Orchestration of rule applications: traces, snapshots, regions of
//! interest, and the randomized exhaustive deflation loop.

use crate::graph::{Graph, GraphError, Instance, VertexId};
use crate::record::{Direction, ModificationRecord, RecordParts};
use crate::rules::{backward, forward, AnySite, BackwardRuleId, ForwardRuleId, RuleError};
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};
use thiserror::Error;

static ENGINE_IDS: AtomicU64 = AtomicU64::new(0);

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("snapshot token belongs to a different engine")]
    ForeignSnapshot,
    #[error("snapshot token is newer than the trace")]
    InvalidSnapshot,
}

/// Restores an engine to an earlier state; tokens unwind LIFO.
#[derive(Debug, Clone)]
pub struct Snapshot {
    engine_id: u64,
    trace_len: usize,
    instance: Instance,
}

/// Single-writer wrapper around an instance and its modification trace.
#[derive(Debug, Clone)]
pub struct Engine {
    id: u64,
    instance: Instance,
    initial: Instance,
    trace: Vec<ModificationRecord>,
    /// kappa for the unconfined-kappa rule (glossary default 4)
    pub kappa: u32,
}

impl Engine {
    pub fn new(instance: Instance) -> Self {
        Engine {
            id: ENGINE_IDS.fetch_add(1, Ordering::Relaxed),
            initial: instance.clone(),
            instance,
            trace: Vec::new(),
            kappa: 4,
        }
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn initial(&self) -> &Instance {
        &self.initial
    }

    pub fn trace(&self) -> &[ModificationRecord] {
        &self.trace
    }

    pub fn k(&self) -> i64 {
        self.instance.k
    }

    /// Applies a site and appends the record to the trace. A stale site
    /// fails without touching the instance.
    pub fn apply_and_record(&mut self, site: &AnySite) -> Result<&ModificationRecord, RuleError> {
        let (parts, direction): (RecordParts, Direction) = match site {
            AnySite::Forward(s) => (forward::apply_site(&mut self.instance, s)?, Direction::Forward),
            AnySite::Backward(s) => {
                (backward::apply_site(&mut self.instance, s)?, Direction::Backward)
            }
        };
        let record = parts.into_record(self.trace.len(), site.rule(), direction);
        self.trace.push(record);
        Ok(self.trace.last().unwrap())
    }

    pub fn find_forward(
        &self,
        rule: ForwardRuleId,
        scope: Option<&BTreeSet<VertexId>>,
    ) -> Vec<crate::rules::ForwardSite> {
        forward::find_sites(&self.instance, rule, scope, self.kappa)
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot { engine_id: self.id, trace_len: self.trace.len(), instance: self.instance.clone() }
    }

    pub fn revert(&mut self, snapshot: Snapshot) -> Result<(), EngineError> {
        if snapshot.engine_id != self.id {
            return Err(EngineError::ForeignSnapshot);
        }
        if snapshot.trace_len > self.trace.len() {
            return Err(EngineError::InvalidSnapshot);
        }
        self.trace.truncate(snapshot.trace_len);
        self.instance = snapshot.instance;
        Ok(())
    }

    /// Applies each rule exhaustively in the given order, then repeats the
    /// whole pass until nothing applies. Returns the number of applications.
    pub fn reduce_exhaustively(&mut self, rules: &[ForwardRuleId]) -> Result<usize, RuleError> {
        let mut applications = 0;
        loop {
            let mut changed = false;
            for &rule in rules {
                loop {
                    let sites = self.find_forward(rule, None);
                    let Some(site) = sites.into_iter().next() else { break };
                    self.apply_and_record(&AnySite::Forward(site))?;
                    applications += 1;
                    changed = true;
                }
            }
            if !changed {
                return Ok(applications);
            }
        }
    }

    /// Randomized exhaustive application: repeatedly pick an applicable rule
    /// uniformly at random, then one of its sites uniformly at random, and
    /// apply it once, until no rule has a site. Returns the range of trace
    /// indices appended.
    pub fn randomized_exhaustive_deflate<R: Rng>(
        &mut self,
        rules: &[ForwardRuleId],
        rng: &mut R,
    ) -> Result<std::ops::Range<usize>, RuleError> {
        let start = self.trace.len();
        loop {
            let mut applicable: Vec<(ForwardRuleId, Vec<crate::rules::ForwardSite>)> = Vec::new();
            for &rule in rules {
                let sites = self.find_forward(rule, None);
                if !sites.is_empty() {
                    applicable.push((rule, sites));
                }
            }
            let Some((_, sites)) = applicable.choose(rng) else {
                return Ok(start..self.trace.len());
            };
            let site = sites.choose(rng).unwrap().clone();
            self.apply_and_record(&AnySite::Forward(site))?;
        }
    }

    /// Draws backward applications until one commits; None when every rule
    /// in the set failed to produce a committed application.
    pub fn random_backward_step<R: Rng>(
        &mut self,
        rules: &[BackwardRuleId],
        region: Option<&BTreeSet<VertexId>>,
        rng: &mut R,
        attempts: usize,
    ) -> Result<Option<&ModificationRecord>, RuleError> {
        for _ in 0..attempts {
            let Some(&rule) = rules.choose(rng) else { return Ok(None) };
            let Some(site) = backward::sample_site(&self.instance, rule, region, rng) else {
                continue;
            };
            match self.apply_and_record(&AnySite::Backward(site)) {
                Ok(_) => return Ok(Some(self.trace.last().unwrap())),
                Err(RuleError::NotApplicable(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        Ok(None)
    }
}

/// Region-of-interest expansion: after a rule application with modified
/// vertices M and deleted vertices D, the region X becomes (X u N[M]) \ D.
pub fn expand_roi(
    roi: &BTreeSet<VertexId>,
    record: &ModificationRecord,
    post: &Graph,
) -> BTreeSet<VertexId> {
    let modified = record.modified_live(post);
    let mut out = roi.clone();
    for &v in &modified {
        out.insert(v);
        out.extend(post.neighbors(v).unwrap().iter().copied());
    }
    for v in &record.removed_vertices {
        out.remove(v);
    }
    out
}

/// Replays a trace on an initial instance, reproducing the final instance
/// bit-exactly.
pub fn replay(initial: &Instance, trace: &[ModificationRecord]) -> Result<Instance, GraphError> {
    let mut instance = initial.clone();
    for record in trace {
        record.replay(&mut instance)?;
    }
    Ok(instance)
}
