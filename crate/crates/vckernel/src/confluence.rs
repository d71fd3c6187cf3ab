//! Pairwise confluence testing of forward rules over enumerated small
//! graphs.
//!
//! For a rule pair (Ra, Rb) the set {Ra, Rb, Deg0} is exercised by repeated
//! randomized exhaustive reduction of every graph; two runs ending in
//! non-isomorphic irreducible instances (or different k) disprove confluence
//! and yield a replayable witness. The isolated-vertex rule is always
//! included so that stranded isolated vertices cannot fake a difference.

use crate::engine::Engine;
use crate::graph::{Graph, Instance, VertexId};
use crate::io::emit_graph6;
use crate::iso::{canonical_form, CanonicalForm};
use crate::rules::ForwardRuleId;
use crate::search::{derive_seed, TABLE_FORWARD};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::HashMap;

/// Enumerates all non-isomorphic simple graphs with 1..=max_n vertices by
/// one-vertex augmentation with canonical-form deduplication.
pub fn enumerate_graphs(max_n: usize) -> Vec<Graph> {
    let mut all: Vec<Graph> = Vec::new();
    let mut level: Vec<Graph> = vec![Graph::from_edges(1, &[])];
    all.extend(level.iter().cloned());
    for n in 2..=max_n {
        let mut seen: HashMap<CanonicalForm, Graph> = HashMap::new();
        for base in &level {
            for mask in 0u32..(1 << (n - 1)) {
                let mut g = base.clone();
                let fresh = g.add_vertex();
                for bit in 0..(n - 1) {
                    if mask >> bit & 1 == 1 {
                        g.add_edge(fresh, VertexId(bit as u32)).unwrap();
                    }
                }
                seen.entry(canonical_form(&g)).or_insert(g);
            }
        }
        level = seen.into_values().collect();
        // deterministic order: sort by canonical form
        level.sort_by_key(canonical_form);
        all.extend(level.iter().cloned());
    }
    all
}

/// One irreducible outcome of a randomized reduction: canonical form plus k.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Outcome {
    pub form: CanonicalForm,
    pub k: i64,
    pub vertices: usize,
}

/// A replayable non-confluence witness.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub graph6: String,
    pub seed_a: u64,
    pub seed_b: u64,
    pub vertices_a: usize,
    pub vertices_b: usize,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum ConfluenceVerdict {
    NonConfluent { witness: Witness },
    NoCounterexampleFound,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairReport {
    pub rule_a: ForwardRuleId,
    pub rule_b: ForwardRuleId,
    #[serde(flatten)]
    pub verdict: ConfluenceVerdict,
}

/// Reduces a graph with {ra, rb, Deg0} under one seed and reports the
/// outcome. Used both by the tester and to replay stored witnesses.
pub fn reduce_with_pair(g: &Graph, ra: ForwardRuleId, rb: ForwardRuleId, seed: u64) -> Outcome {
    let mut rules = vec![ra, rb, ForwardRuleId::Deg0];
    rules.dedup();
    let mut engine = Engine::new(Instance::counting(g.clone()));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    engine.randomized_exhaustive_deflate(&rules, &mut rng).expect("reduction cannot fail");
    // Deg0 runs inside the set, so no isolated vertices survive
    debug_assert!(engine
        .instance()
        .graph
        .vertices()
        .all(|v| engine.instance().graph.degree(v).unwrap() > 0));
    Outcome {
        form: canonical_form(&engine.instance().graph),
        k: engine.k(),
        vertices: engine.instance().graph.num_vertices(),
    }
}

/// Tests one rule pair over the graph corpus with `trials` randomized
/// reductions per graph; the first graph producing two distinct outcomes
/// becomes the witness.
pub fn test_pair(
    ra: ForwardRuleId,
    rb: ForwardRuleId,
    graphs: &[Graph],
    trials: usize,
    base_seed: u64,
) -> ConfluenceVerdict {
    for (graph_index, g) in graphs.iter().enumerate() {
        let mut seen: Vec<(Outcome, u64)> = Vec::new();
        for trial in 0..trials {
            let seed = derive_seed(
                base_seed,
                &[ra as u64, rb as u64, graph_index as u64, trial as u64],
            );
            let outcome = reduce_with_pair(g, ra, rb, seed);
            if seen.iter().any(|(o, _)| *o == outcome) {
                continue;
            }
            if let Some((first, first_seed)) = seen.first() {
                return ConfluenceVerdict::NonConfluent {
                    witness: Witness {
                        graph6: emit_graph6(g),
                        seed_a: *first_seed,
                        seed_b: seed,
                        vertices_a: first.vertices,
                        vertices_b: outcome.vertices,
                    },
                };
            }
            seen.push((outcome, seed));
        }
    }
    ConfluenceVerdict::NoCounterexampleFound
}

/// The full pairwise matrix over the glossary forward rules (diagonal
/// included).
pub fn test_all_pairs(
    graphs: &[Graph],
    trials: usize,
    base_seed: u64,
    rules: &[ForwardRuleId],
) -> Vec<PairReport> {
    let mut reports = Vec::new();
    for (i, &ra) in rules.iter().enumerate() {
        for &rb in &rules[i..] {
            let verdict = test_pair(ra, rb, graphs, trials, base_seed);
            reports.push(PairReport { rule_a: ra, rule_b: rb, verdict });
        }
    }
    reports
}

pub fn matrix_rules() -> &'static [ForwardRuleId] {
    TABLE_FORWARD
}

/// Renders the verdicts as an aligned text matrix: `X` marks a disproved
/// (non-confluent) pair, `.` a pair with no counterexample found.
pub fn render_matrix(reports: &[PairReport], rules: &[ForwardRuleId]) -> String {
    let mut cell: HashMap<(ForwardRuleId, ForwardRuleId), char> = HashMap::new();
    for report in reports {
        let mark = match report.verdict {
            ConfluenceVerdict::NonConfluent { .. } => 'X',
            ConfluenceVerdict::NoCounterexampleFound => '.',
        };
        cell.insert((report.rule_a, report.rule_b), mark);
        cell.insert((report.rule_b, report.rule_a), mark);
    }
    let width = rules.iter().map(|r| r.alias().len()).max().unwrap_or(4) + 1;
    let mut out = format!("{:width$}", "");
    for r in rules {
        out.push_str(&format!("{:width$}", r.alias()));
    }
    out.push('\n');
    for ra in rules {
        out.push_str(&format!("{:width$}", ra.alias()));
        for rb in rules {
            let mark = cell.get(&(*ra, *rb)).copied().unwrap_or(' ');
            out.push_str(&format!("{mark:width$}"));
        }
        out.push('\n');
    }
    out
}
