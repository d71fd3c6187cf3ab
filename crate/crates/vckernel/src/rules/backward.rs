//! Backward (inflation) rules: converse relations of the forward rules.
//!
//! Each applier records a forward restoration site; applying that site to the
//! inflated instance restores the pre-image up to local isomorphism. Samplers
//! draw one random application, enumerators produce capped deterministic site
//! lists for the search methods.

use crate::graph::{Graph, Instance, VertexId};
use crate::record::{Mutation, RecordChoice, RecordParts};
use crate::rules::forward::unconfined_check;
use crate::rules::{BackwardRuleId, BackwardSite, ForwardSite, RuleError};
use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::BTreeSet;

fn stale(msg: impl Into<String>) -> RuleError {
    RuleError::StaleSite(msg.into())
}

/// Enumeration caps: backward rules have huge application spaces, the caps
/// keep the branch factor of the search finite.
#[derive(Debug, Clone, Copy)]
pub struct BackwardCaps {
    /// Vertices of higher degree are not split by the enumerator.
    pub undeg2_max_degree: usize,
    /// Maximum number of optional-deletion patterns per induced path.
    pub undeg3_max_choices: usize,
    /// Maximum |S| for the vertex-adding rules.
    pub subset_max_size: usize,
}

impl Default for BackwardCaps {
    fn default() -> Self {
        BackwardCaps { undeg2_max_degree: 8, undeg3_max_choices: 64, subset_max_size: 4 }
    }
}

/// Deterministically enumerates backward sites whose relevant vertices lie
/// within `scope` (for the vertex-adding rules the sets S are drawn from the
/// scope itself, which is how the search keeps them local).
pub fn enumerate_sites(
    inst: &Instance,
    rule: BackwardRuleId,
    scope: &BTreeSet<VertexId>,
    caps: &BackwardCaps,
) -> Vec<BackwardSite> {
    let g = &inst.graph;
    match rule {
        BackwardRuleId::Undeg2 => {
            let mut out = Vec::new();
            for &v in scope {
                if !g.is_live(v) {
                    continue;
                }
                let nbrs: Vec<VertexId> = g.neighbors(v).unwrap().iter().copied().collect();
                if nbrs.len() > caps.undeg2_max_degree {
                    continue;
                }
                // every assignment of neighbors to {a, b, both}
                let mut pattern = vec![0u8; nbrs.len()];
                loop {
                    let mut to_a = Vec::new();
                    let mut to_b = Vec::new();
                    for (i, &x) in nbrs.iter().enumerate() {
                        match pattern[i] {
                            0 => to_a.push(x),
                            1 => to_b.push(x),
                            _ => {
                                to_a.push(x);
                                to_b.push(x);
                            }
                        }
                    }
                    out.push(BackwardSite::Undeg2 { v, to_a, to_b });
                    if !increment_base3(&mut pattern) {
                        break;
                    }
                }
            }
            out
        }
        BackwardRuleId::Undeg3 => {
            let mut out = Vec::new();
            for b in g.vertices() {
                let nbrs: Vec<VertexId> = g.neighbors(b).unwrap().iter().copied().collect();
                for pair in nbrs.iter().copied().combinations(2) {
                    let (a, c) = (pair[0], pair[1]);
                    if g.has_edge(a, c) {
                        continue;
                    }
                    let relevant: BTreeSet<VertexId> = [a, b, c].into();
                    if relevant.is_disjoint(scope) {
                        continue;
                    }
                    if let Some(full) = undeg3_applicable(g, a, b, c) {
                        for drops in undeg3_drop_patterns(&full, a, b, c, caps.undeg3_max_choices)
                        {
                            out.push(BackwardSite::Undeg3 { a, b, c, drops });
                        }
                    }
                }
            }
            out
        }
        BackwardRuleId::Uncn => g
            .edges()
            .into_iter()
            .filter(|&(a, b)| scope.contains(&a) || scope.contains(&b))
            .map(|(a, b)| BackwardSite::Uncn { a, b })
            .collect(),
        BackwardRuleId::Undom => {
            let mut out = Vec::new();
            for &v in scope {
                if !g.is_live(v) {
                    continue;
                }
                let pool: Vec<VertexId> =
                    scope.iter().copied().filter(|&x| x != v && g.is_live(x)).collect();
                for size in 0..=caps.subset_max_size.min(pool.len()) {
                    for s in pool.iter().copied().combinations(size) {
                        out.push(BackwardSite::Undom { v, s });
                    }
                }
            }
            out
        }
        BackwardRuleId::Ununconf => {
            let pool: Vec<VertexId> = scope.iter().copied().filter(|&x| g.is_live(x)).collect();
            let mut out = Vec::new();
            for size in 1..=caps.subset_max_size.min(pool.len()) {
                for s in pool.iter().copied().combinations(size) {
                    if ununconf_applicable(g, &s) {
                        out.push(BackwardSite::Ununconf { s });
                    }
                }
            }
            out
        }
        BackwardRuleId::OeIns => {
            let mut out = Vec::new();
            for c in g.vertices() {
                for &b in g.neighbors(c).unwrap() {
                    for a in g.vertices() {
                        let relevant: BTreeSet<VertexId> = [a, b, c].into();
                        if relevant.is_disjoint(scope) {
                            continue;
                        }
                        if oe_ins_applicable(g, a, b, c) {
                            out.push(BackwardSite::OeIns { a, b, c });
                        }
                    }
                }
            }
            out
        }
    }
}

fn increment_base3(pattern: &mut [u8]) -> bool {
    for digit in pattern.iter_mut() {
        if *digit < 2 {
            *digit += 1;
            return true;
        }
        *digit = 0;
    }
    false
}

/// Checks the induced-path condition and returns the vertices adjacent to
/// all three path vertices (those with an optional edge deletion).
fn undeg3_applicable(g: &Graph, a: VertexId, b: VertexId, c: VertexId) -> Option<Vec<VertexId>> {
    if !(g.has_edge(a, b) && g.has_edge(b, c) && !g.has_edge(a, c)) {
        return None;
    }
    let s: BTreeSet<VertexId> = [a, b, c].into();
    let mut full = Vec::new();
    for u in g.set_neighbors(&s).unwrap() {
        let hits = [a, b, c].iter().filter(|&&x| g.has_edge(u, x)).count();
        if hits < 2 {
            return None;
        }
        if hits == 3 {
            full.push(u);
        }
    }
    Some(full)
}

fn undeg3_drop_patterns(
    full: &[VertexId],
    a: VertexId,
    b: VertexId,
    c: VertexId,
    cap: usize,
) -> Vec<Vec<(VertexId, VertexId)>> {
    let mut patterns = vec![Vec::new()];
    for &u in full {
        let mut next = Vec::new();
        for base in &patterns {
            for option in [None, Some(a), Some(b), Some(c)] {
                let mut extended = base.clone();
                if let Some(endpoint) = option {
                    extended.push((u, endpoint));
                }
                next.push(extended);
                if next.len() >= cap {
                    break;
                }
            }
            if next.len() >= cap {
                break;
            }
        }
        patterns = next;
    }
    patterns
}

fn oe_ins_applicable(g: &Graph, a: VertexId, b: VertexId, c: VertexId) -> bool {
    if a == b || a == c || b == c {
        return false;
    }
    if !g.is_live(a) || !g.is_live(b) || !g.is_live(c) {
        return false;
    }
    if g.has_edge(a, b) {
        return false;
    }
    let adjacent_a = g.has_edge(c, a);
    let adjacent_b = g.has_edge(c, b);
    if adjacent_a == adjacent_b {
        return false;
    }
    // the deletion conditions must hold once {a, b} is inserted
    let na = g.neighbors(a).unwrap();
    let nb = g.neighbors(b).unwrap();
    g.neighbors(c).unwrap().iter().all(|&x| x == a || x == b || na.contains(&x) || nb.contains(&x))
}

fn ununconf_applicable(g: &Graph, s: &[VertexId]) -> bool {
    if s.is_empty() || s.iter().any(|&x| !g.is_live(x)) {
        return false;
    }
    let mut scratch = g.clone();
    let v = scratch.add_vertex();
    for &x in s {
        scratch.add_edge(v, x).unwrap();
    }
    unconfined_check(&scratch, v, 1).is_some()
}

/// Draws one random application of a backward rule, or None when the rule
/// offers nothing (inside the region, if one is given).
pub fn sample_site<R: Rng>(
    inst: &Instance,
    rule: BackwardRuleId,
    region: Option<&BTreeSet<VertexId>>,
    rng: &mut R,
) -> Option<BackwardSite> {
    let g = &inst.graph;
    let in_region = |v: VertexId| region.map_or(true, |r| r.contains(&v));
    let live_pool: Vec<VertexId> = g.vertices().filter(|&v| in_region(v)).collect();
    match rule {
        BackwardRuleId::Undeg2 => {
            let &v = live_pool.choose(rng)?;
            let mut to_a = Vec::new();
            let mut to_b = Vec::new();
            for &x in g.neighbors(v).unwrap() {
                match rng.gen_range(0..3) {
                    0 => to_a.push(x),
                    1 => to_b.push(x),
                    _ => {
                        to_a.push(x);
                        to_b.push(x);
                    }
                }
            }
            Some(BackwardSite::Undeg2 { v, to_a, to_b })
        }
        BackwardRuleId::Undeg3 => {
            for _ in 0..30 {
                let &b = live_pool.choose(rng)?;
                let nbrs: Vec<VertexId> = g
                    .neighbors(b)
                    .unwrap()
                    .iter()
                    .copied()
                    .filter(|&x| in_region(x))
                    .collect();
                if nbrs.len() < 2 {
                    continue;
                }
                let picks: Vec<VertexId> = nbrs.choose_multiple(rng, 2).copied().collect();
                let (a, c) = (picks[0].min(picks[1]), picks[0].max(picks[1]));
                if g.has_edge(a, c) {
                    continue;
                }
                if let Some(full) = undeg3_applicable(g, a, b, c) {
                    let mut drops = Vec::new();
                    for u in full {
                        match rng.gen_range(0..4) {
                            0 => {}
                            1 => drops.push((u, a)),
                            2 => drops.push((u, b)),
                            _ => drops.push((u, c)),
                        }
                    }
                    return Some(BackwardSite::Undeg3 { a, b, c, drops });
                }
            }
            None
        }
        BackwardRuleId::Uncn => {
            let edges: Vec<(VertexId, VertexId)> = g
                .edges()
                .into_iter()
                .filter(|&(a, b)| in_region(a) && in_region(b))
                .collect();
            let &(a, b) = edges.choose(rng)?;
            Some(BackwardSite::Uncn { a, b })
        }
        BackwardRuleId::Undom => {
            let &v = live_pool.choose(rng)?;
            let pool: Vec<VertexId> = g
                .ball(v, 2)
                .unwrap()
                .into_iter()
                .filter(|&x| x != v && in_region(x))
                .collect();
            let size = geometric_mean_two(rng).min(pool.len());
            let s: Vec<VertexId> = pool.choose_multiple(rng, size).copied().sorted().collect();
            Some(BackwardSite::Undom { v, s })
        }
        BackwardRuleId::Ununconf => {
            let &r = live_pool.choose(rng)?;
            let pool: Vec<VertexId> =
                g.ball(r, 2).unwrap().into_iter().filter(|&x| in_region(x)).collect();
            let size = (1 + geometric_mean_two(rng)).min(pool.len());
            if size == 0 {
                return None;
            }
            let s: Vec<VertexId> = pool.choose_multiple(rng, size).copied().sorted().collect();
            ununconf_applicable(g, &s).then_some(BackwardSite::Ununconf { s })
        }
        BackwardRuleId::OeIns => {
            for _ in 0..30 {
                let &c = live_pool.choose(rng)?;
                let c_nbrs: Vec<VertexId> = g
                    .neighbors(c)
                    .unwrap()
                    .iter()
                    .copied()
                    .filter(|&x| in_region(x))
                    .collect();
                let Some(&b) = c_nbrs.choose(rng) else { continue };
                let candidates: Vec<VertexId> = g
                    .vertices()
                    .filter(|&a| in_region(a) && oe_ins_applicable(g, a, b, c))
                    .collect();
                if let Some(&a) = candidates.choose(rng) {
                    return Some(BackwardSite::OeIns { a, b, c });
                }
            }
            None
        }
    }
}

fn geometric_mean_two<R: Rng>(rng: &mut R) -> usize {
    let mut size = 0;
    while size < 32 && rng.gen::<f64>() < 2.0 / 3.0 {
        size += 1;
    }
    size
}

/// Applies a backward site. The instance is untouched on error; in
/// particular Ununconf checks applicability on a scratch copy first.
pub fn apply_site(inst: &mut Instance, site: &BackwardSite) -> Result<RecordParts, RuleError> {
    match site {
        BackwardSite::Undeg2 { v, to_a, to_b } => {
            let v = *v;
            if !inst.graph.is_live(v) {
                return Err(stale("undeg2: dead vertex"));
            }
            let nbrs = inst.graph.neighbors(v).unwrap().clone();
            let set_a: BTreeSet<VertexId> = to_a.iter().copied().collect();
            let set_b: BTreeSet<VertexId> = to_b.iter().copied().collect();
            if set_a.len() != to_a.len() || set_b.len() != to_b.len() {
                return Err(stale("undeg2: duplicate neighbor in assignment"));
            }
            let union: BTreeSet<VertexId> = set_a.union(&set_b).copied().collect();
            if union != nbrs {
                return Err(stale("undeg2: assignment does not cover N(v)"));
            }
            let mut m = Mutation::new(&mut inst.graph);
            let a = m.add_vertex();
            let b = m.add_vertex();
            for &x in &nbrs {
                m.remove_edge(v, x)?;
            }
            for &x in to_a {
                m.add_edge(a, x)?;
            }
            for &x in to_b {
                m.add_edge(b, x)?;
            }
            m.add_edge(v, a)?;
            m.add_edge(v, b)?;
            inst.k += 1;
            Ok(m.finish(1, RecordChoice::Undeg2 { v, a, b }))
        }
        BackwardSite::Undeg3 { a, b, c, drops } => {
            let (a, b, c) = (*a, *b, *c);
            for v in [a, b, c] {
                if !inst.graph.is_live(v) {
                    return Err(stale("undeg3: dead vertex"));
                }
            }
            let Some(full) = undeg3_applicable(&inst.graph, a, b, c) else {
                return Err(stale("undeg3: induced-path conditions fail"));
            };
            let full_set: BTreeSet<VertexId> = full.iter().copied().collect();
            let mut seen = BTreeSet::new();
            for &(u, endpoint) in drops {
                if !full_set.contains(&u) || ![a, b, c].contains(&endpoint) || !seen.insert(u) {
                    return Err(stale("undeg3: invalid drop pattern"));
                }
            }
            let s: BTreeSet<VertexId> = [a, b, c].into();
            let outside: Vec<VertexId> =
                inst.graph.set_neighbors(&s).unwrap().into_iter().collect();
            let adj_a: BTreeSet<VertexId> = inst.graph.neighbors(a)?.clone();
            let adj_b: BTreeSet<VertexId> = inst.graph.neighbors(b)?.clone();
            let adj_c: BTreeSet<VertexId> = inst.graph.neighbors(c)?.clone();
            let drop_of: std::collections::BTreeMap<VertexId, VertexId> =
                drops.iter().copied().collect();
            let mut m = Mutation::new(&mut inst.graph);
            m.remove_edge(a, b)?;
            m.remove_edge(b, c)?;
            for &u in &outside {
                let in_a = adj_a.contains(&u);
                let in_b = adj_b.contains(&u);
                let in_c = adj_c.contains(&u);
                if in_a && in_b && in_c {
                    if let Some(&endpoint) = drop_of.get(&u) {
                        m.remove_edge(u, endpoint)?;
                    }
                } else if !in_a {
                    m.remove_edge(u, b)?;
                } else if !in_b {
                    m.remove_edge(u, c)?;
                } else {
                    m.remove_edge(u, a)?;
                }
            }
            let v_new = m.add_vertex();
            m.add_edge(v_new, a)?;
            m.add_edge(v_new, b)?;
            m.add_edge(v_new, c)?;
            Ok(m.finish(0, RecordChoice::Undeg3 { a, b, c, v_new, drops: drops.clone() }))
        }
        BackwardSite::Uncn { a, b } => {
            let (a, b) = (*a, *b);
            if !inst.graph.is_live(a) || !inst.graph.is_live(b) || !inst.graph.has_edge(a, b) {
                return Err(stale("uncn: edge gone"));
            }
            let common: Vec<VertexId> = inst
                .graph
                .neighbors(a)?
                .intersection(inst.graph.neighbors(b)?)
                .copied()
                .collect();
            let mut m = Mutation::new(&mut inst.graph);
            let v_new = m.add_vertex();
            let c_new = m.add_vertex();
            m.add_edge(v_new, a)?;
            m.add_edge(v_new, b)?;
            m.add_edge(v_new, c_new)?;
            for &x in &common {
                m.remove_edge(a, x)?;
                m.remove_edge(b, x)?;
                m.add_edge(c_new, x)?;
            }
            inst.k += 1;
            Ok(m.finish(1, RecordChoice::Uncn { a, b, v_new, c_new, common }))
        }
        BackwardSite::Undom { v, s } => {
            let v = *v;
            if !inst.graph.is_live(v) {
                return Err(stale("undom: dead vertex"));
            }
            let mut targets = inst.graph.closed_neighbors(v)?;
            for &x in s {
                if !inst.graph.is_live(x) {
                    return Err(stale("undom: dead vertex in S"));
                }
                targets.insert(x);
            }
            let mut m = Mutation::new(&mut inst.graph);
            let u_new = m.add_vertex();
            for &x in &targets {
                m.add_edge(u_new, x)?;
            }
            inst.k += 1;
            Ok(m.finish(1, RecordChoice::Undom { v, s: s.clone(), u_new }))
        }
        BackwardSite::Ununconf { s } => {
            if s.is_empty() {
                return Err(RuleError::NotApplicable("ununconf: empty S".into()));
            }
            for &x in s {
                if !inst.graph.is_live(x) {
                    return Err(stale("ununconf: dead vertex in S"));
                }
            }
            // check on a scratch copy so a failed check leaves no trace
            let mut scratch = inst.graph.clone();
            let probe = scratch.add_vertex();
            for &x in s {
                scratch.add_edge(probe, x).unwrap();
            }
            let Some(trajectory) = unconfined_check(&scratch, probe, 1) else {
                return Err(RuleError::NotApplicable(
                    "ununconf: new vertex would not be unconfined".into(),
                ));
            };
            let mut m = Mutation::new(&mut inst.graph);
            let v_new = m.add_vertex();
            debug_assert_eq!(v_new, probe);
            for &x in s {
                m.add_edge(v_new, x)?;
            }
            inst.k += 1;
            Ok(m.finish(1, RecordChoice::Ununconf { v_new, s: s.clone(), trajectory }))
        }
        BackwardSite::OeIns { a, b, c } => {
            let (a, b, c) = (*a, *b, *c);
            if !oe_ins_applicable(&inst.graph, a, b, c) {
                return Err(stale("oe-ins: witness conditions fail"));
            }
            let mut m = Mutation::new(&mut inst.graph);
            m.add_edge(a, b)?;
            Ok(m.finish(0, RecordChoice::OeIns { a, b, c }))
        }
    }
}

/// The forward site that restores the pre-image of a backward application.
pub fn restoration_site(choice: &RecordChoice) -> Option<ForwardSite> {
    match choice {
        RecordChoice::Undeg2 { v, a, b } => Some(ForwardSite::Deg2Fold { v: *v, a: *a, b: *b }),
        RecordChoice::Undeg3 { a, b, c, v_new, .. } => {
            Some(ForwardSite::Deg3Is { v: *v_new, perm: [*a, *b, *c] })
        }
        RecordChoice::Uncn { a, b, v_new, c_new, .. } => Some(ForwardSite::Cn {
            v: *v_new,
            c1: vec![*a.min(b), *a.max(b)],
            c2: vec![*c_new],
        }),
        RecordChoice::Undom { v, u_new, .. } => Some(ForwardSite::Dom { u: *u_new, v: *v }),
        RecordChoice::Ununconf { v_new, .. } => Some(ForwardSite::Unconf { v: *v_new }),
        RecordChoice::OeIns { a, b, c } => Some(ForwardSite::OeDel { a: *a, b: *b, c: *c }),
        _ => None,
    }
}
