//! Forward (reduction) rules: site enumeration and application.

use crate::graph::{Graph, Instance, Mode, VertexId};
use crate::record::{Mutation, RecordChoice, RecordParts, UnconfStep, UnconfTrajectory};
use crate::rules::lp::solve_lp_extreme;
use crate::rules::{ForwardRuleId, ForwardSite, RuleError};
use itertools::Itertools;
use std::collections::BTreeSet;

fn stale(msg: impl Into<String>) -> RuleError {
    RuleError::StaleSite(msg.into())
}

/// Enumerates sites of one rule, optionally restricted to sites whose
/// relevant vertices intersect `scope`. `kappa` parameterizes the
/// unconfined-kappa rule.
pub fn find_sites(
    inst: &Instance,
    rule: ForwardRuleId,
    scope: Option<&BTreeSet<VertexId>>,
    kappa: u32,
) -> Vec<ForwardSite> {
    let g = &inst.graph;
    let mut sites = match rule {
        ForwardRuleId::Deg0 => g
            .vertices()
            .filter(|&v| g.degree(v).unwrap() == 0)
            .map(|v| ForwardSite::Deg0 { v })
            .collect(),
        ForwardRuleId::Deg1 => g
            .vertices()
            .filter(|&v| g.degree(v).unwrap() == 1)
            .map(|v| {
                let u = *g.neighbors(v).unwrap().iter().next().unwrap();
                ForwardSite::Deg1 { v, u }
            })
            .collect(),
        ForwardRuleId::Deg2Fold => g
            .vertices()
            .filter_map(|v| {
                let nbrs = g.neighbors(v).unwrap();
                if nbrs.len() != 2 {
                    return None;
                }
                let (a, b) = nbrs.iter().copied().collect_tuple().unwrap();
                (!g.has_edge(a, b)).then_some(ForwardSite::Deg2Fold { v, a, b })
            })
            .collect(),
        ForwardRuleId::Deg3Is => {
            let mut out = Vec::new();
            for v in g.vertices() {
                let nbrs = g.neighbors(v).unwrap();
                if nbrs.len() != 3 || !g.is_independent_set(nbrs).unwrap() {
                    continue;
                }
                let base: Vec<VertexId> = nbrs.iter().copied().collect();
                for perm in base.iter().copied().permutations(3) {
                    out.push(ForwardSite::Deg3Is { v, perm: [perm[0], perm[1], perm[2]] });
                }
            }
            out
        }
        ForwardRuleId::DegGtK => {
            if inst.mode != Mode::Budget {
                Vec::new()
            } else {
                g.vertices()
                    .filter(|&v| g.degree(v).unwrap() as i64 > inst.k)
                    .map(|v| ForwardSite::DegGtK { v })
                    .collect()
            }
        }
        ForwardRuleId::Dom => {
            let mut out = Vec::new();
            for u in g.vertices() {
                let closed_u = g.closed_neighbors(u).unwrap();
                for &v in g.neighbors(u).unwrap() {
                    let closed_v = g.closed_neighbors(v).unwrap();
                    if closed_v.is_subset(&closed_u) {
                        out.push(ForwardSite::Dom { u, v });
                    }
                }
            }
            out
        }
        ForwardRuleId::Unconf => g
            .vertices()
            .filter(|&v| unconfined_check(g, v, 1).is_some())
            .map(|v| ForwardSite::Unconf { v })
            .collect(),
        ForwardRuleId::UnconfKappa => g
            .vertices()
            .filter(|&v| unconfined_check(g, v, kappa).is_some())
            .map(|v| ForwardSite::UnconfKappa { v, kappa })
            .collect(),
        ForwardRuleId::Desk => find_desk_sites(g),
        ForwardRuleId::Cn => g
            .vertices()
            .filter_map(|v| {
                find_cn_partition(g, v)
                    .map(|(c1, c2)| ForwardSite::Cn { v, c1, c2 })
            })
            .collect(),
        ForwardRuleId::OeDel => {
            let mut out = Vec::new();
            for (a, b) in g.edges() {
                for c in g.vertices() {
                    if c == a || c == b {
                        continue;
                    }
                    if oe_del_applicable(g, a, b, c) {
                        out.push(ForwardSite::OeDel { a, b, c });
                    }
                }
            }
            out
        }
        ForwardRuleId::Struct => {
            let mut out = Vec::new();
            for v in g.vertices() {
                let nbrs: Vec<VertexId> = g.neighbors(v).unwrap().iter().copied().collect();
                let d = nbrs.len();
                if non_edge_count(g, &nbrs) > d {
                    continue;
                }
                if d == 0 {
                    out.push(ForwardSite::Struct { v, order: Vec::new(), unguarded: false });
                } else if d <= 3 {
                    for perm in nbrs.iter().copied().permutations(d) {
                        out.push(ForwardSite::Struct { v, order: perm, unguarded: false });
                    }
                } else {
                    out.push(ForwardSite::Struct { v, order: nbrs, unguarded: false });
                }
            }
            out
        }
        ForwardRuleId::Triangle => g
            .vertices()
            .filter_map(|v| {
                let nbrs = g.neighbors(v).unwrap();
                if nbrs.len() != 2 {
                    return None;
                }
                let (u, w) = nbrs.iter().copied().collect_tuple().unwrap();
                g.has_edge(u, w).then_some(ForwardSite::Triangle { v, u, w })
            })
            .collect(),
        ForwardRuleId::Magnet => {
            let mut out = Vec::new();
            for (a, b) in g.edges() {
                if magnet_applicable(g, a, b) {
                    out.push(ForwardSite::Magnet { a, b });
                }
            }
            out
        }
        ForwardRuleId::Lp => {
            let sol = solve_lp_extreme(g);
            let (v0, v1) = (sol.v0(), sol.v1());
            if v0.is_empty() && v1.is_empty() {
                Vec::new()
            } else {
                vec![ForwardSite::Lp { v0, v1 }]
            }
        }
    };
    if let Some(scope) = scope {
        sites.retain(|s| !s.relevant().is_disjoint(scope));
    }
    sites
}

/// Buss bound, budget mode only: with isolated and high-degree vertices
/// gone, more than k^2+k vertices or k^2 edges means a no-instance.
pub fn buss_no_instance_check(inst: &Instance) -> Result<bool, RuleError> {
    if inst.mode != Mode::Budget {
        return Err(RuleError::RequiresBudgetMode("Buss"));
    }
    if inst.k < 0 {
        return Ok(true);
    }
    let n = inst.graph.num_vertices() as i64;
    let m = inst.graph.num_edges() as i64;
    Ok(n > inst.k * inst.k + inst.k || m > inst.k * inst.k)
}

fn non_edge_count(g: &Graph, vs: &[VertexId]) -> usize {
    let mut count = 0;
    for (i, &u) in vs.iter().enumerate() {
        for &v in &vs[i + 1..] {
            if !g.has_edge(u, v) {
                count += 1;
            }
        }
    }
    count
}

fn oe_del_applicable(g: &Graph, a: VertexId, b: VertexId, c: VertexId) -> bool {
    let adjacent_a = g.has_edge(c, a);
    let adjacent_b = g.has_edge(c, b);
    if adjacent_a == adjacent_b {
        return false;
    }
    let na = g.neighbors(a).unwrap();
    let nb = g.neighbors(b).unwrap();
    g.neighbors(c).unwrap().iter().all(|x| na.contains(x) || nb.contains(x))
}

fn magnet_applicable(g: &Graph, a: VertexId, b: VertexId) -> bool {
    let na = g.closed_neighbors(a).unwrap();
    let nb = g.closed_neighbors(b).unwrap();
    let a_side: Vec<VertexId> =
        g.neighbors(a).unwrap().iter().filter(|x| !nb.contains(x)).copied().collect();
    let b_side: Vec<VertexId> =
        g.neighbors(b).unwrap().iter().filter(|x| !na.contains(x)).copied().collect();
    a_side.iter().all(|&x| b_side.iter().all(|&y| g.has_edge(x, y)))
}

fn find_desk_sites(g: &Graph) -> Vec<ForwardSite> {
    let mut out = Vec::new();
    let vertices: Vec<VertexId> = g.vertices().collect();
    for &u1 in &vertices {
        for &u3 in &vertices {
            // u1 is the smallest cycle vertex; u1, u3 are the opposite pair
            if u3 <= u1 || g.has_edge(u1, u3) {
                continue;
            }
            let common: Vec<VertexId> = g
                .neighbors(u1)
                .unwrap()
                .intersection(g.neighbors(u3).unwrap())
                .copied()
                .collect();
            for (i, &u2) in common.iter().enumerate() {
                if u2 <= u1 {
                    continue;
                }
                for &u4 in &common[i + 1..] {
                    if g.has_edge(u2, u4) {
                        continue;
                    }
                    if desk_conditions(g, [u1, u2, u3, u4]).is_ok() {
                        out.push(ForwardSite::Desk { cycle: [u1, u2, u3, u4] });
                    }
                }
            }
        }
    }
    out
}

type DeskSides = (Vec<VertexId>, Vec<VertexId>);

fn desk_conditions(g: &Graph, cycle: [VertexId; 4]) -> Result<DeskSides, RuleError> {
    let [u1, u2, u3, u4] = cycle;
    let all: BTreeSet<VertexId> = cycle.iter().copied().collect();
    if all.len() != 4 {
        return Err(stale("desk: cycle vertices not distinct"));
    }
    for v in cycle {
        if !g.is_live(v) {
            return Err(stale("desk: dead cycle vertex"));
        }
    }
    for (x, y) in [(u1, u2), (u2, u3), (u3, u4), (u4, u1)] {
        if !g.has_edge(x, y) {
            return Err(stale("desk: missing cycle edge"));
        }
    }
    if g.has_edge(u1, u3) || g.has_edge(u2, u4) {
        return Err(stale("desk: chord present"));
    }
    let a: BTreeSet<VertexId> = [u1, u3].into();
    let b: BTreeSet<VertexId> = [u2, u4].into();
    let na = g.set_neighbors(&a).unwrap();
    let nb = g.set_neighbors(&b).unwrap();
    if na.intersection(&nb).next().is_some() {
        return Err(stale("desk: sides share a neighbor"));
    }
    let a_out: Vec<VertexId> = na.difference(&b).copied().collect();
    let b_out: Vec<VertexId> = nb.difference(&a).copied().collect();
    if a_out.len() > 2 || b_out.len() > 2 {
        return Err(stale("desk: outside neighborhood too large"));
    }
    Ok((a_out, b_out))
}

/// The star-forest construction of the 2-clique-neighborhood partition: the
/// complement of G[N(v)] must be a disjoint union of stars; star centers form
/// C2, the remaining vertices C1, and |C1| >= |C2| is required.
pub fn find_cn_partition(g: &Graph, v: VertexId) -> Option<(Vec<VertexId>, Vec<VertexId>)> {
    if !g.is_live(v) {
        return None;
    }
    let nbrs = g.neighbors(v).unwrap().clone();
    let h = g.complement_of_induced(&nbrs).unwrap();
    let mut seen = BTreeSet::new();
    let mut c1 = Vec::new();
    let mut c2 = Vec::new();
    for u in h.vertices() {
        if seen.contains(&u) {
            continue;
        }
        let component = h.ball(u, h.num_vertices()).unwrap();
        seen.extend(component.iter().copied());
        let edges_inside: usize =
            component.iter().map(|&x| h.degree(x).unwrap()).sum::<usize>() / 2;
        if edges_inside + 1 != component.len() {
            return None; // not a tree, so not a star
        }
        let max_degree = component.iter().map(|&x| h.degree(x).unwrap()).max().unwrap();
        if max_degree + 1 != component.len() && component.len() > 1 {
            return None; // a tree but no dominating center
        }
        // the center: maximum degree, smallest id on ties (single-edge stars)
        let center = component
            .iter()
            .copied()
            .find(|&x| h.degree(x).unwrap() == max_degree)
            .unwrap();
        c2.push(center);
        c1.extend(component.iter().copied().filter(|&x| x != center));
    }
    if c1.len() >= c2.len() {
        c1.sort_unstable();
        c2.sort_unstable();
        Some((c1, c2))
    } else {
        None
    }
}

/// The iterative unconfined check. With kappa = 1 this is exactly the
/// classic algorithm that grows S by the single outside neighbor of the
/// best candidate; larger kappa also searches for complete bipartite
/// certificates between up to kappa candidates and S. Returns the
/// certificate trail on success.
pub fn unconfined_check(g: &Graph, v: VertexId, kappa: u32) -> Option<UnconfTrajectory> {
    if kappa == 0 || !g.is_live(v) {
        return None;
    }
    let mut s: BTreeSet<VertexId> = BTreeSet::from([v]);
    let mut steps: Vec<UnconfStep> = Vec::new();
    loop {
        let n_s = g.set_neighbors(&s).unwrap();
        let closed_s = g.set_closed_neighbors(&s).unwrap();
        let candidates: Vec<VertexId> = n_s.iter().copied().collect();
        let mut grow: Option<UnconfStep> = None;
        // subsets of N(S) in (size, lexicographic) order
        for size in 1..=(kappa as usize).min(candidates.len()) {
            for x in candidates.iter().copied().combinations(size) {
                let x_set: BTreeSet<VertexId> = x.iter().copied().collect();
                if !g.is_independent_set(&x_set).unwrap() {
                    continue;
                }
                let y: BTreeSet<VertexId> =
                    g.set_neighbors(&x_set).unwrap().intersection(&s).copied().collect();
                if y.len() != x.len() {
                    continue;
                }
                if !x.iter().all(|&xv| y.iter().all(|&yv| g.has_edge(xv, yv))) {
                    continue;
                }
                let outside: Vec<VertexId> = g
                    .set_neighbors(&x_set)
                    .unwrap()
                    .difference(&closed_s)
                    .copied()
                    .collect();
                match outside.len() {
                    0 => {
                        return Some(UnconfTrajectory {
                            steps,
                            final_x: x,
                            final_y: y.into_iter().collect(),
                        });
                    }
                    1 => {
                        if grow.is_none() {
                            grow = Some(UnconfStep {
                                x,
                                y: y.into_iter().collect(),
                                grew: outside[0],
                            });
                        }
                    }
                    _ => {}
                }
            }
        }
        match grow {
            Some(step) => {
                s.insert(step.grew);
                steps.push(step);
            }
            None => return None,
        }
    }
}

/// Applies a forward site, mutating the instance and returning the record
/// parts. Preconditions are re-validated first; a stale site leaves the
/// instance untouched.
pub fn apply_site(inst: &mut Instance, site: &ForwardSite) -> Result<RecordParts, RuleError> {
    match site {
        ForwardSite::Deg0 { v } => {
            let v = *v;
            if inst.graph.degree(v)? != 0 {
                return Err(stale("deg0: vertex no longer isolated"));
            }
            let mut m = Mutation::new(&mut inst.graph);
            m.remove_vertex(v)?;
            Ok(m.finish(0, RecordChoice::Deg0 { v }))
        }
        ForwardSite::Deg1 { v, u } => {
            let (v, u) = (*v, *u);
            if inst.graph.degree(v)? != 1 || !inst.graph.has_edge(v, u) {
                return Err(stale("deg1: vertex is not a pendant of u"));
            }
            let mut m = Mutation::new(&mut inst.graph);
            m.remove_vertex(v)?;
            m.remove_vertex(u)?;
            inst.k -= 1;
            Ok(m.finish(-1, RecordChoice::Deg1 { v, u }))
        }
        ForwardSite::Deg2Fold { v, a, b } => {
            let (v, a, b) = (*v, *a, *b);
            let ok = inst.graph.degree(v).map(|d| d == 2).unwrap_or(false)
                && inst.graph.has_edge(v, a)
                && inst.graph.has_edge(v, b)
                && !inst.graph.has_edge(a, b);
            if !ok {
                return Err(stale("deg2fold: not a foldable degree-2 vertex"));
            }
            let outside = inst.graph.set_neighbors(&BTreeSet::from([v, a, b])).unwrap();
            let mut m = Mutation::new(&mut inst.graph);
            m.remove_vertex(v)?;
            m.remove_vertex(a)?;
            m.remove_vertex(b)?;
            let merged = m.add_vertex();
            for u in outside {
                m.add_edge(merged, u)?;
            }
            inst.k -= 1;
            Ok(m.finish(-1, RecordChoice::Deg2Fold { v, a, b, merged }))
        }
        ForwardSite::Deg3Is { v, perm } => {
            let v = *v;
            let [a, b, c] = *perm;
            let nbrs_ok = inst.graph.degree(v).map(|d| d == 3).unwrap_or(false)
                && inst.graph.neighbors(v).unwrap() == &BTreeSet::from([a, b, c])
                && inst.graph.is_independent_set(&BTreeSet::from([a, b, c])).unwrap_or(false);
            if !nbrs_ok {
                return Err(stale("deg3is: neighborhood is not an independent triple"));
            }
            let na: Vec<VertexId> =
                inst.graph.neighbors(a)?.iter().copied().filter(|&x| x != v).collect();
            let nb: Vec<VertexId> =
                inst.graph.neighbors(b)?.iter().copied().filter(|&x| x != v).collect();
            let nc: Vec<VertexId> =
                inst.graph.neighbors(c)?.iter().copied().filter(|&x| x != v).collect();
            let mut m = Mutation::new(&mut inst.graph);
            m.remove_vertex(v)?;
            m.add_edge(a, b)?;
            m.add_edge(b, c)?;
            for &x in &nb {
                m.add_edge_if_missing(a, x)?;
            }
            for &x in &nc {
                m.add_edge_if_missing(b, x)?;
            }
            for &x in &na {
                m.add_edge_if_missing(c, x)?;
            }
            Ok(m.finish(0, RecordChoice::Deg3Is { v, perm: *perm }))
        }
        ForwardSite::DegGtK { v } => {
            let v = *v;
            if inst.mode != Mode::Budget {
                return Err(RuleError::RequiresBudgetMode("DegGtK"));
            }
            if inst.graph.degree(v)? as i64 <= inst.k {
                return Err(stale("deg>k: degree not above the budget"));
            }
            let mut m = Mutation::new(&mut inst.graph);
            m.remove_vertex(v)?;
            inst.k -= 1;
            Ok(m.finish(-1, RecordChoice::DegGtK { v }))
        }
        ForwardSite::Dom { u, v } => {
            let (u, v) = (*u, *v);
            let ok = inst.graph.is_live(u)
                && inst.graph.is_live(v)
                && inst.graph.has_edge(u, v)
                && inst
                    .graph
                    .closed_neighbors(v)?
                    .is_subset(&inst.graph.closed_neighbors(u)?);
            if !ok {
                return Err(stale("dom: u no longer dominates v"));
            }
            let mut m = Mutation::new(&mut inst.graph);
            m.remove_vertex(u)?;
            inst.k -= 1;
            Ok(m.finish(-1, RecordChoice::Dom { u, v }))
        }
        ForwardSite::Unconf { v } => {
            let v = *v;
            if unconfined_check(&inst.graph, v, 1).is_none() {
                return Err(stale("unconfined: check no longer passes"));
            }
            let mut m = Mutation::new(&mut inst.graph);
            m.remove_vertex(v)?;
            inst.k -= 1;
            Ok(m.finish(-1, RecordChoice::Unconf { v }))
        }
        ForwardSite::UnconfKappa { v, kappa } => {
            let v = *v;
            if unconfined_check(&inst.graph, v, *kappa).is_none() {
                return Err(stale("unconfined-kappa: check no longer passes"));
            }
            let mut m = Mutation::new(&mut inst.graph);
            m.remove_vertex(v)?;
            inst.k -= 1;
            Ok(m.finish(-1, RecordChoice::UnconfKappa { v, kappa: *kappa }))
        }
        ForwardSite::Desk { cycle } => {
            let (a_out, b_out) = desk_conditions(&inst.graph, *cycle)?;
            let mut m = Mutation::new(&mut inst.graph);
            for v in *cycle {
                m.remove_vertex(v)?;
            }
            for &x in &a_out {
                for &y in &b_out {
                    m.add_edge_if_missing(x, y)?;
                }
            }
            inst.k -= 2;
            Ok(m.finish(-2, RecordChoice::Desk { cycle: *cycle, a_out, b_out }))
        }
        ForwardSite::Cn { v, c1, c2 } => apply_cn(inst, *v, c1, c2),
        ForwardSite::OeDel { a, b, c } => {
            let (a, b, c) = (*a, *b, *c);
            if !inst.graph.is_live(a) || !inst.graph.is_live(b) || !inst.graph.is_live(c) {
                return Err(stale("oe-del: dead vertex"));
            }
            if !inst.graph.has_edge(a, b) || !oe_del_applicable(&inst.graph, a, b, c) {
                return Err(stale("oe-del: witness conditions fail"));
            }
            let c_adjacent_to = if inst.graph.has_edge(c, a) { a } else { b };
            let mut m = Mutation::new(&mut inst.graph);
            m.remove_edge(a, b)?;
            Ok(m.finish(0, RecordChoice::OeDel { a, b, c, c_adjacent_to }))
        }
        ForwardSite::Struct { v, order, unguarded } => apply_struction(inst, *v, order, *unguarded),
        ForwardSite::Triangle { v, u, w } => {
            let (v, u, w) = (*v, *u, *w);
            let ok = inst.graph.degree(v).map(|d| d == 2).unwrap_or(false)
                && inst.graph.has_edge(v, u)
                && inst.graph.has_edge(v, w)
                && inst.graph.has_edge(u, w);
            if !ok {
                return Err(stale("triangle: not a triangle with a degree-2 apex"));
            }
            let mut m = Mutation::new(&mut inst.graph);
            m.remove_vertex(v)?;
            m.remove_vertex(u)?;
            m.remove_vertex(w)?;
            inst.k -= 2;
            Ok(m.finish(-2, RecordChoice::Triangle { v, u, w }))
        }
        ForwardSite::Magnet { a, b } => {
            let (a, b) = (*a, *b);
            if !inst.graph.is_live(a) || !inst.graph.is_live(b) || !inst.graph.has_edge(a, b) {
                return Err(stale("magnet: edge gone"));
            }
            if !magnet_applicable(&inst.graph, a, b) {
                return Err(stale("magnet: sides not completely joined"));
            }
            let na = inst.graph.closed_neighbors(a)?;
            let nb = inst.graph.closed_neighbors(b)?;
            let a_side: Vec<VertexId> =
                inst.graph.neighbors(a)?.iter().filter(|x| !nb.contains(x)).copied().collect();
            let b_side: Vec<VertexId> =
                inst.graph.neighbors(b)?.iter().filter(|x| !na.contains(x)).copied().collect();
            let common: Vec<VertexId> =
                inst.graph.neighbors(a)?.intersection(inst.graph.neighbors(b)?).copied().collect();
            let mut m = Mutation::new(&mut inst.graph);
            m.remove_vertex(a)?;
            m.remove_vertex(b)?;
            let c_new = m.add_vertex();
            for &x in &common {
                m.add_edge(c_new, x)?;
            }
            inst.k -= 1;
            Ok(m.finish(-1, RecordChoice::Magnet { a, b, c_new, a_side, b_side, common }))
        }
        ForwardSite::Lp { v0, v1 } => {
            let sol = solve_lp_extreme(&inst.graph);
            let (cur0, cur1) = (sol.v0(), sol.v1());
            if &cur0 != v0 || &cur1 != v1 {
                return Err(stale("lp: stored solution is not the current extreme solution"));
            }
            if v0.is_empty() && v1.is_empty() {
                return Err(RuleError::NotApplicable("lp: extreme solution is all-half".into()));
            }
            let mut m = Mutation::new(&mut inst.graph);
            for &v in v0.iter().chain(v1) {
                m.remove_vertex(v)?;
            }
            let delta = -(v1.len() as i64);
            inst.k += delta;
            Ok(m.finish(delta, RecordChoice::Lp { v0: v0.clone(), v1: v1.clone() }))
        }
    }
}

fn apply_cn(
    inst: &mut Instance,
    v: VertexId,
    c1: &[VertexId],
    c2: &[VertexId],
) -> Result<RecordParts, RuleError> {
    let g = &inst.graph;
    if !g.is_live(v) {
        return Err(stale("cn: dead center"));
    }
    let c1_set: BTreeSet<VertexId> = c1.iter().copied().collect();
    let c2_set: BTreeSet<VertexId> = c2.iter().copied().collect();
    let nbrs = g.neighbors(v).unwrap();
    let union: BTreeSet<VertexId> = c1_set.union(&c2_set).copied().collect();
    if &union != nbrs || c1_set.intersection(&c2_set).next().is_some() {
        return Err(stale("cn: partition does not match N(v)"));
    }
    if c1_set.len() < c2_set.len() {
        return Err(stale("cn: |C1| < |C2|"));
    }
    if !g.is_clique(&c1_set).unwrap() || !g.is_clique(&c2_set).unwrap() {
        return Err(stale("cn: sides are not cliques"));
    }
    // each C1 vertex must sit in exactly one non-edge of G[N(v)]
    let mut matching: Vec<(VertexId, VertexId)> = Vec::new();
    for &x in &c1_set {
        let partners: Vec<VertexId> =
            nbrs.iter().copied().filter(|&y| y != x && !g.has_edge(x, y)).collect();
        if partners.len() != 1 {
            return Err(stale("cn: C1 vertex without a unique non-edge"));
        }
        matching.push((x, partners[0]));
    }
    let nbr_of: Vec<(VertexId, Vec<VertexId>)> = matching
        .iter()
        .map(|&(_, c2v)| (c2v, g.neighbors(c2v).unwrap().iter().copied().collect()))
        .collect();
    let mut m = Mutation::new(&mut inst.graph);
    m.remove_vertex(v)?;
    for &x in &c2_set {
        m.remove_vertex(x)?;
    }
    for ((c1v, _), (_, nbrs2)) in matching.iter().zip(&nbr_of) {
        for &u in nbrs2 {
            if u != v && !c2_set.contains(&u) && u != *c1v {
                m.add_edge_if_missing(*c1v, u)?;
            }
        }
    }
    let delta = -(c2_set.len() as i64);
    inst.k += delta;
    Ok(m.finish(
        delta,
        RecordChoice::Cn { v, c1: c1.to_vec(), c2: c2.to_vec(), matching },
    ))
}

fn apply_struction(
    inst: &mut Instance,
    v: VertexId,
    order: &[VertexId],
    unguarded: bool,
) -> Result<RecordParts, RuleError> {
    let g = &inst.graph;
    if !g.is_live(v) {
        return Err(stale("struction: dead center"));
    }
    let nbrs = g.neighbors(v).unwrap();
    let order_set: BTreeSet<VertexId> = order.iter().copied().collect();
    if &order_set != nbrs || order_set.len() != order.len() {
        return Err(stale("struction: ordering is not a permutation of N(v)"));
    }
    let d = order.len();
    // W holds one vertex per non-edge {a_i, a_j}, i < j
    let mut w_pairs: Vec<(u32, u32)> = Vec::new();
    for i in 0..d {
        for j in (i + 1)..d {
            if !g.has_edge(order[i], order[j]) {
                w_pairs.push((i as u32, j as u32));
            }
        }
    }
    if !unguarded && w_pairs.len() > d {
        return Err(stale("struction: would increase k (guard |W| <= d)"));
    }
    let outside_adj: Vec<BTreeSet<VertexId>> = order
        .iter()
        .map(|&a| g.neighbors(a).unwrap().iter().copied().filter(|&u| u != v && !order_set.contains(&u)).collect())
        .collect();
    // adjacency among the neighbors themselves, snapshotted before removal
    let inner_adj: Vec<Vec<bool>> = (0..d)
        .map(|i| (0..d).map(|j| g.has_edge(order[i], order[j])).collect())
        .collect();
    let mut m = Mutation::new(&mut inst.graph);
    m.remove_vertex(v)?;
    for &a in order {
        m.remove_vertex(a)?;
    }
    let mut w_map: Vec<(VertexId, u32, u32)> = Vec::new();
    for &(i, j) in &w_pairs {
        let w = m.add_vertex();
        w_map.push((w, i, j));
    }
    for (p, &(wp, i, j)) in w_map.iter().enumerate() {
        for &(wq, k, l) in &w_map[p + 1..] {
            // same first index: connected iff the second originals are adjacent
            let connect = i != k || inner_adj[j as usize][l as usize];
            if connect {
                m.add_edge(wp, wq)?;
            }
        }
        for u in outside_adj[i as usize].union(&outside_adj[j as usize]) {
            m.add_edge_if_missing(wp, *u)?;
        }
    }
    let delta = w_map.len() as i64 - d as i64;
    inst.k += delta;
    Ok(m.finish(delta, RecordChoice::Struct { v, order: order.to_vec(), w_map }))
}
