//! Worked examples for every reduction rule, checked against the
//! brute-force vertex cover oracle.

use vckernel::engine::Engine;
use vckernel::graph::{Graph, Instance, VertexId};
use vckernel::iso::canonical_form;
use vckernel::oracle::{brute_force_tau, verify_cover};
use vckernel::rules::forward::{buss_no_instance_check, find_cn_partition, unconfined_check};
use vckernel::rules::lp::{solve_lp_extreme, LpValue};
use vckernel::rules::{AnySite, BackwardSite, ForwardRuleId, ForwardSite};
use vckernel::{Mode, RuleError};

fn v(i: u32) -> VertexId {
    VertexId(i)
}

fn path(n: u32) -> Graph {
    let edges: Vec<(u32, u32)> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    Graph::from_edges(n, &edges)
}

fn cycle(n: u32) -> Graph {
    let edges: Vec<(u32, u32)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges)
}

fn star(leaves: u32) -> Graph {
    let edges: Vec<(u32, u32)> = (1..=leaves).map(|i| (0, i)).collect();
    Graph::from_edges(leaves + 1, &edges)
}

/// Applies one forward site in counting mode and checks the master safeness
/// identity tau(G) - tau(G') = -delta_k against the oracle.
fn apply_checked(g: &Graph, site: ForwardSite) -> (Engine, i64) {
    let tau_before = brute_force_tau(g).tau as i64;
    let mut engine = Engine::new(Instance::counting(g.clone()));
    let record = engine.apply_and_record(&AnySite::Forward(site)).unwrap().clone();
    let tau_after = brute_force_tau(&engine.instance().graph).tau as i64;
    assert_eq!(tau_before - tau_after, -record.delta_k, "safeness identity");
    (engine, record.delta_k)
}

#[test]
fn deg0_examples() {
    let (engine, dk) = apply_checked(&Graph::from_edges(1, &[]), ForwardSite::Deg0 { v: v(0) });
    assert!(engine.instance().graph.is_empty());
    assert_eq!(dk, 0);

    let mut k3_plus = cycle(3);
    k3_plus.add_vertex();
    let (engine, _) = apply_checked(&k3_plus, ForwardSite::Deg0 { v: v(3) });
    assert_eq!(canonical_form(&engine.instance().graph), canonical_form(&cycle(3)));

    // degree-1 vertex is not a Deg0 site
    let mut engine = Engine::new(Instance::counting(path(2)));
    let err = engine
        .apply_and_record(&AnySite::Forward(ForwardSite::Deg0 { v: v(0) }))
        .unwrap_err();
    assert!(matches!(err, RuleError::StaleSite(_)));
}

#[test]
fn deg1_examples() {
    let (engine, dk) = apply_checked(&path(2), ForwardSite::Deg1 { v: v(0), u: v(1) });
    assert!(engine.instance().graph.is_empty());
    assert_eq!(dk, -1);

    let (engine, _) = apply_checked(&star(3), ForwardSite::Deg1 { v: v(1), u: v(0) });
    assert_eq!(engine.instance().graph.num_vertices(), 2);
    assert_eq!(engine.instance().graph.num_edges(), 0);

    let (engine, _) = apply_checked(&path(4), ForwardSite::Deg1 { v: v(0), u: v(1) });
    assert_eq!(canonical_form(&engine.instance().graph), canonical_form(&path(2)));
}

#[test]
fn deg2_fold_examples() {
    let (engine, dk) =
        apply_checked(&path(3), ForwardSite::Deg2Fold { v: v(1), a: v(0), b: v(2) });
    assert_eq!(engine.instance().graph.num_vertices(), 1);
    assert_eq!(dk, -1);

    let (engine, _) = apply_checked(&path(5), ForwardSite::Deg2Fold { v: v(2), a: v(1), b: v(3) });
    assert_eq!(canonical_form(&engine.instance().graph), canonical_form(&path(3)));

    // a triangle vertex has adjacent neighbors: not a site
    let mut engine = Engine::new(Instance::counting(cycle(3)));
    let err = engine
        .apply_and_record(&AnySite::Forward(ForwardSite::Deg2Fold { v: v(0), a: v(1), b: v(2) }))
        .unwrap_err();
    assert!(matches!(err, RuleError::StaleSite(_)));
    assert!(engine.find_forward(ForwardRuleId::Deg2Fold, None).is_empty());
}

#[test]
fn deg3_examples() {
    // star center: every permutation gives P3
    for perm in [[v(1), v(2), v(3)], [v(2), v(3), v(1)], [v(3), v(1), v(2)]] {
        let (engine, dk) = apply_checked(&star(3), ForwardSite::Deg3Is { v: v(0), perm });
        assert_eq!(canonical_form(&engine.instance().graph), canonical_form(&path(3)));
        assert_eq!(dk, 0);
    }

    // leaves a, c plus a middle neighbor with one outside vertex x
    let g = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (2, 4)]);
    let (engine, _) =
        apply_checked(&g, ForwardSite::Deg3Is { v: v(0), perm: [v(1), v(2), v(3)] });
    let result = &engine.instance().graph;
    assert!(result.has_edge(v(1), v(2)));
    assert!(result.has_edge(v(2), v(3)));
    assert!(result.has_edge(v(1), v(4)));
    assert!(result.has_edge(v(2), v(4)));
    assert_eq!(result.num_edges(), 4);

    // neighborhood with an internal edge is not a site
    let mut blocked = star(3);
    blocked.add_edge(v(1), v(2)).unwrap();
    let mut engine = Engine::new(Instance::counting(blocked));
    assert!(engine.find_forward(ForwardRuleId::Deg3Is, None).is_empty());
}

#[test]
fn deg_gt_k_and_buss() {
    let mut engine = Engine::new(Instance::budget(star(5), 3));
    engine
        .apply_and_record(&AnySite::Forward(ForwardSite::DegGtK { v: v(0) }))
        .unwrap();
    assert_eq!(engine.k(), 2);
    assert_eq!(engine.instance().graph.num_edges(), 0);

    // not above budget: no site at k = 5
    let engine = Engine::new(Instance::budget(star(5), 5));
    assert!(engine.find_forward(ForwardRuleId::DegGtK, None).is_empty());

    assert!(!buss_no_instance_check(&Instance::budget(Graph::new(), 0)).unwrap());
    assert!(buss_no_instance_check(&Instance::budget(path(2), 0)).unwrap());
    assert!(!buss_no_instance_check(&Instance::budget(cycle(4), 2)).unwrap());
    assert!(buss_no_instance_check(&Instance::counting(Graph::new())).is_err());
}

#[test]
fn domination_examples() {
    // triangle plus pendant: u dominates v, deleting u leaves edge {v,w} + x
    let g = Graph::from_edges(4, &[(0, 1), (0, 2), (1, 2), (0, 3)]);
    let (engine, dk) = apply_checked(&g, ForwardSite::Dom { u: v(0), v: v(1) });
    assert_eq!(dk, -1);
    let result = &engine.instance().graph;
    assert!(result.has_edge(v(1), v(2)));
    assert_eq!(result.num_edges(), 1);
    assert_eq!(result.degree(v(3)).unwrap(), 0);

    // any triangle edge dominates
    let (engine, _) = apply_checked(&cycle(3), ForwardSite::Dom { u: v(0), v: v(1) });
    assert_eq!(canonical_form(&engine.instance().graph), canonical_form(&path(2)));

    // nonadjacent vertices are never a site even with nested neighborhoods
    let nested = Graph::from_edges(4, &[(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
    let engine = Engine::new(Instance::counting(nested));
    let sites = engine.find_forward(ForwardRuleId::Dom, None);
    assert!(!sites
        .iter()
        .any(|s| matches!(s, ForwardSite::Dom { u, v: w } if (*u == v(0) && *w == v(1)) || (*u == v(1) && *w == v(0)))));
}

#[test]
fn unconfined_examples() {
    // triangle plus pendant: the dominator is unconfined after one iteration
    let g = Graph::from_edges(4, &[(0, 1), (0, 2), (1, 2), (0, 3)]);
    let trail = unconfined_check(&g, v(0), 1).unwrap();
    assert!(trail.steps.is_empty());
    let (engine, dk) = apply_checked(&g, ForwardSite::Unconf { v: v(0) });
    assert_eq!(dk, -1);
    assert_eq!(engine.instance().graph.num_edges(), 1);

    // P4 endpoint: S grows once, then the far endpoint certifies
    let trail = unconfined_check(&path(4), v(0), 1).unwrap();
    assert_eq!(trail.steps.len(), 1);
    assert_eq!(trail.steps[0].grew, v(2));
    let (engine, _) = apply_checked(&path(4), ForwardSite::Unconf { v: v(0) });
    assert_eq!(canonical_form(&engine.instance().graph), canonical_form(&path(3)));
    // the oracle confirms a minimum cover through v(0): {0, 2} covers P4
    assert!(verify_cover(&path(4), &[v(0), v(2)]));
    assert_eq!(brute_force_tau(&path(4)).tau, 2);

    // P3 endpoint: the check fails
    assert!(unconfined_check(&path(3), v(0), 1).is_none());
}

#[test]
fn unconfined_kappa_examples() {
    // kappa = 0 never fires
    assert!(unconfined_check(&path(4), v(0), 0).is_none());

    // K_{2,3}: plain unconfined says no, kappa = 2 finds the biclique
    let g = Graph::from_edges(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]);
    assert!(unconfined_check(&g, v(0), 1).is_none());
    assert!(unconfined_check(&g, v(0), 2).is_some());
    // the oracle confirms a minimum cover containing vertex 0
    let result = brute_force_tau(&g);
    assert_eq!(result.tau, 2);
    assert!(verify_cover(&g, &[v(0), v(1)]));
    let (_, dk) = apply_checked(&g, ForwardSite::UnconfKappa { v: v(0), kappa: 2 });
    assert_eq!(dk, -1);
}

#[test]
fn desk_examples() {
    let (engine, dk) =
        apply_checked(&cycle(4), ForwardSite::Desk { cycle: [v(0), v(1), v(2), v(3)] });
    assert!(engine.instance().graph.is_empty());
    assert_eq!(dk, -2);

    // one outside neighbor per side: the missing edge {p, q} appears
    let mut g = cycle(4);
    let p = g.add_vertex();
    let q = g.add_vertex();
    g.add_edge(v(0), p).unwrap();
    g.add_edge(v(1), q).unwrap();
    let (engine, dk) = apply_checked(&g, ForwardSite::Desk { cycle: [v(0), v(1), v(2), v(3)] });
    assert_eq!(dk, -2);
    assert!(engine.instance().graph.has_edge(p, q));
    assert_eq!(engine.instance().graph.num_edges(), 1);

    // a chord disqualifies the cycle
    let mut chorded = cycle(4);
    chorded.add_edge(v(0), v(2)).unwrap();
    let engine = Engine::new(Instance::counting(chorded));
    assert!(engine.find_forward(ForwardRuleId::Desk, None).is_empty());
}

#[test]
fn cn_examples() {
    // clique neighborhood: every star is a single center, C1 empty
    let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
    assert_eq!(find_cn_partition(&k4, v(0)), None);

    // N(v) = {a, b, c} with only a-b: complement is a star centered c
    let g = Graph::from_edges(4, &[(3, 0), (3, 1), (3, 2), (0, 1)]);
    let (c1, c2) = find_cn_partition(&g, v(3)).unwrap();
    assert_eq!(c1, vec![v(0), v(1)]);
    assert_eq!(c2, vec![v(2)]);

    // a triangle in the complement blocks the partition
    let empty_neighborhood = star(3); // complement of empty G[N(v)] is K3
    assert_eq!(find_cn_partition(&empty_neighborhood, v(0)), None);

    // the worked reduction: delete v and c, connect a and b to x
    let g = Graph::from_edges(
        6,
        &[(0, 1), (0, 2), (0, 3), (1, 2), (3, 4), (1, 5)],
    );
    // v = 0, N(v) = {1, 2, 3}, edges 1-2 (clique C1), 3-4 (outside), 1-5 (outside)
    let (c1, c2) = find_cn_partition(&g, v(0)).unwrap();
    assert_eq!((c1.clone(), c2.clone()), (vec![v(1), v(2)], vec![v(3)]));
    let (engine, dk) = apply_checked(&g, ForwardSite::Cn { v: v(0), c1, c2 });
    assert_eq!(dk, -1);
    let result = &engine.instance().graph;
    assert!(result.has_edge(v(1), v(4)));
    assert!(result.has_edge(v(2), v(4)));
    assert!(result.has_edge(v(1), v(2)));
    assert!(result.has_edge(v(1), v(5)));
    assert_eq!(result.num_edges(), 4);
}

#[test]
fn oe_delete_examples() {
    // P3 with witness c = vertex 2: delete {0,1}, leaving {1,2} + isolated 0
    let g = path(3); // edges 0-1, 1-2
    let (engine, dk) = apply_checked(&g, ForwardSite::OeDel { a: v(0), b: v(1), c: v(2) });
    assert_eq!(dk, 0);
    assert_eq!(engine.instance().graph.num_edges(), 1);
    assert_eq!(engine.instance().graph.num_vertices(), 3);

    // triangle: c adjacent to both endpoints, not a site
    let engine = Engine::new(Instance::counting(cycle(3)));
    assert!(engine.find_forward(ForwardRuleId::OeDel, None).is_empty());
}

#[test]
fn struction_examples() {
    // degree-2 vertex in a triangle: exactly the triangle rule
    let mut g = cycle(3);
    let x = g.add_vertex();
    g.add_edge(v(0), x).unwrap();
    g.add_edge(v(1), x).unwrap();
    // vertex 2 has degree 2 with adjacent neighbors 0, 1
    let (engine_struct, dk) =
        apply_checked(&g, ForwardSite::Struct { v: v(2), order: vec![v(0), v(1)], unguarded: false });
    assert_eq!(dk, -2);
    let (engine_triangle, dk2) =
        apply_checked(&g, ForwardSite::Triangle { v: v(2), u: v(0), w: v(1) });
    assert_eq!(dk2, -2);
    assert_eq!(
        canonical_form(&engine_struct.instance().graph),
        canonical_form(&engine_triangle.instance().graph)
    );

    // P3 center: one non-edge, a single vertex remains
    let (engine, dk) = apply_checked(
        &path(3),
        ForwardSite::Struct { v: v(1), order: vec![v(0), v(2)], unguarded: false },
    );
    assert_eq!(dk, -1);
    assert_eq!(engine.instance().graph.num_vertices(), 1);

    // star center with three leaves: |W| = 3 = d, result is P3
    let (engine, dk) = apply_checked(
        &star(3),
        ForwardSite::Struct { v: v(0), order: vec![v(1), v(2), v(3)], unguarded: false },
    );
    assert_eq!(dk, 0);
    assert_eq!(canonical_form(&engine.instance().graph), canonical_form(&path(3)));

    // the guard rejects vertices whose neighborhood misses too many edges
    let mut engine = Engine::new(Instance::counting(star(4)));
    let err = engine
        .apply_and_record(&AnySite::Forward(ForwardSite::Struct {
            v: v(0),
            order: vec![v(1), v(2), v(3), v(4)],
            unguarded: false,
        }))
        .unwrap_err();
    assert!(matches!(err, RuleError::StaleSite(_)));
    // unguarded application is allowed and safe, just bigger
    let (engine, dk) = apply_checked(
        &star(4),
        ForwardSite::Struct {
            v: v(0),
            order: vec![v(1), v(2), v(3), v(4)],
            unguarded: true,
        },
    );
    assert_eq!(dk, 2);
    assert_eq!(engine.instance().graph.num_vertices(), 6);
}

#[test]
fn magnet_examples() {
    // triangle edge: both private sides empty, common = third vertex
    let (engine, dk) = apply_checked(&cycle(3), ForwardSite::Magnet { a: v(0), b: v(1) });
    assert_eq!(dk, -1);
    assert_eq!(engine.instance().graph.num_edges(), 1);
    assert_eq!(engine.instance().graph.num_vertices(), 2);

    // a missing cross edge blocks the rule: P4 middle edge has
    // A = {0}, B = {3} nonadjacent
    let engine = Engine::new(Instance::counting(path(4)));
    let sites = engine.find_forward(ForwardRuleId::Magnet, None);
    assert!(!sites.iter().any(|s| matches!(s, ForwardSite::Magnet { a, b } if *a == v(1) && *b == v(2))));
}

#[test]
fn lp_examples() {
    // star: center 1, leaves 0, applying deletes everything
    let sol = solve_lp_extreme(&star(3));
    assert_eq!(sol.values[&v(0)], LpValue::One);
    assert_eq!(sol.objective_doubled, 2);
    let (engine, dk) =
        apply_checked(&star(3), ForwardSite::Lp { v0: sol.v0(), v1: sol.v1() });
    assert!(engine.instance().graph.is_empty());
    assert_eq!(dk, -1);

    // C4: integral extreme solution, the rule empties the cycle
    let sol = solve_lp_extreme(&cycle(4));
    assert_eq!(sol.half_count(), 0);
    let (engine, dk) = apply_checked(&cycle(4), ForwardSite::Lp { v0: sol.v0(), v1: sol.v1() });
    assert!(engine.instance().graph.is_empty());
    assert_eq!(dk, -2);

    // C5: the unique optimum is all-half, the rule reports no site
    let engine = Engine::new(Instance::counting(cycle(5)));
    assert!(engine.find_forward(ForwardRuleId::Lp, None).is_empty());
}

#[test]
fn backward_undeg2_examples() {
    // splitting an isolated vertex gives P3
    let mut engine = Engine::new(Instance::counting(Graph::from_edges(1, &[])));
    engine
        .apply_and_record(&AnySite::Backward(BackwardSite::Undeg2 {
            v: v(0),
            to_a: vec![],
            to_b: vec![],
        }))
        .unwrap();
    assert_eq!(canonical_form(&engine.instance().graph), canonical_form(&path(3)));
    assert_eq!(engine.k(), 1);
    assert_eq!(brute_force_tau(&engine.instance().graph).tau, 1);

    // splitting with all neighbors on one side leaves b a pendant, and the
    // split vertex a with an independent neighborhood of size 3
    let g = star(4);
    let mut engine = Engine::new(Instance::counting(g));
    engine
        .apply_and_record(&AnySite::Backward(BackwardSite::Undeg2 {
            v: v(0),
            to_a: vec![v(1), v(2), v(3), v(4)],
            to_b: vec![],
        }))
        .unwrap();
    let g2 = &engine.instance().graph;
    let a = v(5);
    let b = v(6);
    assert_eq!(g2.degree(b).unwrap(), 1);
    assert_eq!(g2.degree(a).unwrap(), 5);
    assert_eq!(g2.degree(v(0)).unwrap(), 2);
}

#[test]
fn backward_undeg3_examples() {
    // a standalone P3 becomes a claw
    let mut engine = Engine::new(Instance::counting(path(3)));
    engine
        .apply_and_record(&AnySite::Backward(BackwardSite::Undeg3 {
            a: v(0),
            b: v(1),
            c: v(2),
            drops: vec![],
        }))
        .unwrap();
    assert_eq!(canonical_form(&engine.instance().graph), canonical_form(&star(3)));
    assert_eq!(engine.k(), 0);

    // an outside vertex adjacent to only one path vertex blocks the rule
    let mut g = path(3);
    let u = g.add_vertex();
    g.add_edge(v(1), u).unwrap();
    let mut engine = Engine::new(Instance::counting(g));
    let err = engine
        .apply_and_record(&AnySite::Backward(BackwardSite::Undeg3 {
            a: v(0),
            b: v(1),
            c: v(2),
            drops: vec![],
        }))
        .unwrap_err();
    assert!(matches!(err, RuleError::StaleSite(_)));
}

#[test]
fn backward_uncn_examples() {
    // triangle at edge (0,1): five vertices, tau grows 2 -> 3
    let g = cycle(3);
    assert_eq!(brute_force_tau(&g).tau, 2);
    let mut engine = Engine::new(Instance::counting(g));
    engine
        .apply_and_record(&AnySite::Backward(BackwardSite::Uncn { a: v(0), b: v(1) }))
        .unwrap();
    let g2 = engine.instance().graph.clone();
    assert_eq!(g2.num_vertices(), 5);
    assert_eq!(brute_force_tau(&g2).tau, 3);
    assert_eq!(engine.k(), 1);

    // an edge without common neighbors gets the degenerate pendant shape
    let mut engine = Engine::new(Instance::counting(path(2)));
    engine
        .apply_and_record(&AnySite::Backward(BackwardSite::Uncn { a: v(0), b: v(1) }))
        .unwrap();
    assert_eq!(engine.instance().graph.num_vertices(), 4);
    assert_eq!(engine.k(), 1);
}

#[test]
fn backward_undom_examples() {
    // P2 with S empty at v: a triangle
    let mut engine = Engine::new(Instance::counting(path(2)));
    engine
        .apply_and_record(&AnySite::Backward(BackwardSite::Undom { v: v(0), s: vec![] }))
        .unwrap();
    assert_eq!(canonical_form(&engine.instance().graph), canonical_form(&cycle(3)));
    assert_eq!(engine.k(), 1);
    assert_eq!(brute_force_tau(&engine.instance().graph).tau, 2);

    // isolated vertex: a single edge
    let mut engine = Engine::new(Instance::counting(Graph::from_edges(1, &[])));
    engine
        .apply_and_record(&AnySite::Backward(BackwardSite::Undom { v: v(0), s: vec![] }))
        .unwrap();
    assert_eq!(engine.instance().graph.num_edges(), 1);
}

#[test]
fn backward_ununconf_examples() {
    // S = N[w] makes the new vertex dominate w
    let g = path(3);
    let mut engine = Engine::new(Instance::counting(g));
    engine
        .apply_and_record(&AnySite::Backward(BackwardSite::Ununconf {
            s: vec![v(0), v(1), v(2)],
        }))
        .unwrap();
    assert_eq!(engine.k(), 1);
    assert_eq!(engine.instance().graph.num_vertices(), 4);

    // empty S is reported not-applicable and leaves no trace
    let mut engine = Engine::new(Instance::counting(path(3)));
    let before = engine.instance().clone();
    let err = engine
        .apply_and_record(&AnySite::Backward(BackwardSite::Ununconf { s: vec![] }))
        .unwrap_err();
    assert!(matches!(err, RuleError::NotApplicable(_)));
    assert_eq!(engine.instance(), &before);
    assert!(engine.trace().is_empty());
}

#[test]
fn backward_oe_insert_examples() {
    // single edge 1-2 plus isolated 0: insert {0,1} with witness 2, then
    // deleting it again restores the original
    let mut g = Graph::from_edges(3, &[(1, 2)]);
    g.validate().unwrap();
    let mut engine = Engine::new(Instance::counting(g.clone()));
    engine
        .apply_and_record(&AnySite::Backward(BackwardSite::OeIns { a: v(0), b: v(1), c: v(2) }))
        .unwrap();
    assert_eq!(canonical_form(&engine.instance().graph), canonical_form(&path(3)));
    assert_eq!(engine.k(), 0);
    engine
        .apply_and_record(&AnySite::Forward(ForwardSite::OeDel { a: v(0), b: v(1), c: v(2) }))
        .unwrap();
    assert_eq!(engine.instance().graph, g);

    // witness adjacent to both endpoints is rejected
    let mut engine = Engine::new(Instance::counting(star(2)));
    let err = engine
        .apply_and_record(&AnySite::Backward(BackwardSite::OeIns { a: v(1), b: v(2), c: v(0) }))
        .unwrap_err();
    assert!(matches!(err, RuleError::StaleSite(_)));
}

#[test]
fn mode_gates() {
    let mut engine = Engine::new(Instance::counting(star(5)));
    let err = engine
        .apply_and_record(&AnySite::Forward(ForwardSite::DegGtK { v: v(0) }))
        .unwrap_err();
    assert!(matches!(err, RuleError::RequiresBudgetMode(_)));
}

#[test]
fn counting_mode_allows_negative_k() {
    let mut engine = Engine::new(Instance::counting(path(2)));
    assert_eq!(engine.instance().mode, Mode::Counting);
    engine
        .apply_and_record(&AnySite::Forward(ForwardSite::Deg1 { v: v(0), u: v(1) }))
        .unwrap();
    assert_eq!(engine.k(), -1);
}
