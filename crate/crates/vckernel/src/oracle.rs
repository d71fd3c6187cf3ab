//! Ground-truth solvers: a brute-force minimum vertex cover oracle for small
//! graphs and a branch-and-reduce solver for mid-size kernels.

use crate::graph::{Graph, Instance, VertexId};

/// An exact answer: the vertex cover number together with a witness cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverResult {
    pub tau: usize,
    pub witness: Vec<VertexId>,
}

/// True iff every edge of `g` has an endpoint in `s`.
pub fn verify_cover(g: &Graph, s: &[VertexId]) -> bool {
    let set: std::collections::BTreeSet<VertexId> = s.iter().copied().collect();
    g.edges().iter().all(|&(u, v)| set.contains(&u) || set.contains(&v))
}

/// Exact minimum vertex cover by branching on a maximum-degree vertex:
/// either it joins the cover or its whole neighborhood does. Intended for
/// graphs with up to roughly 20 vertices; the bitset representation caps
/// it at 64.
pub fn brute_force_tau(g: &Graph) -> CoverResult {
    let order: Vec<VertexId> = g.vertices().collect();
    let n = order.len();
    assert!(n <= 64, "brute-force oracle supports at most 64 vertices");
    let mut adj = vec![0u64; n];
    for (i, &u) in order.iter().enumerate() {
        for (j, &v) in order.iter().enumerate() {
            if i != j && g.has_edge(u, v) {
                adj[i] |= 1u64 << j;
            }
        }
    }
    let alive = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let (_, chosen) = solve_bits(&adj, alive);
    let witness: Vec<VertexId> =
        (0..n).filter(|&i| chosen >> i & 1 == 1).map(|i| order[i]).collect();
    debug_assert!(verify_cover(g, &witness));
    CoverResult { tau: witness.len(), witness }
}

fn solve_bits(adj: &[u64], mut alive: u64) -> (usize, u64) {
    let mut forced = 0u64;
    // peel degree-0 and degree-1 vertices
    loop {
        let mut changed = false;
        let mut rest = alive;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if alive >> i & 1 == 0 {
                continue;
            }
            let nbrs = adj[i] & alive;
            match nbrs.count_ones() {
                0 => {
                    alive &= !(1 << i);
                    changed = true;
                }
                1 => {
                    let j = nbrs.trailing_zeros() as usize;
                    forced |= 1 << j;
                    alive &= !(1 << i | 1 << j);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    if alive == 0 {
        return (forced.count_ones() as usize, forced);
    }
    // pick a maximum-degree vertex among the survivors
    let mut best = usize::MAX;
    let mut best_deg = 0;
    let mut rest = alive;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let d = (adj[i] & alive).count_ones() as usize;
        if d > best_deg || best == usize::MAX {
            best = i;
            best_deg = d;
        }
    }
    let v = best;
    let nbrs = adj[v] & alive;
    // branch: v in the cover
    let (s1, c1) = solve_bits(adj, alive & !(1 << v));
    // mirror branch: all of N(v) in the cover
    let (s2, c2) = solve_bits(adj, alive & !(nbrs | 1 << v));
    let (sub, cover) = if s1 + 1 <= s2 + best_deg {
        (s1 + 1, c1 | 1 << v)
    } else {
        (s2 + best_deg, c2 | nbrs)
    };
    (sub + forced.count_ones() as usize, cover | forced)
}

/// Exact solver interleaving the forward-rule pipeline with branching.
/// Falls back to the brute-force oracle on small graphs and lifts kernel
/// covers back through the reduction trace.
pub fn branch_and_reduce_solve(instance: &Instance) -> CoverResult {
    let witness = bnr(&instance.graph);
    debug_assert!(verify_cover(&instance.graph, &witness));
    CoverResult { tau: witness.len(), witness }
}

fn bnr(g: &Graph) -> Vec<VertexId> {
    use crate::engine::Engine;
    use crate::rules::ForwardRuleId;

    if g.num_vertices() <= 18 {
        return brute_force_tau(g).witness;
    }
    let mut engine = Engine::new(Instance::counting(g.clone()));
    engine
        .reduce_exhaustively(ForwardRuleId::PIPELINE_DEFAULT)
        .expect("reduction of a valid instance");
    let kernel = engine.instance().graph.clone();
    let kernel_cover: Vec<VertexId> = if kernel.is_empty() {
        Vec::new()
    } else {
        // branch on a maximum-degree kernel vertex, mirror style
        let v = kernel
            .vertices()
            .max_by_key(|&v| kernel.degree(v).unwrap())
            .expect("nonempty kernel");
        let nbrs: Vec<VertexId> = kernel.neighbors(v).unwrap().iter().copied().collect();

        let mut without_v = kernel.clone();
        without_v.remove_vertex(v).unwrap();
        let mut c1 = bnr(&without_v);
        c1.push(v);

        let mut without_nbhd = kernel.clone();
        without_nbhd.remove_vertex(v).unwrap();
        for &u in &nbrs {
            without_nbhd.remove_vertex(u).unwrap();
        }
        let mut c2 = bnr(&without_nbhd);
        c2.extend(nbrs);

        if c1.len() <= c2.len() {
            c1
        } else {
            c2
        }
    };
    crate::lift::lift_solution(&Instance::counting(g.clone()), engine.trace(), &kernel_cover)
        .expect("kernel cover lifts")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_graphs() {
        let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(brute_force_tau(&k3).tau, 2);
        let p4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        let res = brute_force_tau(&p4);
        assert_eq!(res.tau, 2);
        assert!(verify_cover(&p4, &res.witness));
        assert_eq!(brute_force_tau(&Graph::new()).tau, 0);
    }

    #[test]
    fn petersen() {
        let outer = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)];
        let spokes = [(0, 5), (1, 6), (2, 7), (3, 8), (4, 9)];
        let inner = [(5, 7), (7, 9), (9, 6), (6, 8), (8, 5)];
        let mut edges = Vec::new();
        edges.extend(outer);
        edges.extend(spokes);
        edges.extend(inner);
        let g = Graph::from_edges(10, &edges);
        let res = brute_force_tau(&g);
        assert_eq!(res.tau, 6);
        // cross-check the stability number: alpha = n - tau
        assert_eq!(g.num_vertices() - res.tau, 4);
    }

    #[test]
    fn cover_verification() {
        let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        assert!(verify_cover(&k3, &[VertexId(0), VertexId(1)]));
        assert!(!verify_cover(&k3, &[VertexId(0)]));
        assert!(verify_cover(&Graph::new(), &[]));
    }
}
