//! Half-integral LP relaxation of vertex cover, Nemhauser-Trotter style.
//!
//! The relaxation is solved on the bipartite double cover via Hopcroft-Karp
//! matching. Among the optimal half-integral solutions, the one with the
//! minimum number of 1/2 entries is selected by analyzing strongly connected
//! components of the matching residual graph: conjugate component pairs are
//! split across the cut, and only self-conjugate components stay half.

use crate::graph::{Graph, VertexId};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpValue {
    Zero,
    Half,
    One,
}

/// An extreme optimal half-integral solution of the vertex cover LP.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub values: BTreeMap<VertexId, LpValue>,
    /// Twice the objective value, always an integer.
    pub objective_doubled: u64,
}

impl LpSolution {
    pub fn v0(&self) -> Vec<VertexId> {
        self.values.iter().filter(|(_, &x)| x == LpValue::Zero).map(|(&v, _)| v).collect()
    }

    pub fn v1(&self) -> Vec<VertexId> {
        self.values.iter().filter(|(_, &x)| x == LpValue::One).map(|(&v, _)| v).collect()
    }

    pub fn half_count(&self) -> usize {
        self.values.values().filter(|&&x| x == LpValue::Half).count()
    }

    pub fn is_all_half(&self) -> bool {
        self.values.values().all(|&x| x == LpValue::Half)
    }
}

/// Hopcroft-Karp maximum matching on a bipartite graph given as left-side
/// adjacency lists. Returns (match_of_left, match_of_right).
pub fn hopcroft_karp(
    left_adj: &[Vec<usize>],
    right_count: usize,
) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
    let n_left = left_adj.len();
    let mut match_l: Vec<Option<usize>> = vec![None; n_left];
    let mut match_r: Vec<Option<usize>> = vec![None; right_count];
    loop {
        // BFS layering from unmatched left vertices
        let mut dist: Vec<u32> = vec![u32::MAX; n_left];
        let mut queue = std::collections::VecDeque::new();
        for (l, m) in match_l.iter().enumerate() {
            if m.is_none() {
                dist[l] = 0;
                queue.push_back(l);
            }
        }
        let mut found_augmenting = false;
        while let Some(l) = queue.pop_front() {
            for &r in &left_adj[l] {
                match match_r[r] {
                    None => found_augmenting = true,
                    Some(l2) => {
                        if dist[l2] == u32::MAX {
                            dist[l2] = dist[l] + 1;
                            queue.push_back(l2);
                        }
                    }
                }
            }
        }
        if !found_augmenting {
            break;
        }
        fn dfs(
            l: usize,
            left_adj: &[Vec<usize>],
            dist: &mut [u32],
            match_l: &mut [Option<usize>],
            match_r: &mut [Option<usize>],
        ) -> bool {
            for i in 0..left_adj[l].len() {
                let r = left_adj[l][i];
                let ok = match match_r[r] {
                    None => true,
                    Some(l2) => {
                        dist[l2] == dist[l] + 1 && dfs(l2, left_adj, dist, match_l, match_r)
                    }
                };
                if ok {
                    match_l[l] = Some(r);
                    match_r[r] = Some(l);
                    return true;
                }
            }
            dist[l] = u32::MAX;
            false
        }
        for l in 0..n_left {
            if match_l[l].is_none() && dist[l] == 0 {
                dfs(l, left_adj, &mut dist, &mut match_l, &mut match_r);
            }
        }
    }
    (match_l, match_r)
}

/// Tarjan strongly connected components; returns a component id per node,
/// with ids in reverse topological order (a component sees only lower ids
/// downstream of it... ids increase against edge direction).
fn tarjan_scc(adj: &[Vec<usize>]) -> (Vec<usize>, usize) {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut next_index = 0usize;
    let mut comp_count = 0usize;

    // iterative Tarjan: (node, edge cursor)
    let mut call_stack: Vec<(usize, usize)> = Vec::new();
    for start in 0..n {
        if index[start] != usize::MAX {
            continue;
        }
        call_stack.push((start, 0));
        index[start] = next_index;
        low[start] = next_index;
        next_index += 1;
        stack.push(start);
        on_stack[start] = true;
        while let Some(&mut (v, ref mut cursor)) = call_stack.last_mut() {
            if *cursor < adj[v].len() {
                let w = adj[v][*cursor];
                *cursor += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call_stack.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call_stack.pop();
                if let Some(&(parent, _)) = call_stack.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = comp_count;
                        if w == v {
                            break;
                        }
                    }
                    comp_count += 1;
                }
            }
        }
    }
    (comp, comp_count)
}

/// Computes an extreme optimal half-integral LP solution.
pub fn solve_lp_extreme(g: &Graph) -> LpSolution {
    let ids: Vec<VertexId> = g.vertices().collect();
    let n = ids.len();
    let index: BTreeMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();

    // bipartite double cover: left copy i, right copy j for every vertex
    let mut left_adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, &v) in ids.iter().enumerate() {
        for &u in g.neighbors(v).unwrap() {
            left_adj[i].push(index[&u]);
        }
    }
    let (match_l, match_r) = hopcroft_karp(&left_adj, n);
    let matching_size: usize = match_l.iter().filter(|m| m.is_some()).count();

    // residual digraph on nodes [L_0..L_n-1, R_0..R_n-1]:
    // every bipartite edge L->R (infinite capacity), matched edges also R->L
    let node = |left: bool, i: usize| if left { i } else { n + i };
    let mut arcs: Vec<Vec<usize>> = vec![Vec::new(); 2 * n];
    for (i, nbrs) in left_adj.iter().enumerate() {
        for &j in nbrs {
            arcs[node(true, i)].push(node(false, j));
        }
    }
    for (j, m) in match_r.iter().enumerate() {
        if let Some(i) = m {
            arcs[node(false, j)].push(node(true, *i));
        }
    }

    // must_in: reachable from an unmatched left (source side of every min cut)
    let mut must_in = vec![false; 2 * n];
    let mut queue: Vec<usize> =
        (0..n).filter(|&i| match_l[i].is_none()).map(|i| node(true, i)).collect();
    for &q in &queue {
        must_in[q] = true;
    }
    while let Some(x) = queue.pop() {
        for &y in &arcs[x] {
            if !must_in[y] {
                must_in[y] = true;
                queue.push(y);
            }
        }
    }
    // must_out: can reach an unmatched right (sink side of every min cut)
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); 2 * n];
    for (x, outs) in arcs.iter().enumerate() {
        for &y in outs {
            rev[y].push(x);
        }
    }
    let mut must_out = vec![false; 2 * n];
    let mut queue: Vec<usize> =
        (0..n).filter(|&j| match_r[j].is_none()).map(|j| node(false, j)).collect();
    for &q in &queue {
        must_out[q] = true;
    }
    while let Some(x) = queue.pop() {
        for &y in &rev[x] {
            if !must_out[y] {
                must_out[y] = true;
                queue.push(y);
            }
        }
    }

    let (comp, comp_count) = tarjan_scc(&arcs);
    // topological numbering of components (Tarjan emits them in reverse
    // topological order, so invert)
    let topo = |c: usize| comp_count - 1 - c;

    // conjugate component of a free component: mirror any member
    let mirror = |x: usize| if x < n { x + n } else { x - n };

    // mirrors of one component must form one component (Dulmage-Mendelsohn:
    // the fine decomposition does not depend on the matching)
    let mut mirror_comp = vec![usize::MAX; comp_count];
    for x in 0..2 * n {
        let c = comp[x];
        let mc = comp[mirror(x)];
        if mirror_comp[c] == usize::MAX {
            mirror_comp[c] = mc;
        } else {
            assert_eq!(mirror_comp[c], mc, "conjugate components must align");
        }
    }

    // a free node joins the source side W iff its component sits
    // topologically after its mirror component
    let in_w = |x: usize| -> bool {
        if must_in[x] {
            return true;
        }
        if must_out[x] {
            return false;
        }
        let c = comp[x];
        let cm = comp[mirror(x)];
        debug_assert!(
            !must_in[mirror(x)] && !must_out[mirror(x)],
            "mirror of a free node must be free"
        );
        topo(c) > topo(cm)
    };

    let mut values = BTreeMap::new();
    let mut doubled = 0u64;
    for (i, &v) in ids.iter().enumerate() {
        let l_in = in_w(node(true, i));
        let r_in = in_w(node(false, i));
        let value = match (l_in, r_in) {
            (true, false) => LpValue::Zero,
            (false, true) => LpValue::One,
            _ => LpValue::Half,
        };
        doubled += match value {
            LpValue::Zero => 0,
            LpValue::Half => 1,
            LpValue::One => 2,
        };
        values.insert(v, value);
    }
    debug_assert_eq!(doubled as usize, matching_size, "LP objective equals half the matching");
    LpSolution { values, objective_doubled: doubled }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    #[test]
    fn single_edge_is_integral_and_optimal() {
        let g = Graph::from_edges(2, &[(0, 1)]);
        let sol = solve_lp_extreme(&g);
        assert_eq!(sol.objective_doubled, 2);
        // the extreme solution has no halves: one endpoint 1, the other 0
        assert_eq!(sol.half_count(), 0);
        assert_eq!(sol.v1().len(), 1);
    }

    #[test]
    fn star_center_is_one() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        let sol = solve_lp_extreme(&g);
        assert_eq!(sol.objective_doubled, 2);
        assert_eq!(sol.values[&VertexId(0)], LpValue::One);
        for leaf in 1..4 {
            assert_eq!(sol.values[&VertexId(leaf)], LpValue::Zero);
        }
    }

    #[test]
    fn c4_is_integral() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let sol = solve_lp_extreme(&g);
        assert_eq!(sol.objective_doubled, 4);
        assert_eq!(sol.half_count(), 0);
        assert_eq!(sol.v1().len(), 2);
    }

    #[test]
    fn c5_is_all_half() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let sol = solve_lp_extreme(&g);
        assert_eq!(sol.objective_doubled, 5);
        assert!(sol.is_all_half());
    }

    #[test]
    fn isolated_vertices_are_zero() {
        let g = Graph::from_edges(3, &[(0, 1)]);
        let sol = solve_lp_extreme(&g);
        assert_eq!(sol.values[&VertexId(2)], LpValue::Zero);
    }
}
