//! Canonical labeling and isomorphism testing.
//!
//! Plain isomorphism goes through an individualization-refinement canonical
//! form (1-dimensional Weisfeiler-Lehman refinement plus backtracking with
//! automorphism pruning). The local isomorphism test compares two
//! modifications of the same base graph under a bijection that is forced to
//! be the identity on all unmodified vertices; it canonicalizes only the
//! modified regions plus their frontier, with frontier vertices pinned.

use crate::graph::{Graph, VertexId};
use std::collections::{BTreeMap, BTreeSet};

/// Order-independent fingerprint of a (colored) graph. Two graphs get equal
/// forms iff they are isomorphic by a color-preserving bijection.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

/// Coloring used to pin vertices during refinement: a pinned vertex sits in
/// a frozen singleton class that refinement never merges or moves.
pub type PinnedColoring = BTreeMap<VertexId, u64>;

const UNPINNED: u64 = 0;

fn pin_token(v: VertexId) -> u64 {
    u64::from(v.0) + 1
}

struct Indexed {
    ids: Vec<VertexId>,
    adj: Vec<Vec<usize>>,
    matrix: Vec<bool>,
    tokens: Vec<u64>,
    n: usize,
}

impl Indexed {
    fn build(g: &Graph, colors: &PinnedColoring) -> Self {
        let ids: Vec<VertexId> = g.vertices().collect();
        let n = ids.len();
        let index: BTreeMap<VertexId, usize> =
            ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adj = vec![Vec::new(); n];
        let mut matrix = vec![false; n * n];
        for (i, &v) in ids.iter().enumerate() {
            for &u in g.neighbors(v).unwrap() {
                let j = index[&u];
                adj[i].push(j);
                matrix[i * n + j] = true;
            }
        }
        let tokens = ids.iter().map(|v| colors.get(v).copied().unwrap_or(UNPINNED)).collect();
        Indexed { ids, adj, matrix, tokens, n }
    }

    fn has_edge(&self, i: usize, j: usize) -> bool {
        self.matrix[i * self.n + j]
    }
}

/// One round of stable refinement: vertices are re-colored by the pair
/// (old color, multiset of neighbor colors); new color values are ranks of
/// the sorted signatures, which keeps the class order input-invariant.
fn refine(idx: &Indexed, mut colors: Vec<usize>) -> Vec<usize> {
    loop {
        let mut signatures: Vec<(usize, Vec<usize>)> = Vec::with_capacity(idx.n);
        for v in 0..idx.n {
            let mut nbr: Vec<usize> = idx.adj[v].iter().map(|&u| colors[u]).collect();
            nbr.sort_unstable();
            signatures.push((colors[v], nbr));
        }
        let mut distinct: Vec<&(usize, Vec<usize>)> = signatures.iter().collect();
        distinct.sort();
        distinct.dedup();
        let rank: BTreeMap<&(usize, Vec<usize>), usize> =
            distinct.iter().enumerate().map(|(r, s)| (*s, r)).collect();
        let next: Vec<usize> = signatures.iter().map(|s| rank[s]).collect();
        let classes_before = colors.iter().collect::<BTreeSet<_>>().len();
        let classes_after = distinct.len();
        let stable = next == colors || classes_after == classes_before;
        colors = next;
        if stable {
            return colors;
        }
    }
}

fn initial_colors(idx: &Indexed) -> Vec<usize> {
    let mut distinct: Vec<u64> = idx.tokens.clone();
    distinct.sort_unstable();
    distinct.dedup();
    idx.tokens.iter().map(|t| distinct.binary_search(t).unwrap()).collect()
}

fn is_discrete(colors: &[usize]) -> bool {
    let mut seen = vec![false; colors.len()];
    for &c in colors {
        if seen[c] {
            return false;
        }
        seen[c] = true;
    }
    true
}

/// Encodes a discrete coloring as a labeled adjacency snapshot.
fn leaf_bytes(idx: &Indexed, colors: &[usize]) -> (Vec<u8>, Vec<usize>) {
    let n = idx.n;
    let mut position = vec![0usize; n];
    for (v, &c) in colors.iter().enumerate() {
        position[c] = v;
    }
    let mut bytes = Vec::with_capacity(4 + n * 8 + n * n / 8 + 1);
    bytes.extend_from_slice(&(n as u32).to_be_bytes());
    for &v in &position {
        bytes.extend_from_slice(&idx.tokens[v].to_be_bytes());
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for a in 0..n {
        for b in (a + 1)..n {
            acc = (acc << 1) | u8::from(idx.has_edge(position[a], position[b]));
            filled += 1;
            if filled == 8 {
                bytes.push(acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        bytes.push(acc << (8 - filled));
    }
    (bytes, position)
}

struct CanonSearch<'a> {
    idx: &'a Indexed,
    best: Option<(Vec<u8>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

const AUTOMORPHISM_CAP: usize = 128;

impl<'a> CanonSearch<'a> {
    fn run(idx: &'a Indexed) -> Vec<u8> {
        if idx.n == 0 {
            return 0u32.to_be_bytes().to_vec();
        }
        let mut search = CanonSearch { idx, best: None, automorphisms: Vec::new() };
        let colors = initial_colors(idx);
        let mut base = Vec::new();
        search.node(colors, &mut base);
        search.best.unwrap().0
    }

    fn node(&mut self, colors: Vec<usize>, base: &mut Vec<usize>) {
        let colors = refine(self.idx, colors);
        if is_discrete(&colors) {
            let (bytes, position) = leaf_bytes(self.idx, &colors);
            match &self.best {
                Some((best_bytes, best_position)) => {
                    if bytes < *best_bytes {
                        self.best = Some((bytes, position));
                    } else if bytes == *best_bytes && self.automorphisms.len() < AUTOMORPHISM_CAP {
                        // equal leaves witness an automorphism
                        let mut perm = vec![0usize; self.idx.n];
                        for p in 0..self.idx.n {
                            perm[best_position[p]] = position[p];
                        }
                        if perm.iter().enumerate().any(|(v, &w)| v != w) {
                            self.automorphisms.push(perm);
                        }
                    }
                }
                None => self.best = Some((bytes, position)),
            }
            return;
        }
        // target cell: the first color class with more than one member
        let mut cell_of = BTreeMap::<usize, Vec<usize>>::new();
        for (v, &c) in colors.iter().enumerate() {
            cell_of.entry(c).or_default().push(v);
        }
        let candidates = cell_of.into_values().find(|cell| cell.len() > 1).expect("non-discrete");
        let mut tried: Vec<usize> = Vec::new();
        for &c in &candidates {
            if self.pruned_by_automorphism(c, &tried, base) {
                continue;
            }
            tried.push(c);
            // individualize c ahead of its cell mates, then refine again
            let mut next: Vec<usize> = colors.iter().map(|&x| x * 2 + 1).collect();
            next[c] -= 1;
            base.push(c);
            self.node(next, base);
            base.pop();
        }
    }

    fn pruned_by_automorphism(&self, candidate: usize, tried: &[usize], base: &[usize]) -> bool {
        self.automorphisms.iter().any(|perm| {
            base.iter().all(|&b| perm[b] == b) && tried.iter().any(|&t| perm[t] == candidate)
        })
    }
}

/// Canonical form of an uncolored graph.
pub fn canonical_form(g: &Graph) -> CanonicalForm {
    canonical_form_colored(g, &PinnedColoring::new())
}

/// Canonical form under an initial coloring. Vertices sharing a color may be
/// mapped to each other; distinct colors never mix. Equal forms mean the two
/// graphs are isomorphic via a color-preserving bijection.
pub fn canonical_form_colored(g: &Graph, colors: &PinnedColoring) -> CanonicalForm {
    let idx = Indexed::build(g, colors);
    CanonicalForm(CanonSearch::run(&idx))
}

/// Coarsest stable refinement of an initial coloring; the result maps each
/// vertex to its class id, classes numbered in an input-order-independent way.
pub fn color_refinement(g: &Graph, init: &PinnedColoring) -> BTreeMap<VertexId, u64> {
    let idx = Indexed::build(g, init);
    let colors = refine(&idx, initial_colors(&idx));
    idx.ids.iter().zip(&colors).map(|(&v, &c)| (v, c as u64)).collect()
}

/// Context of one (possibly composite) graph modification: the resulting
/// graph plus every vertex the modification touched (removed, added, or on
/// the boundary).
#[derive(Debug, Clone)]
pub struct ModContext<'a> {
    pub result: &'a Graph,
    pub touched: BTreeSet<VertexId>,
}

/// Local isomorphism of two modifications of the same base graph: true iff
/// some edge-preserving bijection between the two results maps every
/// untouched vertex to itself. Only the touched regions plus their closed
/// neighborhoods are canonicalized; the frontier is pinned by vertex id.
pub fn locally_isomorphic(a: &ModContext<'_>, b: &ModContext<'_>) -> bool {
    let touched: BTreeSet<VertexId> = a.touched.union(&b.touched).copied().collect();
    let pinned_a: BTreeSet<VertexId> =
        a.result.vertices().filter(|v| !touched.contains(v)).collect();
    let pinned_b: BTreeSet<VertexId> =
        b.result.vertices().filter(|v| !touched.contains(v)).collect();
    if pinned_a != pinned_b {
        return false;
    }
    region_form(a.result, &touched) == region_form(b.result, &touched)
}

fn region_form(g: &Graph, touched: &BTreeSet<VertexId>) -> CanonicalForm {
    let mut region: BTreeSet<VertexId> =
        g.vertices().filter(|v| touched.contains(v)).collect();
    let mut colors = PinnedColoring::new();
    let core = region.clone();
    for &v in &core {
        for &u in g.neighbors(v).unwrap() {
            if !touched.contains(&u) && region.insert(u) {
                colors.insert(u, pin_token(u));
            }
        }
    }
    let sub = g.induced_subgraph(&region).expect("live region");
    canonical_form_colored(&sub, &colors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn path(n: u32) -> Graph {
        let edges: Vec<(u32, u32)> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        Graph::from_edges(n, &edges)
    }

    fn cycle(n: u32) -> Graph {
        let edges: Vec<(u32, u32)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges)
    }

    #[test]
    fn refinement_on_symmetric_graphs() {
        let c6 = cycle(6);
        let stable = color_refinement(&c6, &PinnedColoring::new());
        let classes: BTreeSet<u64> = stable.values().copied().collect();
        assert_eq!(classes.len(), 1);

        let p3 = path(3);
        let stable = color_refinement(&p3, &PinnedColoring::new());
        assert_eq!(stable[&VertexId(0)], stable[&VertexId(2)]);
        assert_ne!(stable[&VertexId(0)], stable[&VertexId(1)]);
    }

    #[test]
    fn refinement_is_idempotent() {
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 4)]);
        let once = color_refinement(&g, &PinnedColoring::new());
        let again = color_refinement(&g, &once);
        // classes may be renumbered but must partition identically
        let part = |c: &BTreeMap<VertexId, u64>| {
            let mut groups = BTreeMap::<u64, Vec<VertexId>>::new();
            for (&v, &col) in c {
                groups.entry(col).or_default().push(v);
            }
            groups.into_values().collect::<BTreeSet<_>>()
        };
        assert_eq!(part(&once), part(&again));
    }

    #[test]
    fn refinement_with_pins_on_c4() {
        let c4 = cycle(4);
        let mut pins = PinnedColoring::new();
        pins.insert(VertexId(0), 1);
        pins.insert(VertexId(2), 2);
        let stable = color_refinement(&c4, &pins);
        // opposite pinned corners leave the two middle vertices symmetric
        assert_eq!(stable[&VertexId(1)], stable[&VertexId(3)]);
        assert_ne!(stable[&VertexId(0)], stable[&VertexId(2)]);

        let mut adjacent = PinnedColoring::new();
        adjacent.insert(VertexId(0), 1);
        adjacent.insert(VertexId(1), 2);
        let stable = color_refinement(&c4, &adjacent);
        let classes: BTreeSet<u64> = stable.values().copied().collect();
        assert_eq!(classes.len(), 4);
    }

    #[test]
    fn canonical_form_distinguishes() {
        assert_ne!(canonical_form(&path(4)), canonical_form(&Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)])));
        // same degree sequence, different graphs
        let two_triangles = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        assert_ne!(canonical_form(&cycle(6)), canonical_form(&two_triangles));
    }

    #[test]
    fn canonical_form_permutation_invariant() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)]);
        let reference = canonical_form(&g);
        let ids: Vec<u32> = (0..6).collect();
        for _ in 0..50 {
            let mut perm = ids.clone();
            perm.shuffle(&mut rng);
            let edges: Vec<(u32, u32)> =
                g.edges().iter().map(|&(u, v)| (perm[u.0 as usize], perm[v.0 as usize])).collect();
            let relabeled = Graph::from_edges(6, &edges);
            assert_eq!(canonical_form(&relabeled), reference);
        }
    }

    #[test]
    fn canonical_form_handles_dense_symmetry() {
        let mut edges = Vec::new();
        for i in 0..8u32 {
            for j in (i + 1)..8 {
                edges.push((i, j));
            }
        }
        let k8 = Graph::from_edges(8, &edges);
        let form = canonical_form(&k8);
        assert_eq!(form, canonical_form(&k8.clone()));
    }

    #[test]
    fn local_isomorphism_same_site() {
        // delete vertex 2 of P5 in "two code paths"
        let base = path(5);
        let mut g1 = base.clone();
        g1.remove_vertex(VertexId(2)).unwrap();
        let g2 = g1.clone();
        let touched: BTreeSet<VertexId> = [1, 2, 3].iter().map(|&i| VertexId(i)).collect();
        let a = ModContext { result: &g1, touched: touched.clone() };
        let b = ModContext { result: &g2, touched };
        assert!(locally_isomorphic(&a, &b));
    }

    #[test]
    fn local_isomorphism_detects_outside_difference() {
        let base = path(5);
        // one modification removes vertex 2, the other removes vertex 0:
        // with touched sets claiming only {2}, the pinned sets differ
        let mut g1 = base.clone();
        g1.remove_vertex(VertexId(2)).unwrap();
        let mut g2 = base.clone();
        g2.remove_vertex(VertexId(0)).unwrap();
        let touched: BTreeSet<VertexId> = [VertexId(2)].into();
        let a = ModContext { result: &g1, touched: touched.clone() };
        let b = ModContext { result: &g2, touched };
        assert!(!locally_isomorphic(&a, &b));
    }
}
