//! Blocks, simplicial blocks, and the constructions that derive new
//! simplicial blocks from old ones.
//!
//! A block is a vertex set `K` with `|K| <= 4`, no independent triple inside
//! `G[K]`, and no isolated vertex in `G[K]` when `|K| = 4`. It is simplicial
//! when `N(v) \ K` is a block of `G - K` for every `v` in `K`.
//!
//! The derivations here (residual blocks, pair residual blocks, the block
//! partition, seed blocks after deleting a vertex) are guaranteed to produce
//! simplicial blocks only on graphs with the intersection-graph structure of
//! (3,3)-hypergraphs. Outputs that are not even blocks are always reported as
//! [`Error::Structural`]; simpliciality of outputs is re-checked in debug
//! builds only.

use crate::error::{Error, Result};
use crate::intersection::IGraph;
use crate::vertex_set::VertexSet;

/// Largest block size.
pub const MAX_BLOCK: usize = 4;

/// True iff `s` is a block of `g`. Vertices of `s` outside `g` make it fail.
pub fn is_block(g: &IGraph, s: &VertexSet) -> bool {
    if !s.is_subset(g.active()) {
        return false;
    }
    let members = s.to_vec();
    let k = members.len();
    if k > MAX_BLOCK {
        return false;
    }
    for a in 0..k {
        for b in a + 1..k {
            if g.adjacent(members[a], members[b]) {
                continue;
            }
            for c in b + 1..k {
                if !g.adjacent(members[a], members[c]) && !g.adjacent(members[b], members[c]) {
                    return false;
                }
            }
        }
    }
    if k == MAX_BLOCK {
        return members
            .iter()
            .all(|&v| members.iter().any(|&w| g.adjacent(v, w)));
    }
    true
}

pub fn is_simplicial_block(g: &IGraph, s: &VertexSet) -> bool {
    if !is_block(g, s) {
        return false;
    }
    let rest = g.induced(s);
    s.iter()
        .all(|v| is_block(&rest, &g.neighbors(v).difference(s)))
}

fn check_derived(graph: &IGraph, block: VertexSet, what: impl Fn() -> String) -> Result<VertexSet> {
    if !is_block(graph, &block) {
        return Err(Error::Structural(format!(
            "{} = {:?} is not a block ({} vertices)",
            what(),
            block,
            block.len()
        )));
    }
    if cfg!(debug_assertions) && !is_simplicial_block(graph, &block) {
        return Err(Error::Structural(format!(
            "{} = {:?} is a block but not simplicial",
            what(),
            block
        )));
    }
    Ok(block)
}

/// `K_v = N(v) \ K`, a simplicial block of `G - K`.
pub fn residual_block(g: &IGraph, k: &VertexSet, v: usize) -> Result<VertexSet> {
    if !k.contains(v) {
        return Err(Error::Precondition(format!(
            "vertex {v} not in block {k:?}"
        )));
    }
    let kv = g.neighbors(v).difference(k);
    check_derived(&g.induced(k), kv, || format!("K_{v}"))
}

/// `K_uv = N(u) \ (N(v) ∪ K)`, a simplicial block of `G - K - K_v`.
pub fn pair_residual_block(g: &IGraph, k: &VertexSet, u: usize, v: usize) -> Result<VertexSet> {
    if u == v || !k.contains(u) || !k.contains(v) {
        return Err(Error::Precondition(format!(
            "pair ({u},{v}) must be two distinct members of {k:?}"
        )));
    }
    if g.adjacent(u, v) {
        return Err(Error::Precondition(format!("{u} and {v} are adjacent")));
    }
    let nv = g.neighbors(v);
    let residual = g.induced(&k.union(&nv));
    let kuv = g.neighbors(u).difference(&nv.union(k));
    check_derived(&residual, kuv, || format!("K_({u},{v})"))
}

/// Ordered partition `K_1, ..., K_m` of a connected graph where each `K_i` is
/// a nonempty simplicial block of `G_i = G - (K_1 ∪ ... ∪ K_{i-1})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPartition {
    pub blocks: Vec<VertexSet>,
}

impl BlockPartition {
    /// The nested residual graphs `G_1 = G, G_2, ..., G_m`.
    pub fn residual_graphs(&self, g: &IGraph) -> Vec<IGraph> {
        let mut current = g.clone();
        let mut out = Vec::with_capacity(self.blocks.len());
        for b in &self.blocks {
            out.push(current.clone());
            current = current.induced(b);
        }
        out
    }

    /// Disjoint, covering, and every prefix condition holds.
    pub fn is_valid_for(&self, g: &IGraph) -> bool {
        let mut covered = g.set_of([]);
        for b in &self.blocks {
            if b.is_empty() || b.intersects(&covered) {
                return false;
            }
            covered = covered.union(b);
        }
        covered == *g.active()
            && self
                .residual_graphs(g)
                .iter()
                .zip(&self.blocks)
                .all(|(gi, b)| is_simplicial_block(gi, b))
    }
}

/// Extends a seed block to a full [`BlockPartition`].
///
/// The next block is `N(v) ∩ R` for the first placed vertex `v` (blocks in
/// placement order, members ascending) with a neighbor in the unplaced set `R`.
pub fn block_partition(g: &IGraph, seed: &VertexSet) -> Result<BlockPartition> {
    if g.is_empty() || !g.is_connected() {
        return Err(Error::Precondition(
            "block partition needs a nonempty connected graph".into(),
        ));
    }
    if seed.is_empty() || !is_simplicial_block(g, seed) {
        return Err(Error::Precondition(format!(
            "seed {seed:?} is not a nonempty simplicial block"
        )));
    }
    let mut blocks = vec![seed.clone()];
    let mut remaining = g.active().difference(seed);
    while !remaining.is_empty() {
        let (v, next) = blocks
            .iter()
            .flat_map(|b| b.iter())
            .map(|v| (v, g.neighbors(v).intersection(&remaining)))
            .find(|(_, n)| !n.is_empty())
            .expect("connected graph has an edge leaving the placed set");
        let rest = g.restrict(&remaining);
        let next = check_derived(&rest, next, || format!("N({v}) ∩ R"))?;
        remaining = remaining.difference(&next);
        blocks.push(next);
    }
    Ok(BlockPartition { blocks })
}

/// For every connected component `C` of `G - N[v]`, a simplicial block of
/// `G[C]` of the form `N(u) ∩ C` with `u` the smallest neighbor of `v`
/// touching `C`.
pub fn seed_blocks_after_delete(g: &IGraph, v: usize) -> Result<Vec<(VertexSet, VertexSet)>> {
    if !g.contains(v) {
        return Err(Error::Precondition(format!("vertex {v} not in graph")));
    }
    let nv = g.neighbors(v);
    let rest = g.induced(&g.closed_neighbors(v));
    rest.connected_components()
        .into_iter()
        .map(|comp| {
            let u = nv
                .iter()
                .find(|&u| g.neighbors(u).intersects(&comp))
                .ok_or_else(|| {
                    Error::Precondition(format!(
                        "no neighbor of {v} reaches component {comp:?}; is G - {v} connected?"
                    ))
                })?;
            let block = g.neighbors(u).intersection(&comp);
            let block = check_derived(&g.restrict(&comp), block, || format!("N({u}) ∩ C"))?;
            Ok((comp, block))
        })
        .collect()
}

/// All nonempty simplicial blocks of `g`, in lexicographic order of members.
pub fn enumerate_simplicial_blocks(g: &IGraph) -> Vec<VertexSet> {
    let verts: Vec<usize> = g.vertices().collect();
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(MAX_BLOCK);
    fn rec(
        g: &IGraph,
        verts: &[usize],
        start: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<VertexSet>,
    ) {
        for i in start..verts.len() {
            chosen.push(verts[i]);
            let s = g.set_of(chosen.iter().copied());
            // supersets of a set with an independent triple are never blocks
            let prunable = chosen.len() >= 3 && !is_block(g, &s) && chosen.len() < MAX_BLOCK;
            if is_simplicial_block(g, &s) {
                out.push(s);
            }
            if chosen.len() < MAX_BLOCK && !prunable {
                rec(g, verts, i + 1, chosen, out);
            }
            chosen.pop();
        }
    }
    rec(g, &verts, 0, &mut chosen, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{gen_random_33, named_instance};
    use proptest::prelude::*;

    fn graph(n: usize, e: &[(usize, usize)]) -> IGraph {
        IGraph::from_edges(n, e).unwrap()
    }

    #[test]
    fn block_examples() {
        let g = graph(4, &[(0, 1), (2, 3)]);
        assert!(is_block(&g, &g.set_of([])));
        assert!(is_block(&g, &g.set_of([0, 1, 2, 3])));
        let indep = graph(3, &[]);
        assert!(!is_block(&indep, &indep.set_of([0, 1, 2])));
        // 4 vertices with an isolated one: triangle plus a loner
        let g = graph(4, &[(0, 1), (1, 2), (0, 2)]);
        assert!(!is_block(&g, &g.set_of([0, 1, 2, 3])));
        let k5 = graph(
            5,
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (0, 4),
                (1, 2),
                (1, 3),
                (1, 4),
                (2, 3),
                (2, 4),
                (3, 4),
            ],
        );
        assert!(!is_block(&k5, k5.active()));
    }

    #[test]
    fn simplicial_examples() {
        let g = IGraph::line_graph(&named_instance("two-sharing").unwrap());
        assert!(is_simplicial_block(&g, &g.set_of([])));
        assert!(is_simplicial_block(&g, &g.set_of([0])));
        assert!(is_simplicial_block(&g, &g.set_of([1])));
        let star = graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert!(!is_simplicial_block(&star, &star.set_of([0])));
    }

    #[test]
    fn residual_examples() {
        let tri = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(
            residual_block(&tri, &tri.set_of([0, 1, 2]), 0).unwrap(),
            tri.set_of([])
        );
        assert_eq!(
            residual_block(&tri, &tri.set_of([0]), 0).unwrap(),
            tri.set_of([1, 2])
        );
        let k7 = IGraph::line_graph(&named_instance("fano").unwrap());
        assert!(!is_simplicial_block(&k7, &k7.set_of([0])));
        assert!(matches!(
            residual_block(&k7, &k7.set_of([0]), 0),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn pair_residual_examples() {
        // u=0, v=1 non-adjacent, x=2 hangs off u only
        let g = graph(3, &[(0, 2)]);
        let k = g.set_of([0, 1]);
        assert_eq!(pair_residual_block(&g, &k, 0, 1).unwrap(), g.set_of([2]));
        // N(u) ⊆ N(v) ∪ K
        let g = graph(3, &[(0, 2), (1, 2)]);
        let k = g.set_of([0, 1]);
        assert_eq!(pair_residual_block(&g, &k, 0, 1).unwrap(), g.set_of([]));
        let g = graph(2, &[(0, 1)]);
        assert!(matches!(
            pair_residual_block(&g, &g.set_of([0, 1]), 0, 1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn partition_examples() {
        let single = graph(1, &[]);
        let p = block_partition(&single, &single.set_of([0])).unwrap();
        assert_eq!(p.blocks, vec![single.set_of([0])]);
        let tri = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        let p = block_partition(&tri, &tri.set_of([0])).unwrap();
        assert_eq!(p.blocks, vec![tri.set_of([0]), tri.set_of([1, 2])]);
        assert!(p.is_valid_for(&tri));
        let two = graph(2, &[]);
        assert!(block_partition(&two, &two.set_of([0])).is_err());
        let star = graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert!(block_partition(&star, &star.set_of([0])).is_err());
    }

    #[test]
    fn seed_block_examples() {
        let single = graph(1, &[]);
        assert!(seed_blocks_after_delete(&single, 0).unwrap().is_empty());
        let p = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        let seeds = seed_blocks_after_delete(&p, 0).unwrap();
        assert_eq!(seeds, vec![(p.set_of([2, 3]), p.set_of([2]))]);
    }

    fn corpus_graph(n: usize, m: usize, seed: u64) -> IGraph {
        IGraph::line_graph(&gen_random_33(n, m, seed).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn restriction_preserves_blocks(n in 6usize..20, m in 1usize..11, seed: u64, mask: u16) {
            let g = corpus_graph(n, m, seed);
            let keep = g.set_of(g.vertices().filter(|v| mask & (1 << (v % 16)) != 0));
            let sub = g.restrict(&keep);
            for k in enumerate_simplicial_blocks(&g) {
                prop_assert!(is_simplicial_block(&sub, &k.intersection(&keep)));
            }
        }

        #[test]
        fn derived_blocks_are_simplicial(n in 6usize..20, m in 1usize..11, seed: u64) {
            let g = corpus_graph(n, m, seed);
            for k in enumerate_simplicial_blocks(&g) {
                let rest = g.induced(&k);
                for v in k.iter() {
                    let kv = residual_block(&g, &k, v).unwrap();
                    prop_assert!(is_simplicial_block(&rest, &kv));
                    for u in k.iter().filter(|&u| u != v && !g.adjacent(u, v)) {
                        let kuv = pair_residual_block(&g, &k, u, v).unwrap();
                        prop_assert!(is_simplicial_block(&rest.induced(&kv), &kuv));
                    }
                }
            }
        }

        #[test]
        fn partitions_and_seeds_valid(n in 6usize..20, m in 1usize..11, seed: u64) {
            let g = corpus_graph(n, m, seed);
            for comp in g.connected_components() {
                let c = g.restrict(&comp);
                let v = c.non_cut_vertex().unwrap();
                for (piece, block) in seed_blocks_after_delete(&c, v).unwrap() {
                    let sub = g.restrict(&piece);
                    prop_assert!(is_simplicial_block(&sub, &block));
                    let p = block_partition(&sub, &block).unwrap();
                    prop_assert!(p.is_valid_for(&sub));
                }
            }
        }
    }
}
