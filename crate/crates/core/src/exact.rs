//! Exact (exponential-time) oracles over rationals.

use std::collections::HashMap;

use dashu_ratio::RBig;

use crate::hypergraph::Hypergraph;
use crate::intersection::IGraph;
use crate::numeric::Weight;
use crate::vertex_set::VertexSet;

/// Exact weighted independence polynomial evaluator with memoization.
///
/// Branches on a maximum-degree vertex (ties to the smallest id) via
/// `Z(G) = Z(G - v) + λ Z(G - N[v])` and splits connected components.
/// The memo is keyed by the active vertex set, so one oracle must only be used
/// with views of a single base graph.
pub struct ExactOracle {
    lambda: RBig,
    memo: HashMap<VertexSet, RBig>,
}

impl ExactOracle {
    pub fn new(lambda: &Weight) -> Self {
        ExactOracle {
            lambda: lambda.ratio().clone(),
            memo: HashMap::new(),
        }
    }

    /// Σ over independent sets I of λ^|I|.
    pub fn zi(&mut self, g: &IGraph) -> RBig {
        if g.is_empty() {
            return RBig::ONE;
        }
        if let Some(z) = self.memo.get(g.active()) {
            return z.clone();
        }
        let comps = g.connected_components();
        let z = if comps.len() > 1 {
            comps
                .iter()
                .map(|c| self.zi(&g.restrict(c)))
                .fold(RBig::ONE, |acc, z| acc * z)
        } else {
            let pivot = g
                .vertices()
                .max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v)))
                .expect("nonempty");
            let without = self.zi(&g.without_vertex(pivot));
            let with = self.zi(&g.induced(&g.closed_neighbors(pivot)));
            without + &self.lambda * with
        };
        self.memo.insert(g.active().clone(), z.clone());
        z
    }

    /// Π_G(K) = Z(G - K) / Z(G).
    pub fn pi(&mut self, g: &IGraph, k: &VertexSet) -> RBig {
        let num = self.zi(&g.induced(k));
        num / self.zi(g)
    }
}

pub fn exact_zi(g: &IGraph, lambda: &Weight) -> RBig {
    ExactOracle::new(lambda).zi(g)
}

/// Σ over matchings M of λ^|M|, computed as Z_I(L(H)).
pub fn exact_zm(h: &Hypergraph, lambda: &Weight) -> RBig {
    exact_zi(&IGraph::line_graph(h), lambda)
}

pub fn exact_pi(g: &IGraph, k: &VertexSet, lambda: &Weight) -> RBig {
    ExactOracle::new(lambda).pi(g, k)
}
