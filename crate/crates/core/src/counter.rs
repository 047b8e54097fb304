//! Approximate counting of matchings in (3,3)-graphs.
//!
//! For each connected component `F` of `G = L(H)` the count unrolls
//! `Z(F) = Z(F - v) + λ Z(F - N[v])` over a sequence of non-cut vertices `v`.
//! The second term splits into components of `F - N[v]`, each of which owns a
//! simplicial seed block, and is estimated as a telescoping product of
//! reciprocal Φ values over a block partition.

use dashu_ratio::RBig;

use crate::blocks::{block_partition, seed_blocks_after_delete};
use crate::decay::{phi, required_t, saturation_depth, PhiCache, PhiParams};
use crate::error::{Error, Result};
use crate::exact::exact_zm;
use crate::hypergraph::Hypergraph;
use crate::intersection::IGraph;
use crate::numeric::{real, working_precision, Real, Weight};
use crate::vertex_set::VertexSet;

/// Caller-tunable knobs for [`count_matchings`].
#[derive(Debug, Clone)]
pub struct CountOptions {
    pub lambda: Weight,
    /// Truncation depth; defaults to `min(required_t, 2|V(G)| + 2)`.
    pub t: Option<usize>,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            lambda: Weight::one(),
            t: None,
        }
    }
}

/// Result of [`count_matchings`].
#[derive(Debug, Clone)]
pub struct ApproxCount {
    pub value: Real,
    pub epsilon: f64,
    pub lambda: Weight,
    pub t_used: usize,
    /// Depth needed by the worst-case analysis for this `n` and `ε`.
    pub required_t: usize,
    /// λ is inside the guaranteed range and `t` is deep enough, either by
    /// reaching `required_t` or by saturating the recursion.
    pub certified: bool,
    /// Connected components of the intersection graph.
    pub components: usize,
}

/// Z_I(g) estimated as ∏ Φ_{G_i}(K_i, t)⁻¹ over the block partition grown
/// from `seed`.
pub fn count_is(
    g: &IGraph,
    seed: &VertexSet,
    params: &PhiParams,
    cache: &mut PhiCache,
) -> Result<Real> {
    let partition = block_partition(g, seed)?;
    let mut z = real(1, params.precision);
    let mut residual = g.clone();
    for block in &partition.blocks {
        z /= phi(&residual, block, params, cache)?;
        residual = residual.induced(block);
    }
    Ok(z)
}

fn count_connected(f: &IGraph, params: &PhiParams, cache: &mut PhiCache) -> Result<Real> {
    let lambda = params.lambda.to_real(params.precision);
    let mut z = real(1, params.precision);
    let mut f = f.clone();
    while !f.is_empty() {
        let v = f.non_cut_vertex()?;
        let mut term = real(1, params.precision);
        for (piece, seed) in seed_blocks_after_delete(&f, v)? {
            term *= count_is(&f.restrict(&piece), &seed, params, cache)?;
        }
        z += &lambda * term;
        f = f.without_vertex(v);
    }
    Ok(z)
}

/// Approximates Σ_M λ^|M| over the matchings of a (3,3)-graph to within
/// relative error `epsilon`.
pub fn count_matchings(
    h: &Hypergraph,
    epsilon: f64,
    options: &CountOptions,
) -> Result<ApproxCount> {
    let report = h.validate_33();
    if !report.passed() {
        return Err(Error::InvalidHypergraph(format!(
            "not a (3,3)-graph: overloaded {:?}, malformed {:?}",
            report.overloaded, report.malformed
        )));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain(format!(
            "epsilon must lie in (0,1), got {epsilon}"
        )));
    }
    let g = IGraph::line_graph(h);
    let n = g.num_vertices();
    let required = required_t(n.max(1), epsilon);
    let t = options.t.unwrap_or_else(|| required.min(2 * n + 2));
    let params = PhiParams::new(t, options.lambda.clone(), working_precision(n));
    let mut cache = PhiCache::new();

    let comps = g.connected_components();
    let mut value = real(1, params.precision);
    for comp in &comps {
        value *= count_connected(&g.restrict(comp), &params, &mut cache)?;
    }
    Ok(ApproxCount {
        value,
        epsilon,
        lambda: options.lambda.clone(),
        t_used: t,
        required_t: required,
        certified: options.lambda.within_guarantee() && t >= required.min(saturation_depth(n)),
        components: comps.len(),
    })
}

/// Exact Σ_M λ^|M| by brute force, for small inputs or on request.
pub fn count_matchings_exact_mode(h: &Hypergraph, lambda: &Weight) -> Result<RBig> {
    let report = h.validate_33();
    if !report.passed() {
        return Err(Error::InvalidHypergraph(format!(
            "not a (3,3)-graph: overloaded {:?}",
            report.overloaded
        )));
    }
    Ok(exact_zm(h, lambda))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{gen_random_33, named_instance};
    use crate::numeric::ratio_to_f64;

    fn approx(name: &str) -> f64 {
        let h = named_instance(name).unwrap();
        count_matchings(&h, 0.1, &CountOptions::default())
            .unwrap()
            .value
            .to_f64()
            .value()
    }

    #[test]
    fn fixtures() {
        assert_eq!(approx("triple"), 2.0);
        assert_eq!(approx("two-disjoint"), 4.0);
        assert_eq!(approx("two-sharing"), 3.0);
        assert!((approx("fano") - 8.0).abs() < 1e-12);
    }

    #[test]
    fn count_is_examples() {
        let p = |t| PhiParams::new(t, Weight::one(), 160);
        let single = IGraph::from_edges(1, &[]).unwrap();
        let z = count_is(&single, &single.set_of([0]), &p(2), &mut PhiCache::new()).unwrap();
        assert_eq!(z.to_f64().value(), 2.0);
        let tri = IGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let z = count_is(&tri, &tri.set_of([0]), &p(20), &mut PhiCache::new()).unwrap();
        assert!((z.to_f64().value() - 4.0).abs() < 1e-30);
        let z = count_is(&tri, &tri.set_of([0]), &p(0), &mut PhiCache::new()).unwrap();
        assert_eq!(z.to_f64().value(), 1.0);
    }

    #[test]
    fn metadata() {
        let h = named_instance("two-disjoint").unwrap();
        let c = count_matchings(&h, 0.1, &CountOptions::default()).unwrap();
        assert_eq!(c.components, 2);
        assert_eq!(c.t_used, 6);
        assert_eq!(c.required_t, required_t(2, 0.1));
        assert!(c.certified);
        let low = CountOptions {
            t: Some(1),
            ..Default::default()
        };
        assert!(!count_matchings(&h, 0.1, &low).unwrap().certified);
        let heavy = CountOptions {
            lambda: "1.5".parse().unwrap(),
            t: None,
        };
        let c = count_matchings(&h, 0.1, &heavy).unwrap();
        assert!(!c.certified);
        assert!((c.value.to_f64().value() - 6.25).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        let h = Hypergraph::new(9, [[0, 1, 2], [0, 3, 4], [0, 5, 6], [0, 7, 8]]).unwrap();
        assert!(matches!(
            count_matchings(&h, 0.1, &CountOptions::default()),
            Err(Error::InvalidHypergraph(_))
        ));
        let h = named_instance("triple").unwrap();
        assert!(count_matchings(&h, 0.0, &CountOptions::default()).is_err());
        assert!(count_matchings(&h, 1.0, &CountOptions::default()).is_err());
    }

    #[test]
    fn empty_hypergraph_counts_one() {
        let h = Hypergraph::new(4, []).unwrap();
        let c = count_matchings(&h, 0.5, &CountOptions::default()).unwrap();
        assert_eq!(c.value.to_f64().value(), 1.0);
        assert_eq!(c.components, 0);
    }

    #[test]
    fn agrees_with_exact_on_random_instances() {
        for seed in 0..10 {
            let h = gen_random_33(12, 12, seed).unwrap();
            let exact = ratio_to_f64(&count_matchings_exact_mode(&h, &Weight::one()).unwrap());
            let got = count_matchings(&h, 0.1, &CountOptions::default()).unwrap();
            assert!(((got.value.to_f64().value() - exact) / exact).abs() < 1e-12);
        }
    }
}
