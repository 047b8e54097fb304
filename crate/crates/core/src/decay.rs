//! The truncated occupation-probability recurrence Φ_G(K, t).
//!
//! Φ mimics Π_G(K) = Z(G - K) / Z(G) through
//!
//! ```text
//! Φ⁻¹_G(K,t) = 1 + λ Σ_{v∈K} Φ_{G-K}(K_v, t-1) · (1 + λ/2 Σ_{u: uv∉G[K]} Φ_{G-K-K_v}(K_uv, t-2))
//! ```
//!
//! with Φ = 1 when `t <= 1` or `K = ∅`. The inner sum runs over ordered pairs,
//! so `K_uv` and `K_vu` are both visited. Every level of recursion removes at
//! least one vertex per unit of depth, hence Φ_G(K, t) = Π_G(K) as soon as
//! `t >= |V(G)| + 2`; the memo clamps `t` there.

use std::collections::HashMap;

use crate::blocks::{pair_residual_block, residual_block};
use crate::error::Result;
use crate::intersection::IGraph;
use crate::numeric::{real, Real, Weight};
use crate::vertex_set::VertexSet;

/// Contraction rate of the transformed recurrence.
pub const GAMMA: f64 = 49.0 / 50.0;
/// μ_g = |g(1)| + max g for g(s) = s^{1/4}.
pub const MU_G: f64 = 2.0;

#[derive(Debug, Clone, PartialEq)]
pub struct PhiParams {
    pub t: usize,
    pub lambda: Weight,
    /// Mantissa bits of intermediate values.
    pub precision: usize,
}

impl PhiParams {
    pub fn new(t: usize, lambda: Weight, precision: usize) -> Self {
        PhiParams {
            t,
            lambda,
            precision,
        }
    }

    /// True when λ exceeds the range covered by the decay guarantee.
    pub fn lambda_unguaranteed(&self) -> bool {
        !self.lambda.within_guarantee()
    }
}

/// Depth at which Φ on an `n`-vertex graph stops depending on `t`.
pub fn saturation_depth(n: usize) -> usize {
    n + 2
}

/// Grow-only memo for [`phi`]. Values are only valid for one base graph; the
/// cache clears itself when λ or the precision changes.
#[derive(Default)]
pub struct PhiCache {
    binding: Option<(Weight, usize)>,
    values: HashMap<(VertexSet, VertexSet, usize), Real>,
    enabled: bool,
    hits: u64,
    misses: u64,
}

impl PhiCache {
    pub fn new() -> Self {
        PhiCache {
            enabled: true,
            ..Default::default()
        }
    }

    /// A cache that never stores anything; every call recomputes.
    pub fn disabled() -> Self {
        PhiCache::default()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn stats(&self) -> (u64, u64) {
        (self.hits, self.misses)
    }

    fn bind(&mut self, params: &PhiParams) {
        let key = (params.lambda.clone(), params.precision);
        if self.binding.as_ref() != Some(&key) {
            self.values.clear();
            self.binding = Some(key);
        }
    }
}

struct Evaluator<'c> {
    lambda: Real,
    half_lambda: Real,
    one: Real,
    cache: &'c mut PhiCache,
}

impl Evaluator<'_> {
    fn phi(&mut self, g: &IGraph, k: &VertexSet, t: usize) -> Result<Real> {
        if t <= 1 || k.is_empty() {
            return Ok(self.one.clone());
        }
        let t = t.min(saturation_depth(g.num_vertices()));
        let key = (g.active().clone(), k.clone(), t);
        if self.cache.enabled {
            if let Some(v) = self.cache.values.get(&key) {
                self.cache.hits += 1;
                return Ok(v.clone());
            }
            self.cache.misses += 1;
        }

        let rest = g.induced(k);
        let mut sum = Real::ZERO;
        for v in k.iter() {
            let kv = residual_block(g, k, v)?;
            let outer = self.phi(&rest, &kv, t - 1)?;
            let deeper = rest.induced(&kv);
            let mut inner = Real::ZERO;
            for u in k.iter().filter(|&u| u != v && !g.adjacent(u, v)) {
                let kuv = pair_residual_block(g, k, u, v)?;
                inner += self.phi(&deeper, &kuv, t - 2)?;
            }
            sum += outer * (&self.one + &self.half_lambda * inner);
        }
        let value = &self.one / (&self.one + &self.lambda * sum);

        if self.cache.enabled {
            self.cache.values.insert(key, value.clone());
        }
        Ok(value)
    }
}

/// Φ_G(K, t) for a simplicial block `k` of `g`.
pub fn phi(g: &IGraph, k: &VertexSet, params: &PhiParams, cache: &mut PhiCache) -> Result<Real> {
    cache.bind(params);
    let lambda = params.lambda.to_real(params.precision);
    let mut eval = Evaluator {
        half_lambda: &lambda / real(2, params.precision),
        lambda,
        one: real(1, params.precision),
        cache,
    };
    eval.phi(g, k, params.t)
}

/// `2 ⌈log(18 n / ε) / log(50/49)⌉`: enough depth for each Φ factor to be
/// within a `1 ± ε/n` factor of Π.
pub fn required_t(n: usize, epsilon: f64) -> usize {
    assert!(n >= 1 && epsilon > 0.0 && epsilon < 1.0);
    let ratio = (18.0 * n as f64 / epsilon).ln() / (50.0f64 / 49.0).ln();
    2 * ratio.ceil() as usize
}

/// μ_g · γ^{t/2}, the bound on |g(Π) - g(Φ(t))| with g(s) = s^{1/4}.
pub fn decay_error_bound(t: usize) -> f64 {
    MU_G * GAMMA.powf(t as f64 / 2.0)
}
