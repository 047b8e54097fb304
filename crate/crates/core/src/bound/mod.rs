//! The gradient-norm function F(z) that controls the contraction rate of the
//! transformed Φ recurrence, its numerical maximization, and a branch-and-bound
//! certificate that it stays below a threshold on the whole box.
//!
//! Coordinates follow the essential block graph, two disjoint edges `12` and
//! `34`: four vertex variables `z1..z4` and four non-edge variables in the
//! order `z14, z13, z23, z24`. With `p(x) = x^4`,
//!
//! ```text
//! D(z) = 1 + Σ_i p(z_i) + ½ Σ_{ab} p(z_ab) (p(z_a) + p(z_b))
//! F(z) = ‖∇ D^{-1/4}‖₁ = ¼ D^{-5/4} ( Σ_i 2 z_i³ (2 + Σ_{ab ∋ i} p(z_ab)) + Σ_{ab} 2 z_ab³ (p(z_a) + p(z_b)) )
//! ```
//!
//! For activity λ the transform pair `h(s) = s⁴/λ`, `g(s) = (λ s)^{1/4}`
//! turns the recurrence map into `λ^{1/4} D(z)^{-1/4}`, so its gradient norm is
//! `λ^{1/4} F(z)` on the enlarged box `[0, λ^{1/4}]^8` (the image of `[0, 1]`
//! under `g`).

mod certify;
pub mod scalar;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
pub use certify::{certify, Certificate};
use scalar::Scalar;

/// Number of variables: four vertices and four non-edges.
pub const DIM: usize = 8;

/// Upper bound on F that yields the contraction rate 49/50.
pub const THRESHOLD: f64 = 0.971;

/// Reference maximizer coordinate and maximum of F.
pub const ZETA: f64 = 0.695347;
pub const REFERENCE_MAX: f64 = 0.970247;

pub type Point = [f64; DIM];

/// Non-edges of the essential block graph, in coordinate order 4..8.
pub const NON_EDGES: [(usize, usize); 4] = [(0, 3), (0, 2), (1, 2), (1, 3)];

/// F evaluated over any [`Scalar`].
pub fn gradient_norm<S: Scalar>(z: &[S; DIM]) -> S {
    let p4: [S; DIM] = std::array::from_fn(|i| z[i].powi(4));
    let p3: [S; DIM] = std::array::from_fn(|i| z[i].powi(3));
    let c = S::constant;

    let mut denom = vec![c(1.0)];
    let mut num = Vec::with_capacity(DIM);
    denom.extend(p4[..4].iter().cloned());
    for (e, &(a, b)) in NON_EDGES.iter().enumerate() {
        let ends = p4[a].clone() + p4[b].clone();
        denom.push(c(0.5) * p4[4 + e].clone() * ends.clone());
        num.push(c(2.0) * p3[4 + e].clone() * ends);
    }
    for (i, p3i) in p3[..4].iter().enumerate() {
        let touching: Vec<S> = NON_EDGES
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| a == i || b == i)
            .map(|(e, _)| p4[4 + e].clone())
            .collect();
        num.push(c(2.0) * p3i.clone() * (c(2.0) + S::sum(touching)));
    }
    c(0.25) * S::sum(denom).powf_pos(-1.25) * S::sum(num)
}

fn check_domain(z: &Point, upper: f64) -> Result<()> {
    match z.iter().find(|x| !(0.0..=upper).contains(*x)) {
        Some(x) => Err(Error::Domain(format!(
            "coordinate {x} outside [0, {upper}]"
        ))),
        None => Ok(()),
    }
}

/// F(z) for `z ∈ [0,1]^8`.
pub fn eval_f(z: &Point) -> Result<f64> {
    check_domain(z, 1.0)?;
    Ok(gradient_norm(z))
}

/// Gradient norm of the λ-transformed recurrence, for `z ∈ [0, λ^{1/4}]^8`.
pub fn eval_f_lambda(z: &Point, lambda: f64) -> Result<f64> {
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(Error::Domain(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    let scale = lambda.powf(0.25);
    check_domain(z, scale * (1.0 + 1e-15))?;
    Ok(scale * gradient_norm(z))
}

/// The maximization target on the unit box: `w ↦ factor · F(scale · w)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Objective {
    pub scale: f64,
    pub factor: f64,
}

impl Objective {
    pub fn plain() -> Self {
        Objective {
            scale: 1.0,
            factor: 1.0,
        }
    }

    pub fn for_lambda(lambda: f64) -> Self {
        let s = lambda.powf(0.25);
        Objective {
            scale: s,
            factor: s,
        }
    }

    pub fn eval(&self, w: &Point) -> f64 {
        let z: Point = std::array::from_fn(|i| self.scale * w[i]);
        self.factor * gradient_norm(&z)
    }

    /// Maps a unit-box point to the natural coordinates of F.
    pub fn to_natural(&self, w: &Point) -> Point {
        std::array::from_fn(|i| self.scale * w[i])
    }
}

/// Coordinate permutations induced by the automorphisms of two disjoint edges
/// `{0,1}`, `{2,3}`: `perm[i]` is where coordinate `i` is sent.
pub fn symmetries() -> Vec<[usize; DIM]> {
    const VERTEX_PERMS: [[usize; 4]; 8] = [
        [0, 1, 2, 3],
        [1, 0, 2, 3],
        [0, 1, 3, 2],
        [1, 0, 3, 2],
        [2, 3, 0, 1],
        [3, 2, 0, 1],
        [2, 3, 1, 0],
        [3, 2, 1, 0],
    ];
    VERTEX_PERMS
        .iter()
        .map(|p| {
            let mut perm = [0; DIM];
            perm[..4].copy_from_slice(p);
            for (e, &(a, b)) in NON_EDGES.iter().enumerate() {
                let image = (p[a].min(p[b]), p[a].max(p[b]));
                let target = NON_EDGES
                    .iter()
                    .position(|&(x, y)| (x.min(y), x.max(y)) == image)
                    .expect("automorphisms map non-edges to non-edges");
                perm[4 + e] = 4 + target;
            }
            perm
        })
        .collect()
}

pub fn permute<T: Copy>(perm: &[usize; DIM], z: &[T; DIM]) -> [T; DIM] {
    let mut out = *z;
    for i in 0..DIM {
        out[perm[i]] = z[i];
    }
    out
}

/// Smallest sup-norm distance between `a` and any symmetric image of `b`.
pub fn distance_up_to_symmetry(a: &Point, b: &Point) -> f64 {
    symmetries()
        .iter()
        .map(|p| {
            let pb = permute(p, b);
            a.iter()
                .zip(&pb)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Is the index tuple the lexicographically smallest in its orbit?
pub(crate) fn is_canonical(idx: &[usize; DIM], syms: &[[usize; DIM]]) -> bool {
    syms.iter().all(|p| permute(p, idx) >= *idx)
}

/// Search settings for [`maximize_f`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchConfig {
    pub grid_steps: usize,
    pub restarts: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            grid_steps: 6,
            restarts: 64,
            tol: 1e-8,
            seed: 0,
        }
    }
}

/// Outcome of a maximization, optionally with a certificate.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub lambda: f64,
    /// Largest value found, re-evaluated at `argmax`.
    pub max_value: f64,
    /// Maximizer in the natural coordinates of the objective.
    pub argmax: Point,
    pub threshold: f64,
    pub margin: f64,
    pub config: SearchConfig,
    pub evaluations: u64,
    pub certificate: Option<Certificate>,
}

impl BoundReport {
    /// Margin positive and, when a certificate was requested, certified.
    pub fn passed(&self) -> bool {
        self.margin > 0.0 && self.certificate.as_ref().is_none_or(|c| c.certified)
    }
}

struct Search<'a> {
    objective: &'a Objective,
    evaluations: u64,
}

impl Search<'_> {
    fn eval(&mut self, w: &Point) -> f64 {
        self.evaluations += 1;
        self.objective.eval(w)
    }

    /// Compass search on the unit box, halving the step until it drops below
    /// `tol`.
    fn polish(&mut self, start: Point, tol: f64) -> (f64, Point) {
        let mut best = start;
        let mut best_val = self.eval(&best);
        let mut step = 0.125;
        while step >= tol {
            let mut improved = false;
            for i in 0..DIM {
                for dir in [1.0, -1.0] {
                    let mut trial = best;
                    trial[i] = (trial[i] + dir * step).clamp(0.0, 1.0);
                    if trial[i] == best[i] {
                        continue;
                    }
                    let v = self.eval(&trial);
                    if v > best_val {
                        best_val = v;
                        best = trial;
                        improved = true;
                        break;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        (best_val, best)
    }
}

/// Multistart maximization of an objective over the unit box: a symmetry
/// reduced grid scan, compass-search polish of the best grid points, then
/// seeded random restarts.
pub fn maximize(objective: &Objective, config: &SearchConfig) -> (f64, Point, u64) {
    assert!(config.grid_steps >= 2 && config.restarts >= 1 && config.tol > 0.0);
    let mut search = Search {
        objective,
        evaluations: 0,
    };
    let syms = symmetries();
    let steps = config.grid_steps;
    const KEEP: usize = 8;

    let mut top: Vec<(f64, Point)> = Vec::with_capacity(KEEP + 1);
    let mut idx = [0usize; DIM];
    loop {
        if is_canonical(&idx, &syms) {
            let w: Point = std::array::from_fn(|i| idx[i] as f64 / (steps - 1) as f64);
            let v = search.eval(&w);
            if top.len() < KEEP || v > top[KEEP - 1].0 {
                top.push((v, w));
                top.sort_by(|a, b| b.0.total_cmp(&a.0));
                top.truncate(KEEP);
            }
        }
        let Some(pos) = (0..DIM).find(|&i| idx[i] + 1 < steps) else {
            break;
        };
        idx[pos] += 1;
        idx[..pos].iter_mut().for_each(|x| *x = 0);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut starts: Vec<Point> = top.into_iter().map(|(_, w)| w).collect();
    starts.extend((0..config.restarts).map(|_| std::array::from_fn(|_| rng.gen::<f64>())));

    let mut best = (f64::NEG_INFINITY, [0.0; DIM]);
    for s in starts {
        let (v, w) = search.polish(s, config.tol);
        if v > best.0 {
            best = (v, w);
        }
    }
    (best.0, best.1, search.evaluations)
}

fn report(
    lambda: f64,
    objective: &Objective,
    config: &SearchConfig,
    threshold: f64,
) -> BoundReport {
    let (_, w, evaluations) = maximize(objective, config);
    let argmax = objective.to_natural(&w);
    let max_value = lambda.powf(0.25) * gradient_norm(&argmax);
    BoundReport {
        lambda,
        max_value,
        argmax,
        threshold,
        margin: threshold - max_value,
        config: *config,
        evaluations,
        certificate: None,
    }
}

/// Maximizes F over `[0,1]^8` without certification.
pub fn maximize_f(config: &SearchConfig) -> BoundReport {
    report(1.0, &Objective::plain(), config, THRESHOLD)
}

/// Maximizes F and certifies `F < THRESHOLD` on the whole box.
pub fn verify_bound(config: &SearchConfig) -> BoundReport {
    let mut r = maximize_f(config);
    r.certificate = Some(certify(&Objective::plain(), THRESHOLD, config.grid_steps));
    r
}

/// 32 activities log-spaced from 0.01 to 1.077 inclusive.
pub fn default_lambda_grid() -> Vec<f64> {
    let (lo, hi) = (0.01f64, 1.077f64);
    let n = 32;
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                lo * (hi / lo).powf(i as f64 / (n - 1) as f64)
            }
        })
        .collect()
}

/// Maximizes the λ-transformed gradient norm for every λ of the grid, against
/// the contraction threshold 1.
pub fn sweep_lambda(grid: &[f64], config: &SearchConfig) -> Vec<BoundReport> {
    grid.iter()
        .map(|&lambda| report(lambda, &Objective::for_lambda(lambda), config, 1.0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::scalar::{Dual, Interval};
    use super::*;

    /// Literal transcription of the closed form, independent of the
    /// structured evaluation above.
    fn reference_f(z: &Point) -> f64 {
        let [z1, z2, z3, z4, z14, z13, z23, z24] = *z;
        let p = |x: f64| x.powi(4);
        let c = |x: f64| x.powi(3);
        let d = 1.0
            + p(z1)
            + p(z2)
            + p(z3)
            + p(z4)
            + 0.5
                * (p(z14) * (p(z1) + p(z4))
                    + p(z13) * (p(z1) + p(z3))
                    + p(z23) * (p(z2) + p(z3))
                    + p(z24) * (p(z2) + p(z4)));
        let n = 2.0 * c(z1) * (2.0 + p(z14) + p(z13))
            + 2.0 * c(z2) * (2.0 + p(z23) + p(z24))
            + 2.0 * c(z3) * (2.0 + p(z13) + p(z23))
            + 2.0 * c(z4) * (2.0 + p(z14) + p(z24))
            + 2.0 * c(z14) * (p(z1) + p(z4))
            + 2.0 * c(z13) * (p(z1) + p(z3))
            + 2.0 * c(z23) * (p(z2) + p(z3))
            + 2.0 * c(z24) * (p(z2) + p(z4));
        0.25 * d.powf(-1.25) * n
    }

    /// ‖∇ D^{-1/4}‖₁ by central differences.
    fn fd_gradient_norm(z: &Point) -> f64 {
        let g = |z: &Point| {
            let [z1, z2, z3, z4, z14, z13, z23, z24] = *z;
            let p = |x: f64| x.powi(4);
            let d = 1.0
                + p(z1)
                + p(z2)
                + p(z3)
                + p(z4)
                + 0.5
                    * (p(z14) * (p(z1) + p(z4))
                        + p(z13) * (p(z1) + p(z3))
                        + p(z23) * (p(z2) + p(z3))
                        + p(z24) * (p(z2) + p(z4)));
            d.powf(-0.25)
        };
        let h = 1e-6;
        (0..DIM)
            .map(|i| {
                let (mut a, mut b) = (*z, *z);
                a[i] += h;
                b[i] -= h;
                ((g(&a) - g(&b)) / (2.0 * h)).abs()
            })
            .sum()
    }

    fn zeta_point() -> Point {
        [ZETA, ZETA, ZETA, ZETA, 1.0, 1.0, 1.0, 1.0]
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(eval_f(&[0.0; DIM]).unwrap(), 0.0);
        let all_ones = eval_f(&[1.0; DIM]).unwrap();
        assert!((all_ones - 12.0 / 9f64.powf(1.25)).abs() < 1e-15);
        assert!((all_ones - 0.7698).abs() < 1e-4);
        assert!((eval_f(&zeta_point()).unwrap() - REFERENCE_MAX).abs() < 1e-5);
        assert!(eval_f(&[1.1; DIM]).is_err());
        assert!(eval_f(&[-0.1; DIM]).is_err());
    }

    #[test]
    fn matches_reference_and_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let z: Point = std::array::from_fn(|_| rng.gen_range(0.05..0.95));
            let f = gradient_norm(&z);
            assert!((f - reference_f(&z)).abs() < 1e-13);
            assert!((f - fd_gradient_norm(&z)).abs() < 1e-7, "{z:?}");
        }
    }

    #[test]
    fn dual_gradient_matches_finite_differences() {
        let z = [0.3, 0.7, 0.5, 0.9, 0.2, 0.8, 0.6, 0.4];
        let dz: [Dual<f64>; DIM] = std::array::from_fn(|i| Dual::variable(z[i], i));
        let d = gradient_norm(&dz);
        for i in 0..DIM {
            let (mut a, mut b) = (z, z);
            a[i] += 1e-6;
            b[i] -= 1e-6;
            let fd = (gradient_norm(&a) - gradient_norm(&b)) / 2e-6;
            assert!((d.grad[i] - fd).abs() < 1e-7);
        }
    }

    #[test]
    fn interval_extension_encloses_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let lo: Point = std::array::from_fn(|_| rng.gen_range(0.0..0.8));
            let box_: [Interval; DIM] = std::array::from_fn(|i| Interval::new(lo[i], lo[i] + 0.2));
            let enclosure = gradient_norm(&box_);
            for _ in 0..20 {
                let z: Point = std::array::from_fn(|i| rng.gen_range(lo[i]..lo[i] + 0.2));
                let v = gradient_norm(&z);
                assert!(enclosure.lo <= v && v <= enclosure.hi);
            }
        }
    }

    #[test]
    fn invariant_under_symmetries() {
        let syms = symmetries();
        assert_eq!(syms.len(), 8);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let z: Point = std::array::from_fn(|_| rng.gen::<f64>());
            let f = gradient_norm(&z);
            for p in &syms {
                assert_eq!(gradient_norm(&permute(p, &z)), f);
            }
        }
    }

    #[test]
    fn nonnegative_on_box() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let z: Point = std::array::from_fn(|_| rng.gen::<f64>());
            assert!(eval_f(&z).unwrap() >= 0.0);
        }
    }

    #[test]
    fn lambda_one_reduces_to_plain() {
        let z = [0.3, 0.7, 0.5, 0.9, 0.2, 0.8, 0.6, 0.4];
        assert_eq!(eval_f_lambda(&z, 1.0).unwrap(), eval_f(&z).unwrap());
        assert!(eval_f_lambda(&[1.01; DIM], 1.077).is_ok());
        assert!(eval_f_lambda(&[1.01; DIM], 1.0).is_err());
        assert!(eval_f_lambda(&z, 0.0).is_err());
    }

    #[test]
    fn lambda_grid_shape() {
        let g = default_lambda_grid();
        assert_eq!(g.len(), 32);
        assert!((g[0] - 0.01).abs() < 1e-15);
        assert_eq!(*g.last().unwrap(), 1.077);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn quick_search_finds_maximum() {
        let config = SearchConfig {
            grid_steps: 3,
            restarts: 8,
            tol: 1e-9,
            seed: 3,
        };
        let r = maximize_f(&config);
        assert!(
            (r.max_value - REFERENCE_MAX).abs() < 1e-5,
            "{}",
            r.max_value
        );
        assert!(distance_up_to_symmetry(&r.argmax, &zeta_point()) < 1e-3);
        assert_eq!(r.max_value, eval_f(&r.argmax).unwrap());
        assert!(r.margin > 0.0);
    }
}
