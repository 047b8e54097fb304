//! Branch-and-bound certificate that an [`Objective`] stays below a threshold
//! on the unit box.
//!
//! Each cell is bounded twice: by the natural interval extension of F, and by
//! the mean-value form `F(c) + Σ sup|∂_i F| · w_i / 2`, where the partial
//! derivative enclosures (coordinate-wise Lipschitz constants) come from
//! forward-mode duals over intervals. Coordinates whose partial derivative has
//! a fixed sign on the cell are first pinned to the maximizing face. Cells
//! whose bound is not below the threshold are bisected along the coordinate
//! with the largest `sup|∂_i F| · width`.

use serde::Serialize;

use super::scalar::{Dual, Interval};
use super::{gradient_norm, is_canonical, symmetries, Objective, DIM};

/// Absolute padding added to every cell bound to absorb round-to-nearest
/// error in the interval operations.
const ROUNDING_PAD: f64 = 1e-12;
const MIN_WIDTH: f64 = 1e-9;
const MAX_CELLS: u64 = 200_000_000;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Certificate {
    pub certified: bool,
    pub threshold: f64,
    /// Largest cell upper bound among certified cells. When `certified`, this
    /// is a bound on the maximum over the whole box.
    pub upper_bound: f64,
    pub initial_cells: u64,
    pub cells_processed: u64,
    pub max_depth: usize,
    /// A cell that could not be certified, as `(lo, hi)` per coordinate.
    pub failed_cell: Option<Vec<(f64, f64)>>,
}

type Cell = [Interval; DIM];

enum Outcome {
    Below(f64),
    Split(Box<(Cell, Cell)>),
    Stuck,
}

fn bound_cell(obj: &Objective, cell: &Cell, threshold: f64) -> Outcome {
    let (s, c) = (obj.scale, obj.factor);
    let vars: [Dual<Interval>; DIM] =
        std::array::from_fn(|i| Dual::variable(Interval::new(s * cell[i].lo, s * cell[i].hi), i));
    let f = gradient_norm(&vars);
    let grad: [f64; DIM] = std::array::from_fn(|i| c * s * f.grad[i].magnitude());
    let natural = c * f.value.hi;

    let reduced: Cell = std::array::from_fn(|i| {
        let g = f.grad[i];
        if g.lo > 0.0 {
            Interval::point(cell[i].hi)
        } else if g.hi < 0.0 {
            Interval::point(cell[i].lo)
        } else {
            cell[i]
        }
    });
    let center: [Interval; DIM] = std::array::from_fn(|i| Interval::point(s * reduced[i].mid()));
    let at_center = Interval::point(c) * gradient_norm(&center);
    if at_center.lo >= threshold {
        return Outcome::Stuck;
    }
    let mut mean_value = at_center.hi;
    for i in 0..DIM {
        mean_value += grad[i] * reduced[i].width() * 0.5;
    }
    let upper = natural.min(mean_value) + ROUNDING_PAD;
    if upper < threshold {
        return Outcome::Below(upper);
    }

    let (axis, weight) = (0..DIM)
        .map(|i| (i, grad[i] * reduced[i].width()))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("DIM > 0");
    if weight <= 0.0 || reduced[axis].width() < MIN_WIDTH {
        return Outcome::Stuck;
    }
    let mid = reduced[axis].mid();
    let (mut left, mut right) = (reduced, reduced);
    left[axis] = Interval::new(reduced[axis].lo, mid);
    right[axis] = Interval::new(mid, reduced[axis].hi);
    Outcome::Split(Box::new((left, right)))
}

/// Certifies `objective < threshold` on `[0,1]^8`, starting from a
/// `grid_steps^8` grid reduced by the symmetry group.
pub fn certify(objective: &Objective, threshold: f64, grid_steps: usize) -> Certificate {
    assert!(grid_steps >= 1);
    let syms = symmetries();
    let h = 1.0 / grid_steps as f64;
    let mut cert = Certificate {
        certified: true,
        threshold,
        upper_bound: f64::NEG_INFINITY,
        initial_cells: 0,
        cells_processed: 0,
        max_depth: 0,
        failed_cell: None,
    };

    let mut stack: Vec<(Cell, usize)> = Vec::new();
    let mut idx = [0usize; DIM];
    loop {
        if is_canonical(&idx, &syms) {
            cert.initial_cells += 1;
            let cell: Cell = std::array::from_fn(|i| {
                let lo = idx[i] as f64 * h;
                let hi = if idx[i] + 1 == grid_steps {
                    1.0
                } else {
                    (idx[i] + 1) as f64 * h
                };
                Interval::new(lo, hi)
            });
            stack.push((cell, 0));
            while let Some((cell, depth)) = stack.pop() {
                cert.cells_processed += 1;
                cert.max_depth = cert.max_depth.max(depth);
                match bound_cell(objective, &cell, threshold) {
                    Outcome::Below(u) => cert.upper_bound = cert.upper_bound.max(u),
                    Outcome::Split(halves) if cert.cells_processed < MAX_CELLS => {
                        let (a, b) = *halves;
                        stack.push((a, depth + 1));
                        stack.push((b, depth + 1));
                    }
                    _ => {
                        cert.certified = false;
                        cert.failed_cell = Some(cell.iter().map(|x| (x.lo, x.hi)).collect());
                        return cert;
                    }
                }
            }
        }
        let Some(pos) = (0..DIM).find(|&i| idx[i] + 1 < grid_steps) else {
            break;
        };
        idx[pos] += 1;
        idx[..pos].iter_mut().for_each(|x| *x = 0);
    }
    cert
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loose_threshold_certifies_quickly() {
        let cert = certify(&Objective::plain(), 1.5, 2);
        assert!(cert.certified);
        assert!(cert.upper_bound < 1.5);
        assert!(cert.upper_bound >= super::super::REFERENCE_MAX);
    }

    #[test]
    fn threshold_below_maximum_fails() {
        let cert = certify(&Objective::plain(), 0.5, 2);
        assert!(!cert.certified);
        let cell = cert.failed_cell.unwrap();
        assert_eq!(cell.len(), DIM);
    }
}
