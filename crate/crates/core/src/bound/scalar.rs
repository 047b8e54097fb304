//! Number types the gradient-norm formula is evaluated over: plain floats,
//! intervals, and forward-mode duals of either.

use std::ops::{Add, Mul};

use super::DIM;

pub trait Scalar: Clone + Add<Output = Self> + Mul<Output = Self> {
    fn constant(c: f64) -> Self;
    /// Non-negative integer power.
    fn powi(&self, n: i32) -> Self;
    /// Real power of a strictly positive value.
    fn powf_pos(&self, p: f64) -> Self;

    /// Sum of `terms`. Implementations may reorder to make the result
    /// independent of the order of the terms.
    fn sum(terms: Vec<Self>) -> Self {
        terms
            .into_iter()
            .reduce(|a, b| a + b)
            .unwrap_or_else(|| Self::constant(0.0))
    }
}

impl Scalar for f64 {
    fn constant(c: f64) -> Self {
        c
    }

    fn powi(&self, n: i32) -> Self {
        f64::powi(*self, n)
    }

    fn powf_pos(&self, p: f64) -> Self {
        self.powf(p)
    }

    fn sum(mut terms: Vec<Self>) -> Self {
        terms.sort_by(f64::total_cmp);
        terms.into_iter().sum()
    }
}

/// Closed interval `[lo, hi]`. Operations use round-to-nearest; callers that
/// need a rigorous bound pad the final result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "[{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn magnitude(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        Interval::new(self.lo + o.lo, self.hi + o.hi)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        let p = [
            self.lo * o.lo,
            self.lo * o.hi,
            self.hi * o.lo,
            self.hi * o.hi,
        ];
        Interval::new(
            p.iter().copied().fold(f64::INFINITY, f64::min),
            p.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        )
    }
}

impl Scalar for Interval {
    fn constant(c: f64) -> Self {
        Interval::point(c)
    }

    fn powi(&self, n: i32) -> Self {
        let (a, b) = (self.lo.powi(n), self.hi.powi(n));
        if n % 2 == 1 || self.lo >= 0.0 {
            Interval::new(a.min(b), a.max(b))
        } else if self.hi <= 0.0 {
            Interval::new(b, a)
        } else {
            Interval::new(0.0, a.max(b))
        }
    }

    fn powf_pos(&self, p: f64) -> Self {
        assert!(self.lo > 0.0, "powf_pos on {self:?}");
        let (a, b) = (self.lo.powf(p), self.hi.powf(p));
        Interval::new(a.min(b), a.max(b))
    }
}

/// Value plus gradient with respect to the eight coordinates.
#[derive(Debug, Clone)]
pub struct Dual<T> {
    pub value: T,
    pub grad: [T; DIM],
}

impl<T: Scalar> Dual<T> {
    /// The `index`-th coordinate variable at `value`.
    pub fn variable(value: T, index: usize) -> Self {
        let grad = std::array::from_fn(|i| T::constant(if i == index { 1.0 } else { 0.0 }));
        Dual { value, grad }
    }

    fn chain(&self, value: T, factor: T) -> Self {
        Dual {
            value,
            grad: std::array::from_fn(|i| factor.clone() * self.grad[i].clone()),
        }
    }
}

impl<T: Scalar> Add for Dual<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut grad = self.grad;
        for (g, h) in grad.iter_mut().zip(o.grad) {
            *g = g.clone() + h;
        }
        Dual {
            value: self.value + o.value,
            grad,
        }
    }
}

impl<T: Scalar> Mul for Dual<T> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, o: Self) -> Self {
        let grad = std::array::from_fn(|i| {
            self.grad[i].clone() * o.value.clone() + self.value.clone() * o.grad[i].clone()
        });
        Dual {
            value: self.value * o.value,
            grad,
        }
    }
}

impl<T: Scalar> Scalar for Dual<T> {
    fn constant(c: f64) -> Self {
        Dual {
            value: T::constant(c),
            grad: std::array::from_fn(|_| T::constant(0.0)),
        }
    }

    fn powi(&self, n: i32) -> Self {
        if n == 0 {
            return Self::constant(1.0);
        }
        let factor = T::constant(n as f64) * self.value.powi(n - 1);
        self.chain(self.value.powi(n), factor)
    }

    fn powf_pos(&self, p: f64) -> Self {
        let factor = T::constant(p) * self.value.powf_pos(p - 1.0);
        self.chain(self.value.powf_pos(p), factor)
    }
}
