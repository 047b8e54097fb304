//! Number types shared across the crate: the exact activity weight and the
//! high-precision binary float used by the approximation path.

use std::fmt;
use std::str::FromStr;

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;

use crate::error::{Error, Result};

/// Binary floating point with explicit precision, round-half-even.
pub type Real = FBig<HalfEven, 2>;

/// Baseline mantissa width of [`Real`] values.
pub const BASE_PRECISION: usize = 128;

/// Largest activity for which the decay rate is guaranteed.
pub fn lambda_limit() -> RBig {
    RBig::from_parts(IBig::from(1077), UBig::from(1000u32))
}

/// Working precision for a graph of `n` vertices: the base mantissa plus
/// `ceil(n * log2 9)` guard bits for a product of up to `n` factors <= 9.
pub fn working_precision(n: usize) -> usize {
    BASE_PRECISION + (n as f64 * 9f64.log2()).ceil() as usize
}

pub fn real(value: u32, precision: usize) -> Real {
    Real::from(value).with_precision(precision).value()
}

pub fn ratio_to_real(r: &RBig, precision: usize) -> Real {
    let num = Real::from(r.numerator().clone())
        .with_precision(precision)
        .value();
    let den = Real::from(r.denominator().clone())
        .with_precision(precision)
        .value();
    num / den
}

/// Exact value of a (finite) float as a rational.
pub fn real_to_ratio(x: &Real) -> RBig {
    let repr = x.repr();
    let sig = repr.significand().clone();
    let exp = repr.exponent();
    if exp >= 0 {
        RBig::from(sig << exp as usize)
    } else {
        RBig::from_parts(sig, UBig::ONE << (-exp) as usize)
    }
}

pub fn ratio_to_f64(r: &RBig) -> f64 {
    r.to_f64().value()
}

/// Fixed-point decimal rendering with `digits` fractional digits, rounded
/// half-to-even exactly.
pub fn format_fixed(r: &RBig, digits: usize) -> String {
    let negative = r.numerator() < &IBig::ZERO;
    let (_, num) = r.numerator().clone().into_parts();
    let den = r.denominator().clone();
    let scaled = num * UBig::from(10u8).pow(digits);
    let mut q = &scaled / &den;
    let rem = &scaled % &den;
    let twice = rem * UBig::from(2u8);
    if twice > den || (twice == den && (&q % UBig::from(2u8)) == UBig::ONE) {
        q += UBig::ONE;
    }
    let mut s = q.to_string();
    if s.len() <= digits {
        s = format!("{}{}", "0".repeat(digits + 1 - s.len()), s);
    }
    let split = s.len() - digits;
    let sign = if negative && q != UBig::ZERO { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{s}")
    } else {
        format!("{sign}{}.{}", &s[..split], &s[split..])
    }
}

/// `p` for integers, `p/q` otherwise.
pub fn format_ratio(r: &RBig) -> String {
    if r.denominator() == &UBig::ONE {
        r.numerator().to_string()
    } else {
        format!("{}/{}", r.numerator(), r.denominator())
    }
}

/// The activity λ > 0 of the weighted partition function, held exactly.
///
/// Parses integers (`2`), fractions (`1/4`) and decimals (`1.077`, `0.5`).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(RBig);

impl Weight {
    pub fn one() -> Self {
        Weight(RBig::ONE)
    }

    pub fn new(value: RBig) -> Result<Self> {
        if value <= RBig::ZERO {
            return Err(Error::Domain(format!(
                "lambda must be positive, got {value}"
            )));
        }
        Ok(Weight(value))
    }

    pub fn from_fraction(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Domain("zero denominator".into()));
        }
        Self::new(RBig::from_parts(IBig::from(num), UBig::from(den)))
    }

    pub fn ratio(&self) -> &RBig {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0 == RBig::ONE
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.0)
    }

    pub fn to_real(&self, precision: usize) -> Real {
        ratio_to_real(&self.0, precision)
    }

    /// Whether the decay guarantee covers this activity.
    pub fn within_guarantee(&self) -> bool {
        self.0 <= lambda_limit()
    }
}

impl FromStr for Weight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Domain(format!("cannot parse '{s}' as a positive rational"));
        let value = if let Some((int, frac)) = s.split_once('.') {
            let digits = format!("{int}{frac}");
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let num: UBig = digits.parse().map_err(|_| bad())?;
            RBig::from_parts(IBig::from(num), UBig::from(10u8).pow(frac.len()))
        } else {
            RBig::from_str(s).map_err(|_| bad())?
        };
        Weight::new(value)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_ratio(&self.0))
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Weight({self})")
    }
}
