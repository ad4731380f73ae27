//! Exact rational scalars and point helpers.
//!
//! Every quantity the library computes with is a `Rat` (arbitrary-precision
//! rational, always reduced, positive denominator). Floating point appears
//! nowhere in the computational core.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

/// A point with exact rational coordinates.
pub type Point = Vec<Rat>;

/// Shorthand constructor: `rat(1, 3)` is 1/3.
pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as a rational.
pub fn rint(n: i64) -> Rat {
    BigRational::from(BigInt::from(n))
}

/// Parses a rational literal: "p/q" or a bare integer "p".
pub fn parse_rat(text: &str) -> Result<Rat> {
    let s = text.trim();
    let bad = || Error::ParseRational(text.to_string());
    match s.split_once('/') {
        Some((p, q)) => {
            let num: BigInt = p.trim().parse().map_err(|_| bad())?;
            let den: BigInt = q.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(num, den))
        }
        None => {
            let num: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from(num))
        }
    }
}

/// Renders a rational as "p/q" (or "p" when the denominator is 1).
pub fn fmt_rat(r: &Rat) -> String {
    r.to_string()
}

pub fn fmt_point(p: &[Rat]) -> String {
    let coords: Vec<String> = p.iter().map(fmt_rat).collect();
    format!("({})", coords.join(", "))
}

/// Max-coordinate distance between two points of equal dimension.
pub fn linf_dist(a: &[Rat], b: &[Rat]) -> Rat {
    assert_eq!(a.len(), b.len(), "dimension mismatch");
    let mut best = Rat::zero();
    for (x, y) in a.iter().zip(b.iter()) {
        let d = (x - y).abs();
        if d > best {
            best = d;
        }
    }
    best
}

/// Sum of coordinate absolute differences.
pub fn l1_dist(a: &[Rat], b: &[Rat]) -> Rat {
    assert_eq!(a.len(), b.len(), "dimension mismatch");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).sum()
}
