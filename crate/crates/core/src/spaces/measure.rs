//! Probability measures on finite spaces: exact rational weight vectors.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{fmt_rat, Rat};

/// A probability measure on a finite space of `len()` points.
/// Weights are nonnegative and sum to exactly one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Measure {
    weights: Vec<Rat>,
}

impl Measure {
    pub fn new(weights: Vec<Rat>) -> Result<Measure> {
        if weights.is_empty() {
            return Err(Error::BaseMismatch("measure on empty space".into()));
        }
        if weights.iter().any(|w| w.is_negative()) {
            return Err(Error::BaseMismatch("negative weight".into()));
        }
        let total: Rat = weights.iter().cloned().sum();
        if !total.is_one() {
            return Err(Error::BaseMismatch(format!(
                "weights sum to {}, not 1",
                fmt_rat(&total)
            )));
        }
        Ok(Measure { weights })
    }

    pub fn uniform(n: usize) -> Measure {
        assert!(n >= 1);
        let w = Rat::new(num_bigint::BigInt::one(), num_bigint::BigInt::from(n as i64));
        Measure {
            weights: vec![w; n],
        }
    }

    pub fn point_mass(n: usize, at: usize) -> Measure {
        assert!(at < n);
        let mut weights = vec![Rat::zero(); n];
        weights[at] = Rat::one();
        Measure { weights }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: at least one point
    }

    pub fn weights(&self) -> &[Rat] {
        &self.weights
    }

    pub fn get(&self, i: usize) -> &Rat {
        &self.weights[i]
    }

    pub fn support(&self) -> Vec<usize> {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// Total-variation style L1 distance, exact.
    pub fn l1_distance(&self, other: &Measure) -> Result<Rat> {
        if self.len() != other.len() {
            return Err(Error::BaseMismatch(format!(
                "measures on {} and {} points",
                self.len(),
                other.len()
            )));
        }
        Ok(self
            .weights
            .iter()
            .zip(other.weights.iter())
            .map(|(a, b)| (a - b).abs())
            .sum())
    }
}

impl std::fmt::Display for Measure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let ws: Vec<String> = self.weights.iter().map(fmt_rat).collect();
        write!(f, "[{}]", ws.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn rejects_bad_weights() {
        assert!(Measure::new(vec![rat(1, 2), rat(1, 4)]).is_err());
        assert!(Measure::new(vec![rat(3, 2), rat(-1, 2)]).is_err());
        assert!(Measure::new(vec![]).is_err());
    }

    #[test]
    fn l1_examples() {
        let m = Measure::new(vec![rat(1, 2), rat(1, 2)]).unwrap();
        assert_eq!(m.l1_distance(&m).unwrap(), rat(0, 1));
        let a = Measure::point_mass(2, 0);
        let b = Measure::point_mass(2, 1);
        assert_eq!(a.l1_distance(&b).unwrap(), rat(2, 1));
        let c = Measure::new(vec![rat(3, 4), rat(1, 4)]).unwrap();
        assert_eq!(m.l1_distance(&c).unwrap(), rat(1, 2));
        let d = Measure::uniform(3);
        assert!(m.l1_distance(&d).is_err());
    }
}
