//! Continued fractions, convergents and Diophantine approximation quality of
//! the boxcar half-width.

mod number;
mod quality;
mod surd;

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use number::{CfSpec, CfTail, DecimalSpec, IrrationalNumber, NumberSpec, DEFAULT_GUARD};
pub use quality::{
    approximation_quality, ba_prefix_bound, best_approximation_scan, check_growth_conditions,
    is_best_approximation, ApproximationQuality, GrowthReport, DEFAULT_SCAN_CAP,
};
pub use surd::QuadraticSurd;

/// `‖kx‖` with a certified enclosure `lo <= value <= hi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Distance {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    /// `k x` is an integer (only possible for rational `x`).
    pub resonant: bool,
}

/// The `n`-th convergent `p/q` in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergent {
    pub n: usize,
    pub p: BigInt,
    pub q: BigInt,
}

/// First `n_terms + 1` elements `[a_0; a_1, ..., a_{n_terms}]`.
///
/// A terminating (rational) expansion returns all of its elements when it is
/// shorter than requested.
pub fn expand(x: &IrrationalNumber, n_terms: usize) -> Result<Vec<BigInt>> {
    let mut out = Vec::with_capacity(n_terms + 1);
    for i in 0..=n_terms {
        match x.element(i)? {
            Some(e) => out.push(e),
            None => break,
        }
    }
    Ok(out)
}

/// Convergents of a finite list of elements via the three-term recurrence.
pub fn convergents(elements: &[BigInt]) -> Result<Vec<Convergent>> {
    if elements.is_empty() {
        return Err(Error::invalid("empty element list"));
    }
    if let Some((i, e)) = elements.iter().enumerate().skip(1).find(|(_, e)| !e.is_positive()) {
        return Err(Error::invalid(alloc::format!(
            "element a_{i} = {e} is not a positive integer"
        )));
    }
    let mut st = Recurrence::default();
    Ok(elements
        .iter()
        .enumerate()
        .map(|(n, a)| st.push(n, a))
        .collect())
}

#[derive(Clone, Debug)]
struct Recurrence {
    p1: BigInt,
    p2: BigInt,
    q1: BigInt,
    q2: BigInt,
}

impl Default for Recurrence {
    fn default() -> Self {
        Recurrence {
            p1: BigInt::one(),
            p2: BigInt::zero(),
            q1: BigInt::zero(),
            q2: BigInt::one(),
        }
    }
}

impl Recurrence {
    fn push(&mut self, n: usize, a: &BigInt) -> Convergent {
        let p = a * &self.p1 + &self.p2;
        let q = a * &self.q1 + &self.q2;
        self.p2 = core::mem::replace(&mut self.p1, p.clone());
        self.q2 = core::mem::replace(&mut self.q1, q.clone());
        Convergent { n, p, q }
    }
}

/// Lazily generated convergents of a number; ends for rationals, yields an
/// error once decimal input runs out of certified elements.
#[derive(Clone, Debug)]
pub struct ConvergentIter<'a> {
    x: &'a IrrationalNumber,
    n: usize,
    rec: Recurrence,
    done: bool,
}

impl<'a> ConvergentIter<'a> {
    pub fn new(x: &'a IrrationalNumber) -> Self {
        ConvergentIter {
            x,
            n: 0,
            rec: Recurrence::default(),
            done: false,
        }
    }
}

impl Iterator for ConvergentIter<'_> {
    type Item = Result<Convergent>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        match self.x.element(self.n) {
            Ok(Some(a)) => {
                let c = self.rec.push(self.n, &a);
                self.n += 1;
                Some(Ok(c))
            }
            Ok(None) => {
                self.done = true;
                None
            }
            Err(e) => {
                self.done = true;
                Some(Err(e))
            }
        }
    }
}

impl IrrationalNumber {
    pub fn convergents(&self) -> ConvergentIter<'_> {
        ConvergentIter::new(self)
    }

    /// Convergents `0..=n` (fewer if the expansion terminates first).
    pub fn convergents_to(&self, n: usize) -> Result<Vec<Convergent>> {
        self.convergents().take(n + 1).collect()
    }

    /// Convergents up to and including the first with `q > q_max`.
    pub fn convergents_past(&self, q_max: &BigInt) -> Result<Vec<Convergent>> {
        let mut out = Vec::new();
        for c in self.convergents() {
            let c = c?;
            let stop = &c.q > q_max;
            out.push(c);
            if stop {
                break;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn expand_golden_and_explicit() {
        let g = IrrationalNumber::golden();
        assert_eq!(expand(&g, 6).unwrap(), ints(&[0, 1, 1, 1, 1, 1, 1]));
        let x = IrrationalNumber::from_elements(0, &[2, 2, 2]).unwrap();
        assert_eq!(expand(&x, 3).unwrap(), ints(&[0, 2, 2, 2]));
        assert_eq!(expand(&x, 10).unwrap(), ints(&[0, 2, 2, 2]));
    }

    #[test]
    fn fibonacci_denominators() {
        let c = convergents(&ints(&[0, 1, 1, 1, 1, 1])).unwrap();
        let q: Vec<_> = c.iter().map(|c| c.q.clone()).collect();
        assert_eq!(q, ints(&[1, 1, 2, 3, 5, 8]));
        let p: Vec<_> = c.iter().map(|c| c.p.clone()).collect();
        assert_eq!(p, ints(&[0, 1, 1, 2, 3, 5]));
    }

    #[test]
    fn one_step_fraction() {
        for a1 in 1..20 {
            let c = convergents(&ints(&[0, a1])).unwrap();
            assert_eq!((c[1].p.clone(), c[1].q.clone()), (BigInt::one(), BigInt::from(a1)));
        }
    }

    #[test]
    fn rejects_nonpositive_elements() {
        assert!(convergents(&ints(&[0, 1, 0])).is_err());
        assert!(convergents(&[]).is_err());
        // a_0 may be any integer
        assert!(convergents(&ints(&[-3, 1, 2])).is_ok());
    }
}
