//! Exact arithmetic on quadratic surds `(A + B√D) / E`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Distance;
use crate::error::{Error, Result};
use crate::fixed::{pow2, scaled_to_f64};

/// `(a + b√d) / e` with `d` a positive nonsquare and `b, e` nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSurd {
    pub a: BigInt,
    pub b: BigInt,
    pub d: BigInt,
    pub e: BigInt,
}

/// `(p + √d) / q` with `q | d - p²`, the normal form of the expansion loop.
#[derive(Clone, Debug)]
struct Normal {
    p: BigInt,
    q: BigInt,
    d: BigInt,
}

impl QuadraticSurd {
    pub fn new(a: BigInt, b: BigInt, d: BigInt, e: BigInt) -> Result<Self> {
        if !d.is_positive() {
            return Err(Error::invalid("surd: D must be positive"));
        }
        let root = d.sqrt();
        if &root * &root == d {
            return Err(Error::invalid("surd: D must not be a perfect square"));
        }
        if e.is_zero() {
            return Err(Error::invalid("surd: E must be nonzero"));
        }
        if b.is_zero() {
            return Err(Error::invalid("surd: B must be nonzero"));
        }
        Ok(QuadraticSurd { a, b, d, e })
    }

    fn normal(&self) -> Normal {
        let (a, e) = if self.b.is_positive() {
            (self.a.clone(), self.e.clone())
        } else {
            (-&self.a, -&self.e)
        };
        let b = self.b.abs();
        let d1 = &b * &b * &self.d;
        let e_abs = e.abs();
        Normal {
            p: &a * &e_abs,
            d: d1 * &e_abs * &e_abs,
            q: &e * &e_abs,
        }
    }

    /// `floor(k * x * 2^bits)` computed by integer square roots only.
    pub fn scaled_floor(&self, k: &BigUint, bits: u32) -> BigInt {
        let nf = self.normal();
        let k = BigInt::from(k.clone());
        let radicand: BigInt = &k * &k * &nf.d << (2 * bits as usize);
        let s = radicand.sqrt();
        let num = (&k * &nf.p << bits as usize) + s;
        if nf.q.is_positive() {
            num.div_floor(&nf.q)
        } else {
            (num + BigInt::one()).div_floor(&nf.q)
        }
    }

    /// Scaled enclosure `floor(x 2^bits) < x 2^bits < floor(x 2^bits) + 1`.
    pub(crate) fn scaled_bounds(&self, bits: u32) -> (BigInt, BigInt) {
        let lo = self.scaled_floor(&BigUint::one(), bits);
        let hi = &lo + 1;
        (lo, hi)
    }

    /// `‖k x‖` through exact surd arithmetic, independent of the fixed-point
    /// enclosure route used elsewhere.
    pub fn distance_exact(&self, k: u64, bits: u32) -> Distance {
        let scale = pow2(bits);
        let f = self.scaled_floor(&BigUint::from(k), bits);
        let frac = f.mod_floor(&scale);
        let other = &scale - &frac;
        let near = if frac <= other { frac } else { other };
        // true k x 2^bits lies in (f, f + 1) and ‖·‖ is 1-Lipschitz
        let v = scaled_to_f64(&near, bits);
        let ulp = libm::scalbn(1.0, -(bits as i32));
        Distance {
            value: v,
            lo: ((v - ulp) * (1.0 - 4e-16)).max(0.0),
            hi: (v + ulp) * (1.0 + 4e-16),
            resonant: false,
        }
    }

    /// Eventually periodic continued-fraction expansion `(prefix, period)`;
    /// `prefix[0]` is `a_0`.
    pub fn expansion(&self) -> Result<(Vec<BigInt>, Vec<BigInt>)> {
        const MAX_STEPS: usize = 1 << 20;
        let Normal { mut p, mut q, d } = self.normal();
        let s = d.sqrt();
        let mut seen: BTreeMap<(BigInt, BigInt), usize> = BTreeMap::new();
        let mut elements = Vec::new();
        for i in 0..MAX_STEPS {
            if let Some(&start) = seen.get(&(p.clone(), q.clone())) {
                let period = elements.split_off(start);
                return Ok((elements, period));
            }
            seen.insert((p.clone(), q.clone()), i);
            let a = if q.is_positive() {
                (&p + &s).div_floor(&q)
            } else {
                (&p + &s + BigInt::one()).div_floor(&q)
            };
            let p_next = &a * &q - &p;
            let q_next = (&d - &p_next * &p_next) / &q;
            elements.push(a);
            p = p_next;
            q = q_next;
        }
        Err(Error::invalid("surd: period detection did not terminate"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surd(a: i64, b: i64, d: i64, e: i64) -> QuadraticSurd {
        QuadraticSurd::new(a.into(), b.into(), d.into(), e.into()).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn golden_expansion_is_all_ones() {
        let (pre, per) = surd(-1, 1, 5, 2).expansion().unwrap();
        assert_eq!(pre, ints(&[0]));
        assert_eq!(per, ints(&[1]));
    }

    #[test]
    fn sqrt2_minus_one() {
        let (pre, per) = surd(-1, 1, 2, 1).expansion().unwrap();
        assert_eq!(pre, ints(&[0]));
        assert_eq!(per, ints(&[2]));
    }

    #[test]
    fn sqrt7_and_negative_coefficients() {
        // sqrt 7 = [2; 1, 1, 1, 4]
        let (pre, per) = surd(0, 1, 7, 1).expansion().unwrap();
        assert_eq!(pre, ints(&[2]));
        assert_eq!(per, ints(&[1, 1, 1, 4]));
        // -sqrt 2 = [-2; 1, 1, 2] with period (2): -1.414.. = -2 + 0.5857..
        let (pre, per) = surd(0, -1, 2, 1).expansion().unwrap();
        assert_eq!(pre[0], BigInt::from(-2));
        let all: Vec<_> = pre.iter().chain(per.iter()).cloned().collect();
        assert_eq!(all[1], BigInt::from(1));
        // (1 + sqrt 3) / -2 ~ -1.366 = [-2; 1, 1, 2, 1, 2, ...]
        let (pre, per) = surd(1, 1, 3, -2).expansion().unwrap();
        assert_eq!(pre[0], BigInt::from(-2));
        assert!(per == ints(&[1, 2]) || per == ints(&[2, 1]));
    }

    #[test]
    fn rejects_malformed() {
        assert!(QuadraticSurd::new(1.into(), 1.into(), 4.into(), 1.into()).is_err());
        assert!(QuadraticSurd::new(1.into(), 1.into(), 5.into(), 0.into()).is_err());
        assert!(QuadraticSurd::new(1.into(), 0.into(), 5.into(), 1.into()).is_err());
        assert!(QuadraticSurd::new(1.into(), 1.into(), (-5).into(), 1.into()).is_err());
    }

    #[test]
    fn scaled_floor_of_golden() {
        let g = surd(-1, 1, 5, 2);
        // floor(0.6180339887 * 2^20) = 648055
        assert_eq!(g.scaled_floor(&BigUint::one(), 20), BigInt::from(648_055));
    }
}
