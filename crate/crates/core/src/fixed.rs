//! Fixed-point enclosures used to reduce `k * x` modulo one with a certified
//! error radius.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Float, One, ToPrimitive, Zero};

/// Default working precision in bits.
pub(crate) const BASE_BITS: u32 = 256;
/// Default ceiling for the escalation loop.
pub(crate) const MAX_BITS: u32 = 4096;
/// No configured ceiling may exceed this.
pub(crate) const HARD_MAX_BITS: u32 = 65536;

const TWO_POW_M128: f64 = 2.938_735_877_055_719e-39;
const F64_REL: f64 = 2.3e-16;

pub(crate) fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

/// `x * 2^-bits` as an f64, robust to operands far beyond f64 range.
pub(crate) fn scaled_to_f64(x: &BigInt, bits: u32) -> f64 {
    let len = x.bits();
    if len <= 1000 && bits <= 1000 {
        if let Some(v) = x.to_f64() {
            return libm::scalbn(v, -(bits as i32));
        }
    }
    let shift = len.saturating_sub(64);
    let top = (x >> shift as usize).to_f64().unwrap_or(0.0);
    libm::scalbn(top, shift as i32 - bits as i32)
}

/// Natural log of a positive big integer.
pub(crate) fn ln_big(x: &BigUint) -> f64 {
    let len = x.bits();
    if len <= 64 {
        return x.to_f64().map(Float::ln).unwrap_or(f64::NEG_INFINITY);
    }
    let shift = len - 64;
    let top = (x >> shift as usize).to_f64().unwrap_or(1.0);
    top.ln() + shift as f64 * core::f64::consts::LN_2
}

pub(crate) fn ln_bigint(x: &BigInt) -> f64 {
    ln_big(x.magnitude())
}

pub(crate) fn big_to_f64(x: &BigInt) -> f64 {
    scaled_to_f64(x, 0)
}

/// Outcome of reducing `k * x` modulo one.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Reduction {
    /// Distance to the nearest integer computed from the truncated fraction.
    pub dist: f64,
    /// Certified absolute error bound on `dist`.
    pub radius: f64,
    /// Parity of `floor(k * x)`, valid whenever `dist > radius`.
    pub floor_odd: bool,
}

/// Enclosure `x ∈ [lo, lo + width]` with `lo = int + frac * 2^-bits`.
#[derive(Clone, Debug)]
pub(crate) struct FracEnclosure {
    int_odd: bool,
    frac: BigUint,
    limbs: Vec<u64>,
    bits: u32,
    width: f64,
}

impl FracEnclosure {
    /// Builds the enclosure from scaled integer endpoints `lo <= x * 2^bits <= hi`.
    /// `bits` must be a multiple of 64 and at least 128.
    pub fn from_scaled(lo: &BigInt, hi: &BigInt, bits: u32) -> Self {
        debug_assert!(bits % 64 == 0 && bits >= 128);
        let scale = pow2(bits);
        let (int_part, frac) = lo.div_mod_floor(&scale);
        let frac = frac.to_biguint().unwrap_or_default();
        let mut limbs = frac.to_u64_digits();
        limbs.resize((bits / 64) as usize, 0);
        let spread = hi - lo;
        let width = scaled_to_f64(&spread, bits) * (1.0 + 4.0 * F64_REL);
        FracEnclosure {
            int_odd: int_part.is_odd(),
            frac,
            limbs,
            bits,
            width,
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Reduces `k * x` modulo one using allocation-free limb arithmetic.
    pub fn reduce(&self, k: u64) -> Reduction {
        let n = self.limbs.len();
        let mut carry: u128 = 0;
        let mut top = 0u64;
        let mut next = 0u64;
        for (i, &limb) in self.limbs.iter().enumerate() {
            let t = limb as u128 * k as u128 + carry;
            if i + 2 == n {
                next = t as u64;
            } else if i + 1 == n {
                top = t as u64;
            }
            carry = t >> 64;
        }
        let f = ((top as u128) << 64) | next as u128;
        let odd = (carry & 1 == 1) ^ (k & 1 == 1 && self.int_odd);
        self.finish(f, k as f64, odd)
    }

    /// Same as [`reduce`](Self::reduce) for an arbitrarily large multiplier.
    /// The distance is read from the full fraction, so values far below
    /// `2^-128` are resolved as long as the enclosure is narrow enough.
    pub fn reduce_big(&self, k: &BigUint) -> Reduction {
        let prod = &self.frac * k;
        let carry = &prod >> self.bits as usize;
        let mask = (BigUint::one() << self.bits as usize) - 1u32;
        let low = &prod & &mask;
        let other = (&mask - &low) + 1u32;
        let near = if low <= other { low } else { other };
        let dist = scaled_to_f64(&BigInt::from(near), self.bits);
        let odd = carry.is_odd() ^ (k.is_odd() && self.int_odd);
        let kf = big_to_f64(&BigInt::from(k.clone())) * (1.0 + F64_REL);
        let ulp = libm::scalbn(1.0, -(self.bits as i32));
        let radius = (kf * self.width + ulp) * (1.0 + 4.0 * F64_REL) + dist * 2.0 * F64_REL;
        Reduction {
            dist,
            radius,
            floor_odd: odd,
        }
    }

    fn finish(&self, f: u128, k: f64, floor_odd: bool) -> Reduction {
        let d_int = if f <= 1u128 << 127 { f } else { f.wrapping_neg() };
        let dist = d_int as f64 * TWO_POW_M128;
        let radius = (k * self.width + TWO_POW_M128) * (1.0 + 4.0 * F64_REL) + dist * F64_REL;
        Reduction {
            dist,
            radius,
            floor_odd,
        }
    }
}

/// `floor(p * 2^bits / q)` and `ceil(...)` for a rational `p/q`, `q > 0`.
pub(crate) fn rational_scaled(p: &BigInt, q: &BigInt, bits: u32) -> (BigInt, BigInt) {
    let num = p << bits as usize;
    let (fl, rem) = num.div_mod_floor(q);
    let ce = if rem.is_zero() { fl.clone() } else { &fl + 1 };
    (fl, ce)
}

/// Rounds `bits` up to a multiple of 64, clamped to `[BASE_BITS, HARD_MAX_BITS]`.
pub(crate) fn round_bits(bits: u32) -> u32 {
    let b = bits.clamp(BASE_BITS, HARD_MAX_BITS);
    b.div_ceil(64) * 64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduce_matches_bigint_route() {
        // x = 1/3 + tiny, enclosed at 256 bits
        let bits = 256;
        let (lo, hi) = rational_scaled(&BigInt::from(7), &BigInt::from(3), bits);
        let enc = FracEnclosure::from_scaled(&lo, &hi, bits);
        for k in [1u64, 2, 3, 4, 5, 1000, 1001, 1002] {
            let a = enc.reduce(k);
            let b = enc.reduce_big(&BigUint::from(k));
            assert!((a.dist - b.dist).abs() <= a.radius + b.radius);
            assert_eq!(a.floor_odd, b.floor_odd);
            let exact = {
                let r = (7 * k) % 3;
                r.min(3 - r) as f64 / 3.0
            };
            assert!((a.dist - exact).abs() <= a.radius, "k={k}");
            if exact > 0.0 {
                assert_eq!(a.floor_odd, ((7 * k) / 3) % 2 == 1, "k={k}");
            }
        }
    }

    #[test]
    fn ln_big_large_values() {
        let x = BigUint::one() << 1000usize;
        assert!((ln_big(&x) - 1000.0 * core::f64::consts::LN_2).abs() < 1e-9);
        assert!((ln_big(&BigUint::from(1000u32)) - 1000f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn scaled_conversion() {
        let x = BigInt::from(3) << 2000usize;
        assert!((scaled_to_f64(&x, 2001) - 1.5).abs() < 1e-15);
        assert_eq!(scaled_to_f64(&BigInt::from(-6), 2), -1.5);
    }
}
