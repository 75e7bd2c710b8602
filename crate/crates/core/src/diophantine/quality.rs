//! Best-approximation scans and approximation-quality diagnostics.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::{Distance, IrrationalNumber};
use crate::error::{Error, Result};
use crate::fixed::ln_bigint;

/// Default upper limit on `q` for exhaustive best-approximation scans.
pub const DEFAULT_SCAN_CAP: u64 = 1_000_000;

const TIGHT_GUARD: f64 = 1e-13;

/// Strict `‖ja‖ < ‖ka‖`, refining the enclosures when they overlap.
fn strictly_less(x: &IrrationalNumber, j: u64, dj: &Distance, k: u64, dk: &Distance) -> Result<bool> {
    if x.is_rational() {
        return Ok(dj.value < dk.value);
    }
    if dj.hi < dk.lo {
        return Ok(true);
    }
    if dj.lo > dk.hi {
        return Ok(false);
    }
    let (a, _) = x.distance_with_guard(j, TIGHT_GUARD)?;
    let (b, _) = x.distance_with_guard(k, TIGHT_GUARD)?;
    if a.hi < b.lo {
        Ok(true)
    } else if a.lo > b.hi {
        Ok(false)
    } else {
        Err(Error::PrecisionExhausted {
            bits: x.working_bits(),
            context: alloc::format!("cannot order ‖{j}a‖ and ‖{k}a‖"),
        })
    }
}

/// Exhaustive check of `‖qa‖ < ‖ka‖` for every `1 <= k < q`.
pub fn is_best_approximation(x: &IrrationalNumber, q: u64, cap: u64) -> Result<bool> {
    if q < 2 {
        return Err(Error::invalid("best approximation check needs q >= 2"));
    }
    if q > cap {
        return Err(Error::CapExceeded { q, cap });
    }
    let dq = x.distance(q)?;
    for k in 1..q {
        let dk = x.distance(k)?;
        if !strictly_less(x, q, &dq, k, &dk)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every `q <= q_max` with `‖qa‖ < min_{k<q} ‖ka‖`, found by one prefix-minimum
/// pass. `q = 1` is included (the condition is vacuous there).
pub fn best_approximation_scan(x: &IrrationalNumber, q_max: u64, cap: u64) -> Result<Vec<u64>> {
    if q_max > cap {
        return Err(Error::CapExceeded { q: q_max, cap });
    }
    let mut out = Vec::new();
    if q_max == 0 {
        return Ok(out);
    }
    let mut best = (1u64, x.distance(1)?);
    out.push(1);
    for k in 2..=q_max {
        let d = x.distance(k)?;
        if strictly_less(x, k, &d, best.0, &best.1)? {
            best = (k, d);
            out.push(k);
        }
    }
    Ok(out)
}

/// `D(a, q_n) = |a - p_n/q_n|` with its continued-fraction bracket, all in
/// natural-log form so that huge denominators do not underflow.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproximationQuality {
    pub n: usize,
    pub ln_d: f64,
    pub ln_lower: f64,
    pub ln_upper: f64,
    /// The same quantity from the complete quotient `[a_{n+1}; a_{n+2}, ...]`.
    pub ln_d_quotient: Option<f64>,
    /// Absolute uncertainty of `ln_d`.
    pub slack: f64,
}

impl ApproximationQuality {
    pub fn d(&self) -> f64 {
        libm::exp(self.ln_d)
    }

    pub fn lower(&self) -> f64 {
        libm::exp(self.ln_lower)
    }

    pub fn upper(&self) -> f64 {
        libm::exp(self.ln_upper)
    }

    pub fn holds(&self) -> bool {
        self.ln_lower < self.ln_d + self.slack && self.ln_d < self.ln_upper + self.slack
    }
}

/// `D(a, q_n)` for `n >= 1`, checked against
/// `1/(2 q_n^2 (a_{n+1} + 1)) < D < 1/(q_n^2 a_{n+1})`.
pub fn approximation_quality(x: &IrrationalNumber, n: usize) -> Result<ApproximationQuality> {
    if n == 0 {
        return Err(Error::invalid("approximation quality is defined for n >= 1"));
    }
    let conv = x.convergents_to(n + 1)?;
    if conv.len() < n + 2 {
        return Err(Error::invalid("expansion terminates before a_{n+1}"));
    }
    let (prev, cur) = (&conv[n - 1], &conv[n]);
    let a_next = x.element(n + 1)?.expect("checked length");
    let q = cur.q.magnitude().clone();
    let dist = x.distance_big(&q)?;
    let ln_q = ln_bigint(&cur.q);
    let ln_d = libm::log(dist.value) - ln_q;
    // the upper end is approached to within ~1/a_{n+1}^2 when elements are huge
    let slack = (dist.hi - dist.lo) / dist.value + 1e-13 * ln_d.abs();
    let ln_a = ln_bigint(&a_next);
    let ln_a1 = ln_bigint(&(&a_next + 1));
    let ln_lower = -(core::f64::consts::LN_2 + 2.0 * ln_q + ln_a1);
    let ln_upper = -(2.0 * ln_q + ln_a);

    // D = 1 / (q_n (q_n α + q_{n-1})), α the (n+1)-th complete quotient
    let ln_d_quotient = complete_quotient(x, n + 1)?.map(|ln_alpha| {
        let ratio = libm::exp(ln_bigint(&prev.q) - ln_q);
        // ln(q_n α + q_{n-1}) = ln q_n + ln α + ln(1 + q_{n-1}/(q_n α))
        -(2.0 * ln_q + ln_alpha + libm::log1p(ratio * libm::exp(-ln_alpha)))
    });
    let out = ApproximationQuality {
        n,
        ln_d,
        ln_lower,
        ln_upper,
        ln_d_quotient,
        slack,
    };
    if !out.holds() {
        return Err(Error::assertion(alloc::format!(
            "D(a, q_{n}) = e^{ln_d} escapes its bracket [e^{ln_lower}, e^{ln_upper}]"
        )));
    }
    if let Some(lq) = ln_d_quotient {
        if (lq - ln_d).abs() > 1e-6 {
            return Err(Error::assertion(alloc::format!(
                "D(a, q_{n}): distance route e^{ln_d} and quotient route e^{lq} disagree"
            )));
        }
    }
    Ok(out)
}

/// `ln α_i` for `α_i = [a_i; a_{i+1}, ...]`, evaluated from up to forty
/// elements. `None` when the expansion runs out.
fn complete_quotient(x: &IrrationalNumber, i: usize) -> Result<Option<f64>> {
    let mut tail: Vec<BigInt> = Vec::new();
    for j in i..i + 40 {
        match x.element(j) {
            Ok(Some(e)) => tail.push(e),
            Ok(None) => break,
            Err(Error::PrecisionExhausted { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    if tail.len() < 2 {
        return Ok(None);
    }
    // [b_0; b_1, ..., b_m] = b_0 + 1 / [b_1; ...]; the tail contributes < 1
    let mut frac = 0.0f64;
    for e in tail[1..].iter().rev() {
        let ef = e.to_f64().unwrap_or(f64::INFINITY);
        frac = 1.0 / (ef + frac);
    }
    let head = &tail[0];
    let ln_alpha = match head.to_f64() {
        Some(h) if h < 1e300 => libm::log(h + frac),
        _ => ln_bigint(head),
    };
    Ok(Some(ln_alpha))
}

/// Empirical tallies of the two growth conditions on the denominators.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub n_max: usize,
    pub delta: f64,
    /// `holds_log_growth[n]`: `q_{n+1} >= q_n log q_n`.
    pub holds_log_growth: Vec<bool>,
    pub count_log_growth: usize,
    /// Largest `n` with `q_{n+1} > q_n (log q_n)^{1+δ}`.
    pub last_slow_growth_violation: Option<usize>,
}

impl GrowthReport {
    /// How many `n` in `[n0, n_max]` satisfy the first condition.
    pub fn count_log_growth_from(&self, n0: usize) -> usize {
        self.holds_log_growth.iter().skip(n0).filter(|&&b| b).count()
    }
}

/// Checks `q_{n+1} >= q_n log q_n` and `q_{n+1} <= q_n (log q_n)^{1+δ}` for
/// `0 <= n <= n_max`.
pub fn check_growth_conditions(x: &IrrationalNumber, delta: f64, n_max: usize) -> Result<GrowthReport> {
    if n_max < 2 {
        return Err(Error::invalid("growth check needs n_max >= 2"));
    }
    if !(delta > 0.0) {
        return Err(Error::invalid("growth check needs delta > 0"));
    }
    let conv = x.convergents_to(n_max + 1)?;
    if conv.len() < n_max + 2 {
        return Err(Error::invalid("expansion terminates: the number is rational"));
    }
    let mut holds_log_growth = Vec::with_capacity(n_max + 1);
    let mut last = None;
    for n in 0..=n_max {
        let (q, q1) = (&conv[n].q, &conv[n + 1].q);
        let lq = ln_bigint(q);
        let lq1 = ln_bigint(q1);
        let lnln = if lq > 0.0 { libm::log(lq) } else { f64::NEG_INFINITY };
        holds_log_growth.push(q.is_one() || lq1 >= lq + lnln);
        if q.is_one() || lq1 > lq + (1.0 + delta) * lnln {
            last = Some(n);
        }
    }
    let count_log_growth = holds_log_growth.iter().filter(|&&b| b).count();
    Ok(GrowthReport {
        n_max,
        delta,
        holds_log_growth,
        count_log_growth,
        last_slow_growth_violation: last,
    })
}

/// `max_{1<=k<=n_max} a_k`; a bounded-element indicator, not a proof.
pub fn ba_prefix_bound(x: &IrrationalNumber, n_max: usize) -> Result<BigInt> {
    let mut best = BigInt::zero();
    for k in 1..=n_max {
        match x.element(k)? {
            Some(e) => {
                if e > best {
                    best = e;
                }
            }
            None => break,
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn golden_scan_is_fibonacci() {
        let g = IrrationalNumber::golden();
        let s = best_approximation_scan(&g, 1000, DEFAULT_SCAN_CAP).unwrap();
        assert_eq!(s, vec![1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377, 610, 987]);
        assert!(is_best_approximation(&g, 5, DEFAULT_SCAN_CAP).unwrap());
        assert!(!is_best_approximation(&g, 4, DEFAULT_SCAN_CAP).unwrap());
        assert!(matches!(
            is_best_approximation(&g, 2_000_000, DEFAULT_SCAN_CAP),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn quality_brackets() {
        let g = IrrationalNumber::golden();
        for n in 1..=20 {
            let q = approximation_quality(&g, n).unwrap();
            assert!(q.holds());
            assert!(q.ln_d_quotient.is_some());
        }
        let x: IrrationalNumber = "cf:0;1,10,100,...".parse().unwrap();
        for n in 1..=12 {
            let q = approximation_quality(&x, n).unwrap();
            assert!(q.holds(), "n={n}");
        }
        assert!(approximation_quality(&x, 12).unwrap().ln_d < -300.0);
    }

    #[test]
    fn growth_tallies() {
        let g = IrrationalNumber::golden();
        let r = check_growth_conditions(&g, 0.1, 30).unwrap();
        assert_eq!(r.count_log_growth_from(4), 0);
        assert_eq!(r.last_slow_growth_violation, Some(3));
        let x: IrrationalNumber = "cf:0;1,10,100,...".parse().unwrap();
        let a = check_growth_conditions(&x, 0.1, 6).unwrap();
        let b = check_growth_conditions(&x, 0.1, 12).unwrap();
        assert!(b.count_log_growth > a.count_log_growth);
        let r = IrrationalNumber::rational(&3.into(), &7.into()).unwrap();
        assert!(matches!(check_growth_conditions(&r, 0.1, 5), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn prefix_bounds() {
        assert_eq!(ba_prefix_bound(&IrrationalNumber::golden(), 50).unwrap(), BigInt::one());
        assert_eq!(ba_prefix_bound(&IrrationalNumber::sqrt2_minus_one(), 50).unwrap(), BigInt::from(2));
        let x = IrrationalNumber::from_elements(0, &[1, 2, 3, 4]).unwrap();
        assert_eq!(ba_prefix_bound(&x, 4).unwrap(), BigInt::from(4));
    }
}
