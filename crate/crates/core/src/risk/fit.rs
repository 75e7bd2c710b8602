//! Rate sweeps over `ε` and log-log slope fits.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_bigint::BigUint;

use super::{
    rate_constants, rp_block_ellipsoid, rp_ellipsoid, rp_hyperrectangle, ClassKind,
    RiskResult, SmoothnessClass,
};
use crate::boxcar::{BoxcarKernel, Spectrum};
use crate::error::{Error, Result};
use crate::fixed::ln_bigint;

/// One `(ε, R_P)` row of a sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRecord {
    pub eps: f64,
    pub sigma: f64,
    pub c: f64,
    pub class: ClassKind,
    pub value_lo: f64,
    pub value: f64,
    pub value_hi: f64,
    pub k0: Option<u64>,
    pub k1: Option<u64>,
    pub k_trunc: u64,
}

impl SweepRecord {
    pub fn from_result(eps: f64, class: &SmoothnessClass, r: &RiskResult) -> Self {
        SweepRecord {
            eps,
            sigma: class.sigma,
            c: class.c,
            class: class.kind,
            value_lo: r.lo,
            value: r.value,
            value_hi: r.hi,
            k0: r.k0,
            k1: r.k1,
            k_trunc: r.k_trunc,
        }
    }
}

/// `ε = 10^{-j/2}` for `j = lo..=hi`, largest first.
pub fn eps_decades(lo: u32, hi: u32) -> Vec<f64> {
    (lo..=hi).map(|j| libm::pow(10.0, -(j as f64) / 2.0)).collect()
}

/// `R_P` for the class kind at hand.
pub fn risk_at<S: Spectrum + ?Sized>(
    kernel: &S,
    class: &SmoothnessClass,
    eps: f64,
    rtol: f64,
) -> Result<RiskResult> {
    match class.kind {
        ClassKind::Hyperrectangle => rp_hyperrectangle(kernel, class, eps, rtol),
        ClassKind::Ellipsoid => rp_ellipsoid(kernel, class, eps),
        ClassKind::BlockEllipsoid => rp_block_ellipsoid(kernel, class, eps, None),
    }
}

/// Serial sweep; checks that the risk is nondecreasing in `ε`.
pub fn sweep<S: Spectrum + ?Sized>(
    kernel: &S,
    class: &SmoothnessClass,
    eps: &[f64],
    rtol: f64,
) -> Result<Vec<SweepRecord>> {
    let recs = eps
        .iter()
        .map(|&e| risk_at(kernel, class, e, rtol).map(|r| SweepRecord::from_result(e, class, &r)))
        .collect::<Result<Vec<_>>>()?;
    check_monotone(&recs)?;
    Ok(recs)
}

/// `R_P` must not decrease as `ε` grows.
pub fn check_monotone(recs: &[SweepRecord]) -> Result<()> {
    let mut sorted: Vec<&SweepRecord> = recs.iter().collect();
    sorted.sort_by(|a, b| a.eps.total_cmp(&b.eps));
    for w in sorted.windows(2) {
        if w[1].value_hi < w[0].value_lo {
            return Err(Error::assertion(format!(
                "risk decreases from {} at eps {} to {} at eps {}",
                w[0].value, w[0].eps, w[1].value, w[1].eps
            )));
        }
    }
    Ok(())
}

/// Least-squares line through `(ln ε, ln R)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log units.
    pub residual: f64,
    pub points: usize,
}

/// Fits the middle 80% of a sweep spanning at least five decades.
pub fn fit_rate(sweep: &[SweepRecord]) -> Result<Fit> {
    let mut pts: Vec<(f64, f64)> = sweep
        .iter()
        .filter(|r| r.value > 0.0 && r.eps > 0.0)
        .map(|r| (libm::log(r.eps), libm::log(r.value)))
        .collect();
    if pts.len() != sweep.len() {
        return Err(Error::InsufficientSweep(String::from("nonpositive risk or epsilon")));
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let span = match (pts.first(), pts.last()) {
        (Some(a), Some(b)) => (b.0 - a.0) / core::f64::consts::LN_10,
        _ => 0.0,
    };
    if span < 5.0 - 1e-9 {
        return Err(Error::InsufficientSweep(format!("eps spans {span:.2} decades, need 5")));
    }
    let drop = pts.len() / 10;
    let mid = &pts[drop..pts.len() - drop];
    if mid.len() < 3 {
        return Err(Error::InsufficientSweep(String::from("fewer than three points after trimming")));
    }
    let n = mid.len() as f64;
    let mx = mid.iter().map(|p| p.0).sum::<f64>() / n;
    let my = mid.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = mid.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = mid.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = mid
        .iter()
        .map(|p| {
            let e = p.1 - (intercept + slope * p.0);
            e * e
        })
        .sum();
    Ok(Fit {
        slope,
        intercept,
        residual: libm::sqrt(ss / n),
        points: mid.len(),
    })
}

/// `2s` with `s = σ/(σ + 1/2 + α)`, the exponent of `ε` for `r_k = c k^{-α}`.
pub fn homogeneous_slope(sigma: f64, alpha: f64) -> f64 {
    2.0 * sigma / (sigma + 0.5 + alpha)
}

/// One point of the constructed `ε[l]` sequence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogFactorPoint {
    pub n: usize,
    pub ln_q: f64,
    pub ln_eps: f64,
    /// `ln(C²q^{-2τ} ∧ ε_q²)` at `k = q_n`.
    pub ln_single: f64,
    /// `ln((log(C/ε))^{2r} C^{2(1-r)} ε^{2r})`.
    pub ln_benchmark: f64,
    /// `ln(C^{2(1-r)} ε^{2r})`, the bounded-element rate.
    pub ln_plain_rate: f64,
}

impl LogFactorPoint {
    pub fn ratio(&self) -> f64 {
        libm::exp(self.ln_single - self.ln_benchmark)
    }

    pub fn plain_ratio(&self) -> f64 {
        libm::exp(self.ln_single - self.ln_plain_rate)
    }
}

/// For `n` with `q_{n+1} >= q_n log q_n`, sets `ε[l]` by
/// `C²q^{-2τ} = ε² q⁴ (log q)²` and evaluates the single-coordinate lower
/// bound at `k = q_n`, all in log form.
pub fn log_factor_sequence(
    kernel: &BoxcarKernel,
    class: &SmoothnessClass,
    count: usize,
    n_max: usize,
) -> Result<Vec<LogFactorPoint>> {
    if kernel.m() != 1 {
        return Err(Error::invalid("log-factor sequence needs a plain boxcar"));
    }
    let tau = class.tau();
    let r = rate_constants(class.sigma)?.r;
    let ln_c = libm::log(class.c);
    let ln_pa = libm::log(PI * kernel.a().to_f64());
    let conv = kernel.a().convergents_to(n_max + 1)?;
    let mut out = Vec::new();
    for n in 1..conv.len().saturating_sub(1) {
        if out.len() >= count {
            break;
        }
        let (q, q1) = (&conv[n].q, &conv[n + 1].q);
        let ln_q = ln_bigint(q);
        if ln_q < libm::log(3.0) || ln_bigint(q1) < ln_q + libm::log(ln_q) {
            continue;
        }
        let ln_eps = ln_c - (tau + 2.0) * ln_q - libm::log(ln_q);
        let d = kernel.a().distance_big(&BigUint::try_from(q.clone()).expect("positive"))?;
        // |r_q| = sin(π‖qa‖)/(π q a)
        let ln_r = libm::log(libm::sin(PI * d.value)) - ln_pa - ln_q;
        let ln_noise = 2.0 * (ln_eps - ln_r);
        let ln_bound = 2.0 * ln_c - 2.0 * tau * ln_q;
        let ln_single = ln_noise.min(ln_bound);
        let ln_plain_rate = 2.0 * (1.0 - r) * ln_c + 2.0 * r * ln_eps;
        let ln_benchmark = ln_plain_rate + 2.0 * r * libm::log(ln_c - ln_eps);
        out.push(LogFactorPoint {
            n,
            ln_q,
            ln_eps,
            ln_single,
            ln_benchmark,
            ln_plain_rate,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxcar::Homogeneous;
    use crate::diophantine::IrrationalNumber;

    #[test]
    fn fit_recovers_exact_power() {
        let eps = eps_decades(6, 24);
        let class = SmoothnessClass::hyper(1.0, 1.0).unwrap();
        let recs: Vec<SweepRecord> = eps
            .iter()
            .map(|&e| {
                let v = 3.0 * libm::pow(e, 0.7);
                SweepRecord::from_result(e, &class, &RiskResult::exact(v, 1, None))
            })
            .collect();
        let f = fit_rate(&recs).unwrap();
        assert!((f.slope - 0.7).abs() < 1e-12 && f.residual < 1e-12);
        assert_eq!(f.points, 17);
        assert!(matches!(fit_rate(&recs[..8]), Err(Error::InsufficientSweep(_))));
    }

    #[test]
    fn homogeneous_control_slope() {
        let class = SmoothnessClass::hyper(1.0, 1.0).unwrap();
        let h = Homogeneous::new(1.0, 1.0).unwrap();
        let recs = sweep(&h, &class, &eps_decades(6, 20), 1e-8).unwrap();
        let f = fit_rate(&recs).unwrap();
        assert!((f.slope - homogeneous_slope(1.0, 1.0)).abs() < 0.02, "{}", f.slope);
    }

    #[test]
    fn fast_approximation_sequence() {
        let a: IrrationalNumber = "cf:0;1,10,100,...".parse().unwrap();
        let k = BoxcarKernel::new(a, 1).unwrap();
        let class = SmoothnessClass::hyper(2.0, 1.0).unwrap();
        let pts = log_factor_sequence(&k, &class, 5, 12).unwrap();
        assert!(pts.len() >= 4);
        for p in &pts {
            assert!(p.ratio() > 0.01 && p.ratio() < 100.0, "{p:?}");
        }
        // the plain rate falls behind by a growing log factor
        assert!(pts.last().unwrap().plain_ratio() > pts[0].plain_ratio());
    }
}
