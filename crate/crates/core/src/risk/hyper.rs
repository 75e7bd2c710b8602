//! Hyperrectangle risks, summed term by term up to a certified truncation
//! point and closed with an integral tail bracket.

use alloc::format;
use alloc::vec::Vec;

use super::zones::{zone_boundaries, Zone, Zones};
use super::{ClassKind, RiskResult, SmoothnessClass, Sum, ZoneTally};
use crate::boxcar::Spectrum;
use crate::equidist::BlockGrid;
use crate::error::{Error, Result};

/// Relative width allowed for the truncation tail bracket.
pub const DEFAULT_RTOL: f64 = 1e-6;
/// Minimum number of terms summed exactly.
pub const DEFAULT_K_FLOOR: u64 = 10_000;

const MAX_TERMS: u64 = 1 << 31;

fn check_inputs(class: &SmoothnessClass, eps: f64, rtol: f64) -> Result<f64> {
    if class.kind != ClassKind::Hyperrectangle {
        return Err(Error::invalid(format!("expected a hyperrectangle, got {}", class.kind)));
    }
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::invalid("epsilon must be positive"));
    }
    if !(rtol > 0.0 && rtol < 1.0) {
        return Err(Error::invalid("rtol must lie in (0, 1)"));
    }
    let tau = class.tau();
    if tau <= 0.5 {
        return Err(Error::NonSummableTail { tau });
    }
    Ok(tau)
}

/// `C² k^{-2τ}`.
fn bound_sq(class: &SmoothnessClass, k: u64) -> f64 {
    let t = class.c * libm::pow(k as f64, -class.tau());
    t * t
}

/// `ε_k²`, infinite at a zero eigenvalue.
fn noise_sq<S: Spectrum + ?Sized>(kernel: &S, k: u64, eps: f64) -> Result<f64> {
    let r = kernel.abs_eigenvalue(k)?;
    Ok(if r == 0.0 { f64::INFINITY } else { (eps / r) * (eps / r) })
}

/// `m_k(ε) = C²k^{-2τ} ∧ ε_k²`.
pub fn m_k<S: Spectrum + ?Sized>(kernel: &S, class: &SmoothnessClass, eps: f64, k: u64) -> Result<f64> {
    Ok(bound_sq(class, k).min(noise_sq(kernel, k, eps)?))
}

/// `ρ(k) = (C k^{-τ} b(k) / ε)²`, a nonincreasing bound on `C²k^{-2τ}/ε_j²`
/// for `j >= k`.
fn rho<S: Spectrum + ?Sized>(kernel: &S, class: &SmoothnessClass, eps: f64, k: u64) -> f64 {
    let v = class.c * libm::pow(k as f64, -class.tau()) * kernel.decay_bound(k) / eps;
    v * v
}

/// Smallest `K` with `ρ(k) <= 1` for every `k >= K`: from there on every
/// term of `R_P` is `C²k^{-2τ}`.
fn bias_cutoff<S: Spectrum + ?Sized>(kernel: &S, class: &SmoothnessClass, eps: f64) -> Result<u64> {
    let ok = |k: u64| rho(kernel, class, eps, k) <= 1.0;
    let mut hi = 1u64;
    while !ok(hi) {
        hi = hi.checked_mul(2).filter(|&h| h <= MAX_TERMS).ok_or_else(|| {
            Error::invalid(format!("truncation would need more than {MAX_TERMS} terms"))
        })?;
    }
    let mut lo = hi / 2;
    if lo == 0 {
        return Ok(1);
    }
    // invariant: !ok(lo), ok(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Grid and zone borders for a plain boxcar, `None` for other spectra.
fn zones_for<S: Spectrum + ?Sized>(kernel: &S, class: &SmoothnessClass, eps: f64) -> Result<Option<Zones>> {
    let Some(a) = kernel.half_width() else {
        return Ok(None);
    };
    let x = libm::pow(class.c / eps, 1.0 / (1.0 + class.tau()));
    let k_max = (libm::ceil(2.0 * x) as u64).saturating_add(2);
    let grid = BlockGrid::build(a, k_max)?;
    zone_boundaries(class, eps, &grid).map(Some)
}

struct Accum {
    total: Sum,
    zones: [Sum; 3],
}

fn eval<S: Spectrum + ?Sized>(
    kernel: &S,
    class: &SmoothnessClass,
    eps: f64,
    rtol: f64,
    linear: bool,
) -> Result<RiskResult> {
    let tau = check_inputs(class, eps, rtol)?;
    let k_bias = bias_cutoff(kernel, class, eps)?;
    let zones = zones_for(kernel, class, eps)?;
    let k1 = zones.map_or(0, |z| z.k1);
    let mut k_trunc = k_bias.max(k1).max(DEFAULT_K_FLOOR);
    let mut acc = Accum {
        total: Sum::default(),
        zones: [Sum::default(); 3],
    };
    let c2 = class.c * class.c;
    let mut done = 0u64;
    loop {
        for k in done + 1..=k_trunc {
            let t2 = bound_sq(class, k);
            let term = if k >= k_bias && !linear {
                t2
            } else {
                let e2 = noise_sq(kernel, k, eps)?;
                if linear {
                    if e2.is_infinite() {
                        t2
                    } else {
                        e2 * t2 / (e2 + t2)
                    }
                } else {
                    t2.min(e2)
                }
            };
            acc.total.add(term);
            if let Some(z) = &zones {
                acc.zones[zone_index(z.zone_of(k))].add(term);
            }
        }
        done = k_trunc;
        let partial = acc.total.get();
        let kf = k_trunc as f64;
        let scale = c2 / (2.0 * tau - 1.0);
        let mut tail_lo = scale * libm::pow(kf + 1.0, 1.0 - 2.0 * tau);
        let tail_hi = scale * libm::pow(kf, 1.0 - 2.0 * tau);
        if linear {
            tail_lo /= 1.0 + rho(kernel, class, eps, k_trunc + 1);
        }
        if tail_hi - tail_lo <= rtol * partial {
            let tail = 0.5 * (tail_lo + tail_hi);
            let value = partial + tail;
            let zones_out = zones.map(|_| ZoneTally {
                variance: acc.zones[0].get(),
                mixed: acc.zones[1].get(),
                bias: acc.zones[2].get() + tail,
            });
            return Ok(RiskResult {
                value,
                lo: partial * (1.0 - 1e-12) + tail_lo,
                hi: partial * (1.0 + 1e-12) + tail_hi,
                k_trunc,
                k0: zones.map(|z| z.k0),
                k1: zones.map(|z| z.k1),
                zones: zones_out,
                split: None,
            });
        }
        k_trunc = k_trunc
            .checked_mul(2)
            .filter(|&k| k <= MAX_TERMS)
            .ok_or_else(|| Error::invalid("tail bracket does not close within the term budget"))?;
    }
}

fn zone_index(z: Zone) -> usize {
    match z {
        Zone::Variance => 0,
        Zone::Mixed => 1,
        Zone::Bias => 2,
    }
}

/// `R_P = Σ_k C²k^{-2τ} ∧ ε_k²` over `k >= 1`.
pub fn rp_hyperrectangle<S: Spectrum + ?Sized>(
    kernel: &S,
    class: &SmoothnessClass,
    eps: f64,
    rtol: f64,
) -> Result<RiskResult> {
    eval(kernel, class, eps, rtol, false)
}

/// `R_L = Σ_k ε_k²τ_k²/(ε_k² + τ_k²)`, checked against `R_P/2 <= R_L <= R_P`.
pub fn rl_hyperrectangle<S: Spectrum + ?Sized>(
    kernel: &S,
    class: &SmoothnessClass,
    eps: f64,
    rtol: f64,
) -> Result<RiskResult> {
    let rl = eval(kernel, class, eps, rtol, true)?;
    let rp = eval(kernel, class, eps, rtol, false)?;
    if !(0.5 * rp.lo <= rl.hi && rl.lo <= rp.hi) {
        return Err(Error::assertion(format!(
            "linear bracket fails: R_P = {}, R_L = {}",
            rp.value, rl.value
        )));
    }
    Ok(rl)
}

/// `sup_k C²k^{-2τ} ∧ ε_k²` over a dense low range, the convergent
/// denominators and the bias cutoff. Returns the value and its maximiser.
pub fn lower_bound_single_coordinate<S: Spectrum + ?Sized>(
    kernel: &S,
    class: &SmoothnessClass,
    eps: f64,
) -> Result<(f64, u64)> {
    check_inputs(class, eps, 0.5)?;
    let k_bias = bias_cutoff(kernel, class, eps)?;
    let mut best = (0.0f64, 1u64);
    let mut consider = |k: u64| -> Result<()> {
        let v = m_k(kernel, class, eps, k)?;
        if v > best.0 {
            best = (v, k);
        }
        Ok(())
    };
    for k in 1..=k_bias.min(DEFAULT_K_FLOOR) {
        consider(k)?;
    }
    if let Some(a) = kernel.half_width() {
        for c in a.convergents() {
            let c = c?;
            match num_traits::ToPrimitive::to_u64(&c.q) {
                Some(q) if q <= k_bias => consider(q.max(1))?,
                _ => break,
            }
        }
    }
    consider(k_bias)?;
    Ok(best)
}

/// One row of the zone illustration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fig2Row {
    pub k: u64,
    pub eps_k_sq: f64,
    pub c2k_pow: f64,
    pub m_k: f64,
    pub zone: Zone,
}

/// Per-frequency trace `(ε_k², C²k^{-2τ}, m_k, zone)` for `1 <= k <= k_max`.
pub fn figure2_rows<S: Spectrum + ?Sized>(
    kernel: &S,
    class: &SmoothnessClass,
    eps: f64,
    k_max: u64,
) -> Result<(Zones, Vec<Fig2Row>)> {
    check_inputs(class, eps, 0.5)?;
    let zones = zones_for(kernel, class, eps)?
        .ok_or_else(|| Error::invalid("zone trace needs a plain boxcar kernel"))?;
    let rows = (1..=k_max)
        .map(|k| {
            let e2 = noise_sq(kernel, k, eps)?;
            let t2 = bound_sq(class, k);
            Ok(Fig2Row {
                k,
                eps_k_sq: e2,
                c2k_pow: t2,
                m_k: t2.min(e2),
                zone: zones.zone_of(k),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((zones, rows))
}
