//! Ellipsoid risks: `max Σ min(u_k, ε_k²)` subject to `Σ d_k u_k <= C²`.
//!
//! With `d_k` increasing in `k` this is a fractional knapsack, solved
//! exactly by filling coordinates in ascending order of cost.

use alloc::format;
use alloc::vec::Vec;

use super::{ClassKind, RiskResult, SmoothnessClass, Sum};
use crate::boxcar::Spectrum;
use crate::equidist::BlockGrid;
use crate::error::{Error, Result};

/// Largest dimension accepted by the subset-enumeration oracle.
pub const BRUTE_FORCE_CAP: usize = 12;

const MAX_TERMS: u64 = 1 << 31;

/// Greedy fill: `u` per coordinate, the total value and the index of the
/// partially filled coordinate (if any).
#[derive(Clone, Debug, PartialEq)]
pub struct Allocation {
    pub u: Vec<f64>,
    pub value: f64,
    pub split: Option<usize>,
}

/// Exact optimum for explicit caps `c_i` (may be infinite) and positive
/// unit costs `d_i`.
pub fn greedy_knapsack(caps: &[f64], costs: &[f64], budget: f64) -> Result<Allocation> {
    if caps.len() != costs.len() {
        return Err(Error::invalid("caps and costs differ in length"));
    }
    if costs.iter().any(|&d| !(d > 0.0)) || caps.iter().any(|&c| !(c >= 0.0)) || !(budget >= 0.0) {
        return Err(Error::invalid("knapsack needs positive costs and nonnegative caps"));
    }
    let mut order: Vec<usize> = (0..caps.len()).collect();
    order.sort_by(|&i, &j| costs[i].total_cmp(&costs[j]));
    let mut u = alloc::vec![0.0; caps.len()];
    let mut rem = budget;
    let mut value = Sum::default();
    let mut split = None;
    for i in order {
        let full = costs[i] * caps[i];
        if full <= rem {
            u[i] = caps[i];
            rem -= full;
            value.add(caps[i]);
        } else {
            u[i] = rem / costs[i];
            value.add(u[i]);
            split = Some(i);
            break;
        }
    }
    Ok(Allocation {
        u,
        value: value.get(),
        split,
    })
}

/// Oracle: enumerate every capped subset, spend what remains on the best
/// single uncapped coordinate.
pub fn rp_ellipsoid_bruteforce(eps_sq: &[f64], d: &[f64], budget: f64) -> Result<f64> {
    let n = eps_sq.len();
    if n > BRUTE_FORCE_CAP {
        return Err(Error::DimensionCap {
            dim: n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    if d.len() != n {
        return Err(Error::invalid("caps and costs differ in length"));
    }
    let mut best = 0.0f64;
    for mask in 0u32..(1 << n) {
        let mut cost = 0.0;
        let mut val = 0.0;
        for i in 0..n {
            if mask & (1 << i) != 0 {
                cost += d[i] * eps_sq[i];
                val += eps_sq[i];
            }
        }
        if cost > budget {
            continue;
        }
        let rem = budget - cost;
        let extra = (0..n)
            .filter(|&i| mask & (1 << i) == 0)
            .map(|i| eps_sq[i].min(rem / d[i]))
            .fold(0.0, f64::max);
        best = best.max(val + extra);
    }
    Ok(best)
}

fn check_inputs(class: &SmoothnessClass, kind: ClassKind, eps: f64) -> Result<()> {
    if class.kind != kind {
        return Err(Error::invalid(format!("expected class {kind}, got {}", class.kind)));
    }
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::invalid("epsilon must be positive"));
    }
    Ok(())
}

fn noise_sq<S: Spectrum + ?Sized>(kernel: &S, k: u64, eps: f64) -> Result<f64> {
    let r = kernel.abs_eigenvalue(k)?;
    Ok(if r == 0.0 { f64::INFINITY } else { (eps / r) * (eps / r) })
}

/// Greedy allocation `u_k = θ_k²` for `k = 1, 2, ...` up to the partial
/// coordinate.
pub fn ellipsoid_allocation<S: Spectrum + ?Sized>(
    kernel: &S,
    class: &SmoothnessClass,
    eps: f64,
) -> Result<Allocation> {
    check_inputs(class, ClassKind::Ellipsoid, eps)?;
    let mut rem = class.c * class.c;
    let mut u = Vec::new();
    let mut value = Sum::default();
    for k in 1..=MAX_TERMS {
        let d = libm::pow(k as f64, 2.0 * class.sigma);
        let cap = noise_sq(kernel, k, eps)?;
        let full = d * cap;
        if full <= rem {
            rem -= full;
            u.push(cap);
            value.add(cap);
        } else {
            let part = rem / d;
            u.push(part);
            value.add(part);
            return Ok(Allocation {
                u,
                value: value.get(),
                split: Some(k as usize - 1),
            });
        }
    }
    Err(Error::invalid("ellipsoid budget not exhausted within the term budget"))
}

/// `R_P` over `Σ k^{2σ}θ_k² <= C²`; exact, no truncation tail.
pub fn rp_ellipsoid<S: Spectrum + ?Sized>(
    kernel: &S,
    class: &SmoothnessClass,
    eps: f64,
) -> Result<RiskResult> {
    let alloc = ellipsoid_allocation(kernel, class, eps)?;
    let k = alloc.u.len() as u64;
    Ok(RiskResult::exact(alloc.value, k, Some(k)))
}

/// Block relaxation: per block value `min(t², Σ_{B_ν} ε_k²)` at cost
/// `N_ν^{2σ} t²`. With `grid = None` a grid long enough is built from the
/// kernel's half-width. Checks `rp_ellipsoid <= result`.
pub fn rp_block_ellipsoid<S: Spectrum + ?Sized>(
    kernel: &S,
    class: &SmoothnessClass,
    eps: f64,
    grid: Option<&BlockGrid>,
) -> Result<RiskResult> {
    if !(eps > 0.0) {
        return Err(Error::invalid("epsilon must be positive"));
    }
    let ell = SmoothnessClass {
        kind: ClassKind::Ellipsoid,
        ..*class
    };
    let exact = rp_ellipsoid(kernel, &ell, eps)?;
    let owned;
    let grid = match grid {
        Some(g) => g,
        None => {
            let a = kernel
                .half_width()
                .ok_or_else(|| Error::invalid("block ellipsoid needs a plain boxcar kernel"))?;
            let mut k_max = exact.k_trunc.max(16) * 4;
            loop {
                let g = BlockGrid::build(a, k_max)?;
                if block_fill(kernel, class, eps, &g)?.is_some() {
                    owned = g;
                    break &owned;
                }
                k_max = k_max.checked_mul(4).filter(|&k| k <= MAX_TERMS).ok_or_else(|| {
                    Error::invalid("block ellipsoid budget not exhausted within the term budget")
                })?;
            }
        }
    };
    let (value, split) = block_fill(kernel, class, eps, grid)?.ok_or(Error::GridTooShort {
        end: grid.nodes()[grid.len()].start,
        needed: grid.nodes()[grid.len()].start + 1,
    })?;
    if exact.value > value * (1.0 + 1e-12) {
        return Err(Error::assertion(format!(
            "ellipsoid risk {} exceeds its block relaxation {value}",
            exact.value
        )));
    }
    let last = grid.block(split).1 - 1;
    Ok(RiskResult::exact(value, last, Some(grid.nodes()[split].start)))
}

/// Outer knapsack over blocks; `None` when the grid ends first.
fn block_fill<S: Spectrum + ?Sized>(
    kernel: &S,
    class: &SmoothnessClass,
    eps: f64,
    grid: &BlockGrid,
) -> Result<Option<(f64, usize)>> {
    let mut rem = class.c * class.c;
    let mut value = Sum::default();
    for nu in 0..grid.len() {
        let (s, e) = grid.block(nu);
        let mut cap = Sum::default();
        for k in s..e {
            cap.add(noise_sq(kernel, k, eps)?);
        }
        let cap = cap.get();
        let d = libm::pow(s as f64, 2.0 * class.sigma);
        if d * cap <= rem {
            rem -= d * cap;
            value.add(cap);
        } else {
            value.add(rem / d);
            return Ok(Some((value.get(), nu)));
        }
    }
    Ok(None)
}

/// `Σ_{k∈C_ν} ε_k² / (ε² N_ν² q_{n(ν)+1}²)` for one covering block.
pub fn cover_noise_ratio<S: Spectrum + ?Sized>(kernel: &S, grid: &BlockGrid, eps: f64, nu: usize) -> Result<f64> {
    let (s, e) = grid.cover(nu);
    let nd = grid.nodes()[nu];
    let mut sum = Sum::default();
    for k in s..e {
        sum.add(noise_sq(kernel, k, eps)?);
    }
    let scale = eps * eps * (s as f64) * (s as f64) * nd.q_next * nd.q_next;
    Ok(sum.get() / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxcar::BoxcarKernel;

    #[test]
    fn small_instance() {
        let a = greedy_knapsack(&[1.0, 4.0, 9.0], &[1.0, 4.0, 9.0], 5.0).unwrap();
        assert_eq!(a.value, 2.0);
        assert_eq!(a.u, alloc::vec![1.0, 1.0, 0.0]);
        assert_eq!(rp_ellipsoid_bruteforce(&[1.0, 4.0, 9.0], &[1.0, 4.0, 9.0], 5.0).unwrap(), 2.0);
        assert_eq!(rp_ellipsoid_bruteforce(&[3.0], &[2.0], 7.0).unwrap(), 3.0);
        assert!(matches!(
            rp_ellipsoid_bruteforce(&[1.0; 13], &[1.0; 13], 1.0),
            Err(Error::DimensionCap { .. })
        ));
    }

    #[test]
    fn slack_budget_takes_every_cap() {
        let a = greedy_knapsack(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0], 100.0).unwrap();
        assert_eq!((a.value, a.split), (6.0, None));
    }

    #[test]
    fn infinite_cap_absorbs_budget() {
        let a = greedy_knapsack(&[1.0, f64::INFINITY, 5.0], &[1.0, 2.0, 3.0], 9.0).unwrap();
        assert_eq!(a.value, 1.0 + 4.0);
        assert_eq!(a.split, Some(1));
    }

    #[test]
    fn block_relaxation_dominates() {
        let g = BoxcarKernel::golden();
        let class = SmoothnessClass::ellipsoid(1.0, 1.0).unwrap();
        for eps in [1e-3, 1e-5, 1e-7] {
            let e = rp_ellipsoid(&g, &class, eps).unwrap();
            let b = rp_block_ellipsoid(&g, &class, eps, None).unwrap();
            assert!(e.value <= b.value);
            let alloc = ellipsoid_allocation(&g, &class, eps).unwrap();
            let used: f64 = alloc
                .u
                .iter()
                .enumerate()
                .map(|(i, u)| ((i + 1) as f64).powi(2) * u)
                .sum();
            assert!((used - 1.0).abs() < 1e-12);
        }
    }
}
