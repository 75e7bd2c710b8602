//! Sequence-model simulation `y_k = r_k θ_k + ε z_k`, linear threshold
//! estimators, worst-case signals and the rational-approximant
//! perturbation study.
//!
//! Normal draws come from ChaCha20 (`rand_chacha`), seeded with
//! `seed_from_u64(seed)`; repetition `rep` uses stream `rep`. A repetition
//! is therefore reproducible on its own, whatever order they run in.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigUint;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::boxcar::{BoxcarKernel, Spectrum};
use crate::error::{Error, Result};
use crate::risk::{
    ellipsoid_allocation, rp_hyperrectangle, ClassKind, SmoothnessClass, DEFAULT_RTOL,
};

/// Name recorded next to every seed.
pub const GENERATOR: &str = "chacha20/rand_chacha-0.9/stream=rep";

/// Monte Carlo defaults.
pub const DEFAULT_REPS: usize = 400;
pub const EARLY_STOP_RATIO: f64 = 0.02;
/// Early stopping is only looked at after this many repetitions, and then
/// every `CHECKPOINT` more.
pub const CHECKPOINT: usize = 50;
pub const MIN_REPS: usize = 100;

fn rng_for(seed: u64, rep: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(rep);
    rng
}

/// One draw of `(y_1, ..., y_K)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SequenceSample {
    /// `y[i]` observes frequency `k = i + 1`.
    pub y: Vec<f64>,
    pub kernel: String,
    pub eps: f64,
    pub seed: u64,
    pub rep: u64,
    pub k_max: u64,
}

/// Draws `y_k = r_k θ_k + ε z_k` for `k = 1..=k_max`; `θ` is zero-padded.
pub fn simulate<S: Spectrum + ?Sized>(
    kernel: &S,
    theta: &[f64],
    eps: f64,
    seed: u64,
    k_max: u64,
) -> Result<SequenceSample> {
    simulate_rep(kernel, theta, eps, seed, 0, k_max)
}

pub fn simulate_rep<S: Spectrum + ?Sized>(
    kernel: &S,
    theta: &[f64],
    eps: f64,
    seed: u64,
    rep: u64,
    k_max: u64,
) -> Result<SequenceSample> {
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(Error::invalid("epsilon must be nonnegative"));
    }
    let mut rng = rng_for(seed, rep);
    let mut y = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        let t = theta.get(k as usize - 1).copied().unwrap_or(0.0);
        let z: f64 = StandardNormal.sample(&mut rng);
        y.push(kernel.eigenvalue(k)? * t + eps * z);
    }
    Ok(SequenceSample {
        y,
        kernel: kernel.label(),
        eps,
        seed,
        rep,
        k_max,
    })
}

/// Linear rule `θ̂_k = c_k y_k` on `S`, zero elsewhere.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimatorSpec {
    pub c: Vec<f64>,
    pub in_set: Vec<bool>,
}

impl EstimatorSpec {
    /// `S = {k : ε_k <= τ_k}` with `c_k = 1/r_k` on `S`.
    pub fn threshold<S: Spectrum + ?Sized>(kernel: &S, tau: &[f64], eps: f64) -> Result<Self> {
        let mut c = Vec::with_capacity(tau.len());
        let mut in_set = Vec::with_capacity(tau.len());
        for (i, &t) in tau.iter().enumerate() {
            let k = i as u64 + 1;
            let r = kernel.eigenvalue(k)?;
            let keep = r != 0.0 && kernel.noise_level(k, eps)? <= t;
            c.push(if keep { 1.0 / r } else { 0.0 });
            in_set.push(keep);
        }
        Ok(EstimatorSpec { c, in_set })
    }

    /// The same set `S` with weights `1/r̂_k` from another spectrum.
    pub fn reweighted<S: Spectrum + ?Sized>(&self, kernel: &S) -> Result<Self> {
        let mut c = Vec::with_capacity(self.c.len());
        for (i, &keep) in self.in_set.iter().enumerate() {
            let r = kernel.eigenvalue(i as u64 + 1)?;
            if keep && r == 0.0 {
                return Err(Error::invalid(format!("r_{} vanishes on the active set", i + 1)));
            }
            c.push(if keep { 1.0 / r } else { 0.0 });
        }
        Ok(EstimatorSpec {
            c,
            in_set: self.in_set.clone(),
        })
    }

    pub fn zero(len: usize) -> Self {
        EstimatorSpec {
            c: alloc::vec![0.0; len],
            in_set: alloc::vec![false; len],
        }
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn active(&self) -> usize {
        self.in_set.iter().filter(|&&b| b).count()
    }
}

/// Everything a repetition needs, with `r_k` precomputed.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub r: Vec<f64>,
    pub theta: Vec<f64>,
    pub c: Vec<f64>,
    pub eps: f64,
}

impl Experiment {
    /// Frequencies run to the longer of `θ` and the estimator.
    pub fn new<S: Spectrum + ?Sized>(
        kernel: &S,
        spec: &EstimatorSpec,
        theta: &[f64],
        eps: f64,
    ) -> Result<Self> {
        if !(eps >= 0.0) || !eps.is_finite() {
            return Err(Error::invalid("epsilon must be nonnegative"));
        }
        let n = theta.len().max(spec.len());
        let r = (1..=n as u64).map(|k| kernel.eigenvalue(k)).collect::<Result<Vec<_>>>()?;
        let mut th = theta.to_vec();
        th.resize(n, 0.0);
        let mut c = spec.c.clone();
        c.resize(n, 0.0);
        Ok(Experiment { r, theta: th, c, eps })
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// `Σ [c_k²ε² + (1 − c_k r_k)²θ_k²]`; off `S` this is `θ_k²`.
    pub fn exact_risk(&self) -> f64 {
        let terms: Vec<f64> = (0..self.len())
            .map(|i| {
                let (c, r, t) = (self.c[i], self.r[i], self.theta[i]);
                let b = 1.0 - c * r;
                c * c * self.eps * self.eps + b * b * t * t
            })
            .collect();
        pairwise_sum(&terms)
    }

    /// `Σ (c_k y_k − θ_k)²` for one repetition.
    pub fn loss(&self, seed: u64, rep: u64) -> f64 {
        let mut rng = rng_for(seed, rep);
        let terms: Vec<f64> = (0..self.len())
            .map(|i| {
                let z: f64 = StandardNormal.sample(&mut rng);
                let y = self.r[i] * self.theta[i] + self.eps * z;
                let e = self.c[i] * y - self.theta[i];
                e * e
            })
            .collect();
        pairwise_sum(&terms)
    }
}

/// Exact risk `r(c, θ)`.
pub fn estimator_risk<S: Spectrum + ?Sized>(
    spec: &EstimatorSpec,
    kernel: &S,
    theta: &[f64],
    eps: f64,
) -> Result<f64> {
    Ok(Experiment::new(kernel, spec, theta, eps)?.exact_risk())
}

/// Summation by recursive halving; the tree depends only on the length.
pub fn pairwise_sum(x: &[f64]) -> f64 {
    if x.len() <= 8 {
        return x.iter().sum();
    }
    let (a, b) = x.split_at(x.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonteCarlo {
    pub mean: f64,
    pub stderr: f64,
    pub reps: usize,
}

impl MonteCarlo {
    /// `|mean − exact| <= k · stderr`.
    pub fn agrees(&self, exact: f64, k: f64) -> bool {
        (self.mean - exact).abs() <= k * self.stderr
    }
}

pub fn summarize(losses: &[f64]) -> MonteCarlo {
    let n = losses.len();
    let mean = pairwise_sum(losses) / n as f64;
    let dev: Vec<f64> = losses.iter().map(|l| (l - mean) * (l - mean)).collect();
    let var = if n > 1 { pairwise_sum(&dev) / (n - 1) as f64 } else { 0.0 };
    MonteCarlo {
        mean,
        stderr: libm::sqrt(var / n as f64),
        reps: n,
    }
}

/// Whether a run holding `losses` stops here: only at checkpoints, once
/// `stderr/mean < 0.02`.
pub fn should_stop(losses: &[f64]) -> bool {
    let n = losses.len();
    if n < MIN_REPS || (n - MIN_REPS) % CHECKPOINT != 0 {
        return false;
    }
    let s = summarize(losses);
    s.mean > 0.0 && s.stderr / s.mean < EARLY_STOP_RATIO
}

/// Serial Monte Carlo estimate of `r(c, θ)`, at most `reps` repetitions.
pub fn monte_carlo_risk<S: Spectrum + ?Sized>(
    spec: &EstimatorSpec,
    kernel: &S,
    theta: &[f64],
    eps: f64,
    reps: usize,
    seed: u64,
) -> Result<MonteCarlo> {
    let exp = Experiment::new(kernel, spec, theta, eps)?;
    monte_carlo_experiment(&exp, reps, seed)
}

pub fn monte_carlo_experiment(exp: &Experiment, reps: usize, seed: u64) -> Result<MonteCarlo> {
    if reps < 2 {
        return Err(Error::invalid("need at least two repetitions"));
    }
    let mut losses = Vec::with_capacity(reps);
    for rep in 0..reps {
        losses.push(exp.loss(seed, rep as u64));
        if should_stop(&losses) {
            break;
        }
    }
    Ok(summarize(&losses))
}

/// `Ck^{-τ}` for `k <= k_max`.
pub fn hyper_bounds(class: &SmoothnessClass, k_max: u64) -> Vec<f64> {
    (1..=k_max).map(|k| class.c * libm::pow(k as f64, -class.tau())).collect()
}

/// The signal attaining `R_P`: `θ_k = Ck^{-τ}` up to the truncation point
/// of `rp_hyperrectangle`, or `θ_k = √u_k` from the ellipsoid allocation.
pub fn worst_case_theta<S: Spectrum + ?Sized>(
    kernel: &S,
    class: &SmoothnessClass,
    eps: f64,
) -> Result<Vec<f64>> {
    match class.kind {
        ClassKind::Hyperrectangle => {
            let rp = rp_hyperrectangle(kernel, class, eps, DEFAULT_RTOL)?;
            Ok(hyper_bounds(class, rp.k_trunc))
        }
        ClassKind::Ellipsoid => {
            let alloc = ellipsoid_allocation(kernel, class, eps)?;
            let theta: Vec<f64> = alloc.u.iter().map(|&u| libm::sqrt(u)).collect();
            let used = ellipsoid_energy(class.sigma, &theta);
            let budget = class.c * class.c;
            if used > budget * (1.0 + 1e-12) {
                return Err(Error::assertion(format!(
                    "worst-case signal spends {used} of budget {budget}"
                )));
            }
            Ok(theta)
        }
        ClassKind::BlockEllipsoid => Err(Error::invalid(
            "no worst-case signal is built for the block relaxation",
        )),
    }
}

/// `Σ k^{2σ} θ_k²`.
pub fn ellipsoid_energy(sigma: f64, theta: &[f64]) -> f64 {
    let terms: Vec<f64> = theta
        .iter()
        .enumerate()
        .map(|(i, t)| libm::pow((i + 1) as f64, 2.0 * sigma) * t * t)
        .collect();
    pairwise_sum(&terms)
}

/// `Σ θ_k² ∧ ε_k²` at a given signal.
pub fn projection_risk_at<S: Spectrum + ?Sized>(kernel: &S, theta: &[f64], eps: f64) -> Result<f64> {
    let terms = theta
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let e = kernel.noise_level(i as u64 + 1, eps)?;
            Ok((t * t).min(e * e))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(pairwise_sum(&terms))
}

/// Result of swapping `a` for a convergent `â = p_m/q_m` in the estimator.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationReport {
    pub m: usize,
    pub r: usize,
    pub q_r: u64,
    pub q_m: u64,
    /// Active frequencies `S = {k <= q_r : ε_k <= τ_k}`.
    pub set: Vec<u64>,
    /// `δ_k = r_k/r̂_k − 1` on `S`.
    pub delta: Vec<f64>,
    pub delta_bar: f64,
    /// `(8/a) 2^{-(m−r)}`.
    pub chain_bound: f64,
    /// `sup_Θ |r(ĉ, θ) − r(c, θ)|`.
    pub risk_diff: f64,
    /// `3δ̄R_P + δ̄²Σ_S τ_k²`.
    pub bound: f64,
    pub r_p: f64,
}

impl PerturbationReport {
    pub fn holds(&self) -> bool {
        self.delta_bar <= self.chain_bound && self.risk_diff <= self.bound
    }
}

/// Hyperrectangle only. `r < m`; the active set is cut at `q_r`.
pub fn perturbation_study(
    kernel: &BoxcarKernel,
    m: usize,
    r: usize,
    class: &SmoothnessClass,
    eps: f64,
) -> Result<PerturbationReport> {
    if r >= m {
        return Err(Error::invalid("need r < m"));
    }
    let approx = kernel.rational_approximant(m)?;
    let conv = kernel.a().convergents_to(m)?;
    let to_u64 = |q: &num_bigint::BigInt| -> Result<u64> {
        u64::try_from(q.clone()).map_err(|_| Error::invalid("convergent denominator exceeds u64"))
    };
    let q_r = to_u64(&conv[r].q)?;
    let q_m = to_u64(&conv[m].q)?;
    let a = kernel.a().to_f64();
    // |â − a| = ‖q_m a‖/q_m, read from the certified distance
    let gap = kernel.a().distance_big(&BigUint::from(q_m))?.value / q_m as f64;
    let chain_bound = 8.0 / a * libm::pow(2.0, -((m - r) as f64));
    let mut rep = compare_kernels(kernel, &approx, q_r, class, eps, gap)?;
    if rep.delta_bar > chain_bound {
        return Err(Error::assertion(format!(
            "delta_bar {} exceeds (8/a)2^-(m-r) = {chain_bound}",
            rep.delta_bar
        )));
    }
    rep.m = m;
    rep.r = r;
    rep.q_m = q_m;
    rep.chain_bound = chain_bound;
    Ok(rep)
}

/// Both estimators share `S`; `gap = |â − a|` drives the termwise check
/// `|δ_k| <= (2 gap/a) k/‖kâ‖`.
pub fn compare_kernels(
    exact: &BoxcarKernel,
    approx: &BoxcarKernel,
    q_r: u64,
    class: &SmoothnessClass,
    eps: f64,
    gap: f64,
) -> Result<PerturbationReport> {
    if class.kind != ClassKind::Hyperrectangle {
        return Err(Error::invalid("perturbation study is set on hyperrectangles"));
    }
    if exact.m() != 1 || approx.m() != 1 {
        return Err(Error::invalid("perturbation study needs plain boxcars"));
    }
    let tau = hyper_bounds(class, q_r);
    let a = exact.a().to_f64();
    let mut set = Vec::new();
    let mut delta = Vec::new();
    let mut shift = Vec::new();
    let mut quad = Vec::new();
    let mut tau_sq = Vec::new();
    let mut broken = None;
    for (i, &t) in tau.iter().enumerate() {
        let k = i as u64 + 1;
        let ek = exact.noise_level(k, eps)?;
        if ek > t {
            continue;
        }
        let r = exact.eigenvalue(k)?;
        let rh = approx.eigenvalue(k)?;
        if rh == 0.0 {
            return Err(Error::hypothesis(format!("r̂_{k} vanishes: k is a multiple of q_m")));
        }
        let d = r / rh - 1.0;
        let dk = approx.a().distance(k)?;
        let termwise = 2.0 * gap / a * k as f64 / dk.value;
        if d.abs() > termwise * (1.0 + 1e-9) + 1e-15 && broken.is_none() {
            broken = Some((k, d.abs(), termwise));
        }
        set.push(k);
        delta.push(d);
        shift.push((2.0 * d + d * d) * ek * ek);
        quad.push(d * d * t * t);
        tau_sq.push(t * t);
    }
    let delta_bar = delta.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    if delta_bar > 1.0 {
        return Err(Error::ApproximantTooCoarse { delta_bar });
    }
    if let Some((k, d, t)) = broken {
        return Err(Error::assertion(format!(
            "|delta_{k}| = {d} exceeds (2|â-a|/a) k/‖kâ‖ = {t}"
        )));
    }
    // affine and increasing in each θ_k², so the sup sits at a vertex
    let base = pairwise_sum(&shift);
    let top = base + pairwise_sum(&quad);
    let risk_diff = base.abs().max(top.abs());
    let r_p = rp_hyperrectangle(exact, class, eps, DEFAULT_RTOL)?.hi;
    let bound = 3.0 * delta_bar * r_p + delta_bar * delta_bar * pairwise_sum(&tau_sq);
    if risk_diff > bound * (1.0 + 1e-12) {
        return Err(Error::assertion(format!(
            "risk difference {risk_diff} exceeds 3δ̄R_P + δ̄²Στ² = {bound}"
        )));
    }
    Ok(PerturbationReport {
        m: 0,
        r: 0,
        q_r,
        q_m: 0,
        set,
        delta,
        delta_bar,
        chain_bound: f64::INFINITY,
        risk_diff,
        bound,
        r_p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxcar::Homogeneous;
    use crate::diophantine::IrrationalNumber;

    #[test]
    fn noiseless_and_deterministic() {
        let g = BoxcarKernel::golden();
        let theta = [1.0, 0.5, 0.25];
        let s = simulate(&g, &theta, 0.0, 7, 5).unwrap();
        for k in 1..=3u64 {
            assert_eq!(s.y[k as usize - 1], g.eigenvalue(k).unwrap() * theta[k as usize - 1]);
        }
        assert_eq!(s.y[4], 0.0);
        let a = simulate(&g, &theta, 0.1, 7, 50).unwrap();
        let b = simulate(&g, &theta, 0.1, 7, 50).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.y, simulate(&g, &theta, 0.1, 8, 50).unwrap().y);
    }

    #[test]
    fn pure_noise_is_standard_normal() {
        let n = 4000;
        let s = simulate(&Homogeneous::new(1.0, 1.0).unwrap(), &[], 0.5, 1, n).unwrap();
        let z: Vec<f64> = s.y.iter().map(|y| y / 0.5).collect();
        let mean = z.iter().sum::<f64>() / n as f64;
        let var = z.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
        let tol = 4.0 / libm::sqrt(n as f64);
        assert!(mean.abs() < tol && (var - 1.0).abs() < 4.0 * tol, "{mean} {var}");
    }

    #[test]
    fn zero_and_inverse_estimators() {
        let g = BoxcarKernel::golden();
        let theta = [0.3, -0.2, 0.1, 0.05];
        let z = estimator_risk(&EstimatorSpec::zero(4), &g, &theta, 0.1).unwrap();
        assert!((z - theta.iter().map(|t| t * t).sum::<f64>()).abs() < 1e-15);
        let tau = [1.0, 1.0, 0.0, 0.0];
        let spec = EstimatorSpec::threshold(&g, &tau, 0.1).unwrap();
        assert_eq!(spec.active(), 2);
        let r = estimator_risk(&spec, &g, &theta, 0.1).unwrap();
        let want = g.noise_level(1, 0.1).unwrap().powi(2)
            + g.noise_level(2, 0.1).unwrap().powi(2)
            + 0.1f64.powi(2)
            + 0.05f64.powi(2);
        assert!((r - want).abs() < 1e-14);
    }

    #[test]
    fn monte_carlo_matches_exact() {
        let g = BoxcarKernel::golden();
        let class = SmoothnessClass::hyper(1.0, 1.0).unwrap();
        let eps = 1e-3;
        let theta = worst_case_theta(&g, &class, eps).unwrap();
        let spec = EstimatorSpec::threshold(&g, &hyper_bounds(&class, theta.len() as u64), eps).unwrap();
        let exact = estimator_risk(&spec, &g, &theta, eps).unwrap();
        let mc = monte_carlo_risk(&spec, &g, &theta, eps, 400, 11).unwrap();
        assert!(mc.agrees(exact, 4.0), "{mc:?} vs {exact}");
        let again = monte_carlo_risk(&spec, &g, &theta, eps, 400, 11).unwrap();
        assert_eq!(mc, again);
    }

    #[test]
    fn worst_case_signals() {
        let g = BoxcarKernel::golden();
        let h = SmoothnessClass::hyper(1.5, 1.0).unwrap();
        let th = worst_case_theta(&g, &h, 1e-4).unwrap();
        assert_eq!(th[2], 1.0 / 9.0);
        let e = SmoothnessClass::ellipsoid(1.0, 1.0).unwrap();
        let th = worst_case_theta(&g, &e, 1e-4).unwrap();
        assert!((ellipsoid_energy(1.0, &th) - 1.0).abs() < 1e-12);
        let rp = crate::risk::rp_ellipsoid(&g, &e, 1e-4).unwrap().value;
        let at = projection_risk_at(&g, &th, 1e-4).unwrap();
        assert!((at - rp).abs() <= 1e-12 * rp);
    }

    #[test]
    fn perturbation_decays() {
        let g = BoxcarKernel::golden();
        let class = SmoothnessClass::hyper(1.0, 1.0).unwrap();
        let mut last = f64::INFINITY;
        for m in [8, 10, 12] {
            let rep = perturbation_study(&g, m, 6, &class, 1e-3).unwrap();
            assert!(rep.holds() && !rep.set.is_empty());
            assert!(rep.delta_bar <= last / 4.0);
            last = rep.delta_bar;
        }
    }

    #[test]
    fn self_approximation_is_exact() {
        let a = IrrationalNumber::rational(&5.into(), &13.into()).unwrap();
        let k = BoxcarKernel::new(a, 1).unwrap();
        let class = SmoothnessClass::hyper(1.0, 1.0).unwrap();
        let rep = compare_kernels(&k, &k, 8, &class, 1e-3, 0.0).unwrap();
        assert_eq!((rep.delta_bar, rep.risk_diff), (0.0, 0.0));
    }

    #[test]
    fn coarse_approximant_is_rejected() {
        let g = BoxcarKernel::golden();
        let class = SmoothnessClass::hyper(1.0, 1.0).unwrap();
        let rough = BoxcarKernel::new(IrrationalNumber::rational(&3.into(), &10.into()).unwrap(), 1).unwrap();
        let gap = (g.a().to_f64() - 0.3).abs();
        let err = compare_kernels(&g, &rough, 5, &class, 1e-3, gap);
        assert!(matches!(err, Err(Error::ApproximantTooCoarse { .. })), "{err:?}");
        // golden convergents are already fine from the start
        for m in 2..8 {
            assert!(perturbation_study(&g, m, m - 1, &class, 1e-3).unwrap().delta_bar < 1.0);
        }
    }

    #[test]
    fn approximant_shares_low_frequencies() {
        let g = BoxcarKernel::golden();
        for m in [4usize, 8, 12] {
            let am = g.rational_approximant(m).unwrap();
            let ca = g.a().convergents_to(m).unwrap();
            let cm = am.a().convergents_to(m).unwrap();
            // the canonical expansion of p_m/q_m merges a trailing 1
            assert_eq!(ca[..m - 1], cm[..m - 1]);
            let last = cm.last().unwrap();
            assert_eq!((&last.p, &last.q), (&ca[m].p, &ca[m].q));
            let q_m = ca[m].q.to_u64_digits().1[0];
            for k in 1..q_m {
                let (d, dm) = (g.a().distance(k).unwrap().value, am.a().distance(k).unwrap().value);
                assert!(dm >= 1.0 / (2.0 * q_m as f64) && (d - dm).abs() <= k as f64 / (q_m * q_m) as f64);
            }
        }
    }

    #[test]
    fn pairwise_is_exact_on_integers() {
        let x: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&x), 500500.0);
    }
}
