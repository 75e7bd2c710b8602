//! `R_P` over hyperrectangles and ellipsoids, the linear-minimax bracket,
//! zone decomposition, rate constants and rate fitting.

mod ellipsoid;
mod fit;
mod hyper;
mod zones;

use alloc::format;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

pub use ellipsoid::{
    ellipsoid_allocation, greedy_knapsack, rp_block_ellipsoid, rp_ellipsoid, rp_ellipsoid_bruteforce,
    cover_noise_ratio, Allocation, BRUTE_FORCE_CAP,
};
pub use fit::{
    check_monotone, eps_decades, fit_rate, homogeneous_slope, log_factor_sequence, risk_at, sweep, Fit, LogFactorPoint,
    SweepRecord,
};
pub use hyper::{
    figure2_rows, lower_bound_single_coordinate, m_k, rl_hyperrectangle, rp_hyperrectangle, Fig2Row,
    DEFAULT_K_FLOOR, DEFAULT_RTOL,
};
pub use zones::{classify_block, zone_boundaries, Zone, Zones};

/// Which smoothness body the risk is taken over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassKind {
    /// `|θ_k| <= C k^{-σ-1/2}`.
    Hyperrectangle,
    /// `Σ k^{2σ} θ_k² <= C²`.
    Ellipsoid,
    /// `Σ_ν N_ν^{2σ} Σ_{k∈B_ν} θ_k² <= C²` over the convergent grid.
    BlockEllipsoid,
}

impl ClassKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassKind::Hyperrectangle => "hyper",
            ClassKind::Ellipsoid => "ellipsoid",
            ClassKind::BlockEllipsoid => "block",
        }
    }
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hyper" | "hyperrectangle" => Ok(ClassKind::Hyperrectangle),
            "ellipsoid" => Ok(ClassKind::Ellipsoid),
            "block" | "block-ellipsoid" => Ok(ClassKind::BlockEllipsoid),
            other => Err(Error::invalid(format!("unknown class `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmoothnessClass {
    pub kind: ClassKind,
    pub sigma: f64,
    pub c: f64,
}

impl SmoothnessClass {
    pub fn new(kind: ClassKind, sigma: f64, c: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::invalid("sigma must be positive"));
        }
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::invalid("C must be positive"));
        }
        Ok(SmoothnessClass { kind, sigma, c })
    }

    pub fn hyper(sigma: f64, c: f64) -> Result<Self> {
        Self::new(ClassKind::Hyperrectangle, sigma, c)
    }

    pub fn ellipsoid(sigma: f64, c: f64) -> Result<Self> {
        Self::new(ClassKind::Ellipsoid, sigma, c)
    }

    /// `τ = σ + 1/2`, the hyperrectangle decay exponent.
    pub fn tau(&self) -> f64 {
        self.sigma + 0.5
    }
}

/// Contributions of the variance, mixed and bias zones.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ZoneTally {
    pub variance: f64,
    pub mixed: f64,
    pub bias: f64,
}

impl ZoneTally {
    pub fn total(&self) -> f64 {
        self.variance + self.mixed + self.bias
    }
}

/// A risk value with its truncation bracket.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RiskResult {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    /// Last frequency summed term by term.
    pub k_trunc: u64,
    pub k0: Option<u64>,
    pub k1: Option<u64>,
    pub zones: Option<ZoneTally>,
    /// Ellipsoids: the coordinate (or block start) holding the partial fill.
    pub split: Option<u64>,
}

impl RiskResult {
    fn exact(value: f64, k_trunc: u64, split: Option<u64>) -> Self {
        let slack = value * 1e-13;
        RiskResult {
            value,
            lo: value - slack,
            hi: value + slack,
            k_trunc,
            k0: None,
            k1: None,
            zones: None,
            split,
        }
    }
}

/// `r = (σ+1/2)/(σ+5/2)`, `r̄ = σ/(σ+3/2)`, `r̃ = σ/(σ+2)` and the
/// degrees of ill-posedness.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateConstants {
    pub r: f64,
    pub r_bar: f64,
    pub r_tilde: f64,
    pub dip_hyper: f64,
    pub dip_ellipsoid: f64,
}

pub fn rate_constants(sigma: f64) -> Result<RateConstants> {
    if !(sigma > 0.0) {
        return Err(Error::invalid("sigma must be positive"));
    }
    Ok(RateConstants {
        r: (sigma + 0.5) / (sigma + 2.5),
        r_bar: sigma / (sigma + 1.5),
        r_tilde: sigma / (sigma + 2.0),
        dip_hyper: dip(ClassKind::Hyperrectangle, sigma)?,
        dip_ellipsoid: dip(ClassKind::Ellipsoid, sigma)?,
    })
}

/// Hyperrectangle rate exponent of `ε²`: `2 min(r, r̄)`.
pub fn hyper_exponent(sigma: f64) -> f64 {
    let rc = rate_constants(sigma).expect("positive sigma");
    2.0 * rc.r.min(rc.r_bar)
}

/// Degree of ill-posedness of the boxcar over the given class.
pub fn dip(kind: ClassKind, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::invalid("sigma must be positive"));
    }
    Ok(match kind {
        ClassKind::Hyperrectangle if sigma <= 1.5 => 1.0,
        ClassKind::Hyperrectangle => 1.0 + (sigma - 1.5) / (2.0 * sigma + 1.0),
        ClassKind::Ellipsoid | ClassKind::BlockEllipsoid => 1.5,
    })
}

/// Compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Sum {
    s: f64,
    c: f64,
}

impl Sum {
    pub fn add(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }

    pub fn get(&self) -> f64 {
        self.s + self.c
    }
}
