//! Eigenvalues of the periodic boxcar operator and of the comparison
//! spectra used as controls.
//!
//! Basis functions are `cos(π k t)` on `[-1, 1]`; indices run over `k >= 1`
//! with `r_0 = 1` handled by the callers that need it.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::diophantine::IrrationalNumber;
use crate::error::{Error, Result};

/// Relative guard used for eigenvalues: the certified error of `‖ka‖` is
/// kept below this fraction of its value.
pub const EIGEN_GUARD: f64 = 1e-12;

/// A diagonal operator `e_k ↦ r_k e_k` on `k >= 1`.
pub trait Spectrum: Sync {
    /// Signed `r_k` for `k >= 1`.
    fn eigenvalue(&self, k: u64) -> Result<f64>;

    fn abs_eigenvalue(&self, k: u64) -> Result<f64> {
        self.eigenvalue(k).map(f64::abs)
    }

    /// A nonincreasing bound with `|r_j| <= decay_bound(k)` for all `j >= k`.
    fn decay_bound(&self, k: u64) -> f64;

    /// The boxcar half-width when the spectrum is a plain (`m = 1`) boxcar.
    fn half_width(&self) -> Option<&IrrationalNumber> {
        None
    }

    fn label(&self) -> String;

    /// `ε_k = ε / |r_k|`, infinite where `r_k = 0`.
    fn noise_level(&self, k: u64, eps: f64) -> Result<f64> {
        if k == 0 {
            return Ok(eps);
        }
        let r = self.abs_eigenvalue(k)?;
        Ok(if r == 0.0 { f64::INFINITY } else { eps / r })
    }
}

impl<S: Spectrum + ?Sized> Spectrum for &S {
    fn eigenvalue(&self, k: u64) -> Result<f64> {
        (**self).eigenvalue(k)
    }
    fn abs_eigenvalue(&self, k: u64) -> Result<f64> {
        (**self).abs_eigenvalue(k)
    }
    fn decay_bound(&self, k: u64) -> f64 {
        (**self).decay_bound(k)
    }
    fn half_width(&self) -> Option<&IrrationalNumber> {
        (**self).half_width()
    }
    fn label(&self) -> String {
        (**self).label()
    }
}

impl<S: Spectrum + ?Sized> Spectrum for Box<S> {
    fn eigenvalue(&self, k: u64) -> Result<f64> {
        (**self).eigenvalue(k)
    }
    fn abs_eigenvalue(&self, k: u64) -> Result<f64> {
        (**self).abs_eigenvalue(k)
    }
    fn decay_bound(&self, k: u64) -> f64 {
        (**self).decay_bound(k)
    }
    fn half_width(&self) -> Option<&IrrationalNumber> {
        (**self).half_width()
    }
    fn label(&self) -> String {
        (**self).label()
    }
}

/// The (iterated) boxcar `r_k = (sin πka / πka)^m`.
#[derive(Clone, Debug)]
pub struct BoxcarKernel {
    a: IrrationalNumber,
    a_f64: f64,
    m: u32,
}

impl BoxcarKernel {
    pub fn new(a: IrrationalNumber, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("iteration order m must be at least 1"));
        }
        if !a.in_unit_interval()? {
            return Err(Error::invalid(format!("half-width {a} is not in (0, 1)")));
        }
        let a_f64 = a.to_f64();
        Ok(BoxcarKernel { a, a_f64, m })
    }

    pub fn golden() -> Self {
        Self::new(IrrationalNumber::golden(), 1).expect("golden section lies in (0, 1)")
    }

    pub fn a(&self) -> &IrrationalNumber {
        &self.a
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `(‖ka‖, floor(ka) odd)` at the eigenvalue guard.
    fn reduced(&self, k: u64) -> Result<(crate::Distance, bool)> {
        self.a.distance_with_guard(k, EIGEN_GUARD)
    }

    /// Signed eigenvalue, `r_0 = 1`.
    pub fn eigenvalue_at(&self, k: u64) -> Result<f64> {
        if k == 0 {
            return Ok(1.0);
        }
        let (d, odd) = self.reduced(k)?;
        if d.resonant {
            return Ok(0.0);
        }
        // |sin πka| = sin π‖ka‖, sign (-1)^floor(ka)
        let s = libm::sin(PI * d.value) / (PI * k as f64 * self.a_f64);
        let s = if odd { -s } else { s };
        Ok(libm::pow(s, self.m as f64))
    }

    /// `((2/π)‖ka‖/(ka), ‖ka‖/(ka))`, raised to the power `m`, from the
    /// certified enclosure of `‖ka‖`.
    pub fn envelope(&self, k: u64) -> Result<(f64, f64)> {
        if k == 0 {
            return Err(Error::invalid("envelope is defined for k >= 1"));
        }
        let (d, _) = self.reduced(k)?;
        if d.resonant {
            return Ok((0.0, 0.0));
        }
        let ka = k as f64 * self.a_f64;
        let lo = 2.0 / PI * d.lo / ka * (1.0 - 1e-15);
        let hi = d.hi / ka * (1.0 + 1e-15);
        let m = self.m as f64;
        Ok((libm::pow(lo, m), libm::pow(hi, m)))
    }

    /// Checks `lo <= |r_k| <= hi` and returns the bracket.
    pub fn checked_envelope(&self, k: u64) -> Result<(f64, f64)> {
        let (lo, hi) = self.envelope(k)?;
        let r = self.eigenvalue_at(k)?.abs();
        let tol = 1e-11 * r;
        if r + tol < lo || r - tol > hi {
            return Err(Error::assertion(format!(
                "|r_{k}| = {r:e} outside envelope [{lo:e}, {hi:e}]"
            )));
        }
        Ok((lo, hi))
    }

    /// The kernel obtained by replacing `a` with its `n`-th convergent.
    pub fn rational_approximant(&self, n: usize) -> Result<BoxcarKernel> {
        let c = self.a.convergents_to(n)?;
        let last = c
            .get(n)
            .ok_or_else(|| Error::invalid("expansion terminates before the requested convergent"))?;
        BoxcarKernel::new(IrrationalNumber::rational(&last.p, &last.q)?, self.m)
    }
}

impl Spectrum for BoxcarKernel {
    fn eigenvalue(&self, k: u64) -> Result<f64> {
        self.eigenvalue_at(k)
    }

    fn decay_bound(&self, k: u64) -> f64 {
        let v = 1.0 / (PI * k.max(1) as f64 * self.a_f64);
        libm::pow(v.min(1.0), self.m as f64) * (1.0 + 1e-12)
    }

    fn half_width(&self) -> Option<&IrrationalNumber> {
        (self.m == 1).then_some(&self.a)
    }

    fn label(&self) -> String {
        format!("boxcar(a={}, m={})", self.a, self.m)
    }
}

/// Homogeneous control `r_k = c k^{-α}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Homogeneous {
    pub c: f64,
    pub alpha: f64,
}

impl Homogeneous {
    pub fn new(c: f64, alpha: f64) -> Result<Self> {
        if !(c > 0.0) || !(alpha >= 0.0) || !c.is_finite() || !alpha.is_finite() {
            return Err(Error::invalid("homogeneous spectrum needs c > 0 and alpha >= 0"));
        }
        Ok(Homogeneous { c, alpha })
    }
}

impl Spectrum for Homogeneous {
    fn eigenvalue(&self, k: u64) -> Result<f64> {
        Ok(self.c * libm::pow(k as f64, -self.alpha))
    }

    fn decay_bound(&self, k: u64) -> f64 {
        self.c * libm::pow(k.max(1) as f64, -self.alpha)
    }

    fn label(&self) -> String {
        format!("homogeneous(c={}, alpha={})", self.c, self.alpha)
    }
}

/// Direct observation, `r_k = 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DirectData;

impl Spectrum for DirectData {
    fn eigenvalue(&self, _k: u64) -> Result<f64> {
        Ok(1.0)
    }

    fn decay_bound(&self, _k: u64) -> f64 {
        1.0
    }

    fn label(&self) -> String {
        String::from("direct")
    }
}

/// `|r_k|` precomputed for `1 <= k <= len`, falling back to the inner
/// spectrum beyond the table.
#[derive(Clone, Debug)]
pub struct Tabulated<S> {
    inner: S,
    table: Vec<f64>,
}

impl<S: Spectrum> Tabulated<S> {
    pub fn new(inner: S, k_max: u64) -> Result<Self> {
        let table = (1..=k_max).map(|k| inner.eigenvalue(k)).collect::<Result<Vec<_>>>()?;
        Ok(Tabulated { inner, table })
    }

    /// Wraps an already computed table of signed `r_1, r_2, ...`.
    pub fn from_table(inner: S, table: Vec<f64>) -> Self {
        Tabulated { inner, table }
    }

    pub fn inner(&self) -> &S {
        &self.inner
    }

    pub fn len(&self) -> u64 {
        self.table.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

impl<S: Spectrum> Spectrum for Tabulated<S> {
    fn eigenvalue(&self, k: u64) -> Result<f64> {
        match k.checked_sub(1).and_then(|i| self.table.get(i as usize)) {
            Some(&v) => Ok(v),
            None => self.inner.eigenvalue(k),
        }
    }

    fn decay_bound(&self, k: u64) -> f64 {
        self.inner.decay_bound(k)
    }

    fn half_width(&self) -> Option<&IrrationalNumber> {
        self.inner.half_width()
    }

    fn label(&self) -> String {
        self.inner.label()
    }
}

/// Coordinatewise `θ_k ↦ r_k θ_k` for `θ = (θ_0, θ_1, ...)`.
pub fn forward_convolve<S: Spectrum + ?Sized>(theta: &[f64], kernel: &S) -> Result<Vec<f64>> {
    theta
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            if k == 0 {
                Ok(t)
            } else {
                kernel.eigenvalue(k as u64).map(|r| r * t)
            }
        })
        .collect()
}

/// `Σ θ_k cos(π k t)`.
pub fn synthesize(theta: &[f64], t: f64) -> f64 {
    theta
        .iter()
        .enumerate()
        .map(|(k, &c)| c * libm::cos(PI * k as f64 * t))
        .sum()
}

/// Direct evaluation of `(1/2a) ∫_{t-a}^{t+a} f` on the grid
/// `t_j = -1 + 2j/n`, where `f` is known only through its samples on that
/// grid and is integrated as the periodic linear interpolant.
pub fn periodic_average_on_grid(samples: &[f64], a: f64) -> Vec<f64> {
    let n = samples.len();
    let h = 2.0 / n as f64;
    // cumulative integral from -1 over one period
    let mut cum = Vec::with_capacity(n + 1);
    cum.push(0.0);
    for j in 0..n {
        let next = samples[(j + 1) % n];
        let last = cum[j];
        cum.push(last + 0.5 * h * (samples[j] + next));
    }
    let total = cum[n];
    let prim = |x: f64| -> f64 {
        // primitive of the periodic interpolant, F(x + 2) = F(x) + total
        let s = (x + 1.0) / 2.0;
        let wraps = libm::floor(s);
        let u = (s - wraps) * n as f64;
        let j = (libm::floor(u) as usize).min(n - 1);
        let frac = u - j as f64;
        let f0 = samples[j];
        let f1 = samples[(j + 1) % n];
        let within = h * (frac * f0 + 0.5 * frac * frac * (f1 - f0));
        wraps * total + cum[j] + within
    };
    (0..n)
        .map(|j| {
            let t = -1.0 + h * j as f64;
            (prim(t + a) - prim(t - a)) / (2.0 * a)
        })
        .collect()
}
