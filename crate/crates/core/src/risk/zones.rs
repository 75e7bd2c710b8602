use alloc::format;

use super::SmoothnessClass;
use crate::equidist::BlockGrid;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Zone {
    Variance,
    Mixed,
    Bias,
}

impl Zone {
    pub fn as_str(self) -> &'static str {
        match self {
            Zone::Variance => "variance",
            Zone::Mixed => "mixed",
            Zone::Bias => "bias",
        }
    }
}

/// Zone borders `k0 = N_{ν0+1}`, `k1 = N_{ν1+1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Zones {
    pub nu0: Option<usize>,
    pub nu1: Option<usize>,
    pub k0: u64,
    pub k1: u64,
}

impl Zones {
    pub fn zone_of(&self, k: u64) -> Zone {
        if k < self.k0 {
            Zone::Variance
        } else if k < self.k1 {
            Zone::Mixed
        } else {
            Zone::Bias
        }
    }
}

/// `ln(ε̄ N^{1+τ})` for node `ν`.
fn ln_level(class: &SmoothnessClass, eps: f64, n: u64) -> f64 {
    libm::log(eps / class.c) + (1.0 + class.tau()) * libm::log(n as f64)
}

/// Trichotomy of a block: `ε̄N^{1+τ}q <= 1`, `<= q`, or beyond.
pub fn classify_block(grid: &BlockGrid, nu: usize, class: &SmoothnessClass, eps: f64) -> Zone {
    let nd = &grid.nodes()[nu];
    let lv = ln_level(class, eps, nd.start);
    let lq = libm::log(nd.q as f64);
    if lv + lq <= 0.0 {
        Zone::Variance
    } else if lv <= 0.0 {
        Zone::Mixed
    } else {
        Zone::Bias
    }
}

pub fn zone_boundaries(class: &SmoothnessClass, eps: f64, grid: &BlockGrid) -> Result<Zones> {
    if !(eps > 0.0) {
        return Err(Error::invalid("epsilon must be positive"));
    }
    let nodes = grid.nodes();
    let mut nu0 = None;
    let mut nu1 = None;
    for (nu, nd) in nodes.iter().enumerate() {
        let lv = ln_level(class, eps, nd.start);
        if lv + libm::log(nd.q as f64) <= 0.0 {
            nu0 = Some(nu);
        }
        if lv <= 0.0 {
            nu1 = Some(nu);
        } else {
            break;
        }
    }
    let last = nodes.len() - 1;
    let succ = |nu: Option<usize>| -> Result<u64> {
        match nu {
            None => Ok(nodes[0].start),
            Some(i) if i < last => Ok(nodes[i + 1].start),
            Some(_) => Err(Error::GridTooShort {
                end: nodes[last].start,
                needed: libm::ceil(libm::pow(class.c / eps, 1.0 / (1.0 + class.tau()))) as u64,
            }),
        }
    };
    let k0 = succ(nu0)?;
    let k1 = succ(nu1)?;
    if nu1.is_some() {
        let x = libm::pow(class.c / eps, 1.0 / (1.0 + class.tau()));
        let k1f = k1 as f64;
        if !(k1f > x * (1.0 - 1e-9) && k1f <= 2.0 * x * (1.0 + 1e-9)) {
            return Err(Error::assertion(format!("k1 = {k1} not within (X, 2X] for X = {x}")));
        }
    }
    Ok(Zones { nu0, nu1, k0, k1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diophantine::IrrationalNumber;

    #[test]
    fn zone_nesting_and_limits() {
        let g = IrrationalNumber::golden();
        let grid = BlockGrid::build(&g, 1_000_000).unwrap();
        let class = SmoothnessClass::hyper(1.5, 1.0).unwrap();
        let z = zone_boundaries(&class, 1e-8, &grid).unwrap();
        assert!(z.k0 <= z.k1);
        for nu in 0..grid.len() {
            let s = grid.nodes()[nu].start;
            let expect = if s < z.k0 {
                Zone::Variance
            } else if s < z.k1 {
                Zone::Mixed
            } else {
                Zone::Bias
            };
            assert_eq!(classify_block(&grid, nu, &class, 1e-8), expect, "nu={nu}");
        }
        assert_eq!(classify_block(&grid, 3, &class, 1e-30), Zone::Variance);
        assert_eq!(classify_block(&grid, 3, &class, 1e3), Zone::Bias);
        let short = BlockGrid::build(&g, 10).unwrap();
        assert!(matches!(
            zone_boundaries(&class, 1e-8, &short),
            Err(Error::GridTooShort { .. })
        ));
    }
}
