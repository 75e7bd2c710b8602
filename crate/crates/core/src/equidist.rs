//! The frequency partition induced by the convergent denominators, and
//! numerical checks of the block equidistribution bounds.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::diophantine::IrrationalNumber;
use crate::error::{Error, Result};
use crate::fixed::big_to_f64;

/// One grid node `N_ν = l q_n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Node {
    pub n: usize,
    pub l: u64,
    /// `N_ν`.
    pub start: u64,
    /// `q_n`.
    pub q: u64,
    /// `q_{n+1}`, infinite once a rational expansion has ended.
    pub q_next: f64,
    /// `l_n`, the largest `l` with `l q_n < q_{n+1}`.
    pub l_max: u64,
}

/// Nodes `N_ν` in increasing order. The last node is the first one beyond
/// `k_max` and only closes the final block.
#[derive(Clone, Debug)]
pub struct BlockGrid {
    nodes: Vec<Node>,
    k_max: u64,
}

impl BlockGrid {
    /// Builds the grid covering `[1, k_max]`, starting from `q_0 = 1`.
    pub fn build(a: &IrrationalNumber, k_max: u64) -> Result<Self> {
        if k_max == 0 {
            return Err(Error::invalid("k_max must be positive"));
        }
        if !a.in_unit_interval()? {
            return Err(Error::invalid("block grid needs 0 < a < 1"));
        }
        let mut nodes = Vec::new();
        let mut conv = a.convergents();
        // skip a_0: q_0 = 1
        let mut cur = conv.next().expect("a_0 exists")?;
        let mut n = 0usize;
        'outer: loop {
            let q = cur.q.to_u64().expect("q_n <= k_max fits");
            let next = conv.next().transpose()?;
            let (l_max, q_next) = match &next {
                Some(c) => {
                    let qn: &BigInt = &c.q;
                    let l = (qn - 1u32) / &cur.q;
                    (l.to_u64().unwrap_or(u64::MAX), big_to_f64(qn))
                }
                None => (u64::MAX, f64::INFINITY),
            };
            let mut l = 1u64;
            while l <= l_max {
                let start = match l.checked_mul(q) {
                    Some(s) => s,
                    None => break 'outer,
                };
                nodes.push(Node {
                    n,
                    l,
                    start,
                    q,
                    q_next,
                    l_max,
                });
                if start > k_max {
                    break 'outer;
                }
                l += 1;
            }
            match next {
                Some(c) => {
                    if c.q > BigInt::from(k_max) {
                        // the closing node is q_{n+1} itself
                        let q1 = c.q.to_u64().unwrap_or(u64::MAX);
                        let after = conv.next().transpose()?;
                        let (l_max, q_next) = match &after {
                            Some(d) => (
                                ((&d.q - 1u32) / &c.q).to_u64().unwrap_or(u64::MAX),
                                big_to_f64(&d.q),
                            ),
                            None => (u64::MAX, f64::INFINITY),
                        };
                        nodes.push(Node {
                            n: n + 1,
                            l: 1,
                            start: q1,
                            q: q1,
                            q_next,
                            l_max,
                        });
                        break;
                    }
                    cur = c;
                    n += 1;
                }
                None => break,
            }
        }
        if nodes.last().map_or(true, |nd| nd.start <= k_max) {
            return Err(Error::assertion("block grid does not reach past k_max"));
        }
        Ok(BlockGrid { nodes, k_max })
    }

    pub fn k_max(&self) -> u64 {
        self.k_max
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Number of blocks `B_ν` (one less than the number of nodes).
    pub fn len(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `B_ν = [N_ν, N_{ν+1})` as a half-open range.
    pub fn block(&self, nu: usize) -> (u64, u64) {
        (self.nodes[nu].start, self.nodes[nu + 1].start)
    }

    /// `C_ν = [N_ν, N_ν + q_{n(ν)})`.
    pub fn cover(&self, nu: usize) -> (u64, u64) {
        let nd = &self.nodes[nu];
        (nd.start, nd.start + nd.q)
    }

    /// Index of the block containing `k`.
    pub fn block_of(&self, k: u64) -> Option<usize> {
        if k < self.nodes[0].start || k >= self.nodes[self.nodes.len() - 1].start {
            return None;
        }
        Some(self.nodes.partition_point(|nd| nd.start <= k) - 1)
    }

    /// Checks the partition and covering properties.
    pub fn validate(&self) -> Result<()> {
        for w in self.nodes.windows(2) {
            if w[1].start <= w[0].start {
                return Err(Error::assertion("grid nodes not increasing"));
            }
        }
        for nu in 0..self.len() {
            let nd = &self.nodes[nu];
            let (s, e) = self.block(nu);
            let len = e - s;
            let ok = if nd.l < nd.l_max { len == nd.q } else { len >= 1 && len <= nd.q };
            if !ok {
                return Err(Error::assertion(format!(
                    "block {nu} = [{s}, {e}) has length {len} with q = {}",
                    nd.q
                )));
            }
            if self.cover(nu).1 < e {
                return Err(Error::assertion(format!("C_{nu} does not contain B_{nu}")));
            }
            if !(nd.l_max as f64 * (nd.q as f64) < nd.q_next * (1.0 + 1e-15)) {
                return Err(Error::assertion("l_n q_n < q_{n+1} violated"));
            }
        }
        Ok(())
    }
}

/// The three sides of the block equidistribution sandwich.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lemma1Triple {
    pub q: u64,
    pub q_next: f64,
    pub big_n: u64,
    /// Number of terms in the middle sum.
    pub terms: u64,
    pub lower: f64,
    pub middle: f64,
    /// `2 Σ_{μ=1}^{q-3} h(μ/q) + 6 h(1/(2q'))`.
    pub upper: f64,
    /// The same with `3 h(1/(2q'))`.
    pub upper_tight: f64,
}

impl Lemma1Triple {
    /// Lower bound applies only to a full run of `q` terms.
    pub fn lower_holds(&self) -> bool {
        self.terms < self.q || self.lower <= self.middle * (1.0 + 1e-12)
    }

    pub fn upper_holds(&self) -> bool {
        self.middle <= self.upper * (1.0 + 1e-12)
    }

    pub fn tight_holds(&self) -> bool {
        self.middle <= self.upper_tight * (1.0 + 1e-12)
    }
}

/// Rejects `h` unless it is positive, finite and nonincreasing on a
/// 64-point grid of `(0, 1]`.
pub fn check_monotone(h: &dyn Fn(f64) -> f64) -> Result<()> {
    let mut prev = f64::INFINITY;
    for i in 1..=64 {
        let x = i as f64 / 64.0;
        let v = h(x);
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::NotMonotone(format!("h({x}) = {v}")));
        }
        if v > prev {
            return Err(Error::NotMonotone(format!("h increases at x = {x}")));
        }
        prev = v;
    }
    Ok(())
}

/// Evaluates the sandwich for `q = q_n`, `q' = q_{n+1}` and the run
/// `N+1 ..= N+k0` (`k0 = q` unless given).
pub fn lemma1_bounds(
    a: &IrrationalNumber,
    big_n: u64,
    n: usize,
    h: &dyn Fn(f64) -> f64,
    k0: Option<u64>,
) -> Result<Lemma1Triple> {
    check_monotone(h)?;
    let conv = a.convergents_to(n + 1)?;
    let q = conv
        .get(n)
        .and_then(|c| c.q.to_u64())
        .ok_or_else(|| Error::invalid(format!("q_{n} unavailable or too large")))?;
    let q_next = conv.get(n + 1).map(|c| big_to_f64(&c.q)).unwrap_or(f64::INFINITY);
    let terms = k0.unwrap_or(q);
    if terms == 0 || terms > q {
        return Err(Error::invalid("k0 must lie in [1, q]"));
    }
    if !(((big_n + terms) as f64) < q_next) {
        return Err(Error::hypothesis(format!(
            "N + {terms} = {} is not below q' = {q_next}",
            big_n + terms
        )));
    }
    let qf = q as f64;
    let lower: f64 = (4..=q).map(|mu| h(mu as f64 / qf)).sum();
    let inner: f64 = (1..=q.saturating_sub(3)).map(|mu| h(mu as f64 / qf)).sum();
    let edge = h(1.0 / (2.0 * q_next)).min(f64::MAX);
    let mut middle = 0.0;
    for k in big_n + 1..=big_n + terms {
        middle += h(a.distance(k)?.value);
    }
    let out = Lemma1Triple {
        q,
        q_next,
        big_n,
        terms,
        lower,
        middle,
        upper: 2.0 * inner + 6.0 * edge,
        upper_tight: 2.0 * inner + 3.0 * edge,
    };
    if !out.lower_holds() || !out.upper_holds() {
        return Err(Error::assertion(format!(
            "sandwich fails: {} <= {} <= {}",
            out.lower, out.middle, out.upper
        )));
    }
    Ok(out)
}

/// Per-block triples over a grid, each block taken as the run starting at
/// `N_ν` (partial last blocks use the shortened upper bound).
pub fn block_triples(a: &IrrationalNumber, grid: &BlockGrid, h: &dyn Fn(f64) -> f64) -> Result<Vec<Lemma1Triple>> {
    (0..grid.len())
        .map(|nu| {
            let nd = grid.nodes()[nu];
            let (s, e) = grid.block(nu);
            lemma1_bounds(a, s - 1, nd.n, h, Some(e - s))
        })
        .collect()
}

/// Result of the saturated summation check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lemma2Check {
    pub exact_sum: f64,
    pub envelope: f64,
    pub c1: f64,
    pub c2: f64,
}

impl Lemma2Check {
    pub fn ratio(&self) -> f64 {
        self.exact_sum / self.envelope
    }
}

/// `Σ_{μ=r}^{q} min(1, (κ/μ)²)` against `min(κ², κ, q)`, asserting
/// `envelope/(4r) <= sum <= 3 envelope`.
pub fn lemma2_check(r: u64, q: u64, kappa: f64) -> Result<Lemma2Check> {
    if r == 0 || !(kappa > 0.0) {
        return Err(Error::invalid("lemma 2 needs r >= 1 and kappa > 0"));
    }
    if q <= 2 * r {
        return Err(Error::hypothesis(format!("q = {q} is not above 2r = {}", 2 * r)));
    }
    let k2 = kappa * kappa;
    // terms with μ <= κ are 1; the rest are summed smallest first
    let sat = (libm::floor(kappa).min(q as f64) as u64).max(r - 1);
    let ones = (sat + 1 - r) as f64;
    let mut tail = 0.0;
    for mu in (sat + 1..=q).rev() {
        let m = mu as f64;
        tail += k2 / (m * m);
    }
    let exact_sum = ones + tail;
    let envelope = k2.min(kappa).min(q as f64);
    let out = Lemma2Check {
        exact_sum,
        envelope,
        c1: 1.0 / (4.0 * r as f64),
        c2: 3.0,
    };
    if exact_sum < out.c1 * envelope || exact_sum > out.c2 * envelope {
        return Err(Error::assertion(format!(
            "sum {exact_sum} outside [{}, {}]",
            out.c1 * envelope,
            out.c2 * envelope
        )));
    }
    Ok(out)
}
