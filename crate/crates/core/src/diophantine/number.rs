use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use super::surd::QuadraticSurd;
use super::Distance;
use crate::error::{Error, Result};
use crate::fixed::{
    big_to_f64, pow2, rational_scaled, round_bits, scaled_to_f64, FracEnclosure, Reduction,
    BASE_BITS, HARD_MAX_BITS, MAX_BITS,
};

/// Default relative guard for `‖kx‖`: the certified error radius must stay
/// below this fraction of the returned value.
pub const DEFAULT_GUARD: f64 = 1e-6;

/// How the elements continue past the listed ones in an explicit expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CfTail {
    /// The expansion stops: the number is rational.
    Terminate,
    /// The block repeats forever.
    Periodic(Vec<BigInt>),
    /// `a_{j+1} = a_j + step`.
    Arithmetic(BigInt),
    /// `a_{j+1} = a_j * ratio`.
    Geometric(BigInt),
}

/// Explicit continued fraction `[a0; elements..., tail]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfSpec {
    pub a0: BigInt,
    pub elements: Vec<BigInt>,
    pub tail: CfTail,
}

/// Decimal digits together with the precision they are claimed to carry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecimalSpec {
    pub digits: String,
    pub bits: u32,
}

/// The three ways a half-width can be supplied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NumberSpec {
    QuadraticSurd(QuadraticSurd),
    ContinuedFraction(CfSpec),
    Decimal(DecimalSpec),
}

#[derive(Clone, Debug)]
enum Expansion {
    Terminating(Vec<BigInt>),
    Periodic {
        prefix: Vec<BigInt>,
        period: Vec<BigInt>,
    },
    Progression {
        prefix: Vec<BigInt>,
        tail: CfTail,
    },
    Certified(Vec<BigInt>),
}

/// A real number given exactly enough to drive continued-fraction and
/// `‖kx‖` computations. Rationals are accepted as a degenerate case.
#[derive(Clone, Debug)]
pub struct IrrationalNumber {
    spec: NumberSpec,
    expansion: Expansion,
    exact: Option<(BigInt, BigInt)>,
    base: Option<FracEnclosure>,
    value: f64,
    bit_cap: u32,
}

impl IrrationalNumber {
    /// `(a + b√d) / e`.
    pub fn quadratic_surd(a: i64, b: i64, d: i64, e: i64) -> Result<Self> {
        let s = QuadraticSurd::new(a.into(), b.into(), d.into(), e.into())?;
        Self::from_spec(NumberSpec::QuadraticSurd(s))
    }

    /// The golden section `2/(√5 + 1) = (√5 − 1)/2`.
    pub fn golden() -> Self {
        Self::quadratic_surd(-1, 1, 5, 2).expect("valid surd")
    }

    /// `√2 − 1 = [0; 2, 2, ...]`.
    pub fn sqrt2_minus_one() -> Self {
        Self::quadratic_surd(-1, 1, 2, 1).expect("valid surd")
    }

    pub fn continued_fraction(spec: CfSpec) -> Result<Self> {
        Self::from_spec(NumberSpec::ContinuedFraction(spec))
    }

    /// Terminating expansion `[a0; elements]`.
    pub fn from_elements(a0: i64, elements: &[u64]) -> Result<Self> {
        Self::continued_fraction(CfSpec {
            a0: a0.into(),
            elements: elements.iter().map(|&e| BigInt::from(e)).collect(),
            tail: CfTail::Terminate,
        })
    }

    /// The rational `p/q` as a terminating expansion.
    pub fn rational(p: &BigInt, q: &BigInt) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::invalid("rational: zero denominator"));
        }
        let (mut p, mut q) = (p.clone(), q.clone());
        if q.is_negative() {
            p = -p;
            q = -q;
        }
        let mut elements = Vec::new();
        loop {
            let (a, r) = p.div_mod_floor(&q);
            elements.push(a);
            if r.is_zero() {
                break;
            }
            p = q;
            q = r;
        }
        let a0 = elements.remove(0);
        Self::continued_fraction(CfSpec {
            a0,
            elements,
            tail: CfTail::Terminate,
        })
    }

    pub fn decimal(digits: &str, bits: u32) -> Result<Self> {
        Self::from_spec(NumberSpec::Decimal(DecimalSpec {
            digits: digits.to_string(),
            bits,
        }))
    }

    pub fn from_spec(spec: NumberSpec) -> Result<Self> {
        match &spec {
            NumberSpec::QuadraticSurd(s) => {
                let (prefix, period) = s.expansion()?;
                let (lo, hi) = s.scaled_bounds(BASE_BITS);
                let base = FracEnclosure::from_scaled(&lo, &hi, BASE_BITS);
                Ok(IrrationalNumber {
                    value: scaled_to_f64(&lo, BASE_BITS),
                    expansion: Expansion::Periodic { prefix, period },
                    exact: None,
                    base: Some(base),
                    spec,
                    bit_cap: MAX_BITS,
                })
            }
            NumberSpec::ContinuedFraction(cf) => Self::build_cf(cf.clone(), spec),
            NumberSpec::Decimal(dec) => Self::build_decimal(dec.clone(), spec),
        }
    }

    fn build_cf(cf: CfSpec, spec: NumberSpec) -> Result<Self> {
        for (i, e) in cf.elements.iter().enumerate() {
            if !e.is_positive() {
                return Err(Error::invalid(format!(
                    "cf: element a_{} = {} is not a positive integer",
                    i + 1,
                    e
                )));
            }
        }
        let mut prefix = Vec::with_capacity(cf.elements.len() + 1);
        prefix.push(cf.a0.clone());
        prefix.extend(cf.elements.iter().cloned());
        let expansion = match &cf.tail {
            CfTail::Terminate => Expansion::Terminating(prefix),
            CfTail::Periodic(block) => {
                if block.is_empty() || block.iter().any(|e| !e.is_positive()) {
                    return Err(Error::invalid("cf: periodic block must be nonempty and positive"));
                }
                Expansion::Periodic {
                    prefix,
                    period: block.clone(),
                }
            }
            CfTail::Arithmetic(step) => {
                if step.is_negative() || cf.elements.is_empty() {
                    return Err(Error::invalid(
                        "cf: arithmetic tail needs a nonnegative step and a listed element",
                    ));
                }
                Expansion::Progression {
                    prefix,
                    tail: cf.tail.clone(),
                }
            }
            CfTail::Geometric(ratio) => {
                if !ratio.is_positive() || cf.elements.is_empty() {
                    return Err(Error::invalid(
                        "cf: geometric tail needs a positive ratio and a listed element",
                    ));
                }
                Expansion::Progression {
                    prefix,
                    tail: cf.tail.clone(),
                }
            }
        };
        let mut x = IrrationalNumber {
            spec,
            expansion,
            exact: None,
            base: None,
            value: 0.0,
            bit_cap: MAX_BITS,
        };
        if let Expansion::Terminating(elements) = &x.expansion {
            let c = super::convergents(elements)?;
            let last = c.last().expect("a0 present");
            x.exact = Some((last.p.clone(), last.q.clone()));
            x.value = big_to_f64(&last.p) / big_to_f64(&last.q);
            let (lo, hi) = rational_scaled(&last.p, &last.q, BASE_BITS);
            x.base = Some(FracEnclosure::from_scaled(&lo, &hi, BASE_BITS));
            if x.value.is_nan() {
                x.value = scaled_to_f64(&lo, BASE_BITS);
            }
        } else {
            let (lo, hi) = x.scaled_bounds(BASE_BITS)?;
            x.value = scaled_to_f64(&lo, BASE_BITS);
            x.base = Some(FracEnclosure::from_scaled(&lo, &hi, BASE_BITS));
        }
        Ok(x)
    }

    fn build_decimal(dec: DecimalSpec, spec: NumberSpec) -> Result<Self> {
        let (num, den) = parse_decimal(&dec.digits)?;
        if dec.bits < 8 {
            return Err(Error::invalid("dec: declared precision must be at least 8 bits"));
        }
        let bits = round_bits(dec.bits + 64);
        let (lo, hi) = decimal_scaled(&num, &den, dec.bits, bits);
        let elements = interval_expansion(&lo, &hi, bits);
        if elements.is_empty() {
            return Err(Error::invalid("dec: precision too low to certify a_0"));
        }
        Ok(IrrationalNumber {
            spec,
            expansion: Expansion::Certified(elements),
            exact: None,
            base: Some(FracEnclosure::from_scaled(&lo, &hi, bits)),
            value: scaled_to_f64(&lo, bits),
            bit_cap: MAX_BITS,
        })
    }

    pub fn spec(&self) -> &NumberSpec {
        &self.spec
    }

    /// Nearest f64 to the number (to within a couple of ulps).
    pub fn to_f64(&self) -> f64 {
        self.value
    }

    /// `Some((p, q))` when the number is the rational `p/q` (lowest terms, `q > 0`).
    pub fn as_rational(&self) -> Option<(&BigInt, &BigInt)> {
        self.exact.as_ref().map(|(p, q)| (p, q))
    }

    pub fn is_rational(&self) -> bool {
        self.exact.is_some()
    }

    /// True when `0 < x < 1`, certified.
    pub fn in_unit_interval(&self) -> Result<bool> {
        if let Some((p, q)) = &self.exact {
            return Ok(p.is_positive() && p < q);
        }
        let bits = self.max_bits();
        let (lo, hi) = self.scaled_bounds(bits)?;
        Ok(lo.is_positive() && hi < pow2(bits))
    }

    fn max_bits(&self) -> u32 {
        match &self.spec {
            NumberSpec::Decimal(d) => round_bits(d.bits + 64),
            _ => BASE_BITS,
        }
    }

    /// Element `a_i`; `Ok(None)` once a terminating expansion has ended.
    pub fn element(&self, i: usize) -> Result<Option<BigInt>> {
        match &self.expansion {
            Expansion::Terminating(v) => Ok(v.get(i).cloned()),
            Expansion::Periodic { prefix, period } => Ok(Some(if i < prefix.len() {
                prefix[i].clone()
            } else {
                period[(i - prefix.len()) % period.len()].clone()
            })),
            Expansion::Progression { prefix, tail } => {
                if i < prefix.len() {
                    return Ok(Some(prefix[i].clone()));
                }
                let last = prefix.last().expect("nonempty");
                let steps = i - prefix.len() + 1;
                Ok(Some(match tail {
                    CfTail::Arithmetic(step) => last + step * BigInt::from(steps),
                    CfTail::Geometric(ratio) => last * Pow::pow(ratio, steps),
                    _ => unreachable!("progression tails only"),
                }))
            }
            Expansion::Certified(v) => match v.get(i) {
                Some(e) => Ok(Some(e.clone())),
                None => Err(Error::PrecisionExhausted {
                    bits: self.max_bits(),
                    context: format!(
                        "only {} elements are certified by the declared precision",
                        v.len()
                    ),
                }),
            },
        }
    }

    /// Number of certified elements for decimal input, `None` otherwise.
    pub fn certified_len(&self) -> Option<usize> {
        match &self.expansion {
            Expansion::Certified(v) => Some(v.len()),
            Expansion::Terminating(v) => Some(v.len()),
            _ => None,
        }
    }

    /// Scaled enclosure `lo <= x 2^bits <= hi`. Decimal input returns its own
    /// (fixed) precision regardless of `bits`.
    pub(crate) fn scaled_bounds(&self, bits: u32) -> Result<(BigInt, BigInt)> {
        if let Some((p, q)) = &self.exact {
            return Ok(rational_scaled(p, q, bits));
        }
        match &self.spec {
            NumberSpec::QuadraticSurd(s) => Ok(s.scaled_bounds(bits)),
            NumberSpec::Decimal(d) => {
                let (num, den) = parse_decimal(&d.digits)?;
                let own = round_bits(d.bits + 64);
                let (lo, hi) = decimal_scaled(&num, &den, d.bits, own);
                if bits >= own {
                    let shift = (bits - own) as usize;
                    Ok((lo << shift, hi << shift))
                } else {
                    let shift = (own - bits) as usize;
                    let down = lo >> shift;
                    let up = -((-hi) >> shift);
                    Ok((down, up))
                }
            }
            NumberSpec::ContinuedFraction(_) => {
                let target = pow2(bits + 2);
                let mut it = super::ConvergentIter::new(self);
                let mut prev = it.next().expect("a0")?;
                loop {
                    let cur = match it.next() {
                        Some(c) => c?,
                        None => return Err(Error::assertion("infinite expansion terminated")),
                    };
                    if &prev.q * &cur.q >= target {
                        let (l1, h1) = rational_scaled(&prev.p, &prev.q, bits);
                        let (l2, h2) = rational_scaled(&cur.p, &cur.q, bits);
                        return Ok((l1.min(l2), h1.max(h2)));
                    }
                    prev = cur;
                }
            }
        }
    }

    fn enclosure(&self, bits: u32) -> Result<FracEnclosure> {
        let bits = round_bits(bits);
        if let Some(base) = &self.base {
            if base.bits() >= bits {
                return Ok(base.clone());
            }
        }
        let (lo, hi) = self.scaled_bounds(bits)?;
        let own = match &self.spec {
            NumberSpec::Decimal(d) => round_bits(d.bits + 64).max(bits),
            _ => bits,
        };
        let (lo, hi) = if own > bits {
            (lo << (own - bits) as usize, hi << (own - bits) as usize)
        } else {
            (lo, hi)
        };
        Ok(FracEnclosure::from_scaled(&lo, &hi, own))
    }

    /// `‖k x‖` with the default relative guard.
    pub fn distance(&self, k: u64) -> Result<Distance> {
        self.distance_with_guard(k, DEFAULT_GUARD).map(|(d, _)| d)
    }

    /// `‖k x‖` together with the parity of `floor(k x)`. The certified radius
    /// is kept below `guard * ‖kx‖`, escalating precision by doubling from 256
    /// up to 4096 bits.
    pub fn distance_with_guard(&self, k: u64, guard: f64) -> Result<(Distance, bool)> {
        if k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        if let Some((p, q)) = &self.exact {
            return Ok(rational_distance(p, q, &BigUint::from(k)));
        }
        let base = self.base.as_ref().expect("irrational numbers carry an enclosure");
        let first = base.reduce(k);
        if accept(&first, guard) {
            return Ok(certified(first));
        }
        self.escalate(guard, |enc| enc.reduce(k), base.bits())
    }

    /// `‖k x‖` for an arbitrarily large multiplier.
    pub fn distance_big(&self, k: &BigUint) -> Result<Distance> {
        if k.is_zero() {
            return Err(Error::invalid("k must be at least 1"));
        }
        if let Some((p, q)) = &self.exact {
            return Ok(rational_distance(p, q, k).0);
        }
        let start = round_bits(k.bits() as u32 + 192);
        let enc = self.enclosure(start)?;
        let first = enc.reduce_big(k);
        if accept(&first, DEFAULT_GUARD) {
            return Ok(certified(first).0);
        }
        self.escalate(DEFAULT_GUARD, |e| e.reduce_big(k), enc.bits())
            .map(|(d, _)| d)
    }

    fn escalate(
        &self,
        guard: f64,
        f: impl Fn(&FracEnclosure) -> Reduction,
        from_bits: u32,
    ) -> Result<(Distance, bool)> {
        let mut bits = from_bits;
        let mut last = None;
        while bits < self.bit_cap {
            bits = (bits * 2).min(self.bit_cap);
            let enc = self.enclosure(bits)?;
            if enc.bits() < bits {
                break;
            }
            let r = f(&enc);
            if accept(&r, guard) {
                return Ok(certified(r));
            }
            last = Some(r);
        }
        let ctx = match last {
            Some(r) => format!("‖kx‖ ≈ {:e} with radius {:e}", r.dist, r.radius),
            None => String::from("declared precision cannot be raised"),
        };
        Err(Error::PrecisionExhausted { bits, context: ctx })
    }

    /// Caps the precision escalation of `‖kx‖` at `bits` (default 4096).
    pub fn with_max_precision(mut self, bits: u32) -> Result<Self> {
        if !(BASE_BITS..=HARD_MAX_BITS).contains(&bits) {
            return Err(Error::invalid(format!(
                "precision must lie in [{BASE_BITS}, {HARD_MAX_BITS}] bits, got {bits}"
            )));
        }
        self.bit_cap = bits;
        Ok(self)
    }

    pub fn max_precision(&self) -> u32 {
        self.bit_cap
    }

    /// Fractional-part enclosure width at the default precision; exposed for
    /// diagnostics.
    pub fn working_bits(&self) -> u32 {
        self.base.as_ref().map(|b| b.bits()).unwrap_or(BASE_BITS)
    }
}

fn accept(r: &Reduction, guard: f64) -> bool {
    r.radius < guard * r.dist
}

fn certified(r: Reduction) -> (Distance, bool) {
    (
        Distance {
            value: r.dist,
            lo: (r.dist - r.radius).max(0.0),
            hi: (r.dist + r.radius).min(0.5),
            resonant: false,
        },
        r.floor_odd,
    )
}

fn rational_distance(p: &BigInt, q: &BigInt, k: &BigUint) -> (Distance, bool) {
    let kp = BigInt::from(k.clone()) * p;
    let (fl, r) = kp.div_mod_floor(q);
    let other = q - &r;
    let near = if r <= other { r } else { other };
    let value = if let (Some(n), Some(d)) = (near.to_u64(), q.to_u64()) {
        n as f64 / d as f64
    } else {
        let bits = 128 + q.bits() as u32;
        let (lo, _) = rational_scaled(&near, q, bits);
        scaled_to_f64(&lo, bits)
    };
    (
        Distance {
            value,
            lo: value * (1.0 - 4e-16),
            hi: value * (1.0 + 4e-16),
            resonant: near.is_zero(),
        },
        fl.is_odd(),
    )
}

/// Splits `[-]int.frac` into `num / 10^m`.
fn parse_decimal(s: &str) -> Result<(BigInt, BigInt)> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    let frac = frac.trim_end_matches("...");
    if int.is_empty() && frac.is_empty() {
        return Err(Error::invalid("dec: no digits"));
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(Error::invalid(format!("dec: malformed digits `{s}`")));
    }
    let mut all = String::from(int);
    all.push_str(frac);
    let mut num = BigInt::from_str(if all.is_empty() { "0" } else { &all })
        .map_err(|_| Error::invalid("dec: malformed digits"))?;
    if neg {
        num = -num;
    }
    let den = Pow::pow(BigInt::from(10), frac.len());
    Ok((num, den))
}

/// Scaled enclosure of `num/den ± max(2^-declared, 1/den)`.
fn decimal_scaled(num: &BigInt, den: &BigInt, declared: u32, bits: u32) -> (BigInt, BigInt) {
    let (fl, ce) = rational_scaled(num, den, bits);
    let from_bits = pow2(bits.saturating_sub(declared));
    let (from_digits, _) = rational_scaled(&BigInt::one(), den, bits);
    let rad = from_bits.max(from_digits + 1);
    (fl - &rad, ce + rad)
}

/// Common continued-fraction prefix of every number in `[lo, hi] 2^-bits`.
fn interval_expansion(lo: &BigInt, hi: &BigInt, bits: u32) -> Vec<BigInt> {
    const CAP: usize = 100_000;
    let scale = pow2(bits);
    let (mut ln, mut ld) = (lo.clone(), scale.clone());
    let (mut hn, mut hd) = (hi.clone(), scale);
    let mut out = Vec::new();
    while out.len() < CAP {
        let (fl, rl) = ln.div_mod_floor(&ld);
        let (fh, rh) = hn.div_mod_floor(&hd);
        if fl != fh {
            break;
        }
        out.push(fl);
        if rl.is_zero() || rh.is_zero() {
            break;
        }
        // reciprocal swaps the endpoints
        let (nln, nld) = (hd, rh);
        let (nhn, nhd) = (ld, rl);
        ln = nln;
        ld = nld;
        hn = nhn;
        hd = nhd;
    }
    out
}

impl fmt::Display for IrrationalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.spec {
            NumberSpec::QuadraticSurd(s) => write!(f, "surd:{},{},{},{}", s.a, s.b, s.d, s.e),
            NumberSpec::Decimal(d) => write!(f, "dec:{}:{}", d.digits, d.bits),
            NumberSpec::ContinuedFraction(cf) => {
                write!(f, "cf:{};", cf.a0)?;
                let mut listed: Vec<BigInt> = cf.elements.clone();
                if matches!(cf.tail, CfTail::Arithmetic(_) | CfTail::Geometric(_)) {
                    let mut i = listed.len() + 1;
                    while listed.len() < 3 {
                        listed.push(self.element(i).ok().flatten().unwrap_or_default());
                        i += 1;
                    }
                }
                let body: Vec<String> = listed.iter().map(|e| e.to_string()).collect();
                f.write_str(&body.join(","))?;
                match &cf.tail {
                    CfTail::Terminate => Ok(()),
                    CfTail::Periodic(block) => {
                        let b: Vec<String> = block.iter().map(|e| e.to_string()).collect();
                        if !listed.is_empty() {
                            f.write_str(",")?;
                        }
                        write!(f, "({})", b.join(","))
                    }
                    _ => f.write_str(",..."),
                }
            }
        }
    }
}

impl FromStr for IrrationalNumber {
    type Err = Error;

    /// Grammar: `surd:A,B,D,E`, `cf:a0;a1,a2,...`, `dec:digits:bits`.
    ///
    /// A `cf` list may end in a parenthesised periodic block, `cf:0;1,(2,3)`,
    /// or in `...`, in which case the listed elements (at least three) must
    /// form an arithmetic or geometric progression that is continued forever.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| Error::invalid(format!("`{s}`: expected surd:, cf: or dec:")))?;
        match kind {
            "surd" => {
                let parts: Vec<&str> = body.split(',').map(str::trim).collect();
                if parts.len() != 4 {
                    return Err(Error::invalid("surd: expected A,B,D,E"));
                }
                let mut v = Vec::with_capacity(4);
                for p in parts {
                    v.push(parse_int(p)?);
                }
                let e = v.pop().expect("4");
                let d = v.pop().expect("3");
                let b = v.pop().expect("2");
                let a = v.pop().expect("1");
                Self::from_spec(NumberSpec::QuadraticSurd(QuadraticSurd::new(a, b, d, e)?))
            }
            "cf" => Self::continued_fraction(parse_cf(body)?),
            "dec" => {
                let (digits, bits) = body
                    .rsplit_once(':')
                    .ok_or_else(|| Error::invalid("dec: expected digits:bits"))?;
                let bits: u32 = bits
                    .trim()
                    .parse()
                    .map_err(|_| Error::invalid("dec: bits must be a positive integer"))?;
                Self::decimal(digits.trim(), bits)
            }
            other => Err(Error::invalid(format!("unknown number kind `{other}`"))),
        }
    }
}

fn parse_int(s: &str) -> Result<BigInt> {
    BigInt::from_str(s.trim()).map_err(|_| Error::invalid(format!("`{s}` is not an integer")))
}

fn parse_cf(body: &str) -> Result<CfSpec> {
    let (a0, rest) = body.split_once(';').unwrap_or((body, ""));
    let a0 = parse_int(a0)?;
    let mut rest = rest.trim();
    let mut tail = CfTail::Terminate;
    let mut ellipsis = false;
    if let Some(open) = rest.find('(') {
        let close = rest
            .rfind(')')
            .filter(|&c| c > open && rest[c + 1..].trim().is_empty())
            .ok_or_else(|| Error::invalid("cf: unbalanced periodic block"))?;
        let block = split_ints(&rest[open + 1..close])?;
        tail = CfTail::Periodic(block);
        rest = rest[..open].trim().trim_end_matches(',');
    } else if let Some(stripped) = rest.strip_suffix("...") {
        ellipsis = true;
        rest = stripped.trim().trim_end_matches(',');
    }
    let elements = split_ints(rest)?;
    if ellipsis {
        if elements.len() < 3 {
            return Err(Error::invalid("cf: `...` needs at least three listed elements"));
        }
        let n = elements.len();
        let step = &elements[1] - &elements[0];
        let arithmetic = elements.windows(2).all(|w| &w[1] - &w[0] == step);
        let geometric = elements[0].is_positive()
            && (&elements[1] % &elements[0]).is_zero()
            && {
                let ratio = &elements[1] / &elements[0];
                elements.windows(2).all(|w| &w[0] * &ratio == w[1])
            };
        tail = if arithmetic && !step.is_negative() {
            CfTail::Arithmetic(step)
        } else if geometric {
            CfTail::Geometric(&elements[n - 1] / &elements[n - 2])
        } else {
            return Err(Error::invalid(
                "cf: `...` requires an arithmetic or geometric progression",
            ));
        };
    }
    Ok(CfSpec { a0, elements, tail })
}

fn split_ints(s: &str) -> Result<Vec<BigInt>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_int).collect()
}
