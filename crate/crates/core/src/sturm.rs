//! Real-root counting on open intervals via Sturm chains.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::RationalPolynomial;
use crate::scalar::{self, Scalar};

/// One end of an open interval on the extended real line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    NegInf,
    Finite(#[serde(with = "scalar")] Scalar),
    PosInf,
}

impl Bound {
    pub fn finite(&self) -> Option<&Scalar> {
        match self {
            Bound::Finite(x) => Some(x),
            _ => None,
        }
    }
}

impl From<Scalar> for Bound {
    fn from(x: Scalar) -> Self {
        Bound::Finite(x)
    }
}

/// The open interval `(lo, hi)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: Bound,
    pub hi: Bound,
}

impl Interval {
    pub fn new(lo: Bound, hi: Bound) -> Self {
        Interval { lo, hi }
    }

    pub fn open(lo: Scalar, hi: Scalar) -> Self {
        Interval::new(Bound::Finite(lo), Bound::Finite(hi))
    }

    pub fn positive_axis() -> Self {
        Interval::new(Bound::Finite(Scalar::zero()), Bound::PosInf)
    }

    pub fn real_line() -> Self {
        Interval::new(Bound::NegInf, Bound::PosInf)
    }

    pub fn is_empty(&self) -> bool {
        match (&self.lo, &self.hi) {
            (Bound::Finite(a), Bound::Finite(b)) => a >= b,
            (Bound::PosInf, _) | (_, Bound::NegInf) => true,
            _ => false,
        }
    }
}

/// Sign of `p` just to the right of `x` (or at `-inf`).
fn sign_right_of(p: &RationalPolynomial, at: &Bound) -> i8 {
    match at {
        Bound::NegInf => {
            let lc = scalar::sign(p.leading().expect("nonzero"));
            if p.degree().unwrap() % 2 == 0 { lc } else { -lc }
        }
        Bound::PosInf => scalar::sign(p.leading().expect("nonzero")),
        Bound::Finite(x) => {
            let mut q = p.clone();
            loop {
                let v = q.eval(x);
                if !v.is_zero() {
                    return scalar::sign(&v);
                }
                q = q.derivative();
            }
        }
    }
}

/// Sign of `p` just to the left of `x` (or at `+inf`).
fn sign_left_of(p: &RationalPolynomial, at: &Bound) -> i8 {
    match at {
        Bound::Finite(x) => {
            let mut q = p.clone();
            let mut k = 0;
            loop {
                let v = q.eval(x);
                if !v.is_zero() {
                    let s = scalar::sign(&v);
                    return if k % 2 == 0 { s } else { -s };
                }
                q = q.derivative();
                k += 1;
            }
        }
        other => sign_right_of(p, other),
    }
}

/// Square-free part `p / gcd(p, p')`, monic.
pub fn square_free_part(p: &RationalPolynomial) -> Result<RationalPolynomial> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let g = p.gcd(&p.derivative());
    Ok(p.exact_div(&g)?.monic())
}

/// Yun's square-free factorisation: `p = lc · Π f_i^i`, returned as `(i, f_i)`
/// for every non-constant `f_i`.
pub fn square_free_decomposition(p: &RationalPolynomial) -> Result<Vec<(usize, RationalPolynomial)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    if p.degree() == Some(0) {
        return Ok(out);
    }
    let dp = p.derivative();
    let a0 = p.gcd(&dp);
    let mut b = p.exact_div(&a0)?;
    let c = dp.exact_div(&a0)?;
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&d);
        let next_b = b.exact_div(&a)?;
        let next_c = d.exact_div(&a)?;
        if a.degree().unwrap_or(0) > 0 {
            out.push((i, a.monic()));
        }
        d = &next_c - &next_b.derivative();
        b = next_b;
        i += 1;
    }
    Ok(out)
}

/// Product of the odd-multiplicity square-free factors.
pub fn odd_part(p: &RationalPolynomial) -> Result<RationalPolynomial> {
    let one = RationalPolynomial::constant(Scalar::one());
    Ok(square_free_decomposition(p)?
        .into_iter()
        .filter(|(mult, _)| mult % 2 == 1)
        .fold(one, |acc, (_, f)| &acc * &f))
}

/// Signed remainder chain `p0 = p, p1 = p', p_{k+1} = -rem(p_{k-1}, p_k)`.
#[derive(Debug, Clone)]
pub struct SturmChain {
    chain: Vec<RationalPolynomial>,
}

impl SturmChain {
    /// Builds the chain of the square-free part of `p`.
    pub fn new(p: &RationalPolynomial) -> Result<Self> {
        let sf = square_free_part(p)?;
        let mut chain = vec![sf.clone(), sf.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1])?;
            if r.is_zero() {
                break;
            }
            // positive rescaling keeps the signs and tames coefficient growth
            let lc = r.leading().unwrap().abs();
            chain.push((-&r).scale(&(Scalar::one() / lc)));
        }
        Ok(SturmChain { chain })
    }

    fn variations(signs: impl Iterator<Item = i8>) -> usize {
        let nonzero: Vec<i8> = signs.filter(|&s| s != 0).collect();
        nonzero.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Distinct roots in the open interval.
    pub fn count(&self, interval: &Interval) -> usize {
        if interval.is_empty() {
            return 0;
        }
        let lo = Self::variations(self.chain.iter().map(|q| sign_right_of(q, &interval.lo)));
        let hi = Self::variations(self.chain.iter().map(|q| sign_left_of(q, &interval.hi)));
        lo.saturating_sub(hi)
    }
}

/// Number of distinct real roots of `p` in the open interval.
pub fn sturm_distinct_roots(p: &RationalPolynomial, interval: &Interval) -> Result<usize> {
    Ok(SturmChain::new(p)?.count(interval))
}

/// Number of sign changes of `p` across the open interval, i.e. the number of
/// distinct roots of odd multiplicity. `p` must not vanish at a finite endpoint.
pub fn sign_change_count(p: &RationalPolynomial, interval: &Interval) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    for b in [&interval.lo, &interval.hi] {
        if let Bound::Finite(x) = b {
            if p.eval(x).is_zero() {
                return Err(Error::RootAtEndpoint(scalar::format_scalar(x)));
            }
        }
    }
    let odd = odd_part(p)?;
    if odd.degree() == Some(0) {
        return Ok(0);
    }
    sturm_distinct_roots(&odd, interval)
}

/// `1 + max |c_i / c_n|`: every real root has smaller magnitude.
pub fn cauchy_bound(p: &RationalPolynomial) -> Result<Scalar> {
    let lc = p.leading().ok_or(Error::ZeroPolynomial)?.abs();
    let m = p.coeffs()[..p.coeffs().len() - 1]
        .iter()
        .map(|c| c.abs() / &lc)
        .max()
        .unwrap_or_else(Scalar::zero);
    Ok(m + Scalar::one())
}

/// Closed rational intervals `[lo, hi]`, each holding exactly one distinct
/// root of `p` inside the open search interval, of width at most `width`
/// (single points for roots hit exactly). Sorted left to right.
pub fn isolate_roots(
    p: &RationalPolynomial,
    interval: &Interval,
    width: &Scalar,
) -> Result<Vec<(Scalar, Scalar)>> {
    let chain = SturmChain::new(p)?;
    let sf = &chain.chain[0];
    let bound = cauchy_bound(sf)?;
    let clamp = |b: &Bound, default: Scalar| match b {
        Bound::Finite(x) => x.clone(),
        _ => default,
    };
    let lo = clamp(&interval.lo, -bound.clone());
    let hi = clamp(&interval.hi, bound.clone());
    let mut out = Vec::new();
    let mut stack = vec![(lo, hi)];
    while let Some((a, b)) = stack.pop() {
        let c = chain.count(&Interval::open(a.clone(), b.clone()));
        if c == 0 {
            continue;
        }
        if c == 1 && &(&b - &a) <= width {
            out.push((a, b));
            continue;
        }
        let m = (&a + &b) / Scalar::from_integer(2.into());
        if sf.eval(&m).is_zero() {
            out.push((m.clone(), m.clone()));
        }
        stack.push((m.clone(), b));
        stack.push((a, m));
    }
    out.sort();
    Ok(out)
}
