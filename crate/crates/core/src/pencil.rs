//! The determinant pencil of a linear motion and its coefficient structure.
//!
//! For `d+1` points `p_k` moving towards `λ ∘ p'_k`, the orientation at
//! parameter `x = t/(1-t)` has the sign of
//! `f(x) = det [1 ... 1; p_k + x λ ∘ p'_k]`, a polynomial of degree at most
//! `d`. Its coefficients are governed by the mixed determinants `r_j` that
//! take the first `j` coordinate rows from `p'` and the rest from `p`.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::linalg::bordered_det;
use crate::poly::RationalPolynomial;
use crate::scalar::{self, int, Scalar};
use crate::sturm::{Interval, SturmChain};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilPolynomial {
    pub subset: Vec<usize>,
    pub poly: RationalPolynomial,
    #[serde(with = "scalar::vec")]
    pub lambda: Vec<Scalar>,
}

fn check_pair(p_sub: &[&Point], q_sub: &[&Point]) -> Result<usize> {
    let d = p_sub.len().saturating_sub(1);
    if d < 1 || q_sub.len() != d + 1 {
        return Err(Error::DimensionMismatch { expected: d + 1, found: q_sub.len() });
    }
    for pt in p_sub.iter().chain(q_sub) {
        if pt.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: pt.dim() });
        }
    }
    Ok(d)
}

fn pencil_det_at(p_sub: &[&Point], q_sub: &[&Point], lambda: &[Scalar], x: &Scalar) -> Scalar {
    let cols: Vec<Vec<Scalar>> = p_sub
        .iter()
        .zip(q_sub)
        .map(|(p, q)| {
            p.coords
                .iter()
                .zip(&q.coords)
                .zip(lambda)
                .map(|((a, b), l)| a + x * l * b)
                .collect()
        })
        .collect();
    let refs: Vec<&[Scalar]> = cols.iter().map(Vec::as_slice).collect();
    bordered_det(&refs)
}

/// Newton interpolation through `(k, values[k])`, `k = 0..`, expanded to
/// monomial coefficients.
fn interpolate_at_naturals(values: &[Scalar]) -> RationalPolynomial {
    let n = values.len();
    let mut dd = values.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / int(level as i64);
        }
    }
    // Horner on the Newton basis: dd[0] + (x-0)(dd[1] + (x-1)(dd[2] + ...))
    let mut acc = RationalPolynomial::constant(dd[n - 1].clone());
    for i in (0..n - 1).rev() {
        let node = RationalPolynomial::linear_root(&int(i as i64));
        acc = &(&acc * &node) + &RationalPolynomial::constant(dd[i].clone());
    }
    acc
}

/// Expands the pencil exactly. Rejects zero scalings and a vanishing
/// `f(0)` (degenerate starting orientation).
pub fn build_pencil(p_sub: &[&Point], q_sub: &[&Point], lambda: &[Scalar]) -> Result<PencilPolynomial> {
    let d = check_pair(p_sub, q_sub)?;
    if lambda.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: lambda.len() });
    }
    if let Some(j) = lambda.iter().position(Zero::is_zero) {
        return Err(Error::ZeroScaling(j));
    }
    let values: Vec<Scalar> = (0..=d)
        .map(|k| pencil_det_at(p_sub, q_sub, lambda, &int(k as i64)))
        .collect();
    if values[0].is_zero() {
        return Err(Error::EndpointDegeneracy { subset: (0..=d).collect() });
    }
    Ok(PencilPolynomial {
        subset: (0..=d).collect(),
        poly: interpolate_at_naturals(&values),
        lambda: lambda.to_vec(),
    })
}

/// All `2^d` mixed determinants of a subset pair: entry `mask` takes the
/// coordinate rows in `mask` from `p'` and the others from `p`. The pencil
/// coefficient `c_j` is the sum over `|mask| = j` of `Π_{i∈mask} λ_i` times
/// the entry, so any `λ` can be expanded without new determinants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedMinors {
    d: usize,
    minors: Vec<Scalar>,
}

impl MixedMinors {
    pub fn new(p_sub: &[&Point], q_sub: &[&Point]) -> Result<Self> {
        let d = check_pair(p_sub, q_sub)?;
        let minors = (0u32..1 << d)
            .map(|mask| {
                let cols: Vec<Vec<Scalar>> = p_sub
                    .iter()
                    .zip(q_sub)
                    .map(|(p, q)| {
                        (0..d)
                            .map(|k| if mask >> k & 1 == 1 { q.coords[k].clone() } else { p.coords[k].clone() })
                            .collect()
                    })
                    .collect();
                let refs: Vec<&[Scalar]> = cols.iter().map(Vec::as_slice).collect();
                bordered_det(&refs)
            })
            .collect();
        Ok(MixedMinors { d, minors })
    }

    pub fn profile(&self) -> CoefficientProfile {
        CoefficientProfile {
            r: (0..=self.d).map(|j| self.minors[(1usize << j) - 1].clone()).collect(),
        }
    }

    pub fn pencil(&self, lambda: &[Scalar]) -> Result<PencilPolynomial> {
        if lambda.len() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: lambda.len() });
        }
        if let Some(j) = lambda.iter().position(Zero::is_zero) {
            return Err(Error::ZeroScaling(j));
        }
        if self.minors[0].is_zero() {
            return Err(Error::EndpointDegeneracy { subset: (0..=self.d).collect() });
        }
        let mut coeffs = vec![Scalar::zero(); self.d + 1];
        for (mask, m) in self.minors.iter().enumerate() {
            if m.is_zero() {
                continue;
            }
            let weight = (0..self.d)
                .filter(|k| mask >> k & 1 == 1)
                .fold(Scalar::one(), |acc, k| acc * &lambda[k]);
            coeffs[mask.count_ones() as usize] += weight * m;
        }
        Ok(PencilPolynomial {
            subset: (0..=self.d).collect(),
            poly: RationalPolynomial::new(coeffs),
            lambda: lambda.to_vec(),
        })
    }
}

/// `r_0, ..., r_d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientProfile {
    #[serde(with = "scalar::vec")]
    pub r: Vec<Scalar>,
}

impl CoefficientProfile {
    pub fn first_vanishing(&self) -> Option<usize> {
        self.r.iter().position(Zero::is_zero)
    }
}

pub fn coefficient_profile(p_sub: &[&Point], q_sub: &[&Point]) -> Result<CoefficientProfile> {
    let d = check_pair(p_sub, q_sub)?;
    let r = (0..=d)
        .map(|j| {
            let cols: Vec<Vec<Scalar>> = p_sub
                .iter()
                .zip(q_sub)
                .map(|(p, q)| (0..d).map(|k| if k < j { q.coords[k].clone() } else { p.coords[k].clone() }).collect())
                .collect();
            let refs: Vec<&[Scalar]> = cols.iter().map(Vec::as_slice).collect();
            bordered_det(&refs)
        })
        .collect();
    Ok(CoefficientProfile { r })
}

/// `λ_j = s_j η^j` for `j = 1..=d`.
pub fn decaying_lambda(eta: &Scalar, signs: &[i8]) -> Vec<Scalar> {
    let mut power = Scalar::one();
    signs
        .iter()
        .map(|&s| {
            power = &power * eta;
            &power * int(s as i64)
        })
        .collect()
}

/// The localisation interval `I_j` between `-(r_{j-1}/r_j)/(2λ_j)` and
/// `-(r_{j-1}/r_j)·2/λ_j`, `j` 1-based.
pub fn localisation_interval(profile: &CoefficientProfile, lambda: &[Scalar], j: usize) -> Interval {
    let ratio = &profile.r[j - 1] / &profile.r[j];
    let a = -&ratio / (int(2) * &lambda[j - 1]);
    let b = -&ratio * int(2) / &lambda[j - 1];
    if a < b { Interval::open(a, b) } else { Interval::open(b, a) }
}

/// True iff `f` has exactly one root in each `I_j` and the intervals are
/// pairwise disjoint, which accounts for all `d` roots.
pub fn certify_localisation(
    pencil: &PencilPolynomial,
    profile: &CoefficientProfile,
) -> Result<bool> {
    let d = pencil.lambda.len();
    if profile.first_vanishing().is_some() || pencil.poly.degree() != Some(d) {
        return Ok(false);
    }
    let intervals: Vec<Interval> = (1..=d).map(|j| localisation_interval(profile, &pencil.lambda, j)).collect();
    let mut ends: Vec<(Scalar, Scalar)> = intervals
        .iter()
        .map(|iv| (iv.lo.finite().unwrap().clone(), iv.hi.finite().unwrap().clone()))
        .collect();
    ends.sort();
    if ends.windows(2).any(|w| w[0].1 >= w[1].0) {
        return Ok(false);
    }
    let chain = SturmChain::new(&pencil.poly)?;
    Ok(intervals.iter().all(|iv| chain.count(iv) == 1))
}

/// Flip count predicted by the sign rule: the number of `j` with
/// `λ_j r_{j-1} r_j < 0`.
pub fn sign_rule_count(profile: &CoefficientProfile, lambda: &[Scalar]) -> usize {
    (1..=lambda.len())
        .filter(|&j| (&lambda[j - 1] * &profile.r[j - 1] * &profile.r[j]).is_negative())
        .count()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoefficientTerm {
    pub j: usize,
    #[serde(with = "scalar")]
    pub coefficient: Scalar,
    #[serde(with = "scalar")]
    pub predicted: Scalar,
    pub relative_error: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoefficientReport {
    #[serde(with = "scalar")]
    pub eta: Scalar,
    pub signs: Vec<i8>,
    pub terms: Vec<CoefficientTerm>,
    pub max_error: f64,
    /// Same quantity at `eta / 10`.
    pub refined_max_error: f64,
    pub decreasing: bool,
    pub localisation_certified: bool,
}

fn coefficient_terms(
    p_sub: &[&Point],
    q_sub: &[&Point],
    profile: &CoefficientProfile,
    eta: &Scalar,
    signs: &[i8],
) -> Result<(Vec<CoefficientTerm>, PencilPolynomial)> {
    let lambda = decaying_lambda(eta, signs);
    let pencil = build_pencil(p_sub, q_sub, &lambda)?;
    let mut prefix = Scalar::one();
    let mut terms = Vec::with_capacity(lambda.len() + 1);
    for j in 0..=lambda.len() {
        if j > 0 {
            prefix = &prefix * &lambda[j - 1];
        }
        let predicted = &prefix * &profile.r[j];
        let coefficient = pencil.poly.coeff(j);
        let rel = ((&coefficient / &predicted) - Scalar::one()).abs();
        terms.push(CoefficientTerm {
            j,
            coefficient,
            predicted,
            relative_error: scalar::to_f64(&rel),
        });
    }
    Ok((terms, pencil))
}

/// Compares each pencil coefficient `c_j` against `λ_1⋯λ_j r_j` for
/// `λ_j = s_j η^j`, at `η` and at `η/10`. With `require_decrease`, a
/// non-decreasing error is reported as an error rather than a flag.
pub fn verify_lemma_rj(
    p_sub: &[&Point],
    q_sub: &[&Point],
    eta: &Scalar,
    signs: &[i8],
    require_decrease: bool,
) -> Result<CoefficientReport> {
    let d = check_pair(p_sub, q_sub)?;
    if d < 2 {
        return Err(Error::InvalidParameter("coefficient check needs d >= 2".into()));
    }
    if signs.len() != d || signs.iter().any(|s| s.abs() != 1) {
        return Err(Error::InvalidParameter(format!("need {d} signs in {{-1, +1}}")));
    }
    if !(eta.is_positive() && *eta < Scalar::one()) {
        return Err(Error::InvalidParameter("eta must lie in (0, 1)".into()));
    }
    let profile = coefficient_profile(p_sub, q_sub)?;
    if let Some(j) = profile.first_vanishing() {
        return Err(Error::VanishingMixedDeterminant { subset: (0..=d).collect(), j });
    }
    let max = |t: &[CoefficientTerm]| t.iter().map(|x| x.relative_error).fold(0.0, f64::max);
    let (terms, pencil) = coefficient_terms(p_sub, q_sub, &profile, eta, signs)?;
    let refined_eta = eta / int(10);
    let (refined, _) = coefficient_terms(p_sub, q_sub, &profile, &refined_eta, signs)?;
    let max_error = max(&terms);
    let refined_max_error = max(&refined);
    let decreasing = refined_max_error < max_error || max_error == 0.0;
    if require_decrease && !decreasing {
        return Err(Error::InvariantBreach(format!(
            "coefficient error did not decrease: {max_error} -> {refined_max_error}"
        )));
    }
    Ok(CoefficientReport {
        eta: eta.clone(),
        signs: signs.to_vec(),
        terms,
        max_error,
        refined_max_error,
        decreasing,
        localisation_certified: certify_localisation(&pencil, &profile)?,
    })
}
