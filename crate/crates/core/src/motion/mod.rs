//! Linear-motion cost and the `(d/2)·C(n, d+1)` motion planners.
//!
//! A linear motion `(1-t)P + tQ` changes the orientation of a `(d+1)`-subset
//! exactly at the odd-multiplicity roots of its pencil on `(0, ∞)`. Before
//! the linear part the target may be repositioned for free: a diagonal
//! scaling with an even number of negative entries, or a perturbation inside
//! the robust radius, never changes an orientation.

mod oracle;
mod perturb;

pub use oracle::{discretized_cost, DiscretizedCost};
pub use perturb::{perturb_general, profiles_nonvanishing};

use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{require_general_position, robust_radius, subset_det, PointTuple};
use crate::pencil::{
    build_pencil, certify_localisation, decaying_lambda, sign_rule_count, MixedMinors, PencilPolynomial,
};
use crate::scalar::{self, dyadic, Scalar};
use crate::sturm::{isolate_roots, sign_change_count, sturm_distinct_roots, Interval};
use crate::subsets::binomial;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SegmentKind {
    Linear,
    ZeroCostScaling {
        #[serde(with = "scalar::vec")]
        lambda: Vec<Scalar>,
    },
    ZeroCostRotation { description: String },
    /// Straight-line move of every point by at most `radius` (max-norm),
    /// inside the robust radius of both endpoints.
    ZeroCostPerturbation {
        #[serde(with = "scalar")]
        radius: Scalar,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MotionSegment {
    #[serde(flatten)]
    pub kind: SegmentKind,
    pub start: PointTuple,
    pub end: PointTuple,
}

impl MotionSegment {
    pub fn is_zero_cost(&self) -> bool {
        !matches!(self.kind, SegmentKind::Linear)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateCost {
    pub label: String,
    pub total: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MotionPlan {
    pub n: usize,
    pub d: usize,
    pub segments: Vec<MotionSegment>,
    /// Flip count per `(d+1)`-subset in colex order.
    pub ledger: Vec<u32>,
    pub total: u64,
    /// Set when two subsets degenerate at the same instant, or a subset
    /// touches degeneracy without flipping. The cost is unaffected; an
    /// infinitesimal perturbation separates the events.
    pub requires_serialization: bool,
    pub candidates: Vec<CandidateCost>,
}

impl MotionPlan {
    pub fn start(&self) -> &PointTuple {
        &self.segments.first().expect("plan has segments").start
    }

    pub fn end(&self) -> &PointTuple {
        &self.segments.last().expect("plan has segments").end
    }

    pub fn bound(&self) -> f64 {
        self.d as f64 / 2.0 * binomial(self.n, self.d + 1) as f64
    }

    /// `total <= (d/2)·C(n, d+1)`, compared in integers.
    pub fn meets_half_bound(&self) -> bool {
        2 * self.total <= self.d as u64 * binomial(self.n, self.d + 1)
    }

    /// Per-subset CSV rows `subset,flips` with subsets written `i-j-k`.
    pub fn ledger_csv(&self) -> String {
        let mut out = String::from("subset,flips\n");
        for (s, c) in crate::subsets::colex(self.n, self.d + 1).zip(&self.ledger) {
            let label: Vec<String> = s.iter().map(ToString::to_string).collect();
            out.push_str(&format!("{},{}\n", label.join("-"), c));
        }
        out
    }
}

fn check_endpoints(p: &PointTuple, q: &PointTuple) -> Result<Vec<Vec<usize>>> {
    p.check_same_shape(q)?;
    if p.len() < p.dim() + 1 {
        return Err(Error::InvalidParameter("need n >= d+1".into()));
    }
    let subsets: Vec<Vec<usize>> = p.subsets().collect();
    for s in &subsets {
        if subset_det(p, s).is_zero() || subset_det(q, s).is_zero() {
            return Err(Error::EndpointDegeneracy { subset: s.clone() });
        }
    }
    Ok(subsets)
}

pub fn subset_pencil(p: &PointTuple, q: &PointTuple, subset: &[usize], lambda: &[Scalar]) -> Result<PencilPolynomial> {
    let mut pencil = build_pencil(&p.select(subset), &q.select(subset), lambda)?;
    pencil.subset = subset.to_vec();
    Ok(pencil)
}

/// Detects degeneracies that are not isolated single-subset events.
fn needs_serialization(pencils: &[PencilPolynomial]) -> Result<bool> {
    let width = dyadic(40);
    let mut events: Vec<(Scalar, Scalar, usize)> = Vec::new();
    for (idx, f) in pencils.iter().enumerate() {
        let positive = Interval::positive_axis();
        if sturm_distinct_roots(&f.poly, &positive)? != sign_change_count(&f.poly, &positive)? {
            return Ok(true);
        }
        for (a, b) in isolate_roots(&f.poly, &positive, &width)? {
            events.push((a, b, idx));
        }
    }
    events.sort();
    for i in 0..events.len() {
        for j in i + 1..events.len() {
            if events[j].0 > events[i].1 {
                break;
            }
            let (fi, fj) = (&pencils[events[i].2].poly, &pencils[events[j].2].poly);
            let g = fi.gcd(fj);
            if g.degree().unwrap_or(0) > 0 && sturm_distinct_roots(&g, &Interval::positive_axis())? > 0 {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Cost of the straight-line motion from `p` to `target`.
pub fn linear_cost(p: &PointTuple, target: &PointTuple) -> Result<MotionPlan> {
    let subsets = check_endpoints(p, target)?;
    let ones = vec![Scalar::one(); p.dim()];
    let pencils: Vec<PencilPolynomial> = subsets
        .par_iter()
        .map(|s| subset_pencil(p, target, s, &ones))
        .collect::<Result<_>>()?;
    let ledger: Vec<u32> = pencils
        .par_iter()
        .map(|f| sign_change_count(&f.poly, &Interval::positive_axis()).map(|c| c as u32))
        .collect::<Result<_>>()?;
    let total = ledger.iter().map(|&c| c as u64).sum();
    Ok(MotionPlan {
        n: p.len(),
        d: p.dim(),
        segments: vec![MotionSegment {
            kind: SegmentKind::Linear,
            start: p.clone(),
            end: target.clone(),
        }],
        ledger,
        total,
        requires_serialization: needs_serialization(&pencils)?,
        candidates: vec![CandidateCost { label: "linear".into(), total }],
    })
}

fn check_scaling(lambda: &[Scalar]) -> Result<()> {
    if let Some(j) = lambda.iter().position(Zero::is_zero) {
        return Err(Error::ZeroScaling(j));
    }
    if lambda.iter().filter(|l| l.is_negative()).count() % 2 == 1 {
        return Err(Error::ParityViolation(lambda.iter().map(scalar::sign).collect()));
    }
    Ok(())
}

/// `diag(λ) P`; with nonzero entries and an even number of negatives this is
/// reachable without any orientation change.
pub fn scale_tuple(p: &PointTuple, lambda: &[Scalar]) -> Result<PointTuple> {
    if lambda.len() != p.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), found: lambda.len() });
    }
    check_scaling(lambda)?;
    Ok(p.map_coords(|_, k, c| c * &lambda[k]))
}

pub fn scaling_segment(p: &PointTuple, lambda: &[Scalar]) -> Result<MotionSegment> {
    Ok(MotionSegment {
        kind: SegmentKind::ZeroCostScaling { lambda: lambda.to_vec() },
        start: p.clone(),
        end: scale_tuple(p, lambda)?,
    })
}

/// Even `d`: the cheaper of the linear motions to `P'` and to `-P'`, the
/// latter followed by the free scaling `-I`.
pub fn plan_even_d(p: &PointTuple, q: &PointTuple) -> Result<MotionPlan> {
    let d = p.dim();
    if d % 2 != 0 {
        return Err(Error::InvalidParameter(format!("plan_even_d needs even d, got {d}")));
    }
    p.check_same_shape(q)?;
    require_general_position(p)?;
    require_general_position(q)?;
    let direct = linear_cost(p, q)?;
    let flipped = q.negated();
    let mirrored = linear_cost(p, &flipped)?;
    let cap = d as u64 * binomial(p.len(), d + 1);
    if direct.total + mirrored.total > cap {
        return Err(Error::InvariantBreach(format!(
            "branch costs {} + {} exceed d·C(n,d+1) = {cap}",
            direct.total, mirrored.total
        )));
    }
    let candidates = vec![
        CandidateCost { label: "direct".into(), total: direct.total },
        CandidateCost { label: "negated".into(), total: mirrored.total },
    ];
    let mut plan = if mirrored.total < direct.total {
        let minus = vec![-Scalar::one(); d];
        let mut plan = mirrored;
        plan.segments.push(scaling_segment(&flipped, &minus)?);
        plan
    } else {
        direct
    };
    plan.candidates = candidates;
    if !plan.meets_half_bound() {
        return Err(Error::InvariantBreach(format!("total {} above (d/2)·C(n,d+1)", plan.total)));
    }
    Ok(plan)
}

/// Sign pattern of the scaling factors, with an even number of `-1`s.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SignVector(Vec<i8>);

impl TryFrom<Vec<i8>> for SignVector {
    type Error = Error;

    fn try_from(v: Vec<i8>) -> Result<Self> {
        SignVector::new(v)
    }
}

impl From<SignVector> for Vec<i8> {
    fn from(s: SignVector) -> Vec<i8> {
        s.0
    }
}

impl SignVector {
    pub fn new(v: Vec<i8>) -> Result<Self> {
        if v.iter().any(|s| s.abs() != 1) {
            return Err(Error::InvalidParameter(format!("sign vector {v:?} must hold ±1")));
        }
        if v.iter().filter(|&&s| s < 0).count() % 2 == 1 {
            return Err(Error::ParityViolation(v));
        }
        Ok(SignVector(v))
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    /// All `2^(d-1)` even-parity vectors, in binary-counter order.
    pub fn enumerate(d: usize) -> Vec<SignVector> {
        (0u64..1 << d)
            .filter(|m| m.count_ones() % 2 == 0)
            .map(|m| SignVector((0..d).map(|j| if m >> j & 1 == 1 { -1 } else { 1 }).collect()))
            .collect()
    }

    /// Uniform over even-parity vectors: free first `d-1` signs, last one fixes parity.
    pub fn sample<R: Rng>(d: usize, rng: &mut R) -> SignVector {
        let mut v: Vec<i8> = (0..d - 1).map(|_| if rng.random::<bool>() { -1 } else { 1 }).collect();
        let negatives = v.iter().filter(|&&s| s < 0).count();
        v.push(if negatives % 2 == 1 { -1 } else { 1 });
        SignVector(v)
    }
}

/// Per-sign-vector outcome of the odd-dimension analysis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignVectorCost {
    pub signs: SignVector,
    #[serde(with = "scalar")]
    pub eta: Scalar,
    /// Flips predicted by counting negative `λ_j r_{j-1} r_j`.
    pub rule_ledger: Vec<u32>,
    /// Flips counted by Sturm sequences on the actual pencils.
    pub sturm_ledger: Vec<u32>,
    pub total: u64,
}

pub const ETA_START_EXP: u32 = 10;
pub const ETA_MAX_HALVINGS: u32 = 400;

/// Largest `η = 2^-k`, `k >= 10`, at which every subset's pencil has one
/// certified root in each localisation interval.
pub fn certified_eta(p: &PointTuple, q: &PointTuple, signs: &SignVector) -> Result<Scalar> {
    let minors = subset_minors(p, q)?;
    certified_eta_with(&minors, signs)
}

fn subset_minors(p: &PointTuple, q: &PointTuple) -> Result<Vec<MixedMinors>> {
    p.subsets()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|s| MixedMinors::new(&p.select(s), &q.select(s)))
        .collect()
}

fn certified_eta_with(minors: &[MixedMinors], signs: &SignVector) -> Result<Scalar> {
    let profiles: Vec<_> = minors.iter().map(MixedMinors::profile).collect();
    for k in ETA_START_EXP..ETA_START_EXP + ETA_MAX_HALVINGS {
        let eta = dyadic(k);
        let lambda = decaying_lambda(&eta, signs.signs());
        let ok = minors
            .par_iter()
            .zip(&profiles)
            .map(|(m, prof)| {
                let f = m.pencil(&lambda)?;
                certify_localisation(&f, prof)
            })
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .all(|b| b);
        if ok {
            return Ok(eta);
        }
    }
    Err(Error::Exhausted("no decaying scaling certified the root localisation".into()))
}

/// Costs every sign vector against the (already perturbed) target `q`.
pub fn odd_sign_vector_cost(p: &PointTuple, q: &PointTuple, signs: &SignVector) -> Result<SignVectorCost> {
    odd_sign_vector_cost_with(&subset_minors(p, q)?, signs)
}

fn odd_sign_vector_cost_with(minors: &[MixedMinors], signs: &SignVector) -> Result<SignVectorCost> {
    let eta = certified_eta_with(minors, signs)?;
    let lambda = decaying_lambda(&eta, signs.signs());
    let per: Vec<(u32, u32)> = minors
        .par_iter()
        .map(|m| {
            let rule = sign_rule_count(&m.profile(), &lambda) as u32;
            let f = m.pencil(&lambda)?;
            let sturm = sign_change_count(&f.poly, &Interval::positive_axis())? as u32;
            Ok((rule, sturm))
        })
        .collect::<Result<_>>()?;
    let (rule_ledger, sturm_ledger): (Vec<u32>, Vec<u32>) = per.into_iter().unzip();
    let total = rule_ledger.iter().map(|&c| c as u64).sum();
    Ok(SignVectorCost { signs: signs.clone(), eta, rule_ledger, sturm_ledger, total })
}

/// Sign vectors are enumerated exhaustively up to this dimension.
pub const EXHAUSTIVE_MAX_D: usize = 11;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OddPlanOptions {
    /// Sign vectors sampled when `d > EXHAUSTIVE_MAX_D`.
    pub tries: usize,
    pub seed: u64,
}

impl Default for OddPlanOptions {
    fn default() -> Self {
        OddPlanOptions { tries: 64, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OddPlan {
    pub plan: MotionPlan,
    pub perturbed_target: PointTuple,
    pub exhaustive: bool,
    pub sign_vectors: Vec<SignVectorCost>,
}

/// Odd `d`: perturb the target so every mixed determinant is nonzero, then
/// scale it by `λ_j = s_j η^j` for the cheapest even-parity sign vector
/// `s`, and move linearly.
pub fn plan_odd_d(p: &PointTuple, q: &PointTuple, opts: OddPlanOptions) -> Result<OddPlan> {
    let d = p.dim();
    if d % 2 == 0 || d < 3 {
        return Err(Error::InvalidParameter(format!("plan_odd_d needs odd d >= 3, got {d}")));
    }
    p.check_same_shape(q)?;
    require_general_position(p)?;
    require_general_position(q)?;
    let radius = robust_radius(q)?.epsilon;
    let q_pert = perturb_general(q, &radius, Some(p))?;

    let exhaustive = d <= EXHAUSTIVE_MAX_D;
    let vectors = if exhaustive {
        SignVector::enumerate(d)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut v: Vec<SignVector> = (0..opts.tries.max(1)).map(|_| SignVector::sample(d, &mut rng)).collect();
        v.shuffle(&mut rng);
        v
    };
    let minors = subset_minors(p, &q_pert)?;
    let costs = vectors
        .iter()
        .map(|s| odd_sign_vector_cost_with(&minors, s))
        .collect::<Result<Vec<_>>>()?;
    if let Some(bad) = costs.iter().find(|c| c.rule_ledger != c.sturm_ledger) {
        return Err(Error::InvariantBreach(format!(
            "sign rule disagrees with Sturm count for {:?}",
            bad.signs.signs()
        )));
    }
    let best = costs.iter().min_by_key(|c| c.total).expect("at least one sign vector");
    let lambda = decaying_lambda(&best.eta, best.signs.signs());
    let scaled = scale_tuple(&q_pert, &lambda)?;
    let mut plan = linear_cost(p, &scaled)?;
    if plan.ledger != best.rule_ledger {
        return Err(Error::InvariantBreach("linear cost disagrees with the sign rule".into()));
    }
    let inverse: Vec<Scalar> = lambda.iter().map(|l| Scalar::one() / l).collect();
    plan.segments.push(scaling_segment(&scaled, &inverse)?);
    if q_pert != *q {
        plan.segments.push(MotionSegment {
            kind: SegmentKind::ZeroCostPerturbation { radius },
            start: q_pert.clone(),
            end: q.clone(),
        });
    }
    plan.candidates = costs
        .iter()
        .map(|c| CandidateCost {
            label: format!("signs {:?}", c.signs.signs()),
            total: c.total,
        })
        .collect();
    if exhaustive && !plan.meets_half_bound() {
        return Err(Error::InvariantBreach(format!("total {} above (d/2)·C(n,d+1)", plan.total)));
    }
    Ok(OddPlan { plan, perturbed_target: q_pert, exhaustive, sign_vectors: costs })
}

/// Dispatches on the parity of `d`.
pub fn plan_theorem1(p: &PointTuple, q: &PointTuple, opts: OddPlanOptions) -> Result<MotionPlan> {
    if p.dim() % 2 == 0 {
        plan_even_d(p, q)
    } else {
        plan_odd_d(p, q, opts).map(|o| o.plan)
    }
}

/// Checks that a zero-cost segment keeps the order type: endpoints always,
/// and for scalings the intermediate `diag(|λ|^s)` at the sampled `s`.
pub fn verify_zero_cost_segment(seg: &MotionSegment, samples: usize) -> Result<bool> {
    use crate::geometry::order_type;
    let start = order_type(&seg.start)?;
    if order_type(&seg.end)? != start {
        return Ok(false);
    }
    if let SegmentKind::ZeroCostScaling { lambda } = &seg.kind {
        // positive magnitudes interpolate linearly; sign pairs rotate by π
        for i in 1..samples {
            let s = Scalar::new((i as i64).into(), (samples as i64).into());
            let mags: Vec<Scalar> = lambda
                .iter()
                .map(|l| Scalar::one() + (l.abs() - Scalar::one()) * &s)
                .collect();
            if order_type(&scale_tuple(&seg.start, &mags)?)? != start {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{hamming, mirror, order_type};
    use crate::pencil::coefficient_profile;
    use crate::scalar::int;

    fn tri() -> PointTuple {
        PointTuple::from_ints(2, &[&[0, 0], &[3, 1], &[1, 2]]).unwrap()
    }

    #[test]
    fn identity_motion_is_free() {
        let p = PointTuple::from_ints(2, &[&[0, 0], &[3, 1], &[1, 2], &[5, 4]]).unwrap();
        let plan = linear_cost(&p, &p).unwrap();
        assert_eq!(plan.total, 0);
        assert_eq!(plan.ledger, vec![0; 4]);
    }

    #[test]
    fn triangle_to_mirror_costs_one() {
        let plan = linear_cost(&tri(), &mirror(&tri())).unwrap();
        assert_eq!(plan.total, 1);
    }

    #[test]
    fn endpoint_degeneracy_rejected() {
        let p = tri();
        let q = PointTuple::from_ints(2, &[&[0, 0], &[1, 1], &[2, 2]]).unwrap();
        assert!(matches!(linear_cost(&p, &q), Err(Error::EndpointDegeneracy { .. })));
        assert!(matches!(linear_cost(&q, &p), Err(Error::EndpointDegeneracy { .. })));
    }

    #[test]
    fn scale_tuple_rules() {
        let p = PointTuple::from_ints(2, &[&[0, 0], &[3, 1], &[1, 2], &[5, 4]]).unwrap();
        let ot = order_type(&p).unwrap();
        assert_eq!(order_type(&scale_tuple(&p, &[int(2), int(3)]).unwrap()).unwrap(), ot);
        assert_eq!(order_type(&scale_tuple(&p, &[int(-1), int(-1)]).unwrap()).unwrap(), ot);
        assert!(matches!(scale_tuple(&p, &[int(-1), int(1)]), Err(Error::ParityViolation(_))));
        assert!(matches!(scale_tuple(&p, &[int(0), int(1)]), Err(Error::ZeroScaling(0))));
        let seg = scaling_segment(&p, &[int(-3), int(-5)]).unwrap();
        assert!(verify_zero_cost_segment(&seg, 8).unwrap());
    }

    #[test]
    fn even_plan_self_is_free() {
        let p = PointTuple::from_ints(2, &[&[0, 0], &[3, 1], &[1, 2], &[5, 4]]).unwrap();
        let plan = plan_even_d(&p, &p).unwrap();
        assert_eq!(plan.total, 0);
        assert_eq!(plan.segments.len(), 1);
    }

    #[test]
    fn even_plan_mirror_pair() {
        let p = PointTuple::from_ints(2, &[&[0, 0], &[3, 1], &[1, 2], &[5, 4]]).unwrap();
        let q = mirror(&p);
        let plan = plan_even_d(&p, &q).unwrap();
        let h = hamming(&order_type(&p).unwrap(), &order_type(&q).unwrap()).unwrap() as u64;
        assert!(plan.total >= h);
        assert!(plan.total <= 4);
        assert_eq!(plan.end(), &q);
    }

    #[test]
    fn sign_vectors() {
        let all = SignVector::enumerate(3);
        assert_eq!(all.len(), 4);
        assert!(all.iter().all(|s| s.signs().iter().filter(|&&x| x < 0).count() % 2 == 0));
        assert!(SignVector::new(vec![1, -1, 1]).is_err());
        assert!(SignVector::new(vec![1, 2]).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let s = SignVector::sample(5, &mut rng);
            assert!(SignVector::new(s.signs().to_vec()).is_ok());
        }
        assert_eq!(SignVector::enumerate(11).len(), 1024);
    }

    #[test]
    fn odd_rule_zero_when_all_products_positive() {
        // r_0 r_1, r_1 r_2, r_2 r_3 all positive and s = (+,+,+)
        let p = PointTuple::from_ints(3, &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        let q = p.scaled(&int(2));
        let prof = coefficient_profile(&p.select(&[0, 1, 2, 3]), &q.select(&[0, 1, 2, 3])).unwrap();
        assert!(prof.r.iter().all(|r| r.is_positive()));
        let cost = odd_sign_vector_cost(&p, &q, &SignVector::new(vec![1, 1, 1]).unwrap()).unwrap();
        assert_eq!(cost.rule_ledger, vec![0]);
        assert_eq!(cost.sturm_ledger, vec![0]);
    }

    #[test]
    fn odd_plan_small() {
        let p = PointTuple::from_ints(3, &[&[0, 0, 0], &[4, 1, 0], &[1, 3, 1], &[0, 1, 5], &[2, 2, 2]]).unwrap();
        let q = PointTuple::from_ints(3, &[&[1, 0, 2], &[0, 4, 1], &[3, 3, 3], &[5, 0, 1], &[1, 1, -2]]).unwrap();
        let out = plan_odd_d(&p, &q, OddPlanOptions::default()).unwrap();
        assert!(out.exhaustive);
        assert_eq!(out.sign_vectors.len(), 4);
        assert!(2 * out.plan.total <= 3 * 5);
        assert_eq!(out.plan.end(), &q);
        assert_eq!(order_type(&out.perturbed_target).unwrap(), order_type(&q).unwrap());
        assert!(plan_odd_d(&PointTuple::from_ints(2, &[&[0, 0], &[1, 0], &[0, 1]]).unwrap(), &tri(), OddPlanOptions::default()).is_err());
    }

    #[test]
    fn plan_json_shape() {
        let p = PointTuple::from_ints(2, &[&[0, 0], &[3, 1], &[1, 2], &[5, 4]]).unwrap();
        let plan = plan_even_d(&p, &mirror(&p)).unwrap();
        let v: serde_json::Value = serde_json::to_value(&plan).unwrap();
        assert!(v["segments"][0]["kind"].is_string());
        assert_eq!(v["ledger"].as_array().unwrap().len(), 4);
        let back: MotionPlan = serde_json::from_value(v).unwrap();
        assert_eq!(back, plan);
        let csv = plan.ledger_csv();
        assert!(csv.starts_with("subset,flips\n0-1-2,"));
    }
}
