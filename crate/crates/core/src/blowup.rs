//! Cloud blow-ups of planar same-order-type pairs.
//!
//! Every point `q_i` of an `r`-tuple is replaced by `m` points on a small
//! parabolic arc `q_i + kδ a_i + k²δ² b_i`, `k = 1..m`, where the directed
//! line through `q_i` along `a_i` splits the other sites into the same
//! left/right index sets for `Q` and `Q'`. The blown-up pair keeps a common
//! order type, while every one-point-per-cloud selection reproduces `Q`
//! (resp. `Q'`). If `Q` and `Q'` are not isotopic, each of the `m^3`
//! selection triples must flip an even, positive number of times, which
//! yields the `2m^3` lower bound.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{order_type, orient, require_general_position, robust_radius, OrientationSign, Point, PointTuple};
use crate::scalar::{self, int, Scalar};
use crate::subsets::binomial;

const DELTA_MAX_HALVINGS: usize = 200;

/// Direction, curvature direction and induced side partition at one site.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CloudSite {
    #[serde(with = "scalar::vec")]
    pub a: Vec<Scalar>,
    #[serde(with = "scalar::vec")]
    pub b: Vec<Scalar>,
    /// Sites strictly left of the directed line through `q_i` along `a`.
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl CloudSite {
    fn side_of(&self, j: usize) -> OrientationSign {
        if self.left.binary_search(&j).is_ok() {
            OrientationSign::Positive
        } else {
            OrientationSign::Negative
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CloudSpec {
    #[serde(with = "scalar")]
    pub epsilon: Scalar,
    #[serde(with = "scalar")]
    pub delta: Scalar,
    pub sites: Vec<CloudSite>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub r: usize,
    pub m: usize,
    /// `2 m^3`, conditional on `dist(Q, Q') > 0`.
    pub min_flips: String,
    /// `2 r^-3`, so that `2 m^3 = 2 r^-3 n^3` with `n = rm`.
    #[serde(with = "scalar")]
    pub constant: Scalar,
    pub constant_f64: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowupResult {
    pub p: PointTuple,
    pub p_prime: PointTuple,
    pub spec: CloudSpec,
    pub spec_prime: CloudSpec,
    pub certificate: Certificate,
}

fn cross(u: &[Scalar], w: &[Scalar]) -> Scalar {
    &u[0] * &w[1] - &u[1] * &w[0]
}

fn left_normal(a: &[Scalar]) -> Vec<Scalar> {
    vec![-a[1].clone(), a[0].clone()]
}

fn half_plane(v: &[Scalar]) -> u8 {
    if v[1].is_positive() || (v[1].is_zero() && v[0].is_positive()) {
        0
    } else {
        1
    }
}

fn angular_cmp(u: &[Scalar], w: &[Scalar]) -> Ordering {
    half_plane(u).cmp(&half_plane(w)).then_with(|| {
        let c = cross(u, w);
        if c.is_positive() {
            Ordering::Less
        } else if c.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

/// Candidate directions at site `i`: one inside each angular gap between
/// consecutive directions `±(q_j - q_i)`. Every gap is narrower than `π`
/// because the boundary set is centrally symmetric with at least two lines,
/// so the sum of the two bounding vectors lies strictly inside it.
fn gap_directions(q: &PointTuple, i: usize) -> Vec<Vec<Scalar>> {
    let qi = q.point(i);
    let mut bounds: Vec<Vec<Scalar>> = Vec::new();
    for (j, qj) in q.points().iter().enumerate() {
        if j != i {
            let v = qj.sub(qi);
            bounds.push(v.iter().map(|c| -c).collect());
            bounds.push(v);
        }
    }
    bounds.sort_by(|u, w| angular_cmp(u, w));
    let k = bounds.len();
    (0..k)
        .map(|t| {
            let (u, w) = (&bounds[t], &bounds[(t + 1) % k]);
            vec![&u[0] + &w[0], &u[1] + &w[1]]
        })
        .filter(|v| !(v[0].is_zero() && v[1].is_zero()))
        .collect()
}

/// Left/right partition of the other sites by the line through `q_i` along
/// `a`; `None` if `a` is parallel to some `q_j - q_i`.
pub fn partition(q: &PointTuple, i: usize, a: &[Scalar]) -> Option<(Vec<usize>, Vec<usize>)> {
    let (mut left, mut right) = (Vec::new(), Vec::new());
    for (j, qj) in q.points().iter().enumerate() {
        if j == i {
            continue;
        }
        let c = cross(a, &qj.sub(q.point(i)));
        if c.is_positive() {
            left.push(j);
        } else if c.is_negative() {
            right.push(j);
        } else {
            return None;
        }
    }
    Some((left, right))
}

fn require_planar(q: &PointTuple) -> Result<()> {
    if q.dim() != 2 {
        return Err(Error::InvalidParameter(format!("blow-ups are planar, got d = {}", q.dim())));
    }
    if q.len() < 3 {
        return Err(Error::InvalidParameter("blow-up needs at least 3 sites".into()));
    }
    Ok(())
}

/// Picks `a_i` for each site and records the induced partition.
pub fn choose_directions(q: &PointTuple) -> Result<Vec<CloudSite>> {
    require_planar(q)?;
    require_general_position(q)?;
    (0..q.len())
        .map(|i| {
            let a = gap_directions(q, i)
                .into_iter()
                .next()
                .ok_or_else(|| Error::InvariantBreach("no angular gap found".into()))?;
            let (left, right) = partition(q, i, &a).ok_or_else(|| Error::InvariantBreach("gap direction is parallel to an edge".into()))?;
            Ok(CloudSite { b: left_normal(&a), a, left, right })
        })
        .collect()
}

/// Finds, for each site of `q'`, a direction inducing the recorded partition.
pub fn match_directions(q_prime: &PointTuple, sites: &[CloudSite]) -> Result<Vec<CloudSite>> {
    require_planar(q_prime)?;
    if sites.len() != q_prime.len() {
        return Err(Error::ShapeMismatch { n1: sites.len(), d1: 2, n2: q_prime.len(), d2: 2 });
    }
    sites
        .iter()
        .enumerate()
        .map(|(i, site)| {
            gap_directions(q_prime, i)
                .into_iter()
                .find(|a| partition(q_prime, i, a).is_some_and(|(l, r)| l == site.left && r == site.right))
                .map(|a| CloudSite {
                    b: left_normal(&a),
                    a,
                    left: site.left.clone(),
                    right: site.right.clone(),
                })
                .ok_or_else(|| Error::OrderTypeMismatch(format!("no direction at site {i} reproduces the partition")))
        })
        .collect()
}

/// `q_{i,k} = q_i + kδ a_i + k²δ² b_i`, flattened as index `i·m + (k-1)`.
pub fn make_clouds(q: &PointTuple, sites: &[CloudSite], delta: &Scalar, m: usize) -> Result<PointTuple> {
    let mut pts = Vec::with_capacity(q.len() * m);
    for (qi, site) in q.points().iter().zip(sites) {
        for k in 1..=m {
            let kd = int(k as i64) * delta;
            let kd2 = &kd * &kd;
            pts.push(Point::new(
                (0..2).map(|c| &qi.coords[c] + &kd * &site.a[c] + &kd2 * &site.b[c]).collect(),
            ));
        }
    }
    PointTuple::new(2, pts)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    /// Every cloud point within `ε` (max-norm) of its site.
    pub within_epsilon: bool,
    /// Mixed triples take the side recorded at the cloud's site.
    pub sides_respected: bool,
    /// Triples inside one cloud are all counterclockwise.
    pub intra_cloud_convex: bool,
}

impl ConditionReport {
    pub fn all(&self) -> bool {
        self.within_epsilon && self.sides_respected && self.intra_cloud_convex
    }
}

pub fn check_conditions(q: &PointTuple, spec: &CloudSpec, clouds: &PointTuple, m: usize) -> Result<ConditionReport> {
    let r = q.len();
    let at = |i: usize, k: usize| clouds.point(i * m + k);
    let within_epsilon = (0..r).all(|i| (0..m).all(|k| at(i, k).max_distance(q.point(i)) <= spec.epsilon));
    let mut sides_respected = true;
    'outer: for i in 0..r {
        for k in 0..m {
            for k2 in k + 1..m {
                for j in (0..r).filter(|&j| j != i) {
                    let want = spec.sites[i].side_of(j);
                    for l in 0..m {
                        if orient(&[at(i, k), at(i, k2), at(j, l)])? != want {
                            sides_respected = false;
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    let mut intra_cloud_convex = true;
    'convex: for i in 0..r {
        for k1 in 0..m {
            for k2 in k1 + 1..m {
                for k3 in k2 + 1..m {
                    if orient(&[at(i, k1), at(i, k2), at(i, k3)])? != OrientationSign::Positive {
                        intra_cloud_convex = false;
                        break 'convex;
                    }
                }
            }
        }
    }
    Ok(ConditionReport { within_epsilon, sides_respected, intra_cloud_convex })
}

pub fn lower_bound_certificate(r: usize, m: usize) -> Result<Certificate> {
    if r == 0 || m == 0 {
        return Err(Error::InvalidParameter("r and m must be positive".into()));
    }
    let min_flips = BigInt::from(2) * num_traits::pow(BigInt::from(m), 3);
    let constant = Scalar::new(BigInt::from(2), num_traits::pow(BigInt::from(r), 3));
    Ok(Certificate {
        r,
        m,
        min_flips: min_flips.to_string(),
        constant_f64: scalar::to_f64(&constant),
        constant,
    })
}

/// `2 r^-3 C(rm, 3) / (2 m^3)`. Since `C(n, 3) ~ n^3 / 6` this tends to `1/6`;
/// measured against `C(n, 3)` the certified fraction is `12 r^-3`.
pub fn certificate_ratio(r: usize, m: usize) -> f64 {
    let n = r * m;
    2.0 / (r as f64).powi(3) * binomial(n, 3) as f64 / (2.0 * (m as f64).powi(3))
}

fn max_norm(v: &[Scalar]) -> Scalar {
    v.iter().map(|c| c.abs()).max().unwrap_or_else(Scalar::zero)
}

pub fn build_blowup(q: &PointTuple, q_prime: &PointTuple, m: usize) -> Result<BlowupResult> {
    require_planar(q)?;
    q.check_same_shape(q_prime)?;
    if m == 0 {
        return Err(Error::InvalidParameter("cloud size m must be positive".into()));
    }
    require_general_position(q)?;
    require_general_position(q_prime)?;
    if order_type(q)? != order_type(q_prime)? {
        return Err(Error::OrderTypeMismatch("Q and Q' have different order types".into()));
    }
    let epsilon = robust_radius(q)?.epsilon.min(robust_radius(q_prime)?.epsilon);
    let sites = choose_directions(q)?;
    let sites_prime = match_directions(q_prime, &sites)?;
    let scale = sites
        .iter()
        .chain(&sites_prime)
        .map(|s| max_norm(&s.a).max(max_norm(&s.b)))
        .max()
        .unwrap();
    let m2 = int((m * m) as i64);
    let mut delta = &epsilon / (int(4) * m2 * scale);
    for _ in 0..DELTA_MAX_HALVINGS {
        let spec = CloudSpec { epsilon: epsilon.clone(), delta: delta.clone(), sites: sites.clone() };
        let spec_prime = CloudSpec { epsilon: epsilon.clone(), delta: delta.clone(), sites: sites_prime.clone() };
        let p = make_clouds(q, &sites, &delta, m)?;
        let p_prime = make_clouds(q_prime, &sites_prime, &delta, m)?;
        if check_conditions(q, &spec, &p, m)?.all() && check_conditions(q_prime, &spec_prime, &p_prime, m)?.all() {
            return Ok(BlowupResult {
                p,
                p_prime,
                spec,
                spec_prime,
                certificate: lower_bound_certificate(q.len(), m)?,
            });
        }
        delta /= int(2);
    }
    Err(Error::Exhausted("no cloud spacing satisfied the side conditions".into()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub order_types_equal: bool,
    pub selections_checked: usize,
    pub selections_match_q: usize,
    pub selections_match_q_prime: usize,
    pub conditions: ConditionReport,
    pub conditions_prime: ConditionReport,
    pub all_pass: bool,
}

fn select_one_per_cloud(p: &PointTuple, choice: &[usize], m: usize) -> Result<PointTuple> {
    PointTuple::new(2, choice.iter().enumerate().map(|(i, &k)| p.point(i * m + k).clone()).collect())
}

/// Exact re-verification of a blow-up: common order type, `samples` random
/// one-point-per-cloud selections, and the cloud conditions on both sides.
pub fn verify_blowup(
    result: &BlowupResult,
    q: &PointTuple,
    q_prime: &PointTuple,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let r = q.len();
    let m = result.certificate.m;
    if result.p.len() != r * m || result.p_prime.len() != r * m {
        return Err(Error::ShapeMismatch { n1: result.p.len(), d1: 2, n2: r * m, d2: 2 });
    }
    let order_types_equal = order_type(&result.p)? == order_type(&result.p_prime)?;
    let (ot_q, ot_qp) = (order_type(q)?, order_type(q_prime)?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut match_q, mut match_qp) = (0, 0);
    for _ in 0..samples {
        let choice: Vec<usize> = (0..r).map(|_| rng.random_range(0..m)).collect();
        if order_type(&select_one_per_cloud(&result.p, &choice, m)?)? == ot_q {
            match_q += 1;
        }
        if order_type(&select_one_per_cloud(&result.p_prime, &choice, m)?)? == ot_qp {
            match_qp += 1;
        }
    }
    let conditions = check_conditions(q, &result.spec, &result.p, m)?;
    let conditions_prime = check_conditions(q_prime, &result.spec_prime, &result.p_prime, m)?;
    let all_pass = order_types_equal
        && match_q == samples
        && match_qp == samples
        && conditions.all()
        && conditions_prime.all();
    Ok(VerificationReport {
        order_types_equal,
        selections_checked: samples,
        selections_match_q: match_q,
        selections_match_q_prime: match_qp,
        conditions,
        conditions_prime,
        all_pass,
    })
}
