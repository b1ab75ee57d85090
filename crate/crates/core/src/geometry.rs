//! Exact points, orientation predicates and order types.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{bordered_det, bordered_det_int};
use crate::scalar::{self, int, Scalar};
use crate::subsets::{binomial, colex, colex_rank};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    pub coords: Vec<Scalar>,
}

impl Point {
    pub fn new(coords: Vec<Scalar>) -> Self {
        Point { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point::new(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(scalar::to_f64).collect()
    }

    pub fn sub(&self, other: &Point) -> Vec<Scalar> {
        self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect()
    }

    pub fn squared_distance(&self, other: &Point) -> Scalar {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| {
                let d = a - b;
                &d * &d
            })
            .fold(Scalar::zero(), |acc, x| acc + x)
    }

    /// Max-norm distance.
    pub fn max_distance(&self, other: &Point) -> Scalar {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).abs())
            .max()
            .unwrap_or_else(Scalar::zero)
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        scalar::vec::serialize(&self.coords, s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        scalar::vec::deserialize(d).map(Point::new)
    }
}

/// An ordered n-tuple of points in `R^d`, `d >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTuple")]
pub struct PointTuple {
    d: usize,
    points: Vec<Point>,
}

#[derive(Deserialize)]
struct RawTuple {
    d: usize,
    points: Vec<Point>,
}

impl TryFrom<RawTuple> for PointTuple {
    type Error = Error;

    fn try_from(raw: RawTuple) -> Result<Self> {
        PointTuple::new(raw.d, raw.points)
    }
}

impl PointTuple {
    pub fn new(d: usize, points: Vec<Point>) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidParameter(format!("dimension {d} < 2")));
        }
        if let Some(p) = points.iter().find(|p| p.dim() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: p.dim() });
        }
        Ok(PointTuple { d, points })
    }

    pub fn from_ints(d: usize, pts: &[&[i64]]) -> Result<Self> {
        PointTuple::new(d, pts.iter().map(|p| Point::from_ints(p)).collect())
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn select(&self, idx: &[usize]) -> Vec<&Point> {
        idx.iter().map(|&i| &self.points[i]).collect()
    }

    /// Applies `f` to every coordinate `(point, axis, value)`.
    pub fn map_coords(&self, f: impl Fn(usize, usize, &Scalar) -> Scalar) -> PointTuple {
        let points = self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| Point::new(p.coords.iter().enumerate().map(|(k, c)| f(i, k, c)).collect()))
            .collect();
        PointTuple { d: self.d, points }
    }

    pub fn scaled(&self, factor: &Scalar) -> PointTuple {
        self.map_coords(|_, _, c| c * factor)
    }

    pub fn negated(&self) -> PointTuple {
        self.map_coords(|_, _, c| -c)
    }

    pub fn translated(&self, v: &[Scalar]) -> PointTuple {
        self.map_coords(|_, k, c| c + &v[k])
    }

    /// `(1 - t) self + t other`.
    pub fn lerp(&self, other: &PointTuple, t: &Scalar) -> PointTuple {
        let s = Scalar::one() - t;
        self.map_coords(|i, k, c| c * &s + &other.points[i].coords[k] * t)
    }

    pub fn check_same_shape(&self, other: &PointTuple) -> Result<()> {
        if self.d != other.d || self.len() != other.len() {
            return Err(Error::ShapeMismatch {
                n1: self.len(),
                d1: self.d,
                n2: other.len(),
                d2: other.d,
            });
        }
        Ok(())
    }

    pub fn max_abs_coord(&self) -> Scalar {
        self.points
            .iter()
            .flat_map(|p| p.coords.iter().map(|c| c.abs()))
            .max()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn subsets(&self) -> impl Iterator<Item = Vec<usize>> {
        colex(self.len(), self.d + 1)
    }

    /// Coordinates times the lcm of all denominators.
    pub fn integer_coords(&self) -> Vec<Vec<BigInt>> {
        let lcm = self
            .points
            .iter()
            .flat_map(|p| &p.coords)
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        self.points
            .iter()
            .map(|p| p.coords.iter().map(|c| c.numer() * (&lcm / c.denom())).collect())
            .collect()
    }

    pub fn subset_count(&self) -> u64 {
        binomial(self.len(), self.d + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrientationSign {
    Negative = -1,
    Zero = 0,
    Positive = 1,
}

impl OrientationSign {
    pub fn of(x: &Scalar) -> Self {
        match scalar::sign(x) {
            1 => OrientationSign::Positive,
            -1 => OrientationSign::Negative,
            _ => OrientationSign::Zero,
        }
    }

    pub fn from_i8(v: i8) -> Result<Self> {
        match v {
            1 => Ok(OrientationSign::Positive),
            0 => Ok(OrientationSign::Zero),
            -1 => Ok(OrientationSign::Negative),
            _ => Err(Error::Parse(format!("orientation sign {v} not in {{-1,0,1}}"))),
        }
    }

    pub fn as_i8(self) -> i8 {
        self as i8
    }

    pub fn is_zero(self) -> bool {
        self == OrientationSign::Zero
    }
}

impl std::ops::Neg for OrientationSign {
    type Output = OrientationSign;

    fn neg(self) -> OrientationSign {
        match self {
            OrientationSign::Negative => OrientationSign::Positive,
            OrientationSign::Zero => OrientationSign::Zero,
            OrientationSign::Positive => OrientationSign::Negative,
        }
    }
}

impl fmt::Display for OrientationSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_i8())
    }
}

impl Serialize for OrientationSign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.as_i8())
    }
}

impl<'de> Deserialize<'de> for OrientationSign {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = i8::deserialize(d)?;
        OrientationSign::from_i8(v).map_err(serde::de::Error::custom)
    }
}

/// Orientation signs of every `(d+1)`-subset, in colex order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawOrderType")]
pub struct OrderType {
    n: usize,
    d: usize,
    signs: Vec<OrientationSign>,
}

#[derive(Deserialize)]
struct RawOrderType {
    n: usize,
    d: usize,
    signs: Vec<OrientationSign>,
}

impl TryFrom<RawOrderType> for OrderType {
    type Error = Error;

    fn try_from(raw: RawOrderType) -> Result<Self> {
        OrderType::new(raw.n, raw.d, raw.signs)
    }
}

impl OrderType {
    pub fn new(n: usize, d: usize, signs: Vec<OrientationSign>) -> Result<Self> {
        let expected = binomial(n, d + 1);
        if signs.len() as u64 != expected {
            return Err(Error::Parse(format!(
                "order type for n={n}, d={d} needs {expected} signs, got {}",
                signs.len()
            )));
        }
        Ok(OrderType { n, d, signs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn signs(&self) -> &[OrientationSign] {
        &self.signs
    }

    pub fn get(&self, subset: &[usize]) -> OrientationSign {
        self.signs[colex_rank(subset) as usize]
    }

    pub fn negate(&self) -> OrderType {
        OrderType {
            n: self.n,
            d: self.d,
            signs: self.signs.iter().map(|&s| -s).collect(),
        }
    }

    pub fn is_general_position(&self) -> bool {
        self.signs.iter().all(|s| !s.is_zero())
    }

    /// First subset (colex order) with a zero orientation.
    pub fn first_degenerate(&self) -> Option<Vec<usize>> {
        let pos = self.signs.iter().position(|s| s.is_zero())?;
        colex(self.n, self.d + 1).nth(pos)
    }
}

fn check_simplex(points: &[&Point]) -> Result<usize> {
    let d = points.len().saturating_sub(1);
    if d == 0 {
        return Err(Error::InvalidParameter("need at least two points".into()));
    }
    for p in points {
        if p.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: p.dim() });
        }
    }
    Ok(d)
}

/// Bordered determinant `det [1 ... 1; p_0 ... p_d]` of `d+1` points in `R^d`.
pub fn orientation_det(points: &[&Point]) -> Result<Scalar> {
    check_simplex(points)?;
    let cols: Vec<&[Scalar]> = points.iter().map(|p| p.coords.as_slice()).collect();
    Ok(bordered_det(&cols))
}

pub fn orient(points: &[&Point]) -> Result<OrientationSign> {
    orientation_det(points).map(|v| OrientationSign::of(&v))
}

pub fn subset_det(p: &PointTuple, subset: &[usize]) -> Scalar {
    let cols: Vec<&[Scalar]> = subset.iter().map(|&i| p.points[i].coords.as_slice()).collect();
    bordered_det(&cols)
}

pub fn order_type(p: &PointTuple) -> Result<OrderType> {
    if p.len() < p.d + 1 {
        return Err(Error::InvalidParameter(format!(
            "order type needs n >= d+1 (n={}, d={})",
            p.len(),
            p.d
        )));
    }
    // a positive common scaling keeps every sign and avoids rational gcds
    let ints = p.integer_coords();
    let subsets: Vec<Vec<usize>> = p.subsets().collect();
    let signs = subsets
        .par_iter()
        .map(|s| {
            let cols: Vec<&[BigInt]> = s.iter().map(|&i| ints[i].as_slice()).collect();
            OrientationSign::of(&Scalar::from_integer(bordered_det_int(&cols)))
        })
        .collect();
    OrderType::new(p.len(), p.d, signs)
}

pub fn hamming(t1: &OrderType, t2: &OrderType) -> Result<usize> {
    if t1.n != t2.n || t1.d != t2.d {
        return Err(Error::ShapeMismatch { n1: t1.n, d1: t1.d, n2: t2.n, d2: t2.d });
    }
    Ok(t1.signs.iter().zip(&t2.signs).filter(|(a, b)| a != b).count())
}

/// Reflection through the hyperplane `x_1 = 0`.
pub fn mirror(p: &PointTuple) -> PointTuple {
    p.map_coords(|_, k, c| if k == 0 { -c } else { c.clone() })
}

pub fn is_general_position(p: &PointTuple) -> bool {
    p.subsets().all(|s| !subset_det(p, &s).is_zero())
}

/// Fails with the first degenerate subset if `p` is not in general position.
pub fn require_general_position(p: &PointTuple) -> Result<()> {
    match p.subsets().find(|s| subset_det(p, s).is_zero()) {
        Some(subset) => Err(Error::Degenerate { subset }),
        None => Ok(()),
    }
}

/// A max-norm perturbation radius that provably keeps every orientation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RobustRadius {
    #[serde(with = "scalar")]
    pub epsilon: Scalar,
    #[serde(with = "scalar")]
    pub min_abs_det: Scalar,
}

/// Per-subset bound: moving each coordinate by at most `eps` changes the
/// bordered determinant by at most `eps * L`, where `L` sums bounds on the
/// `d(d+1)` coordinate cofactors. Each cofactor is a `(d-1)×(d-1)` determinant
/// of coordinate differences, bounded by the product of its row 1-norms.
/// With `eps <= D/4` (`D` the largest coordinate spread in the subset) every
/// perturbed difference stays below `2D`, strictly, so `eps = |det| / L`
/// cannot reach zero.
fn subset_radius(p: &PointTuple, subset: &[usize], det: &Scalar) -> Scalar {
    let d = p.d;
    let mut spread = Scalar::zero();
    for k in 0..d {
        let vals: Vec<&Scalar> = subset.iter().map(|&i| &p.points[i].coords[k]).collect();
        let hi = vals.iter().max().unwrap();
        let lo = vals.iter().min().unwrap();
        let s = *hi - *lo;
        if s > spread {
            spread = s;
        }
    }
    let row_bound = int((d - 1) as i64) * int(2) * &spread;
    let cofactor_bound = num_traits::pow(row_bound, d - 1);
    let lipschitz = int((d * (d + 1)) as i64) * cofactor_bound;
    let by_det = det.abs() / lipschitz;
    let cap = spread / int(4);
    by_det.min(cap)
}

pub fn robust_radius(p: &PointTuple) -> Result<RobustRadius> {
    let subsets: Vec<Vec<usize>> = p.subsets().collect();
    if subsets.is_empty() {
        return Err(Error::InvalidParameter("robust radius needs n >= d+1".into()));
    }
    let per: Vec<Result<(Scalar, Scalar)>> = subsets
        .par_iter()
        .map(|s| {
            let det = subset_det(p, s);
            if det.is_zero() {
                return Err(Error::Degenerate { subset: s.clone() });
            }
            let eps = subset_radius(p, s, &det);
            Ok((eps, det.abs()))
        })
        .collect();
    let mut epsilon: Option<Scalar> = None;
    let mut min_abs_det: Option<Scalar> = None;
    for r in per {
        let (e, a) = r?;
        epsilon = Some(match epsilon {
            Some(cur) if cur <= e => cur,
            _ => e,
        });
        min_abs_det = Some(match min_abs_det {
            Some(cur) if cur <= a => cur,
            _ => a,
        });
    }
    Ok(RobustRadius {
        epsilon: epsilon.unwrap(),
        min_abs_det: min_abs_det.unwrap(),
    })
}
