//! Simplex aspect ratios, non-elongated tuples, and the good-rotation
//! experiment for planar pairs.

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{order_type, orientation_det, Point, PointTuple};
use crate::motion::linear_cost;
use crate::rotation::{sample_rotation, Rotation};
use crate::scalar::{self, int, Scalar};
use crate::subsets::binomial;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AspectRatio {
    /// `a² = diam^{2d} / vol²`, exact.
    #[serde(with = "scalar")]
    pub squared: Scalar,
    pub value: f64,
}

fn factorial(k: usize) -> Scalar {
    (1..=k as i64).map(int).product()
}

/// `diam(Δ)^d / vol(Δ)` for the simplex spanned by `d+1` points.
pub fn aspect_ratio(simplex: &[&Point]) -> Result<AspectRatio> {
    let d = simplex.len().saturating_sub(1);
    if d < 1 || simplex.iter().any(|p| p.dim() != d) {
        return Err(Error::DimensionMismatch { expected: d, found: simplex.first().map_or(0, |p| p.dim()) });
    }
    let det = orientation_det(simplex)?;
    if det.is_zero() {
        return Err(Error::Degenerate { subset: (0..=d).collect() });
    }
    let mut diam2 = Scalar::zero();
    for i in 0..=d {
        for j in i + 1..=d {
            diam2 = diam2.max(simplex[i].squared_distance(simplex[j]));
        }
    }
    let fact = factorial(d);
    let squared = num_traits::pow(diam2, d) * &fact * &fact / (&det * &det);
    Ok(AspectRatio { value: scalar::to_f64(&squared).sqrt(), squared })
}

/// `max² / min²` over pairwise squared distances.
pub fn elongation_squared(p: &PointTuple) -> Result<Scalar> {
    if p.len() < 2 {
        return Err(Error::InvalidParameter("need at least two points".into()));
    }
    let (mut lo, mut hi): (Option<Scalar>, Scalar) = (None, Scalar::zero());
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let s = p.point(i).squared_distance(p.point(j));
            if s.is_zero() {
                return Err(Error::Degenerate { subset: vec![i, j] });
            }
            hi = hi.max(s.clone());
            lo = Some(match lo {
                Some(l) if l <= s => l,
                _ => s,
            });
        }
    }
    Ok(hi / lo.unwrap())
}

/// Whether `max / min ≤ α n^{1/d}`, decided as `(max²/min²)^d ≤ α^{2d} n²`.
pub fn non_elongated(p: &PointTuple, alpha: &Scalar) -> Result<bool> {
    if !alpha.is_positive() {
        return Err(Error::InvalidParameter("alpha must be positive".into()));
    }
    let d = p.dim();
    let n = int(p.len() as i64);
    let lhs = num_traits::pow(elongation_squared(p)?, d);
    let rhs = num_traits::pow(alpha * alpha, d) * &n * &n;
    Ok(lhs <= rhs)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tail {
    pub threshold: f64,
    pub count: usize,
    pub total: usize,
    pub fraction: f64,
}

/// Counts of aspect ratios strictly above `threshold`, compared exactly.
pub fn tail(ratios: &[AspectRatio], threshold: f64) -> Result<Tail> {
    let t = scalar::from_f64(threshold)?;
    let t2 = &t * &t;
    let count = ratios.iter().filter(|a| a.squared > t2).count();
    Ok(Tail {
        threshold,
        count,
        total: ratios.len(),
        fraction: count as f64 / ratios.len().max(1) as f64,
    })
}

/// Nearest-rank percentile of the float aspect values.
pub fn percentile(ratios: &[AspectRatio], q: f64) -> f64 {
    let mut v: Vec<f64> = ratios.iter().map(|a| a.value).collect();
    v.sort_by(f64::total_cmp);
    let rank = ((q * v.len() as f64).ceil() as usize).clamp(1, v.len().max(1));
    v.get(rank - 1).copied().unwrap_or(f64::NAN)
}

pub fn subset_aspect_ratios(p: &PointTuple) -> Result<Vec<AspectRatio>> {
    p.subsets().collect::<Vec<_>>().par_iter().map(|s| aspect_ratio(&p.select(s))).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub rotations: usize,
    /// Aspect-ratio cut-off; `None` uses the pooled 75th percentile.
    pub b: Option<f64>,
    pub seed: u64,
    /// When given, both tuples must be `alpha`-non-elongated.
    pub alpha: Option<Scalar>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    pub rotations: usize,
    pub b: f64,
    pub b_default: bool,
    pub subsets: u64,
    /// Subsets whose aspect ratio is at most `b` in both tuples.
    pub x_count: usize,
    pub x_fraction: f64,
    pub costs: Vec<u64>,
    pub best: u64,
    pub best_rotation: Rotation,
    pub mean: f64,
    /// `(d/2) C(n, d+1)`.
    pub bound: u64,
    pub best_below_bound: bool,
    /// Pooled tails at `b`, `2b`, `4b`.
    pub tails: Vec<Tail>,
}

/// Samples rotations `ρ` and records the exact linear cost of `P -> ρP'`.
pub fn theorem3_experiment(p: &PointTuple, q: &PointTuple, cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    p.check_same_shape(q)?;
    if p.dim() != 2 {
        return Err(Error::Precondition(format!("the experiment is planar, got d = {}", p.dim())));
    }
    if cfg.rotations == 0 {
        return Err(Error::InvalidParameter("rotation count must be positive".into()));
    }
    if order_type(p)? != order_type(q)? {
        return Err(Error::OrderTypeMismatch("P and P' must share an order type".into()));
    }
    if let Some(alpha) = &cfg.alpha {
        if !non_elongated(p, alpha)? || !non_elongated(q, alpha)? {
            return Err(Error::Precondition(format!("tuples are not {}-non-elongated", scalar::format_scalar(alpha))));
        }
    }
    let (d, n) = (p.dim(), p.len());
    let (ap, aq) = (subset_aspect_ratios(p)?, subset_aspect_ratios(q)?);
    let pooled: Vec<AspectRatio> = ap.iter().chain(&aq).cloned().collect();
    let b = match cfg.b {
        Some(b) if b > 0.0 && b.is_finite() => b,
        Some(b) => return Err(Error::InvalidParameter(format!("B must be positive, got {b}"))),
        None => percentile(&pooled, 0.75),
    };
    let b_exact = scalar::from_f64(b)?;
    let b2 = &b_exact * &b_exact;
    let x_count = ap.iter().zip(&aq).filter(|(a, c)| a.squared <= b2 && c.squared <= b2).count();
    let subsets = binomial(n, d + 1);

    let runs: Vec<(u64, Rotation)> = (0..cfg.rotations as u64)
        .into_par_iter()
        .map(|i| {
            let rho = sample_rotation(d, cfg.seed, i)?;
            let cost = linear_cost(p, &rho.apply(q)?)?.total;
            Ok((cost, rho))
        })
        .collect::<Result<_>>()?;
    let costs: Vec<u64> = runs.iter().map(|r| r.0).collect();
    let (best_idx, best) = costs.iter().copied().enumerate().min_by_key(|&(_, c)| c).unwrap();
    let bound = subsets * d as u64 / 2;
    let best_below_bound = best < bound;
    if !best_below_bound && 2 * x_count as u64 >= subsets {
        return Err(Error::InvariantBreach(format!("best sampled cost {best} reaches the bound {bound}")));
    }
    let tails = [1.0, 2.0, 4.0].iter().map(|k| tail(&pooled, k * b)).collect::<Result<_>>()?;
    Ok(ExperimentReport {
        n,
        d,
        seed: cfg.seed,
        rotations: cfg.rotations,
        b,
        b_default: cfg.b.is_none(),
        subsets,
        x_count,
        x_fraction: x_count as f64 / subsets as f64,
        mean: costs.iter().sum::<u64>() as f64 / costs.len() as f64,
        best,
        best_rotation: runs[best_idx].1.clone(),
        costs,
        bound,
        best_below_bound,
        tails,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rotation::regular_simplex;
    use crate::scalar::ratio;

    #[test]
    fn equilateral_triangle() {
        let t = regular_simplex(2).unwrap();
        let a = aspect_ratio(&t.select(&[0, 1, 2])).unwrap();
        assert!((a.value - 4.0 / 3f64.sqrt()).abs() < 1e-12);
        let big = t.scaled(&int(3));
        let b = aspect_ratio(&big.select(&[0, 1, 2])).unwrap();
        assert_eq!(a.squared, b.squared);
    }

    #[test]
    fn right_triangle_exact() {
        let t = PointTuple::from_ints(2, &[&[0, 0], &[1, 0], &[0, 1]]).unwrap();
        // diam² = 2, vol = 1/2, a² = 4 / (1/4) = 16
        assert_eq!(aspect_ratio(&t.select(&[0, 1, 2])).unwrap().squared, int(16));
        let flat = PointTuple::from_ints(2, &[&[0, 0], &[1, 1], &[2, 2]]).unwrap();
        assert!(matches!(aspect_ratio(&flat.select(&[0, 1, 2])), Err(Error::Degenerate { .. })));
    }

    #[test]
    fn tetrahedron_matches_brute_force() {
        let t = PointTuple::from_ints(3, &[&[0, 0, 0], &[2, 0, 0], &[0, 3, 0], &[1, 1, 4]]).unwrap();
        let a = aspect_ratio(&t.select(&[0, 1, 2, 3])).unwrap();
        let pts: Vec<Vec<f64>> = t.points().iter().map(Point::to_f64).collect();
        let mut diam: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                diam = diam.max(pts[i].iter().zip(&pts[j]).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt());
            }
        }
        let vol = 2.0 * 3.0 * 4.0 / 6.0;
        assert!((a.value - diam.powi(3) / vol).abs() < 1e-9);
    }

    #[test]
    fn grid_is_non_elongated() {
        let k = 4;
        let pts: Vec<Vec<i64>> = (0..k).flat_map(|i| (0..k).map(move |j| vec![i, j])).collect();
        let refs: Vec<&[i64]> = pts.iter().map(|v| v.as_slice()).collect();
        let g = PointTuple::from_ints(2, &refs).unwrap();
        assert!(non_elongated(&g, &int(2)).unwrap());
        let line = PointTuple::from_ints(2, &[&[0, 0], &[1, 0], &[100, 0]]).unwrap();
        assert!(!non_elongated(&line, &int(1)).unwrap());
    }

    #[test]
    fn threshold_ties_are_exact() {
        let dup = PointTuple::from_ints(2, &[&[0, 0], &[0, 0], &[1, 1]]).unwrap();
        assert!(elongation_squared(&dup).is_err());
        // 3-4-5 triangle: max²/min² = 25/9, tie at α² = 25/27 since (25/9)² = (25/27)² · 9
        let p = PointTuple::from_ints(2, &[&[0, 0], &[3, 0], &[0, 4]]).unwrap();
        assert_eq!(elongation_squared(&p).unwrap(), ratio(25, 9));
        let alpha = |num: i64, den: i64| -> Scalar { Scalar::new(num.into(), den.into()) };
        // α = 5/(3√3) is irrational; bracket it with rationals on both sides
        assert!(non_elongated(&p, &alpha(963, 1000)).unwrap());
        assert!(!non_elongated(&p, &alpha(962, 1000)).unwrap());
        // rational tie: ratio² = 4, n = 4, d = 2 needs α^4 · 16 = 16, α = 1
        let sq = PointTuple::from_ints(2, &[&[0, 0], &[1, 0], &[2, 0], &[0, 1]]).unwrap();
        assert_eq!(elongation_squared(&sq).unwrap(), int(5));
        let seg = PointTuple::from_ints(2, &[&[0, 0], &[1, 0], &[2, 0], &[1, 1]]).unwrap();
        assert_eq!(elongation_squared(&seg).unwrap(), int(4));
        assert!(non_elongated(&seg, &int(1)).unwrap());
        assert!(!non_elongated(&seg, &ratio(999_999, 1_000_000)).unwrap());
        assert!(non_elongated(&q_dummy(), &int(0)).is_err());
    }

    fn q_dummy() -> PointTuple {
        PointTuple::from_ints(2, &[&[0, 0], &[1, 0], &[1, 1]]).unwrap()
    }

    #[test]
    fn percentile_and_tail() {
        let vals: Vec<AspectRatio> = [1.0f64, 2.0, 3.0, 4.0]
            .iter()
            .map(|&v| AspectRatio { squared: scalar::from_f64(v * v).unwrap(), value: v })
            .collect();
        assert_eq!(percentile(&vals, 0.75), 3.0);
        let t = tail(&vals, 3.0).unwrap();
        assert_eq!((t.count, t.total), (1, 4));
    }

    #[test]
    fn small_experiment() {
        let p = PointTuple::from_ints(2, &[&[0, 0], &[4, 1], &[1, 3], &[3, 4], &[6, 2]]).unwrap();
        let q = p.map_coords(|_, k, c| if k == 0 { c * int(2) + int(1) } else { c.clone() });
        let cfg = ExperimentConfig { rotations: 20, b: None, seed: 4, alpha: None };
        let r = theorem3_experiment(&p, &q, &cfg).unwrap();
        assert_eq!(r.costs.len(), 20);
        assert!(r.best <= r.bound);
        assert_eq!(r.tails.len(), 3);
        assert!(r.tails[0].count >= r.tails[1].count && r.tails[1].count >= r.tails[2].count);
        assert_eq!(r, theorem3_experiment(&p, &q, &cfg).unwrap());
        let bad = ExperimentConfig { rotations: 0, ..cfg };
        assert!(theorem3_experiment(&p, &q, &bad).is_err());
    }
}
