//! Rotations, good rotations, and Monte-Carlo estimates of their measure.
//!
//! Rotation matrices are mostly irrational, so every float rotation carries
//! the exact rational value of its double entries and all signs are taken on
//! that rational matrix. The orthogonality defect of such a matrix is tiny
//! and reported; the orientation-preserving property only needs `det > 0`.

use nalgebra::DMatrix;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{orient, Point, PointTuple};
use crate::linalg::{det, inverse};
use crate::pencil::{build_pencil, PencilPolynomial};
use crate::scalar::{self, Scalar};
use crate::sturm::{isolate_roots, sign_change_count, sturm_distinct_roots, Interval};

/// Acceptance threshold for `min(|det(ρ - I)|, |det(ρ + I)|)`.
pub const EIGEN_MARGIN_TOL: f64 = 1e-6;
/// Largest tolerated `max |ρᵀρ - I|` for float input.
pub const DEFECT_TOL: f64 = 1e-9;
const PICK_TRIES: u64 = 1000;
/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959963984540054;

#[derive(Debug, Clone, PartialEq)]
pub struct Rotation {
    exact: Vec<Vec<Scalar>>,
    float: Vec<Vec<f64>>,
    is_exact: bool,
}

impl Serialize for Rotation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View<'a> {
            d: usize,
            exact: bool,
            rows: &'a [Vec<f64>],
            defect: f64,
        }
        View { d: self.dim(), exact: self.is_exact, rows: &self.float, defect: self.orthogonality_defect() }.serialize(s)
    }
}

fn to_float(rows: &[Vec<Scalar>]) -> Vec<Vec<f64>> {
    rows.iter().map(|r| r.iter().map(scalar::to_f64).collect()).collect()
}

fn check_square(d: usize, rows_len: usize, widths: impl Iterator<Item = usize>) -> Result<()> {
    if d < 1 {
        return Err(Error::InvalidParameter("empty rotation matrix".into()));
    }
    for w in widths.chain(std::iter::once(rows_len)) {
        if w != d {
            return Err(Error::DimensionMismatch { expected: d, found: w });
        }
    }
    Ok(())
}

impl Rotation {
    /// Exact rational rotation; checked exactly for `RᵀR = I` and `det = 1`.
    pub fn from_exact(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let d = rows.len();
        check_square(d, d, rows.iter().map(Vec::len))?;
        for i in 0..d {
            for j in 0..d {
                let dot: Scalar = (0..d).map(|k| &rows[k][i] * &rows[k][j]).sum();
                let want = if i == j { Scalar::one() } else { Scalar::zero() };
                if dot != want {
                    return Err(Error::RotationRejected("matrix is not orthogonal".into()));
                }
            }
        }
        if det(&rows) != Scalar::one() {
            return Err(Error::RotationRejected("determinant is not +1".into()));
        }
        Ok(Rotation { float: to_float(&rows), exact: rows, is_exact: true })
    }

    /// Float rotation; rejected if the defect exceeds [`DEFECT_TOL`] or the
    /// (exact) determinant of the rational value is not positive.
    pub fn from_f64(rows: Vec<Vec<f64>>) -> Result<Self> {
        let d = rows.len();
        check_square(d, d, rows.iter().map(Vec::len))?;
        let exact = rows
            .iter()
            .map(|r| r.iter().map(|&v| scalar::from_f64(v)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let rot = Rotation { exact, float: rows, is_exact: false };
        let defect = rot.orthogonality_defect();
        if defect > DEFECT_TOL {
            return Err(Error::RotationRejected(format!("orthogonality defect {defect:e}")));
        }
        if det(&rot.exact) <= Scalar::zero() {
            return Err(Error::RotationRejected("determinant is not positive".into()));
        }
        Ok(rot)
    }

    pub fn identity(d: usize) -> Self {
        let rows = (0..d)
            .map(|i| (0..d).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
            .collect::<Vec<Vec<Scalar>>>();
        Rotation { float: to_float(&rows), exact: rows, is_exact: true }
    }

    /// `-I`, a rotation only in even dimension.
    pub fn half_turn(d: usize) -> Result<Self> {
        Self::identity(d).negated()
    }

    /// Planar rotation by `theta`; multiples of `π/2` are built exactly.
    pub fn planar(theta: f64) -> Result<Self> {
        let quarter = theta / std::f64::consts::FRAC_PI_2;
        if quarter == quarter.round() {
            let (c, s) = match (quarter as i64).rem_euclid(4) {
                0 => (1, 0),
                1 => (0, 1),
                2 => (-1, 0),
                _ => (0, -1),
            };
            let i = |v: i64| scalar::int(v);
            return Self::from_exact(vec![vec![i(c), i(-s)], vec![i(s), i(c)]]);
        }
        let (s, c) = theta.sin_cos();
        Self::from_f64(vec![vec![c, -s], vec![s, c]])
    }

    /// Cayley transform `(I - A)^{-1}(I + A)` of a skew-symmetric rational
    /// matrix: an exact rational rotation without eigenvalue `-1`.
    pub fn cayley(skew: &[Vec<Scalar>]) -> Result<Self> {
        let d = skew.len();
        check_square(d, d, skew.iter().map(Vec::len))?;
        for i in 0..d {
            for j in 0..d {
                if skew[i][j] != -skew[j][i].clone() {
                    return Err(Error::InvalidParameter("Cayley input must be skew-symmetric".into()));
                }
            }
        }
        let id = Self::identity(d).exact;
        let minus: Vec<Vec<Scalar>> = (0..d).map(|i| (0..d).map(|j| &id[i][j] - &skew[i][j]).collect()).collect();
        let inv = inverse(&minus).ok_or_else(|| Error::InvariantBreach("I - A singular for skew A".into()))?;
        let rows = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).map(|k| &inv[i][k] * (&id[k][j] + &skew[k][j])).sum())
                    .collect()
            })
            .collect();
        Self::from_exact(rows)
    }

    /// Haar-uniform sample: QR of a Gaussian matrix, columns signed so that
    /// `R` has a positive diagonal, then one column flipped if `det < 0`.
    pub fn haar<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<Self> {
        if d < 1 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        let g = DMatrix::<f64>::from_fn(d, d, |_, _| rng.sample(StandardNormal));
        let qr = g.qr();
        let (mut q, r) = (qr.q(), qr.r());
        for j in 0..d {
            if r[(j, j)] < 0.0 {
                q.column_mut(j).neg_mut();
            }
        }
        if q.determinant() < 0.0 {
            q.column_mut(0).neg_mut();
        }
        Self::from_f64((0..d).map(|i| (0..d).map(|j| q[(i, j)]).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.exact.len()
    }

    pub fn is_exact(&self) -> bool {
        self.is_exact
    }

    pub fn rows_exact(&self) -> &[Vec<Scalar>] {
        &self.exact
    }

    pub fn rows_f64(&self) -> &[Vec<f64>] {
        &self.float
    }

    /// `-ρ`; rejected in odd dimension where it reverses orientation.
    pub fn negated(&self) -> Result<Self> {
        if self.dim() % 2 == 1 {
            return Err(Error::Precondition("-ρ is not a rotation in odd dimension".into()));
        }
        let exact: Vec<Vec<Scalar>> = self.exact.iter().map(|r| r.iter().map(|v| -v).collect()).collect();
        Ok(Rotation { float: to_float(&exact), exact, is_exact: self.is_exact })
    }

    /// `max |ρᵀρ - I|` in double precision.
    pub fn orthogonality_defect(&self) -> f64 {
        let m = self.matrix();
        (m.transpose() * &m - DMatrix::identity(self.dim(), self.dim())).amax()
    }

    /// `min(|det(ρ - I)|, |det(ρ + I)|)`: zero iff `±1` is an eigenvalue.
    pub fn eigen_margin(&self) -> f64 {
        let m = self.matrix();
        let id = DMatrix::identity(self.dim(), self.dim());
        (&m - &id).determinant().abs().min((&m + &id).determinant().abs())
    }

    fn matrix(&self) -> DMatrix<f64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |i, j| self.float[i][j])
    }

    pub fn apply_point(&self, p: &Point) -> Result<Point> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: p.dim() });
        }
        Ok(Point::new(
            self.exact.iter().map(|row| row.iter().zip(&p.coords).map(|(a, x)| a * x).sum()).collect(),
        ))
    }

    /// Exact image `ρP`.
    pub fn apply(&self, p: &PointTuple) -> Result<PointTuple> {
        let pts = p.points().iter().map(|q| self.apply_point(q)).collect::<Result<Vec<_>>>()?;
        PointTuple::new(p.dim(), pts)
    }
}

/// Vertices of a regular simplex on the unit sphere, centred at the origin:
/// the standard basis of `R^{d+1}` minus its centroid, written in the
/// Helmert basis of the hyperplane `Σx = 0` and normalised.
pub fn regular_simplex(d: usize) -> Result<PointTuple> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("regular simplex needs d >= 2, got {d}")));
    }
    let scale = ((d + 1) as f64 / d as f64).sqrt();
    let helmert = |k: usize, i: usize| -> f64 {
        // k-th basis vector (1-based): k ones, then -k, then zeros
        let norm = ((k * (k + 1)) as f64).sqrt();
        match i.cmp(&k) {
            std::cmp::Ordering::Less => 1.0 / norm,
            std::cmp::Ordering::Equal => -(k as f64) / norm,
            std::cmp::Ordering::Greater => 0.0,
        }
    };
    let pts = (0..=d)
        .map(|i| {
            let coords = (1..=d).map(|k| scalar::from_f64(scale * helmert(k, i))).collect::<Result<Vec<_>>>()?;
            Ok(Point::new(coords))
        })
        .collect::<Result<Vec<_>>>()?;
    PointTuple::new(d, pts)
}

/// The rotation sending vertex `i` of [`regular_simplex`] to vertex `i+1`
/// (cyclically): `ρ = d/(d+1) Σ v_{i+1} v_iᵀ`. Its eigenvalues are the
/// nontrivial `(d+1)`-th roots of unity, so for even `d` neither `ρ` nor
/// `-ρ` fixes a nonzero vector.
pub fn cyclic_simplex_rotation(d: usize) -> Result<Rotation> {
    if d % 2 == 1 {
        return Err(Error::Precondition(format!("every rotation in odd dimension {d} fixes a line")));
    }
    let v: Vec<Vec<f64>> = regular_simplex(d)?.points().iter().map(Point::to_f64).collect();
    let c = d as f64 / (d + 1) as f64;
    let rows = (0..d)
        .map(|r| (0..d).map(|s| c * (0..=d).map(|i| v[(i + 1) % (d + 1)][r] * v[i][s]).sum::<f64>()).collect())
        .collect();
    Rotation::from_f64(rows)
}

pub fn check_rho(rho: &Rotation) -> Result<()> {
    let margin = rho.eigen_margin();
    if margin > EIGEN_MARGIN_TOL {
        Ok(())
    } else {
        Err(Error::RotationRejected(format!("eigenvalue ±1 within tolerance (margin {margin:e})")))
    }
}

/// A random rotation with no eigenvalue `±1`, retried until the margin check
/// passes. Each attempt uses its own ChaCha8 stream of `seed`.
pub fn pick_rho(d: usize, seed: u64) -> Result<Rotation> {
    if d % 2 == 1 {
        return Err(Error::Precondition(format!("every rotation in odd dimension {d} fixes a line")));
    }
    for attempt in 0..PICK_TRIES {
        let rho = sample_rotation(d, seed, attempt)?;
        if check_rho(&rho).is_ok() {
            return Ok(rho);
        }
    }
    Err(Error::Exhausted(format!("no admissible rotation in {PICK_TRIES} draws")))
}

/// Haar sample number `index` of the stream family seeded by `seed`.
pub fn sample_rotation(d: usize, seed: u64, index: u64) -> Result<Rotation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    Rotation::haar(d, &mut rng)
}

fn simplex_check(q: &PointTuple) -> Result<()> {
    if q.len() != q.dim() + 1 {
        return Err(Error::InvalidParameter(format!("expected a simplex of {} points, got {}", q.dim() + 1, q.len())));
    }
    Ok(())
}

/// Pencil of the linear motion `Q -> ρQ`.
pub fn simplex_pencil(q: &PointTuple, rho: &Rotation) -> Result<PencilPolynomial> {
    simplex_check(q)?;
    let image = rho.apply(q)?;
    let ones = vec![Scalar::one(); q.dim()];
    build_pencil(&q.select(&(0..q.len()).collect::<Vec<_>>()), &image.select(&(0..q.len()).collect::<Vec<_>>()), &ones)
}

/// Whether the orientation of `Q` stays nonzero along `Q -> ρQ`, i.e. the
/// pencil has no real root at all on `(0, ∞)` (touching zeros included).
pub fn simplex_motion_constant(q: &PointTuple, rho: &Rotation) -> Result<bool> {
    let f = simplex_pencil(q, rho)?;
    Ok(sturm_distinct_roots(&f.poly, &Interval::positive_axis())? == 0)
}

/// Times `t ∈ (0, 1)` at which `(1-t)Q + tρQ` is degenerate, as closed
/// intervals of width at most `width` in the `x = t/(1-t)` parameter mapped
/// back to `t`.
pub fn simplex_degenerate_times(q: &PointTuple, rho: &Rotation, width: &Scalar) -> Result<Vec<(Scalar, Scalar)>> {
    let f = simplex_pencil(q, rho)?;
    let to_t = |x: Scalar| &x / (Scalar::one() + &x);
    Ok(isolate_roots(&f.poly, &Interval::positive_axis(), width)?
        .into_iter()
        .map(|(a, b)| (to_t(a), to_t(b)))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoodnessSample {
    pub rotation: Rotation,
    /// Distinct roots of the pencil of `(P_sub, ρP'_sub)` on `(0, ∞)`.
    pub roots: usize,
    /// Orientation changes, i.e. odd-multiplicity roots.
    pub sign_changes: usize,
    pub good: bool,
}

/// `ρ` is good for the subset pair when the pencil of `P_sub -> ρP'_sub`
/// has at most `d/2` roots on `(0, ∞)`.
pub fn is_good(p_sub: &[&Point], q_sub: &[&Point], rho: &Rotation) -> Result<GoodnessSample> {
    let d = rho.dim();
    let image = q_sub.iter().map(|q| rho.apply_point(q)).collect::<Result<Vec<_>>>()?;
    let image_refs: Vec<&Point> = image.iter().collect();
    let ones = vec![Scalar::one(); d];
    let f = build_pencil(p_sub, &image_refs, &ones)?;
    let axis = Interval::positive_axis();
    let roots = sturm_distinct_roots(&f.poly, &axis)?;
    let sign_changes = sign_change_count(&f.poly, &axis)?;
    let good = 2 * roots <= d;
    if d % 4 == 2 && orient(p_sub)? == orient(q_sub)? {
        if sign_changes % 2 == 1 {
            return Err(Error::InvariantBreach("odd flip count between equal orientations".into()));
        }
        if good && sign_changes > (d - 1) / 2 {
            return Err(Error::InvariantBreach(format!("good rotation with {sign_changes} flips in d = {d}")));
        }
    }
    Ok(GoodnessSample { rotation: rho.clone(), roots, sign_changes, good })
}

/// Wilson score half-width at 95% for `k` successes out of `n`.
pub fn wilson_half_width(k: usize, n: usize) -> f64 {
    if n == 0 {
        return f64::INFINITY;
    }
    let (nf, p) = (n as f64, k as f64 / n as f64);
    let z2 = Z95 * Z95;
    Z95 / (1.0 + z2 / nf) * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureEstimate {
    pub samples: usize,
    pub seed: u64,
    pub good: usize,
    pub estimate: f64,
    pub half_width: f64,
    /// Samples where neither `ρ` nor `-ρ` was good.
    pub dichotomy_failures: usize,
}

impl MeasureEstimate {
    /// Lower end of the estimate after `k` half-widths.
    pub fn lower(&self, k: f64) -> f64 {
        self.estimate - k * self.half_width
    }
}

/// Fraction of Haar-random rotations that are good for the subset pair.
/// Sample `i` uses stream `i` of `seed`, so the result does not depend on
/// the thread count.
pub fn estimate_measure(p_sub: &[&Point], q_sub: &[&Point], samples: usize, seed: u64) -> Result<MeasureEstimate> {
    if samples == 0 {
        return Err(Error::InvalidParameter("sample count must be positive".into()));
    }
    let d = p_sub.len().saturating_sub(1);
    if d % 2 == 1 || d == 0 {
        return Err(Error::Precondition(format!("good rotations need even d, got {d}")));
    }
    let (op, oq) = (orient(p_sub)?, orient(q_sub)?);
    if op.is_zero() || op != oq {
        return Err(Error::Precondition("sub-tuples must share a nonzero orientation".into()));
    }
    let per: Vec<(bool, bool)> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let rho = sample_rotation(d, seed, i)?;
            let g = is_good(p_sub, q_sub, &rho)?.good;
            let g_neg = is_good(p_sub, q_sub, &rho.negated()?)?.good;
            Ok((g, g || g_neg))
        })
        .collect::<Result<_>>()?;
    let good = per.iter().filter(|(g, _)| *g).count();
    Ok(MeasureEstimate {
        samples,
        seed,
        good,
        estimate: good as f64 / samples as f64,
        half_width: wilson_half_width(good, samples),
        dichotomy_failures: per.iter().filter(|(_, either)| !either).count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn dist2(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum()
    }

    #[test]
    fn regular_simplex_shape() {
        for d in 2..=6 {
            let s = regular_simplex(d).unwrap();
            let v: Vec<Vec<f64>> = s.points().iter().map(Point::to_f64).collect();
            let ref_d = dist2(&v[0], &v[1]);
            for i in 0..=d {
                assert!((dist2(&v[i], &vec![0.0; d]) - 1.0).abs() < 1e-12);
                for j in i + 1..=d {
                    assert!((dist2(&v[i], &v[j]) - ref_d).abs() / ref_d < 1e-12);
                }
            }
            let centroid: f64 = (0..d).map(|k| v.iter().map(|p| p[k]).sum::<f64>().powi(2)).sum::<f64>().sqrt();
            assert!(centroid < 1e-12);
        }
        assert!(regular_simplex(1).is_err());
    }

    #[test]
    fn exact_constructors() {
        let q = Rotation::planar(std::f64::consts::FRAC_PI_2).unwrap();
        assert!(q.is_exact());
        assert_eq!(q.rows_exact()[1][0], int(1));
        assert!(check_rho(&q).is_ok());
        let h = Rotation::planar(std::f64::consts::PI).unwrap();
        assert_eq!(h, Rotation::half_turn(2).unwrap());
        assert!(check_rho(&h).is_err());
        assert!(Rotation::half_turn(3).is_err());
        assert!(Rotation::from_exact(vec![vec![int(1), int(0)], vec![int(0), int(-1)]]).is_err());
        let pyth = Rotation::from_exact(vec![vec![ratio(3, 5), ratio(-4, 5)], vec![ratio(4, 5), ratio(3, 5)]]).unwrap();
        assert_eq!(pyth.orthogonality_defect(), 0.0);
    }

    #[test]
    fn cayley_is_exact_rotation() {
        let a = vec![
            vec![int(0), ratio(1, 2), int(-1), int(0)],
            vec![ratio(-1, 2), int(0), int(2), ratio(1, 3)],
            vec![int(1), int(-2), int(0), int(1)],
            vec![int(0), ratio(-1, 3), int(-1), int(0)],
        ];
        let r = Rotation::cayley(&a).unwrap();
        assert!(r.is_exact());
        assert_eq!(r.dim(), 4);
        assert!(Rotation::cayley(&[vec![int(1)]]).is_err());
    }

    #[test]
    fn haar_samples_are_rotations() {
        for d in 2..=5 {
            for i in 0..5 {
                let r = sample_rotation(d, 9, i).unwrap();
                assert!(r.orthogonality_defect() < 1e-12);
                assert!(det(r.rows_exact()) > Scalar::zero());
            }
        }
        assert_eq!(sample_rotation(3, 1, 2).unwrap(), sample_rotation(3, 1, 2).unwrap());
        assert_ne!(sample_rotation(3, 1, 2).unwrap(), sample_rotation(3, 1, 3).unwrap());
    }

    #[test]
    fn pick_rho_rules() {
        for d in [2, 4, 6] {
            let r = pick_rho(d, 3).unwrap();
            assert!(r.eigen_margin() > EIGEN_MARGIN_TOL);
            let c = cyclic_simplex_rotation(d).unwrap();
            assert!(check_rho(&c).is_ok());
        }
        assert!(matches!(pick_rho(3, 0), Err(Error::Precondition(_))));
        assert!(matches!(cyclic_simplex_rotation(5), Err(Error::Precondition(_))));
    }

    #[test]
    fn cyclic_rotation_permutes_vertices() {
        let d = 4;
        let c = cyclic_simplex_rotation(d).unwrap();
        let s = regular_simplex(d).unwrap();
        let img = c.apply(&s).unwrap();
        for i in 0..=d {
            let a = img.point(i).to_f64();
            let b = s.point((i + 1) % (d + 1)).to_f64();
            assert!(dist2(&a, &b) < 1e-24);
        }
    }

    #[test]
    fn simplex_motion_examples() {
        let q = regular_simplex(2).unwrap();
        let quarter = Rotation::planar(std::f64::consts::FRAC_PI_2).unwrap();
        assert!(simplex_motion_constant(&q, &quarter).unwrap());
        let half = Rotation::planar(std::f64::consts::PI).unwrap();
        assert!(!simplex_motion_constant(&q, &half).unwrap());
        let times = simplex_degenerate_times(&q, &half, &scalar::dyadic(20)).unwrap();
        assert_eq!(times, vec![(ratio(1, 2), ratio(1, 2))]);
        for k in 1..100 {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / 100.0;
            if (theta - std::f64::consts::PI).abs() < 1e-9 {
                continue;
            }
            let rho = Rotation::planar(theta).unwrap();
            assert!(simplex_motion_constant(&q, &rho).unwrap(), "theta = {theta}");
        }
    }

    #[test]
    fn goodness_in_the_plane() {
        let p = PointTuple::from_ints(2, &[&[0, 0], &[3, 0], &[1, 2]]).unwrap();
        let q = PointTuple::from_ints(2, &[&[1, 1], &[4, 2], &[0, 3]]).unwrap();
        let (ps, qs) = (p.select(&[0, 1, 2]), q.select(&[0, 1, 2]));
        let id = is_good(&ps, &ps, &Rotation::identity(2)).unwrap();
        assert!(id.good && id.roots == 0);
        for i in 0..50 {
            let rho = sample_rotation(2, 5, i).unwrap();
            let s = is_good(&ps, &qs, &rho).unwrap();
            assert_eq!(s.good, s.sign_changes == 0 && s.roots <= 1);
            let neg = is_good(&ps, &qs, &rho.negated().unwrap()).unwrap();
            assert!(s.good || neg.good);
        }
    }

    #[test]
    fn measure_estimate_is_deterministic() {
        let p = PointTuple::from_ints(2, &[&[0, 0], &[3, 0], &[1, 2]]).unwrap();
        let q = PointTuple::from_ints(2, &[&[5, -1], &[2, 7], &[-3, 0]]).unwrap();
        let (ps, qs) = (p.select(&[0, 1, 2]), q.select(&[0, 1, 2]));
        let a = estimate_measure(&ps, &qs, 300, 11).unwrap();
        let b = estimate_measure(&ps, &qs, 300, 11).unwrap();
        assert_eq!(a, b);
        assert!(a.lower(3.0) > 0.5, "{a:?}");
        assert_eq!(a.dichotomy_failures, 0);
        assert!(estimate_measure(&ps, &qs, 0, 1).is_err());
        let mirrored = crate::geometry::mirror(&q);
        assert!(matches!(estimate_measure(&ps, &mirrored.select(&[0, 1, 2]), 10, 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn wilson_interval() {
        assert!(wilson_half_width(100, 100) > 0.0);
        assert!((wilson_half_width(50, 100) - 0.0962).abs() < 1e-3);
        assert!(wilson_half_width(0, 0).is_infinite());
    }
}
