use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{is_general_position, PointTuple};
use crate::pencil::coefficient_profile;
use crate::scalar::{int, Scalar};

const MAX_ATTEMPTS: u64 = 64;
const GRID: i64 = 1 << 10;

/// True iff every mixed determinant `r_j` of every subset, with `source`
/// supplying the unreplaced rows, is nonzero.
pub fn profiles_nonvanishing(source: &PointTuple, target: &PointTuple) -> Result<bool> {
    source.check_same_shape(target)?;
    for s in source.subsets() {
        let prof = coefficient_profile(&source.select(&s), &target.select(&s))?;
        if prof.first_vanishing().is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Moves each coordinate by a dyadic multiple of `budget` (never more than
/// `budget`) until the tuple is in general position and, with a partner,
/// every mixed determinant against it is nonzero. Attempt `a` draws offsets
/// from a generator seeded by `a` and scaled by `2^-(a/8)`, so results are
/// reproducible. Inputs that already qualify come back unchanged.
pub fn perturb_general(p: &PointTuple, budget: &Scalar, partner: Option<&PointTuple>) -> Result<PointTuple> {
    if !budget.is_positive() {
        return Err(Error::InvalidParameter("perturbation budget must be positive".into()));
    }
    if let Some(src) = partner {
        src.check_same_shape(p)?;
        if !is_general_position(src) {
            return Err(Error::InvalidParameter("partner tuple must be in general position".into()));
        }
    }
    let acceptable = |q: &PointTuple| -> Result<bool> {
        if !is_general_position(q) {
            return Ok(false);
        }
        match partner {
            Some(src) => profiles_nonvanishing(src, q),
            None => Ok(true),
        }
    };
    if acceptable(p)? {
        return Ok(p.clone());
    }
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(attempt);
        let shrink = int(1 << (attempt / 8));
        let offsets: Vec<Vec<Scalar>> = (0..p.len())
            .map(|_| {
                (0..p.dim())
                    .map(|_| {
                        let z = rng.random_range(-GRID..=GRID);
                        budget * Scalar::new(z.into(), GRID.into()) / &shrink
                    })
                    .collect()
            })
            .collect();
        if offsets.iter().flatten().all(Zero::is_zero) {
            continue;
        }
        let q = p.map_coords(|i, k, c| c + &offsets[i][k]);
        if acceptable(&q)? {
            return Ok(q);
        }
    }
    Err(Error::Exhausted("perturbation attempts exhausted".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{order_type, robust_radius};
    use crate::scalar::ratio;

    #[test]
    fn generic_input_unchanged() {
        let p = PointTuple::from_ints(2, &[&[0, 0], &[3, 1], &[1, 2], &[5, 4]]).unwrap();
        assert_eq!(perturb_general(&p, &ratio(1, 10), None).unwrap(), p);
    }

    #[test]
    fn collinear_triple_fixed() {
        let p = PointTuple::from_ints(2, &[&[0, 0], &[1, 1], &[2, 2], &[0, 3]]).unwrap();
        let budget = ratio(1, 100);
        let q = perturb_general(&p, &budget, None).unwrap();
        assert!(order_type(&q).unwrap().is_general_position());
        for (a, b) in p.points().iter().zip(q.points()) {
            assert!(a.max_distance(b) <= budget);
        }
    }

    #[test]
    fn within_radius_keeps_order_type() {
        let p = PointTuple::from_ints(2, &[&[0, 0], &[3, 1], &[1, 2], &[5, 4]]).unwrap();
        let partner = PointTuple::from_ints(2, &[&[0, 0], &[0, 1], &[1, 0], &[2, 2]]).unwrap();
        let eps = robust_radius(&p).unwrap().epsilon;
        let q = perturb_general(&p, &eps, Some(&partner)).unwrap();
        assert_eq!(order_type(&q).unwrap(), order_type(&p).unwrap());
        assert!(profiles_nonvanishing(&partner, &q).unwrap());
    }

    #[test]
    fn vanishing_profile_repaired() {
        // mixing the target's x-row with the source's y-row gives a repeated point
        let src = PointTuple::from_ints(2, &[&[0, 0], &[1, 0], &[0, 1]]).unwrap();
        let tgt = PointTuple::from_ints(2, &[&[0, 5], &[0, 7], &[1, 9]]).unwrap();
        assert!(!profiles_nonvanishing(&src, &tgt).unwrap());
        let eps = robust_radius(&tgt).unwrap().epsilon;
        let fixed = perturb_general(&tgt, &eps, Some(&src)).unwrap();
        assert!(profiles_nonvanishing(&src, &fixed).unwrap());
        assert_eq!(order_type(&fixed).unwrap(), order_type(&tgt).unwrap());
    }

    #[test]
    fn bad_budget() {
        let p = PointTuple::from_ints(2, &[&[0, 0], &[1, 1], &[2, 2]]).unwrap();
        assert!(perturb_general(&p, &Scalar::zero(), None).is_err());
    }
}
