//! Sampling oracle for linear-motion cost.
//!
//! Orientation signs are evaluated directly on the interpolated points
//! `(1-t)P + tQ` over a t-grid. A grid cell is trusted once the Sturm count
//! of the subset's pencil on the matching x-interval shows at most one
//! distinct root inside it; otherwise the cell is split. A trusted cell
//! contributes one flip exactly when its endpoint signs differ.

use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{orientation_det, PointTuple};
use crate::scalar::{self, int, Scalar};
use crate::sturm::{Bound, Interval, SturmChain};

use super::{check_endpoints, subset_pencil};

const MAX_CELLS_PER_SUBSET: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscretizedCost {
    pub ledger: Vec<u32>,
    pub total: u64,
    /// Cells evaluated across all subsets after refinement.
    pub cells: usize,
}

fn sign_at(p: &PointTuple, q: &PointTuple, subset: &[usize], t: &Scalar) -> Result<i8> {
    let s = Scalar::one() - t;
    let pts: Vec<crate::geometry::Point> = subset
        .iter()
        .map(|&i| {
            crate::geometry::Point::new(
                p.point(i)
                    .coords
                    .iter()
                    .zip(&q.point(i).coords)
                    .map(|(a, b)| a * &s + b * t)
                    .collect(),
            )
        })
        .collect();
    let refs: Vec<&crate::geometry::Point> = pts.iter().collect();
    Ok(scalar::sign(&orientation_det(&refs)?))
}

fn x_of(t: &Scalar) -> Bound {
    if t.is_one() {
        Bound::PosInf
    } else {
        Bound::Finite(t / (Scalar::one() - t))
    }
}

fn subset_flips(p: &PointTuple, q: &PointTuple, subset: &[usize], steps: usize) -> Result<(u32, usize)> {
    let ones = vec![Scalar::one(); p.dim()];
    let chain = SturmChain::new(&subset_pencil(p, q, subset, &ones)?.poly)?;
    let steps = steps.max(1) as i64;
    let mut grid: Vec<Scalar> = (0..=steps).map(|k| Scalar::new(k.into(), steps.into())).collect();
    // slide grid points off degenerate instants towards their right neighbour
    for k in 1..grid.len() - 1 {
        while sign_at(p, q, subset, &grid[k])? == 0 {
            grid[k] = (&grid[k] + &grid[k + 1]) / int(2);
        }
    }
    let mut stack: Vec<(Scalar, i8, Scalar, i8)> = Vec::new();
    let signs: Vec<i8> = grid.iter().map(|t| sign_at(p, q, subset, t)).collect::<Result<_>>()?;
    for k in (0..grid.len() - 1).rev() {
        stack.push((grid[k].clone(), signs[k], grid[k + 1].clone(), signs[k + 1]));
    }
    let mut flips = 0u32;
    let mut cells = 0usize;
    while let Some((a, sa, b, sb)) = stack.pop() {
        cells += 1;
        if cells > MAX_CELLS_PER_SUBSET {
            return Err(Error::Exhausted(format!("refinement budget for subset {subset:?}")));
        }
        let roots = chain.count(&Interval::new(x_of(&a), x_of(&b)));
        if roots <= 1 {
            if sa != sb {
                flips += 1;
            }
            continue;
        }
        let mut mid = (&a + &b) / int(2);
        let mut sm = sign_at(p, q, subset, &mid)?;
        while sm == 0 {
            mid = (&mid + &b) / int(2);
            sm = sign_at(p, q, subset, &mid)?;
        }
        stack.push((mid.clone(), sm, b, sb));
        stack.push((a, sa, mid, sm));
    }
    Ok((flips, cells))
}

/// Total flips of the linear motion `p -> target`, found by sampling.
pub fn discretized_cost(p: &PointTuple, target: &PointTuple, initial_steps: usize) -> Result<DiscretizedCost> {
    if initial_steps == 0 {
        return Err(Error::InvalidParameter("initial_steps must be positive".into()));
    }
    let subsets = check_endpoints(p, target)?;
    let per: Vec<(u32, usize)> = subsets
        .par_iter()
        .map(|s| subset_flips(p, target, s, initial_steps))
        .collect::<Result<_>>()?;
    let ledger: Vec<u32> = per.iter().map(|x| x.0).collect();
    let cells = per.iter().map(|x| x.1).sum();
    debug_assert!(ledger.iter().all(|&c| c as usize <= p.dim()));
    Ok(DiscretizedCost {
        total: ledger.iter().map(|&c| c as u64).sum(),
        ledger,
        cells,
    })
}
