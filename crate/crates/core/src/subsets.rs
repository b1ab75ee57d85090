//! Colexicographic enumeration of k-subsets of `0..n`.
//!
//! Colex order compares sorted tuples by their largest element first, so
//! the subsets of `0..n` form a prefix of the subsets of `0..n+1`. Every
//! per-subset table in this crate (order types, cost ledgers) uses it.

/// `C(n, k)`, saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Iterator over sorted k-subsets of `0..n` in colex order.
#[derive(Debug, Clone)]
pub struct Colex {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Colex {
    pub fn new(n: usize, k: usize) -> Self {
        let current = (k <= n).then(|| (0..k).collect());
        Colex { n, current }
    }
}

impl Iterator for Colex {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let c = self.current.as_mut().unwrap();
        let k = c.len();
        let mut i = 0;
        loop {
            if i == k {
                self.current = None;
                break;
            }
            let limit = if i + 1 < k { c[i + 1] } else { self.n };
            if c[i] + 1 < limit {
                c[i] += 1;
                for (j, slot) in c.iter_mut().enumerate().take(i) {
                    *slot = j;
                }
                break;
            }
            i += 1;
        }
        Some(out)
    }
}

pub fn colex(n: usize, k: usize) -> Colex {
    Colex::new(n, k)
}

/// Position of a sorted subset in colex order.
pub fn colex_rank(subset: &[usize]) -> u64 {
    subset
        .iter()
        .enumerate()
        .map(|(i, &c)| binomial(c, i + 1))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_choose_three() {
        let all: Vec<_> = colex(4, 3).collect();
        assert_eq!(all, vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]);
    }

    #[test]
    fn counts_and_ranks_agree() {
        for n in 0..9 {
            for k in 0..=n + 1 {
                let all: Vec<_> = colex(n, k).collect();
                assert_eq!(all.len() as u64, binomial(n, k), "n={n} k={k}");
                for (pos, s) in all.iter().enumerate() {
                    assert_eq!(colex_rank(s), pos as u64);
                    assert!(s.windows(2).all(|w| w[0] < w[1]));
                }
            }
        }
    }

    #[test]
    fn prefix_property() {
        let small: Vec<_> = colex(5, 3).collect();
        let big: Vec<_> = colex(7, 3).collect();
        assert_eq!(&big[..small.len()], &small[..]);
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(7, 3), 35);
        assert_eq!(binomial(13, 3), 286);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(0, 0), 1);
    }
}
