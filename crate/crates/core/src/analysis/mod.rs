//! Brute-force oracles, bounded equivalence checks, continuity radii, and
//! random instances for property tests.

pub mod constructions;
pub mod continuity;
pub mod equivalence;
pub mod oracles;
pub mod random;

use crate::error::{Error, Result};

/// `k^l`, or `None` on overflow.
pub(crate) fn count_strings(k: usize, l: usize) -> Option<u128> {
    (k as u128).checked_pow(u32::try_from(l).ok()?)
}

pub(crate) fn check_budget(needed: Option<u128>, budget: u64) -> Result<()> {
    match needed {
        Some(n) if n <= u128::from(budget) => Ok(()),
        Some(n) => Err(Error::BudgetExceeded { needed: n, budget }),
        None => Err(Error::BudgetExceeded { needed: u128::MAX, budget }),
    }
}

/// Calls `visit` on every tuple in `[0, k)^l`, in lexicographic order.
pub(crate) fn for_each_tuple(k: usize, l: usize, mut visit: impl FnMut(&[usize]) -> Result<()>) -> Result<()> {
    let mut tuple = vec![0usize; l];
    if l > 0 && k == 0 {
        return Ok(());
    }
    loop {
        visit(&tuple)?;
        let mut i = l;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            tuple[i] += 1;
            if tuple[i] < k {
                break;
            }
            tuple[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuples_in_lexicographic_order() {
        let mut seen = Vec::new();
        for_each_tuple(2, 2, |t| {
            seen.push(t.to_vec());
            Ok(())
        })
        .unwrap();
        assert_eq!(seen, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);

        let mut empty = 0;
        for_each_tuple(3, 0, |_| {
            empty += 1;
            Ok(())
        })
        .unwrap();
        assert_eq!(empty, 1);
    }

    #[test]
    fn budget() {
        assert!(check_budget(count_strings(4, 3), 64).is_ok());
        assert_eq!(
            check_budget(count_strings(4, 4), 64),
            Err(Error::BudgetExceeded { needed: 256, budget: 64 })
        );
        assert!(check_budget(count_strings(10, 100), u64::MAX).is_err());
    }
}
