//! Bounded-length equivalence: two languages are compared on every string of
//! length at most `max_length` over a finite domain. This is a surrogate for
//! true equivalence, which would quantify over all lengths.

use std::fmt::Display;

use serde::Serialize;

use super::for_each_tuple;
use crate::error::{Error, Result};
use crate::language::StringLanguage;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub max_length: usize,
    pub max_abs_gap: f64,
    pub worst_string: Vec<String>,
    pub strings_checked: u64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Number of strings of length `0..=max_length` over `k` letters.
pub fn strings_up_to(k: usize, max_length: usize) -> Option<u128> {
    let mut total: u128 = 0;
    let mut layer: u128 = 1;
    for _ in 0..=max_length {
        total = total.checked_add(layer)?;
        layer = layer.checked_mul(k as u128)?;
    }
    Some(total)
}

/// Compares `a` and `b` on all strings over `domain` up to `max_length`,
/// shortest first and lexicographic within a length. The first string with
/// the largest gap is reported.
pub fn equivalence_up_to<L: Clone + Display>(
    a: &dyn StringLanguage<L>,
    b: &dyn StringLanguage<L>,
    domain: &[L],
    max_length: usize,
    tolerance: f64,
    budget: u64,
) -> Result<EquivalenceReport> {
    let needed = strings_up_to(domain.len(), max_length);
    super::check_budget(needed, budget)?;
    if tolerance.is_nan() || tolerance < 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance {tolerance} must be nonnegative")));
    }
    let mut worst_gap = 0.0f64;
    let mut worst: Vec<usize> = Vec::new();
    let mut checked = 0u64;
    let mut buf: Vec<L> = Vec::with_capacity(max_length);
    for len in 0..=max_length {
        for_each_tuple(domain.len(), len, |t| {
            buf.clear();
            buf.extend(t.iter().map(|&i| domain[i].clone()));
            let gap = (a.probability(&buf)? - b.probability(&buf)?).abs();
            checked += 1;
            if gap > worst_gap || gap.is_nan() {
                worst_gap = if gap.is_nan() { f64::INFINITY } else { gap };
                worst = t.to_vec();
            }
            Ok(())
        })?;
    }
    Ok(EquivalenceReport {
        max_length,
        max_abs_gap: worst_gap,
        worst_string: worst.iter().map(|&i| domain[i].to_string()).collect(),
        strings_checked: checked,
        tolerance,
        passed: worst_gap <= tolerance,
    })
}
