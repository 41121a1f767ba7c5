//! Continuity radii of all-words automata and an empirical probe for them.
//!
//! For one step, `|δ(p, W′)(q) − δ(p, W″)(q)| ≤ Σ_σ |W′(σ) − W″(σ)| ≤
//! √n·d(W′, W″)`, so radius `ε/√n` suffices. A string of length `l` splits
//! into a prefix of length `l−1` and a last word; asking each part for
//! `ε/(2|Q|)` keeps the total below `ε`. The word language sums over `F`,
//! which costs another factor `|F|`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::random::random_word;
use crate::automata::LazyExtensionAutomaton;
use crate::distributions::{euclidean_distance, Alphabet, ProbWord};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContinuityBound {
    pub epsilon: f64,
    pub level: usize,
    pub radius: f64,
    pub for_word_language: bool,
    pub symbols: usize,
    pub states: usize,
    pub finals: usize,
}

fn check_args(epsilon: f64, level: usize) -> Result<()> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
    }
    if level == 0 {
        return Err(Error::InvalidArgument("level must be at least 1".into()));
    }
    Ok(())
}

/// The radius by literal recursion:
/// `r(ε, 1) = ε/√n`, `r(ε, l) = min(r(ε/2|Q|, l−1), r(ε/2|Q|, 1))`.
pub fn constructive_radius(
    epsilon: f64,
    level: usize,
    symbols: usize,
    states: usize,
    finals: usize,
    for_word_language: bool,
) -> f64 {
    fn r(eps: f64, l: usize, n: usize, q: usize) -> f64 {
        if l <= 1 {
            eps / (n as f64).sqrt()
        } else {
            let shrunk = eps / (2 * q) as f64;
            r(shrunk, l - 1, n, q).min(r(shrunk, 1, n, q))
        }
    }
    let eps = if for_word_language { epsilon / finals.max(1) as f64 } else { epsilon };
    r(eps, level, symbols, states)
}

/// Closed form `ε / ((2|Q|)^{l−1}·√n)`, divided by `|F|` for the word
/// language (by 1 when `F` is empty).
pub fn radius_closed_form(
    epsilon: f64,
    level: usize,
    symbols: usize,
    states: usize,
    finals: usize,
    for_word_language: bool,
) -> f64 {
    let eps = if for_word_language { epsilon / finals.max(1) as f64 } else { epsilon };
    let exponent = i32::try_from(level.saturating_sub(1)).unwrap_or(i32::MAX);
    // ε·√n / n rather than ε / √n: for ε = 0.001, n = 2 this is bitwise √2/2000.
    let n = symbols as f64;
    eps * n.sqrt() / (n * (2.0 * states as f64).powi(exponent))
}

pub fn continuity_radius(
    e: &LazyExtensionAutomaton,
    epsilon: f64,
    level: usize,
    for_word_language: bool,
) -> Result<ContinuityBound> {
    check_args(epsilon, level)?;
    let symbols = e.alphabet().len();
    let states = e.n_states();
    let finals = e.base().finals().len();
    Ok(ContinuityBound {
        epsilon,
        level,
        radius: radius_closed_form(epsilon, level, symbols, states, finals, for_word_language),
        for_word_language,
        symbols,
        states,
        finals,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeReport {
    pub bound: ContinuityBound,
    pub samples: usize,
    pub max_gap: f64,
    /// Largest `d_l` distance among the sampled pairs.
    pub max_distance: f64,
    pub worst_center: Vec<String>,
    pub worst_neighbor: Vec<String>,
    pub passed: bool,
}

/// A word strictly within `radius` of `center`: move toward a uniform random
/// word by a random fraction of the allowed distance.
pub fn random_neighbor<R: Rng + ?Sized>(rng: &mut R, center: &ProbWord, radius: f64) -> ProbWord {
    let target = random_word(rng, center.alphabet());
    let d = euclidean_distance(center, &target).expect("same alphabet");
    if d == 0.0 {
        return center.clone();
    }
    let t = (rng.gen::<f64>() * radius / d).min(1.0);
    let mixed = center.weights().iter().zip(target.weights()).map(|(c, u)| c + t * (u - c)).collect();
    ProbWord::new(center.alphabet(), mixed).expect("convex combination of words")
}

/// `max_i d(W′ᵢ, W″ᵢ)`.
pub fn string_distance(a: &[ProbWord], b: &[ProbWord]) -> Result<f64> {
    a.iter().zip(b).try_fold(0.0f64, |m, (x, y)| Ok(m.max(euclidean_distance(x, y)?)))
}

fn gap(e: &LazyExtensionAutomaton, bound: &ContinuityBound, a: &[ProbWord], b: &[ProbWord]) -> Result<f64> {
    if bound.for_word_language {
        return Ok((e.lazy_accept(a)? - e.lazy_accept(b)?).abs());
    }
    let mut worst = 0.0f64;
    for p in 0..e.n_states() {
        worst = worst.max(e.lazy_run_from(p, a)?.max_abs_diff(&e.lazy_run_from(p, b)?));
    }
    Ok(worst)
}

fn probe(
    e: &LazyExtensionAutomaton,
    bound: &ContinuityBound,
    samples: usize,
    seed: u64,
    center: Option<&[ProbWord]>,
) -> Result<ProbeReport> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    if let Some(c) = center {
        if c.len() != bound.level {
            return Err(Error::InvalidArgument(format!(
                "center has {} words but the bound is for level {}",
                c.len(),
                bound.level
            )));
        }
        if c.iter().any(|w| w.alphabet() != e.alphabet()) {
            return Err(Error::MixedAlphabets);
        }
    }
    let alphabet: &Alphabet = e.alphabet();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ProbeReport {
        bound: bound.clone(),
        samples,
        max_gap: 0.0,
        max_distance: 0.0,
        worst_center: Vec::new(),
        worst_neighbor: Vec::new(),
        passed: true,
    };
    for _ in 0..samples {
        let a: Vec<ProbWord> = match center {
            Some(c) => c.to_vec(),
            None => (0..bound.level).map(|_| random_word(&mut rng, alphabet)).collect(),
        };
        let b: Vec<ProbWord> = a.iter().map(|w| random_neighbor(&mut rng, w, bound.radius)).collect();
        report.max_distance = report.max_distance.max(string_distance(&a, &b)?);
        let g = gap(e, bound, &a, &b)?;
        if g > report.max_gap || report.worst_center.is_empty() {
            report.max_gap = report.max_gap.max(g);
            report.worst_center = a.iter().map(ToString::to_string).collect();
            report.worst_neighbor = b.iter().map(ToString::to_string).collect();
        }
    }
    report.passed = report.max_gap < bound.epsilon;
    Ok(report)
}

/// Samples `samples` pairs of word strings of length `bound.level` at
/// `d_l`-distance below the radius and records the largest gap. The same
/// seed gives the same report.
pub fn continuity_probe(
    e: &LazyExtensionAutomaton,
    bound: &ContinuityBound,
    samples: usize,
    seed: u64,
) -> Result<ProbeReport> {
    probe(e, bound, samples, seed, None)
}

/// As [`continuity_probe`] with the first string of each pair fixed.
pub fn continuity_probe_around(
    e: &LazyExtensionAutomaton,
    bound: &ContinuityBound,
    center: &[ProbWord],
    samples: usize,
    seed: u64,
) -> Result<ProbeReport> {
    probe(e, bound, samples, seed, Some(center))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, ab};
    use crate::transforms::generalized_extend;
    use approx::assert_abs_diff_eq;

    #[test]
    fn single_step_radius() {
        let e = generalized_extend(&fixtures::suspect_pacw()).unwrap();
        let b = continuity_radius(e.lazy(), 0.001, 1, false).unwrap();
        assert_abs_diff_eq!(b.radius, 2f64.sqrt() / 2000.0, epsilon = 1e-18);
        assert!(continuity_radius(e.lazy(), 0.0, 1, false).is_err());
        assert!(continuity_radius(e.lazy(), 0.1, 0, false).is_err());
    }

    #[test]
    fn word_language_radius() {
        let e = generalized_extend(&fixtures::suspect_pacw()).unwrap();
        let b = continuity_radius(e.lazy(), 0.006, 2, true).unwrap();
        assert_abs_diff_eq!(b.radius, 0.006 / (6.0 * 2f64.sqrt()), epsilon = 1e-18);
    }

    #[test]
    fn recursion_matches_closed_form() {
        for level in 1..6 {
            for (n, q, f) in [(2, 3, 1), (4, 5, 2), (3, 1, 0)] {
                for word in [false, true] {
                    let a = constructive_radius(0.01, level, n, q, f, word);
                    let b = radius_closed_form(0.01, level, n, q, f, word);
                    assert_abs_diff_eq!(a, b, epsilon = 1e-15 * a);
                }
            }
        }
    }

    #[test]
    fn neighbors_stay_inside_radius() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = ProbWord::new(&ab(), vec![0.2, 0.8]).unwrap();
        for _ in 0..200 {
            let w = random_neighbor(&mut rng, &c, 1e-3);
            assert!(euclidean_distance(&c, &w).unwrap() < 1e-3);
        }
    }

    #[test]
    fn probe_is_deterministic_and_sound() {
        let e = generalized_extend(&fixtures::suspect_pacw()).unwrap();
        let b = continuity_radius(e.lazy(), 0.001, 2, false).unwrap();
        let r1 = continuity_probe(e.lazy(), &b, 200, 9).unwrap();
        let r2 = continuity_probe(e.lazy(), &b, 200, 9).unwrap();
        assert_eq!(r1, r2);
        assert!(r1.passed);
        assert!(r1.max_distance < b.radius);
    }

    #[test]
    fn zero_radius_gives_zero_gap() {
        let e = generalized_extend(&fixtures::suspect_pacw()).unwrap();
        let mut b = continuity_radius(e.lazy(), 0.001, 1, false).unwrap();
        b.radius = 0.0;
        let r = continuity_probe(e.lazy(), &b, 50, 1).unwrap();
        assert_eq!(r.max_gap, 0.0);
    }
}
