//! Acceptance run: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cww_core::analysis::constructions::{split_state, split_variable};
use cww_core::analysis::continuity::{continuity_probe, continuity_probe_around, continuity_radius};
use cww_core::analysis::equivalence::equivalence_up_to;
use cww_core::analysis::oracles::{extension_principle_oracle, retraction_principle_oracle};
use cww_core::analysis::random::{random_fuzzy_word, random_pacv, random_pacw, random_simplex, random_word, random_words, ModelShape};
use cww_core::fixtures::{self, ab, suspect_pacw, suspect_pgcw, w1};
use cww_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;
const EXACT: f64 = 1e-12;
const BUDGET: u64 = 1 << 22;

/// Collects failed expectations for one criterion.
#[derive(Default)]
struct Tally {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn close(&mut self, got: f64, want: f64, tol: f64, what: &str) {
        self.expect((got - want).abs() <= tol, || format!("{what}: got {got}, want {want}"));
    }

    fn rows(&mut self, got: &[f64], want: &[f64], tol: f64, what: &str) {
        self.expect(got.len() == want.len() && max_gap(got, want) <= tol, || format!("{what}: got {got:?}, want {want:?}"));
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn word(a: f64) -> ProbWord {
    ProbWord::new(&ab(), vec![a, 1.0 - a]).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn shape(r: &mut ChaCha8Rng) -> ModelShape {
    ModelShape::random(r, 5, 4, 4)
}

fn word_language(t: &mut Tally) -> Result<()> {
    let m = suspect_pacw();
    for (s, p) in [(["W1", "W1"], 0.05), (["W1", "W2"], 0.1975), (["W2", "W1"], 0.05), (["W2", "W2"], 0.43)] {
        t.close(m.accept_probability(&s)?, p, EXACT, &s.join(" "));
    }
    Ok(())
}

fn retraction(t: &mut Tally) -> Result<()> {
    let m = suspect_pacw();
    let r = retract(&m)?;
    for (from, sym, row) in fixtures::SUSPECT_RETRACTION_ROWS {
        t.rows(r.row(r.state_index(from)?, r.label_index(sym)?), &row, EXACT, &format!("{from},{sym}"));
    }
    t.close(r.accept_probability(&["a", "b"])?, 0.203675, EXACT, "direct ab");
    t.close(retraction_principle_oracle(&m, &["a", "b"], BUDGET)?, 0.203675, EXACT, "oracle ab");
    Ok(())
}

fn generalized_extension(t: &mut Tally) -> Result<()> {
    let m = suspect_pacw();
    let e = generalized_extend(&m)?;
    let w = word(0.2);
    for (p, row) in [[0.232, 0.681, 0.087], [0.141, 0.55, 0.309], [0.063, 0.295, 0.642]].iter().enumerate() {
        t.rows(e.step(p, &w)?.probs(), row, EXACT, &format!("retraction route q{p}"));
        t.rows(e.eval_eq3(p, &w)?.probs(), row, EXACT, &format!("theta route q{p}"));
    }
    let s = [w.clone(), w];
    t.close(e.accept(&s)?, 0.286467, EXACT, "retraction route W'W'");
    t.close(e.accept_eq3(&s)?, 0.286467, EXACT, "theta route W'W'");
    t.close(extension_principle_oracle(&m, &s, BUDGET)?, 0.286467, EXACT, "oracle W'W'");
    Ok(())
}

fn non_extension(t: &mut Tally) -> Result<()> {
    let m = suspect_pacw();
    let up = generalized_extend(&m)?.step(0, &w1())?;
    let stored = m.run(&["W1"])?;
    t.rows(up.probs(), &[0.624, 0.317, 0.059], EXACT, "extended row");
    t.rows(stored.probs(), &[0.75, 0.2, 0.05], EXACT, "stored row");
    let gaps: Vec<f64> = up.probs().iter().zip(stored.probs()).map(|(a, b)| (a - b).abs()).collect();
    t.rows(&gaps, &[0.126, 0.117, 0.009], EXACT, "component gaps");
    t.expect(up.max_abs_diff(&stored) > 0.1, || "rows coincide".into());
    Ok(())
}

fn grammar_equivalence(t: &mut Tally) -> Result<()> {
    let m = suspect_pacw();
    let g = suspect_pgcw();
    let report = equivalence_up_to(&m, &g, &m.label_names(), 4, TOL, BUDGET)?;
    t.expect(report.passed, || format!("gap {} at {:?}", report.max_abs_gap, report.worst_string));
    let expected: u64 = (0..=4).map(|l| 2u64.pow(l)).sum();
    t.expect(report.strings_checked == expected, || format!("checked {} strings", report.strings_checked));
    t.note(format!("{} strings over 2 labels", report.strings_checked));

    let induced = grammar_from_automaton(&m)?;
    t.expect(induced == g, || "induced grammar differs from the table".into());
    let mut entries = 0;
    for (from, label, row) in fixtures::SUSPECT_ROWS {
        let (a, l) = (induced.variable_index(from)?, induced.label_index(label)?);
        for (b, p) in row.iter().enumerate() {
            t.expect(induced.chain_prob(a, l, b) == *p, || format!("{from} -> {label} q{b}"));
            entries += 1;
        }
    }
    for (a, eps) in [(0, 0.0), (1, 0.0), (2, 1.0)] {
        t.expect(induced.epsilon_prob(a) == eps, || format!("q{a} -> epsilon"));
        entries += 1;
    }
    t.expect(entries == 21, || format!("{entries} table entries"));
    Ok(())
}

fn operator_identities(t: &mut Tally) -> Result<()> {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut r = rng(6);
    for _ in 0..50 {
        let v = { let sh = shape(&mut r); random_pacv(&mut r, sh) };
        let hat = pacv_extend(&v)?;
        let up = generalized_extend(&dirac_identify(&v)?)?;
        for _ in 0..20 {
            let p = r.gen_range(0..v.n_states());
            let w = random_word(&mut r, v.alphabet());
            worst = worst.max(hat.lazy_step(p, &w)?.max_abs_diff(&up.eval_eq3(p, &w)?));
            worst = worst.max(hat.lazy_step(p, &w)?.max_abs_diff(&up.step(p, &w)?));
        }
    }
    t.expect(worst < TOL, || format!("crisp extension vs Dirac-identified: gap {worst:e}"));
    t.note(format!("crisp/Dirac {worst:.1e}"));

    let mut worst = 0.0f64;
    for _ in 0..50 {
        let m = { let sh = shape(&mut r); random_pacw(&mut r, sh) };
        let e = generalized_extend(&m)?;
        let via = pacv_extend(&retract(&m)?)?;
        for _ in 0..100 {
            let p = r.gen_range(0..m.n_states());
            let w = random_word(&mut r, m.alphabet());
            worst = worst.max(via.lazy_step(p, &w)?.max_abs_diff(&e.eval_eq3(p, &w)?));
        }
    }
    t.expect(worst < TOL, || format!("extension of retraction: gap {worst:e}"));
    t.note(format!("retract-then-extend {worst:.1e}"));

    let mut worst = 0.0f64;
    for _ in 0..50 {
        let m = { let sh = shape(&mut r); random_pacw(&mut r, sh) };
        let e = generalized_extend(&m)?;
        let l = r.gen_range(1..5);
        let parts = random_words(&mut r, m.alphabet(), l);
        let k = random_simplex(&mut r, l);
        let terms: Vec<(f64, &ProbWord)> = k.iter().copied().zip(&parts).collect();
        let mixed = as_word(&linear_combine(&terms)?)?;
        for p in 0..m.n_states() {
            let mut sum = vec![0.0; m.n_states()];
            for (ki, w) in k.iter().zip(&parts) {
                for (acc, x) in sum.iter_mut().zip(e.step(p, w)?.probs()) {
                    *acc += ki * x;
                }
            }
            worst = worst.max(max_gap(e.step(p, &mixed)?.probs(), &sum));
        }
    }
    t.expect(worst < TOL, || format!("linearity: gap {worst:e}"));
    t.note(format!("linearity {worst:.1e}"));

    let mut worst = 0.0f64;
    for _ in 0..50 {
        let m = { let sh = shape(&mut r); random_pacw(&mut r, sh) };
        for s in m.alphabet().symbols() {
            let c = chi(&m, s)?;
            worst = worst.max((c.iter().sum::<f64>() - 1.0).abs());
            t.expect(c.iter().all(|x| *x >= 0.0), || "negative chi weight".into());
        }
        for _ in 0..10 {
            let th = theta(&m, &random_word(&mut r, m.alphabet()))?;
            worst = worst.max((th.iter().sum::<f64>() - 1.0).abs());
            t.expect(th.iter().all(|x| *x >= 0.0), || "negative theta weight".into());
        }
    }
    t.expect(worst < TOL, || format!("chi/theta mass off by {worst:e}"));

    let elapsed = start.elapsed();
    t.expect(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"));
    t.note(format!("{:.2}s", elapsed.as_secs_f64()));
    Ok(())
}

fn continuity(t: &mut Tally) -> Result<()> {
    let start = Instant::now();
    let e = generalized_extend(&suspect_pacw())?;
    let bound = continuity_radius(e.lazy(), 0.001, 1, false)?;
    let target = 2f64.sqrt() / 2000.0;
    t.expect(bound.radius == target, || format!("radius {:e} is not bitwise sqrt(2)/2000 = {target:e}", bound.radius));
    t.close(bound.radius, target, 1e-18, "radius");

    let near = e.step(1, &word(0.2004))?;
    let centre = e.step(1, &word(0.2))?;
    let gaps: Vec<f64> = near.probs().iter().zip(centre.probs()).map(|(a, b)| (a - b).abs()).collect();
    t.rows(&gaps, &[0.000112, 0.0, 0.000112], TOL, "gaps at 0.2004");
    let around = continuity_probe_around(e.lazy(), &bound, &[word(0.2)], 1000, 11)?;
    t.expect(around.passed, || format!("probe around 0.2: gap {}", around.max_gap));

    let mut worst_ratio = 0.0f64;
    let mut r = rng(7);
    let mut models = vec![e.lazy().clone()];
    for _ in 0..10 {
        let m = { let sh = shape(&mut r); random_pacw(&mut r, sh) };
        models.push(generalized_extend(&m)?.lazy().clone());
    }
    for (i, lazy) in models.iter().enumerate() {
        for level in 1..=3 {
            for word_language in [false, true] {
                let b = continuity_radius(lazy, 0.001, level, word_language)?;
                let seed = (i * 10 + level) as u64 + u64::from(word_language) * 1000;
                let report = continuity_probe(lazy, &b, 1000, seed)?;
                worst_ratio = worst_ratio.max(report.max_gap / b.epsilon);
                t.expect(report.passed, || format!("model {i} level {level}: gap {} > eps", report.max_gap));
            }
        }
    }
    t.note(format!("worst gap/eps {worst_ratio:.3}"));
    let elapsed = start.elapsed();
    t.expect(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"));
    Ok(())
}

fn fuzzy_copy(m: &WordAutomaton) -> Result<WordAutomaton> {
    let labels = m
        .labels()
        .iter()
        .map(|l| match l.kind() {
            LabelKind::Word(w) => InputLabel::fuzzy(l.name(), w.to_fuzzy()),
            _ => l.clone(),
        })
        .collect();
    let rows = (0..m.n_states()).map(|p| (0..m.labels().len()).map(|l| m.row(p, l).to_vec()).collect()).collect();
    WordAutomaton::from_rows(m.states().to_vec(), m.alphabet().clone(), labels, rows, m.initial(), m.final_mask().to_vec())
}

fn fuzzy_variant(t: &mut Tally) -> Result<()> {
    let mut r = rng(8);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let m = { let sh = shape(&mut r); random_pacw(&mut r, sh) };
        let e = generalized_extend(&m)?;
        let fe = fuzzy_generalized_extend(&fuzzy_copy(&m)?)?;
        let ws = random_words(&mut r, m.alphabet(), 3);
        let fs: Vec<FuzzyWord> = ws.iter().map(ProbWord::to_fuzzy).collect();
        for p in 0..m.n_states() {
            worst = worst.max(fe.step(p, &fs[0])?.max_abs_diff(&e.step(p, &ws[0])?));
        }
        worst = worst.max((fe.accept(&fs)? - e.accept(&ws)?).abs());
    }
    t.expect(worst <= EXACT, || format!("fuzzy vs probability path: gap {worst:e}"));
    t.note(format!("stochastic inputs {worst:.1e}"));

    // Unit-mass components with weights that do not sum to one, so the
    // combination is a fuzzy word of mass sum(k).
    let mut worst = 0.0f64;
    let mut cases = 0;
    while cases < 100 {
        let m = { let sh = shape(&mut r); random_pacw(&mut r, sh) };
        let fe = fuzzy_generalized_extend(&fuzzy_copy(&m)?)?;
        let l = r.gen_range(1..5);
        let parts: Vec<FuzzyWord> = random_words(&mut r, m.alphabet(), l).iter().map(ProbWord::to_fuzzy).collect();
        let scale = r.gen_range(0.05..1.0);
        let k: Vec<f64> = random_simplex(&mut r, l).iter().map(|x| x * scale).collect();
        let terms: Vec<(f64, &FuzzyWord)> = k.iter().copied().zip(&parts).collect();
        let Ok(combined) = FuzzyWord::new(m.alphabet(), linear_combine(&terms)?.entries().to_vec()) else { continue };
        let mass = combined.mass();
        for p in 0..m.n_states() {
            let mut sum = vec![0.0; m.n_states()];
            for (ki, w) in k.iter().zip(&parts) {
                for (acc, x) in sum.iter_mut().zip(fe.step(p, w)?.probs()) {
                    *acc += ki * x / mass;
                }
            }
            worst = worst.max(max_gap(fe.step(p, &combined)?.probs(), &sum));
        }
        cases += 1;
    }
    t.expect(worst < TOL, || format!("scaling identity: gap {worst:e}"));

    // Arbitrary fuzzy components: weights k_i |W_i| / |W|.
    let mut worst_general = 0.0f64;
    for _ in 0..100 {
        let m = { let sh = shape(&mut r); random_pacw(&mut r, sh) };
        let fe = fuzzy_generalized_extend(&fuzzy_copy(&m)?)?;
        let l = r.gen_range(1..5);
        let parts: Vec<FuzzyWord> = (0..l).map(|_| random_fuzzy_word(&mut r, m.alphabet())).collect();
        let k = random_simplex(&mut r, l);
        let terms: Vec<(f64, &FuzzyWord)> = k.iter().copied().zip(&parts).collect();
        let combined = FuzzyWord::new(m.alphabet(), linear_combine(&terms)?.entries().to_vec())?;
        let mass = combined.mass();
        for p in 0..m.n_states() {
            let mut sum = vec![0.0; m.n_states()];
            for (ki, w) in k.iter().zip(&parts) {
                for (acc, x) in sum.iter_mut().zip(fe.step(p, w)?.probs()) {
                    *acc += ki * w.mass() / mass * x;
                }
            }
            worst_general = worst_general.max(max_gap(fe.step(p, &combined)?.probs(), &sum));
        }
    }
    t.expect(worst_general < TOL, || format!("mass-weighted identity: gap {worst_general:e}"));
    t.note(format!("scaling {worst:.1e}, mass-weighted {worst_general:.1e}"));
    Ok(())
}

fn equivalence_preservation(t: &mut Tally) -> Result<()> {
    let mut r = rng(9);
    let mut models = vec![suspect_pacw()];
    for _ in 0..20 {
        let sh = ModelShape::random(&mut r, 4, 3, 3);
        models.push(random_pacw(&mut r, sh));
    }
    let mut pairs = 0;
    for m in &models {
        let q = m.states()[r.gen_range(0..m.n_states())].clone();
        let split = split_state(m, &q, "copy")?;
        let renamed = split.rename_states(|s| format!("{s}'"))?;
        let probes = random_words(&mut r, m.alphabet(), 3);
        let (ea, eb) = (generalized_extend(m)?, generalized_extend(&renamed)?);
        let (ra, rb) = (retract(m)?, retract(&renamed)?);
        let base = equivalence_up_to(m, &renamed, &m.label_names(), 4, TOL, BUDGET)?;
        let down = equivalence_up_to(&ra, &rb, &ra.label_names(), 4, TOL, BUDGET)?;
        let up = equivalence_up_to(&ea, &eb, &probes, 4, TOL, BUDGET)?;
        t.expect(base.passed && down.passed && up.passed, || {
            format!("automaton split at {q}: gaps {} / {} / {}", base.max_abs_gap, down.max_abs_gap, up.max_abs_gap)
        });

        let g = grammar_from_automaton(m)?;
        let gs = split_variable(&g, &q, "copy")?.rename_variables(|v| format!("{v}_r"))?;
        let (ga, gb) = (grammar_retract(&g)?, grammar_retract(&gs)?);
        let down = equivalence_up_to(&ga, &gb, &ga.label_names(), 4, TOL, BUDGET)?;
        let (xa, xb) = (grammar_generalized_extend(&g)?, grammar_generalized_extend(&gs)?);
        let up = equivalence_up_to(&xa, &xb, &probes, 4, TOL, BUDGET)?;
        t.expect(down.passed && up.passed, || format!("grammar split at {q}: gaps {} / {}", down.max_abs_gap, up.max_abs_gap));
        pairs += 2;
    }
    t.note(format!("{pairs} pairs, lengths up to 4"));
    Ok(())
}

type Criterion = fn(&mut Tally) -> Result<()>;

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 9] = [
        ("word language of the fixture", word_language),
        ("retraction rows and principle", retraction),
        ("generalized extension rows and principle", generalized_extension),
        ("extension differs from stored rows", non_extension),
        ("grammar and automaton agree", grammar_equivalence),
        ("operator identities on random models", operator_identities),
        ("continuity radius and probes", continuity),
        ("fuzzy variant", fuzzy_variant),
        ("equivalence preservation", equivalence_preservation),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let mut t = Tally::default();
        if let Err(e) = run(&mut t) {
            t.failures.push(format!("error: {e}"));
        }
        let passed = t.failures.is_empty();
        all &= passed;
        let detail = if passed { t.notes.join("; ") } else { t.failures.join("; ") };
        let status = if passed { "PASS" } else { "FAIL" };
        if detail.is_empty() {
            println!("criterion {}: {status} ({name})", i + 1);
        } else {
            println!("criterion {}: {status} ({name}) {detail}", i + 1);
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
