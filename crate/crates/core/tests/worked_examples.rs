use approx::assert_abs_diff_eq;
use cww_core::analysis::continuity::{continuity_probe_around, continuity_radius};
use cww_core::analysis::equivalence::equivalence_up_to;
use cww_core::analysis::oracles::{extension_principle_oracle, retraction_principle_oracle};
use cww_core::fixtures::{self, ab, suspect_pacw, suspect_pgcw, w1, w2};
use cww_core::*;

fn word(a: f64) -> ProbWord {
    ProbWord::new(&ab(), vec![a, 1.0 - a]).unwrap()
}

fn close(a: &[f64], b: &[f64], tol: f64) {
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(b) {
        assert_abs_diff_eq!(*x, *y, epsilon = tol);
    }
}

#[test]
fn distribution_operations() {
    let ab = ab();
    assert_eq!(dirac("a", &ab).unwrap().weights(), &[1.0, 0.0]);
    assert_eq!(dirac("b", &ab).unwrap().support(), vec!["b"]);
    assert_eq!(dirac("c", &ab), Err(Error::UnknownSymbol("c".into())));

    close(scalar_mul(0.5, &w1()).unwrap().entries(), &[0.45, 0.05], 1e-15);
    assert!(scalar_mul(1.5, &w1()).is_err());
    close(linear_combine(&[(2.0, &w1()), (-1.0, &w2())]).unwrap().entries(), &[1.7, -0.7], 1e-15);
    assert!(matches!(as_word(&linear_combine(&[(2.0, &w1()), (-1.0, &w2())]).unwrap()), Err(Error::NotADistribution(_))));

    let fuzzy = FuzzyWord::new(&ab, vec![0.6, 0.2]).unwrap();
    close(normalize_fuzzy(&fuzzy).weights(), &[0.75, 0.25], 1e-15);

    let d = euclidean_distance(&word(0.2), &word(0.2004)).unwrap();
    assert_abs_diff_eq!(d, 0.0004 * 2f64.sqrt(), epsilon = 1e-12);
    assert_abs_diff_eq!(euclidean_distance(&dirac("a", &ab).unwrap(), &dirac("b", &ab).unwrap()).unwrap(), 2f64.sqrt());

    close(&decompose_in_basis(&word(0.5), &[w1(), w2()]).unwrap(), &[0.5, 0.5], 1e-12);
    assert_eq!(decompose_in_basis(&word(0.5), &[w1(), w1()]), Err(Error::LinearlyDependentBasis));
}

#[test]
fn zadeh_notation() {
    let ab = ab();
    assert_eq!(parse_zadeh("0.9\\a + 0.1\\b", &ab).unwrap(), w1());
    assert_eq!(parse_zadeh("1\\b", &ab).unwrap(), dirac("b", &ab).unwrap());
    assert!(matches!(parse_zadeh("0.5\\a + 0.6\\b", &ab), Err(Error::NotADistribution(_))));
    assert!(parse_zadeh_fuzzy("0.5\\a + 0.6\\b", &ab).is_ok());
    assert!(matches!(parse_zadeh("0.5\\a + 0.5\\a", &ab), Err(Error::DuplicateSymbol(_))));
    assert!(matches!(parse_zadeh("0.5 a", &ab), Err(Error::Syntax { .. })));
    let w = word(0.123456789);
    assert_eq!(parse_zadeh(&w.to_string(), &ab).unwrap(), w);
}

#[test]
fn word_language_of_suspect_model() {
    let m = suspect_pacw();
    let expected = [(["W1", "W1"], 0.05), (["W1", "W2"], 0.1975), (["W2", "W1"], 0.05), (["W2", "W2"], 0.43)];
    for (s, p) in expected {
        assert_abs_diff_eq!(m.accept_probability(&s).unwrap(), p, epsilon = 1e-12);
    }
}

#[test]
fn retraction_of_suspect_model() {
    let m = suspect_pacw();
    let r = retract(&m).unwrap();
    let published = fixtures::suspect_retraction();
    for p in 0..3 {
        for s in 0..2 {
            close(r.row(p, s), published.row(p, s), 1e-12);
        }
    }
    assert_abs_diff_eq!(r.accept_probability(&["a", "b"]).unwrap(), 0.203675, epsilon = 1e-12);
    assert_abs_diff_eq!(retraction_principle_oracle(&m, &["a", "b"], 16).unwrap(), 0.203675, epsilon = 1e-12);
}

#[test]
fn generalized_extension_of_suspect_model() {
    let m = suspect_pacw();
    let e = generalized_extend(&m).unwrap();
    close(&theta(&m, &word(0.2)).unwrap(), &[0.26, 0.74], 1e-12);
    let rows = [[0.232, 0.681, 0.087], [0.141, 0.55, 0.309], [0.063, 0.295, 0.642]];
    for (p, row) in rows.iter().enumerate() {
        close(e.step(p, &word(0.2)).unwrap().probs(), row, 1e-12);
        close(e.eval_eq3(p, &word(0.2)).unwrap().probs(), row, 1e-12);
    }
    let s = [word(0.2), word(0.2)];
    assert_abs_diff_eq!(e.accept(&s).unwrap(), 0.286467, epsilon = 1e-12);
    assert_abs_diff_eq!(e.accept_eq3(&s).unwrap(), 0.286467, epsilon = 1e-12);
    assert_abs_diff_eq!(extension_principle_oracle(&m, &s, 16).unwrap(), 0.286467, epsilon = 1e-12);

    let up = e.step(0, &w1()).unwrap();
    close(up.probs(), &[0.624, 0.317, 0.059], 1e-12);
    let down = m.run(&["W1"]).unwrap();
    assert_abs_diff_eq!(up.max_abs_diff(&down), 0.126, epsilon = 1e-12);
}

#[test]
fn suspect_grammar() {
    let m = suspect_pacw();
    let g = suspect_pgcw();
    assert_eq!(grammar_from_automaton(&m).unwrap(), g);
    assert_eq!(automaton_from_grammar(&g).unwrap(), m);
    let r = equivalence_up_to(&m, &g, &m.label_names(), 4, 1e-9, 1_000).unwrap();
    assert!(r.passed);

    let gr = grammar_retract(&g).unwrap();
    assert_abs_diff_eq!(gr.chain_prob(0, 0, 0), 0.68, epsilon = 1e-12);
    let ge = grammar_generalized_extend(&g).unwrap();
    assert_abs_diff_eq!(ge.generate_probability(&[word(0.2), word(0.2)]).unwrap(), 0.286467, epsilon = 1e-12);
}

#[test]
fn continuity_example() {
    let e = generalized_extend(&suspect_pacw()).unwrap();
    let b = continuity_radius(e.lazy(), 0.001, 1, false).unwrap();
    assert_abs_diff_eq!(b.radius, 2f64.sqrt() / 2000.0, epsilon = 1e-18);

    // α ∈ (0.1995, 0.2005) is exactly the radius ball around α = 0.2.
    let edge = euclidean_distance(&word(0.2), &word(0.2005)).unwrap();
    assert_abs_diff_eq!(edge, b.radius, epsilon = 1e-12);

    let near = e.step(1, &word(0.2004)).unwrap();
    let centre = e.step(1, &word(0.2)).unwrap();
    let gaps: Vec<f64> = near.probs().iter().zip(centre.probs()).map(|(x, y)| (x - y).abs()).collect();
    close(&gaps, &[0.000112, 0.0, 0.000112], 1e-9);

    let report = continuity_probe_around(e.lazy(), &b, &[word(0.2)], 1000, 4).unwrap();
    assert!(report.passed, "{report:?}");
}

#[test]
fn fuzzy_suspect_model() {
    let ab = ab();
    let fuzzy_labels = suspect_pacw()
        .labels()
        .iter()
        .map(|l| match l.kind() {
            LabelKind::Word(w) => InputLabel::fuzzy(l.name(), w.to_fuzzy()),
            _ => unreachable!(),
        })
        .collect::<Vec<_>>();
    let mut b = WordAutomaton::builder(&ab).states(["q0", "q1", "q2"]).initial("q0").finals(["q2"]);
    for l in fuzzy_labels {
        b = b.label(l);
    }
    for (from, label, row) in fixtures::SUSPECT_ROWS {
        b = b.row(from, label, &row);
    }
    let fm = b.build().unwrap();
    let fe = fuzzy_generalized_extend(&fm).unwrap();
    let raw = FuzzyWord::new(&ab, vec![0.6, 0.2]).unwrap();
    close(fe.step(0, &raw).unwrap().probs(), &[0.54, 0.395, 0.065], 1e-12);
}
