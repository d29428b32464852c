use atlsat_core::formula::parse_formula;
use atlsat_core::mas::{encode_model, ModelShape};
use atlsat_core::mc::check_validity;
use atlsat_testkit::semantics;
use atlsat_testkit::suites::{self, FLIP_SUITES};

#[test]
fn single_flip_suites() {
    for (k, suite) in FLIP_SUITES.into_iter().enumerate() {
        let tally = suites::flip_suite(suite, 100 + k as u64, 1000);
        assert!(tally.passed(1000), "{suite:?}: {tally:?}");
    }
}

#[test]
fn operator_suite() {
    let tally = suites::operator_suite(7, 2000);
    assert!(tally.passed(2000), "{tally:?}");
}

#[test]
fn refinement_never_loosens_the_approximation() {
    let tally = suites::refinement_suite(8, 2000);
    assert!(tally.passed(2000), "{tally:?}");
}

#[test]
fn opposing_next_goals_are_not_monotone() {
    let shape = ModelShape::uniform(vec![2, 2], 1).unwrap();
    let f = parse_formula("<<0>> X p0 & <<0>> X !p0").unwrap();
    let (drop, rise) = suites::flipping_pairs(&shape, &f);
    let drop = drop.expect("a single added bit can falsify");
    let rise = rise.expect("a single added bit can satisfy");
    for pair in [&drop, &rise] {
        let (lo, hi) = (encode_model(&pair.lower), encode_model(&pair.upper));
        let diff: Vec<usize> = (0..lo.len()).filter(|&i| lo.get(i) != hi.get(i)).collect();
        assert_eq!(diff, vec![pair.cell]);
        assert_eq!(lo.get(pair.cell), Some(false));
        // validity also flips under the strategy semantics
        assert_ne!(semantics::holds_initially(&pair.lower, &f), semantics::holds_initially(&pair.upper, &f));
    }
    assert!(check_validity(&drop.lower, &f).unwrap());
    assert!(check_validity(&rise.upper, &f).unwrap());
}
