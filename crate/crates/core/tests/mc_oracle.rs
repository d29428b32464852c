use atlsat_core::formula::{parse_formula, Coalition, Formula};
use atlsat_core::mas::{Model, ModelShape};
use atlsat_core::mc::{atl_pre, check_validity, solve_formula, solve_op, Operator, StateSet};
use atlsat_testkit::random;
use atlsat_testkit::semantics::{self, Game};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn to_set(bits: &[bool]) -> StateSet {
    StateSet::from_states(bits.len(), (0..bits.len()).filter(|&s| bits[s]))
}

fn random_set(rng: &mut impl Rng, n: usize) -> StateSet {
    StateSet::from_states(n, (0..n).filter(|_| rng.random_bool(0.5)))
}

/// Small shapes the strategy enumeration can afford: at most 8 states.
fn small_shape(rng: &mut impl Rng) -> ModelShape {
    loop {
        let s = random::shape(rng, 3, 3, 2, 64);
        if s.state_count() <= 8 {
            return s;
        }
    }
}

fn strategy_count(m: &Model, c: &Coalition) -> u64 {
    let shape = m.shape();
    (0..shape.state_count())
        .map(|s| c.members().iter().map(|&i| m.enabled_actions(i, shape.local_of(s, i)).len() as u64).product::<u64>())
        .product()
}

fn affordable(m: &Model, f: &Formula) -> bool {
    match f {
        Formula::Prop(_) | Formula::True | Formula::False => true,
        Formula::Not(a) => affordable(m, a),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => affordable(m, a) && affordable(m, b),
        Formula::Next(_, a) => affordable(m, a),
        Formula::Globally(c, a) | Formula::Eventually(c, a) => {
            strategy_count(m, c) <= semantics::STRATEGY_LIMIT && affordable(m, a)
        }
        Formula::Until(c, a, b) => {
            strategy_count(m, c) <= semantics::STRATEGY_LIMIT && affordable(m, a) && affordable(m, b)
        }
    }
}

#[test]
fn fixpoints_agree_with_strategy_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut checked = 0;
    let mut nontrivial = 0;
    while checked < 1000 {
        let shape = small_shape(&mut rng);
        let m = random::model(&mut rng, &shape);
        let f = random::formula(&mut rng, shape.agent_count(), shape.prop_count(), 2);
        if !affordable(&m, &f) {
            continue;
        }
        let expected = to_set(&Game::new(&m).eval(&f));
        let got = solve_formula(&m, &f).unwrap();
        assert_eq!(got, expected, "formula {f} on {m:?}");
        checked += 1;
        if f.strategic_depth() > 0 && !got.is_empty() && got.len() < shape.state_count() {
            nontrivial += 1;
        }
    }
    assert!(nontrivial > 100, "only {nontrivial} informative cases");
}

/// Pre-image by enumerating joint actions directly on the protocol tables.
fn brute_pre(m: &Model, c: &Coalition, x: &StateSet) -> StateSet {
    let shape = m.shape();
    let agents = shape.agent_count();
    let n = shape.state_count();
    let mut out = StateSet::empty(n);
    for s in 0..n {
        let row = |i: usize| -> Vec<usize> {
            (0..shape.local_count(i)).filter(|&a| m.protocol(i, shape.local_of(s, i), a)).collect()
        };
        let all_joint: Vec<Vec<usize>> = (0..agents).fold(vec![vec![]], |acc, i| {
            acc.into_iter().flat_map(|p| row(i).into_iter().map(move |a| [p.clone(), vec![a]].concat())).collect()
        });
        let target = |j: &[usize]| shape.state_index(j).unwrap();
        let good = all_joint.iter().any(|mine| {
            all_joint
                .iter()
                .filter(|other| c.members().iter().all(|&i| other[i] == mine[i]))
                .all(|j| x.contains(target(j)))
        });
        if good {
            out.insert(s);
        }
    }
    out
}

#[test]
fn pre_image_matches_joint_action_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let shape = random::shape(&mut rng, 2, 3, 1, 64);
        let m = random::model(&mut rng, &shape);
        let x = random_set(&mut rng, shape.state_count());
        let c = random::coalition(&mut rng, shape.agent_count());
        assert_eq!(atl_pre(&m, &c, &x), brute_pre(&m, &c, &x));
    }
}

#[test]
fn pre_image_boundaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..200 {
        let shape = random::shape(&mut rng, 3, 3, 1, 64);
        let n = shape.state_count();
        let m = random::model(&mut rng, &shape);
        assert_eq!(atl_pre(&m, &Coalition::all(shape.agent_count()), &StateSet::full(n)), StateSet::full(n));
        assert!(atl_pre(&m, &Coalition::empty(), &StateSet::empty(n)).is_empty());
    }
}

#[test]
fn globally_matches_naive_greatest_fixpoint() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..1000 {
        let shape = random::shape(&mut rng, 2, 3, 1, 64);
        let m = random::model(&mut rng, &shape);
        let y = random_set(&mut rng, shape.state_count());
        let c = random::coalition(&mut rng, shape.agent_count());
        let mut z = y.clone();
        loop {
            let next = y.intersection(&brute_pre(&m, &c, &z));
            if next == z {
                break;
            }
            z = next;
        }
        assert_eq!(solve_op(&Operator::Globally(c), &y, None, &m).unwrap(), z);
    }
}

/// Evaluates a core formula bottom-up purely through `solve_op`.
fn compose(m: &Model, f: &Formula) -> StateSet {
    let n = m.shape().state_count();
    match f {
        Formula::Prop(p) => StateSet::from_states(n, (0..n).filter(|&s| m.holds(s, *p))),
        Formula::Not(a) => solve_op(&Operator::Not, &compose(m, a), None, m).unwrap(),
        Formula::And(a, b) => solve_op(&Operator::And, &compose(m, a), Some(&compose(m, b)), m).unwrap(),
        Formula::Next(c, a) => solve_op(&Operator::Next(c.clone()), &compose(m, a), None, m).unwrap(),
        Formula::Globally(c, a) => solve_op(&Operator::Globally(c.clone()), &compose(m, a), None, m).unwrap(),
        Formula::Until(c, a, b) => {
            solve_op(&Operator::Until(c.clone()), &compose(m, a), Some(&compose(m, b)), m).unwrap()
        }
        sugar => panic!("not a core formula: {sugar}"),
    }
}

#[test]
fn solve_formula_is_solve_op_composition() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..1000 {
        let shape = random::shape(&mut rng, 3, 3, 2, 64);
        let m = random::model(&mut rng, &shape);
        let f = random::formula(&mut rng, shape.agent_count(), shape.prop_count(), 3).normalize();
        assert_eq!(solve_formula(&m, &f).unwrap(), compose(&m, &f), "{f}");
    }
}

#[test]
fn tautology_and_contradiction() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..200 {
        let shape = random::shape(&mut rng, 3, 3, 2, 64);
        let m = random::model(&mut rng, &shape);
        assert!(check_validity(&m, &Formula::True).unwrap());
        assert!(solve_formula(&m, &parse_formula("p0 & !p0").unwrap()).unwrap().is_empty());
    }
}

const EXAMPLE: &str = "<<0,1>> F (p0 & !p1 & !p2) & <<0>> F (!p0 & p1 & !p2) & <<0,1>> X (!p0 & !p1 & p2)";

fn example_mas(valuation: Vec<bool>) -> Model {
    let bits = |s: &str| s.chars().filter(|c| !c.is_whitespace()).map(|c| c == '1').collect::<Vec<_>>();
    let shape = ModelShape::new(vec![3, 2], vec![0, 0], 3).unwrap();
    Model::new(shape, vec![bits("101 010 011"), bits("11 01")], valuation).unwrap()
}

/// First valuation, in increasing order of the VB bits read as a binary
/// number with cell 0 least significant, that makes the example formula true
/// on the example MAS according to the strategy oracle.
const FROZEN_VALUATION: u32 = 98;

#[test]
fn example_valuation_search() {
    let f = parse_formula(EXAMPLE).unwrap();
    let to_bits = |k: u32| (0..18).map(|i| k >> i & 1 == 1).collect::<Vec<_>>();
    let first = (0u32..1 << 18)
        .find(|&k| semantics::holds_initially(&example_mas(to_bits(k)), &f))
        .expect("some valuation satisfies the example");
    assert_eq!(first, FROZEN_VALUATION);
    let m = example_mas(to_bits(first));
    assert!(check_validity(&m, &f).unwrap());
}
