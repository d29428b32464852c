use atlsat_core::formula::{format_formula, generate_random_formula, parse_formula, Coalition, Formula, GenParams};
use proptest::prelude::*;

fn coalition() -> impl Strategy<Value = Coalition> {
    proptest::collection::btree_set(0usize..4, 0..=3).prop_map(|s| Coalition::new(s).unwrap())
}

fn core_formula() -> impl Strategy<Value = Formula> {
    let leaf = (0usize..5).prop_map(Formula::Prop);
    leaf.prop_recursive(6, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (coalition(), inner.clone()).prop_map(|(c, a)| Formula::next(c, a)),
            (coalition(), inner.clone()).prop_map(|(c, a)| Formula::globally(c, a)),
            (coalition(), inner.clone(), inner).prop_map(|(c, a, b)| Formula::until(c, a, b)),
        ]
    })
}

fn surface_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        8 => (0usize..5).prop_map(Formula::Prop),
        1 => Just(Formula::True),
        1 => Just(Formula::False),
    ];
    leaf.prop_recursive(6, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (coalition(), inner.clone()).prop_map(|(c, a)| Formula::next(c, a)),
            (coalition(), inner.clone()).prop_map(|(c, a)| Formula::globally(c, a)),
            (coalition(), inner.clone()).prop_map(|(c, a)| Formula::eventually(c, a)),
            (coalition(), inner.clone(), inner).prop_map(|(c, a, b)| Formula::until(c, a, b)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn core_round_trip(f in core_formula()) {
        prop_assert_eq!(parse_formula(&format_formula(&f)).unwrap(), f);
    }

    #[test]
    fn surface_round_trip(f in surface_formula()) {
        prop_assert_eq!(parse_formula(&format_formula(&f)).unwrap(), f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn normalize_removes_sugar_and_keeps_depth(f in surface_formula()) {
        let n = f.normalize();
        prop_assert!(n.is_core());
        prop_assert_eq!(n.strategic_depth(), f.strategic_depth());
        prop_assert_eq!(n.normalize(), n.clone());
    }
}

fn coalitions_of(f: &Formula, out: &mut Vec<Coalition>) {
    match f {
        Formula::Prop(_) | Formula::True | Formula::False => {}
        Formula::Not(a) => coalitions_of(a, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            coalitions_of(a, out);
            coalitions_of(b, out);
        }
        Formula::Next(c, a) | Formula::Globally(c, a) | Formula::Eventually(c, a) => {
            out.push(c.clone());
            coalitions_of(a, out);
        }
        Formula::Until(c, a, b) => {
            out.push(c.clone());
            coalitions_of(a, out);
            coalitions_of(b, out);
        }
    }
}

#[test]
fn generator_respects_bounds() {
    for seed in 0..10_000u64 {
        let agents = 1 + (seed % 4) as usize;
        let groups = 1 + (seed / 4 % ((1 << agents) - 1)) as usize;
        let props = 1 + (seed % 3) as usize;
        let depth = (seed % 11) as usize;
        let params = GenParams::new(agents, groups, props, depth, seed);
        let f = generate_random_formula(&params).unwrap();
        let pool = params.coalition_pool().unwrap();
        assert_eq!(f.strategic_depth(), depth, "seed {seed}");
        assert!(f.max_prop().is_none_or(|p| p < props), "seed {seed}");
        assert!(f.max_agent().is_none_or(|a| a < agents), "seed {seed}");
        let mut used = Vec::new();
        coalitions_of(&f, &mut used);
        assert!(used.iter().all(|c| pool.contains(c)), "seed {seed}: {f}");
        assert_eq!(parse_formula(&format_formula(&f)).unwrap(), f);
    }
}
