use atlsat_core::mas::{decode_model, encode_model, successors, Assignment, Model, ModelShape};
use proptest::prelude::*;

/// Shapes with at most 64 model bits, paired with the full bit vector of a
/// valid model.
fn model() -> impl Strategy<Value = Model> {
    (proptest::collection::vec(1usize..=4, 1..=3), 1usize..=3)
        .prop_filter("at most 64 bits", |(locals, props)| {
            let tb: usize = locals.iter().map(|n| n * n).sum();
            tb + locals.iter().product::<usize>() * props <= 64
        })
        .prop_flat_map(|(locals, props)| {
            let initial: Vec<BoxedStrategy<usize>> = locals.iter().map(|&n| (0..n).boxed()).collect();
            let tables: Vec<BoxedStrategy<Vec<bool>>> = locals
                .iter()
                .map(|&n| {
                    proptest::collection::vec(
                        proptest::collection::vec(any::<bool>(), n).prop_filter("nonempty row", |r| r.contains(&true)),
                        n,
                    )
                    .prop_map(|rows| rows.concat())
                    .boxed()
                })
                .collect();
            let states: usize = locals.iter().product();
            (Just(locals), initial, Just(props), tables, proptest::collection::vec(any::<bool>(), states * props))
        })
        .prop_map(|(locals, initial, props, tables, valuation)| {
            Model::new(ModelShape::new(locals, initial, props).unwrap(), tables, valuation).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn encode_decode_round_trip(m in model()) {
        let a = encode_model(&m);
        prop_assert_eq!(a.len(), m.shape().bit_count());
        prop_assert_eq!(decode_model(&a).unwrap(), m.clone());
        let reparsed = Assignment::parse_bits(m.shape().clone(), &a.to_string()).unwrap();
        prop_assert_eq!(reparsed, a);
    }

    #[test]
    fn successor_counts(m in model()) {
        let shape = m.shape();
        for s in 0..shape.state_count() {
            let expected: usize = (0..shape.agent_count())
                .map(|i| m.enabled_actions(i, shape.local_of(s, i)).len())
                .product();
            let succ = successors(&m, s);
            prop_assert!(!succ.is_empty());
            prop_assert_eq!(succ.len(), expected);
        }
    }
}
