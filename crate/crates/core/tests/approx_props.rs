use atlsat_core::approx::{build_over_model, build_under_model, is_compatible, Approximant, PartialModel};
use atlsat_core::mas::encode_model;
use atlsat_core::mc::Arena;
use atlsat_testkit::{enumerate, random, suites};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn sandwich() {
    let (tally, completions) = suites::sandwich(21, 1000, 14);
    assert!(tally.passed(1000), "{tally:?}");
    assert!(completions > 10_000, "{completions} completions checked");
}

fn agrees(pm: &PartialModel, m: &atlsat_core::mas::Model) -> bool {
    let a = encode_model(m);
    pm.to_assignment().bits().iter().zip(a.bits()).all(|(p, b)| p.is_none() || p == b)
}

#[test]
fn compatibility_is_agreement_on_determined_cells() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..60 {
        let shape = random::shape(&mut rng, 2, 2, 2, 14);
        let pm = random::partial_model(&mut rng, &shape, 0.5);
        let all = enumerate::all_models(&shape);
        let compatible: Vec<_> = all.iter().filter(|m| is_compatible(m, &pm)).cloned().collect();
        let agreeing: Vec<_> = all.iter().filter(|m| agrees(&pm, m)).cloned().collect();
        assert_eq!(compatible, agreeing);
        assert_eq!(compatible, enumerate::completions(&pm));
    }
}

fn cell(a: &Approximant, agent: usize, local: usize, action: usize) -> bool {
    a.enabled_actions(agent, local).contains(&action)
}

#[test]
fn over_dominates_under_cellwise() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..1000 {
        let shape = random::shape(&mut rng, 3, 3, 2, 64);
        let pm = random::partial_model(&mut rng, &shape, 0.5);
        let c = random::coalition(&mut rng, shape.agent_count());
        let under = build_under_model(&pm);
        let over = build_over_model(&pm, &c);
        for agent in 0..shape.agent_count() {
            let n = shape.local_count(agent);
            for (local, action) in (0..n).flat_map(|l| (0..n).map(move |a| (l, a))) {
                let (u, o) = (cell(&under, agent, local, action), cell(&over, agent, local, action));
                assert!(!u || o);
                if !c.contains(agent) {
                    assert_eq!(u, o);
                }
            }
        }
        for s in 0..shape.state_count() {
            for p in 0..shape.prop_count() {
                assert!(!under.holds(s, p) || over.holds(s, p));
            }
        }
        // and every completion sits between them on the coalition rows
        if pm.to_assignment().bits().iter().filter(|b| b.is_none()).count() <= 10 {
            for m in enumerate::completions(&pm) {
                for &agent in c.members() {
                    let n = shape.local_count(agent);
                    for (l, a) in (0..n).flat_map(|l| (0..n).map(move |a| (l, a))) {
                        assert!(!cell(&under, agent, l, a) || m.protocol(agent, l, a));
                        assert!(!m.protocol(agent, l, a) || cell(&over, agent, l, a));
                    }
                }
            }
        }
    }
}
