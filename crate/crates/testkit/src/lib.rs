//! Test support shared by the integration suites: an ATL semantics oracle
//! that enumerates memoryless strategies, exhaustive completion enumeration,
//! and seeded random instances.
//!
//! Nothing here calls the fixpoint checker or the approximation code, so the
//! oracles stay independent of what they test.

use atlsat_core::approx::PartialModel;
use atlsat_core::formula::{Coalition, Formula};
use atlsat_core::mas::{Model, ModelShape};
use rand::Rng;

pub mod semantics {
    use super::*;

    /// Refuse to enumerate more joint strategies than this.
    pub const STRATEGY_LIMIT: u64 = 1 << 22;

    /// Explicit successor structure read off a model.
    pub struct Game {
        locals: Vec<usize>,
        /// Per state, per agent, the enabled actions.
        moves: Vec<Vec<Vec<usize>>>,
        labels: Vec<Vec<bool>>,
    }

    impl Game {
        pub fn new(m: &Model) -> Game {
            let shape = m.shape();
            let locals = shape.locals().to_vec();
            let n = shape.state_count();
            let mut moves = Vec::with_capacity(n);
            let mut labels = Vec::with_capacity(n);
            for s in 0..n {
                let tuple = unrank(&locals, s);
                moves.push(
                    (0..locals.len())
                        .map(|i| (0..locals[i]).filter(|&a| m.protocol(i, tuple[i], a)).collect())
                        .collect(),
                );
                labels.push((0..shape.prop_count()).map(|p| m.holds(s, p)).collect());
            }
            Game { locals, moves, labels }
        }

        pub fn state_count(&self) -> usize {
            self.moves.len()
        }

        /// Targets of every joint action at `s` in which the agents of `c`
        /// play `fixed` (indexed like `c.members()`).
        fn outcomes(&self, s: usize, c: &Coalition, fixed: &[usize]) -> Vec<usize> {
            let agents = self.locals.len();
            let mut options: Vec<Vec<usize>> = self.moves[s].clone();
            for (k, &i) in c.members().iter().enumerate() {
                options[i] = vec![fixed[k]];
            }
            let mut out = Vec::new();
            let mut joint = vec![0; agents];
            fn walk(options: &[Vec<usize>], i: usize, joint: &mut Vec<usize>, locals: &[usize], out: &mut Vec<usize>) {
                if i == options.len() {
                    out.push(rank(locals, joint));
                    return;
                }
                for &a in &options[i] {
                    joint[i] = a;
                    walk(options, i + 1, joint, locals, out);
                }
            }
            walk(&options, 0, &mut joint, &self.locals, &mut out);
            out
        }

        fn coalition_choices(&self, s: usize, c: &Coalition) -> Vec<Vec<usize>> {
            let mut acc = vec![Vec::new()];
            for &i in c.members() {
                let mut next = Vec::new();
                for prefix in &acc {
                    for &a in &self.moves[s][i] {
                        let mut p = prefix.clone();
                        p.push(a);
                        next.push(p);
                    }
                }
                acc = next;
            }
            acc
        }

        /// Satisfaction set of `f`, evaluated directly on the surface syntax.
        pub fn eval(&self, f: &Formula) -> Vec<bool> {
            let n = self.state_count();
            match f {
                Formula::True => vec![true; n],
                Formula::False => vec![false; n],
                Formula::Prop(p) => self.labels.iter().map(|l| l[*p]).collect(),
                Formula::Not(a) => self.eval(a).into_iter().map(|b| !b).collect(),
                Formula::And(a, b) => zip(self.eval(a), self.eval(b), |x, y| x && y),
                Formula::Or(a, b) => zip(self.eval(a), self.eval(b), |x, y| x || y),
                Formula::Implies(a, b) => zip(self.eval(a), self.eval(b), |x, y| !x || y),
                Formula::Next(c, a) => {
                    let target = self.eval(a);
                    (0..n)
                        .map(|s| {
                            self.coalition_choices(s, c)
                                .iter()
                                .any(|ch| self.outcomes(s, c, ch).iter().all(|&t| target[t]))
                        })
                        .collect()
                }
                Formula::Globally(c, a) => {
                    let inv = self.eval(a);
                    self.exists_strategy(c, |succ, s| safe(succ, s, &inv))
                }
                Formula::Until(c, a, b) => {
                    let (hold, goal) = (self.eval(a), self.eval(b));
                    self.exists_strategy(c, |succ, s| reach(succ, s, &hold, &goal))
                }
                Formula::Eventually(c, a) => {
                    let goal = self.eval(a);
                    let hold = vec![true; n];
                    self.exists_strategy(c, |succ, s| reach(succ, s, &hold, &goal))
                }
            }
        }

        /// For each state, whether some memoryless strategy of `c` makes
        /// `wins(successors, state)` true, where `successors` is the outcome
        /// graph under that strategy.
        fn exists_strategy(&self, c: &Coalition, wins: impl Fn(&[Vec<usize>], usize) -> bool) -> Vec<bool> {
            let n = self.state_count();
            let per_state: Vec<Vec<Vec<usize>>> = (0..n).map(|s| self.coalition_choices(s, c)).collect();
            let total: u64 = per_state.iter().map(|v| v.len() as u64).product();
            assert!(total <= STRATEGY_LIMIT, "{total} strategies is too many to enumerate");
            let mut result = vec![false; n];
            let mut idx = vec![0usize; n];
            loop {
                let succ: Vec<Vec<usize>> = (0..n).map(|s| self.outcomes(s, c, &per_state[s][idx[s]])).collect();
                for (s, won) in result.iter_mut().enumerate() {
                    if !*won && wins(&succ, s) {
                        *won = true;
                    }
                }
                // odometer over per-state choices
                let mut k = 0;
                loop {
                    if k == n {
                        return result;
                    }
                    idx[k] += 1;
                    if idx[k] < per_state[k].len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
            }
        }
    }

    fn zip(a: Vec<bool>, b: Vec<bool>, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
        a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
    }

    /// Every state reachable from `s` satisfies `inv`.
    fn safe(succ: &[Vec<usize>], s: usize, inv: &[bool]) -> bool {
        let mut seen = vec![false; succ.len()];
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            if seen[u] {
                continue;
            }
            seen[u] = true;
            if !inv[u] {
                return false;
            }
            stack.extend(&succ[u]);
        }
        true
    }

    /// Every path from `s` reaches `goal` through `hold` states: no reachable
    /// dead end outside both, and no lasso inside `hold \ goal`.
    fn reach(succ: &[Vec<usize>], s: usize, hold: &[bool], goal: &[bool]) -> bool {
        let n = succ.len();
        let pending = |u: usize| hold[u] && !goal[u];
        if goal[s] {
            return true;
        }
        if !hold[s] {
            return false;
        }
        // iterative DFS with colours for cycle detection in the pending region
        let mut colour = vec![0u8; n];
        let mut stack: Vec<(usize, usize)> = vec![(s, 0)];
        colour[s] = 1;
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            if *next == succ[u].len() {
                colour[u] = 2;
                stack.pop();
                continue;
            }
            let t = succ[u][*next];
            *next += 1;
            if goal[t] {
                continue;
            }
            if !pending(t) || colour[t] == 1 {
                return false;
            }
            if colour[t] == 0 {
                colour[t] = 1;
                stack.push((t, 0));
            }
        }
        true
    }

    /// Mixed-radix rank with agent 0 most significant.
    pub fn rank(locals: &[usize], tuple: &[usize]) -> usize {
        tuple.iter().zip(locals).fold(0, |acc, (&l, &n)| acc * n + l)
    }

    pub fn unrank(locals: &[usize], mut s: usize) -> Vec<usize> {
        let mut out = vec![0; locals.len()];
        for i in (0..locals.len()).rev() {
            out[i] = s % locals[i];
            s /= locals[i];
        }
        out
    }

    pub fn holds_initially(m: &Model, f: &Formula) -> bool {
        let shape = m.shape();
        Game::new(m).eval(f)[rank(shape.locals(), shape.initial_locals())]
    }
}

pub mod enumerate {
    use super::*;

    /// Every model whose cells agree with the determined cells of `pm`.
    pub fn completions(pm: &PartialModel) -> Vec<Model> {
        let shape = pm.shape().clone();
        let cells = pm.to_assignment().bits().to_vec();
        let open: Vec<usize> = (0..cells.len()).filter(|&i| cells[i].is_none()).collect();
        assert!(open.len() <= 20, "{} open cells is too many to enumerate", open.len());
        let mut out = Vec::new();
        for mask in 0u32..(1 << open.len()) {
            let mut bits: Vec<bool> = cells.iter().map(|c| c.unwrap_or(false)).collect();
            for (k, &i) in open.iter().enumerate() {
                bits[i] = mask >> k & 1 == 1;
            }
            if let Some(m) = model_from_bits(&shape, &bits) {
                out.push(m);
            }
        }
        out
    }

    pub fn all_models(shape: &ModelShape) -> Vec<Model> {
        completions(&PartialModel::undetermined(shape.clone()))
    }

    /// `None` when a protocol row is empty.
    pub fn model_from_bits(shape: &ModelShape, bits: &[bool]) -> Option<Model> {
        let mut protocols = Vec::new();
        let mut at = 0;
        for &n in shape.locals() {
            let table = bits[at..at + n * n].to_vec();
            if table.chunks(n).any(|row| row.iter().all(|&b| !b)) {
                return None;
            }
            protocols.push(table);
            at += n * n;
        }
        Some(Model::new(shape.clone(), protocols, bits[at..].to_vec()).expect("dimensions follow the shape"))
    }
}

pub mod random {
    use super::*;
    use atlsat_core::mas::Assignment;

    /// A shape with at most `max_bits` model bits.
    pub fn shape(
        rng: &mut impl Rng,
        max_agents: usize,
        max_locals: usize,
        max_props: usize,
        max_bits: usize,
    ) -> ModelShape {
        loop {
            let agents = rng.random_range(1..=max_agents);
            let locals: Vec<usize> = (0..agents).map(|_| rng.random_range(1..=max_locals)).collect();
            let initial = locals.iter().map(|&n| rng.random_range(0..n)).collect();
            let props = rng.random_range(1..=max_props);
            let s = ModelShape::new(locals, initial, props).unwrap();
            if s.bit_count() <= max_bits {
                return s;
            }
        }
    }

    pub fn model(rng: &mut impl Rng, shape: &ModelShape) -> Model {
        let protocols = shape
            .locals()
            .iter()
            .map(|&n| {
                let mut table = Vec::with_capacity(n * n);
                for _ in 0..n {
                    let mut row: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
                    if !row.contains(&true) {
                        row[rng.random_range(0..n)] = true;
                    }
                    table.extend(row);
                }
                table
            })
            .collect();
        let valuation = (0..shape.state_count() * shape.prop_count()).map(|_| rng.random_bool(0.5)).collect();
        Model::new(shape.clone(), protocols, valuation).unwrap()
    }

    /// Each cell is undetermined with probability `open`, otherwise a fair
    /// coin; rows that come out all-0 get one cell reopened.
    pub fn partial_model(rng: &mut impl Rng, shape: &ModelShape, open: f64) -> PartialModel {
        let mut bits: Vec<Option<bool>> =
            (0..shape.bit_count()).map(|_| (!rng.random_bool(open)).then(|| rng.random_bool(0.5))).collect();
        for agent in 0..shape.agent_count() {
            let n = shape.local_count(agent);
            for local in 0..n {
                let row: Vec<usize> = (0..n).map(|a| shape.tb_index(agent, local, a)).collect();
                if row.iter().all(|&c| bits[c] == Some(false)) {
                    let c = row[rng.random_range(0..n)];
                    bits[c] = if rng.random_bool(0.5) { None } else { Some(true) };
                }
            }
        }
        PartialModel::from_assignment(&Assignment::from_bits(shape.clone(), bits).unwrap()).unwrap()
    }

    pub fn coalition(rng: &mut impl Rng, agents: usize) -> Coalition {
        Coalition::new((0..agents).filter(|_| rng.random_bool(0.5))).unwrap()
    }

    /// A formula over every connective, with strategic depth at most `depth`
    /// and at most about a dozen operators.
    pub fn formula(rng: &mut impl Rng, agents: usize, props: usize, depth: usize) -> Formula {
        let mut fuel = 12;
        grow(rng, agents, props, depth, &mut fuel)
    }

    fn grow(rng: &mut impl Rng, agents: usize, props: usize, depth: usize, fuel: &mut usize) -> Formula {
        let leaf_bias = if depth == 0 { 0.6 } else { 0.15 };
        if *fuel == 0 || rng.random_bool(leaf_bias) {
            return match rng.random_range(0..20) {
                0 => Formula::True,
                1 => Formula::False,
                _ => Formula::Prop(rng.random_range(0..props)),
            };
        }
        *fuel -= 1;
        let pick = if depth == 0 { rng.random_range(0..4) } else { rng.random_range(0..8) };
        let sub = |rng: &mut _, d, fuel: &mut usize| grow(rng, agents, props, d, fuel);
        match pick {
            0 => Formula::not(sub(rng, depth, fuel)),
            1 => Formula::and(sub(rng, depth, fuel), sub(rng, depth, fuel)),
            2 => Formula::or(sub(rng, depth, fuel), sub(rng, depth, fuel)),
            3 => Formula::implies(sub(rng, depth, fuel), sub(rng, depth, fuel)),
            4 => Formula::next(coalition(rng, agents), sub(rng, depth - 1, fuel)),
            5 => Formula::globally(coalition(rng, agents), sub(rng, depth - 1, fuel)),
            6 => {
                let c = coalition(rng, agents);
                Formula::until(c, sub(rng, depth - 1, fuel), sub(rng, depth - 1, fuel))
            }
            _ => Formula::eventually(coalition(rng, agents), sub(rng, depth - 1, fuel)),
        }
    }
}

/// Property suites that report counts instead of panicking, so the unit
/// tests can assert on them and the acceptance run can print them.
pub mod suites {
    use super::*;
    use atlsat_core::approx::{is_compatible, sapp, Mode};
    use atlsat_core::mas::{encode_model, Assignment};
    use atlsat_core::mc::{check_validity, solve_formula, solve_op, Operator, StateSet};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[derive(Debug, Clone, Default, PartialEq, Eq)]
    pub struct Tally {
        pub trials: usize,
        pub violations: usize,
        pub first_violation: Option<String>,
    }

    impl Tally {
        fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
            self.trials += 1;
            if !ok {
                self.violations += 1;
                if self.first_violation.is_none() {
                    self.first_violation = Some(describe());
                }
            }
        }

        pub fn passed(&self, min_trials: usize) -> bool {
            self.violations == 0 && self.trials >= min_trials
        }
    }

    fn flip(m: &Model, cell: usize) -> Option<Model> {
        let mut bits: Vec<bool> = encode_model(m).bits().iter().map(|b| b.unwrap()).collect();
        bits[cell] = !bits[cell];
        enumerate::model_from_bits(m.shape(), &bits)
    }

    fn bit(m: &Model, cell: usize) -> bool {
        encode_model(m).get(cell).unwrap()
    }

    /// Which single-bit changes a flip suite performs.
    #[derive(Debug, Clone, Copy, PartialEq, Eq)]
    pub enum FlipSuite {
        /// p, p∧q, and strategic operators over atoms: VB 0→1 only grows.
        ValuationPositive,
        /// ¬p: VB 1→0 only grows.
        ValuationNegative,
        /// p, ¬p, p∧q: any TB flip leaves the set unchanged.
        ProtocolInvariant,
        /// Strategic operators over atoms: coalition TB 0→1 only grows.
        CoalitionPositive,
        /// Strategic operators over atoms: opponent TB 1→0 only grows.
        OpponentNegative,
    }

    pub const FLIP_SUITES: [FlipSuite; 5] = [
        FlipSuite::ValuationPositive,
        FlipSuite::ValuationNegative,
        FlipSuite::ProtocolInvariant,
        FlipSuite::CoalitionPositive,
        FlipSuite::OpponentNegative,
    ];

    fn strategic_atoms(rng: &mut impl Rng, c: Coalition, p: usize, q: usize) -> Formula {
        let (pp, qq) = (Formula::Prop(p), Formula::Prop(q));
        match rng.random_range(0..3) {
            0 => Formula::next(c, pp),
            1 => Formula::globally(c, pp),
            _ => Formula::until(c, pp, qq),
        }
    }

    /// Single-bit flip trials on random models with at most 16 states.
    pub fn flip_suite(suite: FlipSuite, seed: u64, trials: usize) -> Tally {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut tally = Tally::default();
        while tally.trials < trials {
            let shape = loop {
                let s = random::shape(&mut rng, 3, 3, 2, 80);
                if s.state_count() <= 16 {
                    break s;
                }
            };
            let m = random::model(&mut rng, &shape);
            let props = shape.prop_count();
            let (p, q) = (rng.random_range(0..props), rng.random_range(0..props));
            let agents = shape.agent_count();
            let tb = shape.tb_len();
            let (f, cell, from) = match suite {
                FlipSuite::ValuationPositive | FlipSuite::ValuationNegative => {
                    let f = if suite == FlipSuite::ValuationNegative {
                        Formula::not(Formula::Prop(p))
                    } else {
                        match rng.random_range(0..3) {
                            0 => Formula::Prop(p),
                            1 => Formula::and(Formula::Prop(p), Formula::Prop(q)),
                            _ => {
                                let c = random::coalition(&mut rng, agents);
                                strategic_atoms(&mut rng, c, p, q)
                            }
                        }
                    };
                    let cell = tb + rng.random_range(0..shape.bit_count() - tb);
                    (f, cell, suite == FlipSuite::ValuationNegative)
                }
                FlipSuite::ProtocolInvariant => {
                    let f = match rng.random_range(0..3) {
                        0 => Formula::Prop(p),
                        1 => Formula::not(Formula::Prop(p)),
                        _ => Formula::and(Formula::Prop(p), Formula::Prop(q)),
                    };
                    let cell = rng.random_range(0..tb);
                    let from = bit(&m, cell);
                    (f, cell, from)
                }
                FlipSuite::CoalitionPositive | FlipSuite::OpponentNegative => {
                    let i = rng.random_range(0..agents);
                    let mut c = random::coalition(&mut rng, agents);
                    let want_member = suite == FlipSuite::CoalitionPositive;
                    if c.contains(i) != want_member {
                        let mut members = c.members().to_vec();
                        if want_member {
                            members.push(i);
                        } else {
                            members.retain(|&a| a != i);
                        }
                        c = Coalition::new(members).unwrap();
                    }
                    let n = shape.local_count(i);
                    let cell = shape.tb_offset(i) + rng.random_range(0..n * n);
                    (strategic_atoms(&mut rng, c, p, q), cell, !want_member)
                }
            };
            if bit(&m, cell) != from {
                continue;
            }
            let Some(m2) = flip(&m, cell) else { continue };
            let before = solve_formula(&m, &f).unwrap();
            let after = solve_formula(&m2, &f).unwrap();
            let ok = if suite == FlipSuite::ProtocolInvariant { before == after } else { before.is_subset(&after) };
            tally.record(ok, || format!("{f}: flipping cell {cell} of {m:?} took {before:?} to {after:?}"));
        }
        tally
    }

    /// The same directions for `solve_op` with random argument sets: growing
    /// an argument set by one state, and the coalition/opponent TB flips.
    pub fn operator_suite(seed: u64, trials: usize) -> Tally {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut tally = Tally::default();
        while tally.trials < trials {
            let shape = random::shape(&mut rng, 3, 3, 1, 80);
            let n = shape.state_count();
            let m = random::model(&mut rng, &shape);
            let agents = shape.agent_count();
            let c = random::coalition(&mut rng, agents);
            let op = match rng.random_range(0..5) {
                0 => Operator::Not,
                1 => Operator::And,
                2 => Operator::Next(c.clone()),
                3 => Operator::Globally(c.clone()),
                _ => Operator::Until(c.clone()),
            };
            let y1 = StateSet::from_states(n, (0..n).filter(|_| rng.random_bool(0.5)));
            let y2 = StateSet::from_states(n, (0..n).filter(|_| rng.random_bool(0.5)));
            let y2_arg = (op.arity() == 2).then_some(&y2);
            let base = solve_op(&op, &y1, y2_arg, &m).unwrap();
            if rng.random_bool(0.5) {
                // grow one argument
                let s = rng.random_range(0..n);
                let (mut g1, mut g2) = (y1.clone(), y2.clone());
                if op.arity() == 2 && rng.random_bool(0.5) {
                    g2.insert(s);
                } else {
                    g1.insert(s);
                }
                let grown = solve_op(&op, &g1, (op.arity() == 2).then_some(&g2), &m).unwrap();
                let ok = if op == Operator::Not { grown.is_subset(&base) } else { base.is_subset(&grown) };
                tally.record(ok, || format!("{op:?}: growing an argument at state {s} broke monotonicity"));
            } else {
                let i = rng.random_range(0..agents);
                let nl = shape.local_count(i);
                let cell = shape.tb_offset(i) + rng.random_range(0..nl * nl);
                let Some(m2) = flip(&m, cell) else { continue };
                let after = solve_op(&op, &y1, y2_arg, &m2).unwrap();
                let added = bit(&m2, cell);
                let ok = match op {
                    Operator::Not | Operator::And => after == base,
                    _ if c.contains(i) == added => base.is_subset(&after),
                    _ => after.is_subset(&base),
                };
                tally.record(ok, || format!("{op:?}: TB cell {cell} flip on {m:?}"));
            }
        }
        tally
    }

    /// Refinement chains from a random partial model down to a total one:
    /// every step may only grow the under set and shrink the over set. Each
    /// refinement step is one trial.
    pub fn refinement_suite(seed: u64, trials: usize) -> Tally {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut tally = Tally::default();
        while tally.trials < trials {
            let shape = random::shape(&mut rng, 2, 3, 2, 40);
            let pm = random::partial_model(&mut rng, &shape, 0.7);
            let f = random::formula(&mut rng, shape.agent_count(), shape.prop_count(), 2);
            let mut bits = pm.to_assignment().bits().to_vec();
            let mut under = sapp(&pm, &f, Mode::Under).unwrap();
            let mut over = sapp(&pm, &f, Mode::Over).unwrap();
            let mut open: Vec<usize> = (0..bits.len()).filter(|&i| bits[i].is_none()).collect();
            while !open.is_empty() {
                let k = open.swap_remove(rng.random_range(0..open.len()));
                bits[k] = Some(rng.random_bool(0.5));
                let a = Assignment::from_bits(shape.clone(), bits.clone()).unwrap();
                let Ok(next) = PartialModel::from_assignment(&a) else {
                    // an all-0 row: undo and try the other value
                    bits[k] = bits[k].map(|b| !b);
                    open.push(k);
                    continue;
                };
                let u = sapp(&next, &f, Mode::Under).unwrap();
                let o = sapp(&next, &f, Mode::Over).unwrap();
                let ok = under.is_subset(&u) && o.is_subset(&over) && u.is_subset(&o);
                tally.record(ok, || format!("{f}: refining cell {k} of {a}"));
                under = u;
                over = o;
            }
        }
        tally
    }

    /// Random partial models with at most `max_bits` cells: every compatible
    /// completion must lie between the under and over sets. One trial is one
    /// (partial model, formula) pair. Returns the tally and the number of
    /// completions checked.
    pub fn sandwich(seed: u64, cases: usize, max_bits: usize) -> (Tally, usize) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut tally = Tally::default();
        let mut completions = 0;
        while tally.trials < cases {
            let shape = random::shape(&mut rng, 2, 2, 2, max_bits);
            let open = rng.random_range(0.2..0.9);
            let pm = random::partial_model(&mut rng, &shape, open);
            let f = random::formula(&mut rng, shape.agent_count(), shape.prop_count(), 2);
            let under = sapp(&pm, &f, Mode::Under).unwrap();
            let over = sapp(&pm, &f, Mode::Over).unwrap();
            let mut ok = true;
            for m in enumerate::completions(&pm) {
                debug_assert!(is_compatible(&m, &pm));
                completions += 1;
                let exact = solve_formula(&m, &f).unwrap();
                if !(under.is_subset(&exact) && exact.is_subset(&over)) {
                    ok = false;
                    break;
                }
            }
            tally.record(ok, || format!("{f} on {}", pm.to_assignment()));
        }
        (tally, completions)
    }

    /// Models `m ≤ m2` differing in one bit where validity of `f` changes.
    #[derive(Debug, Clone)]
    pub struct FlippingPair {
        pub lower: Model,
        pub upper: Model,
        pub cell: usize,
    }

    /// Searches every model of `shape` and every single 0→1 flip for one pair
    /// where validity drops and one where it rises.
    pub fn flipping_pairs(shape: &ModelShape, f: &Formula) -> (Option<FlippingPair>, Option<FlippingPair>) {
        let (mut drop, mut rise) = (None, None);
        for m in enumerate::all_models(shape) {
            let v = check_validity(&m, f).unwrap();
            for cell in 0..shape.bit_count() {
                if bit(&m, cell) {
                    continue;
                }
                let Some(m2) = flip(&m, cell) else { continue };
                let v2 = check_validity(&m2, f).unwrap();
                let slot = match (v, v2) {
                    (true, false) => &mut drop,
                    (false, true) => &mut rise,
                    _ => continue,
                };
                if slot.is_none() {
                    *slot = Some(FlippingPair { lower: m.clone(), upper: m2, cell });
                }
                if drop.is_some() && rise.is_some() {
                    return (drop, rise);
                }
            }
        }
        (drop, rise)
    }
}
