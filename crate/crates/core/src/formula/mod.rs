//! ATL formulas: abstract syntax, surface syntax, normalization and a random
//! formula generator.
//!
//! The core language has six productions (`p`, `!`, `&`, `<<C>> X`, `<<C>> G`,
//! `<<C>> U`). The parser additionally accepts `true`, `false`, `|`, `->` and
//! `<<C>> F`, which are kept as sugar nodes until [`Formula::normalize`]
//! rewrites them away.

mod generate;
mod parse;

use std::fmt;

use thiserror::Error;

pub use generate::{generate_matching, generate_random_formula, GenError, GenParams};
pub use parse::{parse_formula, parse_formula_with_aliases, ParseError};

/// A set of agents bound by a strategic modality. Members are kept sorted and
/// unique; the empty coalition is legal.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coalition(Vec<usize>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("agent {0} listed twice in coalition")]
pub struct DuplicateAgent(pub usize);

impl Coalition {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Result<Self, DuplicateAgent> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(DuplicateAgent(w[0]));
        }
        Ok(Coalition(members))
    }

    pub fn empty() -> Self {
        Coalition(Vec::new())
    }

    /// The grand coalition `{0, .., agent_count - 1}`.
    pub fn all(agent_count: usize) -> Self {
        Coalition((0..agent_count).collect())
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, agent: usize) -> bool {
        self.0.binary_search(&agent).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<<")?;
        for (k, a) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(">>")
    }
}

/// ATL abstract syntax tree.
///
/// The first six variants form the core language; the remaining ones are
/// surface sugar produced by the parser and removed by [`Formula::normalize`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Prop(usize),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Next(Coalition, Box<Formula>),
    Globally(Coalition, Box<Formula>),
    Until(Coalition, Box<Formula>, Box<Formula>),

    True,
    False,
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Eventually(Coalition, Box<Formula>),
}

/// A formula mentions an agent or proposition the model shape does not have.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("proposition p{index} out of range (shape has {count} propositions)")]
    Proposition { index: usize, count: usize },
    #[error("agent {index} out of range (shape has {count} agents)")]
    Agent { index: usize, count: usize },
}

impl Formula {
    pub fn prop(index: usize) -> Self {
        Formula::Prop(index)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn next(c: Coalition, f: Formula) -> Self {
        Formula::Next(c, Box::new(f))
    }

    pub fn globally(c: Coalition, f: Formula) -> Self {
        Formula::Globally(c, Box::new(f))
    }

    pub fn until(c: Coalition, a: Formula, b: Formula) -> Self {
        Formula::Until(c, Box::new(a), Box::new(b))
    }

    pub fn eventually(c: Coalition, f: Formula) -> Self {
        Formula::Eventually(c, Box::new(f))
    }

    /// The core-language tautology `!(p0 & !p0)` that `true` normalizes to.
    pub fn tautology() -> Self {
        Formula::not(Formula::contradiction())
    }

    /// The core-language contradiction `p0 & !p0` that `false` normalizes to.
    pub fn contradiction() -> Self {
        Formula::and(Formula::Prop(0), Formula::not(Formula::Prop(0)))
    }

    /// Conjunction of a nonempty list, nested to the right.
    pub fn conjunction(mut parts: Vec<Formula>) -> Option<Formula> {
        let mut acc = parts.pop()?;
        while let Some(f) = parts.pop() {
            acc = Formula::and(f, acc);
        }
        Some(acc)
    }

    /// Maximal nesting of strategic operators.
    pub fn strategic_depth(&self) -> usize {
        match self {
            Formula::Prop(_) | Formula::True | Formula::False => 0,
            Formula::Not(a) => a.strategic_depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.strategic_depth().max(b.strategic_depth())
            }
            Formula::Next(_, a) | Formula::Globally(_, a) | Formula::Eventually(_, a) => 1 + a.strategic_depth(),
            Formula::Until(_, a, b) => 1 + a.strategic_depth().max(b.strategic_depth()),
        }
    }

    /// Number of Boolean connectives (`!`, `&`, `|`, `->`).
    pub fn connective_count(&self) -> usize {
        match self {
            Formula::Prop(_) | Formula::True | Formula::False => 0,
            Formula::Not(a) => 1 + a.connective_count(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.connective_count() + b.connective_count()
            }
            Formula::Next(_, a) | Formula::Globally(_, a) | Formula::Eventually(_, a) => a.connective_count(),
            Formula::Until(_, a, b) => a.connective_count() + b.connective_count(),
        }
    }

    /// True when only the six core productions occur.
    pub fn is_core(&self) -> bool {
        match self {
            Formula::Prop(_) => true,
            Formula::Not(a) | Formula::Next(_, a) | Formula::Globally(_, a) => a.is_core(),
            Formula::And(a, b) | Formula::Until(_, a, b) => a.is_core() && b.is_core(),
            Formula::True | Formula::False | Formula::Or(..) | Formula::Implies(..) | Formula::Eventually(..) => false,
        }
    }

    /// Rewrites all sugar into the core language.
    ///
    /// `a | b` becomes `!(a' & b')` where `x'` is the negation of `x` with a
    /// leading `!` cancelled, so `!p0 | q` turns into `!(p0 & !q)`.
    pub fn normalize(&self) -> Formula {
        match self {
            Formula::Prop(i) => Formula::Prop(*i),
            Formula::True => Formula::tautology(),
            Formula::False => Formula::contradiction(),
            Formula::Not(a) => Formula::not(a.normalize()),
            Formula::And(a, b) => Formula::and(a.normalize(), b.normalize()),
            Formula::Or(a, b) => Formula::not(Formula::and(negate(a.normalize()), negate(b.normalize()))),
            Formula::Implies(a, b) => Formula::not(Formula::and(a.normalize(), negate(b.normalize()))),
            Formula::Next(c, a) => Formula::next(c.clone(), a.normalize()),
            Formula::Globally(c, a) => Formula::globally(c.clone(), a.normalize()),
            Formula::Until(c, a, b) => Formula::until(c.clone(), a.normalize(), b.normalize()),
            Formula::Eventually(c, a) => Formula::until(c.clone(), Formula::tautology(), a.normalize()),
        }
    }

    pub fn max_prop(&self) -> Option<usize> {
        self.fold_max(&|f| match f {
            Formula::Prop(i) => Some(*i),
            _ => None,
        })
    }

    pub fn max_agent(&self) -> Option<usize> {
        self.fold_max(&|f| match f {
            Formula::Next(c, _) | Formula::Globally(c, _) | Formula::Until(c, _, _) | Formula::Eventually(c, _) => {
                c.members().last().copied()
            }
            _ => None,
        })
    }

    fn fold_max(&self, pick: &dyn Fn(&Formula) -> Option<usize>) -> Option<usize> {
        let here = pick(self);
        let below = match self {
            Formula::Prop(_) | Formula::True | Formula::False => None,
            Formula::Not(a) | Formula::Next(_, a) | Formula::Globally(_, a) | Formula::Eventually(_, a) => {
                a.fold_max(pick)
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Until(_, a, b) => {
                a.fold_max(pick).max(b.fold_max(pick))
            }
        };
        here.max(below)
    }

    /// Checks every agent and proposition index against the given counts.
    /// `true` and `false` count as mentioning `p0`.
    pub fn validate(&self, agent_count: usize, prop_count: usize) -> Result<(), BoundsError> {
        let mentions_constant = self.mentions_constant();
        let max_prop = match (self.max_prop(), mentions_constant) {
            (p, true) => Some(p.unwrap_or(0)),
            (p, false) => p,
        };
        if let Some(index) = max_prop {
            if index >= prop_count {
                return Err(BoundsError::Proposition { index, count: prop_count });
            }
        }
        if let Some(index) = self.max_agent() {
            if index >= agent_count {
                return Err(BoundsError::Agent { index, count: agent_count });
            }
        }
        Ok(())
    }

    fn mentions_constant(&self) -> bool {
        match self {
            Formula::True | Formula::False => true,
            Formula::Prop(_) => false,
            Formula::Not(a) | Formula::Next(_, a) | Formula::Globally(_, a) | Formula::Eventually(_, a) => {
                a.mentions_constant()
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Until(_, a, b) => {
                a.mentions_constant() || b.mentions_constant()
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Implies(..) => 0,
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            Formula::Not(_) | Formula::Next(..) | Formula::Globally(..) | Formula::Eventually(..) => 3,
            Formula::Prop(_) | Formula::True | Formula::False | Formula::Until(..) => 4,
        }
    }

    fn write_at(&self, out: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let wrap = self.precedence() < min;
        if wrap {
            out.write_str("(")?;
        }
        match self {
            Formula::Prop(i) => write!(out, "p{i}")?,
            Formula::True => out.write_str("true")?,
            Formula::False => out.write_str("false")?,
            Formula::Not(a) => {
                out.write_str("!")?;
                a.write_at(out, 3)?;
            }
            Formula::And(a, b) => {
                a.write_at(out, 3)?;
                out.write_str(" & ")?;
                b.write_at(out, 2)?;
            }
            Formula::Or(a, b) => {
                a.write_at(out, 2)?;
                out.write_str(" | ")?;
                b.write_at(out, 1)?;
            }
            Formula::Implies(a, b) => {
                a.write_at(out, 1)?;
                out.write_str(" -> ")?;
                b.write_at(out, 0)?;
            }
            Formula::Next(c, a) => {
                write!(out, "{c} X ")?;
                a.write_at(out, 3)?;
            }
            Formula::Globally(c, a) => {
                write!(out, "{c} G ")?;
                a.write_at(out, 3)?;
            }
            Formula::Eventually(c, a) => {
                write!(out, "{c} F ")?;
                a.write_at(out, 3)?;
            }
            Formula::Until(c, a, b) => {
                write!(out, "{c} (")?;
                a.write_at(out, 0)?;
                out.write_str(" U ")?;
                b.write_at(out, 0)?;
                out.write_str(")")?;
            }
        }
        if wrap {
            out.write_str(")")?;
        }
        Ok(())
    }
}

fn negate(f: Formula) -> Formula {
    match f {
        Formula::Not(inner) => *inner,
        other => Formula::not(other),
    }
}

/// Renders with minimal parentheses; `&`, `|` and `->` associate to the right.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

pub fn format_formula(f: &Formula) -> String {
    f.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(m: &[usize]) -> Coalition {
        Coalition::new(m.iter().copied()).unwrap()
    }

    #[test]
    fn coalition_sorted_and_unique() {
        assert_eq!(c(&[2, 0]).members(), &[0, 2]);
        assert_eq!(Coalition::new([1, 1]), Err(DuplicateAgent(1)));
        assert!(Coalition::empty().is_empty());
        assert_eq!(Coalition::empty().to_string(), "<<>>");
    }

    #[test]
    fn format_examples() {
        assert_eq!(format_formula(&Formula::Prop(2)), "p2");
        assert_eq!(format_formula(&Formula::not(Formula::Prop(0))), "!p0");
        assert_eq!(
            format_formula(&Formula::until(c(&[0, 1]), Formula::Prop(0), Formula::Prop(1))),
            "<<0,1>> (p0 U p1)"
        );
    }

    #[test]
    fn format_parenthesizes_by_precedence() {
        let a = Formula::and(Formula::and(Formula::Prop(0), Formula::Prop(1)), Formula::Prop(2));
        assert_eq!(a.to_string(), "(p0 & p1) & p2");
        let b = Formula::and(Formula::Prop(0), Formula::and(Formula::Prop(1), Formula::Prop(2)));
        assert_eq!(b.to_string(), "p0 & p1 & p2");
        let n = Formula::not(Formula::and(Formula::Prop(0), Formula::Prop(1)));
        assert_eq!(n.to_string(), "!(p0 & p1)");
        let x = Formula::next(c(&[0]), Formula::or(Formula::Prop(0), Formula::Prop(1)));
        assert_eq!(x.to_string(), "<<0>> X (p0 | p1)");
    }

    #[test]
    fn normalize_or_uses_de_morgan() {
        let f = Formula::or(Formula::Prop(0), Formula::Prop(1));
        assert_eq!(
            f.normalize(),
            Formula::not(Formula::and(Formula::not(Formula::Prop(0)), Formula::not(Formula::Prop(1))))
        );
    }

    #[test]
    fn normalize_eventually_is_true_until() {
        let f = Formula::eventually(c(&[1]), Formula::Prop(0));
        assert_eq!(f.normalize(), Formula::until(c(&[1]), Formula::tautology(), Formula::Prop(0)));
    }

    #[test]
    fn normalize_core_is_identity() {
        let f =
            Formula::globally(c(&[0]), Formula::not(Formula::not(Formula::and(Formula::Prop(0), Formula::Prop(1)))));
        assert!(f.is_core());
        assert_eq!(f.normalize(), f);
    }

    #[test]
    fn normalize_implies_and_constants() {
        let f = Formula::implies(Formula::Prop(0), Formula::False);
        let n = f.normalize();
        assert!(n.is_core());
        assert_eq!(n, Formula::not(Formula::and(Formula::Prop(0), Formula::tautology())));
    }

    #[test]
    fn metrics() {
        let f = Formula::next(
            c(&[0]),
            Formula::or(Formula::not(Formula::Prop(0)), Formula::globally(c(&[1]), Formula::not(Formula::Prop(1)))),
        );
        assert_eq!(f.strategic_depth(), 2);
        assert_eq!(f.connective_count(), 3);
        assert_eq!(f.normalize().strategic_depth(), 2);
        assert_eq!(f.max_prop(), Some(1));
        assert_eq!(f.max_agent(), Some(1));
    }

    #[test]
    fn validate_bounds() {
        let f = Formula::next(c(&[3]), Formula::Prop(1));
        assert_eq!(f.validate(3, 2), Err(BoundsError::Agent { index: 3, count: 3 }));
        assert_eq!(f.validate(4, 1), Err(BoundsError::Proposition { index: 1, count: 1 }));
        assert!(f.validate(4, 2).is_ok());
        assert!(Formula::True.validate(1, 0).is_err());
    }
}
