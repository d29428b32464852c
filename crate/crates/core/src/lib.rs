//! Bounded satisfiability checking and model synthesis for ATL over
//! Moore-synchronous multi-agent systems.
//!
//! The solver searches over the bit-vector encoding of candidate models with a
//! clause-learning Boolean core and uses a three-valued over/under
//! approximation of ATL semantics as its theory check:
//!
//! * [`formula`]: syntax, parsing, normalization, random generation
//! * [`mas`]: model shapes, concrete models, the bit-vector codec
//! * [`mc`]: exact fixpoint model checking
//! * [`approx`]: partial models and the approximating evaluator
//! * [`solver`]: the lazy SAT-modulo-ATL search loop

pub mod approx;
pub mod formula;
pub mod mas;
pub mod mc;
pub mod solver;
