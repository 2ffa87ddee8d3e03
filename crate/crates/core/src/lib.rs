//! Succinct, circuit-backed representations of large combinatorial objects.
//!
//! The crate revolves around one primitive: a [`circuit::Circuit`], a
//! topologically ordered list of single-operator gates. Circuits stand in for
//! polynomial-time functions and are used to represent objects that would be
//! exponentially large written out explicitly:
//!
//! * strategy models of quantified boolean formulas, one circuit per
//!   existential block ([`qbf`]);
//! * labelled binary trees addressed by path or by heap position
//!   ([`qbf::tree`]);
//! * long state and action sequences in four flavours (time/state,
//!   next-state, time/action, next-action) together with a conversion
//!   lattice and satisfiability-scanning generators ([`seq`]);
//! * plans of circuit-action planning instances, with streaming
//!   verification, brute-force search and bounded succinct-plan search
//!   ([`plan`]);
//! * ultimately periodic (lasso) models of linear temporal logic, with an
//!   exact evaluator, a subformula-set satisfiability search and succinct
//!   lasso checking ([`ltl`]).
//!
//! Every nontrivial construction is paired with an independent brute-force
//! oracle (see [`oracle`]); the [`acceptance`] module packages the
//! cross-validation suites run by `succinct oracle` and by the integration
//! tests.

pub mod acceptance;
pub mod bits;
pub mod circuit;
pub mod ltl;
pub mod oracle;
pub mod plan;
pub mod proplogic;
pub mod qbf;
pub mod random;
pub mod seq;

pub use bits::State;
