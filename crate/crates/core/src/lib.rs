//! Regular expressions with backreferences.
//!
//! Patterns are parsed into a syntax tree ([`syntax`]), compiled into memory
//! automata ([`mfa`]) and matched by one of several engines:
//!
//! * [`oracle`] evaluates the ref-word semantics directly (small inputs only),
//! * [`mfa::accepts`] explores automaton configurations breadth first,
//! * [`avd::build_reuse_mfa`] bounds the number of memories by the active
//!   variable degree,
//! * [`sync`] runs the memory-synchronised matcher on memory-deterministic
//!   automata in linear time.
//!
//! [`engine::match_auto`] picks the cheapest engine that is sound for a pattern.

pub mod avd;
pub mod contracted;
pub mod engine;
mod error;
pub mod fixtures;
pub mod lce;
pub mod mdet;
pub mod mfa;
pub mod oracle;
mod symbol;
pub mod sync;
pub mod syntax;
pub mod testgen;

pub use error::{Error, Result};
pub use symbol::{symbols, tokens, word_to_string, Symbol};
