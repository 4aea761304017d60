//! Runtime enforcement of universally quantified HyperLTL.

pub mod automata;
pub mod compose;
pub mod enforce;
pub mod games;
pub mod harness;
pub mod logic;
