//! Formulas, parsing, normal forms and lasso-word semantics.

mod alphabet;
mod formula;
mod hyper;
mod lasso;
mod nnf;
mod parse;
mod specfile;

pub use alphabet::{Alphabet, AlphabetError, END};
pub use formula::{Atom, Formula, TraceRef};
pub use hyper::{evaluate_hyperltl, HyperSpec, Quantifier, QuantifierKind};
pub use lasso::{evaluate_ltl, label, LassoWord, Letter, Vocab, MAX_ATOMS};
pub use nnf::{classify_syntactic_safety, is_nnf, simplify, to_nnf};
pub(crate) use nnf::is_safety_nnf;
pub use parse::{parse_hyperltl, parse_hyperltl_with, parse_ltl, ParseError, ParseMode, Position, Span};
pub use specfile::{parse_spec_file, SpecFileError};


