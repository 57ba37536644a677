//! Free-group words, simplicial group chains and their evaluation against
//! bounded cocycles through representations.

mod chain;
mod format;
mod rep;
mod word;

pub use chain::{Coefficient, GroupChain, RationalChain, RealChain, Simplex};
pub use format::{read_chain, write_chain};
pub use rep::{evaluate, evaluation_discrepancy, Cocycle, FieldTag, FreeRepresentation, KahanSum};
pub use word::{Substitution, Word, MAX_RANK};
