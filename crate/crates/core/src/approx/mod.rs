//! Approximation of isometries by words in a dense representation, and
//! transfer of chains along the resulting substitution.

mod kdtree;
mod search;
mod transfer;

pub use kdtree::KdTree;
pub use search::{approximate_element, ApproxRequest, Approximation, Approximator, Metric, SearchBudget};
pub use transfer::{transfer_chain, ChainData, TransferConfig, TransferReport};
