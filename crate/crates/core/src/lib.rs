//! Closed frequent subtree mining for unordered trees of height at most two.
//!
//! The crate is organised bottom-up:
//!
//! - [`tree`] and [`dataset`]: rooted trees, text I/O, canonical keys.
//! - [`iso`]: subtree isomorphism (ordered and unordered) and supports.
//! - [`height2`]: the child-count signature of height-two trees, its
//!   dominance order, and maximal common trees.
//! - [`closed`]: polynomial-delay reverse search over closed frequent trees.
//! - [`oracle`]: exhaustive reference miners used as test oracles.
//! - [`gadget`]: generators and verifiers for three reduction families
//!   (hypergraph dualization, (3,4)-SAT, maximal itemsets).

pub mod closed;
pub mod dataset;
pub mod error;
pub mod gadget;
pub mod gen;
pub mod height2;
pub mod iso;
pub mod oracle;
pub mod tree;

pub use dataset::{dataset_from_str, load_dataset, Dataset};
pub use error::{Error, ErrorClass, Result};
pub use iso::{find_embedding, is_frequent, subtree_iso, support_set, tree_equal, SupportSet};
pub use tree::{canonical_form, parse_tree, serialize_tree, CanonKey, Mode, NodeId, Tree};
