//! Sentence-level rewrites: splitting, merging, pronominalization, synonym
//! substitution and pragmatic markers. None of them mutate their input.

mod lexical;
mod markers;
mod merge;
mod pronoun;
mod split;

pub use lexical::{substitute_synonym, synonym_sites, try_substitute, Substitution};
pub use markers::{insert_marker, marker_node, marker_target, Constraint, ConstraintViolation, MarkerSpec};
pub use merge::merge_pair;
pub use pronoun::{pronominalize, SalienceContext};
pub use split::{split_long, SPLIT_SUBORDINATORS};
