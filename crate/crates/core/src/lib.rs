//! Monolog-to-dialog generation over deep-syntactic dependency trees.
//!
//! A story is a list of [`DsyntTree`]s plus a character block. The
//! [`dialog::build_dialog`] pipeline splits long sentences, allocates content
//! to two speakers, samples elaborations (questions, repetitions,
//! corrections, state changes) and pragmatic markers from per-speaker
//! [`personality::FeatureProfile`]s, then renders every turn with the
//! built-in [`realize::Realizer`].
//!
//! The crate is `no_std` and needs only `alloc`. File formats, data loading
//! and the command line live in the `m2d` crate.

#![no_std]

extern crate alloc;

pub mod dialog;
pub mod personality;
pub mod realize;
pub mod state;
pub mod transforms;
pub mod tree;

pub use realize::{postprocess, MorphLexicon, RealizationError, RealizedSentence, Realizer};
pub use tree::{
    find_nodes, prune, validate_refs, validate_tree, Cast, CharacterDecl, Diagnostic, DsyntNode,
    DsyntTree, Features, NodePath, Relation, Rule, Story, TreeError, WordClass,
};
