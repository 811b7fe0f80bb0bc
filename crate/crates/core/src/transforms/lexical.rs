//! Synonym substitution.

use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::personality::LexicalPolicy;
use crate::state::{Lexicon, StoryDatabase, SynonymPolicy};
use crate::tree::{DsyntNode, DsyntTree, NodePath, Relation, WordClass};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Substitution {
    pub path: NodePath,
    pub from: String,
    pub to: String,
}

fn eligible(n: &DsyntNode) -> bool {
    matches!(
        n.class,
        WordClass::Adjective | WordClass::Noun | WordClass::Verb | WordClass::Adverb
    ) && n.reference.is_none()
        && !n.is_copula()
}

/// Nodes outside `APPEND` material whose lexeme has a candidate under
/// `policy`, in pre-order.
pub fn synonym_sites(tree: &DsyntNode, lexicon: &Lexicon, policy: LexicalPolicy) -> Vec<NodePath> {
    let mut out = Vec::new();
    let mut skip: Vec<NodePath> = Vec::new();
    tree.walk(&mut |path, n| {
        if skip.iter().any(|s| s.is_ancestor_of(path) || s == path) {
            return;
        }
        for (i, c) in n.children.iter().enumerate() {
            if c.rel == Relation::APPEND {
                skip.push(path.child(i));
            }
        }
        if eligible(n)
            && !lexicon
                .synonyms(&n.lexeme, policy.policy, policy.max_rank)
                .is_empty()
        {
            out.push(path.clone());
        }
    });
    out
}

/// Candidates tied for first place under the policy. `Any` ties everything.
fn best_candidates(lexicon: &Lexicon, lexeme: &str, policy: LexicalPolicy) -> Vec<String> {
    let entries: Vec<_> = lexicon
        .synonym_entries(lexeme)
        .iter()
        .filter(|e| policy.max_rank.is_none_or(|m| e.freq_rank <= m))
        .collect();
    let key = |e: &&crate::state::SynonymEntry| -> (i64, u32) {
        match policy.policy {
            SynonymPolicy::Any => (0, 0),
            SynonymPolicy::MaxFrequency => (e.freq_rank as i64, 0),
            SynonymPolicy::MinLength => (e.len as i64, 0),
            SynonymPolicy::MaxLength => (-(e.len as i64), 0),
        }
    };
    let Some(best) = entries.iter().map(key).min() else {
        return Vec::new();
    };
    entries
        .iter()
        .filter(|e| key(e) == best)
        .map(|e| e.word.clone())
        .collect()
}

/// Replaces at most one content word. The site and tied candidates are
/// chosen with `rng`.
pub fn try_substitute<R: Rng + ?Sized>(
    tree: &DsyntTree,
    lexicon: &Lexicon,
    policy: LexicalPolicy,
    rng: &mut R,
) -> Option<(DsyntTree, Substitution)> {
    let sites = synonym_sites(tree, lexicon, policy);
    if sites.is_empty() {
        return None;
    }
    let path = sites[rng.gen_range(0..sites.len())].clone();
    let from = tree.get(&path)?.lexeme.clone();
    let cands = best_candidates(lexicon, &from, policy);
    let to = cands[rng.gen_range(0..cands.len())].clone();
    let mut out = tree.clone();
    out.get_mut(&path)?.lexeme = to.clone();
    Some((out, Substitution { path, from, to }))
}

pub fn substitute_synonym<R: Rng + ?Sized>(
    tree: &DsyntTree,
    db: &StoryDatabase,
    policy: LexicalPolicy,
    rng: &mut R,
) -> DsyntTree {
    try_substitute(tree, &db.lexicon, policy, rng).map_or_else(|| tree.clone(), |(t, _)| t)
}
