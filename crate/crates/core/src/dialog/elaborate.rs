//! Builders for elaborations and extrapolations: questions, repetitions,
//! state changes, corrections and adjective affirmations.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::personality::LexicalPolicy;
use crate::realize::{is_wh, Realizer};
use crate::state::{Lexicon, StoryDatabase};
use crate::transforms::{insert_marker, marker_node, try_substitute, MarkerSpec, Substitution};
use crate::tree::{
    Article, Child, DsyntNode, DsyntTree, Gender, Mood, NodePath, Number, Polarity, Punct,
    Relation, Separator, Slot, Tense, WordClass,
};

/// Prepositions whose phrase is questioned with "where".
pub const LOCATIVE_PREPOSITIONS: &[&str] = &[
    "to", "in", "on", "at", "over", "into", "onto", "off", "from", "near", "under", "toward",
    "towards", "across", "through", "behind", "beside", "inside", "outside", "around",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnsupportedTarget {
    pub path: NodePath,
    pub reason: &'static str,
}

impl fmt::Display for UnsupportedTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot build a question at {}: {}", self.path, self.reason)
    }
}

fn unsupported(path: &NodePath, reason: &'static str) -> UnsupportedTarget {
    UnsupportedTarget {
        path: path.clone(),
        reason,
    }
}

/// True for a tensed declarative clause with no tag, question or truncation.
pub fn is_declarative_clause(t: &DsyntNode) -> bool {
    t.is_verb()
        && t.features.tense.is_some()
        && !t.is_interrogative()
        && !t.features.truncated
        && matches!(t.features.mood, None | Some(Mood::Decl))
}

fn as_question(mut t: DsyntTree) -> DsyntTree {
    t.children.retain(|c| c.rel != Relation::APPEND);
    t.features.mood = Some(Mood::Quest);
    t.features.punct = Some(Punct::Question);
    t.features.truncated = false;
    t
}

fn wh_for_noun(noun: &DsyntNode, realizer: &Realizer<'_>) -> &'static str {
    let animate = noun
        .reference
        .as_ref()
        .and_then(|id| realizer.cast().get(id))
        .is_some_and(|c| c.gender != Gender::Neut);
    if animate {
        "who"
    } else {
        "what"
    }
}

fn wh_pronoun(word: &str) -> DsyntNode {
    DsyntNode::new(word, WordClass::Pronoun)
}

/// Question/answer pair built by pruning around `target`. The answer is
/// the original tree.
pub fn make_wh_question(
    tree: &DsyntTree,
    target: &NodePath,
    realizer: &Realizer<'_>,
) -> Result<(DsyntTree, DsyntTree), UnsupportedTarget> {
    let node = tree
        .get(target)
        .ok_or_else(|| unsupported(target, "path does not resolve"))?;
    if target.is_root() {
        return Err(unsupported(target, "the root cannot be questioned"));
    }
    if !is_declarative_clause(tree) {
        return Err(unsupported(target, "not a declarative clause"));
    }
    let (parent_path, idx) = target.split_last().expect("non-root");
    let parent = tree.get(&parent_path).expect("parent of a valid path");
    let rel = parent.children[idx].rel;
    if rel == Relation::APPEND || rel == Relation::COORD {
        return Err(unsupported(target, "markers and conjuncts cannot be questioned"));
    }
    let mut q = tree.clone();
    match node.class {
        WordClass::Noun | WordClass::Pronoun if parent.class == WordClass::Preposition => {
            // Noun inside a prepositional phrase: question the whole phrase
            // with "where" for places, or keep the preposition otherwise.
            if LOCATIVE_PREPOSITIONS.contains(&parent.lexeme.as_str()) {
                *q.get_mut(&parent_path).expect("valid") =
                    DsyntNode::new("where", WordClass::Adverb);
            } else {
                *q.get_mut(target).expect("valid") = wh_pronoun(wh_for_noun(node, realizer));
            }
        }
        WordClass::Preposition => {
            let noun = node
                .child(Relation::II)
                .ok_or_else(|| unsupported(target, "preposition without complement"))?;
            if LOCATIVE_PREPOSITIONS.contains(&node.lexeme.as_str()) {
                *q.get_mut(target).expect("valid") = DsyntNode::new("where", WordClass::Adverb);
            } else {
                let word = wh_for_noun(noun, realizer);
                let prep = q.get_mut(target).expect("valid");
                prep.children = alloc::vec![Child {
                    rel: Relation::II,
                    node: wh_pronoun(word),
                }];
            }
        }
        WordClass::Noun | WordClass::Pronoun => {
            if is_wh(node) {
                return Err(unsupported(target, "already a question word"));
            }
            *q.get_mut(target).expect("valid") = wh_pronoun(wh_for_noun(node, realizer));
        }
        WordClass::Adjective => {
            // "How was the garden?" about the noun the adjective describes.
            let subject = if parent_path.is_root() && tree.is_copula() && rel == Relation::II {
                tree.child(Relation::I)
                    .cloned()
                    .ok_or_else(|| unsupported(target, "copula without subject"))?
            } else if parent.class == WordClass::Noun && rel == Relation::ATTR {
                let mut n = parent.clone();
                n.children.retain(|c| c.rel != Relation::ATTR && c.rel != Relation::APPEND);
                if n.features.article.is_none() && n.features.possessor.is_none() {
                    n.features.article = Some(Article::Def);
                }
                n
            } else {
                return Err(unsupported(target, "adjective is neither predicate nor attribute"));
            };
            let mut subject = subject;
            subject.children.retain(|c| c.rel != Relation::APPEND);
            q = DsyntNode::verb("be", tree.features.tense.unwrap_or(Tense::Past))
                .with(Relation::I, subject)
                .with(Relation::II, DsyntNode::new("how", WordClass::Adverb));
        }
        _ => return Err(unsupported(target, "only nouns, adjectives and prepositions")),
    }
    Ok((as_question(q), tree.clone()))
}

/// Question targets in preference order: predicate adjective, noun in a
/// prepositional phrase, object, subject.
pub fn wh_targets(tree: &DsyntTree) -> Vec<NodePath> {
    let mut pred = Vec::new();
    let mut pp = Vec::new();
    let mut obj = Vec::new();
    let mut subj = Vec::new();
    for (i, c) in tree.children.iter().enumerate() {
        let p = NodePath::root().child(i);
        match (c.rel, c.node.class) {
            (Relation::II, WordClass::Adjective) if tree.is_copula() => pred.push(p),
            (Relation::ATTR, WordClass::Preposition)
                if c.node.child(Relation::II).is_some_and(|n| n.class == WordClass::Noun) =>
            {
                pp.push(p)
            }
            (Relation::II | Relation::III, WordClass::Noun) => obj.push(p),
            (Relation::I, WordClass::Noun) => subj.push(p),
            _ => {}
        }
    }
    pred.into_iter().chain(pp).chain(obj).chain(subj).collect()
}

fn tag_pronoun(tree: &DsyntTree, realizer: &Realizer<'_>) -> DsyntNode {
    let word = match tree.child(Relation::I) {
        Some(s) => realizer.pronoun_for(s),
        None => "it".into(),
    };
    DsyntNode::new(word, WordClass::Pronoun)
}

/// Appends a polarity-flipped tag: "The garden was swampy, wasn't it?".
pub fn make_tag_question(tree: &DsyntTree, realizer: &Realizer<'_>) -> Result<DsyntTree, UnsupportedTarget> {
    if !is_declarative_clause(tree) {
        return Err(unsupported(&NodePath::root(), "tags need a declarative clause"));
    }
    let tense = tree.features.tense.expect("declarative clause is tensed");
    let aux = match tense {
        Tense::Future => "will",
        _ if tree.is_copula() => "be",
        _ => "do",
    };
    let flipped = tree.features.polarity().flip();
    let tag = DsyntNode::new(aux, WordClass::Verb)
        .with_features(|f| {
            f.tense = Some(tense);
            f.polarity = (flipped == Polarity::Neg).then_some(Polarity::Neg);
            f.slot = Some(Slot::Tag);
        })
        .with(Relation::I, tag_pronoun(tree, realizer));
    let mut out = tree.clone();
    out.children.push(Child {
        rel: Relation::APPEND,
        node: tag,
    });
    out.features.punct = Some(Punct::Question);
    Ok(out)
}

/// Draws canned lines without replacement, refilling once all are used.
#[derive(Clone, Debug)]
pub struct ProvokingDeck {
    lines: Vec<String>,
    remaining: Vec<usize>,
}

impl ProvokingDeck {
    pub fn new(lines: Vec<String>) -> Self {
        ProvokingDeck {
            remaining: (0..lines.len()).collect(),
            lines,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn draw<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Option<&str> {
        if self.lines.is_empty() {
            return None;
        }
        if self.remaining.is_empty() {
            self.remaining = (0..self.lines.len()).collect();
        }
        let k = rng.gen_range(0..self.remaining.len());
        let i = self.remaining.remove(k);
        Some(self.lines[i].as_str())
    }
}

/// One canned line chosen by `rng`.
pub fn make_provoking_question<R: Rng + ?Sized>(deck: &mut ProvokingDeck, rng: &mut R) -> Option<String> {
    deck.draw(rng).map(String::from)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepetitionMode {
    Verbatim,
    Paraphrase,
}

/// A copy of `tree` opened with an acknowledgment: `verbatim_ack` for plain
/// repetition, `paraphrase_ack` when a synonym was substituted or when a
/// paraphrase had to fall back to verbatim.
pub fn make_repetition<R: Rng + ?Sized>(
    tree: &DsyntTree,
    mode: RepetitionMode,
    lexicon: &Lexicon,
    policy: LexicalPolicy,
    verbatim_ack: &MarkerSpec,
    paraphrase_ack: &MarkerSpec,
    rng: &mut R,
) -> (DsyntTree, Option<Substitution>) {
    let mut copy = tree.clone();
    copy.children.retain(|c| c.rel != Relation::APPEND);
    let (copy, sub, ack) = match mode {
        RepetitionMode::Verbatim => (copy, None, verbatim_ack),
        RepetitionMode::Paraphrase => match try_substitute(&copy, lexicon, policy, rng) {
            Some((t, s)) => (t, Some(s), paraphrase_ack),
            None => (copy, None, paraphrase_ack),
        },
    };
    let out = insert_marker(&copy, ack).unwrap_or(copy);
    (out, sub)
}

/// "Now, the fox is sad." for the character's latest state with an
/// antonym.
pub fn make_state_change(
    db: &StoryDatabase,
    realizer: &Realizer<'_>,
    id: &str,
    position: usize,
    now: &MarkerSpec,
) -> Option<DsyntTree> {
    let (_, antonym) = db.latest_state_with_antonym(id, position)?;
    let c = realizer.cast().get(id)?;
    let subject = DsyntNode::new(c.lexeme.clone(), WordClass::Noun)
        .with_ref(id)
        .with_features(|f| {
            f.article = (!c.proper).then_some(Article::Def);
            f.number = (c.number == Number::Pl).then_some(Number::Pl);
        });
    let t = DsyntNode::verb("be", Tense::Present)
        .with(Relation::I, subject)
        .with(Relation::II, DsyntNode::adj(antonym));
    insert_marker(&t, now).ok()
}

/// Copula with a predicate adjective: the shape corrections and
/// affirmations work on.
pub fn predicate_adjective(t: &DsyntNode) -> Option<(usize, &DsyntNode)> {
    if !t.is_copula() {
        return None;
    }
    t.children
        .iter()
        .enumerate()
        .find(|(_, c)| c.rel == Relation::II && c.node.class == WordClass::Adjective)
        .map(|(i, c)| (i, &c.node))
}

/// The false, polarity-flipped statement and the "I think <original>."
/// assertion that corrects it.
pub fn make_correction_pair(tree: &DsyntTree) -> Option<(DsyntTree, DsyntTree)> {
    if !is_declarative_clause(tree) || predicate_adjective(tree).is_none() {
        return None;
    }
    let mut clean = tree.clone();
    clean.children.retain(|c| c.rel != Relation::APPEND);
    let mut wrong = clean.clone();
    wrong.features.polarity = (tree.features.polarity() == Polarity::Affirm).then_some(Polarity::Neg);
    let mut embedded = clean;
    embedded.features.punct = None;
    let correction = DsyntNode::verb("think", Tense::Present)
        .with(Relation::I, DsyntNode::new("I", WordClass::Pronoun))
        .with(Relation::II, embedded);
    Some((wrong, correction))
}

/// "I thought everybody knew that <clause>?"
pub fn make_rhetorical(tree: &DsyntTree) -> Option<DsyntTree> {
    if !is_declarative_clause(tree) || predicate_adjective(tree).is_none() {
        return None;
    }
    let mut clause = tree.clone();
    clause.children.retain(|c| c.rel != Relation::APPEND);
    clause.features.punct = None;
    Some(
        DsyntNode::verb("think", Tense::Past)
            .with(Relation::I, DsyntNode::new("I", WordClass::Pronoun))
            .with(
                Relation::II,
                DsyntNode::verb("know", Tense::Past)
                    .with(Relation::I, DsyntNode::new("everybody", WordClass::Pronoun))
                    .with(
                        Relation::II,
                        DsyntNode::new("that", WordClass::Conjunction).with(Relation::II, clause),
                    ),
            )
            .with_features(|f| f.punct = Some(Punct::Question)),
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Affirmation {
    /// First speaker, cut off after the adjective: "... were tasty and ---".
    pub truncated: DsyntTree,
    /// Second speaker: "Just delicious, really."
    pub interjection: DsyntTree,
    /// First speaker resumes: "Yeah, and the gardener ate them."
    pub resume: DsyntTree,
    pub synonym: String,
}

/// Markers used by [`make_affirmation`].
pub struct AffirmationMarkers<'a> {
    pub just: &'a MarkerSpec,
    pub really: &'a MarkerSpec,
    pub ack: &'a MarkerSpec,
    pub and: &'a MarkerSpec,
}

pub fn make_affirmation<R: Rng + ?Sized>(
    tree: &DsyntTree,
    lexicon: &Lexicon,
    policy: LexicalPolicy,
    markers: &AffirmationMarkers<'_>,
    rng: &mut R,
) -> Option<Affirmation> {
    if !is_declarative_clause(tree) {
        return None;
    }
    let (_, adj) = predicate_adjective(tree)?;
    if adj.features.polarity() == Polarity::Neg || tree.features.polarity() == Polarity::Neg {
        return None;
    }
    let probe = DsyntNode::adj(adj.lexeme.clone());
    let (sub_tree, sub) = try_substitute(&probe, lexicon, policy, rng)?;
    let synonym = sub_tree.lexeme.clone();
    debug_assert_eq!(sub.to, synonym);

    let mut clean = tree.clone();
    clean.children.retain(|c| c.rel != Relation::APPEND);
    let conjuncts: Vec<DsyntNode> = clean
        .children
        .iter()
        .filter(|c| c.rel == Relation::COORD && c.node.is_verb())
        .map(|c| c.node.clone())
        .collect();
    let mut truncated = clean.clone();
    truncated.children.retain(|c| !(c.rel == Relation::COORD && c.node.is_verb()));
    truncated.features.truncated = true;
    truncated.features.punct = None;

    let mut interjection = DsyntNode::adj(synonym.clone());
    interjection.children.push(Child {
        rel: Relation::APPEND,
        node: marker_node(markers.just),
    });
    interjection.children.push(Child {
        rel: Relation::APPEND,
        node: marker_node(markers.really),
    });

    let resume = if let Some((first, rest)) = conjuncts.split_first() {
        let mut r = first.clone();
        if r.child(Relation::I).is_none() {
            if let Some(s) = clean.child(Relation::I) {
                r.children.insert(
                    0,
                    Child {
                        rel: Relation::I,
                        node: s.clone(),
                    },
                );
            }
        }
        for c in rest {
            r.children.push(Child {
                rel: Relation::COORD,
                node: c.clone(),
            });
        }
        r.features.punct = clean.features.punct;
        let r = insert_marker(&r, markers.ack).ok()?;
        let mut and = markers.and.clone();
        and.separator = Separator::Space;
        insert_marker(&r, &and).ok()?
    } else {
        insert_marker(&clean, markers.ack).ok()?
    };
    Some(Affirmation {
        truncated,
        interjection,
        resume,
        synonym,
    })
}
