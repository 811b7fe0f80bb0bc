//! Deep-syntactic dependency trees.
//!
//! A sentence is a rooted tree of content lexemes. Each node carries its word
//! class, a small typed feature set and an ordered list of dependents, each
//! attached under one of six relations (`I`, `II`, `III`, `ATTR`, `APPEND`,
//! `COORD`). Function words (articles, auxiliaries, "to", "not") are absent
//! from the tree and are inserted by the realizer.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Identifier of a declared character.
pub type CharId = String;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WordClass {
    Verb,
    Noun,
    Adjective,
    Adverb,
    Preposition,
    Conjunction,
    Pronoun,
    Numeral,
}

impl WordClass {
    pub fn is_nominal(self) -> bool {
        matches!(self, WordClass::Noun | WordClass::Pronoun)
    }

    /// Nouns, verbs, adjectives and adverbs.
    pub fn is_content(self) -> bool {
        matches!(
            self,
            WordClass::Verb | WordClass::Noun | WordClass::Adjective | WordClass::Adverb
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Relation {
    I,
    II,
    III,
    ATTR,
    APPEND,
    COORD,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Relation::I => "I",
            Relation::II => "II",
            Relation::III => "III",
            Relation::ATTR => "ATTR",
            Relation::APPEND => "APPEND",
            Relation::COORD => "COORD",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tense {
    Past,
    Present,
    Future,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Number {
    Sg,
    Pl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Person {
    First,
    Second,
    Third,
}

impl Serialize for Person {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(match self {
            Person::First => 1,
            Person::Second => 2,
            Person::Third => 3,
        })
    }
}

impl<'de> Deserialize<'de> for Person {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match u8::deserialize(d)? {
            1 => Ok(Person::First),
            2 => Ok(Person::Second),
            3 => Ok(Person::Third),
            other => Err(serde::de::Error::custom(format!(
                "invalid person `{other}`, expected 1, 2 or 3"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Article {
    Def,
    Indef,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Affirm,
    Neg,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Affirm => Polarity::Neg,
            Polarity::Neg => Polarity::Affirm,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mood {
    Decl,
    Quest,
    Imper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Punct {
    Period,
    Question,
    Exclaim,
}

/// Linear position of an `APPEND` node relative to its head.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Slot {
    SentenceInitial,
    PreAdjective,
    PreVerb,
    SentenceFinal,
    /// Tag-question auxiliary; realized after the clause and any final markers.
    Tag,
}

/// Punctuation joining a peripheral marker to the clause.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Separator {
    Comma,
    Ellipsis,
    Space,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gender {
    Masc,
    Fem,
    Neut,
}

/// Grammatical features of a node.
///
/// Fields are declared in alphabetical order so that serialized documents
/// have sorted keys.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Features {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub article: Option<Article>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mood: Option<Mood>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub number: Option<Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub person: Option<Person>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polarity: Option<Polarity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub possessor: Option<CharId>,
    /// The possessor is realized as a possessive pronoun ("its paw").
    #[serde(default, skip_serializing_if = "is_false")]
    pub possessor_pronoun: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub punct: Option<Punct>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sep: Option<Separator>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slot: Option<Slot>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tense: Option<Tense>,
    /// The clause breaks off with a dash instead of terminal punctuation.
    #[serde(default, skip_serializing_if = "is_false")]
    pub truncated: bool,
}

fn is_false(b: &bool) -> bool {
    !*b
}

impl Features {
    pub fn is_empty(&self) -> bool {
        *self == Features::default()
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity.unwrap_or(Polarity::Affirm)
    }
}

/// A dependent attached to its head under a relation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Child {
    pub rel: Relation,
    pub node: DsyntNode,
}

/// One node of a deep-syntactic tree. A whole sentence is its root node.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DsyntNode {
    pub lexeme: String,
    pub class: WordClass,
    #[serde(default, skip_serializing_if = "Features::is_empty")]
    pub features: Features,
    #[serde(default, rename = "ref", skip_serializing_if = "Option::is_none")]
    pub reference: Option<CharId>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<Child>,
}

pub type DsyntTree = DsyntNode;

impl DsyntNode {
    pub fn new(lexeme: impl Into<String>, class: WordClass) -> Self {
        DsyntNode {
            lexeme: lexeme.into(),
            class,
            features: Features::default(),
            reference: None,
            children: Vec::new(),
        }
    }

    pub fn verb(lexeme: impl Into<String>, tense: Tense) -> Self {
        let mut n = DsyntNode::new(lexeme, WordClass::Verb);
        n.features.tense = Some(tense);
        n
    }

    /// A noun with the definite article.
    pub fn noun(lexeme: impl Into<String>) -> Self {
        let mut n = DsyntNode::new(lexeme, WordClass::Noun);
        n.features.article = Some(Article::Def);
        n
    }

    pub fn adj(lexeme: impl Into<String>) -> Self {
        DsyntNode::new(lexeme, WordClass::Adjective)
    }

    pub fn with(mut self, rel: Relation, node: DsyntNode) -> Self {
        self.children.push(Child { rel, node });
        self
    }

    pub fn with_ref(mut self, id: impl Into<CharId>) -> Self {
        self.reference = Some(id.into());
        self
    }

    pub fn with_features(mut self, f: impl FnOnce(&mut Features)) -> Self {
        f(&mut self.features);
        self
    }

    pub fn child(&self, rel: Relation) -> Option<&DsyntNode> {
        self.children.iter().find(|c| c.rel == rel).map(|c| &c.node)
    }

    pub fn child_mut(&mut self, rel: Relation) -> Option<&mut DsyntNode> {
        self.children
            .iter_mut()
            .find(|c| c.rel == rel)
            .map(|c| &mut c.node)
    }

    pub fn children_with(&self, rel: Relation) -> impl Iterator<Item = &DsyntNode> {
        self.children
            .iter()
            .filter(move |c| c.rel == rel)
            .map(|c| &c.node)
    }

    pub fn subject(&self) -> Option<&DsyntNode> {
        self.child(Relation::I)
    }

    pub fn is_verb(&self) -> bool {
        self.class == WordClass::Verb
    }

    pub fn is_copula(&self) -> bool {
        self.class == WordClass::Verb && self.lexeme == "be"
    }

    /// Number of nodes in the subtree rooted here.
    pub fn node_count(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(|c| c.node.node_count())
            .sum::<usize>()
    }

    pub fn get(&self, path: &NodePath) -> Option<&DsyntNode> {
        let mut node = self;
        for &i in path.indices() {
            node = &node.children.get(i)?.node;
        }
        Some(node)
    }

    pub fn get_mut(&mut self, path: &NodePath) -> Option<&mut DsyntNode> {
        let mut node = self;
        for &i in path.indices() {
            node = &mut node.children.get_mut(i)?.node;
        }
        Some(node)
    }

    /// Relation under which the node at `path` hangs from its parent.
    pub fn relation_at(&self, path: &NodePath) -> Option<Relation> {
        let (parent, last) = path.split_last()?;
        self.get(&parent)?.children.get(last).map(|c| c.rel)
    }

    /// Visits every node in depth-first pre-order with its path.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&NodePath, &'a DsyntNode)) {
        fn go<'a>(
            node: &'a DsyntNode,
            path: &mut Vec<usize>,
            f: &mut impl FnMut(&NodePath, &'a DsyntNode),
        ) {
            f(&NodePath(path.clone()), node);
            for (i, c) in node.children.iter().enumerate() {
                path.push(i);
                go(&c.node, path, f);
                path.pop();
            }
        }
        go(self, &mut Vec::new(), f)
    }

    /// Visits every node mutably in pre-order.
    pub fn walk_mut(&mut self, f: &mut impl FnMut(&mut DsyntNode)) {
        f(self);
        for c in &mut self.children {
            c.node.walk_mut(f);
        }
    }

    /// Content lexemes (nouns, verbs, adjectives, adverbs) in pre-order,
    /// excluding `APPEND` material.
    pub fn content_lexemes(&self) -> Vec<String> {
        let mut out = Vec::new();
        fn go(n: &DsyntNode, out: &mut Vec<String>) {
            if n.class.is_content() {
                out.push(n.lexeme.clone());
            }
            for c in &n.children {
                if c.rel != Relation::APPEND {
                    go(&c.node, out);
                }
            }
        }
        go(self, &mut out);
        out
    }

    pub fn has_append(&self, slot: Slot) -> bool {
        self.children
            .iter()
            .any(|c| c.rel == Relation::APPEND && c.node.features.slot == Some(slot))
    }

    /// Whether the sentence is a question (interrogative mood, question mark
    /// or a tag).
    pub fn is_interrogative(&self) -> bool {
        self.features.mood == Some(Mood::Quest)
            || self.features.punct == Some(Punct::Question)
            || self.has_append(Slot::Tag)
    }
}

/// Sequence of child indices leading from the root to a node.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodePath(pub Vec<usize>);

impl NodePath {
    pub fn root() -> Self {
        NodePath(Vec::new())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: usize) -> NodePath {
        let mut v = self.0.clone();
        v.push(i);
        NodePath(v)
    }

    pub fn parent(&self) -> Option<NodePath> {
        self.split_last().map(|(p, _)| p)
    }

    pub fn split_last(&self) -> Option<(NodePath, usize)> {
        let (&last, rest) = self.0.split_last()?;
        Some((NodePath(rest.to_vec()), last))
    }

    /// True when `self` is a proper ancestor of `other`.
    pub fn is_ancestor_of(&self, other: &NodePath) -> bool {
        self.0.len() < other.0.len() && other.0.starts_with(&self.0)
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("/")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("/")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

/// A declared story character (or prop) that nodes may refer to.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterDecl {
    pub id: CharId,
    pub lexeme: String,
    pub gender: Gender,
    pub number: Number,
    #[serde(default)]
    pub proper: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Story {
    pub title: String,
    #[serde(default)]
    pub characters: Vec<CharacterDecl>,
    pub sentences: Vec<DsyntTree>,
}

impl Story {
    pub fn character(&self, id: &str) -> Option<&CharacterDecl> {
        self.characters.iter().find(|c| c.id == id)
    }

    pub fn cast(&self) -> Cast<'_> {
        Cast(&self.characters)
    }

    /// Story-level checks plus [`validate_tree`] on every sentence, with
    /// the sentence index attached.
    pub fn validate(&self) -> Vec<(usize, Diagnostic)> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for c in &self.characters {
            if !seen.insert(c.id.as_str()) {
                out.push((
                    0,
                    Diagnostic::new(
                        NodePath::root(),
                        Rule::DuplicateCharacter,
                        format!("character id `{}` declared twice", c.id),
                    ),
                ));
            }
        }
        if self.sentences.is_empty() {
            out.push((
                0,
                Diagnostic::new(NodePath::root(), Rule::EmptyStory, "story has no sentences".into()),
            ));
        }
        for (i, s) in self.sentences.iter().enumerate() {
            for d in validate_tree(s) {
                out.push((i, d));
            }
            for d in validate_refs(s, self.cast()) {
                out.push((i, d));
            }
        }
        out
    }
}

/// Borrowed view of the character declarations.
#[derive(Clone, Copy, Debug)]
pub struct Cast<'a>(pub &'a [CharacterDecl]);

impl<'a> Cast<'a> {
    pub fn empty() -> Cast<'static> {
        Cast(&[])
    }

    pub fn get(&self, id: &str) -> Option<&'a CharacterDecl> {
        self.0.iter().find(|c| c.id == id)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    DuplicateSubject,
    FeatureClassMismatch,
    UndeclaredRef,
    EmptyLexeme,
    MisplacedSlot,
    DuplicateCharacter,
    EmptyStory,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::DuplicateSubject => "duplicate-subject",
            Rule::FeatureClassMismatch => "feature-class-mismatch",
            Rule::UndeclaredRef => "undeclared-ref",
            Rule::EmptyLexeme => "empty-lexeme",
            Rule::MisplacedSlot => "misplaced-slot",
            Rule::DuplicateCharacter => "duplicate-character",
            Rule::EmptyStory => "empty-story",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub path: NodePath,
    pub rule: Rule,
    pub message: String,
}

impl Diagnostic {
    fn new(path: NodePath, rule: Rule, message: String) -> Self {
        Diagnostic { path, rule, message }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.rule.id(), self.path, self.message)
    }
}

/// Checks the structural node invariants. Returns an empty list iff the tree
/// is well formed.
pub fn validate_tree(tree: &DsyntTree) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    tree.walk(&mut |path, node| {
        if node.lexeme.trim().is_empty() {
            out.push(Diagnostic::new(
                path.clone(),
                Rule::EmptyLexeme,
                "node has an empty lexeme".into(),
            ));
        }
        let subjects = node.children.iter().filter(|c| c.rel == Relation::I).count();
        if subjects > 1 {
            out.push(Diagnostic::new(
                path.clone(),
                Rule::DuplicateSubject,
                format!("`{}` has {subjects} I dependents", node.lexeme),
            ));
        }
        let f = &node.features;
        let mut mismatch = |feature: &str| {
            out.push(Diagnostic::new(
                path.clone(),
                Rule::FeatureClassMismatch,
                format!("{:?} node `{}` carries {feature}", node.class, node.lexeme),
            ));
        };
        if f.tense.is_some() && node.class != WordClass::Verb {
            mismatch("tense");
        }
        if f.mood.is_some() && node.class != WordClass::Verb {
            mismatch("mood");
        }
        if f.article.is_some() && !node.class.is_nominal() {
            mismatch("article");
        }
        if f.number.is_some() && !node.class.is_nominal() {
            mismatch("number");
        }
        if (f.possessor.is_some() || f.possessor_pronoun) && node.class != WordClass::Noun {
            mismatch("possessor");
        }
        if f.possessor_pronoun && f.possessor.is_none() {
            mismatch("possessor_pronoun without possessor");
        }
        for (i, c) in node.children.iter().enumerate() {
            let has_slot = c.node.features.slot.is_some();
            if has_slot != (c.rel == Relation::APPEND) && (has_slot || c.node.features.sep.is_some())
            {
                out.push(Diagnostic::new(
                    path.child(i),
                    Rule::MisplacedSlot,
                    "slot features are only legal on APPEND dependents".into(),
                ));
            }
        }
    });
    if tree.features.slot.is_some() {
        out.push(Diagnostic::new(
            NodePath::root(),
            Rule::MisplacedSlot,
            "the root cannot carry a slot".into(),
        ));
    }
    out
}

/// Reports every `ref` or `possessor` naming an undeclared character.
pub fn validate_refs(tree: &DsyntTree, cast: Cast<'_>) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    tree.walk(&mut |path, node| {
        for id in node.reference.iter().chain(node.features.possessor.iter()) {
            if cast.get(id).is_none() {
                out.push(Diagnostic::new(
                    path.clone(),
                    Rule::UndeclaredRef,
                    format!("`{id}` is not a declared character"),
                ));
            }
        }
    });
    out
}

/// Paths of all nodes satisfying `pred`, in depth-first pre-order.
pub fn find_nodes(tree: &DsyntTree, pred: impl Fn(&DsyntNode) -> bool) -> Vec<NodePath> {
    let mut out = Vec::new();
    tree.walk(&mut |path, node| {
        if pred(node) {
            out.push(path.clone());
        }
    });
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeError {
    InvalidPath(NodePath),
    OverlappingPaths(NodePath, NodePath),
}

impl fmt::Display for TreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeError::InvalidPath(p) => write!(f, "invalid path {p}"),
            TreeError::OverlappingPaths(a, b) => write!(f, "path {a} is an ancestor of {b}"),
        }
    }
}

/// Returns a copy of `tree` with the subtrees at `paths` removed.
///
/// The root cannot be pruned and no path may be an ancestor of another.
pub fn prune(tree: &DsyntTree, paths: &[NodePath]) -> Result<DsyntTree, TreeError> {
    for p in paths {
        if p.is_root() || tree.get(p).is_none() {
            return Err(TreeError::InvalidPath(p.clone()));
        }
    }
    for a in paths {
        for b in paths {
            if a.is_ancestor_of(b) {
                return Err(TreeError::OverlappingPaths(a.clone(), b.clone()));
            }
        }
    }
    let mut sorted: Vec<&NodePath> = paths.iter().collect();
    sorted.sort();
    sorted.dedup();
    let mut out = tree.clone();
    // Reverse lexicographic order keeps the remaining paths valid.
    for p in sorted.into_iter().rev() {
        let (parent, idx) = p.split_last().expect("non-root");
        out.get_mut(&parent)
            .expect("validated above")
            .children
            .remove(idx);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use Relation::*;

    fn store_run() -> DsyntTree {
        DsyntNode::verb("run", Tense::Past)
            .with(I, DsyntNode::noun("man"))
            .with(
                ATTR,
                DsyntNode::new("to", WordClass::Preposition).with(
                    II,
                    DsyntNode::noun("store").with(ATTR, DsyntNode::adj("big")),
                ),
            )
    }

    #[test]
    fn verb_with_one_subject_is_clean() {
        let t = DsyntNode::verb("sleep", Tense::Present).with(I, DsyntNode::noun("fox"));
        assert!(validate_tree(&t).is_empty());
    }

    #[test]
    fn duplicate_subject_is_reported() {
        let t = DsyntNode::verb("sleep", Tense::Present)
            .with(I, DsyntNode::noun("fox"))
            .with(I, DsyntNode::noun("dog"));
        let d = validate_tree(&t);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].rule.id(), "duplicate-subject");
        assert!(d[0].path.is_root());
    }

    #[test]
    fn tense_on_noun_is_a_class_mismatch() {
        let t = DsyntNode::verb("sleep", Tense::Present).with(
            I,
            DsyntNode::noun("fox").with_features(|f| f.tense = Some(Tense::Past)),
        );
        let d = validate_tree(&t);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].rule, Rule::FeatureClassMismatch);
        assert_eq!(d[0].path, NodePath(vec![0]));
    }

    #[test]
    fn undeclared_ref_is_reported() {
        let t = DsyntNode::verb("sleep", Tense::Present).with(I, DsyntNode::noun("fox").with_ref("fox"));
        assert_eq!(validate_refs(&t, Cast::empty())[0].rule, Rule::UndeclaredRef);
    }

    #[test]
    fn find_nouns_in_preorder() {
        let t = store_run();
        let paths = find_nodes(&t, |n| n.class == WordClass::Noun);
        assert_eq!(paths, vec![NodePath(vec![0]), NodePath(vec![1, 0])]);
        assert_eq!(t.get(&paths[0]).unwrap().lexeme, "man");
        assert_eq!(t.get(&paths[1]).unwrap().lexeme, "store");
        assert!(find_nodes(&t, |n| n.lexeme == "zebra").is_empty());
        assert_eq!(find_nodes(&t, |_| true).len(), t.node_count());
    }

    #[test]
    fn prune_removes_subtree_without_touching_input() {
        let t = store_run();
        let before = t.clone();
        let pruned = prune(&t, &[NodePath(vec![1, 0, 0])]).unwrap();
        assert_eq!(t, before);
        assert_eq!(pruned.node_count(), t.node_count() - 1);
        assert!(find_nodes(&pruned, |n| n.lexeme == "big").is_empty());
    }

    #[test]
    fn prune_edge_cases() {
        let t = store_run();
        assert_eq!(prune(&t, &[]).unwrap(), t);
        assert_eq!(
            prune(&t, &[NodePath::root()]),
            Err(TreeError::InvalidPath(NodePath::root()))
        );
        assert!(matches!(
            prune(&t, &[NodePath(vec![7])]),
            Err(TreeError::InvalidPath(_))
        ));
        assert!(matches!(
            prune(&t, &[NodePath(vec![1]), NodePath(vec![1, 0])]),
            Err(TreeError::OverlappingPaths(..))
        ));
    }

    #[test]
    fn prune_several_siblings() {
        let t = DsyntNode::verb("see", Tense::Past)
            .with(I, DsyntNode::noun("a"))
            .with(II, DsyntNode::noun("b"))
            .with(ATTR, DsyntNode::adj("c"))
            .with(ATTR, DsyntNode::adj("d"));
        let p = prune(&t, &[NodePath(vec![1]), NodePath(vec![3])]).unwrap();
        let lex: Vec<_> = p.children.iter().map(|c| c.node.lexeme.as_str()).collect();
        assert_eq!(lex, ["a", "c"]);
    }
}
