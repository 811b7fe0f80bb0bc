//! Surface realization: deep-syntactic tree to English sentence.
//!
//! Linear order for a clause is subject, auxiliaries and negation, pre-verbal
//! adverbs and markers, the verb, `III`, `II`, the remaining `ATTR`
//! dependents in document order and finally `COORD` conjuncts. A noun phrase
//! is determiner, attributive modifiers in document order, the head, then
//! prepositional modifiers.

mod morph;
mod postprocess;

pub use morph::{
    be_form, inflect, regular_past, sibilant_suffix, Case, IrregularPlural, IrregularVerb,
    LexiconError, MorphData, MorphLexicon, PronounEntry,
};
pub use postprocess::postprocess;

#[cfg(test)]
pub(crate) use morph::tests::test_lexicon;

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::tree::{
    Article, Cast, DsyntNode, DsyntTree, Gender, Mood, NodePath, Number, Person, Polarity, Punct,
    Relation, Separator, Slot, Tense, WordClass,
};

/// Words that make a node a question word.
pub const WH_WORDS: &[&str] = &["who", "what", "where", "when", "why", "how"];

pub fn is_wh(node: &DsyntNode) -> bool {
    WH_WORDS.contains(&node.lexeme.as_str())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RealizeOptions {
    /// Commas between noun conjuncts ("the chards, the lettuces and the
    /// spinach"). Off by default.
    pub list_commas: bool,
    /// Comma before the last conjunct of a coordinated predicate ("swampy,
    /// and not productive").
    pub predicate_comma: bool,
    /// Render truncation as an em dash instead of `---`.
    pub em_dash: bool,
    /// Realize possessors as "the railing of the deck" and leave the
    /// synthetic form to postprocessing.
    pub analytic_possessives: bool,
}

impl Default for RealizeOptions {
    fn default() -> Self {
        RealizeOptions {
            list_commas: false,
            predicate_comma: true,
            em_dash: false,
            analytic_possessives: false,
        }
    }
}

/// A realized sentence and a provenance token naming where it came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizedSentence {
    pub text: String,
    pub source: String,
}

impl RealizedSentence {
    pub fn new(text: impl Into<String>, source: impl Into<String>) -> Self {
        RealizedSentence {
            text: text.into(),
            source: source.into(),
        }
    }

    /// Non-empty, capitalized, and ending in exactly one of `.`, `?`, `!`
    /// (or a truncation dash).
    pub fn is_well_formed(&self) -> bool {
        let t = self.text.as_str();
        let first_ok = t
            .chars()
            .find(|c| c.is_alphabetic())
            .is_some_and(|c| c.is_uppercase());
        if !first_ok || t.trim() != t {
            return false;
        }
        if t.ends_with("---") || t.ends_with('\u{2014}') {
            return true;
        }
        let mut rev = t.chars().rev();
        let last = rev.next();
        let before = rev.next();
        matches!(last, Some('.' | '?' | '!')) && !matches!(before, Some('.' | '?' | '!' | ','))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealizationError {
    MissingSubject { path: NodePath, lexeme: String },
    UnknownCharacter { path: NodePath, id: String },
    Empty,
}

impl fmt::Display for RealizationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealizationError::MissingSubject { path, lexeme } => write!(
                f,
                "declarative verb `{lexeme}` at {path} has no subject"
            ),
            RealizationError::UnknownCharacter { path, id } => {
                write!(f, "node at {path} refers to undeclared character `{id}`")
            }
            RealizationError::Empty => f.write_str("tree realizes to an empty string"),
        }
    }
}

type Result<T> = core::result::Result<T, RealizationError>;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    /// Punctuation glued to the preceding word.
    Glue(&'static str),
}

fn w(s: impl Into<String>) -> Tok {
    Tok::Word(s.into())
}

fn join(toks: &[Tok]) -> String {
    let mut out = String::new();
    for t in toks {
        match t {
            Tok::Word(s) if s.is_empty() => {}
            Tok::Word(s) => {
                if !out.is_empty() {
                    out.push(' ');
                }
                out.push_str(s);
            }
            Tok::Glue(p) => out.push_str(p),
        }
    }
    out
}

pub(crate) fn capitalize_first(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut done = false;
    for c in s.chars() {
        if !done && c.is_alphabetic() {
            out.extend(c.to_uppercase());
            done = true;
        } else {
            out.push(c);
        }
    }
    out
}

/// Verbs whose clause argument takes a bare infinitive: "saw them sprout".
const BARE_INFINITIVE_VERBS: &[&str] = &["see", "watch", "hear", "feel", "notice", "make", "let"];

#[derive(Clone, Copy, PartialEq, Eq)]
enum ClauseMode {
    Finite,
    /// Untensed complement: "to V" or "for S to V".
    Infinitive,
    /// Clause argument of a verb: "expect them to grow".
    Object,
    /// Clause argument of a perception or causative verb.
    BareObject,
    /// Coordinated clause whose subject may be elided; carries the
    /// agreement of the first conjunct.
    Conjunct(Person, Number),
}

/// Renders trees with a morphology lexicon and the story's characters.
#[derive(Clone, Copy, Debug)]
pub struct Realizer<'a> {
    lexicon: &'a MorphLexicon,
    cast: Cast<'a>,
    options: RealizeOptions,
}

impl<'a> Realizer<'a> {
    pub fn new(lexicon: &'a MorphLexicon, cast: Cast<'a>) -> Self {
        Realizer {
            lexicon,
            cast,
            options: RealizeOptions::default(),
        }
    }

    pub fn with_options(mut self, options: RealizeOptions) -> Self {
        self.options = options;
        self
    }

    pub fn options(&self) -> RealizeOptions {
        self.options
    }

    pub fn lexicon(&self) -> &'a MorphLexicon {
        self.lexicon
    }

    pub fn cast(&self) -> Cast<'a> {
        self.cast
    }

    pub fn realize(&self, tree: &DsyntTree) -> Result<RealizedSentence> {
        Ok(RealizedSentence::new(self.realize_text(tree)?, ""))
    }

    pub fn realize_text(&self, tree: &DsyntTree) -> Result<String> {
        let mut path = Vec::new();
        let mut toks = self.phrase(tree, &mut path, Case::Nominative, ClauseMode::Finite)?;
        if let Some(tag) = tree
            .children
            .iter()
            .find(|c| c.rel == Relation::APPEND && c.node.features.slot == Some(Slot::Tag))
        {
            toks.push(Tok::Glue(","));
            toks.extend(self.tag(&tag.node));
        }
        if tree.features.truncated {
            toks.push(w("and"));
            toks.push(w(if self.options.em_dash { "\u{2014}" } else { "---" }));
        } else {
            let punct = match (tree.features.punct, tree.features.mood) {
                (Some(p), _) => p,
                _ if tree.has_append(Slot::Tag) => Punct::Question,
                (None, Some(Mood::Quest)) => Punct::Question,
                _ => Punct::Period,
            };
            toks.push(Tok::Glue(match punct {
                Punct::Period => ".",
                Punct::Question => "?",
                Punct::Exclaim => "!",
            }));
        }
        let text = join(&toks);
        if !text.chars().any(|c| c.is_alphabetic()) {
            return Err(RealizationError::Empty);
        }
        Ok(capitalize_first(&text))
    }

    /// Peripheral markers around a phrase, then the phrase itself.
    fn phrase(
        &self,
        node: &DsyntNode,
        path: &mut Vec<usize>,
        case: Case,
        mode: ClauseMode,
    ) -> Result<Vec<Tok>> {
        let mut toks = Vec::new();
        for m in appends(node, Slot::SentenceInitial) {
            toks.push(w(m.lexeme.clone()));
            match m.features.sep.unwrap_or(Separator::Comma) {
                Separator::Comma => toks.push(Tok::Glue(",")),
                Separator::Ellipsis => toks.push(w("...")),
                Separator::Space => {}
            }
        }
        let body = match node.class {
            WordClass::Verb => self.clause(node, path, mode)?,
            WordClass::Noun | WordClass::Pronoun => self.np(node, path, case)?,
            WordClass::Adjective => self.adjp(node, path)?,
            WordClass::Preposition => self.pp(node, path)?,
            WordClass::Conjunction => self.conj(node, path)?,
            WordClass::Adverb | WordClass::Numeral => self.advp(node, path)?,
        };
        toks.extend(body);
        for m in appends(node, Slot::SentenceFinal) {
            match m.features.sep.unwrap_or(Separator::Comma) {
                Separator::Comma => toks.push(Tok::Glue(",")),
                Separator::Ellipsis => toks.push(w("...")),
                Separator::Space => {}
            }
            toks.push(w(m.lexeme.clone()));
        }
        Ok(toks)
    }

    fn dependent(
        &self,
        parent: &DsyntNode,
        idx: usize,
        path: &mut Vec<usize>,
        case: Case,
        mode: ClauseMode,
    ) -> Result<Vec<Tok>> {
        path.push(idx);
        let r = self.phrase(&parent.children[idx].node, path, case, mode);
        path.pop();
        r
    }

    /// Subject person and number for agreement.
    fn agreement(&self, subj: Option<&DsyntNode>) -> (Person, Number) {
        let Some(s) = subj else {
            return (Person::Third, Number::Sg);
        };
        if s.children.iter().any(|c| c.rel == Relation::COORD) {
            return (Person::Third, Number::Pl);
        }
        if s.class == WordClass::Pronoun {
            if let Some((e, _)) = self.lexicon.pronoun_by_form(&s.lexeme) {
                return (e.person, e.number);
            }
        }
        (
            s.features.person.unwrap_or(Person::Third),
            self.noun_number(s),
        )
    }

    fn noun_number(&self, n: &DsyntNode) -> Number {
        n.features
            .number
            .or_else(|| {
                n.reference
                    .as_ref()
                    .and_then(|id| self.cast.get(id))
                    .map(|c| c.number)
            })
            .unwrap_or(Number::Sg)
    }

    fn clause(&self, v: &DsyntNode, path: &mut Vec<usize>, mode: ClauseMode) -> Result<Vec<Tok>> {
        let idx_of = |rel: Relation| v.children.iter().position(|c| c.rel == rel);
        let subj_idx = idx_of(Relation::I);
        let subj = subj_idx.map(|i| &v.children[i].node);
        let neg = v.features.polarity() == Polarity::Neg;
        let tense = v.features.tense;
        let object = matches!(mode, ClauseMode::Object | ClauseMode::BareObject);
        let bare = mode == ClauseMode::BareObject;
        let conjunct = matches!(mode, ClauseMode::Conjunct(..));
        let mode = if tense.is_none() && !conjunct {
            ClauseMode::Infinitive
        } else if tense.is_some() && (mode == ClauseMode::Infinitive || object) {
            ClauseMode::Finite
        } else {
            mode
        };

        let mut subject = Vec::new();
        match (subj_idx, mode) {
            (Some(i), ClauseMode::Infinitive) => {
                if !object {
                    subject.push(w("for"));
                }
                subject.extend(self.dependent(v, i, path, Case::Accusative, ClauseMode::Finite)?);
            }
            (Some(i), _) => {
                subject.extend(self.dependent(v, i, path, Case::Nominative, ClauseMode::Finite)?)
            }
            (None, ClauseMode::Finite) => {
                if self.lexicon.is_impersonal(&v.lexeme) {
                    subject.push(w("it"));
                } else if v.features.mood != Some(Mood::Imper) {
                    return Err(RealizationError::MissingSubject {
                        path: NodePath(path.clone()),
                        lexeme: v.lexeme.clone(),
                    });
                }
            }
            (None, _) => {}
        }
        let (person, number) = if subj.is_none() && self.lexicon.is_impersonal(&v.lexeme) {
            (Person::Third, Number::Sg)
        } else if let (None, ClauseMode::Conjunct(p, n)) = (subj, mode) {
            (p, n)
        } else {
            self.agreement(subj)
        };

        // Pre-verbal material: markers and adverbial ATTRs.
        let mut pre = Vec::new();
        for m in appends(v, Slot::PreVerb) {
            pre.push(w(m.lexeme.clone()));
        }
        for (i, c) in v.children.iter().enumerate() {
            if c.rel == Relation::ATTR && c.node.class == WordClass::Adverb && !is_wh(&c.node) {
                pre.extend(self.dependent(v, i, path, Case::Nominative, ClauseMode::Finite)?);
            }
        }

        let mut group: Vec<Tok> = Vec::new();
        let copula = v.is_copula();
        match (mode, tense) {
            (ClauseMode::Infinitive, _) | (_, None) => {
                if neg {
                    group.push(w("not"));
                }
                if mode == ClauseMode::Infinitive && !bare {
                    group.push(w("to"));
                }
                group.extend(pre);
                group.push(w(v.lexeme.clone()));
            }
            (_, Some(Tense::Future)) => {
                group.push(w("will"));
                if neg {
                    group.push(w("not"));
                }
                group.extend(pre);
                group.push(w(v.lexeme.clone()));
            }
            (_, Some(t)) if copula => {
                group.push(w(be_form(t, person, number)));
                if neg {
                    group.push(w("not"));
                }
                group.extend(pre);
            }
            (_, Some(t)) if neg => {
                let aux = match t {
                    Tense::Past => "did",
                    _ if person == Person::Third && number == Number::Sg => "does",
                    _ => "do",
                };
                group.push(w(aux));
                group.push(w("not"));
                group.extend(pre);
                group.push(w(v.lexeme.clone()));
            }
            (_, Some(_)) => {
                let mut f = v.features.clone();
                f.person = Some(person);
                f.number = Some(number);
                group.extend(pre);
                group.push(w(inflect(&v.lexeme, WordClass::Verb, &f, self.lexicon)));
            }
        }

        let mut rest = Vec::new();
        let mut fronted = None;
        for rel in [Relation::III, Relation::II] {
            for (i, c) in v.children.iter().enumerate() {
                if c.rel != rel {
                    continue;
                }
                let m = if c.node.class == WordClass::Verb {
                    if BARE_INFINITIVE_VERBS.contains(&v.lexeme.as_str()) {
                        ClauseMode::BareObject
                    } else {
                        ClauseMode::Object
                    }
                } else {
                    ClauseMode::Finite
                };
                let toks = self.dependent(v, i, path, Case::Accusative, m)?;
                if copula
                    && rel == Relation::II
                    && v.features.mood == Some(Mood::Quest)
                    && is_wh(&c.node)
                    && fronted.is_none()
                {
                    fronted = Some(toks);
                } else {
                    rest.extend(toks);
                }
            }
        }
        for (i, c) in v.children.iter().enumerate() {
            if c.rel == Relation::ATTR && (c.node.class != WordClass::Adverb || is_wh(&c.node)) {
                rest.extend(self.dependent(v, i, path, Case::Accusative, ClauseMode::Finite)?);
            }
        }
        for (i, c) in v.children.iter().enumerate() {
            if c.rel == Relation::COORD {
                rest.push(w("and"));
                let m = if c.node.features.tense.is_some() {
                    ClauseMode::Conjunct(person, number)
                } else {
                    mode
                };
                rest.extend(self.dependent(v, i, path, Case::Nominative, m)?);
            }
        }

        let mut out = Vec::new();
        if let Some(wh) = fronted {
            // "How was the garden?": wh-word, auxiliary, subject.
            out.extend(wh);
            out.extend(group);
            out.extend(subject);
        } else {
            out.extend(subject);
            out.extend(group);
        }
        out.extend(rest);
        Ok(out)
    }

    fn tag(&self, aux: &DsyntNode) -> Vec<Tok> {
        let pron = aux.child(Relation::I);
        let (person, number) = self.agreement(pron);
        let tense = aux.features.tense.unwrap_or(Tense::Past);
        let verb = match (aux.lexeme.as_str(), tense) {
            (_, Tense::Future) => "will",
            ("be", t) => be_form(t, person, number),
            ("have", Tense::Past) => "had",
            ("have", _) if person == Person::Third && number == Number::Sg => "has",
            ("have", _) => "have",
            (_, Tense::Past) => "did",
            _ if person == Person::Third && number == Number::Sg => "does",
            _ => "do",
        };
        let mut toks = vec_of(w(verb));
        if aux.features.polarity() == Polarity::Neg {
            toks.push(w("not"));
        }
        if let Some(p) = pron {
            toks.push(w(self.pronoun_form(p, Case::Nominative)));
        }
        toks
    }

    fn pronoun_form(&self, p: &DsyntNode, case: Case) -> String {
        match self.lexicon.pronoun_by_form(&p.lexeme) {
            Some((_, Case::Reflexive)) => p.lexeme.clone(),
            Some((entry, _)) => entry.form(case).to_string(),
            None => p.lexeme.clone(),
        }
    }

    fn np(&self, n: &DsyntNode, path: &mut Vec<usize>, case: Case) -> Result<Vec<Tok>> {
        let coords: Vec<usize> = n
            .children
            .iter()
            .enumerate()
            .filter(|(_, c)| c.rel == Relation::COORD)
            .map(|(i, _)| i)
            .collect();
        if !coords.is_empty() {
            let mut parts = vec_of(self.simple_np(n, path, case)?);
            for i in coords {
                parts.push(self.dependent(n, i, path, case, ClauseMode::Finite)?);
            }
            return Ok(self.join_list(parts, self.options.list_commas, false));
        }
        self.simple_np(n, path, case)
    }

    fn join_list(&self, parts: Vec<Vec<Tok>>, commas: bool, comma_before_and: bool) -> Vec<Tok> {
        let k = parts.len();
        let mut out = Vec::new();
        for (i, p) in parts.into_iter().enumerate() {
            if i > 0 {
                let last = i == k - 1;
                if last {
                    if commas && comma_before_and {
                        out.push(Tok::Glue(","));
                    }
                    out.push(w("and"));
                } else if commas {
                    out.push(Tok::Glue(","));
                }
            }
            out.extend(p);
        }
        out
    }

    fn simple_np(&self, n: &DsyntNode, path: &mut Vec<usize>, case: Case) -> Result<Vec<Tok>> {
        if n.class == WordClass::Pronoun {
            let case = if n.features.possessor.is_some() {
                Case::Possessive
            } else {
                case
            };
            return Ok(vec_of(w(self.pronoun_form(n, case))));
        }
        let character = match &n.reference {
            Some(id) => Some(self.cast.get(id).ok_or_else(|| RealizationError::UnknownCharacter {
                path: NodePath(path.clone()),
                id: id.clone(),
            })?),
            None => None,
        };
        let proper = character.is_some_and(|c| c.proper);

        let mut det: Vec<Tok> = Vec::new();
        let mut post: Vec<Tok> = Vec::new();
        if let Some(owner) = &n.features.possessor {
            let c = self
                .cast
                .get(owner)
                .ok_or_else(|| RealizationError::UnknownCharacter {
                    path: NodePath(path.clone()),
                    id: owner.clone(),
                })?;
            if n.features.possessor_pronoun {
                let entry = self.lexicon.pronoun(Person::Third, c.number, c.gender);
                det.push(w(entry.map_or("its", |e| e.possessive.as_str())));
            } else if self.options.analytic_possessives {
                det.push(w("the"));
                post.push(w("of"));
                post.extend(self.character_np(c));
            } else {
                let mut owner_np = self.character_np(c);
                if let Some(Tok::Word(last)) = owner_np.last_mut() {
                    if c.number == Number::Pl && last.ends_with('s') {
                        last.push('\'');
                    } else {
                        last.push_str("'s");
                    }
                }
                det.extend(owner_np);
            }
        } else if !proper {
            match n.features.article {
                Some(Article::Def) => det.push(w("the")),
                Some(Article::Indef) if self.noun_number(n) == Number::Sg => det.push(w("a")),
                _ => {}
            }
        }

        let mut pre = Vec::new();
        for (i, c) in n.children.iter().enumerate() {
            if c.rel != Relation::ATTR {
                continue;
            }
            match c.node.class {
                WordClass::Adjective | WordClass::Numeral | WordClass::Adverb => {
                    pre.extend(self.dependent(n, i, path, Case::Nominative, ClauseMode::Finite)?)
                }
                WordClass::Noun if c.node.children.is_empty() => pre.push(w(c.node.lexeme.clone())),
                _ => {
                    let toks = self.dependent(n, i, path, Case::Accusative, ClauseMode::Finite)?;
                    post.extend(toks);
                }
            }
        }

        let mut f = n.features.clone();
        f.number = Some(self.noun_number(n));
        let head = inflect(&n.lexeme, WordClass::Noun, &f, self.lexicon);

        let mut out = det;
        out.extend(pre);
        out.push(w(head));
        if let [Tok::Word(a), Tok::Word(next), ..] = out.as_mut_slice() {
            if a == "a" && starts_with_vowel_sound(next) {
                *a = "an".into();
            }
        }
        out.extend(post);
        Ok(out)
    }

    fn character_np(&self, c: &crate::tree::CharacterDecl) -> Vec<Tok> {
        let mut out = Vec::new();
        if !c.proper {
            out.push(w("the"));
        }
        let head = if c.number == Number::Pl && !c.proper {
            self.lexicon.plural(&c.lexeme)
        } else {
            c.lexeme.clone()
        };
        out.push(w(head));
        out
    }

    fn adjp(&self, a: &DsyntNode, path: &mut Vec<usize>) -> Result<Vec<Tok>> {
        let coords: Vec<usize> = a
            .children
            .iter()
            .enumerate()
            .filter(|(_, c)| c.rel == Relation::COORD)
            .map(|(i, _)| i)
            .collect();
        let mut head = Vec::new();
        if a.features.polarity() == Polarity::Neg {
            head.push(w("not"));
        }
        for m in appends(a, Slot::PreAdjective) {
            head.push(w(m.lexeme.clone()));
        }
        let mut post = Vec::new();
        for (i, c) in a.children.iter().enumerate() {
            if c.rel != Relation::ATTR {
                continue;
            }
            let toks = self.dependent(a, i, path, Case::Accusative, ClauseMode::Finite)?;
            if c.node.class == WordClass::Adverb {
                head.extend(toks);
            } else {
                post.extend(toks);
            }
        }
        head.push(w(a.lexeme.clone()));
        head.extend(post);
        if coords.is_empty() {
            return Ok(head);
        }
        let mut parts = vec_of(head);
        for i in coords {
            parts.push(self.dependent(a, i, path, Case::Nominative, ClauseMode::Finite)?);
        }
        let comma = self.options.predicate_comma;
        Ok(self.join_list(parts, comma, comma))
    }

    fn pp(&self, p: &DsyntNode, path: &mut Vec<usize>) -> Result<Vec<Tok>> {
        let mut out = vec_of(w(p.lexeme.clone()));
        for (i, c) in p.children.iter().enumerate() {
            if matches!(c.rel, Relation::II | Relation::ATTR) {
                out.extend(self.dependent(p, i, path, Case::Accusative, ClauseMode::Finite)?);
            }
        }
        Ok(out)
    }

    fn conj(&self, c: &DsyntNode, path: &mut Vec<usize>) -> Result<Vec<Tok>> {
        let mut out = vec_of(w(c.lexeme.clone()));
        for (i, ch) in c.children.iter().enumerate() {
            if matches!(ch.rel, Relation::II | Relation::I | Relation::ATTR) {
                out.extend(self.dependent(c, i, path, Case::Nominative, ClauseMode::Finite)?);
            }
        }
        Ok(out)
    }

    fn advp(&self, a: &DsyntNode, path: &mut Vec<usize>) -> Result<Vec<Tok>> {
        let mut out = Vec::new();
        for (i, c) in a.children.iter().enumerate() {
            if c.rel == Relation::ATTR {
                out.extend(self.dependent(a, i, path, Case::Accusative, ClauseMode::Finite)?);
            }
        }
        out.push(w(a.lexeme.clone()));
        Ok(out)
    }

    /// Third-person pronoun agreeing with a referring node.
    pub fn pronoun_for(&self, node: &DsyntNode) -> String {
        let (gender, number) = self.gender_number(node);
        if node.class == WordClass::Pronoun {
            if let Some((e, _)) = self.lexicon.pronoun_by_form(&node.lexeme) {
                return e.nominative.clone();
            }
        }
        self.lexicon
            .pronoun(Person::Third, number, gender)
            .map_or_else(|| "it".to_string(), |e| e.nominative.clone())
    }

    /// Gender and number of a noun phrase, from its character when it has one.
    pub fn gender_number(&self, node: &DsyntNode) -> (Gender, Number) {
        if node.children.iter().any(|c| c.rel == Relation::COORD) {
            return (Gender::Neut, Number::Pl);
        }
        if let Some(c) = node.reference.as_ref().and_then(|id| self.cast.get(id)) {
            return (c.gender, node.features.number.unwrap_or(c.number));
        }
        if node.class == WordClass::Pronoun {
            if let Some((e, _)) = self.lexicon.pronoun_by_form(&node.lexeme) {
                return (e.gender.unwrap_or(Gender::Neut), e.number);
            }
        }
        (Gender::Neut, self.noun_number(node))
    }
}

fn vec_of<T>(t: T) -> Vec<T> {
    let mut v = Vec::with_capacity(4);
    v.push(t);
    v
}

fn appends(node: &DsyntNode, slot: Slot) -> impl Iterator<Item = &DsyntNode> {
    node.children
        .iter()
        .filter(move |c| c.rel == Relation::APPEND && c.node.features.slot == Some(slot))
        .map(|c| &c.node)
}

fn starts_with_vowel_sound(word: &str) -> bool {
    const EXCEPTIONS_CONSONANT: &[&str] = &["uni", "use", "usu", "one", "eu"];
    const EXCEPTIONS_VOWEL: &[&str] = &["hour", "honest", "honor"];
    let lower = word.to_lowercase();
    if EXCEPTIONS_VOWEL.iter().any(|p| lower.starts_with(p)) {
        return true;
    }
    if EXCEPTIONS_CONSONANT.iter().any(|p| lower.starts_with(p)) {
        return false;
    }
    lower
        .chars()
        .next()
        .is_some_and(|c| matches!(c, 'a' | 'e' | 'i' | 'o' | 'u'))
}

/// Unit tests realize fixed trees; the expected strings are checked against
/// hand-applied morphology.
#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{CharacterDecl, Features};
    use alloc::vec;
    use Relation::*;

    pub(crate) fn store_run() -> DsyntTree {
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

    fn r(tree: &DsyntTree) -> String {
        let lex = test_lexicon();
        Realizer::new(&lex, Cast::empty()).realize(tree).unwrap().text
    }

    fn marker(surface: &str, slot: Slot, sep: Separator) -> DsyntNode {
        DsyntNode::new(surface, WordClass::Adverb).with_features(|f| {
            f.slot = Some(slot);
            f.sep = Some(sep);
        })
    }

    #[test]
    fn man_ran_to_the_big_store() {
        assert_eq!(r(&store_run()), "The man ran to the big store.");
    }

    #[test]
    fn communal_garden_was_weedy() {
        let t = DsyntNode::verb("be", Tense::Past)
            .with(I, DsyntNode::noun("garden").with(ATTR, DsyntNode::adj("communal")))
            .with(II, DsyntNode::adj("weedy"));
        assert_eq!(r(&t), "The communal garden was weedy.");
    }

    #[test]
    fn third_singular_present() {
        let t = DsyntNode::verb("sleep", Tense::Present).with(
            I,
            DsyntNode::noun("fox").with_features(|f| {
                f.number = Some(Number::Sg);
                f.person = Some(Person::Third);
            }),
        );
        assert_eq!(r(&t), "The fox sleeps.");
    }

    #[test]
    fn weather_verb_takes_expletive_subject() {
        assert_eq!(r(&DsyntNode::verb("rain", Tense::Past)), "It rained.");
    }

    #[test]
    fn missing_subject_is_an_error() {
        let lex = test_lexicon();
        let err = Realizer::new(&lex, Cast::empty())
            .realize(&DsyntNode::verb("sleep", Tense::Past))
            .unwrap_err();
        assert!(matches!(err, RealizationError::MissingSubject { .. }));
    }

    #[test]
    fn coordination_without_commas() {
        let pl = |l: &str| DsyntNode::noun(l).with_features(|f| f.number = Some(Number::Pl));
        let greens = pl("chard")
            .with(COORD, pl("lettuce"))
            .with(COORD, DsyntNode::noun("spinach"));
        let t = DsyntNode::verb("sprout", Tense::Past).with(I, greens.clone());
        assert_eq!(r(&t), "The chards the lettuces and the spinach sprouted.");
        let lex = test_lexicon();
        let with_commas = Realizer::new(&lex, Cast::empty()).with_options(RealizeOptions {
            list_commas: true,
            ..RealizeOptions::default()
        });
        assert_eq!(
            with_commas.realize(&t).unwrap().text,
            "The chards, the lettuces and the spinach sprouted."
        );
        // Untensed complement with its own subject.
        let expect = DsyntNode::verb("expect", Tense::Past)
            .with_features(|f| f.polarity = Some(Polarity::Neg))
            .with(I, DsyntNode::noun("gardener").with(ATTR, DsyntNode::adj("pleased")))
            .with(II, DsyntNode::new("grow", WordClass::Verb).with(I, greens));
        assert_eq!(
            r(&expect),
            "The pleased gardener did not expect the chards the lettuces and the spinach to grow."
        );
    }

    #[test]
    fn negation_and_do_support() {
        let t = DsyntNode::verb("be", Tense::Past)
            .with_features(|f| f.polarity = Some(Polarity::Neg))
            .with(I, DsyntNode::noun("garden"))
            .with(II, DsyntNode::adj("swampy"));
        assert_eq!(r(&t), "The garden was not swampy.");
        let t = DsyntNode::verb("sleep", Tense::Present)
            .with_features(|f| f.polarity = Some(Polarity::Neg))
            .with(I, DsyntNode::noun("fox"));
        assert_eq!(r(&t), "The fox does not sleep.");
    }

    #[test]
    fn because_clause_and_adverbs() {
        let t = DsyntNode::verb("be", Tense::Past)
            .with(I, DsyntNode::noun("garden"))
            .with(
                II,
                DsyntNode::adj("swampy").with(ATTR, DsyntNode::new("very", WordClass::Adverb)),
            )
            .with(
                ATTR,
                DsyntNode::new("because", WordClass::Conjunction)
                    .with(II, DsyntNode::verb("rain", Tense::Past)),
            );
        assert_eq!(r(&t), "The garden was very swampy because it rained.");
        let dig = DsyntNode::verb("dig", Tense::Past)
            .with(I, DsyntNode::noun("gardener"))
            .with(ATTR, DsyntNode::new("mistakenly", WordClass::Adverb))
            .with(II, DsyntNode::noun("plant").with_features(|f| f.number = Some(Number::Pl)));
        assert_eq!(r(&dig), "The gardener mistakenly dug the plants.");
    }

    #[test]
    fn markers_tags_and_possessives() {
        let lex = test_lexicon();
        let cast = vec![CharacterDecl {
            id: "squirrel".into(),
            lexeme: "squirrel".into(),
            gender: Gender::Neut,
            number: Number::Sg,
            proper: false,
        }];
        let rz = Realizer::new(&lex, Cast(&cast));
        let paw = DsyntNode::noun("paw").with_features(|f| f.possessor = Some("squirrel".into()));
        let t = DsyntNode::verb("slip", Tense::Past)
            .with(I, paw.clone())
            .with(APPEND, marker("pal", Slot::SentenceFinal, Separator::Space));
        assert_eq!(rz.realize(&t).unwrap().text, "The squirrel's paw slipped pal.");
        let mut t2 = t.clone();
        t2.children[0].node.features.possessor_pronoun = true;
        assert_eq!(rz.realize(&t2).unwrap().text, "Its paw slipped pal.");
        let analytic = rz.with_options(RealizeOptions {
            analytic_possessives: true,
            ..RealizeOptions::default()
        });
        assert_eq!(analytic.realize(&t).unwrap().text, "The paw of the squirrel slipped pal.");

        let swampy = DsyntNode::verb("be", Tense::Past)
            .with(I, DsyntNode::noun("garden"))
            .with(
                II,
                DsyntNode::adj("swampy").with(APPEND, marker("kind of", Slot::PreAdjective, Separator::Space)),
            )
            .with(APPEND, marker("great", Slot::SentenceInitial, Separator::Comma))
            .with(APPEND, marker("err", Slot::SentenceInitial, Separator::Ellipsis))
            .with(
                APPEND,
                DsyntNode::new("be", WordClass::Verb)
                    .with_features(|f| {
                        f.tense = Some(Tense::Past);
                        f.polarity = Some(Polarity::Neg);
                        f.slot = Some(Slot::Tag);
                    })
                    .with(I, DsyntNode::new("it", WordClass::Pronoun)),
            );
        assert_eq!(
            rz.realize(&swampy).unwrap().text,
            "Great, err ... the garden was kind of swampy, was not it?"
        );
    }

    #[test]
    fn wh_fronting_for_copula_only() {
        let how = DsyntNode::verb("be", Tense::Past)
            .with_features(|f| f.mood = Some(Mood::Quest))
            .with(I, DsyntNode::noun("garden"))
            .with(II, DsyntNode::new("how", WordClass::Adverb));
        assert_eq!(r(&how), "How was the garden?");
        let where_ = DsyntNode::verb("run", Tense::Past)
            .with_features(|f| f.mood = Some(Mood::Quest))
            .with(I, DsyntNode::noun("man"))
            .with(ATTR, DsyntNode::new("where", WordClass::Adverb));
        assert_eq!(r(&where_), "The man ran where?");
        let who = DsyntNode::verb("run", Tense::Past)
            .with_features(|f| f.mood = Some(Mood::Quest))
            .with(I, DsyntNode::new("who", WordClass::Pronoun));
        assert_eq!(r(&who), "Who ran?");
    }

    #[test]
    fn pronoun_case_follows_position() {
        let them = DsyntNode::new("they", WordClass::Pronoun);
        let t = DsyntNode::verb("eat", Tense::Past)
            .with(I, DsyntNode::new("she", WordClass::Pronoun))
            .with(II, them.clone());
        assert_eq!(r(&t), "She ate them.");
        let inf = DsyntNode::verb("want", Tense::Past)
            .with(I, DsyntNode::new("she", WordClass::Pronoun))
            .with(II, DsyntNode::new("grow", WordClass::Verb).with(I, them.clone()));
        assert_eq!(r(&inf), "She wanted them to grow.");
        let bare = DsyntNode::verb("see", Tense::Past)
            .with(I, DsyntNode::new("she", WordClass::Pronoun))
            .with(II, DsyntNode::new("sprout", WordClass::Verb).with(I, them));
        assert_eq!(r(&bare), "She saw them sprout.");
        let refl = DsyntNode::verb("bathe", Tense::Past)
            .with(I, DsyntNode::noun("bird").with_features(|f| f.number = Some(Number::Pl)))
            .with(II, DsyntNode::new("themselves", WordClass::Pronoun));
        assert_eq!(r(&refl), "The birds bathed themselves.");
    }

    #[test]
    fn predicate_coordination_and_vp_coordination() {
        let merged = DsyntNode::verb("be", Tense::Past)
            .with(I, DsyntNode::noun("garden"))
            .with(
                II,
                DsyntNode::adj("swampy").with(
                    COORD,
                    DsyntNode::adj("productive").with_features(|f| f.polarity = Some(Polarity::Neg)),
                ),
            );
        assert_eq!(r(&merged), "The garden was swampy, and not productive.");
        let vp = DsyntNode::verb("be", Tense::Past)
            .with(I, DsyntNode::noun("gardener"))
            .with(II, DsyntNode::adj("proud"))
            .with(
                COORD,
                DsyntNode::verb("want", Tense::Past).with(
                    II,
                    DsyntNode::new("reap", WordClass::Verb).with(
                        II,
                        DsyntNode::noun("lettuce").with_features(|f| f.number = Some(Number::Pl)),
                    ),
                ),
            );
        assert_eq!(r(&vp), "The gardener was proud and wanted to reap the lettuces.");
    }

    #[test]
    fn articles_and_truncation() {
        let t = DsyntNode::verb("eat", Tense::Past)
            .with(I, DsyntNode::noun("gardener"))
            .with(
                II,
                DsyntNode::new("apple", WordClass::Noun).with_features(|f| f.article = Some(Article::Indef)),
            )
            .with_features(|f: &mut Features| f.truncated = true);
        assert_eq!(r(&t), "The gardener ate an apple and ---");
    }

    #[test]
    fn well_formedness_check() {
        assert!(RealizedSentence::new("It rained.", "").is_well_formed());
        assert!(!RealizedSentence::new("it rained.", "").is_well_formed());
        assert!(!RealizedSentence::new("It rained", "").is_well_formed());
        assert!(!RealizedSentence::new("It rained?.", "").is_well_formed());
        assert!(RealizedSentence::new("They were tasty and ---", "").is_well_formed());
    }
}
