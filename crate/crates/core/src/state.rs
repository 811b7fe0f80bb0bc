//! Character and property database built from a story's trees, plus the
//! antonym and synonym lexicons used for extrapolation and lexical choice.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::tree::{Cast, CharId, DsyntNode, Gender, Number, Polarity, Relation, Story, WordClass};

/// Nouns treated as body parts rather than possessions.
pub const BODY_PARTS: &[&str] = &[
    "paw", "tail", "head", "hand", "foot", "leg", "wing", "eye", "ear", "nose", "mouth", "arm",
    "face", "beak", "claw", "fur", "feather", "back", "body", "tooth",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynonymEntry {
    pub word: String,
    pub freq_rank: u32,
    pub len: usize,
}

/// On-disk shape of the lexicon file.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LexiconData {
    #[serde(default)]
    pub antonyms: Vec<(String, String)>,
    #[serde(default)]
    pub synonyms: BTreeMap<String, Vec<SynonymEntry>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LexiconLoadError {
    /// A word is paired with two different antonyms.
    AntonymConflict { word: String, first: String, second: String },
    SelfAntonym(String),
    SelfSynonym(String),
    /// The `len` field disagrees with the word.
    BadLength { word: String, len: usize },
}

impl fmt::Display for LexiconLoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LexiconLoadError::AntonymConflict { word, first, second } => write!(
                f,
                "`{word}` has two antonyms: `{first}` and `{second}`"
            ),
            LexiconLoadError::SelfAntonym(w) => write!(f, "`{w}` is listed as its own antonym"),
            LexiconLoadError::SelfSynonym(w) => write!(f, "`{w}` is listed as its own synonym"),
            LexiconLoadError::BadLength { word, len } => {
                write!(f, "synonym `{word}` has len {len}, expected {}", word.chars().count())
            }
        }
    }
}

/// Antonym pairs (stored symmetrically) and synonym lists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lexicon {
    antonyms: BTreeMap<String, String>,
    synonyms: BTreeMap<String, Vec<SynonymEntry>>,
}

impl Lexicon {
    pub fn new(data: LexiconData) -> Result<Self, LexiconLoadError> {
        let mut antonyms: BTreeMap<String, String> = BTreeMap::new();
        for (a, b) in data.antonyms {
            if a == b {
                return Err(LexiconLoadError::SelfAntonym(a));
            }
            for (x, y) in [(&a, &b), (&b, &a)] {
                match antonyms.get(x) {
                    Some(prev) if prev != y => {
                        return Err(LexiconLoadError::AntonymConflict {
                            word: x.clone(),
                            first: prev.clone(),
                            second: y.clone(),
                        })
                    }
                    _ => {
                        antonyms.insert(x.clone(), y.clone());
                    }
                }
            }
        }
        for (head, entries) in &data.synonyms {
            for e in entries {
                if &e.word == head {
                    return Err(LexiconLoadError::SelfSynonym(head.clone()));
                }
                if e.len != e.word.chars().count() {
                    return Err(LexiconLoadError::BadLength {
                        word: e.word.clone(),
                        len: e.len,
                    });
                }
            }
        }
        Ok(Lexicon {
            antonyms,
            synonyms: data.synonyms,
        })
    }

    pub fn antonym(&self, adjective: &str) -> Option<&str> {
        self.antonyms.get(adjective).map(String::as_str)
    }

    pub fn antonym_pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.antonyms.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    pub fn synonym_entries(&self, lexeme: &str) -> &[SynonymEntry] {
        self.synonyms.get(lexeme).map_or(&[], Vec::as_slice)
    }

    pub fn has_synonyms(&self, lexeme: &str) -> bool {
        !self.synonym_entries(lexeme).is_empty()
    }

    /// Candidates ordered by `policy`; words ranked rarer than `max_rank`
    /// are dropped when a limit is given.
    pub fn synonyms(&self, lexeme: &str, policy: SynonymPolicy, max_rank: Option<u32>) -> Vec<String> {
        let mut entries: Vec<&SynonymEntry> = self
            .synonym_entries(lexeme)
            .iter()
            .filter(|e| max_rank.is_none_or(|m| e.freq_rank <= m))
            .collect();
        match policy {
            SynonymPolicy::Any => {}
            SynonymPolicy::MaxFrequency => entries.sort_by_key(|e| (e.freq_rank, e.len)),
            SynonymPolicy::MinLength => entries.sort_by_key(|e| (e.len, e.freq_rank)),
            SynonymPolicy::MaxLength => {
                entries.sort_by_key(|e| (core::cmp::Reverse(e.len), e.freq_rank))
            }
        }
        entries.into_iter().map(|e| e.word.clone()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SynonymPolicy {
    /// Lexicon order; the caller draws among all candidates.
    Any,
    /// Most frequent (lowest rank) first.
    MaxFrequency,
    MinLength,
    MaxLength,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateEntry {
    pub adjective: String,
    pub sentence: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActorRecord {
    pub id: CharId,
    pub gender: Gender,
    pub number: Number,
    /// Distinct state adjectives in assertion order.
    pub states: Vec<StateEntry>,
    pub possessions: BTreeSet<String>,
    pub body_parts: BTreeSet<String>,
    /// Sentence indices mentioning the character, strictly increasing.
    pub mentions: Vec<usize>,
}

impl ActorRecord {
    pub fn state_names(&self) -> Vec<&str> {
        self.states.iter().map(|s| s.adjective.as_str()).collect()
    }

    /// States asserted at or before `position`.
    pub fn states_at(&self, position: usize) -> impl DoubleEndedIterator<Item = &StateEntry> {
        self.states.iter().filter(move |s| s.sentence <= position)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Referent {
    pub id: CharId,
    pub gender: Gender,
    pub number: Number,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StoryDatabase {
    pub actors: BTreeMap<CharId, ActorRecord>,
    pub lexicon: Lexicon,
    /// Character refs per sentence in document order, first mention only.
    sentence_refs: Vec<Vec<CharId>>,
}

/// Characters referenced in `tree`, in pre-order, each listed once. Both
/// `ref` values and possessor features count as mentions.
pub fn referents_in(tree: &DsyntNode) -> Vec<CharId> {
    let mut out: Vec<CharId> = Vec::new();
    tree.walk(&mut |_, n| {
        for id in n.reference.iter().chain(n.features.possessor.iter()) {
            if !out.contains(id) {
                out.push(id.clone());
            }
        }
    });
    out
}

fn asserted_states(tree: &DsyntNode, out: &mut Vec<(CharId, String)>) {
    tree.walk(&mut |_, n| {
        // be(X, adj): predicate adjectives, including coordinated ones.
        if n.is_copula() && n.features.polarity() == Polarity::Affirm {
            if let (Some(id), Some(pred)) = (
                n.subject().and_then(|s| s.reference.clone()),
                n.child(Relation::II),
            ) {
                if pred.class == WordClass::Adjective {
                    for adj in core::iter::once(pred).chain(pred.children_with(Relation::COORD)) {
                        if adj.features.polarity() == Polarity::Affirm {
                            out.push((id.clone(), adj.lexeme.clone()));
                        }
                    }
                }
            }
        }
        // Attributive adjectives on a character node.
        if let Some(id) = &n.reference {
            for a in n.children_with(Relation::ATTR) {
                if a.class == WordClass::Adjective && a.features.polarity() == Polarity::Affirm {
                    out.push((id.clone(), a.lexeme.clone()));
                }
            }
        }
    });
}

pub fn build_database(story: &Story, lexicon: &Lexicon) -> StoryDatabase {
    let mut actors: BTreeMap<CharId, ActorRecord> = story
        .characters
        .iter()
        .map(|c| {
            (
                c.id.clone(),
                ActorRecord {
                    id: c.id.clone(),
                    gender: c.gender,
                    number: c.number,
                    states: Vec::new(),
                    possessions: BTreeSet::new(),
                    body_parts: BTreeSet::new(),
                    mentions: Vec::new(),
                },
            )
        })
        .collect();
    let mut sentence_refs = Vec::with_capacity(story.sentences.len());
    for (i, tree) in story.sentences.iter().enumerate() {
        let refs = referents_in(tree);
        for id in &refs {
            if let Some(rec) = actors.get_mut(id) {
                rec.mentions.push(i);
            }
        }
        sentence_refs.push(refs);

        let mut states = Vec::new();
        asserted_states(tree, &mut states);
        for (id, adj) in states {
            if let Some(rec) = actors.get_mut(&id) {
                if !rec.states.iter().any(|s| s.adjective == adj) {
                    rec.states.push(StateEntry {
                        adjective: adj,
                        sentence: i,
                    });
                }
            }
        }

        tree.walk(&mut |_, n| {
            if let Some(owner) = &n.features.possessor {
                if let Some(rec) = actors.get_mut(owner) {
                    if BODY_PARTS.contains(&n.lexeme.as_str()) {
                        rec.body_parts.insert(n.lexeme.clone());
                    } else {
                        rec.possessions.insert(n.lexeme.clone());
                    }
                }
            }
        });
    }
    StoryDatabase {
        actors,
        lexicon: lexicon.clone(),
        sentence_refs,
    }
}

impl StoryDatabase {
    pub fn actor(&self, id: &str) -> Option<&ActorRecord> {
        self.actors.get(id)
    }

    pub fn antonym_of(&self, adjective: &str) -> Option<&str> {
        self.lexicon.antonym(adjective)
    }

    pub fn synonyms_of(&self, lexeme: &str, policy: SynonymPolicy) -> Vec<String> {
        self.lexicon.synonyms(lexeme, policy, None)
    }

    /// Characters mentioned in the `window` sentences before `position`,
    /// most recent first; ties within a sentence keep document order.
    pub fn salient_referents(&self, position: usize, window: usize) -> Vec<Referent> {
        let end = position.min(self.sentence_refs.len());
        let start = end.saturating_sub(window);
        let mut out: Vec<Referent> = Vec::new();
        for refs in self.sentence_refs[start..end].iter().rev() {
            for id in refs {
                if out.iter().any(|r| &r.id == id) {
                    continue;
                }
                if let Some(a) = self.actors.get(id) {
                    out.push(Referent {
                        id: id.clone(),
                        gender: a.gender,
                        number: a.number,
                    });
                }
            }
        }
        out
    }

    /// The character's most recent state at `position` that has an antonym.
    pub fn latest_state_with_antonym(&self, id: &str, position: usize) -> Option<(&str, &str)> {
        let rec = self.actors.get(id)?;
        rec.states_at(position)
            .rev()
            .find_map(|s| self.antonym_of(&s.adjective).map(|a| (s.adjective.as_str(), a)))
    }
}

/// Referent description for a cast member.
pub fn referent(cast: Cast<'_>, id: &str) -> Option<Referent> {
    cast.get(id).map(|c| Referent {
        id: c.id.clone(),
        gender: c.gender,
        number: c.number,
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::tree::{CharacterDecl, DsyntNode, Tense};
    use alloc::vec;
    use alloc::string::ToString;

    pub(crate) fn test_lexicon() -> Lexicon {
        let syn = |w: &str, r: u32| SynonymEntry {
            word: w.to_string(),
            freq_rank: r,
            len: w.chars().count(),
        };
        let mut synonyms = BTreeMap::new();
        synonyms.insert("swampy".to_string(), vec![syn("boggy", 12000), syn("waterlogged", 30000)]);
        synonyms.insert("tasty".to_string(), vec![syn("delicious", 5000), syn("yummy", 15000)]);
        Lexicon::new(LexiconData {
            antonyms: vec![
                ("happy".into(), "sad".into()),
                ("weedy".into(), "weedless".into()),
                ("productive".into(), "unproductive".into()),
            ],
            synonyms,
        })
        .unwrap()
    }

    fn decl(id: &str, gender: Gender) -> CharacterDecl {
        CharacterDecl {
            id: id.into(),
            lexeme: id.into(),
            gender,
            number: Number::Sg,
            proper: false,
        }
    }

    #[test]
    fn antonyms_are_symmetric_and_partial() {
        let lex = test_lexicon();
        assert_eq!(lex.antonym("happy"), Some("sad"));
        assert_eq!(lex.antonym("sad"), Some("happy"));
        assert_eq!(lex.antonym("communal"), None);
        let bad = Lexicon::new(LexiconData {
            antonyms: vec![("a".into(), "b".into()), ("a".into(), "c".into())],
            synonyms: BTreeMap::new(),
        });
        assert!(matches!(bad, Err(LexiconLoadError::AntonymConflict { .. })));
    }

    #[test]
    fn synonym_policies() {
        let lex = test_lexicon();
        assert_eq!(lex.synonyms("swampy", SynonymPolicy::MaxLength, None)[0], "waterlogged");
        assert_eq!(lex.synonyms("swampy", SynonymPolicy::MinLength, None)[0], "boggy");
        assert_eq!(lex.synonyms("swampy", SynonymPolicy::MaxFrequency, None)[0], "boggy");
        assert!(lex.synonyms("swampy", SynonymPolicy::Any, None).contains(&"boggy".to_string()));
        assert_eq!(lex.synonyms("swampy", SynonymPolicy::MaxLength, Some(20000)), vec!["boggy"]);
        assert!(lex.synonyms("unknown", SynonymPolicy::Any, None).is_empty());
    }

    #[test]
    fn states_possessions_and_salience() {
        let story = Story {
            title: "t".into(),
            characters: vec![decl("fox", Gender::Masc), decl("hen", Gender::Fem)],
            sentences: vec![
                DsyntNode::verb("be", Tense::Past)
                    .with(Relation::I, DsyntNode::noun("fox").with_ref("fox"))
                    .with(Relation::II, DsyntNode::adj("happy")),
                DsyntNode::verb("lick", Tense::Past)
                    .with(
                        Relation::I,
                        DsyntNode::noun("hen").with_ref("hen").with(Relation::ATTR, DsyntNode::adj("calm")),
                    )
                    .with(
                        Relation::II,
                        DsyntNode::noun("paw").with_features(|f| f.possessor = Some("fox".into())),
                    ),
            ],
        };
        let db = build_database(&story, &test_lexicon());
        let fox = db.actor("fox").unwrap();
        assert_eq!(fox.state_names(), vec!["happy"]);
        assert!(fox.body_parts.contains("paw"));
        assert_eq!(fox.mentions, vec![0, 1]);
        assert_eq!(db.actor("hen").unwrap().state_names(), vec!["calm"]);
        assert_eq!(db.latest_state_with_antonym("fox", 1), Some(("happy", "sad")));
        assert!(db.salient_referents(0, 2).is_empty());
        let ids: Vec<_> = db.salient_referents(2, 1).into_iter().map(|r| r.id).collect();
        assert_eq!(ids, vec!["hen", "fox"]);
    }
}
