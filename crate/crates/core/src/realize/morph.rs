//! English inflection: irregular tables, regular rules and the pronoun
//! paradigm.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::tree::{Features, Gender, Number, Person, Tense, WordClass};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IrregularVerb {
    pub base: String,
    pub past: String,
    pub participle: String,
    pub present_3sg: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IrregularPlural {
    pub singular: String,
    pub plural: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Case {
    Nominative,
    Accusative,
    Possessive,
    Reflexive,
}

/// One row of the pronoun paradigm. `gender` is absent for rows that do not
/// distinguish gender (first and second person, plurals).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PronounEntry {
    pub person: Person,
    pub number: Number,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gender: Option<Gender>,
    pub nominative: String,
    pub accusative: String,
    pub possessive: String,
    pub reflexive: String,
}

impl PronounEntry {
    pub fn form(&self, case: Case) -> &str {
        match case {
            Case::Nominative => &self.nominative,
            Case::Accusative => &self.accusative,
            Case::Possessive => &self.possessive,
            Case::Reflexive => &self.reflexive,
        }
    }

    fn forms(&self) -> [&str; 4] {
        [
            &self.nominative,
            &self.accusative,
            &self.possessive,
            &self.reflexive,
        ]
    }
}

/// Serialized shape of a morphology lexicon.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphData {
    #[serde(default)]
    pub irregular_verbs: Vec<IrregularVerb>,
    #[serde(default)]
    pub irregular_plurals: Vec<IrregularPlural>,
    #[serde(default)]
    pub pronouns: Vec<PronounEntry>,
    /// Weather verbs that take an expletive "it" subject.
    #[serde(default)]
    pub impersonal_verbs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LexiconError {
    DuplicateEntry(String),
    MissingPronoun {
        person: Person,
        number: Number,
        gender: Option<Gender>,
    },
}

impl fmt::Display for LexiconError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LexiconError::DuplicateEntry(w) => write!(f, "duplicate irregular entry `{w}`"),
            LexiconError::MissingPronoun {
                person,
                number,
                gender,
            } => write!(
                f,
                "pronoun paradigm has no entry for {person:?} {number:?} {gender:?}"
            ),
        }
    }
}

/// Read-only morphology tables used by the realizer.
#[derive(Clone, Debug, Default)]
pub struct MorphLexicon {
    verbs: BTreeMap<String, IrregularVerb>,
    plurals: BTreeMap<String, String>,
    pronouns: Vec<PronounEntry>,
    impersonal: BTreeSet<String>,
}

impl MorphLexicon {
    /// Builds the lexicon, rejecting duplicate base forms and a pronoun
    /// paradigm that does not cover every person/number (and, in the third
    /// person singular, every gender).
    pub fn new(data: MorphData) -> Result<Self, LexiconError> {
        let mut verbs = BTreeMap::new();
        for v in data.irregular_verbs {
            if verbs.contains_key(&v.base) {
                return Err(LexiconError::DuplicateEntry(v.base));
            }
            verbs.insert(v.base.clone(), v);
        }
        let mut plurals = BTreeMap::new();
        for p in data.irregular_plurals {
            if plurals.contains_key(&p.singular) {
                return Err(LexiconError::DuplicateEntry(p.singular));
            }
            plurals.insert(p.singular, p.plural);
        }
        let lex = MorphLexicon {
            verbs,
            plurals,
            pronouns: data.pronouns,
            impersonal: data.impersonal_verbs.into_iter().collect(),
        };
        for person in [Person::First, Person::Second, Person::Third] {
            for number in [Number::Sg, Number::Pl] {
                let genders: &[Gender] = if person == Person::Third && number == Number::Sg {
                    &[Gender::Masc, Gender::Fem, Gender::Neut]
                } else {
                    &[Gender::Neut]
                };
                for &g in genders {
                    if lex.pronoun(person, number, g).is_none() {
                        return Err(LexiconError::MissingPronoun {
                            person,
                            number,
                            gender: Some(g),
                        });
                    }
                }
            }
        }
        Ok(lex)
    }

    pub fn is_impersonal(&self, verb: &str) -> bool {
        self.impersonal.contains(verb)
    }

    pub fn irregular_verb(&self, base: &str) -> Option<&IrregularVerb> {
        self.verbs.get(base)
    }

    /// Paradigm row for a person/number/gender, preferring an exact gender
    /// match over a gender-neutral row.
    pub fn pronoun(&self, person: Person, number: Number, gender: Gender) -> Option<&PronounEntry> {
        let candidates = self
            .pronouns
            .iter()
            .filter(|p| p.person == person && p.number == number);
        let mut fallback = None;
        for p in candidates {
            match p.gender {
                Some(g) if g == gender => return Some(p),
                None if fallback.is_none() => fallback = Some(p),
                _ => {}
            }
        }
        fallback
    }

    /// The paradigm row containing `form` in any case.
    pub fn pronoun_by_form(&self, form: &str) -> Option<(&PronounEntry, Case)> {
        const CASES: [Case; 4] = [
            Case::Nominative,
            Case::Accusative,
            Case::Possessive,
            Case::Reflexive,
        ];
        self.pronouns.iter().find_map(|p| {
            CASES
                .iter()
                .zip(p.forms())
                .find(|(_, f)| f.eq_ignore_ascii_case(form))
                .map(|(c, _)| (p, *c))
        })
    }

    pub fn past(&self, base: &str) -> String {
        match self.verbs.get(base) {
            Some(v) => v.past.clone(),
            None => regular_past(base),
        }
    }

    pub fn present_3sg(&self, base: &str) -> String {
        match self.verbs.get(base) {
            Some(v) => v.present_3sg.clone(),
            None => sibilant_suffix(base),
        }
    }

    pub fn plural(&self, noun: &str) -> String {
        match self.plurals.get(noun) {
            Some(p) => p.clone(),
            None => sibilant_suffix(noun),
        }
    }
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

fn vowel_groups(word: &str) -> usize {
    let mut groups = 0;
    let mut prev = false;
    for c in word.chars() {
        let v = is_vowel(c);
        if v && !prev {
            groups += 1;
        }
        prev = v;
    }
    groups
}

/// `+ed` with e-drop, y→ied and consonant doubling for one-syllable
/// consonant-vowel-consonant stems.
pub fn regular_past(base: &str) -> String {
    let chars: Vec<char> = base.chars().collect();
    let n = chars.len();
    if n == 0 {
        return String::new();
    }
    let last = chars[n - 1];
    if last == 'e' {
        return format!("{base}d");
    }
    if last == 'y' && n >= 2 && !is_vowel(chars[n - 2]) {
        return format!("{}ied", &base[..base.len() - 1]);
    }
    if n >= 3
        && !is_vowel(last)
        && !matches!(last, 'w' | 'x' | 'y')
        && is_vowel(chars[n - 2])
        && !is_vowel(chars[n - 3])
        && vowel_groups(base) == 1
    {
        return format!("{base}{last}ed");
    }
    format!("{base}ed")
}

/// Shared `-s` rule for plurals and third person singular verbs.
pub fn sibilant_suffix(word: &str) -> String {
    let chars: Vec<char> = word.chars().collect();
    let n = chars.len();
    if n == 0 {
        return String::new();
    }
    let last = chars[n - 1];
    if last == 'y' && n >= 2 && !is_vowel(chars[n - 2]) {
        return format!("{}ies", &word[..word.len() - 1]);
    }
    if matches!(last, 's' | 'x' | 'z' | 'o') || word.ends_with("ch") || word.ends_with("sh") {
        return format!("{word}es");
    }
    format!("{word}s")
}

/// Form of "be" agreeing with a subject.
pub fn be_form(tense: Tense, person: Person, number: Number) -> &'static str {
    match (tense, person, number) {
        (Tense::Present, Person::First, Number::Sg) => "am",
        (Tense::Present, Person::Third, Number::Sg) => "is",
        (Tense::Present, _, _) => "are",
        (Tense::Past, Person::First | Person::Third, Number::Sg) => "was",
        (Tense::Past, _, _) => "were",
        (Tense::Future, _, _) => "will be",
    }
}

/// Single-word inflected form of a lexeme.
///
/// Verbs agree with the person/number found in `features` (third person
/// singular when absent); future tense yields "will" + base. Nouns take the
/// plural when `number` is `pl`. Other classes are returned unchanged.
pub fn inflect(lexeme: &str, class: WordClass, features: &Features, lexicon: &MorphLexicon) -> String {
    let person = features.person.unwrap_or(Person::Third);
    let number = features.number.unwrap_or(Number::Sg);
    match class {
        WordClass::Verb => match features.tense {
            None => lexeme.to_string(),
            Some(tense) if lexeme == "be" => be_form(tense, person, number).to_string(),
            Some(Tense::Future) => format!("will {lexeme}"),
            Some(Tense::Past) => lexicon.past(lexeme),
            Some(Tense::Present) => {
                if person == Person::Third && number == Number::Sg {
                    lexicon.present_3sg(lexeme)
                } else {
                    lexeme.to_string()
                }
            }
        },
        WordClass::Noun if number == Number::Pl => lexicon.plural(lexeme),
        _ => lexeme.to_string(),
    }
}
