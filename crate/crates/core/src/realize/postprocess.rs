//! String-level cleanup applied after realization: contractions, synthetic
//! possessives, article agreement, whitespace and capitalization.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

const NEGATABLE: &[(&str, &str)] = &[
    ("did", "didn't"),
    ("does", "doesn't"),
    ("do", "don't"),
    ("was", "wasn't"),
    ("were", "weren't"),
    ("is", "isn't"),
    ("are", "aren't"),
    ("has", "hasn't"),
    ("have", "haven't"),
    ("had", "hadn't"),
    ("could", "couldn't"),
    ("would", "wouldn't"),
    ("should", "shouldn't"),
    ("will", "won't"),
];

const COPULA_CONTRACTIONS: &[(&str, &str)] = &[("it", "it's"), ("that", "that's")];

const FUNCTION_WORDS: &[&str] = &[
    "the", "a", "an", "of", "and", "or", "to", "in", "on", "over", "with", "for", "it", "they",
    "he", "she", "them", "him", "her", "his", "its", "their", "not",
];

#[derive(Clone, Debug)]
struct Token {
    core: String,
    suffix: String,
}

impl Token {
    fn parse(raw: &str) -> Token {
        if raw.chars().all(|c| !c.is_alphanumeric()) {
            // "...," is an ellipsis carrying glue, not glue itself.
            if let Some(rest) = raw.strip_prefix("...") {
                if !rest.is_empty() && rest.chars().all(|c| matches!(c, ',' | '.' | '?' | '!' | ';' | ':')) {
                    return Token {
                        core: "...".to_string(),
                        suffix: rest.to_string(),
                    };
                }
            }
            return Token {
                core: raw.to_string(),
                suffix: String::new(),
            };
        }
        let cut = raw
            .char_indices()
            .rev()
            .take_while(|(_, c)| matches!(c, ',' | '.' | '?' | '!' | ';' | ':'))
            .last()
            .map_or(raw.len(), |(i, _)| i);
        Token {
            core: raw[..cut].to_string(),
            suffix: raw[cut..].to_string(),
        }
    }

    fn lower(&self) -> String {
        self.core.to_lowercase()
    }

    fn bare(&self) -> bool {
        self.suffix.is_empty()
    }

    fn is_word(&self) -> bool {
        !self.core.is_empty() && self.core.chars().all(|c| c.is_alphabetic())
    }

    fn is_glue(&self) -> bool {
        !self.core.is_empty() && self.core.chars().all(|c| matches!(c, ',' | '.' | '?' | '!' | ';' | ':'))
            && self.core != "..."
    }

    fn render(&self) -> String {
        format!("{}{}", self.core, self.suffix)
    }
}

fn with_case_of(template: &str, replacement: &str) -> String {
    if template.chars().next().is_some_and(|c| c.is_uppercase()) {
        super::capitalize_first(replacement)
    } else {
        replacement.to_string()
    }
}

/// Idempotent cleanup of realized text.
pub fn postprocess(text: &str) -> String {
    let mut toks: Vec<Token> = Vec::new();
    for raw in text.split_whitespace() {
        let t = Token::parse(raw);
        if t.is_glue() {
            if let Some(prev) = toks.last_mut() {
                prev.suffix.push_str(&t.core);
                continue;
            }
        }
        toks.push(t);
    }

    let toks = contract(toks);
    let mut toks = possessives(toks);
    articles(&mut toks);
    capitalize(&mut toks);

    let mut out = String::new();
    for t in &toks {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(&t.render());
    }
    out
}

fn contract(toks: Vec<Token>) -> Vec<Token> {
    let mut out: Vec<Token> = Vec::with_capacity(toks.len());
    let mut i = 0;
    while i < toks.len() {
        let t = &toks[i];
        if t.bare() {
            if let Some(next) = toks.get(i + 1) {
                let lower = t.lower();
                if next.lower() == "not" {
                    if let Some((_, c)) = NEGATABLE.iter().find(|(a, _)| *a == lower) {
                        out.push(Token {
                            core: with_case_of(&t.core, c),
                            suffix: next.suffix.clone(),
                        });
                        i += 2;
                        continue;
                    }
                }
                let word_follows = toks.get(i + 2).is_some_and(|n| n.is_word());
                if next.lower() == "is" && next.bare() && word_follows {
                    if let Some((_, c)) = COPULA_CONTRACTIONS.iter().find(|(a, _)| *a == lower) {
                        out.push(Token {
                            core: with_case_of(&t.core, c),
                            suffix: String::new(),
                        });
                        i += 2;
                        continue;
                    }
                }
            }
        }
        out.push(t.clone());
        i += 1;
    }
    out
}

/// "the railing of the deck" becomes "the deck's railing".
fn possessives(toks: Vec<Token>) -> Vec<Token> {
    let content = |t: &Token| t.is_word() && !FUNCTION_WORDS.contains(&t.lower().as_str());
    let mut out: Vec<Token> = Vec::with_capacity(toks.len());
    let mut i = 0;
    while i < toks.len() {
        if i + 4 < toks.len() {
            let w = &toks[i..i + 5];
            if w[0].lower() == "the"
                && w[0].bare()
                && content(&w[1])
                && w[1].bare()
                && w[2].core == "of"
                && w[2].bare()
                && w[3].core == "the"
                && w[3].bare()
                && content(&w[4])
            {
                let owner = if w[4].core.ends_with('s') {
                    format!("{}'", w[4].core)
                } else {
                    format!("{}'s", w[4].core)
                };
                out.push(w[0].clone());
                out.push(Token {
                    core: owner,
                    suffix: String::new(),
                });
                out.push(Token {
                    core: w[1].core.clone(),
                    suffix: w[4].suffix.clone(),
                });
                i += 5;
                continue;
            }
        }
        out.push(toks[i].clone());
        i += 1;
    }
    out
}

fn articles(toks: &mut [Token]) {
    for i in 0..toks.len().saturating_sub(1) {
        if !toks[i].bare() {
            continue;
        }
        let lower = toks[i].lower();
        if lower != "a" && lower != "an" {
            continue;
        }
        let next = &toks[i + 1].core;
        if !next.chars().next().is_some_and(|c| c.is_alphabetic()) {
            continue;
        }
        let want = if super::starts_with_vowel_sound(next) {
            "an"
        } else {
            "a"
        };
        toks[i].core = with_case_of(&toks[i].core, want);
    }
}

fn capitalize(toks: &mut [Token]) {
    let mut start = true;
    for t in toks.iter_mut() {
        if t.core == "i" {
            t.core = "I".into();
        }
        if start && t.core.chars().any(|c| c.is_alphabetic()) {
            t.core = super::capitalize_first(&t.core);
            start = false;
        }
        if t.suffix.contains(['.', '?', '!']) {
            start = true;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tag_contraction() {
        assert_eq!(
            postprocess("The chards the lettuces and the spinach sprouted, did not they?"),
            "The chards the lettuces and the spinach sprouted, didn't they?"
        );
        assert_eq!(
            postprocess("The garden was swampy, was not it?"),
            "The garden was swampy, wasn't it?"
        );
        assert_eq!(postprocess("It will not rain."), "It won't rain.");
    }

    #[test]
    fn copula_contraction_needs_a_following_word() {
        assert_eq!(postprocess("it is raining."), "It's raining.");
        assert_eq!(postprocess("That is right."), "That's right.");
        assert_eq!(postprocess("Yes it is."), "Yes it is.");
    }

    #[test]
    fn possessive_rewrite() {
        assert_eq!(
            postprocess("The squirrel fell over the railing of the deck."),
            "The squirrel fell over the deck's railing."
        );
        assert_eq!(
            postprocess("the railing of the deck"),
            "The deck's railing"
        );
    }

    #[test]
    fn whitespace_and_capitals() {
        assert_eq!(
            postprocess("  great ,  err ... the garden was swampy .  yeah  it was ."),
            "Great, err ... the garden was swampy. Yeah it was."
        );
        assert_eq!(postprocess("a apple and an pear"), "An apple and a pear");
        assert_eq!(postprocess("They were tasty and ---"), "They were tasty and ---");
    }

    #[test]
    fn idempotent_on_samples() {
        for s in [
            "The garden was swampy, and not productive.",
            "I don't think that's quite right, actually. I think the garden was productive.",
            "the railing of the deck of the house",
            "it is not it is",
            "Did not it? a a a",
            "the ... ,",
        ] {
            let once = postprocess(s);
            assert_eq!(postprocess(&once), once, "input {s:?}");
        }
    }
}
