//! Shared helpers: fixture loading and a random story generator.
#![allow(dead_code)]

pub mod checks;

use std::path::PathBuf;

use m2d::resources::load_resources;
use m2d::story::{parse_story, ParseMode};
use m2d_core::dialog::{build_dialog, Dialog, Resources};
use m2d_core::personality::{preset, ParameterSet};
use m2d_core::tree::{Article, Gender, Number, Polarity, Tense};
use m2d_core::{CharacterDecl, DsyntNode, Relation, Story, WordClass};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const STORIES: [&str; 4] = ["garden", "squirrel", "lighthouse", "bakery"];

pub fn fixture_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

pub fn fixture(name: &str) -> Story {
    let text = std::fs::read_to_string(fixture_path(&format!("{name}.json"))).unwrap();
    parse_story(&text, ParseMode::Strict).unwrap().story
}

pub fn resources() -> Resources {
    load_resources(None).unwrap()
}

pub fn run(story: &Story, preset_name: &str, seed: u64, res: &Resources) -> Dialog {
    build_dialog(story, &preset(preset_name).unwrap(), seed, res).unwrap()
}

pub fn run_params(story: &Story, params: &ParameterSet, seed: u64, res: &Resources) -> Dialog {
    build_dialog(story, params, seed, res).unwrap()
}

fn decl(id: &str, lexeme: &str, gender: Gender, number: Number) -> CharacterDecl {
    CharacterDecl {
        id: id.into(),
        lexeme: lexeme.into(),
        gender,
        number,
        proper: false,
    }
}

pub fn cast() -> Vec<CharacterDecl> {
    vec![
        decl("gardener", "gardener", Gender::Fem, Number::Sg),
        decl("man", "man", Gender::Masc, Number::Sg),
        decl("garden", "garden", Gender::Neut, Number::Sg),
        decl("bowl", "bowl", Gender::Neut, Number::Sg),
        decl("apples", "apple", Gender::Neut, Number::Pl),
        decl("birds", "bird", Gender::Neut, Number::Pl),
    ]
}

const AGENTS: [&str; 3] = ["gardener", "man", "birds"];
const THINGS: [&str; 4] = ["garden", "bowl", "apples", "birds"];
const ADJECTIVES: [&str; 10] = [
    "swampy", "productive", "happy", "sad", "tired", "red", "tasty", "cold", "loud", "weedy",
];
const TRANSITIVE: [&str; 6] = ["see", "eat", "pick", "plant", "approach", "like"];
const INTRANSITIVE: [&str; 4] = ["fall", "leap", "run", "wait"];
const PREPOSITIONS: [&str; 3] = ["on", "in", "to"];

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn pick<'a>(&mut self, xs: &[&'a str]) -> &'a str {
        xs.choose(&mut self.rng).unwrap()
    }

    fn np(&mut self, id: &str) -> DsyntNode {
        let c = cast().into_iter().find(|c| c.id == id).unwrap();
        let mut n = DsyntNode::noun(c.lexeme).with_ref(id).with_features(|f| {
            f.article = Some(Article::Def);
            if c.number == Number::Pl {
                f.number = Some(Number::Pl);
            }
        });
        if self.rng.gen_bool(0.25) {
            let a = self.pick(&ADJECTIVES);
            n = n.with(Relation::ATTR, DsyntNode::adj(a));
        }
        n
    }

    fn tense(&mut self) -> Tense {
        if self.rng.gen_bool(0.8) {
            Tense::Past
        } else {
            Tense::Present
        }
    }

    fn copula(&mut self) -> DsyntNode {
        let subj = self.pick(&THINGS);
        let subj = self.np(subj);
        let adj = self.pick(&ADJECTIVES);
        let neg = self.rng.gen_bool(0.25);
        DsyntNode::verb("be", self.tense())
            .with_features(|f| f.polarity = neg.then_some(Polarity::Neg))
            .with(Relation::I, subj)
            .with(Relation::II, DsyntNode::adj(adj))
    }

    fn action(&mut self) -> DsyntNode {
        let agent = self.pick(&AGENTS);
        let subj = self.np(agent);
        let mut v = if self.rng.gen_bool(0.6) {
            let verb = self.pick(&TRANSITIVE);
            let obj = self.pick(&THINGS);
            let mut o = self.np(obj);
            if self.rng.gen_bool(0.15) {
                o = DsyntNode::noun("water").with_features(|f| f.possessor = Some(obj.into()));
            }
            DsyntNode::verb(verb, self.tense()).with(Relation::I, subj).with(Relation::II, o)
        } else {
            let verb = self.pick(&INTRANSITIVE);
            DsyntNode::verb(verb, self.tense()).with(Relation::I, subj)
        };
        if self.rng.gen_bool(0.3) {
            let p = self.pick(&PREPOSITIONS);
            let place = self.pick(&["garden", "bowl"]);
            let place = self.np(place);
            v = v.with(
                Relation::ATTR,
                DsyntNode::new(p, WordClass::Preposition).with(Relation::II, place),
            );
        }
        if self.rng.gen_bool(0.1) {
            v.features.polarity = Some(Polarity::Neg);
        }
        v
    }

    pub fn sentence(&mut self) -> DsyntNode {
        let kind = self.rng.gen_range(0..10);
        let mut s = match kind {
            0 => DsyntNode::verb("rain", Tense::Past),
            1..=4 => self.copula(),
            _ => self.action(),
        };
        if kind != 0 && self.rng.gen_bool(0.15) {
            let mut c = self.action();
            c.features.tense = s.features.tense;
            s = s.with(Relation::COORD, c);
        } else if kind != 0 && self.rng.gen_bool(0.15) {
            let inner = self.copula();
            s = s.with(
                Relation::ATTR,
                DsyntNode::new("because", WordClass::Conjunction).with(Relation::II, inner),
            );
        }
        s
    }

    pub fn story(&mut self, max_len: usize) -> Story {
        let n = self.rng.gen_range(1..=max_len);
        Story {
            title: "Random".into(),
            characters: cast(),
            sentences: (0..n).map(|_| self.sentence()).collect(),
        }
    }
}

pub fn random_story(seed: u64, max_len: usize) -> Story {
    Gen::new(seed).story(max_len)
}
