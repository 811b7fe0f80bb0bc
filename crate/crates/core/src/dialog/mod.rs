//! The monolog-to-dialog pipeline.
//!
//! Stages: validate, split long sentences into units, allocate units to
//! speakers, sample elaborations per unit, group into turns and merge,
//! pronominalize, lexical choice, markers, then realize.

mod allocate;
mod elaborate;

pub use allocate::{allocate, quota, AllocationPlan};
pub use elaborate::{
    is_declarative_clause, make_affirmation, make_correction_pair, make_provoking_question,
    make_repetition, make_rhetorical, make_state_change, make_tag_question, make_wh_question,
    predicate_adjective, wh_targets, Affirmation, AffirmationMarkers, ProvokingDeck,
    RepetitionMode, UnsupportedTarget, LOCATIVE_PREPOSITIONS,
};

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::personality::{FeatureDecision, FeatureId, FeatureKey, ParameterSet, Sampler, Speaker};
use crate::realize::{postprocess, MorphLexicon, RealizationError, Realizer};
use crate::state::{build_database, referents_in, Lexicon, StoryDatabase};
use crate::transforms::{
    insert_marker, merge_pair, pronominalize, split_long, synonym_sites, try_substitute,
    MarkerSpec, SalienceContext,
};
use crate::tree::{CharId, Diagnostic, DsyntTree, Punct, Slot, Story};

/// Marker ids the engine itself needs.
pub const REQUIRED_MARKERS: [&str; 6] = [
    "ack_yeah",
    "ack_right",
    "state_now",
    "affirm_just",
    "affirm_really",
    "resume_and",
];

/// Random stream numbers. Each stage draws from its own stream so that
/// changing one stage's behavior leaves the others' draws untouched.
pub mod streams {
    pub const ALLOCATION: u64 = 1;
    pub const ELABORATION_DECISIONS: u64 = 2;
    pub const ELABORATION_CHOICES: u64 = 3;
    pub const LEXICAL_DECISIONS: u64 = 4;
    pub const LEXICAL_CHOICES: u64 = 5;
    pub const MARKER_DECISIONS: u64 = 6;
    pub const MARKER_CHOICES: u64 = 7;
}

/// Generator for one stream of a seed.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CannedLines {
    pub provoking: Vec<String>,
    pub correction_preface: String,
}

/// Everything the engine reads besides the story and parameters.
#[derive(Clone, Debug)]
pub struct Resources {
    pub morph: MorphLexicon,
    pub lexicon: Lexicon,
    pub markers: Vec<MarkerSpec>,
    pub canned: CannedLines,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResourceError {
    MissingMarker(String),
    DuplicateMarker(String),
    InconsistentMarker(String),
    EmptyPreface,
}

impl fmt::Display for ResourceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResourceError::MissingMarker(id) => write!(f, "required marker `{id}` is missing"),
            ResourceError::DuplicateMarker(id) => write!(f, "marker `{id}` is defined twice"),
            ResourceError::InconsistentMarker(id) => {
                write!(f, "marker `{id}` has a slot, constraint or group that do not agree")
            }
            ResourceError::EmptyPreface => f.write_str("correction preface is empty"),
        }
    }
}

impl Resources {
    pub fn new(
        morph: MorphLexicon,
        lexicon: Lexicon,
        markers: Vec<MarkerSpec>,
        canned: CannedLines,
    ) -> Result<Self, ResourceError> {
        let mut seen = BTreeSet::new();
        for m in &markers {
            if !seen.insert(m.id.as_str()) {
                return Err(ResourceError::DuplicateMarker(m.id.clone()));
            }
            if !m.is_consistent() {
                return Err(ResourceError::InconsistentMarker(m.id.clone()));
            }
        }
        for id in REQUIRED_MARKERS {
            if !seen.contains(id) {
                return Err(ResourceError::MissingMarker(id.to_string()));
            }
        }
        if canned.correction_preface.trim().is_empty() {
            return Err(ResourceError::EmptyPreface);
        }
        Ok(Resources {
            morph,
            lexicon,
            markers,
            canned,
        })
    }

    pub fn marker(&self, id: &str) -> Option<&MarkerSpec> {
        self.markers.iter().find(|m| m.id == id)
    }

    fn required(&self, id: &str) -> &MarkerSpec {
        self.marker(id).expect("checked in Resources::new")
    }

    /// Markers selected by `feature`, in file order.
    pub fn feature_markers(&self, feature: FeatureId) -> impl Iterator<Item = &MarkerSpec> {
        self.markers.iter().filter(move |m| m.feature == Some(feature))
    }

    /// Cap group of a marker id: its feature's group.
    pub fn marker_group(&self, id: &str) -> Option<&'static str> {
        self.marker(id).and_then(|m| m.feature).map(FeatureId::group)
    }
}

/// The speaker whose profile decides an elaboration of `owner`'s content:
/// whoever says the added line.
pub fn elaboration_actor(f: FeatureId, owner: Speaker) -> Speaker {
    match f {
        FeatureId::WhWithAnswer
        | FeatureId::Repetition
        | FeatureId::Paraphrase
        | FeatureId::AffirmAdjective => owner.other(),
        _ => owner,
    }
}

/// A clause of the input: sentence index and clause index after splitting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SourceRef {
    pub sentence: usize,
    pub clause: usize,
}

/// What an elaboration sentence does.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Question,
    Rhetorical,
    Provoking,
    Repetition,
    Paraphrase,
    StateChange,
    FalseStatement,
    CorrectionPreface,
    Interjection,
    Resume,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Origin {
    /// Carries story content. Every unit appears in exactly one of these.
    Content { sources: Vec<SourceRef> },
    /// Added material about one unit.
    Elaboration {
        feature: FeatureId,
        role: Role,
        of: SourceRef,
    },
}

impl Origin {
    pub fn is_content(&self) -> bool {
        matches!(self, Origin::Content { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Transform {
    Split,
    Merge,
    Pronominalize { ids: Vec<CharId> },
    TagQuestion,
    Exclamation,
    LexicalChoice { from: String, to: String },
    Marker { id: String, feature: FeatureId },
    /// Content given as the answer to a question.
    Answer,
    /// Content restated as "I think ..." after a false version.
    Correction,
    /// Content cut off for an interjection.
    Truncate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DialogSentence {
    pub text: String,
    pub origin: Origin,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub transforms: Vec<Transform>,
    /// Final tree; `None` for canned lines.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree: Option<DsyntTree>,
    /// Tree as it was before marker insertion.
    #[serde(skip)]
    pub pre_markers: Option<DsyntTree>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DialogTurn {
    pub speaker: Speaker,
    pub sentences: Vec<DialogSentence>,
}

impl DialogTurn {
    pub fn text(&self) -> String {
        let parts: Vec<&str> = self.sentences.iter().map(|s| s.text.as_str()).collect();
        parts.join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dialog {
    pub title: String,
    pub seed: u64,
    pub params: ParameterSet,
    pub allocation: AllocationPlan,
    pub turns: Vec<DialogTurn>,
    /// Every sampling decision. Elaboration decisions index units; lexical
    /// and marker decisions index dialog sentences in reading order.
    pub decisions: Vec<FeatureDecision>,
}

impl Dialog {
    /// Sentences in reading order with their speaker and turn index.
    pub fn sentences(&self) -> impl Iterator<Item = (usize, Speaker, &DialogSentence)> {
        self.turns
            .iter()
            .enumerate()
            .flat_map(|(t, turn)| turn.sentences.iter().map(move |s| (t, turn.speaker, s)))
    }

    /// Transforms applied plus elaboration sentences added.
    pub fn transform_count(&self) -> usize {
        self.sentences()
            .map(|(_, _, s)| s.transforms.len() + usize::from(!s.origin.is_content()))
            .sum()
    }

    pub fn marker_count(&self, speaker: Option<Speaker>) -> usize {
        self.sentences()
            .filter(|(_, sp, _)| speaker.is_none_or(|x| x == *sp))
            .flat_map(|(_, _, s)| s.transforms.iter())
            .filter(|t| matches!(t, Transform::Marker { .. }))
            .count()
    }

    pub fn question_count(&self) -> usize {
        self.sentences().filter(|(_, _, s)| s.text.ends_with('?')).count()
    }

    /// One line per turn: "S1: text".
    pub fn transcript(&self) -> String {
        let mut out = String::new();
        for t in &self.turns {
            out.push_str(&alloc::format!("{}: {}\n", t.speaker, t.text()));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DialogError {
    Invalid(Vec<(usize, Diagnostic)>),
    Realization { sentence: usize, error: RealizationError },
}

impl fmt::Display for DialogError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DialogError::Invalid(d) => {
                write!(f, "story has {} diagnostic(s)", d.len())?;
                if let Some((i, first)) = d.first() {
                    write!(f, "; first in sentence {i}: {first}")?;
                }
                Ok(())
            }
            DialogError::Realization { sentence, error } => {
                write!(f, "dialog sentence {sentence}: {error}")
            }
        }
    }
}

#[derive(Clone, Debug)]
enum Body {
    Tree(DsyntTree),
    Text(String),
}

#[derive(Clone, Debug)]
struct Item {
    speaker: Speaker,
    body: Body,
    origin: Origin,
    transforms: Vec<Transform>,
    pre_markers: Option<DsyntTree>,
}

impl Item {
    fn tree(speaker: Speaker, tree: DsyntTree, origin: Origin) -> Item {
        Item {
            speaker,
            body: Body::Tree(tree),
            origin,
            transforms: Vec::new(),
            pre_markers: None,
        }
    }

    fn content(speaker: Speaker, unit: &Unit) -> Item {
        let mut it = Item::tree(
            speaker,
            unit.tree.clone(),
            Origin::Content {
                sources: alloc::vec![unit.source],
            },
        );
        if unit.split {
            it.transforms.push(Transform::Split);
        }
        it
    }

    fn is_plain_content(&self) -> bool {
        self.origin.is_content()
            && matches!(self.body, Body::Tree(_))
            && self
                .transforms
                .iter()
                .all(|t| matches!(t, Transform::Split | Transform::Merge))
    }
}

#[derive(Clone, Debug)]
struct Unit {
    source: SourceRef,
    tree: DsyntTree,
    split: bool,
}

fn split_units(story: &Story, params: &ParameterSet) -> Vec<Unit> {
    let mut units = Vec::new();
    for (i, t) in story.sentences.iter().enumerate() {
        let parts = if params.split {
            split_long(t, params.split_threshold)
        } else {
            alloc::vec![t.clone()]
        };
        let split = parts.len() > 1;
        for (k, p) in parts.into_iter().enumerate() {
            units.push(Unit {
                source: SourceRef {
                    sentence: i,
                    clause: k,
                },
                tree: p,
                split,
            });
        }
    }
    units
}

struct Engine<'a> {
    params: &'a ParameterSet,
    res: &'a Resources,
    realizer: Realizer<'a>,
    db: StoryDatabase,
    sampler: Sampler,
    decisions: Vec<FeatureDecision>,
    deck: ProvokingDeck,
}

/// Runs the whole pipeline. The result depends only on the arguments.
pub fn build_dialog(
    story: &Story,
    params: &ParameterSet,
    seed: u64,
    res: &Resources,
) -> Result<Dialog, DialogError> {
    let diags = story.validate();
    if !diags.is_empty() {
        return Err(DialogError::Invalid(diags));
    }
    let mut engine = Engine {
        params,
        res,
        realizer: Realizer::new(&res.morph, story.cast()).with_options(params.realize),
        db: build_database(story, &res.lexicon),
        sampler: Sampler::new(),
        decisions: Vec::new(),
        deck: ProvokingDeck::new(res.canned.provoking.clone()),
    };

    let units = split_units(story, params);
    let plan = allocate(
        units.len(),
        params.ratio,
        params.chunk,
        &mut stream_rng(seed, streams::ALLOCATION),
    );
    let items = engine.elaborate(&units, &plan, seed);
    let mut turns = engine.group_and_merge(items);
    if params.pronominalize {
        engine.pronominalize(&mut turns, story);
    }
    engine.lexical_choice(&mut turns, seed);
    engine.markers(&mut turns, seed);
    let turns = engine.realize(turns)?;
    Ok(Dialog {
        title: story.title.clone(),
        seed,
        params: params.clone(),
        allocation: plan,
        turns,
        decisions: engine.decisions,
    })
}

/// Specs that can go into `t` without repeating a marker already there.
fn insertable<'r>(t: &DsyntTree, specs: impl Iterator<Item = &'r MarkerSpec>) -> Vec<&'r MarkerSpec> {
    let mut present: Vec<&str> = Vec::new();
    t.walk(&mut |_, n| {
        for c in n.children.iter().filter(|c| c.rel == crate::tree::Relation::APPEND) {
            present.push(c.node.lexeme.as_str());
        }
    });
    specs
        .filter(|s| !present.contains(&s.surface.as_str()))
        .filter(|s| insert_marker(t, s).is_ok())
        .collect()
}

impl<'a> Engine<'a> {
    fn feasible(&self, f: FeatureId, units: &[Unit], plan: &AllocationPlan, i: usize) -> bool {
        let t = &units[i].tree;
        let owner = plan.speakers[i];
        let other_policy = self.params.profile(owner.other()).lexical;
        match f {
            FeatureId::WhWithAnswer => wh_targets(t)
                .first()
                .is_some_and(|p| make_wh_question(t, p, &self.realizer).is_ok()),
            FeatureId::TagQuestions => make_tag_question(t, &self.realizer).is_ok(),
            FeatureId::Rhetorical => make_rhetorical(t).is_some(),
            FeatureId::Provoking => {
                !self.deck.is_empty() && plan.ends_run(i) && i + 1 < units.len()
            }
            FeatureId::Repetition => is_declarative_clause(t),
            FeatureId::Paraphrase => {
                is_declarative_clause(t)
                    && !synonym_sites(t, &self.res.lexicon, other_policy).is_empty()
            }
            FeatureId::StateChange => self.state_change_target(t, units[i].source.sentence).is_some(),
            FeatureId::Corrections => make_correction_pair(t).is_some(),
            FeatureId::AffirmAdjective => {
                is_declarative_clause(t)
                    && t.features.polarity() == crate::tree::Polarity::Affirm
                    && predicate_adjective(t).is_some_and(|(_, a)| {
                        a.features.polarity() == crate::tree::Polarity::Affirm
                            && !self
                                .res
                                .lexicon
                                .synonyms(&a.lexeme, other_policy.policy, other_policy.max_rank)
                                .is_empty()
                    })
            }
            _ => false,
        }
    }

    fn state_change_target(&self, t: &DsyntTree, sentence: usize) -> Option<CharId> {
        referents_in(t)
            .into_iter()
            .find(|id| self.db.latest_state_with_antonym(id, sentence).is_some())
    }

    fn elaborate(&mut self, units: &[Unit], plan: &AllocationPlan, seed: u64) -> Vec<Item> {
        let mut decide_rng = stream_rng(seed, streams::ELABORATION_DECISIONS);
        let mut choice_rng = stream_rng(seed, streams::ELABORATION_CHOICES);
        let mut items = Vec::new();
        for (i, unit) in units.iter().enumerate() {
            let owner = plan.speakers[i];
            let mut chosen = None;
            for f in FeatureId::ELABORATIONS {
                let actor = elaboration_actor(f, owner);
                let profile = self.params.profile(actor);
                if !profile.frequencies.contains_key(&f) {
                    continue;
                }
                let ok = chosen.is_none() && self.feasible(f, units, plan, i);
                let d = self.sampler.decide(
                    profile,
                    actor,
                    &FeatureKey::Feature(f),
                    f.group(),
                    i,
                    ok,
                    &mut decide_rng,
                );
                if d.accepted {
                    chosen = Some(f);
                }
                self.decisions.push(d);
            }
            match chosen {
                Some(f) => self.expand(f, unit, owner, &mut choice_rng, &mut items),
                None => items.push(Item::content(owner, unit)),
            }
        }
        items
    }

    fn elab(&self, speaker: Speaker, tree: DsyntTree, f: FeatureId, role: Role, of: SourceRef) -> Item {
        Item::tree(speaker, tree, Origin::Elaboration { feature: f, role, of })
    }

    fn canned(&self, speaker: Speaker, text: String, f: FeatureId, role: Role, of: SourceRef) -> Item {
        Item {
            speaker,
            body: Body::Text(text),
            origin: Origin::Elaboration { feature: f, role, of },
            transforms: Vec::new(),
            pre_markers: None,
        }
    }

    fn expand(
        &mut self,
        f: FeatureId,
        unit: &Unit,
        owner: Speaker,
        rng: &mut ChaCha8Rng,
        items: &mut Vec<Item>,
    ) {
        let other = owner.other();
        let src = unit.source;
        let t = &unit.tree;
        let content = Item::content(owner, unit);
        let other_policy = self.params.profile(other).lexical;
        match f {
            FeatureId::WhWithAnswer => {
                let target = wh_targets(t).into_iter().next().expect("checked");
                let (q, _) = make_wh_question(t, &target, &self.realizer).expect("checked");
                items.push(self.elab(other, q, f, Role::Question, src));
                let mut a = content;
                a.transforms.push(Transform::Answer);
                items.push(a);
            }
            FeatureId::TagQuestions => {
                let mut c = content;
                c.body = Body::Tree(make_tag_question(t, &self.realizer).expect("checked"));
                c.transforms.push(Transform::TagQuestion);
                items.push(c);
            }
            FeatureId::Rhetorical => {
                let r = make_rhetorical(t).expect("checked");
                items.push(self.elab(owner, r, f, Role::Rhetorical, src));
                items.push(content);
            }
            FeatureId::Provoking => {
                items.push(content);
                let line = make_provoking_question(&mut self.deck, rng).expect("checked");
                items.push(self.canned(owner, line, f, Role::Provoking, src));
            }
            FeatureId::Repetition | FeatureId::Paraphrase => {
                let (mode, role) = if f == FeatureId::Repetition {
                    (RepetitionMode::Verbatim, Role::Repetition)
                } else {
                    (RepetitionMode::Paraphrase, Role::Paraphrase)
                };
                let (rep, sub) = make_repetition(
                    t,
                    mode,
                    &self.res.lexicon,
                    other_policy,
                    self.res.required("ack_yeah"),
                    self.res.required("ack_right"),
                    rng,
                );
                items.push(content);
                let mut e = self.elab(other, rep, f, role, src);
                if let Some(s) = sub {
                    e.transforms.push(Transform::LexicalChoice {
                        from: s.from,
                        to: s.to,
                    });
                }
                items.push(e);
            }
            FeatureId::StateChange => {
                let id = self.state_change_target(t, src.sentence).expect("checked");
                items.push(content);
                if let Some(s) =
                    make_state_change(&self.db, &self.realizer, &id, src.sentence, self.res.required("state_now"))
                {
                    items.push(self.elab(owner, s, f, Role::StateChange, src));
                }
            }
            FeatureId::Corrections => {
                let (wrong, fix) = make_correction_pair(t).expect("checked");
                items.push(self.elab(other, wrong, f, Role::FalseStatement, src));
                items.push(self.canned(
                    owner,
                    self.res.canned.correction_preface.clone(),
                    f,
                    Role::CorrectionPreface,
                    src,
                ));
                let mut c = content;
                c.body = Body::Tree(fix);
                c.transforms.push(Transform::Correction);
                items.push(c);
            }
            FeatureId::AffirmAdjective => {
                let markers = AffirmationMarkers {
                    just: self.res.required("affirm_just"),
                    really: self.res.required("affirm_really"),
                    ack: self.res.required("ack_yeah"),
                    and: self.res.required("resume_and"),
                };
                match make_affirmation(t, &self.res.lexicon, other_policy, &markers, rng) {
                    Some(a) => {
                        let mut c = content;
                        c.body = Body::Tree(a.truncated);
                        c.transforms.push(Transform::Truncate);
                        items.push(c);
                        items.push(self.elab(other, a.interjection, f, Role::Interjection, src));
                        items.push(self.elab(owner, a.resume, f, Role::Resume, src));
                    }
                    None => items.push(content),
                }
            }
            _ => items.push(content),
        }
    }

    fn group_and_merge(&self, items: Vec<Item>) -> Vec<(Speaker, Vec<Item>)> {
        let mut turns: Vec<(Speaker, Vec<Item>)> = Vec::new();
        for it in items {
            match turns.last_mut() {
                Some((s, v)) if *s == it.speaker => v.push(it),
                _ => turns.push((it.speaker, alloc::vec![it])),
            }
        }
        if !self.params.merge {
            return turns;
        }
        for (_, v) in turns.iter_mut() {
            let mut out: Vec<Item> = Vec::with_capacity(v.len());
            for it in v.drain(..) {
                if let Some(prev) = out.last_mut() {
                    if let Some(m) = self.try_merge(prev, &it) {
                        *prev = m;
                        continue;
                    }
                }
                out.push(it);
            }
            *v = out;
        }
        turns
    }

    fn try_merge(&self, a: &Item, b: &Item) -> Option<Item> {
        if !a.is_plain_content() || !b.is_plain_content() {
            return None;
        }
        let (Body::Tree(ta), Body::Tree(tb)) = (&a.body, &b.body) else {
            return None;
        };
        let m = merge_pair(ta, tb)?;
        if m.node_count() > self.params.split_threshold {
            return None;
        }
        let (Origin::Content { sources: sa }, Origin::Content { sources: sb }) = (&a.origin, &b.origin)
        else {
            return None;
        };
        let mut sources = sa.clone();
        sources.extend(sb.iter().copied());
        let mut transforms: Vec<Transform> = Vec::new();
        if a.transforms.contains(&Transform::Split) || b.transforms.contains(&Transform::Split) {
            transforms.push(Transform::Split);
        }
        transforms.push(Transform::Merge);
        Some(Item {
            speaker: a.speaker,
            body: Body::Tree(m),
            origin: Origin::Content { sources },
            transforms,
            pre_markers: None,
        })
    }

    fn pronominalize(&self, turns: &mut [(Speaker, Vec<Item>)], story: &Story) {
        let mut ctx = SalienceContext::new(self.params.salience_window);
        for (_, items) in turns.iter_mut() {
            ctx.new_turn();
            for it in items.iter_mut() {
                let Body::Tree(t) = &it.body else {
                    continue;
                };
                let before: BTreeSet<CharId> = ctx.pronominalized.clone();
                let out = pronominalize(t, &mut ctx, story.cast(), &self.res.morph);
                if out != *t {
                    let ids: Vec<CharId> = ctx.pronominalized.difference(&before).cloned().collect();
                    it.transforms.push(Transform::Pronominalize { ids });
                    it.body = Body::Tree(out);
                }
            }
        }
    }

    fn lexical_choice(&mut self, turns: &mut [(Speaker, Vec<Item>)], seed: u64) {
        let mut decide_rng = stream_rng(seed, streams::LEXICAL_DECISIONS);
        let mut choice_rng = stream_rng(seed, streams::LEXICAL_CHOICES);
        let f = FeatureId::LexicalChoice;
        let mut index = 0;
        for (speaker, items) in turns.iter_mut() {
            let profile = self.params.profile(*speaker);
            for it in items.iter_mut() {
                let sentence = index;
                index += 1;
                let Body::Tree(t) = &it.body else {
                    continue;
                };
                if !profile.frequencies.contains_key(&f) {
                    continue;
                }
                let ok = !t.features.truncated
                    && !synonym_sites(t, &self.res.lexicon, profile.lexical).is_empty();
                let d = self.sampler.decide(
                    profile,
                    *speaker,
                    &FeatureKey::Feature(f),
                    f.group(),
                    sentence,
                    ok,
                    &mut decide_rng,
                );
                let accepted = d.accepted;
                self.decisions.push(d);
                if accepted {
                    if let Some((nt, s)) = try_substitute(t, &self.res.lexicon, profile.lexical, &mut choice_rng) {
                        it.body = Body::Tree(nt);
                        it.transforms.push(Transform::LexicalChoice {
                            from: s.from,
                            to: s.to,
                        });
                    }
                }
            }
        }
    }

    fn marker_ok(&self, feature: FeatureId, t: &DsyntTree, turn_initial: bool, first_turn: bool) -> bool {
        if t.features.truncated && feature == FeatureId::Exclamation {
            return false;
        }
        match feature {
            FeatureId::Exclamation => {
                is_declarative_clause(t) && t.features.punct != Some(Punct::Exclaim)
            }
            FeatureId::AckCasual | FeatureId::AckFormal => {
                turn_initial && !first_turn && !t.has_append(Slot::SentenceInitial)
            }
            _ => true,
        }
    }

    fn markers(&mut self, turns: &mut [(Speaker, Vec<Item>)], seed: u64) {
        let mut decide_rng = stream_rng(seed, streams::MARKER_DECISIONS);
        let mut choice_rng = stream_rng(seed, streams::MARKER_CHOICES);
        let mut index = 0;
        let res = self.res;
        for (turn_no, (speaker, items)) in turns.iter_mut().enumerate() {
            let profile = self.params.profile(*speaker);
            for (k, it) in items.iter_mut().enumerate() {
                let sentence = index;
                index += 1;
                let Body::Tree(t) = &it.body else {
                    continue;
                };
                let mut tree = t.clone();
                it.pre_markers = Some(tree.clone());
                let turn_initial = k == 0;
                let keys = FeatureId::ALL
                    .into_iter()
                    .filter(|f| *f == FeatureId::Exclamation || f.is_marker())
                    .filter(|f| profile.frequencies.contains_key(f))
                    .map(|f| (FeatureKey::Feature(f), Some(f)))
                    .chain(profile.markers.keys().map(|m| {
                        (FeatureKey::Marker(m.clone()), res.marker(m).and_then(|s| s.feature))
                    }))
                    .collect::<Vec<_>>();
                for (key, feature) in keys {
                    let Some(feature) = feature else {
                        continue;
                    };
                    let candidates: Vec<&MarkerSpec> = match &key {
                        _ if feature == FeatureId::Exclamation => Vec::new(),
                        FeatureKey::Feature(f) => insertable(&tree, res.feature_markers(*f)),
                        FeatureKey::Marker(id) => insertable(&tree, res.marker(id).into_iter()),
                    };
                    let ok = self.marker_ok(feature, &tree, turn_initial, turn_no == 0)
                        && (feature == FeatureId::Exclamation || !candidates.is_empty());
                    let d = self.sampler.decide(
                        profile,
                        *speaker,
                        &key,
                        feature.group(),
                        sentence,
                        ok,
                        &mut decide_rng,
                    );
                    let accepted = d.accepted;
                    self.decisions.push(d);
                    if !accepted {
                        continue;
                    }
                    if feature == FeatureId::Exclamation {
                        tree.features.punct = Some(Punct::Exclaim);
                        it.transforms.push(Transform::Exclamation);
                    } else {
                        let spec = candidates[choice_rng.gen_range(0..candidates.len())];
                        tree = insert_marker(&tree, spec).expect("insertable");
                        it.transforms.push(Transform::Marker {
                            id: spec.id.clone(),
                            feature,
                        });
                    }
                }
                it.body = Body::Tree(tree);
            }
        }
    }

    fn realize(&self, turns: Vec<(Speaker, Vec<Item>)>) -> Result<Vec<DialogTurn>, DialogError> {
        let mut out = Vec::with_capacity(turns.len());
        let mut index = 0;
        for (speaker, items) in turns {
            let mut sentences = Vec::with_capacity(items.len());
            for it in items {
                let (text, tree) = match it.body {
                    Body::Text(s) => (s, None),
                    Body::Tree(t) => {
                        let s = self
                            .realizer
                            .realize_text(&t)
                            .map_err(|error| DialogError::Realization { sentence: index, error })?;
                        (s, Some(t))
                    }
                };
                let text = if self.params.postprocess { postprocess(&text) } else { text };
                sentences.push(DialogSentence {
                    text,
                    origin: it.origin,
                    transforms: it.transforms,
                    tree,
                    pre_markers: it.pre_markers,
                });
                index += 1;
            }
            out.push(DialogTurn { speaker, sentences });
        }
        Ok(out)
    }
}
