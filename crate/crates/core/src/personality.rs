//! Dialog-conversion parameters: per-speaker feature frequencies, group
//! caps, allocation knobs and the named presets.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::realize::RealizeOptions;
use crate::state::SynonymPolicy;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Speaker {
    S1,
    S2,
}

impl Speaker {
    pub fn other(self) -> Speaker {
        match self {
            Speaker::S1 => Speaker::S2,
            Speaker::S2 => Speaker::S1,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Speaker::S1 => 0,
            Speaker::S2 => 1,
        }
    }
}

impl fmt::Display for Speaker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Speaker::S1 => "S1",
            Speaker::S2 => "S2",
        })
    }
}

/// Every tunable dialog feature. The declaration order of [`FeatureId::ALL`]
/// is the evaluation order used when sampling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureId {
    WhWithAnswer,
    TagQuestions,
    Rhetorical,
    Provoking,
    Repetition,
    Paraphrase,
    StateChange,
    Corrections,
    AffirmAdjective,
    Exclamation,
    AckCasual,
    AckFormal,
    Uncertainty,
    FilledPauses,
    Emphasizers,
    Downtoners,
    DowntonerLike,
    AdjectiveSofteners,
    InGroup,
    LexicalChoice,
}

impl FeatureId {
    pub const ALL: [FeatureId; 20] = [
        FeatureId::WhWithAnswer,
        FeatureId::TagQuestions,
        FeatureId::Rhetorical,
        FeatureId::Provoking,
        FeatureId::Repetition,
        FeatureId::Paraphrase,
        FeatureId::StateChange,
        FeatureId::Corrections,
        FeatureId::AffirmAdjective,
        FeatureId::Exclamation,
        FeatureId::AckCasual,
        FeatureId::AckFormal,
        FeatureId::Uncertainty,
        FeatureId::FilledPauses,
        FeatureId::Emphasizers,
        FeatureId::Downtoners,
        FeatureId::DowntonerLike,
        FeatureId::AdjectiveSofteners,
        FeatureId::InGroup,
        FeatureId::LexicalChoice,
    ];

    /// Structural elaborations, as opposed to markers and lexical choice.
    pub const ELABORATIONS: [FeatureId; 9] = [
        FeatureId::WhWithAnswer,
        FeatureId::TagQuestions,
        FeatureId::Rhetorical,
        FeatureId::Provoking,
        FeatureId::Repetition,
        FeatureId::Paraphrase,
        FeatureId::StateChange,
        FeatureId::Corrections,
        FeatureId::AffirmAdjective,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FeatureId::WhWithAnswer => "wh_with_answer",
            FeatureId::TagQuestions => "tag_questions",
            FeatureId::Rhetorical => "rhetorical",
            FeatureId::Provoking => "provoking",
            FeatureId::Repetition => "repetition",
            FeatureId::Paraphrase => "paraphrase",
            FeatureId::StateChange => "state_change",
            FeatureId::Corrections => "corrections",
            FeatureId::AffirmAdjective => "affirm_adjective",
            FeatureId::Exclamation => "exclamation",
            FeatureId::AckCasual => "ack_casual",
            FeatureId::AckFormal => "ack_formal",
            FeatureId::Uncertainty => "uncertainty",
            FeatureId::FilledPauses => "filled_pauses",
            FeatureId::Emphasizers => "emphasizers",
            FeatureId::Downtoners => "downtoners",
            FeatureId::DowntonerLike => "downtoner_like",
            FeatureId::AdjectiveSofteners => "adjective_softeners",
            FeatureId::InGroup => "in_group",
            FeatureId::LexicalChoice => "lexical_choice",
        }
    }

    pub fn from_name(name: &str) -> Option<FeatureId> {
        FeatureId::ALL.into_iter().find(|f| f.name() == name)
    }

    /// Cap group shared by related features.
    pub fn group(self) -> &'static str {
        match self {
            FeatureId::WhWithAnswer
            | FeatureId::TagQuestions
            | FeatureId::Rhetorical
            | FeatureId::Provoking => "questions",
            FeatureId::Repetition | FeatureId::Paraphrase => "repetition",
            FeatureId::StateChange | FeatureId::Corrections => "extrapolation",
            FeatureId::AffirmAdjective => "interactions",
            FeatureId::Exclamation => "exclamation",
            FeatureId::AckCasual => "acknowledgments-casual",
            FeatureId::AckFormal => "acknowledgments-formal",
            FeatureId::Uncertainty => "uncertainty",
            FeatureId::FilledPauses => "filled-pauses",
            FeatureId::Emphasizers => "emphasizers",
            FeatureId::Downtoners | FeatureId::DowntonerLike | FeatureId::AdjectiveSofteners => {
                "downtoners"
            }
            FeatureId::InGroup => "in-group",
            FeatureId::LexicalChoice => "lexical",
        }
    }

    pub fn is_marker(self) -> bool {
        !FeatureId::ELABORATIONS.contains(&self)
            && !matches!(self, FeatureId::Exclamation | FeatureId::LexicalChoice)
    }

    pub fn is_question(self) -> bool {
        self.group() == "questions"
    }
}

impl fmt::Display for FeatureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// All cap groups known to the feature model.
pub fn known_groups() -> Vec<&'static str> {
    let mut g: Vec<&'static str> = FeatureId::ALL.iter().map(|f| f.group()).collect();
    g.sort_unstable();
    g.dedup();
    g
}

/// A sampled decision key: a whole feature, or one specific marker.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureKey {
    Feature(FeatureId),
    Marker(String),
}

impl fmt::Display for FeatureKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureKey::Feature(id) => f.write_str(id.name()),
            FeatureKey::Marker(m) => f.write_str(m),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LexicalPolicy {
    pub policy: SynonymPolicy,
    /// Synonyms ranked rarer than this are never chosen.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_rank: Option<u32>,
}

impl Default for LexicalPolicy {
    fn default() -> Self {
        LexicalPolicy {
            policy: SynonymPolicy::MaxFrequency,
            max_rank: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeatureProfile {
    /// Per-sentence firing probability of each feature.
    #[serde(default)]
    pub frequencies: BTreeMap<FeatureId, f64>,
    /// Probabilities for individual markers, keyed by marker id. The marker
    /// shares its feature's cap group.
    #[serde(default)]
    pub markers: BTreeMap<String, f64>,
    /// Maximum accepted decisions per group for this speaker in one dialog.
    #[serde(default)]
    pub caps: BTreeMap<String, u32>,
    #[serde(default)]
    pub lexical: LexicalPolicy,
}

impl FeatureProfile {
    pub fn uniform(freq: f64) -> Self {
        FeatureProfile {
            frequencies: FeatureId::ALL.iter().map(|f| (*f, freq)).collect(),
            ..FeatureProfile::default()
        }
    }

    pub fn frequency(&self, f: FeatureId) -> f64 {
        self.frequencies.get(&f).copied().unwrap_or(0.0)
    }

    pub fn set(mut self, f: FeatureId, freq: f64) -> Self {
        self.frequencies.insert(f, freq);
        self
    }

    pub fn cap(&self, group: &str) -> Option<u32> {
        self.caps.get(group).copied()
    }

    pub fn is_silent(&self) -> bool {
        self.frequencies.values().all(|f| *f <= 0.0) && self.markers.values().all(|f| *f <= 0.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParameterSet {
    pub preset: String,
    /// Share of content given to S1.
    pub ratio: f64,
    /// Maximum run of consecutive sentences one speaker keeps.
    pub chunk: usize,
    /// Trees with more nodes than this are split.
    pub split_threshold: usize,
    pub split: bool,
    pub merge: bool,
    pub pronominalize: bool,
    pub postprocess: bool,
    /// Sentences of look-back for pronoun salience.
    pub salience_window: usize,
    pub realize: RealizeOptions,
    pub speakers: [FeatureProfile; 2],
}

impl ParameterSet {
    pub fn profile(&self, s: Speaker) -> &FeatureProfile {
        &self.speakers[s.index()]
    }

    pub fn profile_mut(&mut self, s: Speaker) -> &mut FeatureProfile {
        &mut self.speakers[s.index()]
    }

    /// Pulls every value into its legal range, returning one message per
    /// adjustment.
    pub fn clamp(&mut self) -> Vec<String> {
        let mut warnings = Vec::new();
        let r = clamp_ratio(self.ratio);
        if r != self.ratio {
            warnings.push(alloc::format!("ratio {} clamped to {}", self.ratio, r));
            self.ratio = r;
        }
        if self.chunk == 0 {
            warnings.push("chunk 0 raised to 1".to_string());
            self.chunk = 1;
        }
        if self.split_threshold == 0 {
            warnings.push("split_threshold 0 raised to 1".to_string());
            self.split_threshold = 1;
        }
        for (i, p) in self.speakers.iter_mut().enumerate() {
            for (f, v) in p.frequencies.iter_mut() {
                let c = clamp_unit(*v);
                if c != *v {
                    warnings.push(alloc::format!("S{} {} {} clamped to {}", i + 1, f, v, c));
                    *v = c;
                }
            }
            for (m, v) in p.markers.iter_mut() {
                let c = clamp_unit(*v);
                if c != *v {
                    warnings.push(alloc::format!("S{} {} {} clamped to {}", i + 1, m, v, c));
                    *v = c;
                }
            }
        }
        warnings
    }
}

pub fn clamp_ratio(r: f64) -> f64 {
    if r.is_nan() {
        0.5
    } else {
        r.clamp(0.1, 0.9)
    }
}

fn clamp_unit(v: f64) -> f64 {
    if v.is_nan() {
        0.0
    } else {
        v.clamp(0.0, 1.0)
    }
}

pub const PRESET_NAMES: [&str; 5] = [
    "est",
    "basic",
    "chatty",
    "extravert_vs_default",
    "introvert_vs_default",
];

/// Level mapping for the personality presets.
pub const HIGH: f64 = 0.8;
pub const LOW: f64 = 0.1;
pub const DEFAULT_LEVEL: f64 = 0.3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownPreset(pub String);

impl fmt::Display for UnknownPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown preset `{}` (expected one of {})", self.0, PRESET_NAMES.join(", "))
    }
}

pub fn preset(name: &str) -> Result<ParameterSet, UnknownPreset> {
    match name {
        "est" => Ok(est()),
        "basic" => Ok(basic()),
        "chatty" => Ok(chatty()),
        "extravert_vs_default" => Ok(personality(true)),
        "introvert_vs_default" => Ok(personality(false)),
        _ => Err(UnknownPreset(name.to_string())),
    }
}

fn est() -> ParameterSet {
    ParameterSet {
        preset: "est".into(),
        ratio: 0.5,
        chunk: 1,
        split_threshold: 14,
        split: false,
        merge: false,
        pronominalize: false,
        postprocess: false,
        salience_window: 2,
        realize: RealizeOptions::default(),
        speakers: [FeatureProfile::uniform(0.0), FeatureProfile::uniform(0.0)],
    }
}

fn basic() -> ParameterSet {
    ParameterSet {
        preset: "basic".into(),
        chunk: 2,
        split: true,
        merge: true,
        pronominalize: true,
        postprocess: true,
        ..est()
    }
}

fn chatty_profile() -> FeatureProfile {
    use FeatureId::*;
    let mut p = FeatureProfile::uniform(0.0);
    for (f, v) in [
        (WhWithAnswer, 0.3),
        (TagQuestions, 0.3),
        (Rhetorical, 0.1),
        (Provoking, 0.2),
        (Repetition, 0.2),
        (Paraphrase, 0.2),
        (StateChange, 0.1),
        (Corrections, 0.1),
        (AffirmAdjective, 0.2),
        (Exclamation, 0.1),
        (AckCasual, 0.3),
        (AckFormal, 0.2),
        (Uncertainty, 0.2),
        (FilledPauses, 0.2),
        (Emphasizers, 0.3),
        (Downtoners, 0.3),
        (DowntonerLike, 0.1),
        (AdjectiveSofteners, 0.2),
        (InGroup, 0.1),
        (LexicalChoice, 0.2),
    ] {
        p.frequencies.insert(f, v);
    }
    p.caps = default_caps();
    p
}

fn default_caps() -> BTreeMap<String, u32> {
    [("questions", 4), ("repetition", 3), ("extrapolation", 2), ("interactions", 2)]
        .into_iter()
        .map(|(g, n)| (g.to_string(), n))
        .collect()
}

fn chatty() -> ParameterSet {
    ParameterSet {
        preset: "chatty".into(),
        speakers: [chatty_profile(), chatty_profile()],
        ..basic()
    }
}

/// Features whose level is high for an extravert and low for an introvert
/// (`true`), or the reverse (`false`).
pub const EXTRAVERSION_TABLE: [(FeatureId, bool); 18] = [
    (FeatureId::AdjectiveSofteners, false),
    (FeatureId::Exclamation, true),
    (FeatureId::TagQuestions, true),
    (FeatureId::AckCasual, true),
    (FeatureId::AckFormal, false),
    (FeatureId::Downtoners, false),
    (FeatureId::DowntonerLike, true),
    (FeatureId::Uncertainty, false),
    (FeatureId::FilledPauses, false),
    (FeatureId::Emphasizers, true),
    (FeatureId::InGroup, true),
    (FeatureId::WhWithAnswer, true),
    (FeatureId::Rhetorical, false),
    (FeatureId::Paraphrase, true),
    (FeatureId::Repetition, false),
    (FeatureId::AffirmAdjective, true),
    (FeatureId::Corrections, true),
    (FeatureId::LexicalChoice, true),
];

pub fn default_profile() -> FeatureProfile {
    let mut p = FeatureProfile::uniform(DEFAULT_LEVEL);
    p.caps = default_caps();
    p.caps.insert("questions".into(), 6);
    p
}

/// One speaker styled along the extraversion axis.
pub fn trait_profile(extravert: bool) -> FeatureProfile {
    let mut p = default_profile();
    for (f, high_for_extravert) in EXTRAVERSION_TABLE {
        let level = if high_for_extravert == extravert { HIGH } else { LOW };
        p.frequencies.insert(f, level);
    }
    p.lexical = if extravert {
        LexicalPolicy {
            policy: SynonymPolicy::MaxLength,
            max_rank: None,
        }
    } else {
        LexicalPolicy {
            policy: SynonymPolicy::MinLength,
            max_rank: Some(20_000),
        }
    };
    p
}

fn personality(extravert: bool) -> ParameterSet {
    ParameterSet {
        preset: if extravert {
            "extravert_vs_default".into()
        } else {
            "introvert_vs_default".into()
        },
        ratio: if extravert { 0.7 } else { 0.3 },
        speakers: [trait_profile(extravert), default_profile()],
        ..basic()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rejection {
    FrequencyDraw,
    GroupCap,
    Constraint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureDecision {
    pub feature: FeatureKey,
    pub speaker: Speaker,
    /// Index of the candidate sentence the decision was made for.
    pub sentence: usize,
    pub accepted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rejection: Option<Rejection>,
}

/// Shared per-dialog sampling state: group counters for both speakers.
#[derive(Clone, Debug, Default)]
pub struct Sampler {
    used: [BTreeMap<String, u32>; 2],
}

impl Sampler {
    pub fn new() -> Self {
        Sampler::default()
    }

    pub fn used(&self, speaker: Speaker, group: &str) -> u32 {
        self.used[speaker.index()].get(group).copied().unwrap_or(0)
    }

    /// One decision. Exactly one value is drawn from `rng` whatever the
    /// outcome, so the stream position never depends on earlier results.
    /// The draw is tested first, then the constraint, then the cap.
    #[allow(clippy::too_many_arguments)]
    pub fn decide<R: Rng + ?Sized>(
        &mut self,
        profile: &FeatureProfile,
        speaker: Speaker,
        key: &FeatureKey,
        group: &str,
        sentence: usize,
        constraint_ok: bool,
        rng: &mut R,
    ) -> FeatureDecision {
        let freq = match key {
            FeatureKey::Feature(f) => profile.frequency(*f),
            FeatureKey::Marker(m) => profile.markers.get(m).copied().unwrap_or(0.0),
        };
        let u: f64 = rng.gen();
        let rejection = if u >= freq {
            Some(Rejection::FrequencyDraw)
        } else if !constraint_ok {
            Some(Rejection::Constraint)
        } else if profile
            .cap(group)
            .is_some_and(|cap| self.used(speaker, group) >= cap)
        {
            Some(Rejection::GroupCap)
        } else {
            None
        };
        if rejection.is_none() {
            *self.used[speaker.index()].entry(group.to_string()).or_insert(0) += 1;
        }
        FeatureDecision {
            feature: key.clone(),
            speaker,
            sentence,
            accepted: rejection.is_none(),
            rejection,
        }
    }
}

/// A sentence offered to [`sample_features`] with the keys whose syntactic
/// constraint it satisfies.
#[derive(Clone, Debug, Default)]
pub struct CandidateSentence {
    pub index: usize,
    pub satisfies: Vec<FeatureKey>,
}

/// Keys enabled in a profile, in evaluation order, with their cap groups.
/// Marker keys need their feature's group, supplied by `marker_group`.
pub fn enabled_keys(
    profile: &FeatureProfile,
    marker_group: impl Fn(&str) -> Option<&'static str>,
) -> Vec<(FeatureKey, &'static str)> {
    let mut keys: Vec<(FeatureKey, &'static str)> = FeatureId::ALL
        .iter()
        .filter(|f| profile.frequencies.contains_key(f))
        .map(|f| (FeatureKey::Feature(*f), f.group()))
        .collect();
    for m in profile.markers.keys() {
        keys.push((FeatureKey::Marker(m.clone()), marker_group(m).unwrap_or("markers")));
    }
    keys
}

/// One decision per (enabled key, candidate) in candidate order, keys in
/// evaluation order.
pub fn sample_features<R: Rng + ?Sized>(
    profile: &FeatureProfile,
    candidates: &[CandidateSentence],
    marker_group: impl Fn(&str) -> Option<&'static str>,
    rng: &mut R,
) -> Vec<FeatureDecision> {
    let keys = enabled_keys(profile, marker_group);
    let mut sampler = Sampler::new();
    let mut out = Vec::with_capacity(keys.len() * candidates.len());
    for c in candidates {
        for (key, group) in &keys {
            let ok = c.satisfies.contains(key);
            out.push(sampler.decide(profile, Speaker::S1, key, group, c.index, ok, rng));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn candidates(n: usize, key: &FeatureKey) -> Vec<CandidateSentence> {
        (0..n)
            .map(|i| CandidateSentence {
                index: i,
                satisfies: vec![key.clone()],
            })
            .collect()
    }

    #[test]
    fn group_cap_is_shared_and_enforced() {
        let mut p = FeatureProfile::default().set(FeatureId::Downtoners, 1.0);
        p.caps.insert("downtoners".into(), 2);
        let key = FeatureKey::Feature(FeatureId::Downtoners);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let d = sample_features(&p, &candidates(5, &key), |_| None, &mut rng);
        assert_eq!(d.iter().filter(|d| d.accepted).count(), 2);
        assert!(d[2..].iter().all(|d| d.rejection == Some(Rejection::GroupCap)));
    }

    #[test]
    fn zero_frequency_and_constraint_rejections() {
        let p = FeatureProfile::default().set(FeatureId::TagQuestions, 0.0);
        let key = FeatureKey::Feature(FeatureId::TagQuestions);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let d = sample_features(&p, &candidates(4, &key), |_| None, &mut rng);
        assert!(d.iter().all(|d| d.rejection == Some(Rejection::FrequencyDraw)));
        let p = FeatureProfile::default().set(FeatureId::TagQuestions, 1.0);
        let never: Vec<_> = (0..4)
            .map(|i| CandidateSentence {
                index: i,
                satisfies: vec![],
            })
            .collect();
        let d = sample_features(&p, &never, |_| None, &mut rng);
        assert!(d.iter().all(|d| d.rejection == Some(Rejection::Constraint)));
    }

    #[test]
    fn presets_follow_the_level_mapping() {
        let e = preset("extravert_vs_default").unwrap();
        assert_eq!(e.ratio, 0.7);
        assert_eq!(e.speakers[0].frequency(FeatureId::Exclamation), HIGH);
        assert_eq!(e.speakers[0].frequency(FeatureId::FilledPauses), LOW);
        assert_eq!(e.speakers[0].frequency(FeatureId::InGroup), HIGH);
        assert!(e.speakers[1]
            .frequencies
            .values()
            .all(|v| *v == DEFAULT_LEVEL));
        let i = preset("introvert_vs_default").unwrap();
        assert!(i.speakers[0].frequency(FeatureId::Repetition) > i.speakers[0].frequency(FeatureId::Paraphrase));
        let est = preset("est").unwrap();
        assert_eq!(est.ratio, 0.5);
        assert!(est.speakers.iter().all(FeatureProfile::is_silent));
        assert_eq!(preset("nope"), Err(UnknownPreset("nope".into())));
        for name in PRESET_NAMES {
            let p = preset(name).unwrap();
            for s in &p.speakers {
                for g in s.caps.keys() {
                    assert!(known_groups().contains(&g.as_str()), "{g}");
                }
            }
        }
    }

    #[test]
    fn clamp_reports_changes() {
        let mut p = preset("chatty").unwrap();
        p.ratio = 1.2;
        p.speakers[0].frequencies.insert(FeatureId::Exclamation, 3.0);
        let w = p.clamp();
        assert_eq!(p.ratio, 0.9);
        assert_eq!(p.speakers[0].frequency(FeatureId::Exclamation), 1.0);
        assert_eq!(w.len(), 2);
    }
}
