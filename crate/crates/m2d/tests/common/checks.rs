//! Invariant checks shared by the property suites and the acceptance run.
//! Each returns a description of the first violation.

use std::collections::{BTreeMap, BTreeSet};

use m2d_core::dialog::{make_tag_question, Dialog, Origin, Resources, SourceRef};
use m2d_core::personality::{FeatureKey, ParameterSet, Speaker};
use m2d_core::tree::{Gender, Number, Polarity, Slot};
use m2d_core::transforms::{pronominalize, SalienceContext};
use m2d_core::{postprocess, Cast, CharacterDecl, DsyntNode, Realizer, Relation, Story, WordClass};

pub type Check = Result<(), String>;

/// Every input sentence is told exactly once, and elaborations point at
/// told units.
pub fn content_preserved(story: &Story, d: &Dialog) -> Check {
    let mut sources: Vec<SourceRef> = Vec::new();
    for (_, _, s) in d.sentences() {
        if let Origin::Content { sources: src } = &s.origin {
            sources.extend(src.iter().copied());
        }
    }
    let unique: BTreeSet<SourceRef> = sources.iter().copied().collect();
    if unique.len() != sources.len() {
        return Err(format!("a unit is told twice: {sources:?}"));
    }
    let told: BTreeSet<usize> = unique.iter().map(|s| s.sentence).collect();
    if told != (0..story.sentences.len()).collect() {
        return Err(format!("told sentences {told:?} of {}", story.sentences.len()));
    }
    for (_, _, s) in d.sentences() {
        if let Origin::Elaboration { of, .. } = &s.origin {
            if !unique.contains(of) {
                return Err(format!("elaboration of untold {of:?}"));
            }
        }
    }
    Ok(())
}

/// The tag's polarity is the clause's flipped, and shows in the text.
pub fn tag_polarity(tree: &DsyntNode, rz: &Realizer<'_>) -> Check {
    let tagged = make_tag_question(tree, rz).map_err(|e| e.to_string())?;
    let tag = tagged
        .children
        .iter()
        .find(|c| c.rel == Relation::APPEND && c.node.features.slot == Some(Slot::Tag))
        .map(|c| &c.node)
        .ok_or("no tag")?;
    if tag.features.polarity() == tree.features.polarity() {
        return Err("tag keeps the clause polarity".into());
    }
    if tag.features.tense != tree.features.tense {
        return Err("tag tense differs".into());
    }
    let text = postprocess(&rz.realize(&tagged).map_err(|e| e.to_string())?.text);
    let tail = text.rsplit(", ").next().unwrap_or("");
    let negative_tag = tail.contains("n't");
    if !text.ends_with('?') || negative_tag != (tree.features.polarity() == Polarity::Affirm) {
        return Err(format!("bad tag text {text:?}"));
    }
    Ok(())
}

/// Preorder walk over mentions that skips APPEND subtrees, calling `visit`
/// with each node and the ids mentioned before it.
fn walk_mentions(node: &DsyntNode, seen: &mut Vec<String>, visit: &mut impl FnMut(&DsyntNode, &[String])) {
    visit(node, seen);
    if let Some(p) = &node.features.possessor {
        seen.push(p.clone());
    }
    if let Some(r) = &node.reference {
        seen.push(r.clone());
    }
    for c in &node.children {
        if c.rel != Relation::APPEND {
            walk_mentions(&c.node, seen, visit);
        }
    }
}

/// Pronominalizes a story sentence by sentence and checks that no pronoun
/// was produced while another salient referent shared its gender and number.
pub fn pronouns_unambiguous(story: &Story, window: usize, res: &Resources) -> Check {
    let cast: &[CharacterDecl] = &story.characters;
    let traits = |id: &str| -> (Gender, Number) {
        let c = cast.iter().find(|c| c.id == id).expect("declared");
        (c.gender, c.number)
    };
    let mut ctx = SalienceContext::new(window);
    let mut history: Vec<Vec<String>> = Vec::new();
    for s in &story.sentences {
        let out = pronominalize(s, &mut ctx, Cast(cast), &res.morph);
        let recent: BTreeSet<String> = history.iter().rev().take(window).flatten().cloned().collect();
        let mut failure = None;
        walk_mentions(&out, &mut Vec::new(), &mut |n, before| {
            let id = if n.class == WordClass::Pronoun {
                n.reference.clone()
            } else if n.features.possessor_pronoun {
                n.features.possessor.clone()
            } else {
                None
            };
            let Some(id) = id else { return };
            let salient: BTreeSet<&String> = recent.iter().chain(before.iter()).collect();
            let rivals: Vec<&&String> = salient
                .iter()
                .filter(|r| r.as_str() != id && traits(r) == traits(&id))
                .collect();
            if !salient.contains(&id) || !rivals.is_empty() {
                failure = Some(format!("`{id}` pronominalized beside {rivals:?}"));
            }
        });
        if let Some(f) = failure {
            return Err(f);
        }
        let mut mentioned = Vec::new();
        walk_mentions(&out, &mut mentioned, &mut |_, _| {});
        history.push(mentioned);
    }
    Ok(())
}

/// Accepted decisions per speaker and group stay within the speaker's caps.
pub fn caps_hold(d: &Dialog, params: &ParameterSet, res: &Resources) -> Check {
    let mut used: BTreeMap<(Speaker, String), u32> = BTreeMap::new();
    for x in d.decisions.iter().filter(|x| x.accepted) {
        let group = match &x.feature {
            FeatureKey::Feature(f) => f.group().to_string(),
            FeatureKey::Marker(m) => res.marker_group(m).ok_or("unknown marker")?.to_string(),
        };
        *used.entry((x.speaker, group)).or_default() += 1;
    }
    for ((sp, g), n) in used {
        if let Some(cap) = params.profile(sp).cap(&g) {
            if n > cap {
                return Err(format!("{sp} {g}: {n} accepted, cap {cap}"));
            }
        }
    }
    Ok(())
}

pub fn postprocess_idempotent(text: &str) -> Check {
    let once = postprocess(text);
    let twice = postprocess(&once);
    if once == twice {
        Ok(())
    } else {
        Err(format!("{text:?} -> {once:?} -> {twice:?}"))
    }
}
