//! Aggregation of adjacent same-subject sentences.

use crate::tree::{Child, DsyntNode, DsyntTree, Mood, Polarity, Relation, WordClass};

fn same_subject(a: &DsyntNode, b: &DsyntNode) -> bool {
    match (a.child(Relation::I), b.child(Relation::I)) {
        (Some(x), Some(y)) => x.lexeme == y.lexeme && x.reference == y.reference,
        _ => false,
    }
}

fn mergeable(t: &DsyntNode) -> bool {
    t.is_verb()
        && t.features.tense.is_some()
        && !t.is_interrogative()
        && !t.features.truncated
        && matches!(t.features.mood, None | Some(Mood::Decl))
        && !t.children.iter().any(|c| c.rel == Relation::APPEND)
}

/// A copula with a lone predicate adjective and no other dependents.
fn predicate_adjective(t: &DsyntNode) -> Option<&DsyntNode> {
    if !t.is_copula() {
        return None;
    }
    let rest_ok = t
        .children
        .iter()
        .all(|c| matches!(c.rel, Relation::I | Relation::II));
    t.child(Relation::II)
        .filter(|p| rest_ok && p.class == WordClass::Adjective)
}

fn with_polarity(mut adj: DsyntNode, clause: Polarity) -> DsyntNode {
    let p = if clause == Polarity::Neg {
        adj.features.polarity().flip()
    } else {
        adj.features.polarity()
    };
    adj.features.polarity = (p == Polarity::Neg).then_some(Polarity::Neg);
    adj
}

/// Merges two sentences sharing a subject. Copular predicates coordinate
/// their adjectives, anything else coordinates verb phrases with the second
/// subject dropped.
pub fn merge_pair(a: &DsyntTree, b: &DsyntTree) -> Option<DsyntTree> {
    if !mergeable(a) || !mergeable(b) || !same_subject(a, b) {
        return None;
    }
    if let (Some(pa), Some(pb)) = (predicate_adjective(a), predicate_adjective(b)) {
        if a.features.tense == b.features.tense {
            let mut first = with_polarity(pa.clone(), a.features.polarity());
            let mut second = with_polarity(pb.clone(), b.features.polarity());
            let nested: alloc::vec::Vec<Child> = second
                .children
                .iter()
                .filter(|c| c.rel == Relation::COORD)
                .cloned()
                .collect();
            second.children.retain(|c| c.rel != Relation::COORD);
            first.children.push(Child {
                rel: Relation::COORD,
                node: second,
            });
            first.children.extend(nested);
            let mut out = a.clone();
            out.features.polarity = None;
            if let Some(slot) = out.child_mut(Relation::II) {
                *slot = first;
            }
            return Some(out);
        }
    }
    let mut vp = b.clone();
    vp.children.retain(|c| c.rel != Relation::I);
    vp.features.punct = None;
    let mut out = a.clone();
    out.children.push(Child {
        rel: Relation::COORD,
        node: vp,
    });
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realize::{test_lexicon, Realizer};
    use crate::tree::{Cast, Number, Tense};
    use Relation::*;

    fn garden_was(adj: &str, neg: bool) -> DsyntNode {
        DsyntNode::verb("be", Tense::Past)
            .with_features(|f| f.polarity = neg.then_some(Polarity::Neg))
            .with(I, DsyntNode::noun("garden").with_ref("garden"))
            .with(II, DsyntNode::adj(adj))
    }

    fn text(t: &DsyntTree) -> alloc::string::String {
        let lex = test_lexicon();
        let cast = [crate::tree::CharacterDecl {
            id: "garden".into(),
            lexeme: "garden".into(),
            gender: crate::tree::Gender::Neut,
            number: Number::Sg,
            proper: false,
        }];
        Realizer::new(&lex, Cast(&cast)).realize(t).unwrap().text
    }

    #[test]
    fn copular_predicates_coordinate_with_polarity_per_conjunct() {
        let m = merge_pair(&garden_was("swampy", false), &garden_was("productive", true)).unwrap();
        assert_eq!(text(&m), "The garden was swampy, and not productive.");
        let m = merge_pair(&garden_was("weedy", true), &garden_was("swampy", true)).unwrap();
        assert_eq!(text(&m), "The garden was not weedy, and not swampy.");
    }

    #[test]
    fn verb_phrases_coordinate() {
        let a = DsyntNode::verb("be", Tense::Past)
            .with(I, DsyntNode::noun("gardener"))
            .with(II, DsyntNode::adj("proud"));
        let b = DsyntNode::verb("want", Tense::Past)
            .with(I, DsyntNode::noun("gardener").with(ATTR, DsyntNode::adj("eager")))
            .with(
                II,
                DsyntNode::new("reap", WordClass::Verb).with(
                    II,
                    DsyntNode::noun("lettuce").with_features(|f| f.number = Some(Number::Pl)),
                ),
            );
        let m = merge_pair(&a, &b).unwrap();
        assert_eq!(text(&m), "The gardener was proud and wanted to reap the lettuces.");
    }

    #[test]
    fn different_subjects_or_questions_do_not_merge() {
        let a = garden_was("swampy", false);
        let b = DsyntNode::verb("be", Tense::Past)
            .with(I, DsyntNode::noun("squirrel"))
            .with(II, DsyntNode::adj("crazy"));
        assert!(merge_pair(&a, &b).is_none());
        let q = garden_was("swampy", false).with_features(|f| f.mood = Some(crate::tree::Mood::Quest));
        assert!(merge_pair(&a, &q).is_none());
    }
}
