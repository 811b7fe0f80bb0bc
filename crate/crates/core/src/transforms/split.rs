//! Deaggregation of long sentences.

use alloc::vec::Vec;

use crate::tree::{validate_tree, DsyntNode, DsyntTree, Relation, WordClass};

/// Subordinators whose clause may be detached.
pub const SPLIT_SUBORDINATORS: &[&str] = &["because"];

/// Splits a tree with more than `max_nodes` nodes into standalone sentences
/// in surface order. Once a tree qualifies it is fully deaggregated, so
/// nested subordinate clauses come out as separate sentences too.
pub fn split_long(tree: &DsyntTree, max_nodes: usize) -> Vec<DsyntTree> {
    if tree.node_count() <= max_nodes {
        return alloc::vec![tree.clone()];
    }
    let parts = deaggregate(tree);
    if parts.len() < 2 || parts.iter().any(|p| !validate_tree(p).is_empty()) {
        return alloc::vec![tree.clone()];
    }
    parts
}

fn is_detachable_subordinate(c: &crate::tree::Child) -> bool {
    c.rel == Relation::ATTR
        && c.node.class == WordClass::Conjunction
        && SPLIT_SUBORDINATORS.contains(&c.node.lexeme.as_str())
        && c.node
            .child(Relation::II)
            .is_some_and(|v| v.is_verb() && v.features.tense.is_some())
}

fn is_detachable_conjunct(c: &crate::tree::Child) -> bool {
    c.rel == Relation::COORD && c.node.is_verb() && c.node.features.tense.is_some()
}

fn deaggregate(tree: &DsyntNode) -> Vec<DsyntNode> {
    if !tree.is_verb() || tree.features.tense.is_none() {
        return alloc::vec![tree.clone()];
    }
    let mut main = tree.clone();
    let mut detached: Vec<DsyntNode> = Vec::new();
    let subject = tree.child(Relation::I).cloned();
    main.children.retain(|c| {
        if is_detachable_subordinate(c) {
            detached.push(c.node.child(Relation::II).cloned().expect("checked by is_detachable_subordinate"));
            false
        } else if is_detachable_conjunct(c) {
            let mut clause = c.node.clone();
            if clause.child(Relation::I).is_none() {
                if let Some(s) = &subject {
                    clause.children.insert(
                        0,
                        crate::tree::Child {
                            rel: Relation::I,
                            node: s.clone(),
                        },
                    );
                }
            }
            detached.push(clause);
            false
        } else {
            true
        }
    });
    if detached.is_empty() {
        return alloc::vec![main];
    }
    let mut out = deaggregate(&main);
    for d in detached {
        out.extend(deaggregate(&d));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realize::{test_lexicon, Realizer};
    use crate::tree::{Cast, Tense};
    use alloc::string::String;
    use Relation::*;

    fn because(clause: DsyntNode) -> DsyntNode {
        DsyntNode::new("because", WordClass::Conjunction).with(II, clause)
    }

    fn texts(trees: &[DsyntTree]) -> Vec<String> {
        let lex = test_lexicon();
        let r = Realizer::new(&lex, Cast::empty());
        trees.iter().map(|t| r.realize(t).unwrap().text).collect()
    }

    #[test]
    fn because_clause_becomes_its_own_sentence() {
        let t = DsyntNode::verb("be", Tense::Past)
            .with(I, DsyntNode::noun("garden"))
            .with(II, DsyntNode::adj("swampy").with(ATTR, DsyntNode::new("very", WordClass::Adverb)))
            .with(ATTR, because(DsyntNode::verb("rain", Tense::Past)));
        assert_eq!(
            texts(&split_long(&t, 4)),
            ["The garden was very swampy.", "It rained."]
        );
        assert_eq!(split_long(&t, 20), alloc::vec![t]);
    }

    #[test]
    fn nested_subordinators_split_twice() {
        let squirrel = || DsyntNode::noun("squirrel");
        let t = DsyntNode::verb("fall", Tense::Past)
            .with(I, squirrel().with(ATTR, DsyntNode::adj("crazy")))
            .with(
                ATTR,
                DsyntNode::new("over", WordClass::Preposition).with(II, DsyntNode::noun("railing")),
            )
            .with(
                ATTR,
                because(
                    DsyntNode::verb("leap", Tense::Past).with(I, squirrel()).with(
                        ATTR,
                        because(
                            DsyntNode::verb("be", Tense::Past)
                                .with(I, squirrel())
                                .with(II, DsyntNode::adj("startled")),
                        ),
                    ),
                ),
            );
        assert_eq!(
            texts(&split_long(&t, 10)),
            [
                "The crazy squirrel fell over the railing.",
                "The squirrel leaped.",
                "The squirrel was startled."
            ]
        );
    }

    #[test]
    fn coordinated_clauses_get_the_subject_copied() {
        let t = DsyntNode::verb("be", Tense::Past)
            .with(I, DsyntNode::noun("gardener"))
            .with(II, DsyntNode::adj("proud"))
            .with(COORD, DsyntNode::verb("plan", Tense::Past).with(
                II,
                DsyntNode::new("rest", WordClass::Verb),
            ));
        assert_eq!(
            texts(&split_long(&t, 3)),
            ["The gardener was proud.", "The gardener planned to rest."]
        );
    }
}
