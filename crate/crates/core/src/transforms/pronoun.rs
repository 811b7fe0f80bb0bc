//! Salience-based pronominalization.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::realize::MorphLexicon;
use crate::state::{referent, referents_in, Referent};
use crate::tree::{Cast, CharId, DsyntNode, DsyntTree, NodePath, Person, Relation, WordClass};

/// What the reader has seen so far: referents of the last few sentences and
/// every character already introduced in the dialog.
#[derive(Clone, Debug, Default)]
pub struct SalienceContext {
    window: usize,
    history: Vec<Vec<Referent>>,
    introduced: BTreeSet<CharId>,
    /// Characters pronominalized in the current turn.
    pub pronominalized: BTreeSet<CharId>,
}

impl SalienceContext {
    pub fn new(window: usize) -> Self {
        SalienceContext {
            window,
            ..SalienceContext::default()
        }
    }

    /// Referents of the last `window` sentences, most recent first, ties in
    /// document order.
    pub fn recent(&self) -> Vec<Referent> {
        let mut out: Vec<Referent> = Vec::new();
        for refs in self.history.iter().rev().take(self.window) {
            for r in refs {
                if !out.iter().any(|o| o.id == r.id) {
                    out.push(r.clone());
                }
            }
        }
        out
    }

    pub fn is_introduced(&self, id: &str) -> bool {
        self.introduced.contains(id)
    }

    /// Records a finished sentence.
    pub fn observe(&mut self, tree: &DsyntTree, cast: Cast<'_>) {
        let refs: Vec<Referent> = referents_in(tree)
            .iter()
            .filter_map(|id| referent(cast, id))
            .collect();
        for r in &refs {
            self.introduced.insert(r.id.clone());
        }
        self.history.push(refs);
    }

    pub fn new_turn(&mut self) {
        self.pronominalized.clear();
    }
}

enum Mention {
    Head(NodePath, CharId),
    Possessor(NodePath, CharId),
}

fn mentions(tree: &DsyntNode) -> Vec<Mention> {
    let mut out = Vec::new();
    let mut skip: Vec<NodePath> = Vec::new();
    tree.walk(&mut |path, n| {
        if skip.iter().any(|s| s.is_ancestor_of(path) || s == path) {
            return;
        }
        for (i, c) in n.children.iter().enumerate() {
            if c.rel == Relation::APPEND {
                skip.push(path.child(i));
            }
        }
        if let Some(owner) = &n.features.possessor {
            out.push(Mention::Possessor(path.clone(), owner.clone()));
        }
        if n.class == WordClass::Noun {
            if let Some(id) = &n.reference {
                out.push(Mention::Head(path.clone(), id.clone()));
            }
        }
    });
    out
}

/// Replaces repeated mentions with pronouns when exactly one salient
/// referent shares the mention's gender and number. The sentence is then
/// recorded in `ctx`.
pub fn pronominalize(
    tree: &DsyntTree,
    ctx: &mut SalienceContext,
    cast: Cast<'_>,
    lexicon: &MorphLexicon,
) -> DsyntTree {
    let mut out = tree.clone();
    let mut local: Vec<Referent> = Vec::new();
    let mut replaced: Vec<NodePath> = Vec::new();
    let recent = ctx.recent();
    for m in mentions(tree) {
        let (path, id) = match &m {
            Mention::Head(p, id) | Mention::Possessor(p, id) => (p, id),
        };
        if replaced.iter().any(|r| r.is_ancestor_of(path)) {
            continue;
        }
        let Some(me) = referent(cast, id) else {
            continue;
        };
        let salient: Vec<&Referent> = {
            let mut s: Vec<&Referent> = Vec::new();
            for r in local.iter().chain(recent.iter()) {
                if !s.iter().any(|x| x.id == r.id) {
                    s.push(r);
                }
            }
            s
        };
        let rivals = salient
            .iter()
            .filter(|r| r.gender == me.gender && r.number == me.number)
            .count();
        let eligible =
            ctx.introduced.contains(id) && salient.iter().any(|r| &r.id == id) && rivals == 1;
        if eligible {
            if let Some(entry) = lexicon.pronoun(Person::Third, me.number, me.gender) {
                let node = out.get_mut(path).expect("path from walk");
                match m {
                    Mention::Head(..) => {
                        let mut p = DsyntNode::new(entry.nominative.clone(), WordClass::Pronoun);
                        p.reference = Some(id.clone());
                        // Keep markers attached to the replaced phrase.
                        p.children = node
                            .children
                            .iter()
                            .filter(|c| c.rel == Relation::APPEND)
                            .cloned()
                            .collect();
                        *node = p;
                        replaced.push(path.clone());
                    }
                    Mention::Possessor(..) => node.features.possessor_pronoun = true,
                }
                ctx.pronominalized.insert(id.clone());
            }
        }
        ctx.introduced.insert(id.clone());
        if !local.iter().any(|r| r.id == me.id) {
            local.push(me);
        }
    }
    ctx.observe(&out, cast);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realize::{test_lexicon, Realizer};
    use crate::tree::{CharacterDecl, Gender, Number, Tense};
    use alloc::string::String;
    use alloc::vec;
    use Relation::*;

    fn cast() -> Vec<CharacterDecl> {
        let c = |id: &str, g, n| CharacterDecl {
            id: id.into(),
            lexeme: id.into(),
            gender: g,
            number: n,
            proper: false,
        };
        vec![
            c("gardener", Gender::Masc, Number::Sg),
            c("farmer", Gender::Masc, Number::Sg),
            c("apple", Gender::Neut, Number::Pl),
            c("orchard", Gender::Neut, Number::Sg),
        ]
    }

    fn run(sentences: &[DsyntNode]) -> Vec<String> {
        let lex = test_lexicon();
        let cast = cast();
        let r = Realizer::new(&lex, Cast(&cast));
        let mut ctx = SalienceContext::new(2);
        sentences
            .iter()
            .map(|s| {
                let t = pronominalize(s, &mut ctx, Cast(&cast), &lex);
                r.realize(&t).unwrap().text
            })
            .collect()
    }

    fn apples() -> DsyntNode {
        DsyntNode::new("apple", WordClass::Noun).with_ref("apple")
    }

    #[test]
    fn second_mention_becomes_a_pronoun() {
        let first = DsyntNode::verb("like", Tense::Present)
            .with(I, DsyntNode::noun("gardener").with_ref("gardener"))
            .with(
                II,
                DsyntNode::new("eat", WordClass::Verb).with(II, apples()).with(
                    ATTR,
                    DsyntNode::new("from", WordClass::Preposition).with(
                        II,
                        DsyntNode::new("orchard", WordClass::Noun)
                            .with_ref("orchard")
                            .with_features(|f| f.possessor = Some("gardener".into())),
                    ),
                ),
            );
        let second = DsyntNode::verb("be", Tense::Present)
            .with(I, apples().with_features(|f| f.article = Some(crate::tree::Article::Def)))
            .with(II, DsyntNode::adj("red"));
        assert_eq!(
            run(&[first, second]),
            ["The gardener likes to eat apples from his orchard.", "They are red."]
        );
    }

    #[test]
    fn ambiguity_and_first_mention_block() {
        let s = |who: &str| {
            DsyntNode::verb("smile", Tense::Past).with(I, DsyntNode::noun(who).with_ref(who))
        };
        let both = DsyntNode::verb("see", Tense::Past)
            .with(I, DsyntNode::noun("gardener").with_ref("gardener"))
            .with(II, DsyntNode::noun("farmer").with_ref("farmer"));
        let out = run(&[both, s("gardener")]);
        assert_eq!(out[1], "The gardener smiled.");
        let out = run(&[s("gardener"), s("gardener")]);
        assert_eq!(out, ["The gardener smiled.", "He smiled."]);
    }
}
