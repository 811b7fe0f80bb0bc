//! Pragmatic markers as `APPEND` nodes.

use alloc::string::String;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::personality::FeatureId;
use crate::tree::{Child, DsyntNode, DsyntTree, Mood, NodePath, Relation, Separator, Slot, WordClass};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Constraint {
    #[default]
    None,
    /// Some adjective, predicative preferred.
    RequiresAdjective,
    /// An adjective modifying a noun.
    RequiresAttributiveAdjective,
    RequiresDeclarative,
}

impl Constraint {
    pub fn id(self) -> &'static str {
        match self {
            Constraint::None => "none",
            Constraint::RequiresAdjective => "requires-adjective",
            Constraint::RequiresAttributiveAdjective => "requires-attributive-adjective",
            Constraint::RequiresDeclarative => "requires-declarative",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkerSpec {
    pub id: String,
    pub surface: String,
    pub slot: Slot,
    #[serde(default = "default_separator")]
    pub separator: Separator,
    #[serde(default)]
    pub constraint: Constraint,
    pub group: String,
    /// Feature that selects this marker; `None` for markers used only by
    /// elaborations.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feature: Option<FeatureId>,
}

fn default_separator() -> Separator {
    Separator::Comma
}

impl MarkerSpec {
    pub fn new(id: &str, surface: &str, slot: Slot, separator: Separator, constraint: Constraint) -> Self {
        MarkerSpec {
            id: id.into(),
            surface: surface.into(),
            slot,
            separator,
            constraint,
            group: "internal".into(),
            feature: None,
        }
    }

    /// Slot and constraint agree, and the group matches the feature's.
    pub fn is_consistent(&self) -> bool {
        let adjective = matches!(
            self.constraint,
            Constraint::RequiresAdjective | Constraint::RequiresAttributiveAdjective
        );
        let slot_ok = match self.slot {
            Slot::PreAdjective => adjective,
            Slot::Tag => false,
            _ => !adjective,
        };
        slot_ok
            && !self.surface.trim().is_empty()
            && self.feature.is_none_or(|f| f.group() == self.group)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintViolation {
    pub marker: String,
    /// Name of the failed predicate, e.g. `requires-adjective`.
    pub predicate: &'static str,
}

impl fmt::Display for ConstraintViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "marker `{}` violates {}", self.marker, self.predicate)
    }
}

fn is_declarative(t: &DsyntNode) -> bool {
    t.is_verb()
        && !t.is_interrogative()
        && !t.features.truncated
        && matches!(t.features.mood, None | Some(Mood::Decl))
}

fn free_adjective(n: &DsyntNode) -> bool {
    n.class == WordClass::Adjective && !n.has_append(Slot::PreAdjective)
}

/// First attributive adjective outside `APPEND` material.
fn attributive_target(tree: &DsyntNode) -> Option<NodePath> {
    let mut found = None;
    let mut skip: alloc::vec::Vec<NodePath> = alloc::vec::Vec::new();
    tree.walk(&mut |path, n| {
        if found.is_some() || skip.iter().any(|s| s.is_ancestor_of(path) || s == path) {
            return;
        }
        for (i, c) in n.children.iter().enumerate() {
            if c.rel == Relation::APPEND {
                skip.push(path.child(i));
            }
            if c.rel == Relation::ATTR && n.class.is_nominal() && free_adjective(&c.node) {
                found = Some(path.child(i));
                return;
            }
        }
    });
    found
}

fn predicate_target(tree: &DsyntNode) -> Option<NodePath> {
    if !tree.is_copula() {
        return None;
    }
    let i = tree.children.iter().position(|c| c.rel == Relation::II)?;
    let pred = &tree.children[i].node;
    free_adjective(pred).then(|| NodePath::root().child(i))
}

/// Node the marker would attach to, or the failed predicate.
pub fn marker_target(tree: &DsyntTree, spec: &MarkerSpec) -> Result<NodePath, &'static str> {
    match spec.constraint {
        Constraint::RequiresDeclarative if !is_declarative(tree) => {
            return Err(Constraint::RequiresDeclarative.id())
        }
        _ => {}
    }
    match spec.slot {
        Slot::SentenceInitial => Ok(NodePath::root()),
        Slot::SentenceFinal => {
            if tree.has_append(Slot::SentenceFinal) || tree.features.truncated {
                Err("slot-free")
            } else {
                Ok(NodePath::root())
            }
        }
        Slot::PreVerb => {
            if !tree.is_verb() || tree.features.tense.is_none() {
                Err("requires-verb")
            } else if tree.has_append(Slot::PreVerb) {
                Err("slot-free")
            } else {
                Ok(NodePath::root())
            }
        }
        Slot::PreAdjective => {
            let target = match spec.constraint {
                Constraint::RequiresAttributiveAdjective => attributive_target(tree),
                _ => predicate_target(tree).or_else(|| attributive_target(tree)),
            };
            target.ok_or(spec.constraint.id())
        }
        Slot::Tag => Err("slot-free"),
    }
}

/// The `APPEND` node a spec inserts.
pub fn marker_node(spec: &MarkerSpec) -> DsyntNode {
    DsyntNode::new(spec.surface.clone(), WordClass::Adverb).with_features(|f| {
        f.slot = Some(spec.slot);
        f.sep = Some(spec.separator);
    })
}

pub fn insert_marker(tree: &DsyntTree, spec: &MarkerSpec) -> Result<DsyntTree, ConstraintViolation> {
    let target = marker_target(tree, spec).map_err(|predicate| ConstraintViolation {
        marker: spec.id.clone(),
        predicate,
    })?;
    let mut out = tree.clone();
    let node = out.get_mut(&target).expect("target from marker_target");
    node.children.push(Child {
        rel: Relation::APPEND,
        node: marker_node(spec),
    });
    Ok(out)
}
