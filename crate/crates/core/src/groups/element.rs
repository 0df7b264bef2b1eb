use std::collections::{BTreeMap, BTreeSet};

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

/// A group element in raw form.
///
/// Atomic groups (tables, cyclic groups, the integers) use `Atom`: a table
/// index, a residue, or an integer, with 0 always the identity. Restricted
/// products use `Tuple`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Atom(i64),
    Tuple(ProductElement),
}

impl Element {
    pub fn atom(self) -> Option<i64> {
        match self {
            Element::Atom(a) => Some(a),
            Element::Tuple(_) => None,
        }
    }
}

/// A finitely supported element of a restricted direct product: coordinate
/// index (starting at 1) to a non-identity component value.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductElement(BTreeMap<u32, i64>);

impl ProductElement {
    pub fn identity() -> Self {
        ProductElement(BTreeMap::new())
    }

    /// Builds an element from `(index, value)` entries, dropping identity
    /// values.
    pub fn from_entries(entries: impl IntoIterator<Item = (u32, i64)>) -> Self {
        ProductElement(entries.into_iter().filter(|&(_, v)| v != 0).collect())
    }

    pub fn get(&self, index: u32) -> i64 {
        self.0.get(&index).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (u32, i64)> + '_ {
        self.0.iter().map(|(&k, &v)| (k, v))
    }

    pub fn support(&self) -> BTreeSet<u32> {
        self.0.keys().copied().collect()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Drops every coordinate outside `indices`.
    pub fn project(&self, indices: &BTreeSet<u32>) -> Self {
        ProductElement(self.0.iter().filter(|(k, _)| indices.contains(k)).map(|(&k, &v)| (k, v)).collect())
    }
}

// Raw serialization: atoms as integers, tuples as arrays of [index, value].
impl Serialize for Element {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Element::Atom(a) => serializer.serialize_i64(*a),
            Element::Tuple(t) => {
                let pairs: Vec<(u32, i64)> = t.entries().collect();
                pairs.serialize(serializer)
            }
        }
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Atom(i64),
            Tuple(Vec<(u32, i64)>),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Atom(a) => Ok(Element::Atom(a)),
            Raw::Tuple(pairs) => {
                if pairs.iter().any(|&(_, v)| v == 0) {
                    return Err(de::Error::custom("tuple entries must be non-identity"));
                }
                let len = pairs.len();
                let t = ProductElement::from_entries(pairs);
                if t.len() != len {
                    return Err(de::Error::custom("duplicate tuple index"));
                }
                Ok(Element::Tuple(t))
            }
        }
    }
}
