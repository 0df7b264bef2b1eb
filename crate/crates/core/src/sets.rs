//! Subsets of computable groups: a small closed language with decidable
//! membership and a deterministic enumeration.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{Element, Group, ProductElement, Subgroup};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum SubsetSpec {
    /// An explicit finite list; enumerated in the given order.
    Elements { elements: Vec<Element> },
    /// Integers `n >= 1`.
    Positives,
    /// Atoms (integers, residues, table indices) in `[min, max]`.
    Range { min: Option<i64>, max: Option<i64> },
    /// Product elements with a single non-identity coordinate, whose value is
    /// the first non-identity element of that coordinate group.
    BasisVectors,
    /// Product elements whose coordinate `index` lies in `[min, max]`.
    Coordinate { index: u32, min: Option<i64>, max: Option<i64> },
    /// Elements whose support size lies in `[min, max]`.
    SupportSize { min: usize, max: Option<usize> },
    /// `{x : by * x ∈ inner}`, i.e. `by^-1 · inner`.
    Translate { by: Element, inner: Box<SubsetSpec> },
    /// Intersection.
    All { parts: Vec<SubsetSpec> },
    /// Union.
    Any { parts: Vec<SubsetSpec> },
}

impl SubsetSpec {
    pub fn elements(elements: impl IntoIterator<Item = Element>) -> Self {
        SubsetSpec::Elements {
            elements: elements.into_iter().collect(),
        }
    }

    pub fn contains(&self, group: &Group, x: &Element) -> bool {
        if !group.is_valid(x) {
            return false;
        }
        match self {
            SubsetSpec::Elements { elements } => elements.contains(x),
            SubsetSpec::Positives => matches!(x, Element::Atom(a) if *a >= 1),
            SubsetSpec::Range { min, max } => match x {
                Element::Atom(a) => in_range(*a, *min, *max),
                Element::Tuple(_) => false,
            },
            SubsetSpec::BasisVectors => match x {
                Element::Tuple(t) => t.len() == 1 && t.entries().all(|(i, v)| first_atom(group, i) == Some(v)),
                Element::Atom(a) => first_atom(group, 1) == Some(*a),
            },
            SubsetSpec::Coordinate { index, min, max } => {
                let v = match x {
                    Element::Tuple(t) => t.get(*index),
                    Element::Atom(a) if *index == 1 => *a,
                    Element::Atom(_) => 0,
                };
                in_range(v, *min, *max)
            }
            SubsetSpec::SupportSize { min, max } => {
                let n = group.support(x).len();
                n >= *min && max.is_none_or(|m| n <= m)
            }
            SubsetSpec::Translate { by, inner } => group.is_valid(by) && inner.contains(group, &group.op(by, x)),
            SubsetSpec::All { parts } => parts.iter().all(|p| p.contains(group, x)),
            SubsetSpec::Any { parts } => parts.iter().any(|p| p.contains(group, x)),
        }
    }

    /// True when the enumeration is an explicit finite list.
    pub fn is_declared_finite(&self) -> bool {
        match self {
            SubsetSpec::Elements { .. } => true,
            SubsetSpec::Translate { inner, .. } => inner.is_declared_finite(),
            _ => false,
        }
    }

    /// `{x : b x ∈ self}`.
    pub fn translate(&self, by: Element) -> SubsetSpec {
        SubsetSpec::Translate {
            by,
            inner: Box::new(self.clone()),
        }
    }

    /// Enumerates the members of this set lying in `h`. Explicit lists keep
    /// their order; translates map the inner enumeration; basis vectors are
    /// listed by coordinate; everything else filters `h`'s enumeration.
    pub fn enumerate<'a>(&'a self, h: &'a Subgroup) -> Result<Box<dyn Iterator<Item = Element> + 'a>> {
        let group = h.ambient();
        match self {
            SubsetSpec::Elements { elements } => {
                let mut seen = HashSet::new();
                let mut items = Vec::new();
                for x in elements {
                    if !h.contains(x) {
                        return Err(Error::Scenario(format!(
                            "{} is not in the subgroup",
                            group.format_element(x)
                        )));
                    }
                    if seen.insert(x.clone()) {
                        items.push(x.clone());
                    }
                }
                Ok(Box::new(items.into_iter()))
            }
            SubsetSpec::Translate { by, inner } => {
                group.validate(by)?;
                let by_inv = group.inv(by);
                let group = group.clone();
                let it = inner.enumerate(h)?.map(move |y| group.op(&by_inv, &y));
                Ok(Box::new(it.filter(move |x| h.contains(x))))
            }
            SubsetSpec::BasisVectors => {
                if let Group::Product { family, .. } = group {
                    let limit = family.len().map(|n| n as u32).unwrap_or(u32::MAX);
                    let family = family.clone();
                    let it = (1..=limit).filter_map(move |i| {
                        let v = family.component(i)?.atom_at(1)?;
                        Some(Element::Tuple(ProductElement::from_entries([(i, v)])))
                    });
                    return Ok(Box::new(it.filter(move |x| h.contains(x))));
                }
                Ok(Box::new(h.enumerate().filter(move |x| self.contains(group, x))))
            }
            _ => Ok(Box::new(h.enumerate().filter(move |x| self.contains(group, x)))),
        }
    }
}

fn in_range(v: i64, min: Option<i64>, max: Option<i64>) -> bool {
    min.is_none_or(|m| v >= m) && max.is_none_or(|m| v <= m)
}

fn first_atom(group: &Group, index: u32) -> Option<i64> {
    match group {
        Group::Atomic(c) if index == 1 => c.atom_at(1),
        Group::Atomic(_) => None,
        Group::Product { family, .. } => family.component(index)?.atom_at(1),
    }
}
