//! Enumeration streams.
//!
//! Atomic groups list their elements by component position. Products are
//! dovetailed by level: an element whose non-identity coordinates are
//! `alpha` at position `p_alpha` (positions start at 1 for non-identity
//! values) sits on level `sum(alpha - 1 + p_alpha)`. Each level is finite and
//! is emitted in ascending lexicographic order of the position vector
//! `(p_1, p_2, ...)`.

use std::collections::{BTreeSet, VecDeque};

use super::{Component, Element, Family, Group, ProductElement};

/// An enumeration cursor. Owns a handle to its group, so several cursors over
/// one group are independent.
#[derive(Debug, Clone)]
pub struct ElementStream {
    group: Group,
    restrict: Option<BTreeSet<u32>>,
    state: State,
}

#[derive(Debug, Clone)]
enum State {
    Atomic { next: u64, end: Option<u64> },
    Product { level: u64, max_level: Option<u64>, buffer: VecDeque<ProductElement> },
}

impl ElementStream {
    pub(super) fn new(group: Group, restrict: Option<BTreeSet<u32>>) -> Self {
        let state = match &group {
            Group::Atomic(c) => {
                let full = restrict.as_ref().is_none_or(|r| r.contains(&1));
                State::Atomic {
                    next: 0,
                    end: if full { c.size() } else { Some(1) },
                }
            }
            Group::Product { family, .. } => State::Product {
                level: 0,
                max_level: max_level(family, restrict.as_ref()),
                buffer: VecDeque::new(),
            },
        };
        ElementStream { group, restrict, state }
    }

    /// True when the stream is known to end.
    pub fn is_finite(&self) -> bool {
        match &self.state {
            State::Atomic { end, .. } => end.is_some(),
            State::Product { max_level, .. } => max_level.is_some(),
        }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }
}

impl Iterator for ElementStream {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        match &mut self.state {
            State::Atomic { next, end } => {
                if end.is_some_and(|e| *next >= e) {
                    return None;
                }
                let Group::Atomic(c) = &self.group else { unreachable!() };
                let atom = c.atom_at(*next)?;
                *next += 1;
                Some(Element::Atom(atom))
            }
            State::Product { level, max_level, buffer } => {
                let Group::Product { family, .. } = &self.group else { unreachable!() };
                while buffer.is_empty() {
                    if max_level.is_some_and(|m| *level > m) {
                        return None;
                    }
                    let indices = level_indices(family, self.restrict.as_ref(), *level);
                    let mut current = Vec::new();
                    generate(family, &indices, 0, *level, &mut current, buffer);
                    *level += 1;
                }
                buffer.pop_front().map(Element::Tuple)
            }
        }
    }
}

/// Candidate coordinates that can appear on `level`, ascending.
fn level_indices(family: &Family, restrict: Option<&BTreeSet<u32>>, level: u64) -> Vec<u32> {
    let cap = level.min(u64::from(u32::MAX)) as u32;
    let upper = match family.len() {
        Some(n) => cap.min(n as u32),
        None => cap,
    };
    match restrict {
        Some(r) => r.iter().copied().filter(|&i| i >= 1 && i <= upper).collect(),
        None => (1..=upper).collect(),
    }
}

fn max_level(family: &Family, restrict: Option<&BTreeSet<u32>>) -> Option<u64> {
    let indices: Vec<u32> = match (family, restrict) {
        (_, Some(r)) => r.iter().copied().filter(|&i| family.component(i).is_some()).collect(),
        (Family::List(cs), None) => (1..=cs.len() as u32).collect(),
        (Family::Repeat(_), None) => return None,
    };
    indices.iter().try_fold(0u64, |acc, &i| {
        let size = family.component(i)?.size()?;
        Some(acc + u64::from(i) - 1 + size - 1)
    })
}

fn generate(
    family: &Family,
    indices: &[u32],
    at: usize,
    remaining: u64,
    current: &mut Vec<(u32, i64)>,
    out: &mut VecDeque<ProductElement>,
) {
    if remaining == 0 {
        out.push_back(ProductElement::from_entries(current.iter().copied()));
        return;
    }
    let Some(&alpha) = indices.get(at) else { return };
    let offset = u64::from(alpha) - 1;
    if offset + 1 > remaining {
        return;
    }
    generate(family, indices, at + 1, remaining, current, out);
    let component: &Component = family.component(alpha).expect("index within family");
    for position in 1..=(remaining - offset) {
        let Some(atom) = component.atom_at(position) else { break };
        current.push((alpha, atom));
        generate(family, indices, at + 1, remaining - offset - position, current, out);
        current.pop();
    }
}
