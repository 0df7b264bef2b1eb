//! The numbering `i ↦ a_i` of the countable set being built.
//!
//! The numbering is an append-only event log. `Place` puts one element at a
//! position, `Vacate` frees a position whose element is about to move, and
//! `Layer` assigns the newly covered elements of a subproduct (in
//! enumeration order) to every second currently free position. A layer may
//! be infinite, so positions are resolved lazily by replaying the log.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{Element, Group, Subgroup};

/// Cap on how far a single lookup may walk into a layer's enumeration.
pub const LAYER_SCAN_CAP: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "event")]
pub enum NumberingEvent {
    Place { position: u64, element: Element },
    Vacate { position: u64 },
    /// Elements of `H` supported in `indices` but not in `previous`, minus
    /// everything placed earlier. `count` is `None` for an infinite layer.
    Layer {
        stage: usize,
        indices: BTreeSet<u32>,
        previous: Option<BTreeSet<u32>>,
        count: Option<u64>,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Numbering {
    events: Vec<NumberingEvent>,
}

impl Numbering {
    pub fn events(&self) -> &[NumberingEvent] {
        &self.events
    }

    pub fn place(&mut self, position: u64, element: Element) -> Result<()> {
        if !self.is_free(position) {
            return Err(Error::Invariant(format!("position {position} is already occupied")));
        }
        self.events.push(NumberingEvent::Place { position, element });
        Ok(())
    }

    pub fn vacate(&mut self, position: u64) -> Result<()> {
        if self.is_free(position) {
            return Err(Error::Invariant(format!("position {position} is not occupied")));
        }
        self.events.push(NumberingEvent::Vacate { position });
        Ok(())
    }

    /// Appends a layer covering `indices`. The layer is empty, and skipped,
    /// when `indices` equals the previous layer's.
    pub fn add_layer(&mut self, h: &Subgroup, stage: usize, indices: BTreeSet<u32>) -> Result<()> {
        let previous = self.last_layer_indices();
        if previous.as_ref() == Some(&indices) {
            return Ok(());
        }
        let placed = self.placed_elements(self.events.len());
        let count = {
            let stream = h.enumerate_within(Some(&indices));
            if stream.is_finite() {
                let group = h.ambient();
                let mut n = 0u64;
                for x in stream {
                    if layer_keeps(group, &x, previous.as_ref(), &placed) {
                        n += 1;
                    }
                }
                Some(n)
            } else {
                None
            }
        };
        self.events.push(NumberingEvent::Layer {
            stage,
            indices,
            previous,
            count,
        });
        Ok(())
    }

    fn last_layer_indices(&self) -> Option<BTreeSet<u32>> {
        self.events.iter().rev().find_map(|e| match e {
            NumberingEvent::Layer { indices, .. } => Some(indices.clone()),
            _ => None,
        })
    }

    fn placed_elements(&self, upto: usize) -> Vec<Element> {
        self.events[..upto]
            .iter()
            .filter_map(|e| match e {
                NumberingEvent::Place { element, .. } => Some(element.clone()),
                _ => None,
            })
            .collect()
    }

    /// Number of positions below `q` free after the first `upto` events.
    fn free_below(&self, upto: usize, q: u64) -> u64 {
        let mut c = q;
        for e in &self.events[..upto] {
            match e {
                NumberingEvent::Place { position, .. } => c -= u64::from(*position < q),
                NumberingEvent::Vacate { position } => c += u64::from(*position < q),
                NumberingEvent::Layer { count, .. } => {
                    let taken = c.div_ceil(2);
                    c -= count.map_or(taken, |k| taken.min(k));
                }
            }
        }
        c
    }

    /// The free position of rank `r` after the first `upto` events.
    fn nth_free(&self, upto: usize, r: u64) -> u64 {
        let mut hi = (r + 1).max(1);
        while self.free_below(upto, hi) <= r {
            hi = hi.saturating_mul(2);
        }
        let mut lo = 0;
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.free_below(upto, mid + 1) > r {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        lo
    }

    pub fn is_free(&self, position: u64) -> bool {
        let n = self.events.len();
        self.free_below(n, position + 1) > self.free_below(n, position)
    }

    /// Which event currently owns `position`, as `(event index, slot)` where
    /// `slot` is the element's index within a layer.
    fn owner(&self, position: u64) -> Option<(usize, u64)> {
        let mut owner = None;
        for (k, e) in self.events.iter().enumerate() {
            match e {
                NumberingEvent::Place { position: p, .. } if *p == position => owner = Some((k, 0)),
                NumberingEvent::Vacate { position: p } if *p == position => owner = None,
                NumberingEvent::Layer { count, .. } if owner.is_none() => {
                    let below = self.free_below(k, position);
                    let free = self.free_below(k, position + 1) > below;
                    if free && below.is_multiple_of(2) && count.is_none_or(|c| below / 2 < c) {
                        owner = Some((k, below / 2));
                    }
                }
                _ => {}
            }
        }
        owner
    }

    /// The element at `position`, if any.
    pub fn element_at(&self, h: &Subgroup, position: u64) -> Result<Option<Element>> {
        let Some((k, slot)) = self.owner(position) else {
            return Ok(None);
        };
        match &self.events[k] {
            NumberingEvent::Place { element, .. } => Ok(Some(element.clone())),
            NumberingEvent::Layer { .. } => {
                let mut it = self.layer_stream(h, k)?;
                let x = it.nth(slot as usize).ok_or_else(|| {
                    Error::Invariant(format!("layer ended before slot {slot}"))
                })?;
                Ok(Some(x))
            }
            NumberingEvent::Vacate { .. } => unreachable!(),
        }
    }

    fn layer_stream<'a>(&self, h: &'a Subgroup, k: usize) -> Result<Box<dyn Iterator<Item = Element> + 'a>> {
        let NumberingEvent::Layer { indices, previous, .. } = &self.events[k] else {
            return Err(Error::Invariant("not a layer".into()));
        };
        let placed = self.placed_elements(k);
        let previous = previous.clone();
        let group = h.ambient();
        Ok(Box::new(
            h.enumerate_within(Some(indices))
                .take(LAYER_SCAN_CAP)
                .filter(move |x| layer_keeps(group, x, previous.as_ref(), &placed)),
        ))
    }

    /// The current position of `x`, if numbered.
    pub fn position_of(&self, h: &Subgroup, x: &Element) -> Result<Option<u64>> {
        let group = h.ambient();
        let mut candidate = None;
        for (k, e) in self.events.iter().enumerate() {
            match e {
                NumberingEvent::Place { position, element } if element == x => candidate = Some(*position),
                NumberingEvent::Layer { indices, previous, count, .. } if candidate.is_none() => {
                    let support = group.support(x);
                    let fresh = previous.as_ref().is_none_or(|p| !support.is_subset(p));
                    if !h.contains(x) || !support.is_subset(indices) || !fresh {
                        continue;
                    }
                    let slot = self
                        .layer_stream(h, k)?
                        .position(|y| &y == x)
                        .ok_or(Error::CapExceeded {
                            what: "layer scan",
                            cap: LAYER_SCAN_CAP,
                        })? as u64;
                    if count.is_some_and(|c| slot >= c) {
                        continue;
                    }
                    candidate = Some(self.nth_free(k, 2 * slot));
                }
                _ => {}
            }
        }
        match candidate {
            Some(p) if self.owner(p).is_some() => Ok(Some(p)),
            _ => Ok(None),
        }
    }

    /// The first `bound` numbered elements, in position order.
    pub fn materialize(&self, h: &Subgroup, bound: usize) -> Result<Vec<(u64, Element)>> {
        let limit = self.position_limit();
        type Stream<'s> = (Box<dyn Iterator<Item = Element> + 's>, Vec<Element>);
        let mut streams: HashMap<usize, Stream<'_>> = HashMap::new();
        let mut out = Vec::new();
        let mut p = 0u64;
        while out.len() < bound && limit.is_none_or(|l| p < l) {
            if let Some((k, slot)) = self.owner(p) {
                let x = match &self.events[k] {
                    NumberingEvent::Place { element, .. } => element.clone(),
                    _ => {
                        let entry = match streams.entry(k) {
                            std::collections::hash_map::Entry::Occupied(o) => o.into_mut(),
                            std::collections::hash_map::Entry::Vacant(v) => {
                                v.insert((self.layer_stream(h, k)?, Vec::new()))
                            }
                        };
                        while entry.1.len() as u64 <= slot {
                            let y = entry.0.next().ok_or_else(|| {
                                Error::Invariant(format!("layer ended before slot {slot}"))
                            })?;
                            entry.1.push(y);
                        }
                        entry.1[slot as usize].clone()
                    }
                };
                out.push((p, x));
            }
            p += 1;
        }
        Ok(out)
    }

    /// One past the largest position that can be occupied, or `None` when
    /// some layer is infinite.
    fn position_limit(&self) -> Option<u64> {
        let mut limit = 0;
        for (k, e) in self.events.iter().enumerate() {
            match e {
                NumberingEvent::Place { position, .. } => limit = limit.max(position + 1),
                NumberingEvent::Layer { count: None, .. } => return None,
                NumberingEvent::Layer { count: Some(0), .. } => {}
                NumberingEvent::Layer { count: Some(c), .. } => limit = limit.max(self.nth_free(k, 2 * (c - 1)) + 1),
                NumberingEvent::Vacate { .. } => {}
            }
        }
        Some(limit)
    }
}

fn layer_keeps(group: &Group, x: &Element, previous: Option<&BTreeSet<u32>>, placed: &[Element]) -> bool {
    previous.is_none_or(|p| !group.support(x).is_subset(p)) && !placed.contains(x)
}
