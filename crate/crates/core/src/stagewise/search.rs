//! Exhaustive search for a multiplicative function that vanishes at
//! `(c_1, ..., c_{m-1}, x)` but not at `(c_1, ..., c_{m-1}, 1)`.
//!
//! Both evaluations are carried along one path as a pair `(v, z)`: a letter
//! on a fixed argument `c` multiplies both sides by `c^±1`, a letter on the
//! last argument multiplies only `v` by `x^±1`. A hit is a pair
//! `(1, z)` with `z ≠ 1`. Layers are expanded in letter order
//! `(1,+) < (1,-) < (2,+) < ...` and each pair is kept at its first
//! discovery, so the reported witness is the shortest one and, among those,
//! the lexicographically least.

use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::groups::{Element, Group};
use crate::words::{MultiplicativeFunction, Sign};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub witness: Option<MultiplicativeFunction>,
    /// Distinct pairs stored during the search.
    pub states: usize,
}

pub fn paired_search(
    group: &Group,
    fixed: &[Element],
    x: &Element,
    max_len: usize,
    cap: usize,
) -> Result<SearchOutcome> {
    let m = fixed.len() + 1;
    let mut letters: Vec<(usize, Sign, Element, bool)> = Vec::with_capacity(2 * m);
    for (i, c) in fixed.iter().chain(std::iter::once(x)).enumerate() {
        let last = i + 1 == m;
        letters.push((i + 1, Sign::Plus, c.clone(), last));
        letters.push((i + 1, Sign::Minus, group.inv(c), last));
    }

    let e = group.identity();
    let mut pairs: Vec<(Element, Element)> = vec![(e.clone(), e.clone())];
    let mut parent: Vec<(u32, u8)> = vec![(0, 0)];
    let mut seen: FxHashSet<(Element, Element)> = FxHashSet::default();
    seen.insert((e.clone(), e));
    let mut layer = 0..1usize;

    for depth in 1..=max_len {
        let end = pairs.len();
        for idx in layer.clone() {
            for (li, (_, _, c, last)) in letters.iter().enumerate() {
                let (v, z) = &pairs[idx];
                let nv = group.op(v, c);
                let nz = if *last { z.clone() } else { group.op(z, c) };
                if group.is_identity(&nv) && !group.is_identity(&nz) {
                    let mut path = vec![li as u8];
                    let mut cur = idx;
                    while cur != 0 {
                        let (p, l) = parent[cur];
                        path.push(l);
                        cur = p as usize;
                    }
                    path.reverse();
                    let word = path.iter().map(|&l| (letters[l as usize].0, letters[l as usize].1)).collect();
                    return Ok(SearchOutcome {
                        witness: Some(MultiplicativeFunction::new(m, word)?),
                        states: pairs.len(),
                    });
                }
                if depth == max_len {
                    continue;
                }
                let key = (nv, nz);
                if seen.contains(&key) {
                    continue;
                }
                if pairs.len() >= cap {
                    return Err(Error::CapExceeded { what: "paired-search state", cap });
                }
                seen.insert(key.clone());
                pairs.push(key);
                parent.push((idx as u32, li as u8));
            }
        }
        layer = end..pairs.len();
        if layer.is_empty() {
            break;
        }
    }
    Ok(SearchOutcome {
        witness: None,
        states: pairs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::enumerate_mfs;

    /// Direct route: try every function in enumeration order.
    fn first_by_enumeration(group: &Group, fixed: &[Element], x: &Element, max_len: usize) -> Option<MultiplicativeFunction> {
        let mut at_x: Vec<Element> = fixed.to_vec();
        at_x.push(x.clone());
        let mut at_one: Vec<Element> = fixed.to_vec();
        at_one.push(group.identity());
        enumerate_mfs(fixed.len() + 1, max_len).find(|phi| {
            group.is_identity(&phi.evaluate(group, &at_x).unwrap()) && !group.is_identity(&phi.evaluate(group, &at_one).unwrap())
        })
    }

    #[test]
    fn integer_stage_one() {
        let z = Group::integers();
        let a1 = [Element::Atom(1)];
        let hit = paired_search(&z, &a1, &Element::Atom(2), 5, 1 << 20).unwrap();
        assert_eq!(hit.witness.unwrap().to_string(), "#1 #1 #2^-1");
        let miss = paired_search(&z, &a1, &Element::Atom(5), 5, 1 << 20).unwrap();
        assert!(miss.witness.is_none());
        let one = paired_search(&z, &a1, &Element::Atom(0), 5, 1 << 20).unwrap();
        assert!(one.witness.is_none());
    }

    #[test]
    fn agrees_with_plain_enumeration_in_s3() {
        let g = Group::catalog("S3").unwrap();
        let all: Vec<Element> = g.enumerate().collect();
        for c in &all[1..] {
            for x in &all {
                let fast = paired_search(&g, std::slice::from_ref(c), x, 4, 1 << 20).unwrap().witness;
                assert_eq!(fast, first_by_enumeration(&g, std::slice::from_ref(c), x, 4), "{c:?} {x:?}");
            }
        }
    }

    #[test]
    fn agrees_with_plain_enumeration_on_integers() {
        let z = Group::integers();
        let fixed = [Element::Atom(2), Element::Atom(-3)];
        for x in -6..=6 {
            let x = Element::Atom(x);
            let fast = paired_search(&z, &fixed, &x, 4, 1 << 20).unwrap().witness;
            assert_eq!(fast, first_by_enumeration(&z, &fixed, &x, 4), "{x:?}");
        }
    }

    #[test]
    fn cap_is_reported() {
        let z = Group::integers();
        let err = paired_search(&z, &[Element::Atom(1), Element::Atom(7)], &Element::Atom(1000), 10, 50).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
    }
}
