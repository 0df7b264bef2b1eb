//! Supernormal subgroups.
//!
//! `H' ≤ H` is supernormal when every conjugation by an element of `H` is
//! also a conjugation by an element of `H'`: for each `x ∈ H` some `y ∈ H'`
//! has `x^{-1} h x = y^{-1} h y` for all `h ∈ H`.

use serde::{Deserialize, Serialize};

use crate::algsets::IndexSet;
use crate::error::{Error, Result};
use crate::groups::{Element, Group, Subgroup};

/// How much of the quantifier was checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coverage {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "result")]
pub enum Realization {
    /// `y ∈ H'` induces the same conjugation as `x`.
    Witness { x: Element, y: Element },
    /// For each `y ∈ H'`, an `h` with `x^{-1} h x ≠ y^{-1} h y`.
    Violation { x: Element, refutations: Vec<(Element, Element)> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupernormalityReport {
    pub supernormal: bool,
    pub coverage: Coverage,
    pub rows: Vec<Realization>,
}

impl SupernormalityReport {
    /// Recomputes every witness and refutation directly.
    pub fn recheck(&self, group: &Group, h: &[Element], sub: &Subgroup) -> Result<()> {
        for row in &self.rows {
            match row {
                Realization::Witness { x, y } => {
                    if !sub.contains(y) || h.iter().any(|k| group.conj(k, x) != group.conj(k, y)) {
                        return Err(Error::Invariant(format!(
                            "{} does not realise conjugation by {}",
                            group.format_element(y),
                            group.format_element(x)
                        )));
                    }
                }
                Realization::Violation { x, refutations } => {
                    for (y, k) in refutations {
                        if group.conj(k, x) == group.conj(k, y) {
                            return Err(Error::Invariant("refutation does not separate".into()));
                        }
                    }
                    let listed = refutations.len();
                    let size = sub.enumerate().count();
                    if listed != size {
                        return Err(Error::Invariant(format!(
                            "violation lists {listed} candidates for a subgroup of order {size}"
                        )));
                    }
                }
            }
        }
        if self.supernormal != self.rows.iter().all(|r| matches!(r, Realization::Witness { .. })) {
            return Err(Error::Invariant("verdict disagrees with the rows".into()));
        }
        Ok(())
    }
}

fn check_subgroup(sub: &Subgroup, elements: &[Element]) -> Result<()> {
    if let Some((a, b)) = sub.check_closure(elements) {
        return Err(Error::NotSubgroup(format!(
            "not closed at ({}, {})",
            sub.ambient().format_element(&a),
            sub.ambient().format_element(&b)
        )));
    }
    if !sub.contains(&sub.ambient().identity()) {
        return Err(Error::NotSubgroup("identity missing".into()));
    }
    Ok(())
}

/// Brute force over `xs ⊆ H`, candidates `y ∈ H'` and test elements `hs`.
pub fn realize(group: &Group, sub: &Subgroup, xs: &[Element], hs: &[Element], coverage: Coverage) -> SupernormalityReport {
    let candidates: Vec<Element> = sub.enumerate().collect();
    let mut rows = Vec::new();
    for x in xs {
        let images: Vec<Element> = hs.iter().map(|k| group.conj(k, x)).collect();
        let mut refutations = Vec::new();
        let mut found = None;
        for y in &candidates {
            match hs.iter().zip(&images).find(|(k, img)| &group.conj(k, y) != *img) {
                Some((k, _)) => refutations.push((y.clone(), k.clone())),
                None => {
                    found = Some(y.clone());
                    break;
                }
            }
        }
        rows.push(match found {
            Some(y) => Realization::Witness { x: x.clone(), y },
            None => Realization::Violation {
                x: x.clone(),
                refutations,
            },
        });
    }
    SupernormalityReport {
        supernormal: rows.iter().all(|r| matches!(r, Realization::Witness { .. })),
        coverage,
        rows,
    }
}

/// Exhaustive check in a finite group `H` (the whole ambient group).
pub fn is_supernormal_finite(sub: &Subgroup) -> Result<SupernormalityReport> {
    let group = sub.ambient();
    if !group.is_finite() {
        return Err(Error::NotFinite);
    }
    let all: Vec<Element> = group.enumerate().collect();
    check_subgroup(sub, &all)?;
    Ok(realize(group, sub, &all, &all, Coverage::Exhaustive))
}

/// The center, by brute force.
pub fn center(group: &Group) -> Result<Vec<Element>> {
    if !group.is_finite() {
        return Err(Error::NotFinite);
    }
    let all: Vec<Element> = group.enumerate().collect();
    Ok(all
        .iter()
        .filter(|z| all.iter().all(|g| group.op(z, g) == group.op(g, z)))
        .cloned()
        .collect())
}

/// `x` and `y` induce the same conjugation iff `x y^{-1}` is central, so
/// `H'` is supernormal iff `H' · Z(H) = H`.
pub fn supernormal_center_oracle(sub: &Subgroup) -> Result<bool> {
    let group = sub.ambient();
    let view = group.finite_view()?;
    let z = center(group)?;
    let mut covered = IndexSet::empty(view.table.order());
    for y in sub.enumerate() {
        for c in &z {
            let i = view.index_of(&group.op(&y, c)).expect("element of a finite group");
            covered.insert(i);
        }
    }
    Ok(covered.len() == view.table.order())
}

/// Every subgroup of a finite group, found by closing under adjoining one
/// element at a time. Ordered by size, then by membership bitset.
pub fn all_subgroups(group: &Group) -> Result<Vec<Subgroup>> {
    let view = group.finite_view()?;
    let t = &view.table;
    let n = t.order();
    let close = |mut set: IndexSet| -> IndexSet {
        let mut items: Vec<u32> = set.iter().collect();
        let mut k = 0;
        while k < items.len() {
            let a = items[k];
            for b in items.clone() {
                for c in [t.mul(a, b), t.mul(b, a)] {
                    if !set.contains(c) {
                        set.insert(c);
                        items.push(c);
                    }
                }
            }
            k += 1;
        }
        set
    };
    let trivial = IndexSet::from_indices(n, [0]);
    let mut found = vec![trivial.clone()];
    let mut frontier = vec![trivial];
    while let Some(s) = frontier.pop() {
        for g in 0..n as u32 {
            if s.contains(g) {
                continue;
            }
            let mut bigger = s.clone();
            bigger.insert(g);
            let bigger = close(bigger);
            if !found.contains(&bigger) {
                found.push(bigger.clone());
                frontier.push(bigger);
            }
        }
    }
    found.sort_by_key(|s| (s.len(), s.clone()));
    found
        .into_iter()
        .map(|s| Subgroup::listed(group.clone(), s.iter().map(|i| view.element(i).clone())))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugationWitness {
    pub x: Element,
    /// `x` projected onto the kept coordinates.
    pub y: Element,
    pub coverage: Coverage,
    /// An `h` with `x^{-1} h x ≠ y^{-1} h y`, if one was found.
    pub violation: Option<Element>,
}

impl ConjugationWitness {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

/// Tries `y = project(x, I*)` against `hs` (all of `H` when finite and
/// `hs` is `None`).
pub fn conjugation_witness(
    h: &Subgroup,
    x: &Element,
    kept: &std::collections::BTreeSet<u32>,
    hs: Option<&[Element]>,
) -> Result<ConjugationWitness> {
    let group = h.ambient();
    if !h.contains(x) {
        return Err(Error::InvalidElement {
            element: group.format_element(x),
            group: group.describe(),
        });
    }
    let y = group.project(x, kept);
    let (tests, coverage): (Vec<Element>, Coverage) = match hs {
        Some(list) => (list.to_vec(), Coverage::Sampled),
        None if h.is_finite() => (h.enumerate().collect(), Coverage::Exhaustive),
        None => return Err(Error::NotFinite),
    };
    let violation = tests
        .into_iter()
        .find(|k| group.conj(k, x) != group.conj(k, &y));
    Ok(ConjugationWitness {
        x: x.clone(),
        y,
        coverage,
        violation,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;
    use std::sync::Arc;

    use super::*;
    use crate::groups::{catalog, Component, ProductElement};

    #[test]
    fn subgroup_counts() {
        // known subgroup counts
        for (name, count) in [("C6", 4), ("S3", 6), ("V4", 5), ("D4", 10), ("Q8", 6), ("A4", 10)] {
            let g = Group::catalog(name).unwrap();
            assert_eq!(all_subgroups(&g).unwrap().len(), count, "{name}");
        }
    }

    #[test]
    fn trivial_subgroup_of_s3() {
        let g = Group::catalog("S3").unwrap();
        let trivial = Subgroup::listed(g.clone(), [g.identity()]).unwrap();
        let report = is_supernormal_finite(&trivial).unwrap();
        assert!(!report.supernormal);
        let all: Vec<Element> = g.enumerate().collect();
        report.recheck(&g, &all, &trivial).unwrap();
        assert!(!supernormal_center_oracle(&trivial).unwrap());
        assert_eq!(center(&g).unwrap(), vec![g.identity()]);
    }

    #[test]
    fn whole_group_is_supernormal() {
        let g = Group::catalog("D4").unwrap();
        let report = is_supernormal_finite(&Subgroup::whole(g.clone())).unwrap();
        assert!(report.supernormal);
        for row in &report.rows {
            let Realization::Witness { x, y } = row else { panic!() };
            let all: Vec<Element> = g.enumerate().collect();
            assert!(all.iter().all(|h| g.conj(h, x) == g.conj(h, y)));
        }
    }

    #[test]
    fn projection_fails_on_a_non_abelian_factor() {
        let s3 = Arc::new(catalog("S3").unwrap());
        let g = Group::product(vec![Component::Table(s3.clone()), Component::Table(s3.clone())]);
        let h = Subgroup::whole(g.clone());
        let t = s3.index_of("(1,2)").unwrap() as i64;
        let x = Element::Tuple(ProductElement::from_entries([(2, t)]));
        let w = conjugation_witness(&h, &x, &BTreeSet::from([1]), None).unwrap();
        assert_eq!(w.y, g.identity());
        let k = w.violation.expect("transposition is not central");
        assert_ne!(g.conj(&k, &x), k);
        let inside = Element::Tuple(ProductElement::from_entries([(1, t)]));
        let w = conjugation_witness(&h, &inside, &BTreeSet::from([1]), None).unwrap();
        assert!(w.holds());
        assert_eq!(w.y, inside);
    }

    #[test]
    fn abelian_products_always_project() {
        let g = Group::product(vec![Component::Cyclic(4), Component::Cyclic(6)]);
        let h = Subgroup::whole(g.clone());
        for x in g.enumerate() {
            assert!(conjugation_witness(&h, &x, &BTreeSet::from([2]), None).unwrap().holds());
        }
    }
}
