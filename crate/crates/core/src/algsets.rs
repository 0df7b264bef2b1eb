//! Elementary, additively algebraic and algebraic sets in finite groups.
//!
//! A finite group has finitely many functions `x ↦ w(x)`, so the family of
//! elementary sets `{x : w(x) = 1}` is finite and can be computed as a
//! fixpoint. The algebraic closure of `A` is then exact: `y ∈ Ã` iff some
//! `a ∈ A` lies only in elementary sets that also contain `y`. Every excluded
//! `y` gets a certificate, a finite union of elementary sets that covers `A`
//! and misses `y`.
//!
//! Conventions: the empty union is additively algebraic (so `∅` is its own
//! closure), and the empty intersection is the whole group.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{Element, FiniteTable, FiniteView, Group};
use crate::words::{Letter, Sign, Word};

/// Default cap on the number of distinct word functions.
pub const DEFAULT_STATE_CAP: usize = 1_000_000;

/// A subset of a finite group, as a bitset over table indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet {
    bits: Vec<u64>,
    universe: usize,
}

impl IndexSet {
    pub fn empty(universe: usize) -> Self {
        IndexSet {
            bits: vec![0; universe.div_ceil(64).max(1)],
            universe,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for i in 0..universe {
            s.insert(i as u32);
        }
        s
    }

    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = u32>) -> Self {
        let mut s = Self::empty(universe);
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub fn insert(&mut self, i: u32) {
        assert!((i as usize) < self.universe, "index outside universe");
        self.bits[i as usize / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: u32) -> bool {
        (i as usize) < self.universe && self.bits[i as usize / 64] & (1 << (i % 64)) != 0
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.universe as u32).filter(|&i| self.contains(i))
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }
}

/// A letter of a word over a table group: the variable or a table index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TableLetter {
    Var(Sign),
    Const(u32),
}

/// The functions `G → G` realised by one-variable words, each with a
/// minimal-length witness (ties broken by the letter order `x < x^-1 <`
/// constants in table order).
#[derive(Debug, Clone)]
pub struct WordFunctionMonoid {
    view: FiniteView,
    values: Vec<Vec<u32>>,
    parent: Vec<Option<(usize, TableLetter)>>,
}

impl WordFunctionMonoid {
    /// Breadth-first fixpoint starting from the constant-identity function and
    /// closing under right multiplication by every letter.
    pub fn compute(group: &Group, cap: usize) -> Result<Self> {
        let view = group.finite_view()?;
        let t: &FiniteTable = &view.table;
        let n = t.order();
        let mut letters = vec![TableLetter::Var(Sign::Plus), TableLetter::Var(Sign::Minus)];
        letters.extend((1..n as u32).map(TableLetter::Const));

        let start = vec![0u32; n];
        let mut values = vec![start.clone()];
        let mut parent = vec![None];
        let mut index: HashMap<Vec<u32>, usize> = HashMap::from([(start, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(f) = queue.pop_front() {
            for &letter in &letters {
                let g: Vec<u32> = (0..n as u32)
                    .map(|x| {
                        let v = values[f][x as usize];
                        match letter {
                            TableLetter::Var(Sign::Plus) => t.mul(v, x),
                            TableLetter::Var(Sign::Minus) => t.mul(v, t.inv(x)),
                            TableLetter::Const(c) => t.mul(v, c),
                        }
                    })
                    .collect();
                if index.contains_key(&g) {
                    continue;
                }
                if values.len() >= cap {
                    return Err(Error::CapExceeded { what: "word-function", cap });
                }
                index.insert(g.clone(), values.len());
                queue.push_back(values.len());
                values.push(g);
                parent.push(Some((f, letter)));
            }
        }
        Ok(WordFunctionMonoid { view, values, parent })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn view(&self) -> &FiniteView {
        &self.view
    }

    /// Values of the `i`-th function, indexed by table index.
    pub fn values(&self, i: usize) -> &[u32] {
        &self.values[i]
    }

    pub fn witness(&self, i: usize) -> Word {
        let mut rev = Vec::new();
        let mut cur = i;
        while let Some((p, letter)) = self.parent[cur] {
            rev.push(match letter {
                TableLetter::Var(s) => Letter::Var(s),
                TableLetter::Const(c) => Letter::Const(self.view.element(c).clone()),
            });
            cur = p;
        }
        rev.reverse();
        Word::new(rev)
    }
}

/// All elementary algebraic sets of a finite group, deduplicated, each with
/// its minimal-length witness word.
#[derive(Debug, Clone)]
pub struct ElementaryFamily {
    group: Group,
    view: FiniteView,
    sets: Vec<IndexSet>,
    witnesses: Vec<Word>,
    functions: usize,
}

impl ElementaryFamily {
    pub fn compute(group: &Group, cap: usize) -> Result<Self> {
        let monoid = WordFunctionMonoid::compute(group, cap)?;
        let n = monoid.view.table.order();
        let mut seen: HashMap<IndexSet, usize> = HashMap::new();
        let mut sets = Vec::new();
        let mut witnesses = Vec::new();
        for f in 0..monoid.len() {
            let zeros = IndexSet::from_indices(n, (0..n as u32).filter(|&x| monoid.values(f)[x as usize] == 0));
            if !seen.contains_key(&zeros) {
                seen.insert(zeros.clone(), sets.len());
                sets.push(zeros);
                witnesses.push(monoid.witness(f));
            }
        }
        Ok(ElementaryFamily {
            group: group.clone(),
            view: monoid.view.clone(),
            sets,
            witnesses,
            functions: monoid.len(),
        })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn view(&self) -> &FiniteView {
        &self.view
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Number of distinct word functions behind the family.
    pub fn function_count(&self) -> usize {
        self.functions
    }

    pub fn sets(&self) -> impl Iterator<Item = (&IndexSet, &Word)> {
        self.sets.iter().zip(&self.witnesses)
    }

    pub fn contains_set(&self, set: &IndexSet) -> bool {
        self.sets.contains(set)
    }

    pub fn to_indices(&self, elements: &[Element]) -> Result<IndexSet> {
        let n = self.view.table.order();
        let mut s = IndexSet::empty(n);
        for x in elements {
            let i = self.view.index_of(x).ok_or_else(|| Error::InvalidElement {
                element: format!("{x:?}"),
                group: self.group.describe(),
            })?;
            s.insert(i);
        }
        Ok(s)
    }

    pub fn to_elements(&self, set: &IndexSet) -> Vec<Element> {
        set.iter().map(|i| self.view.element(i).clone()).collect()
    }

    /// The least algebraic set containing `a`, with a covering certificate
    /// for every excluded element.
    pub fn closure(&self, a: &IndexSet) -> ClosureResult {
        let n = self.view.table.order();
        let mut closure = IndexSet::empty(n);
        let mut certificates = Vec::new();
        for y in 0..n as u32 {
            let mut cover: Vec<usize> = Vec::new();
            let mut inside = false;
            for x in a.iter() {
                // first elementary set separating x from y, if any
                match self.sets.iter().position(|s| s.contains(x) && !s.contains(y)) {
                    Some(k) => {
                        if !cover.contains(&k) {
                            cover.push(k);
                        }
                    }
                    None => {
                        inside = true;
                        break;
                    }
                }
            }
            if inside {
                closure.insert(y);
            } else {
                cover.sort_unstable();
                certificates.push(Certificate {
                    excluded: self.view.element(y).clone(),
                    words: cover.iter().map(|&k| self.witnesses[k].clone()).collect(),
                });
            }
        }
        ClosureResult {
            input: self.to_elements(a),
            closure: self.to_elements(&closure),
            certificates,
        }
    }

    pub fn closure_of(&self, a: &[Element]) -> Result<ClosureResult> {
        Ok(self.closure(&self.to_indices(a)?))
    }
}

/// A finite union of elementary sets that covers the input and misses
/// `excluded`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub excluded: Element,
    pub words: Vec<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureResult {
    pub input: Vec<Element>,
    pub closure: Vec<Element>,
    pub certificates: Vec<Certificate>,
}

impl ClosureResult {
    /// Re-checks extensivity and every certificate by direct evaluation.
    pub fn verify(&self, group: &Group) -> Result<()> {
        for a in &self.input {
            if !self.closure.contains(a) {
                return Err(Error::Invariant(format!("{} missing from closure", group.format_element(a))));
            }
        }
        for cert in &self.certificates {
            for w in &cert.words {
                if group.is_identity(&w.evaluate(group, &cert.excluded)?) {
                    return Err(Error::Invariant(format!(
                        "certificate word `{}` vanishes at excluded {}",
                        w.display(group),
                        group.format_element(&cert.excluded)
                    )));
                }
            }
            for a in &self.input {
                let mut covered = false;
                for w in &cert.words {
                    if group.is_identity(&w.evaluate(group, a)?) {
                        covered = true;
                        break;
                    }
                }
                if !covered {
                    return Err(Error::Invariant(format!(
                        "certificate for {} does not cover {}",
                        group.format_element(&cert.excluded),
                        group.format_element(a)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn report(&self, group: &Group) -> ClosureReport {
        ClosureReport {
            input: self.input.iter().map(|x| group.format_element(x)).collect(),
            closure: self.closure.iter().map(|x| group.format_element(x)).collect(),
            certificates: self
                .certificates
                .iter()
                .map(|c| CertificateReport {
                    excluded: group.format_element(&c.excluded),
                    words: c.words.iter().map(|w| w.display(group)).collect(),
                })
                .collect(),
        }
    }
}

/// Serialisable form of a [`ClosureResult`]: element names and word strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct ClosureReport {
    pub input: Vec<String>,
    pub closure: Vec<String>,
    pub certificates: Vec<CertificateReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct CertificateReport {
    pub excluded: String,
    pub words: Vec<String>,
}

/// `{x : w(x) = 1}` by brute force.
pub fn elementary_solution_set(group: &Group, w: &Word) -> Result<Vec<Element>> {
    if !group.is_finite() {
        return Err(Error::NotFinite);
    }
    let mut out = Vec::new();
    for x in group.enumerate() {
        if group.is_identity(&w.evaluate(group, &x)?) {
            out.push(x);
        }
    }
    Ok(out)
}

/// `b^{-1} A` for a finite subset, i.e. `{x : b x ∈ A}`.
pub fn translate_finite(group: &Group, b: &Element, a: &[Element]) -> Result<Vec<Element>> {
    let b_inv = group.invert(b)?;
    let mut out: Vec<Element> = a.iter().map(|y| group.op(&b_inv, y)).collect();
    out.sort();
    Ok(out)
}

/// Shared handle used by callers that compute many closures over one group.
pub type SharedFamily = Arc<ElementaryFamily>;

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::words::{parse_word, WordContext};

    /// All maps `Z/n → Z/n`, closed under right multiplication by letters,
    /// found by brute-force fixpoint over the full function space.
    fn brute_force_function_count(n: usize) -> usize {
        let mut found: HashSet<Vec<usize>> = HashSet::from([vec![0; n]]);
        loop {
            let mut added = false;
            for f in found.clone() {
                let mut next = vec![
                    (0..n).map(|x| (f[x] + x) % n).collect::<Vec<_>>(),
                    (0..n).map(|x| (f[x] + n - x) % n).collect(),
                ];
                next.extend((0..n).map(|c| (0..n).map(|x| (f[x] + c) % n).collect()));
                for g in next {
                    added |= found.insert(g);
                }
            }
            if !added {
                return found.len();
            }
        }
    }

    #[test]
    fn monoid_sizes() {
        assert_eq!(WordFunctionMonoid::compute(&Group::catalog("C1").unwrap(), 100).unwrap().len(), 1);
        let z2 = WordFunctionMonoid::compute(&Group::catalog("C2").unwrap(), 100).unwrap();
        assert_eq!(z2.len(), brute_force_function_count(2));
        assert_eq!(z2.len(), 4);
        let z3 = WordFunctionMonoid::compute(&Group::catalog("C3").unwrap(), 100).unwrap();
        assert_eq!(z3.len(), brute_force_function_count(3));
        assert_eq!(z3.len(), 9);
    }

    #[test]
    fn monoid_cap_is_reported() {
        let err = WordFunctionMonoid::compute(&Group::catalog("S3").unwrap(), 10).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
    }

    #[test]
    fn witnesses_realise_their_functions() {
        let g = Group::catalog("S3").unwrap();
        let m = WordFunctionMonoid::compute(&g, DEFAULT_STATE_CAP).unwrap();
        for i in (0..m.len()).step_by(97) {
            let w = m.witness(i);
            for x in 0..6u32 {
                let v = w.evaluate(&g, m.view().element(x)).unwrap();
                assert_eq!(m.view().index_of(&v).unwrap(), m.values(i)[x as usize]);
            }
        }
    }

    #[test]
    fn solution_sets() {
        let z6 = Group::catalog("C6").unwrap();
        let ctx = WordContext::new(&z6);
        let sols = elementary_solution_set(&z6, &parse_word("x x", &ctx).unwrap()).unwrap();
        assert_eq!(sols, vec![Element::Atom(0), Element::Atom(3)]);
        let sols = elementary_solution_set(&z6, &parse_word("x 4^-1", &ctx).unwrap()).unwrap();
        assert_eq!(sols, vec![Element::Atom(4)]);
        let sols = elementary_solution_set(&z6, &parse_word("x x^-1", &ctx).unwrap()).unwrap();
        assert_eq!(sols.len(), 6);
    }

    #[test]
    fn family_contains_whole_group_and_singletons() {
        let g = Group::catalog("Q8").unwrap();
        let fam = ElementaryFamily::compute(&g, DEFAULT_STATE_CAP).unwrap();
        assert!(fam.contains_set(&IndexSet::full(8)));
        for i in 0..8 {
            assert!(fam.contains_set(&IndexSet::from_indices(8, [i])));
        }
    }

    #[test]
    fn closure_conventions() {
        let g = Group::catalog("C6").unwrap();
        let fam = ElementaryFamily::compute(&g, DEFAULT_STATE_CAP).unwrap();
        let empty = fam.closure_of(&[]).unwrap();
        assert!(empty.closure.is_empty());
        assert_eq!(empty.certificates.len(), 6);
        assert!(empty.certificates.iter().all(|c| c.words.is_empty()));
        empty.verify(&g).unwrap();
        let all: Vec<Element> = g.enumerate().collect();
        let full = fam.closure_of(&all).unwrap();
        assert_eq!(full.closure.len(), 6);
        assert!(full.certificates.is_empty());
        let pair = fam.closure_of(&[Element::Atom(1), Element::Atom(2)]).unwrap();
        assert_eq!(pair.closure, vec![Element::Atom(1), Element::Atom(2)]);
        pair.verify(&g).unwrap();
    }

    #[test]
    fn translation_of_finite_sets() {
        let z4 = Group::catalog("C4").unwrap();
        let t = translate_finite(&z4, &Element::Atom(1), &[Element::Atom(1), Element::Atom(2)]).unwrap();
        assert_eq!(t, vec![Element::Atom(0), Element::Atom(1)]);
    }
}
