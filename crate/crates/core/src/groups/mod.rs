//! Computable groups: finite tables, cyclic groups, the integers, finitely
//! generated abelian groups and restricted direct products.
//!
//! Every group has decidable equality (structural comparison of
//! [`Element`]s) and a fixed enumeration order that starts at the identity
//! and reaches every element after finitely many steps. Downstream choices
//! (the first non-identity element, the first element of a set outside a
//! union of solution sets) are taken with respect to this order, so it is
//! part of the group's definition.
//!
//! Non-product groups behave as a product with a single coordinate, index 1,
//! so supports and projections have one meaning everywhere.

mod element;
mod enumerate;
mod subgroup;
mod table;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

pub use element::{Element, ProductElement};
pub use enumerate::ElementStream;
pub use subgroup::{Subgroup, SubgroupKind};
pub use table::{catalog, FiniteTable, CATALOG};

use crate::error::{Error, ParseError, Result};

/// A group whose elements are single integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Component {
    Table(Arc<FiniteTable>),
    Cyclic(u32),
    Integers,
}

impl Component {
    pub fn size(&self) -> Option<u64> {
        match self {
            Component::Table(t) => Some(t.order() as u64),
            Component::Cyclic(n) => Some(u64::from(*n)),
            Component::Integers => None,
        }
    }

    pub fn is_valid(&self, a: i64) -> bool {
        match self {
            Component::Table(t) => (0..t.order() as i64).contains(&a),
            Component::Cyclic(n) => (0..i64::from(*n)).contains(&a),
            Component::Integers => true,
        }
    }

    #[inline]
    pub fn op(&self, a: i64, b: i64) -> i64 {
        match self {
            Component::Table(t) => i64::from(t.mul(a as u32, b as u32)),
            Component::Cyclic(n) => (a + b) % i64::from(*n),
            Component::Integers => a.checked_add(b).expect("integer overflow in group arithmetic"),
        }
    }

    #[inline]
    pub fn inv(&self, a: i64) -> i64 {
        match self {
            Component::Table(t) => i64::from(t.inv(a as u32)),
            Component::Cyclic(n) => (i64::from(*n) - a) % i64::from(*n),
            Component::Integers => -a,
        }
    }

    /// The element at `position` in this component's enumeration: table
    /// order, residues ascending, or `0, 1, -1, 2, -2, ...` for the integers.
    pub fn atom_at(&self, position: u64) -> Option<i64> {
        match self {
            Component::Integers => {
                let p = position as i64;
                Some(if p % 2 == 1 { (p + 1) / 2 } else { -p / 2 })
            }
            _ => (position < self.size().unwrap_or(0)).then_some(position as i64),
        }
    }

    pub fn format_atom(&self, a: i64) -> String {
        match self {
            Component::Table(t) if self.is_valid(a) => t.element_name(a as u32).to_string(),
            _ => a.to_string(),
        }
    }

    pub fn parse_atom(&self, text: &str) -> Option<i64> {
        match self {
            Component::Table(t) => t.index_of(text).map(i64::from),
            Component::Cyclic(_) | Component::Integers => text.parse::<i64>().ok().filter(|&a| self.is_valid(a)),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Component::Table(t) => t.name().to_string(),
            Component::Cyclic(n) => format!("Z/{n}"),
            Component::Integers => "Z".to_string(),
        }
    }
}

/// The coordinate groups of a restricted product: finitely many listed
/// components, or countably many copies of one component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    List(Vec<Component>),
    Repeat(Component),
}

impl Family {
    pub fn component(&self, index: u32) -> Option<&Component> {
        match self {
            Family::List(cs) => index.checked_sub(1).and_then(|i| cs.get(i as usize)),
            Family::Repeat(c) => (index >= 1).then_some(c),
        }
    }

    pub fn len(&self) -> Option<usize> {
        match self {
            Family::List(cs) => Some(cs.len()),
            Family::Repeat(_) => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupKind {
    FiniteTable,
    Integers,
    FgAbelian,
    RestrictedProduct,
}

/// A computable group.
///
/// Cheap to clone; all large data sits behind `Arc`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Group {
    Atomic(Component),
    Product { family: Family, kind: GroupKind },
}

impl Group {
    pub fn integers() -> Self {
        Group::Atomic(Component::Integers)
    }

    pub fn table(t: FiniteTable) -> Self {
        Group::Atomic(Component::Table(Arc::new(t)))
    }

    pub fn cyclic(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("cyclic group of order 0".into()));
        }
        Ok(Group::Atomic(Component::Cyclic(n)))
    }

    pub fn catalog(name: &str) -> Option<Self> {
        catalog(name).map(Group::table)
    }

    /// `Z^rank x Z/t_1 x ... x Z/t_k`, coordinates in that order.
    pub fn fg_abelian(rank: usize, torsion: &[u32]) -> Result<Self> {
        if torsion.iter().any(|&t| t < 2) {
            return Err(Error::InvalidGroup("torsion orders must be at least 2".into()));
        }
        let mut cs = vec![Component::Integers; rank];
        cs.extend(torsion.iter().map(|&t| Component::Cyclic(t)));
        Ok(Group::Product {
            family: Family::List(cs),
            kind: GroupKind::FgAbelian,
        })
    }

    /// Restricted product of finitely many components.
    pub fn product(components: Vec<Component>) -> Self {
        Group::Product {
            family: Family::List(components),
            kind: GroupKind::RestrictedProduct,
        }
    }

    /// Restricted product of countably many copies of `component`.
    pub fn countable_power(component: Component) -> Result<Self> {
        if component.size() == Some(1) {
            return Err(Error::InvalidGroup("countable power of the trivial group".into()));
        }
        Ok(Group::Product {
            family: Family::Repeat(component),
            kind: GroupKind::RestrictedProduct,
        })
    }

    pub fn kind(&self) -> GroupKind {
        match self {
            Group::Atomic(Component::Integers) => GroupKind::Integers,
            Group::Atomic(_) => GroupKind::FiniteTable,
            Group::Product { kind, .. } => *kind,
        }
    }

    pub fn identity(&self) -> Element {
        match self {
            Group::Atomic(_) => Element::Atom(0),
            Group::Product { .. } => Element::Tuple(ProductElement::identity()),
        }
    }

    pub fn is_identity(&self, x: &Element) -> bool {
        match x {
            Element::Atom(a) => *a == 0,
            Element::Tuple(t) => t.is_identity(),
        }
    }

    /// The component at coordinate `index`; for atomic groups only index 1.
    pub fn component(&self, index: u32) -> Option<&Component> {
        match self {
            Group::Atomic(c) => (index == 1).then_some(c),
            Group::Product { family, .. } => family.component(index),
        }
    }

    pub fn order(&self) -> Option<u64> {
        match self {
            Group::Atomic(c) => c.size(),
            Group::Product { family: Family::List(cs), .. } => cs.iter().try_fold(1u64, |acc, c| acc.checked_mul(c.size()?)),
            Group::Product { family: Family::Repeat(_), .. } => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    pub fn is_valid(&self, x: &Element) -> bool {
        match (self, x) {
            (Group::Atomic(c), Element::Atom(a)) => c.is_valid(*a),
            (Group::Product { family, .. }, Element::Tuple(t)) => {
                t.entries().all(|(i, v)| v != 0 && family.component(i).is_some_and(|c| c.is_valid(v)))
            }
            _ => false,
        }
    }

    pub fn validate(&self, x: &Element) -> Result<()> {
        if self.is_valid(x) {
            Ok(())
        } else {
            Err(Error::InvalidElement {
                element: format!("{x:?}"),
                group: self.describe(),
            })
        }
    }

    /// Product of two elements already known to belong to this group.
    pub fn op(&self, a: &Element, b: &Element) -> Element {
        match (self, a, b) {
            (Group::Atomic(c), Element::Atom(x), Element::Atom(y)) => Element::Atom(c.op(*x, *y)),
            (Group::Product { family, .. }, Element::Tuple(x), Element::Tuple(y)) => {
                if x.is_identity() {
                    return b.clone();
                }
                if y.is_identity() {
                    return a.clone();
                }
                let support: BTreeSet<u32> = x.support().union(&y.support()).copied().collect();
                Element::Tuple(ProductElement::from_entries(support.into_iter().map(|i| {
                    let c = family.component(i).expect("index within family");
                    (i, c.op(x.get(i), y.get(i)))
                })))
            }
            _ => panic!("element kind does not match group {}", self.describe()),
        }
    }

    /// Inverse of an element already known to belong to this group.
    pub fn inv(&self, a: &Element) -> Element {
        match (self, a) {
            (Group::Atomic(c), Element::Atom(x)) => Element::Atom(c.inv(*x)),
            (Group::Product { family, .. }, Element::Tuple(x)) => Element::Tuple(ProductElement::from_entries(
                x.entries().map(|(i, v)| (i, family.component(i).expect("index within family").inv(v))),
            )),
            _ => panic!("element kind does not match group {}", self.describe()),
        }
    }

    /// Checked product.
    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        self.validate(a)?;
        self.validate(b)?;
        if let (Group::Atomic(Component::Integers), Element::Atom(x), Element::Atom(y)) = (self, a, b) {
            return x.checked_add(*y).map(Element::Atom).ok_or(Error::Overflow);
        }
        Ok(self.op(a, b))
    }

    /// Checked inverse.
    pub fn invert(&self, a: &Element) -> Result<Element> {
        self.validate(a)?;
        if let Element::Atom(i64::MIN) = a {
            if self.kind() == GroupKind::Integers {
                return Err(Error::Overflow);
            }
        }
        Ok(self.inv(a))
    }

    /// `a^{-1} x a`.
    pub fn conj(&self, x: &Element, a: &Element) -> Element {
        self.op(&self.op(&self.inv(a), x), a)
    }

    /// Coordinates where `x` is not the identity.
    pub fn support(&self, x: &Element) -> BTreeSet<u32> {
        match x {
            Element::Atom(0) => BTreeSet::new(),
            Element::Atom(_) => BTreeSet::from([1]),
            Element::Tuple(t) => t.support(),
        }
    }

    /// Keeps the coordinates of `x` inside `indices`.
    pub fn project(&self, x: &Element, indices: &BTreeSet<u32>) -> Element {
        match x {
            Element::Atom(_) if indices.contains(&1) => x.clone(),
            Element::Atom(_) => Element::Atom(0),
            Element::Tuple(t) => Element::Tuple(t.project(indices)),
        }
    }

    /// The enumeration stream: injective, identity first, every element at a
    /// finite position.
    pub fn enumerate(&self) -> ElementStream {
        ElementStream::new(self.clone(), None)
    }

    /// Enumeration of the subproduct keeping the coordinates in `indices` and
    /// trivialising the rest, in the same relative order as [`enumerate`].
    ///
    /// [`enumerate`]: Group::enumerate
    pub fn enumerate_within(&self, indices: &BTreeSet<u32>) -> ElementStream {
        ElementStream::new(self.clone(), Some(indices.clone()))
    }

    pub fn format_element(&self, x: &Element) -> String {
        match (self, x) {
            (Group::Atomic(c), Element::Atom(a)) => c.format_atom(*a),
            (Group::Product { family, .. }, Element::Tuple(t)) => {
                let parts: Vec<String> = t
                    .entries()
                    .map(|(i, v)| match family.component(i) {
                        Some(c) => format!("{i}:{}", c.format_atom(v)),
                        None => format!("{i}:?{v}"),
                    })
                    .collect();
                format!("({})", parts.join(","))
            }
            _ => format!("{x:?}"),
        }
    }

    /// Parses the literal produced by [`format_element`]. Product elements are
    /// written `(i:v,j:w)` with `()` for the identity.
    ///
    /// [`format_element`]: Group::format_element
    pub fn parse_element(&self, text: &str) -> Result<Element, ParseError> {
        match self {
            Group::Atomic(c) => c
                .parse_atom(text)
                .map(Element::Atom)
                .ok_or_else(|| ParseError::new(0, format!("`{text}` is not an element of {}", c.label()))),
            Group::Product { family, .. } => {
                let inner = text
                    .strip_prefix('(')
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(|| ParseError::new(0, "product element must be parenthesised"))?;
                let mut entries = Vec::new();
                let mut offset = 1;
                for part in split_top_level(inner) {
                    let (idx, value) = part
                        .split_once(':')
                        .ok_or_else(|| ParseError::new(offset, "expected `index:value`"))?;
                    let idx: u32 = idx.trim().parse().map_err(|_| ParseError::new(offset, "bad coordinate index"))?;
                    let c = family
                        .component(idx)
                        .ok_or_else(|| ParseError::new(offset, format!("no coordinate {idx}")))?;
                    let v = c
                        .parse_atom(value.trim())
                        .ok_or_else(|| ParseError::new(offset + part.find(':').unwrap_or(0) + 1, "bad coordinate value"))?;
                    if entries.iter().any(|&(i, _)| i == idx) {
                        return Err(ParseError::new(offset, format!("coordinate {idx} repeated")));
                    }
                    entries.push((idx, v));
                    offset += part.len() + 1;
                }
                Ok(Element::Tuple(ProductElement::from_entries(entries)))
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Group::Atomic(c) => c.label(),
            Group::Product { family: Family::List(cs), .. } => {
                let parts: Vec<String> = cs.iter().map(Component::label).collect();
                format!("[{}]", parts.join(" x "))
            }
            Group::Product { family: Family::Repeat(c), .. } => format!("(+){}", c.label()),
        }
    }

    /// Materialises a finite group as a table, together with the element
    /// behind each table index (index order = enumeration order).
    pub fn finite_view(&self) -> Result<FiniteView> {
        let order = self.order().ok_or(Error::NotFinite)?;
        if let Group::Atomic(Component::Table(t)) = self {
            let elements = (0..t.order() as i64).map(Element::Atom).collect();
            return Ok(FiniteView::from_parts(t.clone(), elements));
        }
        if order > 4096 {
            return Err(Error::CapExceeded { what: "finite view order", cap: 4096 });
        }
        let elements: Vec<Element> = self.enumerate().collect();
        let index: HashMap<&Element, usize> = elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let table = elements
            .iter()
            .map(|a| elements.iter().map(|b| index[&self.op(a, b)]).collect())
            .collect();
        let names = elements.iter().map(|e| self.format_element(e)).collect();
        let t = FiniteTable::new(self.describe(), names, table)?;
        Ok(FiniteView::from_parts(Arc::new(t), elements))
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    if s.trim().is_empty() {
        return Vec::new();
    }
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

/// A finite group as a table plus the map between table indices and
/// elements of the original group.
#[derive(Debug, Clone)]
pub struct FiniteView {
    pub table: Arc<FiniteTable>,
    pub elements: Vec<Element>,
    index: HashMap<Element, u32>,
}

impl FiniteView {
    fn from_parts(table: Arc<FiniteTable>, elements: Vec<Element>) -> Self {
        let index = elements.iter().enumerate().map(|(i, e)| (e.clone(), i as u32)).collect();
        FiniteView { table, elements, index }
    }

    pub fn index_of(&self, x: &Element) -> Option<u32> {
        self.index.get(x).copied()
    }

    pub fn element(&self, i: u32) -> &Element {
        &self.elements[i as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuple(entries: &[(u32, i64)]) -> Element {
        Element::Tuple(ProductElement::from_entries(entries.iter().copied()))
    }

    #[test]
    fn integer_arithmetic() {
        let z = Group::integers();
        assert_eq!(z.multiply(&Element::Atom(3), &Element::Atom(4)).unwrap(), Element::Atom(7));
        assert_eq!(z.invert(&Element::Atom(5)).unwrap(), Element::Atom(-5));
        assert_eq!(z.invert(&z.identity()).unwrap(), z.identity());
        assert!(matches!(z.multiply(&Element::Atom(i64::MAX), &Element::Atom(1)), Err(Error::Overflow)));
    }

    #[test]
    fn identity_law_everywhere() {
        let groups = [
            Group::integers(),
            Group::catalog("S3").unwrap(),
            Group::fg_abelian(1, &[2, 3]).unwrap(),
            Group::countable_power(Component::Cyclic(2)).unwrap(),
        ];
        for g in &groups {
            for a in g.enumerate().take(20) {
                assert_eq!(g.multiply(&a, &g.identity()).unwrap(), a);
                assert_eq!(g.multiply(&g.identity(), &a).unwrap(), a);
            }
        }
    }

    #[test]
    fn z6_table_product() {
        let z6 = Group::catalog("C6").unwrap();
        let four = z6.parse_element("4").unwrap();
        let five = z6.parse_element("5").unwrap();
        assert_eq!(z6.format_element(&z6.multiply(&four, &five).unwrap()), "3");
    }

    #[test]
    fn product_inversion_componentwise() {
        let g = Group::product(vec![Component::Cyclic(2), Component::Cyclic(3)]);
        let x = tuple(&[(2, 2)]);
        assert_eq!(g.invert(&x).unwrap(), tuple(&[(2, 1)]));
    }

    #[test]
    fn invalid_elements_rejected() {
        let g = Group::product(vec![Component::Cyclic(2), Component::Cyclic(3)]);
        assert!(g.multiply(&tuple(&[(3, 1)]), &g.identity()).is_err());
        assert!(g.multiply(&tuple(&[(1, 2)]), &g.identity()).is_err());
        assert!(g.multiply(&Element::Atom(1), &g.identity()).is_err());
        assert!(Group::catalog("S3").unwrap().invert(&Element::Atom(6)).is_err());
    }

    #[test]
    fn support_of_product() {
        let g = Group::product(vec![Component::Integers, Component::Integers, Component::Integers]);
        let a = tuple(&[(1, 2), (2, 1)]);
        let b = tuple(&[(1, -2), (3, 1)]);
        let ab = g.op(&a, &b);
        assert_eq!(ab, tuple(&[(2, 1), (3, 1)]));
        assert!(g.support(&ab).is_subset(&g.support(&a).union(&g.support(&b)).copied().collect()));
    }

    #[test]
    fn projection_of_atoms() {
        let z = Group::integers();
        assert_eq!(z.project(&Element::Atom(5), &BTreeSet::from([1])), Element::Atom(5));
        assert_eq!(z.project(&Element::Atom(5), &BTreeSet::new()), Element::Atom(0));
        let g = Group::product(vec![Component::Integers; 3]);
        assert_eq!(g.project(&tuple(&[(1, 4), (3, -1)]), &BTreeSet::from([1])), tuple(&[(1, 4)]));
    }

    #[test]
    fn element_literals_roundtrip() {
        let g = Group::product(vec![Component::Table(Arc::new(catalog("S3").unwrap())), Component::Integers]);
        for x in g.enumerate().take(50) {
            let text = g.format_element(&x);
            assert_eq!(g.parse_element(&text).unwrap(), x, "{text}");
        }
        assert_eq!(g.format_element(&g.identity()), "()");
        assert!(g.parse_element("(3:1)").is_err());
        assert!(g.parse_element("1:1").is_err());
    }

    #[test]
    fn finite_view_of_product() {
        let g = Group::product(vec![Component::Cyclic(2), Component::Cyclic(3)]);
        let view = g.finite_view().unwrap();
        assert_eq!(view.table.order(), 6);
        assert!(view.table.is_abelian());
        assert_eq!(view.element(0), &g.identity());
    }
}
