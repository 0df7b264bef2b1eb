use std::collections::{BTreeSet, HashSet};

use super::{Element, ElementStream, Group};
use crate::error::{Error, Result};

/// A subgroup `H` of an ambient group, with decidable membership and an
/// enumeration filtered from the ambient one.
#[derive(Debug, Clone)]
pub struct Subgroup {
    ambient: Group,
    kind: SubgroupKind,
}

#[derive(Debug, Clone)]
pub enum SubgroupKind {
    Whole,
    /// A finite subgroup, listed in ambient enumeration order.
    Listed(Vec<Element>, HashSet<Element>),
    /// The subproduct keeping exactly these coordinates.
    Coordinates(BTreeSet<u32>),
}

impl Subgroup {
    pub fn whole(ambient: Group) -> Self {
        Subgroup {
            ambient,
            kind: SubgroupKind::Whole,
        }
    }

    pub fn coordinates(ambient: Group, indices: BTreeSet<u32>) -> Self {
        Subgroup {
            ambient,
            kind: SubgroupKind::Coordinates(indices),
        }
    }

    /// A finite subgroup given by its full element list; closure under
    /// products and inverses is checked.
    pub fn listed(ambient: Group, elements: impl IntoIterator<Item = Element>) -> Result<Self> {
        let set: HashSet<Element> = elements.into_iter().collect();
        for x in &set {
            ambient.validate(x)?;
        }
        if !set.contains(&ambient.identity()) {
            return Err(Error::NotSubgroup("identity missing".into()));
        }
        for a in &set {
            if !set.contains(&ambient.inv(a)) {
                return Err(Error::NotSubgroup(format!(
                    "inverse of {} missing",
                    ambient.format_element(a)
                )));
            }
            for b in &set {
                if !set.contains(&ambient.op(a, b)) {
                    return Err(Error::NotSubgroup(format!(
                        "{} * {} missing",
                        ambient.format_element(a),
                        ambient.format_element(b)
                    )));
                }
            }
        }
        Ok(Self::from_set(ambient, set))
    }

    /// The subgroup generated by `generators`; the ambient group must be
    /// finite.
    pub fn generated(ambient: Group, generators: &[Element]) -> Result<Self> {
        if !ambient.is_finite() {
            return Err(Error::NotFinite);
        }
        for g in generators {
            ambient.validate(g)?;
        }
        let mut set = HashSet::from([ambient.identity()]);
        let mut frontier = vec![ambient.identity()];
        while let Some(x) = frontier.pop() {
            for g in generators {
                let y = ambient.op(&x, g);
                if set.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        Ok(Self::from_set(ambient, set))
    }

    fn from_set(ambient: Group, set: HashSet<Element>) -> Self {
        let mut list: Vec<Element> = set.iter().cloned().collect();
        if ambient.is_finite() {
            let order: Vec<Element> = ambient.enumerate().filter(|x| set.contains(x)).collect();
            list = order;
        } else {
            list.sort_by_key(|x| (x != &ambient.identity(), x.clone()));
        }
        Subgroup {
            ambient,
            kind: SubgroupKind::Listed(list, set),
        }
    }

    pub fn ambient(&self) -> &Group {
        &self.ambient
    }

    pub fn kind(&self) -> &SubgroupKind {
        &self.kind
    }

    pub fn contains(&self, x: &Element) -> bool {
        if !self.ambient.is_valid(x) {
            return false;
        }
        match &self.kind {
            SubgroupKind::Whole => true,
            SubgroupKind::Listed(_, set) => set.contains(x),
            SubgroupKind::Coordinates(c) => self.ambient.support(x).is_subset(c),
        }
    }

    pub fn is_finite(&self) -> bool {
        match &self.kind {
            SubgroupKind::Listed(..) => true,
            _ => self.enumerate().is_finite(),
        }
    }

    pub fn enumerate(&self) -> SubgroupStream {
        self.enumerate_within(None)
    }

    /// Enumerates `H ∩ G'` where `G'` keeps the coordinates in `indices`
    /// (all coordinates when `None`).
    pub fn enumerate_within(&self, indices: Option<&BTreeSet<u32>>) -> SubgroupStream {
        match &self.kind {
            SubgroupKind::Listed(list, _) => {
                let items: Vec<Element> = list
                    .iter()
                    .filter(|x| indices.is_none_or(|s| self.ambient.support(x).is_subset(s)))
                    .cloned()
                    .collect();
                SubgroupStream::Listed(items.into_iter())
            }
            SubgroupKind::Whole => SubgroupStream::Ambient(match indices {
                Some(s) => self.ambient.enumerate_within(s),
                None => self.ambient.enumerate(),
            }),
            SubgroupKind::Coordinates(c) => {
                let keep: BTreeSet<u32> = match indices {
                    Some(s) => s.intersection(c).copied().collect(),
                    None => c.clone(),
                };
                SubgroupStream::Ambient(self.ambient.enumerate_within(&keep))
            }
        }
    }

    /// Checks closure under products and inverses over all pairs of
    /// `samples`, returning the first failing pair.
    pub fn check_closure(&self, samples: &[Element]) -> Option<(Element, Element)> {
        let members: Vec<&Element> = samples.iter().filter(|x| self.contains(x)).collect();
        for a in &members {
            if !self.contains(&self.ambient.inv(a)) {
                return Some(((*a).clone(), (*a).clone()));
            }
            for b in &members {
                if !self.contains(&self.ambient.op(a, b)) {
                    return Some(((*a).clone(), (*b).clone()));
                }
            }
        }
        None
    }
}

/// Enumeration of a subgroup (or of its intersection with a subproduct).
#[derive(Debug, Clone)]
pub enum SubgroupStream {
    Listed(std::vec::IntoIter<Element>),
    Ambient(ElementStream),
}

impl SubgroupStream {
    pub fn is_finite(&self) -> bool {
        match self {
            SubgroupStream::Listed(_) => true,
            SubgroupStream::Ambient(s) => s.is_finite(),
        }
    }
}

impl Iterator for SubgroupStream {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        match self {
            SubgroupStream::Listed(it) => it.next(),
            SubgroupStream::Ambient(s) => s.next(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Component;

    #[test]
    fn generated_subgroup_of_s3() {
        let s3 = Group::catalog("S3").unwrap();
        let t = s3.parse_element("(1,2)").unwrap();
        let h = Subgroup::generated(s3.clone(), std::slice::from_ref(&t)).unwrap();
        assert_eq!(h.enumerate().count(), 2);
        assert!(h.contains(&t));
        assert!(!h.contains(&s3.parse_element("(1,2,3)").unwrap()));
    }

    #[test]
    fn listed_rejects_non_subgroups() {
        let z6 = Group::catalog("C6").unwrap();
        let two = z6.parse_element("2").unwrap();
        assert!(Subgroup::listed(z6.clone(), [z6.identity(), two]).is_err());
        let three = z6.parse_element("3").unwrap();
        assert!(Subgroup::listed(z6.clone(), [z6.identity(), three]).is_ok());
    }

    #[test]
    fn coordinate_subgroup_membership_is_closed() {
        let g = Group::countable_power(Component::Integers).unwrap();
        let h = Subgroup::coordinates(g.clone(), BTreeSet::from([1, 3]));
        let samples: Vec<Element> = g.enumerate().take(300).collect();
        assert!(h.check_closure(&samples).is_none());
        assert!(h.contains(&g.identity()));
        let within: Vec<Element> = h.enumerate_within(Some(&BTreeSet::from([3, 4]))).take(5).collect();
        assert!(within.iter().all(|x| g.support(x).is_subset(&BTreeSet::from([3]))));
    }
}
