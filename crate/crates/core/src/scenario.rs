//! TOML scenario files.
//!
//! ```toml
//! version = 1
//!
//! [group]
//! kind = "integers"
//!
//! [set]
//! kind = "positives"
//!
//! [construct]
//! stages = 3
//! ```
//!
//! Elements are written as strings in the group's literal syntax (`"5"`,
//! `"(1,2)"`, `"(1:1,3:2)"`) or as names from the `[elements]` table.

use std::collections::{BTreeMap, HashMap};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::groups::{Component, Element, FiniteTable, Group, Subgroup};
use crate::seminorm::SeminormSpec;
use crate::sets::SubsetSpec;
use crate::stagewise::{Instance, Policy};

pub const SCENARIO_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub version: u32,
    pub group: GroupDef,
    #[serde(default)]
    pub elements: BTreeMap<String, String>,
    #[serde(default)]
    pub subgroup: Option<SubgroupDef>,
    #[serde(default)]
    pub set: Option<SetDef>,
    #[serde(default)]
    pub policy: PolicyDef,
    #[serde(default)]
    pub construct: ConstructDef,
    #[serde(default)]
    pub verify: Option<VerifyDef>,
    #[serde(default)]
    pub supernormal: Option<SupernormalDef>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", deny_unknown_fields)]
pub enum GroupDef {
    Integers,
    Cyclic { order: u32 },
    Catalog { name: String },
    /// Rows of the Cayley table as element names; the identity row/column
    /// must be present but need not come first.
    Table { name: Option<String>, elements: Vec<String>, table: Vec<Vec<String>> },
    /// Generators as image lists of the points `1..=degree`.
    Permutations { name: Option<String>, degree: usize, generators: Vec<Vec<usize>> },
    FgAbelian { rank: usize, #[serde(default)] torsion: Vec<u32> },
    /// A finite list of components, or countably many copies of the single
    /// listed component when `repeat` is set.
    Product { components: Vec<GroupDef>, #[serde(default)] repeat: bool },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", deny_unknown_fields)]
pub enum SubgroupDef {
    Whole,
    Coordinates { indices: Vec<u32> },
    Generated { generators: Vec<String> },
    Elements { elements: Vec<String> },
    /// Every subgroup of a finite group, one after another.
    All,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", deny_unknown_fields)]
pub enum SetDef {
    Elements { elements: Vec<String> },
    Positives,
    Range { min: Option<i64>, max: Option<i64> },
    BasisVectors,
    Coordinate { index: u32, min: Option<i64>, max: Option<i64> },
    SupportSize { min: usize, max: Option<usize> },
    Translate { by: String, inner: Box<SetDef> },
    All { parts: Vec<SetDef> },
    Any { parts: Vec<SetDef> },
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyDef {
    pub state_cap: Option<usize>,
    pub scan_budget: Option<usize>,
    pub settled_cap: Option<usize>,
    pub monoid_cap: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructDef {
    pub stages: Option<usize>,
    /// Elements listed in the report's numbering prefix.
    pub materialize: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyDef {
    pub p: Vec<usize>,
    pub q: Vec<usize>,
    pub trunc: Option<usize>,
    /// Size of the numbered sample used for the axiom and filter-base checks.
    pub samples: Option<usize>,
    /// Second spec for the filter-base check; defaults to `p = [0], q = [1]`.
    pub other_p: Option<Vec<usize>>,
    pub other_q: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupernormalDef {
    pub subgroup: SubgroupDef,
    /// For infinite groups: the first `samples` elements serve as both the
    /// tested `x` and the tested `h`.
    pub samples: Option<usize>,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self> {
        let s: Scenario = toml::from_str(text).map_err(|e| Error::Scenario(e.to_string()))?;
        if s.version != SCENARIO_VERSION {
            return Err(Error::Scenario(format!(
                "scenario version {} is not supported (expected {SCENARIO_VERSION})",
                s.version
            )));
        }
        for (field, v) in [
            ("state_cap", s.policy.state_cap),
            ("scan_budget", s.policy.scan_budget),
            ("settled_cap", s.policy.settled_cap),
            ("monoid_cap", s.policy.monoid_cap),
        ] {
            if v == Some(0) {
                return Err(Error::Scenario(format!("policy.{field} must be positive")));
            }
        }
        Ok(s)
    }

    pub fn load(path: &std::path::Path) -> Result<(Self, Vec<u8>)> {
        let bytes = std::fs::read(path)?;
        let text = std::str::from_utf8(&bytes).map_err(|e| Error::Scenario(e.to_string()))?;
        Ok((Self::parse(text)?, bytes))
    }
}

/// A scenario with every name resolved.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub group: Group,
    pub named: HashMap<String, Element>,
    pub scenario: Scenario,
}

impl Resolved {
    pub fn new(scenario: Scenario) -> Result<Self> {
        let group = build_group(&scenario.group)?;
        let mut named = HashMap::new();
        for (name, literal) in &scenario.elements {
            let x = group.parse_element(literal).map_err(|e| {
                Error::Scenario(format!("element `{name}` = `{literal}`: {e}"))
            })?;
            named.insert(name.clone(), x);
        }
        Ok(Resolved { group, named, scenario })
    }

    pub fn element(&self, text: &str) -> Result<Element> {
        if let Some(x) = self.named.get(text) {
            return Ok(x.clone());
        }
        self.group
            .parse_element(text)
            .map_err(|_| Error::UnknownElement(text.to_string()))
    }

    pub fn elements(&self, texts: &[String]) -> Result<Vec<Element>> {
        texts.iter().map(|t| self.element(t)).collect()
    }

    pub fn subgroup(&self, def: Option<&SubgroupDef>) -> Result<Subgroup> {
        let g = self.group.clone();
        match def {
            None | Some(SubgroupDef::Whole) => Ok(Subgroup::whole(g)),
            Some(SubgroupDef::Coordinates { indices }) => {
                Ok(Subgroup::coordinates(g, indices.iter().copied().collect()))
            }
            Some(SubgroupDef::Generated { generators }) => Subgroup::generated(g, &self.elements(generators)?),
            Some(SubgroupDef::Elements { elements }) => Subgroup::listed(g, self.elements(elements)?),
            Some(SubgroupDef::All) => Err(Error::Scenario("`all` is only meaningful for the supernormal command".into())),
        }
    }

    pub fn set(&self, def: &SetDef) -> Result<SubsetSpec> {
        Ok(match def {
            SetDef::Elements { elements } => SubsetSpec::Elements {
                elements: self.elements(elements)?,
            },
            SetDef::Positives => SubsetSpec::Positives,
            SetDef::Range { min, max } => SubsetSpec::Range { min: *min, max: *max },
            SetDef::BasisVectors => SubsetSpec::BasisVectors,
            SetDef::Coordinate { index, min, max } => SubsetSpec::Coordinate {
                index: *index,
                min: *min,
                max: *max,
            },
            SetDef::SupportSize { min, max } => SubsetSpec::SupportSize { min: *min, max: *max },
            SetDef::Translate { by, inner } => SubsetSpec::Translate {
                by: self.element(by)?,
                inner: Box::new(self.set(inner)?),
            },
            SetDef::All { parts } => SubsetSpec::All {
                parts: parts.iter().map(|p| self.set(p)).collect::<Result<_>>()?,
            },
            SetDef::Any { parts } => SubsetSpec::Any {
                parts: parts.iter().map(|p| self.set(p)).collect::<Result<_>>()?,
            },
        })
    }

    pub fn target_set(&self) -> Result<SubsetSpec> {
        let def = self
            .scenario
            .set
            .as_ref()
            .ok_or_else(|| Error::Scenario("missing [set] section".into()))?;
        self.set(def)
    }

    pub fn policy(&self, budget: Option<usize>) -> Policy {
        let d = Policy::default();
        Policy {
            state_cap: self.scenario.policy.state_cap.unwrap_or(d.state_cap),
            scan_budget: budget.or(self.scenario.policy.scan_budget).unwrap_or(d.scan_budget),
        }
    }

    pub fn instance(&self, budget: Option<usize>) -> Result<Instance> {
        let h = self.subgroup(self.scenario.subgroup.as_ref())?;
        let a = self.target_set()?;
        if let SubsetSpec::Elements { elements } = &a {
            if let Some(x) = elements.iter().find(|x| !h.contains(x)) {
                return Err(Error::Scenario(format!(
                    "{} is in the set but not in the subgroup",
                    self.group.format_element(x)
                )));
            }
        }
        Ok(Instance::new(h, a).with_policy(self.policy(budget)))
    }

    /// The verify spec, with command-line overrides applied.
    pub fn seminorm_spec(&self, p: Option<Vec<usize>>, q: Option<Vec<usize>>, trunc: Option<usize>) -> Result<SeminormSpec> {
        let def = self.scenario.verify.as_ref();
        let p = p.or_else(|| def.map(|d| d.p.clone()));
        let q = q.or_else(|| def.map(|d| d.q.clone()));
        let (Some(p), Some(q)) = (p, q) else {
            return Err(Error::Scenario("a seminorm needs both p and q (flags or [verify])".into()));
        };
        let trunc = trunc.or_else(|| def.and_then(|d| d.trunc)).unwrap_or(1);
        SeminormSpec::new(p, q, trunc)
    }
}

fn component_of(def: &GroupDef) -> Result<Component> {
    match build_group(def)? {
        Group::Atomic(c) => Ok(c),
        Group::Product { .. } => Err(Error::InvalidGroup("product components must be atomic groups".into())),
    }
}

pub fn build_group(def: &GroupDef) -> Result<Group> {
    match def {
        GroupDef::Integers => Ok(Group::integers()),
        GroupDef::Cyclic { order } => Group::cyclic(*order),
        GroupDef::Catalog { name } => {
            Group::catalog(name).ok_or_else(|| Error::InvalidGroup(format!("no catalog group named `{name}`")))
        }
        GroupDef::Table { name, elements, table } => {
            let index: HashMap<&str, usize> = elements.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
            if index.len() != elements.len() {
                return Err(Error::InvalidGroup("repeated element name in table".into()));
            }
            let rows = table
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|cell| {
                            index
                                .get(cell.as_str())
                                .copied()
                                .ok_or_else(|| Error::InvalidGroup(format!("unknown table entry `{cell}`")))
                        })
                        .collect::<Result<Vec<usize>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let t = FiniteTable::new(name.clone().unwrap_or_else(|| "table".into()), elements.clone(), rows)?;
            Ok(Group::table(t))
        }
        GroupDef::Permutations { name, degree, generators } => {
            let gens = generators
                .iter()
                .map(|g| {
                    g.iter()
                        .map(|&p| {
                            p.checked_sub(1)
                                .ok_or_else(|| Error::InvalidGroup("permutation points start at 1".into()))
                        })
                        .collect::<Result<Vec<usize>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let t = FiniteTable::from_permutations(name.clone().unwrap_or_else(|| "perm".into()), *degree, &gens)?;
            Ok(Group::table(t))
        }
        GroupDef::FgAbelian { rank, torsion } => Group::fg_abelian(*rank, torsion),
        GroupDef::Product { components, repeat } => {
            let cs: Vec<Component> = components.iter().map(component_of).collect::<Result<_>>()?;
            if *repeat {
                let [c] = <[Component; 1]>::try_from(cs)
                    .map_err(|_| Error::InvalidGroup("a repeated product takes exactly one component".into()))?;
                Group::countable_power(c)
            } else if cs.is_empty() {
                Err(Error::InvalidGroup("a product needs at least one component".into()))
            } else {
                Ok(Group::product(cs))
            }
        }
    }
}
