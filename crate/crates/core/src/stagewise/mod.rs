//! The staged construction.
//!
//! Stage `j` works with the numbered elements `a_1, ..., a_j`, the chosen
//! elements `x_1, ..., x_{j-1}` and the set `B_j` of all `x ∈ H` solving some
//! multiplicative function `Φ` of length `< 3(j+1)` with `2j` arguments for
//! which `Φ(a_1, ..., a_j, x_1, ..., x_{j-1}, 1) ≠ 1`. It picks the first
//! element of `A` outside `B_j` as `x_j`. When a finite `A` lies entirely in
//! `B_j`, the witnesses form a refutation: finitely many solution sets cover
//! `A` and all miss the identity.

mod numbering;
mod search;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use numbering::{Numbering, NumberingEvent, LAYER_SCAN_CAP};
pub use search::{paired_search, SearchOutcome};

use crate::error::{Error, Result};
use crate::groups::{Element, Group, Subgroup};
use crate::sets::SubsetSpec;
use crate::words::MultiplicativeFunction;

pub const SNAPSHOT_VERSION: u32 = 1;

/// The frozen selection rules, recorded in every snapshot.
pub const SELECTION_POLICY: &str =
    "a1=first-non-identity; xj=first-of-A-outside-Bj; alpha=append-new-support-ascending; numbering=interleave-even-free-ranks";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Policy {
    /// Distinct pairs allowed in one paired search.
    pub state_cap: usize,
    /// Candidates of `A` examined per stage before giving up.
    pub scan_budget: usize,
}

impl Default for Policy {
    fn default() -> Self {
        Policy {
            state_cap: 20_000_000,
            scan_budget: 1_000_000,
        }
    }
}

/// A subgroup `H` and a subset `A ⊆ H` with `1 ∉ A`.
#[derive(Debug, Clone)]
pub struct Instance {
    pub h: Subgroup,
    pub a: SubsetSpec,
    pub policy: Policy,
}

impl Instance {
    pub fn new(h: Subgroup, a: SubsetSpec) -> Self {
        Instance {
            h,
            a,
            policy: Policy::default(),
        }
    }

    pub fn with_policy(mut self, policy: Policy) -> Self {
        self.policy = policy;
        self
    }

    pub fn group(&self) -> &Group {
        self.h.ambient()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveredCandidate {
    pub element: Element,
    pub witness: MultiplicativeFunction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: usize,
    pub chosen: Element,
    /// Earlier candidates of `A`, each in `B_j` with its witness.
    pub covered: Vec<CoveredCandidate>,
    /// Distinct pairs explored proving `chosen ∉ B_j`.
    pub states: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageState {
    pub version: u32,
    pub policy_descriptor: String,
    pub policy: Policy,
    /// Completed stages.
    pub stage: usize,
    /// `a_0, ..., a_{stage+1}`; these positions never change again.
    pub numbered: Vec<Element>,
    /// `x_1, ..., x_stage`.
    pub chosen: Vec<Element>,
    /// `α_1, ..., α_{n_stage}`.
    pub alpha: Vec<u32>,
    /// `n_1, ..., n_stage`.
    pub alpha_len: Vec<usize>,
    pub numbering: Numbering,
    pub records: Vec<StageRecord>,
}

impl StageState {
    pub fn a(&self, i: usize) -> Option<&Element> {
        self.numbered.get(i)
    }

    pub fn x(&self, i: usize) -> Option<&Element> {
        i.checked_sub(1).and_then(|k| self.chosen.get(k))
    }

    pub fn alpha_set(&self) -> BTreeSet<u32> {
        self.alpha.iter().copied().collect()
    }

    /// `a_1, ..., a_j, x_1, ..., x_{j-1}`: the fixed arguments at stage `j`.
    pub fn stage_arguments(&self, j: usize) -> Result<Vec<Element>> {
        if j == 0 || j > self.stage + 1 {
            return Err(Error::InsufficientStages {
                required: j.saturating_sub(1),
                completed: self.stage,
            });
        }
        let mut args: Vec<Element> = self.numbered[1..=j].to_vec();
        args.extend_from_slice(&self.chosen[..j - 1]);
        Ok(args)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: StageState = serde_json::from_str(text)?;
        if s.version != SNAPSHOT_VERSION {
            return Err(Error::Snapshot(format!(
                "snapshot version {} is not supported (expected {SNAPSHOT_VERSION})",
                s.version
            )));
        }
        if s.policy_descriptor != SELECTION_POLICY {
            return Err(Error::Snapshot("snapshot was produced under a different selection policy".into()));
        }
        Ok(s)
    }
}

/// `a_0 = 1`, `a_1` = first non-identity element of `H`.
pub fn init_state(inst: &Instance) -> Result<StageState> {
    let group = inst.group();
    let e = group.identity();
    if inst.a.contains(group, &e) {
        return Err(Error::IdentityInSet);
    }
    let a1 = inst.h.enumerate().find(|y| !group.is_identity(y)).ok_or(Error::TrivialGroup)?;
    let mut numbering = Numbering::default();
    numbering.place(0, e.clone())?;
    numbering.place(1, a1.clone())?;
    Ok(StageState {
        version: SNAPSHOT_VERSION,
        policy_descriptor: SELECTION_POLICY.to_string(),
        policy: inst.policy,
        stage: 0,
        alpha: group.support(&a1).into_iter().collect(),
        numbered: vec![e, a1],
        chosen: Vec::new(),
        alpha_len: Vec::new(),
        numbering,
        records: Vec::new(),
    })
}

/// Longest function length admitted at stage `j`.
pub fn stage_max_len(j: usize) -> usize {
    3 * (j + 1) - 1
}

/// Decides `x ∈ B_j` exactly; the witness is the shortest, then
/// lexicographically least, admissible function.
pub fn membership(inst: &Instance, state: &StageState, j: usize, x: &Element) -> Result<SearchOutcome> {
    if !inst.h.contains(x) {
        return Err(Error::InvalidElement {
            element: format!("{x:?}"),
            group: "H".into(),
        });
    }
    let args = state.stage_arguments(j)?;
    paired_search(inst.group(), &args, x, stage_max_len(j), inst.policy.state_cap)
}

/// Finitely many functions whose solution sets cover `A`, none of which
/// vanishes at the identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureRefutation {
    pub stage: usize,
    /// `a_1, ..., a_j, x_1, ..., x_{j-1}`.
    pub arguments: Vec<Element>,
    pub functions: Vec<MultiplicativeFunction>,
    /// Each element of `A` with the index of a function it solves.
    pub cover: Vec<(Element, usize)>,
}

impl ClosureRefutation {
    /// Re-checks by evaluation only: `Φ(args, 1) ≠ 1` for every `Φ`, and
    /// every listed element of `A` solves its function. When `a` is given,
    /// the cover must be exactly its enumeration.
    pub fn recheck(&self, group: &Group, a: Option<&[Element]>) -> Result<()> {
        let mut at = self.arguments.clone();
        at.push(group.identity());
        for phi in &self.functions {
            if group.is_identity(&phi.evaluate(group, &at)?) {
                return Err(Error::Invariant(format!("`{phi}` vanishes at the identity")));
            }
        }
        for (y, k) in &self.cover {
            let phi = self
                .functions
                .get(*k)
                .ok_or_else(|| Error::Invariant(format!("cover refers to missing function {k}")))?;
            *at.last_mut().expect("non-empty") = y.clone();
            if !group.is_identity(&phi.evaluate(group, &at)?) {
                return Err(Error::Invariant(format!(
                    "{} does not solve `{phi}`",
                    group.format_element(y)
                )));
            }
        }
        if let Some(a) = a {
            let covered: BTreeSet<&Element> = self.cover.iter().map(|(y, _)| y).collect();
            let wanted: BTreeSet<&Element> = a.iter().collect();
            if covered != wanted {
                return Err(Error::Invariant("cover does not match A".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StageOutcome {
    Advanced(Box<StageState>),
    Refuted(ClosureRefutation),
    /// The scan budget ran out on an `A` not known to be finite.
    Inconclusive { stage: usize, scanned: usize },
}

/// Runs stage `state.stage + 1`.
pub fn advance_stage(inst: &Instance, state: &StageState) -> Result<StageOutcome> {
    let j = state.stage + 1;
    let group = inst.group();
    let args = state.stage_arguments(j)?;
    let max_len = stage_max_len(j);
    let mut covered = Vec::new();
    let mut chosen = None;
    let mut scanned = 0;
    let mut exhausted = true;
    for x in inst.a.enumerate(&inst.h)? {
        if scanned >= inst.policy.scan_budget {
            exhausted = false;
            break;
        }
        scanned += 1;
        let out = paired_search(group, &args, &x, max_len, inst.policy.state_cap)?;
        match out.witness {
            Some(witness) => covered.push(CoveredCandidate { element: x, witness }),
            None => {
                chosen = Some((x, out.states));
                break;
            }
        }
    }
    let Some((x, states)) = chosen else {
        if !exhausted {
            return Ok(StageOutcome::Inconclusive { stage: j, scanned });
        }
        let mut functions: Vec<MultiplicativeFunction> = Vec::new();
        let mut cover = Vec::new();
        for c in covered {
            let k = match functions.iter().position(|f| f == &c.witness) {
                Some(k) => k,
                None => {
                    functions.push(c.witness);
                    functions.len() - 1
                }
            };
            cover.push((c.element, k));
        }
        return Ok(StageOutcome::Refuted(ClosureRefutation {
            stage: j,
            arguments: args,
            functions,
            cover,
        }));
    };

    let mut next = state.clone();
    next.stage = j;
    next.chosen.push(x.clone());
    let known: BTreeSet<u32> = next.alpha_set();
    next.alpha.extend(group.support(&x).into_iter().filter(|i| !known.contains(i)));
    next.alpha_len.push(next.alpha.len());

    let target = j as u64 + 1;
    if next.numbering.is_free(target) {
        if let Some(old) = next.numbering.position_of(&inst.h, &x)? {
            next.numbering.vacate(old)?;
        }
        next.numbering.place(target, x.clone())?;
    }
    next.numbering.add_layer(&inst.h, j, next.alpha_set())?;
    let a_next = next
        .numbering
        .element_at(&inst.h, target)?
        .ok_or_else(|| Error::Invariant(format!("position {target} left free after stage {j}")))?;
    next.numbered.push(a_next);
    next.records.push(StageRecord {
        stage: j,
        chosen: x,
        covered,
        states,
    });
    check_stage(inst, &next, j)?;
    Ok(StageOutcome::Advanced(Box::new(next)))
}

/// The per-stage invariants that are cheap to re-derive from the state.
fn check_stage(inst: &Instance, state: &StageState, j: usize) -> Result<()> {
    let group = inst.group();
    let x = state.x(j).expect("stage recorded");
    if !inst.a.contains(group, x) {
        return Err(Error::Invariant(format!("x_{j} is not in A")));
    }
    if state.numbered[..=j].contains(x) {
        return Err(Error::Invariant(format!("x_{j} equals some a_i with i <= {j}")));
    }
    let alpha = state.alpha_set();
    for y in state.numbered.iter().chain(&state.chosen) {
        if !group.support(y).is_subset(&alpha) {
            return Err(Error::Invariant(format!(
                "{} has support outside the index list",
                group.format_element(y)
            )));
        }
    }
    let distinct: BTreeSet<&Element> = state.numbered.iter().collect();
    if distinct.len() != state.numbered.len() {
        return Err(Error::Invariant("numbering is not injective".into()));
    }
    Ok(())
}

/// Runs stages until `target` stages are complete or the construction stops.
pub fn run_to(inst: &Instance, mut state: StageState, target: usize) -> Result<StageOutcome> {
    while state.stage < target {
        match advance_stage(inst, &state)? {
            StageOutcome::Advanced(next) => state = *next,
            other => return Ok(other),
        }
    }
    Ok(StageOutcome::Advanced(Box::new(state)))
}

/// Re-verifies that `x_{j-1} ∉ B_{j-1}`: no function of length `< 3j` with
/// `2(j-1)` arguments vanishes at `(a_1, ..., a_{j-1}, x_1, ..., x_{j-1})`
/// while not vanishing with the last argument replaced by `1`. Vacuous for
/// `j = 1`.
pub fn transfer_check(inst: &Instance, state: &StageState, j: usize) -> Result<bool> {
    if j <= 1 {
        return Ok(true);
    }
    let prev = j - 1;
    if state.stage < prev {
        return Err(Error::InsufficientStages {
            required: prev,
            completed: state.stage,
        });
    }
    let args = state.stage_arguments(prev)?;
    let x = state.x(prev).expect("stage completed");
    let out = paired_search(inst.group(), &args, x, stage_max_len(prev), inst.policy.state_cap)?;
    Ok(out.witness.is_none())
}

/// The first `bound` elements of the numbered set, in numbering order.
pub fn materialize_gstar(inst: &Instance, state: &StageState, bound: usize) -> Result<Vec<Element>> {
    Ok(state
        .numbering
        .materialize(&inst.h, bound)?
        .into_iter()
        .map(|(_, x)| x)
        .collect())
}
