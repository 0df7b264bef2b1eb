//! Seminorms from weighted generator sets.
//!
//! For stage index `j` and truncation depth `T` the generators are `1`
//! (weight 0), `a_j` (weight 1) and every conjugate `a_k^{-1} x_i a_k` with
//! `j <= i <= T`, `k <= i` (weight `1/i`). A generator's inverse carries the
//! same weight. The value `N_j(x)` is the least total weight of a
//! factorization of `x` into generators and inverses, computed as a shortest
//! path in the Cayley graph. Weights are scaled to integer units of
//! `1 / lcm(1..=T)`, so every value is an exact rational. Fewer generators can
//! only raise the infimum, so truncated values bound the untruncated ones from
//! above: they certify `N(x) < 1` but never `N(x) >= 1`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{Element, Group, Subgroup};
use crate::stagewise::StageState;

pub type Rational = Ratio<i64>;

/// Default cap on settled elements in one shortest-path search.
pub const DEFAULT_SETTLED_CAP: usize = 4_000_000;

pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(text: &str) -> Option<Rational> {
    let (n, d) = text.split_once('/')?;
    let n: i64 = n.trim().parse().ok()?;
    let d: i64 = d.trim().parse().ok()?;
    (d != 0).then(|| Rational::new(n, d))
}

/// A seminorm value: exact, or `+∞` for elements no factorization reaches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Finite(Rational),
    Infinite,
}

impl Value {
    pub fn zero() -> Self {
        Value::Finite(Rational::zero())
    }

    pub fn finite(&self) -> Option<Rational> {
        match self {
            Value::Finite(r) => Some(*r),
            Value::Infinite => None,
        }
    }

    pub fn is_below_one(&self) -> bool {
        matches!(self, Value::Finite(r) if *r < Rational::one())
    }

    /// `min(value, 1)`.
    pub fn capped(self) -> Self {
        match self {
            Value::Finite(r) if r < Rational::one() => self,
            _ => Value::Finite(Rational::one()),
        }
    }
}

impl std::ops::Add for Value {
    type Output = Value;
    fn add(self, rhs: Value) -> Value {
        match (self, rhs) {
            (Value::Finite(a), Value::Finite(b)) => Value::Finite(a + b),
            _ => Value::Infinite,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(r) => f.write_str(&format_rational(r)),
            Value::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        if text == "inf" {
            return Ok(Value::Infinite);
        }
        parse_rational(&text)
            .map(Value::Finite)
            .ok_or_else(|| serde::de::Error::custom(format!("expected `num/den` or `inf`, got `{text}`")))
    }
}

/// Where a generator comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum GeneratorLabel {
    Identity,
    /// `a_j`.
    Base { j: usize },
    /// `a_k^{-1} x_i a_k`.
    Conjugate { i: usize, k: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub element: Element,
    pub weight: Rational,
    /// Every expression producing this element.
    pub labels: Vec<GeneratorLabel>,
}

/// The truncated generator set with its weights, checked for consistency.
#[derive(Debug, Clone)]
pub struct WeightedGeneratorSet {
    group: Group,
    pub stage_index: usize,
    pub truncation: usize,
    pub generators: Vec<Generator>,
    unit: i64,
}

impl WeightedGeneratorSet {
    pub fn build(group: &Group, state: &StageState, j: usize, truncation: usize) -> Result<Self> {
        if j == 0 || j > truncation {
            return Err(Error::IllDefinedWeights(format!(
                "stage index {j} must satisfy 1 <= j <= T = {truncation}"
            )));
        }
        if state.stage < truncation {
            return Err(Error::InsufficientStages {
                required: truncation,
                completed: state.stage,
            });
        }
        let mut generators: Vec<Generator> = Vec::new();
        let mut add = |element: Element, weight: Rational, label: GeneratorLabel| -> Result<()> {
            if let Some(g) = generators.iter_mut().find(|g| g.element == element) {
                if g.weight != weight {
                    return Err(Error::IllDefinedWeights(format!(
                        "{} receives weights {} and {}",
                        group.format_element(&element),
                        format_rational(&g.weight),
                        format_rational(&weight)
                    )));
                }
                g.labels.push(label);
            } else {
                generators.push(Generator {
                    element,
                    weight,
                    labels: vec![label],
                });
            }
            Ok(())
        };
        let a = |k: usize| state.a(k).cloned().ok_or(Error::Unnumbered(k as u64));
        add(group.identity(), Rational::zero(), GeneratorLabel::Identity)?;
        add(a(j)?, Rational::one(), GeneratorLabel::Base { j })?;
        for i in j..=truncation {
            let xi = state.x(i).expect("stage completed").clone();
            for k in 0..=i {
                let ak = a(k)?;
                add(
                    group.conj(&xi, &ak),
                    Rational::new(1, i as i64),
                    GeneratorLabel::Conjugate { i, k },
                )?;
            }
        }
        let unit = (1..=truncation as i64).fold(1i64, |l, i| l.lcm(&i));
        Ok(WeightedGeneratorSet {
            group: group.clone(),
            stage_index: j,
            truncation,
            generators,
            unit,
        })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn weight_of(&self, x: &Element) -> Option<Rational> {
        self.generators.iter().find(|g| &g.element == x).map(|g| g.weight)
    }

    fn units(&self, r: Rational) -> u64 {
        (r * Rational::from_integer(self.unit)).to_integer() as u64
    }

    fn to_value(&self, units: u64) -> Value {
        Value::Finite(Rational::new(units as i64, self.unit))
    }

    /// Letters in tie-break order: generator order, each before its inverse.
    /// The identity generator is a no-op and is skipped.
    fn letters(&self) -> Vec<(Element, u64, Step)> {
        let mut out = Vec::new();
        for (index, g) in self.generators.iter().enumerate() {
            if self.group.is_identity(&g.element) {
                continue;
            }
            let w = self.units(g.weight);
            out.push((g.element.clone(), w, Step { generator: index, inverse: false }));
            out.push((self.group.inv(&g.element), w, Step { generator: index, inverse: true }));
        }
        out
    }

    /// Shortest distances from the identity, enough to decide every target.
    pub fn ball(&self, targets: &[Element], cap: usize) -> Result<Ball<'_>> {
        let letters = self.letters();
        let mut settled: FxHashMap<Element, u64> = FxHashMap::default();
        let mut tentative: FxHashMap<Element, u64> = FxHashMap::default();
        let mut heap: BinaryHeap<Reverse<(u64, u64)>> = BinaryHeap::new();
        let mut nodes: Vec<Element> = Vec::new();
        let e = self.group.identity();
        tentative.insert(e.clone(), 0);
        nodes.push(e);
        heap.push(Reverse((0, 0)));

        let mut pending: Vec<&Element> = targets.iter().collect();
        let mut radius: Option<u64> = None;
        while let Some(&Reverse((d, id))) = heap.peek() {
            if radius.is_some_and(|r| d > r) {
                break;
            }
            heap.pop();
            let x = nodes[id as usize].clone();
            if settled.contains_key(&x) || tentative.get(&x) != Some(&d) {
                continue;
            }
            tentative.remove(&x);
            settled.insert(x.clone(), d);
            if settled.len() > cap {
                return Err(Error::CapExceeded {
                    what: "seminorm settled-element",
                    cap,
                });
            }
            if radius.is_none() {
                pending.retain(|t| !settled.contains_key(*t));
                if pending.is_empty() {
                    radius = Some(d);
                }
            }
            for (g, w, _) in &letters {
                let y = self.group.op(&x, g);
                if settled.contains_key(&y) {
                    continue;
                }
                let nd = d + w;
                if tentative.get(&y).is_none_or(|&old| nd < old) {
                    tentative.insert(y.clone(), nd);
                    nodes.push(y);
                    heap.push(Reverse((nd, nodes.len() as u64 - 1)));
                }
            }
        }
        let exhausted = heap.is_empty();
        let radius = radius.unwrap_or_else(|| settled.values().copied().max().unwrap_or(0));
        Ok(Ball {
            gens: self,
            letters,
            settled,
            radius,
            exhausted,
        })
    }

    pub fn value(&self, x: &Element, cap: usize) -> Result<Value> {
        self.ball(std::slice::from_ref(x), cap)?.value(x)
    }
}

/// One factor of a factorization: a generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub generator: usize,
    pub inverse: bool,
}

/// All elements within `radius` of the identity, with exact distances.
pub struct Ball<'a> {
    gens: &'a WeightedGeneratorSet,
    letters: Vec<(Element, u64, Step)>,
    settled: FxHashMap<Element, u64>,
    radius: u64,
    exhausted: bool,
}

impl Ball<'_> {
    pub fn len(&self) -> usize {
        self.settled.len()
    }

    pub fn is_empty(&self) -> bool {
        self.settled.is_empty()
    }

    pub fn value(&self, x: &Element) -> Result<Value> {
        match self.settled.get(x) {
            Some(&d) if d <= self.radius || self.exhausted => Ok(self.gens.to_value(d)),
            _ if self.exhausted => Ok(Value::Infinite),
            _ => Err(Error::Invariant(format!(
                "{} lies outside the computed ball",
                self.gens.group.format_element(x)
            ))),
        }
    }

    /// The lexicographically least minimal-weight factorization of `x`.
    /// Distances are invariant under left translation, so the remaining
    /// distance from `y` to `x` is the value at `y^{-1} x`.
    pub fn factorization(&self, x: &Element) -> Result<Option<Factorization>> {
        let group = &self.gens.group;
        let Some(&total) = self.settled.get(x) else {
            return Ok(None);
        };
        if total > self.radius && !self.exhausted {
            return Err(Error::Invariant("factorization requested beyond the computed radius".into()));
        }
        let mut steps = Vec::new();
        let mut cur = group.identity();
        let mut rem = total;
        while rem > 0 {
            let next = self.letters.iter().find_map(|(g, w, step)| {
                if *w > rem {
                    return None;
                }
                let y = group.op(&cur, g);
                let left = group.op(&group.inv(&y), x);
                (self.settled.get(&left) == Some(&(rem - w))).then_some((y, *w, *step))
            });
            let (y, w, step) = next.ok_or_else(|| Error::Invariant("shortest path reconstruction failed".into()))?;
            steps.push(step);
            cur = y;
            rem -= w;
        }
        if &cur != x {
            return Err(Error::Invariant("shortest path ends at the wrong element".into()));
        }
        Ok(Some(Factorization {
            target: x.clone(),
            steps,
            weight: self.gens.to_value(total).finite().expect("finite"),
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub target: Element,
    pub steps: Vec<Step>,
    pub weight: Rational,
}

impl Factorization {
    /// Multiplies the factors and sums their weights.
    pub fn verify(&self, gens: &WeightedGeneratorSet) -> Result<()> {
        let group = gens.group();
        let mut acc = group.identity();
        let mut weight = Rational::zero();
        for step in &self.steps {
            let g = gens
                .generators
                .get(step.generator)
                .ok_or_else(|| Error::Invariant(format!("unknown generator {}", step.generator)))?;
            let factor = if step.inverse { group.inv(&g.element) } else { g.element.clone() };
            acc = group.op(&acc, &factor);
            weight += g.weight;
        }
        if acc != self.target {
            return Err(Error::Invariant("factorization multiplies to the wrong element".into()));
        }
        if weight != self.weight {
            return Err(Error::Invariant("factorization weight mismatch".into()));
        }
        Ok(())
    }
}

/// `N^{p}_{q}` with truncation depth `T`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeminormSpec {
    pub p: Vec<usize>,
    pub q: Vec<usize>,
    pub truncation: usize,
}

impl SeminormSpec {
    pub fn new(p: Vec<usize>, q: Vec<usize>, truncation: usize) -> Result<Self> {
        if p.is_empty() || p.len() != q.len() {
            return Err(Error::Scenario("p and q must be non-empty and of equal length".into()));
        }
        if q.contains(&0) {
            return Err(Error::Scenario("q entries must be positive".into()));
        }
        Ok(SeminormSpec { p, q, truncation })
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    /// The spec whose value is the sum of the two.
    pub fn concat(&self, other: &SeminormSpec) -> Result<Self> {
        if self.truncation != other.truncation {
            return Err(Error::Scenario("concatenated specs must share a truncation depth".into()));
        }
        let mut p = self.p.clone();
        p.extend(&other.p);
        let mut q = self.q.clone();
        q.extend(&other.q);
        SeminormSpec::new(p, q, self.truncation)
    }

    /// Least `s` with `s > n`, `s > p_j`, `s > q_j`.
    pub fn witness_index(&self) -> usize {
        self.p.iter().chain(&self.q).copied().chain([self.n()]).max().unwrap_or(0) + 1
    }
}

/// Evaluates composite seminorms against one stage state.
pub struct Evaluator<'a> {
    group: &'a Group,
    state: &'a StageState,
    h: &'a Subgroup,
    pub cap: usize,
    bases: FxHashMap<(usize, usize), WeightedGeneratorSet>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub p: usize,
    pub q: usize,
    /// `a_p^{-1} x a_p`.
    pub conjugated: Element,
    pub value: Value,
    pub factorization: Option<Factorization>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeValue {
    pub value: Value,
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NeighborhoodMembership {
    /// The truncated value is below 1; each term carries its factorization.
    CertifiedTrue(CompositeValue),
    /// Truncation cannot certify exclusion.
    Unknown(CompositeValue),
}

/// `x_s` with a proof that the composite value is at most `n/s < 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureWitness {
    pub s: usize,
    pub element: Element,
    /// `n/s`, from one generator per term.
    pub bound: Rational,
    /// Per term: the single generator `a_{p_j}^{-1} x_s a_{p_j}` of weight `1/s`.
    pub single_generator_proofs: Vec<Factorization>,
    /// The shortest-path value, never above `bound`.
    pub computed: CompositeValue,
    pub in_a: bool,
}

impl<'a> Evaluator<'a> {
    pub fn new(h: &'a Subgroup, state: &'a StageState) -> Self {
        Evaluator {
            group: h.ambient(),
            state,
            h,
            cap: DEFAULT_SETTLED_CAP,
            bases: FxHashMap::default(),
        }
    }

    pub fn generators(&mut self, j: usize, truncation: usize) -> Result<&WeightedGeneratorSet> {
        if !self.bases.contains_key(&(j, truncation)) {
            let g = WeightedGeneratorSet::build(self.group, self.state, j, truncation)?;
            self.bases.insert((j, truncation), g);
        }
        Ok(&self.bases[&(j, truncation)])
    }

    /// `a_p`, looked up beyond the fixed prefix when needed.
    pub fn numbered(&self, p: usize) -> Result<Element> {
        if let Some(a) = self.state.a(p) {
            return Ok(a.clone());
        }
        self.state
            .numbering
            .element_at(self.h, p as u64)?
            .ok_or(Error::Unnumbered(p as u64))
    }

    /// `Σ N_{q_j}(a_{p_j}^{-1} x a_{p_j})` for every `x` in `xs`, with
    /// factorizations when `proofs` is set.
    pub fn composite_many(&mut self, spec: &SeminormSpec, xs: &[Element], proofs: bool) -> Result<Vec<CompositeValue>> {
        let mut out: Vec<CompositeValue> = xs
            .iter()
            .map(|_| CompositeValue {
                value: Value::zero(),
                terms: Vec::new(),
            })
            .collect();
        for (&p, &q) in spec.p.iter().zip(&spec.q) {
            let ap = self.numbered(p)?;
            let group = self.group;
            let conj: Vec<Element> = xs.iter().map(|x| group.conj(x, &ap)).collect();
            let cap = self.cap;
            let gens = self.generators(q, spec.truncation)?;
            let ball = gens.ball(&conj, cap)?;
            for (k, y) in conj.into_iter().enumerate() {
                let value = ball.value(&y)?;
                let factorization = if proofs { ball.factorization(&y)? } else { None };
                out[k].value = out[k].value + value;
                out[k].terms.push(Term {
                    p,
                    q,
                    conjugated: y,
                    value,
                    factorization,
                });
            }
        }
        Ok(out)
    }

    pub fn composite(&mut self, spec: &SeminormSpec, x: &Element) -> Result<CompositeValue> {
        Ok(self.composite_many(spec, std::slice::from_ref(x), true)?.remove(0))
    }

    pub fn in_neighborhood(&mut self, spec: &SeminormSpec, x: &Element) -> Result<NeighborhoodMembership> {
        let v = self.composite(spec, x)?;
        Ok(if v.value.is_below_one() {
            NeighborhoodMembership::CertifiedTrue(v)
        } else {
            NeighborhoodMembership::Unknown(v)
        })
    }

    /// `x_s` for the least admissible `s`. The truncation depth used is
    /// `max(T, s)` so that `x_s` itself is a generator.
    pub fn closure_witness(&mut self, spec: &SeminormSpec, a: &crate::sets::SubsetSpec) -> Result<ClosureWitness> {
        let s = spec.witness_index();
        if self.state.stage < s {
            return Err(Error::InsufficientStages {
                required: s,
                completed: self.state.stage,
            });
        }
        let spec = SeminormSpec {
            truncation: spec.truncation.max(s),
            ..spec.clone()
        };
        let xs = self.state.x(s).expect("stage completed").clone();
        let mut single = Vec::new();
        for (&p, &q) in spec.p.iter().zip(&spec.q) {
            let ap = self.numbered(p)?;
            let y = self.group.conj(&xs, &ap);
            let gens = self.generators(q, spec.truncation)?;
            let index = gens
                .generators
                .iter()
                .position(|g| g.element == y)
                .ok_or_else(|| Error::Invariant(format!("a_{p}^-1 x_{s} a_{p} is not a generator of N_{q}")))?;
            let f = Factorization {
                target: y,
                steps: vec![Step { generator: index, inverse: false }],
                weight: gens.generators[index].weight,
            };
            f.verify(gens)?;
            if f.weight != Rational::new(1, s as i64) {
                return Err(Error::Invariant(format!("generator weight {} differs from 1/{s}", format_rational(&f.weight))));
            }
            single.push(f);
        }
        let bound = Rational::new(spec.n() as i64, s as i64);
        let computed = self.composite(&spec, &xs)?;
        if computed.value > Value::Finite(bound) {
            return Err(Error::Invariant("shortest-path value exceeds the single-generator bound".into()));
        }
        Ok(ClosureWitness {
            s,
            in_a: a.contains(self.group, &xs),
            element: xs,
            bound,
            single_generator_proofs: single,
            computed,
        })
    }
}

/// Result of the seminorm-axiom checks on a sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub stage_index: usize,
    pub truncation: usize,
    pub samples: usize,
    pub identity_zero: bool,
    pub symmetric: bool,
    pub subadditive_pairs: usize,
    pub subadditive: bool,
}

impl AxiomReport {
    pub fn holds(&self) -> bool {
        self.identity_zero && self.symmetric && self.subadditive
    }
}

/// `N(1) = 0`, `N(x^{-1}) = N(x)` and `N(xy) <= N(x) + N(y)` on all pairs.
pub fn check_axioms(gens: &WeightedGeneratorSet, samples: &[Element], cap: usize) -> Result<AxiomReport> {
    let group = gens.group();
    let mut targets: Vec<Element> = vec![group.identity()];
    targets.extend(samples.iter().cloned());
    targets.extend(samples.iter().map(|x| group.inv(x)));
    for x in samples {
        for y in samples {
            targets.push(group.op(x, y));
        }
    }
    targets.sort();
    targets.dedup();
    let ball = gens.ball(&targets, cap)?;
    let identity_zero = ball.value(&group.identity())? == Value::zero();
    let mut symmetric = true;
    for x in samples {
        symmetric &= ball.value(x)? == ball.value(&group.inv(x))?;
    }
    let mut subadditive = true;
    for x in samples {
        let vx = ball.value(x)?;
        for y in samples {
            subadditive &= ball.value(&group.op(x, y))? <= vx + ball.value(y)?;
        }
    }
    Ok(AxiomReport {
        stage_index: gens.stage_index,
        truncation: gens.truncation,
        samples: samples.len(),
        identity_zero,
        symmetric,
        subadditive_pairs: samples.len() * samples.len(),
        subadditive,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterbaseReport {
    pub samples: usize,
    pub additive: bool,
    pub nested: bool,
}

/// `N'(x) = N_1(x) + N_2(x)` for the concatenated spec, hence
/// `U_{N'} ⊆ U_{N_1} ∩ U_{N_2}`.
pub fn filterbase_check(
    eval: &mut Evaluator<'_>,
    first: &SeminormSpec,
    second: &SeminormSpec,
    samples: &[Element],
) -> Result<FilterbaseReport> {
    let joined = first.concat(second)?;
    let v1 = eval.composite_many(first, samples, false)?;
    let v2 = eval.composite_many(second, samples, false)?;
    let v = eval.composite_many(&joined, samples, false)?;
    let mut additive = true;
    let mut nested = true;
    for k in 0..samples.len() {
        additive &= v[k].value == v1[k].value + v2[k].value;
        if v[k].value.is_below_one() {
            nested &= v1[k].value.is_below_one() && v2[k].value.is_below_one();
        }
    }
    Ok(FilterbaseReport {
        samples: samples.len(),
        additive,
        nested,
    })
}

/// The Hausdorff property of the resulting topology rests on lower bounds
/// that the truncated values cannot provide.
pub const HAUSDORFF_STATUS: &str = "not verified at desk scale";
