//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs as a plain binary so the verdict lines are always printed.

use std::collections::{BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use algclosure::algsets::{translate_finite, ElementaryFamily, IndexSet, DEFAULT_STATE_CAP};
use algclosure::cli::{self, Command, Common, ConstructArgs, Outcome};
use algclosure::groups::{Component, Element, Group, Subgroup, CATALOG};
use algclosure::seminorm::{
    self, check_axioms, filterbase_check, Evaluator, Rational, SeminormSpec, Value, WeightedGeneratorSet,
};
use algclosure::sets::SubsetSpec;
use algclosure::stagewise::{self, Instance, StageOutcome, StageState};
use algclosure::supernormal;
use algclosure::words::{enumerate_mfs, MultiplicativeFunction, Sign};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn atom(x: &Element) -> i64 {
    x.clone().atom().expect("integer element")
}

/// Runs on the integers with `A` = positives, kept across criteria.
struct IntegerRun {
    inst: Instance,
    state: StageState,
}

impl IntegerRun {
    fn new(stages: usize) -> Result<Self, String> {
        let inst = Instance::new(Subgroup::whole(Group::integers()), SubsetSpec::Positives);
        let state = advance(&inst, ok(stagewise::init_state(&inst))?, stages)?;
        Ok(IntegerRun { inst, state })
    }
}

fn advance(inst: &Instance, state: StageState, target: usize) -> Result<StageState, String> {
    match ok(stagewise::run_to(inst, state, target))? {
        StageOutcome::Advanced(s) => Ok(*s),
        other => Err(format!("construction stopped early: {other:?}")),
    }
}

/// Value of a multiplicative function on integer arguments from its net
/// signed count per argument.
fn net_value(phi: &MultiplicativeFunction, args: &[i64]) -> i64 {
    let mut k = vec![0i64; phi.arity()];
    for &(i, s) in phi.letters() {
        k[i - 1] += s.exponent();
    }
    k.iter().zip(args).map(|(k, a)| k * a).sum()
}

/// For each reachable `S = Σ k_i c_i`, the least `Σ |k_i|` with
/// `Σ |k_i| <= max_len`.
fn coefficient_sums(fixed: &[i64], max_len: usize) -> HashMap<i64, usize> {
    fn go(fixed: &[i64], budget: usize, used: usize, sum: i64, out: &mut HashMap<i64, usize>) {
        match fixed.split_first() {
            None => {
                let e = out.entry(sum).or_insert(used);
                *e = (*e).min(used);
            }
            Some((c, rest)) => {
                let left = budget - used;
                for k in -(left as i64)..=left as i64 {
                    go(rest, budget, used + k.unsigned_abs() as usize, sum + k * c, out);
                }
            }
        }
    }
    let mut out = HashMap::new();
    go(fixed, max_len, 0, 0, &mut out);
    out
}

/// Shortest admissible length of a function vanishing at `x` but not at 0,
/// found from coefficient vectors alone.
fn coefficient_oracle(sums: &HashMap<i64, usize>, x: i64, max_len: usize) -> Option<usize> {
    if x == 0 {
        return None;
    }
    sums.iter()
        .filter(|(&s, _)| s != 0 && s % x == 0)
        .map(|(&s, &used)| used + (s / x).unsigned_abs() as usize)
        .filter(|&len| len <= max_len)
        .min()
}

fn fixed_arguments(state: &StageState, j: usize) -> Result<Vec<i64>, String> {
    Ok(ok(state.stage_arguments(j))?.iter().map(atom).collect())
}

fn finite_closure_identity() -> Check {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut groups = 0;
    for name in CATALOG {
        let g = Group::catalog(name).unwrap();
        let n = g.order().unwrap() as usize;
        if n > 8 {
            continue;
        }
        groups += 1;
        let family = ok(ElementaryFamily::compute(&g, DEFAULT_STATE_CAP))?;
        let subsets: Vec<u64> = if n <= 6 {
            (0..1u64 << n).collect()
        } else {
            (0..64).map(|_| rng.random_range(0..1u64 << n)).collect()
        };
        let elements: Vec<Element> = family.to_elements(&IndexSet::full(n));
        for mask in subsets {
            let input = IndexSet::from_indices(n, (0..n as u32).filter(|i| mask >> i & 1 == 1));
            let result = family.closure(&input);
            let want: BTreeSet<&Element> = input.iter().map(|i| &elements[i as usize]).collect();
            let got: BTreeSet<&Element> = result.closure.iter().collect();
            ensure!(got == want, "{name}: closure of {want:?} is {got:?}");
            ensure!(result.certificates.len() == n - want.len(), "{name}: certificate count");
            for cert in &result.certificates {
                for w in &cert.words {
                    ensure!(!g.is_identity(&ok(w.evaluate(&g, &cert.excluded))?), "{name}: word vanishes at excluded");
                }
                for a in &want {
                    let mut hit = false;
                    for w in &cert.words {
                        hit |= g.is_identity(&ok(w.evaluate(&g, a))?);
                    }
                    ensure!(hit, "{name}: certificate misses an input element");
                }
            }
        }
    }
    ensure!(groups >= 10, "only {groups} groups of order at most 8 in the catalog");
    let elapsed = started.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(())
}

fn micro_identities() -> Check {
    let g = Group::catalog("S3").unwrap();
    let z = Group::integers();
    let e = g.identity();
    // Φ(a_1, x) = a_1 x^{-1}
    let phi = ok(MultiplicativeFunction::parse("#1 #2^-1", 2))?;
    for a1 in g.enumerate().filter(|a| !g.is_identity(a)) {
        ensure!(g.is_identity(&ok(phi.evaluate(&g, &[a1.clone(), a1.clone()]))?), "Φ(a1, a1) ≠ 1");
        let at_one = ok(phi.evaluate(&g, &[a1.clone(), e.clone()]))?;
        ensure!(at_one == a1 && !g.is_identity(&at_one), "Φ(a1, 1) ≠ a1");
    }
    // a single argument times its own inverse is the identity everywhere
    let cancel = ok(MultiplicativeFunction::parse("#1 #1^-1", 2))?;
    for a in g.enumerate() {
        for b in g.enumerate() {
            ensure!(g.is_identity(&ok(cancel.evaluate(&g, &[a.clone(), b]))?), "#1 #1^-1 not trivial");
        }
    }
    // Φ(a_1..a_j, x_1..x_j) = a_i x_j^{-1} vanishes exactly when the slots agree
    let elements: Vec<Element> = g.enumerate().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    for j in 1..=4usize {
        for i in 1..=j {
            let phi = MultiplicativeFunction::new(2 * j, vec![(i, Sign::Plus), (2 * j, Sign::Minus)]).unwrap();
            for _ in 0..50 {
                let mut args: Vec<Element> =
                    (0..2 * j).map(|_| elements[rng.random_range(0..elements.len())].clone()).collect();
                if rng.random_bool(0.5) {
                    args[2 * j - 1] = args[i - 1].clone();
                }
                let v = ok(phi.evaluate(&g, &args))?;
                ensure!(g.is_identity(&v) == (args[i - 1] == args[2 * j - 1]), "a_i x_j^-1 at j={j}, i={i}");
            }
        }
    }
    // left fold on the integers
    let three = ok(MultiplicativeFunction::parse("#1 #2 #1", 2))?;
    ensure!(ok(three.evaluate(&z, &[Element::Atom(3), Element::Atom(4)]))? == Element::Atom(10), "3+4+3");
    ensure!(three.evaluate(&z, &[Element::Atom(3)]).is_err(), "arity mismatch accepted");
    Ok(())
}

fn stage_invariants(run: &IntegerRun) -> Check {
    let started = Instant::now();
    let (inst, state) = (&run.inst, &run.state);
    ensure!(state.stage == 3, "expected 3 stages, have {}", state.stage);
    ensure!(atom(state.x(1).unwrap()) == 5, "x_1 = {:?}", state.x(1));
    for j in 1..=3 {
        let max_len = stagewise::stage_max_len(j);
        ensure!(max_len == 3 * (j + 1) - 1, "length bound");
        let fixed = fixed_arguments(state, j)?;
        let sums = coefficient_sums(&fixed, max_len);
        let numbered: Vec<i64> = state.numbered[..=j].iter().map(atom).collect();
        let expected = (1i64..)
            .find(|&y| coefficient_oracle(&sums, y, max_len).is_none())
            .unwrap();
        let x = atom(state.x(j).unwrap());
        ensure!(x == expected, "stage {j}: engine chose {x}, oracle {expected}");
        ensure!(x > 0, "x_{j} outside A");
        ensure!(!numbered.contains(&x), "x_{j} already numbered");
        let identity = ok(stagewise::membership(inst, state, j, &Element::Atom(0)))?;
        ensure!(identity.witness.is_none(), "identity in B_{j}");
        ensure!(ok(stagewise::transfer_check(inst, state, j + 1))?, "transfer fails at stage {j}");
    }
    // literal enumeration of every function for the first two stages
    for j in 1..=2 {
        let mut args = fixed_arguments(state, j)?;
        let x = atom(state.x(j).unwrap());
        args.push(x);
        let mut count = 0u64;
        for phi in enumerate_mfs(2 * j, stagewise::stage_max_len(j)) {
            count += 1;
            let at_x = net_value(&phi, &args);
            let mut at_one = args.clone();
            *at_one.last_mut().unwrap() = 0;
            ensure!(!(at_x == 0 && net_value(&phi, &at_one) != 0), "stage {j}: `{phi}` puts x_{j} in B_{j}");
        }
        ensure!(count as u128 == algclosure::words::mf_count(2 * j, stagewise::stage_max_len(j)), "enumeration count");
    }
    let elapsed = started.elapsed();
    ensure!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    Ok(())
}

fn oracle_agreement(run: &IntegerRun) -> Check {
    for j in 1..=3 {
        let max_len = stagewise::stage_max_len(j);
        let fixed = fixed_arguments(&run.state, j)?;
        let sums = coefficient_sums(&fixed, max_len);
        for x in -10i64..=10 {
            let engine = ok(stagewise::membership(&run.inst, &run.state, j, &Element::Atom(x)))?;
            let oracle = coefficient_oracle(&sums, x, max_len);
            ensure!(
                engine.witness.as_ref().map(|w| w.len()) == oracle,
                "stage {j}, x = {x}: engine {:?}, oracle {oracle:?}",
                engine.witness.map(|w| w.to_string())
            );
            if let Some(w) = &engine.witness {
                let mut args = fixed.clone();
                args.push(x);
                ensure!(net_value(w, &args) == 0, "witness does not vanish at {x}");
                *args.last_mut().unwrap() = 0;
                ensure!(net_value(w, &args) != 0, "witness vanishes at the identity");
            }
        }
    }
    Ok(())
}

/// Weighted distances on a window of the integers by repeated relaxation,
/// in units of `1/unit`.
fn relaxation_oracle(gens: &[(i64, Rational)], window: i64, unit: i64) -> Vec<Option<i64>> {
    let size = (2 * window + 1) as usize;
    let mut dist: Vec<Option<i64>> = vec![None; size];
    dist[window as usize] = Some(0);
    let steps: Vec<(i64, i64)> = gens
        .iter()
        .flat_map(|(g, w)| {
            let c = (w * Rational::from_integer(unit)).to_integer();
            [(*g, c), (-*g, c)]
        })
        .collect();
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..size {
            let Some(d) = dist[i] else { continue };
            for &(g, c) in &steps {
                let k = i as i64 + g;
                if (0..size as i64).contains(&k) && dist[k as usize].is_none_or(|old| d + c < old) {
                    dist[k as usize] = Some(d + c);
                    changed = true;
                }
            }
        }
    }
    dist
}

fn seminorm_suite(run: &IntegerRun) -> Check {
    let started = Instant::now();
    let text = ok(run.state.to_json())?;
    let state = ok(StageState::from_json(&text))?;
    ensure!(state == run.state, "snapshot round trip");
    let g = run.inst.group();
    let samples = ok(stagewise::materialize_gstar(&run.inst, &state, 200))?;
    ensure!(samples.len() == 200, "sample has {} elements", samples.len());
    let cap = seminorm::DEFAULT_SETTLED_CAP;
    const WINDOW: i64 = 4000;
    for j in 1..=3 {
        let gens = ok(WeightedGeneratorSet::build(g, &state, j, 3))?;
        let report = ok(check_axioms(&gens, &samples, cap))?;
        ensure!(report.holds() && report.subadditive_pairs == 40_000, "axioms at j = {j}: {report:?}");
        let plain: Vec<(i64, Rational)> = gens.generators.iter().map(|gen| (atom(&gen.element), gen.weight)).collect();
        let oracle = relaxation_oracle(&plain, WINDOW, 6);
        let value_at = |x: i64| -> Result<Value, String> {
            let d = oracle[(x + WINDOW) as usize].ok_or("outside the window")?;
            Ok(Value::Finite(Rational::new(d, 6)))
        };
        let ball = ok(gens.ball(&samples, cap))?;
        ensure!(value_at(0)? == Value::zero(), "oracle value at the identity");
        for x in &samples {
            let v = atom(x);
            ensure!(ok(ball.value(x))? == value_at(v)?, "j = {j}: value at {v} differs from relaxation");
            ensure!(value_at(v)? == value_at(-v)?, "oracle symmetry at {v}");
            for y in &samples {
                let w = atom(y);
                ensure!(value_at(v + w)? <= value_at(v)? + value_at(w)?, "oracle subadditivity at {v}, {w}");
            }
        }
        if j <= 2 {
            let coarse = ok(WeightedGeneratorSet::build(g, &state, j, 2))?;
            let coarse_ball = ok(coarse.ball(&samples, cap))?;
            for x in &samples {
                ensure!(ok(ball.value(x))? <= ok(coarse_ball.value(x))?, "truncation monotonicity at j = {j}");
            }
        }
    }
    let mut eval = Evaluator::new(&run.inst.h, &state);
    let first = ok(SeminormSpec::new(vec![0], vec![1], 3))?;
    let second = ok(SeminormSpec::new(vec![1, 2], vec![2, 3], 3))?;
    let fb = ok(filterbase_check(&mut eval, &first, &second, &samples[..100]))?;
    ensure!(fb.additive && fb.nested && fb.samples == 100, "filter base: {fb:?}");
    let identity = ok(eval.composite(&first.concat(&second).unwrap(), &g.identity()))?;
    ensure!(identity.value == Value::zero(), "composite at the identity");
    let elapsed = started.elapsed();
    ensure!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    Ok(())
}

fn random_spec(rng: &mut ChaCha8Rng, n: usize, below: usize) -> (Vec<usize>, Vec<usize>) {
    let p = (0..n).map(|_| rng.random_range(0..below)).collect();
    let q = (0..n).map(|_| rng.random_range(1..below)).collect();
    (p, q)
}

fn check_witness(
    inst: &Instance,
    state: &StageState,
    p: Vec<usize>,
    q: Vec<usize>,
    trunc: usize,
    in_a: impl Fn(&Element) -> bool,
) -> Check {
    let n = p.len();
    let spec = ok(SeminormSpec::new(p.clone(), q.clone(), trunc))?;
    let s = p.iter().chain(&q).copied().chain([n]).max().unwrap() + 1;
    let mut eval = Evaluator::new(&inst.h, state);
    let w = ok(eval.closure_witness(&spec, &inst.a))?;
    let label = format!("p = {p:?}, q = {q:?}");
    ensure!(w.s == s, "{label}: s = {}, expected {s}", w.s);
    ensure!(&w.element == state.x(s).unwrap(), "{label}: witness is not x_s");
    ensure!(w.in_a && in_a(&w.element), "{label}: witness outside A");
    let expected = Rational::new(n as i64, s as i64);
    ensure!(w.bound == expected, "{label}: bound {}", seminorm::format_rational(&w.bound));
    ensure!(expected < Rational::from_integer(1), "{label}: n/s not below 1");
    let mut total = Rational::from_integer(0);
    for (k, proof) in w.single_generator_proofs.iter().enumerate() {
        ensure!(proof.steps.len() == 1 && proof.weight == Rational::new(1, s as i64), "{label}: proof {k}");
        let ap = ok(eval.numbered(p[k]))?;
        ensure!(proof.target == inst.group().conj(&w.element, &ap), "{label}: proof {k} target");
        let gens = ok(eval.generators(q[k], trunc.max(s)))?;
        ok(proof.verify(gens))?;
        total += proof.weight;
    }
    ensure!(total == expected, "{label}: weights sum to {}", seminorm::format_rational(&total));
    ensure!(w.computed.value <= Value::Finite(expected), "{label}: computed {}", w.computed.value);
    ensure!(w.computed.value.is_below_one(), "{label}: not in the neighbourhood");
    Ok(())
}

fn n_over_s(run: &IntegerRun) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    // integers, four stages
    let state = advance(&run.inst, run.state.clone(), 4)?;
    let positive = |x: &Element| atom(x) > 0;
    check_witness(&run.inst, &state, vec![0], vec![1], 2, positive)?;
    check_witness(&run.inst, &state, vec![1, 0], vec![2, 1], 3, positive)?;
    check_witness(&run.inst, &state, vec![0, 1, 2], vec![3, 1, 2], 3, positive)?;
    for n in 1..=3 {
        for _ in 0..3 {
            let (p, q) = random_spec(&mut rng, n, n + 1);
            check_witness(&run.inst, &state, p, q, n, positive)?;
        }
    }
    // countable power of Z/2 with A = basis vectors, eight stages
    let g = ok(Group::countable_power(Component::Cyclic(2)))?;
    let inst = Instance::new(Subgroup::whole(g.clone()), SubsetSpec::BasisVectors);
    let state = advance(&inst, ok(stagewise::init_state(&inst))?, 8)?;
    let basis = |x: &Element| g.support(x).len() == 1;
    check_witness(&inst, &state, vec![3, 4], vec![4, 1], 4, basis)?;
    for n in 1..=3 {
        for below in n + 1..=7 {
            let (p, q) = random_spec(&mut rng, n, below);
            let trunc = rng.random_range(1..=below);
            check_witness(&inst, &state, p, q, trunc, basis)?;
        }
    }
    Ok(())
}

fn scenario_file(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn refutation_soundness() -> Check {
    let dir = ok(tempfile::tempdir())?;
    let path = scenario_file(
        &dir,
        "two_four.toml",
        "version = 1\n[group]\nkind = \"integers\"\n[set]\nkind = \"elements\"\nelements = [\"2\", \"4\"]\n",
    );
    let args = ConstructArgs {
        common: Common {
            scenario: path,
            out: None,
            budget: None,
            trunc: None,
            recheck: true,
        },
        stages: None,
        snapshot: None,
        resume: None,
    };
    let report = ok(cli::run(&Command::Refute(args)))?;
    ensure!(report.outcome == Outcome::Refuted, "outcome {:?}", report.outcome);
    ensure!(report.body["recheck"] == "passed", "recheck: {}", report.body["recheck"]);
    let cert = &report.body["result"]["certificate"];
    let arguments: Vec<i64> = cert["arguments"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().parse().unwrap())
        .collect();
    let arity = arguments.len() + 1;
    let functions: Vec<MultiplicativeFunction> = cert["functions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| MultiplicativeFunction::parse(f.as_str().unwrap(), arity).unwrap())
        .collect();
    ensure!(!functions.is_empty(), "empty certificate");
    for phi in &functions {
        let mut at = arguments.clone();
        at.push(0);
        ensure!(net_value(phi, &at) != 0, "`{phi}` vanishes at the identity");
    }
    for y in [2i64, 4] {
        let solved = functions.iter().any(|phi| {
            let mut at = arguments.clone();
            at.push(y);
            net_value(phi, &at) == 0
        });
        ensure!(solved, "{y} not covered");
    }
    let covered: BTreeSet<&str> = cert["cover"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["element"].as_str().unwrap())
        .collect();
    ensure!(covered == BTreeSet::from(["2", "4"]), "cover {covered:?}");
    Ok(())
}

fn supernormal_cross_check() -> Check {
    let started = Instant::now();
    for name in CATALOG {
        let g = Group::catalog(name).unwrap();
        if g.order().unwrap() > 12 {
            continue;
        }
        let all: Vec<Element> = g.enumerate().collect();
        let abelian = all.iter().all(|a| all.iter().all(|b| g.op(a, b) == g.op(b, a)));
        let central: Vec<&Element> = all
            .iter()
            .filter(|z| all.iter().all(|a| g.op(z, a) == g.op(a, z)))
            .collect();
        for sub in ok(supernormal::all_subgroups(&g))? {
            let brute = ok(supernormal::is_supernormal_finite(&sub))?;
            let oracle = ok(supernormal::supernormal_center_oracle(&sub))?;
            let products: BTreeSet<Element> = sub
                .enumerate()
                .flat_map(|y| central.iter().map(move |z| (y.clone(), (*z).clone())))
                .map(|(y, z)| g.op(&y, &z))
                .collect();
            let independent = products.len() == all.len();
            ensure!(brute.supernormal == oracle, "{name}: brute force and center oracle disagree");
            ensure!(brute.supernormal == independent, "{name}: H'Z(H) = H check disagrees");
            ok(brute.recheck(&g, &all, &sub))?;
            if abelian {
                ensure!(brute.supernormal, "{name}: abelian group with a non-supernormal subgroup");
            }
        }
    }
    let elapsed = started.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(())
}

fn translation_property() -> Check {
    for name in ["C4", "S3"] {
        let g = Group::catalog(name).unwrap();
        let n = g.order().unwrap() as usize;
        let family = ok(ElementaryFamily::compute(&g, DEFAULT_STATE_CAP))?;
        let elements = family.to_elements(&IndexSet::full(n));
        for mask in 0..1u64 << n {
            let b_set: Vec<Element> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| elements[i].clone()).collect();
            let closed = ok(family.closure_of(&b_set))?.closure;
            for b in &elements {
                let translated = ok(translate_finite(&g, b, &b_set))?;
                let lhs: BTreeSet<Element> = ok(family.closure_of(&translated))?.closure.into_iter().collect();
                let rhs: BTreeSet<Element> = ok(translate_finite(&g, b, &closed))?.into_iter().collect();
                ensure!(lhs == rhs, "{name}: translation by {} fails", g.format_element(b));
                let direct: BTreeSet<Element> = b_set.iter().map(|y| g.op(&g.inv(b), y)).collect();
                ensure!(direct == translated.iter().cloned().collect(), "{name}: translate_finite");
            }
        }
    }
    Ok(())
}

fn main() {
    let started = Instant::now();
    let mut results = Vec::new();
    let mut record = |id: usize, name: &str, f: &mut dyn FnMut() -> Check| {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match &outcome {
            Ok(()) => println!("criterion {id} PASS {name} ({secs:.2}s)"),
            Err(e) => println!("criterion {id} FAIL {name} ({secs:.2}s): {e}"),
        }
        results.push(outcome.is_ok());
    };
    record(1, "finite closure identity", &mut finite_closure_identity);
    record(2, "multiplicative function micro-identities", &mut micro_identities);
    let shared = IntegerRun::new(3);
    let with_run = |f: fn(&IntegerRun) -> Check| {
        let shared = &shared;
        move || match shared {
            Ok(r) => f(r),
            Err(e) => Err(e.clone()),
        }
    };
    record(3, "stage invariants on the integers", &mut with_run(stage_invariants));
    record(4, "membership agrees with coefficient vectors", &mut with_run(oracle_agreement));
    record(5, "seminorm suite on the stage-3 state", &mut with_run(seminorm_suite));
    record(6, "n/s bound for the closure witness", &mut with_run(n_over_s));
    record(7, "refutation soundness for A = {2, 4}", &mut refutation_soundness);
    record(8, "supernormality cross-check", &mut supernormal_cross_check);
    record(9, "closure commutes with translation", &mut translation_property);
    let passed = results.iter().filter(|&&r| r).count();
    println!("{passed}/{} criteria passed in {:.1}s", results.len(), started.elapsed().as_secs_f64());
    if passed != results.len() {
        std::process::exit(1);
    }
}
