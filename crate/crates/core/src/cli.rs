//! Command-line front end.
//!
//! Every command reads a TOML scenario and writes one JSON report. The
//! report body is a pure function of the scenario and the flags; timing is
//! kept apart so bodies can be compared byte for byte.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};
use sha2::{Digest, Sha256};

use crate::algsets::{ElementaryFamily, DEFAULT_STATE_CAP};
use crate::error::{Error, Result};
use crate::groups::{Element, Group, Subgroup};
use crate::scenario::{Resolved, Scenario, SubgroupDef};
use crate::seminorm::{self, Evaluator, Factorization, SeminormSpec, WeightedGeneratorSet};
use crate::stagewise::{self, ClosureRefutation, Instance, StageOutcome, StageState};
use crate::supernormal::{self, Coverage, Realization, SupernormalityReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

const DEFAULT_STAGES: usize = 3;
const DEFAULT_REFUTE_STAGES: usize = 8;
const DEFAULT_MATERIALIZE: usize = 16;
const DEFAULT_SAMPLES: usize = 200;
const FILTERBASE_SAMPLES: usize = 100;

#[derive(Debug, Parser)]
#[command(name = "algclosure", version, about = "Algebraic closures and staged group topologies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Algebraic closure of a subset of a finite group, with certificates.
    Closure(Common),
    /// Run the staged construction.
    Construct(ConstructArgs),
    /// Run the staged construction on a finite set until it is refuted.
    Refute(ConstructArgs),
    /// Closure witness and seminorm checks for one composite seminorm.
    Verify(VerifyArgs),
    /// Supernormality of a subgroup (or of every subgroup).
    Supernormal(Common),
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long)]
    pub scenario: PathBuf,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Candidates of the set examined per stage.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Truncation depth for seminorms.
    #[arg(long)]
    pub trunc: Option<usize>,
    /// Re-verify every certificate and witness by direct evaluation.
    #[arg(long)]
    pub recheck: bool,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub stages: Option<usize>,
    /// Save the final state here.
    #[arg(long)]
    pub snapshot: Option<PathBuf>,
    /// Continue from a saved state.
    #[arg(long)]
    pub resume: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    pub q: Option<Vec<usize>>,
    /// Use a saved state instead of running the construction.
    #[arg(long)]
    pub resume: Option<PathBuf>,
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Ok,
    Refuted,
    Inconclusive,
    Violation,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Ok | Outcome::Refuted => EXIT_OK,
            Outcome::Inconclusive => EXIT_INCONCLUSIVE,
            Outcome::Violation => EXIT_VIOLATION,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub scenario_digest: String,
    pub outcome: Outcome,
    pub body: Json,
    pub timing: Timing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: u128,
}

impl Report {
    /// The part of the report that must be reproducible.
    pub fn body_text(&self) -> String {
        serde_json::to_string(&json!({
            "command": self.command,
            "scenario_digest": self.scenario_digest,
            "outcome": self.outcome,
            "body": self.body,
        }))
        .expect("JSON values serialize")
    }
}

/// A saved state together with the scenario it belongs to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub scenario_digest: String,
    pub state: StageState,
}

impl Snapshot {
    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn load(path: &Path, digest: &str) -> Result<StageState> {
        let text = std::fs::read_to_string(path)?;
        let snap: Snapshot = serde_json::from_str(&text)?;
        if snap.scenario_digest != digest {
            return Err(Error::Snapshot("snapshot belongs to a different scenario".into()));
        }
        StageState::from_json(&serde_json::to_string(&snap.state)?)
    }
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::CapExceeded { .. } => EXIT_INCONCLUSIVE,
        Error::Invariant(_) | Error::IllDefinedWeights(_) => EXIT_VIOLATION,
        _ => EXIT_INPUT,
    }
}

/// Parses arguments, runs one command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let out = match &cli.command {
        Command::Closure(c) | Command::Supernormal(c) => c.out.clone(),
        Command::Construct(c) | Command::Refute(c) => c.common.out.clone(),
        Command::Verify(v) => v.common.out.clone(),
    };
    match run(&cli.command) {
        Ok(report) => {
            let text = serde_json::to_string_pretty(&report).expect("JSON values serialize");
            let written = match &out {
                Some(path) => std::fs::write(path, text + "\n"),
                None => {
                    println!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return EXIT_INPUT;
            }
            report.outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

pub fn run(command: &Command) -> Result<Report> {
    let started = Instant::now();
    let (name, common) = match command {
        Command::Closure(c) => ("closure", c),
        Command::Construct(c) => ("construct", &c.common),
        Command::Refute(c) => ("refute", &c.common),
        Command::Verify(v) => ("verify", &v.common),
        Command::Supernormal(c) => ("supernormal", c),
    };
    let (scenario, bytes) = Scenario::load(&common.scenario)?;
    let digest = digest(&bytes);
    let resolved = Resolved::new(scenario)?;
    let (outcome, body) = match command {
        Command::Closure(c) => run_closure(&resolved, c)?,
        Command::Construct(c) => run_construct(&resolved, c, &digest, false)?,
        Command::Refute(c) => run_construct(&resolved, c, &digest, true)?,
        Command::Verify(v) => run_verify(&resolved, v, &digest)?,
        Command::Supernormal(c) => run_supernormal(&resolved, c)?,
    };
    Ok(Report {
        command: name.to_string(),
        scenario_digest: digest,
        outcome,
        body,
        timing: Timing {
            elapsed_ms: started.elapsed().as_millis(),
        },
    })
}

fn fmt(group: &Group, x: &Element) -> String {
    group.format_element(x)
}

fn fmt_all<'a>(group: &Group, xs: impl IntoIterator<Item = &'a Element>) -> Vec<String> {
    xs.into_iter().map(|x| fmt(group, x)).collect()
}

fn recheck_json(requested: bool, result: Result<()>) -> Result<Json> {
    if !requested {
        return Ok(Json::Null);
    }
    match result {
        Ok(()) => Ok(json!("passed")),
        Err(Error::Invariant(m)) => Ok(json!({ "failed": m })),
        Err(e) => Err(e),
    }
}

fn recheck_failed(v: &Json) -> bool {
    v.get("failed").is_some()
}

pub fn run_closure(r: &Resolved, c: &Common) -> Result<(Outcome, Json)> {
    let group = &r.group;
    if !group.is_finite() {
        return Err(Error::NotFinite);
    }
    let cap = r.scenario.policy.monoid_cap.unwrap_or(DEFAULT_STATE_CAP);
    let family = ElementaryFamily::compute(group, cap)?;
    let spec = r.target_set()?;
    let whole = Subgroup::whole(group.clone());
    let a: Vec<Element> = spec.enumerate(&whole)?.collect();
    let result = family.closure_of(&a)?;
    let recheck = recheck_json(c.recheck, result.verify(group))?;
    let outcome = if recheck_failed(&recheck) { Outcome::Violation } else { Outcome::Ok };
    Ok((
        outcome,
        json!({
            "group": group.describe(),
            "word_functions": family.function_count(),
            "elementary_sets": family.len(),
            "closure": result.report(group),
            "recheck": recheck,
        }),
    ))
}

fn refutation_json(group: &Group, r: &ClosureRefutation) -> Json {
    json!({
        "stage": r.stage,
        "arguments": fmt_all(group, &r.arguments),
        "functions": r.functions.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        "cover": r.cover.iter().map(|(y, k)| json!({ "element": fmt(group, y), "function": k })).collect::<Vec<_>>(),
    })
}

/// Every recorded witness solves its candidate and misses the identity.
fn recheck_stages(inst: &Instance, state: &StageState) -> Result<()> {
    let group = inst.group();
    for rec in &state.records {
        let mut args = state.stage_arguments(rec.stage)?;
        args.push(group.identity());
        for c in &rec.covered {
            if group.is_identity(&c.witness.evaluate(group, &args)?) {
                return Err(Error::Invariant(format!("`{}` vanishes at the identity", c.witness)));
            }
            let mut at = args.clone();
            *at.last_mut().expect("non-empty") = c.element.clone();
            if !group.is_identity(&c.witness.evaluate(group, &at)?) {
                return Err(Error::Invariant(format!(
                    "{} does not solve `{}`",
                    fmt(group, &c.element),
                    c.witness
                )));
            }
        }
    }
    Ok(())
}

/// Per-stage invariants, each decided afresh.
pub fn stage_invariants(inst: &Instance, state: &StageState) -> Result<Vec<Json>> {
    let group = inst.group();
    let mut rows = Vec::new();
    for j in 1..=state.stage {
        let x = state.x(j).expect("stage completed");
        let identity_outside = stagewise::membership(inst, state, j, &group.identity())?.witness.is_none();
        rows.push(json!({
            "stage": j,
            "identity_not_in_B": identity_outside,
            "x_in_A": inst.a.contains(group, x),
            "x_not_numbered_before": !state.numbered[..=j].contains(x),
            "transfer": stagewise::transfer_check(inst, state, j + 1)?,
        }));
    }
    Ok(rows)
}

fn invariants_hold(rows: &[Json]) -> bool {
    rows.iter().all(|row| {
        ["identity_not_in_B", "x_in_A", "x_not_numbered_before", "transfer"]
            .iter()
            .all(|k| row[k] == json!(true))
    })
}

fn state_json(inst: &Instance, state: &StageState, materialize: usize) -> Result<Json> {
    let group = inst.group();
    let prefix = state.numbering.materialize(&inst.h, materialize)?;
    Ok(json!({
        "completed_stages": state.stage,
        "numbered": fmt_all(group, &state.numbered),
        "chosen": fmt_all(group, &state.chosen),
        "alpha": state.alpha,
        "alpha_len": state.alpha_len,
        "gstar_prefix": prefix.iter().map(|(p, x)| json!([p, fmt(group, x)])).collect::<Vec<_>>(),
        "stages": state.records.iter().map(|rec| json!({
            "stage": rec.stage,
            "chosen": fmt(group, &rec.chosen),
            "states": rec.states,
            "covered": rec.covered.iter().map(|c| json!([fmt(group, &c.element), c.witness.to_string()])).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    }))
}

fn start_state(inst: &Instance, resume: Option<&Path>, digest: &str) -> Result<StageState> {
    match resume {
        Some(path) => {
            let s = Snapshot::load(path, digest)?;
            if s.policy != inst.policy {
                return Err(Error::Snapshot("snapshot was produced under a different policy".into()));
            }
            Ok(s)
        }
        None => stagewise::init_state(inst),
    }
}

pub fn run_construct(r: &Resolved, c: &ConstructArgs, digest: &str, refute: bool) -> Result<(Outcome, Json)> {
    let inst = r.instance(c.common.budget)?;
    if refute && !inst.a.is_declared_finite() {
        return Err(Error::Scenario("refute needs an explicitly listed finite set".into()));
    }
    let default = if refute { DEFAULT_REFUTE_STAGES } else { DEFAULT_STAGES };
    let target = c.stages.or(r.scenario.construct.stages).unwrap_or(default);
    let materialize = r.scenario.construct.materialize.unwrap_or(DEFAULT_MATERIALIZE);
    let mut state = start_state(&inst, c.resume.as_deref(), digest)?;
    let mut stop = None;
    while state.stage < target {
        match stagewise::advance_stage(&inst, &state)? {
            StageOutcome::Advanced(next) => state = *next,
            other => {
                stop = Some(other);
                break;
            }
        }
    }
    if let Some(path) = &c.snapshot {
        Snapshot {
            scenario_digest: digest.to_string(),
            state: state.clone(),
        }
        .save(path)?;
    }
    let group = inst.group();
    let invariants = stage_invariants(&inst, &state)?;
    let mut recheck_result = recheck_stages(&inst, &state);
    let (mut outcome, result) = match &stop {
        None => (Outcome::Ok, json!({ "kind": "completed", "stages": state.stage })),
        Some(StageOutcome::Refuted(refutation)) => {
            let listed: Option<Vec<Element>> = match &inst.a {
                crate::sets::SubsetSpec::Elements { elements } => Some(elements.clone()),
                _ => None,
            };
            if recheck_result.is_ok() {
                recheck_result = refutation.recheck(group, listed.as_deref());
            }
            (
                Outcome::Refuted,
                json!({ "kind": "refuted", "certificate": refutation_json(group, refutation) }),
            )
        }
        Some(StageOutcome::Inconclusive { stage, scanned }) => (
            Outcome::Inconclusive,
            json!({ "kind": "inconclusive", "stage": stage, "scanned": scanned, "scan_budget": inst.policy.scan_budget }),
        ),
        Some(StageOutcome::Advanced(_)) => unreachable!(),
    };
    let recheck = recheck_json(c.common.recheck, recheck_result)?;
    if !invariants_hold(&invariants) || recheck_failed(&recheck) {
        outcome = Outcome::Violation;
    }
    Ok((
        outcome,
        json!({
            "group": group.describe(),
            "policy": {
                "selection": stagewise::SELECTION_POLICY,
                "state_cap": inst.policy.state_cap,
                "scan_budget": inst.policy.scan_budget,
            },
            "result": result,
            "state": state_json(&inst, &state, materialize)?,
            "invariants": invariants,
            "recheck": recheck,
        }),
    ))
}

fn factorization_json(gens: &WeightedGeneratorSet, f: &Factorization) -> Json {
    json!({
        "target": fmt(gens.group(), &f.target),
        "weight": seminorm::format_rational(&f.weight),
        "steps": f.steps.iter().map(|s| json!({
            "generator": s.generator,
            "inverse": s.inverse,
            "weight": seminorm::format_rational(&gens.generators[s.generator].weight),
        })).collect::<Vec<_>>(),
    })
}

fn generators_json(gens: &WeightedGeneratorSet) -> Json {
    json!({
        "stage_index": gens.stage_index,
        "truncation": gens.truncation,
        "generators": gens.generators.iter().map(|g| json!({
            "element": fmt(gens.group(), &g.element),
            "weight": seminorm::format_rational(&g.weight),
            "labels": g.labels,
        })).collect::<Vec<_>>(),
    })
}

pub fn run_verify(r: &Resolved, v: &VerifyArgs, digest: &str) -> Result<(Outcome, Json)> {
    let inst = r.instance(v.common.budget)?;
    let spec = r.seminorm_spec(v.p.clone(), v.q.clone(), v.common.trunc)?;
    let def = r.scenario.verify.as_ref();
    let samples_n = v.samples.or_else(|| def.and_then(|d| d.samples)).unwrap_or(DEFAULT_SAMPLES);
    let s = spec.witness_index();
    let needed = s.max(spec.truncation);
    let mut state = start_state(&inst, v.resume.as_deref(), digest)?;
    if v.resume.is_none() {
        match stagewise::run_to(&inst, state, needed)? {
            StageOutcome::Advanced(next) => state = *next,
            StageOutcome::Refuted(_) => {
                return Err(Error::Scenario("the set is refuted before enough stages complete".into()))
            }
            StageOutcome::Inconclusive { stage, scanned } => {
                return Ok((
                    Outcome::Inconclusive,
                    json!({ "kind": "inconclusive", "stage": stage, "scanned": scanned }),
                ))
            }
        }
    }
    let group = inst.group();
    let settled_cap = r.scenario.policy.settled_cap.unwrap_or(seminorm::DEFAULT_SETTLED_CAP);
    let mut eval = Evaluator::new(&inst.h, &state);
    eval.cap = settled_cap;
    let witness = eval.closure_witness(&spec, &inst.a)?;
    let at_identity = eval.composite(&spec, &group.identity())?;

    let samples: Vec<Element> = stagewise::materialize_gstar(&inst, &state, samples_n)?;
    let trunc = spec.truncation;
    let mut axioms = Vec::new();
    let mut monotone = Vec::new();
    for j in 1..=trunc {
        let gens = WeightedGeneratorSet::build(group, &state, j, trunc)?;
        axioms.push(seminorm::check_axioms(&gens, &samples, settled_cap)?);
        if j < trunc {
            let coarse = WeightedGeneratorSet::build(group, &state, j, trunc - 1)?;
            let fine_ball = gens.ball(&samples, settled_cap)?;
            let coarse_ball = coarse.ball(&samples, settled_cap)?;
            let mut ok = true;
            for x in &samples {
                ok &= fine_ball.value(x)? <= coarse_ball.value(x)?;
            }
            monotone.push(json!({ "stage_index": j, "from": trunc - 1, "to": trunc, "holds": ok }));
        }
    }
    let other = SeminormSpec::new(
        def.and_then(|d| d.other_p.clone()).unwrap_or_else(|| vec![0]),
        def.and_then(|d| d.other_q.clone()).unwrap_or_else(|| vec![1]),
        trunc,
    )?;
    let fb_samples = &samples[..samples.len().min(FILTERBASE_SAMPLES)];
    let filterbase = seminorm::filterbase_check(&mut eval, &spec, &other, fb_samples)?;

    let wspec = SeminormSpec {
        truncation: trunc.max(s),
        ..spec.clone()
    };
    let mut recheck_result: Result<()> = Ok(());
    let mut terms = Vec::new();
    for (k, term) in witness.computed.terms.iter().enumerate() {
        let gens = eval.generators(term.q, wspec.truncation)?;
        let single = &witness.single_generator_proofs[k];
        if recheck_result.is_ok() {
            recheck_result = single.verify(gens);
        }
        if let (Some(f), true) = (&term.factorization, recheck_result.is_ok()) {
            recheck_result = f.verify(gens);
        }
        terms.push(json!({
            "p": term.p,
            "q": term.q,
            "conjugated": fmt(group, &term.conjugated),
            "value": term.value,
            "single_generator": factorization_json(gens, single),
            "shortest": term.factorization.as_ref().map(|f| factorization_json(gens, f)),
            "generator_set": generators_json(gens),
        }));
    }
    let recheck = recheck_json(v.common.recheck, recheck_result)?;
    let below_one = witness.bound < seminorm::Rational::from_integer(1);
    let all_axioms = axioms.iter().all(|a| a.holds());
    let all_monotone = monotone.iter().all(|m| m["holds"] == json!(true));
    let ok = below_one
        && witness.in_a
        && at_identity.value == seminorm::Value::zero()
        && all_axioms
        && all_monotone
        && filterbase.additive
        && filterbase.nested
        && !recheck_failed(&recheck);
    Ok((
        if ok { Outcome::Ok } else { Outcome::Violation },
        json!({
            "spec": { "p": spec.p, "q": spec.q, "n": spec.n(), "truncation": trunc },
            "witness": {
                "s": witness.s,
                "element": fmt(group, &witness.element),
                "in_A": witness.in_a,
                "bound": seminorm::format_rational(&witness.bound),
                "computed": witness.computed.value,
                "terms": terms,
            },
            "identity_value": at_identity.value,
            "axioms": axioms,
            "truncation_monotone": monotone,
            "filterbase": filterbase,
            "hausdorff": seminorm::HAUSDORFF_STATUS,
            "completed_stages": state.stage,
            "recheck": recheck,
        }),
    ))
}

fn supernormal_json(group: &Group, report: &SupernormalityReport) -> Json {
    json!({
        "supernormal": report.supernormal,
        "coverage": report.coverage,
        "rows": report.rows.iter().map(|row| match row {
            Realization::Witness { x, y } => json!({ "x": fmt(group, x), "y": fmt(group, y) }),
            Realization::Violation { x, refutations } => json!({
                "x": fmt(group, x),
                "violations": refutations.iter().map(|(y, h)| json!([fmt(group, y), fmt(group, h)])).collect::<Vec<_>>(),
            }),
        }).collect::<Vec<_>>(),
    })
}

pub fn run_supernormal(r: &Resolved, c: &Common) -> Result<(Outcome, Json)> {
    let group = &r.group;
    let def = r
        .scenario
        .supernormal
        .as_ref()
        .ok_or_else(|| Error::Scenario("missing [supernormal] section".into()))?;
    let mut recheck_result = Ok(());
    if matches!(def.subgroup, SubgroupDef::All) {
        let all: Vec<Element> = group.enumerate().collect();
        let mut rows = Vec::new();
        let mut agree = true;
        for sub in supernormal::all_subgroups(group)? {
            let report = supernormal::is_supernormal_finite(&sub)?;
            let oracle = supernormal::supernormal_center_oracle(&sub)?;
            agree &= oracle == report.supernormal;
            if c.recheck && recheck_result.is_ok() {
                recheck_result = report.recheck(group, &all, &sub);
            }
            rows.push(json!({
                "subgroup": fmt_all(group, &sub.enumerate().collect::<Vec<_>>()),
                "supernormal": report.supernormal,
                "center_oracle": oracle,
            }));
        }
        let recheck = recheck_json(c.recheck, recheck_result)?;
        let outcome = if agree && !recheck_failed(&recheck) { Outcome::Ok } else { Outcome::Violation };
        return Ok((
            outcome,
            json!({
                "group": group.describe(),
                "center": fmt_all(group, &supernormal::center(group)?),
                "subgroups": rows,
                "oracle_agreement": agree,
                "recheck": recheck,
            }),
        ));
    }
    let sub = r.subgroup(Some(&def.subgroup))?;
    let (report, oracle, tested) = if group.is_finite() {
        let report = supernormal::is_supernormal_finite(&sub)?;
        (report, Some(supernormal::supernormal_center_oracle(&sub)?), group.enumerate().collect())
    } else {
        let n = def
            .samples
            .ok_or_else(|| Error::Scenario("an infinite group needs `samples` in [supernormal]".into()))?;
        let xs: Vec<Element> = group.enumerate().take(n).collect();
        if let Some((a, b)) = sub.check_closure(&xs) {
            return Err(Error::NotSubgroup(format!("not closed at ({}, {})", fmt(group, &a), fmt(group, &b))));
        }
        if sub.enumerate().is_finite() || sub.is_finite() {
            (supernormal::realize(group, &sub, &xs, &xs, Coverage::Sampled), None, xs)
        } else {
            return Err(Error::Scenario(
                "sampled mode needs a finite subgroup to search for witnesses".into(),
            ));
        }
    };
    if c.recheck {
        recheck_result = report.recheck(group, &tested, &sub);
    }
    let recheck = recheck_json(c.recheck, recheck_result)?;
    let agree = oracle.is_none_or(|o| o == report.supernormal);
    let outcome = if agree && !recheck_failed(&recheck) { Outcome::Ok } else { Outcome::Violation };
    Ok((
        outcome,
        json!({
            "group": group.describe(),
            "subgroup": fmt_all(group, &sub.enumerate().take(tested.len().max(1)).collect::<Vec<_>>()),
            "report": supernormal_json(group, &report),
            "center_oracle": oracle,
            "recheck": recheck,
        }),
    ))
}
