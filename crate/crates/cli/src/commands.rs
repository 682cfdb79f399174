use std::path::PathBuf;

use flp_core::connectives::{check_adjoint, check_aggregator, check_axioms, grid, grid_triples, CheckReport};
use flp_core::fixpoint::{enumerate_stable_models, is_stable_model, kripke_kleene, well_founded, DEFAULT_GRID_CAP};
use flp_core::ls::{aw_model, crosscheck_well_founded, zeta, LsProgram};
use flp_core::random::random_interpretation;
use flp_core::semantics::{approximator, reduct, tp};
use flp_core::strata::{
    check_operator_stratifiable, is_stratifiable, split_stable_check, split_well_founded, suggest_partition, Partition,
};
use flp_core::syntax::parse_program_with;
use flp_core::ultimate::{ultimate_kripke_kleene, ultimate_well_founded, UltimateMethod, ValueMethod};
use flp_core::{Atom, ConvergencePolicy, FixpointResult, Interpretation, InterpretationPair, Mode, Number, Program, Registry, TruthValue};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::config::{ArithmeticMode, RunConfig};
use crate::dot::TraceGraph;
use crate::output::{bounds_text, bounds_value, interpretation_value, Report};

/// Samples drawn by the randomised checks; the seed is fixed so output is
/// reproducible.
const SAMPLES: usize = 1000;
const SEED: u64 = 0;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Engine(#[from] flp_core::Error),
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixpointKind {
    KripkeKleene,
    WellFounded,
    UltimateKripkeKleene,
    UltimateWellFounded,
}

impl FixpointKind {
    fn kind(self) -> &'static str {
        match self {
            FixpointKind::KripkeKleene => "kripke_kleene",
            FixpointKind::WellFounded => "well_founded",
            FixpointKind::UltimateKripkeKleene => "ultimate_kripke_kleene",
            FixpointKind::UltimateWellFounded => "ultimate_well_founded",
        }
    }

    fn title(self) -> &'static str {
        match self {
            FixpointKind::KripkeKleene => "Kripke-Kleene fixpoint",
            FixpointKind::WellFounded => "well-founded fixpoint",
            FixpointKind::UltimateKripkeKleene => "ultimate Kripke-Kleene fixpoint",
            FixpointKind::UltimateWellFounded => "ultimate well-founded fixpoint",
        }
    }
}

pub fn load(config: &RunConfig) -> CliResult<Program> {
    let text = std::fs::read_to_string(&config.program).map_err(|source| CliError::Io {
        path: config.program.clone(),
        source,
    })?;
    let registry = Registry::builtin();
    let program = parse_program_with(&text, &registry, config.default_family(&registry)?).map_err(flp_core::Error::from)?;
    match config.mode {
        ArithmeticMode::Exact => {
            program.check_exact_mode()?;
            Ok(program)
        }
        ArithmeticMode::Approx => Ok(program.to_approximate()),
    }
}

/// Equal in exact mode, within epsilon otherwise.
fn close(policy: &ConvergencePolicy, d: &Number) -> bool {
    match &policy.mode {
        Mode::Exact => d == &Number::zero(),
        Mode::Epsilon(eps) => d <= eps.number(),
    }
}

fn record_check(report: &mut Report, r: &CheckReport) {
    report.line(format!("  {r}"));
    report.check(&format!("{} {}", r.subject, r.property), r.passed());
}

pub fn cmd_check(config: &RunConfig) -> CliResult<Report> {
    let program = load(config)?;
    let registry = Registry::builtin();
    let mut report = Report::new("check");
    let n = config.grid_or_default();
    let g = grid(n as i64);
    report.line(format!(
        "parsed {} rules over {} atoms ({})",
        program.rules().len(),
        program.signature().len(),
        if program.is_positive() { "positive" } else { "with negation" }
    ));
    report.line(format!("connective checks on the 1/{n} grid:"));
    for name in program.connective_names() {
        if let Ok(family) = registry.family(&name) {
            record_check(&mut report, &check_axioms(&family, &g));
            record_check(&mut report, &check_adjoint(&family, grid_triples(&g)));
        } else {
            let aggregator = registry.aggregator(&name)?;
            record_check(&mut report, &check_aggregator(&aggregator, &g, 2));
        }
    }
    report.field("atoms", program.signature().atoms().iter().map(Atom::to_string).collect::<Vec<_>>());
    report.field("rules", program.rules().len());
    report.field("grid", n);
    Ok(report)
}

fn trace_lines(report: &mut Report, trace: &Option<Vec<InterpretationPair>>) {
    if let Some(t) = trace {
        report.line("trace:");
        for (i, pair) in t.iter().enumerate() {
            report.line(format!("  {i}: {pair}"));
        }
        report.field("trace", t.iter().map(|p| bounds_value(p, None)).collect::<Vec<_>>());
    }
}

pub fn cmd_fixpoint(config: &RunConfig, which: FixpointKind) -> CliResult<Report> {
    let program = load(config)?;
    let policy = config.policy()?;
    let method = config.grid.map(UltimateMethod::Grid).unwrap_or(UltimateMethod::ExactPerHead);
    let (result, methods): (FixpointResult<InterpretationPair>, Option<Vec<ValueMethod>>) = match which {
        FixpointKind::KripkeKleene => (kripke_kleene(&program, &policy)?, None),
        FixpointKind::WellFounded => (well_founded(&program, &policy)?, None),
        FixpointKind::UltimateKripkeKleene => {
            let (r, m) = ultimate_kripke_kleene(&program, method, &policy)?;
            (r, Some(m))
        }
        FixpointKind::UltimateWellFounded => {
            let (r, m) = ultimate_well_founded(&program, method, &policy)?;
            (r, Some(m))
        }
    };
    let mut report = Report::new(which.kind());
    report.line(format!("{}: {} after {} steps", which.title(), result.status, result.steps));
    report.line(result.value.to_string());
    report.human.push_str(&bounds_text(&result.value, methods.as_deref()));
    report.field("bounds", bounds_value(&result.value, methods.as_deref()));
    report.field("steps", result.steps);
    report.field("status", result.status.to_string());
    if let Some(m) = &methods {
        report.field("method", method.to_string());
        report.field("methods", m.iter().map(ValueMethod::to_string).collect::<Vec<_>>());
    }
    report.check("converged", result.is_converged());
    trace_lines(&mut report, &result.trace);
    Ok(report)
}

/// Parses `p=0.5,q=1/2`; every atom of the signature needs a value.
pub fn parse_witness(program: &Program, text: &str) -> flp_core::Result<Interpretation> {
    let entries = text
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|entry| {
            let (name, value) = entry
                .split_once('=')
                .ok_or_else(|| flp_core::Error::InvalidConfig(format!("witness entry `{entry}` is not atom=value")))?;
            Ok((Atom::new(name.trim())?, TruthValue::parse(value.trim())?))
        })
        .collect::<flp_core::Result<Vec<_>>>()?;
    Interpretation::from_entries(program.signature(), entries)
}

fn partition_for(config: &RunConfig, program: &Program, report: &mut Report) -> flp_core::Result<Partition> {
    match &config.partition {
        Some(text) => {
            let part = Partition::parse(text, program.signature())?;
            report.line(format!("partition: {part}"));
            Ok(part)
        }
        None => {
            let part = suggest_partition(program);
            report.line(format!("partition (heuristic, strongly connected components): {part}"));
            Ok(part)
        }
    }
}

pub fn cmd_stable(config: &RunConfig, witness: Option<&str>, enumerate: bool) -> CliResult<Report> {
    let program = load(config)?;
    let policy = config.policy()?;
    let mut report = Report::new("stable");
    if let Some(text) = witness {
        let i = parse_witness(&program, text)?;
        let stable = is_stable_model(&program, &i, &policy)?;
        report.line(if stable { "stable" } else { "not stable" });
        report.field("witness", interpretation_value(&i));
        report.check("stable", stable);
        if config.partition.is_some() {
            let part = partition_for(config, &program, &mut report)?;
            let (verdicts, _) = split_stable_check(&program, &part, &i, &policy)?;
            for (stratum, v) in part.strata().iter().zip(&verdicts) {
                report.line(format!("  stratum {stratum}: {}", if *v { "stable" } else { "not stable" }));
            }
            report.field("strata", verdicts);
        }
    }
    if enumerate {
        let n = config.grid_or_default();
        let models = enumerate_stable_models(&program, n, DEFAULT_GRID_CAP, &policy.untraced())?;
        let wf = well_founded(&program, &policy.untraced())?.into_value()?;
        report.line(format!("{} stable models on the 1/{n} grid", models.len()));
        for m in &models {
            report.line(format!("  {m}"));
        }
        report.line("well-founded envelope:");
        report.human.push_str(&bounds_text(&wf, None));
        report.field("grid", n);
        report.field("models", models.iter().map(interpretation_value).collect::<Vec<_>>());
        report.field("well_founded", bounds_value(&wf, None));
    }
    if witness.is_none() && !enumerate {
        return Err(flp_core::Error::InvalidConfig("stable needs --witness or --enumerate".into()).into());
    }
    Ok(report)
}

pub fn cmd_crosscheck(config: &RunConfig) -> CliResult<Report> {
    let program = load(config)?;
    let policy = config.policy()?.with_trace(false);
    let mut report = Report::new("crosscheck");

    let cc = crosscheck_well_founded(&program, &policy)?;
    let via_aw = zeta(&cc.approximate.value);
    let agree = close(&policy, &via_aw.distance(&cc.stable.value)?);
    report.line(format!(
        "well-founded via stable revision ({} steps): {}",
        cc.stable.steps, cc.stable.value
    ));
    report.line(format!("well-founded via aw operator ({} steps): {via_aw}", cc.approximate.steps));
    report.line(format!("  routes {}", if agree { "agree" } else { "DISAGREE" }));
    report.field("stable_revision", bounds_value(&cc.stable.value, None));
    report.field("aw", bounds_value(&via_aw, None));
    report.field(
        "steps",
        serde_json::json!({ "stable_revision": cc.stable.steps, "aw": cc.approximate.steps }),
    );
    report.check("well_founded_routes", agree);

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let sig = program.signature();
    let mut mismatch = None;
    for _ in 0..SAMPLES {
        let j = random_interpretation(&mut rng, sig, 10);
        let i = random_interpretation(&mut rng, sig, 10);
        let lower = approximator(&program, &InterpretationPair::new(j.clone(), i.clone())?)?
            .lower()
            .clone();
        let via_reduct = tp(&reduct(&program, &i)?, &j)?;
        if !close(&policy, &lower.distance(&via_reduct)?) {
            mismatch = Some(format!("J = {j}, I = {i}: {lower} vs {via_reduct}"));
            break;
        }
    }
    match &mismatch {
        None => report.line(format!("reduct vs lower approximator on {SAMPLES} samples: agree")),
        Some(m) => report.line(format!("reduct vs lower approximator: DISAGREE at {m}")),
    }
    report.field("reduct_samples", SAMPLES);
    report.check("reduct_lower_component", mismatch.is_none());
    Ok(report)
}

pub fn cmd_strata(config: &RunConfig) -> CliResult<Report> {
    let program = load(config)?;
    let policy = config.policy()?.with_trace(false);
    let mut report = Report::new("strata");
    let part = partition_for(config, &program, &mut report)?;
    report.field("partition", part.to_string());
    let stratifiable = is_stratifiable(&program, &part)?;
    report.check("stratifiable", stratifiable);
    if !stratifiable {
        report.line("  not stratifiable: some rule body reads a later stratum");
        return Ok(report);
    }
    let out = split_well_founded(&program, &part, &policy)?;
    for (stratum, wf) in part.strata().iter().zip(&out.per_stratum) {
        report.line(format!("stratum {stratum}:"));
        report.human.push_str(&bounds_text(wf, None));
    }
    let agree = out.glued == out.monolithic;
    report.line(format!("glued: {}", out.glued));
    report.line(format!("monolithic: {}", out.monolithic));
    report.line(format!("  split and monolithic {}", if agree { "agree" } else { "DISAGREE" }));
    report.field(
        "per_stratum",
        out.per_stratum.iter().map(|p| bounds_value(p, None)).collect::<Vec<_>>(),
    );
    report.field("glued", bounds_value(&out.glued, None));
    report.check("split_matches_monolithic", agree);

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let sampled = check_operator_stratifiable(&program, &part, SAMPLES, &mut rng)?;
    report.line(format!(
        "operator agreement on {} sampled pairs: {}",
        sampled.checked,
        if sampled.passed() { "pass" } else { "FAIL" }
    ));
    report.field("operator_samples", sampled.checked);
    report.check("operator_stratifiable", sampled.passed());
    Ok(report)
}

pub fn cmd_trace(config: &RunConfig) -> CliResult<Report> {
    let program = load(config)?;
    let policy = config.policy()?.with_trace(true);
    let kk = kripke_kleene(&program, &policy)?;
    let wf = well_founded(&program, &policy)?;
    let aw = aw_model(&LsProgram::new(&program), &policy)?;
    let aw_pairs: Vec<InterpretationPair> = aw.trace.iter().flatten().map(zeta).collect();

    let mut graph = TraceGraph::default();
    graph.add_sequence("A_P", kk.trace.as_deref().unwrap_or_default());
    graph.add_sequence("A_P^st", wf.trace.as_deref().unwrap_or_default());
    graph.add_sequence("AW_P", &aw_pairs);
    let dot = graph.to_dot(program.signature());

    let mut report = Report::new("trace");
    report.human = dot.clone();
    report.field("dot", dot);
    report.field("nodes", graph.node_count());
    report.field(
        "steps",
        serde_json::json!({ "A_P": kk.steps, "A_P^st": wf.steps, "AW_P": aw.steps }),
    );
    report.check("converged", kk.is_converged() && wf.is_converged() && aw.is_converged());
    Ok(report)
}
