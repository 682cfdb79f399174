//! End-to-end acceptance checks. Prints one line per criterion and exits
//! with status 1 if any of them fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use flp_core::connectives::{check_adjoint, grid, grid_triples, Registry};
use flp_core::fixpoint::{
    enumerate_stable_models, grid_point, grid_size, is_stable_fixpoint_of, least_model, stable_approximator, well_founded,
    ConvergencePolicy, ProgramApproximator, DEFAULT_GRID_CAP,
};
use flp_core::ls::{aw, aw_model, zeta, ApproximateInterpretation, LsProgram};
use flp_core::random::*;
use flp_core::semantics::{approximator, reduct, tp};
use flp_core::strata::{check_operator_stratifiable, split_well_founded, Partition};
use flp_core::ultimate::{ultimate_kripke_kleene, ultimate_well_founded, UltimateApproximator, UltimateMethod};
use flp_core::{Interpretation, InterpretationPair, Program, TruthValue};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn exact() -> ConvergencePolicy {
    ConvergencePolicy::exact()
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    format!("error: {e}")
}

/// Fixed sample of family-G programs, at most 5 atoms and 6 rules, constants
/// in tenths.
fn corpus() -> Vec<Program> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE);
    let shape = ProgramShape::default();
    (0..500).map(|_| random_program(&mut rng, &shape)).collect()
}

fn fixtures() -> Vec<(&'static str, Program)> {
    vec![("P1", program(P1)), ("P2", program(P2)), ("P3", program(P3)), ("P4", program(P4))]
}

fn least_model_of_positive_program() -> Outcome {
    let p1 = program(P1);
    let start = Instant::now();
    let lm = least_model(&p1, &exact()).map_err(fail)?;
    let elapsed = start.elapsed();
    let expected = interp(&p1, &[("r", 3, 10), ("s", 0, 1)]);
    ensure!(lm.value == expected, "lfp = {}, expected {expected}", lm.value);
    ensure!(lm.is_converged(), "status {}", lm.status);
    ensure!(lm.steps <= 2, "{} productive steps", lm.steps);
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("{} in {} steps", lm.value, lm.steps))
}

fn first_stable_revision_step() -> Outcome {
    let p2 = program(P2);
    let got = stable_approximator(&p2, &InterpretationPair::least_precise(p2.signature()), &exact()).map_err(fail)?;
    let expected = pair(
        &p2,
        &[("p", 3, 10), ("q", 0, 1), ("r", 3, 10), ("s", 0, 1)],
        &[("p", 1, 1), ("q", 1, 1), ("r", 3, 10), ("s", 0, 1)],
    );
    ensure!(got == expected, "got {got}");
    Ok(format!("{got}"))
}

fn approximate_route_matches_well_founded(corpus: &[Program]) -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    let programs = fixtures().into_iter().map(|(_, p)| p).chain(corpus.iter().cloned());
    for p in programs {
        let wf = well_founded(&p, &exact()).map_err(fail)?.into_value().map_err(fail)?;
        let model = aw_model(&LsProgram::new(&p), &exact()).map_err(fail)?.into_value().map_err(fail)?;
        ensure!(zeta(&model) == wf, "{p}: zeta(aw_model) = {} but WF = {wf}", zeta(&model));
        checked += 1;
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(format!("{checked} programs in {:.1}s", elapsed.as_secs_f64()))
}

fn aw_fixpoint_that_is_not_stable() -> Outcome {
    let p3 = program(P3);
    let ls = LsProgram::new(&p3);
    let (one, zero) = (TruthValue::one(), TruthValue::zero());
    let x = ApproximateInterpretation::from_values(
        ls.signature(),
        vec![(one.clone(), one.clone()), (zero.clone(), one.clone()), (zero, one)],
    )
    .map_err(fail)?;
    let step = aw(&ls, &x, &exact()).map_err(fail)?;
    ensure!(step == x, "aw(X) = {step}");
    let revised = stable_approximator(&p3, &zeta(&x), &exact()).map_err(fail)?;
    ensure!(revised != zeta(&x), "zeta(X) is a stable fixpoint");
    Ok(format!("aw(X) = X, stable revision gives {revised}"))
}

fn reduct_matches_lower_component() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let shape = ProgramShape::default();
    for _ in 0..1000 {
        let p = random_program(&mut rng, &shape);
        let j = random_interpretation(&mut rng, p.signature(), 10);
        let i = random_interpretation(&mut rng, p.signature(), 10);
        let pair = InterpretationPair::new(j.clone(), i.clone()).map_err(fail)?;
        let lower = approximator(&p, &pair).map_err(fail)?.lower().clone();
        let via_reduct = tp(&reduct(&p, &i).map_err(fail)?, &j).map_err(fail)?;
        ensure!(lower == via_reduct, "{p} at J={j}, I={i}: {lower} vs {via_reduct}");
    }
    Ok("1000 triples".into())
}

fn p2_stable_family() -> Vec<Interpretation> {
    let p2 = program(P2);
    (3..=10)
        .map(|k| interp(&p2, &[("p", k, 10), ("q", 10 - k, 10), ("r", 3, 10), ("s", 0, 1)]))
        .collect()
}

fn stable_models_on_the_grid() -> Outcome {
    let p2 = program(P2);
    let policy = exact();
    let found: BTreeSet<Vec<TruthValue>> = enumerate_stable_models(&p2, 10, DEFAULT_GRID_CAP, &policy)
        .map_err(fail)?
        .into_iter()
        .map(|i| i.values().to_vec())
        .collect();
    let expected: BTreeSet<Vec<TruthValue>> = p2_stable_family().into_iter().map(|i| i.values().to_vec()).collect();
    ensure!(found == expected, "enumerated {} models, expected {}", found.len(), expected.len());

    // Both characterisations at every grid point, computed separately.
    let revision = ProgramApproximator(&p2);
    let points = grid_size(10, p2.signature().len()).expect("small grid");
    let mut by_reduct = BTreeSet::new();
    for k in 0..points {
        let i = grid_point(p2.signature(), 10, k);
        let lfp = least_model(&reduct(&p2, &i).map_err(fail)?, &policy)
            .map_err(fail)?
            .into_value()
            .map_err(fail)?;
        let ii = InterpretationPair::exact(i.clone());
        let fixed = is_stable_fixpoint_of(&revision, &ii, &policy).map_err(fail)?;
        ensure!((lfp == i) == fixed, "characterisations disagree at {i}");
        if fixed {
            by_reduct.insert(i.values().to_vec());
        }
    }
    ensure!(by_reduct == expected, "grid oracle found {} models", by_reduct.len());
    Ok(format!("{} models, {points} grid points agree", found.len()))
}

fn well_founded_below_stable_models() -> Outcome {
    let p2 = program(P2);
    let wf = well_founded(&p2, &exact()).map_err(fail)?.into_value().map_err(fail)?;
    let expected = pair(
        &p2,
        &[("p", 3, 10), ("q", 0, 1), ("r", 3, 10), ("s", 0, 1)],
        &[("p", 1, 1), ("q", 7, 10), ("r", 3, 10), ("s", 0, 1)],
    );
    ensure!(wf == expected, "WF = {wf}");
    for m in p2_stable_family() {
        ensure!(
            wf.leq_precision(&InterpretationPair::exact(m.clone())).map_err(fail)?,
            "WF not below {m}"
        );
    }
    Ok(format!("{wf}"))
}

fn two_valued_degeneration() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let policy = exact();
    for _ in 0..300 {
        let p = random_classical_program(&mut rng, 6, 8);
        let rules = classical_rules(&p);
        let n = p.signature().len();
        let expected: BTreeSet<Vec<TruthValue>> = classical_stable_models(&rules, n)
            .iter()
            .map(|m| indicator(&p, m).values().to_vec())
            .collect();
        let found: BTreeSet<Vec<TruthValue>> = enumerate_stable_models(&p, 1, DEFAULT_GRID_CAP, &policy)
            .map_err(fail)?
            .into_iter()
            .map(|i| i.values().to_vec())
            .collect();
        ensure!(found == expected, "{p}: stable models differ");
        let (t, not_false) = classical_well_founded(&rules);
        let oracle = InterpretationPair::new(indicator(&p, &t), indicator(&p, &not_false)).map_err(fail)?;
        let wf = well_founded(&p, &policy).map_err(fail)?.into_value().map_err(fail)?;
        ensure!(wf == oracle, "{p}: WF {wf}, oracle {oracle}");
    }
    Ok("300 classical programs".into())
}

fn ultimate_bounds_for_self_negation() -> Outcome {
    let p4 = program(P4);
    let policy = exact();
    let mut failures = vec![];
    let (kk, _) = ultimate_kripke_kleene(&p4, UltimateMethod::ExactPerHead, &policy).map_err(fail)?;
    let kk_expected = pair(&p4, &[("p", 1, 2)], &[("p", 1, 1)]);
    if kk.value != kk_expected {
        failures.push(format!("ultimate KK = {}", kk.value));
    }
    let (uwf, _) = ultimate_well_founded(&p4, UltimateMethod::ExactPerHead, &policy).map_err(fail)?;
    let uwf_expected = pair(&p4, &[("p", 1, 2)], &[("p", 1, 1)]);
    if uwf.value != uwf_expected {
        failures.push(format!("ultimate WF = {}, expected {uwf_expected}", uwf.value));
    }
    let wf = well_founded(&p4, &policy).map_err(fail)?.value;
    if wf != InterpretationPair::least_precise(p4.signature()) {
        failures.push(format!("ordinary WF = {wf}"));
    }
    if failures.is_empty() {
        Ok(format!("KK {}, WF {}", kk.value, uwf.value))
    } else {
        Err(failures.join("; "))
    }
}

/// Stable models of `p` reachable by the tests: grid enumeration for small
/// signatures, otherwise the exact WF and images of the coarse grid under
/// `I -> lfp(P_I)`.
fn stable_model_candidates(p: &Program, wf: &InterpretationPair) -> Result<Vec<Interpretation>, String> {
    let policy = exact();
    let n = p.signature().len();
    if grid_size(10, n).is_some_and(|g| g <= 1331) {
        return enumerate_stable_models(p, 10, DEFAULT_GRID_CAP, &policy).map_err(fail);
    }
    let gl = |i: &Interpretation| -> Result<Interpretation, String> {
        least_model(&reduct(p, i).map_err(fail)?, &policy)
            .map_err(fail)?
            .into_value()
            .map_err(fail)
    };
    let mut seeds = vec![];
    if wf.is_exact() {
        seeds.push(wf.lower().clone());
    }
    for k in 0..grid_size(2, n).expect("small grid") {
        let i = grid_point(p.signature(), 2, k);
        seeds.push(gl(&gl(&i)?)?);
    }
    let mut out = vec![];
    for s in seeds {
        if gl(&s)? == s && !out.contains(&s) {
            out.push(s);
        }
    }
    Ok(out)
}

fn ultimate_is_more_precise(corpus: &[Program]) -> Outcome {
    let policy = exact();
    let (mut eligible, mut models) = (0, 0);
    for p in corpus {
        let Ok(u) = UltimateApproximator::new(p, UltimateMethod::ExactPerHead) else {
            continue;
        };
        eligible += 1;
        let wf = well_founded(p, &policy).map_err(fail)?.into_value().map_err(fail)?;
        let uwf = flp_core::fixpoint::well_founded_of(&u, &policy)
            .map_err(fail)?
            .into_value()
            .map_err(fail)?;
        ensure!(wf.leq_precision(&uwf).map_err(fail)?, "{p}: WF {wf} not below ultimate WF {uwf}");
        for i in stable_model_candidates(p, &wf)? {
            let ii = InterpretationPair::exact(i.clone());
            ensure!(
                is_stable_fixpoint_of(&ProgramApproximator(p), &ii, &policy).map_err(fail)?,
                "{p}: {i} is not stable"
            );
            ensure!(
                is_stable_fixpoint_of(&u, &ii, &policy).map_err(fail)?,
                "{p}: stable {i} not ultimate stable"
            );
            models += 1;
        }
    }
    ensure!(eligible > 0, "no eligible programs");
    Ok(format!("{eligible} eligible programs, {models} stable models"))
}

fn stratified_evaluation() -> Outcome {
    let policy = exact();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let p2 = program(P2);
    let part = Partition::parse("s,r|p,q", p2.signature()).map_err(fail)?;
    let mut cases = vec![(p2, part)];
    let shape = ProgramShape::default();
    for k in 0..100 {
        cases.push(random_stratified_program(&mut rng, &shape, 2 + k % 2));
    }
    for (p, part) in &cases {
        let out = split_well_founded(p, part, &policy).map_err(fail)?;
        ensure!(
            out.glued == out.monolithic,
            "{p} over {part}: split {} vs {}",
            out.glued,
            out.monolithic
        );
        let report = check_operator_stratifiable(p, part, 1000, &mut rng).map_err(fail)?;
        ensure!(report.passed(), "{p} over {part}: {report}");
    }
    Ok(format!("{} programs", cases.len()))
}

fn connective_and_approximator_properties(corpus: &[Program]) -> Outcome {
    let reg = Registry::builtin();
    let g = grid(20);
    for id in ["G", "L"] {
        let report = check_adjoint(&*reg.family(id).map_err(fail)?, grid_triples(&g));
        ensure!(report.passed(), "{report}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for p in corpus {
        for _ in 0..1000 {
            let (a, b) = random_precision_chain(&mut rng, p.signature(), 10);
            let (fa, fb) = (approximator(p, &a).map_err(fail)?, approximator(p, &b).map_err(fail)?);
            ensure!(fa.leq_precision(&fb).map_err(fail)?, "{p}: not monotone at {a} <=p {b}");
            ensure!(fb.is_consistent(), "{p}: {b} maps to inconsistent {fb}");
        }
    }
    Ok(format!("adjointness on {} triples, {} pairs", g.len().pow(3), corpus.len() * 1000))
}

fn main() -> ExitCode {
    let corpus = corpus();
    let criteria: Vec<Criterion<'_>> = vec![
        (
            "least model of a weighted positive program",
            Box::new(least_model_of_positive_program),
        ),
        ("first stable revision step", Box::new(first_stable_revision_step)),
        (
            "approximate well-founded route agrees",
            Box::new(|| approximate_route_matches_well_founded(&corpus)),
        ),
        (
            "aw fixpoint that is not a stable fixpoint",
            Box::new(aw_fixpoint_that_is_not_stable),
        ),
        ("reduct matches the lower component", Box::new(reduct_matches_lower_component)),
        ("stable models on the 1/10 grid", Box::new(stable_models_on_the_grid)),
        (
            "well-founded pair below every stable model",
            Box::new(well_founded_below_stable_models),
        ),
        ("two-valued degeneration", Box::new(two_valued_degeneration)),
        ("ultimate bounds for p <- p. p <- ~p.", Box::new(ultimate_bounds_for_self_negation)),
        (
            "ultimate approximation is more precise",
            Box::new(|| ultimate_is_more_precise(&corpus)),
        ),
        ("stratified evaluation", Box::new(stratified_evaluation)),
        (
            "connective and approximator properties",
            Box::new(|| connective_and_approximator_properties(&corpus)),
        ),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.2}s): {detail}", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {why}", n + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
