//! Splitting programs along a partition of their atoms.

use std::collections::BTreeMap;
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use rand::Rng;

use crate::error::{Error, Result};
use crate::fixpoint::{is_stable_model, well_founded, well_founded_of, Approximator, ConvergencePolicy, ProgramApproximator};
use crate::lattice::{Atom, Interpretation, InterpretationPair, Signature};
use crate::random::random_consistent_pair;
use crate::semantics::approximator_lower;
use crate::syntax::{Formula, Polarity, Program, Rule};

/// Ordered, disjoint strata covering a signature. Strata may be empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    strata: Vec<Signature>,
}

impl Partition {
    pub fn new(signature: &Signature, strata: Vec<Signature>) -> Result<Partition> {
        let mut seen = 0;
        for (i, s) in strata.iter().enumerate() {
            for a in s.atoms() {
                if !signature.contains(a) {
                    return Err(Error::BadPartition(format!("atom `{a}` is not in the program")));
                }
                if strata[..i].iter().any(|t| t.contains(a)) {
                    return Err(Error::BadPartition(format!("atom `{a}` occurs in two strata")));
                }
            }
            seen += s.len();
        }
        if seen != signature.len() {
            let missing: Vec<_> = signature
                .atoms()
                .iter()
                .filter(|a| !strata.iter().any(|s| s.contains(a)))
                .map(|a| a.to_string())
                .collect();
            return Err(Error::BadPartition(format!("atoms not covered: {}", missing.join(", "))));
        }
        if strata.is_empty() {
            return Err(Error::BadPartition("no strata".into()));
        }
        Ok(Partition { strata })
    }

    /// Parses `"a,b|c,d"`; an empty segment is an empty stratum.
    pub fn parse(text: &str, signature: &Signature) -> Result<Partition> {
        let strata = text
            .split('|')
            .map(|seg| {
                seg.split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| Atom::new(s).map_err(|_| Error::BadPartition(format!("`{s}` is not an atom name"))))
                    .collect::<Result<Vec<_>>>()
                    .map(Signature::new)
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(signature, strata)
    }

    pub fn strata(&self) -> &[Signature] {
        &self.strata
    }

    pub fn stratum_of(&self, atom: &Atom) -> Option<usize> {
        self.strata.iter().position(|s| s.contains(atom))
    }

    /// Union of the first `k` strata.
    pub fn prefix(&self, k: usize) -> Signature {
        self.strata[..k].iter().fold(Signature::empty(), |acc, s| acc.union(s))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .strata
            .iter()
            .map(|s| s.atoms().iter().map(Atom::to_string).collect::<Vec<_>>().join(","))
            .collect();
        f.write_str(&parts.join("|"))
    }
}

fn check_covers(program: &Program, part: &Partition) -> Result<()> {
    let covered = part.prefix(part.strata().len());
    if &covered != program.signature() {
        return Err(Error::BadPartition("partition does not match the program's atoms".into()));
    }
    Ok(())
}

/// Every dependency `q -> p` goes from a stratum to the same or a later one.
pub fn is_stratifiable(program: &Program, part: &Partition) -> Result<bool> {
    check_covers(program, part)?;
    Ok(program.depends().iter().all(|(q, p)| part.stratum_of(q) <= part.stratum_of(p)))
}

/// Outcome of the sampled agreement check.
#[derive(Clone, Debug)]
pub struct StratificationReport {
    pub checked: usize,
    /// Stratum prefix, two inputs agreeing on it, and their outputs.
    pub witness: Option<(
        Signature,
        InterpretationPair,
        InterpretationPair,
        InterpretationPair,
        InterpretationPair,
    )>,
}

impl StratificationReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

impl fmt::Display for StratificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "pass ({} samples)", self.checked),
            Some((sig, a, b, fa, fb)) => write!(
                f,
                "fail after {} samples: inputs {a} and {b} agree on {:?} but the outputs {fa} and {fb} do not",
                self.checked,
                sig.atoms()
            ),
        }
    }
}

fn agree_on(a: &InterpretationPair, b: &InterpretationPair, sig: &Signature) -> Result<bool> {
    Ok(a.restrict(sig)? == b.restrict(sig)?)
}

/// Samples pairs that agree on a stratum prefix and checks that the
/// approximator's outputs agree there too.
pub fn check_operator_stratifiable<R: Rng + ?Sized>(
    program: &Program,
    part: &Partition,
    samples: usize,
    rng: &mut R,
) -> Result<StratificationReport> {
    check_covers(program, part)?;
    let a = ProgramApproximator(program);
    let sig = program.signature();
    let prefixes: Vec<Signature> = (1..part.strata().len()).map(|k| part.prefix(k)).filter(|s| !s.is_empty()).collect();
    let mut checked = 0;
    for n in 0..samples {
        let Some(prefix) = prefixes.get(n % prefixes.len().max(1)) else {
            break;
        };
        let x = random_consistent_pair(rng, sig, 10);
        let rest = random_consistent_pair(rng, sig, 10);
        // Same values as `x` on the prefix, fresh ones elsewhere.
        let pick = |which: fn(&InterpretationPair) -> &Interpretation| -> Result<Interpretation> {
            let values = sig
                .atoms()
                .iter()
                .map(|atom| Ok(if prefix.contains(atom) { which(&x) } else { which(&rest) }.get(atom)?.clone()))
                .collect::<Result<Vec<_>>>()?;
            Interpretation::from_values(sig, values)
        };
        let y = InterpretationPair::new(pick(InterpretationPair::lower)?, pick(InterpretationPair::upper)?)?;
        let (fx, fy) = (a.apply(&x)?, a.apply(&y)?);
        checked += 1;
        if !agree_on(&fx, &fy, prefix)? {
            return Ok(StratificationReport {
                checked,
                witness: Some((prefix.clone(), x, y, fx, fy)),
            });
        }
    }
    Ok(StratificationReport { checked, witness: None })
}

/// Rules with heads in `upper`; atoms of `lower.signature()` are replaced
/// by `L(p)` when positive and by `1 - U(p)` when negated.
pub fn transform(program: &Program, upper: &Signature, lower: &InterpretationPair) -> Result<Program> {
    let known = lower.signature();
    let rules = program
        .rules()
        .iter()
        .filter(|r| upper.contains(&r.head))
        .map(|r| {
            let body = r.body.substitute(&|a, pol| {
                if !known.contains(a) {
                    return None;
                }
                Some(Formula::Const(match pol {
                    Polarity::Positive => lower.lower().get(a).expect("known atom").clone(),
                    Polarity::Negative => lower.upper().get(a).expect("known atom").negate(),
                }))
            });
            Rule::new(r.head.clone(), r.weight.clone(), r.family.clone(), body)
        })
        .collect();
    Program::with_signature(rules, upper.clone()).map_err(|e| Error::BadPartition(format!("transformed program leaves its stratum: {e}")))
}

/// The two-strata transform: the residual program over the second stratum.
pub fn restrict_and_transform(program: &Program, part: &Partition, lower: &InterpretationPair) -> Result<Program> {
    if part.strata().len() != 2 {
        return Err(Error::BadPartition("restrict_and_transform takes two strata".into()));
    }
    if lower.signature() != &part.strata()[0] {
        return Err(Error::SignatureMismatch("lower result must range over the first stratum".into()));
    }
    transform(program, &part.strata()[1], lower)
}

/// The approximator of a stratum given a pair `(L1, U1)` for the strata
/// below it: the lower component reads the program transformed by
/// `(L1, U1)`, the upper component the one transformed by `(U1, L1)`.
#[derive(Clone, Debug)]
pub struct ResidualApproximator {
    lower: Program,
    upper: Program,
}

impl ResidualApproximator {
    pub fn new(program: &Program, stratum: &Signature, known: &InterpretationPair) -> Result<Self> {
        Ok(ResidualApproximator {
            lower: transform(program, stratum, known)?,
            upper: transform(program, stratum, &known.swapped())?,
        })
    }

    pub fn lower_program(&self) -> &Program {
        &self.lower
    }

    pub fn upper_program(&self) -> &Program {
        &self.upper
    }
}

impl Approximator for ResidualApproximator {
    fn signature(&self) -> &Signature {
        self.lower.signature()
    }

    fn lower(&self, l: &Interpretation, u: &Interpretation) -> Result<Interpretation> {
        approximator_lower(&self.lower, l, u)
    }

    fn upper(&self, l: &Interpretation, u: &Interpretation) -> Result<Interpretation> {
        approximator_lower(&self.upper, u, l)
    }
}

#[derive(Clone, Debug)]
pub struct SplitOutcome {
    /// Well-founded fixpoint per stratum, in order.
    pub per_stratum: Vec<InterpretationPair>,
    pub glued: InterpretationPair,
    pub monolithic: InterpretationPair,
}

fn require_stratifiable(program: &Program, part: &Partition) -> Result<()> {
    if is_stratifiable(program, part)? {
        Ok(())
    } else {
        Err(Error::BadPartition(format!("program is not stratifiable over {part}")))
    }
}

/// Computes the well-founded fixpoint stratum by stratum, glues the pieces,
/// and checks the result against the monolithic computation.
pub fn split_well_founded(program: &Program, part: &Partition, policy: &ConvergencePolicy) -> Result<SplitOutcome> {
    require_stratifiable(program, part)?;
    let inner = policy.untraced();
    let mut acc = InterpretationPair::least_precise(&Signature::empty());
    let mut per_stratum = Vec::new();
    for stratum in part.strata() {
        let residual = ResidualApproximator::new(program, stratum, &acc)?;
        let wf = well_founded_of(&residual, &inner)?.into_value()?;
        acc = acc.glue(&wf)?;
        per_stratum.push(wf);
    }
    let monolithic = well_founded(program, &inner)?.into_value()?;
    if acc != monolithic {
        return Err(Error::InternalInconsistency(format!(
            "split well-founded {acc} differs from monolithic {monolithic}"
        )));
    }
    Ok(SplitOutcome {
        per_stratum,
        glued: acc,
        monolithic,
    })
}

/// Per-stratum stable verdicts and the monolithic verdict, which must agree.
pub fn split_stable_check(
    program: &Program,
    part: &Partition,
    i: &Interpretation,
    policy: &ConvergencePolicy,
) -> Result<(Vec<bool>, bool)> {
    require_stratifiable(program, part)?;
    let mut acc = InterpretationPair::least_precise(&Signature::empty());
    let mut verdicts = Vec::new();
    for stratum in part.strata() {
        let residual = transform(program, stratum, &acc)?;
        let local = i.restrict(stratum)?;
        verdicts.push(is_stable_model(&residual, &local, policy)?);
        acc = acc.glue(&InterpretationPair::exact(local))?;
    }
    let monolithic = is_stable_model(program, i, policy)?;
    if verdicts.iter().all(|&v| v) != monolithic {
        return Err(Error::InternalInconsistency(format!(
            "per-stratum verdicts {verdicts:?} disagree with monolithic verdict {monolithic}"
        )));
    }
    Ok((verdicts, monolithic))
}

/// Heuristic: the strongly connected components of the dependency graph in
/// topological order. Always stratifiable, not necessarily the coarsest
/// useful split.
pub fn suggest_partition(program: &Program) -> Partition {
    let mut graph = DiGraph::<Atom, ()>::new();
    let nodes: BTreeMap<Atom, _> = program
        .signature()
        .atoms()
        .iter()
        .map(|a| (a.clone(), graph.add_node(a.clone())))
        .collect();
    for (q, p) in program.depends() {
        graph.add_edge(nodes[&q], nodes[&p], ());
    }
    let mut sccs = tarjan_scc(&graph);
    sccs.reverse();
    let strata = sccs
        .into_iter()
        .map(|c| Signature::new(c.into_iter().map(|n| graph[n].clone())))
        .collect();
    Partition::new(program.signature(), strata).expect("components cover the atoms")
}
