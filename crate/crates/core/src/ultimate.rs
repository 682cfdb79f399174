//! The ultimate approximator: per atom, the infimum and supremum of `tp`
//! over the box `[L, U]` of a consistent pair.
//!
//! For each head, an atom occurring with a single polarity across the head's
//! rules is read at the matching corner of the box, where the bound is
//! attained. Atoms occurring with both polarities range over their interval
//! and are searched either over a candidate set (Gödel family, min/max
//! aggregates) or over a grid.
//!
//! The ultimate approximator is only defined on consistent pairs, so its
//! stable revision at `(x, y)` iterates the upper component on `[x, T]`
//! starting from `x`, and the lower component on `[bot, y]` from `bot`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::fixpoint::{kripke_kleene_of, well_founded_of, Approximator, ConvergencePolicy, FixpointResult};
use crate::lattice::{Interpretation, InterpretationPair, Signature};
use crate::number::TruthValue;
use crate::semantics::head_value;
use crate::syntax::{Formula, Polarity, Program};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UltimateMethod {
    /// Corners for single-polarity atoms; candidate enumeration otherwise.
    ExactPerHead,
    /// Corners for single-polarity atoms; a `1/n` grid otherwise.
    Grid(u32),
}

impl fmt::Display for UltimateMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UltimateMethod::ExactPerHead => f.write_str("exact_per_head"),
            UltimateMethod::Grid(n) => write!(f, "grid(1/{n})"),
        }
    }
}

/// How the bounds of one atom were obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ValueMethod {
    Corner,
    Candidates,
    Grid,
}

impl fmt::Display for ValueMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ValueMethod::Corner => "corner",
            ValueMethod::Candidates => "candidates",
            ValueMethod::Grid => "grid",
        })
    }
}

pub const DEFAULT_ULTIMATE_CAP: u128 = 1_000_000;

#[derive(Clone, Debug)]
struct HeadPlan {
    positive: Vec<usize>,
    negative: Vec<usize>,
    mixed: Vec<usize>,
    /// Weights and constants of the head's rules.
    constants: BTreeSet<TruthValue>,
    method: ValueMethod,
}

pub struct UltimateApproximator<'a> {
    program: &'a Program,
    method: UltimateMethod,
    cap: u128,
    plans: Vec<HeadPlan>,
}

fn candidate_safe(f: &Formula) -> bool {
    match f {
        Formula::Const(_) | Formula::Atom(_) | Formula::NegAtom(_) => true,
        Formula::Conj(fam, l, r) | Formula::Disj(fam, l, r) => fam.id().as_str() == "G" && candidate_safe(l) && candidate_safe(r),
        Formula::Agg(agg, args) => matches!(agg.name(), "min" | "max") && args.iter().all(candidate_safe),
    }
}

fn collect_constants(f: &Formula, out: &mut BTreeSet<TruthValue>) {
    match f {
        Formula::Const(c) => {
            out.insert(c.clone());
        }
        Formula::Atom(_) | Formula::NegAtom(_) => {}
        Formula::Conj(_, l, r) | Formula::Disj(_, l, r) => {
            collect_constants(l, out);
            collect_constants(r, out);
        }
        Formula::Agg(_, args) => args.iter().for_each(|a| collect_constants(a, out)),
    }
}

impl<'a> UltimateApproximator<'a> {
    pub fn new(program: &'a Program, method: UltimateMethod) -> Result<Self> {
        Self::with_cap(program, method, DEFAULT_ULTIMATE_CAP)
    }

    pub fn with_cap(program: &'a Program, method: UltimateMethod, cap: u128) -> Result<Self> {
        if method == UltimateMethod::Grid(0) {
            return Err(Error::InvalidConfig("grid resolution must be 1/n with n >= 1".into()));
        }
        let sig = program.signature();
        let mut plans = Vec::with_capacity(sig.len());
        for h in 0..sig.len() {
            let (mut positive, mut negative, mut mixed) = (Vec::new(), Vec::new(), Vec::new());
            for (atom, pols) in program.body_polarities(h) {
                let i = sig.index_of(&atom).expect("body atoms are in the signature");
                match (pols.contains(&Polarity::Positive), pols.contains(&Polarity::Negative)) {
                    (true, true) => mixed.push(i),
                    (true, false) => positive.push(i),
                    _ => negative.push(i),
                }
            }
            let mut constants = BTreeSet::new();
            for r in program.rules_for_index(h) {
                constants.insert(r.weight.clone());
                collect_constants(&r.body, &mut constants);
            }
            let method = match (mixed.is_empty(), method) {
                (true, _) => ValueMethod::Corner,
                (false, UltimateMethod::Grid(_)) => ValueMethod::Grid,
                (false, UltimateMethod::ExactPerHead) => {
                    let safe = program
                        .rules_for_index(h)
                        .all(|r| r.family.id().as_str() == "G" && candidate_safe(&r.body));
                    if !safe {
                        return Err(Error::UnsupportedUltimate(format!(
                            "atom `{}` has an atom of mixed polarity outside the Gödel family; use the grid method",
                            sig.atoms()[h]
                        )));
                    }
                    ValueMethod::Candidates
                }
            };
            plans.push(HeadPlan {
                positive,
                negative,
                mixed,
                constants,
                method,
            });
        }
        Ok(UltimateApproximator {
            program,
            method,
            cap,
            plans,
        })
    }

    /// The method used for each atom, in signature order.
    pub fn methods(&self) -> Vec<ValueMethod> {
        self.plans.iter().map(|p| p.method).collect()
    }

    /// Candidate values within `[l, u]` for each mixed atom of `plan`.
    fn candidates(&self, plan: &HeadPlan, l: &Interpretation, u: &Interpretation) -> Vec<Vec<TruthValue>> {
        let interval = |i: usize| (l.values()[i].clone(), u.values()[i].clone());
        match (plan.method, self.method) {
            (ValueMethod::Grid, UltimateMethod::Grid(n)) => plan
                .mixed
                .iter()
                .map(|&i| {
                    let (lo, hi) = interval(i);
                    let mut set: BTreeSet<TruthValue> = (0..=n)
                        .map(|k| TruthValue::ratio(i64::from(k), i64::from(n)))
                        .filter(|v| &lo <= v && v <= &hi)
                        .collect();
                    set.insert(lo);
                    set.insert(hi);
                    set.into_iter().collect()
                })
                .collect(),
            _ => {
                // Breakpoints of min/max/complement expressions: constants,
                // 1/2, and the values of every atom the head reads, closed
                // under complement.
                let mut base = plan.constants.clone();
                base.insert(TruthValue::half());
                for &i in plan.positive.iter().chain(&plan.negative).chain(&plan.mixed) {
                    base.insert(l.values()[i].clone());
                    base.insert(u.values()[i].clone());
                }
                let closed: BTreeSet<TruthValue> = base.iter().flat_map(|v| [v.clone(), v.negate()]).collect();
                plan.mixed
                    .iter()
                    .map(|&i| {
                        let (lo, hi) = interval(i);
                        closed.iter().filter(|v| &lo <= *v && *v <= &hi).cloned().collect()
                    })
                    .collect()
            }
        }
    }

    /// Lower bound when `lower` is set, upper bound otherwise, for head `h`
    /// at `(l, u)`.
    fn bound(&self, h: usize, l: &Interpretation, u: &Interpretation, lower: bool) -> Result<TruthValue> {
        let plan = &self.plans[h];
        let sig = self.program.signature();
        // `z` is read positively and, through `~`, negatively: a negated
        // single-polarity atom is set to the value whose complement is wanted.
        let (pos_src, neg_src) = if lower { (l, u) } else { (u, l) };
        let mut z = pos_src.values().to_vec();
        for &i in &plan.negative {
            z[i] = neg_src.values()[i].clone();
        }
        let cands = self.candidates(plan, l, u);
        let size = cands
            .iter()
            .try_fold(1u128, |acc, c| acc.checked_mul(c.len() as u128))
            .unwrap_or(u128::MAX);
        if size > self.cap {
            return Err(Error::SizeCapExceeded { size, cap: self.cap });
        }
        let mut idx = vec![0usize; cands.len()];
        let mut best: Option<TruthValue> = None;
        loop {
            for (k, &i) in plan.mixed.iter().enumerate() {
                z[i] = cands[k][idx[k]].clone();
            }
            let point = Interpretation::from_values(sig, z.clone())?;
            let v = head_value(self.program, h, &point)?;
            best = Some(match best {
                None => v,
                Some(b) if lower => b.min(v),
                Some(b) => b.max(v),
            });
            // Odometer step over the candidate product.
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return Ok(best.expect("at least one point"));
                }
                idx[k] += 1;
                if idx[k] < cands[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    fn component(&self, l: &Interpretation, u: &Interpretation, lower: bool) -> Result<Interpretation> {
        let sig = self.program.signature();
        if l.signature() != sig || u.signature() != sig {
            return Err(Error::SignatureMismatch("pair over a different signature".into()));
        }
        if !l.leq(u)? {
            return Err(Error::UnsupportedUltimate(format!("inconsistent pair ({l}, {u})")));
        }
        let values = (0..sig.len()).map(|h| self.bound(h, l, u, lower)).collect::<Result<Vec<_>>>()?;
        Interpretation::from_values(sig, values)
    }
}

impl Approximator for UltimateApproximator<'_> {
    fn signature(&self) -> &Signature {
        self.program.signature()
    }

    fn lower(&self, l: &Interpretation, u: &Interpretation) -> Result<Interpretation> {
        self.component(l, u, true)
    }

    fn upper(&self, l: &Interpretation, u: &Interpretation) -> Result<Interpretation> {
        self.component(l, u, false)
    }

    fn upper_start(&self, x: &Interpretation) -> Interpretation {
        x.clone()
    }
}

/// The ultimate approximator at a consistent pair, with the method used
/// for each atom.
pub fn ultimate_approximator(
    program: &Program,
    pair: &InterpretationPair,
    method: UltimateMethod,
) -> Result<(InterpretationPair, Vec<ValueMethod>)> {
    if !pair.is_consistent() {
        return Err(Error::UnsupportedUltimate(
            "the ultimate approximator takes consistent pairs".into(),
        ));
    }
    let u = UltimateApproximator::new(program, method)?;
    Ok((u.apply(pair)?, u.methods()))
}

pub fn ultimate_kripke_kleene(
    program: &Program,
    method: UltimateMethod,
    policy: &ConvergencePolicy,
) -> Result<(FixpointResult<InterpretationPair>, Vec<ValueMethod>)> {
    let u = UltimateApproximator::new(program, method)?;
    Ok((kripke_kleene_of(&u, policy)?, u.methods()))
}

pub fn ultimate_well_founded(
    program: &Program,
    method: UltimateMethod,
    policy: &ConvergencePolicy,
) -> Result<(FixpointResult<InterpretationPair>, Vec<ValueMethod>)> {
    let u = UltimateApproximator::new(program, method)?;
    Ok((well_founded_of(&u, policy)?, u.methods()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixpoint::{well_founded, ProgramApproximator};
    use crate::syntax::parse_program;

    const P1: &str = "r <- 0.3 \\/ (s /\\ 0.6). s <- s.";
    const P2: &str = "p <- ~q \\/ r. q <- ~p \\/ s. r <- 0.3 \\/ (s /\\ 0.6). s <- s.";
    const P4: &str = "p <- p. p <- ~p.";

    fn single(p: &Program, l: (i64, i64), u: (i64, i64)) -> InterpretationPair {
        InterpretationPair::new(
            Interpretation::from_ratios(p.signature(), &[("p", l.0, l.1)]).unwrap(),
            Interpretation::from_ratios(p.signature(), &[("p", u.0, u.1)]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn example4_values() {
        let p4 = parse_program(P4).unwrap();
        let policy = ConvergencePolicy::exact();
        let bt = InterpretationPair::least_precise(p4.signature());
        let (first, methods) = ultimate_approximator(&p4, &bt, UltimateMethod::ExactPerHead).unwrap();
        assert_eq!(first, single(&p4, (1, 2), (1, 1)));
        assert_eq!(methods, vec![ValueMethod::Candidates]);
        assert_eq!(ultimate_approximator(&p4, &first, UltimateMethod::ExactPerHead).unwrap().0, first);

        let (kk, _) = ultimate_kripke_kleene(&p4, UltimateMethod::ExactPerHead, &policy).unwrap();
        assert_eq!(kk.value, single(&p4, (1, 2), (1, 1)));
        // One revision from (bot, top) gives (1/2, top); the next one iterates
        // the upper bound from 1/2, where tp is already fixed.
        let u = UltimateApproximator::new(&p4, UltimateMethod::ExactPerHead).unwrap();
        let step = crate::fixpoint::stable_revision(&u, &bt, &policy).unwrap();
        assert_eq!(step, single(&p4, (1, 2), (1, 1)));
        let (wf, _) = ultimate_well_founded(&p4, UltimateMethod::ExactPerHead, &policy).unwrap();
        assert_eq!(wf.value, single(&p4, (1, 2), (1, 2)));
        assert_eq!(well_founded(&p4, &policy).unwrap().value, bt);
    }

    #[test]
    fn single_polarity_matches_approximator() {
        let p2 = parse_program(P2).unwrap();
        let u = UltimateApproximator::new(&p2, UltimateMethod::ExactPerHead).unwrap();
        assert!(u.methods().iter().all(|m| *m == ValueMethod::Corner));
        let bt = InterpretationPair::least_precise(p2.signature());
        assert_eq!(u.apply(&bt).unwrap(), ProgramApproximator(&p2).apply(&bt).unwrap());
    }

    #[test]
    fn positive_program_collapses() {
        let p1 = parse_program(P1).unwrap();
        let policy = ConvergencePolicy::exact();
        let (wf, _) = ultimate_well_founded(&p1, UltimateMethod::ExactPerHead, &policy).unwrap();
        assert_eq!(wf.value, well_founded(&p1, &policy).unwrap().value);
        assert!(wf.value.is_exact());
    }

    #[test]
    fn grid_agrees_with_candidates_on_example4() {
        let p4 = parse_program(P4).unwrap();
        let pair = single(&p4, (1, 5), (4, 5));
        let (a, _) = ultimate_approximator(&p4, &pair, UltimateMethod::ExactPerHead).unwrap();
        let (b, m) = ultimate_approximator(&p4, &pair, UltimateMethod::Grid(10)).unwrap();
        assert_eq!(a, b);
        assert_eq!(m, vec![ValueMethod::Grid]);
    }

    #[test]
    fn errors() {
        let mixed_l = parse_program("p <- [L] p /\\ ~p.").unwrap();
        assert!(matches!(
            UltimateApproximator::new(&mixed_l, UltimateMethod::ExactPerHead),
            Err(Error::UnsupportedUltimate(_))
        ));
        assert!(UltimateApproximator::new(&mixed_l, UltimateMethod::Grid(10)).is_ok());

        let p4 = parse_program(P4).unwrap();
        let tiny = UltimateApproximator::with_cap(&p4, UltimateMethod::Grid(100), 3).unwrap();
        let bt = InterpretationPair::least_precise(p4.signature());
        assert!(matches!(tiny.apply(&bt), Err(Error::SizeCapExceeded { .. })));
        assert!(matches!(
            ultimate_approximator(&p4, &single(&p4, (1, 1), (0, 1)), UltimateMethod::ExactPerHead),
            Err(Error::UnsupportedUltimate(_))
        ));
    }
}
