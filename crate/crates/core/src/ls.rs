//! Approximate interpretations and the approximate well-founded operator,
//! with conversions to and from interpretation pairs.

use std::fmt;

use crate::connectives::Registry;
use crate::error::{Error, Result};
use crate::fixpoint::{iterate_with, lfp_monotone, well_founded, ConvergencePolicy, FixpointResult, Iterand};
use crate::lattice::{Atom, Interpretation, InterpretationPair, Signature};
use crate::number::{Number, TruthValue};
use crate::syntax::{Formula, Program};

/// A total map from atoms to `(lower, upper)` pairs. Pairs need not be
/// intervals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproximateInterpretation {
    signature: Signature,
    values: Vec<(TruthValue, TruthValue)>,
}

impl ApproximateInterpretation {
    pub fn constant(signature: &Signature, lower: TruthValue, upper: TruthValue) -> Self {
        ApproximateInterpretation {
            signature: signature.clone(),
            values: vec![(lower, upper); signature.len()],
        }
    }

    /// Every atom at `(0, 1)`.
    pub fn bottom(signature: &Signature) -> Self {
        Self::constant(signature, TruthValue::zero(), TruthValue::one())
    }

    /// Every atom at `(0, 0)`.
    pub fn false_(signature: &Signature) -> Self {
        Self::constant(signature, TruthValue::zero(), TruthValue::zero())
    }

    pub fn from_values(signature: &Signature, values: Vec<(TruthValue, TruthValue)>) -> Result<Self> {
        if values.len() != signature.len() {
            return Err(Error::SignatureMismatch(format!(
                "{} values for {} atoms",
                values.len(),
                signature.len()
            )));
        }
        Ok(ApproximateInterpretation {
            signature: signature.clone(),
            values,
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn values(&self) -> &[(TruthValue, TruthValue)] {
        &self.values
    }

    pub fn get(&self, atom: &Atom) -> Result<&(TruthValue, TruthValue)> {
        self.signature
            .index_of(atom)
            .map(|i| &self.values[i])
            .ok_or_else(|| Error::UnknownAtom(atom.to_string()))
    }

    fn zip(
        &self,
        other: &Self,
        f: impl Fn(&(TruthValue, TruthValue), &(TruthValue, TruthValue)) -> (TruthValue, TruthValue),
    ) -> Result<Self> {
        self.same_signature(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect();
        Ok(ApproximateInterpretation {
            signature: self.signature.clone(),
            values,
        })
    }

    fn same_signature(&self, other: &Self) -> Result<()> {
        if self.signature == other.signature {
            Ok(())
        } else {
            Err(Error::SignatureMismatch("approximate interpretations over different atoms".into()))
        }
    }

    /// Pointwise `(min, max)`.
    pub fn meet_precision(&self, other: &Self) -> Result<Self> {
        self.zip(other, |(l1, u1), (l2, u2)| (l1.clone().min(l2.clone()), u1.clone().max(u2.clone())))
    }

    /// Pointwise `(max, min)`.
    pub fn join_precision(&self, other: &Self) -> Result<Self> {
        self.zip(other, |(l1, u1), (l2, u2)| (l1.clone().max(l2.clone()), u1.clone().min(u2.clone())))
    }

    pub fn leq_truth(&self, other: &Self) -> Result<bool> {
        self.same_signature(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .all(|((l1, u1), (l2, u2))| l1 <= l2 && u1 <= u2))
    }

    pub fn leq_precision(&self, other: &Self) -> Result<bool> {
        self.same_signature(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .all(|((l1, u1), (l2, u2))| l1 <= l2 && u2 <= u1))
    }

    pub fn distance(&self, other: &Self) -> Result<Number> {
        self.same_signature(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|((l1, u1), (l2, u2))| l1.distance(l2).max(u1.distance(u2)))
            .fold(Number::zero(), Number::max))
    }
}

impl Iterand for ApproximateInterpretation {
    fn ascends_to(&self, next: &Self) -> Result<bool> {
        self.leq_precision(next)
    }

    fn distance_to(&self, other: &Self) -> Result<Number> {
        self.distance(other)
    }
}

impl fmt::Display for ApproximateInterpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (a, (l, u))) in self.signature.atoms().iter().zip(&self.values).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}: ({l}, {u})")?;
        }
        f.write_str("}")
    }
}

pub fn zeta(x: &ApproximateInterpretation) -> InterpretationPair {
    let (lower, upper): (Vec<_>, Vec<_>) = x.values.iter().cloned().unzip();
    InterpretationPair::new(
        Interpretation::from_values(&x.signature, lower).expect("sizes match"),
        Interpretation::from_values(&x.signature, upper).expect("sizes match"),
    )
    .expect("same signature")
}

pub fn zeta_inverse(pair: &InterpretationPair) -> ApproximateInterpretation {
    let values = pair
        .lower()
        .values()
        .iter()
        .cloned()
        .zip(pair.upper().values().iter().cloned())
        .collect();
    ApproximateInterpretation {
        signature: pair.signature().clone(),
        values,
    }
}

/// A program normalised to one rule per atom.
#[derive(Clone, Debug)]
pub struct LsProgram {
    joined: Program,
}

impl LsProgram {
    pub fn new(program: &Program) -> Self {
        LsProgram {
            joined: program.join_rules_per_atom(&Registry::builtin()),
        }
    }

    pub fn joined(&self) -> &Program {
        &self.joined
    }

    pub fn signature(&self) -> &Signature {
        self.joined.signature()
    }
}

fn eval_pair(x: &ApproximateInterpretation, formula: &Formula) -> Result<(TruthValue, TruthValue)> {
    Ok(match formula {
        Formula::Const(c) => (c.clone(), c.clone()),
        Formula::Atom(a) => x.get(a)?.clone(),
        Formula::NegAtom(a) => {
            let (l, u) = x.get(a)?;
            (u.negate(), l.negate())
        }
        Formula::Conj(f, a, b) => {
            let ((l1, u1), (l2, u2)) = (eval_pair(x, a)?, eval_pair(x, b)?);
            (f.conj(&l1, &l2), f.conj(&u1, &u2))
        }
        Formula::Disj(f, a, b) => {
            let ((l1, u1), (l2, u2)) = (eval_pair(x, a)?, eval_pair(x, b)?);
            (f.disj(&l1, &l2), f.disj(&u1, &u2))
        }
        Formula::Agg(agg, args) => {
            let (ls, us): (Vec<_>, Vec<_>) = args
                .iter()
                .map(|a| eval_pair(x, a))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .unzip();
            (agg.apply(&ls), agg.apply(&us))
        }
    })
}

/// The operator on approximate interpretations: each atom gets the paired
/// value of its unique rule body.
pub fn tp_ls(program: &LsProgram, x: &ApproximateInterpretation) -> Result<ApproximateInterpretation> {
    let p = &program.joined;
    if p.signature() != x.signature() {
        return Err(Error::SignatureMismatch(
            "approximate interpretation over a different signature".into(),
        ));
    }
    let values = (0..p.signature().len())
        .map(|i| {
            let mut best = (TruthValue::zero(), TruthValue::zero());
            for r in p.rules_for_index(i) {
                let (l, u) = eval_pair(x, &r.body)?;
                let (l, u) = (r.family.conj(&r.weight, &l), r.family.conj(&r.weight, &u));
                best = (best.0.max(l), best.1.max(u));
            }
            Ok(best)
        })
        .collect::<Result<Vec<_>>>()?;
    ApproximateInterpretation::from_values(p.signature(), values)
}

/// The closed world operator: the truth-order least fixpoint of
/// `Y -> X_f (x) tp_ls(X (+) Y)`, iterated from `X_f`.
pub fn s_p(
    program: &LsProgram,
    x: &ApproximateInterpretation,
    policy: &ConvergencePolicy,
) -> Result<FixpointResult<ApproximateInterpretation>> {
    let xf = ApproximateInterpretation::false_(program.signature());
    iterate_with(
        xf.clone(),
        policy,
        |y| xf.meet_precision(&tp_ls(program, &x.join_precision(y)?)?),
        ApproximateInterpretation::leq_truth,
    )
}

/// `tp_ls(X) (+) s_p(X)`.
pub fn aw(program: &LsProgram, x: &ApproximateInterpretation, policy: &ConvergencePolicy) -> Result<ApproximateInterpretation> {
    let closed = s_p(program, x, &policy.untraced())?.into_value()?;
    tp_ls(program, x)?.join_precision(&closed)
}

/// The precision-least fixpoint of `aw`, iterated from `X_bot`.
pub fn aw_model(program: &LsProgram, policy: &ConvergencePolicy) -> Result<FixpointResult<ApproximateInterpretation>> {
    lfp_monotone(
        |x| aw(program, x, policy),
        ApproximateInterpretation::bottom(program.signature()),
        policy,
    )
}

/// Both routes to the well-founded fixpoint, on the normalised program.
#[derive(Clone, Debug)]
pub struct WellFoundedCrossCheck {
    pub stable: FixpointResult<InterpretationPair>,
    pub approximate: FixpointResult<ApproximateInterpretation>,
}

impl WellFoundedCrossCheck {
    pub fn agree(&self) -> bool {
        zeta(&self.approximate.value) == self.stable.value
    }
}

pub fn crosscheck_well_founded(program: &Program, policy: &ConvergencePolicy) -> Result<WellFoundedCrossCheck> {
    let ls = LsProgram::new(program);
    Ok(WellFoundedCrossCheck {
        stable: well_founded(ls.joined(), policy)?,
        approximate: aw_model(&ls, policy)?,
    })
}
