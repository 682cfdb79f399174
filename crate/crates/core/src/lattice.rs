//! Interpretations and the bilattice of interpretation pairs.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::number::{Number, TruthValue};

/// A propositional atom.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(Arc<str>);

impl Atom {
    /// Validates the identifier: alphabetic first char, then alphanumerics or `_`.
    pub fn new(name: &str) -> Result<Atom> {
        let mut chars = name.chars();
        let ok = matches!(chars.next(), Some(c) if c.is_alphabetic()) && chars.all(|c| c.is_alphanumeric() || c == '_');
        if ok {
            Ok(Atom(Arc::from(name)))
        } else {
            Err(Error::InvalidConfig(format!("`{name}` is not a valid atom name")))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A finite, lexicographically ordered set of atoms.
#[derive(Clone, Debug, Eq)]
pub struct Signature(Arc<[Atom]>);

impl Signature {
    pub fn new<I: IntoIterator<Item = Atom>>(atoms: I) -> Signature {
        let mut v: Vec<Atom> = atoms.into_iter().collect();
        v.sort();
        v.dedup();
        Signature(v.into())
    }

    pub fn empty() -> Signature {
        Signature(Arc::from(Vec::new()))
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, atom: &Atom) -> Option<usize> {
        self.0.binary_search(atom).ok()
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.index_of(atom).is_some()
    }

    pub fn is_subset_of(&self, other: &Signature) -> bool {
        self.0.iter().all(|a| other.contains(a))
    }

    pub fn union(&self, other: &Signature) -> Signature {
        Signature::new(self.0.iter().chain(other.0.iter()).cloned())
    }

    fn check_same(&self, other: &Signature) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SignatureMismatch(format!("{:?} vs {:?}", self.0, other.0)))
        }
    }
}

/// `{p, q}`.
impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.0.iter().map(Atom::name).collect();
        write!(f, "{{{}}}", names.join(", "))
    }
}

impl PartialEq for Signature {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl PartialOrd for Signature {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Signature {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

/// A total assignment of truth values to the atoms of a signature.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Interpretation {
    signature: Signature,
    values: Vec<TruthValue>,
}

impl Interpretation {
    pub fn constant(signature: &Signature, value: TruthValue) -> Interpretation {
        Interpretation {
            values: vec![value; signature.len()],
            signature: signature.clone(),
        }
    }

    /// All atoms false.
    pub fn bottom(signature: &Signature) -> Interpretation {
        Interpretation::constant(signature, TruthValue::zero())
    }

    /// All atoms true.
    pub fn top(signature: &Signature) -> Interpretation {
        Interpretation::constant(signature, TruthValue::one())
    }

    /// Values listed in signature order.
    pub fn from_values(signature: &Signature, values: Vec<TruthValue>) -> Result<Interpretation> {
        if values.len() != signature.len() {
            return Err(Error::SignatureMismatch(format!(
                "{} values for {} atoms",
                values.len(),
                signature.len()
            )));
        }
        Ok(Interpretation {
            signature: signature.clone(),
            values,
        })
    }

    /// Builds a total interpretation from `(atom, value)` entries; every atom of
    /// the signature must be given exactly once.
    pub fn from_entries<I>(signature: &Signature, entries: I) -> Result<Interpretation>
    where
        I: IntoIterator<Item = (Atom, TruthValue)>,
    {
        let mut values: Vec<Option<TruthValue>> = vec![None; signature.len()];
        for (atom, v) in entries {
            let i = signature.index_of(&atom).ok_or_else(|| Error::UnknownAtom(atom.to_string()))?;
            if values[i].replace(v).is_some() {
                return Err(Error::InvalidConfig(format!("atom `{atom}` assigned twice")));
            }
        }
        let values = values
            .into_iter()
            .zip(signature.atoms())
            .map(|(v, a)| v.ok_or_else(|| Error::InvalidConfig(format!("no value for atom `{a}`"))))
            .collect::<Result<Vec<_>>>()?;
        Interpretation::from_values(signature, values)
    }

    /// Convenience for tests and examples: `&[("p", 3, 10), ...]`.
    pub fn from_ratios(signature: &Signature, entries: &[(&str, i64, i64)]) -> Result<Interpretation> {
        let mut out = Vec::with_capacity(entries.len());
        for &(name, n, d) in entries {
            out.push((Atom::new(name)?, TruthValue::ratio(n, d)));
        }
        Interpretation::from_entries(signature, out)
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn values(&self) -> &[TruthValue] {
        &self.values
    }

    pub fn get(&self, atom: &Atom) -> Result<&TruthValue> {
        self.signature
            .index_of(atom)
            .map(|i| &self.values[i])
            .ok_or_else(|| Error::UnknownAtom(atom.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Atom, &TruthValue)> {
        self.signature.atoms().iter().zip(self.values.iter())
    }

    pub fn map(&self, f: impl Fn(&TruthValue) -> TruthValue) -> Interpretation {
        Interpretation {
            signature: self.signature.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }

    fn zip_with(&self, other: &Interpretation, f: impl Fn(&TruthValue, &TruthValue) -> TruthValue) -> Result<Interpretation> {
        self.signature.check_same(&other.signature)?;
        Ok(Interpretation {
            signature: self.signature.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect(),
        })
    }

    /// Pointwise `<=`.
    pub fn leq(&self, other: &Interpretation) -> Result<bool> {
        self.signature.check_same(&other.signature)?;
        Ok(self.values.iter().zip(&other.values).all(|(a, b)| a <= b))
    }

    pub fn meet(&self, other: &Interpretation) -> Result<Interpretation> {
        self.zip_with(other, |a, b| a.clone().min(b.clone()))
    }

    pub fn join(&self, other: &Interpretation) -> Result<Interpretation> {
        self.zip_with(other, |a, b| a.clone().max(b.clone()))
    }

    /// Sup-norm distance.
    pub fn distance(&self, other: &Interpretation) -> Result<Number> {
        self.signature.check_same(&other.signature)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.distance(b))
            .fold(Number::zero(), Number::max))
    }

    /// Restriction to a sub-signature.
    pub fn restrict(&self, sub: &Signature) -> Result<Interpretation> {
        let values = sub.atoms().iter().map(|a| self.get(a).cloned()).collect::<Result<Vec<_>>>()?;
        Interpretation::from_values(sub, values)
    }

    /// Combines interpretations over disjoint signatures.
    pub fn glue(&self, other: &Interpretation) -> Result<Interpretation> {
        if self.signature.atoms().iter().any(|a| other.signature.contains(a)) {
            return Err(Error::SignatureMismatch("glued signatures overlap".into()));
        }
        let sig = self.signature.union(&other.signature);
        let values = sig
            .atoms()
            .iter()
            .map(|a| self.get(a).or_else(|_| other.get(a)).cloned())
            .collect::<Result<Vec<_>>>()?;
        Interpretation::from_values(&sig, values)
    }

    pub fn to_approx(&self) -> Interpretation {
        self.map(TruthValue::to_approx)
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (a, v)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}: {v}")?;
        }
        f.write_str("}")
    }
}

/// An element `(lower, upper)` of the bilattice of interpretations.
///
/// Consistency (`lower <= upper`) is not enforced: the stable approximator
/// evaluates arbitrary pairs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct InterpretationPair {
    lower: Interpretation,
    upper: Interpretation,
}

impl InterpretationPair {
    pub fn new(lower: Interpretation, upper: Interpretation) -> Result<InterpretationPair> {
        lower.signature.check_same(&upper.signature)?;
        Ok(InterpretationPair { lower, upper })
    }

    /// `(⊥, ⊤)`, the precision-least pair.
    pub fn least_precise(signature: &Signature) -> InterpretationPair {
        InterpretationPair {
            lower: Interpretation::bottom(signature),
            upper: Interpretation::top(signature),
        }
    }

    pub fn exact(i: Interpretation) -> InterpretationPair {
        InterpretationPair {
            lower: i.clone(),
            upper: i,
        }
    }

    pub fn lower(&self) -> &Interpretation {
        &self.lower
    }

    pub fn upper(&self) -> &Interpretation {
        &self.upper
    }

    pub fn signature(&self) -> &Signature {
        &self.lower.signature
    }

    pub fn into_parts(self) -> (Interpretation, Interpretation) {
        (self.lower, self.upper)
    }

    pub fn swapped(&self) -> InterpretationPair {
        InterpretationPair {
            lower: self.upper.clone(),
            upper: self.lower.clone(),
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.lower.values.iter().zip(&self.upper.values).all(|(l, u)| l <= u)
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    /// Truth order: both bounds grow.
    pub fn leq_truth(&self, other: &InterpretationPair) -> Result<bool> {
        Ok(self.lower.leq(&other.lower)? && self.upper.leq(&other.upper)?)
    }

    /// Precision order: the interval shrinks.
    pub fn leq_precision(&self, other: &InterpretationPair) -> Result<bool> {
        Ok(self.lower.leq(&other.lower)? && other.upper.leq(&self.upper)?)
    }

    /// Precision meet `⊗`.
    pub fn meet_precision(&self, other: &InterpretationPair) -> Result<InterpretationPair> {
        Ok(InterpretationPair {
            lower: self.lower.meet(&other.lower)?,
            upper: self.upper.join(&other.upper)?,
        })
    }

    /// Precision join `⊕`.
    pub fn join_precision(&self, other: &InterpretationPair) -> Result<InterpretationPair> {
        Ok(InterpretationPair {
            lower: self.lower.join(&other.lower)?,
            upper: self.upper.meet(&other.upper)?,
        })
    }

    pub fn distance(&self, other: &InterpretationPair) -> Result<Number> {
        Ok(self.lower.distance(&other.lower)?.max(self.upper.distance(&other.upper)?))
    }

    pub fn restrict(&self, sub: &Signature) -> Result<InterpretationPair> {
        InterpretationPair::new(self.lower.restrict(sub)?, self.upper.restrict(sub)?)
    }

    pub fn glue(&self, other: &InterpretationPair) -> Result<InterpretationPair> {
        InterpretationPair::new(self.lower.glue(&other.lower)?, self.upper.glue(&other.upper)?)
    }

    /// `(atom, lower, upper)` rows in signature order.
    pub fn rows(&self) -> impl Iterator<Item = (&Atom, &TruthValue, &TruthValue)> {
        self.lower.iter().zip(self.upper.values.iter()).map(|((a, l), u)| (a, l, u))
    }
}

impl fmt::Display for InterpretationPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lower, self.upper)
    }
}
