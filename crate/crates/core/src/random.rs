//! Random programs, interpretations and pairs for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::connectives::{self, Family};
use crate::lattice::{Atom, Interpretation, InterpretationPair, Signature};
use crate::number::TruthValue;
use crate::strata::Partition;
use crate::syntax::{Formula, Program, Rule};

const NAMES: [&str; 12] = ["p", "q", "r", "s", "t", "u", "v", "w", "x", "y", "z", "o"];

#[derive(Clone, Debug)]
pub struct ProgramShape {
    pub max_atoms: usize,
    pub max_rules: usize,
    /// Constants are multiples of `1 / denominator`.
    pub denominator: i64,
    pub max_depth: usize,
    pub negation_probability: f64,
    pub families: Vec<Family>,
}

impl Default for ProgramShape {
    fn default() -> Self {
        ProgramShape {
            max_atoms: 5,
            max_rules: 6,
            denominator: 10,
            max_depth: 2,
            negation_probability: 0.3,
            families: vec![std::sync::Arc::new(connectives::godel())],
        }
    }
}

pub fn atoms(n: usize) -> Vec<Atom> {
    assert!(n <= NAMES.len(), "at most {} random atoms", NAMES.len());
    NAMES[..n].iter().map(|s| Atom::new(s).expect("valid name")).collect()
}

pub fn grid_value<R: Rng + ?Sized>(rng: &mut R, denominator: i64) -> TruthValue {
    TruthValue::ratio(rng.gen_range(0..=denominator), denominator)
}

fn literal<R: Rng + ?Sized>(rng: &mut R, pool: &[Atom], neg: f64) -> Formula {
    let a = pool.choose(rng).expect("non-empty pool").clone();
    if rng.gen_bool(neg) {
        Formula::NegAtom(a)
    } else {
        Formula::Atom(a)
    }
}

fn formula<R: Rng + ?Sized>(rng: &mut R, pool: &[Atom], shape: &ProgramShape, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.4) {
        if rng.gen_bool(0.25) {
            return Formula::Const(grid_value(rng, shape.denominator));
        }
        return literal(rng, pool, shape.negation_probability);
    }
    let family = shape.families.choose(rng).expect("at least one family").clone();
    let l = formula(rng, pool, shape, depth - 1);
    let r = formula(rng, pool, shape, depth - 1);
    if rng.gen_bool(0.5) {
        Formula::Conj(family, Box::new(l), Box::new(r))
    } else {
        Formula::Disj(family, Box::new(l), Box::new(r))
    }
}

fn weight<R: Rng + ?Sized>(rng: &mut R, denominator: i64) -> TruthValue {
    if rng.gen_bool(0.5) {
        TruthValue::one()
    } else {
        grid_value(rng, denominator)
    }
}

/// A program over `1..=max_atoms` atoms with `1..=max_rules` rules. Atoms
/// without rules stay in the signature.
pub fn random_program<R: Rng + ?Sized>(rng: &mut R, shape: &ProgramShape) -> Program {
    let pool = atoms(rng.gen_range(1..=shape.max_atoms));
    let n_rules = rng.gen_range(1..=shape.max_rules);
    let rules = (0..n_rules)
        .map(|_| {
            let head = pool.choose(rng).expect("non-empty").clone();
            let family = shape.families.choose(rng).expect("at least one family").clone();
            Rule::new(
                head,
                weight(rng, shape.denominator),
                family,
                formula(rng, &pool, shape, shape.max_depth),
            )
        })
        .collect();
    Program::new(rules, pool)
}

/// A classical normal program: weight 1, bodies are Gödel conjunctions of
/// up to three literals, the empty body being the constant 1.
pub fn random_classical_program<R: Rng + ?Sized>(rng: &mut R, max_atoms: usize, max_rules: usize) -> Program {
    let godel: Family = std::sync::Arc::new(connectives::godel());
    let pool = atoms(rng.gen_range(1..=max_atoms));
    let n_rules = rng.gen_range(1..=max_rules);
    let rules = (0..n_rules)
        .map(|_| {
            let head = pool.choose(rng).expect("non-empty").clone();
            let body = (0..rng.gen_range(0..=3))
                .map(|_| literal(rng, &pool, 0.4))
                .reduce(|a, b| Formula::conj(&godel, a, b))
                .unwrap_or_else(|| Formula::Const(TruthValue::one()));
            Rule::new(head, TruthValue::one(), godel.clone(), body)
        })
        .collect();
    Program::new(rules, pool)
}

/// A program together with a partition it is stratifiable over: bodies of
/// rules for atoms in stratum `j` only mention atoms of strata `<= j`.
pub fn random_stratified_program<R: Rng + ?Sized>(rng: &mut R, shape: &ProgramShape, strata: usize) -> (Program, Partition) {
    let pool = atoms(rng.gen_range(strata.max(2)..=shape.max_atoms.max(strata)));
    let level: Vec<usize> = pool
        .iter()
        .enumerate()
        .map(|(i, _)| if i < strata { i } else { rng.gen_range(0..strata) })
        .collect();
    let n_rules = rng.gen_range(1..=shape.max_rules);
    let rules = (0..n_rules)
        .map(|_| {
            let h = rng.gen_range(0..pool.len());
            let visible: Vec<Atom> = pool
                .iter()
                .zip(&level)
                .filter(|(_, &l)| l <= level[h])
                .map(|(a, _)| a.clone())
                .collect();
            let family = shape.families.choose(rng).expect("at least one family").clone();
            Rule::new(
                pool[h].clone(),
                weight(rng, shape.denominator),
                family,
                formula(rng, &visible, shape, shape.max_depth),
            )
        })
        .collect();
    let program = Program::new(rules, pool.clone());
    let groups = (0..strata)
        .map(|s| Signature::new(pool.iter().zip(&level).filter(|(_, &l)| l == s).map(|(a, _)| a.clone())))
        .collect();
    let partition = Partition::new(program.signature(), groups).expect("levels cover the atoms");
    (program, partition)
}

pub fn random_interpretation<R: Rng + ?Sized>(rng: &mut R, signature: &Signature, denominator: i64) -> Interpretation {
    let values = (0..signature.len()).map(|_| grid_value(rng, denominator)).collect();
    Interpretation::from_values(signature, values).expect("sizes match")
}

/// A pair with `lower <= upper`.
pub fn random_consistent_pair<R: Rng + ?Sized>(rng: &mut R, signature: &Signature, denominator: i64) -> InterpretationPair {
    let (lower, upper): (Vec<_>, Vec<_>) = (0..signature.len())
        .map(|_| {
            let a = grid_value(rng, denominator);
            let b = grid_value(rng, denominator);
            if a <= b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .unzip();
    InterpretationPair::new(
        Interpretation::from_values(signature, lower).expect("sizes match"),
        Interpretation::from_values(signature, upper).expect("sizes match"),
    )
    .expect("same signature")
}

/// Two consistent pairs `a <=p b`.
pub fn random_precision_chain<R: Rng + ?Sized>(
    rng: &mut R,
    signature: &Signature,
    denominator: i64,
) -> (InterpretationPair, InterpretationPair) {
    let b = random_consistent_pair(rng, signature, denominator);
    let widen = |v: &TruthValue, up: bool, rng: &mut R| {
        let k = rng.gen_range(0..=denominator);
        let w = TruthValue::ratio(k, denominator);
        if up {
            v.clone().max(w)
        } else {
            v.clone().min(w)
        }
    };
    let lower_vals = b.lower().values().iter().map(|v| widen(v, false, rng)).collect();
    let upper_vals = b.upper().values().iter().map(|v| widen(v, true, rng)).collect();
    let a = InterpretationPair::new(
        Interpretation::from_values(signature, lower_vals).expect("sizes match"),
        Interpretation::from_values(signature, upper_vals).expect("sizes match"),
    )
    .expect("same signature");
    (a, b)
}
