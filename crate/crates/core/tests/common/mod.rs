//! Shared fixtures and an independent two-valued oracle.

#![allow(dead_code)]

use std::collections::BTreeSet;

use flp_core::syntax::{Formula, Program};
use flp_core::{Atom, Interpretation, InterpretationPair, TruthValue};

pub const P1: &str = "r <- 0.3 \\/ (s /\\ 0.6). s <- s.";
pub const P2: &str = "p <- ~q \\/ r. q <- ~p \\/ s. r <- 0.3 \\/ (s /\\ 0.6). s <- s.";
pub const P3: &str = "p <- q. p <- p. q <- ~r. r <- ~q.";
pub const P4: &str = "p <- p. p <- ~p.";

pub fn program(text: &str) -> Program {
    flp_core::parse_program(text).expect("fixture parses")
}

pub fn interp(p: &Program, entries: &[(&str, i64, i64)]) -> Interpretation {
    Interpretation::from_ratios(p.signature(), entries).expect("fixture interpretation")
}

pub fn pair(p: &Program, lower: &[(&str, i64, i64)], upper: &[(&str, i64, i64)]) -> InterpretationPair {
    InterpretationPair::new(interp(p, lower), interp(p, upper)).expect("same signature")
}

/// A classical normal rule `head <- pos, not neg`.
#[derive(Clone, Debug)]
pub struct ClassicalRule {
    pub head: usize,
    pub pos: Vec<usize>,
    pub neg: Vec<usize>,
    /// A body containing the constant 0 never fires.
    pub blocked: bool,
}

/// Reads a program whose bodies are conjunctions of literals and 0/1
/// constants, with weight 1.
pub fn classical_rules(p: &Program) -> Vec<ClassicalRule> {
    fn walk(f: &Formula, idx: &dyn Fn(&Atom) -> usize, r: &mut ClassicalRule) {
        match f {
            Formula::Const(c) if c.is_one() => {}
            Formula::Const(c) if c.is_zero() => r.blocked = true,
            Formula::Atom(a) => r.pos.push(idx(a)),
            Formula::NegAtom(a) => r.neg.push(idx(a)),
            Formula::Conj(_, a, b) => {
                walk(a, idx, r);
                walk(b, idx, r);
            }
            other => panic!("not a classical body: {other}"),
        }
    }
    let sig = p.signature();
    let idx = |a: &Atom| sig.index_of(a).expect("known atom");
    p.rules()
        .iter()
        .map(|rule| {
            assert!(rule.weight.is_one(), "classical rules have weight 1");
            let mut r = ClassicalRule {
                head: idx(&rule.head),
                pos: vec![],
                neg: vec![],
                blocked: false,
            };
            walk(&rule.body, &idx, &mut r);
            r
        })
        .collect()
}

/// Least model of the reduct of `rules` with respect to `m`.
pub fn gamma(rules: &[ClassicalRule], m: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    loop {
        let before = out.len();
        for r in rules {
            if !r.blocked && r.neg.iter().all(|a| !m.contains(a)) && r.pos.iter().all(|a| out.contains(a)) {
                out.insert(r.head);
            }
        }
        if out.len() == before {
            return out;
        }
    }
}

/// All stable models by subset enumeration.
pub fn classical_stable_models(rules: &[ClassicalRule], n: usize) -> Vec<BTreeSet<usize>> {
    (0u32..(1 << n))
        .map(|bits| (0..n).filter(|i| bits & (1 << i) != 0).collect::<BTreeSet<_>>())
        .filter(|m| &gamma(rules, m) == m)
        .collect()
}

/// Well-founded model by the alternating fixpoint: `(true atoms, atoms not false)`.
pub fn classical_well_founded(rules: &[ClassicalRule]) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let mut t = BTreeSet::new();
    loop {
        let next = gamma(rules, &gamma(rules, &t));
        if next == t {
            return (t.clone(), gamma(rules, &t));
        }
        t = next;
    }
}

pub fn indicator(p: &Program, set: &BTreeSet<usize>) -> Interpretation {
    let values = (0..p.signature().len())
        .map(|i| if set.contains(&i) { TruthValue::one() } else { TruthValue::zero() })
        .collect();
    Interpretation::from_values(p.signature(), values).expect("sizes match")
}

/// Every value the exact Gödel-family iterations can reach: 0, 1, the
/// program's constants and their complements.
pub fn godel_closure(p: &Program) -> BTreeSet<TruthValue> {
    let mut set: BTreeSet<TruthValue> = [TruthValue::zero(), TruthValue::one()].into_iter().collect();
    for c in p.constants() {
        set.insert(c.negate());
        set.insert(c);
    }
    set
}

/// Infimum and supremum of `tp(z)(h)` over every `z` in `[l, u]` whose
/// values are multiples of `1/n`, plus the box endpoints.
pub fn brute_force_ultimate(p: &Program, pair: &InterpretationPair, n: i64) -> InterpretationPair {
    let sig = p.signature();
    let axes: Vec<Vec<TruthValue>> = pair
        .rows()
        .map(|(_, l, u)| {
            let mut vals: BTreeSet<TruthValue> = (0..=n).map(|k| TruthValue::ratio(k, n)).filter(|v| l <= v && v <= u).collect();
            vals.insert(l.clone());
            vals.insert(u.clone());
            vals.into_iter().collect()
        })
        .collect();
    let mut lower = vec![TruthValue::one(); sig.len()];
    let mut upper = vec![TruthValue::zero(); sig.len()];
    let mut idx = vec![0usize; axes.len()];
    'outer: loop {
        let z = Interpretation::from_values(sig, idx.iter().zip(&axes).map(|(&i, a)| a[i].clone()).collect()).unwrap();
        let t = flp_core::semantics::tp(p, &z).unwrap();
        for (h, v) in t.values().iter().enumerate() {
            lower[h] = lower[h].clone().min(v.clone());
            upper[h] = upper[h].clone().max(v.clone());
        }
        for k in 0..idx.len() {
            idx[k] += 1;
            if idx[k] < axes[k].len() {
                continue 'outer;
            }
            idx[k] = 0;
        }
        break;
    }
    InterpretationPair::new(
        Interpretation::from_values(sig, lower).unwrap(),
        Interpretation::from_values(sig, upper).unwrap(),
    )
    .unwrap()
}
