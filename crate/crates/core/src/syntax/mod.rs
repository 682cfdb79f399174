//! Normal fuzzy formulas, rules and programs.
//!
//! Negation occurs only directly on atoms. Every rule carries a weight and
//! the connective family whose conjunctor/implicator pair it uses.

mod parser;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use parser::{parse_program, parse_program_with, ParseError, Parser};

use crate::connectives::{AggregatorRef, Family, Registry};
use crate::error::{Error, Result};
use crate::lattice::{Atom, Signature};
use crate::number::TruthValue;

/// Whether an atom occurrence is plain or under `~`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Formula {
    Const(TruthValue),
    Atom(Atom),
    NegAtom(Atom),
    Conj(Family, Box<Formula>, Box<Formula>),
    Disj(Family, Box<Formula>, Box<Formula>),
    Agg(AggregatorRef, Vec<Formula>),
}

impl Formula {
    pub fn constant(v: TruthValue) -> Formula {
        Formula::Const(v)
    }

    pub fn conj(family: &Family, left: Formula, right: Formula) -> Formula {
        Formula::Conj(family.clone(), Box::new(left), Box::new(right))
    }

    pub fn disj(family: &Family, left: Formula, right: Formula) -> Formula {
        Formula::Disj(family.clone(), Box::new(left), Box::new(right))
    }

    /// Calls `f` for every atom occurrence.
    pub fn visit_atoms<F: FnMut(&Atom, Polarity)>(&self, f: &mut F) {
        match self {
            Formula::Const(_) => {}
            Formula::Atom(a) => f(a, Polarity::Positive),
            Formula::NegAtom(a) => f(a, Polarity::Negative),
            Formula::Conj(_, l, r) | Formula::Disj(_, l, r) => {
                l.visit_atoms(f);
                r.visit_atoms(f);
            }
            Formula::Agg(_, args) => args.iter().for_each(|a| a.visit_atoms(f)),
        }
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |a, _| {
            out.insert(a.clone());
        });
        out
    }

    pub fn has_negation(&self) -> bool {
        let mut neg = false;
        self.visit_atoms(&mut |_, p| neg |= p == Polarity::Negative);
        neg
    }

    /// Replaces atom occurrences for which `f` returns a formula.
    pub fn substitute<F>(&self, f: &F) -> Formula
    where
        F: Fn(&Atom, Polarity) -> Option<Formula>,
    {
        match self {
            Formula::Const(_) => self.clone(),
            Formula::Atom(a) => f(a, Polarity::Positive).unwrap_or_else(|| self.clone()),
            Formula::NegAtom(a) => f(a, Polarity::Negative).unwrap_or_else(|| self.clone()),
            Formula::Conj(fam, l, r) => Formula::conj(fam, l.substitute(f), r.substitute(f)),
            Formula::Disj(fam, l, r) => Formula::disj(fam, l.substitute(f), r.substitute(f)),
            Formula::Agg(agg, args) => Formula::Agg(agg.clone(), args.iter().map(|a| a.substitute(f)).collect()),
        }
    }

    fn visit_nodes<'a, F: FnMut(&'a Formula)>(&'a self, f: &mut F) {
        f(self);
        match self {
            Formula::Conj(_, l, r) | Formula::Disj(_, l, r) => {
                l.visit_nodes(f);
                r.visit_nodes(f);
            }
            Formula::Agg(_, args) => args.iter().for_each(|a| a.visit_nodes(f)),
            _ => {}
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    pub head: Atom,
    pub weight: TruthValue,
    pub family: Family,
    pub body: Formula,
}

impl Rule {
    pub fn new(head: Atom, weight: TruthValue, family: Family, body: Formula) -> Rule {
        Rule {
            head,
            weight,
            family,
            body,
        }
    }
}

/// A finite set of rules over a signature.
#[derive(Clone, Debug)]
pub struct Program {
    rules: Vec<Rule>,
    signature: Signature,
    by_head: Vec<Vec<usize>>,
}

impl PartialEq for Program {
    fn eq(&self, other: &Self) -> bool {
        self.signature == other.signature && self.rules == other.rules
    }
}

impl Program {
    /// The signature is every atom in the rules plus `declared`.
    pub fn new(rules: Vec<Rule>, declared: impl IntoIterator<Item = Atom>) -> Program {
        let mut atoms: BTreeSet<Atom> = declared.into_iter().collect();
        for r in &rules {
            atoms.insert(r.head.clone());
            atoms.extend(r.body.atoms());
        }
        let signature = Signature::new(atoms);
        Program::build(rules, signature)
    }

    /// Fails if some rule mentions an atom outside `signature`.
    pub fn with_signature(rules: Vec<Rule>, signature: Signature) -> Result<Program> {
        for r in &rules {
            for a in std::iter::once(r.head.clone()).chain(r.body.atoms()) {
                if !signature.contains(&a) {
                    return Err(Error::UnknownAtom(a.to_string()));
                }
            }
        }
        Ok(Program::build(rules, signature))
    }

    fn build(rules: Vec<Rule>, signature: Signature) -> Program {
        let mut by_head = vec![Vec::new(); signature.len()];
        for (i, r) in rules.iter().enumerate() {
            let h = signature.index_of(&r.head).expect("head in signature");
            by_head[h].push(i);
        }
        Program { rules, signature, by_head }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    /// Rules whose head is the `i`-th atom of the signature.
    pub fn rules_for_index(&self, i: usize) -> impl Iterator<Item = &Rule> {
        self.by_head[i].iter().map(move |&r| &self.rules[r])
    }

    pub fn rules_for<'a>(&'a self, head: &'a Atom) -> impl Iterator<Item = &'a Rule> + 'a {
        self.rules.iter().filter(move |r| &r.head == head)
    }

    pub fn is_positive(&self) -> bool {
        self.rules.iter().all(|r| !r.body.has_negation())
    }

    /// Every constant and weight occurring in the program.
    pub fn constants(&self) -> BTreeSet<TruthValue> {
        let mut out = BTreeSet::new();
        for r in &self.rules {
            out.insert(r.weight.clone());
            r.body.visit_nodes(&mut |n| {
                if let Formula::Const(c) = n {
                    out.insert(c.clone());
                }
            });
        }
        out
    }

    /// Ids of all families and aggregators used.
    pub fn connective_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for r in &self.rules {
            out.insert(r.family.id().to_string());
            r.body.visit_nodes(&mut |n| match n {
                Formula::Conj(f, _, _) | Formula::Disj(f, _, _) => {
                    out.insert(f.id().to_string());
                }
                Formula::Agg(a, _) => {
                    out.insert(a.name().to_string());
                }
                _ => {}
            });
        }
        out
    }

    /// Errors when a connective is restricted to approximate arithmetic.
    pub fn check_exact_mode(&self) -> Result<()> {
        for r in &self.rules {
            if !r.family.is_exact_safe() {
                return Err(Error::RequiresApproximateMode(r.family.id().to_string()));
            }
            let mut bad = None;
            r.body.visit_nodes(&mut |n| match n {
                Formula::Conj(f, _, _) | Formula::Disj(f, _, _) if !f.is_exact_safe() => {
                    bad.get_or_insert_with(|| f.id().to_string());
                }
                Formula::Agg(a, _) if !a.is_exact_safe() => {
                    bad.get_or_insert_with(|| a.name().to_string());
                }
                _ => {}
            });
            if let Some(b) = bad {
                return Err(Error::RequiresApproximateMode(b));
            }
        }
        Ok(())
    }

    /// The same program with every constant stored as a double.
    pub fn to_approximate(&self) -> Program {
        fn conv(f: &Formula) -> Formula {
            match f {
                Formula::Const(c) => Formula::Const(c.to_approx()),
                Formula::Atom(_) | Formula::NegAtom(_) => f.clone(),
                Formula::Conj(fam, l, r) => Formula::conj(fam, conv(l), conv(r)),
                Formula::Disj(fam, l, r) => Formula::disj(fam, conv(l), conv(r)),
                Formula::Agg(a, args) => Formula::Agg(a.clone(), args.iter().map(conv).collect()),
            }
        }
        let rules = self
            .rules
            .iter()
            .map(|r| Rule::new(r.head.clone(), r.weight.to_approx(), r.family.clone(), conv(&r.body)))
            .collect();
        Program::build(rules, self.signature.clone())
    }

    /// Edges `(q, p)` with `q` occurring in the body of a rule for `p`.
    pub fn depends(&self) -> BTreeSet<(Atom, Atom)> {
        let mut out = BTreeSet::new();
        for r in &self.rules {
            r.body.visit_atoms(&mut |q, _| {
                out.insert((q.clone(), r.head.clone()));
            });
        }
        out
    }

    /// Polarities with which each atom occurs across the rules of `head`.
    pub fn body_polarities(&self, head_index: usize) -> BTreeMap<Atom, BTreeSet<Polarity>> {
        let mut out: BTreeMap<Atom, BTreeSet<Polarity>> = BTreeMap::new();
        for r in self.rules_for_index(head_index) {
            r.body.visit_atoms(&mut |a, p| {
                out.entry(a.clone()).or_default().insert(p);
            });
        }
        out
    }

    /// One rule `p <- B_p` per atom, weight 1, Gödel family, where `B_p`
    /// is the Gödel disjunction of `weight /\_i body` over the rules for `p`
    /// and `0` if there are none.
    pub fn join_rules_per_atom(&self, registry: &Registry) -> Program {
        let godel = registry.godel();
        let mut rules = Vec::with_capacity(self.signature.len());
        for (i, head) in self.signature.atoms().iter().enumerate() {
            let body = self
                .rules_for_index(i)
                .map(|r| Formula::conj(&r.family, Formula::Const(r.weight.clone()), r.body.clone()))
                .reduce(|acc, d| Formula::disj(&godel, acc, d))
                .unwrap_or_else(|| Formula::Const(TruthValue::zero()));
            rules.push(Rule::new(head.clone(), TruthValue::one(), godel.clone(), body));
        }
        Program::build(rules, self.signature.clone())
    }
}

fn write_tag(f: &mut fmt::Formatter<'_>, family: &Family) -> fmt::Result {
    if family.id().as_str() != "G" {
        write!(f, "[{}]", family.id())?;
    }
    Ok(())
}

impl Formula {
    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, parens: bool) -> fmt::Result {
        if parens {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Const(c) => f.write_str(&c.to_source_string()),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::NegAtom(a) => write!(f, "~{a}"),
            Formula::Disj(fam, l, r) => {
                l.fmt_child(f, false)?;
                f.write_str(" \\/")?;
                write_tag(f, fam)?;
                f.write_str(" ")?;
                r.fmt_child(f, matches!(**r, Formula::Disj(..)))
            }
            Formula::Conj(fam, l, r) => {
                l.fmt_child(f, matches!(**l, Formula::Disj(..)))?;
                f.write_str(" /\\")?;
                write_tag(f, fam)?;
                f.write_str(" ")?;
                r.fmt_child(f, matches!(**r, Formula::Disj(..) | Formula::Conj(..)))
            }
            Formula::Agg(agg, args) => {
                write!(f, "{}(", agg.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <-", self.head)?;
        if self.family.id().as_str() != "G" {
            write!(f, " [{}]", self.family.id())?;
        }
        if !self.weight.is_one() {
            write!(f, " {{{}}}", self.weight.to_source_string())?;
        }
        write!(f, " {}.", self.body)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mentioned: BTreeSet<Atom> = self
            .rules
            .iter()
            .flat_map(|r| std::iter::once(r.head.clone()).chain(r.body.atoms()))
            .collect();
        let extra: Vec<&Atom> = self.signature.atoms().iter().filter(|a| !mentioned.contains(*a)).collect();
        if !extra.is_empty() {
            let names: Vec<&str> = extra.iter().map(|a| a.name()).collect();
            writeln!(f, "atoms {}.", names.join(", "))?;
        }
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}
