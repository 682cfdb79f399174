//! Formula evaluation, the immediate consequence operator, the symmetric
//! approximator, the reduct, and model checking.

use crate::error::{Error, Result};
use crate::lattice::{Atom, Interpretation, InterpretationPair};
use crate::number::TruthValue;
use crate::syntax::{Formula, Polarity, Program, Rule};

/// Supplies values for plain and negated atom occurrences.
pub trait Valuation {
    fn positive(&self, atom: &Atom) -> Result<TruthValue>;
    /// The value of `~atom`.
    fn negative(&self, atom: &Atom) -> Result<TruthValue>;
}

impl Valuation for Interpretation {
    fn positive(&self, atom: &Atom) -> Result<TruthValue> {
        self.get(atom).cloned()
    }

    fn negative(&self, atom: &Atom) -> Result<TruthValue> {
        Ok(self.get(atom)?.negate())
    }
}

/// Reads plain atoms from `lower` and negated atoms as `1 - upper`.
/// Defined for arbitrary, possibly inconsistent, pairs.
pub struct PairValuation<'a> {
    pub lower: &'a Interpretation,
    pub upper: &'a Interpretation,
}

impl Valuation for PairValuation<'_> {
    fn positive(&self, atom: &Atom) -> Result<TruthValue> {
        self.lower.get(atom).cloned()
    }

    fn negative(&self, atom: &Atom) -> Result<TruthValue> {
        Ok(self.upper.get(atom)?.negate())
    }
}

/// Any `Fn(&Atom, Polarity) -> Result<TruthValue>` is a valuation.
pub struct FnValuation<F>(pub F);

impl<F> Valuation for FnValuation<F>
where
    F: Fn(&Atom, Polarity) -> Result<TruthValue>,
{
    fn positive(&self, atom: &Atom) -> Result<TruthValue> {
        (self.0)(atom, Polarity::Positive)
    }

    fn negative(&self, atom: &Atom) -> Result<TruthValue> {
        (self.0)(atom, Polarity::Negative)
    }
}

pub fn eval<V: Valuation + ?Sized>(v: &V, formula: &Formula) -> Result<TruthValue> {
    Ok(match formula {
        Formula::Const(c) => c.clone(),
        Formula::Atom(a) => v.positive(a)?,
        Formula::NegAtom(a) => v.negative(a)?,
        Formula::Conj(f, l, r) => f.conj(&eval(v, l)?, &eval(v, r)?),
        Formula::Disj(f, l, r) => f.disj(&eval(v, l)?, &eval(v, r)?),
        Formula::Agg(agg, args) => {
            let vals = args.iter().map(|a| eval(v, a)).collect::<Result<Vec<_>>>()?;
            agg.apply(&vals)
        }
    })
}

pub fn eval_formula(i: &Interpretation, formula: &Formula) -> Result<TruthValue> {
    eval(i, formula)
}

pub fn eval_formula_pair(lower: &Interpretation, upper: &Interpretation, formula: &Formula) -> Result<TruthValue> {
    eval(&PairValuation { lower, upper }, formula)
}

/// `weight /\_i body` for one rule.
pub fn rule_value<V: Valuation + ?Sized>(v: &V, rule: &Rule) -> Result<TruthValue> {
    Ok(rule.family.conj(&rule.weight, &eval(v, &rule.body)?))
}

/// Supremum of the rule values for the `i`-th atom; `0` without rules.
pub fn head_value<V: Valuation + ?Sized>(program: &Program, i: usize, v: &V) -> Result<TruthValue> {
    let mut best = TruthValue::zero();
    for r in program.rules_for_index(i) {
        best = best.max(rule_value(v, r)?);
    }
    Ok(best)
}

fn consequences<V: Valuation + ?Sized>(program: &Program, v: &V) -> Result<Interpretation> {
    let values = (0..program.signature().len())
        .map(|i| head_value(program, i, v))
        .collect::<Result<Vec<_>>>()?;
    Interpretation::from_values(program.signature(), values)
}

fn check_signature(program: &Program, i: &Interpretation) -> Result<()> {
    if program.signature() == i.signature() {
        Ok(())
    } else {
        Err(Error::SignatureMismatch(format!(
            "interpretation over {:?}, program over {:?}",
            i.signature().atoms(),
            program.signature().atoms()
        )))
    }
}

/// The immediate consequence operator.
pub fn tp(program: &Program, i: &Interpretation) -> Result<Interpretation> {
    check_signature(program, i)?;
    consequences(program, i)
}

/// First component of the approximator at `(lower, upper)`.
pub fn approximator_lower(program: &Program, lower: &Interpretation, upper: &Interpretation) -> Result<Interpretation> {
    check_signature(program, lower)?;
    check_signature(program, upper)?;
    consequences(program, &PairValuation { lower, upper })
}

/// The symmetric approximator: `(lower(L, U), lower(U, L))`.
pub fn approximator(program: &Program, pair: &InterpretationPair) -> Result<InterpretationPair> {
    InterpretationPair::new(
        approximator_lower(program, pair.lower(), pair.upper())?,
        approximator_lower(program, pair.upper(), pair.lower())?,
    )
}

/// Replaces every `~p` by the constant `1 - I(p)`; plain occurrences stay.
pub fn reduct(program: &Program, i: &Interpretation) -> Result<Program> {
    check_signature(program, i)?;
    let rules = program
        .rules()
        .iter()
        .map(|r| {
            let body = r.body.substitute(&|a, pol| match pol {
                Polarity::Negative => Some(Formula::Const(i.get(a).expect("checked signature").negate())),
                Polarity::Positive => None,
            });
            Rule::new(r.head.clone(), r.weight.clone(), r.family.clone(), body)
        })
        .collect();
    Program::with_signature(rules, program.signature().clone())
}

/// `I` is a model iff `tp(I) <= I`; cross-checked against rule satisfaction
/// `weight <= implication(I(head), I(body))` for exact values.
pub fn is_model(program: &Program, i: &Interpretation) -> Result<bool> {
    let by_operator = tp(program, i)?.leq(i)?;
    let mut by_rules = true;
    let mut exact = i.values().iter().all(TruthValue::is_exact);
    for r in program.rules() {
        let head = i.get(&r.head)?;
        let body = eval(i, &r.body)?;
        let bound = r.family.implication(head, &body);
        exact &= bound.is_exact();
        by_rules &= r.weight <= bound;
    }
    if exact && by_operator != by_rules {
        return Err(Error::InternalInconsistency(format!(
            "pre-fixpoint test says {by_operator}, rule satisfaction says {by_rules} for {i}"
        )));
    }
    Ok(by_operator)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Signature;
    use crate::syntax::parse_program;

    const P1: &str = "r <- 0.3 \\/ (s /\\ 0.6). s <- s.";
    const P2: &str = "p <- ~q \\/ r. q <- ~p \\/ s. r <- 0.3 \\/ (s /\\ 0.6). s <- s.";
    const P4: &str = "p <- p. p <- ~p.";

    fn interp(p: &Program, e: &[(&str, i64, i64)]) -> Interpretation {
        Interpretation::from_ratios(p.signature(), e).unwrap()
    }

    fn body(text: &str) -> Formula {
        parse_program(&format!("x <- {text}.")).unwrap().rules()[0].body.clone()
    }

    #[test]
    fn eval_examples() {
        let p = parse_program(P1).unwrap();
        let bot = Interpretation::bottom(p.signature());
        assert_eq!(eval_formula(&bot, &p.rules()[0].body).unwrap(), TruthValue::ratio(3, 10));

        let sig = Signature::new([Atom::new("p").unwrap(), Atom::new("q").unwrap(), Atom::new("x").unwrap()]);
        let i = Interpretation::from_ratios(&sig, &[("p", 4, 10), ("q", 9, 10), ("x", 0, 1)]).unwrap();
        assert_eq!(eval_formula(&i, &body("~p")).unwrap(), TruthValue::ratio(6, 10));
        assert_eq!(eval_formula(&i, &body("mean(p, q)")).unwrap(), TruthValue::ratio(65, 100));
        assert!(matches!(eval_formula(&i, &body("zz")), Err(Error::UnknownAtom(_))));
    }

    #[test]
    fn eval_pair_examples() {
        let p2 = parse_program(P2).unwrap();
        let s = p2.signature();
        let v = eval_formula_pair(&Interpretation::bottom(s), &Interpretation::top(s), &p2.rules()[0].body).unwrap();
        assert_eq!(v, TruthValue::zero());

        let l = interp(&p2, &[("p", 0, 1), ("q", 0, 1), ("r", 0, 1), ("s", 0, 1)]);
        let u = interp(&p2, &[("p", 0, 1), ("q", 3, 10), ("r", 0, 1), ("s", 0, 1)]);
        let f = Formula::NegAtom(Atom::new("q").unwrap());
        assert_eq!(eval_formula_pair(&l, &u, &f).unwrap(), TruthValue::ratio(7, 10));
    }

    #[test]
    fn tp_examples() {
        let p1 = parse_program(P1).unwrap();
        let bot = Interpretation::bottom(p1.signature());
        let i1 = interp(&p1, &[("r", 3, 10), ("s", 0, 1)]);
        assert_eq!(tp(&p1, &bot).unwrap(), i1);
        assert_eq!(tp(&p1, &i1).unwrap(), i1);

        let p2 = parse_program(P2).unwrap();
        let bot2 = Interpretation::bottom(p2.signature());
        let expected = interp(&p2, &[("p", 1, 1), ("q", 1, 1), ("r", 3, 10), ("s", 0, 1)]);
        assert_eq!(tp(&p2, &bot2).unwrap(), expected);
    }

    #[test]
    fn model_examples() {
        let p1 = parse_program(P1).unwrap();
        assert!(is_model(&p1, &interp(&p1, &[("r", 3, 10), ("s", 0, 1)])).unwrap());
        assert!(!is_model(&p1, &interp(&p1, &[("r", 2, 10), ("s", 0, 1)])).unwrap());
        let p2 = parse_program(P2).unwrap();
        assert!(is_model(&p2, &interp(&p2, &[("p", 6, 10), ("q", 4, 10), ("r", 3, 10), ("s", 0, 1)])).unwrap());
    }

    #[test]
    fn approximator_examples() {
        let p2 = parse_program(P2).unwrap();
        let out = approximator(&p2, &InterpretationPair::least_precise(p2.signature())).unwrap();
        assert_eq!(out.lower(), &interp(&p2, &[("p", 0, 1), ("q", 0, 1), ("r", 3, 10), ("s", 0, 1)]));
        assert_eq!(out.upper(), &interp(&p2, &[("p", 1, 1), ("q", 1, 1), ("r", 6, 10), ("s", 1, 1)]));

        let p4 = parse_program(P4).unwrap();
        let bt = InterpretationPair::least_precise(p4.signature());
        assert_eq!(approximator(&p4, &bt).unwrap(), bt);
    }

    #[test]
    fn approximator_brute_force_corner_oracle() {
        // Each body of P2 evaluated by hand-rolled corner logic: positive atoms
        // at the lower corner, negated atoms at the upper corner.
        let p2 = parse_program(P2).unwrap();
        let s = p2.signature();
        let (bot, top) = (Interpretation::bottom(s), Interpretation::top(s));
        let corner = |pos: &Interpretation, neg: &Interpretation, head: &str| {
            p2.rules_for(&Atom::new(head).unwrap())
                .map(|r| {
                    let v = FnValuation(|a: &Atom, pol| match pol {
                        Polarity::Positive => pos.get(a).cloned(),
                        Polarity::Negative => Ok(neg.get(a)?.negate()),
                    });
                    rule_value(&v, r).unwrap()
                })
                .max()
                .unwrap_or_else(TruthValue::zero)
        };
        let out = approximator(&p2, &InterpretationPair::least_precise(s)).unwrap();
        for a in s.atoms() {
            assert_eq!(out.lower().get(a).unwrap(), &corner(&bot, &top, a.name()));
            assert_eq!(out.upper().get(a).unwrap(), &corner(&top, &bot, a.name()));
        }
    }

    #[test]
    fn reduct_examples() {
        let p2 = parse_program(P2).unwrap();
        let i = interp(&p2, &[("p", 6, 10), ("q", 4, 10), ("r", 3, 10), ("s", 0, 1)]);
        let expected = parse_program("p <- 0.6 \\/ r. q <- 0.4 \\/ s. r <- 0.3 \\/ (s /\\ 0.6). s <- s.").unwrap();
        assert_eq!(reduct(&p2, &i).unwrap(), expected);

        let p1 = parse_program(P1).unwrap();
        assert_eq!(reduct(&p1, &Interpretation::top(p1.signature())).unwrap(), p1);

        let p4 = parse_program(P4).unwrap();
        let half = interp(&p4, &[("p", 1, 2)]);
        assert_eq!(reduct(&p4, &half).unwrap(), parse_program("p <- p. p <- 0.5.").unwrap());
    }
}
