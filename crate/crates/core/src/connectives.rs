//! Connective families (conjunctor, disjunctor, implicator) and aggregators.
//!
//! A family bundles the truth functions that share an adjoint index. The
//! implicator takes `(head, body)` in that order, so a weighted rule is
//! satisfied by `I` iff `weight <= implication(I(head), I(body))`.
//! Semantics computations only ever use the conjunctor side; implicators
//! are kept for model checking and for the adjointness gate.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::number::{Number, TruthValue};

pub type BinaryFn = Arc<dyn Fn(&TruthValue, &TruthValue) -> TruthValue + Send + Sync>;
pub type AggregateFn = Arc<dyn Fn(&[TruthValue]) -> TruthValue + Send + Sync>;

/// Resolution of the grid user-defined families are checked on.
pub const REGISTRATION_GRID: i64 = 50;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FamilyId(Arc<str>);

impl FamilyId {
    pub fn new(id: &str) -> FamilyId {
        FamilyId(Arc::from(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub struct ConnectiveFamily {
    id: FamilyId,
    conj: BinaryFn,
    disj: BinaryFn,
    implication: BinaryFn,
    exact_safe: bool,
}

pub type Family = Arc<ConnectiveFamily>;

impl ConnectiveFamily {
    pub fn new(id: &str, conj: BinaryFn, disj: BinaryFn, implication: BinaryFn) -> ConnectiveFamily {
        ConnectiveFamily {
            id: FamilyId::new(id),
            conj,
            disj,
            implication,
            exact_safe: true,
        }
    }

    /// Marks the family as usable only with approximate arithmetic.
    pub fn approximate_only(mut self) -> Self {
        self.exact_safe = false;
        self
    }

    pub fn id(&self) -> &FamilyId {
        &self.id
    }

    /// Whether exact fixpoint iteration is supported with this family.
    pub fn is_exact_safe(&self) -> bool {
        self.exact_safe
    }

    pub fn conj(&self, x: &TruthValue, y: &TruthValue) -> TruthValue {
        (self.conj)(x, y)
    }

    pub fn disj(&self, x: &TruthValue, y: &TruthValue) -> TruthValue {
        (self.disj)(x, y)
    }

    pub fn implication(&self, head: &TruthValue, body: &TruthValue) -> TruthValue {
        (self.implication)(head, body)
    }
}

impl fmt::Debug for ConnectiveFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Family({})", self.id)
    }
}

impl PartialEq for ConnectiveFamily {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for ConnectiveFamily {}

pub struct Aggregator {
    name: String,
    f: AggregateFn,
    exact_safe: bool,
}

pub type AggregatorRef = Arc<Aggregator>;

impl Aggregator {
    pub fn new(name: &str, f: AggregateFn) -> Aggregator {
        Aggregator {
            name: name.to_string(),
            f,
            exact_safe: true,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_exact_safe(&self) -> bool {
        self.exact_safe
    }

    pub fn apply(&self, args: &[TruthValue]) -> TruthValue {
        (self.f)(args)
    }
}

impl fmt::Debug for Aggregator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Aggregator({})", self.name)
    }
}

impl PartialEq for Aggregator {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

impl Eq for Aggregator {}

fn min_tv(x: &TruthValue, y: &TruthValue) -> TruthValue {
    x.clone().min(y.clone())
}

fn max_tv(x: &TruthValue, y: &TruthValue) -> TruthValue {
    x.clone().max(y.clone())
}

/// Gödel: min, max, and `head` if `body > head`, else 1.
pub fn godel() -> ConnectiveFamily {
    ConnectiveFamily::new(
        "G",
        Arc::new(min_tv),
        Arc::new(max_tv),
        Arc::new(|head, body| if body > head { head.clone() } else { TruthValue::one() }),
    )
}

/// Łukasiewicz: `max(0, x+y-1)`, `min(1, x+y)`, `min(1, 1 - body + head)`.
pub fn lukasiewicz() -> ConnectiveFamily {
    ConnectiveFamily::new(
        "L",
        Arc::new(|x, y| TruthValue::clamp(&(x.number() + y.number()) - &Number::one())),
        Arc::new(|x, y| TruthValue::clamp(x.number() + y.number())),
        Arc::new(|head, body| TruthValue::clamp(&(&Number::one() - body.number()) + head.number())),
    )
}

/// Product: `x*y`, `x+y-x*y`, Goguen implication. Exact iteration need not
/// terminate, so the family is restricted to approximate mode.
pub fn product() -> ConnectiveFamily {
    ConnectiveFamily::new(
        "P",
        Arc::new(|x, y| TruthValue::clamp(x.number() * y.number())),
        Arc::new(|x, y| TruthValue::clamp(&(x.number() + y.number()) - &(x.number() * y.number()))),
        Arc::new(|head, body| {
            if body <= head {
                TruthValue::one()
            } else {
                TruthValue::clamp(head.number().checked_div(body.number()).unwrap_or_else(Number::one))
            }
        }),
    )
    .approximate_only()
}

pub fn builtin_families() -> Vec<Family> {
    vec![Arc::new(godel()), Arc::new(lukasiewicz()), Arc::new(product())]
}

pub fn builtin_aggregators() -> Vec<AggregatorRef> {
    let min = Aggregator::new(
        "min",
        Arc::new(|args: &[TruthValue]| args.iter().cloned().min().unwrap_or_else(TruthValue::one)),
    );
    let max = Aggregator::new(
        "max",
        Arc::new(|args: &[TruthValue]| args.iter().cloned().max().unwrap_or_else(TruthValue::zero)),
    );
    let mean = Aggregator::new(
        "mean",
        Arc::new(|args: &[TruthValue]| {
            if args.is_empty() {
                return TruthValue::zero();
            }
            let sum = args.iter().fold(Number::zero(), |acc, v| &acc + v.number());
            let n = Number::ratio(args.len() as i64, 1);
            TruthValue::clamp(sum.checked_div(&n).unwrap_or_else(Number::zero))
        }),
    );
    vec![Arc::new(min), Arc::new(max), Arc::new(mean)]
}

/// Lookup table from ids to families and aggregators.
#[derive(Clone, Debug)]
pub struct Registry {
    families: BTreeMap<FamilyId, Family>,
    aggregators: BTreeMap<String, AggregatorRef>,
}

impl Default for Registry {
    fn default() -> Self {
        Registry::builtin()
    }
}

impl Registry {
    pub fn builtin() -> Registry {
        Registry {
            families: builtin_families().into_iter().map(|f| (f.id().clone(), f)).collect(),
            aggregators: builtin_aggregators().into_iter().map(|a| (a.name().to_string(), a)).collect(),
        }
    }

    pub fn family(&self, id: &str) -> Result<Family> {
        let id = if id == "Ł" { "L" } else { id };
        self.families
            .get(&FamilyId::new(id))
            .cloned()
            .ok_or_else(|| Error::UnknownFamily(id.to_string()))
    }

    pub fn godel(&self) -> Family {
        self.family("G").expect("Gödel family is always registered")
    }

    pub fn aggregator(&self, name: &str) -> Result<AggregatorRef> {
        self.aggregators
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownAggregator(name.to_string()))
    }

    pub fn families(&self) -> impl Iterator<Item = &Family> {
        self.families.values()
    }

    pub fn aggregators(&self) -> impl Iterator<Item = &AggregatorRef> {
        self.aggregators.values()
    }

    /// Registers a family after grid-checking the adjoint condition and the
    /// connective axioms at resolution [`REGISTRATION_GRID`].
    pub fn register_family(&mut self, family: ConnectiveFamily) -> Result<Family> {
        let g = grid(REGISTRATION_GRID);
        let reports = [check_adjoint(&family, grid_triples(&g)), check_axioms(&family, &g)];
        if let Some(bad) = reports.iter().find(|r| !r.passed()) {
            return Err(Error::FamilyRejected {
                family: family.id().to_string(),
                reason: bad.to_string(),
            });
        }
        let family = Arc::new(family);
        self.families.insert(family.id().clone(), family.clone());
        Ok(family)
    }

    /// Registers an aggregator after checking monotonicity in each argument
    /// for arities 1 to 3 on a coarse grid.
    pub fn register_aggregator(&mut self, aggregator: Aggregator) -> Result<AggregatorRef> {
        let g = grid(10);
        for arity in 1..=3 {
            let report = check_aggregator(&aggregator, &g, arity);
            if !report.passed() {
                return Err(Error::FamilyRejected {
                    family: aggregator.name().to_string(),
                    reason: report.to_string(),
                });
            }
        }
        let aggregator = Arc::new(aggregator);
        self.aggregators.insert(aggregator.name().to_string(), aggregator.clone());
        Ok(aggregator)
    }
}

/// Outcome of an axiom or adjointness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub subject: String,
    pub property: String,
    pub checked: usize,
    pub counterexample: Option<String>,
}

impl CheckReport {
    fn new(subject: &str, property: &str) -> CheckReport {
        CheckReport {
            subject: subject.to_string(),
            property: property.to_string(),
            checked: 0,
            counterexample: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    /// Records one check; keeps the first failure.
    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(describe());
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => write!(f, "{} {}: pass ({} checks)", self.subject, self.property, self.checked),
            Some(c) => write!(f, "{} {}: FAIL at {}", self.subject, self.property, c),
        }
    }
}

/// `{0, 1/n, ..., 1}`.
pub fn grid(n: i64) -> Vec<TruthValue> {
    assert!(n >= 1);
    (0..=n).map(|k| TruthValue::ratio(k, n)).collect()
}

pub fn grid_triples(g: &[TruthValue]) -> impl Iterator<Item = (TruthValue, TruthValue, TruthValue)> + '_ {
    g.iter()
        .flat_map(move |x| g.iter().flat_map(move |y| g.iter().map(move |z| (x.clone(), y.clone(), z.clone()))))
}

/// Checks `conj(x, y) <= z  iff  y <= implication(z, x)` on the samples.
pub fn check_adjoint<I>(family: &ConnectiveFamily, samples: I) -> CheckReport
where
    I: IntoIterator<Item = (TruthValue, TruthValue, TruthValue)>,
{
    let mut report = CheckReport::new(family.id().as_str(), "adjointness");
    for (x, y, z) in samples {
        let left = family.conj(&x, &y) <= z;
        let right = y <= family.implication(&z, &x);
        report.record(left == right, || format!("x={x}, y={y}, z={z}"));
        if !report.passed() {
            break;
        }
    }
    report
}

/// Checks conjunctor and disjunctor bounds, identities and monotonicity, and
/// implicator (anti)monotonicity on a sorted grid.
pub fn check_axioms(family: &ConnectiveFamily, grid: &[TruthValue]) -> CheckReport {
    let mut r = CheckReport::new(family.id().as_str(), "axioms");
    let one = TruthValue::one();
    let zero = TruthValue::zero();
    for x in grid {
        let c1 = family.conj(x, &one);
        let c2 = family.conj(&one, x);
        r.record(&c1 == x && &c2 == x, || format!("conj identity at x={x}"));
        let d1 = family.disj(x, &zero);
        let d2 = family.disj(&zero, x);
        r.record(&d1 == x && &d2 == x, || format!("disj identity at x={x}"));
        for y in grid {
            let c = family.conj(x, y);
            r.record(&c <= x && &c <= y, || format!("conj({x}, {y}) = {c} exceeds an argument"));
            let d = family.disj(x, y);
            r.record(x <= &d && y <= &d, || format!("disj({x}, {y}) = {d} below an argument"));
        }
    }
    for w in grid.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        for y in grid {
            r.record(family.conj(a, y) <= family.conj(b, y), || {
                format!("conj not monotone in 1st at {a}<{b}, y={y}")
            });
            r.record(family.conj(y, a) <= family.conj(y, b), || {
                format!("conj not monotone in 2nd at {a}<{b}, x={y}")
            });
            r.record(family.disj(a, y) <= family.disj(b, y), || {
                format!("disj not monotone in 1st at {a}<{b}, y={y}")
            });
            r.record(family.disj(y, a) <= family.disj(y, b), || {
                format!("disj not monotone in 2nd at {a}<{b}, x={y}")
            });
            r.record(family.implication(a, y) <= family.implication(b, y), || {
                format!("implication not monotone in head at {a}<{b}, body={y}")
            });
            r.record(family.implication(y, b) <= family.implication(y, a), || {
                format!("implication not antimonotone in body at {a}<{b}, head={y}")
            });
        }
    }
    r
}

/// Checks monotonicity of an aggregator in each argument for the given arity.
pub fn check_aggregator(aggregator: &Aggregator, grid: &[TruthValue], arity: usize) -> CheckReport {
    let mut r = CheckReport::new(aggregator.name(), &format!("monotonicity/{arity}"));
    let n = grid.len();
    let total = n.pow(arity as u32);
    for code in 0..total {
        let mut idx = Vec::with_capacity(arity);
        let mut c = code;
        for _ in 0..arity {
            idx.push(c % n);
            c /= n;
        }
        let args: Vec<TruthValue> = idx.iter().map(|&i| grid[i].clone()).collect();
        let base = aggregator.apply(&args);
        r.record(TruthValue::new(base.number().clone()).is_ok(), || format!("{args:?} out of range"));
        for pos in 0..arity {
            if idx[pos] + 1 < n {
                let mut bumped = args.clone();
                bumped[pos] = grid[idx[pos] + 1].clone();
                let v = aggregator.apply(&bumped);
                r.record(base <= v, || format!("decreases in argument {pos} at {args:?}"));
            }
        }
    }
    r
}
