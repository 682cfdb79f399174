//! Least-fixpoint iteration, the Kripke-Kleene and well-founded fixpoints,
//! and stable-model checking.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{Interpretation, InterpretationPair, Signature};
use crate::number::{Number, TruthValue};
use crate::semantics::{approximator_lower, reduct, tp};
use crate::syntax::Program;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    /// Accept `|x_{k+1} - x_k| <= eps` in the sup norm.
    Epsilon(TruthValue),
}

#[derive(Clone, Debug)]
pub struct ConvergencePolicy {
    pub mode: Mode,
    pub max_iterations: usize,
    /// Keep every visited value in the result.
    pub trace: bool,
}

impl Default for ConvergencePolicy {
    fn default() -> Self {
        ConvergencePolicy {
            mode: Mode::Exact,
            max_iterations: 100_000,
            trace: false,
        }
    }
}

impl ConvergencePolicy {
    pub fn exact() -> Self {
        Self::default()
    }

    pub fn epsilon(eps: TruthValue) -> Result<Self> {
        if eps.is_zero() {
            return Err(Error::InvalidConfig("epsilon must be positive".into()));
        }
        Ok(ConvergencePolicy {
            mode: Mode::Epsilon(eps),
            ..Self::default()
        })
    }

    pub fn with_max_iterations(mut self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidConfig("max_iterations must be positive".into()));
        }
        self.max_iterations = n;
        Ok(self)
    }

    pub fn with_trace(mut self, trace: bool) -> Self {
        self.trace = trace;
        self
    }

    /// The same policy without trace retention, for inner iterations.
    pub fn untraced(&self) -> Self {
        ConvergencePolicy {
            trace: false,
            ..self.clone()
        }
    }

    fn close_enough(&self, d: &Number) -> bool {
        match &self.mode {
            Mode::Exact => d == &Number::zero(),
            Mode::Epsilon(eps) => d <= eps.number(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    /// `op(x) = x` literally.
    Converged,
    /// The last step moved by at most epsilon.
    WithinEpsilon,
    BudgetExhausted,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Converged => "converged",
            Status::WithinEpsilon => "within_epsilon",
            Status::BudgetExhausted => "iteration_budget_exhausted",
        })
    }
}

#[derive(Clone, Debug)]
pub struct FixpointResult<T> {
    pub value: T,
    pub status: Status,
    /// Productive applications: those that changed the value.
    pub steps: usize,
    /// Visited values, starting with the start value.
    pub trace: Option<Vec<T>>,
}

impl<T> FixpointResult<T> {
    pub fn is_converged(&self) -> bool {
        !matches!(self.status, Status::BudgetExhausted)
    }

    /// The value, or an error when the budget ran out.
    pub fn into_value(self) -> Result<T> {
        match self.status {
            Status::BudgetExhausted => Err(Error::BudgetExhausted(self.steps)),
            _ => Ok(self.value),
        }
    }
}

/// Values the engine can iterate over.
pub trait Iterand: Clone + PartialEq {
    /// The order the iteration must ascend in.
    fn ascends_to(&self, next: &Self) -> Result<bool>;
    fn distance_to(&self, other: &Self) -> Result<Number>;
}

impl Iterand for Interpretation {
    fn ascends_to(&self, next: &Self) -> Result<bool> {
        self.leq(next)
    }

    fn distance_to(&self, other: &Self) -> Result<Number> {
        self.distance(other)
    }
}

/// Pairs ascend in the precision order.
impl Iterand for InterpretationPair {
    fn ascends_to(&self, next: &Self) -> Result<bool> {
        self.leq_precision(next)
    }

    fn distance_to(&self, other: &Self) -> Result<Number> {
        self.distance(other)
    }
}

/// Iterates `op` from `start` until it stabilises; `ascends(x, op(x))`
/// must hold at every step.
pub fn iterate_with<T, F, A>(start: T, policy: &ConvergencePolicy, mut op: F, ascends: A) -> Result<FixpointResult<T>>
where
    T: Iterand,
    F: FnMut(&T) -> Result<T>,
    A: Fn(&T, &T) -> Result<bool>,
{
    let mut trace = policy.trace.then(|| vec![start.clone()]);
    let mut x = start;
    let mut steps = 0;
    for _ in 0..policy.max_iterations {
        let next = op(&x)?;
        if next == x {
            return Ok(FixpointResult {
                value: x,
                status: Status::Converged,
                steps,
                trace,
            });
        }
        if !ascends(&x, &next)? {
            return Err(Error::NonMonotone { step: steps + 1 });
        }
        steps += 1;
        let close = policy.close_enough(&x.distance_to(&next)?);
        if let Some(t) = trace.as_mut() {
            t.push(next.clone());
        }
        x = next;
        if close {
            return Ok(FixpointResult {
                value: x,
                status: Status::WithinEpsilon,
                steps,
                trace,
            });
        }
    }
    Ok(FixpointResult {
        value: x,
        status: Status::BudgetExhausted,
        steps,
        trace,
    })
}

/// Least fixpoint of a monotone operator, iterated from `start`.
pub fn lfp_monotone<T, F>(op: F, start: T, policy: &ConvergencePolicy) -> Result<FixpointResult<T>>
where
    T: Iterand,
    F: FnMut(&T) -> Result<T>,
{
    iterate_with(start, policy, op, T::ascends_to)
}

/// An approximating operator on pairs, given by its two components.
pub trait Approximator: Sync {
    fn signature(&self) -> &Signature;

    /// `fst A(l, u)`.
    fn lower(&self, l: &Interpretation, u: &Interpretation) -> Result<Interpretation>;

    /// `snd A(l, u)`.
    fn upper(&self, l: &Interpretation, u: &Interpretation) -> Result<Interpretation>;

    fn apply(&self, pair: &InterpretationPair) -> Result<InterpretationPair> {
        InterpretationPair::new(self.lower(pair.lower(), pair.upper())?, self.upper(pair.lower(), pair.upper())?)
    }

    /// Start of the upper iteration in the stable revision at `(x, y)`.
    fn upper_start(&self, _x: &Interpretation) -> Interpretation {
        Interpretation::bottom(self.signature())
    }
}

/// The symmetric approximator of a program.
#[derive(Clone, Copy)]
pub struct ProgramApproximator<'a>(pub &'a Program);

impl Approximator for ProgramApproximator<'_> {
    fn signature(&self) -> &Signature {
        self.0.signature()
    }

    fn lower(&self, l: &Interpretation, u: &Interpretation) -> Result<Interpretation> {
        approximator_lower(self.0, l, u)
    }

    fn upper(&self, l: &Interpretation, u: &Interpretation) -> Result<Interpretation> {
        approximator_lower(self.0, u, l)
    }
}

pub fn kripke_kleene_of<A: Approximator + ?Sized>(a: &A, policy: &ConvergencePolicy) -> Result<FixpointResult<InterpretationPair>> {
    lfp_monotone(|x| a.apply(x), InterpretationPair::least_precise(a.signature()), policy)
}

/// `(lfp fst A(., y), lfp snd A(x, .))`, iterated from the bottom and from
/// [`Approximator::upper_start`] respectively.
pub fn stable_revision<A: Approximator + ?Sized>(
    a: &A,
    pair: &InterpretationPair,
    policy: &ConvergencePolicy,
) -> Result<InterpretationPair> {
    let inner = policy.untraced();
    let bot = Interpretation::bottom(a.signature());
    let (x, y) = (pair.lower(), pair.upper());
    let lower = lfp_monotone(|z| a.lower(z, y), bot, &inner)?.into_value()?;
    let upper = lfp_monotone(|z| a.upper(x, z), a.upper_start(x), &inner)?.into_value()?;
    InterpretationPair::new(lower, upper)
}

pub fn well_founded_of<A: Approximator + ?Sized>(a: &A, policy: &ConvergencePolicy) -> Result<FixpointResult<InterpretationPair>> {
    lfp_monotone(
        |x| stable_revision(a, x, policy),
        InterpretationPair::least_precise(a.signature()),
        policy,
    )
}

/// Whether `pair` is a fixpoint of the stable revision of `a`.
pub fn is_stable_fixpoint_of<A: Approximator + ?Sized>(a: &A, pair: &InterpretationPair, policy: &ConvergencePolicy) -> Result<bool> {
    Ok(&stable_revision(a, pair, policy)? == pair)
}

pub fn kripke_kleene(program: &Program, policy: &ConvergencePolicy) -> Result<FixpointResult<InterpretationPair>> {
    kripke_kleene_of(&ProgramApproximator(program), policy)
}

pub fn stable_approximator(program: &Program, pair: &InterpretationPair, policy: &ConvergencePolicy) -> Result<InterpretationPair> {
    stable_revision(&ProgramApproximator(program), pair, policy)
}

pub fn well_founded(program: &Program, policy: &ConvergencePolicy) -> Result<FixpointResult<InterpretationPair>> {
    well_founded_of(&ProgramApproximator(program), policy)
}

/// Least fixpoint of `tp` from the bottom; meaningful for positive programs.
pub fn least_model(program: &Program, policy: &ConvergencePolicy) -> Result<FixpointResult<Interpretation>> {
    lfp_monotone(|i| tp(program, i), Interpretation::bottom(program.signature()), policy)
}

fn matches(a: &Interpretation, b: &Interpretation, policy: &ConvergencePolicy) -> Result<bool> {
    Ok(a == b || (matches!(policy.mode, Mode::Epsilon(_)) && policy.close_enough(&a.distance(b)?)))
}

/// Checks `I = lfp tp(P_I)` and `stable_approximator(I, I) = (I, I)`;
/// the two must agree.
pub fn is_stable_model(program: &Program, i: &Interpretation, policy: &ConvergencePolicy) -> Result<bool> {
    let inner = policy.untraced();
    let by_reduct = matches(&least_model(&reduct(program, i)?, &inner)?.into_value()?, i, policy)?;
    let pair = InterpretationPair::exact(i.clone());
    let revised = stable_approximator(program, &pair, &inner)?;
    let by_approximator = matches(revised.lower(), i, policy)? && matches(revised.upper(), i, policy)?;
    if by_reduct != by_approximator {
        return Err(Error::InternalInconsistency(format!(
            "reduct check says {by_reduct}, stable approximator says {by_approximator} for {i}"
        )));
    }
    Ok(by_reduct)
}

pub const DEFAULT_GRID_CAP: u128 = 10_000_000;

/// Number of points of the `1/n` grid over `atoms` atoms, if it fits.
pub fn grid_size(n: u32, atoms: usize) -> Option<u128> {
    u128::from(n).checked_add(1)?.checked_pow(u32::try_from(atoms).ok()?)
}

/// The `index`-th point of the `1/n` grid, first atom most significant.
pub fn grid_point(signature: &Signature, n: u32, mut index: u128) -> Interpretation {
    let base = u128::from(n) + 1;
    let mut values = vec![TruthValue::zero(); signature.len()];
    for v in values.iter_mut().rev() {
        let k = (index % base) as i64;
        index /= base;
        *v = TruthValue::ratio(k, i64::from(n));
    }
    Interpretation::from_values(signature, values).expect("grid values are in range")
}

/// All stable models whose values are multiples of `1/n`, sorted.
/// This is a grid slice of a possibly infinite set.
pub fn enumerate_stable_models(program: &Program, n: u32, cap: u128, policy: &ConvergencePolicy) -> Result<Vec<Interpretation>> {
    if n == 0 {
        return Err(Error::InvalidConfig("grid resolution must be 1/n with n >= 1".into()));
    }
    let sig = program.signature();
    let size = grid_size(n, sig.len()).unwrap_or(u128::MAX);
    if size > cap {
        return Err(Error::SizeCapExceeded { size, cap });
    }
    let found = (0..size as u64)
        .into_par_iter()
        .map(|idx| {
            let i = grid_point(sig, n, u128::from(idx));
            // Stable models are fixpoints of tp; test that first.
            if tp(program, &i)? != i {
                return Ok(None);
            }
            Ok(is_stable_model(program, &i, policy)?.then_some(i))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut models: Vec<_> = found.into_iter().flatten().collect();
    models.sort_by(|a, b| a.values().cmp(b.values()));
    Ok(models)
}
