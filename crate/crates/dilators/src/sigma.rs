//! The sigma construction and the substitution calculus on terms of a
//! normal extension.
//!
//! `SigmaOf(D)` interleaves a marker below a copy of each fiber of `D`:
//! its extension over `alpha + 1` contains an isomorphic copy of the
//! extension of `D` over `alpha`, sitting strictly between the values of
//! the attached normal function at `alpha` and at `alpha + 1`.  The
//! embedding `xi` realizing this copy appends `alpha` to the argument
//! list and shifts the constructor past the marker block.
//!
//! For any normal presentation, a term `(sigma ; g0, ..., g_{n-1}, rho)`
//! has a star `sup(g_i + 1)` — the least point its non-final arguments
//! fit below — and admits substitution of the final argument by any
//! `delta` at or above the star.  `check_fund_basic` samples the
//! resulting laws: substituted terms land in the window at `delta`,
//! substitution is idempotent on windows, preserves order, successors
//! and limits, and fixes stars.

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::dilator::Dilator;
use crate::ordinal::{random_below, ExtOrd, Ordinal, OrdinalClass};
use crate::term::{
    classify_term, mu_bar, sigma_split, succ_term, term_compare, SigmaPart, Term, TermError,
};

type Result<T> = std::result::Result<T, TermError>;

/// The embedding of the inner extension over `alpha` into the sigma
/// extension over `alpha + 1`: appends `alpha` as final argument and
/// lifts the constructor past the marker block.
pub fn xi_embed(inner: &Dilator, t: &Term) -> Result<Term> {
    crate::term::sigma_lift(inner, t, &t.base().succ())
}

/// Inverts `xi_embed`: recovers the inner term from an interior element
/// of the last window of a sigma extension over a successor base.
pub fn xi_preimage(inner: &Dilator, t: &Term) -> Result<Option<Term>> {
    let Some(alpha) = t.base().pred() else {
        return Ok(None);
    };
    match sigma_split(inner, t)? {
        SigmaPart::Inner { delta, term } if delta == alpha => Ok(Some(term)),
        _ => Ok(None),
    }
}

/// `sup(g_i + 1)` over the non-final arguments: the least ordinal the
/// term's substitution point may take.
pub fn star(t: &Term) -> Result<ExtOrd> {
    if t.args().is_empty() {
        return Err(TermError::NoArguments);
    }
    Ok(match t.args()[..t.args().len() - 1].last() {
        None => ExtOrd::zero(),
        Some(g) => g.succ(),
    })
}

/// Replaces the final argument by `delta`, which must lie at or above
/// the star and below the base.
pub fn substitute_last(d: &Dilator, t: &Term, delta: &ExtOrd) -> Result<Term> {
    let s = star(t)?;
    if delta < &s {
        return Err(TermError::SubstituteBelowStar { delta: delta.clone(), star: s });
    }
    let mut args = t.args().to_vec();
    *args.last_mut().expect("nonempty") = delta.clone();
    Term::new(d, t.ctor().clone(), args, t.base().clone())
}

// -- the sampled law battery ---------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct ClauseOutcome {
    pub clause: String,
    pub attempted: usize,
    pub satisfied: usize,
    pub vacuous: bool,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FundReport {
    pub subject: String,
    pub samples_requested: usize,
    pub clauses: Vec<ClauseOutcome>,
}

impl FundReport {
    /// No sampled instance contradicted its clause.
    pub fn all_conclusions_hold(&self) -> bool {
        self.clauses.iter().all(|c| c.counterexample.is_none())
    }

    pub fn clause(&self, name: &str) -> &ClauseOutcome {
        self.clauses
            .iter()
            .find(|c| c.clause == name)
            .expect("clause names are fixed")
    }
}

impl fmt::Display for FundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "substitution laws for {}", self.subject)?;
        for c in &self.clauses {
            match (&c.counterexample, c.vacuous) {
                (Some(cx), _) => {
                    writeln!(f, "  clause {}: FAIL  {}", c.clause, cx)?;
                }
                (None, true) => writeln!(
                    f,
                    "  clause {}: vacuous (no premise-satisfying instance in {} attempts)",
                    c.clause, c.attempted
                )?,
                (None, false) => writeln!(
                    f,
                    "  clause {}: {} instances hold ({} attempts)",
                    c.clause, c.satisfied, c.attempted
                )?,
            }
        }
        Ok(())
    }
}

struct Sampler<'a> {
    e: &'a Dilator,
    rng: rand_chacha::ChaCha8Rng,
    max_arity: usize,
}

impl<'a> Sampler<'a> {
    /// An infinite base below `w^3`, away from its own limit points so
    /// windows near the top remain addressable.
    fn base(&mut self) -> ExtOrd {
        let a = self.rng.gen_range(1..6u64);
        let b = self.rng.gen_range(0..6u64);
        let c = self.rng.gen_range(0..6u64);
        let mut v = Ordinal::zero();
        for _ in 0..a {
            v = v.add(&Ordinal::omega_pow(Ordinal::nat(2)));
        }
        for _ in 0..b {
            v = v.add(&Ordinal::omega());
        }
        v = v.add(&Ordinal::nat(c));
        ExtOrd::Plain(v)
    }

    fn plain_below(&mut self, bound: &ExtOrd) -> Option<ExtOrd> {
        match bound {
            ExtOrd::Plain(b) if !b.is_zero() => {
                Some(ExtOrd::Plain(random_below(&mut self.rng, b)))
            }
            _ => None,
        }
    }

    /// Strips the finite part so the result is a limit (or substitutes
    /// `w` for zero).
    fn limit_below(&mut self, bound: &ExtOrd) -> Option<ExtOrd> {
        let x = self.plain_below(bound)?;
        let o = x.as_plain().expect("plain sample");
        let stripped: Vec<(Ordinal, u64)> = o
            .summands()
            .iter()
            .filter(|(e, _)| !e.is_zero())
            .cloned()
            .collect();
        let lim = if stripped.is_empty() {
            Ordinal::omega()
        } else {
            Ordinal::from_summands(stripped).expect("still canonical")
        };
        let lim = ExtOrd::Plain(lim);
        (lim < *bound).then_some(lim)
    }

    fn arg_below(&mut self, bound: &ExtOrd) -> Option<ExtOrd> {
        if self.rng.gen_bool(0.5) {
            self.limit_below(bound).or_else(|| self.plain_below(bound))
        } else {
            self.plain_below(bound)
        }
    }

    /// A random term over `base`, optionally forcing the final argument.
    fn term(&mut self, base: &ExtOrd, last: Option<&ExtOrd>) -> Result<Option<Term>> {
        let trace = self.e.trace(self.max_arity)?;
        let positive: Vec<_> = trace.into_iter().filter(|t| t.arity > 0).collect();
        if positive.is_empty() {
            return Ok(None);
        }
        let te = &positive[self.rng.gen_range(0..positive.len())];
        let free = match last {
            Some(_) => te.arity - 1,
            None => te.arity,
        };
        let arg_bound = match last {
            Some(l) => l.clone(),
            None => base.clone(),
        };
        let mut args = std::collections::BTreeSet::new();
        for _ in 0..free * 4 + 4 {
            if args.len() == free {
                break;
            }
            if let Some(a) = self.arg_below(&arg_bound) {
                args.insert(a);
            }
        }
        if args.len() != free {
            return Ok(None);
        }
        let mut args: Vec<ExtOrd> = args.into_iter().collect();
        if let Some(l) = last {
            args.push(l.clone());
        }
        Ok(Some(Term::new(self.e, te.value.clone(), args, base.clone())?))
    }
}

/// One sampled attempt: `None` when the premise is not satisfied, else
/// whether the conclusion held, with a description on failure.
type Attempt = Option<std::result::Result<(), String>>;

fn run_clause(
    name: &str,
    samples: usize,
    mut gen: impl FnMut() -> Result<Attempt>,
) -> Result<ClauseOutcome> {
    let max_attempts = samples * 50;
    let mut outcome = ClauseOutcome {
        clause: name.into(),
        attempted: 0,
        satisfied: 0,
        vacuous: false,
        counterexample: None,
    };
    while outcome.satisfied < samples && outcome.attempted < max_attempts {
        outcome.attempted += 1;
        match gen()? {
            None => {}
            Some(Ok(())) => outcome.satisfied += 1,
            Some(Err(cx)) => {
                outcome.satisfied += 1;
                outcome.counterexample = Some(cx);
                break;
            }
        }
    }
    outcome.vacuous = outcome.satisfied == 0;
    Ok(outcome)
}

/// Samples the seven substitution laws of a normal presentation.  Each
/// clause counts only premise-satisfying instances; a clause that never
/// meets its premise is reported as vacuous rather than failing.
pub fn check_fund_basic(e: &Dilator, samples: usize, seed: u64) -> Result<FundReport> {
    use rand::SeedableRng;
    if !e.has_mu() {
        return Err(TermError::NoNormality);
    }
    let mut s = Sampler {
        e,
        rng: rand_chacha::ChaCha8Rng::seed_from_u64(seed),
        max_arity: 5,
    };
    let mut clauses = Vec::new();

    // (a) E(delta) <= gamma[delta] < E(delta + 1) for delta >= gamma*.
    clauses.push(run_clause("a", samples, || {
        let base = s.base();
        let Some(gamma) = s.term(&base, None)? else { return Ok(None) };
        let st = star(&gamma)?;
        let delta = if s.rng.gen_bool(0.3) {
            st.clone()
        } else {
            match s.plain_below(&base) {
                Some(d) if d >= st => d,
                _ => return Ok(None),
            }
        };
        if delta.succ() >= base {
            return Ok(None);
        }
        let g = substitute_last(e, &gamma, &delta)?;
        let lo = mu_bar(e, delta.clone(), base.clone())?;
        let hi = mu_bar(e, delta.succ(), base.clone())?;
        let ok = term_compare(e, &lo, &g)? != Ordering::Greater
            && term_compare(e, &g, &hi)? == Ordering::Less;
        Ok(Some(if ok {
            Ok(())
        } else {
            Err(format!("{gamma} substituted at {delta} escapes its window"))
        }))
    })?);

    // (b) terms in the window at delta have star <= delta and are fixed
    // by substitution at delta.
    clauses.push(run_clause("b", samples, || {
        let base = s.base();
        let Some(gamma) = s.term(&base, None)? else { return Ok(None) };
        let delta = gamma.last_arg().expect("positive arity").clone();
        if delta.succ() >= base {
            return Ok(None);
        }
        let lo = mu_bar(e, delta.clone(), base.clone())?;
        let hi = mu_bar(e, delta.succ(), base.clone())?;
        if term_compare(e, &lo, &gamma)? == Ordering::Greater
            || term_compare(e, &gamma, &hi)? != Ordering::Less
        {
            return Ok(None);
        }
        let ok = star(&gamma)? <= delta && substitute_last(e, &gamma, &delta)? == gamma;
        Ok(Some(if ok {
            Ok(())
        } else {
            Err(format!("{gamma} is not fixed by substitution in its own window"))
        }))
    })?);

    // (c) substitution fixes stars and composes: gamma[delta][rho] = gamma[rho].
    clauses.push(run_clause("c", samples, || {
        let base = s.base();
        let Some(gamma) = s.term(&base, None)? else { return Ok(None) };
        let st = star(&gamma)?;
        let pick = |s: &mut Sampler| -> Option<ExtOrd> {
            if s.rng.gen_bool(0.3) {
                Some(st.clone())
            } else {
                s.plain_below(&base).filter(|d| *d >= st)
            }
        };
        let (Some(delta), Some(rho)) = (pick(&mut s), pick(&mut s)) else {
            return Ok(None);
        };
        let gd = substitute_last(e, &gamma, &delta)?;
        let ok = star(&gd)? == st
            && substitute_last(e, &gd, &rho)? == substitute_last(e, &gamma, &rho)?;
        Ok(Some(if ok {
            Ok(())
        } else {
            Err(format!("substitution through {delta} then {rho} moved {gamma}"))
        }))
    })?);

    // (d) within a window, substitution at any delta above both stars
    // preserves strict order.
    clauses.push(run_clause("d", samples, || {
        let base = s.base();
        let Some(rho) = s.plain_below(&base) else { return Ok(None) };
        if rho.succ() >= base {
            return Ok(None);
        }
        let (Some(beta), Some(gamma)) =
            (s.term(&base, Some(&rho))?, s.term(&base, Some(&rho))?)
        else {
            return Ok(None);
        };
        let st = star(&beta)?.max(star(&gamma)?);
        let delta = match s.plain_below(&base) {
            Some(d) if d >= st => d,
            _ if s.rng.gen_bool(0.5) => st.clone(),
            _ => return Ok(None),
        };
        let before = term_compare(e, &beta, &gamma)?;
        let after = term_compare(
            e,
            &substitute_last(e, &beta, &delta)?,
            &substitute_last(e, &gamma, &delta)?,
        )?;
        Ok(Some(if before == after {
            Ok(())
        } else {
            Err(format!(
                "{beta} vs {gamma}: order {before:?} became {after:?} at {delta}"
            ))
        }))
    })?);

    // (e) within a window, substitution commutes with successor.
    clauses.push(run_clause("e", samples, || {
        let base = s.base();
        let Some(gamma) = s.term(&base, None)? else { return Ok(None) };
        let rho = gamma.last_arg().expect("positive arity").clone();
        let Some(next) = succ_term(e, &gamma)? else { return Ok(None) };
        if next.last_arg() != Some(&rho) {
            return Ok(None);
        }
        let st = star(&gamma)?.max(star(&next)?);
        let delta = if s.rng.gen_bool(0.4) {
            st.clone()
        } else {
            match s.plain_below(&rho.succ()) {
                Some(d) if d >= st => d,
                _ => return Ok(None),
            }
        };
        if delta > rho {
            return Ok(None);
        }
        let lhs = substitute_last(e, &next, &delta)?;
        let rhs = succ_term(e, &substitute_last(e, &gamma, &delta)?)?;
        Ok(Some(if Some(&lhs) == rhs.as_ref() {
            Ok(())
        } else {
            Err(format!(
                "successor of {gamma} does not substitute to a successor at {delta}"
            ))
        }))
    })?);

    // (f) the normal function's terms have star zero and substitute to
    // one another.
    clauses.push(run_clause("f", samples, || {
        let base = s.base();
        let (Some(rho), Some(delta)) = (s.plain_below(&base), s.plain_below(&base)) else {
            return Ok(None);
        };
        let er = mu_bar(e, rho.clone(), base.clone())?;
        let ok = star(&er)?.is_zero()
            && substitute_last(e, &er, &delta)? == mu_bar(e, delta.clone(), base.clone())?;
        Ok(Some(if ok {
            Ok(())
        } else {
            Err(format!("the normal term at {rho} misbehaves under substitution"))
        }))
    })?);

    // (g) interior limits substitute to limits at limit points.
    clauses.push(run_clause("g", samples, || {
        let base = s.base();
        let Some(gamma) = s.term(&base, None)? else { return Ok(None) };
        let rho = gamma.last_arg().expect("positive arity").clone();
        if rho.succ() >= base {
            return Ok(None);
        }
        let lo = mu_bar(e, rho.clone(), base.clone())?;
        if term_compare(e, &lo, &gamma)? != Ordering::Less {
            return Ok(None);
        }
        if classify_term(e, &gamma)? != OrdinalClass::Limit {
            return Ok(None);
        }
        let st = star(&gamma)?;
        let Some(delta) = s.limit_below(&rho.succ()) else { return Ok(None) };
        if delta < st || delta > rho || delta.classify() != OrdinalClass::Limit {
            return Ok(None);
        }
        let g = substitute_last(e, &gamma, &delta)?;
        Ok(Some(if classify_term(e, &g)? == OrdinalClass::Limit {
            Ok(())
        } else {
            Err(format!("limit {gamma} substituted at limit {delta} is not a limit"))
        }))
    })?);

    Ok(FundReport {
        subject: e.to_string(),
        samples_requested: samples,
        clauses,
    })
}
