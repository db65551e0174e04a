//! Terms of the extension of a dilator beyond its tabulated arities.
//!
//! A term `(sigma ; g0, ..., g_{n-1} ; base)` pairs a trace constructor
//! `sigma` of arity `n` with strictly increasing arguments below the
//! base.  Terms are compared by pushing both constructors into the fiber
//! over the union of the argument sets and comparing there; for a finite
//! base this order agrees with the evaluation map that sends a term to
//! the fiber element it denotes, which is how values are computed.
//!
//! Bases may be extended ordinals (`W + nu`), so the extension can be
//! inspected above every notation in play.  Successor, predecessor and
//! limit classification are computed structurally for combinator
//! presentations at any base, and by evaluation for tables at finite
//! bases.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::dilator::{Dilator, DilatorError, NatMap};
use crate::ordinal::{ExtOrd, Ordinal, OrdinalClass, ParseError, Parser};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("terms live over different bases: {0} vs {1}")]
    BaseMismatch(ExtOrd, ExtOrd),
    #[error("constructor {ctor} with {arity} arguments is not in the trace")]
    NotInTrace { ctor: Ordinal, arity: usize },
    #[error("arguments must be strictly increasing")]
    ArgsNotSorted,
    #[error("argument {arg} is not below the base {base}")]
    ArgOutOfBase { arg: ExtOrd, base: ExtOrd },
    #[error("presentation is not a linear order: {left} and {right} are distinct but push to the same fiber element")]
    PresentationInvalid { left: String, right: String },
    #[error("value {value} is outside the extension over {base}")]
    ValueOutOfRange { value: ExtOrd, base: ExtOrd },
    #[error("this presentation has no normality thresholds")]
    NoNormality,
    #[error("a term without arguments has no star or substitution")]
    NoArguments,
    #[error("substitution point {delta} lies below the star {star}")]
    SubstituteBelowStar { delta: ExtOrd, star: ExtOrd },
    #[error("embedding is not order preserving: {0}")]
    BadEmbedding(String),
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Dilator(#[from] DilatorError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

type Result<T> = std::result::Result<T, TermError>;

/// A term of the extension over `base`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Term {
    ctor: Ordinal,
    args: Vec<ExtOrd>,
    base: ExtOrd,
}

impl Term {
    /// Builds a term, checking trace membership and argument shape.
    pub fn new(d: &Dilator, ctor: Ordinal, args: Vec<ExtOrd>, base: ExtOrd) -> Result<Term> {
        if !d.in_trace(args.len(), &ctor)? {
            return Err(TermError::NotInTrace { ctor, arity: args.len() });
        }
        if args.windows(2).any(|w| w[0] >= w[1]) {
            return Err(TermError::ArgsNotSorted);
        }
        if let Some(bad) = args.iter().find(|a| *a >= &base) {
            return Err(TermError::ArgOutOfBase { arg: bad.clone(), base });
        }
        Ok(Term { ctor, args, base })
    }

    pub fn ctor(&self) -> &Ordinal {
        &self.ctor
    }

    pub fn args(&self) -> &[ExtOrd] {
        &self.args
    }

    pub fn base(&self) -> &ExtOrd {
        &self.base
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn last_arg(&self) -> Option<&ExtOrd> {
        self.args.last()
    }

    /// Re-bases the term without moving any argument; the new base must
    /// still lie above every argument.
    pub fn with_base(&self, d: &Dilator, base: ExtOrd) -> Result<Term> {
        Term::new(d, self.ctor.clone(), self.args.clone(), base)
    }

    pub fn parse(d: &Dilator, input: &str) -> Result<Term> {
        let mut p = Parser::new(input);
        p.expect(b'(')?;
        let ctor = p.parse_ord()?;
        p.expect(b';')?;
        let mut args = Vec::new();
        p.skip_ws();
        if p.peek() != Some(b';') {
            loop {
                args.push(p.parse_ext()?);
                p.skip_ws();
                if !p.eat(b',') {
                    break;
                }
            }
        }
        p.expect(b';')?;
        let base = p.parse_ext()?;
        p.expect(b')')?;
        p.expect_end()?;
        Ok(Term::new(d, ctor, args, base)?)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} ; ", self.ctor)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, " ; {})", self.base)
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Term {
    fn serialize<S: serde::Serializer>(
        &self,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Pushes the constructor into the fiber over a superset of the
/// argument positions.  `positions` lists, for each argument, its index
/// in the larger set of size `span`.
fn pushforward(d: &Dilator, t: &Term, positions: Vec<usize>, span: usize) -> Result<Ordinal> {
    let f = NatMap::new(span, positions).expect("positions are strictly increasing");
    Ok(d.apply(&f, &t.ctor)?)
}

/// Compares two terms over the same base by their pushforwards into the
/// fiber over the union of their arguments.
pub fn term_compare(d: &Dilator, a: &Term, b: &Term) -> Result<Ordering> {
    if a.base != b.base {
        return Err(TermError::BaseMismatch(a.base.clone(), b.base.clone()));
    }
    let mut union: Vec<&ExtOrd> = a.args.iter().chain(b.args.iter()).collect();
    union.sort();
    union.dedup();
    let pos = |args: &[ExtOrd]| {
        args.iter()
            .map(|x| union.binary_search(&x).expect("argument is in the union"))
            .collect::<Vec<_>>()
    };
    let pa = pushforward(d, a, pos(&a.args), union.len())?;
    let pb = pushforward(d, b, pos(&b.args), union.len())?;
    match pa.cmp(&pb) {
        Ordering::Equal if a != b => Err(TermError::PresentationInvalid {
            left: a.to_string(),
            right: b.to_string(),
        }),
        other => Ok(other),
    }
}

// -- embeddings --------------------------------------------------------------

/// How an embedding continues beyond its finitely many listed points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tail {
    /// Unlisted points stay where they are.
    Identity,
    /// Unlisted points below `from` stay; `from + beta` moves to `to + beta`.
    Shift { from: ExtOrd, to: ExtOrd },
}

/// An order embedding of extended ordinals with finitely many explicit
/// values and a uniform tail.  Monotonicity is checked where the map is
/// used, on the arguments actually moved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseEmbedding {
    pairs: BTreeMap<ExtOrd, ExtOrd>,
    tail: Tail,
}

impl BaseEmbedding {
    pub fn identity() -> Self {
        BaseEmbedding { pairs: BTreeMap::new(), tail: Tail::Identity }
    }

    pub fn from_pairs(pairs: BTreeMap<ExtOrd, ExtOrd>) -> Self {
        BaseEmbedding { pairs, tail: Tail::Identity }
    }

    pub fn with_tail(pairs: BTreeMap<ExtOrd, ExtOrd>, from: ExtOrd, to: ExtOrd) -> Self {
        BaseEmbedding { pairs, tail: Tail::Shift { from, to } }
    }

    pub fn map(&self, x: &ExtOrd) -> Result<ExtOrd> {
        if let Some(y) = self.pairs.get(x) {
            return Ok(y.clone());
        }
        match &self.tail {
            Tail::Identity => Ok(x.clone()),
            Tail::Shift { from, to } => {
                if x < from {
                    Ok(x.clone())
                } else {
                    let beta = from
                        .left_sub(x)
                        .expect("x >= from admits a left difference");
                    to.add(&beta).map_err(TermError::BadEmbedding)
                }
            }
        }
    }
}

/// Transports a term along an embedding of bases, moving each argument
/// and checking that the images are again strictly increasing and below
/// the new base.
pub fn term_map(d: &Dilator, t: &Term, emb: &BaseEmbedding, new_base: ExtOrd) -> Result<Term> {
    let mut args = Vec::with_capacity(t.args.len());
    for a in &t.args {
        args.push(emb.map(a)?);
    }
    if args.windows(2).any(|w| w[0] >= w[1]) {
        return Err(TermError::BadEmbedding(format!(
            "images of the arguments of {t} are not strictly increasing"
        )));
    }
    Term::new(d, t.ctor.clone(), args, new_base)
}

// -- the normal function attached to a normal dilator ------------------------

/// The term `(mu_1(0) ; gamma ; base)`: the value of the attached normal
/// function at `gamma`, as a term.
pub fn mu_bar(d: &Dilator, gamma: ExtOrd, base: ExtOrd) -> Result<Term> {
    let Some(head) = d.mu(1, 0)? else {
        return Err(TermError::NoNormality);
    };
    Term::new(d, head, vec![gamma], base)
}

// -- representations ---------------------------------------------------------

/// A term with its base stripped: the base-independent description of a
/// value in the range of a normal presentation's extension.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Representation {
    ctor: Ordinal,
    args: Vec<ExtOrd>,
}

impl Representation {
    pub fn ctor(&self) -> &Ordinal {
        &self.ctor
    }

    pub fn args(&self) -> &[ExtOrd] {
        &self.args
    }

    pub fn parse(input: &str) -> Result<Representation> {
        let mut p = Parser::new(input);
        p.expect(b'(')?;
        let ctor = p.parse_ord()?;
        p.expect(b';')?;
        let mut args = Vec::new();
        p.skip_ws();
        if p.peek() != Some(b')') {
            loop {
                args.push(p.parse_ext()?);
                p.skip_ws();
                if !p.eat(b',') {
                    break;
                }
            }
        }
        p.expect(b')')?;
        p.expect_end()?;
        if args.windows(2).any(|w| w[0] >= w[1]) {
            return Err(TermError::ArgsNotSorted);
        }
        Ok(Representation { ctor, args })
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.ctor)?;
        write!(f, " ; ")?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Representation {
    fn serialize<S: serde::Serializer>(
        &self,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Strips the base.  Sound for normal presentations, where term order is
/// base independent; nullary terms may be stripped for any presentation.
pub fn represent(d: &Dilator, t: &Term) -> Result<Representation> {
    if !t.args.is_empty() && !d.has_mu() {
        return Err(TermError::NoNormality);
    }
    Ok(Representation { ctor: t.ctor.clone(), args: t.args.clone() })
}

/// Re-attaches a base; valid when the base lies above every argument.
pub fn attach(d: &Dilator, r: &Representation, base: ExtOrd) -> Result<Term> {
    Term::new(d, r.ctor.clone(), r.args.clone(), base)
}

// -- values ------------------------------------------------------------------

/// The order type of the extension over `base`, when a closed form
/// exists.
pub fn extension_order_type(d: &Dilator, base: &ExtOrd) -> Result<ExtOrd> {
    if let Some(n) = base.as_nat() {
        return Ok(ExtOrd::Plain(d.fiber(n as usize)?));
    }
    match d {
        Dilator::Const(c) => Ok(ExtOrd::Plain(c.clone())),
        Dilator::Identity => Ok(base.clone()),
        Dilator::Sum(a, b) => extension_order_type(a, base)?
            .add(&extension_order_type(b, base)?)
            .map_err(TermError::Unsupported),
        Dilator::SigmaOf(_) | Dilator::Table(_) => Err(TermError::Unsupported(format!(
            "no closed form for the order type of {d} over {base}"
        ))),
    }
}

/// The position of a term in the order on its extension, when
/// computable: by evaluation for finite bases, by closed form otherwise.
pub fn term_value(d: &Dilator, t: &Term) -> Result<ExtOrd> {
    if let Some(n) = t.base.as_nat() {
        let n = n as usize;
        let positions = t
            .args
            .iter()
            .map(|a| a.as_nat().expect("arguments below a finite base are finite") as usize)
            .collect();
        return Ok(ExtOrd::Plain(pushforward(d, t, positions, n)?));
    }
    match d {
        Dilator::Identity => Ok(t.args[0].clone()),
        Dilator::Const(_) => Ok(ExtOrd::Plain(t.ctor.clone())),
        Dilator::Sum(a, b) => match sum_split(a, b, t)? {
            SumSide::Left(ta) => term_value(a, &ta),
            SumSide::Right(tb) => extension_order_type(a, &t.base)?
                .add(&term_value(b, &tb)?)
                .map_err(TermError::Unsupported),
        },
        Dilator::SigmaOf(_) | Dilator::Table(_) => Err(TermError::Unsupported(format!(
            "no closed form for values of {d} over {}",
            t.base
        ))),
    }
}

/// The term at a given position, inverse to `term_value`.
pub fn value_term(d: &Dilator, value: &ExtOrd, base: &ExtOrd) -> Result<Term> {
    if let Some(n) = base.as_nat() {
        let n = n as usize;
        let Some(v) = value.as_plain() else {
            return Err(TermError::ValueOutOfRange {
                value: value.clone(),
                base: base.clone(),
            });
        };
        if *v >= d.fiber(n)? {
            return Err(TermError::ValueOutOfRange {
                value: value.clone(),
                base: base.clone(),
            });
        }
        let supp = d.support(n, v)?;
        let f = NatMap::inclusion(n, &supp).expect("supports are sorted");
        let Some(ctor) = d.preimage(&f, v)? else {
            return Err(TermError::Unsupported(format!(
                "element {v} is not generated by its support; the presentation breaks the support condition"
            )));
        };
        let args = supp.into_iter().map(|k| ExtOrd::nat(k as u64)).collect();
        return Ok(Term { ctor, args, base: base.clone() });
    }
    if value >= &extension_order_type(d, base)? {
        return Err(TermError::ValueOutOfRange { value: value.clone(), base: base.clone() });
    }
    match d {
        Dilator::Identity => Term::new(d, Ordinal::zero(), vec![value.clone()], base.clone()),
        Dilator::Const(_) => {
            let v = value.as_plain().expect("checked against the order type");
            Term::new(d, v.clone(), vec![], base.clone())
        }
        Dilator::Sum(a, b) => {
            let left = extension_order_type(a, base)?;
            if value < &left {
                sum_join(d, a, b, SumSide::Left(value_term(a, value, base)?))
            } else {
                let rest = left.left_sub(value).expect("value >= left order type");
                sum_join(d, a, b, SumSide::Right(value_term(b, &rest, base)?))
            }
        }
        Dilator::SigmaOf(_) | Dilator::Table(_) => Err(TermError::Unsupported(format!(
            "no closed form for values of {d} over {base}"
        ))),
    }
}

/// All terms over a finite base with finite fibers, in increasing order.
pub fn enumerate_terms(d: &Dilator, base: &ExtOrd) -> Result<Vec<Term>> {
    let Some(n) = base.as_nat() else {
        return Err(TermError::Unsupported(format!(
            "cannot enumerate the extension over the infinite base {base}"
        )));
    };
    d.elements(n as usize)?
        .iter()
        .map(|e| value_term(d, &ExtOrd::Plain(e.clone()), base))
        .collect()
}

/// The representation of a value under a normal presentation, found by
/// evaluating at the smallest sufficient finite base, or by closed form.
pub fn represent_value(d: &Dilator, value: &ExtOrd) -> Result<Representation> {
    match d {
        Dilator::Identity => {
            return Ok(Representation { ctor: Ordinal::zero(), args: vec![value.clone()] })
        }
        Dilator::Const(c) => {
            return match value.as_plain() {
                Some(v) if v < c => {
                    Ok(Representation { ctor: v.clone(), args: vec![] })
                }
                _ => Err(TermError::ValueOutOfRange {
                    value: value.clone(),
                    base: ExtOrd::zero(),
                }),
            }
        }
        _ => {}
    }
    let Some(k) = value.as_nat() else {
        let t = value_term(d, value, &value.succ())?;
        return represent(d, &t);
    };
    let mut n = 0usize;
    loop {
        let fiber = d.fiber(n)?;
        if fiber.as_nat().is_none_or(|f| f > k) {
            let t = value_term(d, value, &ExtOrd::nat(n as u64))?;
            return represent(d, &t);
        }
        if n as u64 > k + 1 {
            return Err(TermError::ValueOutOfRange {
                value: value.clone(),
                base: ExtOrd::nat(n as u64),
            });
        }
        n += 1;
    }
}

/// The value a representation denotes, when computable.
pub fn representation_value(d: &Dilator, r: &Representation) -> Result<ExtOrd> {
    let base = match r.args.last() {
        None => ExtOrd::zero(),
        Some(a) => a.succ(),
    };
    term_value(d, &attach(d, r, base)?)
}

// -- successor structure -----------------------------------------------------

/// The top of an extension: empty, a maximum term, or unbounded with no
/// maximum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MaxTerm {
    Empty,
    Max(Term),
    NoMax,
}

enum SumSide {
    Left(Term),
    Right(Term),
}

/// Splits a term of a sum presentation into the summand it came from.
fn sum_split(a: &Dilator, _b: &Dilator, t: &Term) -> Result<SumSide> {
    let left = a.fiber(t.args.len())?;
    if t.ctor < left {
        Ok(SumSide::Left(Term {
            ctor: t.ctor.clone(),
            args: t.args.clone(),
            base: t.base.clone(),
        }))
    } else {
        Ok(SumSide::Right(Term {
            ctor: left.left_sub(&t.ctor).expect("ctor >= left fiber"),
            args: t.args.clone(),
            base: t.base.clone(),
        }))
    }
}

fn sum_join(d: &Dilator, a: &Dilator, _b: &Dilator, side: SumSide) -> Result<Term> {
    match side {
        SumSide::Left(t) => Ok(Term { ctor: t.ctor, args: t.args, base: t.base }),
        SumSide::Right(t) => {
            let left = a.fiber(t.args.len())?;
            let _ = d;
            Ok(Term { ctor: left.add(&t.ctor), args: t.args, base: t.base })
        }
    }
}

pub(crate) enum SigmaPart {
    /// The least term with last argument `delta`.
    Marker { delta: ExtOrd },
    /// A lifted inner term: the window over `delta` above its marker is
    /// a copy of the inner extension over `delta`.
    Inner { delta: ExtOrd, term: Term },
}

/// Splits a sigma term into its window marker or lifted inner term.
pub(crate) fn sigma_split(inner: &Dilator, t: &Term) -> Result<SigmaPart> {
    let delta = t.args.last().expect("sigma terms have at least one argument").clone();
    if t.args.len() == 1 && t.ctor.is_zero() {
        return Ok(SigmaPart::Marker { delta });
    }
    let n = t.args.len() - 1;
    let sigma_d = Dilator::SigmaOf(Box::new(inner.clone()));
    let offset = sigma_d.fiber(n)?.add(&Ordinal::nat(1));
    let ctor = offset.left_sub(&t.ctor).expect("lifted ctors sit above the block offset");
    Ok(SigmaPart::Inner {
        delta: delta.clone(),
        term: Term { ctor, args: t.args[..n].to_vec(), base: delta },
    })
}

/// Lifts an inner term over `delta` into the sigma extension over `base`.
pub(crate) fn sigma_lift(inner: &Dilator, term: &Term, base: &ExtOrd) -> Result<Term> {
    let sigma_d = Dilator::SigmaOf(Box::new(inner.clone()));
    let offset = sigma_d.fiber(term.args.len())?.add(&Ordinal::nat(1));
    let mut args = term.args.clone();
    args.push(term.base.clone());
    Ok(Term { ctor: offset.add(&term.ctor), args, base: base.clone() })
}

fn sigma_marker(delta: ExtOrd, base: &ExtOrd) -> Term {
    Term { ctor: Ordinal::zero(), args: vec![delta], base: base.clone() }
}

fn finite_only(d: &Dilator, base: &ExtOrd) -> Result<u64> {
    base.as_nat().ok_or_else(|| {
        TermError::Unsupported(format!(
            "successor structure of {d} over {base} needs a finite base"
        ))
    })
}

/// The least term of the extension over `base`, if any.
pub fn min_term(d: &Dilator, base: &ExtOrd) -> Result<Option<Term>> {
    match d {
        Dilator::Const(c) => Ok((!c.is_zero())
            .then(|| Term { ctor: Ordinal::zero(), args: vec![], base: base.clone() })),
        Dilator::Identity => Ok((base > &ExtOrd::zero()).then(|| Term {
            ctor: Ordinal::zero(),
            args: vec![ExtOrd::zero()],
            base: base.clone(),
        })),
        Dilator::Sum(a, b) => match min_term(a, base)? {
            Some(t) => sum_join(d, a, b, SumSide::Left(t)).map(Some),
            None => match min_term(b, base)? {
                Some(t) => sum_join(d, a, b, SumSide::Right(t)).map(Some),
                None => Ok(None),
            },
        },
        Dilator::SigmaOf(_) => {
            Ok((base > &ExtOrd::zero()).then(|| sigma_marker(ExtOrd::zero(), base)))
        }
        Dilator::Table(_) => {
            let n = finite_only(d, base)?;
            if d.fiber(n as usize)?.is_zero() {
                Ok(None)
            } else {
                Ok(Some(value_term(d, &ExtOrd::zero(), base)?))
            }
        }
    }
}

/// The greatest term of the extension over `base`, or `NoMax` when the
/// extension is nonempty but unbounded.
pub fn max_term(d: &Dilator, base: &ExtOrd) -> Result<MaxTerm> {
    match d {
        Dilator::Const(c) => Ok(match (c.is_zero(), c.pred()) {
            (true, _) => MaxTerm::Empty,
            (false, Some(p)) => {
                MaxTerm::Max(Term { ctor: p, args: vec![], base: base.clone() })
            }
            (false, None) => MaxTerm::NoMax,
        }),
        Dilator::Identity => Ok(if base.is_zero() {
            MaxTerm::Empty
        } else {
            match base.pred() {
                Some(p) => MaxTerm::Max(Term {
                    ctor: Ordinal::zero(),
                    args: vec![p],
                    base: base.clone(),
                }),
                None => MaxTerm::NoMax,
            }
        }),
        Dilator::Sum(a, b) => match max_term(b, base)? {
            MaxTerm::Max(t) => sum_join(d, a, b, SumSide::Right(t)).map(MaxTerm::Max),
            MaxTerm::NoMax => Ok(MaxTerm::NoMax),
            MaxTerm::Empty => match max_term(a, base)? {
                MaxTerm::Max(t) => sum_join(d, a, b, SumSide::Left(t)).map(MaxTerm::Max),
                other => Ok(other),
            },
        },
        Dilator::SigmaOf(inner) => {
            if base.is_zero() {
                return Ok(MaxTerm::Empty);
            }
            match base.pred() {
                None => Ok(MaxTerm::NoMax),
                Some(delta) => match max_term(inner, &delta)? {
                    MaxTerm::Max(s) => sigma_lift(inner, &s, base).map(MaxTerm::Max),
                    MaxTerm::Empty => Ok(MaxTerm::Max(sigma_marker(delta, base))),
                    MaxTerm::NoMax => Ok(MaxTerm::NoMax),
                },
            }
        }
        Dilator::Table(_) => {
            let n = finite_only(d, base)?;
            let fiber = d.fiber(n as usize)?;
            match fiber.pred() {
                Some(p) if !fiber.is_zero() => {
                    Ok(MaxTerm::Max(value_term(d, &ExtOrd::Plain(p), base)?))
                }
                _ => Ok(MaxTerm::Empty),
            }
        }
    }
}

/// The immediate successor of a term within its extension, if any.
pub fn succ_term(d: &Dilator, t: &Term) -> Result<Option<Term>> {
    match d {
        Dilator::Const(c) => {
            let next = t.ctor.succ();
            Ok((&next < c).then(|| Term {
                ctor: next,
                args: vec![],
                base: t.base.clone(),
            }))
        }
        Dilator::Identity => {
            let next = t.args[0].succ();
            Ok((next < t.base).then(|| Term {
                ctor: Ordinal::zero(),
                args: vec![next],
                base: t.base.clone(),
            }))
        }
        Dilator::Sum(a, b) => match sum_split(a, b, t)? {
            SumSide::Left(ta) => match succ_term(a, &ta)? {
                Some(s) => sum_join(d, a, b, SumSide::Left(s)).map(Some),
                None => match min_term(b, &t.base)? {
                    Some(s) => sum_join(d, a, b, SumSide::Right(s)).map(Some),
                    None => Ok(None),
                },
            },
            SumSide::Right(tb) => match succ_term(b, &tb)? {
                Some(s) => sum_join(d, a, b, SumSide::Right(s)).map(Some),
                None => Ok(None),
            },
        },
        Dilator::SigmaOf(inner) => {
            let (delta, inner_next) = match sigma_split(inner, t)? {
                SigmaPart::Marker { delta } => {
                    let first = min_term(inner, &delta)?;
                    (delta, first)
                }
                SigmaPart::Inner { delta, term } => {
                    let next = succ_term(inner, &term)?;
                    (delta, next)
                }
            };
            match inner_next {
                Some(s) => sigma_lift(inner, &s, &t.base).map(Some),
                None => {
                    let next = delta.succ();
                    Ok((next < t.base).then(|| sigma_marker(next, &t.base)))
                }
            }
        }
        Dilator::Table(_) => {
            finite_only(d, &t.base)?;
            let v = term_value(d, t)?;
            match value_term(d, &v.succ(), &t.base) {
                Ok(s) => Ok(Some(s)),
                Err(TermError::ValueOutOfRange { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        }
    }
}

/// The immediate predecessor of a term, if any; `None` at the least term
/// and at limits.
pub fn pred_term(d: &Dilator, t: &Term) -> Result<Option<Term>> {
    match d {
        Dilator::Const(_) => Ok(t.ctor.pred().map(|p| Term {
            ctor: p,
            args: vec![],
            base: t.base.clone(),
        })),
        Dilator::Identity => Ok(t.args[0].pred().map(|p| Term {
            ctor: Ordinal::zero(),
            args: vec![p],
            base: t.base.clone(),
        })),
        Dilator::Sum(a, b) => match sum_split(a, b, t)? {
            SumSide::Left(ta) => match pred_term(a, &ta)? {
                Some(s) => sum_join(d, a, b, SumSide::Left(s)).map(Some),
                None => Ok(None),
            },
            SumSide::Right(tb) => match pred_term(b, &tb)? {
                Some(s) => sum_join(d, a, b, SumSide::Right(s)).map(Some),
                None => {
                    if Some(&tb) == min_term(b, &t.base)?.as_ref() {
                        match max_term(a, &t.base)? {
                            MaxTerm::Max(s) => {
                                sum_join(d, a, b, SumSide::Left(s)).map(Some)
                            }
                            _ => Ok(None),
                        }
                    } else {
                        Ok(None)
                    }
                }
            },
        },
        Dilator::SigmaOf(inner) => match sigma_split(inner, t)? {
            SigmaPart::Marker { delta } => {
                if delta.is_zero() {
                    return Ok(None);
                }
                match delta.pred() {
                    None => Ok(None),
                    Some(prev) => match max_term(inner, &prev)? {
                        MaxTerm::Max(s) => sigma_lift(inner, &s, &t.base).map(Some),
                        MaxTerm::Empty => Ok(Some(sigma_marker(prev, &t.base))),
                        MaxTerm::NoMax => Ok(None),
                    },
                }
            }
            SigmaPart::Inner { delta, term } => match pred_term(inner, &term)? {
                Some(s) => sigma_lift(inner, &s, &t.base).map(Some),
                None => {
                    if Some(&term) == min_term(inner, &delta)?.as_ref() {
                        Ok(Some(sigma_marker(delta, &t.base)))
                    } else {
                        Ok(None)
                    }
                }
            },
        },
        Dilator::Table(_) => {
            finite_only(d, &t.base)?;
            let v = term_value(d, t)?;
            match v.pred() {
                Some(p) => Ok(Some(value_term(d, &p, &t.base)?)),
                None => Ok(None),
            }
        }
    }
}

/// Zero, successor or limit — the position class of a term within the
/// order on its extension.
pub fn classify_term(d: &Dilator, t: &Term) -> Result<OrdinalClass> {
    if min_term(d, &t.base)?.as_ref() == Some(t) {
        return Ok(OrdinalClass::Zero);
    }
    if pred_term(d, t)?.is_some() {
        Ok(OrdinalClass::Successor)
    } else {
        Ok(OrdinalClass::Limit)
    }
}

// -- well-foundedness probe ---------------------------------------------------

/// Result of probing the term order for violations of strict linearity.
#[derive(Clone, Debug)]
pub enum WfProbe {
    /// Terms `c0 < c1 < c2 < c0`: a finite certificate that the
    /// presented comparison is not an order, so it cannot be a
    /// well-order.  Any comparison cycle yields a three-cycle, so the
    /// scan over triples is complete for the probed pool.
    Refuted { cycle: Vec<Term> },
    /// No violation in the probed pool: compatible with well-foundedness
    /// but no proof, since only finitely many terms were inspected.
    Unknown { probed: usize },
}

/// Searches a pool of terms for comparison cycles.  The pool lists every
/// syntactic term when the base is finite and the trace is enumerable
/// (truncated to `budget`), and falls back to a seeded random sample
/// otherwise.
pub fn wf_probe(d: &Dilator, base: &ExtOrd, budget: usize, seed: u64) -> Result<WfProbe> {
    use rand::SeedableRng;
    let mut pool: Vec<Term> = Vec::new();
    let enumerated = match base.as_nat() {
        Some(n) => match d.trace(n as usize) {
            Ok(trace) => {
                'fill: for te in trace {
                    for f in crate::dilator::increasing_maps(te.arity, n as usize) {
                        if pool.len() >= budget {
                            break 'fill;
                        }
                        pool.push(Term {
                            ctor: te.value.clone(),
                            args: f.image().iter().map(|&k| ExtOrd::nat(k as u64)).collect(),
                            base: base.clone(),
                        });
                    }
                }
                true
            }
            Err(DilatorError::InfiniteFiber { .. }) => false,
            Err(e) => return Err(e.into()),
        },
        None => false,
    };
    if !enumerated {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut seen = std::collections::HashSet::new();
        for _ in 0..budget.saturating_mul(4) {
            if pool.len() >= budget {
                break;
            }
            let arity = rng.gen_range(0..=3usize);
            let Ok(Some(ctor)) = d.sample_element(arity, &mut rng) else { continue };
            if !d.in_trace(arity, &ctor)? {
                continue;
            }
            let mut args = std::collections::BTreeSet::new();
            for _ in 0..arity * 3 {
                if args.len() == arity {
                    break;
                }
                args.insert(sample_below(&mut rng, base));
            }
            if args.len() != arity {
                continue;
            }
            let t = Term { ctor, args: args.into_iter().collect(), base: base.clone() };
            if seen.insert(t.to_string()) {
                pool.push(t);
            }
        }
    }
    let m = pool.len();
    let mut less = vec![vec![false; m]; m];
    for i in 0..m {
        for j in 0..m {
            if i != j {
                less[i][j] = term_compare(d, &pool[i], &pool[j])? == Ordering::Less;
            }
        }
    }
    for i in 0..m {
        for j in 0..m {
            if !less[i][j] {
                continue;
            }
            for k in 0..m {
                if less[j][k] && less[k][i] {
                    return Ok(WfProbe::Refuted {
                        cycle: vec![pool[i].clone(), pool[j].clone(), pool[k].clone()],
                    });
                }
            }
        }
    }
    Ok(WfProbe::Unknown { probed: m })
}

fn sample_below<R: Rng>(rng: &mut R, base: &ExtOrd) -> ExtOrd {
    match base {
        ExtOrd::Plain(b) => ExtOrd::Plain(crate::ordinal::random_below(rng, b)),
        ExtOrd::OmegaPlus(nu) => {
            if nu.is_zero() || rng.gen_bool(0.5) {
                let head = Ordinal::omega_pow(Ordinal::nat(3));
                ExtOrd::Plain(crate::ordinal::random_below(rng, &head))
            } else {
                ExtOrd::OmegaPlus(crate::ordinal::random_below(rng, nu))
            }
        }
    }
}
