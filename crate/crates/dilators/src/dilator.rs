//! Coded dilators: functors from finite linear orders to ordinals,
//! presented either as explicit finite tables or as combinator trees.
//!
//! A presentation assigns to each arity `n` a fiber `D(n)` (an ordinal;
//! its elements are the notations strictly below it), to each strictly
//! increasing `f: m -> n` an action `D(f)` on elements, and to each
//! element a finite support inside `{0, ..., n-1}`.  The two laws that
//! make this a dilator code are functoriality of the action and the
//! support condition: an element whose support lies in the range of `f`
//! must itself be in the range of `D(f)`.
//!
//! Tables specify the action only on the coface generators (the maps
//! `n -> n+1` that skip one point); arbitrary maps factor through chains
//! of cofaces and the validators check that the factorization is
//! consistent.  Combinators (`Const`, `Identity`, `Sum`, `SigmaOf`) carry
//! closed forms for fibers, actions and supports, and may have infinite
//! fibers; validators then sample instead of enumerating.
//!
//! Normal presentations additionally carry the family `mu_n(k)`: the
//! threshold elements below which supports are confined to `{0..k-1}`.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::ordinal::{random_below, Ordinal};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DilatorError {
    #[error("arity {n} exceeds the table bound {bound}")]
    OutOfBounds { n: usize, bound: usize },
    #[error("fiber at arity {arity} is infinite; this operation needs a finite fiber")]
    InfiniteFiber { arity: usize },
    #[error("element {element} is not below the fiber {fiber}")]
    ElementOutOfRange { element: Ordinal, fiber: Ordinal },
    #[error("malformed table: {0}")]
    BadShape(String),
    #[error("malformed map: {0}")]
    BadMap(String),
    #[error("{0}")]
    Unsupported(String),
}

type Result<T> = std::result::Result<T, DilatorError>;

/// A strictly increasing map between finite ordinals, kept as its image.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NatMap {
    target: usize,
    image: Vec<usize>,
}

impl NatMap {
    pub fn new(target: usize, image: Vec<usize>) -> Result<Self> {
        if image.windows(2).any(|w| w[0] >= w[1]) {
            return Err(DilatorError::BadMap("image must be strictly increasing".into()));
        }
        if image.last().is_some_and(|&x| x >= target) {
            return Err(DilatorError::BadMap(format!(
                "image reaches {} but the target is {target}",
                image.last().unwrap()
            )));
        }
        Ok(NatMap { target, image })
    }

    pub fn identity(n: usize) -> Self {
        NatMap { target: n, image: (0..n).collect() }
    }

    /// The coface `n -> n+1` whose range misses `skip`.
    pub fn coface(n: usize, skip: usize) -> Self {
        assert!(skip <= n);
        NatMap {
            target: n + 1,
            image: (0..n).map(|j| if j < skip { j } else { j + 1 }).collect(),
        }
    }

    /// Inclusion of a subset of `0..target`, given as a sorted set.
    pub fn inclusion(target: usize, subset: &BTreeSet<usize>) -> Result<Self> {
        NatMap::new(target, subset.iter().copied().collect())
    }

    pub fn domain(&self) -> usize {
        self.image.len()
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn range_set(&self) -> BTreeSet<usize> {
        self.image.iter().copied().collect()
    }

    pub fn position_of(&self, value: usize) -> Option<usize> {
        self.image.binary_search(&value).ok()
    }

    /// `self` after `inner`.
    pub fn compose(&self, inner: &NatMap) -> Result<Self> {
        if inner.target != self.domain() {
            return Err(DilatorError::BadMap(format!(
                "cannot compose: inner target {} vs outer domain {}",
                inner.target,
                self.domain()
            )));
        }
        Ok(NatMap {
            target: self.target,
            image: inner.image.iter().map(|&x| self.image[x]).collect(),
        })
    }

    /// The restriction `k -> f(k)` of `f` to the first `k` points.
    pub fn restrict_prefix(&self, k: usize) -> Self {
        assert!(k < self.domain());
        NatMap { target: self.image[k], image: self.image[..k].to_vec() }
    }

    /// Factors into cofaces, innermost first: entries `(a, skip)` denote
    /// the coface `a -> a+1` missing `skip`.  Both strategies produce the
    /// same composite; they differ in which missing point is inserted
    /// when.
    pub fn coface_chain(&self, strategy: ChainStrategy) -> Vec<(usize, usize)> {
        let mut chain = Vec::with_capacity(self.target - self.domain());
        let mut image = self.image.clone();
        let mut target = self.target;
        while image.len() < target {
            let range: BTreeSet<usize> = image.iter().copied().collect();
            let v = match strategy {
                ChainStrategy::LargestMissing => {
                    (0..target).rev().find(|x| !range.contains(x)).unwrap()
                }
                ChainStrategy::SmallestMissing => {
                    (0..target).find(|x| !range.contains(x)).unwrap()
                }
            };
            chain.push((target - 1, v));
            for x in image.iter_mut() {
                if *x > v {
                    *x -= 1;
                }
            }
            target -= 1;
        }
        chain.reverse();
        chain
    }
}

impl fmt::Debug for NatMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {} -> {}", self.image, self.domain(), self.target)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainStrategy {
    LargestMissing,
    SmallestMissing,
}

/// All strictly increasing maps `m -> n`, i.e. the m-subsets of `0..n`.
pub fn increasing_maps(m: usize, n: usize) -> Vec<NatMap> {
    fn go(start: usize, n: usize, m: usize, acc: &mut Vec<usize>, out: &mut Vec<NatMap>) {
        if acc.len() == m {
            out.push(NatMap { target: n, image: acc.clone() });
            return;
        }
        for v in start..n {
            if n - v < m - acc.len() {
                break;
            }
            acc.push(v);
            go(v + 1, n, m, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, m, &mut Vec::new(), &mut out);
    out
}

/// An element of the trace: a constructor `value` whose support at
/// `arity` is the whole index set, so it genuinely consumes `arity`
/// arguments.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TraceElement {
    pub arity: usize,
    pub value: Ordinal,
}

impl fmt::Debug for TraceElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.value, self.arity)
    }
}

/// Explicit finite presentation up to a bound.  All fibers must be
/// finite so that cofaces and supports can be tabulated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    bound: usize,
    values: Vec<u64>,
    /// cofaces[n][i][s] = image of element s under the coface n -> n+1 skipping i.
    cofaces: Vec<Vec<Vec<u64>>>,
    /// supports[n][s] = support of element s at arity n.
    supports: Vec<Vec<BTreeSet<usize>>>,
    mu: Option<Vec<Vec<u64>>>,
}

impl Table {
    pub fn new(
        values: Vec<u64>,
        cofaces: Vec<Vec<Vec<u64>>>,
        supports: Vec<Vec<BTreeSet<usize>>>,
        mu: Option<Vec<Vec<u64>>>,
    ) -> Result<Self> {
        if values.is_empty() {
            return Err(DilatorError::BadShape("need at least the fiber at 0".into()));
        }
        let bound = values.len() - 1;
        if cofaces.len() != bound {
            return Err(DilatorError::BadShape(format!(
                "expected coface blocks for arities 0..{bound}, got {}",
                cofaces.len()
            )));
        }
        for (n, block) in cofaces.iter().enumerate() {
            if block.len() != n + 1 {
                return Err(DilatorError::BadShape(format!(
                    "arity {n} needs {} cofaces, got {}",
                    n + 1,
                    block.len()
                )));
            }
            for (i, action) in block.iter().enumerate() {
                if action.len() != values[n] as usize {
                    return Err(DilatorError::BadShape(format!(
                        "coface ({n},{i}) must list {} images",
                        values[n]
                    )));
                }
                if let Some(&bad) = action.iter().find(|&&x| x >= values[n + 1]) {
                    return Err(DilatorError::BadShape(format!(
                        "coface ({n},{i}) maps into {bad}, beyond the fiber {}",
                        values[n + 1]
                    )));
                }
            }
        }
        if supports.len() != bound + 1 {
            return Err(DilatorError::BadShape(format!(
                "expected support blocks for arities 0..={bound}, got {}",
                supports.len()
            )));
        }
        for (n, block) in supports.iter().enumerate() {
            if block.len() != values[n] as usize {
                return Err(DilatorError::BadShape(format!(
                    "arity {n} needs {} support entries",
                    values[n]
                )));
            }
            if block.iter().flatten().any(|&k| k >= n) {
                return Err(DilatorError::BadShape(format!(
                    "a support at arity {n} mentions an index >= {n}"
                )));
            }
        }
        if let Some(mu) = &mu {
            if mu.len() != bound + 1 {
                return Err(DilatorError::BadShape("mu must cover every tabulated arity".into()));
            }
            for (n, entries) in mu.iter().enumerate() {
                if entries.len() != n {
                    return Err(DilatorError::BadShape(format!(
                        "mu at arity {n} needs {n} entries"
                    )));
                }
                if entries.iter().any(|&v| v >= values[n]) {
                    return Err(DilatorError::BadShape(format!(
                        "mu at arity {n} leaves the fiber"
                    )));
                }
            }
        }
        Ok(Table { bound, values, cofaces, supports, mu })
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn coface_images(&self, n: usize, skip: usize) -> &[u64] {
        &self.cofaces[n][skip]
    }

    pub fn support_entries(&self, n: usize) -> &[BTreeSet<usize>] {
        &self.supports[n]
    }

    pub fn mu_entries(&self) -> Option<&Vec<Vec<u64>>> {
        self.mu.as_ref()
    }

    /// Targeted corruption helpers for adversarial fixtures.
    pub fn corrupt_support(&mut self, n: usize, element: u64, support: BTreeSet<usize>) {
        self.supports[n][element as usize] = support;
    }

    pub fn corrupt_coface(&mut self, n: usize, skip: usize, element: u64, image: u64) {
        self.cofaces[n][skip][element as usize] = image;
    }

    pub fn corrupt_mu(&mut self, n: usize, k: usize, value: u64) {
        if let Some(mu) = &mut self.mu {
            mu[n][k] = value;
        }
    }
}

/// A coded dilator: an explicit table or a combinator tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dilator {
    Table(Table),
    Const(Ordinal),
    Identity,
    Sum(Box<Dilator>, Box<Dilator>),
    SigmaOf(Box<Dilator>),
}

impl Dilator {
    pub fn constant(nu: Ordinal) -> Self {
        Dilator::Const(nu)
    }

    pub fn identity() -> Self {
        Dilator::Identity
    }

    pub fn sum(a: Dilator, b: Dilator) -> Self {
        Dilator::Sum(Box::new(a), Box::new(b))
    }

    pub fn sigma(d: Dilator) -> Self {
        Dilator::SigmaOf(Box::new(d))
    }

    /// Largest arity this presentation can evaluate, if bounded.
    pub fn bound(&self) -> Option<usize> {
        match self {
            Dilator::Table(t) => Some(t.bound),
            Dilator::Const(_) | Dilator::Identity => None,
            Dilator::Sum(a, b) => match (a.bound(), b.bound()) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (Some(x), None) | (None, Some(x)) => Some(x),
                (None, None) => None,
            },
            // The sigma fiber at n only consults the inner dilator below n.
            Dilator::SigmaOf(d) => d.bound().map(|b| b + 1),
        }
    }

    fn check_arity(&self, n: usize) -> Result<()> {
        match self.bound() {
            Some(b) if n > b => Err(DilatorError::OutOfBounds { n, bound: b }),
            _ => Ok(()),
        }
    }

    /// The fiber `D(n)` as an ordinal.
    pub fn fiber(&self, n: usize) -> Result<Ordinal> {
        self.check_arity(n)?;
        Ok(match self {
            Dilator::Table(t) => Ordinal::nat(t.values[n]),
            Dilator::Const(nu) => nu.clone(),
            Dilator::Identity => Ordinal::nat(n as u64),
            Dilator::Sum(a, b) => a.fiber(n)?.add(&b.fiber(n)?),
            Dilator::SigmaOf(d) => {
                let mut s = Ordinal::zero();
                for k in 0..n {
                    s = s.add(&Ordinal::nat(1)).add(&d.fiber(k)?);
                }
                s
            }
        })
    }

    pub fn fiber_is_finite(&self, n: usize) -> Result<bool> {
        Ok(self.fiber(n)?.is_finite())
    }

    /// All elements of a finite fiber, in order.
    pub fn elements(&self, n: usize) -> Result<Vec<Ordinal>> {
        match self.fiber(n)?.as_nat() {
            Some(v) => Ok((0..v).map(Ordinal::nat).collect()),
            None => Err(DilatorError::InfiniteFiber { arity: n }),
        }
    }

    pub fn sample_element<R: Rng>(&self, n: usize, rng: &mut R) -> Result<Option<Ordinal>> {
        let fiber = self.fiber(n)?;
        if fiber.is_zero() {
            return Ok(None);
        }
        Ok(Some(random_below(rng, &fiber)))
    }

    fn check_element(&self, n: usize, element: &Ordinal) -> Result<()> {
        let fiber = self.fiber(n)?;
        if element >= &fiber {
            return Err(DilatorError::ElementOutOfRange { element: element.clone(), fiber });
        }
        Ok(())
    }

    /// Splits a sigma fiber element into its block index and inner part.
    fn sigma_decompose(d: &Dilator, n: usize, element: &Ordinal) -> Result<(usize, Option<Ordinal>)> {
        let mut partial = Ordinal::zero();
        let mut block = None;
        for k in 0..n {
            let next = partial.add(&Ordinal::nat(1)).add(&d.fiber(k)?);
            if element < &next {
                block = Some((k, partial.clone()));
                break;
            }
            partial = next;
        }
        let Some((k, start)) = block else {
            return Err(DilatorError::ElementOutOfRange {
                element: element.clone(),
                fiber: partial,
            });
        };
        let offset = start.left_sub(element).expect("start <= element");
        if offset.is_zero() {
            Ok((k, None))
        } else {
            let inner = Ordinal::nat(1).left_sub(&offset).expect("offset >= 1");
            Ok((k, Some(inner)))
        }
    }

    fn sigma_compose(d: &Dilator, k: usize, inner: Option<&Ordinal>) -> Result<Ordinal> {
        let mut s = Ordinal::zero();
        for j in 0..k {
            s = s.add(&Ordinal::nat(1)).add(&d.fiber(j)?);
        }
        match inner {
            None => Ok(s),
            Some(beta) => Ok(s.add(&Ordinal::nat(1)).add(beta)),
        }
    }

    /// The action `D(f)` on an element of `D(domain f)`.
    pub fn apply(&self, f: &NatMap, element: &Ordinal) -> Result<Ordinal> {
        self.check_arity(f.target())?;
        self.check_element(f.domain(), element)?;
        match self {
            Dilator::Table(t) => {
                let mut idx = element.as_nat().expect("finite table fiber") as usize;
                for (a, skip) in f.coface_chain(ChainStrategy::LargestMissing) {
                    idx = t.cofaces[a][skip][idx] as usize;
                }
                Ok(Ordinal::nat(idx as u64))
            }
            Dilator::Const(_) => Ok(element.clone()),
            Dilator::Identity => {
                let k = element.as_nat().expect("identity fiber is finite") as usize;
                Ok(Ordinal::nat(f.apply(k) as u64))
            }
            Dilator::Sum(a, b) => {
                let left = a.fiber(f.domain())?;
                if element < &left {
                    a.apply(f, element)
                } else {
                    let tau = left.left_sub(element).expect("element >= left fiber");
                    Ok(a.fiber(f.target())?.add(&b.apply(f, &tau)?))
                }
            }
            Dilator::SigmaOf(d) => {
                let (k, inner) = Self::sigma_decompose(d, f.domain(), element)?;
                match inner {
                    None => Self::sigma_compose(d, f.apply(k), None),
                    Some(beta) => {
                        let g = f.restrict_prefix(k);
                        let moved = d.apply(&g, &beta)?;
                        Self::sigma_compose(d, f.apply(k), Some(&moved))
                    }
                }
            }
        }
    }

    /// Preimage under `D(f)`, if the element is in the range.
    pub fn preimage(&self, f: &NatMap, element: &Ordinal) -> Result<Option<Ordinal>> {
        self.check_arity(f.target())?;
        self.check_element(f.target(), element)?;
        match self {
            Dilator::Table(_) => {
                for candidate in self.elements(f.domain())? {
                    if &self.apply(f, &candidate)? == element {
                        return Ok(Some(candidate));
                    }
                }
                Ok(None)
            }
            Dilator::Const(_) => Ok(Some(element.clone())),
            Dilator::Identity => {
                let k = element.as_nat().expect("identity fiber is finite") as usize;
                Ok(f.position_of(k).map(|p| Ordinal::nat(p as u64)))
            }
            Dilator::Sum(a, b) => {
                let left = a.fiber(f.target())?;
                if element < &left {
                    a.preimage(f, element)
                } else {
                    let tau = left.left_sub(element).expect("element >= left fiber");
                    Ok(b.preimage(f, &tau)?
                        .map(|t0| a.fiber(f.domain()).map(|lf| lf.add(&t0)))
                        .transpose()?)
                }
            }
            Dilator::SigmaOf(d) => {
                let (k, inner) = Self::sigma_decompose(d, f.target(), element)?;
                let Some(j) = f.position_of(k) else {
                    return Ok(None);
                };
                match inner {
                    None => Ok(Some(Self::sigma_compose(d, j, None)?)),
                    Some(beta) => {
                        let g = f.restrict_prefix(j);
                        match d.preimage(&g, &beta)? {
                            None => Ok(None),
                            Some(b0) => Ok(Some(Self::sigma_compose(d, j, Some(&b0))?)),
                        }
                    }
                }
            }
        }
    }

    /// The support of an element at arity `n`.
    pub fn support(&self, n: usize, element: &Ordinal) -> Result<BTreeSet<usize>> {
        self.check_arity(n)?;
        self.check_element(n, element)?;
        match self {
            Dilator::Table(t) => {
                Ok(t.supports[n][element.as_nat().expect("finite table fiber") as usize].clone())
            }
            Dilator::Const(_) => Ok(BTreeSet::new()),
            Dilator::Identity => {
                Ok(BTreeSet::from([element.as_nat().expect("finite") as usize]))
            }
            Dilator::Sum(a, b) => {
                let left = a.fiber(n)?;
                if element < &left {
                    a.support(n, element)
                } else {
                    b.support(n, &left.left_sub(element).expect("element >= left fiber"))
                }
            }
            Dilator::SigmaOf(d) => {
                let (k, inner) = Self::sigma_decompose(d, n, element)?;
                let mut supp = BTreeSet::from([k]);
                if let Some(beta) = inner {
                    supp.extend(d.support(k, &beta)?);
                }
                Ok(supp)
            }
        }
    }

    /// Whether the presentation carries normality data.
    pub fn has_mu(&self) -> bool {
        match self {
            Dilator::Table(t) => t.mu.is_some(),
            Dilator::Identity | Dilator::SigmaOf(_) => true,
            Dilator::Sum(a, b) => matches!(**a, Dilator::Const(_)) && b.has_mu(),
            Dilator::Const(_) => false,
        }
    }

    /// The threshold `mu_n(k)`, when normality data exists.
    pub fn mu(&self, n: usize, k: usize) -> Result<Option<Ordinal>> {
        self.check_arity(n)?;
        if k >= n {
            return Err(DilatorError::BadMap(format!("mu_{n}({k}) needs k < n")));
        }
        match self {
            Dilator::Table(t) => Ok(t.mu.as_ref().map(|mu| Ordinal::nat(mu[n][k]))),
            Dilator::Identity => Ok(Some(Ordinal::nat(k as u64))),
            Dilator::SigmaOf(_) => Ok(Some(self.fiber(k)?)),
            Dilator::Sum(a, b) => match (&**a, b.mu(n, k)?) {
                (Dilator::Const(nu), Some(inner)) => Ok(Some(nu.add(&inner))),
                _ => Ok(None),
            },
            Dilator::Const(_) => Ok(None),
        }
    }

    /// Trace elements with arity at most `bound`, sorted by (arity, value).
    pub fn trace(&self, bound: usize) -> Result<Vec<TraceElement>> {
        let mut out = Vec::new();
        for n in 0..=bound {
            let full: BTreeSet<usize> = (0..n).collect();
            for element in self.elements(n)? {
                if self.support(n, &element)? == full {
                    out.push(TraceElement { arity: n, value: element });
                }
            }
        }
        Ok(out)
    }

    /// Whether `(value, arity)` is in the trace.
    pub fn in_trace(&self, arity: usize, value: &Ordinal) -> Result<bool> {
        let fiber = self.fiber(arity)?;
        if value >= &fiber {
            return Ok(false);
        }
        let full: BTreeSet<usize> = (0..arity).collect();
        Ok(self.support(arity, value)? == full)
    }

    /// Tabulates any finite-fiber presentation up to a bound.
    pub fn to_table(&self, bound: usize) -> Result<Table> {
        let mut values = Vec::with_capacity(bound + 1);
        for n in 0..=bound {
            values.push(match self.fiber(n)?.as_nat() {
                Some(v) => v,
                None => return Err(DilatorError::InfiniteFiber { arity: n }),
            });
        }
        let mut cofaces = Vec::with_capacity(bound);
        for n in 0..bound {
            let mut block = Vec::with_capacity(n + 1);
            for i in 0..=n {
                let f = NatMap::coface(n, i);
                let mut action = Vec::with_capacity(values[n] as usize);
                for s in 0..values[n] {
                    action.push(
                        self.apply(&f, &Ordinal::nat(s))?
                            .as_nat()
                            .expect("finite fiber image"),
                    );
                }
                block.push(action);
            }
            cofaces.push(block);
        }
        let mut supports = Vec::with_capacity(bound + 1);
        for n in 0..=bound {
            let mut block = Vec::with_capacity(values[n] as usize);
            for s in 0..values[n] {
                block.push(self.support(n, &Ordinal::nat(s))?);
            }
            supports.push(block);
        }
        let mu = if self.has_mu() {
            let mut rows = Vec::with_capacity(bound + 1);
            for n in 0..=bound {
                let mut row = Vec::with_capacity(n);
                for k in 0..n {
                    row.push(
                        self.mu(n, k)?
                            .expect("has_mu")
                            .as_nat()
                            .expect("mu lives in a finite fiber"),
                    );
                }
                rows.push(row);
            }
            Some(rows)
        } else {
            None
        };
        Table::new(values, cofaces, supports, mu)
    }
}

impl fmt::Display for Dilator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dilator::Table(t) => write!(f, "Table(bound {})", t.bound),
            Dilator::Const(nu) => write!(f, "Const({nu})"),
            Dilator::Identity => write!(f, "Identity"),
            Dilator::Sum(a, b) => write!(f, "Sum({a}, {b})"),
            Dilator::SigmaOf(d) => write!(f, "SigmaOf({d})"),
        }
    }
}

// -- validators --------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub location: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct LawCheck {
    pub law: String,
    pub mode: CheckMode,
    pub cases: usize,
    pub failure: Option<Failure>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub subject: String,
    pub bound: usize,
    pub checks: Vec<LawCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failure.is_none())
    }

    pub fn first_failure(&self) -> Option<&LawCheck> {
        self.checks.iter().find(|c| c.failure.is_some())
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (bound {})", self.subject, self.bound)?;
        for c in &self.checks {
            let mode = match c.mode {
                CheckMode::Exhaustive => "exhaustive",
                CheckMode::Sampled => "sampled",
            };
            match &c.failure {
                None => writeln!(f, "  {:<22} pass  ({} cases, {mode})", c.law, c.cases)?,
                Some(fail) => writeln!(
                    f,
                    "  {:<22} FAIL  at {}: {}",
                    c.law, fail.location, fail.detail
                )?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ValidateOptions {
    pub samples: usize,
    pub seed: u64,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions { samples: 64, seed: 0 }
    }
}

struct LawRun {
    law: &'static str,
    mode: CheckMode,
    cases: usize,
    failure: Option<Failure>,
}

impl LawRun {
    fn new(law: &'static str) -> Self {
        LawRun { law, mode: CheckMode::Exhaustive, cases: 0, failure: None }
    }

    fn fail(&mut self, location: String, detail: String) {
        if self.failure.is_none() {
            self.failure = Some(Failure { location, detail });
        }
    }

    fn done(self) -> LawCheck {
        LawCheck {
            law: self.law.into(),
            mode: self.mode,
            cases: self.cases,
            failure: self.failure,
        }
    }
}

/// Elements to inspect at arity `n`: the whole fiber when finite, a
/// deterministic sample otherwise (marking the run as sampled).
fn probe_elements<R: Rng>(
    d: &Dilator,
    n: usize,
    opts: &ValidateOptions,
    rng: &mut R,
    run: &mut LawRun,
) -> Result<Vec<Ordinal>> {
    match d.elements(n) {
        Ok(all) => Ok(all),
        Err(DilatorError::InfiniteFiber { .. }) => {
            run.mode = CheckMode::Sampled;
            let mut out = BTreeSet::new();
            for _ in 0..opts.samples {
                if let Some(x) = d.sample_element(n, rng)? {
                    out.insert(x);
                }
            }
            Ok(out.into_iter().collect())
        }
        Err(e) => Err(e),
    }
}

/// Checks the functor and support laws up to `bound`.
pub fn validate_predilator(
    d: &Dilator,
    bound: usize,
    opts: &ValidateOptions,
) -> Result<ValidationReport> {
    use rand::SeedableRng;
    if let Some(b) = d.bound() {
        if bound > b {
            return Err(DilatorError::OutOfBounds { n: bound, bound: b });
        }
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(opts.seed);
    let mut checks = Vec::new();

    // Cofaces act strictly monotonically.
    let mut run = LawRun::new("coface-monotone");
    'mono: for n in 0..bound {
        let elems = probe_elements(d, n, opts, &mut rng, &mut run)?;
        for i in 0..=n {
            let f = NatMap::coface(n, i);
            let mut prev: Option<(Ordinal, Ordinal)> = None;
            for e in &elems {
                let img = d.apply(&f, e)?;
                if let Some((pe, pi)) = &prev {
                    if pi >= &img {
                        run.fail(
                            format!("coface ({n},{i})"),
                            format!("{pe} -> {pi} but {e} -> {img}"),
                        );
                        break 'mono;
                    }
                }
                run.cases += 1;
                prev = Some((e.clone(), img));
            }
        }
    }
    checks.push(run.done());

    // Exchanging two cofaces along the simplicial identity gives the same action.
    let mut run = LawRun::new("coface-compatible");
    'compat: for n in 0..bound.saturating_sub(1) {
        let elems = probe_elements(d, n, opts, &mut rng, &mut run)?;
        for j in 0..=n {
            for i in 0..=j {
                // delta_i . delta_j = delta_{j+1} . delta_i : n -> n+2
                let lhs_in = NatMap::coface(n, j);
                let lhs_out = NatMap::coface(n + 1, i);
                let rhs_in = NatMap::coface(n, i);
                let rhs_out = NatMap::coface(n + 1, j + 1);
                for e in &elems {
                    let lhs = d.apply(&lhs_out, &d.apply(&lhs_in, e)?)?;
                    let rhs = d.apply(&rhs_out, &d.apply(&rhs_in, e)?)?;
                    run.cases += 1;
                    if lhs != rhs {
                        run.fail(
                            format!("arity {n}, cofaces ({i},{j})"),
                            format!("element {e}: {lhs} vs {rhs}"),
                        );
                        break 'compat;
                    }
                }
            }
        }
    }
    checks.push(run.done());

    // Supports transport along cofaces.
    let mut run = LawRun::new("support-natural");
    'nat: for n in 0..bound {
        let elems = probe_elements(d, n, opts, &mut rng, &mut run)?;
        for i in 0..=n {
            let f = NatMap::coface(n, i);
            for e in &elems {
                let img = d.apply(&f, e)?;
                let lhs = d.support(n + 1, &img)?;
                let rhs: BTreeSet<usize> =
                    d.support(n, e)?.into_iter().map(|k| f.apply(k)).collect();
                run.cases += 1;
                if lhs != rhs {
                    run.fail(
                        format!("coface ({n},{i}), element {e}"),
                        format!("support of image is {lhs:?}, expected {rhs:?}"),
                    );
                    break 'nat;
                }
            }
        }
    }
    checks.push(run.done());

    // Elements supported inside rng(f) come from D(f).
    let mut run = LawRun::new("support-condition");
    'cond: for n in 0..=bound {
        let elems = probe_elements(d, n, opts, &mut rng, &mut run)?;
        for m in 0..=n {
            for f in increasing_maps(m, n) {
                let range = f.range_set();
                for e in &elems {
                    if !d.support(n, e)?.is_subset(&range) {
                        continue;
                    }
                    run.cases += 1;
                    let back = d.preimage(&f, e)?;
                    match back {
                        Some(pre) if d.apply(&f, &pre)? == *e => {}
                        Some(pre) => {
                            run.fail(
                                format!("map {f:?}, element {e}"),
                                format!("claimed preimage {pre} does not map back"),
                            );
                            break 'cond;
                        }
                        None => {
                            run.fail(
                                format!("map {f:?}, element {e}"),
                                "support lies in the range but the element has no preimage"
                                    .into(),
                            );
                            break 'cond;
                        }
                    }
                }
            }
        }
    }
    checks.push(run.done());

    Ok(ValidationReport { subject: d.to_string(), bound, checks })
}

/// Checks the normality data against the support structure.
pub fn validate_normality(
    d: &Dilator,
    bound: usize,
    opts: &ValidateOptions,
) -> Result<ValidationReport> {
    use rand::SeedableRng;
    if let Some(b) = d.bound() {
        if bound > b {
            return Err(DilatorError::OutOfBounds { n: bound, bound: b });
        }
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(opts.seed);
    let mut checks = Vec::new();

    let mut present = LawRun::new("mu-present");
    present.cases = 1;
    if !d.has_mu() {
        present.fail(
            d.to_string(),
            "presentation carries no normality data".into(),
        );
        checks.push(present.done());
        return Ok(ValidationReport { subject: d.to_string(), bound, checks });
    }
    checks.push(present.done());

    // mu_n is strictly increasing and lands in the fiber.
    let mut run = LawRun::new("mu-increasing");
    'increasing: for n in 1..=bound {
        let mut prev: Option<Ordinal> = None;
        for k in 0..n {
            let v = d.mu(n, k)?.expect("normality data present");
            if v >= d.fiber(n)? {
                run.fail(format!("mu_{n}({k})"), format!("{v} is not in the fiber"));
                break 'increasing;
            }
            if let Some(p) = &prev {
                if p >= &v {
                    run.fail(format!("mu_{n}({k})"), format!("{p} then {v} is not increasing"));
                    break 'increasing;
                }
            }
            run.cases += 1;
            prev = Some(v);
        }
    }
    checks.push(run.done());

    // mu is natural for cofaces.
    let mut run = LawRun::new("mu-natural");
    'natural: for n in 1..bound {
        for i in 0..=n {
            let f = NatMap::coface(n, i);
            for k in 0..n {
                let lhs = d.apply(&f, &d.mu(n, k)?.expect("present"))?;
                let rhs = d.mu(n + 1, f.apply(k))?.expect("present");
                run.cases += 1;
                if lhs != rhs {
                    run.fail(
                        format!("coface ({n},{i}), mu_{n}({k})"),
                        format!("transports to {lhs}, table says {rhs}"),
                    );
                    break 'natural;
                }
            }
        }
    }
    checks.push(run.done());

    // sigma < mu_n(k) exactly when the support of sigma sits inside 0..k.
    let mut run = LawRun::new("mu-boundary");
    'boundary: for n in 1..=bound {
        let elems = probe_elements(d, n, opts, &mut rng, &mut run)?;
        for k in 0..n {
            let threshold = d.mu(n, k)?.expect("present");
            for e in &elems {
                let below = e < &threshold;
                let confined = d.support(n, e)?.iter().all(|&x| x < k);
                run.cases += 1;
                if below != confined {
                    run.fail(
                        format!("arity {n}, k={k}, element {e}"),
                        format!(
                            "below-threshold is {below} but support-confined is {confined}"
                        ),
                    );
                    break 'boundary;
                }
            }
        }
    }
    checks.push(run.done());

    // mu_1(0) consumes its single argument: support {0}.
    let mut run = LawRun::new("mu-trace");
    if bound >= 1 {
        let v = d.mu(1, 0)?.expect("present");
        run.cases = 1;
        let supp = d.support(1, &v)?;
        if supp != BTreeSet::from([0]) {
            run.fail(format!("mu_1(0) = {v}"), format!("support is {supp:?}, not {{0}}"));
        }
    }
    checks.push(run.done());

    Ok(ValidationReport { subject: d.to_string(), bound, checks })
}
