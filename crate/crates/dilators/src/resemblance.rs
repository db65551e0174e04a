//! Finite pattern structures: the universe-relativized resemblance
//! relation, Σ₁ satisfaction, closures, club slices, and the symbolic
//! window order that indexes their intersections.
//!
//! Verdicts quantify over configurations drawn from the structure's own
//! universe.  On an initial segment of the finite ordinals every finite
//! subset of every member already lies inside the universe, so the
//! computed relation is exact; on arbitrary universes it is the
//! relativized relation and nothing more is claimed.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::dilator::{increasing_maps, Dilator, DilatorError};
use crate::ordinal::{ExtOrd, Ordinal, ParseError, Parser};
use crate::term::{represent_value, term_value, Representation, Term, TermError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ResemblanceError {
    #[error("universe has {size} elements, above the cap of {cap}")]
    UniverseTooLarge { size: usize, cap: usize },
    #[error("{0} is not a member of the universe")]
    NotInUniverse(ExtOrd),
    #[error("bad configuration: {0}")]
    BadConfig(String),
    #[error("bad formula: {0}")]
    BadFormula(String),
    #[error("bad table: {0}")]
    BadTable(String),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl From<DilatorError> for ResemblanceError {
    fn from(e: DilatorError) -> Self {
        ResemblanceError::Term(TermError::from(e))
    }
}

pub type Result<T> = std::result::Result<T, ResemblanceError>;

/// Quantifier spaces explode well before this; the cap keeps misuse loud.
pub const UNIVERSE_CAP: usize = 32;

// -- structures ----------------------------------------------------------------

/// A finite ordered universe together with the representation relation
/// its dilator induces on the members.
#[derive(Clone, PartialEq, Eq)]
pub struct PatternStructure {
    dilator: Dilator,
    universe: Vec<ExtOrd>,
    reprs: Vec<Option<Representation>>,
    exact: bool,
}

fn element_representation(d: &Dilator, u: &ExtOrd) -> Result<Option<Representation>> {
    match represent_value(d, u) {
        Ok(r) => Ok(Some(r)),
        // Members outside the range of the extension carry no
        // representation; the relation symbols simply never hold of them.
        Err(TermError::ValueOutOfRange { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn is_initial_segment(universe: &[ExtOrd]) -> bool {
    universe.iter().enumerate().all(|(i, u)| *u == ExtOrd::nat(i as u64))
}

impl PatternStructure {
    pub fn new(dilator: Dilator, universe: impl IntoIterator<Item = ExtOrd>) -> Result<Self> {
        let set: BTreeSet<ExtOrd> = universe.into_iter().collect();
        if set.len() > UNIVERSE_CAP {
            return Err(ResemblanceError::UniverseTooLarge { size: set.len(), cap: UNIVERSE_CAP });
        }
        let universe: Vec<ExtOrd> = set.into_iter().collect();
        let reprs = universe
            .iter()
            .map(|u| element_representation(&dilator, u))
            .collect::<Result<Vec<_>>>()?;
        let exact = is_initial_segment(&universe);
        Ok(PatternStructure { dilator, universe, reprs, exact })
    }

    /// The structure on `{0, …, n-1}`, where quantification is exact.
    pub fn initial_segment(dilator: Dilator, n: u64) -> Result<Self> {
        Self::new(dilator, (0..n).map(ExtOrd::nat))
    }

    pub fn dilator(&self) -> &Dilator {
        &self.dilator
    }

    pub fn universe(&self) -> &[ExtOrd] {
        &self.universe
    }

    /// Whether the universe is an initial segment of the finite ordinals.
    pub fn exact(&self) -> bool {
        self.exact
    }

    pub fn index_of(&self, u: &ExtOrd) -> Option<usize> {
        self.universe.binary_search(u).ok()
    }

    pub fn representations(&self) -> &[Option<Representation>] {
        &self.reprs
    }

    pub fn representation_of(&self, u: &ExtOrd) -> Result<Option<&Representation>> {
        let i = self
            .index_of(u)
            .ok_or_else(|| ResemblanceError::NotInUniverse(u.clone()))?;
        Ok(self.reprs[i].as_ref())
    }

    /// The substructure on the members below `bound`.
    pub fn restrict(&self, bound: &ExtOrd) -> PatternStructure {
        let keep: Vec<usize> =
            (0..self.universe.len()).filter(|&i| self.universe[i] < *bound).collect();
        let universe: Vec<ExtOrd> = keep.iter().map(|&i| self.universe[i].clone()).collect();
        let reprs = keep.iter().map(|&i| self.reprs[i].clone()).collect();
        let exact = is_initial_segment(&universe);
        PatternStructure { dilator: self.dilator.clone(), universe, reprs, exact }
    }

    /// The representation relation instance carried by member `v`, as
    /// universe indices — `None` when an argument falls outside the
    /// universe and the instance is not expressible in the structure.
    fn instance(&self, v: usize) -> Option<(&Ordinal, Vec<usize>)> {
        let r = self.reprs[v].as_ref()?;
        let mut idxs = Vec::with_capacity(r.args().len());
        for a in r.args() {
            idxs.push(self.index_of(a)?);
        }
        Some((r.ctor(), idxs))
    }
}

impl fmt::Debug for PatternStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PatternStructure({} on {{", self.dilator)?;
        for (i, u) in self.universe.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{u}")?;
        }
        write!(f, "}})")
    }
}

// -- the relation table ----------------------------------------------------------

/// How isomorphisms treat the representation relations: `Full` demands
/// equivalences in both directions, `Criterion` only the implications
/// from the configuration into its image.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsoMode {
    Full,
    Criterion,
}

/// A computed resemblance table over a fixed universe.
#[derive(Clone, PartialEq, Eq)]
pub struct Leq1Table {
    universe: Vec<ExtOrd>,
    rows: Vec<Vec<bool>>,
}

impl fmt::Debug for Leq1Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Leq1Table over {} members:", self.universe.len())?;
        f.write_str(&self.tsv())
    }
}

impl Leq1Table {
    pub fn universe(&self) -> &[ExtOrd] {
        &self.universe
    }

    pub fn verdicts(&self) -> &[Vec<bool>] {
        &self.rows
    }

    /// `None` when either side is missing from the universe.
    pub fn holds(&self, a: &ExtOrd, b: &ExtOrd) -> Option<bool> {
        let i = self.universe.binary_search(a).ok()?;
        let j = self.universe.binary_search(b).ok()?;
        Some(self.rows[i][j])
    }

    pub fn restrict(&self, bound: &ExtOrd) -> Leq1Table {
        let keep: Vec<usize> =
            (0..self.universe.len()).filter(|&i| self.universe[i] < *bound).collect();
        let universe = keep.iter().map(|&i| self.universe[i].clone()).collect();
        let rows = keep
            .iter()
            .map(|&i| keep.iter().map(|&j| self.rows[i][j]).collect())
            .collect();
        Leq1Table { universe, rows }
    }

    /// One line `α TAB β TAB 0|1` per ordered pair, row-major.
    pub fn tsv(&self) -> String {
        let mut out = String::new();
        for (i, a) in self.universe.iter().enumerate() {
            for (j, b) in self.universe.iter().enumerate() {
                out.push_str(&format!("{a}\t{b}\t{}\n", u8::from(self.rows[i][j])));
            }
        }
        out
    }

    pub fn from_tsv(input: &str) -> Result<Leq1Table> {
        let mut pairs = Vec::new();
        for (lineno, line) in input.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(ResemblanceError::BadTable(format!(
                    "line {}: expected three tab-separated fields",
                    lineno + 1
                )));
            }
            let a = ExtOrd::parse(fields[0])?;
            let b = ExtOrd::parse(fields[1])?;
            let v = match fields[2] {
                "0" => false,
                "1" => true,
                other => {
                    return Err(ResemblanceError::BadTable(format!(
                        "line {}: verdict must be 0 or 1, found {other:?}",
                        lineno + 1
                    )))
                }
            };
            pairs.push((a, b, v));
        }
        let universe: Vec<ExtOrd> = pairs
            .iter()
            .map(|(a, _, _)| a.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let n = universe.len();
        if pairs.len() != n * n {
            return Err(ResemblanceError::BadTable(format!(
                "{} lines do not fill a {n} x {n} table",
                pairs.len()
            )));
        }
        let mut rows = vec![vec![None; n]; n];
        for (a, b, v) in pairs {
            let i = universe.binary_search(&a).unwrap();
            let j = universe
                .binary_search(&b)
                .map_err(|_| ResemblanceError::BadTable(format!("{b} appears only as a second coordinate")))?;
            if rows[i][j].replace(v).is_some() {
                return Err(ResemblanceError::BadTable(format!("duplicate pair ({a}, {b})")));
            }
        }
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().collect::<Option<Vec<bool>>>())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| ResemblanceError::BadTable("missing pairs".into()))?;
        Ok(Leq1Table { universe, rows })
    }

    /// Digraph with an edge per related pair of distinct members.
    pub fn dot(&self) -> String {
        let mut out = String::from("digraph leq1 {\n  rankdir=LR;\n");
        for u in &self.universe {
            out.push_str(&format!("  \"{u}\";\n"));
        }
        for (i, a) in self.universe.iter().enumerate() {
            for (j, b) in self.universe.iter().enumerate() {
                if i != j && self.rows[i][j] {
                    out.push_str(&format!("  \"{a}\" -> \"{b}\";\n"));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// The resemblance table under full isomorphism semantics, by recursion
/// on the second argument.
pub fn leq1_table(s: &PatternStructure) -> Leq1Table {
    build_table(s, IsoMode::Full)
}

/// The table computed with order-and-resemblance isomorphisms plus
/// forward-only representation implications.
pub fn leq1_criterion(s: &PatternStructure) -> Leq1Table {
    build_table(s, IsoMode::Criterion)
}

fn build_table(s: &PatternStructure, mode: IsoMode) -> Leq1Table {
    let n = s.universe.len();
    let mut rows = vec![vec![false; n]; n];
    // Increasing second argument: every resemblance lookup inside an
    // isomorphism check concerns a pair whose second member is smaller,
    // hence already decided.
    for j in 0..n {
        for i in 0..=j {
            rows[i][j] = decide(s, &rows, i, j, mode);
        }
    }
    Leq1Table { universe: s.universe.clone(), rows }
}

// Witnessing isomorphisms restrict to sub-configurations, so the maximal
// configuration — everything below the left member against everything in
// the half-open interval — decides the whole quantifier.
fn decide(s: &PatternStructure, rows: &[Vec<bool>], i: usize, j: usize, mode: IsoMode) -> bool {
    if i == j {
        return true;
    }
    let x: Vec<usize> = (0..i).collect();
    let y: Vec<usize> = (i..j).collect();
    if y.is_empty() {
        return true;
    }
    search_image(s, rows, &x, &y, i, mode).is_some()
}

/// Backtracking search for an image set: the order structure forces the
/// embedding once the image is chosen, so candidates are increasing
/// tuples from the pool below `alpha_idx` with matching interleaving.
fn search_image(
    s: &PatternStructure,
    rows: &[Vec<bool>],
    x: &[usize],
    y: &[usize],
    alpha_idx: usize,
    mode: IsoMode,
) -> Option<Vec<usize>> {
    let pool: Vec<usize> = (0..alpha_idx).filter(|k| !x.contains(k)).collect();
    let mut chosen = Vec::with_capacity(y.len());
    fn below(x: &[usize], v: usize) -> usize {
        x.iter().take_while(|&&e| e < v).count()
    }
    fn go(
        s: &PatternStructure,
        rows: &[Vec<bool>],
        x: &[usize],
        y: &[usize],
        pool: &[usize],
        from: usize,
        chosen: &mut Vec<usize>,
        mode: IsoMode,
    ) -> Option<Vec<usize>> {
        if chosen.len() == y.len() {
            return iso_ok(s, rows, x, y, chosen, mode).then(|| chosen.clone());
        }
        let k = chosen.len();
        for (p, &cand) in pool.iter().enumerate().skip(from) {
            if below(x, cand) != below(x, y[k]) {
                continue;
            }
            chosen.push(cand);
            if let Some(w) = go(s, rows, x, y, pool, p + 1, chosen, mode) {
                return Some(w);
            }
            chosen.pop();
        }
        None
    }
    go(s, rows, x, y, &pool, 0, &mut chosen, mode)
}

/// Whether fixing `x` and sending `y` to `ytilde` (both sorted) is an
/// isomorphism of the induced configurations under the given mode.
fn iso_ok(
    s: &PatternStructure,
    rows: &[Vec<bool>],
    x: &[usize],
    y: &[usize],
    ytilde: &[usize],
    mode: IsoMode,
) -> bool {
    if y.len() != ytilde.len() {
        return false;
    }
    if ytilde.windows(2).any(|w| w[0] >= w[1]) || ytilde.iter().any(|t| x.contains(t)) {
        return false;
    }
    // Order preservation reduces to matching interleaving with the fixed part.
    for (a, b) in y.iter().zip(ytilde) {
        let pos_a = x.iter().filter(|&&e| e < *a).count();
        let pos_b = x.iter().filter(|&&e| e < *b).count();
        if pos_a != pos_b {
            return false;
        }
    }
    let dom: Vec<usize> = {
        let mut v: Vec<usize> = x.iter().chain(y).copied().collect();
        v.sort_unstable();
        v
    };
    let map: BTreeMap<usize, usize> = x
        .iter()
        .map(|&e| (e, e))
        .chain(y.iter().copied().zip(ytilde.iter().copied()))
        .collect();
    for &a in &dom {
        for &b in &dom {
            if rows[a][b] != rows[map[&a]][map[&b]] {
                return false;
            }
        }
    }
    let domset: BTreeSet<usize> = dom.iter().copied().collect();
    let imageset: BTreeSet<usize> = map.values().copied().collect();
    if !repr_instances_push(s, &domset, |v| map[&v]) {
        return false;
    }
    if mode == IsoMode::Full {
        let inverse: BTreeMap<usize, usize> = map.iter().map(|(&k, &v)| (v, k)).collect();
        if !repr_instances_push(s, &imageset, |v| inverse[&v]) {
            return false;
        }
    }
    true
}

// Every representation instance lying inside `dom` must hold of the
// image tuple.  Checking held instances in both directions also settles
// the failed ones, because representations are unique per member.
fn repr_instances_push(
    s: &PatternStructure,
    dom: &BTreeSet<usize>,
    f: impl Fn(usize) -> usize,
) -> bool {
    for &v in dom {
        let Some((ctor, args)) = s.instance(v) else {
            continue;
        };
        if !args.iter().all(|a| dom.contains(a)) {
            continue;
        }
        let expected: Vec<usize> = args.iter().map(|&a| f(a)).collect();
        match s.instance(f(v)) {
            Some((c2, a2)) if c2 == ctor && a2 == expected => {}
            _ => return false,
        }
    }
    true
}

/// Whether fixing `x` and matching `y` against `ytilde` is an
/// isomorphism of configurations, with resemblance read off `table`.
pub fn iso_extends(
    s: &PatternStructure,
    table: &Leq1Table,
    x: &[ExtOrd],
    y: &[ExtOrd],
    ytilde: &[ExtOrd],
    mode: IsoMode,
) -> Result<bool> {
    check_alignment(s, table)?;
    let xi = resolve_sorted(s, x)?;
    let yi = resolve_sorted(s, y)?;
    let ti = resolve_sorted(s, ytilde)?;
    if yi.len() != ti.len() {
        return Err(ResemblanceError::BadConfig(format!(
            "cannot match {} members against {}",
            yi.len(),
            ti.len()
        )));
    }
    if xi.iter().any(|e| yi.contains(e)) {
        return Err(ResemblanceError::BadConfig("the fixed part meets the moved part".into()));
    }
    Ok(iso_ok(s, &table.rows, &xi, &yi, &ti, mode))
}

/// Searches for an image of `y` below `alpha` completing `x` to an
/// isomorphism; `x` must lie below `alpha`.
pub fn iso_search(
    s: &PatternStructure,
    table: &Leq1Table,
    alpha: &ExtOrd,
    x: &[ExtOrd],
    y: &[ExtOrd],
    mode: IsoMode,
) -> Result<Option<Vec<ExtOrd>>> {
    check_alignment(s, table)?;
    let xi = resolve_sorted(s, x)?;
    let yi = resolve_sorted(s, y)?;
    if let Some(bad) = xi.iter().find(|&&e| s.universe[e] >= *alpha) {
        return Err(ResemblanceError::BadConfig(format!(
            "fixed member {} is not below {alpha}",
            s.universe[*bad]
        )));
    }
    let alpha_idx = match s.index_of(alpha) {
        Some(i) => i,
        None => s.universe.iter().take_while(|u| **u < *alpha).count(),
    };
    Ok(search_image(s, &table.rows, &xi, &yi, alpha_idx, mode)
        .map(|w| w.into_iter().map(|k| s.universe[k].clone()).collect()))
}

fn resolve_sorted(s: &PatternStructure, elems: &[ExtOrd]) -> Result<Vec<usize>> {
    let mut idxs = Vec::with_capacity(elems.len());
    for e in elems {
        idxs.push(s.index_of(e).ok_or_else(|| ResemblanceError::NotInUniverse(e.clone()))?);
    }
    idxs.sort_unstable();
    idxs.dedup();
    if idxs.len() != elems.len() {
        return Err(ResemblanceError::BadConfig("configuration members repeat".into()));
    }
    Ok(idxs)
}

fn check_alignment(s: &PatternStructure, table: &Leq1Table) -> Result<()> {
    if s.universe != table.universe {
        return Err(ResemblanceError::BadConfig(
            "the table was computed over a different universe".into(),
        ));
    }
    Ok(())
}

// -- Σ₁ satisfaction ---------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Operand {
    Var(usize),
    Param(usize),
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::Var(i) => write!(f, "y{i}"),
            Operand::Param(i) => write!(f, "p{i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Le(Operand, Operand),
    Leq1(Operand, Operand),
    Repr { value: Operand, ctor: Ordinal, args: Vec<Operand> },
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Le(a, b) => write!(f, "{a} <= {b}"),
            Atom::Leq1(a, b) => write!(f, "{a} <=1 {b}"),
            Atom::Repr { value, ctor, args } => {
                write!(f, "{value} ~ ({ctor} ;")?;
                for (i, a) in args.iter().enumerate() {
                    write!(f, "{}{a}", if i == 0 { " " } else { ", " })?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Literal {
    pub atom: Atom,
    pub negated: bool,
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "!({})", self.atom)
        } else {
            write!(f, "({})", self.atom)
        }
    }
}

/// An existential prefix over a conjunction of literals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaFormula {
    exists: usize,
    matrix: Vec<Literal>,
}

impl SigmaFormula {
    pub fn new(exists: usize, matrix: Vec<Literal>) -> SigmaFormula {
        SigmaFormula { exists, matrix }
    }

    pub fn exists(&self) -> usize {
        self.exists
    }

    pub fn matrix(&self) -> &[Literal] {
        &self.matrix
    }

    pub fn params_needed(&self) -> usize {
        let operand = |o: &Operand| match o {
            Operand::Param(i) => i + 1,
            Operand::Var(_) => 0,
        };
        self.matrix
            .iter()
            .map(|l| match &l.atom {
                Atom::Le(a, b) | Atom::Leq1(a, b) => operand(a).max(operand(b)),
                Atom::Repr { value, args, .. } => {
                    operand(value).max(args.iter().map(operand).max().unwrap_or(0))
                }
            })
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for SigmaFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.exists {
            write!(f, "E y{i} ")?;
        }
        write!(f, ". ")?;
        if self.matrix.is_empty() {
            return write!(f, "true");
        }
        for (i, l) in self.matrix.iter().enumerate() {
            if i > 0 {
                write!(f, " & ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

const MAX_EXISTS: usize = 4;

/// Satisfaction by exhaustive witness search over the universe.
pub fn sigma1_holds(
    s: &PatternStructure,
    table: &Leq1Table,
    phi: &SigmaFormula,
    params: &[ExtOrd],
) -> Result<bool> {
    check_alignment(s, table)?;
    if phi.exists > MAX_EXISTS {
        return Err(ResemblanceError::BadFormula(format!(
            "{} existentials exceed the search cap of {MAX_EXISTS}",
            phi.exists
        )));
    }
    if params.len() < phi.params_needed() {
        return Err(ResemblanceError::BadFormula(format!(
            "formula references p{} but only {} parameters were supplied",
            phi.params_needed() - 1,
            params.len()
        )));
    }
    let mut param_idx = Vec::with_capacity(params.len());
    for p in params {
        param_idx.push(s.index_of(p).ok_or_else(|| ResemblanceError::NotInUniverse(p.clone()))?);
    }
    for l in &phi.matrix {
        if let Atom::Repr { ctor, args, .. } = &l.atom {
            if !s.dilator.in_trace(args.len(), ctor)? {
                return Err(ResemblanceError::BadFormula(format!(
                    "no constructor {ctor} of arity {}",
                    args.len()
                )));
            }
        }
    }
    let n = s.universe.len();
    if phi.exists > 0 && n == 0 {
        return Ok(false);
    }
    let mut assign = vec![0usize; phi.exists];
    loop {
        if matrix_holds(s, table, phi, &assign, &param_idx) {
            return Ok(true);
        }
        let mut k = 0;
        loop {
            if k == assign.len() {
                return Ok(false);
            }
            assign[k] += 1;
            if assign[k] < n {
                break;
            }
            assign[k] = 0;
            k += 1;
        }
    }
}

fn matrix_holds(
    s: &PatternStructure,
    table: &Leq1Table,
    phi: &SigmaFormula,
    assign: &[usize],
    params: &[usize],
) -> bool {
    let resolve = |o: &Operand| match o {
        Operand::Var(i) => assign[*i],
        Operand::Param(i) => params[*i],
    };
    phi.matrix.iter().all(|l| {
        let value = match &l.atom {
            Atom::Le(a, b) => s.universe[resolve(a)] <= s.universe[resolve(b)],
            Atom::Leq1(a, b) => table.rows[resolve(a)][resolve(b)],
            Atom::Repr { value, ctor, args } => match s.instance(resolve(value)) {
                Some((c, idxs)) => {
                    c == ctor && idxs == args.iter().map(resolve).collect::<Vec<_>>()
                }
                None => false,
            },
        };
        value != l.negated
    })
}

/// A fixed catalog of formulas over the order-and-resemblance core, at
/// most two existentials and one parameter each.
pub fn formula_family() -> Vec<SigmaFormula> {
    use Operand::{Param, Var};
    let lit = |atom, negated| Literal { atom, negated };
    vec![
        // E y . y <= y — some member exists.
        SigmaFormula::new(1, vec![lit(Atom::Le(Var(0), Var(0)), false)]),
        // E y . !(y <= p0) — something above the parameter.
        SigmaFormula::new(1, vec![lit(Atom::Le(Var(0), Param(0)), true)]),
        // E y . p0 <= y & !(y <= p0) — strictly above, positively guarded.
        SigmaFormula::new(
            1,
            vec![lit(Atom::Le(Param(0), Var(0)), false), lit(Atom::Le(Var(0), Param(0)), true)],
        ),
        // E y . y <=1 y — a reflexive resemblance witness.
        SigmaFormula::new(1, vec![lit(Atom::Leq1(Var(0), Var(0)), false)]),
        // E y . !(y <=1 p0) — something that does not resemble into p0.
        SigmaFormula::new(1, vec![lit(Atom::Leq1(Var(0), Param(0)), true)]),
        // E y0 y1 . !(y1 <= y0) & !(y0 <= p0) — two members above the parameter.
        SigmaFormula::new(
            2,
            vec![lit(Atom::Le(Var(1), Var(0)), true), lit(Atom::Le(Var(0), Param(0)), true)],
        ),
        // E y0 y1 . y0 <=1 y1 & !(y1 <= y0) — a strict resemblance pair.
        SigmaFormula::new(
            2,
            vec![lit(Atom::Leq1(Var(0), Var(1)), false), lit(Atom::Le(Var(1), Var(0)), true)],
        ),
        // E y . p0 <= y & y <= p0 — the parameter itself is present.
        SigmaFormula::new(
            1,
            vec![lit(Atom::Le(Param(0), Var(0)), false), lit(Atom::Le(Var(0), Param(0)), false)],
        ),
    ]
}

// -- closures -----------------------------------------------------------------

/// The downward closure under representation arguments that are
/// strictly smaller than the member they describe.
pub fn closure(d: &Dilator, z: &[ExtOrd]) -> Result<Vec<ExtOrd>> {
    let mut done: BTreeSet<ExtOrd> = BTreeSet::new();
    let mut work: Vec<ExtOrd> = z.to_vec();
    while let Some(g) = work.pop() {
        if !done.insert(g.clone()) {
            continue;
        }
        if let Some(r) = element_representation(d, &g)? {
            for a in r.args() {
                if *a < g && !done.contains(a) {
                    work.push(a.clone());
                }
            }
        }
    }
    Ok(done.into_iter().collect())
}

pub fn is_closed(d: &Dilator, z: &[ExtOrd]) -> Result<bool> {
    let set: BTreeSet<ExtOrd> = z.iter().cloned().collect();
    Ok(closure(d, z)?.iter().all(|g| set.contains(g)))
}

// -- the symbolic window order -------------------------------------------------

/// A constructor applied below the symbolic window top: the final
/// argument is left implicit and all listed arguments stay plain.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DDElement {
    ctor: Ordinal,
    args: Vec<Ordinal>,
}

impl DDElement {
    pub fn new(d: &Dilator, ctor: Ordinal, args: Vec<Ordinal>) -> Result<DDElement> {
        if !d.in_trace(args.len() + 1, &ctor)? {
            return Err(ResemblanceError::Term(TermError::NotInTrace {
                ctor,
                arity: args.len() + 1,
            }));
        }
        if args.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ResemblanceError::Term(TermError::ArgsNotSorted));
        }
        Ok(DDElement { ctor, args })
    }

    pub fn ctor(&self) -> &Ordinal {
        &self.ctor
    }

    pub fn args(&self) -> &[Ordinal] {
        &self.args
    }

    /// The least strict upper bound of the listed arguments.
    pub fn plus(&self) -> Ordinal {
        match self.args.last() {
            Some(a) => a.succ(),
            None => Ordinal::zero(),
        }
    }

    /// Reattaches a final argument, producing the term over `delta + 1`.
    pub fn extend(&self, d: &Dilator, delta: &ExtOrd) -> Result<Term> {
        let mut args: Vec<ExtOrd> = self.args.iter().cloned().map(ExtOrd::Plain).collect();
        args.push(delta.clone());
        Ok(Term::new(d, self.ctor.clone(), args, delta.succ())?)
    }

    pub fn parse(input: &str) -> Result<DDElement> {
        let mut p = Parser::new(input);
        p.expect(b'<')?;
        let ctor = p.parse_ord()?;
        p.expect(b';')?;
        let mut args = Vec::new();
        p.skip_ws();
        if p.peek() != Some(b'>') {
            loop {
                args.push(p.parse_ord()?);
                p.skip_ws();
                if !p.eat(b',') {
                    break;
                }
            }
        }
        p.expect(b'>')?;
        p.expect_end()?;
        if args.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ResemblanceError::Term(TermError::ArgsNotSorted));
        }
        Ok(DDElement { ctor, args })
    }
}

impl fmt::Display for DDElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{} ;", self.ctor)?;
        for (i, a) in self.args.iter().enumerate() {
            write!(f, "{}{a}", if i == 0 { " " } else { ", " })?;
        }
        write!(f, ">")
    }
}

impl fmt::Debug for DDElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Order by comparing the terms with the symbolic top reattached.
pub fn dd_compare(d: &Dilator, a: &DDElement, b: &DDElement) -> Result<Ordering> {
    let w = ExtOrd::omega_symbol();
    let ta = a.extend(d, &w)?;
    let tb = b.extend(d, &w)?;
    Ok(crate::term::term_compare(d, &ta, &tb)?)
}

/// All elements with listed arguments below `eta`, sorted by the window
/// order; constructors are drawn from the trace up to `bound`.
pub fn dd_members(d: &Dilator, eta: &Ordinal, bound: usize) -> Result<Vec<DDElement>> {
    let Some(h) = eta.as_nat() else {
        return Err(ResemblanceError::Term(TermError::Unsupported(format!(
            "cannot enumerate window elements below the infinite bound {eta}"
        ))));
    };
    let h = h as usize;
    let mut members = Vec::new();
    for te in d.trace(bound)? {
        if te.arity == 0 {
            continue;
        }
        let n = te.arity - 1;
        if n > h {
            continue;
        }
        for f in increasing_maps(n, h) {
            let args = f.image().iter().map(|&k| Ordinal::nat(k as u64)).collect();
            members.push(DDElement { ctor: te.value.clone(), args });
        }
    }
    let mut failure = None;
    members.sort_by(|a, b| match dd_compare(d, a, b) {
        Ok(o) => o,
        Err(e) => {
            failure.get_or_insert(e);
            Ordering::Equal
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(members),
    }
}

// -- club slices ----------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SliceVerdict {
    In,
    Out,
    Undetermined,
}

impl fmt::Display for SliceVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SliceVerdict::In => "in",
            SliceVerdict::Out => "out",
            SliceVerdict::Undetermined => "undetermined",
        })
    }
}

/// Per member: below the argument bound is out; otherwise the member is
/// in when it resembles into the value of the reattached term, out when
/// it does not, and undetermined when that value cannot be located in
/// the universe.
pub fn club_slice(
    s: &PatternStructure,
    table: &Leq1Table,
    gamma: &DDElement,
) -> Result<Vec<(ExtOrd, SliceVerdict)>> {
    check_alignment(s, table)?;
    let star = ExtOrd::Plain(gamma.plus());
    let mut out = Vec::with_capacity(s.universe.len());
    for (i, delta) in s.universe.iter().enumerate() {
        let verdict = if *delta < star {
            SliceVerdict::Out
        } else {
            let t = gamma.extend(&s.dilator, delta)?;
            match term_value(&s.dilator, &t) {
                Err(TermError::Unsupported(_)) => SliceVerdict::Undetermined,
                Err(e) => return Err(e.into()),
                Ok(v) => match s.index_of(&v) {
                    None => SliceVerdict::Undetermined,
                    Some(j) => {
                        if table.rows[i][j] {
                            SliceVerdict::In
                        } else {
                            SliceVerdict::Out
                        }
                    }
                },
            }
        };
        out.push((delta.clone(), verdict));
    }
    Ok(out)
}

/// Intersection of the club slices indexed by the window elements below
/// `rho` whose arguments stay below `eta`; the empty index set leaves
/// the whole universe in.
pub fn fd_slice(
    s: &PatternStructure,
    table: &Leq1Table,
    rho: &DDElement,
    eta: &Ordinal,
    bound: usize,
) -> Result<Vec<(ExtOrd, SliceVerdict)>> {
    check_alignment(s, table)?;
    let mut verdicts = vec![SliceVerdict::In; s.universe.len()];
    for pi in dd_members(&s.dilator, eta, bound)? {
        if dd_compare(&s.dilator, &pi, rho)? != Ordering::Less {
            continue;
        }
        for (k, (_, v)) in club_slice(s, table, &pi)?.into_iter().enumerate() {
            verdicts[k] = match (verdicts[k], v) {
                (_, SliceVerdict::Out) | (SliceVerdict::Out, _) => SliceVerdict::Out,
                (SliceVerdict::Undetermined, _) | (_, SliceVerdict::Undetermined) => {
                    SliceVerdict::Undetermined
                }
                (SliceVerdict::In, SliceVerdict::In) => SliceVerdict::In,
            };
        }
    }
    Ok(s.universe.iter().cloned().zip(verdicts).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::extension_order_type;

    fn e(n: u64) -> ExtOrd {
        ExtOrd::nat(n)
    }

    fn ords(spec: &[&str]) -> Vec<ExtOrd> {
        spec.iter().map(|s| ExtOrd::parse(s).unwrap()).collect()
    }

    fn diagonal(t: &Leq1Table) -> bool {
        t.verdicts()
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, &v)| v == (i == j)))
    }

    #[test]
    fn construction_sorts_represents_and_flags_exactness() {
        let s = PatternStructure::new(
            Dilator::identity(),
            ords(&["3", "1", "w", "0"]),
        )
        .unwrap();
        assert_eq!(s.universe(), &ords(&["0", "1", "3", "w"])[..]);
        assert!(!s.exact());
        assert!(s.representations().iter().all(|r| r.is_some()));
        // Distinct members never share a representation.
        let mut seen = BTreeSet::new();
        for r in s.representations().iter().flatten() {
            assert!(seen.insert(format!("{r}")));
        }
        assert!(PatternStructure::initial_segment(Dilator::constant(Ordinal::zero()), 4)
            .unwrap()
            .exact());
    }

    #[test]
    fn out_of_range_members_carry_no_representation() {
        let s = PatternStructure::new(Dilator::constant(Ordinal::nat(2)), ords(&["0", "1", "5"]))
            .unwrap();
        assert!(s.representation_of(&e(0)).unwrap().is_some());
        assert!(s.representation_of(&e(5)).unwrap().is_none());
        assert_eq!(
            s.representation_of(&e(7)),
            Err(ResemblanceError::NotInUniverse(e(7)))
        );
    }

    #[test]
    fn tables_on_initial_segments_are_the_equality_relation() {
        for d in [Dilator::constant(Ordinal::zero()), Dilator::identity()] {
            let s = PatternStructure::initial_segment(d, 9).unwrap();
            let t = leq1_table(&s);
            assert!(diagonal(&t));
            // Contained in the order, reflexive, transitive.
            for (i, row) in t.verdicts().iter().enumerate() {
                assert!(row[i]);
                for (j, &v) in row.iter().enumerate() {
                    if v {
                        assert!(t.universe()[i] <= t.universe()[j]);
                    }
                    for (k, &w) in t.verdicts()[j].iter().enumerate() {
                        if v && w {
                            assert!(t.verdicts()[i][k]);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn tables_restrict_consistently_as_the_segment_grows() {
        let small = leq1_table(
            &PatternStructure::initial_segment(Dilator::constant(Ordinal::zero()), 6).unwrap(),
        );
        let large = leq1_table(
            &PatternStructure::initial_segment(Dilator::constant(Ordinal::zero()), 9).unwrap(),
        );
        assert_eq!(large.restrict(&e(6)), small);
    }

    // Exhaustive subset quantification, with images located by brute
    // force — an oracle that shares no code with the table recursion.
    fn brute_force_verdict(s: &PatternStructure, t: &Leq1Table, i: usize, j: usize) -> bool {
        let u = s.universe();
        if u[i] > u[j] {
            return false;
        }
        let xs: Vec<usize> = (0..u.len()).filter(|&k| u[k] < u[i]).collect();
        let ys: Vec<usize> = (0..u.len()).filter(|&k| u[i] <= u[k] && u[k] < u[j]).collect();
        for xm in 0..(1u32 << xs.len()) {
            let x: Vec<ExtOrd> = xs
                .iter()
                .enumerate()
                .filter(|(b, _)| xm & (1 << b) != 0)
                .map(|(_, &k)| u[k].clone())
                .collect();
            for ym in 0..(1u32 << ys.len()) {
                let y: Vec<ExtOrd> = ys
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| ym & (1 << b) != 0)
                    .map(|(_, &k)| u[k].clone())
                    .collect();
                let pool: Vec<ExtOrd> = (0..u.len())
                    .filter(|&k| u[k] < u[i] && !x.contains(&u[k]))
                    .map(|k| u[k].clone())
                    .collect();
                let mut found = false;
                for cm in 0..(1u32 << pool.len()) {
                    let cand: Vec<ExtOrd> = pool
                        .iter()
                        .enumerate()
                        .filter(|(b, _)| cm & (1 << b) != 0)
                        .map(|(_, v)| v.clone())
                        .collect();
                    if cand.len() == y.len()
                        && iso_extends(s, t, &x, &y, &cand, IsoMode::Full).unwrap()
                    {
                        found = true;
                        break;
                    }
                }
                if !found {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn mixed_universes_also_collapse_to_the_diagonal() {
        let s =
            PatternStructure::new(Dilator::identity(), ords(&["0", "1", "2", "w", "w + 1"]))
                .unwrap();
        let t = leq1_table(&s);
        assert!(diagonal(&t));
        assert_eq!(t.holds(&ExtOrd::parse("w").unwrap(), &ExtOrd::parse("w + 1").unwrap()), Some(false));
        for i in 0..s.universe().len() {
            for j in 0..s.universe().len() {
                assert_eq!(
                    t.verdicts()[i][j],
                    brute_force_verdict(&s, &t, i, j),
                    "mismatch at ({i}, {j})"
                );
            }
        }
    }

    #[test]
    fn submaximal_configurations_still_admit_witnesses() {
        let w = ExtOrd::parse("w").unwrap();
        let s = PatternStructure::new(
            Dilator::constant(Ordinal::zero()),
            ords(&["0", "1", "2", "w", "w + 1"]),
        )
        .unwrap();
        let t = leq1_table(&s);
        // With the top finite member left out of the fixed part, the
        // moved member can drop onto it.
        assert!(iso_extends(&s, &t, &[e(0), e(1)], &[w.clone()], &[e(2)], IsoMode::Full).unwrap());
        assert_eq!(
            iso_search(&s, &t, &w, &[e(0), e(1)], &[w.clone()], IsoMode::Full).unwrap(),
            Some(vec![e(2)])
        );
        // Fixing all three finite members leaves no room.
        assert_eq!(
            iso_search(&s, &t, &w, &[e(0), e(1), e(2)], &[w.clone()], IsoMode::Full).unwrap(),
            None
        );
    }

    #[test]
    fn isomorphisms_respect_representation_relations() {
        // 1 carries the instance (0 ; 1) under the constant-gap

        // presentation; sending it to a member with a different instance
        // must fail under full semantics but matters only forwards under
        // the criterion.
        let d = Dilator::sum(Dilator::constant(Ordinal::nat(1)), Dilator::identity());
        let s = PatternStructure::new(d, ords(&["0", "1", "2", "3"])).unwrap();
        let t = leq1_table(&s);
        // 1 ~ (0 ; 0) and 2 ~ (0 ; 1): the pair {0, 1} -> {0, 2} breaks
        // the instance (0 is fixed, 1 moves to 2 whose argument is 1).
        assert!(!iso_extends(&s, &t, &[e(0)], &[e(1)], &[e(2)], IsoMode::Full).unwrap());
        // Without the argument in the configuration nothing is checked.
        assert!(iso_extends(&s, &t, &[], &[e(1)], &[e(2)], IsoMode::Full).unwrap());
    }

    #[test]
    fn the_criterion_table_agrees_on_closed_universes() {
        let id = Dilator::identity();
        let sc = Dilator::sigma(Dilator::constant(Ordinal::nat(1)));
        for d in [id, sc] {
            let ground: Vec<ExtOrd> = (0..10).map(e).collect();
            for mask in 0..(1u32 << ground.len()) {
                let z: Vec<ExtOrd> = ground
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| mask & (1 << b) != 0)
                    .map(|(_, v)| v.clone())
                    .collect();
                let closed = closure(&d, &z).unwrap();
                if closed.len() > 6 || !is_closed(&d, &closed).unwrap() {
                    continue;
                }
                let s = PatternStructure::new(d.clone(), closed).unwrap();
                assert_eq!(leq1_table(&s), leq1_criterion(&s));
            }
        }
    }

    #[test]
    fn closures_add_exactly_the_smaller_arguments() {
        let d = Dilator::sigma(Dilator::constant(Ordinal::nat(1)));
        assert_eq!(closure(&d, &[]).unwrap(), vec![]);
        // 4 names the slot above 2, which names the slot above 1.
        assert_eq!(closure(&d, &[e(4)]).unwrap(), ords(&["0", "1", "2", "4"]));
        assert_eq!(closure(&Dilator::identity(), &[e(7)]).unwrap(), vec![e(7)]);
        let z = ords(&["3", "6"]);
        let once = closure(&d, &z).unwrap();
        assert_eq!(closure(&d, &once).unwrap(), once);
        assert!(is_closed(&d, &once).unwrap());
    }

    #[test]
    fn satisfaction_searches_the_whole_universe() {
        let s = PatternStructure::initial_segment(Dilator::identity(), 5).unwrap();
        let t = leq1_table(&s);
        let family = formula_family();
        // Something exists.
        assert!(sigma1_holds(&s, &t, &family[0], &[]).unwrap());
        // Something above 4 does not.
        assert!(sigma1_holds(&s, &t, &family[1], &[e(2)]).unwrap());
        assert!(!sigma1_holds(&s, &t, &family[1], &[e(4)]).unwrap());
        // No strict resemblance pair anywhere.
        assert!(!sigma1_holds(&s, &t, &family[6], &[]).unwrap());
        // Representation instances are first-class atoms.
        let phi = SigmaFormula::new(
            1,
            vec![Literal {
                atom: Atom::Repr {
                    value: Operand::Var(0),
                    ctor: Ordinal::zero(),
                    args: vec![Operand::Param(0)],
                },
                negated: false,
            }],
        );
        assert!(sigma1_holds(&s, &t, &phi, &[e(3)]).unwrap());
        let empty = PatternStructure::new(Dilator::identity(), []).unwrap();
        let te = leq1_table(&empty);
        assert!(!sigma1_holds(&empty, &te, &family[0], &[]).unwrap());
    }

    #[test]
    fn satisfaction_persists_into_larger_substructures() {
        let s = PatternStructure::initial_segment(Dilator::identity(), 8).unwrap();
        let t = leq1_table(&s);
        for phi in formula_family() {
            for p in 0..4u64 {
                let params = vec![e(p); phi.params_needed()];
                for lo in (p + 1)..7 {
                    let (slo, tlo) = (s.restrict(&e(lo)), t.restrict(&e(lo)));
                    if sigma1_holds(&slo, &tlo, &phi, &params).unwrap() {
                        let (shi, thi) = (s.restrict(&e(lo + 1)), t.restrict(&e(lo + 1)));
                        assert!(
                            sigma1_holds(&shi, &thi, &phi, &params).unwrap(),
                            "{phi} with p0 = {p} lost between {lo} and {}",
                            lo + 1
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn reflection_across_the_family_matches_the_table() {
        let s = PatternStructure::initial_segment(Dilator::constant(Ordinal::zero()), 6).unwrap();
        let t = leq1_table(&s);
        for i in 0..6u64 {
            for j in i..6u64 {
                let (sa, ta) = (s.restrict(&e(i)), t.restrict(&e(i)));
                let (sb, tb) = (s.restrict(&e(j)), t.restrict(&e(j)));
                let mut reflects = true;
                'f: for phi in formula_family() {
                    let choices: Vec<Vec<ExtOrd>> = if phi.params_needed() == 0 {
                        vec![vec![]]
                    } else {
                        (0..i).map(|p| vec![e(p)]).collect()
                    };
                    for params in choices {
                        if sigma1_holds(&sb, &tb, &phi, &params).unwrap()
                            && !sigma1_holds(&sa, &ta, &phi, &params).unwrap()
                        {
                            reflects = false;
                            break 'f;
                        }
                    }
                }
                assert_eq!(t.verdicts()[i as usize][j as usize], reflects, "pair ({i}, {j})");
            }
        }
    }

    #[test]
    fn tables_round_trip_through_tsv_and_render_dot() {
        let s = PatternStructure::new(Dilator::identity(), ords(&["0", "2", "w"])).unwrap();
        let t = leq1_table(&s);
        let tsv = t.tsv();
        assert_eq!(Leq1Table::from_tsv(&tsv).unwrap(), t);
        assert_eq!(Leq1Table::from_tsv(&tsv).unwrap().tsv(), tsv);
        let dot = t.dot();
        assert!(dot.starts_with("digraph leq1 {"));
        assert!(dot.contains("\"w\";"));
        // Diagonal tables draw no edges.
        assert!(!dot.contains("->"));
        assert!(Leq1Table::from_tsv("0\t1\n").is_err());
        assert!(Leq1Table::from_tsv("0\t1\t2\n").is_err());
    }

    #[test]
    fn window_elements_order_like_their_finite_reattachments() {
        for d in [
            Dilator::sigma(Dilator::constant(Ordinal::nat(1))),
            Dilator::sigma(Dilator::identity()),
        ] {
            let members = dd_members(&d, &Ordinal::nat(3), 6).unwrap();
            assert!(!members.is_empty());
            // Oracle: reattach at a common finite bound instead of the
            // symbolic top; the pushforward order is base independent.
            let h = e(3);
            for a in &members {
                for b in &members {
                    let ta = a.extend(&d, &h).unwrap();
                    let tb = b.extend(&d, &h).unwrap();
                    let direct = term_value(&d, &ta)
                        .unwrap()
                        .cmp(&term_value(&d, &tb).unwrap());
                    assert_eq!(dd_compare(&d, a, b).unwrap(), direct, "{a} vs {b}");
                }
            }
            for pair in members.windows(2) {
                assert_eq!(dd_compare(&d, &pair[0], &pair[1]).unwrap(), Ordering::Less);
            }
        }
    }

    #[test]
    fn window_membership_tracks_arguments_and_trace() {
        let d = Dilator::sigma(Dilator::identity());
        let el = DDElement::new(&d, Ordinal::nat(2), vec![Ordinal::nat(7)]).unwrap();
        assert_eq!(el.plus(), Ordinal::nat(8));
        assert!(dd_members(&d, &Ordinal::nat(8), 12).unwrap().contains(&el));
        assert!(!dd_members(&d, &Ordinal::nat(7), 12).unwrap().contains(&el));
        assert!(DDElement::new(&d, Ordinal::nat(1), vec![]).is_err());
        let rendered = format!("{el}");
        assert_eq!(rendered, "<2 ; 7>");
        assert_eq!(DDElement::parse(&rendered).unwrap(), el);
        assert_eq!(format!("{}", DDElement::new(&d, Ordinal::zero(), vec![]).unwrap()), "<0 ;>");
    }

    #[test]
    fn club_slices_pick_out_the_fixed_points() {
        // The identity presentation fixes every member, so the slice at
        // a plain image is the whole universe.
        let s = PatternStructure::initial_segment(Dilator::identity(), 7).unwrap();
        let t = leq1_table(&s);
        let marker = DDElement::new(&Dilator::identity(), Ordinal::zero(), vec![]).unwrap();
        let slice = club_slice(&s, &t, &marker).unwrap();
        assert!(slice.iter().all(|(_, v)| *v == SliceVerdict::In));

        // A constant gap has no finite fixed point but is fixed at w.
        let d = Dilator::sum(Dilator::constant(Ordinal::nat(1)), Dilator::identity());
        let s = PatternStructure::new(d.clone(), ords(&["0", "1", "2", "3", "w"])).unwrap();
        let t = leq1_table(&s);
        let marker = DDElement::new(&d, Ordinal::nat(1), vec![]).unwrap();
        let slice: BTreeMap<ExtOrd, SliceVerdict> =
            club_slice(&s, &t, &marker).unwrap().into_iter().collect();
        assert_eq!(slice[&e(0)], SliceVerdict::Out);
        assert_eq!(slice[&e(2)], SliceVerdict::Out);
        // 3 + 1 = 4 falls outside the universe.
        assert_eq!(slice[&e(3)], SliceVerdict::Undetermined);
        assert_eq!(slice[&ExtOrd::parse("w").unwrap()], SliceVerdict::In);

        // Membership entails the fixed-point reading wherever checkable.
        for (delta, v) in &slice {
            if *v == SliceVerdict::In {
                assert_eq!(extension_order_type(&d, delta).unwrap(), *delta);
            }
        }
    }

    #[test]
    fn slices_filter_strictly_below_the_argument_bound() {
        let d = Dilator::sigma(Dilator::identity());
        let s = PatternStructure::initial_segment(d.clone(), 8).unwrap();
        let t = leq1_table(&s);
        let el = DDElement::new(&d, Ordinal::nat(2), vec![Ordinal::nat(2)]).unwrap();
        let slice = club_slice(&s, &t, &el).unwrap();
        for (delta, v) in slice {
            if delta < e(3) {
                assert_eq!(v, SliceVerdict::Out);
            }
        }
    }

    #[test]
    fn intersections_match_their_direct_recomputation() {
        let d = Dilator::sigma(Dilator::identity());
        let s = PatternStructure::initial_segment(d.clone(), 11).unwrap();
        let t = leq1_table(&s);
        let rho = DDElement::new(&d, Ordinal::nat(2), vec![Ordinal::nat(3)]).unwrap();
        let eta = Ordinal::nat(2);
        let combined = fd_slice(&s, &t, &rho, &eta, 8).unwrap();
        // Direct recomputation over the same index set.
        let mut expect = vec![SliceVerdict::In; s.universe().len()];
        for pi in dd_members(&d, &eta, 8).unwrap() {
            if dd_compare(&d, &pi, &rho).unwrap() != Ordering::Less {
                continue;
            }
            for (k, (_, v)) in club_slice(&s, &t, &pi).unwrap().into_iter().enumerate() {
                expect[k] = match (expect[k], v) {
                    (_, SliceVerdict::Out) | (SliceVerdict::Out, _) => SliceVerdict::Out,
                    (SliceVerdict::Undetermined, _) | (_, SliceVerdict::Undetermined) => {
                        SliceVerdict::Undetermined
                    }
                    _ => SliceVerdict::In,
                };
            }
        }
        assert_eq!(combined.iter().map(|(_, v)| *v).collect::<Vec<_>>(), expect);

        // Antitone: growing the argument bound only removes members.
        let wider = fd_slice(&s, &t, &rho, &Ordinal::nat(3), 8).unwrap();
        for (narrow, wide) in combined.iter().zip(&wider) {
            if wide.1 == SliceVerdict::In {
                assert_eq!(narrow.1, SliceVerdict::In);
            }
            if narrow.1 == SliceVerdict::Out {
                assert_eq!(wide.1, SliceVerdict::Out);
            }
        }

        // The empty index set keeps everything.
        let nothing = DDElement::new(&d, Ordinal::zero(), vec![]).unwrap();
        assert!(fd_slice(&s, &t, &nothing, &eta, 8)
            .unwrap()
            .iter()
            .all(|(_, v)| *v == SliceVerdict::In));
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn tables_are_reflexive_transitive_suborders(
            pick in proptest::collection::btree_set(0u64..12, 1..=7),
            with_omega in any::<bool>(),
        ) {
            // Sigma presentations cannot evaluate at infinite members, so
            // the omega variant runs on a summed presentation instead.
            let (d, mut universe): (Dilator, Vec<ExtOrd>) = if with_omega {
                (
                    Dilator::sum(Dilator::constant(Ordinal::nat(1)), Dilator::identity()),
                    pick.iter().map(|&k| ExtOrd::nat(k)).collect(),
                )
            } else {
                (
                    Dilator::sigma(Dilator::constant(Ordinal::nat(1))),
                    pick.iter().map(|&k| ExtOrd::nat(k)).collect(),
                )
            };
            if with_omega {
                universe.push(ExtOrd::parse("w").unwrap());
            }
            let s = PatternStructure::new(d, universe).unwrap();
            let t = leq1_table(&s);
            let n = s.universe().len();
            for i in 0..n {
                prop_assert!(t.verdicts()[i][i]);
                for j in 0..n {
                    if t.verdicts()[i][j] {
                        prop_assert!(s.universe()[i] <= s.universe()[j]);
                    }
                    for k in 0..n {
                        if t.verdicts()[i][j] && t.verdicts()[j][k] {
                            prop_assert!(t.verdicts()[i][k]);
                        }
                    }
                }
            }
        }

        #[test]
        fn restricting_structure_or_table_commutes(n in 1u64..10, cut in 0u64..10) {
            let d = Dilator::sum(Dilator::constant(Ordinal::nat(1)), Dilator::identity());
            let s = PatternStructure::initial_segment(d, n).unwrap();
            let t = leq1_table(&s);
            let bound = ExtOrd::nat(cut.min(n));
            prop_assert_eq!(t.restrict(&bound), leq1_table(&s.restrict(&bound)));
        }

        #[test]
        fn closures_are_extensive_and_idempotent(
            pick in proptest::collection::btree_set(0u64..10, 0..=4),
        ) {
            let d = Dilator::sigma(Dilator::identity());
            let z: Vec<ExtOrd> = pick.iter().map(|&k| ExtOrd::nat(k)).collect();
            let once = closure(&d, &z).unwrap();
            for g in &z {
                prop_assert!(once.contains(g));
            }
            prop_assert!(is_closed(&d, &once).unwrap());
            prop_assert_eq!(closure(&d, &once).unwrap(), once);
        }
    }

    #[test]
    fn resemblance_membership_reads_as_a_fixed_point_test() {
        // Whenever the image of a member lands inside the universe, the
        // verdict says exactly whether the presentation fixes it.
        for d in [
            Dilator::identity(),
            Dilator::sum(Dilator::constant(Ordinal::nat(1)), Dilator::identity()),
            Dilator::sigma(Dilator::constant(Ordinal::nat(1))),
        ] {
            let s = PatternStructure::initial_segment(d.clone(), 9).unwrap();
            let t = leq1_table(&s);
            for delta in s.universe() {
                let image = extension_order_type(&d, delta).unwrap();
                if let Some(verdict) = t.holds(delta, &image) {
                    assert_eq!(verdict, image == *delta, "{d} at {delta}");
                }
            }
        }
    }
}
