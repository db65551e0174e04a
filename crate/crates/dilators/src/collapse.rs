//! Collapse tables: partial maps from the terms of an extension into
//! the ordinals below its base.  A table is built either from the
//! closed form available at a fixed point of the presentation, or by
//! scanning candidates against a resemblance oracle; validation checks
//! the order and support conditions that a genuine collapse satisfies.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::dilator::Dilator;
use crate::ordinal::{ExtOrd, ParseError};
use crate::resemblance::{Leq1Table, PatternStructure, ResemblanceError};
use crate::sigma::{star, substitute_last, xi_embed};
use crate::term::{extension_order_type, term_compare, term_value, value_term, Term, TermError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CollapseError {
    #[error("{base} is not fixed: the extension there has order type {image}")]
    NotFixedPoint { base: ExtOrd, image: ExtOrd },
    #[error("term {term} lives over base {found}, expected {expected}")]
    BaseMismatch { term: String, expected: ExtOrd, found: ExtOrd },
    #[error("collapse value {theta} does not lie below the base {alpha}")]
    ThetaOutOfRange { theta: ExtOrd, alpha: ExtOrd },
    #[error("the table does not cover whether {delta} resembles into {value}")]
    OutsideTable { delta: ExtOrd, value: ExtOrd },
    #[error("bad collapse table: {0}")]
    BadTable(String),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Resemblance(#[from] ResemblanceError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T> = std::result::Result<T, CollapseError>;

// -- oracles -------------------------------------------------------------------

/// Answers whether a candidate resembles into the value of a term of
/// the sigma extension.  `Table` consults a precomputed resemblance
/// table and refuses to guess outside it; the fixtures exist to
/// exercise table construction with prescribed answer patterns.
pub enum ResemblanceOracle<'a> {
    Table { structure: &'a PatternStructure, table: &'a Leq1Table },
    /// Affirms exactly the least admissible candidate of each term.
    StarFixture,
    /// Affirms every candidate.
    Always,
}

impl ResemblanceOracle<'_> {
    /// Whether `delta` resembles into the value of `t`, a term of the
    /// sigma extension whose final argument is `delta` itself.
    pub fn holds(&self, sigma_d: &Dilator, delta: &ExtOrd, t: &Term) -> Result<bool> {
        match self {
            ResemblanceOracle::Table { structure, table } => {
                if structure.dilator() != sigma_d {
                    return Err(CollapseError::BadTable(
                        "the oracle's structure uses a different presentation".into(),
                    ));
                }
                // The value is base independent, and over `delta + 1`
                // it is a finite pushforward for any presentation.
                let grounded = t.with_base(sigma_d, delta.succ())?;
                let value = term_value(sigma_d, &grounded)?;
                table
                    .holds(delta, &value)
                    .ok_or(CollapseError::OutsideTable { delta: delta.clone(), value })
            }
            ResemblanceOracle::StarFixture => Ok(star(t)? == *delta),
            ResemblanceOracle::Always => Ok(true),
        }
    }
}

// -- tables --------------------------------------------------------------------

/// An ordered list of `(term, collapse value)` entries over a common
/// base; `None` records that the whole candidate range was scanned
/// without finding a witness.
#[derive(Clone, PartialEq, Eq)]
pub struct CollapseTable {
    dilator: Dilator,
    alpha: ExtOrd,
    entries: Vec<(Term, Option<ExtOrd>)>,
}

impl CollapseTable {
    pub fn new(
        dilator: Dilator,
        alpha: ExtOrd,
        entries: Vec<(Term, Option<ExtOrd>)>,
    ) -> Result<CollapseTable> {
        for (t, theta) in &entries {
            if t.base() != &alpha {
                return Err(CollapseError::BaseMismatch {
                    term: t.to_string(),
                    expected: alpha.clone(),
                    found: t.base().clone(),
                });
            }
            if let Some(theta) = theta {
                if *theta >= alpha {
                    return Err(CollapseError::ThetaOutOfRange {
                        theta: theta.clone(),
                        alpha: alpha.clone(),
                    });
                }
            }
        }
        let mut entries = entries;
        let mut failure = None;
        entries.sort_by(|(a, _), (b, _)| match term_compare(&dilator, a, b) {
            Ok(o) => o,
            Err(e) => {
                failure.get_or_insert(e);
                Ordering::Equal
            }
        });
        if let Some(e) = failure {
            return Err(e.into());
        }
        if let Some(w) = entries.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(CollapseError::BadTable(format!("duplicate entry for {}", w[0].0)));
        }
        Ok(CollapseTable { dilator, alpha, entries })
    }

    pub fn dilator(&self) -> &Dilator {
        &self.dilator
    }

    pub fn alpha(&self) -> &ExtOrd {
        &self.alpha
    }

    pub fn entries(&self) -> &[(Term, Option<ExtOrd>)] {
        &self.entries
    }

    pub fn theta_of(&self, t: &Term) -> Option<&Option<ExtOrd>> {
        self.entries.iter().find(|(s, _)| s == t).map(|(_, th)| th)
    }

    /// One line `term TAB value` per entry, `-` for undecided entries.
    pub fn tsv(&self) -> String {
        let mut out = String::new();
        for (t, theta) in &self.entries {
            match theta {
                Some(v) => out.push_str(&format!("{t}\t{v}\n")),
                None => out.push_str(&format!("{t}\t-\n")),
            }
        }
        out
    }

    pub fn from_tsv(d: &Dilator, alpha: &ExtOrd, text: &str) -> Result<CollapseTable> {
        let mut entries = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 2 {
                return Err(CollapseError::BadTable(format!(
                    "line {}: expected two tab-separated fields",
                    lineno + 1
                )));
            }
            let term = Term::parse(d, fields[0])?;
            let theta = match fields[1] {
                "-" => None,
                v => Some(ExtOrd::parse(v)?),
            };
            entries.push((term, theta));
        }
        CollapseTable::new(d.clone(), alpha.clone(), entries)
    }
}

impl fmt::Debug for CollapseTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CollapseTable over base {}:", self.alpha)?;
        f.write_str(&self.tsv())
    }
}

// -- construction ----------------------------------------------------------------

/// The terms denoting the values `0, 1, …` of the extension over
/// `alpha`, stopping early when the extension runs out.
pub fn initial_terms(d: &Dilator, alpha: &ExtOrd, count: u64) -> Result<Vec<Term>> {
    let mut terms = Vec::new();
    for v in 0..count {
        match value_term(d, &ExtOrd::nat(v), alpha) {
            Ok(t) => terms.push(t),
            Err(TermError::ValueOutOfRange { .. }) => break,
            Err(e) => return Err(e.into()),
        }
    }
    Ok(terms)
}

/// The collapse available in closed form when the presentation fixes
/// `lambda`: each term goes to the image of the successor of its value.
pub fn normal_collapse(d: &Dilator, lambda: &ExtOrd, count: u64) -> Result<CollapseTable> {
    let image = extension_order_type(d, lambda)?;
    if image != *lambda {
        return Err(CollapseError::NotFixedPoint { base: lambda.clone(), image });
    }
    let mut entries = Vec::new();
    for term in initial_terms(d, lambda, count)? {
        let value = term_value(d, &term)?;
        let theta = extension_order_type(d, &value.succ())?;
        if theta >= *lambda {
            return Err(CollapseError::ThetaOutOfRange {
                theta,
                alpha: lambda.clone(),
            });
        }
        entries.push((term, Some(theta)));
    }
    CollapseTable::new(d.clone(), lambda.clone(), entries)
}

/// Builds a table by scanning `range` in ascending order: the entry of
/// each term is the least candidate at or above the term's star that
/// the oracle affirms, and `None` when the range is exhausted.
pub fn build_collapse(
    d: &Dilator,
    alpha: &ExtOrd,
    gammas: &[Term],
    oracle: &ResemblanceOracle,
    range: &[ExtOrd],
) -> Result<CollapseTable> {
    let sigma_d = Dilator::sigma(d.clone());
    let mut deltas: Vec<ExtOrd> = range.to_vec();
    deltas.sort();
    deltas.dedup();
    if let Some(bad) = deltas.iter().find(|&x| *x >= *alpha) {
        return Err(CollapseError::ThetaOutOfRange {
            theta: bad.clone(),
            alpha: alpha.clone(),
        });
    }
    let mut entries = Vec::with_capacity(gammas.len());
    for g in gammas {
        if g.base() != alpha {
            return Err(CollapseError::BaseMismatch {
                term: g.to_string(),
                expected: alpha.clone(),
                found: g.base().clone(),
            });
        }
        let embedded = xi_embed(d, g)?;
        let st = star(&embedded)?;
        let mut found = None;
        for delta in &deltas {
            if *delta < st {
                continue;
            }
            let candidate = substitute_last(&sigma_d, &embedded, delta)?;
            if oracle.holds(&sigma_d, delta, &candidate)? {
                found = Some(delta.clone());
                break;
            }
        }
        entries.push((g.clone(), found));
    }
    CollapseTable::new(d.clone(), alpha.clone(), entries)
}

// -- validation ------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct CollapseViolation {
    /// Which condition failed: `"order"` or `"support"`.
    pub condition: &'static str,
    pub terms: Vec<Term>,
    pub detail: String,
}

impl fmt::Display for CollapseViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violation: {}", self.condition, self.detail)
    }
}

#[derive(Debug, Serialize)]
pub struct CollapseReport {
    pub entries: usize,
    pub decided: usize,
    pub violations: Vec<CollapseViolation>,
}

impl CollapseReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for CollapseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} entries, {} decided: ", self.entries, self.decided)?;
        if self.is_valid() {
            write!(f, "valid")
        } else {
            write!(f, "{} violations", self.violations.len())?;
            for v in &self.violations {
                write!(f, "\n  {v}")?;
            }
            Ok(())
        }
    }
}

fn support_below(t: &Term, bound: &ExtOrd) -> bool {
    t.args().iter().all(|a| a < bound)
}

/// Checks the two conditions a collapse must satisfy on its decided
/// entries: values dominate the supports of their terms, and the map is
/// order preserving wherever the smaller term's support already lies
/// below the larger term's value.
pub fn validate_collapse(table: &CollapseTable) -> Result<CollapseReport> {
    let mut violations = Vec::new();
    let decided: Vec<(&Term, &ExtOrd)> = table
        .entries
        .iter()
        .filter_map(|(t, th)| th.as_ref().map(|v| (t, v)))
        .collect();
    for (t, theta) in &decided {
        if !support_below(t, theta) {
            violations.push(CollapseViolation {
                condition: "support",
                terms: vec![(*t).clone()],
                detail: format!("the support of {t} does not lie below its value {theta}"),
            });
        }
    }
    for (i, (g, tg)) in decided.iter().enumerate() {
        for (h, th) in &decided[i + 1..] {
            // Entries are sorted, so `g` precedes `h` in the term order.
            if support_below(g, th) && tg >= th {
                violations.push(CollapseViolation {
                    condition: "order",
                    terms: vec![(*g).clone(), (*h).clone()],
                    detail: format!(
                        "{g} precedes {h} with support below {th}, but {tg} does not precede {th}"
                    ),
                });
            }
        }
    }
    Ok(CollapseReport { entries: table.entries.len(), decided: decided.len(), violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordinal::Ordinal;

    fn w() -> ExtOrd {
        ExtOrd::parse("w").unwrap()
    }

    fn e(n: u64) -> ExtOrd {
        ExtOrd::nat(n)
    }

    #[test]
    fn closed_form_collapse_at_a_fixed_point_validates() {
        let table = normal_collapse(&Dilator::identity(), &w(), 11).unwrap();
        assert_eq!(table.entries().len(), 11);
        for (k, (t, theta)) in table.entries().iter().enumerate() {
            assert_eq!(term_value(table.dilator(), t).unwrap(), e(k as u64));
            assert_eq!(theta.as_ref(), Some(&e(k as u64 + 1)));
        }
        let report = validate_collapse(&table).unwrap();
        assert!(report.is_valid(), "{report}");

        // A unit gap also fixes w; its collapse shifts by the gap.
        let d = Dilator::sum(Dilator::constant(Ordinal::nat(1)), Dilator::identity());
        let table = normal_collapse(&d, &w(), 6).unwrap();
        for (v, (_, theta)) in table.entries().iter().enumerate() {
            assert_eq!(theta.as_ref(), Some(&e(v as u64 + 2)));
        }
        assert!(validate_collapse(&table).unwrap().is_valid());

        // No finite base is fixed by the gap.
        assert_eq!(
            normal_collapse(&d, &e(5), 3).unwrap_err(),
            CollapseError::NotFixedPoint { base: e(5), image: e(6) }
        );
    }

    #[test]
    fn zeroed_tables_fail_the_support_condition_everywhere() {
        let good = normal_collapse(&Dilator::identity(), &w(), 8).unwrap();
        let zeroed = CollapseTable::new(
            good.dilator().clone(),
            good.alpha().clone(),
            good.entries().iter().map(|(t, _)| (t.clone(), Some(e(0)))).collect(),
        )
        .unwrap();
        let report = validate_collapse(&zeroed).unwrap();
        assert!(!report.is_valid());
        assert_eq!(report.violations.len(), 8);
        assert!(report.violations.iter().all(|v| v.condition == "support"));
    }

    #[test]
    fn swapped_values_fail_the_order_condition() {
        let good = normal_collapse(&Dilator::identity(), &w(), 8).unwrap();
        let mut entries: Vec<(Term, Option<ExtOrd>)> = good.entries().to_vec();
        let (t2, t3) = (entries[2].1.clone(), entries[3].1.clone());
        entries[2].1 = t3;
        entries[3].1 = t2;
        let swapped =
            CollapseTable::new(good.dilator().clone(), good.alpha().clone(), entries).unwrap();
        let report = validate_collapse(&swapped).unwrap();
        assert!(report.violations.iter().any(|v| v.condition == "order"
            && v.terms == vec![good.entries()[2].0.clone(), good.entries()[3].0.clone()]));
    }

    #[test]
    fn fixture_builds_choose_least_admissible_candidates() {
        let d = Dilator::identity();
        let gammas = initial_terms(&d, &w(), 6).unwrap();
        let range: Vec<ExtOrd> = (0..9).map(e).collect();
        let by_star =
            build_collapse(&d, &w(), &gammas, &ResemblanceOracle::StarFixture, &range).unwrap();
        let by_always =
            build_collapse(&d, &w(), &gammas, &ResemblanceOracle::Always, &range).unwrap();
        assert_eq!(by_star, by_always);
        let sigma_d = Dilator::sigma(d.clone());
        for (g, theta) in by_star.entries() {
            let theta = theta.as_ref().expect("range covers every star");
            let embedded = xi_embed(&d, g).unwrap();
            let st = star(&embedded).unwrap();
            // The support sits below the star, which the value attains.
            assert!(g.args().iter().all(|a| *a < st));
            assert_eq!(*theta, st);
            // Minimality: every earlier candidate is refused.
            for delta in &range {
                if *delta >= st && delta < theta {
                    let cand = substitute_last(&sigma_d, &embedded, delta).unwrap();
                    assert!(!ResemblanceOracle::StarFixture
                        .holds(&sigma_d, delta, &cand)
                        .unwrap());
                }
            }
        }

        // Multi-argument terms carry their whole support into the star.
        let d = Dilator::sigma(Dilator::identity());
        let g = Term::new(&d, Ordinal::nat(2), vec![e(1), e(3)], w()).unwrap();
        let built = build_collapse(
            &d,
            &w(),
            &[g.clone()],
            &ResemblanceOracle::StarFixture,
            &range,
        )
        .unwrap();
        assert_eq!(built.theta_of(&g), Some(&Some(e(4))));
    }

    #[test]
    fn table_oracles_never_answer_beyond_their_table() {
        let d = Dilator::identity();
        let sigma_d = Dilator::sigma(d.clone());
        let s = PatternStructure::initial_segment(sigma_d.clone(), 13).unwrap();
        let t = crate::resemblance::leq1_table(&s);
        let oracle = ResemblanceOracle::Table { structure: &s, table: &t };
        let gamma = value_term(&d, &e(0), &w()).unwrap();
        // Values stay inside the table for candidates up to 4, and none
        // of them is affirmed: an honest no-witness-in-range entry.
        let built = build_collapse(
            &d,
            &w(),
            &[gamma.clone()],
            &oracle,
            &(1..=4).map(e).collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(built.theta_of(&gamma), Some(&None));
        // One candidate further the value escapes the table.
        let err = build_collapse(
            &d,
            &w(),
            &[gamma],
            &oracle,
            &(1..=5).map(e).collect::<Vec<_>>(),
        )
        .unwrap_err();
        assert_eq!(err, CollapseError::OutsideTable { delta: e(5), value: e(16) });
    }

    #[test]
    fn tables_round_trip_through_their_text_form() {
        let d = Dilator::identity();
        let mut table = normal_collapse(&d, &w(), 4).unwrap();
        // Mark one entry undecided to cover both line forms.
        let mut entries = table.entries().to_vec();
        entries[2].1 = None;
        table = CollapseTable::new(d.clone(), w(), entries).unwrap();
        let text = table.tsv();
        assert!(text.contains("\t-\n"));
        let back = CollapseTable::from_tsv(&d, &w(), &text).unwrap();
        assert_eq!(back, table);
        assert_eq!(back.tsv(), text);
        // Undecided entries make no claim, so the table stays valid.
        assert!(validate_collapse(&back).unwrap().is_valid());

        assert!(matches!(
            CollapseTable::from_tsv(&d, &w(), "(0 ; 1 ; w)\n"),
            Err(CollapseError::BadTable(_))
        ));
        assert!(matches!(
            CollapseTable::from_tsv(&d, &w(), "(0 ; 1 ; w)\tw + 1\n"),
            Err(CollapseError::ThetaOutOfRange { .. })
        ));
        assert!(matches!(
            CollapseTable::from_tsv(&d, &e(5), "(0 ; 1 ; w)\t2\n"),
            Err(CollapseError::BaseMismatch { .. })
        ));
        assert!(matches!(
            CollapseTable::from_tsv(&d, &w(), "(0 ; 1 ; w)\t2\n(0 ; 1 ; w)\t3\n"),
            Err(CollapseError::BadTable(_))
        ));
    }

    #[test]
    fn entries_sort_by_the_term_order() {
        let d = Dilator::identity();
        let t = |k: u64| value_term(&d, &e(k), &w()).unwrap();
        let table = CollapseTable::new(
            d.clone(),
            w(),
            vec![(t(5), Some(e(6))), (t(1), Some(e(2))), (t(3), None)],
        )
        .unwrap();
        let order: Vec<ExtOrd> =
            table.entries().iter().map(|(t, _)| term_value(&d, t).unwrap()).collect();
        assert_eq!(order, vec![e(1), e(3), e(5)]);
    }
}
