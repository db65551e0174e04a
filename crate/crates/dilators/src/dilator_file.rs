//! On-disk dilator presentations.
//!
//! Two kinds of file: explicit tables (fibers, coface actions, supports
//! and optional normality thresholds, all as JSON arrays) and combinator
//! expressions.  Saving is deterministic — field order is fixed and the
//! writer always emits the same bytes for the same presentation — so
//! save/load/save round-trips are bit-identical.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dilator::{Dilator, DilatorError, Table};
use crate::ordinal::{Ordinal, ParseError};

#[derive(Debug, Error)]
pub enum FileError {
    #[error("cannot read or write the file: {0}")]
    Io(#[from] std::io::Error),
    #[error("not a valid presentation file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad ordinal notation in file: {0}")]
    Ordinal(#[from] ParseError),
    #[error("presentation fails shape checks: {0}")]
    Shape(#[from] DilatorError),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum FileForm {
    Table {
        values: Vec<u64>,
        cofaces: Vec<Vec<Vec<u64>>>,
        supports: Vec<Vec<Vec<usize>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mu: Option<Vec<Vec<u64>>>,
    },
    Combinator { expr: Expr },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
enum Expr {
    Const { value: String },
    Identity,
    Sum { args: Vec<Expr> },
    Sigma { arg: Box<Expr> },
}

fn to_expr(d: &Dilator) -> Option<Expr> {
    Some(match d {
        Dilator::Table(_) => return None,
        Dilator::Const(nu) => Expr::Const { value: nu.to_string() },
        Dilator::Identity => Expr::Identity,
        Dilator::Sum(a, b) => Expr::Sum { args: vec![to_expr(a)?, to_expr(b)?] },
        Dilator::SigmaOf(d) => Expr::Sigma { arg: Box::new(to_expr(d)?) },
    })
}

fn from_expr(e: &Expr) -> Result<Dilator, FileError> {
    Ok(match e {
        Expr::Const { value } => Dilator::Const(Ordinal::parse(value)?),
        Expr::Identity => Dilator::Identity,
        Expr::Sum { args } => {
            if args.len() < 2 {
                return Err(DilatorError::BadShape(
                    "sum needs at least two summands".into(),
                )
                .into());
            }
            let mut parts: Vec<Dilator> =
                args.iter().map(from_expr).collect::<Result<_, _>>()?;
            let mut acc = parts.pop().expect("len >= 2");
            while let Some(prev) = parts.pop() {
                acc = Dilator::sum(prev, acc);
            }
            acc
        }
        Expr::Sigma { arg } => Dilator::sigma(from_expr(arg)?),
    })
}

fn to_form(d: &Dilator) -> FileForm {
    match to_expr(d) {
        Some(expr) => FileForm::Combinator { expr },
        None => {
            let Dilator::Table(t) = d else {
                unreachable!("only tables lack a combinator expression")
            };
            FileForm::Table {
                values: t.values().to_vec(),
                cofaces: (0..t.bound())
                    .map(|n| {
                        (0..=n).map(|i| t.coface_images(n, i).to_vec()).collect()
                    })
                    .collect(),
                supports: (0..=t.bound())
                    .map(|n| {
                        t.support_entries(n)
                            .iter()
                            .map(|s| s.iter().copied().collect())
                            .collect()
                    })
                    .collect(),
                mu: t.mu_entries().cloned(),
            }
        }
    }
}

fn from_form(form: FileForm) -> Result<Dilator, FileError> {
    match form {
        FileForm::Combinator { expr } => from_expr(&expr),
        FileForm::Table { values, cofaces, supports, mu } => {
            let supports = supports
                .into_iter()
                .map(|block| block.into_iter().map(|s| s.into_iter().collect()).collect())
                .collect();
            Ok(Dilator::Table(Table::new(values, cofaces, supports, mu)?))
        }
    }
}

pub fn to_json(d: &Dilator) -> String {
    let mut s = serde_json::to_string_pretty(&to_form(d)).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<Dilator, FileError> {
    from_form(serde_json::from_str(text)?)
}

pub fn save(d: &Dilator, path: &Path) -> Result<(), FileError> {
    fs::write(path, to_json(d))?;
    Ok(())
}

pub fn load(path: &Path) -> Result<Dilator, FileError> {
    from_json(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinator_files_round_trip_bit_exactly() {
        let d = Dilator::sigma(Dilator::sum(
            Dilator::constant(Ordinal::parse("w^2 + 3").unwrap()),
            Dilator::identity(),
        ));
        let text = to_json(&d);
        let back = from_json(&text).unwrap();
        assert_eq!(back, d);
        assert_eq!(to_json(&back), text);
    }

    #[test]
    fn table_files_round_trip_bit_exactly() {
        let d = Dilator::sigma(Dilator::identity()).to_table(4).unwrap();
        let d = Dilator::Table(d);
        let text = to_json(&d);
        let back = from_json(&text).unwrap();
        assert_eq!(back, d);
        assert_eq!(to_json(&back), text);
    }

    #[test]
    fn sums_may_be_written_with_many_summands() {
        let text = r#"{
            "kind": "combinator",
            "expr": {"op": "sum", "args": [
                {"op": "const", "value": "1"},
                {"op": "identity"},
                {"op": "const", "value": "w"}
            ]}
        }"#;
        let d = from_json(text).unwrap();
        assert_eq!(
            d,
            Dilator::sum(
                Dilator::constant(Ordinal::nat(1)),
                Dilator::sum(Dilator::identity(), Dilator::constant(Ordinal::omega())),
            )
        );
    }

    #[test]
    fn malformed_files_are_diagnosed() {
        assert!(matches!(from_json("{"), Err(FileError::Json(_))));
        let bad_ord = r#"{"kind":"combinator","expr":{"op":"const","value":"w^0"}}"#;
        assert!(matches!(from_json(bad_ord), Err(FileError::Ordinal(_))));
        let bad_shape = r#"{"kind":"table","values":[1,1],"cofaces":[],"supports":[[[]],[[]]]}"#;
        assert!(matches!(from_json(bad_shape), Err(FileError::Shape(_))));
        let unary_sum =
            r#"{"kind":"combinator","expr":{"op":"sum","args":[{"op":"identity"}]}}"#;
        assert!(matches!(from_json(unary_sum), Err(FileError::Shape(_))));
    }

    #[test]
    fn files_persist_through_the_filesystem() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sigma_id.json");
        let d = Dilator::sigma(Dilator::identity());
        save(&d, &path).unwrap();
        assert_eq!(load(&path).unwrap(), d);
    }
}
