//! The `dilators` binary: every library capability as a subcommand,
//! with stable text output and exit codes suited to scripting.
//!
//! Exit codes: 0 on success, 1 when a check found a violation (the
//! output then contains a `COUNTEREXAMPLE` line holding JSON), 2 on
//! usage errors, 3 on internal failures.

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::collapse::{
    build_collapse, initial_terms, validate_collapse, CollapseTable, ResemblanceOracle,
};
use crate::dilator::{validate_normality, validate_predilator, Dilator, ValidateOptions};
use crate::dilator_file;
use crate::ordinal::ExtOrd;
use crate::resemblance::{
    club_slice, fd_slice, leq1_criterion, leq1_table, DDElement, PatternStructure,
};
use crate::sigma::check_fund_basic;
use crate::term::{represent, represent_value, term_compare, Term};

#[derive(Debug)]
enum CliError {
    Usage(String),
    Internal(String),
}

fn usage<E: fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn internal<E: fmt::Display>(e: E) -> CliError {
    CliError::Internal(e.to_string())
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(name = "dilators", version, about = "Coded dilators and their extensions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DilatorArg {
    /// A presentation: `none`, `identity`, `const:ORD`, `sum(A,B)`,
    /// `sigma(A)`, or the path of a saved presentation file.
    #[arg(long, value_name = "SPEC")]
    dilator: String,
}

impl DilatorArg {
    fn load(&self) -> Result<Dilator> {
        parse_dilator_spec(&self.dilator)
    }
}

#[derive(Args)]
struct SeedArgs {
    /// Sample count for laws whose search space is infinite.
    #[arg(long, default_value_t = 64)]
    samples: usize,
    /// Seed for all sampled checks; reruns are byte identical.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Copy, Clone, ValueEnum)]
enum TableFormat {
    Tsv,
    Dot,
}

#[derive(Copy, Clone, ValueEnum)]
enum OracleKind {
    Star,
    Always,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Check the functor and support laws of a presentation.
    Validate {
        #[command(flatten)]
        dilator: DilatorArg,
        /// Largest arity inspected.
        #[arg(long, default_value_t = 8)]
        bound: usize,
        #[command(flatten)]
        seed: SeedArgs,
    },
    /// Check the laws that make a presentation normal.
    Normality {
        #[command(flatten)]
        dilator: DilatorArg,
        #[arg(long, default_value_t = 8)]
        bound: usize,
        #[command(flatten)]
        seed: SeedArgs,
    },
    /// List the trace elements up to an arity bound.
    Trace {
        #[command(flatten)]
        dilator: DilatorArg,
        #[arg(long, default_value_t = 8)]
        bound: usize,
    },
    /// Compare two terms of the extension over a common base.
    Compare {
        #[command(flatten)]
        dilator: DilatorArg,
        /// First term, like `(0 ; 2 ; w)`.
        a: String,
        /// Second term.
        b: String,
    },
    /// Print the representation of a term or of an ordinal value.
    Repr {
        #[command(flatten)]
        dilator: DilatorArg,
        /// A term like `(0 ; 2 ; w)` or a plain value like `5`.
        input: String,
    },
    /// Emit the sigma presentation of a dilator as a presentation file.
    Sigma {
        #[command(flatten)]
        dilator: DilatorArg,
        /// Write here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the resemblance table of a finite structure.
    Leq1 {
        #[command(flatten)]
        dilator: DilatorArg,
        /// Members: `a..b` for an initial range or a comma list like `0,1,w`.
        #[arg(long)]
        universe: String,
        #[arg(long, value_enum, default_value_t = TableFormat::Tsv)]
        format: TableFormat,
        /// Use forward-only representation checks in the isomorphisms.
        #[arg(long)]
        criterion: bool,
    },
    /// Slice one club through a finite structure.
    Club {
        #[command(flatten)]
        dilator: DilatorArg,
        #[arg(long)]
        universe: String,
        /// The indexing element, like `<2 ; 1>`.
        #[arg(long)]
        element: String,
    },
    /// Intersect the clubs indexed below an element.
    Fd {
        #[command(flatten)]
        dilator: DilatorArg,
        #[arg(long)]
        universe: String,
        /// Upper index element, like `<2 ; 3>`.
        #[arg(long)]
        rho: String,
        /// Arguments of indexing elements stay below this.
        #[arg(long)]
        eta: u64,
        /// Trace arity bound for enumerating indexing elements.
        #[arg(long, default_value_t = 8)]
        bound: usize,
    },
    /// Build or check collapse tables.
    Collapse {
        #[command(subcommand)]
        action: CollapseAction,
    },
    /// Sample the substitution laws of a sigma extension.
    Fundlemma {
        #[command(flatten)]
        dilator: DilatorArg,
        #[command(flatten)]
        seed: SeedArgs,
    },
}

#[derive(Subcommand)]
enum CollapseAction {
    /// Scan an oracle for the least witness of each term.
    Build {
        #[command(flatten)]
        dilator: DilatorArg,
        /// Base of the collapsed terms, like `w`.
        #[arg(long)]
        alpha: String,
        /// Tabulate the terms denoting the values `0..count`.
        #[arg(long)]
        count: u64,
        #[arg(long, value_enum)]
        oracle: OracleKind,
        /// Candidate witnesses, scanned in ascending order.
        #[arg(long)]
        range: String,
        /// Structure members for the table oracle.
        #[arg(long)]
        universe: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate the order and support conditions of a saved table.
    Check {
        #[command(flatten)]
        dilator: DilatorArg,
        #[arg(long)]
        alpha: String,
        /// Table file as written by `collapse build`.
        file: PathBuf,
    },
}

pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            3
        }
    }
}

fn counterexample<T: serde::Serialize>(value: &T) -> String {
    format!(
        "COUNTEREXAMPLE {}",
        serde_json::to_string(value).expect("reports serialize")
    )
}

fn run(command: Command) -> Result<i32> {
    match command {
        Command::Validate { dilator, bound, seed } => {
            let d = dilator.load()?;
            let opts = ValidateOptions { samples: seed.samples, seed: seed.seed };
            let report = validate_predilator(&d, bound, &opts).map_err(internal)?;
            print!("{report}");
            if report.passed() {
                Ok(0)
            } else {
                println!("{}", counterexample(report.first_failure().expect("failed check")));
                Ok(1)
            }
        }
        Command::Normality { dilator, bound, seed } => {
            let d = dilator.load()?;
            let opts = ValidateOptions { samples: seed.samples, seed: seed.seed };
            let report = validate_normality(&d, bound, &opts).map_err(internal)?;
            print!("{report}");
            if report.passed() {
                Ok(0)
            } else {
                println!("{}", counterexample(report.first_failure().expect("failed check")));
                Ok(1)
            }
        }
        Command::Trace { dilator, bound } => {
            let d = dilator.load()?;
            for te in d.trace(bound).map_err(internal)? {
                println!("{}\t{}", te.value, te.arity);
            }
            Ok(0)
        }
        Command::Compare { dilator, a, b } => {
            let d = dilator.load()?;
            let ta = Term::parse(&d, &a).map_err(usage)?;
            let tb = Term::parse(&d, &b).map_err(usage)?;
            let ord = term_compare(&d, &ta, &tb).map_err(internal)?;
            println!(
                "{}",
                match ord {
                    std::cmp::Ordering::Less => "less",
                    std::cmp::Ordering::Equal => "equal",
                    std::cmp::Ordering::Greater => "greater",
                }
            );
            Ok(0)
        }
        Command::Repr { dilator, input } => {
            let d = dilator.load()?;
            let r = if input.trim_start().starts_with('(') {
                let t = Term::parse(&d, &input).map_err(usage)?;
                represent(&d, &t).map_err(internal)?
            } else {
                let v = ExtOrd::parse(&input).map_err(usage)?;
                represent_value(&d, &v).map_err(internal)?
            };
            println!("{r}");
            Ok(0)
        }
        Command::Sigma { dilator, out } => {
            let d = dilator.load()?;
            let json = dilator_file::to_json(&Dilator::sigma(d));
            match out {
                Some(path) => std::fs::write(&path, json).map_err(usage)?,
                None => print!("{json}"),
            }
            Ok(0)
        }
        Command::Leq1 { dilator, universe, format, criterion } => {
            let d = dilator.load()?;
            let members = parse_universe(&universe)?;
            let s = PatternStructure::new(d, members).map_err(usage)?;
            let table = if criterion { leq1_criterion(&s) } else { leq1_table(&s) };
            match format {
                TableFormat::Tsv => print!("{}", table.tsv()),
                TableFormat::Dot => print!("{}", table.dot()),
            }
            Ok(0)
        }
        Command::Club { dilator, universe, element } => {
            let d = dilator.load()?;
            let members = parse_universe(&universe)?;
            let gamma = DDElement::parse(&element).map_err(usage)?;
            let s = PatternStructure::new(d, members).map_err(usage)?;
            let table = leq1_table(&s);
            for (delta, verdict) in club_slice(&s, &table, &gamma).map_err(internal)? {
                println!("{delta}\t{verdict}");
            }
            Ok(0)
        }
        Command::Fd { dilator, universe, rho, eta, bound } => {
            let d = dilator.load()?;
            let members = parse_universe(&universe)?;
            let rho = DDElement::parse(&rho).map_err(usage)?;
            let eta = crate::ordinal::Ordinal::nat(eta);
            let s = PatternStructure::new(d, members).map_err(usage)?;
            let table = leq1_table(&s);
            for (delta, verdict) in fd_slice(&s, &table, &rho, &eta, bound).map_err(internal)? {
                println!("{delta}\t{verdict}");
            }
            Ok(0)
        }
        Command::Collapse { action } => run_collapse(action),
        Command::Fundlemma { dilator, seed } => {
            let d = dilator.load()?;
            let e = Dilator::sigma(d);
            let report = check_fund_basic(&e, seed.samples, seed.seed).map_err(internal)?;
            print!("{report}");
            if report.all_conclusions_hold() {
                Ok(0)
            } else {
                let failing = report
                    .clauses
                    .iter()
                    .find(|c| c.counterexample.is_some())
                    .expect("failed clause");
                println!("{}", counterexample(failing));
                Ok(1)
            }
        }
    }
}

fn run_collapse(action: CollapseAction) -> Result<i32> {
    match action {
        CollapseAction::Build { dilator, alpha, count, oracle, range, universe, out } => {
            let d = dilator.load()?;
            let alpha = ExtOrd::parse(&alpha).map_err(usage)?;
            let gammas = initial_terms(&d, &alpha, count).map_err(internal)?;
            let range = parse_universe(&range)?;
            // The table oracle borrows a structure, so both arms share
            // the scan call instead of one oracle binding.
            let table = match oracle {
                OracleKind::Star => {
                    build_collapse(&d, &alpha, &gammas, &ResemblanceOracle::StarFixture, &range)
                }
                OracleKind::Always => {
                    build_collapse(&d, &alpha, &gammas, &ResemblanceOracle::Always, &range)
                }
                OracleKind::Table => {
                    let members = parse_universe(&universe.ok_or_else(|| {
                        CliError::Usage("the table oracle needs --universe".into())
                    })?)?;
                    let s = PatternStructure::new(Dilator::sigma(d.clone()), members)
                        .map_err(usage)?;
                    let t = leq1_table(&s);
                    let oracle = ResemblanceOracle::Table { structure: &s, table: &t };
                    build_collapse(&d, &alpha, &gammas, &oracle, &range)
                }
            }
            .map_err(internal)?;
            match out {
                Some(path) => std::fs::write(&path, table.tsv()).map_err(usage)?,
                None => print!("{}", table.tsv()),
            }
            Ok(0)
        }
        CollapseAction::Check { dilator, alpha, file } => {
            let d = dilator.load()?;
            let alpha = ExtOrd::parse(&alpha).map_err(usage)?;
            let text = std::fs::read_to_string(&file).map_err(usage)?;
            let table = CollapseTable::from_tsv(&d, &alpha, &text).map_err(usage)?;
            let report = validate_collapse(&table).map_err(internal)?;
            println!("{report}");
            if report.is_valid() {
                Ok(0)
            } else {
                println!("{}", counterexample(&report.violations[0]));
                Ok(1)
            }
        }
    }
}

/// Named combinator expressions, with file paths as the fallback.
fn parse_dilator_spec(spec: &str) -> Result<Dilator> {
    if let Some(d) = parse_dilator_expr(spec) {
        return Ok(d);
    }
    let path = std::path::Path::new(spec);
    if path.exists() {
        return dilator_file::load(path).map_err(usage);
    }
    Err(CliError::Usage(format!(
        "{spec:?} is neither a presentation expression (none, identity, const:ORD, \
         sum(A,B), sigma(A)) nor an existing file"
    )))
}

fn parse_dilator_expr(spec: &str) -> Option<Dilator> {
    let spec = spec.trim();
    match spec {
        "none" => return Some(Dilator::constant(crate::ordinal::Ordinal::zero())),
        "identity" => return Some(Dilator::Identity),
        _ => {}
    }
    if let Some(rest) = spec.strip_prefix("const:") {
        let nu = ExtOrd::parse(rest).ok()?;
        return Some(Dilator::constant(nu.as_plain()?.clone()));
    }
    if let Some(inner) = spec.strip_prefix("sigma(").and_then(|r| r.strip_suffix(')')) {
        return Some(Dilator::sigma(parse_dilator_expr(inner)?));
    }
    if let Some(inner) = spec.strip_prefix("sum(").and_then(|r| r.strip_suffix(')')) {
        let split = top_level_comma(inner)?;
        let a = parse_dilator_expr(&inner[..split])?;
        let b = parse_dilator_expr(&inner[split + 1..])?;
        return Some(Dilator::sum(a, b));
    }
    None
}

fn top_level_comma(s: &str) -> Option<usize> {
    let mut depth = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.checked_sub(1)?,
            ',' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

/// `a..b` for the naturals of a half-open range, or a comma list of
/// ordinals like `0,1,2,w`.
fn parse_universe(spec: &str) -> Result<Vec<ExtOrd>> {
    if let Some((lo, hi)) = spec.split_once("..") {
        let lo: u64 = lo.trim().parse().map_err(usage)?;
        let hi: u64 = hi.trim().parse().map_err(usage)?;
        return Ok((lo..hi).map(ExtOrd::nat).collect());
    }
    spec.split(',')
        .map(|part| ExtOrd::parse(part.trim()).map_err(usage))
        .collect()
}
