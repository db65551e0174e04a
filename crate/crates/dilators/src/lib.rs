//! Coded dilators on the category of finite linear orders, with the
//! machinery that grows out of them: ordinal notations in Cantor normal
//! form, term extensions over arbitrary base ordinals, the sigma
//! normalization that turns any dilator into a normal one, finite
//! resemblance structures with their `<=_1` tables, club slices, and the
//! construction and validation of collapse tables.
//!
//! The crate is a library first; `examples/` contains one runnable tour
//! per capability, and the single `dilators` binary exposes the same
//! operations as subcommands for scripting.

pub mod cli;
pub mod collapse;
pub mod dilator;
pub mod dilator_file;
pub mod ordinal;
pub mod resemblance;
pub mod sigma;
pub mod term;

pub use collapse::{CollapseError, CollapseReport, CollapseTable, ResemblanceOracle};
pub use dilator::{
    validate_normality, validate_predilator, ChainStrategy, Dilator, DilatorError, NatMap, Table,
    TraceElement, ValidateOptions, ValidationReport,
};
pub use ordinal::{ExtOrd, Ordinal, OrdinalClass, ParseError};
pub use resemblance::{
    DDElement, IsoMode, Leq1Table, PatternStructure, ResemblanceError, SigmaFormula,
    SliceVerdict,
};
pub use term::{Representation, Term, TermError};
