//! Sampling the substitution laws of sigma extensions: how terms with a
//! replaced final argument relate to the originals.
//!
//!     cargo run --example fundamental_lemma

use dilators::sigma::check_fund_basic;
use dilators::{Dilator, Ordinal};

fn main() {
    for inner in [Dilator::constant(Ordinal::nat(1)), Dilator::identity()] {
        let e = Dilator::sigma(inner);
        let report = check_fund_basic(&e, 400, 42).unwrap();
        print!("{report}");
        assert!(report.all_conclusions_hold());
        println!();
    }

    // Clause g needs a limit term strictly inside a window.  Over the
    // constant presentation each window holds a single interior element
    // sitting right after the marker, a successor, so the premise is
    // never satisfiable, and the report says so rather than counting
    // the clause as checked.
    let constant = check_fund_basic(&Dilator::sigma(Dilator::constant(Ordinal::nat(1))), 400, 42)
        .unwrap();
    assert!(constant.clause("g").vacuous);
    let identity = check_fund_basic(&Dilator::sigma(Dilator::identity()), 400, 42).unwrap();
    assert!(!identity.clause("g").vacuous);
    println!("clause g: vacuous over sigma(const:1), populated over sigma(identity)");
}
