//! Checking presentations against the functor, support, and normality
//! laws, and probing term comparison for well-foundedness certificates.
//!
//!     cargo run --example validate_dilator

use std::collections::BTreeSet;

use dilators::term::{wf_probe, WfProbe};
use dilators::{
    validate_normality, validate_predilator, Dilator, ExtOrd, Ordinal, Table, ValidateOptions,
};

fn main() {
    let opts = ValidateOptions { samples: 64, seed: 0 };

    for d in [
        Dilator::identity(),
        Dilator::constant(Ordinal::omega()),
        Dilator::sum(Dilator::constant(Ordinal::nat(1)), Dilator::identity()),
        Dilator::sigma(Dilator::identity()),
    ] {
        let report = validate_predilator(&d, 6, &opts).unwrap();
        println!("{report}");
        assert!(report.passed());
    }

    // Normality asks for the fiber minima over each window; the sigma
    // construction always carries them.
    let normal = validate_normality(&Dilator::sigma(Dilator::constant(Ordinal::nat(1))), 6, &opts)
        .unwrap();
    println!("{normal}");
    assert!(normal.passed());

    // A tabulated presentation with a backwards coface is caught by the
    // law suite, and its term order even contains a cycle.
    let broken = Dilator::Table(
        Table::new(
            vec![0, 3, 6],
            vec![vec![vec![]], vec![vec![0, 2, 4], vec![5, 3, 1]]],
            vec![
                vec![],
                vec![BTreeSet::from([0]); 3],
                vec![
                    BTreeSet::from([0]),
                    BTreeSet::from([0]),
                    BTreeSet::from([1]),
                    BTreeSet::from([1]),
                    BTreeSet::from([0]),
                    BTreeSet::from([1]),
                ],
            ],
            None,
        )
        .unwrap(),
    );
    let report = validate_predilator(&broken, 2, &opts).unwrap();
    println!("{report}");
    assert!(!report.passed());

    match wf_probe(&broken, &ExtOrd::nat(2), 500, 0).unwrap() {
        WfProbe::Refuted { cycle } => {
            println!("comparison cycle:");
            for t in &cycle {
                println!("  {t}");
            }
        }
        WfProbe::Unknown { probed } => println!("no cycle among {probed} terms"),
    }

    // The same probe on a lawful presentation stays silent.
    let lawful = wf_probe(&Dilator::sigma(Dilator::identity()), &ExtOrd::nat(3), 500, 0).unwrap();
    assert!(matches!(lawful, WfProbe::Unknown { .. }));
    println!("sigma(identity) probe: no counterexample");
}
