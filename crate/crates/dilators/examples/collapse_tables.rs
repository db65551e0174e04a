//! Collapse tables: mapping terms of an extension to ordinals below the
//! base, by closed form at a fixed point or by scanning an oracle, then
//! validating the order and support conditions.
//!
//!     cargo run --example collapse_tables

use dilators::collapse::{
    build_collapse, initial_terms, normal_collapse, validate_collapse, CollapseTable,
    ResemblanceOracle,
};
use dilators::resemblance::{leq1_table, PatternStructure};
use dilators::{Dilator, ExtOrd};

fn main() {
    let w = ExtOrd::parse("w").unwrap();

    // The identity presentation fixes w, so its collapse is available
    // in closed form: each term goes to the successor of its value.
    let d = Dilator::identity();
    let table = normal_collapse(&d, &w, 8).unwrap();
    print!("{}", table.tsv());
    let report = validate_collapse(&table).unwrap();
    println!("closed form: {report}");
    assert!(report.is_valid());

    // Mutating the table breaks the conditions by name.
    let zeroed = CollapseTable::new(
        d.clone(),
        w.clone(),
        table
            .entries()
            .iter()
            .map(|(t, _)| (t.clone(), Some(ExtOrd::nat(0))))
            .collect(),
    )
    .unwrap();
    println!("zeroed:      {}", validate_collapse(&zeroed).unwrap());

    // Scanning an oracle instead: the star fixture affirms exactly the
    // least admissible candidate of each term, so the scan returns the
    // star and the minimality of the chosen witness is visible.
    let gammas = initial_terms(&d, &w, 8).unwrap();
    let range: Vec<ExtOrd> = (0..12).map(ExtOrd::nat).collect();
    let built = build_collapse(&d, &w, &gammas, &ResemblanceOracle::StarFixture, &range).unwrap();
    assert_eq!(built, table);
    println!("star-fixture scan rebuilds the closed form");

    // A table-backed oracle only answers inside its table.  For these
    // candidates every answer is negative, which the result records as
    // no-witness-in-range rather than inventing a value.
    let sigma_d = Dilator::sigma(d.clone());
    let s = PatternStructure::initial_segment(sigma_d, 13).unwrap();
    let t = leq1_table(&s);
    let oracle = ResemblanceOracle::Table { structure: &s, table: &t };
    let sparse = build_collapse(
        &d,
        &w,
        &gammas[..1],
        &oracle,
        &(1..=4).map(ExtOrd::nat).collect::<Vec<_>>(),
    )
    .unwrap();
    print!("{}", sparse.tsv());
    println!("table oracle: {}", validate_collapse(&sparse).unwrap());
}
