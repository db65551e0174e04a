//! Resemblance tables over finite structures: the verdict for a pair
//! quantifies over finite configurations, asking for images that keep
//! order, resemblance, and representation instances intact.
//!
//!     cargo run --example leq1_tables

use dilators::resemblance::{
    formula_family, iso_extends, iso_search, leq1_criterion, leq1_table, sigma1_holds, IsoMode,
    PatternStructure,
};
use dilators::{Dilator, ExtOrd, Ordinal};

fn ords(spec: &[&str]) -> Vec<ExtOrd> {
    spec.iter().map(|s| ExtOrd::parse(s).unwrap()).collect()
}

fn main() {
    // A mixed universe: three finite members and two around the first
    // limit.  Members carry representations where the extension reaches
    // them; every member of the identity extension represents itself.
    let s = PatternStructure::new(Dilator::identity(), ords(&["0", "1", "2", "w", "w + 1"]))
        .unwrap();
    let table = leq1_table(&s);
    print!("{}", table.tsv());

    // Off the diagonal the verdict is negative: the left member itself
    // must land strictly below, and everything smaller is already fixed.
    let w = ExtOrd::parse("w").unwrap();
    assert_eq!(table.holds(&w, &ExtOrd::parse("w + 1").unwrap()), Some(false));

    // Sub-maximal configurations still admit witnesses.  Fixing {0, 1}
    // and moving {w} succeeds by dropping w onto 2:
    let found = iso_search(
        &s,
        &table,
        &w,
        &ords(&["0", "1"]),
        &[w.clone()],
        IsoMode::Full,
    )
    .unwrap();
    println!("image of {{w}} fixing {{0, 1}}: {found:?}");
    assert!(iso_extends(&s, &table, &ords(&["0", "1"]), &[w.clone()], &[ExtOrd::nat(2)],
        IsoMode::Full)
    .unwrap());
    // ... but fixing all three finite members leaves no room below w.
    let blocked =
        iso_search(&s, &table, &w, &ords(&["0", "1", "2"]), &[w.clone()], IsoMode::Full).unwrap();
    assert_eq!(blocked, None);
    println!("image of {{w}} fixing {{0, 1, 2}}: none");

    // The criterion table relaxes isomorphism to forward implications
    // on representation instances; on closed universes it agrees.
    let closed = PatternStructure::initial_segment(Dilator::sigma(Dilator::constant(
        Ordinal::nat(1),
    )), 6)
    .unwrap();
    assert_eq!(leq1_table(&closed), leq1_criterion(&closed));
    println!("criterion agrees with the full table on 0..6");

    // Verdicts are equivalent to reflection for a family of one- and
    // two-quantifier formulas over the order and resemblance symbols.
    let seg = PatternStructure::initial_segment(Dilator::identity(), 5).unwrap();
    let seg_table = leq1_table(&seg);
    for phi in formula_family().iter().take(4) {
        let params = vec![ExtOrd::nat(1); phi.params_needed()];
        let holds = sigma1_holds(&seg, &seg_table, phi, &params).unwrap();
        println!("0..5 |= {phi} [p0 = 1]: {holds}");
    }

    // Graphviz output for the same table.
    println!("{}", seg_table.dot());
}
