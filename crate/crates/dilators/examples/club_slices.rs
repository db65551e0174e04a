//! Club slices: which members of a finite structure resemble into the
//! value of an indexed term, and intersections of such clubs over an
//! initial segment of the index order.
//!
//!     cargo run --example club_slices

use dilators::resemblance::{
    club_slice, dd_compare, dd_members, fd_slice, leq1_table, DDElement, PatternStructure,
};
use dilators::{Dilator, ExtOrd, Ordinal};

fn main() {
    // Index elements are constructors with their final argument left
    // open; they order themselves by comparison below a symbolic top.
    let d = Dilator::sigma(Dilator::identity());
    let members = dd_members(&d, &Ordinal::nat(3), 6).unwrap();
    println!("index elements with arguments below 3:");
    for m in &members {
        println!("  {m}  (arguments bounded by {})", m.plus());
    }
    let rho = DDElement::new(&d, Ordinal::nat(2), vec![Ordinal::nat(3)]).unwrap();
    let below = members
        .iter()
        .filter(|pi| dd_compare(&d, pi, &rho).unwrap() == std::cmp::Ordering::Less)
        .count();
    println!("{below} of them precede {rho}");

    // Slicing one club through a structure: out below the argument
    // bound, then in exactly where the member resembles into the value
    // of the reattached term.
    let s = PatternStructure::initial_segment(d.clone(), 11).unwrap();
    let table = leq1_table(&s);
    let marker = DDElement::new(&d, Ordinal::zero(), vec![]).unwrap();
    println!("slice of the first marker club through 0..11:");
    for (delta, verdict) in club_slice(&s, &table, &marker).unwrap() {
        println!("  {delta}\t{verdict}");
    }

    // A presentation with a genuine fixed point at w: the gap shifts
    // every finite member but leaves w in place.
    let gap = Dilator::sum(Dilator::constant(Ordinal::nat(1)), Dilator::identity());
    let s = PatternStructure::new(
        gap.clone(),
        ["0", "1", "2", "3", "w"].iter().map(|x| ExtOrd::parse(x).unwrap()),
    )
    .unwrap();
    let t = leq1_table(&s);
    let m = DDElement::new(&gap, Ordinal::nat(1), vec![]).unwrap();
    println!("slice of the shifted-image club through {{0..3, w}}:");
    for (delta, verdict) in club_slice(&s, &t, &m).unwrap() {
        println!("  {delta}\t{verdict}");
    }

    // Intersections over all indices preceding rho with small arguments.
    let s = PatternStructure::initial_segment(d.clone(), 11).unwrap();
    let table = leq1_table(&s);
    println!("intersection below {rho} with arguments below 2:");
    for (delta, verdict) in fd_slice(&s, &table, &rho, &Ordinal::nat(2), 6).unwrap() {
        println!("  {delta}\t{verdict}");
    }
}
