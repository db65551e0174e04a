//! Terms of the extension of a presentation over an arbitrary base:
//! construction, comparison, evaluation, and the successor walk.
//!
//!     cargo run --example term_extension

use std::cmp::Ordering;

use dilators::term::{
    enumerate_terms, represent, represent_value, succ_term, term_compare, term_value, value_term,
    Term,
};
use dilators::{Dilator, ExtOrd, Ordinal};

fn main() {
    let d = Dilator::sigma(Dilator::identity());

    // Over a finite base the whole extension enumerates in order, and
    // evaluation is the position in that enumeration.
    let base = ExtOrd::nat(4);
    let terms = enumerate_terms(&d, &base).unwrap();
    println!("extension of {d} over {base} ({} terms):", terms.len());
    for t in &terms {
        println!("  {t}  =  {}", term_value(&d, t).unwrap());
    }

    // Values convert back to terms, over any base large enough.
    let t = value_term(&d, &ExtOrd::nat(8), &base).unwrap();
    println!("value 8 over {base} is {t}");

    // Infinite bases work through the same interface; comparison pushes
    // both constructors into a common finite fiber.
    let w = ExtOrd::parse("w").unwrap();
    let a = Term::new(&d, Ordinal::nat(2), vec![ExtOrd::nat(1), w.clone()], w.succ()).unwrap();
    let b = Term::new(&d, Ordinal::nat(2), vec![ExtOrd::nat(3), w.clone()], w.succ()).unwrap();
    println!("{a} vs {b}: {:?}", term_compare(&d, &a, &b).unwrap());
    assert_eq!(term_compare(&d, &a, &b).unwrap(), Ordering::Less);

    // Representations strip the base: the same data names an element of
    // every sufficiently large extension.
    let r = represent(&d, &a).unwrap();
    println!("{a} represents as {r}");
    let five = represent_value(&d, &ExtOrd::nat(5)).unwrap();
    println!("the value 5 represents as {five}");

    // Walking successors from the bottom retraces the enumeration.
    let mut cursor = terms.first().cloned();
    let mut walked = Vec::new();
    while let Some(t) = cursor {
        walked.push(t.clone());
        cursor = succ_term(&d, &t).unwrap();
    }
    assert_eq!(walked, terms);
    println!("successor walk revisits all {} terms in order", walked.len());
}
