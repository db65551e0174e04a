//! The sigma construction: how it normalizes a presentation, and the
//! embedding that carries terms of the inner extension into it.
//!
//!     cargo run --example sigma_normalization

use dilators::term::{extension_order_type, mu_bar, term_value, value_term};
use dilators::sigma::{star, substitute_last, xi_embed, xi_preimage};
use dilators::{Dilator, ExtOrd, Ordinal};

fn main() {
    let inner = Dilator::identity();
    let d = Dilator::sigma(inner.clone());

    // The sigma extension over n stacks one marker plus a copy of the
    // inner extension over each k < n.
    print!("order types of {d}:");
    for n in 0..6u64 {
        print!(" {}", extension_order_type(&d, &ExtOrd::nat(n)).unwrap());
    }
    println!();

    // Fiber minima exist at every window: the term picking out the
    // marker of the window at gamma.
    for g in 0..4u64 {
        let t = mu_bar(&d, ExtOrd::nat(g), ExtOrd::nat(5)).unwrap();
        println!("window minimum at {g}: {t} = {}", term_value(&d, &t).unwrap());
    }

    // The embedding appends the base as a final argument and lands just
    // past the image of the inner extension.
    let w = ExtOrd::parse("w").unwrap();
    let gamma = value_term(&inner, &ExtOrd::nat(3), &w).unwrap();
    let lifted = xi_embed(&inner, &gamma).unwrap();
    println!("{gamma} embeds as {lifted}");
    assert_eq!(xi_preimage(&inner, &lifted).unwrap().as_ref(), Some(&gamma));

    // The star is the least admissible substitution point for the final
    // argument; substitution below it is refused.
    let st = star(&lifted).unwrap();
    println!("star of {lifted} is {st}");
    let grounded = substitute_last(&d, &lifted, &ExtOrd::nat(7)).unwrap();
    println!("substituting 7: {grounded}");
    println!(
        "substituting too low: {}",
        substitute_last(&d, &lifted, &ExtOrd::nat(2)).unwrap_err()
    );

    // Stacking sigma twice keeps everything lawful; the order types of
    // the double construction grow quadratically at finite bases.
    let dd = Dilator::sigma(Dilator::sigma(Dilator::constant(Ordinal::nat(1))));
    print!("order types of {dd}:");
    for n in 0..6u64 {
        print!(" {}", extension_order_type(&dd, &ExtOrd::nat(n)).unwrap());
    }
    println!();
}
