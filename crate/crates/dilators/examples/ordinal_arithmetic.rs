//! Tour of the ordinal notations: Cantor normal form arithmetic and
//! the extended ordinals that add a symbolic window top `W`.
//!
//!     cargo run --example ordinal_arithmetic

use dilators::{ExtOrd, Ordinal, OrdinalClass};

fn main() {
    // Notations parse from the same syntax they print.
    let a = Ordinal::parse("w^2 * 3 + w + 5").unwrap();
    let b = Ordinal::parse("w^w + 1").unwrap();
    println!("a          = {a}");
    println!("b          = {b}");

    // Addition absorbs small leading terms, as ordinal addition must.
    println!("a + b      = {}", a.add(&b));
    println!("b + a      = {}", b.add(&a));
    println!("1 + w      = {}", Ordinal::nat(1).add(&Ordinal::omega()));

    // Successor and predecessor walk the notation directly.
    println!("succ a     = {}", a.succ());
    println!("pred a     = {:?}", a.pred());
    println!("pred w     = {:?}", Ordinal::omega().pred());

    for x in ["0", "7", "w * 2", "w^(w + 1)"] {
        let o = Ordinal::parse(x).unwrap();
        let class = match o.classify() {
            OrdinalClass::Zero => "zero",
            OrdinalClass::Successor => "a successor",
            OrdinalClass::Limit => "a limit",
        };
        println!("{x:>10} is {class}");
    }

    // Towers of omega grow through the exponent.
    let tower = Ordinal::omega_pow(Ordinal::omega_pow(Ordinal::omega()));
    println!("w^(w^w)    = {tower}");

    // Extended ordinals adjoin W, which dominates every notation and
    // shifts by ordinal addition on the right.
    let top = ExtOrd::omega_symbol();
    let shifted = top.add(&ExtOrd::parse("w + 2").unwrap()).unwrap();
    println!("W + (w+2)  = {shifted}");
    assert!(ExtOrd::parse("w^w * 9").unwrap() < top);
    // Two window tops cannot combine; the attempt reports why.
    println!("W + W      : {}", top.add(&shifted).unwrap_err());
}
