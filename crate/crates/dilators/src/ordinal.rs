//! Ordinal notations in Cantor normal form below epsilon_0, plus the
//! two-level extension by a symbolic upper ordinal `W`.
//!
//! A notation is a finite sum `w^e1*c1 + ... + w^ek*ck` with ordinal
//! exponents `e1 > e2 > ... > ek` (themselves notations) and positive
//! integer coefficients.  The empty sum denotes 0.  Comparison, addition
//! and successor/limit classification are total; subtraction exists only
//! as the internal left-difference used to split sum decompositions.
//!
//! Concrete syntax (whitespace between tokens is ignored):
//!
//! ```text
//! ord  := "0" | term ("+" term)*
//! term := "w" ("^" expo)? ("*" nat)? | nat
//! expo := nat | "w" ("^" expo)? | "(" ord ")"
//! ```
//!
//! A compound exponent must be parenthesized, so `w^w + 1` is
//! `(omega^omega) + 1` while `w^(w + 1)` is the power.  `render` emits the
//! unique canonical string for each value and `parse` rejects
//! non-canonical spellings (unsorted exponents, zero coefficients,
//! `w^0`, `w^1`) with a position and a reason.
//!
//! The extended ordinals add a symbolic value `W` lying above every plain
//! notation, together with its finite-style translates `W+nu`.  They are
//! rendered as `W` and `W+nu`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

/// Cantor normal form: strictly decreasing exponents, coefficients >= 1.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    summands: Vec<(Ordinal, u64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrdinalClass {
    Zero,
    Successor,
    Limit,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { summands: Vec::new() }
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            Ordinal { summands: vec![(Self::zero(), n)] }
        }
    }

    pub fn omega() -> Self {
        Self::omega_pow(Self::nat(1))
    }

    /// `w^e` for an arbitrary notation `e`.
    pub fn omega_pow(e: Ordinal) -> Self {
        Ordinal { summands: vec![(e, 1)] }
    }

    /// Builds from (exponent, coefficient) pairs, checking canonicality.
    pub fn from_summands(summands: Vec<(Ordinal, u64)>) -> Result<Self, String> {
        for w in summands.windows(2) {
            if w[0].0 <= w[1].0 {
                return Err("exponents must be strictly decreasing".into());
            }
        }
        if summands.iter().any(|(_, c)| *c == 0) {
            return Err("coefficients must be positive".into());
        }
        Ok(Ordinal { summands })
    }

    pub fn summands(&self) -> &[(Ordinal, u64)] {
        &self.summands
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    /// Some(n) iff the value is a natural number.
    pub fn as_nat(&self) -> Option<u64> {
        match self.summands.as_slice() {
            [] => Some(0),
            [(e, c)] if e.is_zero() => Some(*c),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_nat().is_some()
    }

    pub fn classify(&self) -> OrdinalClass {
        match self.summands.last() {
            None => OrdinalClass::Zero,
            Some((e, _)) if e.is_zero() => OrdinalClass::Successor,
            Some(_) => OrdinalClass::Limit,
        }
    }

    pub fn succ(&self) -> Ordinal {
        self.add(&Ordinal::nat(1))
    }

    /// Immediate predecessor, for successor notations only.
    pub fn pred(&self) -> Option<Ordinal> {
        let mut summands = self.summands.clone();
        match summands.last_mut() {
            Some((e, c)) if e.is_zero() => {
                if *c == 1 {
                    summands.pop();
                } else {
                    *c -= 1;
                }
                Some(Ordinal { summands })
            }
            _ => None,
        }
    }

    /// Ordinal addition: `self + rhs`.
    pub fn add(&self, rhs: &Ordinal) -> Ordinal {
        let Some((lead, _)) = rhs.summands.first() else {
            return self.clone();
        };
        let mut summands: Vec<(Ordinal, u64)> = self
            .summands
            .iter()
            .filter(|(e, _)| e > lead)
            .cloned()
            .collect();
        let mut rest = rhs.summands.clone();
        if let Some((e, c)) = self.summands.iter().find(|(e, _)| e == lead) {
            debug_assert!(e == lead);
            rest[0].1 = rest[0].1.checked_add(*c).expect("coefficient overflow");
        }
        summands.extend(rest);
        Ordinal { summands }
    }

    /// Left difference: the unique `x` with `self + x = target`, if `self <= target`.
    pub(crate) fn left_sub(&self, target: &Ordinal) -> Option<Ordinal> {
        if self > target {
            return None;
        }
        let a = &self.summands;
        let b = &target.summands;
        let mut i = 0;
        while i < a.len() && i < b.len() && a[i] == b[i] {
            i += 1;
        }
        if i == a.len() {
            return Some(Ordinal { summands: b[i..].to_vec() });
        }
        // First difference: target's summand must dominate what is left of self.
        let (ea, ca) = &a[i];
        let (eb, cb) = &b[i];
        if ea == eb && ca < cb {
            let mut summands = vec![(eb.clone(), cb - ca)];
            summands.extend_from_slice(&b[i + 1..]);
            Some(Ordinal { summands })
        } else if ea < eb {
            Some(Ordinal { summands: b[i..].to_vec() })
        } else {
            // self > target along this branch; guarded above, but a paranoid None.
            None
        }
    }

    pub fn parse(input: &str) -> Result<Self, ParseError> {
        let mut p = Parser::new(input);
        let ord = p.parse_ord()?;
        p.expect_end()?;
        Ok(ord)
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        let a = &self.summands;
        let b = &other.summands;
        for i in 0..a.len().min(b.len()) {
            let (ea, ca) = &a[i];
            let (eb, cb) = &b[i];
            match ea.cmp(eb).then(ca.cmp(cb)) {
                Ordering::Equal => continue,
                // A larger coefficient/exponent at the first difference decides,
                // unless the smaller side ends here with equal exponent: then the
                // comparison is still decided the same way because later summands
                // are strictly smaller than w^e.
                other => return other,
            }
        }
        a.len().cmp(&b.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.summands.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if e.is_zero() {
                write!(f, "{c}")?;
            } else {
                write!(f, "w")?;
                if e.as_nat() != Some(1) {
                    write!(f, "^{}", Exponent(e))?;
                }
                if *c != 1 {
                    write!(f, "*{c}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Exponent position: naturals and `w`-chains stand bare, anything else
/// is parenthesized.
struct Exponent<'a>(&'a Ordinal);

impl fmt::Display for Exponent<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.0.as_nat() {
            return write!(f, "{n}");
        }
        match self.0.summands.as_slice() {
            [(e, 1)] => {
                write!(f, "w")?;
                if e.as_nat() != Some(1) {
                    write!(f, "^{}", Exponent(e))?;
                }
                Ok(())
            }
            _ => write!(f, "({})", self.0),
        }
    }
}

/// A plain notation or a symbolic `W + nu`; every plain value sorts below
/// every extended one.  `W` itself is `W + 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ExtOrd {
    Plain(Ordinal),
    OmegaPlus(Ordinal),
}

impl ExtOrd {
    pub fn nat(n: u64) -> Self {
        ExtOrd::Plain(Ordinal::nat(n))
    }

    pub fn zero() -> Self {
        ExtOrd::Plain(Ordinal::zero())
    }

    pub fn omega_symbol() -> Self {
        ExtOrd::OmegaPlus(Ordinal::zero())
    }

    pub fn is_plain(&self) -> bool {
        matches!(self, ExtOrd::Plain(_))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtOrd::Plain(o) if o.is_zero())
    }

    pub fn as_plain(&self) -> Option<&Ordinal> {
        match self {
            ExtOrd::Plain(o) => Some(o),
            ExtOrd::OmegaPlus(_) => None,
        }
    }

    pub fn as_nat(&self) -> Option<u64> {
        self.as_plain().and_then(Ordinal::as_nat)
    }

    pub fn classify(&self) -> OrdinalClass {
        match self {
            ExtOrd::Plain(o) => o.classify(),
            // W is a limit; W+nu follows nu otherwise.
            ExtOrd::OmegaPlus(nu) => match nu.classify() {
                OrdinalClass::Zero | OrdinalClass::Limit => OrdinalClass::Limit,
                OrdinalClass::Successor => OrdinalClass::Successor,
            },
        }
    }

    pub fn succ(&self) -> ExtOrd {
        match self {
            ExtOrd::Plain(o) => ExtOrd::Plain(o.succ()),
            ExtOrd::OmegaPlus(nu) => ExtOrd::OmegaPlus(nu.succ()),
        }
    }

    pub fn pred(&self) -> Option<ExtOrd> {
        match self {
            ExtOrd::Plain(o) => o.pred().map(ExtOrd::Plain),
            ExtOrd::OmegaPlus(nu) => nu.pred().map(ExtOrd::OmegaPlus),
        }
    }

    /// `self + rhs`.  Fails only when both sides reach above `W`, since
    /// `W + (W + nu)` has no two-level normal form.
    pub fn add(&self, rhs: &ExtOrd) -> Result<ExtOrd, String> {
        match (self, rhs) {
            (ExtOrd::Plain(a), ExtOrd::Plain(b)) => Ok(ExtOrd::Plain(a.add(b))),
            // Additively, everything plain is absorbed below W.
            (ExtOrd::Plain(_), ExtOrd::OmegaPlus(nu)) => Ok(ExtOrd::OmegaPlus(nu.clone())),
            (ExtOrd::OmegaPlus(nu), ExtOrd::Plain(b)) => Ok(ExtOrd::OmegaPlus(nu.add(b))),
            (ExtOrd::OmegaPlus(_), ExtOrd::OmegaPlus(_)) => {
                Err("sum of two extended ordinals leaves the W + nu range".into())
            }
        }
    }

    /// Left difference mirroring `Ordinal::left_sub`.
    pub(crate) fn left_sub(&self, target: &ExtOrd) -> Option<ExtOrd> {
        match (self, target) {
            (ExtOrd::Plain(a), ExtOrd::Plain(b)) => a.left_sub(b).map(ExtOrd::Plain),
            (ExtOrd::Plain(_), ExtOrd::OmegaPlus(nu)) => Some(ExtOrd::OmegaPlus(nu.clone())),
            (ExtOrd::OmegaPlus(a), ExtOrd::OmegaPlus(b)) => a.left_sub(b).map(ExtOrd::Plain),
            (ExtOrd::OmegaPlus(_), ExtOrd::Plain(_)) => None,
        }
    }

    pub fn parse(input: &str) -> Result<Self, ParseError> {
        let mut p = Parser::new(input);
        let v = p.parse_ext()?;
        p.expect_end()?;
        Ok(v)
    }
}

impl Ord for ExtOrd {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtOrd::Plain(a), ExtOrd::Plain(b)) => a.cmp(b),
            (ExtOrd::Plain(_), ExtOrd::OmegaPlus(_)) => Ordering::Less,
            (ExtOrd::OmegaPlus(_), ExtOrd::Plain(_)) => Ordering::Greater,
            (ExtOrd::OmegaPlus(a), ExtOrd::OmegaPlus(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for ExtOrd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtOrd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtOrd::Plain(o) => write!(f, "{o}"),
            ExtOrd::OmegaPlus(nu) if nu.is_zero() => write!(f, "W"),
            ExtOrd::OmegaPlus(nu) => write!(f, "W+{nu}"),
        }
    }
}

impl fmt::Debug for ExtOrd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Ordinal> for ExtOrd {
    fn from(o: Ordinal) -> Self {
        ExtOrd::Plain(o)
    }
}

// -- parsing ---------------------------------------------------------------

pub(crate) struct Parser<'a> {
    input: &'a [u8],
    pub pos: usize,
}

impl<'a> Parser<'a> {
    pub fn new(input: &'a str) -> Self {
        Parser { input: input.as_bytes(), pos: 0 }
    }

    fn err<T>(&self, pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos, msg: msg.into() })
    }

    pub fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.input.get(self.pos).copied()
    }

    pub fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(self.pos, format!("expected '{}'", c as char))
        }
    }

    pub fn expect_end(&mut self) -> Result<(), ParseError> {
        if self.peek().is_some() {
            self.err(self.pos, "trailing input")
        } else {
            Ok(())
        }
    }

    fn parse_nat(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err(start, "expected a number");
        }
        std::str::from_utf8(&self.input[start..self.pos])
            .unwrap()
            .parse::<u64>()
            .map_err(|_| ParseError { pos: start, msg: "number out of range".into() })
    }

    /// One `term`: an omega power with optional coefficient, or a bare natural.
    /// Returns (exponent, coefficient).
    fn parse_term(&mut self) -> Result<(Ordinal, u64), ParseError> {
        let start = self.pos;
        if self.eat(b'w') {
            let e = if self.eat(b'^') {
                let epos = self.pos;
                let e = self.parse_expo()?;
                match e.as_nat() {
                    Some(0) => return self.err(epos, "non-canonical: write w^0 as 1"),
                    Some(1) => return self.err(epos, "non-canonical: write w^1 as w"),
                    _ => e,
                }
            } else {
                Ordinal::nat(1)
            };
            let c = if self.eat(b'*') {
                let cpos = self.pos;
                let c = self.parse_nat()?;
                if c == 0 {
                    return self.err(cpos, "non-canonical: zero coefficient");
                }
                if c == 1 {
                    return self.err(cpos, "non-canonical: drop *1");
                }
                c
            } else {
                1
            };
            Ok((e, c))
        } else if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let c = self.parse_nat()?;
            if c == 0 {
                return self.err(start, "non-canonical: 0 cannot appear in a sum");
            }
            Ok((Ordinal::zero(), c))
        } else {
            self.err(self.pos, "expected 'w' or a number")
        }
    }

    /// Exponent position: nat, a bare w-chain, or a parenthesized ord.
    fn parse_expo(&mut self) -> Result<Ordinal, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let o = self.parse_ord()?;
                self.expect(b')')?;
                Ok(o)
            }
            Some(b'w') => {
                self.pos += 1;
                if self.eat(b'^') {
                    let epos = self.pos;
                    let e = self.parse_expo()?;
                    match e.as_nat() {
                        Some(0) => self.err(epos, "non-canonical: write w^0 as 1"),
                        Some(1) => self.err(epos, "non-canonical: write w^1 as w"),
                        _ => Ok(Ordinal::omega_pow(e)),
                    }
                } else {
                    Ok(Ordinal::omega())
                }
            }
            Some(c) if c.is_ascii_digit() => Ok(Ordinal::nat(self.parse_nat()?)),
            _ => self.err(self.pos, "expected an exponent"),
        }
    }

    pub fn parse_ord(&mut self) -> Result<Ordinal, ParseError> {
        // Lone "0" not followed by more digits is the empty sum.
        if self.peek() == Some(b'0') {
            let save = self.pos;
            self.pos += 1;
            if self.input.get(self.pos).is_some_and(u8::is_ascii_digit) {
                return self.err(save, "numbers may not start with 0");
            }
            return Ok(Ordinal::zero());
        }
        let mut summands = vec![self.parse_term()?];
        while self.eat(b'+') {
            let pos = self.pos;
            let t = self.parse_term()?;
            if summands.last().unwrap().0 <= t.0 {
                return self.err(pos, "non-canonical: exponents must strictly decrease");
            }
            summands.push(t);
        }
        Ok(Ordinal { summands })
    }

    pub fn parse_ext(&mut self) -> Result<ExtOrd, ParseError> {
        if self.peek() == Some(b'W') {
            self.pos += 1;
            if self.eat(b'+') {
                Ok(ExtOrd::OmegaPlus(self.parse_ord()?))
            } else {
                Ok(ExtOrd::omega_symbol())
            }
        } else {
            Ok(ExtOrd::Plain(self.parse_ord()?))
        }
    }
}

// -- serde as canonical strings ---------------------------------------------

impl Serialize for Ordinal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        Ordinal::parse(&text).map_err(serde::de::Error::custom)
    }
}

impl Serialize for ExtOrd {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExtOrd {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        ExtOrd::parse(&text).map_err(serde::de::Error::custom)
    }
}

// -- sampling ---------------------------------------------------------------

/// Uniform-ish random notation strictly below `bound` (which must be > 0).
/// Every ordinal below the bound has positive probability.
pub fn random_below<R: rand::Rng>(rng: &mut R, bound: &Ordinal) -> Ordinal {
    assert!(!bound.is_zero(), "no ordinal below 0");
    if let Some(n) = bound.as_nat() {
        return Ordinal::nat(rng.gen_range(0..n));
    }
    // Pick a prefix of the bound, shrink the coefficient at the cut, then
    // fill the tail with something below w^(cut exponent).
    let k = rng.gen_range(0..bound.summands.len());
    let mut summands: Vec<(Ordinal, u64)> = bound.summands[..k].to_vec();
    let (e, c) = &bound.summands[k];
    let keep = rng.gen_range(0..=*c - 1);
    if keep > 0 {
        summands.push((e.clone(), keep));
    }
    if !e.is_zero() {
        // Tail below w^e: a power w^e'*c' + smaller, with e' < e.
        let depth = rng.gen_range(0..3u32);
        let mut tail_bound = e.clone();
        let mut prev_exp: Option<Ordinal> = None;
        for _ in 0..depth {
            if tail_bound.is_zero() {
                break;
            }
            let e2 = random_below(rng, &tail_bound);
            if prev_exp.as_ref().is_some_and(|p| &e2 >= p) {
                break;
            }
            let c2 = rng.gen_range(1..4u64);
            summands.push((e2.clone(), c2));
            prev_exp = Some(e2.clone());
            tail_bound = e2;
        }
    }
    Ordinal { summands }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ord(s: &str) -> Ordinal {
        Ordinal::parse(s).unwrap()
    }

    #[test]
    fn parse_render_round_trip_on_canonical_strings() {
        for s in [
            "0",
            "1",
            "42",
            "w",
            "w*2",
            "w + 1",
            "w^2",
            "w^w + w*2 + 3",
            "w^w^w",
            "w^(w + 1)",
            "w^(w*2)*5 + w^2*3 + w + 17",
            "w^(w^w*2) + 1",
        ] {
            assert_eq!(ord(s).to_string(), s, "round trip failed for {s}");
        }
    }

    #[test]
    fn parse_is_whitespace_insensitive() {
        assert_eq!(ord("w^w+w*2+3"), ord("  w^w  +  w*2  +  3  "));
    }

    #[test]
    fn non_canonical_inputs_are_rejected_with_positions() {
        for (s, frag) in [
            ("w + w^2", "strictly decrease"),
            ("1 + 1", "strictly decrease"),
            ("w*0", "zero coefficient"),
            ("w^0", "w^0"),
            ("w^1", "w^1"),
            ("w*1", "drop *1"),
            ("3 + 0", "cannot appear in a sum"),
            ("01", "start with 0"),
            ("w^", "expected an exponent"),
            ("w +", "expected 'w' or a number"),
            ("w)", "trailing input"),
        ] {
            let err = Ordinal::parse(s).unwrap_err();
            assert!(
                err.msg.contains(frag),
                "for {s:?}: expected {frag:?} in {:?}",
                err.msg
            );
        }
    }

    #[test]
    fn comparison_examples() {
        assert!(ord("0") < ord("1"));
        assert!(ord("3") < ord("w"));
        assert!(ord("w") < ord("w + 1"));
        assert!(ord("w + 1") < ord("w*2"));
        assert!(ord("w*2") < ord("w^2"));
        assert!(ord("w^2*9 + w") < ord("w^3"));
        assert!(ord("w^w") < ord("w^(w + 1)"));
        assert!(ord("w^(w + 1)") < ord("w^w^w"));
        assert_eq!(ord("w + 3").cmp(&ord("w + 3")), Ordering::Equal);
    }

    #[test]
    fn addition_examples() {
        assert_eq!(ord("1").add(&ord("w")), ord("w"));
        assert_eq!(ord("w").add(&ord("1")), ord("w + 1"));
        assert_eq!(ord("w + 1").add(&ord("w")), ord("w*2"));
        assert_eq!(ord("w^2 + w").add(&ord("w + 5")), ord("w^2 + w*2 + 5"));
        assert_eq!(ord("w*2 + 3").add(&ord("w^2")), ord("w^2"));
        assert_eq!(ord("3").add(&ord("4")), ord("7"));
    }

    #[test]
    fn classification() {
        assert_eq!(ord("0").classify(), OrdinalClass::Zero);
        assert_eq!(ord("17").classify(), OrdinalClass::Successor);
        assert_eq!(ord("w + 1").classify(), OrdinalClass::Successor);
        assert_eq!(ord("w").classify(), OrdinalClass::Limit);
        assert_eq!(ord("w^2 + w*3").classify(), OrdinalClass::Limit);
    }

    #[test]
    fn predecessor_of_successors_only() {
        assert_eq!(ord("w + 3").pred(), Some(ord("w + 2")));
        assert_eq!(ord("w + 1").pred(), Some(ord("w")));
        assert_eq!(ord("1").pred(), Some(ord("0")));
        assert_eq!(ord("w").pred(), None);
        assert_eq!(ord("0").pred(), None);
    }

    #[test]
    fn left_sub_splits_sums() {
        for (a, b) in [
            ("w", "w + 5"),
            ("w*2", "w^2 + 3"),
            ("1", "w"),
            ("1", "5"),
            ("w^2 + w", "w^2 + w*4 + 1"),
            ("0", "w + 1"),
            ("w + 1", "w + 1"),
        ] {
            let a = ord(a);
            let b = ord(b);
            let x = a.left_sub(&b).expect("left_sub defined when a <= b");
            assert_eq!(a.add(&x), b, "a={a}, x={x}");
        }
        assert_eq!(ord("w + 1").left_sub(&ord("w")), None);
    }

    #[test]
    fn extended_ordering_and_rendering() {
        let w = ExtOrd::omega_symbol();
        let w1 = w.succ();
        assert_eq!(w.to_string(), "W");
        assert_eq!(w1.to_string(), "W+1");
        assert_eq!(ExtOrd::parse("W+w*2").unwrap().to_string(), "W+w*2");
        assert!(ExtOrd::Plain(ord("w^w^w")) < w);
        assert!(w < w1);
        assert_eq!(w.classify(), OrdinalClass::Limit);
        assert_eq!(w1.classify(), OrdinalClass::Successor);
        assert_eq!(
            ExtOrd::OmegaPlus(ord("w")).classify(),
            OrdinalClass::Limit
        );
        assert_eq!(w1.pred(), Some(w.clone()));
        assert_eq!(
            ExtOrd::Plain(ord("3")).add(&w).unwrap(),
            ExtOrd::omega_symbol()
        );
        assert_eq!(
            w.add(&ExtOrd::Plain(ord("w + 1"))).unwrap().to_string(),
            "W+w + 1"
        );
        assert!(w.add(&w1).is_err());
    }

    #[test]
    fn random_below_respects_bound() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for bound in ["1", "10", "w", "w*2 + 5", "w^2", "w^w + w^2*2 + 1"] {
            let bound = ord(bound);
            for _ in 0..300 {
                let x = random_below(&mut rng, &bound);
                assert!(x < bound, "{x} should be below {bound}");
            }
        }
    }

    fn arb_ordinal() -> impl Strategy<Value = Ordinal> {
        let leaf = (0u64..5).prop_map(Ordinal::nat);
        leaf.prop_recursive(3, 24, 4, |inner| {
            proptest::collection::vec((inner, 1u64..4), 0..4).prop_map(|mut parts| {
                // Sort and dedupe exponents to restore canonicality.
                parts.sort_by(|a, b| b.0.cmp(&a.0));
                parts.dedup_by(|a, b| a.0 == b.0);
                Ordinal { summands: parts }
            })
        })
    }

    proptest! {
        #[test]
        fn total_order_trichotomy_and_transitivity(
            a in arb_ordinal(), b in arb_ordinal(), c in arb_ordinal()
        ) {
            let ab = a.cmp(&b);
            prop_assert_eq!(b.cmp(&a), ab.reverse());
            if ab == Ordering::Less && b.cmp(&c) == Ordering::Less {
                prop_assert_eq!(a.cmp(&c), Ordering::Less);
            }
            if ab == Ordering::Equal {
                prop_assert_eq!(&a, &b);
            }
        }

        #[test]
        fn addition_is_associative_with_identity(
            a in arb_ordinal(), b in arb_ordinal(), c in arb_ordinal()
        ) {
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.add(&Ordinal::zero()), a.clone());
            prop_assert_eq!(Ordinal::zero().add(&a), a.clone());
        }

        #[test]
        fn addition_monotone_and_inflationary(a in arb_ordinal(), b in arb_ordinal()) {
            prop_assert!(a.add(&b) >= a);
            prop_assert!(a.add(&b) >= b);
        }

        #[test]
        fn render_parse_round_trip(a in arb_ordinal()) {
            prop_assert_eq!(Ordinal::parse(&a.to_string()).unwrap(), a);
        }

        #[test]
        fn left_sub_inverts_add(a in arb_ordinal(), b in arb_ordinal()) {
            let s = a.add(&b);
            let x = a.left_sub(&s).expect("a <= a + b");
            prop_assert_eq!(a.add(&x), s);
        }
    }
}
