//! Words over the two generators `F` and `s` of `G_f`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::afgroup::tokens;
use crate::error::Error;
use crate::numutil::log2_big;

/// One of the two generators of `G_f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gen {
    F,
    S,
}

impl Gen {
    fn letter(self) -> char {
        match self {
            Gen::F => 'F',
            Gen::S => 's',
        }
    }
}

/// A word over `{F, s}` with big-integer block exponents. Adjacent letters
/// with equal generators are merged and zero exponents dropped, so the
/// stored blocks strictly alternate.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GWord {
    letters: Vec<(Gen, BigInt)>,
}

impl GWord {
    pub fn new() -> Self {
        GWord::default()
    }

    pub fn from_letters(letters: impl IntoIterator<Item = (Gen, BigInt)>) -> Self {
        let mut word = GWord::new();
        for (gen, exp) in letters {
            word.push(gen, exp);
        }
        word
    }

    /// Append one block, merging with the tail and cancelling to keep the
    /// alternation invariant.
    pub fn push(&mut self, gen: Gen, exp: impl Into<BigInt>) {
        let exp = exp.into();
        if exp.is_zero() {
            return;
        }
        match self.letters.last_mut() {
            Some((last, e)) if *last == gen => {
                *e += exp;
                if e.is_zero() {
                    self.letters.pop();
                }
            }
            _ => self.letters.push((gen, exp)),
        }
    }

    pub fn letters(&self) -> &[(Gen, BigInt)] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &GWord) -> GWord {
        let mut word = self.clone();
        for (gen, exp) in &other.letters {
            word.push(*gen, exp.clone());
        }
        word
    }

    /// The formal inverse: blocks reversed with negated exponents.
    pub fn inverse(&self) -> GWord {
        let mut word = GWord::new();
        for (gen, exp) in self.letters.iter().rev() {
            word.push(*gen, -exp);
        }
        word
    }
}

impl fmt::Display for GWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (gen, exp) in &self.letters {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{}", gen.letter())?;
            if !exp.is_one() {
                write!(f, "^{exp}")?;
            }
        }
        Ok(())
    }
}

/// Parse the G-word grammar: whitespace-separated tokens `F`, `s`, `F^<e>`,
/// `s^<e>` with decimal, possibly negative exponents. Empty input is the
/// identity.
pub fn parse_gword(text: &str) -> Result<GWord, Error> {
    let mut word = GWord::new();
    for (start, tok) in tokens(text) {
        let gen = match tok.chars().next() {
            Some('F') => Gen::F,
            Some('s') => Gen::S,
            _ => {
                return Err(Error::parse(
                    start,
                    format!("expected `F` or `s` in `{tok}`"),
                ))
            }
        };
        let rest = &tok[1..];
        let exp: BigInt = if rest.is_empty() {
            BigInt::one()
        } else if let Some(exp_str) = rest.strip_prefix('^') {
            exp_str
                .parse()
                .map_err(|_| Error::parse(start, format!("invalid exponent in `{tok}`")))?
        } else {
            return Err(Error::parse(
                start,
                format!("unexpected characters after generator in `{tok}`"),
            ));
        };
        word.push(gen, exp);
    }
    Ok(word)
}

/// Bit-length of a word: for `w = F^{k_0} s^{l_1} F^{k_1} ... s^{l_t} F^{k_t}
/// s^{l_{t+1}}` this is `log2(|k_0|+1) + log2(|l_{t+1}|+1) + sum_i
/// log2(|k_i*l_i|+1)`, each interior `s`-block pairing with the `F`-block
/// that follows it.
pub fn length_g(w: &GWord) -> f64 {
    let blocks = w.letters();
    let mut total = 0.0;
    let mut i = 0;
    if let Some((Gen::F, k0)) = blocks.first() {
        total += log2_big(&(k0.abs() + 1));
        i = 1;
    }
    while i < blocks.len() {
        debug_assert_eq!(blocks[i].0, Gen::S);
        let l = &blocks[i].1;
        if i + 1 < blocks.len() {
            let k = &blocks[i + 1].1;
            total += log2_big(&((l * k).abs() + 1));
            i += 2;
        } else {
            total += log2_big(&(l.abs() + 1));
            i += 1;
        }
    }
    total
}
