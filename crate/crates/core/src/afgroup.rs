//! The countable abelian group `A_f` on generators `a_0, a_1, ...` and
//! `b_0, b_1, ...` subject to `a_n^{f(n)} = b_n`, with `f` supplied by a
//! [`FunctionOracle`].
//!
//! Reduction and the word problem only ever *verify* claimed values of `f`;
//! the discrete log solver is the one operation that must *evaluate* `f`.
//! Generator indices start at 0 (index 0 arises naturally from the parity
//! map used by the two-generator embedding in [`crate::gfgroup`]).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::numutil::log2_big;
use crate::oracle::FunctionOracle;

/// Which generator family a term belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    A,
    B,
}

impl Family {
    fn letter(self) -> char {
        match self {
            Family::A => 'a',
            Family::B => 'b',
        }
    }
}

/// One factor `a_n^k` or `b_n^k` of a word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ATerm {
    pub family: Family,
    pub index: u64,
    pub exponent: BigInt,
}

impl ATerm {
    pub fn new(family: Family, index: u64, exponent: impl Into<BigInt>) -> Self {
        ATerm {
            family,
            index,
            exponent: exponent.into(),
        }
    }
}

impl fmt::Display for ATerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.index)?;
        if !self.exponent.is_one() {
            write!(f, "^{}", self.exponent)?;
        }
        Ok(())
    }
}

/// An arbitrary word over the generators; the empty word is the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AWord {
    terms: Vec<ATerm>,
}

impl AWord {
    pub fn new() -> Self {
        AWord::default()
    }

    pub fn from_terms(terms: Vec<ATerm>) -> Self {
        AWord { terms }
    }

    pub fn terms(&self) -> &[ATerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, term: ATerm) {
        self.terms.push(term);
    }

    pub fn concat(&self, other: &AWord) -> AWord {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        AWord { terms }
    }

    /// The word representing this element raised to `x` (the group is
    /// abelian, so exponents simply scale).
    pub fn pow(&self, x: &BigInt) -> AWord {
        if x.is_zero() {
            return AWord::new();
        }
        AWord {
            terms: self
                .terms
                .iter()
                .map(|t| ATerm::new(t.family, t.index, &t.exponent * x))
                .collect(),
        }
    }
}

impl fmt::Display for AWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for t in &self.terms {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{t}")?;
            first = false;
        }
        Ok(())
    }
}

/// A word in reduced form: per family, indices are pairwise distinct and
/// exponents nonzero; no pair `a_n^k, b_n^l` with `k = -l*f(n)` remains; terms
/// are sorted with the `a` family first, then by ascending index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReducedAWord {
    terms: Vec<ATerm>,
}

impl ReducedAWord {
    pub fn terms(&self) -> &[ATerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_word(&self) -> AWord {
        AWord {
            terms: self.terms.clone(),
        }
    }

    /// Exponent of the given generator, zero if absent.
    pub fn exponent_of(&self, family: Family, index: u64) -> BigInt {
        self.terms
            .iter()
            .find(|t| t.family == family && t.index == index)
            .map(|t| t.exponent.clone())
            .unwrap_or_else(BigInt::zero)
    }

    /// Indices carrying a nonzero exponent in either family, ascending.
    pub fn support(&self) -> BTreeSet<u64> {
        self.terms.iter().map(|t| t.index).collect()
    }
}

impl fmt::Display for ReducedAWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        AWord {
            terms: self.terms.clone(),
        }
        .fmt(f)
    }
}

/// Outcome of a discrete log query `u^x = v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DlpResult {
    Unique(BigInt),
    NoSolution,
    /// Every integer solves the equation; only possible when the base is the
    /// identity.
    AllIntegers,
}

/// Bit-length measure of a word: the sum of `log2(max(1, |n*k|))` over all
/// terms (generator index times exponent).
pub fn length_a(w: &AWord) -> f64 {
    w.terms
        .iter()
        .map(|t| log2_big(&(BigInt::from(t.index) * &t.exponent)))
        .sum()
}

/// Transform `w` into reduced form. Exponents of equal generators merge
/// additively, zero exponents are dropped, and a pair `a_n^k, b_n^l` is
/// cancelled exactly when `-k/l` is a positive integer that the oracle
/// verifies as `f(n)`. Only `verify` is ever called.
pub fn reduce(w: &AWord, oracle: &FunctionOracle) -> ReducedAWord {
    let mut families = [BTreeMap::<u64, BigInt>::new(), BTreeMap::new()];
    for t in &w.terms {
        let map = &mut families[(t.family == Family::B) as usize];
        let entry = map.entry(t.index).or_insert_with(BigInt::zero);
        *entry += &t.exponent;
        if entry.is_zero() {
            map.remove(&t.index);
        }
    }
    let [mut a_map, mut b_map] = families;

    let shared: Vec<u64> = a_map
        .keys()
        .filter(|n| b_map.contains_key(n))
        .copied()
        .collect();
    for n in shared {
        let k = &a_map[&n];
        let l = &b_map[&n];
        if (k % l).is_zero() {
            let m = -(k / l);
            if m >= BigInt::one() && oracle.verify(n, &m) {
                a_map.remove(&n);
                b_map.remove(&n);
            }
        }
    }

    let mut terms = Vec::with_capacity(a_map.len() + b_map.len());
    terms.extend(
        a_map
            .into_iter()
            .map(|(n, k)| ATerm::new(Family::A, n, k)),
    );
    terms.extend(
        b_map
            .into_iter()
            .map(|(n, k)| ATerm::new(Family::B, n, k)),
    );
    ReducedAWord { terms }
}

/// Word problem: does `w` represent the identity of `A_f`? Verification-only.
pub fn wp_a(w: &AWord, oracle: &FunctionOracle) -> bool {
    reduce(w, oracle).is_empty()
}

/// Solve `u^x = v` in `A_f`.
///
/// Works on the total exponent vectors `d_n = k_n + l_n*f(n)` (which requires
/// evaluating `f` once per index in the base's support). For a reduced
/// nonempty base every `d_n` is nonzero, so the candidate from the first
/// index either solves every coordinate or no integer does.
pub fn dlp_a(u: &AWord, v: &AWord, oracle: &FunctionOracle) -> Result<DlpResult, Error> {
    let ur = reduce(u, oracle);
    let vr = reduce(v, oracle);
    if ur.is_empty() {
        return Ok(if vr.is_empty() {
            DlpResult::AllIntegers
        } else {
            DlpResult::NoSolution
        });
    }
    let u_supp = ur.support();
    if !vr.support().is_subset(&u_supp) {
        return Ok(DlpResult::NoSolution);
    }

    let mut x: Option<BigInt> = None;
    for &n in &u_supp {
        let f_n = BigInt::from(oracle.eval(n)?);
        let d = ur.exponent_of(Family::A, n) + ur.exponent_of(Family::B, n) * &f_n;
        let d2 = vr.exponent_of(Family::A, n) + vr.exponent_of(Family::B, n) * &f_n;
        debug_assert!(!d.is_zero());
        match &x {
            None => {
                let (q, r) = d2.div_rem(&d);
                if !r.is_zero() {
                    return Ok(DlpResult::NoSolution);
                }
                x = Some(q);
            }
            Some(x) => {
                if x * &d != d2 {
                    return Ok(DlpResult::NoSolution);
                }
            }
        }
    }
    Ok(DlpResult::Unique(x.expect("nonempty support")))
}

/// Parse the A-word grammar: whitespace-separated tokens `a<i>`, `b<i>`,
/// `a<i>^<e>`, `b<i>^<e>`; empty input is the identity.
pub fn parse_aword(text: &str) -> Result<AWord, Error> {
    let mut terms = Vec::new();
    for (start, tok) in tokens(text) {
        terms.push(parse_aterm(tok, start)?);
    }
    Ok(AWord { terms })
}

pub(crate) fn tokens(text: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut rest = text;
    let mut offset = 0;
    std::iter::from_fn(move || {
        let skip = rest.len() - rest.trim_start().len();
        offset += skip;
        rest = &rest[skip..];
        if rest.is_empty() {
            return None;
        }
        let end = rest
            .find(char::is_whitespace)
            .unwrap_or(rest.len());
        let tok = &rest[..end];
        let start = offset;
        offset += end;
        rest = &rest[end..];
        Some((start, tok))
    })
}

fn parse_aterm(tok: &str, off: usize) -> Result<ATerm, Error> {
    let family = match tok.chars().next() {
        Some('a') => Family::A,
        Some('b') => Family::B,
        _ => return Err(Error::parse(off, format!("expected `a` or `b` in `{tok}`"))),
    };
    let body = &tok[1..];
    let (idx_str, exp_str) = match body.find('^') {
        Some(caret) => (&body[..caret], &body[caret + 1..]),
        None => (body, "1"),
    };
    if idx_str.is_empty() || !idx_str.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(
            off,
            format!("expected a decimal generator index in `{tok}`"),
        ));
    }
    let index: u64 = idx_str
        .parse()
        .map_err(|_| Error::parse(off, format!("generator index out of range in `{tok}`")))?;
    let exponent: BigInt = exp_str
        .parse()
        .map_err(|_| Error::parse(off, format!("invalid exponent in `{tok}`")))?;
    Ok(ATerm::new(family, index, exponent))
}
