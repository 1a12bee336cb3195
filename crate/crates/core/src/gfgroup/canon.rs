//! Canonical decomposition of `G_f` elements.
//!
//! Every word over `{F, s}` rewrites, via `s^k F^l -> (F^{s^k})^l s^k`, into a
//! product of conjugates followed by a power of `s`; collecting conjugates by
//! their `s`-exponent with the rewriting `ab -> [a,b] ba` produces the
//! canonical form
//!
//! ```text
//!   prod (F^{s^{alpha_i}})^{k_i} * prod ([F, F^{s^{beta_i}}]^{s^{gamma_i}})^{l_i} * s^y
//! ```
//!
//! with alphas strictly decreasing, `(beta, gamma)` pairs strictly decreasing
//! lexicographically, and every `beta > 0`. The alpha part and `y` are unique
//! for the group element; the commutator part is central and unique only up
//! to the relations of `A_f`, so element equality goes through the word
//! problem.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::word::{GWord, Gen};
use crate::error::Error;

/// `(F^{s^alpha})^k` with `k != 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaTerm {
    pub alpha: i64,
    pub k: BigInt,
}

/// `([F, F^{s^beta}]^{s^gamma})^l` with `beta > 0` and `l != 0`. These terms
/// are central among the conjugates of `F`, so they collect freely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommTerm {
    pub beta: i64,
    pub gamma: i64,
    pub l: BigInt,
}

/// Canonical decomposition of an element of `G_f`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CanonicalForm {
    /// Conjugate powers of `F`, alphas strictly decreasing.
    pub alpha_part: Vec<AlphaTerm>,
    /// Central commutator terms, `(beta, gamma)` strictly decreasing
    /// lexicographically.
    pub comm_part: Vec<CommTerm>,
    /// Exponent of the trailing power of `s`.
    pub y: i64,
}

impl CanonicalForm {
    pub fn identity() -> Self {
        CanonicalForm::default()
    }

    /// Structurally the identity form. A form with a nonempty commutator
    /// part may still represent the identity element; deciding that requires
    /// the word problem.
    pub fn is_identity_form(&self) -> bool {
        self.alpha_part.is_empty() && self.comm_part.is_empty() && self.y == 0
    }

    /// Total canonical term count, the size measure used by power budgets.
    pub fn term_count(&self) -> usize {
        self.alpha_part.len() + self.comm_part.len()
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity_form() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            Ok(())
        };
        for t in &self.alpha_part {
            sep(f)?;
            write!(f, "A({})^{}", t.alpha, t.k)?;
        }
        for t in &self.comm_part {
            sep(f)?;
            write!(f, "K({},{})^{}", t.beta, t.gamma, t.l)?;
        }
        sep(f)?;
        write!(f, "s^{}", self.y)
    }
}

fn checked_add(a: i64, b: i64, what: &'static str) -> Result<i64, Error> {
    a.checked_add(b).ok_or(Error::Overflow(what))
}

fn exp_to_i64(exp: &BigInt, what: &'static str) -> Result<i64, Error> {
    exp.to_i64().ok_or(Error::Overflow(what))
}

/// Rewrite `w` into conjugate form: the list of `(alpha, k)` factors
/// `(F^{s^alpha})^k` in word order (uncollected) and the trailing
/// `s`-exponent. A single left-to-right pass tracking the running `s`-prefix.
pub fn to_conjugate_form(w: &GWord) -> Result<(Vec<(i64, BigInt)>, i64), Error> {
    let mut prefix: i64 = 0;
    let mut parts = Vec::new();
    for (gen, exp) in w.letters() {
        match gen {
            Gen::S => {
                prefix = checked_add(prefix, exp_to_i64(exp, "s-exponent")?, "s-prefix")?;
            }
            Gen::F => parts.push((prefix, exp.clone())),
        }
    }
    Ok((parts, prefix))
}

/// The central correction created by commuting `(F^{s^{a.alpha}})^{a.k}`
/// (on the left) past `(F^{s^{b.alpha}})^{b.k}`: the rewriting
/// `ab -> [a,b] ba` produces `[F, F^{s^{b.alpha - a.alpha}}]^{s^{a.alpha}}`
/// raised to `a.k * b.k`, beta-normalized so the stored beta is positive.
pub fn swap_commutator(a: &AlphaTerm, b: &AlphaTerm) -> Result<Vec<CommTerm>, Error> {
    if a.alpha == b.alpha {
        return Err(Error::BadIndex(
            "swap_commutator requires distinct alphas; equal terms merge".into(),
        ));
    }
    let (beta, gamma, l) = swap_correction(a.alpha, &a.k, b.alpha, &b.k)?;
    Ok(vec![CommTerm { beta, gamma, l }])
}

fn swap_correction(
    a_alpha: i64,
    a_k: &BigInt,
    b_alpha: i64,
    b_k: &BigInt,
) -> Result<(i64, i64, BigInt), Error> {
    let raw_beta = b_alpha
        .checked_sub(a_alpha)
        .ok_or(Error::Overflow("commutator beta"))?;
    debug_assert_ne!(raw_beta, 0);
    let l = a_k * b_k;
    if raw_beta > 0 {
        Ok((raw_beta, a_alpha, l))
    } else {
        // [F, F^{s^{-j}}] = [F, F^{s^j}]^{-s^{-j}}, so a raw negative beta
        // normalizes by shifting gamma down by j and negating the exponent.
        let j = raw_beta.checked_neg().ok_or(Error::Overflow("beta"))?;
        Ok((j, checked_add(a_alpha, raw_beta, "gamma")?, -l))
    }
}

fn add_comm(map: &mut BTreeMap<(i64, i64), BigInt>, beta: i64, gamma: i64, l: BigInt) {
    let entry = map.entry((beta, gamma)).or_insert_with(BigInt::zero);
    *entry += l;
    if entry.is_zero() {
        map.remove(&(beta, gamma));
    }
}

fn canonicalize_with(
    parts: Vec<(i64, BigInt)>,
    mut comm: BTreeMap<(i64, i64), BigInt>,
    y: i64,
) -> Result<CanonicalForm, Error> {
    // Insertion sort by adjacent transpositions; every transposition of
    // unequal alphas deposits a central correction, and equal alphas merge.
    let mut sorted: Vec<(i64, BigInt)> = Vec::with_capacity(parts.len());
    for (alpha, k) in parts {
        if k.is_zero() {
            continue;
        }
        let mut pos = sorted.len();
        loop {
            if pos == 0 {
                sorted.insert(0, (alpha, k));
                break;
            }
            let left = &sorted[pos - 1];
            if left.0 > alpha {
                sorted.insert(pos, (alpha, k));
                break;
            }
            if left.0 == alpha {
                sorted[pos - 1].1 += &k;
                if sorted[pos - 1].1.is_zero() {
                    sorted.remove(pos - 1);
                }
                break;
            }
            let (beta, gamma, l) = swap_correction(left.0, &left.1, alpha, &k)?;
            add_comm(&mut comm, beta, gamma, l);
            pos -= 1;
        }
    }

    Ok(CanonicalForm {
        alpha_part: sorted
            .into_iter()
            .map(|(alpha, k)| AlphaTerm { alpha, k })
            .collect(),
        comm_part: comm
            .into_iter()
            .rev()
            .map(|((beta, gamma), l)| CommTerm { beta, gamma, l })
            .collect(),
        y,
    })
}

/// Collect the output of [`to_conjugate_form`] into a canonical form.
pub fn canonicalize_parts(parts: Vec<(i64, BigInt)>, y: i64) -> Result<CanonicalForm, Error> {
    canonicalize_with(parts, BTreeMap::new(), y)
}

/// Canonical form of a word.
pub fn canonicalize(w: &GWord) -> Result<CanonicalForm, Error> {
    let (parts, y) = to_conjugate_form(w)?;
    canonicalize_parts(parts, y)
}

/// Product of two canonical forms. Conjugation by `s^{g1.y}` shifts every
/// index of `g2` (`alpha += y1`, `gamma += y1`, betas unchanged); the alpha
/// lists concatenate and re-collect, the central parts merge additively.
pub fn multiply(g1: &CanonicalForm, g2: &CanonicalForm) -> Result<CanonicalForm, Error> {
    let shift = g1.y;
    let mut parts: Vec<(i64, BigInt)> = g1
        .alpha_part
        .iter()
        .map(|t| (t.alpha, t.k.clone()))
        .collect();
    for t in &g2.alpha_part {
        parts.push((checked_add(t.alpha, shift, "alpha shift")?, t.k.clone()));
    }
    let mut comm = BTreeMap::new();
    for t in &g1.comm_part {
        add_comm(&mut comm, t.beta, t.gamma, t.l.clone());
    }
    for t in &g2.comm_part {
        add_comm(
            &mut comm,
            t.beta,
            checked_add(t.gamma, shift, "gamma shift")?,
            t.l.clone(),
        );
    }
    canonicalize_with(parts, comm, checked_add(g1.y, g2.y, "s-exponent")?)
}

/// Inverse of a canonical form.
pub fn invert(g: &CanonicalForm) -> Result<CanonicalForm, Error> {
    let y = g.y.checked_neg().ok_or(Error::Overflow("s-exponent"))?;
    // g^{-1} = s^{-y} C^{-1} A^{-1}; pulling s^{-y} to the right shifts every
    // index down by y, and inverting A reverses its factors.
    let mut parts = Vec::with_capacity(g.alpha_part.len());
    for t in g.alpha_part.iter().rev() {
        parts.push((checked_add(t.alpha, y, "alpha shift")?, -&t.k));
    }
    let mut comm = BTreeMap::new();
    for t in &g.comm_part {
        add_comm(
            &mut comm,
            t.beta,
            checked_add(t.gamma, y, "gamma shift")?,
            -&t.l,
        );
    }
    canonicalize_with(parts, comm, y)
}

/// `g^x` by square-and-multiply, with an optional cap on the canonical term
/// count of intermediate results.
fn power_impl(
    g: &CanonicalForm,
    x: &BigInt,
    budget: Option<usize>,
) -> Result<CanonicalForm, Error> {
    if x.is_zero() {
        return Ok(CanonicalForm::identity());
    }
    let check = |form: CanonicalForm| -> Result<CanonicalForm, Error> {
        if let Some(max) = budget {
            let terms = form.term_count();
            if terms > max {
                return Err(Error::BudgetExceeded { at_least: terms });
            }
        }
        Ok(form)
    };

    let base = if x.is_negative() { invert(g)? } else { g.clone() };
    let mut result = CanonicalForm::identity();
    let mut square = check(base)?;
    let bits = x.abs();
    let nbits = bits.bits();
    for i in 0..nbits {
        if bits.bit(i) {
            result = check(multiply(&result, &square)?)?;
        }
        if i + 1 < nbits {
            square = check(multiply(&square, &square)?)?;
        }
    }
    Ok(result)
}

/// `g^x`, unbudgeted.
pub fn power(g: &CanonicalForm, x: &BigInt) -> Result<CanonicalForm, Error> {
    power_impl(g, x, None)
}

/// `g^x`, failing with [`Error::BudgetExceeded`] as soon as an intermediate
/// canonical form has more than `max_terms` terms. Term counts grow
/// monotonically with `|x|` in the shapes the discrete log verifier feeds
/// here, so exceeding the cap certifies the result is larger than the target.
pub fn power_within(g: &CanonicalForm, x: &BigInt, max_terms: usize) -> Result<CanonicalForm, Error> {
    power_impl(g, x, Some(max_terms))
}

/// The s-exponent of the canonical form, a homomorphism onto the integers.
pub fn pi_s(g: &CanonicalForm) -> i64 {
    g.y
}

/// Exponent of `F^{s^alpha}` in the alpha part, zero off-support.
pub fn deg_alpha(g: &CanonicalForm, alpha: i64) -> BigInt {
    g.alpha_part
        .iter()
        .find(|t| t.alpha == alpha)
        .map(|t| t.k.clone())
        .unwrap_or_else(BigInt::zero)
}

/// Expand a canonical form back into a word over `{F, s}`: each alpha term
/// as `s^a F^k s^-a`, each commutator term as the conjugated expansion of
/// `[F^l, F^{s^beta}]`, then `s^y`.
pub fn canonical_to_word(g: &CanonicalForm) -> GWord {
    let mut word = GWord::new();
    for t in &g.alpha_part {
        word.push(Gen::S, t.alpha);
        word.push(Gen::F, t.k.clone());
        word.push(Gen::S, -t.alpha);
    }
    for t in &g.comm_part {
        word.push(Gen::S, t.gamma);
        push_comm_word(&mut word, t.beta, &t.l);
        word.push(Gen::S, -t.gamma);
    }
    word.push(Gen::S, g.y);
    word
}

/// Append the expansion `F^k s^beta F s^-beta F^-k s^beta F^-1 s^-beta` of
/// `[F^k, F^{s^beta}] = [F, F^{s^beta}]^k`.
pub(crate) fn push_comm_word(word: &mut GWord, beta: i64, k: &BigInt) {
    if k.is_zero() {
        return;
    }
    word.push(Gen::F, k.clone());
    word.push(Gen::S, beta);
    word.push(Gen::F, 1);
    word.push(Gen::S, -beta);
    word.push(Gen::F, -k);
    word.push(Gen::S, beta);
    word.push(Gen::F, -1);
    word.push(Gen::S, -beta);
}
