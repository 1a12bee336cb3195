//! The embedding of `A_f` into `G_f`, the word problem, and discrete log.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::canon::{
    canonicalize, deg_alpha, invert, multiply, pi_s, power_within, push_comm_word, CanonicalForm,
    CommTerm,
};
use super::word::GWord;
use crate::afgroup::{self, ATerm, AWord, DlpResult, Family};
use crate::error::Error;
use crate::oracle::FunctionOracle;

/// Headroom factor for the term-count budget used when verifying a discrete
/// log candidate by powering.
const POWER_BUDGET_FACTOR: usize = 4;

fn beta_for(family: Family, index: u64) -> Result<i64, Error> {
    let beta = match family {
        Family::A => index
            .checked_mul(2)
            .and_then(|v| v.checked_add(1))
            .ok_or(Error::Overflow("embedding index"))?,
        Family::B => {
            if index == 0 {
                return Err(Error::BadIndex(
                    "b_0 has no commutator image (beta must be positive)".into(),
                ));
            }
            index.checked_mul(2).ok_or(Error::Overflow("embedding index"))?
        }
    };
    i64::try_from(beta).map_err(|_| Error::Overflow("embedding index"))
}

/// Image of `a_i` under the embedding: the expanded word for
/// `[F, F^{s^{2i+1}}]`.
pub fn embed_a(i: u64) -> Result<GWord, Error> {
    let beta = beta_for(Family::A, i)?;
    let mut w = GWord::new();
    push_comm_word(&mut w, beta, &BigInt::one());
    Ok(w)
}

/// Image of `b_i` (`i >= 1`): the expanded word for `[F, F^{s^{2i}}]`.
pub fn embed_b(i: u64) -> Result<GWord, Error> {
    let beta = beta_for(Family::B, i)?;
    let mut w = GWord::new();
    push_comm_word(&mut w, beta, &BigInt::one());
    Ok(w)
}

/// Image of a whole `A_f` word: each term `a_i^k` maps to `[F^k, F^{s^beta}]`
/// with the parity-encoded `beta`; the images are central among each other,
/// so plain concatenation is a homomorphism.
pub fn embed_aword(w: &AWord) -> Result<GWord, Error> {
    let mut out = GWord::new();
    for t in w.terms() {
        let beta = beta_for(t.family, t.index)?;
        push_comm_word(&mut out, beta, &t.exponent);
    }
    Ok(out)
}

/// Decode a block of commutator terms sharing one gamma back into an `A_f`
/// word: beta odd maps to `a_{(beta-1)/2}`, beta even to `b_{beta/2}`.
pub fn comm_to_aword(block: &[CommTerm]) -> Result<AWord, Error> {
    let mut word = AWord::new();
    for t in block {
        if t.beta <= 0 {
            return Err(Error::BadIndex(format!(
                "commutator term with non-positive beta {}",
                t.beta
            )));
        }
        debug_assert_eq!(t.gamma, block[0].gamma);
        let beta = t.beta as u64;
        let (family, index) = if beta % 2 == 1 {
            (Family::A, (beta - 1) / 2)
        } else {
            (Family::B, beta / 2)
        };
        word.push(ATerm::new(family, index, t.l.clone()));
    }
    Ok(word)
}

fn gamma_blocks(g: &CanonicalForm) -> BTreeMap<i64, Vec<CommTerm>> {
    let mut blocks: BTreeMap<i64, Vec<CommTerm>> = BTreeMap::new();
    for t in &g.comm_part {
        blocks.entry(t.gamma).or_default().push(t.clone());
    }
    blocks
}

/// Word problem on a canonical form: trivial iff the alpha part and `y`
/// vanish and every per-gamma block of the commutator part maps to a trivial
/// `A_f` word. Verification-only.
pub fn wp_canonical(g: &CanonicalForm, oracle: &FunctionOracle) -> Result<bool, Error> {
    if !g.alpha_part.is_empty() || g.y != 0 {
        return Ok(false);
    }
    for block in gamma_blocks(g).values() {
        if !afgroup::wp_a(&comm_to_aword(block)?, oracle) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Word problem in `G_f`: does `w` represent the identity?
pub fn wp_g(w: &GWord, oracle: &FunctionOracle) -> Result<bool, Error> {
    wp_canonical(&canonicalize(w)?, oracle)
}

/// Group equality of two canonical forms, via the word problem on
/// `g * h^{-1}`.
pub fn equals(g: &CanonicalForm, h: &CanonicalForm, oracle: &FunctionOracle) -> Result<bool, Error> {
    wp_canonical(&multiply(g, &invert(h)?)?, oracle)
}

/// Verify the single possible exponent by powering under a term budget;
/// blowing the budget certifies the power cannot equal `h` at that size.
fn verify_candidate(
    g: &CanonicalForm,
    h: &CanonicalForm,
    x: BigInt,
    oracle: &FunctionOracle,
) -> Result<DlpResult, Error> {
    let budget = POWER_BUDGET_FACTOR * (g.term_count() + h.term_count() + 8);
    match power_within(g, &x, budget) {
        Ok(gx) => {
            if equals(&gx, h, oracle)? {
                Ok(DlpResult::Unique(x))
            } else {
                Ok(DlpResult::NoSolution)
            }
        }
        Err(Error::BudgetExceeded { .. }) => Ok(DlpResult::NoSolution),
        Err(e) => Err(e),
    }
}

/// Solve `g^x = h` in `G_f`.
///
/// Case analysis: a nonzero `s`-exponent pins `x = pi_s(h)/pi_s(g)`; failing
/// that, a nonzero alpha degree pins `x = deg(h)/deg(g)`; both candidates are
/// then verified by a budgeted power. Otherwise both elements lie in the
/// central commutator subgroup and the problem splits per gamma into
/// discrete logs in `A_f` (the one evaluation-heavy path).
pub fn dlp_g(
    g: &CanonicalForm,
    h: &CanonicalForm,
    oracle: &FunctionOracle,
) -> Result<DlpResult, Error> {
    if wp_canonical(g, oracle)? {
        return Ok(if wp_canonical(h, oracle)? {
            DlpResult::AllIntegers
        } else {
            DlpResult::NoSolution
        });
    }

    let pg = pi_s(g);
    let ph = pi_s(h);
    if pg != 0 {
        let Some(rem) = ph.checked_rem(pg) else {
            return Err(Error::Overflow("pi_s ratio"));
        };
        if rem != 0 {
            return Ok(DlpResult::NoSolution);
        }
        let x = ph.checked_div(pg).ok_or(Error::Overflow("pi_s ratio"))?;
        return verify_candidate(g, h, BigInt::from(x), oracle);
    }
    if ph != 0 {
        return Ok(DlpResult::NoSolution);
    }

    if let Some(t) = g.alpha_part.first() {
        let dh = deg_alpha(h, t.alpha);
        let (q, r) = dh.div_rem(&t.k);
        if !r.is_zero() {
            return Ok(DlpResult::NoSolution);
        }
        return verify_candidate(g, h, q, oracle);
    }
    if !h.alpha_part.is_empty() {
        return Ok(DlpResult::NoSolution);
    }

    // Both in the central subgroup: per-gamma blocks reduce to A_f, with
    // blocks missing on one side pairing against the empty word.
    let g_blocks = gamma_blocks(g);
    let h_blocks = gamma_blocks(h);
    let gammas: std::collections::BTreeSet<i64> =
        g_blocks.keys().chain(h_blocks.keys()).copied().collect();
    let empty: Vec<CommTerm> = Vec::new();
    let mut unique: Option<BigInt> = None;
    for gamma in gammas {
        let u = comm_to_aword(g_blocks.get(&gamma).unwrap_or(&empty))?;
        let v = comm_to_aword(h_blocks.get(&gamma).unwrap_or(&empty))?;
        match afgroup::dlp_a(&u, &v, oracle)? {
            DlpResult::NoSolution => return Ok(DlpResult::NoSolution),
            DlpResult::AllIntegers => {}
            DlpResult::Unique(x) => match &unique {
                None => unique = Some(x),
                Some(prev) if *prev != x => return Ok(DlpResult::NoSolution),
                Some(_) => {}
            },
        }
    }
    Ok(match unique {
        Some(x) => DlpResult::Unique(x),
        None => DlpResult::AllIntegers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::afgroup::parse_aword;
    use crate::gfgroup::word::parse_gword;
    use crate::gfgroup::{canonical_to_word, power};
    use crate::oracle::parse_spec;
    use crate::semantics;

    fn succ() -> FunctionOracle {
        parse_spec("succ").unwrap()
    }

    fn canon(text: &str) -> CanonicalForm {
        canonicalize(&parse_gword(text).unwrap()).unwrap()
    }

    #[test]
    fn embed_words_are_exact() {
        assert_eq!(
            embed_a(2).unwrap().to_string(),
            "F s^5 F s^-5 F^-1 s^5 F^-1 s^-5"
        );
        assert_eq!(
            embed_b(1).unwrap().to_string(),
            "F s^2 F s^-2 F^-1 s^2 F^-1 s^-2"
        );
        assert!(embed_b(0).is_err());

        // Canonical image: a single commutator term at gamma 0.
        for i in 0..4u64 {
            let cf = canonicalize(&embed_a(i).unwrap()).unwrap();
            assert!(cf.alpha_part.is_empty());
            assert_eq!(cf.y, 0);
            assert_eq!(cf.comm_part.len(), 1);
            let t = &cf.comm_part[0];
            assert_eq!((t.beta, t.gamma), (2 * i as i64 + 1, 0));
            assert_eq!(t.l, BigInt::one());
        }
    }

    #[test]
    fn comm_to_aword_examples() {
        let block = vec![CommTerm {
            beta: 3,
            gamma: 0,
            l: BigInt::from(2),
        }];
        assert_eq!(comm_to_aword(&block).unwrap().to_string(), "a1^2");
        let block = vec![CommTerm {
            beta: 2,
            gamma: 5,
            l: BigInt::from(-1),
        }];
        assert_eq!(comm_to_aword(&block).unwrap().to_string(), "b1^-1");
        let block = vec![CommTerm {
            beta: 1,
            gamma: 0,
            l: BigInt::one(),
        }];
        assert_eq!(comm_to_aword(&block).unwrap().to_string(), "a0");
    }

    #[test]
    fn wp_examples() {
        let o = succ();
        assert!(wp_g(&GWord::new(), &o).unwrap());
        assert!(!wp_g(&parse_gword("F s").unwrap(), &o).unwrap());
        assert!(wp_g(&parse_gword("F F^-1").unwrap(), &o).unwrap());
        // Psi(a_1^{f(1)} b_1^{-1}) is trivial: f(1) = 2 under succ.
        let w = embed_aword(&parse_aword("a1^2 b1^-1").unwrap()).unwrap();
        assert!(wp_g(&w, &o).unwrap());
        let w = embed_aword(&parse_aword("a1^3 b1^-1").unwrap()).unwrap();
        assert!(!wp_g(&w, &o).unwrap());
        assert_eq!(o.snapshot_meter().eval_calls, 0);
    }

    #[test]
    fn equality_examples() {
        let o = succ();
        let g = canon("F s^2 F^-1");
        assert!(equals(&g, &g, &o).unwrap());
        assert!(!equals(&CanonicalForm::identity(), &canon("s"), &o).unwrap());
        // F * F^s equals its swapped product with the commutator correction.
        let lhs = canon("F s F s^-1");
        let rhs = canon("F s F s^-1 F^-1 s F^-1 s^-1 s F s^-1 F");
        assert!(equals(&lhs, &rhs, &o).unwrap());
    }

    #[test]
    fn dlp_case_one_and_two() {
        let o = succ();
        assert_eq!(
            dlp_g(&canon("s"), &canon("s^6"), &o).unwrap(),
            DlpResult::Unique(BigInt::from(6))
        );
        assert_eq!(
            dlp_g(&canon("s^2"), &canon("s^7"), &o).unwrap(),
            DlpResult::NoSolution
        );
        assert_eq!(
            dlp_g(&canon("F"), &canon("s"), &o).unwrap(),
            DlpResult::NoSolution
        );
        assert_eq!(
            dlp_g(&canon("F"), &canon("F^5"), &o).unwrap(),
            DlpResult::Unique(BigInt::from(5))
        );
        assert_eq!(
            dlp_g(&canon("s^-2"), &canon("s^6"), &o).unwrap(),
            DlpResult::Unique(BigInt::from(-3))
        );
        // Alpha-degree ratios must divide exactly.
        assert_eq!(
            dlp_g(&canon("F^2"), &canon("F^6"), &o).unwrap(),
            DlpResult::Unique(BigInt::from(3))
        );
        assert_eq!(
            dlp_g(&canon("F^2"), &canon("F^5"), &o).unwrap(),
            DlpResult::NoSolution
        );
        // pi_s divides but the power mismatches.
        assert_eq!(
            dlp_g(&canon("F s"), &canon("F^2 s^2"), &o).unwrap(),
            DlpResult::NoSolution
        );
        // Trivial base.
        assert_eq!(
            dlp_g(&CanonicalForm::identity(), &CanonicalForm::identity(), &o).unwrap(),
            DlpResult::AllIntegers
        );
        assert_eq!(
            dlp_g(&CanonicalForm::identity(), &canon("F"), &o).unwrap(),
            DlpResult::NoSolution
        );
    }

    #[test]
    fn dlp_realizes_f_on_embedded_generators() {
        for (spec, f) in [
            ("succ", Box::new(|i: u64| i + 1) as Box<dyn Fn(u64) -> u64>),
            ("affine(a=3,b=2)", Box::new(|i: u64| 3 * i + 2)),
        ] {
            let o = parse_spec(spec).unwrap();
            for i in 1..=6u64 {
                let g = canonicalize(&embed_a(i).unwrap()).unwrap();
                let h = canonicalize(&embed_b(i).unwrap()).unwrap();
                assert_eq!(
                    dlp_g(&g, &h, &o).unwrap(),
                    DlpResult::Unique(BigInt::from(f(i))),
                    "oracle {spec}, i = {i}"
                );
            }
        }
    }

    #[test]
    fn dlp_central_case_combines_blocks() {
        let o = succ();
        // g with two gamma blocks; h = g^3.
        let g_word = parse_gword("s^2").unwrap()
            .concat(&embed_a(1).unwrap())
            .concat(&parse_gword("s^-2").unwrap())
            .concat(&embed_a(2).unwrap());
        let g = canonicalize(&g_word).unwrap();
        assert!(g.alpha_part.is_empty() && g.y == 0);
        assert!(g.comm_part.iter().any(|t| t.gamma == 2));
        let h = power(&g, &BigInt::from(3)).unwrap();
        assert_eq!(dlp_g(&g, &h, &o).unwrap(), DlpResult::Unique(BigInt::from(3)));
        // Inconsistent blocks: a_1 cubed at one gamma, squared at the other.
        let bad_word = parse_gword("s^2").unwrap()
            .concat(&embed_a(1).unwrap())
            .concat(&embed_a(1).unwrap())
            .concat(&embed_a(1).unwrap())
            .concat(&parse_gword("s^-2").unwrap())
            .concat(&embed_a(2).unwrap())
            .concat(&embed_a(2).unwrap());
        let bad = canonicalize(&bad_word).unwrap();
        assert_eq!(dlp_g(&g, &bad, &o).unwrap(), DlpResult::NoSolution);
        // A gamma block present in h but absent from g forces no solution.
        let extra = multiply(
            &h,
            &canonicalize(
                &parse_gword("s^9").unwrap()
                    .concat(&embed_a(3).unwrap())
                    .concat(&parse_gword("s^-9").unwrap()),
            )
            .unwrap(),
        )
        .unwrap();
        assert_eq!(dlp_g(&g, &extra, &o).unwrap(), DlpResult::NoSolution);
    }

    #[test]
    fn dlp_budget_rules_out_divergent_candidates() {
        let o = succ();
        // pi_s forces x = 10^6, but (F s)^x accumulates an alpha term per
        // unit of x; the budget cuts the verification off early and the
        // answer is a correct NoSolution.
        let g = canon("F s");
        let h = canon("s^1000000");
        assert_eq!(dlp_g(&g, &h, &o).unwrap(), DlpResult::NoSolution);
        // Control: the same exponent is fine when the power stays small.
        assert_eq!(
            dlp_g(&canon("s"), &h, &o).unwrap(),
            DlpResult::Unique(BigInt::from(1_000_000))
        );
    }

    #[test]
    fn dlp_round_trip_spot_checks() {
        let o = succ();
        for text in ["F s", "F^2 s^-1 F s^3", "s^2 F^3 s^-2 F^-1"] {
            let g = canon(text);
            for x in [-5i64, -1, 0, 1, 4] {
                let h = power(&g, &BigInt::from(x)).unwrap();
                assert_eq!(
                    dlp_g(&g, &h, &o).unwrap(),
                    DlpResult::Unique(BigInt::from(x)),
                    "base {text}, x = {x}"
                );
            }
        }
    }

    #[test]
    fn embedding_is_faithful_on_words() {
        let o = succ();
        for (text, trivial) in [
            ("a1^2 b1^-1", true),
            ("a0", false),
            ("b3", false),
            ("a2^3 b2^-1 a2", false),
            ("a4^5 b4^-1", true),
            ("", true),
        ] {
            let w = parse_aword(text).unwrap();
            let img = embed_aword(&w).unwrap();
            assert_eq!(wp_g(&img, &o).unwrap(), trivial, "{text}");
            assert_eq!(afgroup::wp_a(&w, &o), trivial, "{text}");
        }
    }

    #[test]
    fn wp_agrees_with_semantics_on_embeddings() {
        let o = succ();
        let w = embed_aword(&parse_aword("a1^2 b1^-1").unwrap()).unwrap();
        assert!(semantics::eval_word(&w, &o).unwrap().is_identity());
        let g = canon("F s F s^-1 F^-2");
        let expanded = canonical_to_word(&g);
        let direct = semantics::eval_word(&parse_gword("F s F s^-1 F^-2").unwrap(), &o).unwrap();
        assert_eq!(semantics::eval_word(&expanded, &o).unwrap(), direct);
    }
}
