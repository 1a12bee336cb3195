//! Randomized cross-checks of the symbolic pipeline against the brute-force
//! wreath-product model.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wreathlog::afgroup::{self, ATerm, AWord, DlpResult, Family};
use wreathlog::gfgroup::{
    self, canonical_to_word, canonicalize, dlp_g, embed_aword, equals, invert, length_g, multiply,
    power, wp_g, GWord, Gen,
};
use wreathlog::oracle::{parse_spec, FunctionOracle};
use wreathlog::semantics::{self, ConcreteElement};

fn random_gword(rng: &mut ChaCha8Rng, max_letters: usize) -> GWord {
    let letters = rng.gen_range(0..=max_letters);
    GWord::from_letters((0..letters).map(|_| {
        let gen = if rng.gen_bool(0.5) { Gen::F } else { Gen::S };
        let exp = loop {
            let e = rng.gen_range(-8i64..=8);
            if e != 0 {
                break e;
            }
        };
        (gen, BigInt::from(exp))
    }))
}

fn random_reduced_aword(rng: &mut ChaCha8Rng, oracle: &FunctionOracle) -> AWord {
    loop {
        let mut word = AWord::new();
        for _ in 0..rng.gen_range(1..=5) {
            let family = if rng.gen_bool(0.5) { Family::A } else { Family::B };
            let index = match family {
                Family::A => rng.gen_range(0..5u64),
                Family::B => rng.gen_range(1..5u64),
            };
            word.push(ATerm::new(family, index, rng.gen_range(-5i64..=5)));
        }
        let reduced = afgroup::reduce(&word, oracle);
        if !reduced.is_empty() {
            return reduced.to_word();
        }
    }
}

fn semantic(w: &GWord, oracle: &FunctionOracle) -> ConcreteElement {
    semantics::eval_word(w, oracle).unwrap()
}

#[test]
fn wp_matches_semantics_on_random_words() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for spec in ["succ", "affine(a=3,b=2)"] {
        let symbolic_oracle = parse_spec(spec).unwrap();
        let semantic_oracle = parse_spec(spec).unwrap();
        let mut trivial = 0;
        for i in 0..200 {
            // Every fourth word is made trivial by appending the formal inverse.
            let mut w = random_gword(&mut rng, 14);
            if i % 4 == 0 {
                w = w.concat(&w.inverse());
            }
            let expected = semantic(&w, &semantic_oracle).is_identity();
            assert_eq!(wp_g(&w, &symbolic_oracle).unwrap(), expected, "word {w}");
            trivial += expected as u32;
        }
        assert!(trivial >= 50);
        // The whole run was verification-only on the symbolic side.
        assert_eq!(symbolic_oracle.snapshot_meter().eval_calls, 0);
    }
}

#[test]
fn arithmetic_is_a_homomorphism_into_the_model() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let o = parse_spec("succ").unwrap();
    for _ in 0..60 {
        let w1 = random_gword(&mut rng, 10);
        let w2 = random_gword(&mut rng, 10);
        let g1 = canonicalize(&w1).unwrap();
        let g2 = canonicalize(&w2).unwrap();

        let product = multiply(&g1, &g2).unwrap();
        let expected = semantic(&w1, &o).mul(&semantic(&w2, &o), &o).unwrap();
        assert_eq!(semantic(&canonical_to_word(&product), &o), expected);

        let inverse = invert(&g1).unwrap();
        assert_eq!(
            semantic(&canonical_to_word(&inverse), &o),
            semantic(&w1, &o).inverse().unwrap()
        );

        let x = rng.gen_range(-6i64..=6);
        let powered = power(&g1, &BigInt::from(x)).unwrap();
        assert_eq!(
            semantic(&canonical_to_word(&powered), &o),
            semantic(&w1, &o).pow(x, &o).unwrap()
        );
    }
}

#[test]
fn canonicalization_preserves_the_element() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let o = parse_spec("succ").unwrap();
    for _ in 0..200 {
        let w = random_gword(&mut rng, 14);
        let cf = canonicalize(&w).unwrap();
        assert_eq!(semantic(&canonical_to_word(&cf), &o), semantic(&w, &o), "{w}");
    }
}

#[test]
fn commutator_terms_are_central() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let o = parse_spec("succ").unwrap();
    for _ in 0..40 {
        let atom = |rng: &mut ChaCha8Rng| {
            let alpha = rng.gen_range(-3i64..=3);
            let k = rng.gen_range(1..=3i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
            GWord::from_letters([
                (Gen::S, BigInt::from(alpha)),
                (Gen::F, BigInt::from(k)),
                (Gen::S, BigInt::from(-alpha)),
            ])
        };
        let a = atom(&mut rng);
        let b = atom(&mut rng);
        let c = atom(&mut rng);
        let ab = a.concat(&b).concat(&a.inverse()).concat(&b.inverse());
        let triple = ab
            .concat(&c)
            .concat(&ab.inverse())
            .concat(&c.inverse());
        assert!(semantic(&triple, &o).is_identity(), "[[a,b],c] not central");
        assert!(wp_g(&triple, &o).unwrap());
    }
}

#[test]
fn embedding_is_faithful() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    let o = parse_spec("succ").unwrap();
    for _ in 0..100 {
        let reduced = random_reduced_aword(&mut rng, &o);
        let image = embed_aword(&reduced).unwrap();
        // Reduced nonempty words are nontrivial, and so are their images.
        assert!(!wp_g(&image, &o).unwrap(), "{reduced}");

        // On arbitrary words the embedded word problem mirrors the abelian one.
        let mut raw = reduced.clone();
        if rng.gen_bool(0.5) {
            // Index at least 1: b_0 has no image under the embedding.
            let relator_index = rng.gen_range(1..4u64);
            raw = raw.concat(&AWord::from_terms(vec![
                ATerm::new(Family::A, relator_index, relator_index as i64 + 1),
                ATerm::new(Family::B, relator_index, -1),
            ]));
        }
        assert_eq!(
            wp_g(&embed_aword(&raw).unwrap(), &o).unwrap(),
            afgroup::wp_a(&raw, &o)
        );
    }
}

#[test]
fn embedded_generator_lengths_stay_logarithmic() {
    for n in 1..=40u64 {
        for i in 1..=40u64 {
            if n * i < 4 {
                continue;
            }
            let mut w = GWord::new();
            w.push(Gen::F, BigInt::from(n));
            w.push(Gen::S, BigInt::from(i));
            w.push(Gen::F, 1);
            w.push(Gen::S, -BigInt::from(i));
            w.push(Gen::F, -BigInt::from(n));
            w.push(Gen::S, BigInt::from(i));
            w.push(Gen::F, -1);
            w.push(Gen::S, -BigInt::from(i));
            let len = length_g(&w);
            let base = ((n * i) as f64).log2();
            assert!(base < len, "lower bound at n={n} i={i}: {len} vs {base}");
            assert!(len < 8.0 * base, "upper bound at n={n} i={i}: {len} vs {base}");
        }
    }
}

#[test]
fn dlp_round_trips_on_random_bases() {
    let mut rng = ChaCha8Rng::seed_from_u64(36);
    let o = parse_spec("succ").unwrap();
    let mut done = 0;
    while done < 100 {
        let w = random_gword(&mut rng, 10);
        let g = canonicalize(&w).unwrap();
        if gfgroup::wp_canonical(&g, &o).unwrap() {
            continue;
        }
        let x = rng.gen_range(-8i64..=8);
        let h = power(&g, &BigInt::from(x)).unwrap();
        assert_eq!(
            dlp_g(&g, &h, &o).unwrap(),
            DlpResult::Unique(BigInt::from(x)),
            "base {w}, x = {x}"
        );
        done += 1;
    }
}

#[test]
fn dlp_answers_agree_with_equality() {
    // When dlp reports Unique(x), powering reproduces the target; when it
    // reports NoSolution for small instances, no x in a window works.
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let o = parse_spec("succ").unwrap();
    for _ in 0..60 {
        let g = canonicalize(&random_gword(&mut rng, 6)).unwrap();
        let h = canonicalize(&random_gword(&mut rng, 6)).unwrap();
        match dlp_g(&g, &h, &o).unwrap() {
            DlpResult::Unique(x) => {
                let gx = power(&g, &x).unwrap();
                assert!(equals(&gx, &h, &o).unwrap());
            }
            DlpResult::NoSolution => {
                for x in -6i64..=6 {
                    let gx = power(&g, &BigInt::from(x)).unwrap();
                    assert!(
                        !equals(&gx, &h, &o).unwrap(),
                        "claimed no solution but x = {x} works"
                    );
                }
            }
            DlpResult::AllIntegers => {
                assert!(gfgroup::wp_canonical(&g, &o).unwrap());
                assert!(gfgroup::wp_canonical(&h, &o).unwrap());
            }
        }
    }
}
