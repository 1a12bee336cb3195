//! Deterministic step-count records separating word-problem cost from
//! discrete-log cost.
//!
//! For each index `n` the harness measures, in the oracle's abstract charged
//! steps, (a) the word problem on the embedded relation word
//! `a_n^{f(n)} b_n^{-1}` — which exercises one verification — and (b) the
//! discrete log `dlp_G(a_n, b_n)` under the embedding — which must evaluate
//! `f(n)`. Instance construction happens outside the measured spans, so the
//! records isolate exactly what each algorithm charges.

use std::fmt::Write as _;

use crate::afgroup::{ATerm, AWord, DlpResult, Family};
use crate::error::Error;
use crate::gfgroup::{canonicalize, dlp_g, embed_a, embed_aword, embed_b, wp_g};
use crate::oracle::FunctionOracle;

/// One row of the measurement: per-`n` charged steps and eval counts for the
/// word problem and the discrete log.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRecord {
    pub oracle_name: String,
    pub n: u64,
    pub wp_charged_steps: u64,
    pub dlp_charged_steps: u64,
    pub wp_eval_calls: u64,
    pub dlp_eval_calls: u64,
}

/// Run the separation measurement for every `n` in `[n_min, n_max]`.
/// Requires `n_min >= 1` (the `b`-family embedding starts at index 1).
pub fn bench_range(
    oracle: &FunctionOracle,
    n_min: u64,
    n_max: u64,
) -> Result<Vec<BenchRecord>, Error> {
    if n_min > n_max {
        return Err(Error::InvalidRange { lo: n_min, hi: n_max });
    }
    let mut records = Vec::with_capacity((n_max - n_min + 1) as usize);
    for n in n_min..=n_max {
        // Setup is unmetered: building the verifiable probe needs f(n) once.
        let probe = oracle.eval(n)?;
        let mut relation = AWord::new();
        relation.push(ATerm::new(Family::A, n, probe));
        relation.push(ATerm::new(Family::B, n, -1));
        let wp_word = embed_aword(&relation)?;
        let g = canonicalize(&embed_a(n)?)?;
        let h = canonicalize(&embed_b(n)?)?;

        let before = oracle.snapshot_meter();
        let trivial = wp_g(&wp_word, oracle)?;
        let mid = oracle.snapshot_meter();
        let dlp = dlp_g(&g, &h, oracle)?;
        let after = oracle.snapshot_meter();

        debug_assert!(trivial, "probe word is the defining relation");
        debug_assert!(matches!(dlp, DlpResult::Unique(_)));

        records.push(BenchRecord {
            oracle_name: oracle.name().to_string(),
            n,
            wp_charged_steps: mid.charged_steps - before.charged_steps,
            dlp_charged_steps: after.charged_steps - mid.charged_steps,
            wp_eval_calls: mid.eval_calls - before.eval_calls,
            dlp_eval_calls: after.eval_calls - mid.eval_calls,
        });
    }
    Ok(records)
}

/// Render records as CSV with the pinned header
/// `oracle,n,wp_steps,dlp_steps,wp_evals,dlp_evals`.
pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from("oracle,n,wp_steps,dlp_steps,wp_evals,dlp_evals\n");
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.oracle_name, r.n, r.wp_charged_steps, r.dlp_charged_steps, r.wp_eval_calls,
            r.dlp_eval_calls
        )
        .expect("writing to a String cannot fail");
    }
    out
}
