//! Pluggable computable functions `f: N -> N` with separated evaluation and
//! verification interfaces.
//!
//! Every oracle guarantees `f(n) >= 1` (a zero value would collapse a `b_n`
//! generator to the identity) and exposes a verifier with the exact contract
//! `verify(n, m) == (eval(n) == m)`. Evaluation and verification are metered
//! separately: `eval` is allowed to be expensive, `verify` must not call
//! `eval`, and all costs are charged in deterministic abstract steps rather
//! than wall-clock time.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::Error;
use crate::numutil;

/// Snapshot of an oracle's call and step counters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StepMeter {
    pub eval_calls: u64,
    pub verify_calls: u64,
    /// Abstract unit-cost steps reported by the oracle implementation.
    pub charged_steps: u64,
}

#[derive(Debug, Clone)]
enum Backend {
    /// f(n) = n + 1.
    Succ,
    /// f(n) = a*n + b with a, b >= 1.
    Affine { a: u64, b: u64 },
    /// f(n) = discrete log base `g` of the n-th element of the cyclic group
    /// mod the prime `p` (enumerated 1, 2, ..., p-1 and extended
    /// periodically), with the log taken in [1, p-1]. Evaluation is
    /// exhaustive search; verification is a single modular exponentiation.
    ToyDlog { p: u64, g: u64 },
    /// Domain restricted to semiprimes n = p*q; f(n) is the smaller prime
    /// factor. Verification checks divisibility and two primalities.
    SemiprimeFactor,
    /// f(n) = n + 1, but evaluation charges 2^min(n, k) steps while
    /// verification charges n + 1.
    Slow { k: u32 },
}

/// A named function `f: N -> N` with metered `eval` and `verify`.
///
/// Counters are atomic, so a shared reference may be used from several
/// threads; alternatively each worker may own its own instance.
pub struct FunctionOracle {
    name: String,
    params: BTreeMap<String, u64>,
    backend: Backend,
    eval_calls: AtomicU64,
    verify_calls: AtomicU64,
    charged_steps: AtomicU64,
}

impl fmt::Debug for FunctionOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FunctionOracle({})", self.spec_string())
    }
}

impl FunctionOracle {
    fn new(name: &str, params: BTreeMap<String, u64>, backend: Backend) -> Self {
        FunctionOracle {
            name: name.to_string(),
            params,
            backend,
            eval_calls: AtomicU64::new(0),
            verify_calls: AtomicU64::new(0),
            charged_steps: AtomicU64::new(0),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &BTreeMap<String, u64> {
        &self.params
    }

    /// The oracle in `name(key=value,...)` form, parseable by [`parse_spec`].
    pub fn spec_string(&self) -> String {
        if self.params.is_empty() {
            self.name.clone()
        } else {
            let kv: Vec<String> = self
                .params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            format!("{}({})", self.name, kv.join(","))
        }
    }

    fn charge(&self, steps: u64) {
        self.charged_steps.fetch_add(steps, Ordering::Relaxed);
    }

    /// Compute `f(n)`, incrementing the eval counter and charging the
    /// oracle's evaluation cost.
    pub fn eval(&self, n: u64) -> Result<u64, Error> {
        self.eval_calls.fetch_add(1, Ordering::Relaxed);
        match &self.backend {
            Backend::Succ => {
                self.charge(1);
                n.checked_add(1).ok_or(Error::Overflow("succ"))
            }
            Backend::Affine { a, b } => {
                self.charge(1);
                let v = (*a as u128) * (n as u128) + (*b as u128);
                u64::try_from(v).map_err(|_| Error::Overflow("affine"))
            }
            Backend::ToyDlog { p, g } => {
                let x = toy_dlog_target(n, *p);
                // Exhaustive search for the exponent, one multiplication per
                // candidate.
                let mut acc = 1u64;
                for m in 1..*p {
                    acc = (acc as u128 * *g as u128 % *p as u128) as u64;
                    self.charge(1);
                    if acc == x {
                        return Ok(m);
                    }
                }
                unreachable!("g is validated as a primitive root");
            }
            Backend::SemiprimeFactor => {
                let (factor, tried) = numutil::smallest_factor_with_cost(n);
                self.charge(tried);
                let p = factor.ok_or_else(|| self.domain_err(n))?;
                let q = n / p;
                let (qf, qcost) = numutil::smallest_factor_with_cost(q);
                self.charge(qcost);
                if qf.is_some() {
                    // n has at least three prime factors.
                    return Err(self.domain_err(n));
                }
                Ok(p)
            }
            Backend::Slow { k } => {
                self.charge(1u64 << (*k as u64).min(n));
                n.checked_add(1).ok_or(Error::Overflow("slow"))
            }
        }
    }

    /// Decide whether `f(n) = m`, incrementing the verify counter and
    /// charging only the verifier's cost. Never calls `eval`.
    pub fn verify(&self, n: u64, m: &BigInt) -> bool {
        self.verify_calls.fetch_add(1, Ordering::Relaxed);
        match &self.backend {
            Backend::Succ => {
                self.charge(1);
                *m == BigInt::from(n) + 1
            }
            Backend::Affine { a, b } => {
                self.charge(1);
                *m == BigInt::from(*a) * BigInt::from(n) + BigInt::from(*b)
            }
            Backend::ToyDlog { p, g } => {
                let Some(mv) = in_range(m, 1, *p - 1) else {
                    self.charge(1);
                    return false;
                };
                self.charge(numutil::modpow_cost(mv));
                numutil::modpow_u64(*g, mv, *p) == toy_dlog_target(n, *p)
            }
            Backend::SemiprimeFactor => {
                let Some(mv) = in_range(m, 2, n) else {
                    self.charge(1);
                    return false;
                };
                self.charge(1);
                if n % mv != 0 {
                    return false;
                }
                let q = n / mv;
                if mv > q {
                    return false;
                }
                let (mf, mcost) = numutil::smallest_factor_with_cost(mv);
                let (qf, qcost) = numutil::smallest_factor_with_cost(q);
                self.charge(mcost + qcost);
                mf.is_none() && qf.is_none() && mv >= 2 && q >= 2
            }
            Backend::Slow { .. } => {
                self.charge(n.saturating_add(1));
                *m == BigInt::from(n) + 1
            }
        }
    }

    /// `verify` for plain machine integers.
    pub fn verify_u64(&self, n: u64, m: u64) -> bool {
        self.verify(n, &BigInt::from(m))
    }

    /// Current counters, without mutation.
    pub fn snapshot_meter(&self) -> StepMeter {
        StepMeter {
            eval_calls: self.eval_calls.load(Ordering::Relaxed),
            verify_calls: self.verify_calls.load(Ordering::Relaxed),
            charged_steps: self.charged_steps.load(Ordering::Relaxed),
        }
    }

    /// Zero all counters.
    pub fn reset_meter(&self) {
        self.eval_calls.store(0, Ordering::Relaxed);
        self.verify_calls.store(0, Ordering::Relaxed);
        self.charged_steps.store(0, Ordering::Relaxed);
    }

    fn domain_err(&self, n: u64) -> Error {
        Error::OracleDomain {
            oracle: self.name.clone(),
            n,
        }
    }
}

/// The group element of Z_p^* whose discrete log `toy_dlog` computes at `n`:
/// the enumeration x_n = n for 1 <= n < p, extended periodically to all
/// n >= 0 (so n = 0 maps to p - 1).
fn toy_dlog_target(n: u64, p: u64) -> u64 {
    let order = p - 1;
    (n % order + order - 1) % order + 1
}

fn in_range(m: &BigInt, lo: u64, hi: u64) -> Option<u64> {
    let v = m.to_u64()?;
    (v >= lo && v <= hi).then_some(v)
}

/// Names of all registry oracles, with a one-line description each.
pub fn registry_entries() -> Vec<(&'static str, &'static str)> {
    vec![
        ("succ", "f(n) = n + 1"),
        ("affine", "f(n) = a*n + b; params a >= 1, b >= 1"),
        (
            "toy_dlog",
            "f(n) = discrete log base g of the n-th element of Z_P^*; params P (odd prime < 2^31), g (primitive root mod P)",
        ),
        (
            "semiprime_factor",
            "domain: semiprimes n = p*q; f(n) = smaller prime factor",
        ),
        (
            "slow",
            "f(n) = n + 1 with eval charged 2^min(n,k) steps, verify charged n + 1; param k <= 62",
        ),
    ]
}

/// Construct a configured oracle from the registry.
pub fn registry_get(name: &str, params: &BTreeMap<String, u64>) -> Result<FunctionOracle, Error> {
    let expect_params = |allowed: &[&str]| -> Result<(), Error> {
        for key in params.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(Error::InvalidOracleParams(format!(
                    "`{name}` does not take parameter `{key}`"
                )));
            }
        }
        Ok(())
    };
    let require = |key: &str| -> Result<u64, Error> {
        params.get(key).copied().ok_or_else(|| {
            Error::InvalidOracleParams(format!("`{name}` requires parameter `{key}`"))
        })
    };

    match name {
        "succ" => {
            expect_params(&[])?;
            Ok(FunctionOracle::new(name, params.clone(), Backend::Succ))
        }
        "affine" => {
            expect_params(&["a", "b"])?;
            let a = require("a")?;
            let b = require("b")?;
            if a < 1 || b < 1 {
                return Err(Error::InvalidOracleParams(
                    "affine requires a >= 1 and b >= 1".into(),
                ));
            }
            Ok(FunctionOracle::new(
                name,
                params.clone(),
                Backend::Affine { a, b },
            ))
        }
        "toy_dlog" => {
            expect_params(&["P", "g"])?;
            let p = require("P")?;
            let g = require("g")?;
            if p < 3 || p >= 1 << 31 || !numutil::is_prime_u64(p) {
                return Err(Error::InvalidOracleParams(format!(
                    "toy_dlog requires P to be an odd prime below 2^31, got {p}"
                )));
            }
            if !numutil::is_primitive_root(g, p) {
                return Err(Error::InvalidOracleParams(format!(
                    "toy_dlog requires g to generate Z_{p}^*, got {g}"
                )));
            }
            Ok(FunctionOracle::new(
                name,
                params.clone(),
                Backend::ToyDlog { p, g },
            ))
        }
        "semiprime_factor" => {
            expect_params(&[])?;
            Ok(FunctionOracle::new(
                name,
                params.clone(),
                Backend::SemiprimeFactor,
            ))
        }
        "slow" => {
            expect_params(&["k"])?;
            let k = require("k")?;
            if k > 62 {
                return Err(Error::InvalidOracleParams(
                    "slow requires k <= 62".into(),
                ));
            }
            Ok(FunctionOracle::new(
                name,
                params.clone(),
                Backend::Slow { k: k as u32 },
            ))
        }
        _ => Err(Error::UnknownOracle(name.to_string())),
    }
}

/// Parse an oracle selection string of the form `name` or
/// `name(key=value,...)`, e.g. `toy_dlog(P=23,g=5)`.
pub fn parse_spec(spec: &str) -> Result<FunctionOracle, Error> {
    let spec = spec.trim();
    let (name, params) = match spec.find('(') {
        None => (spec, BTreeMap::new()),
        Some(open) => {
            if !spec.ends_with(')') {
                return Err(Error::parse(spec.len(), "expected closing `)`"));
            }
            let name = &spec[..open];
            let inner = &spec[open + 1..spec.len() - 1];
            let mut params = BTreeMap::new();
            if !inner.trim().is_empty() {
                for part in inner.split(',') {
                    let part = part.trim();
                    let eq = part.find('=').ok_or_else(|| {
                        Error::parse(open + 1, format!("expected key=value, got `{part}`"))
                    })?;
                    let key = part[..eq].trim();
                    let value: u64 = part[eq + 1..].trim().parse().map_err(|_| {
                        Error::parse(
                            open + 1,
                            format!("invalid integer in `{part}`"),
                        )
                    })?;
                    if key.is_empty() {
                        return Err(Error::parse(open + 1, "empty parameter name"));
                    }
                    params.insert(key.to_string(), value);
                }
            }
            (name, params)
        }
    };
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(Error::parse(0, format!("invalid oracle name `{name}`")));
    }
    registry_get(name, &params)
}
