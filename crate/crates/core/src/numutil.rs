//! Small integer helpers: modular exponentiation, trial-division primality,
//! primitive-root checks, and base-2 logs of big integers.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// `base^exp mod m` for `m >= 1`, with 128-bit intermediates.
pub(crate) fn modpow_u64(base: u64, exp: u64, m: u64) -> u64 {
    debug_assert!(m >= 1);
    if m == 1 {
        return 0;
    }
    let mut acc: u128 = 1;
    let mut b: u128 = (base % m) as u128;
    let mut e = exp;
    let m128 = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        e >>= 1;
    }
    acc as u64
}

/// Number of modular multiplications `modpow_u64` performs; used as the
/// deterministic charge for one verification by exponentiation.
pub(crate) fn modpow_cost(exp: u64) -> u64 {
    let bits = 64 - exp.leading_zeros() as u64;
    bits + exp.count_ones() as u64
}

/// Trial-division primality; adequate for the toy moduli this crate accepts.
pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest proper prime factor by trial division, also reporting how many
/// candidate divisors were tried so oracle charges stay deterministic.
pub(crate) fn smallest_factor_with_cost(n: u64) -> (Option<u64>, u64) {
    if n < 4 {
        return (None, 1);
    }
    let mut tried = 1u64;
    if n % 2 == 0 {
        return (Some(2), tried);
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        tried += 1;
        if n % d == 0 {
            return (Some(d), tried);
        }
        d += 2;
    }
    (None, tried)
}

/// Distinct prime factors of `n` by trial division.
pub(crate) fn prime_factors_u64(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Whether `g` generates the multiplicative group mod the prime `p`.
pub(crate) fn is_primitive_root(g: u64, p: u64) -> bool {
    if p < 3 || g % p == 0 {
        return false;
    }
    let order = p - 1;
    prime_factors_u64(order)
        .into_iter()
        .all(|q| modpow_u64(g, order / q, p) != 1)
}

pub(crate) fn gcd_u64(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

/// `log2(max(1, |x|))` without overflowing `f64` for large magnitudes.
pub(crate) fn log2_big(x: &BigInt) -> f64 {
    let mag = x.abs();
    if mag.is_zero() {
        return 0.0;
    }
    if let Some(v) = mag.to_f64() {
        if v.is_finite() {
            return v.log2().max(0.0);
        }
    }
    // Fall back to bit length plus a mantissa correction from the top bits.
    let bits = mag.bits();
    let shift = bits - 53;
    let top = (mag >> shift).to_f64().unwrap_or(f64::MAX);
    top.log2() + shift as f64
}
