//! Exact arithmetic in cyclotomic fields `Q(ζ_n)`.
//!
//! Elements are stored over the power basis `1, ζ_n, …, ζ_n^{φ(n)-1}`
//! reduced modulo `Φ_n`, so equality is coefficient equality. On top of that
//! sit the CRT exponent decomposition with its `π`/`θ` maps, Bosma's
//! canonical integral bases, and the integrality test for
//! `Δ = (ζ^a + ζ^{-a} + ζ^b + ζ^{-b}) / 2` that rules out state transfer on
//! 4-regular circulants.

mod basis;
mod crt;
mod delta;
mod elem;
mod poly;

pub use basis::{is_algebraic_integer, q_linear_independent, reduced_denominator, BosmaBasis};
pub use crt::{
    crt_compose, crt_decompose, epsilon_map, inversion_rule_three, negation_rule, ExponentDecomposition, PrimeComponent,
};
pub use delta::{delta_integrality, validate_four_regular, DeltaReport, DeltaTerm};
pub use elem::{roots_sum_is_zero, CycloElem};
pub use poly::cyclotomic_polynomial;

/// Exact operations refuse conductors with `φ(n)` above this.
pub const DEGREE_CAP: usize = 512;

/// Prime factorization as `(p, f)` pairs in increasing `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut f = 0;
            while n % p == 0 {
                n /= p;
                f += 1;
            }
            out.push((p, f));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn totient(n: u64) -> u64 {
    factorize(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut d: Vec<u64> = (1..=n).take_while(|i| i * i <= n).filter(|i| n % i == 0).collect();
    let upper: Vec<u64> = d.iter().rev().map(|i| n / i).filter(|&j| j * j != n).collect();
    d.extend(upper);
    d
}

pub fn mobius(n: u64) -> i32 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Inverse of `a` modulo `m` (`gcd(a, m) = 1`).
pub(crate) fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i128) as u64)
}

/// `p*`: 4 for `p = 2`, otherwise `p`.
pub(crate) fn p_star(p: u64) -> u64 {
    if p == 2 {
        4
    } else {
        p
    }
}
