//! The CRT splitting `ζ_n^x = Π ζ_{q_j}^{x_j}` (`q_j = p_j^{f_j}`) and the
//! `π`/`θ` refinement of each coordinate.

use serde::Serialize;

use super::elem::CycloElem;
use super::{factorize, mod_inverse};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeComponent {
    pub p: u64,
    pub f: u32,
    /// `x_j ∈ [p^f]`.
    pub x: u64,
    /// `(π, θ)`; absent for `p = 2, f = 1`.
    pub pi_theta: Option<(u64, u64)>,
}

impl PrimeComponent {
    pub fn modulus(&self) -> u64 {
        self.p.pow(self.f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExponentDecomposition {
    pub n: u64,
    pub x: u64,
    pub components: Vec<PrimeComponent>,
}

impl ExponentDecomposition {
    pub fn tuple(&self) -> Vec<u64> {
        self.components.iter().map(|c| c.x).collect()
    }

    pub fn component(&self, p: u64) -> Result<&PrimeComponent> {
        self.components
            .iter()
            .find(|c| c.p == p)
            .ok_or_else(|| Error::NotApplicable(format!("{p} does not divide {}", self.n)))
    }

    fn pi_theta(&self, p: u64) -> Result<(u64, u64)> {
        self.component(p)?.pi_theta.ok_or(Error::PiThetaUndefinedAtTwo(self.n))
    }

    pub fn pi(&self, p: u64) -> Result<u64> {
        Ok(self.pi_theta(p)?.0)
    }

    pub fn theta(&self, p: u64) -> Result<u64> {
        Ok(self.pi_theta(p)?.1)
    }
}

fn split(p: u64, f: u32, xj: u64) -> Option<(u64, u64)> {
    match (p, f) {
        (2, 1) => None,
        (2, _) => {
            let step = 1 << (f - 2);
            Some((xj / step, xj % step))
        }
        _ => {
            let step = p.pow(f - 1);
            Some((xj / step, xj % step))
        }
    }
}

/// `Ψ_n(ζ_n^x)` with the `π`/`θ` values of every coordinate.
pub fn crt_decompose(n: u64, x: i64) -> Result<ExponentDecomposition> {
    if n < 2 {
        return Err(Error::NotApplicable(format!("decomposition needs n >= 2, got {n}")));
    }
    let x = x.rem_euclid(n as i64) as u64;
    let components = factorize(n)
        .into_iter()
        .map(|(p, f)| {
            let q = p.pow(f);
            let cofactor = n / q;
            let inv = mod_inverse(cofactor % q, q).expect("coprime cofactor");
            let xj = ((x % q) as u128 * inv as u128 % q as u128) as u64;
            PrimeComponent { p, f, x: xj, pi_theta: split(p, f, xj) }
        })
        .collect();
    Ok(ExponentDecomposition { n, x, components })
}

/// `Φ_n`: the exponent `x ∈ [n]` with `Π ζ_{q_j}^{x_j} = ζ_n^x`.
pub fn crt_compose(n: u64, tuple: &[u64]) -> Result<u64> {
    if n < 2 {
        return Err(Error::NotApplicable(format!("composition needs n >= 2, got {n}")));
    }
    let factors = factorize(n);
    if factors.len() != tuple.len() {
        return Err(Error::DimensionMismatch { expected: factors.len(), got: tuple.len() });
    }
    let mut x: u128 = 0;
    for (&(p, f), &xj) in factors.iter().zip(tuple) {
        let q = p.pow(f);
        if xj >= q {
            return Err(Error::NotApplicable(format!("coordinate {xj} is outside [{q}]")));
        }
        x = (x + xj as u128 * (n / q) as u128) % n as u128;
    }
    Ok(x as u64)
}

/// Decomposition of `-ζ_n^x` for `4 | n`: `π^{(2)}` shifts by 2 mod 4 and all
/// other values are unchanged. The rule is checked against the direct
/// decomposition of `x + n/2`.
pub fn negation_rule(n: u64, x: i64) -> Result<ExponentDecomposition> {
    if n % 4 != 0 {
        return Err(Error::NotApplicable(format!("negation rule needs 4 | n, got {n}")));
    }
    let before = crt_decompose(n, x)?;
    let after = crt_decompose(n, x + (n / 2) as i64)?;
    for (b, a) in before.components.iter().zip(&after.components) {
        let (pi, theta) = b.pi_theta.expect("4 | n");
        let want = if b.p == 2 { ((pi + 2) % 4, theta) } else { (pi, theta) };
        if a.pi_theta != Some(want) {
            return Err(Error::InternalInconsistency(format!("negation rule fails at n = {n}, x = {x}, p = {}", b.p)));
        }
    }
    Ok(after)
}

/// Decomposition of `ζ_n^{-x}` for `3 | n`, checking the rule
/// `π^{(3)} ↦ (3 - π) mod 3` when `θ^{(3)} = 0` and `2 - π` otherwise.
pub fn inversion_rule_three(n: u64, x: i64) -> Result<ExponentDecomposition> {
    if n % 3 != 0 || n % 4 == 2 {
        return Err(Error::NotApplicable(format!("inversion rule needs 3 | n and n not 2 mod 4, got {n}")));
    }
    let before = crt_decompose(n, x)?;
    let after = crt_decompose(n, -x)?;
    let (pi, theta) = before.pi_theta(3)?;
    let want = if theta == 0 { (3 - pi) % 3 } else { 2 - pi };
    if after.pi(3)? != want {
        return Err(Error::InternalInconsistency(format!("inversion rule fails at n = {n}, x = {x}")));
    }
    Ok(after)
}

/// `ζ_{2l}^c = sign · ζ_l^ε` for odd `l`, with `c` first reduced into
/// `[0, 2l)`. Confirmed in `Q(ζ_{2l})` before returning.
pub fn epsilon_map(l: u64, c: i64) -> Result<(i8, u64)> {
    if l % 2 == 0 {
        return Err(Error::NotApplicable(format!("epsilon map needs odd l, got {l}")));
    }
    let c = c.rem_euclid(2 * l as i64) as u64;
    let (sign, eps) = if c % 2 == 0 { (1i8, c / 2) } else { (-1i8, (c + l) / 2) };
    let lhs = CycloElem::from_power(2 * l, c as i64)?;
    let rhs = CycloElem::from_power(l, eps as i64)?.lift(2 * l)?;
    let rhs = if sign < 0 { rhs.neg() } else { rhs };
    if lhs != rhs {
        return Err(Error::InternalInconsistency(format!("epsilon map fails at l = {l}, c = {c}")));
    }
    Ok((sign, eps))
}
