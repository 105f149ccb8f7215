//! Integrality of `Δ = (ζ_{2l}^a + ζ_{2l}^{-a} + ζ_{2l}^b + ζ_{2l}^{-b}) / 2`,
//! which is `2λ_1` for the discriminant of `X(Z_{2l}, {±a, ±b})`.
//!
//! For odd `l` the element is first rewritten into `Q(ζ_l)` through the
//! ε-map. Terms that agree up to sign are merged, each survivor is taken as
//! `±ζ_m^e` with `π^{(2)} ∈ {0, 1}`, and the `A_p` sets are chosen to contain
//! the survivors' `π^{(p)}` values (`A_3 = {1, 2}` when all three residues
//! occur). The verdict itself does not depend on that choice.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::basis::BosmaBasis;
use super::crt::{crt_decompose, epsilon_map};
use super::elem::CycloElem;
use super::factorize;
use crate::error::{Error, Result};
use crate::scalar::{serialize_rational, serialize_rationals};

/// One merged term `coefficient · ζ_m^exponent` of `Δ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaTerm {
    #[serde(serialize_with = "serialize_rational")]
    pub coefficient: BigRational,
    pub exponent: u64,
    pub in_basis: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DeltaReport {
    pub l: u64,
    pub a: u64,
    pub b: u64,
    pub conductor: u64,
    pub delta: String,
    pub value: f64,
    pub terms: Vec<DeltaTerm>,
    pub choices: BTreeMap<u64, Vec<u64>>,
    pub basis_exponents: Vec<u64>,
    #[serde(serialize_with = "serialize_rationals")]
    pub coordinates: Vec<BigRational>,
    pub is_integral: bool,
}

impl DeltaReport {
    /// Coordinates that are not integers, as `(basis exponent, value)`.
    pub fn non_integer_coordinates(&self) -> Vec<(u64, BigRational)> {
        self.basis_exponents
            .iter()
            .zip(&self.coordinates)
            .filter(|(_, c)| !c.is_integer())
            .map(|(&e, c)| (e, c.clone()))
            .collect()
    }
}

/// Checks that `{±a, ±b}` is a 4-element connection set on `Z_{2l}` and
/// returns `a, b` as representatives in `[1, l - 1]`.
pub fn validate_four_regular(l: u64, a: i64, b: i64) -> Result<(u64, u64)> {
    if l < 3 {
        return Err(Error::InvalidSpec(format!("4-regular circulants need l >= 3, got {l}")));
    }
    let n = 2 * l as i64;
    let canon = |x: i64| {
        let r = x.rem_euclid(n) as u64;
        r.min(2 * l - r)
    };
    let (ca, cb) = (canon(a), canon(b));
    if ca % l == 0 || cb % l == 0 {
        return Err(Error::InvalidSpec(format!("a, b must be nonzero mod l = {l}, got a = {a}, b = {b}")));
    }
    if ca == cb {
        return Err(Error::InvalidSpec(format!("a ± b must be nonzero mod {n}, got a = {a}, b = {b}")));
    }
    Ok((ca, cb))
}

fn merged_terms(l: u64, a: u64, b: u64) -> Result<(u64, Vec<(i64, u64)>)> {
    let raw: Vec<(i64, i64)> = [a as i64, -(a as i64), b as i64, -(b as i64)]
        .into_iter()
        .map(|c| if l % 2 == 1 { epsilon_map(l, c).map(|(s, e)| (s as i64, e as i64)) } else { Ok((1, c)) })
        .collect::<Result<_>>()?;
    let m = if l % 2 == 1 { l } else { 2 * l };
    // coefficients in units of 1/2, keyed by the representative exponent
    let mut merged: BTreeMap<u64, i64> = BTreeMap::new();
    for (sign, e) in raw {
        let (s, rep) = representative(m, e)?;
        *merged.entry(rep).or_default() += sign * s;
    }
    Ok((m, merged.into_iter().filter(|(_, c)| *c != 0).map(|(e, c)| (c, e)).collect()))
}

/// `ζ_m^e = s · ζ_m^rep` with `π^{(2)}(ζ_m^rep) ∈ {0, 1}` when `4 | m`.
fn representative(m: u64, e: i64) -> Result<(i64, u64)> {
    let e = e.rem_euclid(m as i64) as u64;
    if m % 4 != 0 {
        return Ok((1, e));
    }
    if crt_decompose(m, e as i64)?.pi(2)? < 2 {
        Ok((1, e))
    } else {
        Ok((-1, (e + m / 2) % m))
    }
}

fn choose_sets(m: u64, exponents: &[u64]) -> Result<BTreeMap<u64, Vec<u64>>> {
    let mut choices = BTreeMap::new();
    for (p, _) in factorize(m) {
        if p == 2 {
            continue;
        }
        let needed: BTreeSet<u64> =
            exponents.iter().map(|&e| crt_decompose(m, e as i64)?.pi(p)).collect::<Result<_>>()?;
        let set: Vec<u64> = if needed.len() as u64 == p {
            (1..p).collect()
        } else {
            let mut s = needed;
            let mut r = 0;
            while (s.len() as u64) < p - 1 {
                s.insert(r);
                r += 1;
            }
            s.into_iter().collect()
        };
        choices.insert(p, set);
    }
    Ok(choices)
}

/// Builds `Δ`, expresses it in a Bosma basis and reports whether all
/// coordinates are integers.
pub fn delta_integrality(l: u64, a: i64, b: i64) -> Result<DeltaReport> {
    let (a, b) = validate_four_regular(l, a, b)?;
    let (m, terms) = merged_terms(l, a, b)?;
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let delta = CycloElem::from_terms(
        m,
        terms.iter().map(|&(c, e)| (&half * BigRational::from_integer(BigInt::from(c)), e as i64)),
    )?;
    let exps: Vec<u64> = terms.iter().map(|&(_, e)| e).collect();
    let choices = choose_sets(m, &exps)?;
    let basis = BosmaBasis::new(m, &choices)?;
    let coordinates = basis.coordinates(&delta)?;
    let is_integral = coordinates.iter().all(|c| c.is_integer());
    let terms = terms
        .into_iter()
        .map(|(c, e)| DeltaTerm {
            coefficient: BigRational::new(BigInt::from(c), BigInt::from(2)),
            exponent: e,
            in_basis: basis.exponents().binary_search(&e).is_ok(),
        })
        .collect();
    Ok(DeltaReport {
        l,
        a,
        b,
        conductor: m,
        delta: delta.to_string(),
        value: delta.to_complex().re,
        terms,
        choices: basis.choices().clone(),
        basis_exponents: basis.exponents().to_vec(),
        coordinates,
        is_integral,
    })
}
