//! Integer cyclotomic polynomials and reduction modulo them.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::{CheckedMul, CheckedSub, FromPrimitive, Num};

use super::{divisors, mobius};
use crate::error::{Error, Result};

/// Coefficients of `Φ_n`, lowest degree first. Memoized per `n`.
pub fn cyclotomic_polynomial(n: u64) -> Result<Arc<Vec<i64>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.read().expect("poly cache poisoned").get(&n) {
        return Ok(Arc::clone(p));
    }
    let poly = Arc::new(compute(n)?);
    let mut w = cache.write().expect("poly cache poisoned");
    Ok(Arc::clone(w.entry(n).or_insert(poly)))
}

/// `Φ_n = Π_{d | n} (x^d - 1)^{μ(n/d)}`: multiply the `μ = +1` factors,
/// then divide out the `μ = -1` ones exactly.
fn compute(n: u64) -> Result<Vec<i64>> {
    if n == 0 {
        return Err(Error::NotApplicable("Φ_0 is undefined".into()));
    }
    let divs = divisors(n);
    let mut poly: Vec<i128> = vec![1];
    for &d in &divs {
        if mobius(n / d) == 1 {
            poly = mul_x_pow_minus_one(&poly, d as usize)?;
        }
    }
    for &d in &divs {
        if mobius(n / d) == -1 {
            poly = div_x_pow_minus_one(&poly, d as usize)?;
        }
    }
    poly.into_iter().map(|c| i64::try_from(c).map_err(|_| Error::Overflow("cyclotomic polynomial"))).collect()
}

fn mul_x_pow_minus_one(p: &[i128], d: usize) -> Result<Vec<i128>> {
    let mut out = vec![0i128; p.len() + d];
    for (i, &c) in p.iter().enumerate() {
        out[i] = out[i].checked_sub(c).ok_or(Error::Overflow("cyclotomic polynomial"))?;
        out[i + d] = out[i + d].checked_add(c).ok_or(Error::Overflow("cyclotomic polynomial"))?;
    }
    Ok(out)
}

/// Exact division by `x^d - 1`.
fn div_x_pow_minus_one(p: &[i128], d: usize) -> Result<Vec<i128>> {
    let deg = p.len() - 1;
    if deg < d {
        return Err(Error::InternalInconsistency("non-exact cyclotomic division".into()));
    }
    let mut rem = p.to_vec();
    let mut q = vec![0i128; deg - d + 1];
    for i in (d..=deg).rev() {
        let c = rem[i];
        q[i - d] = c;
        rem[i] = 0;
        rem[i - d] = rem[i - d].checked_add(c).ok_or(Error::Overflow("cyclotomic polynomial"))?;
    }
    if rem.iter().any(|&c| c != 0) {
        return Err(Error::InternalInconsistency("non-exact cyclotomic division".into()));
    }
    Ok(q)
}

/// Reduces `poly` (lowest degree first) modulo the monic `phi` in place and
/// truncates it to `deg(phi)` coefficients.
pub(crate) fn reduce_mod<T: Num + Clone + FromPrimitive>(poly: &mut Vec<T>, phi: &[i64]) {
    let deg = phi.len() - 1;
    for i in (deg..poly.len()).rev() {
        let c = poly[i].clone();
        if c.is_zero() {
            continue;
        }
        for (j, &pj) in phi[..deg].iter().enumerate() {
            if pj != 0 {
                let k = i - deg + j;
                poly[k] = poly[k].clone() - c.clone() * T::from_i64(pj).expect("small integer");
            }
        }
        poly[i] = T::zero();
    }
    poly.truncate(deg);
    poly.resize(deg, T::zero());
}

/// Checked integer variant of [`reduce_mod`]; `None` on overflow.
pub(crate) fn reduce_mod_checked<T>(poly: &mut Vec<T>, phi: &[i64]) -> Option<()>
where
    T: Num + Clone + CheckedMul + CheckedSub + From<i64>,
{
    let deg = phi.len() - 1;
    for i in (deg..poly.len()).rev() {
        let c = poly[i].clone();
        if c.is_zero() {
            continue;
        }
        for (j, &pj) in phi[..deg].iter().enumerate() {
            if pj != 0 {
                let k = i - deg + j;
                let prod = c.checked_mul(&T::from(pj))?;
                poly[k] = poly[k].checked_sub(&prod)?;
            }
        }
        poly[i] = T::zero();
    }
    poly.truncate(deg);
    Some(())
}
