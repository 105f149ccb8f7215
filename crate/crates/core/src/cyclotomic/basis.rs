use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::elem::CycloElem;
use super::{factorize, p_star, totient, DEGREE_CAP};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Bosma's integral basis `{Π ζ_{p*}^{a_p} ζ_{p^f}^{b_p}}` of `Q(ζ_n)`.
#[derive(Debug, Clone, Serialize)]
pub struct BosmaBasis {
    n: u64,
    factors: Vec<(u64, u32)>,
    choices: BTreeMap<u64, Vec<u64>>,
    exponents: Vec<u64>,
    #[serde(skip)]
    columns: Matrix<BigRational>,
}

type CacheKey = (u64, Vec<(u64, Vec<u64>)>);

impl BosmaBasis {
    /// Builds (or fetches) the basis for `n` with the given `A_p` sets.
    ///
    /// Primes of `n` without an entry get `{0, 1}` for `p = 2` and
    /// `{0, …, p - 2}` otherwise.
    pub fn new(n: u64, choices: &BTreeMap<u64, Vec<u64>>) -> Result<Arc<Self>> {
        if n == 0 || n % 4 == 2 {
            return Err(Error::InvalidBasisChoice(format!(
                "n = {n}: no canonical basis for n = 2 mod 4, rewrite to n/2 first"
            )));
        }
        let degree = totient(n) as usize;
        if degree > DEGREE_CAP {
            return Err(Error::DegreeCap { conductor: n, degree, cap: DEGREE_CAP });
        }
        let factors = factorize(n);
        if let Some(p) = choices.keys().find(|p| !factors.iter().any(|(q, _)| q == *p)) {
            return Err(Error::InvalidBasisChoice(format!("{p} is not a prime factor of {n}")));
        }
        let mut resolved = BTreeMap::new();
        for &(p, _) in &factors {
            let mut a = match choices.get(&p) {
                Some(a) => a.clone(),
                None if p == 2 => vec![0, 1],
                None => (0..p - 1).collect(),
            };
            a.sort_unstable();
            a.dedup();
            let want = totient(p_star(p)) as usize;
            if a.len() != want || a.iter().any(|&v| v >= p) {
                return Err(Error::InvalidBasisChoice(format!(
                    "A_{p} must be a {want}-element subset of [0, {p}), got {a:?}"
                )));
            }
            resolved.insert(p, a);
        }

        static CACHE: OnceLock<RwLock<HashMap<CacheKey, Arc<BosmaBasis>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let key: CacheKey = (n, resolved.iter().map(|(p, a)| (*p, a.clone())).collect());
        if let Some(b) = cache.read().expect("basis cache poisoned").get(&key) {
            return Ok(Arc::clone(b));
        }
        let basis = Arc::new(Self::build(n, factors, resolved)?);
        let mut w = cache.write().expect("basis cache poisoned");
        Ok(Arc::clone(w.entry(key).or_insert(basis)))
    }

    fn build(n: u64, factors: Vec<(u64, u32)>, choices: BTreeMap<u64, Vec<u64>>) -> Result<Self> {
        let mut exponents = vec![0u64];
        for &(p, f) in &factors {
            let q = p.pow(f);
            let ps = p_star(p);
            let mut next = Vec::new();
            for &e in &exponents {
                for &a in &choices[&p] {
                    for b in 0..q / ps {
                        next.push((e + a * (n / ps) + b * (n / q)) % n);
                    }
                }
            }
            exponents = next;
        }
        exponents.sort_unstable();
        let degree = totient(n) as usize;
        let elems = exponents.iter().map(|&e| CycloElem::from_power(n, e as i64)).collect::<Result<Vec<_>>>()?;
        let columns = Matrix::from_fn(degree, exponents.len(), |i, j| elems[j].coeffs()[i].clone());
        if exponents.len() != degree || columns.rank() != degree {
            return Err(Error::SingularSystem);
        }
        Ok(Self { n, factors, choices, exponents, columns })
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn choices(&self) -> &BTreeMap<u64, Vec<u64>> {
        &self.choices
    }

    /// Exponents `e` of the basis elements `ζ_n^e`, ascending.
    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Rational coordinates of `e`, aligned with [`Self::exponents`].
    pub fn coordinates(&self, e: &CycloElem) -> Result<Vec<BigRational>> {
        if e.conductor() != self.n {
            return Err(Error::ConductorMismatch { left: e.conductor(), right: self.n });
        }
        self.columns.solve(e.coeffs()).map_err(|err| match err {
            Error::SingularSystem => Error::InternalInconsistency("basis matrix became singular".into()),
            other => other,
        })
    }
}

/// True iff every coordinate of `e` in the integral `basis` is an integer.
pub fn is_algebraic_integer(e: &CycloElem, basis: &BosmaBasis) -> Result<bool> {
    Ok(basis.coordinates(e)?.iter().all(|c| c.is_integer()))
}

/// Exact rank test over `Q`.
pub fn q_linear_independent(elems: &[CycloElem]) -> Result<bool> {
    let Some(first) = elems.first() else {
        return Ok(true);
    };
    if let Some(e) = elems.iter().find(|e| e.conductor() != first.conductor()) {
        return Err(Error::ConductorMismatch { left: first.conductor(), right: e.conductor() });
    }
    let m = Matrix::from_fn(elems.len(), first.degree(), |i, j| elems[i].coeffs()[j].clone());
    Ok(m.rank() == elems.len())
}

/// `N(r)`: the denominator of `r` in lowest terms.
pub fn reduced_denominator(r: &BigRational) -> BigInt {
    r.reduced().denom().clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    fn choice(p: u64, a: &[u64]) -> BTreeMap<u64, Vec<u64>> {
        BTreeMap::from([(p, a.to_vec())])
    }

    #[test]
    fn thirty_six_with_a3_zero_two() {
        let b = BosmaBasis::new(36, &choice(3, &[0, 2])).unwrap();
        assert_eq!(b.exponents(), &[0, 1, 4, 5, 8, 9, 13, 17, 24, 28, 32, 33]);
        // ζ^23 = -ζ^5 cannot sit beside ζ^5 in a basis
        let e5 = CycloElem::from_power(36, 5).unwrap();
        let e23 = CycloElem::from_power(36, 23).unwrap();
        assert!(!q_linear_independent(&[e5, e23]).unwrap());
    }

    #[test]
    fn small_bases() {
        let b4 = BosmaBasis::new(4, &BTreeMap::new()).unwrap();
        assert_eq!(b4.exponents(), &[0, 1]);
        let b9 = BosmaBasis::new(9, &choice(3, &[1, 2])).unwrap();
        assert_eq!(b9.len(), 6);
        let b1 = BosmaBasis::new(1, &BTreeMap::new()).unwrap();
        assert_eq!(b1.exponents(), &[0]);
    }

    #[test]
    fn bad_choices_are_rejected() {
        assert!(matches!(BosmaBasis::new(18, &BTreeMap::new()), Err(Error::InvalidBasisChoice(_))));
        assert!(matches!(BosmaBasis::new(9, &choice(3, &[0])), Err(Error::InvalidBasisChoice(_))));
        assert!(matches!(BosmaBasis::new(9, &choice(3, &[0, 3])), Err(Error::InvalidBasisChoice(_))));
        assert!(matches!(BosmaBasis::new(9, &choice(5, &[0, 1, 2, 3])), Err(Error::InvalidBasisChoice(_))));
        assert!(matches!(BosmaBasis::new(4, &choice(2, &[0])), Err(Error::InvalidBasisChoice(_))));
    }

    #[test]
    fn every_choice_gives_full_rank() {
        for n in [3u64, 5, 7, 8, 9, 12, 15, 20, 21, 36, 45, 60] {
            let primes: Vec<u64> = factorize(n).iter().map(|&(p, _)| p).filter(|&p| p != 2).collect();
            for &p in &primes {
                for drop in 0..p {
                    let a: Vec<u64> = (0..p).filter(|&v| v != drop).collect();
                    let b = BosmaBasis::new(n, &choice(p, &a)).unwrap();
                    assert_eq!(b.len(), totient(n) as usize);
                }
            }
        }
    }

    #[test]
    fn integrality_examples() {
        let b8 = BosmaBasis::new(8, &BTreeMap::new()).unwrap();
        let sqrt2 = CycloElem::from_power(8, 1).unwrap().add(&CycloElem::from_power(8, -1).unwrap()).unwrap();
        assert!(is_algebraic_integer(&sqrt2, &b8).unwrap());

        let b5 = BosmaBasis::new(5, &BTreeMap::new()).unwrap();
        let half = rational(1, 2);
        let terms = [1i64, -1, 2, -2].map(|k| (half.clone(), k));
        let minus_half = CycloElem::from_terms(5, terms).unwrap();
        assert_eq!(minus_half.as_rational(), Some(rational(-1, 2)));
        assert!(!is_algebraic_integer(&minus_half, &b5).unwrap());
        let cos = CycloElem::from_terms(5, [(half.clone(), 1), (half, -1)]).unwrap();
        assert!(!is_algebraic_integer(&cos, &b5).unwrap());

        let wrong = CycloElem::one(7).unwrap();
        assert!(matches!(is_algebraic_integer(&wrong, &b5), Err(Error::ConductorMismatch { .. })));
    }

    #[test]
    fn independence_examples() {
        let z = |k| CycloElem::from_power(12, k).unwrap();
        assert!(!q_linear_independent(&[z(3), z(-3)]).unwrap());
        assert!(q_linear_independent(&[z(1), z(11), z(2), z(10)]).unwrap());
        assert!(q_linear_independent(&[CycloElem::one(1).unwrap()]).unwrap());
    }

    #[test]
    fn denominators() {
        assert_eq!(reduced_denominator(&rational(3, 6)), BigInt::from(2));
        assert_eq!(reduced_denominator(&rational(2, 5)), BigInt::from(5));
        assert_eq!(reduced_denominator(&rational(4, 1)), BigInt::from(1));
    }
}
