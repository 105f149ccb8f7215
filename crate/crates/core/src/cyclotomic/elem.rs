use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{cyclotomic_polynomial, reduce_mod, reduce_mod_checked};
use super::{totient, DEGREE_CAP};
use crate::error::{Error, Result};
use crate::scalar::rational_to_string;

/// An element of `Q(ζ_n)` in canonical power-basis form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycloElem {
    conductor: u64,
    coeffs: Vec<BigRational>,
}

fn field(n: u64) -> Result<Arc<Vec<i64>>> {
    if n == 0 {
        return Err(Error::NotApplicable("conductor must be positive".into()));
    }
    let degree = totient(n) as usize;
    if degree > DEGREE_CAP {
        return Err(Error::DegreeCap { conductor: n, degree, cap: DEGREE_CAP });
    }
    cyclotomic_polynomial(n)
}

impl CycloElem {
    pub fn zero(n: u64) -> Result<Self> {
        let phi = field(n)?;
        Ok(Self { conductor: n, coeffs: vec![BigRational::zero(); phi.len() - 1] })
    }

    pub fn from_rational(n: u64, q: BigRational) -> Result<Self> {
        let mut e = Self::zero(n)?;
        e.coeffs[0] = q;
        Ok(e)
    }

    pub fn one(n: u64) -> Result<Self> {
        Self::from_rational(n, BigRational::one())
    }

    /// `ζ_n^k` for any integer `k`.
    pub fn from_power(n: u64, k: i64) -> Result<Self> {
        Self::from_terms(n, [(BigRational::one(), k)])
    }

    /// `Σ c · ζ_n^k` over the given `(c, k)` terms.
    pub fn from_terms(n: u64, terms: impl IntoIterator<Item = (BigRational, i64)>) -> Result<Self> {
        let phi = field(n)?;
        let mut dense = vec![BigRational::zero(); n as usize];
        for (c, k) in terms {
            let idx = k.rem_euclid(n as i64) as usize;
            dense[idx] += c;
        }
        reduce_mod(&mut dense, &phi);
        Ok(Self { conductor: n, coeffs: dense })
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// Coefficients over `1, ζ_n, …, ζ_n^{φ(n)-1}`.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The value when the element is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| self.coeffs[0].clone())
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.conductor == other.conductor {
            Ok(())
        } else {
            Err(Error::ConductorMismatch { left: self.conductor, right: other.conductor })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { conductor: self.conductor, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Self { conductor: self.conductor, coeffs })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let n = self.conductor as usize;
        let mut dense = vec![BigRational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    dense[(i + j) % n] += a * b;
                }
            }
        }
        let phi = field(self.conductor)?;
        reduce_mod(&mut dense, &phi);
        Ok(Self { conductor: self.conductor, coeffs: dense })
    }

    pub fn neg(&self) -> Self {
        Self { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    /// Complex conjugation `ζ_n ↦ ζ_n^{-1}`.
    pub fn conjugate(&self) -> Self {
        let terms = self.coeffs.iter().enumerate().map(|(i, c)| (c.clone(), -(i as i64)));
        Self::from_terms(self.conductor, terms).expect("conductor already validated")
    }

    /// The same number viewed in `Q(ζ_m)`; requires `n | m`.
    pub fn lift(&self, m: u64) -> Result<Self> {
        if m % self.conductor != 0 {
            return Err(Error::ConductorMismatch { left: self.conductor, right: m });
        }
        let step = (m / self.conductor) as i64;
        let terms = self.coeffs.iter().enumerate().map(|(i, c)| (c.clone(), i as i64 * step));
        Self::from_terms(m, terms)
    }

    /// Numeric embedding at `ζ_n = e^{2πi/n}`.
    pub fn to_complex(&self) -> Complex64 {
        let n = self.conductor as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * i as f64 / n) * c.to_f64().unwrap_or(f64::NAN)
            })
            .sum()
    }
}

impl fmt::Display for CycloElem {
    /// `[n] c0 + c1*z + c2*z^2 …`, zero terms omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] ", self.conductor)?;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{i}"),
            };
            if i == 0 {
                write!(f, "{}", rational_to_string(&mag))?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{mono}", rational_to_string(&mag))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Whether `Σ c · ζ_L^e` vanishes, for integer coefficients.
///
/// Works on the dense integer polynomial of degree `< L` and tests
/// divisibility by `Φ_L`, falling back to big integers on overflow.
pub fn roots_sum_is_zero(l: u64, terms: &[(i64, i64)]) -> Result<bool> {
    let phi = field(l)?;
    let mut dense = vec![0i128; l as usize];
    for &(c, e) in terms {
        dense[e.rem_euclid(l as i64) as usize] += c as i128;
    }
    let mut small = dense.clone();
    if reduce_mod_checked(&mut small, &phi).is_some() {
        return Ok(small.iter().all(|&c| c == 0));
    }
    let mut big: Vec<BigInt> = dense.into_iter().map(BigInt::from).collect();
    reduce_mod_checked(&mut big, &phi).ok_or(Error::Overflow("root-of-unity sum"))?;
    Ok(big.iter().all(Zero::is_zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    fn z(n: u64, k: i64) -> CycloElem {
        CycloElem::from_power(n, k).unwrap()
    }

    #[test]
    fn primitive_fifth_roots_sum_to_minus_one() {
        let s = (1..=4).map(|k| z(5, k)).reduce(|a, b| a.add(&b).unwrap()).unwrap();
        assert_eq!(s.as_rational(), Some(rational(-1, 1)));
    }

    #[test]
    fn conjugate_inverts_powers() {
        for n in [5u64, 8, 9, 12, 36] {
            for k in 0..n as i64 {
                assert_eq!(z(n, k).conjugate(), z(n, n as i64 - k));
            }
        }
    }

    #[test]
    fn lifting_sixth_root_to_third_roots() {
        // ζ_6 = -ζ_3^2, compared in Q(ζ_6)
        let lhs = z(6, 1);
        let rhs = z(3, 2).lift(6).unwrap().neg();
        assert_eq!(lhs, rhs);
        let diff = lhs.to_complex() - Complex64::from_polar(1.0, std::f64::consts::PI / 3.0);
        assert!(diff.norm() < 1e-12);
    }

    #[test]
    fn conductor_mismatch_is_an_error() {
        assert!(matches!(z(5, 1).add(&z(10, 1)), Err(Error::ConductorMismatch { .. })));
        assert!(matches!(z(5, 1).lift(12), Err(Error::ConductorMismatch { .. })));
    }

    #[test]
    fn degree_cap_refuses_large_fields() {
        assert!(matches!(CycloElem::zero(1031), Err(Error::DegreeCap { .. })));
        assert!(CycloElem::zero(1024).is_ok());
    }

    #[test]
    fn display_is_comma_free() {
        let e = CycloElem::from_terms(12, [(rational(1, 2), 0), (rational(-1, 1), 1), (rational(3, 1), 3)]).unwrap();
        assert_eq!(e.to_string(), "[12] 1/2 - z + 3*z^3");
        assert_eq!(CycloElem::zero(7).unwrap().to_string(), "[7] 0");
    }

    #[test]
    fn integer_root_sums() {
        // 1 + ζ_3 + ζ_3^2 = 0, ζ_4^0 + ζ_4^2 = 0, ζ_8 + ζ_8^7 = √2 ≠ 0
        assert!(roots_sum_is_zero(3, &[(1, 0), (1, 1), (1, 2)]).unwrap());
        assert!(roots_sum_is_zero(4, &[(1, 0), (1, 2)]).unwrap());
        assert!(!roots_sum_is_zero(8, &[(1, 1), (1, 7)]).unwrap());
    }
}
