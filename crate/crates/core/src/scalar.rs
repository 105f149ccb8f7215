//! Scalar abstractions.
//!
//! Dense linear algebra and the Chebyshev recurrences are written once over
//! [`Scalar`]. Floating-point simulation code additionally needs [`Real`];
//! exact elimination (rank, solve) is restricted to [`ExactField`] so that a
//! zero test is a real zero test.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive};

/// A field element usable in dense matrices.
pub trait Scalar: Num + Signed + Clone + Debug + FromPrimitive + Send + Sync + 'static {
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer is representable")
    }

    /// Approximate value, for diagnostics and cross-checks.
    fn approx(&self) -> f64;
}

impl Scalar for f32 {
    fn approx(&self) -> f64 {
        f64::from(*self)
    }
}

impl Scalar for f64 {
    fn approx(&self) -> f64 {
        *self
    }
}

impl Scalar for BigRational {
    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for Ratio<i64> {
    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// Floating-point scalars (`f32`, `f64`).
pub trait Real: Scalar + Float + Copy + Display + ToPrimitive {
    fn from_f64_lossy(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("finite float")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Scalars whose equality is exact, so Gaussian elimination can pivot on
/// any nonzero entry.
pub trait ExactField: Scalar + PartialEq {}

impl ExactField for BigRational {}
impl ExactField for Ratio<i64> {}

/// `p/q` with `q = 1` printed as `p`.
pub fn rational_to_string(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A float with 17 significant digits, e.g. `1.0000000000000000e0`.
pub fn fmt_sig17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serde adapter writing a rational as its `p/q` string.
pub fn serialize_rational<S: serde::Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rational_to_string(r))
}

pub fn serialize_rationals<S: serde::Serializer>(rs: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(rs.iter().map(rational_to_string))
}

pub fn rational_from_i64(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
