//! Perfect state transfer (PST) in Grover walks on graphs.
//!
//! The walk on a graph `Γ` acts on its symmetric arcs by `U = R(2dd* - I)`,
//! where `d` is the normalized boundary and `R` reverses arcs. PST from
//! vertex `x` to vertex `y` at time `τ` means `U^τ d*e_x = γ d*e_y` with
//! `|γ| = 1`. It is decided three independent ways:
//!
//! * brute-force evolution ([`walk`]);
//! * `T_τ(P) e_x = γ e_y` for the Chebyshev polynomial `T_τ` and
//!   `P = dRd*` ([`pst`]);
//! * a condition on the spectral projectors of `P` and on which
//!   eigenvalues have the form `cos(jπ/τ)` ([`pst`], [`spectral`]).
//!
//! For circulants `X(Z_n, S)` of valency at most 4 the answer is known in
//! closed form ([`classify`]), and [`cyclotomic`] holds the exact arithmetic
//! in `Q(ζ_n)` behind the no-PST certificates.
//!
//! Numeric code is generic over [`Real`] (`f32`, `f64`); exact code uses
//! [`Rational`].

pub mod chebyshev;
pub mod classify;
pub mod corpus;
pub mod cyclotomic;
pub mod error;
pub mod graph;
pub mod matrix;
pub mod operators;
pub mod pst;
pub mod report;
pub mod scalar;
pub mod spectral;
pub mod symmetry;
pub mod tolerance;
pub mod walk;

pub use classify::{classify, verify_classification, CaseLabel, CirculantFamilyCase, Classification};
pub use cyclotomic::{BosmaBasis, CycloElem};
pub use error::{Error, Result};
pub use graph::{CirculantSpec, Graph};
pub use matrix::Matrix;
pub use operators::WalkMatrices;
pub use pst::{search_min_pst, Instance, PSTVerdict};
pub use scalar::{ExactField, Real, Scalar};
pub use spectral::SpectralDecomposition;
pub use symmetry::{ArcAutomorphism, VertexAutomorphism};
pub use tolerance::Tolerances;

pub type Rational = num_rational::BigRational;

pub type Matrix64 = Matrix<f64>;
pub type Matrix32 = Matrix<f32>;
pub type RationalMatrix = Matrix<Rational>;

pub type WalkMatrices64 = WalkMatrices<f64>;
pub type WalkMatrices32 = WalkMatrices<f32>;

pub type Instance64 = Instance<f64>;
pub type Instance32 = Instance<f32>;

pub type SpectralDecomposition64 = SpectralDecomposition<f64>;
