//! Graph automorphisms as permutation matrices on vertices and arcs.
//!
//! For circulants only the dihedral subgroup (rotations `ρ_z(x) = x + z` and
//! the inversion `r(x) = -x`) is produced; other automorphisms must be
//! supplied as one-line permutations and are validated, not searched for.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{ArcSpace, CirculantSpec, Graph};
use crate::matrix::{dist_scaled, Matrix};
use crate::operators::WalkMatrices;
use crate::scalar::{Real, Scalar};
use crate::walk::evolve;

/// Residual bound used by [`pst_transport_check`].
pub const TRANSPORT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexAutomorphism {
    mapping: Vec<usize>,
}

impl VertexAutomorphism {
    /// Validates that `mapping` is a bijection preserving the edge set of `g`.
    pub fn new(g: &Graph, mapping: Vec<usize>) -> Result<Self> {
        let n = g.vertex_count();
        if mapping.len() != n {
            return Err(Error::InvalidAutomorphism(format!("{} images for {n} vertices", mapping.len())));
        }
        let mut seen = vec![false; n];
        for &v in &mapping {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidAutomorphism(format!("{mapping:?} is not a permutation of 0..{n}")));
            }
        }
        for &(u, v) in g.edges() {
            if !g.has_edge(mapping[u], mapping[v]) {
                return Err(Error::InvalidAutomorphism(format!(
                    "edge {{{u},{v}}} maps to non-edge {{{},{}}}",
                    mapping[u], mapping[v]
                )));
            }
        }
        Ok(Self { mapping })
    }

    pub fn identity(g: &Graph) -> Self {
        Self { mapping: (0..g.vertex_count()).collect() }
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn apply(&self, x: usize) -> usize {
        self.mapping[x]
    }

    pub fn fixes(&self, x: usize) -> bool {
        self.mapping[x] == x
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.mapping.len()).filter(|&x| self.fixes(x)).collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self { mapping: other.mapping.iter().map(|&x| self.mapping[x]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.mapping.len()];
        for (x, &gx) in self.mapping.iter().enumerate() {
            inv[gx] = x;
        }
        Self { mapping: inv }
    }

    /// `M` with `M[x][y] = 1` iff `x = g(y)`.
    pub fn matrix<T: Scalar>(&self) -> Matrix<T> {
        permutation_matrix(&self.mapping)
    }

    /// `g̃((x, y)) = (g(x), g(y))`.
    pub fn on_arcs(&self, arcs: &ArcSpace) -> ArcAutomorphism {
        let mapping = arcs
            .arcs()
            .iter()
            .map(|&(o, t)| arcs.index_of(self.apply(o), self.apply(t)).expect("validated automorphism"))
            .collect();
        ArcAutomorphism { mapping }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcAutomorphism {
    mapping: Vec<usize>,
}

impl ArcAutomorphism {
    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    /// `N` with `N[a][b] = 1` iff `a = g̃(b)`.
    pub fn matrix<T: Scalar>(&self) -> Matrix<T> {
        permutation_matrix(&self.mapping)
    }
}

fn permutation_matrix<T: Scalar>(mapping: &[usize]) -> Matrix<T> {
    let n = mapping.len();
    Matrix::from_fn(n, n, |i, j| if mapping[j] == i { T::one() } else { T::zero() })
}

/// `ρ_z(x) = x + z mod n`.
pub fn circulant_rotation(spec: &CirculantSpec, z: i64) -> VertexAutomorphism {
    let n = spec.n() as i64;
    let mapping = (0..n).map(|x| (x + z).rem_euclid(n) as usize).collect();
    VertexAutomorphism::new(&spec.build(), mapping).expect("rotations preserve circulant edges")
}

/// `r(x) = -x mod n`.
pub fn circulant_inversion(spec: &CirculantSpec) -> VertexAutomorphism {
    let n = spec.n() as i64;
    let mapping = (0..n).map(|x| (-x).rem_euclid(n) as usize).collect();
    VertexAutomorphism::new(&spec.build(), mapping).expect("inversion preserves circulant edges")
}

/// All `2n` elements `ρ_z` and `ρ_z ∘ r`.
pub fn dihedral_automorphisms(spec: &CirculantSpec) -> Vec<VertexAutomorphism> {
    let r = circulant_inversion(spec);
    let mut out = Vec::with_capacity(2 * spec.n());
    for z in 0..spec.n() as i64 {
        let rho = circulant_rotation(spec, z);
        out.push(rho.compose(&r));
        out.push(rho);
    }
    out
}

/// `max(‖d* M - N d*‖_∞, ‖U N - N U‖_∞)`.
pub fn verify_intertwining<F: Real>(w: &WalkMatrices<F>, aut: &VertexAutomorphism) -> Result<f64> {
    if aut.mapping.len() != w.vertex_count() {
        return Err(Error::DimensionMismatch { expected: w.vertex_count(), got: aut.mapping.len() });
    }
    let m: Matrix<F> = aut.matrix();
    let n: Matrix<F> = aut.on_arcs(w.arcs()).matrix();
    let d_star = w.d.transpose();
    let lhs = d_star.matmul(&m)?.max_abs_diff(&n.matmul(&d_star)?);
    let comm = w.u.matmul(&n)?.max_abs_diff(&n.matmul(&w.u)?);
    Ok(lhs.approx().max(comm.approx()))
}

/// Largest intertwining deviation over `auts`, computed in parallel.
pub fn max_intertwining_deviation<F: Real + Send + Sync>(
    w: &WalkMatrices<F>,
    auts: &[VertexAutomorphism],
) -> Result<f64> {
    let devs: Vec<f64> = auts.par_iter().map(|a| verify_intertwining(w, a)).collect::<Result<_>>()?;
    Ok(devs.into_iter().fold(0.0, f64::max))
}

/// Given `U^τ d*e_x = γ d*e_y`, checks `U^τ d*e_{g(x)} = γ d*e_{g(y)}`.
pub fn pst_transport_check<F: Real>(
    w: &WalkMatrices<F>,
    aut: &VertexAutomorphism,
    x: usize,
    y: usize,
    tau: usize,
    gamma: i8,
) -> Result<bool> {
    let g = F::from_int(gamma as i64);
    let holds = |x: usize, y: usize| -> Result<bool> {
        let out = evolve(&w.u, &w.vertex_state(x)?, tau)?;
        Ok(dist_scaled(&out, g, &w.vertex_state(y)?).approx() <= TRANSPORT_TOL)
    };
    if !holds(x, y)? {
        return Err(Error::Refused(format!("no PST from {x} to {y} at tau = {tau} with gamma = {gamma}")));
    }
    holds(aut.apply(x), aut.apply(y))
}

/// True when some automorphism fixes exactly one of `x`, `y`, which rules
/// out PST between them.
pub fn fixing_group_obstruction(x: usize, y: usize, auts: &[VertexAutomorphism]) -> bool {
    x != y && auts.iter().any(|a| a.fixes(x) != a.fixes(y))
}

/// Parses one-line notation such as `0,2,1`.
pub fn parse_one_line(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| Error::InvalidAutomorphism(format!("bad image {t:?} in {s:?}"))))
        .collect()
}
