//! Boundary, shift and time-evolution matrices of the Grover walk, plus the
//! discriminant `P = d R d*`.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::graph::{ArcSpace, Graph};
use crate::matrix::Matrix;
use crate::scalar::{rational, Real, Scalar};

/// All matrices of the Grover walk on one graph.
#[derive(Debug, Clone)]
pub struct WalkMatrices<F> {
    arcs: ArcSpace,
    /// `V × A`, `d[x, a] = deg(x)^{-1/2}` iff `x = t(a)`.
    pub d: Matrix<F>,
    /// `A × A` arc reversal.
    pub r: Matrix<F>,
    /// `A × A`, `U = R (2 d* d - I)`.
    pub u: Matrix<F>,
    pub adjacency: Matrix<F>,
    /// `V × V` discriminant.
    pub p: Matrix<F>,
    /// `A/k` in exact arithmetic, present for `k`-regular graphs.
    pub p_exact: Option<Matrix<BigRational>>,
    degrees: Vec<usize>,
}

impl<F: Real> WalkMatrices<F> {
    pub fn new(g: &Graph) -> Result<Self> {
        if let Some(x) = (0..g.vertex_count()).find(|&x| g.degree(x) == 0) {
            return Err(Error::IsolatedVertex(x));
        }
        let arcs = g.arc_space();
        let nv = g.vertex_count();
        let na = arcs.len();
        let inv_sqrt: Vec<F> = g.degrees().iter().map(|&k| F::one() / F::from_f64_lossy(k as f64).sqrt()).collect();

        let d = Matrix::from_fn(nv, na, |x, a| if arcs.terminus(a) == x { inv_sqrt[x] } else { F::zero() });
        let r = Matrix::from_fn(na, na, |a, b| if arcs.inverse(b) == a { F::one() } else { F::zero() });
        let two = F::from_int(2);
        // U[a, b] = 2/deg t(b) [o(a) = t(b)] - [a = b^{-1}]
        let u = Matrix::from_fn(na, na, |a, b| {
            let mut v = F::zero();
            if arcs.origin(a) == arcs.terminus(b) {
                v = two / F::from_int(g.degree(arcs.terminus(b)) as i64);
            }
            if arcs.inverse(b) == a {
                v = v - F::one();
            }
            v
        });
        let adjacency = Matrix::from_fn(nv, nv, |x, y| if g.has_edge(x, y) { F::one() } else { F::zero() });
        let p = d.matmul(&r)?.matmul(&d.transpose())?;
        let p_exact = g.regular_degree().map(|k| {
            Matrix::from_fn(
                nv,
                nv,
                |x, y| {
                    if g.has_edge(x, y) {
                        rational(1, k as i64)
                    } else {
                        BigRational::from_int(0)
                    }
                },
            )
        });
        Ok(Self { arcs, d, r, u, adjacency, p, p_exact, degrees: g.degrees().to_vec() })
    }

    pub fn arcs(&self) -> &ArcSpace {
        &self.arcs
    }

    pub fn vertex_count(&self) -> usize {
        self.degrees.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// `d* e_x`: weight `deg(x)^{-1/2}` on every arc pointing into `x`.
    pub fn vertex_state(&self, x: usize) -> Result<Vec<F>> {
        if x >= self.vertex_count() {
            return Err(Error::VertexOutOfRange { vertex: x, count: self.vertex_count() });
        }
        Ok(self.d.row(x).to_vec())
    }

    pub fn degree(&self, x: usize) -> usize {
        self.degrees[x]
    }
}

/// `d* e_x` for `x` in `g`.
pub fn vertex_type_state<F: Real>(g: &Graph, x: usize) -> Result<Vec<F>> {
    g.check_vertex(x)?;
    if g.degree(x) == 0 {
        return Err(Error::IsolatedVertex(x));
    }
    let arcs = g.arc_space();
    let w = F::one() / F::from_f64_lossy(g.degree(x) as f64).sqrt();
    Ok((0..arcs.len()).map(|a| if arcs.terminus(a) == x { w } else { F::zero() }).collect())
}

pub fn build_walk_matrices<F: Real>(g: &Graph) -> Result<WalkMatrices<F>> {
    WalkMatrices::new(g)
}
