//! Spectral decomposition `P = Σ λ E_λ` of the discriminant.
//!
//! Circulants take an exact path: the eigenvalue of `u_j = (ζ_n^{jk})_k` is
//! `(1/|S|) Σ_{s∈S} ζ_n^{js}`, indices are grouped by equality of that sum in
//! `Q(ζ_n)`, and projectors come from the closed form
//! `E[x, y] = (1/n) Σ_{j∈I} cos(2πj(x - y)/n)`. Other graphs go through a
//! cyclic Jacobi eigensolver and tolerance grouping, which refuses to group
//! when two clusters are closer than [`Tolerances::required_gap`].

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::cyclotomic::{totient, CycloElem, DEGREE_CAP};
use crate::error::{Error, Result};
use crate::graph::CirculantSpec;
use crate::matrix::{norm, Matrix};
use crate::scalar::{fmt_sig17, Real};
use crate::tolerance::Tolerances;

const MAX_SWEEPS: usize = 100;

/// One circulant eigenvalue `λ_j` with its exact tag `|S| λ_j ∈ Q(ζ_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculantEigenvalue {
    pub j: usize,
    pub value: f64,
    pub tag: CycloElem,
}

#[derive(Debug, Clone)]
pub struct EigenClass<F> {
    pub value: F,
    /// `|S| λ` as an element of `Q(ζ_n)` (circulant path only).
    pub exact: Option<CycloElem>,
    /// Indices `j` with `λ_j = λ` (circulant path only).
    pub indices: Vec<usize>,
    pub multiplicity: usize,
    pub projector: Matrix<F>,
}

impl<F: Real> EigenClass<F> {
    /// `E_λ v`.
    pub fn apply(&self, v: &[F]) -> Result<Vec<F>> {
        self.projector.mul_vec(v)
    }
}

#[derive(Debug, Clone)]
pub struct SpectralDecomposition<F> {
    classes: Vec<EigenClass<F>>,
    source: Matrix<F>,
    circulant: Option<CirculantSpec>,
}

/// How `E_λ e_x` relates to `E_λ e_y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SignRelation {
    Plus,
    Minus,
    Mixed,
}

impl SignRelation {
    pub fn as_i8(self) -> Option<i8> {
        match self {
            Self::Plus => Some(1),
            Self::Minus => Some(-1),
            Self::Mixed => None,
        }
    }
}

/// `λ_j` for `j ∈ [n]`.
pub fn circulant_eigenvalues(spec: &CirculantSpec) -> Result<Vec<CirculantEigenvalue>> {
    let n = spec.n();
    let k = spec.valency() as f64;
    (0..n)
        .map(|j| {
            let tag = CycloElem::from_terms(
                n as u64,
                spec.connection_set().iter().map(|&s| (crate::scalar::rational(1, 1), ((j * s) % n) as i64)),
            )?;
            let value =
                spec.connection_set().iter().map(|&s| (2.0 * PI * ((j * s) % n) as f64 / n as f64).cos()).sum::<f64>()
                    / k;
            Ok(CirculantEigenvalue { j, value, tag })
        })
        .collect()
}

/// Decomposes `p`, exactly when `circulant` describes it.
pub fn decompose<F: Real>(
    p: &Matrix<F>,
    circulant: Option<&CirculantSpec>,
    tol: &Tolerances,
) -> Result<SpectralDecomposition<F>> {
    match circulant {
        Some(spec) if totient(spec.n() as u64) as usize <= DEGREE_CAP => {
            if p.rows() != spec.n() || p.cols() != spec.n() {
                return Err(Error::DimensionMismatch { expected: spec.n(), got: p.rows() });
            }
            SpectralDecomposition::circulant_with_source(spec, p.clone())
        }
        _ => SpectralDecomposition::generic(p, tol),
    }
}

impl<F: Real> SpectralDecomposition<F> {
    /// Exact-tag decomposition of `P = A/|S|` for `X(Z_n, S)`.
    pub fn for_circulant(spec: &CirculantSpec) -> Result<Self> {
        let n = spec.n();
        let k = F::from_int(spec.valency() as i64);
        let g = spec.build();
        let p = Matrix::from_fn(n, n, |x, y| if g.has_edge(x, y) { F::one() / k } else { F::zero() });
        Self::circulant_with_source(spec, p)
    }

    fn circulant_with_source(spec: &CirculantSpec, source: Matrix<F>) -> Result<Self> {
        let n = spec.n();
        let eig = circulant_eigenvalues(spec)?;
        let mut groups: Vec<(CycloElem, f64, Vec<usize>)> = Vec::new();
        for e in eig {
            match groups.iter_mut().find(|(t, _, _)| *t == e.tag) {
                Some((_, _, idx)) => idx.push(e.j),
                None => groups.push((e.tag, e.value, vec![e.j])),
            }
        }
        groups.sort_by(|a, b| b.1.total_cmp(&a.1));
        let classes = groups
            .into_iter()
            .map(|(tag, value, indices)| {
                let projector = Matrix::from_fn(n, n, |x, y| {
                    let d = (x + n - y) % n;
                    let s: f64 = indices.iter().map(|&j| (2.0 * PI * ((j * d) % n) as f64 / n as f64).cos()).sum();
                    F::from_f64_lossy(s / n as f64)
                });
                EigenClass {
                    value: F::from_f64_lossy(value),
                    exact: Some(tag),
                    multiplicity: indices.len(),
                    indices,
                    projector,
                }
            })
            .collect();
        Ok(Self { classes, source, circulant: Some(spec.clone()) })
    }

    /// Jacobi eigensolver followed by tolerance grouping.
    pub fn generic(p: &Matrix<F>, tol: &Tolerances) -> Result<Self> {
        if p.rows() != p.cols() {
            return Err(Error::DimensionMismatch { expected: p.rows(), got: p.cols() });
        }
        let (values, vectors) = jacobi(p)?;
        let n = p.rows();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).expect("finite eigenvalues"));

        let group_tol = F::from_f64_lossy(tol.group);
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for &i in &order {
            match clusters.last_mut() {
                Some(c) if values[*c.last().expect("non-empty")] - values[i] <= group_tol => c.push(i),
                _ => clusters.push(vec![i]),
            }
        }
        let required = tol.required_gap();
        for w in clusters.windows(2) {
            let gap = (values[*w[0].last().expect("non-empty")] - values[w[1][0]]).approx();
            if gap < required {
                return Err(Error::AmbiguousGrouping { gap, required });
            }
        }
        let classes = clusters
            .into_iter()
            .map(|c| {
                let mean = c.iter().fold(F::zero(), |acc, &i| acc + values[i]) / F::from_int(c.len() as i64);
                let projector = Matrix::from_fn(n, n, |x, y| {
                    c.iter().fold(F::zero(), |acc, &i| acc + vectors[(x, i)] * vectors[(y, i)])
                });
                EigenClass { value: mean, exact: None, indices: Vec::new(), multiplicity: c.len(), projector }
            })
            .collect();
        Ok(Self { classes, source: p.clone(), circulant: None })
    }

    pub fn classes(&self) -> &[EigenClass<F>] {
        &self.classes
    }

    pub fn source(&self) -> &Matrix<F> {
        &self.source
    }

    pub fn circulant_spec(&self) -> Option<&CirculantSpec> {
        self.circulant.as_ref()
    }

    pub fn dimension(&self) -> usize {
        self.source.rows()
    }

    /// Distinct eigenvalues, descending.
    pub fn values(&self) -> Vec<F> {
        self.classes.iter().map(|c| c.value).collect()
    }

    /// `Σ f(λ) E_λ`.
    pub fn functional_calculus(&self, f: impl Fn(F) -> F) -> Matrix<F> {
        let n = self.dimension();
        let mut out = Matrix::zeros(n, n);
        for c in &self.classes {
            out = out.add(&c.projector.scale(&f(c.value))).expect("square projectors");
        }
        out
    }

    /// Largest deviation among `E² = E`, `E_i E_j = 0`, `Σ E = I`, `Σ λE = P`
    /// and `E* = E`.
    pub fn projector_defect(&self) -> F {
        let n = self.dimension();
        let mut worst = F::zero();
        let mut sum = Matrix::zeros(n, n);
        for (i, a) in self.classes.iter().enumerate() {
            let sq = a.projector.matmul(&a.projector).expect("square");
            worst = worst.max(sq.max_abs_diff(&a.projector));
            worst = worst.max(a.projector.transpose().max_abs_diff(&a.projector));
            for b in &self.classes[i + 1..] {
                let prod = a.projector.matmul(&b.projector).expect("square");
                worst = worst.max(prod.max_abs_diff(&Matrix::zeros(n, n)));
            }
            sum = sum.add(&a.projector).expect("square");
        }
        worst = worst.max(sum.max_abs_diff(&Matrix::identity(n)));
        worst.max(self.functional_calculus(|x| x).max_abs_diff(&self.source))
    }

    /// Indices of the classes with `‖E_λ v‖ > tol`.
    pub fn support(&self, v: &[F], tol: f64) -> Result<Vec<usize>> {
        if v.len() != self.dimension() {
            return Err(Error::DimensionMismatch { expected: self.dimension(), got: v.len() });
        }
        let tol = F::from_f64_lossy(tol);
        let mut out = Vec::new();
        for (i, c) in self.classes.iter().enumerate() {
            if norm(&c.apply(v)?) > tol {
                out.push(i);
            }
        }
        Ok(out)
    }

    /// Support of `e_x`.
    pub fn vertex_support(&self, x: usize, tol: f64) -> Result<Vec<usize>> {
        self.check_vertex(x)?;
        self.support(&unit(self.dimension(), x), tol)
    }

    fn check_vertex(&self, x: usize) -> Result<()> {
        if x < self.dimension() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: x, count: self.dimension() })
        }
    }

    /// Per-class relation between `E_λ e_x` and `E_λ e_y`.
    ///
    /// For a circulant on `n = 2l` vertices and `y = x + l` this is decided
    /// from the parities of the indices in `I_λ`, since `ζ_n^{jl} = (-1)^j`.
    pub fn sign_relation(&self, x: usize, y: usize, tol: f64) -> Result<Vec<SignRelation>> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        let n = self.dimension();
        if x == y {
            return Ok(vec![SignRelation::Plus; self.classes.len()]);
        }
        if self.circulant.is_some() && n % 2 == 0 && (x + n / 2) % n == y {
            return Ok(self
                .classes
                .iter()
                .map(|c| {
                    if c.indices.iter().all(|j| j % 2 == 0) {
                        SignRelation::Plus
                    } else if c.indices.iter().all(|j| j % 2 == 1) {
                        SignRelation::Minus
                    } else {
                        SignRelation::Mixed
                    }
                })
                .collect());
        }
        let tol = F::from_f64_lossy(tol);
        self.classes
            .iter()
            .map(|c| {
                let ex = c.projector.column(x);
                let ey = c.projector.column(y);
                let minus: Vec<F> = ex.iter().zip(&ey).map(|(a, b)| *a - *b).collect();
                let plus: Vec<F> = ex.iter().zip(&ey).map(|(a, b)| *a + *b).collect();
                Ok(if norm(&minus) <= tol {
                    SignRelation::Plus
                } else if norm(&plus) <= tol {
                    SignRelation::Minus
                } else {
                    SignRelation::Mixed
                })
            })
            .collect()
    }

    /// CSV with columns `j, lambda_float, exact_tag_string, class_id`.
    ///
    /// Circulants list every `j ∈ [n]`; other graphs list each eigenvalue
    /// with multiplicity, numbered in descending order.
    pub fn eigen_table_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InternalInconsistency(format!("csv: {e}"));
        w.write_record(["j", "lambda_float", "exact_tag_string", "class_id"]).map_err(io)?;
        let mut rows: BTreeMap<usize, (f64, String, usize)> = BTreeMap::new();
        let mut next = 0;
        for (cid, c) in self.classes.iter().enumerate() {
            let tag = c.exact.as_ref().map(ToString::to_string).unwrap_or_default();
            if c.indices.is_empty() {
                for _ in 0..c.multiplicity {
                    rows.insert(next, (c.value.approx(), tag.clone(), cid));
                    next += 1;
                }
            } else {
                for &j in &c.indices {
                    rows.insert(j, (c.value.approx(), tag.clone(), cid));
                }
            }
        }
        for (j, (v, tag, cid)) in rows {
            w.write_record([j.to_string(), fmt_sig17(v), tag, cid.to_string()]).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InternalInconsistency(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::InternalInconsistency(e.to_string()))
    }
}

/// `SignRelation` per class; free-function form.
pub fn projector_sign_relation<F: Real>(
    dec: &SpectralDecomposition<F>,
    x: usize,
    y: usize,
    tol: f64,
) -> Result<Vec<SignRelation>> {
    dec.sign_relation(x, y, tol)
}

/// Classes in the support of `v`; free-function form.
pub fn eigenvalue_support<F: Real>(dec: &SpectralDecomposition<F>, v: &[F], tol: f64) -> Result<Vec<usize>> {
    dec.support(v, tol)
}

pub(crate) fn unit<F: Real>(n: usize, x: usize) -> Vec<F> {
    let mut v = vec![F::zero(); n];
    v[x] = F::one();
    v
}

/// Cyclic Jacobi: eigenvalues and orthonormal eigenvectors (as columns) of a
/// symmetric matrix.
pub fn jacobi<F: Real>(m: &Matrix<F>) -> Result<(Vec<F>, Matrix<F>)> {
    let n = m.rows();
    let mut a = m.clone();
    let mut v = Matrix::identity(n);
    let frob = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .fold(F::zero(), |acc, (i, j)| acc + m[(i, j)] * m[(i, j)])
        .sqrt();
    let eps = F::epsilon();
    let two = F::from_int(2);
    for _ in 0..MAX_SWEEPS {
        let mut off = F::zero();
        for p in 0..n {
            for q in p + 1..n {
                off = off + a[(p, q)] * a[(p, q)];
            }
        }
        if off.sqrt() <= eps * frob || off == F::zero() {
            return Ok(((0..n).map(|i| a[(i, i)]).collect(), v));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.abs() <= eps * eps * frob {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (two * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + F::one()).sqrt());
                let c = F::one() / (t * t + F::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    Err(Error::NoConvergence(MAX_SWEEPS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::operators::WalkMatrices;

    fn spec(n: usize, s: &[i64]) -> CirculantSpec {
        CirculantSpec::symmetric(n, s).unwrap()
    }

    fn values(d: &SpectralDecomposition<f64>) -> Vec<(f64, usize)> {
        d.classes().iter().map(|c| (c.value, c.multiplicity)).collect()
    }

    fn close(a: &[(f64, usize)], b: &[(f64, usize)]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x.0 - y.0).abs() < 1e-12 && x.1 == y.1)
    }

    #[test]
    fn c4_and_k4() {
        let c4 = SpectralDecomposition::<f64>::for_circulant(&spec(4, &[1])).unwrap();
        assert!(close(&values(&c4), &[(1.0, 1), (0.0, 2), (-1.0, 1)]));
        let k4 = SpectralDecomposition::<f64>::for_circulant(&spec(4, &[1, 2])).unwrap();
        assert!(close(&values(&k4), &[(1.0, 1), (-1.0 / 3.0, 3)]));
    }

    #[test]
    fn generic_path_matches_circulant_path() {
        for (n, s) in [(4, vec![1]), (6, vec![1]), (8, vec![1, 3]), (12, vec![1, 5]), (10, vec![3, 5]), (9, vec![1, 2])]
        {
            let sp = spec(n, &s);
            let exact = SpectralDecomposition::<f64>::for_circulant(&sp).unwrap();
            let w = WalkMatrices::<f64>::new(&sp.build()).unwrap();
            let generic = SpectralDecomposition::generic(&w.p, &Tolerances::default()).unwrap();
            let (a, b) = (values(&exact), values(&generic));
            assert_eq!(a.len(), b.len());
            assert!(a.iter().zip(&b).all(|(x, y)| (x.0 - y.0).abs() < 1e-10 && x.1 == y.1));
            assert!(exact.projector_defect() < 1e-10);
            assert!(generic.projector_defect() < 1e-10);
        }
    }

    #[test]
    fn documented_circulant_formulas() {
        // a + b = l: λ_j = 0 for odd j, cos(ajπ/l) for even j
        for (l, a, b) in [(5usize, 1usize, 4usize), (6, 1, 5), (7, 2, 5)] {
            let eig = circulant_eigenvalues(&spec(2 * l, &[a as i64, b as i64])).unwrap();
            for e in eig {
                let want = if e.j % 2 == 1 { 0.0 } else { (PI * (a * e.j) as f64 / l as f64).cos() };
                assert!((e.value - want).abs() < 1e-12);
                assert!((e.tag.to_complex().re / 4.0 - e.value).abs() < 1e-10);
            }
        }
        // {±a, l}: (2 cos(ajπ/l) + (-1)^j) / 3
        for (l, a) in [(3usize, 1usize), (5, 3), (7, 2)] {
            let eig = circulant_eigenvalues(&spec(2 * l, &[a as i64, l as i64])).unwrap();
            for e in eig {
                let sign = if e.j % 2 == 0 { 1.0 } else { -1.0 };
                let want = (2.0 * (PI * (a * e.j) as f64 / l as f64).cos() + sign) / 3.0;
                assert!((e.value - want).abs() < 1e-12);
            }
        }
        let eig = circulant_eigenvalues(&spec(9, &[2, 3])).unwrap();
        assert!((eig[0].value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn support_examples() {
        let sp = spec(6, &[1]);
        let d = SpectralDecomposition::<f64>::for_circulant(&sp).unwrap();
        assert_eq!(d.classes().len(), 4);
        assert_eq!(d.vertex_support(0, 1e-9).unwrap(), vec![0, 1, 2, 3]);
        let u0 = vec![1.0 / 6f64.sqrt(); 6];
        assert_eq!(d.support(&u0, 1e-9).unwrap(), vec![0]);
    }

    #[test]
    fn sign_relations() {
        let d = SpectralDecomposition::<f64>::for_circulant(&spec(12, &[1, 5])).unwrap();
        let rel = d.sign_relation(0, 6, 1e-8).unwrap();
        for (c, r) in d.classes().iter().zip(&rel) {
            let want = if c.value.abs() < 1e-12 { SignRelation::Minus } else { SignRelation::Plus };
            assert_eq!(*r, want);
        }
        assert!(d.sign_relation(3, 3, 1e-8).unwrap().iter().all(|r| *r == SignRelation::Plus));

        let d8 = SpectralDecomposition::<f64>::for_circulant(&spec(8, &[1, 3])).unwrap();
        let rel = d8.sign_relation(0, 4, 1e-8).unwrap();
        let zero = d8.classes().iter().position(|c| c.value.abs() < 1e-12).unwrap();
        assert_eq!(rel[zero], SignRelation::Mixed);

        // numeric path agrees with the parity rule
        let w = WalkMatrices::<f64>::new(&spec(12, &[1, 5]).build()).unwrap();
        let g = SpectralDecomposition::generic(&w.p, &Tolerances::default()).unwrap();
        assert_eq!(g.sign_relation(0, 6, 1e-8).unwrap(), d.sign_relation(0, 6, 1e-8).unwrap());
    }

    #[test]
    fn ambiguous_grouping_is_refused() {
        let p = Matrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, 1.0 + 1e-8]]).unwrap();
        assert!(matches!(
            SpectralDecomposition::generic(&p, &Tolerances::default()),
            Err(Error::AmbiguousGrouping { .. })
        ));
    }

    #[test]
    fn irregular_graph_projectors() {
        let g = Graph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 2)]).unwrap();
        let w = WalkMatrices::<f64>::new(&g).unwrap();
        let d = SpectralDecomposition::generic(&w.p, &Tolerances::default()).unwrap();
        assert!(d.projector_defect() < 1e-10);
        assert!(d.values().iter().all(|v| v.abs() <= 1.0 + 1e-12));
    }

    #[test]
    fn csv_table() {
        let d = SpectralDecomposition::<f64>::for_circulant(&spec(4, &[1])).unwrap();
        let csv = d.eigen_table_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "j,lambda_float,exact_tag_string,class_id");
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("0,1.0000000000000000e0,[4] 2,0"));
    }
}
