//! Reference computations written without the library's own machinery.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `Φ_n` by dividing `x^n - 1` by `Φ_d` for the proper divisors `d`.
pub fn cyclotomic_poly(n: u64) -> Vec<BigInt> {
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in (1..n).filter(|d| n % d == 0) {
        num = exact_div(&num, &cyclotomic_poly(d));
    }
    num
}

/// Quotient of monic-divisor polynomial division, coefficients low to high.
fn exact_div(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let mut quot = vec![BigInt::zero(); rem.len() - db];
    for i in (0..quot.len()).rev() {
        let c = rem[i + db].clone() / b[db].clone();
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        quot[i] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "inexact division");
    quot
}

/// Matrix of multiplication by `sum c_i x^i` on `Q[x]/Φ_n`, columns are
/// images of `1, x, …`.
pub fn multiplication_matrix(n: u64, coeffs: &[BigRational]) -> Vec<Vec<BigRational>> {
    let phi = cyclotomic_poly(n);
    let deg = phi.len() - 1;
    let reduce = |mut v: Vec<BigRational>| {
        for i in (deg..v.len()).rev() {
            let c = v[i].clone();
            if c.is_zero() {
                continue;
            }
            for (j, pj) in phi.iter().enumerate() {
                v[i - deg + j] -= &c * BigRational::from_integer(pj.clone());
            }
        }
        v.truncate(deg);
        v
    };
    let mut m = vec![vec![BigRational::zero(); deg]; deg];
    for col in 0..deg {
        let mut prod = vec![BigRational::zero(); deg + coeffs.len()];
        for (i, c) in coeffs.iter().enumerate() {
            prod[i + col] += c;
        }
        for (row, v) in reduce(prod).into_iter().enumerate() {
            m[row][col] = v;
        }
    }
    m
}

/// Characteristic polynomial coefficients `c_0..c_n` (monic, `c_n = 1`) by
/// Faddeev–LeVerrier.
pub fn charpoly(a: &[Vec<BigRational>]) -> Vec<BigRational> {
    let n = a.len();
    let mul = |x: &[Vec<BigRational>], y: &[Vec<BigRational>]| {
        let mut out = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for k in 0..n {
                if x[i][k].is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[i][j] += &x[i][k] * &y[k][j];
                }
            }
        }
        out
    };
    let mut c = vec![BigRational::zero(); n + 1];
    c[n] = BigRational::one();
    let mut m = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        let am = mul(a, &m);
        let trace: BigRational = (0..n).map(|i| am[i][i].clone()).fold(BigRational::zero(), |s, v| s + v);
        c[n - k] = -trace / q(k as i64);
        m = am;
    }
    c
}

/// Algebraic integer iff the characteristic polynomial of multiplication has
/// integer coefficients.
pub fn charpoly_integral(n: u64, coeffs: &[BigRational]) -> bool {
    charpoly(&multiplication_matrix(n, coeffs)).iter().all(|c| c.is_integer())
}

/// Eigenvalues `(1/|S|) Σ_{s∈S} e^{2πijs/n}` by direct summation.
pub fn circulant_spectrum(n: usize, s: &[usize]) -> Vec<Complex64> {
    (0..n)
        .map(|j| {
            let sum: Complex64 =
                s.iter().map(|&x| Complex64::from_polar(1.0, 2.0 * PI * (j * x) as f64 / n as f64)).sum();
            sum / s.len() as f64
        })
        .collect()
}

/// Grover walk on arcs built straight from an edge list.
pub struct ArcWalk {
    pub arcs: Vec<(usize, usize)>,
    pub degree: Vec<usize>,
}

impl ArcWalk {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut arcs = Vec::new();
        let mut degree = vec![0; n];
        for &(u, v) in edges {
            arcs.push((u, v));
            arcs.push((v, u));
            degree[u] += 1;
            degree[v] += 1;
        }
        Self { arcs, degree }
    }

    /// `(U ψ)(a) = Σ_{b: t(b) = o(a)} (2/deg) ψ(b) - ψ(a^{-1})`.
    pub fn step(&self, psi: &[f64]) -> Vec<f64> {
        let n = self.degree.len();
        let mut incoming = vec![0.0; n];
        for (b, &(_, t)) in self.arcs.iter().enumerate() {
            incoming[t] += psi[b];
        }
        self.arcs
            .iter()
            .map(|&(o, t)| {
                let rev = self.arcs.iter().position(|&a| a == (t, o)).unwrap();
                2.0 / self.degree[o] as f64 * incoming[o] - psi[rev]
            })
            .collect()
    }

    /// `d*e_x`: uniform over arcs ending at `x`.
    pub fn vertex_state(&self, x: usize) -> Vec<f64> {
        let w = 1.0 / (self.degree[x] as f64).sqrt();
        self.arcs.iter().map(|&(_, t)| if t == x { w } else { 0.0 }).collect()
    }

    /// `⟨d*e_y, U^τ d*e_x⟩` for `τ = 0..=tau_max`.
    pub fn overlaps(&self, x: usize, y: usize, tau_max: usize) -> Vec<f64> {
        let target = self.vertex_state(y);
        let mut psi = self.vertex_state(x);
        let mut out = Vec::with_capacity(tau_max + 1);
        for tau in 0..=tau_max {
            if tau > 0 {
                psi = self.step(&psi);
            }
            out.push(psi.iter().zip(&target).map(|(a, b)| a * b).sum());
        }
        out
    }
}

/// `|a - b|` for complex numbers.
pub fn cdist(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm()
}

/// Every automorphism of a small graph, by backtracking over vertex images.
pub fn automorphisms(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![vec![false; n]; n];
    for &(u, v) in edges {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    let deg: Vec<usize> = adj.iter().map(|r| r.iter().filter(|&&b| b).count()).collect();
    let mut out = Vec::new();
    let mut map = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn go(adj: &[Vec<bool>], deg: &[usize], map: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let v = map.len();
        if v == adj.len() {
            out.push(map.clone());
            return;
        }
        for img in 0..adj.len() {
            if used[img] || deg[img] != deg[v] || (0..v).any(|u| adj[u][v] != adj[map[u]][img]) {
                continue;
            }
            used[img] = true;
            map.push(img);
            go(adj, deg, map, used, out);
            map.pop();
            used[img] = false;
        }
    }
    go(&adj, &deg, &mut map, &mut used, &mut out);
    out
}
