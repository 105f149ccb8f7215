//! Chebyshev polynomials of the first kind via `T_τ = 2x T_{τ-1} - T_{τ-2}`,
//! on scalars, matrices and matrix-vector sequences, over any [`Scalar`].

use crate::error::Result;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

pub fn chebyshev_scalar<T: Scalar>(tau: usize, x: &T) -> T {
    let two = T::from_int(2);
    let (mut prev, mut cur) = (T::one(), x.clone());
    if tau == 0 {
        return prev;
    }
    for _ in 1..tau {
        let next = two.clone() * x.clone() * cur.clone() - prev;
        prev = cur;
        cur = next;
    }
    cur
}

pub fn chebyshev_matrix<T: Scalar>(tau: usize, p: &Matrix<T>) -> Result<Matrix<T>> {
    let mut it = ChebyshevMatrices::new(p.clone());
    Ok(it.nth(tau).expect("unbounded sequence"))
}

/// `T_0(P), T_1(P), …`.
pub struct ChebyshevMatrices<T> {
    p: Matrix<T>,
    prev: Option<Matrix<T>>,
    cur: Option<Matrix<T>>,
}

impl<T: Scalar> ChebyshevMatrices<T> {
    pub fn new(p: Matrix<T>) -> Self {
        Self { p, prev: None, cur: None }
    }
}

impl<T: Scalar> Iterator for ChebyshevMatrices<T> {
    type Item = Matrix<T>;

    fn next(&mut self) -> Option<Matrix<T>> {
        let next = match (&self.prev, &self.cur) {
            (_, None) => Matrix::identity(self.p.rows()),
            (None, Some(_)) => self.p.clone(),
            (Some(prev), Some(cur)) => {
                let two_p_cur = self.p.matmul(cur).expect("square").scale(&T::from_int(2));
                two_p_cur.sub(prev).expect("square")
            }
        };
        self.prev = self.cur.take();
        self.cur = Some(next.clone());
        Some(next)
    }
}

/// `T_0(P) v, T_1(P) v, …`, one matrix-vector product per step.
pub struct ChebyshevVectors<'a, T> {
    p: &'a Matrix<T>,
    prev: Option<Vec<T>>,
    cur: Option<Vec<T>>,
    start: Vec<T>,
}

impl<'a, T: Scalar> ChebyshevVectors<'a, T> {
    pub fn new(p: &'a Matrix<T>, v: Vec<T>) -> Self {
        Self { p, prev: None, cur: None, start: v }
    }
}

impl<T: Scalar> Iterator for ChebyshevVectors<'_, T> {
    type Item = Vec<T>;

    fn next(&mut self) -> Option<Vec<T>> {
        let next = match (&self.prev, &self.cur) {
            (_, None) => self.start.clone(),
            (None, Some(cur)) => self.p.mul_vec(cur).expect("square"),
            (Some(prev), Some(cur)) => {
                let pc = self.p.mul_vec(cur).expect("square");
                let two = T::from_int(2);
                pc.into_iter().zip(prev).map(|(a, b)| two.clone() * a - b.clone()).collect()
            }
        };
        self.prev = self.cur.take();
        self.cur = Some(next.clone());
        Some(next)
    }
}
