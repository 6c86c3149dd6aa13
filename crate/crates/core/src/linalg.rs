//! Minimal dense symmetric linear algebra: row-major matrices, a cyclic
//! Jacobi eigensolver with threshold sweeps, and conjugate gradients.

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};
use num_traits::Zero;

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Copy + Zero> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Mutable access to two distinct rows at once.
    pub fn two_rows_mut(&mut self, i: usize, j: usize) -> (&mut [T], &mut [T]) {
        assert!(i < j && j < self.rows);
        let (head, tail) = self.data.split_at_mut(j * self.cols);
        (
            &mut head[i * self.cols..(i + 1) * self.cols],
            &mut tail[..self.cols],
        )
    }
}

impl<T: Real> Mat<T> {
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(self.cols, x.len());
        (0..self.rows)
            .map(|i| dot(self.row(i), x))
            .collect()
    }

    /// `Qᵀ x` for tall matrices whose columns are basis vectors.
    pub fn transpose_matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(self.rows, x.len());
        let mut out = vec![T::zero(); self.cols];
        for (i, &xi) in x.iter().enumerate() {
            for (o, &q) in out.iter_mut().zip(self.row(i)) {
                *o = *o + q * xi;
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, &v| acc + v * v)
            .sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, &v| acc.max(v.abs()))
    }
}

impl<T> std::ops::Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

pub fn norm2<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in ascending order with matching orthonormal
/// eigenvector columns. Errs when the off-diagonal norm has not reached the
/// rounding floor after `max_sweeps` sweeps.
pub fn jacobi_eigen<T: Real>(a: &Mat<T>, max_sweeps: usize) -> Result<(Vec<T>, Mat<T>)> {
    assert_eq!(a.rows(), a.cols());
    let n = a.rows();
    let mut m = a.clone();
    let mut v = Mat::identity(n);
    let fro = m.frobenius_norm();
    let tol = fro * T::epsilon() * lit(10.0) * lit(n as f64);

    let off_norm = |m: &Mat<T>| -> T {
        let mut acc = T::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                let x = m[(i, j)];
                acc = acc + x * x;
            }
        }
        (acc + acc).sqrt()
    };

    let mut off = off_norm(&m);
    let mut sweeps = 0usize;
    while off > tol {
        if sweeps >= max_sweeps {
            return Err(Error::EigenSweepBudget {
                sweeps,
                off_diagonal: to_f64(off),
            });
        }
        // threshold: skip rotations that cannot reduce the off norm materially
        let thresh = off / lit((n * n) as f64);
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.abs() <= thresh {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                let theta = (aqq - app) / (apq + apq);
                let t = {
                    let denom = theta.abs() + (theta * theta + T::one()).sqrt();
                    if theta >= T::zero() {
                        denom.recip()
                    } else {
                        -denom.recip()
                    }
                };
                let c = (t * t + T::one()).sqrt().recip();
                let s = t * c;

                // rows p and q mix under the rotation; the columns follow by
                // symmetry (contiguous row arithmetic, strided mirror stores)
                {
                    let (rp, rq) = m.two_rows_mut(p, q);
                    for (ep, eq) in rp.iter_mut().zip(rq.iter_mut()) {
                        let akp = *ep;
                        let akq = *eq;
                        *ep = c * akp - s * akq;
                        *eq = s * akp + c * akq;
                    }
                    rp[p] = app - t * apq;
                    rq[q] = aqq + t * apq;
                    rp[q] = T::zero();
                    rq[p] = T::zero();
                }
                for k in 0..n {
                    if k != p && k != q {
                        m[(k, p)] = m[(p, k)];
                        m[(k, q)] = m[(q, k)];
                    }
                }

                let (vp, vq) = v.two_rows_mut(p, q);
                for (ep, eq) in vp.iter_mut().zip(vq.iter_mut()) {
                    let vkp = *ep;
                    let vkq = *eq;
                    *ep = c * vkp - s * vkq;
                    *eq = s * vkp + c * vkq;
                }
            }
        }
        sweeps += 1;
        off = off_norm(&m);
    }

    // v rows accumulated Jᵀ products; eigenvector k is row k of v
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].partial_cmp(&m[(j, j)]).unwrap());
    let values: Vec<T> = order.iter().map(|&i| m[(i, i)]).collect();
    let mut vectors = Mat::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, col)] = v[(src, k)];
        }
    }
    Ok((values, vectors))
}

/// Conjugate gradients for a symmetric positive definite system, to a
/// relative residual on `‖b‖₂`.
pub fn conjugate_gradient<T: Real>(
    a: &Mat<T>,
    shift: T,
    b: &[T],
    rel_tol: T,
    max_iters: usize,
) -> Result<Vec<T>> {
    let n = b.len();
    assert_eq!(a.rows(), n);
    let apply = |x: &[T]| -> Vec<T> {
        let mut y = a.matvec(x);
        for (yi, &xi) in y.iter_mut().zip(x) {
            *yi = *yi + shift * xi;
        }
        y
    };

    let b_norm = norm2(b);
    if b_norm == T::zero() {
        return Ok(vec![T::zero(); n]);
    }
    let mut x = vec![T::zero(); n];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut rs = dot(&r, &r);
    for _ in 0..max_iters {
        if rs.sqrt() <= rel_tol * b_norm {
            return Ok(x);
        }
        let ap = apply(&p);
        let alpha = rs / dot(&p, &ap);
        for i in 0..n {
            x[i] = x[i] + alpha * p[i];
            r[i] = r[i] - alpha * ap[i];
        }
        let rs_new = dot(&r, &r);
        let beta = rs_new / rs;
        rs = rs_new;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
    }
    if rs.sqrt() <= rel_tol * b_norm {
        return Ok(x);
    }
    Err(Error::CgBudget {
        iterations: max_iters,
        residual: to_f64(rs.sqrt() / b_norm),
    })
}
