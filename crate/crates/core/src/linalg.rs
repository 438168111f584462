//! Dense symmetric linear algebra: Cholesky factorization, cyclic Jacobi
//! eigensolver, the generalized problem `H v = E S v`, and the implicit QL
//! iteration for symmetric tridiagonal matrices used by Golub-Welsch.

use crate::error::{Error, Result};
use crate::real::Real;

/// Square row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "matrix must be square");
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|&x| x * x).sum::<T>().sqrt()
    }

    /// Largest `|a_ij - a_ji|` relative to the Frobenius norm.
    pub fn asymmetry(&self) -> T {
        let norm = self.frobenius_norm();
        if norm == T::zero() {
            return T::zero();
        }
        let mut worst = T::zero();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst / norm
    }

    pub fn scaled(&self, s: T) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    /// `a^T M b`.
    pub fn bilinear(&self, a: &[T], b: &[T]) -> T {
        let mb = self.mul_vec(b);
        a.iter().zip(&mb).map(|(&x, &y)| x * y).sum()
    }

    pub fn map<U: Real>(&self, f: impl Fn(T) -> U) -> Matrix<U> {
        Matrix {
            n: self.n,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

/// Lower-triangular `L` with `A = L L^T`.
pub fn cholesky<T: Real>(a: &Matrix<T>) -> Result<Matrix<T>> {
    let n = a.dim();
    let mut l = Matrix::zeros(n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > T::zero()) {
            return Err(Error::Numeric(format!(
                "Cholesky factorization failed at pivot {j}: matrix is not positive definite"
            )));
        }
        let d = d.sqrt();
        l[(j, j)] = d;
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / d;
        }
    }
    Ok(l)
}

/// Solves `L X = B` column by column for lower-triangular `L`.
fn forward_substitute<T: Real>(l: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let n = l.dim();
    let mut x = Matrix::zeros(n);
    for col in 0..n {
        for i in 0..n {
            let mut s = b[(i, col)];
            for k in 0..i {
                s -= l[(i, k)] * x[(k, col)];
            }
            x[(i, col)] = s / l[(i, i)];
        }
    }
    x
}

/// Solves `L^T x = y` for lower-triangular `L`.
fn back_substitute_transposed<T: Real>(l: &Matrix<T>, y: &[T]) -> Vec<T> {
    let n = l.dim();
    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in (i + 1)..n {
            s -= l[(k, i)] * x[k];
        }
        x[i] = s / l[(i, i)];
    }
    x
}

#[derive(Clone, Copy, Debug)]
pub struct JacobiOptions {
    /// Convergence when the off-diagonal Frobenius norm drops below
    /// `rel_tol * ||A||_F`.
    pub rel_tol: f64,
    pub max_sweeps: usize,
}

impl JacobiOptions {
    /// Tolerance a few ulps above the representation's roundoff.
    pub fn for_precision<T: Real>(n: usize) -> Self {
        let eps = T::epsilon().to_f64();
        Self {
            rel_tol: (eps * 8.0 * (n.max(1) as f64)).max(eps),
            max_sweeps: 60,
        }
    }
}

/// Eigen decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues in ascending order and the matching orthonormal
/// eigenvectors as columns.
pub fn jacobi_eigen<T: Real>(a: &Matrix<T>, opts: JacobiOptions) -> Result<(Vec<T>, Matrix<T>)> {
    let n = a.dim();
    let mut a = a.clone();
    let mut v = Matrix::identity(n);
    let norm = a.frobenius_norm();
    let tol = T::from_f64(opts.rel_tol) * norm;

    let off_norm = |m: &Matrix<T>| {
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)] * m[(i, j)];
                }
            }
        }
        s.sqrt()
    };

    let mut converged = n < 2 || norm == T::zero();
    let mut sweeps = 0;
    while !converged {
        if off_norm(&a) <= tol {
            converged = true;
            break;
        }
        if sweeps == opts.max_sweeps {
            break;
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let diag_scale = a[(p, p)].abs() + a[(q, q)].abs();
                if apq.abs() <= T::from_f64(1e-36) * diag_scale {
                    a[(p, q)] = T::zero();
                    a[(q, p)] = T::zero();
                    continue;
                }
                let two = T::from_f64(2.0);
                let theta = (a[(q, q)] - a[(p, p)]) / (two * apq);
                let t = if theta.abs().to_f64() > 1e150 {
                    T::one() / (two * theta)
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                let tau = s / (T::one() + c);
                a[(p, p)] -= t * apq;
                a[(q, q)] += t * apq;
                a[(p, q)] = T::zero();
                a[(q, p)] = T::zero();
                for r in 0..n {
                    if r != p && r != q {
                        let arp = a[(r, p)];
                        let arq = a[(r, q)];
                        let new_rp = arp - s * (arq + tau * arp);
                        let new_rq = arq + s * (arp - tau * arq);
                        a[(r, p)] = new_rp;
                        a[(p, r)] = new_rp;
                        a[(r, q)] = new_rq;
                        a[(q, r)] = new_rq;
                    }
                    let vrp = v[(r, p)];
                    let vrq = v[(r, q)];
                    v[(r, p)] = vrp - s * (vrq + tau * vrp);
                    v[(r, q)] = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }
    if !converged {
        return Err(Error::Numeric(format!(
            "Jacobi eigensolver did not converge after {} sweeps (off-diagonal norm {:e}, tolerance {:e})",
            opts.max_sweeps,
            off_norm(&a).to_f64(),
            tol.to_f64()
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).expect("NaN eigenvalue"));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = Matrix::zeros(n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, new_col)] = v[(r, old_col)];
        }
    }
    Ok((values, vectors))
}

#[derive(Clone, Debug)]
pub struct EigenPair<T> {
    pub value: T,
    /// Normalized so that `v^T S v = 1`.
    pub vector: Vec<T>,
}

/// Eigenpairs of `H v = E S v` for symmetric `H` and positive-definite `S`,
/// via `S = L L^T` and the standard problem `L^-1 H L^-T y = E y`.
pub fn generalized_symmetric_eigen<T: Real>(
    h: &Matrix<T>,
    s: &Matrix<T>,
    opts: JacobiOptions,
) -> Result<Vec<EigenPair<T>>> {
    let l = cholesky(s)?;
    let n = h.dim();
    // C = L^-1 H L^-T, formed as L^-1 (L^-1 H)^T using the symmetry of H.
    let x = forward_substitute(&l, h);
    let c = forward_substitute(&l, &x.transpose());
    let mut c_sym = Matrix::zeros(n);
    for i in 0..n {
        c_sym[(i, i)] = c[(i, i)];
        for j in (i + 1)..n {
            let avg = (c[(i, j)] + c[(j, i)]) / T::from_f64(2.0);
            c_sym[(i, j)] = avg;
            c_sym[(j, i)] = avg;
        }
    }
    let (values, y) = jacobi_eigen(&c_sym, opts)?;
    Ok(values
        .into_iter()
        .enumerate()
        .map(|(k, value)| EigenPair {
            value,
            vector: back_substitute_transposed(&l, &y.column(k)),
        })
        .collect())
}

/// Eigenvalues and first eigenvector components of the symmetric tridiagonal
/// matrix with diagonal `diag` and off-diagonal `off` (length `n-1`), by the
/// implicit QL algorithm with Wilkinson shifts. Eigenvalues ascending.
pub fn tridiagonal_ql<T: Real>(diag: &[T], off: &[T], max_iter: usize) -> Result<(Vec<T>, Vec<T>)> {
    let n = diag.len();
    assert!(off.len() + 1 == n || n == 0);
    let mut d = diag.to_vec();
    let mut e: Vec<T> = off.to_vec();
    e.push(T::zero());
    // First row of the accumulated eigenvector matrix.
    let mut z = vec![T::zero(); n];
    if n > 0 {
        z[0] = T::one();
    }
    let eps = T::epsilon();
    let two = T::from_f64(2.0);

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if iter == max_iter {
                return Err(Error::Numeric(format!(
                    "tridiagonal QL iteration did not converge for eigenvalue {l} after {max_iter} iterations"
                )));
            }
            iter += 1;
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = (g * g + T::one()).sqrt();
            g = d[m] - d[l] + e[l] / (g + r.abs() * g.signum());
            let mut s = T::one();
            let mut c = T::one();
            let mut p = T::zero();
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = (f * f + g * g).sqrt();
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zi1 = z[i + 1];
                z[i + 1] = s * z[i] + c * zi1;
                z[i] = c * z[i] - s * zi1;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).expect("NaN eigenvalue"));
    Ok((
        order.iter().map(|&i| d[i]).collect(),
        order.iter().map(|&i| z[i]).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::DoubleDouble;

    #[test]
    fn two_by_two_textbook() {
        let h = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
        let s = Matrix::identity(2);
        let pairs = generalized_symmetric_eigen(&h, &s, JacobiOptions::for_precision::<f64>(2)).unwrap();
        assert_eq!(pairs.len(), 2);
        assert!((pairs[0].value - 1.0).abs() < 1e-14);
        assert!((pairs[1].value - 3.0).abs() < 1e-14);
    }

    fn test_pair() -> (Matrix<f64>, Matrix<f64>) {
        let n = 7;
        let mut h = Matrix::zeros(n);
        let mut s = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let (fi, fj) = (i as f64, j as f64);
                h[(i, j)] = 1.0 / (1.0 + fi + fj) + if i == j { fi } else { 0.0 };
                s[(i, j)] = 0.5f64.powi((i as i32 - j as i32).abs()) + if i == j { 1.0 } else { 0.0 };
            }
        }
        (h, s)
    }

    #[test]
    fn generalized_residuals_are_small() {
        let (h, s) = test_pair();
        let pairs = generalized_symmetric_eigen(&h, &s, JacobiOptions::for_precision::<f64>(7)).unwrap();
        for w in pairs.windows(2) {
            assert!(w[0].value <= w[1].value);
        }
        for p in &pairs {
            let hv = h.mul_vec(&p.vector);
            let sv = s.mul_vec(&p.vector);
            let res: f64 = hv.iter().zip(&sv).map(|(a, b)| (a - p.value * b).powi(2)).sum::<f64>().sqrt();
            let scale: f64 = hv.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!(res < 1e-10 * scale.max(1e-300), "residual {res}");
            assert!((s.bilinear(&p.vector, &p.vector) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn double_double_agrees_with_f64() {
        let (h, s) = test_pair();
        let hd = h.map(DoubleDouble::from_f64);
        let sd = s.map(DoubleDouble::from_f64);
        let a = generalized_symmetric_eigen(&h, &s, JacobiOptions::for_precision::<f64>(7)).unwrap();
        let b = generalized_symmetric_eigen(&hd, &sd, JacobiOptions::for_precision::<DoubleDouble>(7)).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x.value - y.value.to_f64()).abs() < 1e-13);
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]);
        assert!(matches!(cholesky(&a), Err(Error::Numeric(_))));
    }

    #[test]
    fn ql_matches_jacobi_on_tridiagonal() {
        let diag = vec![1.0, 3.0, 5.0, 7.0, 9.0];
        let off: Vec<f64> = vec![1.0, 2.0_f64.sqrt(), 3.0_f64.sqrt(), 2.0];
        let (vals, first) = tridiagonal_ql(&diag, &off, 60).unwrap();
        let mut m = Matrix::zeros(5);
        for i in 0..5 {
            m[(i, i)] = diag[i];
            if i < 4 {
                m[(i, i + 1)] = off[i];
                m[(i + 1, i)] = off[i];
            }
        }
        let (jv, vecs) = jacobi_eigen(&m, JacobiOptions::for_precision::<f64>(5)).unwrap();
        for k in 0..5 {
            assert!((vals[k] - jv[k]).abs() < 1e-12);
            assert!((first[k].abs() - vecs[(0, k)].abs()).abs() < 1e-12);
        }
        let total: f64 = first.iter().map(|x| x * x).sum();
        assert!((total - 1.0).abs() < 1e-14);
    }
}
