//! Dense complex kernels: cyclic Jacobi for Hermitian spectra, one-sided
//! Jacobi for singular values and kernels, LU with partial pivoting.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerances::{EIGEN_RESIDUAL, HERMITIAN_INPUT, PIVOT_RATIO, RANK_RATIO};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::ShapeMismatch {
                    expected_rows: rows.len(),
                    expected_cols: cols,
                    found_rows: r,
                    found_cols: row.len(),
                });
            }
            m.data[r * cols..(r + 1) * cols].copy_from_slice(row);
        }
        Ok(m)
    }

    /// Builds a `len × k` matrix from `k` column vectors of length `len`.
    pub fn from_columns(len: usize, columns: &[Vec<Complex64>]) -> Result<Self> {
        let mut m = Self::zeros(len, columns.len());
        for (c, col) in columns.iter().enumerate() {
            if col.len() != len {
                return Err(Error::ShapeMismatch {
                    expected_rows: len,
                    expected_cols: columns.len(),
                    found_rows: col.len(),
                    found_cols: c,
                });
            }
            for (r, v) in col.iter().enumerate() {
                m[(r, c)] = *v;
            }
        }
        Ok(m)
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(*v, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        Self {
            data: self.data.iter().map(Complex64::conj).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            data: self.data.iter().map(|x| x * s).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
            ..self.clone()
        })
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch {
                expected_rows: self.rows,
                expected_cols: self.cols,
                found_rows: other.rows,
                found_cols: other.cols,
            });
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                expected_rows: self.cols,
                expected_cols: other.cols,
                found_rows: other.rows,
                found_cols: other.cols,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch {
                expected_rows: self.cols,
                expected_cols: 1,
                found_rows: v.len(),
                found_cols: 1,
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.data[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ‖m − m†‖_F / ‖m‖_F (0 for the zero matrix).
    pub fn hermitian_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let norm = self.frobenius_norm();
        if norm == 0.0 {
            return 0.0;
        }
        let mut acc = 0.0;
        for r in 0..self.rows {
            for c in 0..self.cols {
                acc += (self[(r, c)] - self[(c, r)].conj()).norm_sqr();
            }
        }
        acc.sqrt() / norm
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut acc = 0.0;
        for r in 0..self.rows {
            for c in 0..self.cols {
                if r != c {
                    acc += self[(r, c)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }

    pub fn determinant(&self) -> Result<Complex64> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch {
                expected_rows: self.rows,
                expected_cols: self.rows,
                found_rows: self.rows,
                found_cols: self.cols,
            });
        }
        Ok(LuDecomposition::factor(self)?.determinant())
    }
}

/// Eigenvalues of a Hermitian matrix with convergence diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Frobenius norm of the off-diagonal part at termination.
    pub residual: f64,
    pub sweeps: usize,
}

impl SpectrumReport {
    pub fn min(&self) -> Option<f64> {
        self.eigenvalues.first().copied()
    }

    pub fn max(&self) -> Option<f64> {
        self.eigenvalues.last().copied()
    }

    pub fn max_abs(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// Unitary 2×2 rotation diagonalizing `[[a, g], [ḡ, b]]`, as
/// `(c, s·e^{iφ})`; the full block is `[[c, s e^{iφ}], [−s e^{−iφ}, c]]`.
fn jacobi_rotation(a: f64, b: f64, g: Complex64) -> (f64, Complex64) {
    let abs_g = g.norm();
    let phase = g / abs_g;
    let theta = (b - a) / (2.0 * abs_g);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    (c, phase * (t * c))
}

/// Applies the rotation to columns `p, q` of `m`: `[m_p, m_q] ← [m_p, m_q]·U`.
fn rotate_columns(m: &mut ComplexMatrix, p: usize, q: usize, c: f64, se: Complex64) {
    for r in 0..m.rows {
        let mp = m[(r, p)];
        let mq = m[(r, q)];
        m[(r, p)] = mp * c - mq * se.conj();
        m[(r, q)] = mp * se + mq * c;
    }
}

/// Applies `U†` to rows `p, q` of `m`.
fn rotate_rows(m: &mut ComplexMatrix, p: usize, q: usize, c: f64, se: Complex64) {
    for col in 0..m.cols {
        let mp = m[(p, col)];
        let mq = m[(q, col)];
        m[(p, col)] = mp * c - mq * se;
        m[(q, col)] = mp * se.conj() + mq * c;
    }
}

/// Cyclic Jacobi eigen-decomposition of a Hermitian matrix. Returns the
/// spectrum (ascending) and the matching eigenvectors as columns.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<(SpectrumReport, ComplexMatrix)> {
    let residual = m.hermitian_residual();
    if residual > HERMITIAN_INPUT {
        return Err(Error::NotHermitian { residual });
    }
    let n = m.rows;
    // symmetrize
    let mut a = ComplexMatrix::from_fn(n, n, |r, c| (m[(r, c)] + m[(c, r)].conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);
    let target = EIGEN_RESIDUAL * a.frobenius_norm();
    let mut sweeps = 0;
    while a.off_diagonal_norm() > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let g = a[(p, q)];
                if g.norm() == 0.0 {
                    continue;
                }
                let (c, se) = jacobi_rotation(a[(p, p)].re, a[(q, q)].re, g);
                rotate_columns(&mut a, p, q, c, se);
                rotate_rows(&mut a, p, q, c, se);
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
                rotate_columns(&mut v, p, q, c, se);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok((
        SpectrumReport {
            eigenvalues,
            residual: a.off_diagonal_norm(),
            sweeps,
        },
        vectors,
    ))
}

pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<SpectrumReport> {
    hermitian_eigen(m).map(|(s, _)| s)
}

/// One-sided (Hestenes) Jacobi SVD. Returns singular values aligned with the
/// columns of the accumulated right-singular matrix `V` (not sorted).
fn one_sided_jacobi(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = m.cols;
    let mut w = m.clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frobenius_norm();
    if scale == 0.0 {
        return Ok((vec![0.0; n], v));
    }
    let tiny = (f64::EPSILON * scale).powi(2);
    for sweep in 0..=MAX_SWEEPS {
        if sweep == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps: sweep });
        }
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, ZERO);
                for r in 0..w.rows {
                    let wp = w[(r, p)];
                    let wq = w[(r, q)];
                    alpha += wp.norm_sqr();
                    beta += wq.norm_sqr();
                    gamma += wp.conj() * wq;
                }
                if alpha <= tiny || beta <= tiny {
                    continue;
                }
                if gamma.norm() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let (c, se) = jacobi_rotation(alpha, beta, gamma);
                rotate_columns(&mut w, p, q, c, se);
                rotate_columns(&mut v, p, q, c, se);
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma = (0..n)
        .map(|c| {
            (0..w.rows)
                .map(|r| w[(r, c)].norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    Ok((sigma, v))
}

/// Singular values, descending.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let (mut sigma, _) = one_sided_jacobi(m)?;
    sigma.sort_by(|a, b| b.total_cmp(a));
    if m.rows < m.cols {
        sigma.truncate(m.rows);
    }
    Ok(sigma)
}

/// Number of singular values above `RANK_RATIO · σ_max`.
pub fn numerical_rank(m: &ComplexMatrix) -> Result<usize> {
    let sigma = singular_values(m)?;
    let max = sigma.first().copied().unwrap_or(0.0);
    Ok(sigma
        .iter()
        .filter(|&&s| max > 0.0 && s > RANK_RATIO * max)
        .count())
}

/// Orthonormal basis of the numerical kernel (right singular vectors whose
/// singular value is below `RANK_RATIO · σ_max`).
pub fn kernel_basis(m: &ComplexMatrix) -> Result<Vec<Vec<Complex64>>> {
    let (sigma, v) = one_sided_jacobi(m)?;
    let max = sigma.iter().fold(0.0f64, |a, &b| a.max(b));
    let mut idx: Vec<usize> = (0..sigma.len())
        .filter(|&i| max == 0.0 || sigma[i] <= RANK_RATIO * max)
        .collect();
    idx.sort_by(|&a, &b| sigma[a].total_cmp(&sigma[b]).then(a.cmp(&b)));
    Ok(idx.into_iter().map(|i| v.column(i)).collect())
}

/// LU factorization with partial pivoting, `P·m = L·U`.
#[derive(Debug, Clone)]
pub struct LuDecomposition {
    lu: ComplexMatrix,
    perm: Vec<usize>,
    sign: f64,
    min_pivot: f64,
    max_pivot: f64,
}

impl LuDecomposition {
    pub fn factor(m: &ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::ShapeMismatch {
                expected_rows: m.rows,
                expected_cols: m.rows,
                found_rows: m.rows,
                found_cols: m.cols,
            });
        }
        let n = m.rows;
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut min_pivot = f64::INFINITY;
        let mut max_pivot = 0.0f64;
        for k in 0..n {
            let (piv, mag) = (k..n)
                .map(|r| (r, lu[(r, k)].norm()))
                .fold(
                    (k, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
            if piv != k {
                for c in 0..n {
                    let tmp = lu[(k, c)];
                    lu[(k, c)] = lu[(piv, c)];
                    lu[(piv, c)] = tmp;
                }
                perm.swap(k, piv);
                sign = -sign;
            }
            min_pivot = min_pivot.min(mag);
            max_pivot = max_pivot.max(mag);
            if mag == 0.0 {
                continue;
            }
            let d = lu[(k, k)];
            for r in k + 1..n {
                let f = lu[(r, k)] / d;
                lu[(r, k)] = f;
                if f == ZERO {
                    continue;
                }
                for c in k + 1..n {
                    let u = lu[(k, c)];
                    lu[(r, c)] -= f * u;
                }
            }
        }
        if n == 0 {
            min_pivot = 1.0;
            max_pivot = 1.0;
        }
        Ok(Self {
            lu,
            perm,
            sign,
            min_pivot,
            max_pivot,
        })
    }

    /// Smallest over largest pivot magnitude.
    pub fn pivot_ratio(&self) -> f64 {
        if self.max_pivot == 0.0 {
            0.0
        } else {
            self.min_pivot / self.max_pivot
        }
    }

    pub fn is_singular(&self) -> bool {
        self.pivot_ratio() < PIVOT_RATIO
    }

    pub fn determinant(&self) -> Complex64 {
        (0..self.lu.rows).fold(Complex64::new(self.sign, 0.0), |d, i| d * self.lu[(i, i)])
    }

    pub fn solve(&self, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.lu.rows;
        if rhs.len() != n {
            return Err(Error::ShapeMismatch {
                expected_rows: n,
                expected_cols: 1,
                found_rows: rhs.len(),
                found_cols: 1,
            });
        }
        if self.is_singular() {
            return Err(Error::Singular {
                ratio: self.pivot_ratio(),
            });
        }
        let mut x: Vec<Complex64> = self.perm.iter().map(|&i| rhs[i]).collect();
        for i in 0..n {
            for k in 0..i {
                let l = self.lu[(i, k)];
                x[i] = x[i] - l * x[k];
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let u = self.lu[(i, k)];
                x[i] = x[i] - u * x[k];
            }
            x[i] /= self.lu[(i, i)];
        }
        Ok(x)
    }
}

pub fn solve_linear(m: &ComplexMatrix, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
    LuDecomposition::factor(m)?.solve(rhs)
}

pub(crate) fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}
