//! Real (1,1)-forms `ω = (i/2) Σ h_{jk} dz_j∧dz̄_k` and their positivity.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{hermitian_eigenvalues, ComplexMatrix, Form};
use crate::error::{Error, Result};
use crate::rng;
use crate::tolerances::{IDENTITY, STRICT_POSITIVITY};

const HALF_I: Complex64 = Complex64::new(0.0, 0.5);

/// n×n Hermitian matrix stored as its packed lower triangle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HermitianMatrix {
    n: usize,
    lower: Vec<Complex64>,
}

fn packed(j: usize, k: usize) -> usize {
    j * (j + 1) / 2 + k
}

impl HermitianMatrix {
    /// Builds from the lower-triangle entries `f(j, k)`, `k ≤ j`; the
    /// imaginary part of diagonal entries is dropped.
    pub fn from_lower(n: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut lower = Vec::with_capacity(n * (n + 1) / 2);
        for j in 0..n {
            for k in 0..=j {
                let v = f(j, k);
                lower.push(if j == k { Complex64::new(v.re, 0.0) } else { v });
            }
        }
        Self { n, lower }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_lower(n, |j, k| {
            Complex64::new(if j == k { 1.0 } else { 0.0 }, 0.0)
        })
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_lower(n, |_, _| Complex64::new(0.0, 0.0))
    }

    pub fn diagonal(values: &[f64]) -> Self {
        Self::from_lower(values.len(), |j, k| {
            Complex64::new(if j == k { values[j] } else { 0.0 }, 0.0)
        })
    }

    /// Accepts a dense matrix that is Hermitian to `IDENTITY` relative.
    pub fn from_dense(m: &ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::ShapeMismatch {
                expected_rows: m.rows(),
                expected_cols: m.rows(),
                found_rows: m.rows(),
                found_cols: m.cols(),
            });
        }
        let residual = m.hermitian_residual();
        if residual > IDENTITY {
            return Err(Error::NotHermitian { residual });
        }
        Ok(Self::from_lower(m.rows(), |j, k| {
            (m[(j, k)] + m[(k, j)].conj()) * 0.5
        }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        if k <= j {
            self.lower[packed(j, k)]
        } else {
            self.lower[packed(k, j)].conj()
        }
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.n, self.n, |j, k| self.get(j, k))
    }

    pub fn scale(&self, t: f64) -> Self {
        Self {
            n: self.n,
            lower: self.lower.iter().map(|x| x * t).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::AmbientMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(Self {
            n: self.n,
            lower: self
                .lower
                .iter()
                .zip(&other.lower)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn determinant(&self) -> Result<f64> {
        Ok(self.to_dense().determinant()?.re)
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(hermitian_eigenvalues(&self.to_dense())?.eigenvalues)
    }
}

/// ω = (i/2) Σ_{j,k} h_{jk} dz_j ∧ dz̄_k. The identity maps to the standard
/// Kähler form β with βⁿ = n!·vol.
pub fn form_from_hermitian(h: &HermitianMatrix) -> Result<Form> {
    let n = h.n();
    let mut coeffs = Vec::with_capacity(n * n);
    for j in 0..n {
        for k in 0..n {
            coeffs.push(HALF_I * h.get(j, k));
        }
    }
    Form::from_coeffs(n, 1, 1, coeffs)
}

/// Recovers `h` from a real (1,1)-form.
pub fn hermitian_from_form(form: &Form) -> Result<HermitianMatrix> {
    form.require_bidegree(1, 1)?;
    let n = form.n();
    let raw = ComplexMatrix::from_fn(n, n, |j, k| form.coeffs()[j * n + k] / HALF_I);
    let scale = raw.frobenius_norm();
    let residual = if scale == 0.0 {
        0.0
    } else {
        raw.sub(&raw.adjoint())?.frobenius_norm() / scale
    };
    if residual > IDENTITY {
        return Err(Error::NotReal { residual });
    }
    HermitianMatrix::from_dense(&raw)
}

/// Positivity verdict of a real (1,1)-form via the spectrum of `h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositivityReport {
    pub strict: bool,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
}

pub fn is_strictly_positive(form: &Form) -> Result<PositivityReport> {
    let h = hermitian_from_form(form)?;
    let eig = h.eigenvalues()?;
    let min_eigenvalue = eig.first().copied().unwrap_or(0.0);
    let max_eigenvalue = eig.last().copied().unwrap_or(0.0);
    Ok(PositivityReport {
        strict: min_eigenvalue > STRICT_POSITIVITY * max_eigenvalue.max(1.0),
        min_eigenvalue,
        max_eigenvalue,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Seeded { seed: u64 },
    Explicit,
}

/// A Hermitian coefficient matrix for a Kähler (or, when `strict` is false,
/// a semi-positive boundary) (1,1)-form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KahlerSpec {
    pub matrix: HermitianMatrix,
    pub provenance: Provenance,
    pub strict: bool,
}

impl KahlerSpec {
    pub fn explicit(matrix: HermitianMatrix) -> Result<Self> {
        let strict = is_strictly_positive(&form_from_hermitian(&matrix)?)?.strict;
        Ok(Self {
            matrix,
            provenance: Provenance::Explicit,
            strict,
        })
    }

    pub fn form(&self) -> Result<Form> {
        form_from_hermitian(&self.matrix)
    }
}

fn gram_plus_shift<R: Rng>(rng: &mut R, n: usize, rank: usize, shift: f64) -> HermitianMatrix {
    let a: Vec<Vec<Complex64>> = (0..n)
        .map(|_| (0..rank).map(|_| rng::complex_in(rng, 0.0, 1.0)).collect())
        .collect();
    HermitianMatrix::from_lower(n, |j, k| {
        let dot: Complex64 = (0..rank).map(|r| a[j][r] * a[k][r].conj()).sum();
        dot + if j == k { shift } else { 0.0 }
    })
}

/// `h = AA† + 0.1·I`, entries of `A` uniform on the complex unit square.
pub fn random_kahler(n: usize, seed: u64) -> KahlerSpec {
    let mut rng = rng::seeded(seed);
    KahlerSpec {
        matrix: gram_plus_shift(&mut rng, n, n, 0.1),
        provenance: Provenance::Seeded { seed },
        strict: true,
    }
}

/// Semi-positive `h = AA†` with `A` of size n×rank; tagged non-strict when
/// `rank < n`.
pub fn random_semipositive(n: usize, rank: usize, seed: u64) -> KahlerSpec {
    let mut rng = rng::seeded(seed);
    KahlerSpec {
        matrix: gram_plus_shift(&mut rng, n, rank.min(n), 0.0),
        provenance: Provenance::Seeded { seed },
        strict: rank >= n,
    }
}
