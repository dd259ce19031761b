use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::basis::{check_bidegree, dim_bidegree, subset_table, MultiIndexPair};
use super::linalg::ComplexMatrix;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A constant-coefficient (p,q)-form on ℂⁿ.
///
/// Coefficients are stored densely against the basis of
/// [`enumerate_basis`](super::enumerate_basis); the monomial with index sets
/// `(I, J)` is `dz_{i1}∧…∧dz_{ip}∧dz̄_{j1}∧…∧dz̄_{jq}` with the holomorphic
/// block first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Form {
    n: usize,
    p: usize,
    q: usize,
    coeffs: Vec<Complex64>,
}

/// Sign of merging two disjoint sorted index sets into sorted order.
fn merge_sign(a: u32, b: u32) -> i32 {
    let mut inversions = 0;
    let mut rest = b;
    while rest != 0 {
        let bit = rest.trailing_zeros();
        rest &= rest - 1;
        let above = if bit >= 31 { 0 } else { a >> (bit + 1) };
        inversions += above.count_ones();
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn parity_sign(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl Form {
    pub fn zero(n: usize, p: usize, q: usize) -> Result<Self> {
        check_bidegree(n, p, q)?;
        Ok(Self {
            n,
            p,
            q,
            coeffs: vec![ZERO; dim_bidegree(n, p, q)],
        })
    }

    /// The constant function 1 in Λ^{0,0}.
    pub fn one(n: usize) -> Result<Self> {
        let mut f = Self::zero(n, 0, 0)?;
        f.coeffs[0] = Complex64::new(1.0, 0.0);
        Ok(f)
    }

    pub fn from_coeffs(n: usize, p: usize, q: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        check_bidegree(n, p, q)?;
        let dim = dim_bidegree(n, p, q);
        if coeffs.len() != dim {
            return Err(Error::ShapeMismatch {
                expected_rows: dim,
                expected_cols: 1,
                found_rows: coeffs.len(),
                found_cols: 1,
            });
        }
        Ok(Self { n, p, q, coeffs })
    }

    /// `c · dz_I ∧ dz̄_J` with 1-based index lists; indices need not be
    /// sorted, the sign of sorting is applied. Repeated indices give zero.
    pub fn monomial(n: usize, holo: &[usize], anti: &[usize], c: Complex64) -> Result<Self> {
        let mut f = Self::zero(n, holo.len(), anti.len())?;
        if holo.iter().chain(anti).any(|&i| i == 0 || i > n) {
            return Err(Error::BidegreeOutOfRange {
                n,
                p: holo.len(),
                q: anti.len(),
            });
        }
        let (h_mask, h_sign) = sort_sign(holo);
        let (a_mask, a_sign) = sort_sign(anti);
        if h_sign == 0 || a_sign == 0 {
            return Ok(f);
        }
        let idx = f.index_of(h_mask, a_mask);
        f.coeffs[idx] = c * f64::from(h_sign * a_sign);
        Ok(f)
    }

    /// The basis element at canonical position `idx`.
    pub fn basis_element(n: usize, p: usize, q: usize, idx: usize) -> Result<Self> {
        let mut f = Self::zero(n, p, q)?;
        if idx >= f.coeffs.len() {
            return Err(Error::BidegreeOutOfRange { n, p, q });
        }
        f.coeffs[idx] = Complex64::new(1.0, 0.0);
        Ok(f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of the monomial with the given sorted 1-based index sets.
    pub fn coefficient(&self, pair: &MultiIndexPair) -> Complex64 {
        let (h, a) = pair.masks();
        self.coeffs[self.index_of(h, a)]
    }

    fn index_of(&self, holo: u32, anti: u32) -> usize {
        let t = subset_table(self.n);
        t.rank(holo) * t.subsets(self.q).len() + t.rank(anti)
    }

    fn masks_at(&self, idx: usize) -> (u32, u32) {
        let t = subset_table(self.n);
        let anti = t.subsets(self.q);
        (t.subsets(self.p)[idx / anti.len()], anti[idx % anti.len()])
    }

    pub(crate) fn require_bidegree(&self, p: usize, q: usize) -> Result<()> {
        if (self.p, self.q) != (p, q) {
            return Err(Error::BidegreeMismatch {
                expected_p: p,
                expected_q: q,
                found_p: self.p,
                found_q: self.q,
            });
        }
        Ok(())
    }

    fn require_same_shape(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::AmbientMismatch {
                left: self.n,
                right: other.n,
            });
        }
        other.require_bidegree(self.p, self.q)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            ..self.clone()
        }
    }

    pub fn scale_real(&self, t: f64) -> Self {
        self.scale(Complex64::new(t, 0.0))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.require_same_shape(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale_real(-1.0))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    /// Euclidean weight of a monomial of this bidegree: `dx_i, dy_i`
    /// orthonormal makes `|dz_I∧dz̄_J| = 2^{(|I|+|J|)/2}`.
    pub fn monomial_norm(p: usize, q: usize) -> f64 {
        2f64.powf((p + q) as f64 / 2.0)
    }

    /// Norm induced by the real coordinates `x_j, y_j` being orthonormal.
    pub fn euclidean_norm(&self) -> f64 {
        Self::monomial_norm(self.p, self.q) * self.coefficient_norm()
    }

    /// Plain 2-norm of the coefficient vector.
    pub fn coefficient_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Complex conjugation Λ^{p,q} → Λ^{q,p}.
    ///
    /// `conj(c dz_I∧dz̄_J) = c̄ dz̄_I∧dz_J = (−1)^{|I||J|} c̄ dz_J∧dz̄_I`.
    pub fn conjugate(&self) -> Self {
        let mut out = Self::zero(self.n, self.q, self.p).expect("valid bidegree");
        let sign = parity_sign(self.p * self.q);
        for (idx, c) in self.coeffs.iter().enumerate() {
            if *c == ZERO {
                continue;
            }
            let (h, a) = self.masks_at(idx);
            let target = out.index_of(a, h);
            out.coeffs[target] = c.conj() * sign;
        }
        out
    }

    /// For an (n,n)-form `a = c · vol` with `vol = dx₁∧dy₁∧…∧dxₙ∧dyₙ`,
    /// returns `c` (the Hodge star of a top form).
    pub fn top_coefficient(&self) -> Result<Complex64> {
        self.require_bidegree(self.n, self.n)?;
        // dz_{1..n}∧dz̄_{1..n} = (−1)^{n(n−1)/2} ∏ dz_j∧dz̄_j, and dz∧dz̄ = −2i dx∧dy.
        let n = self.n;
        let reorder = parity_sign(n * (n - 1) / 2);
        let minus_two_i = Complex64::new(0.0, -2.0).powu(n as u32);
        Ok(self.coeffs[0] * reorder * minus_two_i)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.require_same_shape(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub(crate) fn nonzero_terms(&self) -> impl Iterator<Item = (u32, u32, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != ZERO)
            .map(|(idx, c)| {
                let (h, a) = self.masks_at(idx);
                (h, a, *c)
            })
    }
}

/// Sorts a list of distinct 1-based indices, returning its mask and the
/// permutation sign (0 when an index repeats).
fn sort_sign(indices: &[usize]) -> (u32, i32) {
    let mut mask = 0u32;
    let mut sign = 1;
    for &i in indices {
        let bit = 1u32 << (i - 1);
        if mask & bit != 0 {
            return (0, 0);
        }
        if (mask >> i).count_ones() % 2 == 1 {
            sign = -sign;
        }
        mask |= bit;
    }
    (mask, sign)
}

/// Bidegree of a wedge product, clamped to `n` in each slot.
pub(crate) fn wedge_bidegree(n: usize, a: (usize, usize), b: (usize, usize)) -> (usize, usize) {
    ((a.0 + b.0).min(n), (a.1 + b.1).min(n))
}

/// Exterior product. Overflowing bidegrees give the zero form of the clamped
/// bidegree.
pub fn wedge(a: &Form, b: &Form) -> Result<Form> {
    if a.n != b.n {
        return Err(Error::AmbientMismatch {
            left: a.n,
            right: b.n,
        });
    }
    let n = a.n;
    let (p, q) = wedge_bidegree(n, a.bidegree(), b.bidegree());
    let mut out = Form::zero(n, p, q)?;
    if a.p + b.p > n || a.q + b.q > n {
        return Ok(out);
    }
    let cross = parity_sign(a.q * b.p);
    let rhs: Vec<_> = b.nonzero_terms().collect();
    for (ih, ia, ca) in a.nonzero_terms() {
        for &(kh, ka, cb) in &rhs {
            if ih & kh != 0 || ia & ka != 0 {
                continue;
            }
            let sign = cross * f64::from(merge_sign(ih, kh) * merge_sign(ia, ka));
            let idx = out.index_of(ih | kh, ia | ka);
            out.coeffs[idx] += ca * cb * sign;
        }
    }
    Ok(out)
}

/// Wedge of a list of forms; the empty product is the constant 1.
pub fn wedge_all(n: usize, forms: &[Form]) -> Result<Form> {
    forms
        .iter()
        .try_fold(Form::one(n)?, |acc, f| wedge(&acc, f))
}

/// Matrix of a linear map Λ^{p,q} → Λ^{p',q'} in the canonical bases.
pub fn operator_matrix<F>(
    map: F,
    n: usize,
    domain: (usize, usize),
    codomain: (usize, usize),
) -> Result<ComplexMatrix>
where
    F: Fn(&Form) -> Result<Form>,
{
    check_bidegree(n, domain.0, domain.1)?;
    check_bidegree(n, codomain.0, codomain.1)?;
    let cols = dim_bidegree(n, domain.0, domain.1);
    let rows = dim_bidegree(n, codomain.0, codomain.1);
    let mut m = ComplexMatrix::zeros(rows, cols);
    for j in 0..cols {
        let e = Form::basis_element(n, domain.0, domain.1, j)?;
        let image = map(&e)?;
        if image.n != n {
            return Err(Error::AmbientMismatch {
                left: n,
                right: image.n,
            });
        }
        image.require_bidegree(codomain.0, codomain.1)?;
        for (i, c) in image.coeffs.iter().enumerate() {
            m[(i, j)] = *c;
        }
    }
    Ok(m)
}
