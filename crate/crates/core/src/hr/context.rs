use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{dim_bidegree, singular_values};
use crate::algebra::{operator_matrix, wedge, wedge_all, ComplexMatrix, Form, LuDecomposition};
use crate::error::{Error, Result};
use crate::kahler::is_strictly_positive;

/// Which unit factor multiplies `∗(α∧β̄∧Ω)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SignConvention {
    /// `i^{p−q} (−1)^{(p+q)(p+q−1)/2}`, the classical Hodge–Riemann factor.
    #[default]
    Classical,
    /// `i^{p−q} (−1)^{(n−p−q)(n−p−q−1)/2}`.
    Alternate,
}

impl std::str::FromStr for SignConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(Self::Classical),
            "alternate" => Ok(Self::Alternate),
            other => Err(Error::InvalidConfig(format!(
                "unknown sign convention {other:?} (expected classical|alternate)"
            ))),
        }
    }
}

fn i_power(k: i64) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// The unit ε(n,p,q) in front of the mixed Hodge–Riemann form.
pub fn sign_factor(n: usize, p: usize, q: usize, convention: SignConvention) -> Complex64 {
    let k = match convention {
        SignConvention::Classical => p + q,
        SignConvention::Alternate => n - p - q,
    };
    let parity = if (k * k.saturating_sub(1) / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    };
    i_power(p as i64 - q as i64) * parity
}

/// Data of the mixed Hodge–Riemann form at bidegree (p,q):
/// `Ω = ω₁∧…∧ω_{n−p−q}` and the last form `ω = ω_{n−p−q+1}`.
///
/// Contexts built by [`make_context`] keep the Kähler tuple; contexts built
/// by [`HRContext::from_class`] carry an arbitrary Ω with no positivity
/// certificate.
#[derive(Debug, Clone)]
pub struct HRContext {
    n: usize,
    p: usize,
    q: usize,
    factors: Option<Vec<Form>>,
    last: Form,
    omega_cap: Form,
    convention: SignConvention,
    sign: Complex64,
}

/// Validates the tuple and caches Ω and ε.
pub fn make_context(
    n: usize,
    p: usize,
    q: usize,
    kahler_tuple: &[Form],
    convention: SignConvention,
) -> Result<HRContext> {
    if p + q > n {
        return Err(Error::BidegreeOutOfRange { n, p, q });
    }
    let expected = n - p - q + 1;
    if kahler_tuple.len() != expected {
        return Err(Error::TupleLength {
            expected,
            found: kahler_tuple.len(),
        });
    }
    for (index, w) in kahler_tuple.iter().enumerate() {
        if w.n() != n {
            return Err(Error::AmbientMismatch {
                left: n,
                right: w.n(),
            });
        }
        let report = is_strictly_positive(w)?;
        if !report.strict {
            return Err(Error::NotStrictlyPositive {
                index,
                min_eigenvalue: report.min_eigenvalue,
            });
        }
    }
    let (factors, last) = kahler_tuple.split_at(expected - 1);
    let omega_cap = wedge_all(n, factors)?;
    Ok(HRContext {
        n,
        p,
        q,
        factors: Some(factors.to_vec()),
        last: last[0].clone(),
        omega_cap,
        convention,
        sign: sign_factor(n, p, q, convention),
    })
}

/// Matrix of α ↦ α∧Ω together with its conditioning.
#[derive(Debug, Clone)]
pub struct LefschetzReport {
    pub matrix: ComplexMatrix,
    pub determinant: Complex64,
    /// Smallest over largest LU pivot.
    pub pivot_ratio: f64,
    /// σ_max / σ_min.
    pub condition: f64,
}

impl LefschetzReport {
    pub fn is_square(&self) -> bool {
        self.matrix.is_square()
    }
}

impl HRContext {
    /// Context for an arbitrary class Ω of bidegree (n−p−q, n−p−q).
    pub fn from_class(
        n: usize,
        p: usize,
        q: usize,
        omega_cap: Form,
        last: Form,
        convention: SignConvention,
    ) -> Result<Self> {
        if p + q > n {
            return Err(Error::BidegreeOutOfRange { n, p, q });
        }
        let k = n - p - q;
        if omega_cap.n() != n || last.n() != n {
            return Err(Error::AmbientMismatch {
                left: n,
                right: if omega_cap.n() != n {
                    omega_cap.n()
                } else {
                    last.n()
                },
            });
        }
        omega_cap.require_bidegree(k, k)?;
        last.require_bidegree(1, 1)?;
        Ok(Self {
            n,
            p,
            q,
            factors: None,
            last,
            omega_cap,
            convention,
            sign: sign_factor(n, p, q, convention),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    /// The full tuple `ω₁..ω_{n−p−q+1}` when the context was built from one.
    pub fn kahler_tuple(&self) -> Option<Vec<Form>> {
        self.factors.as_ref().map(|f| {
            let mut t = f.clone();
            t.push(self.last.clone());
            t
        })
    }

    pub fn omega_cap(&self) -> &Form {
        &self.omega_cap
    }

    /// ω_{n−p−q+1}.
    pub fn last(&self) -> &Form {
        &self.last
    }

    pub fn convention(&self) -> SignConvention {
        self.convention
    }

    pub fn sign_factor(&self) -> Complex64 {
        self.sign
    }

    pub fn dim(&self) -> usize {
        dim_bidegree(self.n, self.p, self.q)
    }

    pub(crate) fn check_form(&self, a: &Form) -> Result<()> {
        if a.n() != self.n {
            return Err(Error::AmbientMismatch {
                left: self.n,
                right: a.n(),
            });
        }
        a.require_bidegree(self.p, self.q)
    }

    /// Q(a,b) = ε · ∗(a ∧ b̄ ∧ Ω).
    pub fn q_form(&self, a: &Form, b: &Form) -> Result<Complex64> {
        self.check_form(a)?;
        self.check_form(b)?;
        let top = wedge(&wedge(a, &self.omega_cap)?, &b.conjugate())?;
        Ok(self.sign * top.top_coefficient()?)
    }

    /// Matrix of Q on the canonical basis: entry (i,j) is Q(e_i, e_j).
    pub fn q_matrix(&self) -> Result<ComplexMatrix> {
        let dim = self.dim();
        let lifted: Vec<Form> = (0..dim)
            .map(|i| {
                wedge(
                    &Form::basis_element(self.n, self.p, self.q, i)?,
                    &self.omega_cap,
                )
            })
            .collect::<Result<_>>()?;
        let conj: Vec<Form> = (0..dim)
            .map(|j| Form::basis_element(self.n, self.p, self.q, j).map(|e| e.conjugate()))
            .collect::<Result<_>>()?;
        let mut m = ComplexMatrix::zeros(dim, dim);
        for (i, li) in lifted.iter().enumerate() {
            for (j, cj) in conj.iter().enumerate() {
                m[(i, j)] = self.sign * wedge(li, cj)?.top_coefficient()?;
            }
        }
        Ok(m)
    }

    /// α ↦ α∧Ω, Λ^{p,q} → Λ^{n−q,n−p}.
    pub fn lefschetz_map(&self) -> Result<LefschetzReport> {
        let k = self.n - self.p - self.q;
        let matrix = operator_matrix(
            |a| wedge(a, &self.omega_cap),
            self.n,
            (self.p, self.q),
            (self.p + k, self.q + k),
        )?;
        let lu = LuDecomposition::factor(&matrix)?;
        let sigma = singular_values(&matrix)?;
        let condition = match (sigma.first(), sigma.last()) {
            (Some(&max), Some(&min)) if min > 0.0 => max / min,
            (Some(_), Some(_)) => f64::INFINITY,
            _ => 1.0,
        };
        Ok(LefschetzReport {
            determinant: lu.determinant(),
            pivot_ratio: lu.pivot_ratio(),
            condition,
            matrix,
        })
    }

    /// The (p−1,q−1) context with Ω∧ω² and the same last form.
    pub(crate) fn descend(&self) -> Result<Self> {
        if self.p == 0 || self.q == 0 {
            return Err(Error::BidegreeOutOfRange {
                n: self.n,
                p: self.p.saturating_sub(1),
                q: self.q.saturating_sub(1),
            });
        }
        let omega_cap = wedge(&wedge(&self.omega_cap, &self.last)?, &self.last)?;
        let factors = self.factors.as_ref().map(|f| {
            let mut f = f.clone();
            f.push(self.last.clone());
            f.push(self.last.clone());
            f
        });
        Ok(Self {
            n: self.n,
            p: self.p - 1,
            q: self.q - 1,
            factors,
            last: self.last.clone(),
            omega_cap,
            convention: self.convention,
            sign: sign_factor(self.n, self.p - 1, self.q - 1, self.convention),
        })
    }

    /// Same Ω and ω at the conjugate bidegree (q,p).
    pub(crate) fn conjugate_bidegree(&self) -> Self {
        Self {
            p: self.q,
            q: self.p,
            sign: sign_factor(self.n, self.q, self.p, self.convention),
            ..self.clone()
        }
    }

    /// Copy with every tuple entry multiplied by `t > 0`.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        match &self.factors {
            Some(_) => {
                let tuple: Vec<Form> = self
                    .kahler_tuple()
                    .unwrap_or_default()
                    .iter()
                    .map(|w| w.scale_real(t))
                    .collect();
                make_context(self.n, self.p, self.q, &tuple, self.convention)
            }
            None => {
                let k = self.n - self.p - self.q;
                Self::from_class(
                    self.n,
                    self.p,
                    self.q,
                    self.omega_cap.scale_real(t.powi(k as i32)),
                    self.last.scale_real(t),
                    self.convention,
                )
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kahler::{form_from_hermitian, random_kahler, HermitianMatrix};

    fn beta(n: usize) -> Form {
        form_from_hermitian(&HermitianMatrix::identity(n)).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn classical_sign_examples() {
        let ctx = make_context(2, 1, 1, &[beta(2)], SignConvention::Classical).unwrap();
        assert_eq!(ctx.sign_factor(), c(-1.0, 0.0));
        assert_eq!(ctx.omega_cap(), &Form::one(2).unwrap());

        let ctx = make_context(
            2,
            0,
            0,
            &[beta(2), beta(2), beta(2)],
            SignConvention::Classical,
        )
        .unwrap();
        assert_eq!(ctx.sign_factor(), c(1.0, 0.0));
        assert_eq!(ctx.omega_cap(), &wedge(&beta(2), &beta(2)).unwrap());

        let tuple: Vec<Form> = (0..3)
            .map(|s| random_kahler(3, s).form().unwrap())
            .collect();
        let ctx = make_context(3, 1, 0, &tuple, SignConvention::Classical).unwrap();
        assert_eq!(ctx.sign_factor(), c(0.0, 1.0));
    }

    #[test]
    fn alternate_sign_examples() {
        assert_eq!(sign_factor(2, 0, 0, SignConvention::Alternate), c(-1.0, 0.0));
        assert_eq!(sign_factor(2, 1, 1, SignConvention::Alternate), c(1.0, 0.0));
        for n in 1..6 {
            for p in 0..=n {
                for q in 0..=n - p {
                    for conv in [SignConvention::Classical, SignConvention::Alternate] {
                        assert!((sign_factor(n, p, q, conv).norm() - 1.0).abs() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn context_validation() {
        assert!(matches!(
            make_context(2, 1, 1, &[beta(2), beta(2)], SignConvention::Classical),
            Err(Error::TupleLength {
                expected: 1,
                found: 2
            })
        ));
        let degenerate = form_from_hermitian(&HermitianMatrix::diagonal(&[1.0, 0.0])).unwrap();
        assert!(matches!(
            make_context(2, 1, 1, &[degenerate], SignConvention::Classical),
            Err(Error::NotStrictlyPositive { index: 0, .. })
        ));
        assert!(matches!(
            make_context(2, 2, 1, &[], SignConvention::Classical),
            Err(Error::BidegreeOutOfRange { .. })
        ));
    }

    #[test]
    fn q_values_on_c2() {
        let ctx = make_context(2, 1, 1, &[beta(2)], SignConvention::Classical).unwrap();
        let a = Form::monomial(2, &[1], &[2], c(1.0, 0.0)).unwrap();
        assert!((ctx.q_form(&a, &a).unwrap() - c(4.0, 0.0)).norm() < 1e-12);
        let zero = Form::zero(2, 1, 1).unwrap();
        assert_eq!(ctx.q_form(&zero, &a).unwrap(), c(0.0, 0.0));

        let ctx = make_context(
            2,
            0,
            0,
            &[beta(2), beta(2), beta(2)],
            SignConvention::Classical,
        )
        .unwrap();
        let one = Form::one(2).unwrap();
        assert!((ctx.q_form(&one, &one).unwrap() - c(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn q_matrix_matches_pointwise() {
        let tuple: Vec<Form> = (0..2)
            .map(|s| random_kahler(3, s).form().unwrap())
            .collect();
        let ctx = make_context(3, 1, 1, &tuple, SignConvention::Classical).unwrap();
        let m = ctx.q_matrix().unwrap();
        for i in 0..ctx.dim() {
            for j in 0..ctx.dim() {
                let ei = Form::basis_element(3, 1, 1, i).unwrap();
                let ej = Form::basis_element(3, 1, 1, j).unwrap();
                assert!((m[(i, j)] - ctx.q_form(&ei, &ej).unwrap()).norm() < 1e-12);
            }
        }
        assert!(m.hermitian_residual() < 1e-12);
    }

    #[test]
    fn lefschetz_examples() {
        let ctx = make_context(2, 1, 1, &[beta(2)], SignConvention::Classical).unwrap();
        let l = ctx.lefschetz_map().unwrap();
        assert_eq!(l.matrix, ComplexMatrix::identity(4));
        assert_eq!(l.determinant, c(1.0, 0.0));

        let ctx = make_context(2, 1, 0, &[beta(2), beta(2)], SignConvention::Classical).unwrap();
        let l = ctx.lefschetz_map().unwrap();
        assert!(l.is_square() && l.matrix.rows() == 2);
        // dz1 ↦ (i/2) dz1∧dz2∧dz̄2
        let image = wedge(&Form::monomial(2, &[1], &[], c(1., 0.)).unwrap(), &beta(2)).unwrap();
        let expected = Form::monomial(2, &[1, 2], &[2], c(0.0, 0.5)).unwrap();
        assert_eq!(image, expected);
        assert!(l.determinant.norm() > 0.1);
    }
}
