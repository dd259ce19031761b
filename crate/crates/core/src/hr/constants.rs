use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::context::HRContext;
use super::primitive::{gram_of, primitive_basis};
use crate::algebra::{hermitian_eigenvalues, wedge, ComplexMatrix, Form};
use crate::error::{Error, Result};
use crate::rng::{random_form, seeded, trial_seed};
use crate::tolerances::INEQUALITY_SLACK;

/// Constants of the coercivity estimate
/// `c_wedge·‖α∧Ω∧ω‖² + c_q·Re Q(α,α) ≥ ‖α‖²`.
///
/// `c` bounds T: γ ↦ γ∧Ω∧ω², its inverse, and the form γ ↦ Q(ω∧γ, ω∧γ);
/// `c_prime` is the squared norm of (β, γ) ↦ β + ω∧γ; `c_double_prime` is
/// the reciprocal of the least Q-eigenvalue on the primitive subspace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimorinConstants {
    pub c: f64,
    pub c_prime: f64,
    pub c_double_prime: f64,
    pub c_wedge: f64,
    pub c_q: f64,
}

impl TimorinConstants {
    pub fn halved(&self) -> Self {
        Self {
            c_wedge: self.c_wedge * 0.5,
            c_q: self.c_q * 0.5,
            ..*self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub trials: usize,
    pub violations: usize,
    /// min over trials of (lhs − ‖α‖²)/‖α‖².
    pub worst_margin: f64,
    /// min over trials of lhs/‖α‖².
    pub worst_ratio: f64,
    pub passed: bool,
}

fn spectrum_of(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eigenvalues(m)?.eigenvalues)
}

fn gram_norms(m: &ComplexMatrix) -> Result<(f64, f64)> {
    let eig = spectrum_of(&m.adjoint().matmul(m)?)?;
    let lo = eig.first().copied().unwrap_or(0.0).max(0.0).sqrt();
    let hi = eig.last().copied().unwrap_or(0.0).max(0.0).sqrt();
    Ok((lo, hi))
}

fn least_q_eigenvalue(ctx: &HRContext) -> Result<f64> {
    let space = primitive_basis(ctx)?;
    let eig = spectrum_of(&gram_of(ctx, &space.basis)?)?;
    let min = eig.first().copied().unwrap_or(f64::INFINITY);
    if !(min > 0.0) {
        return Err(Error::DegenerateConstant(format!(
            "least Q-eigenvalue on the primitive subspace is {min:e}"
        )));
    }
    Ok(min)
}

pub fn timorin_constants(ctx: &HRContext) -> Result<TimorinConstants> {
    let (p, q) = ctx.bidegree();
    let n = ctx.n();
    let c_double_prime = 1.0 / least_q_eigenvalue(ctx)?;
    if p == 0 || q == 0 {
        return Ok(TimorinConstants {
            c: 1.0,
            c_prime: 1.0,
            c_double_prime,
            c_wedge: 0.0,
            c_q: c_double_prime,
        });
    }

    let w_low = Form::monomial_norm(p - 1, q - 1);
    let w_mid = Form::monomial_norm(p, q);
    let w_high = Form::monomial_norm(n - q + 1, n - p + 1);

    let t = ctx.lower_map()?.scale(w_high / w_low);
    let (t_min, t_max) = gram_norms(&t)?;
    if !(t_min > 0.0) {
        return Err(Error::Singular { ratio: 0.0 });
    }

    let raised: Vec<Form> = (0..crate::algebra::dim_bidegree(n, p - 1, q - 1))
        .map(|k| {
            let e = Form::basis_element(n, p - 1, q - 1, k)?.scale_real(1.0 / w_low);
            wedge(ctx.last(), &e)
        })
        .collect::<Result<_>>()?;
    let lower_q = spectrum_of(&gram_of(ctx, &raised)?)?;
    let lower_q_norm = lower_q.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));

    let c = t_max.max(1.0 / t_min).max(lower_q_norm.sqrt());

    let space = primitive_basis(ctx)?;
    let columns: Vec<Vec<Complex64>> = space
        .basis
        .iter()
        .chain(raised.iter())
        .map(|f| f.coeffs().iter().map(|x| x * w_mid).collect())
        .collect();
    let recon = ComplexMatrix::from_columns(ctx.dim(), &columns)?;
    let (_, r_max) = gram_norms(&recon)?;
    let c_prime = r_max * r_max;

    let c2 = c * c;
    Ok(TimorinConstants {
        c,
        c_prime,
        c_double_prime,
        c_wedge: c_prime * c_double_prime * c2 * c2 + c_prime * c2,
        c_q: c_prime * c_double_prime,
    })
}

/// Left side of the estimate and ‖α‖² for one form.
pub fn inequality_sides(
    ctx: &HRContext,
    constants: &TimorinConstants,
    a: &Form,
) -> Result<(f64, f64)> {
    let wedge_norm = wedge(a, &wedge(ctx.omega_cap(), ctx.last())?)?.euclidean_norm();
    let q = ctx.q_form(a, a)?.re;
    let norm = a.euclidean_norm();
    Ok((
        constants.c_wedge * wedge_norm * wedge_norm + constants.c_q * q,
        norm * norm,
    ))
}

pub fn verify_timorin_inequality(
    ctx: &HRContext,
    constants: &TimorinConstants,
    trial_count: usize,
    seed: u64,
) -> Result<InequalityReport> {
    let (p, q) = ctx.bidegree();
    let mut violations = 0;
    let mut worst_margin = f64::INFINITY;
    let mut worst_ratio = f64::INFINITY;
    for k in 0..trial_count {
        let a = random_form(&mut seeded(trial_seed(seed, k as u64)), ctx.n(), p, q)?;
        let (lhs, rhs) = inequality_sides(ctx, constants, &a)?;
        if rhs == 0.0 {
            if lhs < 0.0 {
                violations += 1;
            }
            continue;
        }
        let margin = (lhs - rhs) / rhs;
        if lhs < rhs * (1.0 - INEQUALITY_SLACK) {
            violations += 1;
        }
        worst_margin = worst_margin.min(margin);
        worst_ratio = worst_ratio.min(lhs / rhs);
    }
    if worst_margin == f64::INFINITY {
        worst_margin = 0.0;
        worst_ratio = 1.0;
    }
    Ok(InequalityReport {
        trials: trial_count,
        violations,
        worst_margin,
        worst_ratio,
        passed: violations == 0,
    })
}
