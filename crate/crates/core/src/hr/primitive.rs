use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::context::HRContext;
use crate::algebra::linalg::vec_norm;
use crate::algebra::{
    dim_bidegree, hermitian_eigenvalues, kernel_basis, numerical_rank, operator_matrix, wedge,
    ComplexMatrix, Form, LuDecomposition, SpectrumReport,
};
use crate::error::{Error, Result};
use crate::tolerances::VERDICT;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    PositiveDefinite,
    SemiDefinite,
    Indefinite,
}

impl Verdict {
    /// Classifies a Hermitian spectrum with a symmetric dead band of
    /// `VERDICT · max(1, max|λ|)` around zero.
    pub fn from_spectrum(spectrum: &SpectrumReport) -> Self {
        let Some(min) = spectrum.min() else {
            return Self::PositiveDefinite;
        };
        let band = VERDICT * spectrum.max_abs().max(1.0);
        if min > band {
            Self::PositiveDefinite
        } else if min < -band {
            Self::Indefinite
        } else {
            Self::SemiDefinite
        }
    }
}

/// Euclidean-orthonormal basis of P^{p,q} = ker(α ↦ α∧Ω∧ω).
#[derive(Debug, Clone)]
pub struct PrimitiveSpace {
    pub basis: Vec<Form>,
}

impl PrimitiveSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GramReport {
    pub gram: ComplexMatrix,
    pub spectrum: SpectrumReport,
    pub hermitian_residual: f64,
    pub verdict: Verdict,
}

/// α = β + ω∧γ with β primitive.
#[derive(Debug, Clone)]
pub struct PrimitiveDecomposition {
    pub input: Form,
    pub primitive: Form,
    pub lower: Form,
    /// ‖α − β − ω∧γ‖ / ‖α‖.
    pub reconstruction_residual: f64,
    /// ‖β∧Ω∧ω‖ / (‖β‖·‖Ω∧ω‖).
    pub primitivity_residual: f64,
    /// |Q(β, ω∧γ)| / (‖β‖·‖ω∧γ‖).
    pub orthogonality_residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TheoremCReport {
    pub dim_primitive: usize,
    pub dim_lower: usize,
    pub dim_total: usize,
    pub dimension_identity: bool,
    pub stacked_rank: usize,
    pub stacked_cols: usize,
    pub holds: bool,
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

impl HRContext {
    /// Ω∧ω, the form whose product defines primitivity.
    pub(crate) fn omega_cap_last(&self) -> Result<Form> {
        wedge(self.omega_cap(), self.last())
    }

    /// Matrix of α ↦ α∧Ω∧ω (codomain clamped when it overflows).
    pub fn primitivity_matrix(&self) -> Result<ComplexMatrix> {
        let (p, q) = self.bidegree();
        let m = self.omega_cap_last()?;
        let target = m.bidegree();
        let codomain = ((p + target.0).min(self.n()), (q + target.1).min(self.n()));
        operator_matrix(|a| wedge(a, &m), self.n(), (p, q), codomain)
    }

    /// T: γ ↦ γ∧Ω∧ω², Λ^{p−1,q−1} → Λ^{n−q+1,n−p+1}.
    pub(crate) fn lower_map(&self) -> Result<ComplexMatrix> {
        let (p, q) = self.bidegree();
        let n = self.n();
        let m = wedge(&self.omega_cap_last()?, self.last())?;
        operator_matrix(|g| wedge(g, &m), n, (p - 1, q - 1), (n - q + 1, n - p + 1))
    }

    /// Matrix of γ ↦ ω∧γ, Λ^{p−1,q−1} → Λ^{p,q}.
    pub(crate) fn raise_map(&self) -> Result<ComplexMatrix> {
        let (p, q) = self.bidegree();
        operator_matrix(|g| wedge(self.last(), g), self.n(), (p - 1, q - 1), (p, q))
    }
}

pub fn primitive_basis(ctx: &HRContext) -> Result<PrimitiveSpace> {
    let (p, q) = ctx.bidegree();
    let weight = Form::monomial_norm(p, q);
    let basis = kernel_basis(&ctx.primitivity_matrix()?)?
        .into_iter()
        .map(|v| {
            let v: Vec<Complex64> = v.into_iter().map(|x| x / weight).collect();
            Form::from_coeffs(ctx.n(), p, q, v)
        })
        .collect::<Result<_>>()?;
    Ok(PrimitiveSpace { basis })
}

/// Gram matrix G_{kl} = Q(b_k, b_l) for a list of forms.
pub(crate) fn gram_of(ctx: &HRContext, basis: &[Form]) -> Result<ComplexMatrix> {
    let q = ctx.q_matrix()?;
    let len = ctx.dim();
    let b = ComplexMatrix::from_columns(
        len,
        &basis
            .iter()
            .map(|f| f.coeffs().to_vec())
            .collect::<Vec<_>>(),
    )?;
    b.transpose().matmul(&q)?.matmul(&b.conj())
}

pub fn gram_on_primitive(ctx: &HRContext) -> Result<GramReport> {
    let space = primitive_basis(ctx)?;
    let gram = gram_of(ctx, &space.basis)?;
    let hermitian_residual = gram.hermitian_residual();
    let spectrum = hermitian_eigenvalues(&gram)?;
    Ok(GramReport {
        verdict: Verdict::from_spectrum(&spectrum),
        gram,
        spectrum,
        hermitian_residual,
    })
}

/// Splitting α = β + ω∧γ solved from T γ = α∧Ω∧ω. Reusable for many inputs.
#[derive(Debug, Clone)]
pub struct Splitter {
    ctx: HRContext,
    solver: Option<(LuDecomposition, ComplexMatrix)>,
}

impl Splitter {
    pub fn new(ctx: &HRContext) -> Result<Self> {
        let (p, q) = ctx.bidegree();
        let solver = if p == 0 || q == 0 {
            None
        } else {
            let t = ctx.lower_map()?;
            let lu = LuDecomposition::factor(&t)?;
            if lu.is_singular() {
                return Err(Error::Singular {
                    ratio: lu.pivot_ratio(),
                });
            }
            Some((lu, ctx.primitivity_matrix()?))
        };
        Ok(Self {
            ctx: ctx.clone(),
            solver,
        })
    }

    pub fn context(&self) -> &HRContext {
        &self.ctx
    }

    /// (β, γ) with β primitive.
    pub fn split(&self, a: &Form) -> Result<(Form, Form)> {
        self.ctx.check_form(a)?;
        let (p, q) = self.ctx.bidegree();
        let n = self.ctx.n();
        match &self.solver {
            None => Ok((
                a.clone(),
                Form::zero(n, p.saturating_sub(1), q.saturating_sub(1))?,
            )),
            Some((lu, prim)) => {
                let rhs = prim.mul_vec(a.coeffs())?;
                let gamma = Form::from_coeffs(n, p - 1, q - 1, lu.solve(&rhs)?)?;
                let beta = a.sub(&wedge(self.ctx.last(), &gamma)?)?;
                Ok((beta, gamma))
            }
        }
    }
}

pub fn primitive_decompose(a: &Form, ctx: &HRContext) -> Result<PrimitiveDecomposition> {
    let splitter = Splitter::new(ctx)?;
    let (primitive, lower) = splitter.split(a)?;
    let (p, q) = ctx.bidegree();
    let raised = if p == 0 || q == 0 {
        Form::zero(ctx.n(), p, q)?
    } else {
        wedge(ctx.last(), &lower)?
    };
    let alpha_norm = a.euclidean_norm();
    let reconstruction_residual = ratio(
        a.sub(&primitive)?.sub(&raised)?.euclidean_norm(),
        alpha_norm,
    );
    let m = ctx.omega_cap_last()?;
    let primitivity_residual = ratio(
        wedge(&primitive, &m)?.euclidean_norm(),
        primitive.euclidean_norm() * m.euclidean_norm(),
    );
    let orthogonality_residual = ratio(
        ctx.q_form(&primitive, &raised)?.norm(),
        primitive.euclidean_norm() * raised.euclidean_norm(),
    );
    Ok(PrimitiveDecomposition {
        input: a.clone(),
        primitive,
        lower,
        reconstruction_residual,
        primitivity_residual,
        orthogonality_residual,
    })
}

/// dim P + dim Λ^{p−1,q−1} = dim Λ^{p,q} and P ∩ ω∧Λ^{p−1,q−1} = {0}.
pub fn theorem_c_check(ctx: &HRContext) -> Result<TheoremCReport> {
    let (p, q) = ctx.bidegree();
    let n = ctx.n();
    let space = primitive_basis(ctx)?;
    let dim_total = ctx.dim();
    let mut columns: Vec<Vec<Complex64>> =
        space.basis.iter().map(|f| f.coeffs().to_vec()).collect();
    let dim_lower = if p == 0 || q == 0 {
        0
    } else {
        let raise = ctx.raise_map()?;
        for j in 0..raise.cols() {
            let col = raise.column(j);
            let norm = vec_norm(&col);
            columns.push(col.into_iter().map(|x| x / norm).collect());
        }
        dim_bidegree(n, p - 1, q - 1)
    };
    let stacked = ComplexMatrix::from_columns(dim_total, &columns)?;
    let stacked_rank = numerical_rank(&stacked)?;
    let dimension_identity = space.dim() + dim_lower == dim_total;
    Ok(TheoremCReport {
        dim_primitive: space.dim(),
        dim_lower,
        dim_total,
        dimension_identity,
        stacked_rank,
        stacked_cols: columns.len(),
        holds: dimension_identity && stacked_rank == columns.len(),
    })
}
