use num_complex::Complex64;

use super::context::HRContext;
use super::primitive::Splitter;
use crate::algebra::{wedge, Form};
use crate::error::Result;

/// One summand `component ∧ ω^exponent` of the iterated decomposition.
#[derive(Debug, Clone)]
pub struct DecompositionTerm {
    pub component: Form,
    pub exponent: usize,
}

/// Splitters for the chain of bidegrees (p,q), (p−1,q−1), …, used to
/// write α = Σ_j α_j ∧ ω^{m−j}, m = min(p,q), each α_j primitive for
/// Ω∧ω^{2(m−j)}.
///
/// When p > q the chain runs on the conjugate bidegree and results are
/// conjugated back.
#[derive(Debug, Clone)]
pub struct DecompositionChain {
    ctx: HRContext,
    conjugated: bool,
    levels: Vec<Splitter>,
}

impl DecompositionChain {
    pub fn new(ctx: &HRContext) -> Result<Self> {
        let (p, q) = ctx.bidegree();
        let conjugated = p > q;
        let mut level = if conjugated {
            ctx.conjugate_bidegree()
        } else {
            ctx.clone()
        };
        let depth = p.min(q);
        let mut levels = Vec::with_capacity(depth);
        for k in 0..depth {
            levels.push(Splitter::new(&level)?);
            if k + 1 < depth {
                level = level.descend()?;
            }
        }
        Ok(Self {
            ctx: ctx.clone(),
            conjugated,
            levels,
        })
    }

    pub fn context(&self) -> &HRContext {
        &self.ctx
    }

    fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Terms ordered by increasing `j`, i.e. decreasing exponent.
    pub fn decompose(&self, a: &Form) -> Result<Vec<DecompositionTerm>> {
        self.ctx.check_form(a)?;
        let m = self.depth();
        let mut rem = if self.conjugated {
            a.conjugate()
        } else {
            a.clone()
        };
        let mut primitives = Vec::with_capacity(m + 1);
        for splitter in &self.levels {
            let (beta, gamma) = splitter.split(&rem)?;
            primitives.push(beta);
            rem = gamma;
        }
        primitives.push(rem);
        // primitives[k] is α_{m−k}
        Ok(primitives
            .into_iter()
            .rev()
            .enumerate()
            .map(|(j, c)| DecompositionTerm {
                component: if self.conjugated { c.conjugate() } else { c },
                exponent: m - j,
            })
            .collect())
    }

    fn power_of_last(&self, k: usize) -> Result<Form> {
        let w = self.ctx.last();
        (0..k).try_fold(Form::one(self.ctx.n())?, |acc, _| wedge(&acc, w))
    }

    /// Σ sign(exponent) · α_j ∧ ω^{exponent}.
    fn recombine(&self, terms: &[DecompositionTerm], alternate: bool) -> Result<Form> {
        let (p, q) = self.ctx.bidegree();
        let mut out = Form::zero(self.ctx.n(), p, q)?;
        for t in terms {
            let mut piece = wedge(&t.component, &self.power_of_last(t.exponent)?)?;
            if alternate && t.exponent % 2 == 1 {
                piece = piece.scale_real(-1.0);
            }
            out = out.add(&piece)?;
        }
        Ok(out)
    }

    pub fn reconstruct(&self, terms: &[DecompositionTerm]) -> Result<Form> {
        self.recombine(terms, false)
    }

    /// ã = Σ (−1)^{m−j} α_j ∧ ω^{m−j}.
    pub fn tilde(&self, a: &Form) -> Result<Form> {
        self.recombine(&self.decompose(a)?, true)
    }

    /// ⟨a, b⟩ = Q(a, b̃).
    pub fn metric(&self, a: &Form, b: &Form) -> Result<Complex64> {
        self.ctx.q_form(a, &self.tilde(b)?)
    }

    /// max_j ‖α_j∧Ω∧ω^{2(m−j)+1}‖ / (‖α_j‖·‖Ω∧ω^{2(m−j)+1}‖).
    pub fn primitivity_residual(&self, terms: &[DecompositionTerm]) -> Result<f64> {
        let mut worst = 0.0f64;
        for t in terms {
            let m = wedge(
                self.ctx.omega_cap(),
                &self.power_of_last(2 * t.exponent + 1)?,
            )?;
            let num = wedge(&t.component, &m)?.euclidean_norm();
            let den = t.component.euclidean_norm() * m.euclidean_norm();
            if den > 0.0 {
                worst = worst.max(num / den);
            }
        }
        Ok(worst)
    }
}

pub fn iterated_decompose(a: &Form, ctx: &HRContext) -> Result<Vec<DecompositionTerm>> {
    DecompositionChain::new(ctx)?.decompose(a)
}

pub fn tilde(a: &Form, ctx: &HRContext) -> Result<Form> {
    DecompositionChain::new(ctx)?.tilde(a)
}

pub fn hr_metric(a: &Form, b: &Form, ctx: &HRContext) -> Result<Complex64> {
    DecompositionChain::new(ctx)?.metric(a, b)
}
