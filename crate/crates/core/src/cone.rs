//! Probing (n−2,n−2)-classes Ω for positivity of Q on P^{1,1}, scanning
//! segments of classes for the determinant locus, and the limit-class
//! criterion.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{hermitian_eigenvalues, wedge, wedge_all, Form};
use crate::error::{Error, Result};
use crate::hr::{gram_on_primitive, HRContext, SignConvention, Verdict};
use crate::kahler::{
    form_from_hermitian, hermitian_from_form, is_strictly_positive, random_kahler,
    random_semipositive, HermitianMatrix, KahlerSpec,
};
use crate::rng::{self, seeded, trial_seed};
use crate::tolerances::{IDENTITY, VERDICT};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductTerm {
    pub weight: f64,
    pub factors: Vec<KahlerSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Construction {
    Product { terms: Vec<ProductTerm> },
    Raw { tag: String },
}

/// An (n−2,n−2)-form with the recipe that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct OmegaCandidate {
    pub n: usize,
    pub form: Form,
    pub construction: Construction,
}

impl OmegaCandidate {
    /// Σ weight · (product of the factors' forms).
    pub fn product(n: usize, terms: Vec<ProductTerm>) -> Result<Self> {
        if n < 3 {
            return Err(Error::DimensionOutOfRange { n, max: 8 });
        }
        let mut form = Form::zero(n, n - 2, n - 2)?;
        for term in &terms {
            if term.factors.len() != n - 2 {
                return Err(Error::Arity(format!(
                    "product term needs {} factors, found {}",
                    n - 2,
                    term.factors.len()
                )));
            }
            if !(term.weight >= 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "negative product weight {}",
                    term.weight
                )));
            }
            let forms = term
                .factors
                .iter()
                .map(KahlerSpec::form)
                .collect::<Result<Vec<_>>>()?;
            form = form.add(&wedge_all(n, &forms)?.scale_real(term.weight))?;
        }
        Ok(Self {
            n,
            form,
            construction: Construction::Product { terms },
        })
    }

    pub fn raw(form: Form, tag: impl Into<String>) -> Result<Self> {
        let n = form.n();
        if n < 3 {
            return Err(Error::DimensionOutOfRange { n, max: 8 });
        }
        form.require_bidegree(n - 2, n - 2)?;
        Ok(Self {
            n,
            form,
            construction: Construction::Raw { tag: tag.into() },
        })
    }

    /// Product of n−2 seeded random Kähler forms.
    pub fn random_product(n: usize, seed: u64) -> Result<Self> {
        let factors = (0..n.saturating_sub(2) as u64)
            .map(|k| random_kahler(n, trial_seed(seed, k)))
            .collect();
        Self::product(
            n,
            vec![ProductTerm {
                weight: 1.0,
                factors,
            }],
        )
    }

    /// Product whose first factor has an indefinite Hermitian matrix.
    pub fn random_indefinite(n: usize, seed: u64) -> Result<Self> {
        let mut r = seeded(seed);
        let b: Vec<Complex64> = (0..n * n)
            .map(|_| rng::complex_in(&mut r, -1.0, 1.0))
            .collect();
        let h = HermitianMatrix::from_lower(n, |j, k| (b[j * n + k] + b[k * n + j].conj()) * 0.5);
        let mut forms = vec![form_from_hermitian(&h)?];
        for k in 1..n.saturating_sub(2) as u64 {
            forms.push(random_kahler(n, trial_seed(seed, k)).form()?);
        }
        Self::raw(wedge_all(n, &forms)?, format!("indefinite-{seed}"))
    }

    /// Positive combination of products of strictly positive forms.
    pub fn is_certified(&self) -> bool {
        match &self.construction {
            Construction::Product { terms } => {
                terms.iter().any(|t| t.weight > 0.0)
                    && terms.iter().all(|t| t.factors.iter().all(|f| f.strict))
            }
            Construction::Raw { .. } => false,
        }
    }

    pub fn scaled(&self, t: f64) -> Result<Self> {
        Self::raw(self.form.scale_real(t), "scaled")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeProbeResult {
    pub lefschetz_det: Complex64,
    pub pivot_ratio: f64,
    pub min_primitive_eigenvalue: f64,
    pub max_primitive_eigenvalue: f64,
    pub verdict: Verdict,
    pub in_l_locus: bool,
    /// ‖Ω∧ω‖ > 0.
    pub class_nonzero: bool,
}

fn probe_form(form: &Form, omega: &Form) -> Result<ConeProbeResult> {
    let n = form.n();
    if n < 3 {
        return Err(Error::DimensionOutOfRange { n, max: 8 });
    }
    if form.is_zero() {
        return Err(Error::ZeroCandidate);
    }
    let ctx = HRContext::from_class(
        n,
        1,
        1,
        form.clone(),
        omega.clone(),
        SignConvention::Classical,
    )?;
    let gram = gram_on_primitive(&ctx)?;
    let lefschetz = ctx.lefschetz_map()?;
    let class_nonzero = wedge(form, omega)?.euclidean_norm() > 0.0;
    Ok(ConeProbeResult {
        lefschetz_det: lefschetz.determinant,
        pivot_ratio: lefschetz.pivot_ratio,
        min_primitive_eigenvalue: gram.spectrum.min().unwrap_or(0.0),
        max_primitive_eigenvalue: gram.spectrum.max().unwrap_or(0.0),
        verdict: gram.verdict,
        in_l_locus: lefschetz.pivot_ratio < VERDICT,
        class_nonzero,
    })
}

/// Q-Gram verdict on P^{1,1} and Lefschetz determinant for Ω = candidate.
pub fn probe(candidate: &OmegaCandidate, omega: &Form) -> Result<ConeProbeResult> {
    if omega.n() != candidate.n {
        return Err(Error::AmbientMismatch {
            left: candidate.n,
            right: omega.n(),
        });
    }
    if !is_strictly_positive(omega)?.strict {
        return Err(Error::NotStrictlyPositive {
            index: 0,
            min_eigenvalue: is_strictly_positive(omega)?.min_eigenvalue,
        });
    }
    let result = probe_form(&candidate.form, omega)?;
    if candidate.is_certified() && !result.class_nonzero {
        return Err(Error::DegenerateConstant(
            "certified candidate with vanishing Ω∧ω".into(),
        ));
    }
    Ok(result)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathPoint {
    pub t: f64,
    pub verdict: Verdict,
    pub min_primitive_eigenvalue: f64,
    /// det(t) rotated by the phase of det(0).
    pub real_det: f64,
    /// ∗(Ω(t)∧ω∧ω).
    pub omega_square: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathScan {
    pub steps: usize,
    pub t_first_fail: Option<f64>,
    pub t_det_zero: Option<f64>,
    pub points: Vec<PathPoint>,
}

impl PathScan {
    pub fn crossing_gap(&self) -> Option<f64> {
        Some((self.t_first_fail? - self.t_det_zero?).abs())
    }

    /// ω stays outside P^{1,1} up to the first failure, so the failure is
    /// not the trivial one where Q(ω,ω) vanishes.
    pub fn omega_stays_outside_primitive(&self) -> bool {
        let Some(tf) = self.t_first_fail else {
            return true;
        };
        let s0 = self.points[0].omega_square;
        self.points
            .iter()
            .take_while(|p| p.t <= tf)
            .all(|p| p.omega_square * s0 > 0.0)
    }
}

/// Scans Ω(t) = (1−t)·start + t·end on t = k/steps.
pub fn path_scan(
    start: &OmegaCandidate,
    end: &OmegaCandidate,
    steps: usize,
    omega: &Form,
) -> Result<PathScan> {
    if start.n != end.n {
        return Err(Error::AmbientMismatch {
            left: start.n,
            right: end.n,
        });
    }
    if steps < 16 {
        return Err(Error::InvalidConfig(format!(
            "path scan needs ≥ 16 steps, got {steps}"
        )));
    }
    let omega_sq = wedge(omega, omega)?;
    let raw: Vec<(f64, ConeProbeResult, f64)> = (0..=steps)
        .into_par_iter()
        .map(|k| {
            let t = k as f64 / steps as f64;
            let form = start
                .form
                .scale_real(1.0 - t)
                .add(&end.form.scale_real(t))?;
            let r = probe_form(&form, omega)?;
            let sq = wedge(&form, &omega_sq)?.top_coefficient()?.re;
            Ok((t, r, sq))
        })
        .collect::<Result<_>>()?;

    let d0 = raw[0].1.lefschetz_det;
    let phase = if d0.norm() > 0.0 {
        d0 / d0.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let points: Vec<PathPoint> = raw
        .iter()
        .map(|(t, r, sq)| PathPoint {
            t: *t,
            verdict: r.verdict,
            min_primitive_eigenvalue: r.min_primitive_eigenvalue,
            real_det: (r.lefschetz_det / phase).re,
            omega_square: *sq,
        })
        .collect();

    let t_first_fail = points
        .iter()
        .find(|p| p.verdict != Verdict::PositiveDefinite)
        .map(|p| p.t);
    let scale = points.iter().fold(0.0f64, |m, p| m.max(p.real_det.abs()));
    let s0 = points[0].real_det.signum();
    let t_det_zero = points
        .iter()
        .skip(1)
        .find(|p| p.real_det.abs() <= VERDICT * scale || p.real_det.signum() != s0)
        .map(|p| p.t);
    Ok(PathScan {
        steps,
        t_first_fail,
        t_det_zero,
        points,
    })
}

/// A segment from a random Kähler product to a seeded indefinite candidate
/// on which the verdict leaves positive-definite while ω stays outside the
/// primitive subspace.
#[derive(Debug, Clone, Serialize)]
pub struct FailingPath {
    pub attempt: usize,
    pub start: OmegaCandidate,
    pub end: OmegaCandidate,
    pub omega: Form,
    pub scan: PathScan,
}

pub fn find_failing_path(
    n: usize,
    seed: u64,
    max_attempts: usize,
    steps: usize,
) -> Result<Option<FailingPath>> {
    for attempt in 0..max_attempts {
        let s = trial_seed(seed, attempt as u64);
        let start = OmegaCandidate::random_product(n, trial_seed(s, 0))?;
        let end = OmegaCandidate::random_indefinite(n, trial_seed(s, 1))?;
        let omega = random_kahler(n, trial_seed(s, 2)).form()?;
        let scan = path_scan(&start, &end, steps, &omega)?;
        if scan.t_first_fail.is_some() && scan.omega_stays_outside_primitive() {
            return Ok(Some(FailingPath {
                attempt,
                start,
                end,
                omega,
                scan,
            }));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitCaseReport {
    /// ‖c∧c₁⋯c_{n−2}∧c_last‖ / scale.
    pub with_last: f64,
    /// ‖c∧c∧c₁⋯c_{n−2}‖ / scale.
    pub squared: f64,
    /// ‖c∧c₁⋯c_{n−2}‖ / scale.
    pub product: f64,
    pub hypotheses_hold: bool,
    pub conclusion_holds: bool,
    pub holds: bool,
}

fn require_psd(index: usize, c: &Form) -> Result<()> {
    let h = hermitian_from_form(c)?;
    let eig = hermitian_eigenvalues(&h.to_dense())?;
    let tol = IDENTITY * eig.max_abs().max(1.0);
    if eig.min().unwrap_or(0.0) < -tol {
        return Err(Error::NotStrictlyPositive {
            index,
            min_eigenvalue: eig.min().unwrap_or(0.0),
        });
    }
    Ok(())
}

/// (c∧Π∧c_last = 0 ∧ c∧c∧Π = 0) ⇔ c∧Π = 0 with Π = c₁⋯c_{n−2}, each
/// "= 0" relative to the product of the input norms. `c` must be real.
pub fn limit_case_check(c: &Form, c_list: &[Form], c_last: &Form) -> Result<LimitCaseReport> {
    let n = c.n();
    if n < 3 {
        return Err(Error::DimensionOutOfRange { n, max: 8 });
    }
    if c_list.len() != n - 2 {
        return Err(Error::Arity(format!(
            "expected {} semi-positive classes, found {}",
            n - 2,
            c_list.len()
        )));
    }
    hermitian_from_form(c)?;
    for (i, ci) in c_list.iter().enumerate() {
        if ci.n() != n {
            return Err(Error::AmbientMismatch {
                left: n,
                right: ci.n(),
            });
        }
        require_psd(i, ci)?;
    }
    let last = is_strictly_positive(c_last)?;
    if !last.strict {
        return Err(Error::NotStrictlyPositive {
            index: n - 2,
            min_eigenvalue: last.min_eigenvalue,
        });
    }

    let pi = wedge_all(n, c_list)?;
    let c_pi = wedge(c, &pi)?;
    let norms: f64 = c_list.iter().map(Form::euclidean_norm).product();
    let cn = c.euclidean_norm();
    let base = cn * norms;
    let rel = |v: f64, s: f64| if s > 0.0 { v / s } else { v };
    let product = rel(c_pi.euclidean_norm(), base);
    let with_last = rel(
        wedge(&c_pi, c_last)?.euclidean_norm(),
        base * c_last.euclidean_norm(),
    );
    let squared = rel(wedge(&c_pi, c)?.euclidean_norm(), base * cn);
    let hypotheses_hold = with_last <= VERDICT && squared <= VERDICT;
    let conclusion_holds = product <= VERDICT;
    Ok(LimitCaseReport {
        with_last,
        squared,
        product,
        hypotheses_hold,
        conclusion_holds,
        holds: hypotheses_hold == conclusion_holds,
    })
}

/// A seeded instance for [`limit_case_check`]: semi-positive factors of
/// random rank, a Kähler last class, and `c` either a generic real (1,1)-form
/// or a real multiple of a rank-one first factor.
pub fn random_limit_instance(n: usize, seed: u64) -> Result<(Form, Vec<Form>, Form)> {
    let mut r = seeded(seed);
    let degenerate = r.gen_bool(0.5);
    let c_list: Vec<Form> = (0..n - 2)
        .map(|k| {
            let rank = if degenerate && k == 0 {
                1
            } else {
                r.gen_range(1..=n)
            };
            random_semipositive(n, rank, trial_seed(seed, k as u64)).form()
        })
        .collect::<Result<_>>()?;
    let c_last = random_kahler(n, trial_seed(seed, 100)).form()?;
    let c = if degenerate {
        c_list[0].scale_real(r.gen_range(-2.0..2.0))
    } else {
        let b: Vec<Complex64> = (0..n * n)
            .map(|_| rng::complex_in(&mut r, -1.0, 1.0))
            .collect();
        form_from_hermitian(&HermitianMatrix::from_lower(n, |j, k| {
            (b[j * n + k] + b[k * n + j].conj()) * 0.5
        }))?
    };
    Ok((c, c_list, c_last))
}
