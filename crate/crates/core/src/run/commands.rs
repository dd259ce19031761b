use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::config::{CandidateSpec, RunConfig};
use super::report::{CheckRecord, ReportDocument, TrialRecord};
use crate::algebra::{dim_bidegree, Form};
use crate::cone::{
    find_failing_path, limit_case_check, path_scan, probe, random_limit_instance, OmegaCandidate,
    ProductTerm,
};
use crate::convex::{
    af_check, brunn_minkowski_check, compare_methods, diagonal_dictionary, kt_inequality,
    ConvexBody,
};
use crate::error::{Error, Result};
use crate::hr::{
    gram_on_primitive, make_context, primitive_decompose, theorem_c_check, timorin_constants,
    verify_timorin_inequality, DecompositionChain, HRContext, Verdict,
};
use crate::kahler::{form_from_hermitian, random_kahler, KahlerSpec};
use crate::rng::{random_form, seeded, trial_seed};
use crate::tolerances::{INEQUALITY_SLACK, RANK_RATIO};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Pass = 0,
    Violation = 1,
    InputError = 2,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: ExitStatus,
    pub report: Option<ReportDocument>,
    pub error: Option<String>,
}

impl Outcome {
    pub fn code(&self) -> i32 {
        self.status as i32
    }

    fn input_error(err: Error) -> Self {
        Self {
            status: ExitStatus::InputError,
            report: None,
            error: Some(err.to_string()),
        }
    }

    fn from_report(report: ReportDocument) -> Self {
        Self {
            status: if report.all_passed() {
                ExitStatus::Pass
            } else {
                ExitStatus::Violation
            },
            report: Some(report),
            error: None,
        }
    }
}

struct Job {
    seed: u64,
    instance: Value,
    kind: JobKind,
}

enum JobKind {
    Verify { n: usize, p: usize, q: usize },
    ProductProbe { n: usize },
    FailingPath { n: usize },
    LimitCase { n: usize },
    Candidate(Box<OmegaCandidate>),
    MixedTrial { n: usize },
}

fn with_pool<T: Send>(config: &RunConfig, f: impl FnOnce() -> T + Send) -> T {
    match config.workers {
        Some(w) => match rayon::ThreadPoolBuilder::new().num_threads(w).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        None => f(),
    }
}

fn run_jobs(
    config: &RunConfig,
    jobs: Vec<Job>,
    f: impl Fn(&RunConfig, &Job, &mut TrialRecord) + Sync,
) -> Vec<TrialRecord> {
    with_pool(config, || {
        jobs.par_iter()
            .enumerate()
            .map(|(index, job)| {
                let start = Instant::now();
                let mut rec = TrialRecord::new(index, job.seed, job.instance.clone());
                f(config, job, &mut rec);
                rec.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
                rec
            })
            .collect()
    })
}

fn finish(
    command: &str,
    config: &RunConfig,
    trials: Vec<TrialRecord>,
    margins: &[&str],
    extra: Value,
    start: Instant,
) -> Outcome {
    let mut report = ReportDocument::new(command, config, trials, margins);
    report.extra = extra;
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Outcome::from_report(report)
}

fn random_tuple(n: usize, len: usize, seed: u64) -> Result<Vec<Form>> {
    (0..len as u64)
        .map(|k| random_kahler(n, trial_seed(seed, k)).form())
        .collect()
}

fn relative(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        num
    }
}

fn verify_instance(
    config: &RunConfig,
    ctx: &HRContext,
    seed: u64,
    rec: &mut TrialRecord,
) -> Result<()> {
    let tol = config.tolerance;
    let (p, q) = ctx.bidegree();
    let n = ctx.n();

    let gram = gram_on_primitive(ctx)?;
    let min = gram.spectrum.min().unwrap_or(0.0);
    let max = gram.spectrum.max().unwrap_or(0.0);
    let thr = tol * gram.spectrum.max_abs().max(1.0);
    rec.spectrum = gram.spectrum.eigenvalues.clone();
    rec.push(CheckRecord::at_most(
        "gram_hermitian",
        gram.hermitian_residual,
        tol,
    ));
    rec.push(CheckRecord::greater("gram_positive_definite", min, thr));
    rec.push(
        CheckRecord::flag("sign_consistency", max >= -thr)
            .with_detail(format!("Gram spectrum in [{min:e}, {max:e}]")),
    );

    let lef = ctx.lefschetz_map()?;
    let dims_match = dim_bidegree(n, p, q) == dim_bidegree(n, n - q, n - p);
    rec.push(CheckRecord::flag(
        "lefschetz_square",
        lef.is_square() && dims_match,
    ));
    rec.push(CheckRecord::greater(
        "lefschetz_pivot_ratio",
        lef.pivot_ratio,
        RANK_RATIO,
    ));

    let tc = theorem_c_check(ctx)?;
    rec.push(
        CheckRecord::flag("decomposition_rank", tc.holds).with_detail(format!(
            "dim P {} + dim lower {} vs {}; rank {} of {}",
            tc.dim_primitive, tc.dim_lower, tc.dim_total, tc.stacked_rank, tc.stacked_cols
        )),
    );

    let mut rng = seeded(trial_seed(seed, 1));
    let a = random_form(&mut rng, n, p, q)?;
    let pd = primitive_decompose(&a, ctx)?;
    rec.push(CheckRecord::at_most(
        "decomposition_residual",
        pd.reconstruction_residual,
        tol,
    ));
    rec.push(CheckRecord::at_most(
        "primitivity_residual",
        pd.primitivity_residual,
        tol,
    ));
    rec.push(CheckRecord::at_most(
        "q_orthogonality",
        pd.orthogonality_residual,
        tol,
    ));

    let chain = DecompositionChain::new(ctx)?;
    let mut min_ratio = f64::INFINITY;
    let mut worst_imag = 0.0f64;
    let mut worst_involution = 0.0f64;
    let mut worst_reconstruction = 0.0f64;
    for _ in 0..config.metric_samples.max(1) {
        let a = random_form(&mut rng, n, p, q)?;
        let norm2 = a.euclidean_norm().powi(2);
        let m = chain.metric(&a, &a)?;
        min_ratio = min_ratio.min(m.re / norm2);
        worst_imag = worst_imag.max(m.im.abs() / norm2);
        let tt = chain.tilde(&chain.tilde(&a)?)?;
        worst_involution =
            worst_involution.max(relative(tt.sub(&a)?.euclidean_norm(), a.euclidean_norm()));
        let terms = chain.decompose(&a)?;
        let back = chain.reconstruct(&terms)?;
        worst_reconstruction =
            worst_reconstruction.max(relative(back.sub(&a)?.euclidean_norm(), a.euclidean_norm()));
    }
    rec.push(CheckRecord::greater("metric_positive", min_ratio, 0.0));
    rec.push(CheckRecord::at_most("metric_hermitian", worst_imag, tol));
    rec.push(CheckRecord::at_most(
        "tilde_involution",
        worst_involution,
        tol,
    ));
    rec.push(CheckRecord::at_most(
        "iterated_reconstruction",
        worst_reconstruction,
        tol,
    ));

    match timorin_constants(ctx) {
        Ok(k) => {
            let r =
                verify_timorin_inequality(ctx, &k, config.inequality_samples, trial_seed(seed, 2))?;
            rec.push(
                CheckRecord::at_least("timorin_margin", r.worst_margin, -INEQUALITY_SLACK)
                    .with_detail(format!("c_wedge {:e}, c_q {:e}", k.c_wedge, k.c_q)),
            );
        }
        Err(e) => rec.push(CheckRecord::error("timorin_margin", &e)),
    }
    Ok(())
}

/// Positivity, Lefschetz, decomposition, metric and coercivity checks over every
/// (n, p, q) in range, `trial_count` random Kähler tuples each.
pub fn cmd_verify(config: &RunConfig) -> Outcome {
    let start = Instant::now();
    if let Err(e) = config.validate() {
        return Outcome::input_error(e);
    }
    let mut jobs = Vec::new();
    for n in config.n_range.iter() {
        for (p, q) in config.bidegrees(n) {
            for k in 0..config.trial_count {
                jobs.push(Job {
                    seed: trial_seed(config.master_seed, jobs.len() as u64),
                    instance: json!({"n": n, "p": p, "q": q, "trial": k}),
                    kind: JobKind::Verify { n, p, q },
                });
            }
        }
    }
    if jobs.is_empty() {
        return Outcome::input_error(Error::InvalidConfig(
            "no bidegree matches the filter".into(),
        ));
    }
    let trials = run_jobs(config, jobs, |config, job, rec| {
        let JobKind::Verify { n, p, q } = job.kind else {
            return;
        };
        let result = random_tuple(n, n - p - q + 1, job.seed)
            .and_then(|tuple| make_context(n, p, q, &tuple, config.sign_convention))
            .and_then(|ctx| verify_instance(config, &ctx, job.seed, rec));
        if let Err(e) = result {
            rec.push(CheckRecord::error("evaluation", &e));
        }
    });
    finish(
        "verify",
        config,
        trials,
        &[
            "gram_positive_definite",
            "lefschetz_pivot_ratio",
            "metric_positive",
            "timorin_margin",
        ],
        Value::Null,
        start,
    )
}

fn build_candidate(spec: &CandidateSpec) -> Result<OmegaCandidate> {
    match spec {
        CandidateSpec::Product { terms } => {
            let n = terms
                .first()
                .and_then(|t| t.factors.first())
                .map(|h| h.n())
                .ok_or_else(|| Error::InvalidConfig("empty product candidate".into()))?;
            let terms = terms
                .iter()
                .map(|t| {
                    Ok(ProductTerm {
                        weight: t.weight,
                        factors: t
                            .factors
                            .iter()
                            .map(|h| KahlerSpec::explicit(h.clone()))
                            .collect::<Result<_>>()?,
                    })
                })
                .collect::<Result<_>>()?;
            OmegaCandidate::product(n, terms)
        }
        CandidateSpec::Raw { n, coeffs } => {
            if *n < 3 {
                return Err(Error::InvalidConfig(format!(
                    "candidate needs n ≥ 3, got {n}"
                )));
            }
            let form = Form::from_coeffs(*n, n - 2, n - 2, coeffs.clone())?;
            if form.is_zero() {
                return Err(Error::ZeroCandidate);
            }
            OmegaCandidate::raw(form, "config")
        }
    }
}

fn probe_job(config: &RunConfig, job: &Job, rec: &mut TrialRecord) -> Result<()> {
    let steps = config.cone.steps;
    match &job.kind {
        JobKind::ProductProbe { n } => {
            let cand = OmegaCandidate::random_product(*n, trial_seed(job.seed, 0))?;
            let omega = random_kahler(*n, trial_seed(job.seed, 1)).form()?;
            let r = probe(&cand, &omega)?;
            rec.push(CheckRecord::greater(
                "product_positive_definite",
                r.min_primitive_eigenvalue,
                config.tolerance * r.max_primitive_eigenvalue.abs().max(1.0),
            ));
            rec.push(CheckRecord::flag("outside_l_locus", !r.in_l_locus));
            rec.push(CheckRecord::flag("class_nonzero", r.class_nonzero));
        }
        JobKind::FailingPath { n } => {
            match find_failing_path(*n, job.seed, config.cone.search_attempts, steps)? {
                Some(fp) => {
                    let gap = fp.scan.crossing_gap().unwrap_or(f64::INFINITY);
                    rec.push(
                        CheckRecord::at_most("crossing_gap", gap, 2.0 / steps as f64).with_detail(
                            format!(
                                "attempt {}: t_first_fail {:?}, t_det_zero {:?}",
                                fp.attempt, fp.scan.t_first_fail, fp.scan.t_det_zero
                            ),
                        ),
                    );
                }
                None => rec.push(
                    CheckRecord::flag("failing_path_found", false)
                        .with_detail(format!("{} attempts", config.cone.search_attempts)),
                ),
            }
        }
        JobKind::LimitCase { n } => {
            let (c, list, last) = random_limit_instance(*n, job.seed)?;
            let r = limit_case_check(&c, &list, &last)?;
            rec.push(
                CheckRecord::flag("limit_case", r.holds).with_detail(format!(
                    "hypotheses {}, conclusion {}",
                    r.hypotheses_hold, r.conclusion_holds
                )),
            );
        }
        JobKind::Candidate(cand) => {
            let omega = random_kahler(cand.n, trial_seed(job.seed, 1)).form()?;
            let r = probe(cand, &omega)?;
            rec.push(
                CheckRecord::flag("candidate_probed", true).with_detail(format!(
                    "verdict {:?}, det {:e}, in L {}",
                    r.verdict,
                    r.lefschetz_det.norm(),
                    r.in_l_locus
                )),
            );
            rec.push(CheckRecord::flag(
                "locus_consistency",
                !(r.verdict == Verdict::PositiveDefinite && r.in_l_locus),
            ));
            if cand.is_certified() {
                rec.push(CheckRecord::flag(
                    "certified_positive",
                    r.verdict == Verdict::PositiveDefinite,
                ));
            } else {
                let startc = OmegaCandidate::random_product(cand.n, trial_seed(job.seed, 2))?;
                let scan = path_scan(&startc, cand, steps, &omega)?;
                if scan.t_first_fail.is_some() && scan.omega_stays_outside_primitive() {
                    let gap = scan.crossing_gap().unwrap_or(f64::INFINITY);
                    rec.push(
                        CheckRecord::at_most("crossing_gap", gap, 2.0 / steps as f64).with_detail(
                            format!(
                                "t_first_fail {:?}, t_det_zero {:?}",
                                scan.t_first_fail, scan.t_det_zero
                            ),
                        ),
                    );
                } else {
                    rec.push(CheckRecord::flag("path_scanned", true).with_detail(format!(
                        "t_first_fail {:?}, t_det_zero {:?}",
                        scan.t_first_fail, scan.t_det_zero
                    )));
                }
            }
        }
        _ => {}
    }
    Ok(())
}

/// Probes Kähler-product candidates, searches failing segments, and runs
/// the limit-class criterion for every n in range (n ≥ 3).
pub fn cmd_probe_cone(config: &RunConfig) -> Outcome {
    let start = Instant::now();
    if let Err(e) = config.validate() {
        return Outcome::input_error(e);
    }
    if config.n_range.min < 3 {
        return Outcome::input_error(Error::InvalidConfig("cone probing needs n ≥ 3".into()));
    }
    if config.cone.steps < 16 {
        return Outcome::input_error(Error::InvalidConfig("path scans need ≥ 16 steps".into()));
    }
    let candidate = match config
        .cone
        .candidate
        .as_ref()
        .map(build_candidate)
        .transpose()
    {
        Ok(c) => c,
        Err(e) => return Outcome::input_error(e),
    };
    let mut jobs = Vec::new();
    let mut push = |instance: Value, kind: JobKind| {
        let seed = trial_seed(config.master_seed, jobs.len() as u64);
        jobs.push(Job {
            seed,
            instance,
            kind,
        });
    };
    if let Some(c) = candidate {
        push(
            json!({"kind": "candidate", "n": c.n}),
            JobKind::Candidate(Box::new(c)),
        );
    }
    for n in config.n_range.iter() {
        for k in 0..config.trial_count {
            push(
                json!({"kind": "product", "n": n, "trial": k}),
                JobKind::ProductProbe { n },
            );
        }
        push(
            json!({"kind": "failing_path", "n": n}),
            JobKind::FailingPath { n },
        );
        for k in 0..config.cone.limit_trials {
            push(
                json!({"kind": "limit_case", "n": n, "trial": k}),
                JobKind::LimitCase { n },
            );
        }
    }
    let trials = run_jobs(config, jobs, |config, job, rec| {
        if let Err(e) = probe_job(config, job, rec) {
            rec.push(CheckRecord::error("evaluation", &e));
        }
    });
    finish(
        "probe-cone",
        config,
        trials,
        &["product_positive_definite"],
        Value::Null,
        start,
    )
}

fn random_multiplicities<R: Rng>(rng: &mut R, n: usize, r: usize) -> Vec<usize> {
    let mut m = vec![0; r];
    for _ in 0..n {
        m[rng.gen_range(0..r)] += 1;
    }
    m
}

fn mixed_trial(config: &RunConfig, n: usize, seed: u64, rec: &mut TrialRecord) -> Result<()> {
    let tol = config.tolerance;
    let mut rng = seeded(seed);
    let r = rng.gen_range(1..=3);
    let bodies: Vec<ConvexBody> = (0..r).map(|_| ConvexBody::random(&mut rng, n)).collect();
    let mult = random_multiplicities(&mut rng, n, r);
    let cmp = compare_methods(&bodies, &mult)?;
    rec.push(CheckRecord::at_most(
        "methods_agree",
        cmp.relative_difference,
        tol,
    ));
    if n >= 2 {
        let k1 = ConvexBody::random(&mut rng, n);
        let k2 = ConvexBody::random(&mut rng, n);
        let fill: Vec<ConvexBody> = (0..n - 2)
            .map(|_| ConvexBody::random(&mut rng, n))
            .collect();
        rec.push(CheckRecord::at_least(
            "af_margin",
            af_check(&k1, &k2, &fill)?.relative(),
            -tol,
        ));
        rec.push(CheckRecord::at_least(
            "bm_margin",
            brunn_minkowski_check(&k1, &k2)?.relative(),
            -tol,
        ));
        let classes = random_tuple(n, n, trial_seed(seed, 9))?;
        rec.push(CheckRecord::at_least(
            "kt_margin",
            kt_inequality(&classes)?.relative(),
            -tol,
        ));
    }
    let widths: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..n).map(|_| rng.gen_range(0.1..2.0)).collect())
        .collect();
    let d = diagonal_dictionary(&widths)?;
    rec.push(CheckRecord::at_most("dictionary", d.relative_error, tol));
    Ok(())
}

fn query_record(config: &RunConfig) -> Result<Option<TrialRecord>> {
    let mixed = &config.mixed;
    if mixed.bodies.is_empty() && mixed.classes.is_empty() {
        return Ok(None);
    }
    let tol = config.tolerance;
    let mut rec = TrialRecord::new(0, config.master_seed, json!({"kind": "query"}));
    let mut values = serde_json::Map::new();
    if !mixed.bodies.is_empty() {
        if let Some(m) = mixed.multiplicities.iter().find(|m| **m < 0) {
            return Err(Error::InvalidConfig(format!("negative multiplicity {m}")));
        }
        let mult: Vec<usize> = mixed.multiplicities.iter().map(|&m| m as usize).collect();
        let cmp = compare_methods(&mixed.bodies, &mult)?;
        values.insert("polarization".into(), json!(cmp.polarization));
        values.insert("interpolation".into(), json!(cmp.interpolation));
        rec.push(CheckRecord::at_most(
            "methods_agree",
            cmp.relative_difference,
            tol,
        ));
        let n = mixed.bodies[0].dim()?;
        if mixed.bodies.len() >= 2 && n >= 2 {
            let (k1, k2) = (&mixed.bodies[0], &mixed.bodies[1]);
            let rest = &mixed.bodies[2..];
            let fill: Vec<ConvexBody> = (0..n - 2)
                .map(|i| {
                    if rest.is_empty() {
                        mixed.bodies[i % 2].clone()
                    } else {
                        rest[i % rest.len()].clone()
                    }
                })
                .collect();
            let af = af_check(k1, k2, &fill)?;
            let bm = brunn_minkowski_check(k1, k2)?;
            values.insert(
                "af".into(),
                serde_json::to_value(&af).unwrap_or(Value::Null),
            );
            values.insert(
                "bm".into(),
                serde_json::to_value(&bm).unwrap_or(Value::Null),
            );
            rec.push(CheckRecord::at_least("af_margin", af.relative(), -tol));
            rec.push(CheckRecord::at_least("bm_margin", bm.relative(), -tol));
        }
    }
    if !mixed.classes.is_empty() {
        let forms: Vec<Form> = mixed
            .classes
            .iter()
            .map(form_from_hermitian)
            .collect::<Result<_>>()?;
        let kt = kt_inequality(&forms)?;
        values.insert(
            "kt".into(),
            serde_json::to_value(&kt).unwrap_or(Value::Null),
        );
        rec.push(CheckRecord::at_least("kt_margin", kt.relative(), -tol));
    }
    rec.instance = json!({"kind": "query", "values": Value::Object(values)});
    Ok(Some(rec))
}

/// Evaluates the configured query (if any) and a seeded campaign of random
/// mixed-volume, AF, BM, KT and dictionary checks.
pub fn cmd_mixed_volume(config: &RunConfig) -> Outcome {
    let start = Instant::now();
    if let Err(e) = config.validate() {
        return Outcome::input_error(e);
    }
    let query = match query_record(config) {
        Ok(q) => q,
        Err(e) => return Outcome::input_error(e),
    };
    let span = config.n_range.max - config.n_range.min + 1;
    let jobs: Vec<Job> = (0..config.trial_count)
        .map(|k| {
            let n = config.n_range.min + k % span;
            Job {
                seed: trial_seed(config.master_seed, k as u64),
                instance: json!({"kind": "campaign", "n": n, "trial": k}),
                kind: JobKind::MixedTrial { n },
            }
        })
        .collect();
    let mut trials: Vec<TrialRecord> = query.into_iter().collect();
    let offset = trials.len();
    let campaign = run_jobs(config, jobs, |config, job, rec| {
        let JobKind::MixedTrial { n } = job.kind else {
            return;
        };
        if let Err(e) = mixed_trial(config, n, job.seed, rec) {
            rec.push(CheckRecord::error("evaluation", &e));
        }
    });
    trials.extend(campaign.into_iter().map(|mut t| {
        t.index += offset;
        t
    }));
    finish(
        "mixed-volume",
        config,
        trials,
        &["af_margin", "bm_margin", "kt_margin"],
        Value::Null,
        start,
    )
}

/// Single-instance debugging: decomposes one seeded random form at
/// (n_range.min, p, q) and reports every component.
pub fn cmd_decompose(config: &RunConfig) -> Outcome {
    let start = Instant::now();
    if let Err(e) = config.validate() {
        return Outcome::input_error(e);
    }
    let n = config.n_range.min;
    let (p, q) = (config.p.unwrap_or(1.min(n)), config.q.unwrap_or(1.min(n)));
    if p + q > n {
        return Outcome::input_error(Error::BidegreeOutOfRange { n, p, q });
    }
    let seed = config.master_seed;
    let ctx = match random_tuple(n, n - p - q + 1, seed)
        .and_then(|t| make_context(n, p, q, &t, config.sign_convention))
    {
        Ok(c) => c,
        Err(e) => return Outcome::input_error(e),
    };
    let mut rec = TrialRecord::new(0, seed, json!({"n": n, "p": p, "q": q}));
    let mut extra = Value::Null;
    let result = (|| -> Result<()> {
        let a = random_form(&mut seeded(trial_seed(seed, 1)), n, p, q)?;
        let pd = primitive_decompose(&a, &ctx)?;
        let tol = config.tolerance;
        rec.push(CheckRecord::at_most(
            "decomposition_residual",
            pd.reconstruction_residual,
            tol,
        ));
        rec.push(CheckRecord::at_most(
            "primitivity_residual",
            pd.primitivity_residual,
            tol,
        ));
        rec.push(CheckRecord::at_most(
            "q_orthogonality",
            pd.orthogonality_residual,
            tol,
        ));
        let chain = DecompositionChain::new(&ctx)?;
        let terms = chain.decompose(&a)?;
        rec.push(CheckRecord::at_most(
            "iterated_primitivity",
            chain.primitivity_residual(&terms)?,
            tol,
        ));
        let gram = gram_on_primitive(&ctx)?;
        rec.spectrum = gram.spectrum.eigenvalues.clone();
        extra = json!({
            "input": a,
            "primitive": pd.primitive,
            "lower": pd.lower,
            "terms": terms.iter().map(|t| json!({
                "exponent": t.exponent,
                "component": t.component,
            })).collect::<Vec<_>>(),
            "metric": chain.metric(&a, &a)?,
            "verdict": gram.verdict,
        });
        Ok(())
    })();
    if let Err(e) = result {
        rec.push(CheckRecord::error("evaluation", &e));
    }
    finish("decompose", config, vec![rec], &[], extra, start)
}
