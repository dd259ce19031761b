//! Acceptance campaign: one PASS/FAIL line per criterion, non-zero exit if
//! any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use mhr_core::algebra::{dim_bidegree, Form};
use mhr_core::cone::{
    find_failing_path, limit_case_check, probe, random_limit_instance, OmegaCandidate,
};
use mhr_core::convex::{
    af_check, brunn_minkowski_check, compare_methods, diagonal_dictionary, kt_inequality,
    ConvexBody,
};
use mhr_core::hr::{
    gram_on_primitive, make_context, primitive_decompose, theorem_c_check, timorin_constants,
    verify_timorin_inequality, DecompositionChain, HRContext, SignConvention, Verdict,
};
use mhr_core::kahler::{form_from_hermitian, random_kahler, HermitianMatrix};
use mhr_core::rng::{random_form, seeded, trial_seed};
use mhr_core::run::{cmd_verify, strip_timing, NRange, RunConfig};
use num_complex::Complex64;
use rand::Rng;

const MASTER: u64 = 20_240_601;
const VERDICT_TOL: f64 = 1e-9;
const IDENTITY_TOL: f64 = 1e-12;
const PIVOT_TOL: f64 = 1e-10;
const INEQUALITY_TOL: f64 = 1e-7;

struct Outcome {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn bidegrees(n: usize) -> Vec<(usize, usize)> {
    (0..=n)
        .flat_map(|p| (0..=n - p).map(move |q| (p, q)))
        .collect()
}

fn tuple(n: usize, len: usize, seed: u64) -> Vec<Form> {
    (0..len as u64)
        .map(|k| random_kahler(n, trial_seed(seed, k)).form().unwrap())
        .collect()
}

fn ctx(n: usize, p: usize, q: usize, seed: u64) -> HRContext {
    make_context(
        n,
        p,
        q,
        &tuple(n, n - p - q + 1, seed),
        SignConvention::Classical,
    )
    .unwrap()
}

/// (n, p, q, seed) for 2 ≤ n ≤ 5, all bidegrees, 25 tuples each.
fn instance_family() -> Vec<(usize, usize, usize, u64)> {
    let mut out = Vec::new();
    for n in 2..=5 {
        for (p, q) in bidegrees(n) {
            for k in 0..25u64 {
                out.push((n, p, q, trial_seed(MASTER, (out.len() as u64) << 8 | k)));
            }
        }
    }
    out
}

fn mixed_positivity() -> Outcome {
    let start = Instant::now();
    let family = instance_family();
    let mut failures = 0;
    let mut worst = f64::INFINITY;
    for &(n, p, q, seed) in &family {
        let g = gram_on_primitive(&ctx(n, p, q, seed)).unwrap();
        let min = g.spectrum.min().unwrap();
        let thr = VERDICT_TOL * g.spectrum.max_abs().max(1.0);
        worst = worst.min(min / g.spectrum.max_abs().max(1.0));
        if !(min > thr) || g.verdict != Verdict::PositiveDefinite {
            failures += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        name: "mixed_positivity",
        passed: failures == 0 && secs < 60.0,
        detail: format!(
            "{} instances, {failures} not positive-definite, worst min/max|eig| {worst:.3e}, {secs:.1} s (limit 60 s)",
            family.len()
        ),
    }
}

fn lefschetz() -> Outcome {
    let family = instance_family();
    let mut failures = 0;
    let mut worst = f64::INFINITY;
    for &(n, p, q, seed) in &family {
        let lef = ctx(n, p, q, seed).lefschetz_map().unwrap();
        worst = worst.min(lef.pivot_ratio);
        let dims = dim_bidegree(n, p, q) == dim_bidegree(n, n - q, n - p);
        if !(lef.is_square() && dims && lef.pivot_ratio > PIVOT_TOL) {
            failures += 1;
        }
    }
    Outcome {
        name: "lefschetz_isomorphism",
        passed: failures == 0,
        detail: format!(
            "{} instances, {failures} failing, smallest pivot ratio {worst:.3e} (> {PIVOT_TOL:e})",
            family.len()
        ),
    }
}

fn decomposition() -> Outcome {
    let family = instance_family();
    let mut failures = 0;
    let (mut recon, mut orth) = (0.0f64, 0.0f64);
    for &(n, p, q, seed) in &family {
        let c = ctx(n, p, q, seed);
        let tc = theorem_c_check(&c).unwrap();
        let lower = if p == 0 || q == 0 {
            0
        } else {
            dim_bidegree(n, p - 1, q - 1)
        };
        let exact = tc.dim_primitive + lower == dim_bidegree(n, p, q);
        let a = random_form(&mut seeded(trial_seed(seed, 77)), n, p, q).unwrap();
        let d = primitive_decompose(&a, &c).unwrap();
        recon = recon.max(d.reconstruction_residual);
        orth = orth.max(d.orthogonality_residual);
        if !(exact
            && tc.holds
            && d.reconstruction_residual <= VERDICT_TOL
            && d.orthogonality_residual <= VERDICT_TOL
            && d.primitivity_residual <= VERDICT_TOL)
        {
            failures += 1;
        }
    }
    Outcome {
        name: "primitive_decomposition",
        passed: failures == 0,
        detail: format!(
            "{} instances, {failures} failing, worst reconstruction {recon:.2e}, worst Q-orthogonality {orth:.2e}",
            family.len()
        ),
    }
}

fn classical() -> Outcome {
    let mut failures = Vec::new();
    for n in 1..=4usize {
        for (p, q) in [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0)] {
            if p + q > n {
                continue;
            }
            for k in 0..5u64 {
                let w = random_kahler(
                    n,
                    trial_seed(MASTER ^ 0xc1a5, (n * 100 + p * 10 + q) as u64 * 8 + k),
                )
                .form()
                .unwrap();
                let c = make_context(n, p, q, &vec![w; n - p - q + 1], SignConvention::Classical)
                    .unwrap();
                if gram_on_primitive(&c).unwrap().verdict != Verdict::PositiveDefinite {
                    failures.push(format!("n={n} ({p},{q})"));
                }
            }
        }
    }
    let beta = form_from_hermitian(&HermitianMatrix::identity(2)).unwrap();
    let one = Complex64::new(1.0, 0.0);
    let c11 = make_context(2, 1, 1, &[beta.clone()], SignConvention::Classical).unwrap();
    let a = Form::monomial(2, &[1], &[2], one).unwrap();
    let q11 = c11.q_form(&a, &a).unwrap();
    let c00 = make_context(
        2,
        0,
        0,
        &[beta.clone(), beta.clone(), beta],
        SignConvention::Classical,
    )
    .unwrap();
    let unit = Form::one(2).unwrap();
    let q00 = c00.q_form(&unit, &unit).unwrap();
    let hand = (q11 - 4.0).norm() <= IDENTITY_TOL && (q00 - 2.0).norm() <= IDENTITY_TOL;
    Outcome {
        name: "classical_cross_check",
        passed: failures.is_empty() && hand,
        detail: format!(
            "equal-tuple positivity failures {:?}; Q(dz1^dzb2, dz1^dzb2) = {q11}, Q(1,1) = {q00}",
            failures
        ),
    }
}

fn small_family() -> Vec<(usize, usize, usize, u64)> {
    let mut out = Vec::new();
    for n in 2..=4 {
        for (p, q) in bidegrees(n) {
            out.push((
                n,
                p,
                q,
                trial_seed(MASTER ^ 0x22, (n * 100 + p * 10 + q) as u64),
            ));
        }
    }
    out
}

fn coercivity() -> Outcome {
    let mut failures = 0;
    let mut worst = f64::INFINITY;
    let mut halved_violating = Vec::new();
    let mut halved_clean = 0;
    for &(n, p, q, seed) in &small_family() {
        let c = ctx(n, p, q, seed);
        let k = timorin_constants(&c).unwrap();
        let r = verify_timorin_inequality(&c, &k, 1000, seed).unwrap();
        worst = worst.min(r.worst_margin);
        if !(r.passed && r.worst_margin >= -INEQUALITY_TOL) {
            failures += 1;
        }
        let h = verify_timorin_inequality(&c, &k.halved(), 1000, seed).unwrap();
        if h.violations > 0 {
            halved_violating.push(format!("n={n} ({p},{q}): {}", h.violations));
        } else {
            halved_clean += 1;
        }
    }
    Outcome {
        name: "coercivity_constants",
        passed: failures == 0 && !halved_violating.is_empty(),
        detail: format!(
            "{} instances x 1000 forms, {failures} failing, worst margin {worst:.3e}; halved constants: violations on {} instances [{}], none on {halved_clean}",
            small_family().len(),
            halved_violating.len(),
            halved_violating.join(", ")
        ),
    }
}

fn metric() -> Outcome {
    let mut failures = 0;
    let (mut min_ratio, mut inv, mut recon) = (f64::INFINITY, 0.0f64, 0.0f64);
    for &(n, p, q, seed) in &small_family() {
        let c = ctx(n, p, q, seed);
        let chain = DecompositionChain::new(&c).unwrap();
        let mut rng = seeded(trial_seed(seed, 5));
        let mut bad = false;
        for _ in 0..500 {
            let a = random_form(&mut rng, n, p, q).unwrap();
            let norm = a.euclidean_norm();
            let m = chain.metric(&a, &a).unwrap();
            min_ratio = min_ratio.min(m.re / (norm * norm));
            let tt = chain.tilde(&chain.tilde(&a).unwrap()).unwrap();
            let e1 = tt.sub(&a).unwrap().euclidean_norm() / norm;
            let terms = chain.decompose(&a).unwrap();
            let e2 = chain
                .reconstruct(&terms)
                .unwrap()
                .sub(&a)
                .unwrap()
                .euclidean_norm()
                / norm;
            inv = inv.max(e1);
            recon = recon.max(e2);
            bad |= !(m.re > 0.0) || e1 > VERDICT_TOL || e2 > VERDICT_TOL;
        }
        failures += bad as usize;
    }
    Outcome {
        name: "hermitian_metric",
        passed: failures == 0,
        detail: format!(
            "{} instances x 500 forms, {failures} failing, min <a,a>/|a|^2 {min_ratio:.3e}, worst involution {inv:.2e}, worst reconstruction {recon:.2e}",
            small_family().len()
        ),
    }
}

fn cone() -> Outcome {
    let mut product_failures = 0;
    for n in 3..=5 {
        for k in 0..25u64 {
            let s = trial_seed(MASTER ^ 0x4c, (n * 100) as u64 + k);
            let cand = OmegaCandidate::random_product(n, s).unwrap();
            let omega = random_kahler(n, trial_seed(s, 1)).form().unwrap();
            let r = probe(&cand, &omega).unwrap();
            if r.verdict != Verdict::PositiveDefinite || r.in_l_locus {
                product_failures += 1;
            }
        }
    }
    let steps = 256;
    let mut paths = Vec::new();
    let mut path_ok = false;
    for n in 3..=4 {
        match find_failing_path(n, MASTER ^ n as u64, 50, steps).unwrap() {
            Some(fp) => {
                let gap = fp.scan.crossing_gap();
                path_ok |= gap.is_some_and(|g| g <= 2.0 / steps as f64);
                paths.push(format!(
                    "n={n}: t_fail {:?}, t_det {:?}",
                    fp.scan.t_first_fail, fp.scan.t_det_zero
                ));
            }
            None => paths.push(format!("n={n}: none found")),
        }
    }
    let mut limit_failures = 0;
    let mut nontrivial = 0;
    for n in 3..=4 {
        for k in 0..500u64 {
            let (c, list, last) =
                random_limit_instance(n, trial_seed(MASTER ^ 0x11, n as u64 * 1000 + k)).unwrap();
            let r = limit_case_check(&c, &list, &last).unwrap();
            limit_failures += !r.holds as usize;
            nontrivial += r.conclusion_holds as usize;
        }
    }
    Outcome {
        name: "cone_explorer",
        passed: product_failures == 0 && path_ok && limit_failures == 0,
        detail: format!(
            "75 product probes, {product_failures} failing; failing paths (steps {steps}, gap limit {:.4}): {}; limit case 1000 trials, {limit_failures} failing ({nontrivial} with vanishing product)",
            2.0 / steps as f64,
            paths.join("; ")
        ),
    }
}

fn convex() -> Outcome {
    let mut rng = seeded(MASTER ^ 0xc0);
    let (mut disagree, mut worst_diff) = (0, 0.0f64);
    let (mut af_bad, mut bm_bad, mut eq_bad) = (0, 0, 0);
    let (mut worst_af, mut worst_bm, mut worst_eq) = (f64::INFINITY, f64::INFINITY, 0.0f64);
    for k in 0..500 {
        let n = 1 + k % 5;
        let r = rng.gen_range(1..=3);
        let bodies: Vec<ConvexBody> = (0..r).map(|_| ConvexBody::random(&mut rng, n)).collect();
        let mut mult = vec![0; r];
        for _ in 0..n {
            mult[rng.gen_range(0..r)] += 1;
        }
        let c = compare_methods(&bodies, &mult).unwrap();
        worst_diff = worst_diff.max(c.relative_difference);
        disagree += !c.agree as usize;

        let n = 2 + k % 4;
        let k1 = ConvexBody::random(&mut rng, n);
        let k2 = ConvexBody::random(&mut rng, n);
        let fill: Vec<ConvexBody> = (0..n - 2)
            .map(|_| ConvexBody::random(&mut rng, n))
            .collect();
        let af = af_check(&k1, &k2, &fill).unwrap();
        worst_af = worst_af.min(af.relative());
        af_bad += (af.relative() < -VERDICT_TOL) as usize;
        let bm = brunn_minkowski_check(&k1, &k2).unwrap();
        worst_bm = worst_bm.min(bm.relative());
        bm_bad += (bm.relative() < -VERDICT_TOL) as usize;

        let t = rng.gen_range(0.2..4.0);
        let af_eq = af_check(&k1, &k1.scaled(t), &fill)
            .unwrap()
            .relative()
            .abs();
        let bm_eq = brunn_minkowski_check(&k1, &k1.scaled(t))
            .unwrap()
            .relative()
            .abs();
        worst_eq = worst_eq.max(af_eq).max(bm_eq);
        eq_bad += (af_eq > IDENTITY_TOL || bm_eq > IDENTITY_TOL) as usize;
    }
    let (mut kt_bad, mut worst_kt) = (0, f64::INFINITY);
    for k in 0..500u64 {
        let n = 2 + (k % 4) as usize;
        let m = kt_inequality(&tuple(n, n, trial_seed(MASTER ^ 0x6b, k)))
            .unwrap()
            .relative();
        worst_kt = worst_kt.min(m);
        kt_bad += (m < -VERDICT_TOL) as usize;
    }
    let mut dict_worst = 0.0f64;
    for n in 1..=5 {
        for _ in 0..20 {
            let widths: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(0.1..2.0)).collect())
                .collect();
            dict_worst = dict_worst.max(diagonal_dictionary(&widths).unwrap().relative_error);
        }
    }
    Outcome {
        name: "convex_volumes",
        passed: disagree == 0 && af_bad == 0 && bm_bad == 0 && eq_bad == 0 && kt_bad == 0 && dict_worst <= VERDICT_TOL,
        detail: format!(
            "500 queries: {disagree} method disagreements (worst {worst_diff:.2e}); AF worst {worst_af:.2e}, BM worst {worst_bm:.2e}, KT worst {worst_kt:.2e}; homothetic equality worst {worst_eq:.2e} ({eq_bad} > 1e-12); dictionary worst {dict_worst:.2e}"
        ),
    }
}

fn determinism() -> Outcome {
    let config = RunConfig {
        master_seed: 42,
        n_range: NRange { min: 2, max: 4 },
        trial_count: 3,
        ..RunConfig::default()
    };
    let render = |workers: Option<usize>| {
        let c = RunConfig {
            workers,
            ..config.clone()
        };
        let out = cmd_verify(&c);
        let mut report = serde_json::to_value(out.report.unwrap()).unwrap();
        strip_timing(&mut report);
        report["config"]["workers"] = serde_json::Value::Null;
        (out.status, serde_json::to_string(&report).unwrap())
    };
    let (s1, a) = render(None);
    let (s2, b) = render(None);
    let (_, c) = render(Some(2));
    Outcome {
        name: "report_determinism",
        passed: a == b && a == c,
        detail: format!(
            "{} bytes per report, identical across repeat: {}, across worker counts: {}, statuses {:?}/{:?}",
            a.len(),
            a == b,
            a == c,
            s1,
            s2
        ),
    }
}

fn main() -> ExitCode {
    let criteria: [fn() -> Outcome; 9] = [
        mixed_positivity,
        lefschetz,
        decomposition,
        classical,
        coercivity,
        metric,
        cone,
        convex,
        determinism,
    ];
    let mut all = true;
    for criterion in criteria {
        let start = Instant::now();
        let o = criterion();
        all &= o.passed;
        println!(
            "[{}] {} ({:.1} s): {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.name,
            start.elapsed().as_secs_f64(),
            o.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
