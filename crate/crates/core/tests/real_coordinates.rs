//! Cross-checks of the complex bigraded algebra against a plain exterior
//! algebra on the 2n real generators dx₁, dy₁, …, dxₙ, dyₙ.

use std::collections::BTreeMap;

use mhr_core::algebra::{enumerate_basis, wedge, Form};
use mhr_core::hr::{make_context, SignConvention};
use mhr_core::kahler::{form_from_hermitian, random_kahler, HermitianMatrix};
use mhr_core::rng::{random_form, seeded};
use num_complex::Complex64;

/// Real form: generator bitmask (bit 2(j−1) = dx_j, bit 2(j−1)+1 = dy_j) ↦ coefficient.
type Real = BTreeMap<u32, Complex64>;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn merge_sign(a: u32, b: u32) -> f64 {
    let mut swaps = 0;
    for g in 0..32 {
        if b & (1 << g) != 0 {
            swaps += (a >> (g + 1)).count_ones();
        }
    }
    if swaps % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn real_wedge(a: &Real, b: &Real) -> Real {
    let mut out = Real::new();
    for (&ma, &ca) in a {
        for (&mb, &cb) in b {
            if ma & mb != 0 {
                continue;
            }
            *out.entry(ma | mb).or_insert(Complex64::new(0.0, 0.0)) += ca * cb * merge_sign(ma, mb);
        }
    }
    out
}

/// dz_j = dx_j + i dy_j, dz̄_j = dx_j − i dy_j.
fn one_form(j: usize, anti: bool) -> Real {
    let mut r = Real::new();
    r.insert(1 << (2 * (j - 1)), ONE);
    r.insert(1 << (2 * (j - 1) + 1), if anti { -I } else { I });
    r
}

fn to_real(f: &Form) -> Real {
    let (p, q) = f.bidegree();
    let mut out = Real::new();
    for (pair, c) in enumerate_basis(f.n(), p, q).unwrap().iter().zip(f.coeffs()) {
        let mut term = Real::new();
        term.insert(0, *c);
        for &j in &pair.holo {
            term = real_wedge(&term, &one_form(j, false));
        }
        for &j in &pair.anti {
            term = real_wedge(&term, &one_form(j, true));
        }
        for (m, v) in term {
            *out.entry(m).or_insert(Complex64::new(0.0, 0.0)) += v;
        }
    }
    out
}

fn diff(a: &Real, b: &Real) -> f64 {
    let keys: std::collections::BTreeSet<u32> = a.keys().chain(b.keys()).copied().collect();
    keys.iter()
        .map(|k| {
            let z = Complex64::new(0.0, 0.0);
            (a.get(k).copied().unwrap_or(z) - b.get(k).copied().unwrap_or(z)).norm()
        })
        .fold(0.0, f64::max)
}

fn real_norm(a: &Real) -> f64 {
    a.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

fn real_top(a: &Real, n: usize) -> Complex64 {
    a.get(&((1u32 << (2 * n)) - 1)).copied().unwrap_or_default()
}

fn bidegrees(n: usize) -> Vec<(usize, usize)> {
    (0..=n).flat_map(|p| (0..=n).map(move |q| (p, q))).collect()
}

#[test]
fn wedge_matches_real_expansion() {
    let mut rng = seeded(2024);
    for n in 1..=3 {
        for (p, q) in bidegrees(n) {
            for (r, s) in bidegrees(n) {
                let a = random_form(&mut rng, n, p, q).unwrap();
                let b = random_form(&mut rng, n, r, s).unwrap();
                let lib = to_real(&wedge(&a, &b).unwrap());
                let oracle = real_wedge(&to_real(&a), &to_real(&b));
                assert!(diff(&lib, &oracle) < 1e-12, "n={n} ({p},{q})∧({r},{s})");
            }
        }
    }
}

#[test]
fn conjugation_matches_real_expansion() {
    let mut rng = seeded(7);
    for n in 1..=4 {
        for (p, q) in bidegrees(n) {
            let a = random_form(&mut rng, n, p, q).unwrap();
            let conj: Real = to_real(&a)
                .into_iter()
                .map(|(m, c)| (m, c.conj()))
                .collect();
            assert!(diff(&to_real(&a.conjugate()), &conj) < 1e-13);
        }
    }
}

#[test]
fn norm_matches_orthonormal_real_basis() {
    let mut rng = seeded(8);
    for n in 1..=4 {
        for (p, q) in bidegrees(n) {
            let a = random_form(&mut rng, n, p, q).unwrap();
            let lib = a.euclidean_norm();
            assert!((lib - real_norm(&to_real(&a))).abs() <= 1e-12 * lib.max(1.0));
        }
    }
}

#[test]
fn top_coefficient_matches_real_volume() {
    let mut rng = seeded(9);
    for n in 1..=4 {
        let a = random_form(&mut rng, n, n, n).unwrap();
        let lib = a.top_coefficient().unwrap();
        assert!((lib - real_top(&to_real(&a), n)).norm() < 1e-12);
    }
    let dzdzbar = Form::monomial(1, &[1], &[1], ONE).unwrap();
    assert!((dzdzbar.top_coefficient().unwrap() - Complex64::new(0.0, -2.0)).norm() < 1e-15);
}

#[test]
fn kahler_powers_match_real_volume() {
    for n in 1..=4 {
        let h = random_kahler(n, n as u64).matrix;
        let w = to_real(&form_from_hermitian(&h).unwrap());
        let mut pow = Real::new();
        pow.insert(0, ONE);
        for _ in 0..n {
            pow = real_wedge(&pow, &w);
        }
        let fact: f64 = (1..=n).map(|k| k as f64).product();
        let expected = fact * h.determinant().unwrap();
        let top = real_top(&pow, n);
        assert!((top.re - expected).abs() < 1e-10 * expected && top.im.abs() < 1e-10 * expected);
    }
}

#[test]
fn hand_values_of_q_on_c2() {
    let beta = form_from_hermitian(&HermitianMatrix::identity(2)).unwrap();
    let ctx = make_context(2, 1, 1, &[beta.clone()], SignConvention::Classical).unwrap();
    let a = Form::monomial(2, &[1], &[2], ONE).unwrap();
    let oracle = -real_top(&real_wedge(&to_real(&a), &to_real(&a.conjugate())), 2);
    assert!((oracle - Complex64::new(4.0, 0.0)).norm() < 1e-12);
    assert!((ctx.q_form(&a, &a).unwrap() - oracle).norm() < 1e-12);

    let ctx0 = make_context(
        2,
        0,
        0,
        &[beta.clone(), beta.clone(), beta.clone()],
        SignConvention::Classical,
    )
    .unwrap();
    let one = Form::one(2).unwrap();
    let oracle = real_top(&real_wedge(&to_real(&beta), &to_real(&beta)), 2);
    assert!((oracle - Complex64::new(2.0, 0.0)).norm() < 1e-12);
    assert!((ctx0.q_form(&one, &one).unwrap() - oracle).norm() < 1e-12);
}
