//! Mixed volumes of boxes and zonotopes in ℝⁿ and the classical inequalities
//! between them, plus the intersection-number analogue for (1,1)-forms.

use itertools::Itertools;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{wedge_all, Form};
use crate::error::{Error, Result};
use crate::kahler::{form_from_hermitian, HermitianMatrix};
use crate::tolerances::{IDENTITY, VERDICT};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConvexBody {
    /// Axis-aligned box `Π [0, widths_j]`.
    Box { widths: Vec<f64> },
    /// Minkowski sum of the segments `[0, g]`.
    Zonotope { generators: Vec<Vec<f64>> },
}

impl ConvexBody {
    pub fn unit_cube(n: usize) -> Self {
        ConvexBody::Box {
            widths: vec![1.0; n],
        }
    }

    pub fn segment(g: Vec<f64>) -> Self {
        ConvexBody::Zonotope {
            generators: vec![g],
        }
    }

    pub fn dim(&self) -> Result<usize> {
        match self {
            ConvexBody::Box { widths } => Ok(widths.len()),
            ConvexBody::Zonotope { generators } => generators
                .first()
                .map(Vec::len)
                .ok_or_else(|| Error::InvalidBody("zonotope without generators".into())),
        }
    }

    pub fn validate(&self) -> Result<usize> {
        let n = self.dim()?;
        if n == 0 {
            return Err(Error::InvalidBody("zero-dimensional body".into()));
        }
        match self {
            ConvexBody::Box { widths } => {
                if let Some(w) = widths.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
                    return Err(Error::InvalidBody(format!("box width {w} is not ≥ 0")));
                }
            }
            ConvexBody::Zonotope { generators } => {
                for g in generators {
                    if g.len() != n {
                        return Err(Error::InvalidBody(format!(
                            "generator of length {} in ℝ^{n}",
                            g.len()
                        )));
                    }
                    if g.iter().any(|x| !x.is_finite()) {
                        return Err(Error::InvalidBody("non-finite generator".into()));
                    }
                }
            }
        }
        Ok(n)
    }

    pub fn generators(&self) -> Vec<Vec<f64>> {
        match self {
            ConvexBody::Box { widths } => {
                let n = widths.len();
                (0..n)
                    .map(|j| {
                        (0..n)
                            .map(|k| if j == k { widths[j] } else { 0.0 })
                            .collect()
                    })
                    .collect()
            }
            ConvexBody::Zonotope { generators } => generators.clone(),
        }
    }

    pub fn scaled(&self, t: f64) -> Self {
        match self {
            ConvexBody::Box { widths } => ConvexBody::Box {
                widths: widths.iter().map(|w| w * t).collect(),
            },
            ConvexBody::Zonotope { generators } => ConvexBody::Zonotope {
                generators: generators
                    .iter()
                    .map(|g| g.iter().map(|x| x * t).collect())
                    .collect(),
            },
        }
    }

    /// Box with widths in [0.1, 2) or a zonotope with n or n+1 generators
    /// with entries in [−1, 1).
    pub fn random<R: Rng>(rng: &mut R, n: usize) -> Self {
        if rng.gen_bool(0.5) {
            ConvexBody::Box {
                widths: (0..n).map(|_| rng.gen_range(0.1..2.0)).collect(),
            }
        } else {
            let count = n + rng.gen_range(0..=1);
            ConvexBody::Zonotope {
                generators: (0..count)
                    .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
                    .collect(),
            }
        }
    }
}

fn common_dim(bodies: &[&ConvexBody]) -> Result<usize> {
    let mut n = None;
    for b in bodies {
        let d = b.validate()?;
        match n {
            None => n = Some(d),
            Some(m) if m != d => {
                return Err(Error::InvalidBody(format!(
                    "bodies of dimensions {m} and {d}"
                )))
            }
            _ => {}
        }
    }
    n.ok_or_else(|| Error::InvalidBody("empty body list".into()))
}

fn det_real(mut m: Vec<f64>, n: usize) -> f64 {
    let mut det = 1.0;
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&a, &b| m[a * n + k].abs().total_cmp(&m[b * n + k].abs()))
            .unwrap_or(k);
        let p = m[piv * n + k];
        if p == 0.0 {
            return 0.0;
        }
        if piv != k {
            for c in 0..n {
                m.swap(k * n + c, piv * n + c);
            }
            det = -det;
        }
        det *= p;
        for r in k + 1..n {
            let f = m[r * n + k] / p;
            if f != 0.0 {
                for c in k + 1..n {
                    m[r * n + c] -= f * m[k * n + c];
                }
            }
        }
    }
    det
}

/// Σ over n-subsets of |det|.
fn zonotope_volume(generators: &[Vec<f64>], n: usize) -> f64 {
    generators
        .iter()
        .combinations(n)
        .map(|s| det_real(s.iter().flat_map(|g| g.iter().copied()).collect(), n).abs())
        .sum()
}

/// Vol(Σ λ_s K_s), λ_s ≥ 0.
pub fn volume(combination: &[(f64, ConvexBody)]) -> Result<f64> {
    let bodies: Vec<&ConvexBody> = combination.iter().map(|(_, b)| b).collect();
    let n = common_dim(&bodies)?;
    if let Some((l, _)) = combination
        .iter()
        .find(|(l, _)| !(l.is_finite() && *l >= 0.0))
    {
        return Err(Error::InvalidBody(format!("weight {l} is not ≥ 0")));
    }
    let all_boxes = combination
        .iter()
        .all(|(_, b)| matches!(b, ConvexBody::Box { .. }));
    if all_boxes {
        let mut sides = vec![0.0; n];
        for (l, b) in combination {
            if let ConvexBody::Box { widths } = b {
                for (s, w) in sides.iter_mut().zip(widths) {
                    *s += l * w;
                }
            }
        }
        return Ok(sides.iter().product());
    }
    let pooled: Vec<Vec<f64>> = combination
        .iter()
        .filter(|(l, _)| *l > 0.0)
        .flat_map(|(l, b)| {
            b.generators()
                .into_iter()
                .map(move |g| g.into_iter().map(|x| x * l).collect::<Vec<_>>())
        })
        .collect();
    Ok(zonotope_volume(&pooled, n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MixedVolumeMethod {
    Polarization,
    Interpolation,
    Generators,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedVolumeResult {
    pub multiplicities: Vec<usize>,
    pub value: f64,
    pub method: MixedVolumeMethod,
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

fn check_query(bodies: &[ConvexBody], multiplicities: &[usize]) -> Result<usize> {
    let n = common_dim(&bodies.iter().collect::<Vec<_>>())?;
    if bodies.len() != multiplicities.len() {
        return Err(Error::Arity(format!(
            "{} bodies but {} multiplicities",
            bodies.len(),
            multiplicities.len()
        )));
    }
    let total: usize = multiplicities.iter().sum();
    if total != n {
        return Err(Error::Arity(format!(
            "multiplicities sum to {total}, expected {n}"
        )));
    }
    Ok(n)
}

/// V(K^I) by inclusion–exclusion over the n slots.
pub fn mixed_volume(bodies: &[ConvexBody], multiplicities: &[usize]) -> Result<MixedVolumeResult> {
    let n = check_query(bodies, multiplicities)?;
    let slots: Vec<usize> = multiplicities
        .iter()
        .enumerate()
        .flat_map(|(s, &m)| std::iter::repeat(s).take(m))
        .collect();
    let mut total = 0.0;
    for mask in 1u32..(1 << n) {
        let mut counts = vec![0usize; bodies.len()];
        for (slot, &s) in slots.iter().enumerate() {
            if mask & (1 << slot) != 0 {
                counts[s] += 1;
            }
        }
        let combo: Vec<(f64, ConvexBody)> = counts
            .iter()
            .zip(bodies)
            .filter(|(c, _)| **c > 0)
            .map(|(&c, b)| (c as f64, b.clone()))
            .collect();
        let sign = if (n - mask.count_ones() as usize) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        total += sign * volume(&combo)?;
    }
    Ok(MixedVolumeResult {
        multiplicities: multiplicities.to_vec(),
        value: total / factorial(n),
        method: MixedVolumeMethod::Polarization,
    })
}

/// Exponent vectors of total degree n in r variables.
/// Mixed volume from the generator expansion of zonotopes:
/// V(Z₁,…,Zₙ) = (1/n!) Σ |det(g₁,…,gₙ)| over one generator gᵢ from each slot.
/// Free of the alternating-sign cancellation in the polarization sum.
pub fn mixed_volume_generators(
    bodies: &[ConvexBody],
    multiplicities: &[usize],
) -> Result<MixedVolumeResult> {
    let n = check_query(bodies, multiplicities)?;
    let slots: Vec<Vec<Vec<f64>>> = multiplicities
        .iter()
        .zip(bodies)
        .flat_map(|(&m, b)| std::iter::repeat(b.generators()).take(m))
        .collect();
    let total: f64 = slots
        .iter()
        .map(|g| g.iter())
        .multi_cartesian_product()
        .map(|choice| det_real(choice.iter().flat_map(|g| g.iter().copied()).collect(), n).abs())
        .sum();
    Ok(MixedVolumeResult {
        multiplicities: multiplicities.to_vec(),
        value: total / factorial(n),
        method: MixedVolumeMethod::Generators,
    })
}

fn monomials(r: usize, n: usize) -> Vec<Vec<usize>> {
    if r == 1 {
        return vec![vec![n]];
    }
    (0..=n)
        .rev()
        .flat_map(|first| {
            monomials(r - 1, n - first)
                .into_iter()
                .map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
        })
        .collect()
}

/// Householder least squares for a column-major `rows × cols` system.
fn least_squares(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let cols = a.len();
    let rows = b.len();
    for k in 0..cols {
        let norm: f64 = a[k][k..].iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Singular { ratio: 0.0 });
        }
        let alpha = if a[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = a[k][k..].to_vec();
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|x| x * x).sum();
        if vv > 0.0 {
            for col in a.iter_mut().skip(k) {
                let dot: f64 = v.iter().zip(&col[k..]).map(|(x, y)| x * y).sum();
                let f = 2.0 * dot / vv;
                for (c, vi) in col[k..].iter_mut().zip(&v) {
                    *c -= f * vi;
                }
            }
            let dot: f64 = v.iter().zip(&b[k..]).map(|(x, y)| x * y).sum();
            let f = 2.0 * dot / vv;
            for (c, vi) in b[k..rows].iter_mut().zip(&v) {
                *c -= f * vi;
            }
        }
    }
    let diag_max = (0..cols).fold(0.0f64, |m, k| m.max(a[k][k].abs()));
    let mut x = vec![0.0; cols];
    for k in (0..cols).rev() {
        let d = a[k][k];
        if d.abs() < IDENTITY * diag_max {
            return Err(Error::Singular {
                ratio: d.abs() / diag_max,
            });
        }
        let s: f64 = (k + 1..cols).map(|j| a[j][k] * x[j]).sum();
        x[k] = (b[k] - s) / d;
    }
    Ok(x)
}

/// V(K^I) from the coefficient of λ^I in Vol(Σ λ_s K_s) sampled on
/// λ ∈ {1, …, n+1}^r.
pub fn mixed_volume_interpolated(
    bodies: &[ConvexBody],
    multiplicities: &[usize],
) -> Result<MixedVolumeResult> {
    let n = check_query(bodies, multiplicities)?;
    let r = bodies.len();
    let exps = monomials(r, n);
    let grid: Vec<Vec<usize>> = (0..r)
        .map(|_| 1..=n + 1)
        .multi_cartesian_product()
        .collect();
    let mut columns = vec![Vec::with_capacity(grid.len()); exps.len()];
    let mut rhs = Vec::with_capacity(grid.len());
    for point in &grid {
        let lambda: Vec<f64> = point.iter().map(|&x| x as f64 / (n + 1) as f64).collect();
        for (col, e) in columns.iter_mut().zip(&exps) {
            col.push(
                lambda
                    .iter()
                    .zip(e)
                    .map(|(l, &k)| l.powi(k as i32))
                    .product(),
            );
        }
        let combo: Vec<(f64, ConvexBody)> = lambda
            .iter()
            .zip(bodies)
            .map(|(&l, b)| (l, b.clone()))
            .collect();
        rhs.push(volume(&combo)?);
    }
    let coeffs = least_squares(columns, rhs)?;
    let idx = exps
        .iter()
        .position(|e| e.as_slice() == multiplicities)
        .ok_or_else(|| Error::Arity("multiplicity vector not of total degree n".into()))?;
    let multinomial = factorial(n)
        / multiplicities
            .iter()
            .map(|&m| factorial(m))
            .product::<f64>();
    Ok(MixedVolumeResult {
        multiplicities: multiplicities.to_vec(),
        value: coeffs[idx] / multinomial,
        method: MixedVolumeMethod::Interpolation,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodComparison {
    pub polarization: f64,
    pub interpolation: f64,
    /// |a − b| / max(|a|, |b|, Vol(Σ K_s)/n!).
    pub relative_difference: f64,
    pub agree: bool,
}

pub fn compare_methods(
    bodies: &[ConvexBody],
    multiplicities: &[usize],
) -> Result<MethodComparison> {
    let a = mixed_volume(bodies, multiplicities)?.value;
    let b = mixed_volume_interpolated(bodies, multiplicities)?.value;
    let n = check_query(bodies, multiplicities)?;
    let sum: Vec<(f64, ConvexBody)> = bodies.iter().map(|b| (1.0, b.clone())).collect();
    let scale = a.abs().max(b.abs()).max(volume(&sum)? / factorial(n));
    let relative_difference = if scale > 0.0 {
        (a - b).abs() / scale
    } else {
        0.0
    };
    Ok(MethodComparison {
        polarization: a,
        interpolation: b,
        relative_difference,
        agree: relative_difference <= VERDICT,
    })
}

/// Outcome of an inequality `lhs ≥ rhs` checked to `−1e−9·scale`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityMargin {
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub scale: f64,
    pub holds: bool,
}

impl InequalityMargin {
    fn new(lhs: f64, rhs: f64, scale: f64) -> Self {
        let margin = lhs - rhs;
        Self {
            lhs,
            rhs,
            margin,
            scale,
            holds: margin >= -VERDICT * scale,
        }
    }

    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.margin / self.scale
        } else {
            self.margin
        }
    }
}

/// V(K₁,K₂,fill)² ≥ V(K₁,K₁,fill)·V(K₂,K₂,fill), `fill` of length n−2.
pub fn af_check(k1: &ConvexBody, k2: &ConvexBody, fill: &[ConvexBody]) -> Result<InequalityMargin> {
    let n = common_dim(&[k1, k2])?;
    if n < 2 || fill.len() != n - 2 {
        return Err(Error::Arity(format!(
            "Aleksandrov–Fenchel in ℝ^{n} needs {} filling bodies, found {}",
            n.saturating_sub(2),
            fill.len()
        )));
    }
    let query = |a: &ConvexBody, b: &ConvexBody| {
        let mut bodies = vec![a.clone(), b.clone()];
        bodies.extend(fill.iter().cloned());
        mixed_volume_generators(&bodies, &vec![1; n]).map(|r| r.value)
    };
    let v12 = query(k1, k2)?;
    let v11 = query(k1, k1)?;
    let v22 = query(k2, k2)?;
    Ok(InequalityMargin::new(v12 * v12, v11 * v22, v12 * v12))
}

/// Vol(A+B)^{1/n} ≥ Vol(A)^{1/n} + Vol(B)^{1/n}.
pub fn brunn_minkowski_check(a: &ConvexBody, b: &ConvexBody) -> Result<InequalityMargin> {
    let n = common_dim(&[a, b])? as f64;
    let root = |v: f64| v.max(0.0).powf(1.0 / n);
    let sum = root(volume(&[(1.0, a.clone()), (1.0, b.clone())])?);
    let va = root(volume(&[(1.0, a.clone())])?);
    let vb = root(volume(&[(1.0, b.clone())])?);
    Ok(InequalityMargin::new(sum, va + vb, sum))
}

fn intersection(n: usize, classes: &[&Form]) -> Result<f64> {
    let owned: Vec<Form> = classes.iter().map(|f| (*f).clone()).collect();
    Ok(wedge_all(n, &owned)?.top_coefficient()?.re)
}

/// [c₁c₂c₃⋯]² ≥ [c₁c₁c₃⋯]·[c₂c₂c₃⋯] with [⋯] the top coefficient of the
/// wedge product.
pub fn kt_inequality(classes: &[Form]) -> Result<InequalityMargin> {
    let n = classes.first().map(Form::n).unwrap_or(0);
    if n < 2 || classes.len() != n {
        return Err(Error::Arity(format!(
            "need n ≥ 2 classes on ℂⁿ, found {} on ℂ^{n}",
            classes.len()
        )));
    }
    for (index, c) in classes.iter().enumerate() {
        if c.n() != n {
            return Err(Error::AmbientMismatch {
                left: n,
                right: c.n(),
            });
        }
        let r = crate::kahler::is_strictly_positive(c)?;
        if !r.strict {
            return Err(Error::NotStrictlyPositive {
                index,
                min_eigenvalue: r.min_eigenvalue,
            });
        }
    }
    let rest: Vec<&Form> = classes[2..].iter().collect();
    let with = |a: &Form, b: &Form| {
        let mut v = vec![a, b];
        v.extend(rest.iter().copied());
        intersection(n, &v)
    };
    let d12 = with(&classes[0], &classes[1])?;
    let d11 = with(&classes[0], &classes[0])?;
    let d22 = with(&classes[1], &classes[1])?;
    Ok(InequalityMargin::new(d12 * d12, d11 * d22, d12 * d12))
}

/// per(A) for a square matrix, expanded over permutations.
pub fn permanent(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    (0..n)
        .permutations(n)
        .map(|p| {
            p.iter()
                .enumerate()
                .map(|(i, &j)| rows[i][j])
                .product::<f64>()
        })
        .sum()
}

/// The diagonal dictionary between (1,1)-classes and boxes: for diagonal
/// Hermitian matrices with rows `a_s`, [c₁⋯cₙ] = per(a) = n!·V(K₁,…,Kₙ)
/// where K_s is the box with widths a_s.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DictionaryReport {
    pub intersection: f64,
    pub mixed_volume: f64,
    pub permanent: f64,
    /// intersection / mixed_volume.
    pub ratio: f64,
    pub normalization: f64,
    pub relative_error: f64,
    pub holds: bool,
}

pub fn diagonal_dictionary(widths: &[Vec<f64>]) -> Result<DictionaryReport> {
    let n = widths.len();
    if n == 0 || widths.iter().any(|w| w.len() != n) {
        return Err(Error::Arity(
            "diagonal dictionary needs an n×n width table".into(),
        ));
    }
    let boxes: Vec<ConvexBody> = widths
        .iter()
        .map(|w| ConvexBody::Box { widths: w.clone() })
        .collect();
    let mixed_volume = mixed_volume(&boxes, &vec![1; n])?.value;
    let forms: Vec<Form> = widths
        .iter()
        .map(|w| form_from_hermitian(&HermitianMatrix::diagonal(w)))
        .collect::<Result<_>>()?;
    let intersection = intersection(n, &forms.iter().collect::<Vec<_>>())?;
    let normalization = factorial(n);
    let ratio = intersection / mixed_volume;
    let relative_error = (ratio - normalization).abs() / normalization;
    Ok(DictionaryReport {
        intersection,
        mixed_volume,
        permanent: permanent(widths),
        ratio,
        normalization,
        relative_error,
        holds: relative_error <= VERDICT,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn boxed(w: &[f64]) -> ConvexBody {
        ConvexBody::Box { widths: w.to_vec() }
    }

    #[test]
    fn volume_examples() {
        let sq = ConvexBody::unit_cube(2);
        assert_eq!(volume(&[(1.0, sq.clone())]).unwrap(), 1.0);
        assert_eq!(
            volume(&[(1.0, sq.clone()), (1.0, sq.clone())]).unwrap(),
            4.0
        );
        let z = ConvexBody::Zonotope {
            generators: vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]],
        };
        assert!((volume(&[(1.0, z)]).unwrap() - 3.0).abs() < 1e-15);
        let as_zono = ConvexBody::Zonotope {
            generators: sq.generators(),
        };
        assert_eq!(volume(&[(1.0, sq), (1.0, as_zono)]).unwrap(), 4.0);
    }

    #[test]
    fn mixed_volume_examples() {
        let sq = ConvexBody::unit_cube(2);
        let v = mixed_volume(&[sq.clone(), sq.clone()], &[1, 1]).unwrap();
        assert!((v.value - 1.0).abs() < 1e-15);
        let w = mixed_volume_interpolated(&[sq.clone(), sq], &[1, 1]).unwrap();
        assert!((w.value - 1.0).abs() < 1e-9);

        let s1 = ConvexBody::segment(vec![1.0, 0.0]);
        let s2 = ConvexBody::segment(vec![0.0, 1.0]);
        let v = mixed_volume(&[s1, s2], &[1, 1]).unwrap();
        assert!((v.value - 0.5).abs() < 1e-15);

        let g = [
            vec![1.0, 2.0, 0.5],
            vec![-0.3, 1.0, 0.0],
            vec![0.2, 0.1, 2.0],
        ];
        let segs: Vec<ConvexBody> = g.iter().map(|x| ConvexBody::segment(x.clone())).collect();
        let det = det_real(g.concat(), 3).abs();
        let v = mixed_volume(&segs, &[1, 1, 1]).unwrap();
        assert!((v.value - det / 6.0).abs() < 1e-12);
    }

    #[test]
    fn arity_errors() {
        let sq = ConvexBody::unit_cube(2);
        assert!(matches!(
            mixed_volume(&[sq.clone(), sq.clone()], &[1, 0]),
            Err(Error::Arity(_))
        ));
        assert!(af_check(&sq, &sq, &[sq.clone()]).is_err());
        assert!(volume(&[(-1.0, sq)]).is_err());
    }

    #[test]
    fn af_and_bm_examples() {
        let a = boxed(&[1.0, 3.0]);
        let b = boxed(&[2.0, 0.5]);
        let m = af_check(&a, &b, &[]).unwrap();
        let expected = (1.0f64 * 0.5 + 3.0 * 2.0).powi(2) / 4.0 - 3.0 * 1.0;
        assert!((m.margin - expected).abs() < 1e-12);
        assert!(m.holds);
        let eq = af_check(&a, &a.scaled(2.5), &[]).unwrap();
        assert!(eq.relative().abs() < 1e-12);

        let cube = ConvexBody::unit_cube(3);
        let bm = brunn_minkowski_check(&cube, &cube).unwrap();
        assert!(bm.margin.abs() < 1e-12);
        let hom = brunn_minkowski_check(&a, &a.scaled(3.0)).unwrap();
        assert!(hom.relative().abs() < 1e-12);
    }

    #[test]
    fn dictionary() {
        let widths = vec![
            vec![1.0, 2.0, 0.5],
            vec![0.3, 1.0, 1.5],
            vec![2.0, 0.7, 1.1],
        ];
        let r = diagonal_dictionary(&widths).unwrap();
        assert!(r.holds, "{r:?}");
        assert!((r.intersection - r.permanent).abs() < 1e-12 * r.permanent);
    }

    #[test]
    fn random_methods_agree() {
        let mut rng = seeded(5);
        for n in 2..=4 {
            for r in 1..=3 {
                let bodies: Vec<ConvexBody> =
                    (0..r).map(|_| ConvexBody::random(&mut rng, n)).collect();
                let mut mult = vec![0; r];
                for _ in 0..n {
                    mult[rng.gen_range(0..r)] += 1;
                }
                let c = compare_methods(&bodies, &mult).unwrap();
                assert!(c.agree, "{c:?}");
                let g = mixed_volume_generators(&bodies, &mult).unwrap().value;
                assert!((g - c.polarization).abs() <= 1e-9 * g.abs().max(1e-12));
            }
        }
    }
}
