//! The Bloch–Wigner dilogarithm and its functional equations.
//!
//! `D(z) = Im Li₂(z) + arg(1 − z)·log|z|`.
//!
//! Evaluation reduces `z` with `D(z) = −D(1/z)` (when `|z| > 1`) and
//! `D(z) = −D(1 − z)` (when `Re z > 1/2`), after which `|1 − z| ≥ 1/2`, and sums
//! the Bernoulli series
//! `Li₂(z) = u − u²/4 + Σ_{n≥1} B_{2n}·u^{2n+1}/(2n+1)!` with `u = −log(1 − z)`.

use std::sync::OnceLock;

use num_complex::Complex64;

use rand::Rng;

use crate::cross_ratios::{pi3, ConfigTuple, Pair, Pi4};
use crate::error::{Error, Result};
use crate::linalg::{c, CVector, ONE};
use crate::tolerances::TOL_GENERIC;

/// `B_{2n}/(2n+1)!` for `n = 1, …, 19`.
#[allow(clippy::excessive_precision)] // tabulated digits, rounded by the compiler
const BERNOULLI_OVER_FACTORIAL: [f64; 19] = [
    2.777_777_777_777_777_8e-2,
    -2.777_777_777_777_777_8e-4,
    4.724_111_866_969_009_8e-6,
    -9.185_773_074_661_951e-8,
    1.897_886_998_897_1e-9,
    -4.064_761_645_144_225_5e-11,
    8.921_691_020_456_452e-13,
    -1.993_929_586_072_107_6e-14,
    4.518_980_029_619_918e-16,
    -1.035_651_761_218_124_7e-17,
    2.395_218_621_026_186_7e-19,
    -5.581_785_874_325_009e-21,
    1.309_150_755_418_321_3e-22,
    -3.087_419_802_426_740_3e-24,
    7.315_975_652_702_203e-26,
    -1.740_845_657_234_000_7e-27,
    4.157_635_644_613_899_7e-29,
    -9.962_148_488_284_622e-31,
    2.394_034_424_896_165_3e-32,
];

/// The Bloch–Wigner dilogarithm, totalised by `D(0) = D(1) = 0` and `D = 0`
/// on non-finite input.
pub fn bloch_wigner(z: Complex64) -> f64 {
    if !z.is_finite() {
        return 0.0;
    }
    let mut sign = 1.0;
    let mut z = z;
    if z.norm_sqr() > 1.0 {
        z = ONE / z;
        sign = -sign;
        if !z.is_finite() {
            return 0.0;
        }
    }
    if z.re > 0.5 {
        z = ONE - z;
        sign = -sign;
    }
    if z.norm_sqr() == 0.0 {
        return 0.0;
    }
    sign * bloch_wigner_reduced(z)
}

/// `D` on `{|z| ≤ 1, Re z ≤ 1/2}`, where `|u| = |log(1 − z)| < 1.3`.
fn bloch_wigner_reduced(z: Complex64) -> f64 {
    let w = ONE - z;
    let u = -w.ln();
    let u2 = u * u;
    // Li₂ = u − u²/4 + Σ c_n u^{2n+1}
    let mut term = u;
    let mut series = c(0.0, 0.0);
    for coeff in BERNOULLI_OVER_FACTORIAL {
        term *= u2;
        series += term * coeff;
    }
    let li2 = u - u2 / 4.0 + series;
    li2.im + w.arg() * z.norm().ln()
}

/// `max_z D(z)`, found by grid search and pattern refinement (attained at
/// `e^{iπ/3}`); computed once and cached.
pub fn v_max() -> f64 {
    static V: OnceLock<f64> = OnceLock::new();
    *V.get_or_init(|| maximise_bloch_wigner().1)
}

/// The maximiser and maximum of `D` over the upper half-plane.
pub fn maximise_bloch_wigner() -> (Complex64, f64) {
    let mut best = (c(0.5, 1.0), f64::NEG_INFINITY);
    for i in 0..=200 {
        for j in 1..=200 {
            let z = c(-1.0 + 3.0 * f64::from(i) / 200.0, 2.0 * f64::from(j) / 200.0);
            let v = bloch_wigner(z);
            if v > best.1 {
                best = (z, v);
            }
        }
    }
    let mut step = 0.01;
    while step > 1e-13 {
        let mut moved = false;
        for d in [c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)] {
            let z = best.0 + d * step;
            let v = bloch_wigner(z);
            if v > best.1 {
                best = (z, v);
                moved = true;
            }
        }
        if !moved {
            step /= 2.0;
        }
    }
    best
}

fn guard(domain: &'static str, ok: bool, reason: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::OutsideDomain {
            domain,
            reason: reason.to_string(),
        })
    }
}

/// `f(a(1−b)/(b(1−a))) − f((1−b)/(1−a)) + f(b/a) − f(b) + f(a)`.
///
/// Needs `a, b ∉ {0, 1}` and `a ≠ b` (outside a relative guard band).
pub fn spence_abel_residual<F>(f: F, a: Complex64, b: Complex64) -> Result<f64>
where
    F: Fn(Complex64) -> f64,
{
    let band = TOL_GENERIC * (1.0 + a.norm().max(b.norm()));
    for (z, what) in [
        (a, "a = 0"),
        (b, "b = 0"),
        (ONE - a, "a = 1"),
        (ONE - b, "b = 1"),
        (a - b, "a = b"),
    ] {
        guard("spence-abel", z.is_finite() && z.norm() > band, what)?;
    }
    Ok(f(a * (ONE - b) / (b * (ONE - a))) - f((ONE - b) / (ONE - a)) + f(b / a) - f(b) + f(a))
}

/// A function `ℂ² → ℝ` with a declared bound.
pub struct BoundedFunction2<F> {
    f: F,
    bound: f64,
}

impl<F: Fn(Pair) -> f64> BoundedFunction2<F> {
    pub fn new(f: F, bound: f64) -> Self {
        BoundedFunction2 { f, bound }
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn eval(&self, z: Pair) -> f64 {
        (self.f)(z)
    }
}

/// The five-term operator on `f : ℂ² → ℝ`:
/// `f(εa₁c₁/(a₂b₁), c₁/a₂) − f(c₁/b₁, εb₂c₁/(a₂b₁)) + f(c₁, εa₁b₂c₁/(a₂b₁))
///  − f(b₁, b₂) + f(a₁, a₂)`.
pub fn d3_infinity_residual<F>(f: &BoundedFunction2<F>, x: &Pi4, epsilon: i8) -> Result<f64>
where
    F: Fn(Pair) -> f64,
{
    let [a1, a2, b1, b2, c1] = x.as_array();
    for (z, what) in [(a1, "a1"), (a2, "a2"), (b1, "b1"), (b2, "b2"), (c1, "c1")] {
        guard("D3", z.is_finite() && z.norm() > 0.0, &format!("{what} = 0"))?;
    }
    let eps = f64::from(epsilon);
    let den = a2 * b1;
    Ok(f.eval((a1 * c1 * eps / den, c1 / a2)) - f.eval((c1 / b1, b2 * c1 * eps / den))
        + f.eval((c1, a1 * b2 * c1 * eps / den))
        - f.eval((b1, b2))
        + f.eval((a1, a2)))
}

/// `Σᵢ (−1)ⁱ f(π₃(∂ᵢ t))` over the five faces of a 5-tuple; every face must
/// be double-brace generic.
pub fn face_sum_pi3<F>(f: &BoundedFunction2<F>, t: &ConfigTuple) -> Result<f64>
where
    F: Fn(Pair) -> f64,
{
    if t.len() != 5 {
        return Err(Error::InvalidArgument(format!(
            "expected a 5-tuple, got {} points",
            t.len()
        )));
    }
    let mut acc = 0.0;
    for i in 0..5 {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * f.eval(pi3(&t.face(i))?);
    }
    Ok(acc)
}

/// A bounded smooth test function
/// `f(z₁, z₂) = Σₖ Aₖ cos(⟨ξₖ, (w₁, w₂)⟩ + φₖ)` with `w = z/(1 + |z|)`, so
/// that relative errors in the arguments stay small in the value.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigTestFunction {
    terms: Vec<(f64, [f64; 4], f64)>,
}

impl TrigTestFunction {
    /// Three terms with amplitudes in `[−1, 1]`, frequencies in `[−3, 3]`
    /// and phases in `[0, 2π)`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let terms = (0..3)
            .map(|_| {
                let amp = rng.random_range(-1.0..1.0);
                let freq = [(); 4].map(|_| rng.random_range(-3.0..3.0));
                let phase = rng.random_range(0.0..std::f64::consts::TAU);
                (amp, freq, phase)
            })
            .collect();
        TrigTestFunction { terms }
    }

    pub fn eval(&self, z: Pair) -> f64 {
        let squash = |x: Complex64| x / (1.0 + x.norm());
        let (w1, w2) = (squash(z.0), squash(z.1));
        let coords = [w1.re, w1.im, w2.re, w2.im];
        self.terms
            .iter()
            .map(|(amp, freq, phase)| {
                let arg: f64 = freq.iter().zip(&coords).map(|(a, b)| a * b).sum();
                amp * (arg + phase).cos()
            })
            .sum()
    }

    pub fn bounded(&self) -> BoundedFunction2<impl Fn(Pair) -> f64 + '_> {
        let bound = self.terms.iter().map(|t| t.0.abs()).sum();
        BoundedFunction2::new(move |z| self.eval(z), bound)
    }
}

/// Largest deviation from the symmetries
/// `D(z) = D(1 − 1/z) = D(1/(1 − z)) = −D(1/z) = −D(1 − z) = −D(z/(z − 1))`
/// and `D(z̄) = −D(z)`.
pub fn symmetry_residual(z: Complex64) -> f64 {
    let d = bloch_wigner(z);
    [
        bloch_wigner(ONE - ONE / z) - d,
        bloch_wigner(ONE / (ONE - z)) - d,
        bloch_wigner(ONE / z) + d,
        bloch_wigner(ONE - z) + d,
        bloch_wigner(z / (z - ONE)) + d,
        bloch_wigner(z.conj()) + d,
    ]
    .iter()
    .fold(0.0, |m, r| m.max(r.abs()))
}

fn det2(v: &CVector, w: &CVector) -> Complex64 {
    v[0] * w[1] - v[1] * w[0]
}

/// `Vol(p₀, …, p₃) = D(CR₀)` for four points of `ℙ¹(ℂ)` given by vectors in ℂ²;
/// zero when two points coincide.
pub fn vol_p1(points: &[CVector; 4]) -> f64 {
    let d = |i: usize, j: usize| det2(&points[i], &points[j]);
    let num = d(0, 2) * d(1, 3);
    let den = d(0, 3) * d(1, 2);
    if den.norm() == 0.0 || num.norm() == 0.0 {
        return 0.0;
    }
    bloch_wigner(num / den)
}

/// `[1 : z]` as a vector of ℂ²; `[0 : 1]` is the point at infinity.
pub fn p1_point(z: Complex64) -> CVector {
    CVector::from_vec(vec![ONE, z])
}

pub fn p1_infinity() -> CVector {
    CVector::from_vec(vec![c(0.0, 0.0), ONE])
}
