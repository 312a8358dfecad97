//! Closed-form norm constants and seeded Monte Carlo sup-norm estimation.
//!
//! The closed forms are the Dynkin indices `𝓘(𝓕_r)` of the classical families,
//! `‖bₙ‖ = n(n²−1)/6 · v` with `v` the maximum of the Bloch–Wigner
//! dilogarithm, and the normalisation factors relating `b_{𝓕_r}` to the
//! class of the ambient `SLₙ`. Estimates of `sup |c|` for a cocycle `c` are
//! seeded per trial, merged by maximum and then polished by coordinate
//! descent.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::batch::{self, Execution};
use crate::cross_ratios::{cross_ratios4, random_tuple};
use crate::dilog::{bloch_wigner, v_max};
use crate::error::{Error, Result};
use crate::flags::{self, AffineFlag};
use crate::forms::FormedSpace;
use crate::linalg::CVector;
use crate::rng::{complex_normal, stream};

/// A classical family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// `SL_{r+1}(ℂ)`
    A,
    /// `SO_{2r+1}(ℂ)`
    B,
    /// `Sp_{2r}(ℂ)`
    C,
    /// `SO_{2r}(ℂ)`
    D,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::A, Family::B, Family::C, Family::D];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
        };
        f.write_str(s)
    }
}

/// A family together with its rank, e.g. `C_2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyTag {
    family: Family,
    r: u64,
}

impl FamilyTag {
    pub fn new(family: Family, r: u64) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidArgument("family rank must be at least 1".into()));
        }
        Ok(FamilyTag { family, r })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> u64 {
        self.r
    }

    /// `D₁` and `D₂` are not simple (`SO₂` is a torus, `SO₄` is locally
    /// `SL₂ × SL₂`) and fall outside the general statements.
    pub fn is_exceptional(&self) -> bool {
        self.family == Family::D && self.r <= 2
    }

    /// `n` for the standard representation in `SLₙ`.
    pub fn ambient_dimension(&self) -> u64 {
        match self.family {
            Family::A => self.r + 1,
            Family::B => 2 * self.r + 1,
            Family::C | Family::D => 2 * self.r,
        }
    }

    /// `b_{𝓕_r} = factor · res(b_n)`: `1` for `A` and `C`, `½` for `B` and `D`.
    pub fn normalization_factor(&self) -> Ratio {
        match self.family {
            Family::A | Family::C => Ratio::new(1, 1),
            Family::B | Family::D => Ratio::new(1, 2),
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.r)
    }
}

impl FromStr for FamilyTag {
    type Err = Error;

    /// Parses tags such as `A3`, `c2` or `D_4`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            _ => return Err(Error::InvalidArgument(format!("unknown family in {s:?}"))),
        };
        let rest = chars.as_str().trim_start_matches('_');
        let r = rest
            .parse::<u64>()
            .map_err(|_| Error::InvalidArgument(format!("bad rank in {s:?}")))?;
        FamilyTag::new(family, r)
    }
}

/// A non-negative rational number `num/den` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// `𝓘(𝓕_r)`: `A: r(r+1)(r+2)/6`, `B: r(r+1)(2r+1)/3`, `C: r(4r²−1)/3`,
/// `D: r(r−1)(2r−1)/3`, in exact integer arithmetic.
pub fn dynkin_index(tag: FamilyTag) -> u64 {
    let r = tag.r;
    match tag.family {
        Family::A => r * (r + 1) * (r + 2) / 6,
        Family::B => r * (r + 1) * (2 * r + 1) / 3,
        Family::C => r * (4 * r * r - 1) / 3,
        Family::D => r * (r - 1) * (2 * r - 1) / 3,
    }
}

/// `n(n²−1)/6`.
pub fn bn_coefficient(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n = {n}: needs n >= 2")));
    }
    Ok(n * (n * n - 1) / 6)
}

/// `‖bₙ‖ = n(n²−1)/6 · v`.
pub fn gromov_norm_bn(n: u64) -> Result<f64> {
    Ok(bn_coefficient(n)? as f64 * v_max())
}

/// Whether a norm value is established or only conjectured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormStatus {
    Proven,
    Conjecture,
}

/// A labelled open statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Conjecture {
    pub label: &'static str,
    pub statement: &'static str,
}

/// The expected norm for the `D` family beyond rank 2. It is open and is
/// reported with its label, never used as a check.
pub const D_FAMILY_CONJECTURE: Conjecture = Conjecture {
    label: "CONJECTURE",
    statement: "for r >= 3 the Gromov norm of b_{D_r} equals r(r-1)(2r-1)/3 * v",
};

/// `‖b_{𝓕_r}‖` with its status.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyNorm {
    pub tag: FamilyTag,
    /// Coefficient of `v`.
    pub coefficient: u64,
    pub value: f64,
    pub status: NormStatus,
}

/// `‖b_{𝓕_r}‖ = 𝓘(𝓕_r) · v`. Proven for `A`, `B`, `C` and for `D₂`
/// (where it is `2v`); a [`D_FAMILY_CONJECTURE`] otherwise.
pub fn family_norm(tag: FamilyTag) -> FamilyNorm {
    let coefficient = dynkin_index(tag);
    let status = match tag.family {
        Family::D if tag.r != 2 => NormStatus::Conjecture,
        _ => NormStatus::Proven,
    };
    FamilyNorm {
        tag,
        coefficient,
        value: coefficient as f64 * v_max(),
        status,
    }
}

/// `factor · ‖bₙ‖` for the ambient `n`: the norm of `b_{𝓕_r}` when the
/// restriction is isometric (`A`, `B`, `C`), an upper bound for `D`.
pub fn normalized_restriction_norm(tag: FamilyTag) -> f64 {
    let n = tag.ambient_dimension();
    let factor = tag.normalization_factor().to_f64();
    if n < 2 {
        return 0.0;
    }
    factor * bn_coefficient(n).expect("n >= 2") as f64 * v_max()
}

/// The operator norm of restriction from `SL₄` to `SO₄` in degree three:
/// `‖B₄ ∘ ρ^{×4}‖ / ‖b₄‖ = 4v / 10v = 2/5`.
pub fn operator_norm_res2() -> Ratio {
    let restricted = 4; // ‖B₄ ∘ ρ^{×4}‖ = 4v
    let ambient = bn_coefficient(4).expect("n = 4"); // ‖b₄‖ = 10v
    Ratio::new(restricted, ambient)
}

/// Coordinate-descent polish applied to the best Monte Carlo sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Refinement {
    pub iterations: usize,
    pub initial_step: f64,
}

impl Default for Refinement {
    fn default() -> Self {
        Refinement {
            iterations: 20,
            initial_step: 0.05,
        }
    }
}

/// Result of [`estimate_sup`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupEstimate {
    /// `max(raw, refined)`; the refined value is itself an evaluation of the
    /// cocycle, so this is still a lower bound for the supremum.
    pub estimate: f64,
    pub argmax: Vec<f64>,
    /// Maximum of `|c|` over the seeded samples alone; monotone in `trials`.
    pub raw: f64,
    pub raw_argmax: Vec<f64>,
    /// Trial that produced `raw`.
    pub raw_index: u64,
    pub trials: u64,
}

#[derive(Debug, Clone)]
enum Best {
    Empty,
    Hit { value: f64, index: u64, params: Vec<f64> },
    Failed { index: u64, error: Error },
}

/// Associative and commutative: a failure beats any hit (lowest index
/// first); hits compare by value, then by lower index.
fn merge(a: Best, b: Best) -> Best {
    match (a, b) {
        (Best::Empty, x) | (x, Best::Empty) => x,
        (Best::Failed { index: i, error: e }, Best::Failed { index: j, error: f }) => {
            if i <= j {
                Best::Failed { index: i, error: e }
            } else {
                Best::Failed { index: j, error: f }
            }
        }
        (f @ Best::Failed { .. }, _) | (_, f @ Best::Failed { .. }) => f,
        (
            Best::Hit { value: v, index: i, params: p },
            Best::Hit { value: w, index: j, params: q },
        ) => {
            if v > w || (v == w && i <= j) {
                Best::Hit { value: v, index: i, params: p }
            } else {
                Best::Hit { value: w, index: j, params: q }
            }
        }
    }
}

/// Monte Carlo estimate of `sup |cocycle|` over real parameter vectors.
///
/// Trial `i` draws its parameters from `stream(seed, label, i)`, so the
/// result does not depend on how trials are scheduled. The best sample is
/// refined by coordinate descent: each iteration walks every coordinate in
/// both directions while `|cocycle|` increases, then halves the step.
pub fn estimate_sup<C, S>(
    cocycle: C,
    sampler: S,
    trials: u64,
    seed: u64,
    label: &str,
    exec: Execution,
    refinement: Option<Refinement>,
) -> Result<SupEstimate>
where
    C: Fn(&[f64]) -> Result<f64> + Sync + Send,
    S: Fn(&mut ChaCha8Rng) -> Result<Vec<f64>> + Sync + Send,
{
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let best = batch::map_reduce(
        exec,
        trials,
        Best::Empty,
        |index| {
            let mut rng = stream(seed, label, index);
            let outcome = sampler(&mut rng).and_then(|p| {
                let v = cocycle(&p)?;
                if v.is_finite() {
                    Ok((v.abs(), p))
                } else {
                    Err(Error::Internal(format!("non-finite cocycle value {v}")))
                }
            });
            match outcome {
                Ok((value, params)) => Best::Hit { value, index, params },
                Err(error) => Best::Failed { index, error },
            }
        },
        merge,
    );
    let (raw, raw_index, raw_argmax) = match best {
        Best::Hit { value, index, params } => (value, index, params),
        Best::Failed { index, error } => {
            return Err(Error::Trial {
                index,
                source: Box::new(error),
            })
        }
        Best::Empty => unreachable!("trials >= 1"),
    };
    let (argmax, estimate) = match refinement {
        Some(r) => coordinate_descent(&cocycle, raw_argmax.clone(), raw, r),
        None => (raw_argmax.clone(), raw),
    };
    Ok(SupEstimate {
        estimate,
        argmax,
        raw,
        raw_argmax,
        raw_index,
        trials,
    })
}

fn coordinate_descent<C>(cocycle: &C, mut x: Vec<f64>, mut best: f64, r: Refinement) -> (Vec<f64>, f64)
where
    C: Fn(&[f64]) -> Result<f64>,
{
    // points where the cocycle is undefined simply do not count as improvements
    let score = |x: &[f64]| match cocycle(x) {
        Ok(v) if v.is_finite() => v.abs(),
        _ => f64::NEG_INFINITY,
    };
    let mut step = r.initial_step;
    for _ in 0..r.iterations {
        for k in 0..x.len() {
            for dir in [1.0, -1.0] {
                // bounded walk so a flat direction cannot loop for long
                for _ in 0..64 {
                    let old = x[k];
                    x[k] = old + dir * step;
                    let v = score(&x);
                    if v > best {
                        best = v;
                    } else {
                        x[k] = old;
                        break;
                    }
                }
            }
        }
        step /= 2.0;
    }
    (x, best)
}

/// The cocycles with built-in samplers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NamedCocycle {
    /// `Vol` on `ℙ¹`, evaluated at the cross-ratio `CR₀` of a random
    /// 4-tuple in the symplectic plane; parameters `(Re z, Im z)`.
    VolP1,
    /// `B₄ ∘ ρ^{×4}` at the boundary points `(∞, 0, 1, (a, b))`;
    /// parameters `(Re a, Im a, Re b, Im b)`.
    B4So4,
    /// `Bₙ` on four random flags in `ℂⁿ`; parameters are the real and
    /// imaginary parts of all `4n²` flag coordinates.
    Bn(u64),
}

impl NamedCocycle {
    pub fn name(&self) -> String {
        match self {
            NamedCocycle::VolP1 => "vol-p1".into(),
            NamedCocycle::B4So4 => "b4-so4".into(),
            NamedCocycle::Bn(n) => format!("b-{n}"),
        }
    }

    /// Closed-form supremum: `v`, `4v` and `n(n²−1)/6 · v`.
    pub fn target(&self) -> Result<f64> {
        match *self {
            NamedCocycle::VolP1 => Ok(v_max()),
            NamedCocycle::B4So4 => Ok(4.0 * v_max()),
            NamedCocycle::Bn(n) => gromov_norm_bn(n),
        }
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
        match *self {
            NamedCocycle::VolP1 => {
                let plane = FormedSpace::new(-1, 0, 1)?;
                let t = random_tuple(&plane, 4, rng)?;
                let z = cross_ratios4(&t)?.cr0;
                Ok(vec![z.re, z.im])
            }
            NamedCocycle::B4So4 => {
                let (a, b) = (complex_normal(rng), complex_normal(rng));
                Ok(vec![a.re, a.im, b.re, b.im])
            }
            NamedCocycle::Bn(n) => {
                check_bn(n)?;
                let n = n as usize;
                let mut out = Vec::with_capacity(8 * n * n);
                for _ in 0..4 {
                    for v in AffineFlag::random(n, rng).vectors() {
                        for z in v.iter() {
                            out.extend([z.re, z.im]);
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    pub fn evaluate(&self, p: &[f64]) -> Result<f64> {
        let cz = |k: usize| Complex64::new(p[2 * k], p[2 * k + 1]);
        let expect = |len: usize| {
            if p.len() == len {
                Ok(())
            } else {
                Err(Error::DimensionMismatch {
                    expected: len,
                    got: p.len(),
                })
            }
        };
        match *self {
            NamedCocycle::VolP1 => {
                expect(2)?;
                Ok(bloch_wigner(cz(0)))
            }
            NamedCocycle::B4So4 => {
                expect(4)?;
                flags::b4_on_boundary(&flags::standard_lines_so4(cz(0), cz(1)))
            }
            NamedCocycle::Bn(n) => {
                check_bn(n)?;
                let n = n as usize;
                expect(8 * n * n)?;
                let fl = (0..4)
                    .map(|i| {
                        let vecs = (0..n)
                            .map(|j| CVector::from_fn(n, |k, _| cz(i * n * n + j * n + k)))
                            .collect();
                        AffineFlag::new(vecs)
                    })
                    .collect::<Result<Vec<_>>>()?;
                flags::b_n(&fl.try_into().expect("four flags"))
            }
        }
    }

    /// [`estimate_sup`] with this cocycle's sampler and the default refinement.
    pub fn estimate(&self, trials: u64, seed: u64, exec: Execution) -> Result<SupEstimate> {
        estimate_sup(
            |p| self.evaluate(p),
            |rng| self.sample(rng),
            trials,
            seed,
            &self.name(),
            exec,
            Some(Refinement::default()),
        )
    }
}

impl FromStr for NamedCocycle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vol-p1" => Ok(NamedCocycle::VolP1),
            "b4-so4" => Ok(NamedCocycle::B4So4),
            _ => match s.strip_prefix("b-").map(str::parse::<u64>) {
                Some(Ok(n)) if n >= 2 => Ok(NamedCocycle::Bn(n)),
                _ => Err(Error::InvalidArgument(format!(
                    "unknown cocycle {s:?} (expected vol-p1, b4-so4 or b-<n> with n >= 2)"
                ))),
            },
        }
    }
}

fn check_bn(n: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n = {n}: needs n >= 2")));
    }
    Ok(())
}

/// `estimate_sup(B₄ ∘ ρ^{×4}) / ‖b₄‖`, the sampled counterpart of
/// [`operator_norm_res2`].
pub fn sampled_operator_norm_res2(trials: u64, seed: u64, exec: Execution) -> Result<f64> {
    Ok(NamedCocycle::B4So4.estimate(trials, seed, exec)?.estimate / gromov_norm_bn(4)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tag(f: Family, r: u64) -> FamilyTag {
        FamilyTag::new(f, r).unwrap()
    }

    #[test]
    fn dynkin_table() {
        let a = [1, 4, 10, 20, 35, 56, 84, 120, 165, 220];
        let b = [2, 10, 28, 60, 110, 182, 280, 408, 570, 770];
        let c = [1, 10, 35, 84, 165, 286, 455, 680, 969, 1330];
        let d = [0, 2, 10, 28, 60, 110, 182, 280, 408, 570];
        for r in 1..=10u64 {
            let k = (r - 1) as usize;
            assert_eq!(dynkin_index(tag(Family::A, r)), a[k]);
            assert_eq!(dynkin_index(tag(Family::B, r)), b[k]);
            assert_eq!(dynkin_index(tag(Family::C, r)), c[k]);
            assert_eq!(dynkin_index(tag(Family::D, r)), d[k]);
        }
        assert_eq!(dynkin_index(tag(Family::C, 2)), 10);
        assert!(FamilyTag::new(Family::A, 0).is_err());
        assert!(tag(Family::D, 2).is_exceptional());
        assert!(!tag(Family::D, 3).is_exceptional());
    }

    #[test]
    fn tags_parse() {
        assert_eq!("C2".parse::<FamilyTag>().unwrap(), tag(Family::C, 2));
        assert_eq!("d_4".parse::<FamilyTag>().unwrap(), tag(Family::D, 4));
        assert!("E6".parse::<FamilyTag>().is_err());
        assert!("A0".parse::<FamilyTag>().is_err());
        assert_eq!(tag(Family::B, 3).to_string(), "B3");
    }

    #[test]
    fn bn_norms_and_isometric_restrictions() {
        let v = v_max();
        assert!((gromov_norm_bn(2).unwrap() - v).abs() < 1e-15);
        assert!((gromov_norm_bn(4).unwrap() - 10.0 * v).abs() < 1e-14);
        assert!(gromov_norm_bn(1).is_err());
        for n in 2..=8u64 {
            let ratio = gromov_norm_bn(n).unwrap() / gromov_norm_bn(2).unwrap();
            assert_eq!(ratio, bn_coefficient(n).unwrap() as f64);
        }
        for r in 1..=10 {
            for f in [Family::A, Family::B, Family::C] {
                let t = tag(f, r);
                let fam = family_norm(t);
                assert_eq!(fam.status, NormStatus::Proven);
                assert!((fam.value - normalized_restriction_norm(t)).abs() <= 1e-12 * fam.value);
            }
        }
        let d2 = family_norm(tag(Family::D, 2));
        assert_eq!(d2.status, NormStatus::Proven);
        assert_eq!(d2.coefficient, 2);
        assert!((d2.value - 0.5 * 4.0 * v).abs() < 1e-14);
        assert_eq!(family_norm(tag(Family::D, 3)).status, NormStatus::Conjecture);
        assert_eq!(D_FAMILY_CONJECTURE.label, "CONJECTURE");
        // the ½ normalisation of D₂ turns the 2/5 operator norm into 2v
        let bound = normalized_restriction_norm(tag(Family::D, 2));
        assert!((d2.value / bound - operator_norm_res2().to_f64()).abs() < 1e-15);
    }

    #[test]
    fn operator_norm_is_two_fifths() {
        assert_eq!(operator_norm_res2(), Ratio::new(2, 5));
        assert_eq!(Ratio::new(4, 10).to_string(), "2/5");
    }

    #[test]
    fn zero_cocycle_and_errors() {
        let est = estimate_sup(
            |_| Ok(0.0),
            |_| Ok(vec![0.0]),
            10,
            1,
            "zero",
            Execution::Parallel,
            Some(Refinement::default()),
        )
        .unwrap();
        assert_eq!(est.estimate, 0.0);
        assert_eq!(est.raw_index, 0);
        let err = estimate_sup(
            |p| if p[0] > 5.0 { Err(Error::Internal("boom".into())) } else { Ok(p[0]) },
            |rng| Ok(vec![(crate::rng::complex_normal(rng).re * 10.0).abs()]),
            200,
            1,
            "errors",
            Execution::Parallel,
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Trial { .. }));
        assert!(estimate_sup(|_| Ok(1.0), |_| Ok(vec![]), 0, 1, "none", Execution::Sequential, None).is_err());
    }

    #[test]
    fn estimates_are_deterministic_and_monotone() {
        let c = NamedCocycle::VolP1;
        let mut last = 0.0;
        for trials in [1, 10, 100, 1000] {
            let seq = estimate_sup(
                |p| c.evaluate(p),
                |rng| c.sample(rng),
                trials,
                9,
                "mono",
                Execution::Sequential,
                None,
            )
            .unwrap();
            let par = estimate_sup(
                |p| c.evaluate(p),
                |rng| c.sample(rng),
                trials,
                9,
                "mono",
                Execution::Parallel,
                None,
            )
            .unwrap();
            assert_eq!(seq, par);
            assert!(seq.raw >= last);
            last = seq.raw;
        }
    }

    #[test]
    fn vol_p1_sup_is_v() {
        let est = NamedCocycle::VolP1.estimate(2000, 3, Execution::Parallel).unwrap();
        assert!(est.estimate <= v_max() + 1e-12);
        assert!((est.estimate - v_max()).abs() < 5e-3, "{est:?}");
    }

    #[test]
    fn b4_so4_sup_is_four_v() {
        let est = NamedCocycle::B4So4.estimate(300, 5, Execution::Parallel).unwrap();
        let target = 4.0 * v_max();
        assert!(est.estimate <= target + 1e-6);
        assert!(est.estimate >= target - 0.05, "{est:?}");
    }

    #[test]
    fn named_cocycles_parse() {
        assert_eq!("vol-p1".parse::<NamedCocycle>().unwrap(), NamedCocycle::VolP1);
        assert_eq!("b-3".parse::<NamedCocycle>().unwrap(), NamedCocycle::Bn(3));
        assert!("b-1".parse::<NamedCocycle>().is_err());
        assert!("foo".parse::<NamedCocycle>().is_err());
    }
}
