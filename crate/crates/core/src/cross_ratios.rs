//! Isotropic configurations and their ω-cross-ratios.
//!
//! For a 4-tuple `(p0, p1, p2, p3)` of isotropic lines with representatives
//! `v_i`,
//!
//! * `CR₀ = ω(v0,v2)ω(v1,v3) / (ω(v0,v3)ω(v1,v2))`,
//! * `CR₁ = CR₀(p1,p2,p0,p3)⁻¹`,
//! * `CR₂ = CR₀(p2,p0,p1,p3)`.
//!
//! For 5-tuples the families `α_j, β_j, γ_j` are `CR_j` of the faces dropping
//! `p4`, `p3` and `p2` respectively.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{FormedSpace, GroupElement};
use crate::linalg::{self, CMatrix, CVector, ONE};
use crate::tolerances::TOL_GENERIC;

pub use crate::forms::ProjPoint;

/// An ordered tuple of isotropic lines with cached pairings.
#[derive(Debug, Clone)]
pub struct ConfigTuple {
    space: FormedSpace,
    points: Vec<ProjPoint>,
    pairings: CMatrix,
}

impl ConfigTuple {
    /// Validates dimension and isotropy of every point.
    pub fn new(space: &FormedSpace, points: Vec<ProjPoint>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            let v = p.vector();
            let q = space.q(v)?;
            if q.norm() > TOL_GENERIC * v.norm_squared() {
                return Err(Error::InvalidArgument(format!(
                    "point p{i} is not isotropic (|q| = {:.3e})",
                    q.norm()
                )));
            }
        }
        let k = points.len();
        let pairings = CMatrix::from_fn(k, k, |i, j| {
            space.omega_raw(points[i].vector(), points[j].vector())
        });
        Ok(ConfigTuple {
            space: space.clone(),
            points,
            pairings,
        })
    }

    pub fn from_vectors(space: &FormedSpace, vectors: Vec<CVector>) -> Result<Self> {
        let points = vectors
            .into_iter()
            .map(ProjPoint::new)
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, points)
    }

    pub fn space(&self) -> &FormedSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn vector(&self, i: usize) -> &CVector {
        self.points[i].vector()
    }

    /// `ω(v_i, v_j)` for the stored representatives.
    pub fn pairing(&self, i: usize, j: usize) -> Complex64 {
        self.pairings[(i, j)]
    }

    /// Whether `ω(v_i, v_j)` is non-zero beyond the genericity guard.
    fn pairing_nonzero(&self, i: usize, j: usize) -> bool {
        let scale = self.vector(i).norm() * self.vector(j).norm();
        self.pairing(i, j).norm() > TOL_GENERIC * scale
    }

    /// The tuple `(p_{idx[0]}, p_{idx[1]}, …)`.
    pub fn select(&self, idx: &[usize]) -> ConfigTuple {
        let points: Vec<ProjPoint> = idx.iter().map(|&i| self.points[i].clone()).collect();
        let pairings = CMatrix::from_fn(idx.len(), idx.len(), |a, b| {
            self.pairings[(idx[a], idx[b])]
        });
        ConfigTuple {
            space: self.space.clone(),
            points,
            pairings,
        }
    }

    /// The face `∂_i`: the tuple with `p_i` removed.
    pub fn face(&self, i: usize) -> ConfigTuple {
        let idx: Vec<usize> = (0..self.len()).filter(|&k| k != i).collect();
        self.select(&idx)
    }

    /// `g · t`.
    pub fn transform(&self, g: &GroupElement) -> Result<ConfigTuple> {
        let points = self
            .points
            .iter()
            .map(|p| g.apply_point(p))
            .collect::<Result<Vec<_>>>()?;
        ConfigTuple::new(&self.space, points)
    }

    /// Maximum chordal distance between corresponding points.
    pub fn distance(&self, other: &ConfigTuple) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        self.points
            .iter()
            .zip(&other.points)
            .map(|(a, b)| a.chordal_distance(b))
            .fold(0.0, f64::max)
    }

    /// Fails with the first vanishing pairing among `idx`, if any.
    fn require_pairwise(&self, idx: &[usize]) -> Result<()> {
        for (a, &i) in idx.iter().enumerate() {
            for &j in &idx[a + 1..] {
                if !self.pairing_nonzero(i, j) {
                    return Err(Error::not_generic(format!("omega(p{i}, p{j}) = 0")));
                }
            }
        }
        Ok(())
    }

    /// `CR₀(p_a, p_b, p_c, p_d)` from cached pairings.
    fn cr0_at(&self, [a, b, c, d]: [usize; 4]) -> Complex64 {
        self.pairing(a, c) * self.pairing(b, d) / (self.pairing(a, d) * self.pairing(b, c))
    }

    fn cr_triple_at(&self, [a, b, c, d]: [usize; 4]) -> CrossRatios {
        CrossRatios {
            cr0: self.cr0_at([a, b, c, d]),
            cr1: ONE / self.cr0_at([b, c, a, d]),
            cr2: self.cr0_at([c, a, b, d]),
        }
    }
}

/// `(CR₀, CR₁, CR₂)` of a 4-tuple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossRatios {
    pub cr0: Complex64,
    pub cr1: Complex64,
    pub cr2: Complex64,
}

impl CrossRatios {
    pub fn get(&self, j: usize) -> Complex64 {
        match j {
            0 => self.cr0,
            1 => self.cr1,
            2 => self.cr2,
            _ => panic!("cross-ratio index {j} out of range"),
        }
    }

    /// `CR₀·CR₁⁻¹·CR₂`, which equals ε.
    pub fn product(&self) -> Complex64 {
        self.cr0 / self.cr1 * self.cr2
    }
}

/// The families `α_j, β_j, γ_j` of a 5-tuple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossRatios5 {
    pub alpha: CrossRatios,
    pub beta: CrossRatios,
    pub gamma: CrossRatios,
}

/// `(CR₀, CR₁, CR₂)` of a 4-tuple; needs all pairings non-zero.
pub fn cross_ratios4(t: &ConfigTuple) -> Result<CrossRatios> {
    check_len(t, 4)?;
    t.require_pairwise(&[0, 1, 2, 3])?;
    Ok(t.cr_triple_at([0, 1, 2, 3]))
}

/// `α = CR ∘ ∂₄`, `β = CR ∘ ∂₃`, `γ = CR ∘ ∂₂`; needs all pairings non-zero.
pub fn cross_ratios5(t: &ConfigTuple) -> Result<CrossRatios5> {
    check_len(t, 5)?;
    t.require_pairwise(&[0, 1, 2, 3, 4])?;
    Ok(CrossRatios5 {
        alpha: t.cr_triple_at([0, 1, 2, 3]),
        beta: t.cr_triple_at([0, 1, 2, 4]),
        gamma: t.cr_triple_at([0, 1, 3, 4]),
    })
}

fn check_len(t: &ConfigTuple, k: usize) -> Result<()> {
    if t.len() != k {
        return Err(Error::InvalidArgument(format!(
            "expected a {k}-tuple, got {} points",
            t.len()
        )));
    }
    Ok(())
}

/// A point `(z₁, z₂) ∈ ℂ²`.
pub type Pair = (Complex64, Complex64);

/// Sign label `η ∈ {+, −}` of `φ_η` and `ψ_η`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Eta {
    Plus,
    Minus,
}

impl Eta {
    pub fn value(self) -> f64 {
        match self {
            Eta::Plus => 1.0,
            Eta::Minus => -1.0,
        }
    }
}

fn eps_f(epsilon: i8) -> f64 {
    f64::from(epsilon)
}

/// `Γ(z₁, z₂) = 1 − z₁ − z₂`.
pub fn gamma_fn(z: Pair) -> Complex64 {
    ONE - z.0 - z.1
}

/// `Δ(z₁, z₂) = Γ² − 2(1+ε)·z₁z₂`.
pub fn delta_fn(epsilon: i8, z: Pair) -> Complex64 {
    let g = gamma_fn(z);
    g * g - z.0 * z.1 * (2.0 * (1.0 + eps_f(epsilon)))
}

/// `Δ^{1/2}`: `Γ` itself when ε = −1, otherwise the principal square root of `Δ`.
pub fn delta_sqrt(epsilon: i8, z: Pair) -> Complex64 {
    if epsilon == -1 {
        gamma_fn(z)
    } else {
        linalg::principal_sqrt(delta_fn(epsilon, z))
    }
}

/// `φ_η = (Δ^{1/2} + η·Γ)/2`.
pub fn phi_fn(epsilon: i8, eta: Eta, z: Pair) -> Complex64 {
    (delta_sqrt(epsilon, z) + gamma_fn(z) * eta.value()) / 2.0
}

/// `c₂ = ε·a₁b₂c₁/(a₂b₁)`.
pub fn c2_of(epsilon: i8, a: Pair, b: Pair, c1: Complex64) -> Complex64 {
    a.0 * b.1 * c1 * eps_f(epsilon) / (a.1 * b.0)
}

/// `ψ_η(a, b, c) = η·φ_η(a)·Γ(b) + a₂b₁c₁⁻¹·Γ(c)`.
pub fn psi_fn(epsilon: i8, eta: Eta, a: Pair, b: Pair, c: Pair) -> Result<Complex64> {
    if c.0.norm() == 0.0 {
        return Err(Error::OutsideDomain {
            domain: "psi",
            reason: "c1 = 0".into(),
        });
    }
    Ok(phi_fn(epsilon, eta, a) * gamma_fn(b) * eta.value() + a.1 * b.0 / c.0 * gamma_fn(c))
}

/// Whether `Δ(z)` is non-zero beyond the guard band, relative to its terms.
pub fn delta_nonzero(epsilon: i8, z: Pair) -> bool {
    let g = gamma_fn(z);
    let scale = g.norm_sqr().max((z.0 * z.1).norm()).max(1.0);
    delta_fn(epsilon, z).norm() > TOL_GENERIC * scale
}

/// `π₃(t) = (CR₁, CR₂)`, defined on the double-brace generic locus.
pub fn pi3(t: &ConfigTuple) -> Result<Pair> {
    let cert = genericity(t);
    if !cert.double_generic {
        return Err(Error::not_generic(
            cert.failure.unwrap_or_else(|| "not double-brace generic".into()),
        ));
    }
    let cr = cross_ratios4(t)?;
    Ok((cr.cr1, cr.cr2))
}

/// `(α₁, α₂, β₁, β₂, γ₁)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pi4 {
    pub a: Pair,
    pub b: Pair,
    pub c1: Complex64,
}

impl Pi4 {
    pub fn as_array(&self) -> [Complex64; 5] {
        [self.a.0, self.a.1, self.b.0, self.b.1, self.c1]
    }

    pub fn from_array(x: [Complex64; 5]) -> Self {
        Pi4 {
            a: (x[0], x[1]),
            b: (x[2], x[3]),
            c1: x[4],
        }
    }
}

/// `π₄(t) = (α₁, α₂, β₁, β₂, γ₁)`, defined on the double-brace generic locus.
pub fn pi4(t: &ConfigTuple) -> Result<Pi4> {
    let cert = genericity(t);
    if !cert.double_generic {
        return Err(Error::not_generic(
            cert.failure.unwrap_or_else(|| "not double-brace generic".into()),
        ));
    }
    let x = cross_ratios5(t)?;
    Ok(Pi4 {
        a: (x.alpha.cr1, x.alpha.cr2),
        b: (x.beta.cr1, x.beta.cr2),
        c1: x.gamma.cr1,
    })
}

/// Which genericity loci a tuple belongs to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenericityCertificate {
    /// All pairwise pairings non-zero.
    pub pairwise: bool,
    /// Representatives in general linear position (rank `min(k, n)`).
    pub general_position: bool,
    /// Pairwise generic and `Δ ≠ 0` on every 4-subtuple through `p0, p1`
    /// (only meaningful for 4- and 5-tuples).
    pub double_generic: bool,
    /// The first condition that failed, if any.
    pub failure: Option<String>,
}

/// Classifies a tuple into the pairwise, general-position and double-brace loci.
pub fn genericity(t: &ConfigTuple) -> GenericityCertificate {
    let k = t.len();
    let all: Vec<usize> = (0..k).collect();
    let mut failure = None;
    let pairwise = match t.require_pairwise(&all) {
        Ok(()) => true,
        Err(e) => {
            failure = Some(e.to_string());
            false
        }
    };
    let vectors: Vec<CVector> = all.iter().map(|&i| t.vector(i).clone()).collect();
    let m = linalg::columns_to_matrix(t.space().dim(), &vectors);
    let general_position = k == 0 || linalg::numerical_rank(&m) == k.min(t.space().dim());
    if !general_position && failure.is_none() {
        failure = Some("points not in general position".into());
    }
    let mut double_generic = pairwise && (k == 4 || k == 5);
    if double_generic {
        let subtuples: &[[usize; 4]] = if k == 4 {
            &[[0, 1, 2, 3]]
        } else {
            &[[0, 1, 2, 3], [0, 1, 2, 4], [0, 1, 3, 4]]
        };
        for idx in subtuples {
            let cr = t.cr_triple_at(*idx);
            if !delta_nonzero(t.space().epsilon(), (cr.cr1, cr.cr2)) {
                double_generic = false;
                if failure.is_none() {
                    failure = Some(format!(
                        "Delta(CR1, CR2) = 0 on (p{}, p{}, p{}, p{})",
                        idx[0], idx[1], idx[2], idx[3]
                    ));
                }
                break;
            }
        }
    }
    GenericityCertificate {
        pairwise,
        general_position,
        double_generic,
        failure,
    }
}

/// `det(ω(v_i, v_j))` for the stored representatives.
pub fn gram_determinant(t: &ConfigTuple) -> Complex64 {
    t.pairings.determinant()
}

/// `Δ(CR₁, CR₂)·(ω(v0,v1)·ω(v2,v3))²`, the closed form of the Gram determinant
/// of a 4-tuple.
pub fn gram_determinant_closed_form(t: &ConfigTuple) -> Result<Complex64> {
    let cr = cross_ratios4(t)?;
    let w = t.pairing(0, 1) * t.pairing(2, 3);
    Ok(delta_fn(t.space().epsilon(), (cr.cr1, cr.cr2)) * w * w)
}

/// `|x − y| / max(|x|, |y|)`, zero when both vanish.
pub fn relative_residual(x: Complex64, y: Complex64) -> f64 {
    let scale = x.norm().max(y.norm());
    if scale == 0.0 {
        0.0
    } else {
        (x - y).norm() / scale
    }
}

/// One named identity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityResidual {
    pub name: String,
    pub residual: f64,
}

fn named(name: &str, lhs: Complex64, rhs: Complex64) -> IdentityResidual {
    IdentityResidual {
        name: name.to_string(),
        residual: relative_residual(lhs, rhs),
    }
}

/// Relative residuals of the permutation identities among `CR₀, CR₁, CR₂`
/// and of `CR₀·CR₁⁻¹·CR₂ = ε`.
pub fn four_tuple_identities(t: &ConfigTuple) -> Result<Vec<IdentityResidual>> {
    let cr = cross_ratios4(t)?;
    let at = |idx: [usize; 4]| t.cr_triple_at(idx);
    let inv = |z: Complex64| ONE / z;
    let s01 = at([1, 0, 2, 3]);
    let s23 = at([0, 1, 3, 2]);
    let s02 = at([2, 1, 0, 3]);
    let s13 = at([0, 3, 2, 1]);
    let s12 = at([0, 2, 1, 3]);
    let s03 = at([3, 1, 2, 0]);
    let eps = t.space().epsilon_c();
    Ok(vec![
        named("CR0.(01) = 1/CR0", s01.cr0, inv(cr.cr0)),
        named("CR0.(23) = 1/CR0", s23.cr0, inv(cr.cr0)),
        named("1/CR1.(02) = 1/CR0", inv(s02.cr1), inv(cr.cr0)),
        named("1/CR1.(13) = 1/CR0", inv(s13.cr1), inv(cr.cr0)),
        named("CR2.(12) = 1/CR0", s12.cr2, inv(cr.cr0)),
        named("CR2.(03) = 1/CR0", s03.cr2, inv(cr.cr0)),
        named("CR1.(12) = 1/CR1", s12.cr1, inv(cr.cr1)),
        named("CR1.(03) = 1/CR1", s03.cr1, inv(cr.cr1)),
        named("1/CR2.(01) = 1/CR1", inv(s01.cr2), inv(cr.cr1)),
        named("1/CR2.(23) = 1/CR1", inv(s23.cr2), inv(cr.cr1)),
        named("CR2.(02) = 1/CR2", s02.cr2, inv(cr.cr2)),
        named("CR2.(13) = 1/CR2", s13.cr2, inv(cr.cr2)),
        named("CR0/CR1*CR2 = eps", cr.product(), eps),
    ])
}

/// Relative residuals of the face identities of a 5-tuple.
pub fn five_tuple_identities(t: &ConfigTuple) -> Result<Vec<IdentityResidual>> {
    let x = cross_ratios5(t)?;
    let (a, b, g) = (x.alpha, x.beta, x.gamma);
    let d1 = t.face(1).cr_triple_at([0, 1, 2, 3]);
    let d0 = t.face(0).cr_triple_at([0, 1, 2, 3]);
    let eps = t.space().epsilon_c();
    Ok(vec![
        named("CR0.d1 = a2/b2", d1.cr0, a.cr2 / b.cr2),
        named("CR1.d1 = c1/b1", d1.cr1, g.cr1 / b.cr1),
        named("CR2.d1 = eps b2 c1/(a2 b1)", d1.cr2, eps * b.cr2 * g.cr1 / (a.cr2 * b.cr1)),
        named("CR0.d0 = a1/b1", d0.cr0, a.cr1 / b.cr1),
        named("CR1.d0 = eps a1 c1/(a2 b1)", d0.cr1, eps * a.cr1 * g.cr1 / (a.cr2 * b.cr1)),
        named("CR2.d0 = c1/a2", d0.cr2, g.cr1 / a.cr2),
        named("a0 c0 = b0", a.cr0 * g.cr0, b.cr0),
        named(
            "c2 = eps a1 b2 c1/(a2 b1)",
            g.cr2,
            c2_of(t.space().epsilon(), (a.cr1, a.cr2), (b.cr1, b.cr2), g.cr1),
        ),
    ])
}

/// Largest residual in a list (0 for an empty list).
pub fn max_residual(rs: &[IdentityResidual]) -> f64 {
    rs.iter().map(|r| r.residual).fold(0.0, f64::max)
}

/// A random tuple of `k` isotropic points drawn independently.
pub fn random_tuple<R: rand::Rng + ?Sized>(
    space: &FormedSpace,
    k: usize,
    rng: &mut R,
) -> Result<ConfigTuple> {
    let points = (0..k)
        .map(|_| space.random_isotropic(rng))
        .collect::<Result<Vec<_>>>()?;
    ConfigTuple::new(space, points)
}

/// A random tuple conditioned on the double-brace (or, for `k < 4`, pairwise
/// and general-position) locus, by rejection.
pub fn random_generic_tuple<R: rand::Rng + ?Sized>(
    space: &FormedSpace,
    k: usize,
    rng: &mut R,
) -> Result<ConfigTuple> {
    for _ in 0..1000 {
        let t = random_tuple(space, k, rng)?;
        let cert = genericity(&t);
        let ok = if k == 4 || k == 5 {
            cert.double_generic && cert.general_position
        } else {
            cert.pairwise && cert.general_position
        };
        if ok {
            return Ok(t);
        }
    }
    Err(Error::not_generic(format!(
        "no generic {k}-tuple found in {} (locus may be empty at this rank)",
        space.params()
    )))
}
