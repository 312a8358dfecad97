//! Canonical representatives of generic 3-, 4- and 5-tuples and explicit
//! group elements moving a tuple onto its representative.
//!
//! * `Φ₂ = [e_r, f_r, φ₂]`,
//! * `Φ₃(a) = [e_r, f_r, φ₂, φ₃(a)]`,
//! * `Φ₄(a, b, c₁) = [e_r, f_r, φ₂, φ₃(a), φ₄(a, b, c₁)]`.
//!
//! Every reduction builds a partial adapted basis out of the tuple,
//! Witt-completes it to a change of basis `T ∈ G_r` and derives `g` from `T`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cross_ratios::{
    self, c2_of, delta_nonzero, delta_sqrt, gamma_fn, phi_fn, psi_fn, ConfigTuple, Eta, Pair,
    Pi4,
};
use crate::error::{Error, Result};
use crate::forms::{smaller_root, FormedSpace, GroupElement, HyperbolicPlane, PartialBasis};
use crate::linalg::{self, c, CVector, ONE, ZERO};
use crate::tolerances::{MAX_CONDITION, TOL_GENERIC, TOL_GROUP, TOL_REDUCE};

/// Sign of the square root `√Π` used by the quadruple reduction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum SqrtBranch {
    #[default]
    Principal,
    Negated,
}

impl SqrtBranch {
    fn apply(self, z: Complex64) -> Complex64 {
        match self {
            SqrtBranch::Principal => z,
            SqrtBranch::Negated => -z,
        }
    }
}

/// A group element together with the canonical tuple it reaches.
#[derive(Debug, Clone)]
pub struct ReductionResult {
    pub g: GroupElement,
    pub canonical: ConfigTuple,
    /// Max chordal distance between `g·input` and `canonical`.
    pub residual: f64,
    /// Largest condition estimate met along the way.
    pub condition: f64,
}

fn require_rank(space: &FormedSpace, min: usize) -> Result<()> {
    if space.rank() < min {
        return Err(Error::RankTooSmall {
            r: space.rank(),
            min,
        });
    }
    Ok(())
}

fn require_len(t: &ConfigTuple, k: usize) -> Result<()> {
    if t.len() != k {
        return Err(Error::InvalidArgument(format!(
            "expected a {k}-tuple, got {} points",
            t.len()
        )));
    }
    Ok(())
}

fn eps_c(space: &FormedSpace) -> Complex64 {
    space.epsilon_c()
}

/// `φ₂ = e_r + f_r + x₀` with `x₀ = 0`, `√−2·h` or `e_{r−1} − f_{r−1}`.
pub fn phi2_vector(space: &FormedSpace) -> Result<CVector> {
    let p = space.params();
    require_rank(space, p.r1())?;
    let r = space.rank();
    let mut v = space.e(r) + space.f(r);
    if r >= 2 {
        v += space.e(r - 1) - space.f(r - 1);
    } else if let Some(h) = space.h() {
        v += h * linalg::principal_sqrt(c(-2.0, 0.0));
    }
    Ok(v)
}

/// `Φ₂ = [e_r, f_r, φ₂]`.
pub fn phi2(space: &FormedSpace) -> Result<ConfigTuple> {
    let v = phi2_vector(space)?;
    let r = space.rank();
    ConfigTuple::from_vectors(space, vec![space.e(r), space.f(r), v])
}

/// Membership in `Ω₃`: both coordinates and `Δ` non-zero.
pub fn check_omega3(epsilon: i8, a: Pair) -> Result<()> {
    let outside = |reason: &str| Error::OutsideDomain {
        domain: "Omega3",
        reason: reason.to_string(),
    };
    if !(a.0.is_finite() && a.1.is_finite()) {
        return Err(outside("non-finite parameter"));
    }
    if a.0.norm() <= TOL_GENERIC || a.1.norm() <= TOL_GENERIC {
        return Err(outside("a1 = 0 or a2 = 0"));
    }
    if !delta_nonzero(epsilon, a) {
        return Err(outside("Delta(a1, a2) = 0"));
    }
    Ok(())
}

/// `φ₃(a) = a₁e_r + φ₋(a)e_{r−1} + εφ₊(a)f_{r−1} + εa₂f_r`.
pub fn phi3_vector(space: &FormedSpace, a: Pair) -> Result<CVector> {
    require_rank(space, 2)?;
    check_omega3(space.epsilon(), a)?;
    let r = space.rank();
    let eps = space.epsilon();
    let ec = eps_c(space);
    Ok(space.e(r) * a.0
        + space.e(r - 1) * phi_fn(eps, Eta::Minus, a)
        + space.f(r - 1) * (ec * phi_fn(eps, Eta::Plus, a))
        + space.f(r) * (ec * a.1))
}

/// `Φ₃(a₁, a₂) = [e_r, f_r, φ₂, φ₃(a)]`.
pub fn phi3(space: &FormedSpace, a: Pair) -> Result<ConfigTuple> {
    let v3 = phi3_vector(space, a)?;
    let r = space.rank();
    ConfigTuple::from_vectors(space, vec![space.e(r), space.f(r), phi2_vector(space)?, v3])
}

/// Membership in `Ω₄`: all coordinates non-zero and `Δ(a)`, `Δ(b)`, `Δ(c)`
/// non-zero with `c = (c₁, c₂)`.
pub fn check_omega4(epsilon: i8, p: &Pi4) -> Result<()> {
    let outside = |reason: String| Error::OutsideDomain {
        domain: "Omega4",
        reason,
    };
    for (name, z) in ["a1", "a2", "b1", "b2", "c1"].iter().zip(p.as_array()) {
        if !z.is_finite() || z.norm() <= TOL_GENERIC {
            return Err(outside(format!("{name} = 0 or non-finite")));
        }
    }
    let c = (p.c1, c2_of(epsilon, p.a, p.b, p.c1));
    for (name, z) in [("a", p.a), ("b", p.b), ("c", c)] {
        if !delta_nonzero(epsilon, z) {
            return Err(outside(format!("Delta({name}) = 0")));
        }
    }
    Ok(())
}

/// `φ̃₄ = b₁e_r + (ψ₋/Δ^{1/2}(a))e_{r−1} + ε(ψ₊/Δ^{1/2}(a))f_{r−1} + εb₂f_r`,
/// before the isotropy correction.
pub fn phi4_tilde_vector(space: &FormedSpace, p: &Pi4) -> Result<CVector> {
    require_rank(space, 2)?;
    let eps = space.epsilon();
    check_omega4(eps, p)?;
    let ec = eps_c(space);
    let r = space.rank();
    let c = (p.c1, c2_of(eps, p.a, p.b, p.c1));
    let root = delta_sqrt(eps, p.a);
    let psi_m = psi_fn(eps, Eta::Minus, p.a, p.b, c)?;
    let psi_p = psi_fn(eps, Eta::Plus, p.a, p.b, c)?;
    Ok(space.e(r) * p.b.0
        + space.e(r - 1) * (psi_m / root)
        + space.f(r - 1) * (ec * psi_p / root)
        + space.f(r) * (ec * p.b.1))
}

/// The isotropic fifth point `φ₄`.
///
/// For `r ≥ 3` the correction is `e_{r−2} − (q(φ̃₄)/2)·f_{r−2}`; for `(+1,1)`,
/// `r = 2` it is `√(−q(φ̃₄))·h` and needs `q(φ̃₄) ≠ 0`; for `(−1,0)`, `r = 2`
/// `φ̃₄` is already isotropic.
pub fn phi4_vector(space: &FormedSpace, p: &Pi4) -> Result<CVector> {
    let params = space.params();
    require_rank(space, params.r1() + 1)?;
    let r = space.rank();
    let tilde = phi4_tilde_vector(space, p)?;
    let qt = space.q_raw(&tilde);
    if r >= 3 {
        return Ok(tilde + space.e(r - 2) - space.f(r - 2) * (qt / 2.0));
    }
    match space.h() {
        Some(h) => {
            if qt.norm() <= TOL_GENERIC * tilde.norm_squared() {
                return Err(Error::OutsideDomain {
                    domain: "Omega4'",
                    reason: "q(phi4~) = 0".into(),
                });
            }
            Ok(tilde + h * linalg::principal_sqrt(-qt))
        }
        None => Ok(tilde),
    }
}

/// `Φ₄(a, b, c₁)`.
pub fn phi4(space: &FormedSpace, p: &Pi4) -> Result<ConfigTuple> {
    let v4 = phi4_vector(space, p)?;
    let r = space.rank();
    ConfigTuple::from_vectors(
        space,
        vec![
            space.e(r),
            space.f(r),
            phi2_vector(space)?,
            phi3_vector(space, p.a)?,
            v4,
        ],
    )
}

/// Splits `x` in the ω-complement of `fixed` as `x = e″ + s·f″` with
/// `(e″, f″)` a hyperbolic pair. Needs `q(x) = s·(1+ε)`.
fn split_pair(
    space: &FormedSpace,
    fixed: &[CVector],
    x: &CVector,
    s: Complex64,
) -> Result<(CVector, CVector)> {
    let proj = space.perp_projector(fixed)?;
    let qx = space.q_raw(x);
    let scale = x.norm_squared().max(1.0);
    let want = s * (1.0 + f64::from(space.epsilon()));
    if (qx - want).norm() > TOL_GENERIC * scale {
        return Err(Error::not_generic("residual vector has the wrong square"));
    }
    let mut cands: Vec<CVector> = (0..space.dim())
        .map(|k| proj(&space.basis_vector(k)))
        .filter(|y| y.norm() > 1e-12)
        .map(|y| {
            let n = y.norm();
            y / c(n, 0.0)
        })
        .collect();
    // strongest pairing with x first
    cands.sort_by(|a, b| {
        space
            .omega_raw(x, b)
            .norm()
            .total_cmp(&space.omega_raw(x, a).norm())
    });
    for y in cands {
        let wy = space.omega_raw(x, &y);
        if wy.norm() <= TOL_GENERIC * x.norm() {
            break;
        }
        let y = y / wy;
        let f = if space.epsilon() == -1 {
            y
        } else {
            // f″ = α y + β x with ω(x, f″) = 1 and q(f″) = 0
            let qy = space.q_raw(&y);
            let a = qx * (qx * qy - ONE);
            let b = ONE - qx * qy;
            if a.norm().max(b.norm()) <= TOL_GENERIC {
                continue;
            }
            let beta = smaller_root(a, b, qy);
            let alpha = ONE - beta * qx;
            &y * alpha + x * beta
        };
        let e = x - &f * s;
        return Ok((e, f));
    }
    Err(Error::not_generic(
        "no hyperbolic partner for the residual vector",
    ))
}

fn finish(
    space: &FormedSpace,
    g: GroupElement,
    input: &ConfigTuple,
    canonical: ConfigTuple,
    condition: f64,
) -> Result<ReductionResult> {
    if space.group_residual(g.matrix()) > TOL_GROUP {
        return Err(Error::IllConditioned {
            what: "reducing group element",
            condition: space.group_residual(g.matrix()),
        });
    }
    let moved = input.transform(&g)?;
    let residual = moved.distance(&canonical);
    if !(residual <= TOL_REDUCE) {
        return Err(Error::IllConditioned {
            what: "reduction (projective residual)",
            condition: residual,
        });
    }
    Ok(ReductionResult {
        g,
        canonical,
        residual,
        condition,
    })
}

/// Moves a generic triple onto `Φ₂`.
///
/// The first two points become `e′_r = s·v0` and `f′_r = v1/(s·ω(v0,v1))` with
/// `s² = ω(v2,v1)/(ω(v0,v1)ω(v0,v2))`; the complement part of `v2`, rescaled,
/// is split into the next hyperbolic pair (or the Euclidean vector), and
/// `g = T⁻¹`.
pub fn reduce_triple(t: &ConfigTuple) -> Result<ReductionResult> {
    require_len(t, 3)?;
    let space = t.space();
    require_rank(space, space.params().r1())?;
    let cert = cross_ratios::genericity(t);
    if !cert.pairwise {
        return Err(Error::not_generic(cert.failure.unwrap_or_default()));
    }
    let r = space.rank();
    let (v0, v1, v2) = (t.vector(0), t.vector(1), t.vector(2));
    let (w01, w02, w21) = (t.pairing(0, 1), t.pairing(0, 2), t.pairing(2, 1));
    let s = linalg::principal_sqrt(w21 / (w01 * w02));
    let er = v0 * s;
    let fr = v1 / (s * w01);
    let plane = HyperbolicPlane::new(space, v0, v1)?;
    let x = plane.hat(v2) / (s * w02);
    let mut partial = PartialBasis::new().with_pair(r, er.clone(), fr.clone());
    if r >= 2 {
        let (e, f) = split_pair(space, &[er, fr], &x, c(-1.0, 0.0))?;
        partial = partial.with_pair(r - 1, e, f);
    } else if space.h().is_some() {
        // (+1,1), r = 1: x = √−2·h′
        partial = partial.with_h(x / linalg::principal_sqrt(c(-2.0, 0.0)));
    }
    let basis = space.witt_complete(&partial)?;
    let g = GroupElement::try_new(space, space.group_inverse(&basis.change_of_basis()))?;
    finish(space, g, t, phi2(space)?, 1.0)
}

/// Internal quantities of the quadruple reduction.
#[derive(Debug, Clone)]
pub struct QuadrupleFrame {
    /// `Π = ω(v0,v1)ω(v1,v2)ω(v2,v0)`.
    pub pi: Complex64,
    pub sqrt_pi: Complex64,
    /// `λ = √Π/ω(v1,v0)`.
    pub lambda: Complex64,
    /// `μ = ω(v3,v2)/λ`.
    pub mu: Complex64,
    pub e_r: CVector,
    pub f_r: CVector,
    pub e: CVector,
    pub f: CVector,
    /// `(CR₁, CR₂)` of the tuple.
    pub a: Pair,
    pub condition: f64,
}

/// Computes `e′_r, f′_r` and solves for `e′_{r−1}, f′_{r−1}` in the span of
/// `v̂2, v̂3`:
///
/// * `ω(e′, v2) = λ`, `ω(e′, v3) = μφ₋(a)`,
/// * `ω(f′, v2) = −λ`, `ω(f′, v3) = εμφ₊(a)`.
pub fn quadruple_frame(t: &ConfigTuple, branch: SqrtBranch) -> Result<QuadrupleFrame> {
    require_len(t, 4)?;
    let space = t.space();
    require_rank(space, 2)?;
    let cert = cross_ratios::genericity(t);
    if !cert.double_generic {
        return Err(Error::not_generic(
            cert.failure
                .unwrap_or_else(|| "not double-brace generic".into()),
        ));
    }
    let eps = space.epsilon();
    let cr = cross_ratios::cross_ratios4(t)?;
    let a = (cr.cr1, cr.cr2);
    let (v0, v1, v2, v3) = (t.vector(0), t.vector(1), t.vector(2), t.vector(3));
    let pi = t.pairing(0, 1) * t.pairing(1, 2) * t.pairing(2, 0);
    let sqrt_pi = branch.apply(linalg::principal_sqrt(pi));
    let lambda = sqrt_pi / t.pairing(1, 0);
    let mu = t.pairing(3, 2) / lambda;
    let e_r = v1 * (lambda / t.pairing(1, 2));
    let f_r = v0 * (t.pairing(1, 2) / sqrt_pi);

    let plane = HyperbolicPlane::new(space, v0, v1)?;
    let (h2, h3) = (plane.hat(v2), plane.hat(v3));
    // ω(x·v̂2 + y·v̂3, v_k) = x·ω(v̂2, v̂k) + y·ω(v̂3, v̂k), equilibrated by
    // the norms of v̂2, v̂3 so the condition estimate does not depend on how
    // the projective points happen to be represented
    let (s2, s3) = (h2.norm(), h3.norm());
    if !(s2 > 0.0 && s3 > 0.0) {
        return Err(Error::not_generic("a hat vector vanishes"));
    }
    let sc = [s2, s3];
    let raw = [
        [space.omega_raw(&h2, &h2), space.omega_raw(&h3, &h2)],
        [space.omega_raw(&h2, &h3), space.omega_raw(&h3, &h3)],
    ];
    let m = [0, 1].map(|k| [0, 1].map(|j| raw[k][j] / (sc[k] * sc[j])));
    let rhs_e = [lambda / s2, mu * phi_fn(eps, Eta::Minus, a) / s3];
    let rhs_f = [-lambda / s2, eps_c(space) * mu * phi_fn(eps, Eta::Plus, a) / s3];
    let ((ye, cond), (yf, _)) = match (linalg::solve2(m, rhs_e), linalg::solve2(m, rhs_f)) {
        (Some(e), Some(f)) => (e, f),
        _ => return Err(Error::not_generic("singular Gram system (Delta = 0)")),
    };
    if !(cond <= MAX_CONDITION) {
        return Err(Error::IllConditioned {
            what: "frame system",
            condition: cond,
        });
    }
    let xe = [ye[0] / s2, ye[1] / s3];
    let xf = [yf[0] / s2, yf[1] / s3];
    let e = &h2 * xe[0] + &h3 * xe[1];
    let f = &h2 * xf[0] + &h3 * xf[1];
    Ok(QuadrupleFrame {
        pi,
        sqrt_pi,
        lambda,
        mu,
        e_r,
        f_r,
        e,
        f,
        a,
        condition: cond,
    })
}

/// The group element `g = TᵀJ` built from a quadruple frame.
fn frame_element(space: &FormedSpace, frame: &QuadrupleFrame) -> Result<GroupElement> {
    let r = space.rank();
    let partial = PartialBasis::new()
        .with_pair(r, frame.e_r.clone(), frame.f_r.clone())
        .with_pair(r - 1, frame.e.clone(), frame.f.clone());
    let basis = space.witt_complete(&partial)?;
    let t = basis.change_of_basis();
    GroupElement::try_new(space, t.transpose() * space.gram())
}

/// Moves a double-brace generic 4-tuple onto `Φ₃(π₃(t))`.
pub fn reduce_quadruple(t: &ConfigTuple) -> Result<ReductionResult> {
    reduce_quadruple_with(t, SqrtBranch::Principal)
}

/// [`reduce_quadruple`] with an explicit sign of `√Π`.
pub fn reduce_quadruple_with(t: &ConfigTuple, branch: SqrtBranch) -> Result<ReductionResult> {
    let space = t.space();
    let frame = quadruple_frame(t, branch)?;
    let g = frame_element(space, &frame)?;
    let canonical = phi3(space, frame.a)?;
    finish(space, g, t, canonical, frame.condition)
}

/// The pairings of `e′_{r−1}, f′_{r−1}` with a fifth isotropic point, and
/// their closed forms:
///
/// * `ω(e′, v4) = ε·(ω(v2,v4)/λ)·ψ₋/Δ^{1/2}(a)`,
/// * `ω(f′, v4) = (ω(v2,v4)/λ)·ψ₊/Δ^{1/2}(a)`.
///
/// Returns the two relative residuals.
pub fn pairing_lemma_residuals(t: &ConfigTuple) -> Result<[f64; 2]> {
    require_len(t, 5)?;
    let space = t.space();
    let eps = space.epsilon();
    let p = cross_ratios::pi4(t)?;
    let frame = quadruple_frame(&t.select(&[0, 1, 2, 3]), SqrtBranch::Principal)?;
    let v4 = t.vector(4);
    let c = (p.c1, c2_of(eps, p.a, p.b, p.c1));
    let root = delta_sqrt(eps, p.a);
    let k = space.omega_raw(t.vector(2), v4) / frame.lambda;
    let want_e = eps_c(space) * k * psi_fn(eps, Eta::Minus, p.a, p.b, c)? / root;
    let want_f = k * psi_fn(eps, Eta::Plus, p.a, p.b, c)? / root;
    Ok([
        cross_ratios::relative_residual(space.omega_raw(&frame.e, v4), want_e),
        cross_ratios::relative_residual(space.omega_raw(&frame.f, v4), want_f),
    ])
}

/// Moves a double-brace generic 5-tuple onto `Φ₄(π₄(t))`.
///
/// The first four points are handled by the quadruple frame; the residual
/// part of `g·v4` in `⟨e_r, e_{r−1}, f_{r−1}, f_r⟩^⊥` is then normalised by a
/// second element `g′` fixing those four vectors.
pub fn reduce_quintuple(t: &ConfigTuple) -> Result<ReductionResult> {
    require_len(t, 5)?;
    let space = t.space();
    let params = space.params();
    require_rank(space, params.r1() + 1)?;
    let r = space.rank();
    let p = cross_ratios::pi4(t)?;
    let frame = quadruple_frame(&t.select(&[0, 1, 2, 3]), SqrtBranch::Principal)?;
    let g = frame_element(space, &frame)?;
    let canonical = phi4(space, &p)?;
    let tilde = phi4_tilde_vector(space, &p)?;

    let moved = g.apply(t.vector(4));
    let kappa = moved[space.e_index(r)] / p.b.0;
    if kappa.norm() <= TOL_GENERIC * moved.norm() {
        return Err(Error::not_generic("fifth point has no e_r component"));
    }
    let outer = [r, r - 1];
    let mut x = moved / kappa;
    for &i in &outer {
        x[space.e_index(i)] = ZERO;
        x[space.f_index(i)] = ZERO;
    }
    let fixed: Vec<CVector> = outer
        .iter()
        .flat_map(|&i| [space.e(i), space.f(i)])
        .collect();
    let mut partial = PartialBasis::new();
    for &i in &outer {
        partial = partial.with_pair(i, space.e(i), space.f(i));
    }
    let qt = space.q_raw(&tilde);
    if r >= 3 {
        let s = -qt / 2.0;
        let (e, f) = split_pair(space, &fixed, &x, s)?;
        partial = partial.with_pair(r - 2, e, f);
    } else if space.h().is_some() {
        let sigma = linalg::principal_sqrt(-qt);
        if sigma.norm() <= TOL_GENERIC {
            return Err(Error::OutsideDomain {
                domain: "Omega4'",
                reason: "q(phi4~) = 0".into(),
            });
        }
        partial = partial.with_h(x / sigma);
    } else if x.norm() > TOL_GENERIC {
        return Err(Error::Internal(
            "non-zero residual in an empty complement".into(),
        ));
    }
    let basis = space.witt_complete(&partial)?;
    let g2 = GroupElement::try_new(space, space.group_inverse(&basis.change_of_basis()))?;
    finish(space, g2.compose(&g), t, canonical, frame.condition)
}

/// Values `ω(e_r,φ₃), ω(f_r,φ₃), ω(φ₂,φ₃)` of `Φ₃(a)` and their targets
/// `εa₂, εa₁, ε`.
pub fn phi3_pairing_table(space: &FormedSpace, a: Pair) -> Result<Vec<(Complex64, Complex64)>> {
    let t = phi3(space, a)?;
    // representatives are rescaled by normalisation; recover the exact vectors
    let r = space.rank();
    let (er, fr) = (space.e(r), space.f(r));
    let (p2, p3) = (phi2_vector(space)?, phi3_vector(space, a)?);
    debug_assert_eq!(t.len(), 4);
    let eps = eps_c(space);
    Ok(vec![
        (space.omega_raw(&er, &p3), eps * a.1),
        (space.omega_raw(&fr, &p3), eps * a.0),
        (space.omega_raw(&p2, &p3), eps),
        (space.omega_raw(&er, &fr), ONE),
        (space.omega_raw(&er, &p2), ONE),
        (space.omega_raw(&fr, &p2), eps),
    ])
}

/// Values `ω(e_r,φ₄), ω(f_r,φ₄), ω(φ₂,φ₄), ω(φ₃,φ₄)` and their targets
/// `εb₂, εb₁, ε, a₂b₁/c₁`.
pub fn phi4_pairing_table(space: &FormedSpace, p: &Pi4) -> Result<Vec<(Complex64, Complex64)>> {
    let r = space.rank();
    let v4 = phi4_vector(space, p)?;
    let (er, fr) = (space.e(r), space.f(r));
    let (p2, p3) = (phi2_vector(space)?, phi3_vector(space, p.a)?);
    let eps = eps_c(space);
    Ok(vec![
        (space.omega_raw(&er, &v4), eps * p.b.1),
        (space.omega_raw(&fr, &v4), eps * p.b.0),
        (space.omega_raw(&p2, &v4), eps),
        (space.omega_raw(&p3, &v4), p.a.1 * p.b.0 / p.c1),
    ])
}

/// `Γ(a) = 1 − a₁ − a₂`, re-exported for convenience.
pub fn gamma_of(a: Pair) -> Complex64 {
    gamma_fn(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cross_ratios::{pi3, pi4, random_generic_tuple, relative_residual};
    use crate::rng::{complex_normal, stream};

    fn cases(min_extra: usize) -> Vec<FormedSpace> {
        let mut out = Vec::new();
        for (eps, d) in [(1, 1), (-1, 0), (1, 0)] {
            for r in 1..=4 {
                let s = FormedSpace::new(eps, d, r).unwrap();
                if r >= s.params().r1() + min_extra {
                    out.push(s);
                }
            }
        }
        out
    }

    fn random_pair<R: rand::Rng>(rng: &mut R) -> Pair {
        (complex_normal(rng), complex_normal(rng))
    }

    #[test]
    fn phi2_cases() {
        let c1 = FormedSpace::new(-1, 0, 1).unwrap();
        assert_eq!(phi2_vector(&c1).unwrap(), c1.e(1) + c1.f(1));
        let b1 = FormedSpace::new(1, 1, 1).unwrap();
        let v = phi2_vector(&b1).unwrap();
        assert!(b1.q(&v).unwrap().norm() < 1e-15);
        let d1 = FormedSpace::new(1, 0, 1).unwrap();
        assert_eq!(
            phi2_vector(&d1).unwrap_err(),
            Error::RankTooSmall { r: 1, min: 2 }
        );
        for s in cases(0) {
            assert!(s.q(&phi2_vector(&s).unwrap()).unwrap().norm() < 1e-15);
        }
    }

    #[test]
    fn phi3_is_isotropic_with_pairing_table_and_section() {
        let mut rng = stream(21, "red-phi3", 0);
        for s in cases(0).into_iter().filter(|s| s.rank() >= 2) {
            for _ in 0..50 {
                let a = random_pair(&mut rng);
                let v = phi3_vector(&s, a).unwrap();
                assert!(s.q(&v).unwrap().norm() < 1e-12 * v.norm_squared());
                for (got, want) in phi3_pairing_table(&s, a).unwrap() {
                    assert!((got - want).norm() < 1e-12 * (1.0 + want.norm()));
                }
                let back = pi3(&phi3(&s, a).unwrap()).unwrap();
                assert!(relative_residual(back.0, a.0) < 1e-10);
                assert!(relative_residual(back.1, a.1) < 1e-10);
            }
        }
    }

    #[test]
    fn phi3_domain_errors() {
        let s = FormedSpace::new(1, 0, 2).unwrap();
        let zero = (ZERO, ONE);
        assert!(matches!(
            phi3(&s, zero),
            Err(Error::OutsideDomain { .. })
        ));
        // ε = −1: Δ = Γ², vanishing on a1 + a2 = 1
        let c2 = FormedSpace::new(-1, 0, 2).unwrap();
        assert!(phi3(&c2, (c(0.3, 0.1), c(0.7, -0.1))).is_err());
    }

    #[test]
    fn phi4_is_isotropic_with_pairing_table_and_section() {
        let mut rng = stream(22, "red-phi4", 0);
        for s in cases(1) {
            for _ in 0..30 {
                let p = Pi4 {
                    a: random_pair(&mut rng),
                    b: random_pair(&mut rng),
                    c1: complex_normal(&mut rng),
                };
                let v = phi4_vector(&s, &p).unwrap();
                assert!(s.q(&v).unwrap().norm() < 1e-11 * v.norm_squared(), "{}", s.params());
                for (got, want) in phi4_pairing_table(&s, &p).unwrap() {
                    assert!(
                        (got - want).norm() < 1e-10 * (1.0 + want.norm()),
                        "{}: {got} vs {want}",
                        s.params()
                    );
                }
                let back = pi4(&phi4(&s, &p).unwrap()).unwrap();
                for (x, y) in back.as_array().iter().zip(p.as_array()) {
                    assert!(relative_residual(*x, y) < 1e-9, "{}", s.params());
                }
            }
        }
    }

    #[test]
    fn triple_reduction() {
        let mut rng = stream(23, "red-triple", 0);
        for s in cases(0) {
            let canon = phi2(&s).unwrap();
            let res = reduce_triple(&canon).unwrap();
            assert!(res.residual < 1e-12);
            for _ in 0..30 {
                let t = random_generic_tuple(&s, 3, &mut rng).unwrap();
                let res = reduce_triple(&t).unwrap();
                assert!(res.residual <= 1e-9, "{}: {}", s.params(), res.residual);
                let g0 = s.random_group_element(&mut rng).unwrap();
                let res2 = reduce_triple(&t.transform(&g0).unwrap()).unwrap();
                assert!(res2.canonical.distance(&res.canonical) < 1e-12);
            }
        }
    }

    #[test]
    fn quadruple_reduction() {
        let mut rng = stream(24, "red-quad", 0);
        for s in cases(0).into_iter().filter(|s| s.rank() >= 2) {
            for _ in 0..30 {
                let t = random_generic_tuple(&s, 4, &mut rng).unwrap();
                let res = reduce_quadruple(&t).unwrap();
                assert!(res.residual <= TOL_REDUCE, "{}", s.params());
                let neg = reduce_quadruple_with(&t, SqrtBranch::Negated).unwrap();
                assert!(neg.canonical.distance(&res.canonical) < 1e-10);
                // frame is an adapted 2-plane pair
                let fr = quadruple_frame(&t, SqrtBranch::Principal).unwrap();
                let vs = [fr.e_r.clone(), fr.e.clone(), fr.f.clone(), fr.f_r.clone()];
                let gram = s.gram_of(&vs);
                let eps = s.epsilon_c();
                for i in 0..4 {
                    for j in 0..4 {
                        let want = if i + j == 3 {
                            if i < j { ONE } else { eps }
                        } else {
                            ZERO
                        };
                        // ω(b_i, b_j): e before f gives 1, f before e gives ε
                        assert!((gram[(i, j)] - want).norm() < 1e-9, "{}", s.params());
                    }
                }
            }
            let a = random_pair(&mut rng);
            let canon = phi3(&s, a).unwrap();
            let res = reduce_quadruple(&canon).unwrap();
            assert!(res.residual < 1e-9);
            assert!(res.canonical.distance(&canon) < 1e-12);
        }
    }

    #[test]
    fn quintuple_reduction_and_pairing_lemma() {
        let mut rng = stream(25, "red-quint", 0);
        for s in cases(1) {
            for _ in 0..30 {
                let t = random_generic_tuple(&s, 5, &mut rng).unwrap();
                let [re, rf] = pairing_lemma_residuals(&t).unwrap();
                assert!(re < 1e-9 && rf < 1e-9, "{}: {re} {rf}", s.params());
                let res = reduce_quintuple(&t).unwrap_or_else(|e| panic!("{}: {e}", s.params()));
                assert!(res.residual <= TOL_REDUCE, "{}", s.params());
                let g0 = s.random_group_element(&mut rng).unwrap();
                let res2 = reduce_quintuple(&t.transform(&g0).unwrap())
                    .unwrap_or_else(|e| panic!("{} (moved): {e}", s.params()));
                assert!(res2.canonical.distance(&res.canonical) < 1e-8);
            }
        }
    }

    #[test]
    fn unsupported_low_rank() {
        let d2 = FormedSpace::new(1, 0, 2).unwrap();
        let p = Pi4 {
            a: (c(0.2, 0.3), c(-0.4, 0.1)),
            b: (c(1.1, -0.3), c(0.5, 0.5)),
            c1: c(0.7, 0.2),
        };
        assert_eq!(
            phi4(&d2, &p).unwrap_err(),
            Error::RankTooSmall { r: 2, min: 3 }
        );
    }
}
