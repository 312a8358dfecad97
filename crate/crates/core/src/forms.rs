//! Formed spaces `(V_r^{ε,d}, ω)` over ℂ.
//!
//! Vectors are written in the adapted basis `e_r, …, e_1, (h), f_1, …, f_r`.
//! The Gram matrix `J` is stored exactly as the block matrix
//! `[[0, 0, εQ], [0, 1_d, 0], [Q, 0, 0]]` and the form is evaluated as
//! `ω(v, w) = wᵀ J v`, which gives `ω(e_i, f_i) = 1` and `ω(f_i, e_i) = ε`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, CVector, ONE, ZERO};
use crate::rng::complex_normal;
use crate::tolerances::{TOL_GENERIC, TOL_GROUP, TOL_NORMALIZE};

/// The pair `(ε, d)` together with the rank `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FormParams {
    epsilon: i8,
    d: u8,
    r: usize,
}

impl FormParams {
    /// Admissible pairs are `(+1, 1)`, `(−1, 0)` and `(+1, 0)`.
    pub fn new(epsilon: i8, d: u8, r: usize) -> Result<Self> {
        match (epsilon, d) {
            (1, 1) | (-1, 0) | (1, 0) => Ok(FormParams { epsilon, d, r }),
            _ => Err(Error::InadmissibleForm { epsilon, d }),
        }
    }

    pub fn epsilon(&self) -> i8 {
        self.epsilon
    }

    pub fn epsilon_c(&self) -> Complex64 {
        c(f64::from(self.epsilon), 0.0)
    }

    pub fn d(&self) -> u8 {
        self.d
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// `n = 2r + d`.
    pub fn n(&self) -> usize {
        2 * self.r + usize::from(self.d)
    }

    /// Smallest rank for which the isotropic variety is irreducible and non-empty.
    pub fn r1(&self) -> usize {
        if (self.epsilon, self.d) == (1, 0) {
            2
        } else {
            1
        }
    }

    /// Classical family letter: `B` for `(+1,1)`, `C` for `(−1,0)`, `D` for `(+1,0)`.
    pub fn family(&self) -> char {
        match (self.epsilon, self.d) {
            (1, 1) => 'B',
            (-1, 0) => 'C',
            _ => 'D',
        }
    }

    pub fn with_rank(&self, r: usize) -> FormParams {
        FormParams { r, ..*self }
    }
}

impl std::fmt::Display for FormParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(eps={:+}, d={}, r={})", self.epsilon, self.d, self.r)
    }
}

/// A normalised representative of a line in ℂⁿ: the first coordinate whose
/// modulus exceeds `1e-12·‖v‖` equals 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjPoint {
    v: CVector,
}

impl ProjPoint {
    pub fn new(v: CVector) -> Result<Self> {
        let norm = v.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidArgument(
                "projective point needs a finite non-zero vector".into(),
            ));
        }
        let pivot = v
            .iter()
            .find(|z| z.norm() > TOL_NORMALIZE * norm)
            .copied()
            .ok_or_else(|| Error::Internal("no pivot coordinate".into()))?;
        Ok(ProjPoint { v: v / pivot })
    }

    pub fn vector(&self) -> &CVector {
        &self.v
    }

    pub fn into_vector(self) -> CVector {
        self.v
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    /// Image under a linear map, renormalised.
    pub fn transform(&self, m: &CMatrix) -> Result<ProjPoint> {
        ProjPoint::new(m * &self.v)
    }

    pub fn chordal_distance(&self, other: &ProjPoint) -> f64 {
        linalg::chordal_distance(&self.v, &other.v)
    }
}

/// An element of `G_r`: an `n×n` matrix with `mᵀJm = J`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    m: CMatrix,
    det: Complex64,
}

impl GroupElement {
    /// Checks membership at `TOL_GROUP` before wrapping.
    pub fn try_new(space: &FormedSpace, m: CMatrix) -> Result<Self> {
        if m.nrows() != space.dim() || m.ncols() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                got: m.nrows(),
            });
        }
        let residual = space.group_residual(&m);
        if residual > TOL_GROUP {
            return Err(Error::InvalidArgument(format!(
                "matrix is not in G_r (relative residual {residual:.3e})"
            )));
        }
        Ok(Self::from_matrix_unchecked(m))
    }

    pub(crate) fn from_matrix_unchecked(m: CMatrix) -> Self {
        let det = m.determinant();
        GroupElement { m, det }
    }

    pub fn identity(space: &FormedSpace) -> Self {
        Self::from_matrix_unchecked(CMatrix::identity(space.dim(), space.dim()))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn det(&self) -> Complex64 {
        self.det
    }

    /// Whether the element lies in the determinant-one subgroup `S_r`.
    pub fn is_special(&self, tol: f64) -> bool {
        (self.det - ONE).norm() <= tol
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        &self.m * v
    }

    pub fn apply_point(&self, p: &ProjPoint) -> Result<ProjPoint> {
        p.transform(&self.m)
    }

    /// `self · other`.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        Self::from_matrix_unchecked(&self.m * &other.m)
    }

    /// `g⁻¹ = J⁻¹ gᵀ J`.
    pub fn inverse(&self, space: &FormedSpace) -> GroupElement {
        Self::from_matrix_unchecked(space.group_inverse(&self.m))
    }
}

/// Hyperbolic pairs and (optionally) the Euclidean vector of a partial adapted basis.
#[derive(Debug, Clone, Default)]
pub struct PartialBasis {
    /// `(i, e'_i, f'_i)` with `1 ≤ i ≤ r`.
    pub pairs: Vec<(usize, CVector, CVector)>,
    pub h: Option<CVector>,
}

impl PartialBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_pair(mut self, index: usize, e: CVector, f: CVector) -> Self {
        self.pairs.push((index, e, f));
        self
    }

    pub fn with_h(mut self, h: CVector) -> Self {
        self.h = Some(h);
        self
    }
}

/// A full adapted basis, stored in basis order.
#[derive(Debug, Clone)]
pub struct AdaptedBasis {
    vectors: Vec<CVector>,
}

impl AdaptedBasis {
    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    /// The change of basis `T` with `T·𝓑_r = 𝓑'` (columns are the new basis vectors).
    pub fn change_of_basis(&self) -> CMatrix {
        linalg::columns_to_matrix(self.vectors.len(), &self.vectors)
    }
}

/// The hyperbolic plane spanned by two isotropic vectors with `ω(v0, v1) ≠ 0`,
/// with its ω-perpendicular projection.
#[derive(Debug, Clone)]
pub struct HyperbolicPlane<'a> {
    space: &'a FormedSpace,
    v0: CVector,
    v1: CVector,
    w01: Complex64,
    w10: Complex64,
}

impl<'a> HyperbolicPlane<'a> {
    pub fn new(space: &'a FormedSpace, v0: &CVector, v1: &CVector) -> Result<Self> {
        space.check_dim(v0)?;
        space.check_dim(v1)?;
        let w01 = space.omega_raw(v0, v1);
        if w01.norm() <= TOL_GENERIC * v0.norm() * v1.norm() {
            return Err(Error::not_generic("omega(v0, v1) = 0: degenerate plane"));
        }
        Ok(HyperbolicPlane {
            space,
            v0: v0.clone(),
            v1: v1.clone(),
            w01,
            w10: space.omega_raw(v1, v0),
        })
    }

    /// `proj(v) = ω(v1,v)/ω(v1,v0) · v0 + ω(v0,v)/ω(v0,v1) · v1`.
    pub fn proj(&self, v: &CVector) -> CVector {
        let a = self.space.omega_raw(&self.v1, v) / self.w10;
        let b = self.space.omega_raw(&self.v0, v) / self.w01;
        &self.v0 * a + &self.v1 * b
    }

    /// The complement map `v̂ = v − proj(v)` onto the ω-orthogonal of the plane.
    pub fn hat(&self, v: &CVector) -> CVector {
        v - self.proj(v)
    }
}

/// `V_r^{ε,d}` with its Gram matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FormedSpace {
    params: FormParams,
    j: CMatrix,
    /// Row `i` of `J` has a single non-zero entry `sign` in column `col`.
    rows: Vec<(usize, f64)>,
}

impl FormedSpace {
    /// Builds `V_r^{ε,d}` with the exact matrix `J_r^{ε,d}`.
    pub fn new(epsilon: i8, d: u8, r: usize) -> Result<Self> {
        Ok(Self::from_params(FormParams::new(epsilon, d, r)?))
    }

    pub fn from_params(params: FormParams) -> Self {
        let r = params.r;
        let d = usize::from(params.d);
        let n = params.n();
        let eps = f64::from(params.epsilon);
        let mut rows = vec![(0usize, 0.0f64); n];
        for a in 0..r {
            // εQ block: row a pairs with column r + d + (r − 1 − a)
            rows[a] = (r + d + (r - 1 - a), eps);
            // Q block: row r + d + b pairs with column r − 1 − b
            rows[r + d + a] = (r - 1 - a, 1.0);
        }
        if d == 1 {
            rows[r] = (r, 1.0);
        }
        let mut j = DMatrix::from_element(n, n, ZERO);
        for (i, &(col, s)) in rows.iter().enumerate() {
            j[(i, col)] = c(s, 0.0);
        }
        FormedSpace { params, j, rows }
    }

    pub fn params(&self) -> FormParams {
        self.params
    }

    pub fn epsilon(&self) -> i8 {
        self.params.epsilon
    }

    pub fn epsilon_c(&self) -> Complex64 {
        self.params.epsilon_c()
    }

    pub fn rank(&self) -> usize {
        self.params.r
    }

    pub fn dim(&self) -> usize {
        self.params.n()
    }

    pub fn gram(&self) -> &CMatrix {
        &self.j
    }

    /// Column position of `e_i` (`1 ≤ i ≤ r`).
    pub fn e_index(&self, i: usize) -> usize {
        assert!(i >= 1 && i <= self.params.r, "e_{i} out of range");
        self.params.r - i
    }

    /// Column position of `f_i` (`1 ≤ i ≤ r`).
    pub fn f_index(&self, i: usize) -> usize {
        assert!(i >= 1 && i <= self.params.r, "f_{i} out of range");
        self.params.r + usize::from(self.params.d) + i - 1
    }

    pub fn h_index(&self) -> Option<usize> {
        (self.params.d == 1).then_some(self.params.r)
    }

    pub fn basis_vector(&self, k: usize) -> CVector {
        let mut v = CVector::zeros(self.dim());
        v[k] = ONE;
        v
    }

    pub fn e(&self, i: usize) -> CVector {
        self.basis_vector(self.e_index(i))
    }

    pub fn f(&self, i: usize) -> CVector {
        self.basis_vector(self.f_index(i))
    }

    pub fn h(&self) -> Option<CVector> {
        self.h_index().map(|k| self.basis_vector(k))
    }

    pub fn zero_vector(&self) -> CVector {
        CVector::zeros(self.dim())
    }

    /// Human-readable name of basis slot `k` (`e3`, `h`, `f1`, …).
    pub fn slot_name(&self, k: usize) -> String {
        let r = self.params.r;
        let d = usize::from(self.params.d);
        if k < r {
            format!("e{}", r - k)
        } else if d == 1 && k == r {
            "h".to_string()
        } else {
            format!("f{}", k - r - d + 1)
        }
    }

    pub(crate) fn check_dim(&self, v: &CVector) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: v.len(),
            });
        }
        Ok(())
    }

    /// `ω(v, w)` without the dimension check.
    pub(crate) fn omega_raw(&self, v: &CVector, w: &CVector) -> Complex64 {
        let mut acc = ZERO;
        for (i, &(col, s)) in self.rows.iter().enumerate() {
            acc += w[i] * v[col] * s;
        }
        acc
    }

    /// `ω(v, w) = wᵀ J v`.
    pub fn omega(&self, v: &CVector, w: &CVector) -> Result<Complex64> {
        self.check_dim(v)?;
        self.check_dim(w)?;
        Ok(self.omega_raw(v, w))
    }

    /// `q(v) = ω(v, v)`.
    pub fn q(&self, v: &CVector) -> Result<Complex64> {
        self.omega(v, v)
    }

    pub(crate) fn q_raw(&self, v: &CVector) -> Complex64 {
        self.omega_raw(v, v)
    }

    /// Relative residual `‖mᵀJm − J‖_max / max(1, ‖m‖²_max)`.
    pub fn group_residual(&self, m: &CMatrix) -> f64 {
        if m.nrows() != self.dim() || m.ncols() != self.dim() {
            return f64::INFINITY;
        }
        let lhs = m.transpose() * &self.j * m;
        let scale = linalg::max_abs(m).powi(2).max(1.0);
        linalg::max_abs(&(lhs - &self.j)) / scale
    }

    /// Membership predicate for `G_r`.
    pub fn is_in_group(&self, m: &CMatrix, tol: f64) -> bool {
        self.group_residual(m) <= tol
    }

    /// `J⁻¹ mᵀ J`, the inverse of any `m ∈ G_r`.
    pub fn group_inverse(&self, m: &CMatrix) -> CMatrix {
        // J is a signed permutation, so J⁻¹ = Jᵀ
        self.j.transpose() * m.transpose() * &self.j
    }

    /// Gram matrix `(ω(b_i, b_j))` of a list of vectors.
    pub fn gram_of(&self, vs: &[CVector]) -> CMatrix {
        let k = vs.len();
        CMatrix::from_fn(k, k, |i, j| self.omega_raw(&vs[i], &vs[j]))
    }

    /// The ω-orthogonal complement projector of a non-degenerate span.
    fn complement_projector(&self, span: &[CVector]) -> Result<ComplementProjector> {
        let gram = self.gram_of(span);
        let lu = gram.clone().lu();
        if span.is_empty() {
            return Ok(ComplementProjector {
                span: Vec::new(),
                lu: None,
            });
        }
        let det = lu.determinant();
        if det.norm() <= TOL_GENERIC || !det.is_finite() {
            return Err(Error::Internal(
                "span is degenerate; cannot build its complement".into(),
            ));
        }
        Ok(ComplementProjector {
            span: span.to_vec(),
            lu: Some(lu),
        })
    }

    fn project(&self, proj: &ComplementProjector, v: &CVector) -> CVector {
        let Some(lu) = &proj.lu else {
            return v.clone();
        };
        let mut w = v.clone();
        // second pass removes the rounding left by the first
        for _ in 0..2 {
            let rhs = CVector::from_iterator(
                proj.span.len(),
                proj.span.iter().map(|s| self.omega_raw(s, &w)),
            );
            let coeffs = lu.solve(&rhs).expect("non-singular Gram matrix");
            for (s, &a) in proj.span.iter().zip(coeffs.iter()) {
                w.axpy(-a, s, ONE);
            }
        }
        w
    }

    /// Residual of the adapted Gram relations among the given partial vectors.
    fn partial_residual(&self, partial: &PartialBasis) -> Result<f64> {
        let mut vs = Vec::new();
        let mut expected = Vec::new();
        for (idx, e, f) in &partial.pairs {
            if *idx == 0 || *idx > self.rank() {
                return Err(Error::InvalidArgument(format!(
                    "pair index {idx} outside 1..={}",
                    self.rank()
                )));
            }
            self.check_dim(e)?;
            self.check_dim(f)?;
            vs.push(e.clone());
            expected.push(self.e_index(*idx));
            vs.push(f.clone());
            expected.push(self.f_index(*idx));
        }
        if let Some(h) = &partial.h {
            let k = self.h_index().ok_or_else(|| {
                Error::InvalidArgument("h given but the space has d = 0".into())
            })?;
            self.check_dim(h)?;
            vs.push(h.clone());
            expected.push(k);
        }
        let mut seen = expected.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != expected.len() {
            return Err(Error::InvalidArgument("repeated basis slot".into()));
        }
        let scale = vs.iter().map(|v| v.norm_squared()).fold(1.0, f64::max);
        let mut worst: f64 = 0.0;
        for (a, va) in vs.iter().enumerate() {
            for (b, vb) in vs.iter().enumerate() {
                let want = self.j[(expected[b], expected[a])];
                worst = worst.max((self.omega_raw(va, vb) - want).norm());
            }
        }
        Ok(worst / scale)
    }

    /// Completes a partial adapted basis to a full one.
    ///
    /// Given vectors keep their slots unchanged. Remaining hyperbolic pairs are
    /// filled greedily in basis order from ω-projections of the standard basis:
    /// the e-slot takes the longest candidate (made isotropic when ε = +1), the
    /// f-slot the candidate pairing most strongly with it, rescaled so that
    /// `ω(e', f') = 1` and shifted by `−(q/2)·e'` when ε = +1. The Euclidean
    /// vector is the remaining candidate divided by the principal `√q`.
    pub fn witt_complete(&self, partial: &PartialBasis) -> Result<AdaptedBasis> {
        let residual = self.partial_residual(partial)?;
        if residual > TOL_GENERIC {
            return Err(Error::InvalidPartialBasis { residual });
        }
        let n = self.dim();
        let mut slots: Vec<Option<CVector>> = vec![None; n];
        let mut span = Vec::new();
        for (idx, e, f) in &partial.pairs {
            slots[self.e_index(*idx)] = Some(e.clone());
            slots[self.f_index(*idx)] = Some(f.clone());
            span.push(e.clone());
            span.push(f.clone());
        }
        if let (Some(h), Some(k)) = (&partial.h, self.h_index()) {
            slots[k] = Some(h.clone());
            span.push(h.clone());
        }
        let standard: Vec<CVector> = (0..n).map(|k| self.basis_vector(k)).collect();
        self.fill_slots(&mut slots, &mut span, |proj, _| {
            standard.iter().map(|b| self.project(proj, b)).collect()
        })?;
        Ok(AdaptedBasis {
            vectors: slots.into_iter().map(|s| s.expect("slot filled")).collect(),
        })
    }

    /// Shared completion loop. `candidates` yields vectors to project for a slot.
    fn fill_slots<F>(
        &self,
        slots: &mut [Option<CVector>],
        span: &mut Vec<CVector>,
        mut candidates: F,
    ) -> Result<()>
    where
        F: FnMut(&ComplementProjector, usize) -> Vec<CVector>,
    {
        let eps = self.epsilon();
        for i in (1..=self.rank()).rev() {
            let (ke, kf) = (self.e_index(i), self.f_index(i));
            if slots[ke].is_some() {
                continue;
            }
            let proj = self.complement_projector(span)?;
            let cands = candidates(&proj, i);
            let iu = longest(&cands)
                .ok_or_else(|| Error::Internal("empty complement".into()))?;
            let mut u = cands[iu].clone();
            if eps == 1 {
                u = self.make_isotropic(iu, &cands)?;
            }
            u /= c(u.norm(), 0.0);
            let w0 = cands
                .iter()
                .max_by(|a, b| {
                    self.omega_raw(&u, a)
                        .norm()
                        .total_cmp(&self.omega_raw(&u, b).norm())
                })
                .ok_or_else(|| Error::Internal("empty complement".into()))?;
            let pairing = self.omega_raw(&u, w0);
            if pairing.norm() <= TOL_GENERIC * w0.norm() {
                return Err(Error::Internal(
                    "no partner vector for a hyperbolic pair".into(),
                ));
            }
            let mut w = w0 / pairing;
            if eps == 1 {
                let shift = self.q_raw(&w) / 2.0;
                w.axpy(-shift, &u, ONE);
            }
            span.push(u.clone());
            span.push(w.clone());
            slots[ke] = Some(u);
            slots[kf] = Some(w);
        }
        if let Some(k) = self.h_index() {
            if slots[k].is_none() {
                let proj = self.complement_projector(span)?;
                let cands = candidates(&proj, 0);
                let u = &cands[longest(&cands)
                    .ok_or_else(|| Error::Internal("empty complement".into()))?];
                let qu = self.q_raw(u);
                if qu.norm() <= TOL_GENERIC * u.norm_squared() {
                    return Err(Error::Internal("Euclidean complement is isotropic".into()));
                }
                slots[k] = Some(u / linalg::principal_sqrt(qu));
            }
        }
        Ok(())
    }

    /// An isotropic vector built from the candidates: the longest isotropic
    /// candidate if there is one, otherwise `u + t·w` for the longest `u` and
    /// the first partner `w` (strongest pairing first) giving a non-degenerate
    /// root `t` of `q(u + t·w) = 0`.
    fn make_isotropic(&self, iu: usize, cands: &[CVector]) -> Result<CVector> {
        let iso = |v: &CVector| self.q_raw(v).norm() <= 1e-12 * v.norm_squared();
        let longest_iso = cands
            .iter()
            .filter(|v| v.norm() > 1e-10 * cands[iu].norm() && iso(v))
            .max_by(|a, b| a.norm().total_cmp(&b.norm()));
        if let Some(v) = longest_iso {
            return Ok(v.clone());
        }
        let u = &cands[iu];
        let qu = self.q_raw(u);
        let score = |w: &CVector| {
            let n = w.norm();
            if n == 0.0 {
                0.0
            } else {
                (self.omega_raw(u, w).norm() + self.q_raw(w).norm() / n) / n
            }
        };
        let mut order: Vec<usize> = (0..cands.len()).filter(|&k| k != iu).collect();
        order.sort_by(|&a, &b| score(&cands[b]).total_cmp(&score(&cands[a])));
        for k in order {
            let w = &cands[k];
            let b = self.omega_raw(u, w);
            let a = self.q_raw(w);
            let scale = u.norm() * w.norm() + w.norm_squared();
            if b.norm().max(a.norm()) <= TOL_GENERIC * scale {
                continue;
            }
            let t = smaller_root(a, b, qu);
            let v = u + w * t;
            // a partner parallel to u collapses the combination to zero
            if v.norm() > 1e-3 * u.norm() && iso(&v) {
                return Ok(v);
            }
        }
        Err(Error::Internal(
            "residual space has no isotropic vector to extend with".into(),
        ))
    }

    /// An ω-orthogonal-complement projector for callers outside this module.
    pub fn perp_projector(&self, span: &[CVector]) -> Result<impl Fn(&CVector) -> CVector + '_> {
        let proj = self.complement_projector(span)?;
        Ok(move |v: &CVector| self.project(&proj, v))
    }

    /// Random vector with i.i.d. standard complex Gaussian coordinates.
    pub fn random_vector<R: Rng + ?Sized>(&self, rng: &mut R) -> CVector {
        CVector::from_fn(self.dim(), |_, _| complex_normal(rng))
    }

    /// Random isotropic line.
    ///
    /// For ε = −1 every vector is isotropic. For ε = +1 all coordinates are
    /// drawn and the `f_r` coordinate is solved from `q(v) = 0`.
    pub fn random_isotropic<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<ProjPoint> {
        if self.rank() == 0 {
            return Err(Error::RankTooSmall { r: 0, min: 1 });
        }
        loop {
            let mut v = self.random_vector(rng);
            if self.epsilon() == 1 {
                let (ke, kf) = (self.e_index(self.rank()), self.f_index(self.rank()));
                if v[ke].norm() < 1e-3 {
                    continue;
                }
                v[kf] = ZERO;
                let rest = self.q_raw(&v);
                v[kf] = -rest / (v[ke] * 2.0);
            }
            return ProjPoint::new(v);
        }
    }

    /// Random element of `G_r`: the change of basis onto a random adapted basis.
    pub fn random_group_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<GroupElement> {
        let n = self.dim();
        for _ in 0..64 {
            let mut slots: Vec<Option<CVector>> = vec![None; n];
            let mut span = Vec::new();
            let filled = self.fill_slots(&mut slots, &mut span, |proj, _| {
                // fresh random vectors for every slot
                (0..3)
                    .map(|_| self.project(proj, &self.random_vector(rng)))
                    .collect()
            });
            if filled.is_err() {
                continue;
            }
            let basis = AdaptedBasis {
                vectors: slots.into_iter().map(|s| s.expect("slot filled")).collect(),
            };
            let t = basis.change_of_basis();
            // reject badly conditioned draws
            let sv = linalg::singular_values(&t);
            let cond = sv.first().copied().unwrap_or(0.0) / sv.last().copied().unwrap_or(0.0);
            if !cond.is_finite() || cond > 1e3 {
                continue;
            }
            if self.is_in_group(&t, TOL_GROUP) {
                return Ok(GroupElement::from_matrix_unchecked(t));
            }
        }
        Err(Error::Internal(
            "failed to sample a well-conditioned group element".into(),
        ))
    }

    /// The block embedding `ι_r : G_r → G_{r+1}` fixing `e_{r+1}` and `f_{r+1}`.
    pub fn embed_iota(&self, target: &FormedSpace, m: &GroupElement) -> Result<GroupElement> {
        let p = self.params;
        let q = target.params;
        if q.epsilon != p.epsilon || q.d != p.d || q.r != p.r + 1 {
            return Err(Error::InvalidArgument(format!(
                "embedding target {q} is not the rank-{} extension of {p}",
                p.r + 1
            )));
        }
        if m.matrix().nrows() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: m.matrix().nrows(),
            });
        }
        let n = target.dim();
        let mut out = CMatrix::zeros(n, n);
        out[(0, 0)] = ONE;
        out[(n - 1, n - 1)] = ONE;
        out.view_mut((1, 1), (n - 2, n - 2)).copy_from(m.matrix());
        Ok(GroupElement::from_matrix_unchecked(out))
    }
}

struct ComplementProjector {
    span: Vec<CVector>,
    lu: Option<nalgebra::LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>>,
}

fn longest(cands: &[CVector]) -> Option<usize> {
    // first maximal candidate in basis order
    let mut best: Option<usize> = None;
    for (k, v) in cands.iter().enumerate() {
        if best.is_none_or(|b| v.norm() > cands[b].norm() * (1.0 + 1e-12)) {
            best = Some(k);
        }
    }
    best
}

/// Smaller-modulus root of `a t² + 2 b t + c = 0` with `(a, b) ≠ 0`.
pub(crate) fn smaller_root(a: Complex64, b: Complex64, c0: Complex64) -> Complex64 {
    if a.norm() <= 1e-14 * b.norm() {
        return -c0 / (b * 2.0);
    }
    let disc = (b * b - a * c0).sqrt();
    // b + sign·disc chosen to avoid cancellation, then Vieta for the small root
    let big = if (b + disc).norm() >= (b - disc).norm() {
        -(b + disc)
    } else {
        -(b - disc)
    };
    c0 / big
}
