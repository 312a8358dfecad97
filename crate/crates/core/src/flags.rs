//! Complete affine flags in ℂⁿ and the volume cocycle `Bₙ`.
//!
//! For a 4-tuple of affine flags and `J = (j₀, …, j₃) ∈ {0, …, n−1}⁴`,
//! `T_J` is the quotient `⟨F_i^{j_i+1}⟩ / ⟨F_i^{j_i}⟩` together with the images
//! of the vectors `v_i^{j_i+1}`. `Vol` of that class is the Bloch–Wigner volume
//! of the four image lines when the quotient is 2-dimensional and every image
//! is non-zero, and `0` otherwise; `Bₙ = Σ_J Vol(T_J)`.
//!
//! The SO₄ part works in `V₂^{(+1,0)}` with basis order `e₂, e₁, f₁, f₂` and
//! builds flags from pairs of isotropic planes `(l⁺, l⁻)`.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dilog::vol_p1;
use crate::error::{Error, Result};
use crate::forms::{FormedSpace, GroupElement};
use crate::linalg::{self, CMatrix, CVector, ONE, ZERO};
use crate::rng::complex_normal;
use crate::tolerances::TOL_RANK;

/// A complete flag `{0} ⊂ F¹ ⊂ … ⊂ Fⁿ = ℂⁿ` with chosen vectors
/// `F^j = ⟨v¹, …, v^j⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineFlag {
    vecs: Vec<CVector>,
}

impl AffineFlag {
    /// Needs `n` linearly independent vectors of length `n`.
    pub fn new(vecs: Vec<CVector>) -> Result<Self> {
        let n = vecs.len();
        if n == 0 {
            return Err(Error::InvalidArgument("empty flag".into()));
        }
        if let Some(v) = vecs.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
        let m = linalg::columns_to_matrix(n, &vecs);
        if linalg::numerical_rank(&m) < n {
            return Err(Error::InvalidArgument(
                "flag vectors are linearly dependent".into(),
            ));
        }
        Ok(AffineFlag { vecs })
    }

    /// Random flag with complex Gaussian vectors.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        loop {
            let vecs = (0..n)
                .map(|_| CVector::from_fn(n, |_, _| complex_normal(rng)))
                .collect();
            if let Ok(f) = AffineFlag::new(vecs) {
                return f;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.vecs.len()
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vecs
    }

    /// `v^j`, `1 ≤ j ≤ n`.
    pub fn vector(&self, j: usize) -> &CVector {
        &self.vecs[j - 1]
    }

    /// Spanning vectors of `F^j`.
    pub fn span(&self, j: usize) -> &[CVector] {
        &self.vecs[..j]
    }

    /// `g·F` with vectors `g·v^j`.
    pub fn transform(&self, g: &CMatrix) -> Result<AffineFlag> {
        AffineFlag::new(self.vecs.iter().map(|v| g * v).collect())
    }

    /// Rescales every vector; the underlying flag is unchanged only up to the
    /// affine lift.
    pub fn rescale(&self, factors: &[Complex64]) -> AffineFlag {
        AffineFlag {
            vecs: self
                .vecs
                .iter()
                .zip(factors)
                .map(|(v, &s)| v * s)
                .collect(),
        }
    }
}

/// A σ₃-class: four vectors in a quotient of dimension `m`, in coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Sigma3Class {
    pub m: usize,
    /// `None` marks a zero image.
    pub images: [Option<CVector>; 4],
}

fn check_same_dim(flags: &[AffineFlag]) -> Result<usize> {
    let n = flags[0].dim();
    if let Some(f) = flags.iter().find(|f| f.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: f.dim(),
        });
    }
    Ok(n)
}

/// `dim ⟨F₀^{j₀}, …, F₃^{j₃}⟩ = j₀ + … + j₃` for every index tuple with sum ≤ n.
pub fn general_position(flags: &[AffineFlag; 4]) -> bool {
    let Ok(n) = check_same_dim(flags) else {
        return false;
    };
    let mut cols = Vec::with_capacity(n);
    for j0 in 0..=n {
        for j1 in 0..=n - j0 {
            for j2 in 0..=n - j0 - j1 {
                for j3 in 0..=n - j0 - j1 - j2 {
                    let total = j0 + j1 + j2 + j3;
                    if total == 0 {
                        continue;
                    }
                    cols.clear();
                    for (f, j) in flags.iter().zip([j0, j1, j2, j3]) {
                        cols.extend_from_slice(f.span(j));
                    }
                    let m = linalg::columns_to_matrix(n, &cols);
                    if linalg::numerical_rank(&m) != total {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn flag_scale(flags: &[AffineFlag; 4]) -> f64 {
    flags
        .iter()
        .flat_map(|f| f.vectors().iter().map(|v| v.norm()))
        .fold(0.0, f64::max)
}

/// Appends `v` to the orthonormal basis if it is independent at threshold `thr`.
fn extend_basis(basis: &mut Vec<CVector>, v: &CVector, thr: f64) {
    let w = linalg::project_out(v, basis);
    let nw = w.norm();
    if nw > thr {
        basis.push(w / Complex64::new(nw, 0.0));
    }
}

/// Orthonormal basis of `⟨F₀^{j₀}, …, F₃^{j₃}⟩`, built vector by vector in
/// that order.
fn denominator_basis(flags: &[AffineFlag; 4], j: [usize; 4], thr: f64) -> Vec<CVector> {
    let mut den = Vec::new();
    for (f, &ji) in flags.iter().zip(&j) {
        for v in f.span(ji) {
            extend_basis(&mut den, v, thr);
        }
    }
    den
}

fn class_over(flags: &[AffineFlag; 4], j: [usize; 4], den: &[CVector], scale: f64) -> Sigma3Class {
    let n = flags[0].dim();
    let new: Vec<CVector> = flags
        .iter()
        .zip(&j)
        .map(|(f, &ji)| linalg::project_out(f.vector(ji + 1), den))
        .collect();
    let quotient = linalg::orthonormal_span(n, &new, scale);
    let m = quotient.len();
    let images: Vec<Option<CVector>> = new
        .iter()
        .map(|p| {
            if p.norm() <= TOL_RANK * scale {
                None
            } else {
                Some(CVector::from_iterator(
                    m,
                    quotient.iter().map(|q| linalg::hdot(q, p)),
                ))
            }
        })
        .collect();
    Sigma3Class {
        m,
        images: images.try_into().expect("four images"),
    }
}

/// The quotient class `T_J(F₀, …, F₃)`.
///
/// The quotient is realised as the Hermitian complement of the denominator
/// span inside the numerator span; images are coordinates in an orthonormal
/// basis of that complement. Rank decisions are relative to the largest
/// flag vector.
pub fn t_j(flags: &[AffineFlag; 4], j: [usize; 4]) -> Result<Sigma3Class> {
    let n = check_same_dim(flags)?;
    if let Some(&bad) = j.iter().find(|&&x| x >= n) {
        return Err(Error::InvalidArgument(format!(
            "index {bad} outside 0..{n}"
        )));
    }
    let scale = flag_scale(flags);
    let den = denominator_basis(flags, j, TOL_RANK * scale);
    Ok(class_over(flags, j, &den, scale))
}

/// `Vol` of a σ₃-class: `vol_p1` of the images if `m = 2` and all are non-zero.
pub fn vol_sigma3(class: &Sigma3Class) -> f64 {
    if class.m != 2 {
        return 0.0;
    }
    let mut pts: Vec<CVector> = Vec::with_capacity(4);
    for img in &class.images {
        match img {
            Some(v) => pts.push(v.clone()),
            None => return 0.0,
        }
    }
    vol_p1(&pts.try_into().expect("four points"))
}

/// `Bₙ^J = Vol(T_J(·))`.
pub fn b_n_j(flags: &[AffineFlag; 4], j: [usize; 4]) -> Result<f64> {
    Ok(vol_sigma3(&t_j(flags, j)?))
}

/// All `J ∈ {0, …, n−1}⁴`.
pub fn all_indices(n: usize) -> impl Iterator<Item = [usize; 4]> {
    (0..n.pow(4)).map(move |k| [k % n, (k / n) % n, (k / n / n) % n, k / n / n / n])
}

/// `Bₙ = Σ_J Vol(T_J)` over every index tuple.
///
/// Denominator bases are extended incrementally across the nested index
/// loops; once a denominator fills `ℂⁿ` the quotient is zero and so is every
/// further term along that loop.
pub fn b_n(flags: &[AffineFlag; 4]) -> Result<f64> {
    let n = check_same_dim(flags)?;
    let scale = flag_scale(flags);
    let thr = TOL_RANK * scale;
    let mut acc = 0.0;
    let mut d0 = Vec::with_capacity(n);
    for j0 in 0..n {
        if j0 > 0 {
            extend_basis(&mut d0, flags[0].vector(j0), thr);
        }
        let mut d1 = d0.clone();
        for j1 in 0..n {
            if j1 > 0 {
                extend_basis(&mut d1, flags[1].vector(j1), thr);
            }
            let mut d2 = d1.clone();
            for j2 in 0..n {
                if j2 > 0 {
                    extend_basis(&mut d2, flags[2].vector(j2), thr);
                }
                let mut d3 = d2.clone();
                for j3 in 0..n {
                    if j3 > 0 {
                        extend_basis(&mut d3, flags[3].vector(j3), thr);
                    }
                    if d3.len() == n {
                        break;
                    }
                    acc += vol_sigma3(&class_over(flags, [j0, j1, j2, j3], &d3, scale));
                }
            }
        }
    }
    Ok(acc)
}

/// Index tuples whose class has a 2-dimensional quotient and four non-zero
/// images (the only ones that can contribute).
pub fn contributing_indices(flags: &[AffineFlag; 4]) -> Result<Vec<[usize; 4]>> {
    let n = check_same_dim(flags)?;
    let mut out = Vec::new();
    for j in all_indices(n) {
        let class = t_j(flags, j)?;
        if class.m == 2 && class.images.iter().all(Option::is_some) {
            out.push(j);
        }
    }
    Ok(out)
}

/// `n(n²−1)/6`, the number of `J` with `‖J‖₁ = n − 2`.
pub fn contributing_count(n: usize) -> usize {
    n * (n * n - 1) / 6
}

/// `Σᵢ (−1)ⁱ Bₙ(∂ᵢ F)` over a 5-tuple; every face must be in general position.
pub fn cocycle_residual(flags: &[AffineFlag; 5]) -> Result<f64> {
    let mut acc = 0.0;
    for i in 0..5 {
        let face: Vec<AffineFlag> = (0..5).filter(|&k| k != i).map(|k| flags[k].clone()).collect();
        let face: [AffineFlag; 4] = face.try_into().expect("four flags");
        if !general_position(&face) {
            return Err(Error::not_generic(format!(
                "face {i} is not in general position"
            )));
        }
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * b_n(&face)?;
    }
    Ok(acc)
}

/// `(+1,0)`, `r = 2` coordinates: `e₂, e₁, f₁, f₂`.
pub fn so4_space() -> FormedSpace {
    FormedSpace::new(1, 0, 2).expect("admissible")
}

/// A point `(l_a⁺, l_b⁻)` of the boundary `ℱ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub a: Complex64,
    pub b: Complex64,
}

/// A pair of totally isotropic planes, each given by two spanning vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct LinePair {
    pub plus: [CVector; 2],
    pub minus: [CVector; 2],
}

impl LinePair {
    pub fn transform(&self, g: &GroupElement) -> LinePair {
        LinePair {
            plus: [g.apply(&self.plus[0]), g.apply(&self.plus[1])],
            minus: [g.apply(&self.minus[0]), g.apply(&self.minus[1])],
        }
    }
}

impl BoundaryPoint {
    pub fn new(a: Complex64, b: Complex64) -> Self {
        BoundaryPoint { a, b }
    }

    /// `l_a⁺ = ⟨e₁ − a f₂, e₂ + a f₁⟩`, `l_b⁻ = ⟨e₁ + b e₂, b f₁ − f₂⟩`.
    pub fn lines(&self) -> LinePair {
        let s = so4_space();
        let (e1, e2, f1, f2) = (s.e(1), s.e(2), s.f(1), s.f(2));
        let (a, b) = (self.a, self.b);
        LinePair {
            plus: [&e1 - &f2 * a, &e2 + &f1 * a],
            minus: [&e1 + &e2 * b, &f1 * b - &f2],
        }
    }

    /// `φ_ab = e₁ + b e₂ − a f₂ + ab f₁`, spanning `l_a⁺ ∩ l_b⁻`.
    pub fn phi(&self) -> CVector {
        let s = so4_space();
        let (a, b) = (self.a, self.b);
        s.e(1) + s.e(2) * b - s.f(2) * a + s.f(1) * (a * b)
    }
}

/// Lines of the boundary point `∞`: `l⁺ = ⟨f₁, f₂⟩`, `l⁻ = ⟨f₁, e₂⟩`.
pub fn lines_infinity() -> LinePair {
    let s = so4_space();
    LinePair {
        plus: [s.f(1), s.f(2)],
        minus: [s.f(1), s.e(2)],
    }
}

/// Lines of the boundary point `0`: `l⁺ = ⟨e₁, e₂⟩`, `l⁻ = ⟨e₁, f₂⟩`.
pub fn lines_zero() -> LinePair {
    let s = so4_space();
    LinePair {
        plus: [s.e(1), s.e(2)],
        minus: [s.e(1), s.f(2)],
    }
}

/// `(∞, 0, 1, (a, b))` as line pairs.
pub fn standard_lines_so4(a: Complex64, b: Complex64) -> [LinePair; 4] {
    [
        lines_infinity(),
        lines_zero(),
        BoundaryPoint::new(ONE, ONE).lines(),
        BoundaryPoint::new(a, b).lines(),
    ]
}

/// The flag `ρ(∂θ(a, b))` with vectors `φ_ab, e₁ − a f₂, e₁ + b e₂, f₁`.
pub fn standard_flag_so4(a: Complex64, b: Complex64) -> Result<AffineFlag> {
    let s = so4_space();
    let p = BoundaryPoint::new(a, b);
    AffineFlag::new(vec![
        p.phi(),
        s.e(1) - s.f(2) * a,
        s.e(1) + s.e(2) * b,
        s.f(1),
    ])
}

/// `F_∞` with vectors `f₁, f₂, e₂, e₁`.
pub fn flag_infinity_so4() -> AffineFlag {
    let s = so4_space();
    AffineFlag::new(vec![s.f(1), s.f(2), s.e(2), s.e(1)]).expect("basis")
}

/// `F₀` with vectors `e₁, e₂, f₂, f₁`.
pub fn flag_zero_so4() -> AffineFlag {
    let s = so4_space();
    AffineFlag::new(vec![s.e(1), s.e(2), s.f(2), s.f(1)]).expect("basis")
}

/// `(F_∞, F₀, F₁, F_(a,b))`.
pub fn standard_quadruple_so4(a: Complex64, b: Complex64) -> Result<[AffineFlag; 4]> {
    Ok([
        flag_infinity_so4(),
        flag_zero_so4(),
        standard_flag_so4(ONE, ONE)?,
        standard_flag_so4(a, b)?,
    ])
}

/// `ρ(l⁺, l⁻)`: the flag `l⁺ ∩ l⁻ ⊂ l⁺ ⊂ l⁺ + l⁻ ⊂ ℂ⁴` for a pair of isotropic
/// planes meeting in a line.
pub fn rho(lines: &LinePair) -> Result<AffineFlag> {
    // x·p0 + y·p1 = z·m0 + w·m1
    let m = linalg::columns_to_matrix(
        4,
        &[
            lines.plus[0].clone(),
            lines.plus[1].clone(),
            -lines.minus[0].clone(),
            -lines.minus[1].clone(),
        ],
    );
    let sv = linalg::singular_values(&m);
    if sv.len() < 4 || sv[2] <= TOL_RANK * sv[0] || sv[3] > 1e-6 * sv[0] {
        return Err(Error::not_generic(
            "the two planes do not meet in a single line",
        ));
    }
    let svd = m.svd(false, true);
    let vt = svd.v_t.expect("right singular vectors requested");
    let k = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, _)| k)
        .expect("non-empty");
    let coeff: Vec<Complex64> = vt.row(k).iter().map(|z| z.conj()).collect();
    let phi = &lines.plus[0] * coeff[0] + &lines.plus[1] * coeff[1];
    let unit = |v: &CVector| v / Complex64::new(v.norm(), 0.0);
    let off = |v: &CVector, basis: &[CVector]| linalg::project_out(v, basis).norm() / v.norm();
    let b1 = vec![unit(&phi)];
    let v2 = lines
        .plus
        .iter()
        .max_by(|x, y| off(x, &b1).total_cmp(&off(y, &b1)))
        .expect("two vectors")
        .clone();
    let b2 = linalg::orthonormal_span(4, &[phi.clone(), v2.clone()], phi.norm().max(v2.norm()));
    let v3 = lines
        .minus
        .iter()
        .max_by(|x, y| off(x, &b2).total_cmp(&off(y, &b2)))
        .expect("two vectors")
        .clone();
    let b3 = linalg::orthonormal_span(4, &[phi.clone(), v2.clone(), v3.clone()], 1.0);
    let v4 = (0..4)
        .map(|k| {
            let mut e = CVector::from_element(4, ZERO);
            e[k] = ONE;
            e
        })
        .max_by(|x, y| off(x, &b3).total_cmp(&off(y, &b3)))
        .expect("four basis vectors");
    AffineFlag::new(vec![phi, v2, v3, v4])
}

/// `B₄(ρ(x₀), …, ρ(x₃))` for four boundary points given as line pairs.
pub fn b4_on_boundary(points: &[LinePair; 4]) -> Result<f64> {
    let flags: Vec<AffineFlag> = points.iter().map(rho).collect::<Result<_>>()?;
    b_n(&flags.try_into().expect("four flags"))
}

/// `B₄(F_∞, F₀, F₁, F_(a,b))`.
pub fn b4_standard(a: Complex64, b: Complex64) -> Result<f64> {
    b_n(&standard_quadruple_so4(a, b)?)
}

/// A random element of `SO₄(ℂ)` in the `(+1,0)`, `r = 2` coordinates.
pub fn random_so4<R: Rng + ?Sized>(rng: &mut R) -> Result<GroupElement> {
    let s = so4_space();
    let g = s.random_group_element(rng)?;
    if g.det().re > 0.0 {
        return Ok(g);
    }
    // swapping e₁ and f₁ preserves the form and has determinant −1
    let mut swap = CMatrix::identity(4, 4);
    let (i, j) = (s.e_index(1), s.f_index(1));
    swap[(i, i)] = ZERO;
    swap[(j, j)] = ZERO;
    swap[(i, j)] = ONE;
    swap[(j, i)] = ONE;
    let swap = GroupElement::try_new(&s, swap)?;
    Ok(g.compose(&swap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dilog::{bloch_wigner, p1_infinity, p1_point};
    use crate::linalg::c;
    use crate::rng::stream;

    fn random_tuple<R: Rng>(n: usize, k: usize, rng: &mut R) -> Vec<AffineFlag> {
        (0..k).map(|_| AffineFlag::random(n, rng)).collect()
    }

    #[test]
    fn lines_are_isotropic_and_meet_in_phi() {
        let s = so4_space();
        let p = BoundaryPoint::new(c(0.3, 0.4), c(-1.2, 0.5));
        let l = p.lines();
        for pair in [&l.plus, &l.minus] {
            for v in pair.iter() {
                for w in pair.iter() {
                    assert!(s.omega(v, w).unwrap().norm() < 1e-15);
                }
            }
        }
        let phi = p.phi();
        let in_plus = &l.plus[0] + &l.plus[1] * p.b;
        let in_minus = &l.minus[0] + &l.minus[1] * p.a;
        assert!((in_plus - &phi).norm() < 1e-15);
        assert!((in_minus - &phi).norm() < 1e-15);
        // coordinates [1, b, −a, ab] in the order (e₁, e₂, f₂, f₁)
        let coords = [phi[s.e_index(1)], phi[s.e_index(2)], phi[s.f_index(2)], phi[s.f_index(1)]];
        assert_eq!(coords, [ONE, p.b, -p.a, p.a * p.b]);
    }

    #[test]
    fn contributing_counts() {
        assert_eq!(contributing_count(3), 4);
        assert_eq!(contributing_count(4), 10);
        for n in 2..=6 {
            let by_sum = all_indices(n).filter(|j| j.iter().sum::<usize>() == n - 2).count();
            assert_eq!(by_sum, contributing_count(n));
        }
        let mut rng = stream(41, "flags-count", 0);
        for n in 2..=4 {
            let fl: [AffineFlag; 4] = random_tuple(n, 4, &mut rng).try_into().unwrap();
            let js = contributing_indices(&fl).unwrap();
            assert_eq!(js.len(), contributing_count(n));
            assert!(js.iter().all(|j| j.iter().sum::<usize>() == n - 2));
        }
    }

    #[test]
    fn b2_is_vol_on_the_line() {
        let z = c(0.4, 0.9);
        let pts = [p1_infinity(), p1_point(ZERO), p1_point(ONE), p1_point(z)];
        let flags: Vec<AffineFlag> = pts
            .iter()
            .map(|v| {
                let other = if v[0].norm() > 0.5 { p1_infinity() } else { p1_point(ZERO) };
                AffineFlag::new(vec![v.clone(), other]).unwrap()
            })
            .collect();
        let fl: [AffineFlag; 4] = flags.try_into().unwrap();
        assert!((b_n(&fl).unwrap() - bloch_wigner(z)).abs() < 1e-14);
        let class = t_j(&fl, [0, 0, 0, 0]).unwrap();
        assert_eq!(class.m, 2);
    }

    #[test]
    fn b_n_is_the_sum_over_all_classes() {
        let mut rng = stream(47, "flags-sum", 0);
        for n in 2..=4 {
            let fl: [AffineFlag; 4] = random_tuple(n, 4, &mut rng).try_into().unwrap();
            let direct: f64 = all_indices(n).map(|j| b_n_j(&fl, j).unwrap()).sum();
            assert!((b_n(&fl).unwrap() - direct).abs() < 1e-12);
        }
        for _ in 0..5 {
            let (a, b) = (complex_normal(&mut rng), complex_normal(&mut rng));
            let fl = standard_quadruple_so4(a, b).unwrap();
            let direct: f64 = all_indices(4).map(|j| b_n_j(&fl, j).unwrap()).sum();
            assert!((b_n(&fl).unwrap() - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_classes_vanish() {
        let class = Sigma3Class {
            m: 3,
            images: [None, None, None, None],
        };
        assert_eq!(vol_sigma3(&class), 0.0);
        let class = Sigma3Class {
            m: 2,
            images: [Some(p1_point(ONE)), None, Some(p1_point(ZERO)), Some(p1_infinity())],
        };
        assert_eq!(vol_sigma3(&class), 0.0);
    }

    #[test]
    fn general_position_checks() {
        let mut rng = stream(42, "flags-gp", 0);
        let f = AffineFlag::random(3, &mut rng);
        assert!(!general_position(&[f.clone(), f.clone(), f.clone(), f]));
        for n in 2..=4 {
            let fl: [AffineFlag; 4] = random_tuple(n, 4, &mut rng).try_into().unwrap();
            assert!(general_position(&fl));
        }
    }

    #[test]
    fn cocycle_alternation_invariance() {
        let mut rng = stream(43, "flags-cocycle", 0);
        for n in 2..=4 {
            for _ in 0..5 {
                let fl: [AffineFlag; 5] = random_tuple(n, 5, &mut rng).try_into().unwrap();
                assert!(cocycle_residual(&fl).unwrap().abs() < 1e-8);
                let four: [AffineFlag; 4] = fl[..4].to_vec().try_into().unwrap();
                let b = b_n(&four).unwrap();
                let swapped = [four[1].clone(), four[0].clone(), four[2].clone(), four[3].clone()];
                assert!((b_n(&swapped).unwrap() + b).abs() < 1e-9);
                let g = CMatrix::from_fn(n, n, |_, _| complex_normal(&mut rng));
                let moved: Vec<AffineFlag> = four.iter().map(|f| f.transform(&g).unwrap()).collect();
                assert!((b_n(&moved.try_into().unwrap()).unwrap() - b).abs() < 1e-9);
                let factors: Vec<Complex64> = (0..n).map(|_| complex_normal(&mut rng)).collect();
                let lifted = [four[0].rescale(&factors), four[1].clone(), four[2].clone(), four[3].clone()];
                assert!((b_n(&lifted).unwrap() - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn closed_form_value_and_table() {
        let mut rng = stream(44, "flags-bbi", 0);
        let d = bloch_wigner;
        for _ in 0..20 {
            let (a, b) = (complex_normal(&mut rng), complex_normal(&mut rng));
            let fl = standard_quadruple_so4(a, b).unwrap();
            let total = b_n(&fl).unwrap();
            assert!((total - 2.0 * (d(a) + d(b))).abs() < 1e-8, "{a} {b}");
            let table: [([usize; 4], f64); 10] = [
                ([2, 0, 0, 0], d(b)),
                ([0, 2, 0, 0], d(b)),
                ([0, 0, 2, 0], d(b)),
                ([0, 0, 0, 2], d(b)),
                ([1, 1, 0, 0], -d(b / a)),
                ([0, 0, 1, 1], -d(b / a)),
                ([1, 0, 1, 0], d((ONE - b) / (ONE - a))),
                ([0, 1, 0, 1], d((ONE - b) / (ONE - a))),
                ([1, 0, 0, 1], -d(a * (ONE - b) / (b * (ONE - a)))),
                ([0, 1, 1, 0], -d(a * (ONE - b) / (b * (ONE - a)))),
            ];
            for (j, want) in table {
                let got = b_n_j(&fl, j).unwrap();
                assert!((got - want).abs() < 1e-9, "J = {j:?}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn rho_of_standard_points() {
        let d = bloch_wigner;
        let mut rng = stream(46, "flags-rho-std", 0);
        for _ in 0..10 {
            let (a, b) = (complex_normal(&mut rng), complex_normal(&mut rng));
            let v = b4_on_boundary(&standard_lines_so4(a, b)).unwrap();
            assert!((v - 2.0 * (d(a) + d(b))).abs() < 1e-8);
        }
    }

    #[test]
    fn rho_matches_standard_flags_and_is_so4_invariant() {
        let mut rng = stream(45, "flags-rho", 0);
        for _ in 0..10 {
            let pts: Vec<BoundaryPoint> = (0..4)
                .map(|_| BoundaryPoint::new(complex_normal(&mut rng), complex_normal(&mut rng)))
                .collect();
            let lines: Vec<LinePair> = pts.iter().map(BoundaryPoint::lines).collect();
            let lines: [LinePair; 4] = lines.try_into().unwrap();
            let direct: Vec<AffineFlag> = pts
                .iter()
                .map(|p| standard_flag_so4(p.a, p.b).unwrap())
                .collect();
            let value = b4_on_boundary(&lines).unwrap();
            assert!((value - b_n(&direct.try_into().unwrap()).unwrap()).abs() < 1e-9);
            let g = random_so4(&mut rng).unwrap();
            assert!((g.det() - ONE).norm() < 1e-8);
            let moved: Vec<LinePair> = lines.iter().map(|l| l.transform(&g)).collect();
            let moved_value = b4_on_boundary(&moved.try_into().unwrap()).unwrap();
            assert!((moved_value - value).abs() < 1e-8);
            assert!(value.abs() <= 4.0 * crate::dilog::v_max() + 1e-6);
        }
    }
}
