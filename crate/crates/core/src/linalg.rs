//! Small dense complex linear algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::tolerances::TOL_RANK;

pub type CVector = DVector<Complex64>;
pub type CMatrix = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Vector from a slice of complex entries.
pub fn cvec(entries: &[Complex64]) -> CVector {
    DVector::from_column_slice(entries)
}

pub fn columns_to_matrix(nrows: usize, columns: &[CVector]) -> CMatrix {
    let mut m = CMatrix::zeros(nrows, columns.len());
    for (j, col) in columns.iter().enumerate() {
        m.set_column(j, col);
    }
    m
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_vec(v: &CVector) -> f64 {
    v.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Singular values in decreasing order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    sv
}

/// Number of singular values above `TOL_RANK` times the largest one.
pub fn numerical_rank(m: &CMatrix) -> usize {
    let sv = singular_values(m);
    match sv.first() {
        Some(&top) if top > 0.0 => sv.iter().filter(|&&s| s > TOL_RANK * top).count(),
        _ => 0,
    }
}

/// Orthonormal basis (standard Hermitian product) of the span of `columns`.
///
/// `scale` fixes the absolute size below which singular values count as zero:
/// the threshold is `TOL_RANK * scale`. Passing the norm of the ambient data
/// keeps rank decisions consistent between a subspace and the space it sits in.
pub fn orthonormal_span(dim: usize, columns: &[CVector], scale: f64) -> Vec<CVector> {
    if columns.is_empty() || scale <= 0.0 {
        return Vec::new();
    }
    // Gram-Schmidt with column pivoting: at every step the remaining column
    // with the largest residual is orthonormalised, and the sweep stops once
    // every residual is below the threshold. Residual norms after pivoting
    // track the singular values closely enough for rank decisions.
    let mut residual: Vec<CVector> = columns.to_vec();
    let mut basis: Vec<CVector> = Vec::with_capacity(dim.min(columns.len()));
    while basis.len() < dim {
        let Some((k, norm)) = residual
            .iter()
            .map(|v| v.norm())
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(&b.1))
        else {
            break;
        };
        if !(norm > TOL_RANK * scale) {
            break;
        }
        let v = residual.swap_remove(k);
        // re-orthogonalise against the basis before normalising
        let v = project_out(&v, &basis);
        let nv = v.norm();
        if !(nv > TOL_RANK * scale) {
            continue;
        }
        let q = v / Complex64::new(nv, 0.0);
        for w in residual.iter_mut() {
            let coeff = hdot(&q, w);
            w.axpy(-coeff, &q, ONE);
        }
        basis.push(q);
    }
    basis
}

/// Hermitian inner product `⟨a, b⟩ = Σ conj(aᵢ) bᵢ`.
pub fn hdot(a: &CVector, b: &CVector) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Removes from `v` its components along the orthonormal vectors `basis`.
pub fn project_out(v: &CVector, basis: &[CVector]) -> CVector {
    let mut w = v.clone();
    // two passes of modified Gram-Schmidt keep the residual orthogonal to working precision
    for _ in 0..2 {
        for b in basis {
            let coeff = hdot(b, &w);
            w.axpy(-coeff, b, ONE);
        }
    }
    w
}

/// Chordal distance between the lines spanned by `a` and `b`, in `[0, 1]`.
pub fn chordal_distance(a: &CVector, b: &CVector) -> f64 {
    let na = a.norm();
    let nb = b.norm();
    if na == 0.0 || nb == 0.0 {
        return if na == nb { 0.0 } else { 1.0 };
    }
    // sine of the angle as the residual of b off the line of a; unlike
    // √(1 − cos²) this keeps full relative accuracy for nearby lines
    let ua = a / Complex64::new(na, 0.0);
    let ub = b / Complex64::new(nb, 0.0);
    let off = &ub - &ua * hdot(&ua, &ub);
    off.norm().min(1.0)
}

/// Solves a 2×2 system, returning the solution and a 1-norm condition estimate.
pub fn solve2(a: [[Complex64; 2]; 2], rhs: [Complex64; 2]) -> Option<([Complex64; 2], f64)> {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let norm = (a[0][0].norm() + a[1][0].norm()).max(a[0][1].norm() + a[1][1].norm());
    if det.norm() == 0.0 || !det.is_finite() {
        return None;
    }
    let inv_norm = (a[1][1].norm() + a[1][0].norm()).max(a[0][1].norm() + a[0][0].norm()) / det.norm();
    let x0 = (rhs[0] * a[1][1] - a[0][1] * rhs[1]) / det;
    let x1 = (a[0][0] * rhs[1] - a[1][0] * rhs[0]) / det;
    Some(([x0, x1], norm * inv_norm))
}

/// Solves `m x = rhs` for a square matrix by LU, `None` when singular.
pub fn solve(m: &CMatrix, rhs: &CVector) -> Option<CVector> {
    m.clone().lu().solve(rhs)
}

/// Principal complex square root (non-negative real part, upper half on the negative axis).
pub fn principal_sqrt(z: Complex64) -> Complex64 {
    if z.im == 0.0 && z.re < 0.0 {
        return Complex64::new(0.0, (-z.re).sqrt());
    }
    z.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_dependent_columns() {
        let a = cvec(&[ONE, c(2.0, 0.0), ZERO]);
        let b = cvec(&[c(2.0, 0.0), c(4.0, 0.0), ZERO]);
        let e = cvec(&[ZERO, ZERO, I]);
        assert_eq!(numerical_rank(&columns_to_matrix(3, &[a.clone(), b.clone()])), 1);
        assert_eq!(numerical_rank(&columns_to_matrix(3, &[a, b, e])), 2);
    }

    #[test]
    fn principal_sqrt_branch() {
        assert_eq!(principal_sqrt(c(-2.0, 0.0)), c(0.0, 2f64.sqrt()));
        let r = principal_sqrt(c(-2.0, -0.0));
        assert!(r.re >= 0.0 && r.im > 0.0);
        let z = c(-3.0, 1e-3);
        assert!((principal_sqrt(z) * principal_sqrt(z) - z).norm() < 1e-14);
        assert!(principal_sqrt(c(1.0, -5.0)).re > 0.0);
    }

    #[test]
    fn solve2_matches_direct_substitution() {
        let a = [[c(1.0, 1.0), c(2.0, 0.0)], [c(0.0, -1.0), c(3.0, 0.5)]];
        let rhs = [c(1.0, 0.0), c(0.0, 2.0)];
        let (x, cond) = solve2(a, rhs).unwrap();
        for row in 0..2 {
            let lhs = a[row][0] * x[0] + a[row][1] * x[1];
            assert!((lhs - rhs[row]).norm() < 1e-14);
        }
        assert!(cond >= 1.0);
    }

    #[test]
    fn chordal_distance_is_projective() {
        let a = cvec(&[ONE, c(0.5, -1.0)]);
        let b = a.map(|z| z * c(-3.0, 2.0));
        assert!(chordal_distance(&a, &b) < 1e-15);
        let e1 = cvec(&[ONE, ZERO]);
        let e2 = cvec(&[ZERO, ONE]);
        assert!((chordal_distance(&e1, &e2) - 1.0).abs() < 1e-15);
    }
}
