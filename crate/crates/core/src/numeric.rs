//! Floating-point kernels shared by the path and frame machinery: a Jacobi
//! eigensolver for hermitian matrices over `Complex64`, hermitian matrix
//! functions, the polar decomposition, and the principal logarithm of a
//! unitary matrix via simultaneous diagonalization of its hermitian parts.
//!
//! Everything here runs on `Mat<Complex64>`; real inputs ride along with
//! zero imaginary parts.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::Mat;

pub type CMat = Mat<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Eigendecomposition of a hermitian matrix by cyclic complex Jacobi
/// rotations: returns `(eigenvalues, V)` with `A = V·diag(λ)·V*`, the
/// eigenvalues sorted ascending.
pub fn hermitian_eig(a: &CMat) -> Result<(Vec<f64>, CMat)> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::Shape(format!(
            "expected square, got {}x{}",
            n,
            a.cols()
        )));
    }
    let scale = a.max_abs().max(1.0);
    if a.sub(&a.conj_transpose()).max_abs() > 1e-10 * scale {
        return Err(Error::numeric(
            "not-hermitian",
            "input is not hermitian within tolerance".to_string(),
        ));
    }
    let mut m = a.clone();
    let mut v: CMat = Mat::identity(n);
    let tol = 1e-15 * scale;
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off = off.max(m[(p, q)].norm());
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r <= tol {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let phase = apq / r;
                // with the phase removed, rotate like the real symmetric case
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cc = 1.0 / (1.0 + t * t).sqrt();
                let ss = t * cc;
                // 2x2 unitary T = [[c, s·phase], [-s·conj(phase)... ]] applied as A ← T* A T
                let t11 = c(cc, 0.0);
                let t12 = phase * ss;
                let t21 = -phase.conj() * ss;
                let t22 = c(cc, 0.0);
                // columns p and q of m and v update by right multiplication
                for i in 0..n {
                    let mip = m[(i, p)];
                    let miq = m[(i, q)];
                    m[(i, p)] = mip * t11 + miq * t21;
                    m[(i, q)] = mip * t12 + miq * t22;
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * t11 + viq * t21;
                    v[(i, q)] = vip * t12 + viq * t22;
                }
                // rows p and q update by left multiplication with T*
                for j in 0..n {
                    let mpj = m[(p, j)];
                    let mqj = m[(q, j)];
                    m[(p, j)] = t11.conj() * mpj + t21.conj() * mqj;
                    m[(q, j)] = t12.conj() * mpj + t22.conj() * mqj;
                }
                m[(p, q)] = c(0.0, 0.0);
                m[(q, p)] = c(0.0, 0.0);
            }
        }
    }
    let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (m[(i, i)].re, i)).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite eigenvalues"));
    let eigs: Vec<f64> = pairs.iter().map(|&(l, _)| l).collect();
    let perm: Vec<usize> = pairs.iter().map(|&(_, i)| i).collect();
    let v = v.permute_cols(&perm);
    Ok((eigs, v))
}

/// Apply a real function to a hermitian matrix through its spectrum.
pub fn hermitian_func(a: &CMat, f: impl Fn(f64) -> f64) -> Result<CMat> {
    let (eigs, v) = hermitian_eig(a)?;
    Ok(recombine(
        &eigs.iter().map(|&l| c(f(l), 0.0)).collect::<Vec<_>>(),
        &v,
    ))
}

pub(crate) fn recombine(diag: &[Complex64], v: &CMat) -> CMat {
    let n = v.rows();
    let mut scaled = v.clone();
    for j in 0..n {
        for i in 0..n {
            scaled[(i, j)] *= diag[j];
        }
    }
    scaled.mul(&v.conj_transpose())
}

/// Polar decomposition of a full-column-rank matrix: `A = U·exp(S)` with
/// `U*U = I` and `S = S*`. Returns `(U, S)`.
pub fn polar_decompose(a: &CMat) -> Result<(CMat, CMat)> {
    let h = a.conj_transpose().mul(a);
    let (eigs, v) = hermitian_eig(&h)?;
    let scale = eigs.last().copied().unwrap_or(0.0).max(1.0);
    if eigs.iter().any(|&l| l <= 1e-12 * scale) {
        return Err(Error::domain(
            "rank-deficient",
            "polar decomposition needs full column rank".to_string(),
        ));
    }
    let inv_sqrt = recombine(
        &eigs
            .iter()
            .map(|&l| c(1.0 / l.sqrt(), 0.0))
            .collect::<Vec<_>>(),
        &v,
    );
    let u = a.mul(&inv_sqrt);
    let s = recombine(
        &eigs
            .iter()
            .map(|&l| c(0.5 * l.ln(), 0.0))
            .collect::<Vec<_>>(),
        &v,
    );
    Ok((u, s))
}

/// Spectral data of a unitary matrix: `W = V·diag(e^{iθ})·V*` with principal
/// angles `θ ∈ (−π, π]`. Powers `W^s = V·diag(e^{isθ})·V*` sample the
/// one-parameter subgroup through `W`.
pub struct UnitarySpectrum {
    pub v: CMat,
    pub theta: Vec<f64>,
}

impl UnitarySpectrum {
    /// The interpolant `W^s`.
    pub fn power(&self, s: f64) -> CMat {
        let diag: Vec<Complex64> = self
            .theta
            .iter()
            .map(|&t| Complex64::from_polar(1.0, s * t))
            .collect();
        recombine(&diag, &self.v)
    }

    /// Skew-hermitian principal logarithm `V·diag(iθ)·V*`.
    pub fn log(&self) -> CMat {
        recombine(
            &self
                .theta
                .iter()
                .map(|&t| c(0.0, 1.0) * t)
                .collect::<Vec<_>>(),
            &self.v,
        )
    }
}

/// Diagonalize a unitary matrix by simultaneously diagonalizing its
/// hermitian and antihermitian parts. Fails with a `log-branch-failure`
/// when the numerical diagonalization does not reconstruct the input, which
/// callers treat as a signal to fall back to interpolation-based paths.
pub fn unitary_spectrum(w: &CMat) -> Result<UnitarySpectrum> {
    let n = w.rows();
    if w.cols() != n {
        return Err(Error::Shape(format!(
            "expected square, got {}x{}",
            n,
            w.cols()
        )));
    }
    let wh = w.conj_transpose();
    if w.mul(&wh).sub(&Mat::identity(n)).max_abs() > 1e-8 {
        return Err(Error::numeric(
            "not-unitary",
            "input is not unitary within tolerance".to_string(),
        ));
    }
    // H = (W + W*)/2 and K = (W − W*)/(2i) are commuting hermitian matrices
    let half = c(0.5, 0.0);
    let h = w.add(&wh).scale(&half);
    let k = w.sub(&wh).scale(&(c(0.0, -0.5)));
    let (h_eigs, mut v) = hermitian_eig(&h)?;
    // refine eigenvectors inside (nearly) degenerate H-eigenspaces by
    // diagonalizing K there
    let group_tol = 1e-8;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (h_eigs[end] - h_eigs[end - 1]).abs() < group_tol {
            end += 1;
        }
        if end - start > 1 {
            let idx: Vec<usize> = (start..end).collect();
            let vg = v.columns(&idx);
            let kg = vg.conj_transpose().mul(&k).mul(&vg);
            let (_, q) = hermitian_eig(&kg)?;
            let refined = vg.mul(&q);
            for (j, &col) in idx.iter().enumerate() {
                for i in 0..n {
                    v[(i, col)] = refined[(i, j)];
                }
            }
        }
        start = end;
    }
    let d = v.conj_transpose().mul(w).mul(&v);
    let mut theta = Vec::with_capacity(n);
    for i in 0..n {
        theta.push(d[(i, i)].arg());
    }
    let spec = UnitarySpectrum { v, theta };
    if spec.power(1.0).sub(w).max_abs() > 1e-8 {
        return Err(Error::numeric(
            "log-branch-failure",
            "simultaneous diagonalization did not reconstruct the unitary".to_string(),
        ));
    }
    Ok(spec)
}

/// Inverse by Gaussian elimination with partial pivoting.
pub fn inverse(a: &CMat) -> Result<CMat> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::Shape(format!(
            "expected square, got {}x{}",
            n,
            a.cols()
        )));
    }
    let mut m = a.hstack(&Mat::identity(n));
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&p, &q| {
                m[(p, col)]
                    .norm()
                    .partial_cmp(&m[(q, col)].norm())
                    .expect("finite entries")
            })
            .expect("nonempty range");
        if m[(pivot, col)].norm() < 1e-14 {
            return Err(Error::numeric(
                "singular",
                "matrix is numerically singular".to_string(),
            ));
        }
        if pivot != col {
            for j in 0..2 * n {
                let t = m[(pivot, j)];
                m[(pivot, j)] = m[(col, j)];
                m[(col, j)] = t;
            }
        }
        let inv = 1.0 / m[(col, col)];
        for j in 0..2 * n {
            m[(col, j)] *= inv;
        }
        for row in 0..n {
            if row != col && m[(row, col)].norm() > 0.0 {
                let factor = m[(row, col)];
                for j in 0..2 * n {
                    let t = factor * m[(col, j)];
                    m[(row, j)] -= t;
                }
            }
        }
    }
    Ok(Mat::from_fn(n, n, |i, j| m[(i, n + j)]))
}

/// Unitary polar factor of a square invertible matrix by the Newton
/// iteration `Q ← (Q + Q⁻*)/2`; avoids forming `A*A`, so the accuracy does
/// not degrade with the square of the condition number.
pub fn polar_newton(a: &CMat) -> Result<CMat> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::Shape(format!(
            "expected square, got {}x{}",
            n,
            a.cols()
        )));
    }
    let mut q = a.clone();
    for _ in 0..40 {
        let residual = q.conj_transpose().mul(&q).sub(&Mat::identity(n)).max_abs();
        if residual < 1e-14 {
            return Ok(q);
        }
        let q_inv_star = inverse(&q)?.conj_transpose();
        q = q.add(&q_inv_star).scale(&c(0.5, 0.0));
    }
    let residual = q.conj_transpose().mul(&q).sub(&Mat::identity(n)).max_abs();
    if residual < 1e-10 {
        Ok(q)
    } else {
        Err(Error::numeric(
            "polar-divergence",
            format!("polar Newton stalled at residual {residual:.3e}"),
        ))
    }
}

/// Project a near-member onto the compact group of unitary matrices
/// commuting with the quaternionic structure `A ↦ J·Ā·J⁻¹` (equivalently,
/// unitary block-symplectic matrices): average with the structure conjugate
/// and take the unitary polar factor, twice. Both invariants land at machine
/// precision for inputs within ~1e-6 of the group.
pub fn project_unitary_symplectic(q: &CMat) -> Result<CMat> {
    let dim = q.rows();
    if !dim.is_multiple_of(2) || q.cols() != dim {
        return Err(Error::Shape(format!(
            "expected even square, got {}x{}",
            dim,
            q.cols()
        )));
    }
    let n = dim / 2;
    // J·Ā·J⁻¹ in block index arithmetic: J(x, y) = (y, −x), J⁻¹ = −J
    let structure_conj = |a: &CMat| -> CMat {
        Mat::from_fn(dim, dim, |i, j| {
            let (si, flip_i) = if i < n { (n + i, false) } else { (i - n, true) };
            let (sj, flip_j) = if j < n { (n + j, false) } else { (j - n, true) };
            let sign = if flip_i != flip_j { -1.0 } else { 1.0 };
            a[(si, sj)].conj() * sign
        })
    };
    let half = c(0.5, 0.0);
    let mut out = q.clone();
    for _ in 0..2 {
        let avg = out.add(&structure_conj(&out)).scale(&half);
        let (u, _) = polar_decompose(&avg)?;
        out = u;
    }
    Ok(out)
}

/// Frobenius-style max-entry distance of `a*a` from the identity.
pub fn gram_residual(a: &CMat) -> f64 {
    let g = a.conj_transpose().mul(a);
    g.sub(&Mat::identity(a.cols())).max_abs()
}
