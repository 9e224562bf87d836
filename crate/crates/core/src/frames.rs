//! Isotropic and symplectic frame machinery: the isotropic-to-symplectic
//! extension, the restricted polar decomposition, the Cayley–Dickson packing
//! that identifies orthogonal symplectic 2r-frames with r-frames over the
//! doubled algebra, and geodesic paths between doubled frames.
//!
//! All matrices in this module use the block (`Jn`) pairing convention.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::numeric::{self, CMat};
use crate::scalar::{Complex64, FloatScalar, Scalar};

/// `J_n` applied to a block vector: (x, y) ↦ (y, −x), as an index map on a
/// column of length 2n.
fn apply_j<S: Scalar>(col: &[S]) -> Vec<S> {
    let n = col.len() / 2;
    let mut out = Vec::with_capacity(2 * n);
    for p in 0..n {
        out.push(col[n + p].clone());
    }
    for p in 0..n {
        out.push(-col[p].clone());
    }
    out
}

/// Linear injection pulling the block symplectic form back to zero:
/// `matrixᵀ·J_n·matrix = 0` with independent columns.
#[derive(Clone, PartialEq, Debug)]
pub struct IsotropicEmbedding<S> {
    pub n: usize,
    pub d: usize,
    pub mat: Mat<S>,
}

impl<S: Scalar> IsotropicEmbedding<S> {
    pub fn new(n: usize, mat: Mat<S>) -> Result<Self> {
        let d = mat.cols();
        if mat.rows() != 2 * n {
            return Err(Error::Shape(format!(
                "expected {} rows, got {}",
                2 * n,
                mat.rows()
            )));
        }
        let tol = if S::EXACT {
            0.0
        } else {
            1e-8 * mat.max_abs().max(1.0)
        };
        // ϕᵀ J ϕ = 0, entry by entry
        for a in 0..d {
            for b in 0..d {
                let jb = apply_j(&mat.col(b));
                let mut pair = S::zero();
                for i in 0..2 * n {
                    pair = pair + mat[(i, a)].clone() * jb[i].clone();
                }
                if pair.abs_f64() > tol {
                    return Err(Error::domain(
                        "not-isotropic",
                        format!("columns {a},{b} pair to a nonzero value"),
                    ));
                }
            }
        }
        Ok(IsotropicEmbedding { n, d, mat })
    }

    /// Hermitian Gram `ϕ*ϕ`.
    pub fn gram(&self) -> Mat<S> {
        self.mat.conj_transpose().mul(&self.mat)
    }

    pub fn is_orthonormal(&self, tol: f64) -> bool {
        self.gram().sub(&Mat::identity(self.d)).max_abs() <= tol
    }
}

/// Orthonormal 2r-frame preserving the block symplectic form:
/// `MᵀJ_nM = J_r` and `M*M = I`.
#[derive(Clone, PartialEq, Debug)]
pub struct OrthSymplecticFrame<S> {
    pub n: usize,
    pub r: usize,
    pub mat: Mat<S>,
}

impl<S: Scalar> OrthSymplecticFrame<S> {
    pub fn new(n: usize, mat: Mat<S>) -> Result<Self> {
        if !mat.cols().is_multiple_of(2) {
            return Err(Error::Shape("frame needs an even number of columns".into()));
        }
        let r = mat.cols() / 2;
        if mat.rows() != 2 * n {
            return Err(Error::Shape(format!(
                "expected {} rows, got {}",
                2 * n,
                mat.rows()
            )));
        }
        let frame = OrthSymplecticFrame { n, r, mat };
        let tol = if S::EXACT { 0.0 } else { 1e-8 };
        if frame.symplectic_residual() > tol || frame.orthonormal_residual() > tol {
            return Err(Error::domain(
                "not-orthonormal-symplectic",
                "frame violates the symplectic or orthonormality invariant".to_string(),
            ));
        }
        Ok(frame)
    }

    /// Skip invariant validation; for perturbation experiments and tests.
    pub fn from_matrix_unchecked(n: usize, mat: Mat<S>) -> Self {
        let r = mat.cols() / 2;
        OrthSymplecticFrame { n, r, mat }
    }

    /// Max-norm deviation of `MᵀJ_nM` from `J_r`.
    pub fn symplectic_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for a in 0..2 * self.r {
            for b in 0..2 * self.r {
                let jb = apply_j(&self.mat.col(b));
                let mut pair = S::zero();
                for i in 0..2 * self.n {
                    pair = pair + self.mat[(i, a)].clone() * jb[i].clone();
                }
                let expected = j_entry::<S>(self.r, a, b);
                worst = worst.max((pair - expected).abs_f64());
            }
        }
        worst
    }

    /// Max-norm deviation of `M*M` from the identity.
    pub fn orthonormal_residual(&self) -> f64 {
        self.mat
            .conj_transpose()
            .mul(&self.mat)
            .sub(&Mat::identity(2 * self.r))
            .max_abs()
    }

    /// The canonical embedding: columns ε₁..ε_r, ε_{n+1}..ε_{n+r}.
    pub fn canonical(n: usize, r: usize) -> Result<Self> {
        if r > n {
            return Err(Error::domain(
                "rank-too-large",
                format!(
                    "no symplectic 2r-frame with r = {r} in dimension 2n = {}",
                    2 * n
                ),
            ));
        }
        let mut mat = Mat::zeros(2 * n, 2 * r);
        for p in 0..r {
            mat[(p, p)] = S::one();
            mat[(n + p, r + p)] = S::one();
        }
        Ok(OrthSymplecticFrame { n, r, mat })
    }
}

fn j_entry<S: Scalar>(r: usize, a: usize, b: usize) -> S {
    if a < r && b == r + a {
        S::one()
    } else if a >= r && b + r == a {
        -S::one()
    } else {
        S::zero()
    }
}

/// The block map extending an orthonormal isotropic embedding to an
/// orthogonal symplectic frame: `ϕ ↦ (J_n·conj(ϕ) | ϕ)`.
///
/// Over ℝ the conjugation is trivial and this is the plain `(J_nϕ | ϕ)`;
/// over ℂ the conjugate on the first block is what makes the output satisfy
/// the bilinear symplectic identity `MᵀJ_nM = J_d` alongside `M*M = I`.
/// With `orthonormal = true` the hermitian Gram of the input is verified
/// (exactly in exact regimes); with `false` the caller asserts it and the
/// output is built unchecked.
pub fn isotropic_to_symplectic<S: Scalar>(
    phi: &IsotropicEmbedding<S>,
    orthonormal: bool,
) -> Result<OrthSymplecticFrame<S>> {
    if orthonormal {
        let tol = if S::EXACT { 0.0 } else { 1e-8 };
        if !phi.is_orthonormal(tol) {
            return Err(Error::domain(
                "not-orthonormal",
                "input embedding is not orthonormal".to_string(),
            ));
        }
    }
    let n = phi.n;
    let d = phi.d;
    let mat = Mat::from_fn(2 * n, 2 * d, |i, j| {
        if j < d {
            let col = apply_j(&phi.mat.col(j).iter().map(Scalar::conj).collect::<Vec<_>>());
            col[i].clone()
        } else {
            phi.mat[(i, j - d)].clone()
        }
    });
    if orthonormal {
        OrthSymplecticFrame::new(n, mat)
    } else {
        Ok(OrthSymplecticFrame::from_matrix_unchecked(n, mat))
    }
}

/// Inverse of the block map: project an orthogonal symplectic frame back to
/// its isotropic half (the last d columns).
pub fn symplectic_to_isotropic<S: Scalar>(
    frame: &OrthSymplecticFrame<S>,
) -> Result<IsotropicEmbedding<S>> {
    let cols: Vec<usize> = (frame.r..2 * frame.r).collect();
    IsotropicEmbedding::new(frame.n, frame.mat.columns(&cols))
}

/// Polar decomposition of an isotropic embedding in the float regime:
/// `A = U·exp(S)` with `U` orthonormal isotropic and `S` self-adjoint.
pub fn polar_isotropic<S: FloatScalar>(
    a: &IsotropicEmbedding<S>,
) -> Result<(IsotropicEmbedding<S>, Mat<S>)> {
    let ac: CMat = a.mat.map(|x| x.to_c64());
    let (u, s) = numeric::polar_decompose(&ac)?;
    let u = IsotropicEmbedding::new(a.n, u.map(|z| S::from_c64(*z)))?;
    Ok((u, s.map(|z| S::from_c64(*z))))
}

/// Exact-regime polar: certifies an already-orthonormal embedding
/// (`S = 0`); anything else is outside the exact regime.
pub fn polar_isotropic_exact<S: Scalar>(
    a: &IsotropicEmbedding<S>,
) -> Result<(IsotropicEmbedding<S>, Mat<S>)> {
    if a.is_orthonormal(0.0) {
        Ok((a.clone(), Mat::zeros(a.d, a.d)))
    } else {
        Err(Error::Regime(
            "exact polar decomposition only certifies orthonormal embeddings".into(),
        ))
    }
}

// ---------------------------------------------------------------------------
// Cayley–Dickson doubling

/// Element of the doubled algebra `D(𝔽)`: a pair `p + q·ι` over the base
/// field, with `ι` the doubling unit (`i` over ℝ, `j` over ℂ). The
/// multiplication rule `(p₁,q₁)(p₂,q₂) = (p₁p₂ − q₁q̄₂, p₁q₂ + q₁p̄₂)`
/// reduces to complex multiplication over ℝ and realizes the quaternions
/// over ℂ.
#[derive(Clone, PartialEq, Debug)]
pub struct Doubled<S> {
    pub p: S,
    pub q: S,
}

impl<S: Scalar> Doubled<S> {
    pub fn new(p: S, q: S) -> Self {
        Doubled { p, q }
    }

    pub fn zero() -> Self {
        Doubled::new(S::zero(), S::zero())
    }

    pub fn one() -> Self {
        Doubled::new(S::one(), S::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Doubled::new(self.p.clone() + o.p.clone(), self.q.clone() + o.q.clone())
    }

    pub fn sub(&self, o: &Self) -> Self {
        Doubled::new(self.p.clone() - o.p.clone(), self.q.clone() - o.q.clone())
    }

    pub fn neg(&self) -> Self {
        Doubled::new(-self.p.clone(), -self.q.clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Doubled::new(
            self.p.clone() * o.p.clone() - self.q.clone() * o.q.conj(),
            self.p.clone() * o.q.clone() + self.q.clone() * o.p.conj(),
        )
    }

    pub fn conj(&self) -> Self {
        Doubled::new(self.p.conj(), -self.q.clone())
    }

    pub fn abs_f64(&self) -> f64 {
        (self.p.abs_f64().powi(2) + self.q.abs_f64().powi(2)).sqrt()
    }

    pub fn to_json(&self) -> Result<Value> {
        Ok(json!([self.p.to_json()?, self.q.to_json()?]))
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| Error::Schema(format!("expected a scalar pair, got {v}")))?;
        Ok(Doubled::new(S::from_json(&arr[0])?, S::from_json(&arr[1])?))
    }
}

/// An n×r frame over the doubled algebra with hermitian Gram = identity.
#[derive(Clone, PartialEq, Debug)]
pub struct DoubledFrame<S> {
    pub n: usize,
    pub r: usize,
    entries: Vec<Doubled<S>>, // row-major n×r
}

impl<S: Scalar> DoubledFrame<S> {
    pub fn from_entries(n: usize, r: usize, entries: Vec<Doubled<S>>) -> Result<Self> {
        if entries.len() != n * r {
            return Err(Error::Shape(format!(
                "expected {} entries for a {n}x{r} frame, got {}",
                n * r,
                entries.len()
            )));
        }
        Ok(DoubledFrame { n, r, entries })
    }

    pub fn entry(&self, i: usize, j: usize) -> &Doubled<S> {
        &self.entries[i * self.r + j]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut Doubled<S> {
        &mut self.entries[i * self.r + j]
    }

    /// Hermitian Gram over the doubled algebra.
    pub fn gram(&self) -> Vec<Doubled<S>> {
        let mut g = vec![Doubled::zero(); self.r * self.r];
        for a in 0..self.r {
            for b in 0..self.r {
                let mut acc = Doubled::zero();
                for i in 0..self.n {
                    acc = acc.add(&self.entry(i, a).conj().mul(self.entry(i, b)));
                }
                g[a * self.r + b] = acc;
            }
        }
        g
    }

    /// Max-norm deviation of the Gram from the identity.
    pub fn gram_residual(&self) -> f64 {
        let g = self.gram();
        let mut worst = 0.0f64;
        for a in 0..self.r {
            for b in 0..self.r {
                let expected = if a == b {
                    Doubled::one()
                } else {
                    Doubled::zero()
                };
                worst = worst.max(g[a * self.r + b].sub(&expected).abs_f64());
            }
        }
        worst
    }

    pub fn gram_is_identity(&self) -> bool {
        let g = self.gram();
        (0..self.r).all(|a| {
            (0..self.r).all(|b| {
                let expected = if a == b {
                    Doubled::one()
                } else {
                    Doubled::zero()
                };
                g[a * self.r + b] == expected
            })
        })
    }

    pub fn to_json(&self) -> Result<Value> {
        let mut rows = Vec::new();
        for i in 0..self.n {
            let row: Result<Vec<_>> = (0..self.r).map(|j| self.entry(i, j).to_json()).collect();
            rows.push(Value::Array(row?));
        }
        Ok(json!({
            "base_field": if S::COMPLEX { "C" } else { "R" },
            "n": self.n,
            "r": self.r,
            "entries": rows,
        }))
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Schema(format!("expected frame object, got {v}")))?;
        let n = obj
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Schema("frame missing integer \"n\"".into()))?
            as usize;
        let r = obj
            .get("r")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Schema("frame missing integer \"r\"".into()))?
            as usize;
        let rows = obj
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Schema("frame missing \"entries\"".into()))?;
        if rows.len() != n {
            return Err(Error::Schema(format!(
                "frame needs {n} rows, got {}",
                rows.len()
            )));
        }
        let mut entries = Vec::with_capacity(n * r);
        for row in rows {
            let row = row
                .as_array()
                .filter(|a| a.len() == r)
                .ok_or_else(|| Error::Schema("frame rows must be arrays of length r".into()))?;
            for e in row {
                entries.push(Doubled::from_json(e)?);
            }
        }
        DoubledFrame::from_entries(n, r, entries)
    }
}

/// Pack an orthogonal symplectic 2r-frame into an r-frame over the doubled
/// algebra: entry (p,q) is `(F[p][q], conj(F[n+p][q]))`.
///
/// Only the first r columns are read; the last r are determined by the
/// doubling structure `c_{q+r} = −J_n·conj(c_q)`, which is validated here
/// (exactly in exact regimes). The packed Gram is the identity precisely
/// when the frame is orthonormal-symplectic.
pub fn pack_cayley_dickson<S: Scalar>(frame: &OrthSymplecticFrame<S>) -> Result<DoubledFrame<S>> {
    let (n, r) = (frame.n, frame.r);
    let tol = if S::EXACT {
        0.0
    } else {
        1e-8 * frame.mat.max_abs().max(1.0)
    };
    for q in 0..r {
        let head: Vec<S> = frame.mat.col(q).iter().map(Scalar::conj).collect();
        let expected_tail = apply_j(&head)
            .iter()
            .map(|x| -x.clone())
            .collect::<Vec<_>>();
        for i in 0..2 * n {
            if (frame.mat[(i, r + q)].clone() - expected_tail[i].clone()).abs_f64() > tol {
                return Err(Error::domain(
                    "non-doubling-structure",
                    format!("column {} is not the doubled partner of column {q}", r + q),
                ));
            }
        }
    }
    let mut entries = Vec::with_capacity(n * r);
    for p in 0..n {
        for q in 0..r {
            entries.push(Doubled::new(
                frame.mat[(p, q)].clone(),
                frame.mat[(n + p, q)].conj(),
            ));
        }
    }
    DoubledFrame::from_entries(n, r, entries)
}

/// Inverse of the packing: rebuild the 2n×2r frame, tail columns from the
/// doubling structure. Does not re-validate invariants.
pub fn unpack_cayley_dickson<S: Scalar>(frame: &DoubledFrame<S>) -> OrthSymplecticFrame<S> {
    let (n, r) = (frame.n, frame.r);
    let mat = Mat::from_fn(2 * n, 2 * r, |i, j| {
        let (p, top) = if i < n { (i, true) } else { (i - n, false) };
        if j < r {
            let e = frame.entry(p, j);
            if top {
                e.p.clone()
            } else {
                e.q.conj()
            }
        } else {
            let e = frame.entry(p, j - r);
            if top {
                -e.q.clone()
            } else {
                e.p.conj()
            }
        }
    });
    OrthSymplecticFrame { n, r, mat }
}

/// Pack a single vector of 𝔽^{2n} into D(𝔽)ⁿ; the D-hermitian product of two
/// packed vectors carries the base inner product in its scalar part and the
/// symplectic pairing (conjugated, over ℂ) in its doubled part.
pub fn pack_vector<S: Scalar>(v: &[S]) -> Vec<Doubled<S>> {
    let n = v.len() / 2;
    (0..n)
        .map(|p| Doubled::new(v[p].clone(), v[n + p].conj()))
        .collect()
}

/// D-hermitian product `Σ conj(u_i)·v_i`.
pub fn doubled_inner<S: Scalar>(u: &[Doubled<S>], v: &[Doubled<S>]) -> Doubled<S> {
    u.iter()
        .zip(v)
        .fold(Doubled::zero(), |acc, (a, b)| acc.add(&a.conj().mul(b)))
}

// ---------------------------------------------------------------------------
// Stiefel paths over the doubled algebra

fn doubled_cols<S: Scalar>(f: &DoubledFrame<S>) -> Vec<Vec<Doubled<S>>> {
    (0..f.r)
        .map(|j| (0..f.n).map(|i| f.entry(i, j).clone()).collect())
        .collect()
}

fn scale_doubled<S: FloatScalar>(d: &Doubled<S>, s: f64) -> Doubled<S> {
    Doubled::new(S::from_c64(d.p.to_c64() * s), S::from_c64(d.q.to_c64() * s))
}

/// Complete a doubled frame to a full n×n unitary over D(𝔽) by
/// Gram–Schmidt over the canonical candidates.
fn doubled_completion<S: FloatScalar>(f: &DoubledFrame<S>) -> Result<Vec<Vec<Doubled<S>>>> {
    let n = f.n;
    let mut cols = doubled_cols(f);
    for cand in 0..n {
        if cols.len() == n {
            break;
        }
        let mut v = vec![Doubled::<S>::zero(); n];
        v[cand] = Doubled::one();
        for u in &cols {
            let coef = doubled_inner(u, &v);
            for i in 0..n {
                v[i] = v[i].sub(&u[i].mul(&coef));
            }
        }
        let norm = doubled_inner(&v, &v).p.re_f64().max(0.0).sqrt();
        if norm > 1e-8 {
            for e in v.iter_mut() {
                *e = scale_doubled(e, 1.0 / norm);
            }
            cols.push(v);
        }
    }
    if cols.len() != n {
        return Err(Error::numeric(
            "completion-failure",
            "could not complete the doubled frame".to_string(),
        ));
    }
    Ok(cols)
}

/// Complex realization of a doubled matrix: over the real base it is the
/// matrix itself; over the complex base each quaternionic column (z, w)
/// becomes a pair of complex columns [(z, w̄), (−w, z̄)] in ℂ^{2n}.
fn complexify_cols<S: FloatScalar>(n: usize, cols: &[Vec<Doubled<S>>]) -> CMat {
    if !S::COMPLEX {
        Mat::from_fn(n, cols.len(), |i, j| {
            cols[j][i].p.to_c64() + Complex64::new(0.0, 1.0) * cols[j][i].q.to_c64()
        })
    } else {
        let m = cols.len();
        Mat::from_fn(2 * n, 2 * m, |i, j| {
            let (p, top) = if i < n { (i, true) } else { (i - n, false) };
            if j < m {
                let e = &cols[j][p];
                if top {
                    e.p.to_c64()
                } else {
                    e.q.to_c64().conj()
                }
            } else {
                let e = &cols[j - m][p];
                if top {
                    -e.q.to_c64()
                } else {
                    e.p.to_c64().conj()
                }
            }
        })
    }
}

fn decomplexify_frame<S: FloatScalar>(n: usize, r: usize, m: &CMat) -> DoubledFrame<S> {
    let mut entries = Vec::with_capacity(n * r);
    if !S::COMPLEX {
        for p in 0..n {
            for q in 0..r {
                let z = m[(p, q)];
                entries.push(Doubled::new(
                    S::from_c64(Complex64::new(z.re, 0.0)),
                    S::from_c64(Complex64::new(z.im, 0.0)),
                ));
            }
        }
    } else {
        for p in 0..n {
            for q in 0..r {
                entries.push(Doubled::new(
                    S::from_c64(m[(p, q)]),
                    S::from_c64(m[(n + p, q)].conj()),
                ));
            }
        }
    }
    DoubledFrame { n, r, entries }
}

/// Precomputed geodesic between two doubled frames: complete both to full
/// unitaries over D(𝔽), take the principal logarithm of the transition
/// unitary in the complex realization, and interpolate by exponential
/// scaling. Construction fails with `log-branch-failure` when the principal
/// logarithm cannot be certified, in which case callers fall back to
/// re-orthonormalized interpolation.
pub struct StiefelGeodesic<S: FloatScalar> {
    f0: DoubledFrame<S>,
    f1: DoubledFrame<S>,
    spec: Option<numeric::UnitarySpectrum>,
    a0: CMat,
}

impl<S: FloatScalar> StiefelGeodesic<S> {
    pub fn new(f0: &DoubledFrame<S>, f1: &DoubledFrame<S>) -> Result<Self> {
        if f0.n != f1.n || f0.r != f1.r {
            return Err(Error::Shape(format!(
                "frame shapes differ: {}x{} vs {}x{}",
                f0.n, f0.r, f1.n, f1.r
            )));
        }
        let a0 = complexify_cols(f0.n, &doubled_cols(f0));
        if f0 == f1 {
            return Ok(StiefelGeodesic {
                f0: f0.clone(),
                f1: f1.clone(),
                spec: None,
                a0,
            });
        }
        let u0 = doubled_completion(f0)?;
        let u1 = doubled_completion(f1)?;
        // transition unitary W = U1 · U0* in doubled arithmetic
        let n = f0.n;
        let mut w = vec![vec![Doubled::<S>::zero(); n]; n]; // w[col][row-index] layout as columns
        for j in 0..n {
            for i in 0..n {
                let mut acc = Doubled::zero();
                for l in 0..n {
                    // (U1 U0*)[i][j] = Σ_l U1[i][l] · conj(U0[j][l])
                    acc = acc.add(&u1[l][i].mul(&u0[l][j].conj()));
                }
                w[j][i] = acc;
            }
        }
        let wc = complexify_cols(n, &w);
        let spec = numeric::unitary_spectrum(&wc)?;
        Ok(StiefelGeodesic {
            f0: f0.clone(),
            f1: f1.clone(),
            spec: Some(spec),
            a0,
        })
    }

    /// Sample at `s ∈ [0, 1]`; endpoints are returned exactly.
    pub fn sample(&self, s: f64) -> DoubledFrame<S> {
        if s == 0.0 {
            return self.f0.clone();
        }
        if s == 1.0 {
            return self.f1.clone();
        }
        let Some(spec) = &self.spec else {
            return self.f0.clone();
        };
        let g = spec.power(s);
        let sample = g.mul(&self.a0);
        decomplexify_frame(self.f0.n, self.f0.r, &sample)
    }
}

/// One-shot geodesic sample between doubled frames.
pub fn stiefel_path<S: FloatScalar>(
    f0: &DoubledFrame<S>,
    f1: &DoubledFrame<S>,
    s: f64,
) -> Result<DoubledFrame<S>> {
    Ok(StiefelGeodesic::new(f0, f1)?.sample(s))
}

/// Fallback interpolant: the polar retraction of the linear interpolation
/// at `s`, i.e. `A·(A*A)^{−1/2}` with `A = (1−s)F0 + sF1` in doubled
/// arithmetic (computed through the complex realization, which the inverse
/// square root preserves). Errs where the interpolant drops rank.
pub fn polar_interpolate<S: FloatScalar>(
    f0: &DoubledFrame<S>,
    f1: &DoubledFrame<S>,
    s: f64,
) -> Result<DoubledFrame<S>> {
    if s == 0.0 {
        return Ok(f0.clone());
    }
    if s == 1.0 {
        return Ok(f1.clone());
    }
    let n = f0.n;
    let c0 = doubled_cols(f0);
    let c1 = doubled_cols(f1);
    let mixed: Vec<Vec<Doubled<S>>> = (0..f0.r)
        .map(|j| {
            (0..n)
                .map(|i| scale_doubled(&c0[j][i], 1.0 - s).add(&scale_doubled(&c1[j][i], s)))
                .collect()
        })
        .collect();
    polar_retract_cols(n, f0.r, &mixed)
}

/// Polar retraction of a full-rank doubled matrix onto the orthonormal
/// frames: `A·(A*A)^{−1/2}` through the complex realization.
pub fn polar_retract<S: FloatScalar>(f: &DoubledFrame<S>) -> Result<DoubledFrame<S>> {
    polar_retract_cols(f.n, f.r, &doubled_cols(f))
}

/// Smallest eigenvalue of the Gram matrix of the linear interpolant
/// `(1−s)F0 + sF1`: the retraction-based paths are well-conditioned exactly
/// where this stays bounded away from zero.
pub fn interpolant_gram_floor<S: FloatScalar>(
    f0: &DoubledFrame<S>,
    f1: &DoubledFrame<S>,
    s: f64,
) -> Result<f64> {
    let n = f0.n;
    let c0 = doubled_cols(f0);
    let c1 = doubled_cols(f1);
    let mixed: Vec<Vec<Doubled<S>>> = (0..f0.r)
        .map(|j| {
            (0..n)
                .map(|i| scale_doubled(&c0[j][i], 1.0 - s).add(&scale_doubled(&c1[j][i], s)))
                .collect()
        })
        .collect();
    let ac = complexify_cols(n, &mixed);
    let gram = ac.conj_transpose().mul(&ac);
    let (eigs, _) = numeric::hermitian_eig(&gram)?;
    Ok(eigs.first().copied().unwrap_or(0.0))
}

fn polar_retract_cols<S: FloatScalar>(
    n: usize,
    r: usize,
    cols: &[Vec<Doubled<S>>],
) -> Result<DoubledFrame<S>> {
    let ac = complexify_cols(n, cols);
    let gram = ac.conj_transpose().mul(&ac);
    let (eigs, v) = numeric::hermitian_eig(&gram)?;
    let scale = eigs.last().copied().unwrap_or(0.0).max(1.0);
    if eigs.iter().any(|&l| l <= 1e-10 * scale) {
        return Err(Error::numeric(
            "rank-deficient",
            "interpolant drops rank at this parameter".to_string(),
        ));
    }
    let inv_sqrt = numeric::recombine(
        &eigs
            .iter()
            .map(|&l| Complex64::new(1.0 / l.sqrt(), 0.0))
            .collect::<Vec<_>>(),
        &v,
    );
    Ok(decomplexify_frame(n, r, &ac.mul(&inv_sqrt)))
}
