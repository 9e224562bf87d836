//! Canonical representatives of components, the explicit deformation
//! retractions as evaluable paths, in-fiber path construction between
//! same-label maps, and the explicit chart for the k = 2 rank-2 fiber.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::frames::{
    pack_cayley_dickson, polar_interpolate, unpack_cayley_dickson, Doubled, DoubledFrame,
    OrthSymplecticFrame, StiefelGeodesic,
};
use crate::invariant::{darboux_normal_form, phi, LinearMap, SkewLabel, SkewMatrix};
use crate::lie::{is_almost_commuting, riffle_shuffle_matrix, Convention, GroupTuple};
use crate::matrix::Mat;
use crate::numeric::{self, CMat};
use crate::scalar::{ExactScalar, FloatScalar, Scalar};

/// Canonical representative of a realizable label: `M₀·P⁻¹` where `P` is the
/// congruence normal form of the label and `M₀` the canonical rank-2r
/// embedding padded by zero columns. Satisfies `phi(M) = beta` exactly.
pub fn canonical_representative<S: ExactScalar>(
    beta: &SkewLabel,
    n: usize,
    convention: Convention,
) -> Result<LinearMap<S>> {
    let b: SkewMatrix<S> = beta.to_skew_matrix()?;
    canonical_representative_of_matrix(&b, n, convention)
}

/// Same construction starting from an antisymmetric field matrix.
pub fn canonical_representative_of_matrix<S: ExactScalar>(
    b: &SkewMatrix<S>,
    n: usize,
    convention: Convention,
) -> Result<LinearMap<S>> {
    let k = b.k;
    let (p, r) = darboux_normal_form(b);
    if r > n {
        return Err(Error::domain(
            "unrealizable",
            format!(
                "label has rank {}, which needs n >= {r}, got n = {n}",
                2 * r
            ),
        ));
    }
    let m0 = canonical_core::<S>(n, r, k, convention);
    let p_inv = p.inverse().expect("congruence matrix is invertible");
    LinearMap::new(n, k, convention, m0.mul(&p_inv))
}

/// The canonical embedding hitting the interleaved normal form
/// `Ω_r ⊕ 0_{k−2r}`, as a 2n×k matrix in the requested ambient convention.
fn canonical_core<S: Scalar>(n: usize, r: usize, k: usize, convention: Convention) -> Mat<S> {
    let mut m = Mat::zeros(2 * n, k);
    for p in 0..r {
        match convention {
            Convention::OmegaN => {
                m[(2 * p, 2 * p)] = S::one();
                m[(2 * p + 1, 2 * p + 1)] = S::one();
            }
            Convention::Jn => {
                m[(p, 2 * p)] = S::one();
                m[(n + p, 2 * p + 1)] = S::one();
            }
        }
    }
    m
}

/// Scale the x-block of every log by `s`. Keeps almost-commutativity and the
/// component label for every `s`; at `s = 0` the tuple lies in the
/// Heisenberg subalgebra.
pub fn retract_strict_to_heis<S: ExactScalar>(t: &GroupTuple<S>, s: &S) -> Result<GroupTuple<S>> {
    if !is_almost_commuting(t) {
        return Err(Error::domain(
            "not-almost-commuting",
            "retraction is only defined on almost-commuting tuples".to_string(),
        ));
    }
    let logs = t
        .logs
        .iter()
        .map(|log| {
            let mut scaled = log.clone();
            scaled.x = log.x.scale(s);
            scaled
        })
        .collect();
    GroupTuple::new(logs, t.lattice.clone())
}

/// Scale the `k − 2r` kernel columns of a normal-form map by `s`; `phi` is
/// unchanged for every `s` and the tail vanishes at `s = 0`.
pub fn retract_kernel<S: ExactScalar>(
    m: &LinearMap<S>,
    beta: &SkewMatrix<S>,
    s: &S,
) -> Result<LinearMap<S>> {
    if beta.k != m.k {
        return Err(Error::Shape(format!(
            "label size {} does not match k = {}",
            beta.k, m.k
        )));
    }
    let r = normal_form_rank(beta).ok_or_else(|| {
        Error::domain(
            "not-normal-form",
            "label must be the standard block form; normalize first".to_string(),
        )
    })?;
    if &phi(m) != beta {
        return Err(Error::domain(
            "label-mismatch",
            "phi of the map does not equal the given label".to_string(),
        ));
    }
    let mat = Mat::from_fn(2 * m.n, m.k, |i, j| {
        if j < 2 * r {
            m.mat[(i, j)].clone()
        } else {
            m.mat[(i, j)].clone() * s.clone()
        }
    });
    LinearMap::new(m.n, m.k, m.convention, mat)
}

/// `Some(r)` when the matrix is exactly `Ω_r ⊕ 0` in the interleaved
/// convention.
pub fn normal_form_rank<S: Scalar>(beta: &SkewMatrix<S>) -> Option<usize> {
    let k = beta.k;
    let mut r = 0;
    while 2 * r + 1 < k && beta.matrix()[(2 * r, 2 * r + 1)] == S::one() {
        r += 1;
    }
    if beta == &SkewMatrix::standard_form(k, r) {
        Some(r)
    } else {
        None
    }
}

/// A sampled in-fiber homotopy: every sample has `phi` within `tolerance`
/// of the common label, and the first/last samples are the (float images of
/// the) exact endpoints, whose residual is certified to be zero by the exact
/// precondition check rather than measured in floats.
#[derive(Clone, Debug)]
pub struct FiberPath<F: FloatScalar> {
    pub beta: SkewMatrix<F>,
    pub samples: Vec<LinearMap<F>>,
    pub residuals: Vec<f64>,
    pub tolerance: f64,
}

impl<F: FloatScalar> FiberPath<F> {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Result<Value> {
        let samples: Result<Vec<_>> = self.samples.iter().map(LinearMap::to_json).collect();
        Ok(json!({
            "beta": self.beta.to_json()?,
            "samples": samples?,
            "residuals": self.residuals,
            "tolerance": self.tolerance,
        }))
    }
}

pub const DEFAULT_PATH_STEPS: usize = 64;
pub const DEFAULT_PATH_TOLERANCE: f64 = 1e-9;

/// Connect two maps with equal label by a sampled path that stays in the
/// fiber of `phi` up to `tol`.
///
/// Route: congruence-normalize the common label, retract the kernel columns,
/// retract both rank-2r cores to orthogonal symplectic frames through the
/// polar factors of a full symplectic completion, traverse a geodesic in the
/// doubled Stiefel manifold between the packed frames, and concatenate the
/// reversed retractions. When the geodesic's principal logarithm fails, the
/// middle leg falls back to re-orthonormalized linear interpolation with
/// bisection detours.
pub fn connect_in_fiber<S: ExactScalar>(
    m0: &LinearMap<S>,
    m1: &LinearMap<S>,
    steps: usize,
    tol: f64,
) -> Result<FiberPath<S::Float>> {
    if m0.n != m1.n || m0.k != m1.k || m0.convention != m1.convention {
        return Err(Error::Shape(
            "endpoints must share n, k and convention".to_string(),
        ));
    }
    if steps < 2 {
        return Err(Error::domain(
            "too-few-steps",
            "a path needs at least two samples".to_string(),
        ));
    }
    let beta = phi(m0);
    if phi(m1) != beta {
        return Err(Error::domain(
            "label-mismatch",
            "endpoints have different labels".to_string(),
        ));
    }
    let beta_f: SkewMatrix<S::Float> = beta.map(Scalar::to_float);
    let (n, k) = (m0.n, m0.k);

    if m0 == m1 {
        let sample = m0.to_float();
        return Ok(FiberPath {
            beta: beta_f,
            samples: vec![sample; steps],
            residuals: vec![0.0; steps],
            tolerance: tol,
        });
    }

    let (p, r) = darboux_normal_form(&beta);
    let p = balance_congruence(p, r);
    let p_inv = p.inverse().expect("congruence matrix is invertible");
    // move to block ambient coordinates and the normal-form label
    let riffle: Mat<S> = riffle_shuffle_matrix(n);
    let to_normal = |m: &LinearMap<S>| -> Mat<S> {
        let relabeled = m.mat.mul(&p);
        match m.convention {
            Convention::OmegaN => riffle.transpose().mul(&relabeled),
            Convention::Jn => relabeled,
        }
    };
    let n0 = to_normal(m0);
    let n1 = to_normal(m1);

    let n0c = mat_to_c64(&n0);
    let n1c = mat_to_c64(&n1);
    let core_cols: Vec<usize> = (0..2 * r).collect();
    let tail_cols: Vec<usize> = (2 * r..k).collect();
    let (core0, tail0) = (n0c.columns(&core_cols), n0c.columns(&tail_cols));
    let (core1, tail1) = (n1c.columns(&core_cols), n1c.columns(&tail_cols));

    let middle = if r > 0 {
        let polar0 = SympPolarPath::new(&core0, n, r)?;
        let polar1 = SympPolarPath::new(&core1, n, r)?;
        let packed0 = pack_frame::<S::Float>(n, r, &polar0.orthonormal_frame())?;
        let packed1 = pack_frame::<S::Float>(n, r, &polar1.orthonormal_frame())?;
        let plan = GeodesicPlan::build(&packed0, &packed1)?;
        Some((polar0, polar1, plan))
    } else {
        None
    };

    // float copies of the output-side transforms
    let p_inv_c = mat_to_c64(&p_inv);
    let riffle_c: CMat = riffle_shuffle_matrix(n);
    let from_normal = |y: &CMat| -> CMat {
        let ambient = match m0.convention {
            Convention::OmegaN => riffle_c.mul(y),
            Convention::Jn => y.clone(),
        };
        ambient.mul(&p_inv_c)
    };

    let eval = |s: f64| -> Result<CMat> {
        let (core, tail_scale, tail): (CMat, f64, &CMat) = if s < 0.2 {
            (core0.clone(), 1.0 - s / 0.2, &tail0)
        } else if s < 0.4 {
            let u = (s - 0.2) / 0.2;
            let core = match &middle {
                Some((polar0, _, _)) => polar0.sample(1.0 - u),
                None => core0.clone(),
            };
            (core, 0.0, &tail0)
        } else if s < 0.6 {
            let u = (s - 0.4) / 0.2;
            let core = match &middle {
                Some((_, _, plan)) => {
                    let frame = plan.sample(u)?;
                    unpack_to_core(n, r, &frame)
                }
                None => core0.clone(),
            };
            (core, 0.0, &tail0)
        } else if s < 0.8 {
            let u = (s - 0.6) / 0.2;
            let core = match &middle {
                Some((_, polar1, _)) => polar1.sample(u),
                None => core1.clone(),
            };
            (core, 0.0, &tail1)
        } else {
            let u = (s - 0.8) / 0.2;
            (core1.clone(), u, &tail1)
        };
        let mut y: CMat = Mat::zeros(2 * n, k);
        for (j, &col) in core_cols.iter().enumerate() {
            for i in 0..2 * n {
                y[(i, col)] = core[(i, j)];
            }
        }
        for (j, &col) in tail_cols.iter().enumerate() {
            for i in 0..2 * n {
                y[(i, col)] = tail[(i, j)] * tail_scale;
            }
        }
        Ok(from_normal(&y))
    };

    let mut samples: Vec<LinearMap<S::Float>> = Vec::with_capacity(steps);
    let mut residuals = Vec::with_capacity(steps);
    for idx in 0..steps {
        let s = idx as f64 / (steps - 1) as f64;
        let sample = if idx == 0 {
            m0.to_float()
        } else if idx == steps - 1 {
            m1.to_float()
        } else {
            let c = eval(s)?;
            LinearMap::new(n, k, m0.convention, c.map(|z| S::Float::from_c64(*z)))?
        };
        let residual = if idx == 0 || idx == steps - 1 {
            0.0
        } else {
            phi(&sample).matrix().sub(beta_f.matrix()).max_abs()
        };
        if residual > tol {
            return Err(Error::numeric(
                "residual-exceeded",
                format!("sample {idx} drifts {residual:.3e} from the fiber (tolerance {tol:.3e})"),
            ));
        }
        samples.push(sample);
        residuals.push(residual);
    }

    Ok(FiberPath {
        beta: beta_f,
        samples,
        residuals,
        tolerance: tol,
    })
}

fn mat_to_c64<S: Scalar>(m: &Mat<S>) -> CMat {
    m.map(|x| x.to_float().to_c64())
}

/// Rescale the columns of a congruence matrix by exact powers of two so the
/// float pipeline sees balanced magnitudes. Darboux pairs scale reciprocally
/// (preserving their unit pairing) and kernel columns scale freely, so
/// `Pᵀ·B·P` is unchanged, exactly.
fn balance_congruence<S: ExactScalar>(p: Mat<S>, r: usize) -> Mat<S> {
    let k = p.cols();
    let pow2 = |e: i32| -> S {
        let two = S::from_int(2);
        let mut acc = S::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc * two.clone();
        }
        if e < 0 {
            acc.inv().expect("power of two")
        } else {
            acc
        }
    };
    let col_scale = |m: &Mat<S>, j: usize| -> f64 {
        (0..m.rows())
            .map(|i| m[(i, j)].abs_f64())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE)
    };
    let mut out = p;
    for pair in 0..r {
        let (u, v) = (2 * pair, 2 * pair + 1);
        let e = (0.5 * (col_scale(&out, v) / col_scale(&out, u)).log2()).round() as i32;
        let (cu, cv) = (pow2(e), pow2(-e));
        for i in 0..out.rows() {
            out[(i, u)] = out[(i, u)].clone() * cu.clone();
            out[(i, v)] = out[(i, v)].clone() * cv.clone();
        }
    }
    for j in 2 * r..k {
        let e = col_scale(&out, j).log2().round() as i32;
        let c = pow2(-e);
        for i in 0..out.rows() {
            out[(i, j)] = out[(i, j)].clone() * c.clone();
        }
    }
    out
}

/// Pack a float frame (block-label core produced by the polar path) into a
/// doubled frame, permuting the interleaved label pairing into the block one.
fn pack_frame<F: FloatScalar>(n: usize, r: usize, core: &CMat) -> Result<DoubledFrame<F>> {
    // interleaved label (0,1)(2,3)… → block label (0,r)(1,r+1)…
    let perm: Vec<usize> = (0..2 * r)
        .map(|j| if j < r { 2 * j } else { 2 * (j - r) + 1 })
        .collect();
    let blk = core.permute_cols(&perm);
    let frame = OrthSymplecticFrame::from_matrix_unchecked(n, blk.map(|z| F::from_c64(*z)));
    pack_cayley_dickson(&frame)
}

/// Unpack a doubled frame back to the interleaved-label core.
fn unpack_to_core<F: FloatScalar>(n: usize, r: usize, frame: &DoubledFrame<F>) -> CMat {
    let blk = unpack_cayley_dickson(frame);
    // block label (j, r+j) → interleaved label (2j, 2j+1)
    let perm: Vec<usize> = (0..2 * r)
        .map(|j| if j % 2 == 0 { j / 2 } else { r + j / 2 })
        .collect();
    let _ = n;
    mat_to_c64(&blk.mat.permute_cols(&perm))
}

/// Polar retraction of a symplectic 2r-frame onto its orthogonal symplectic
/// factor, exposed as an evaluable path: the frame is completed to a full
/// symplectic matrix `S = Q·exp(X)` and `sample(t) = Q·exp(tX)` restricted
/// to the embedding columns. `sample(1)` is the input frame, `sample(0)`
/// its orthonormal retract; every sample stays in the fiber.
struct SympPolarPath {
    q: CMat,
    eig_v: CMat,
    eig_log: Vec<f64>,
    sel: Vec<usize>,
}

impl SympPolarPath {
    fn new(core: &CMat, n: usize, r: usize) -> Result<Self> {
        let s = symplectic_completion(core, n, r)?;
        // Newton polar factor, then a projection onto the compact
        // unitary-symplectic group: both invariants and the doubling
        // structure land at machine precision even for ill-conditioned
        // completions, and exp(X) = Q*S never squares the condition number.
        let q = numeric::project_unitary_symplectic(&numeric::polar_newton(&s)?)?;
        let g = q.conj_transpose().mul(&s);
        let g = g.add(&g.conj_transpose()).scale(&Complex64::new(0.5, 0.0));
        let (eigs, v) = numeric::hermitian_eig(&g)?;
        if eigs.iter().any(|&l| l <= 1e-12) {
            return Err(Error::numeric(
                "rank-deficient",
                "symplectic completion is numerically singular".to_string(),
            ));
        }
        let log_eigs: Vec<f64> = eigs.iter().map(|&l| l.ln()).collect();
        let sel: Vec<usize> = (0..2 * r)
            .map(|j| if j % 2 == 0 { j / 2 } else { n + j / 2 })
            .collect();
        Ok(SympPolarPath {
            q,
            eig_v: v,
            eig_log: log_eigs,
            sel,
        })
    }

    fn sample(&self, t: f64) -> CMat {
        let exp_t = numeric::recombine(
            &self
                .eig_log
                .iter()
                .map(|&x| Complex64::new((t * x).exp(), 0.0))
                .collect::<Vec<_>>(),
            &self.eig_v,
        );
        self.q.mul(&exp_t).columns(&self.sel)
    }

    fn orthonormal_frame(&self) -> CMat {
        self.q.columns(&self.sel)
    }
}

/// Bilinear block pairing over `Complex64` (transpose, no conjugation).
fn nu(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    let n = u.len() / 2;
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..n {
        acc += u[p] * v[n + p] - u[n + p] * v[p];
    }
    acc
}

/// Complete an interleaved-label symplectic 2r-frame to a full symplectic
/// matrix whose embedding columns reproduce the frame.
fn symplectic_completion(core: &CMat, n: usize, r: usize) -> Result<CMat> {
    let dim = 2 * n;
    let mut pairs: Vec<(Vec<Complex64>, Vec<Complex64>)> = (0..r)
        .map(|p| (core.col(2 * p), core.col(2 * p + 1)))
        .collect();
    let project = |v: &[Complex64], pairs: &[(Vec<Complex64>, Vec<Complex64>)]| {
        let mut w = v.to_vec();
        for (a, b) in pairs {
            let ca = nu(a, &w);
            let cb = nu(b, &w);
            for i in 0..dim {
                // remove the span of the pair in the pairing sense
                w[i] = w[i] - ca * b[i] + cb * a[i];
            }
        }
        w
    };
    let vec_norm = |v: &[Complex64]| -> f64 { v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() };
    while pairs.len() < n {
        // best remaining candidate by projected length, normalized
        let mut best: Option<(f64, Vec<Complex64>)> = None;
        for cand in 0..dim {
            let mut e = vec![Complex64::new(0.0, 0.0); dim];
            e[cand] = Complex64::new(1.0, 0.0);
            let w = project(&e, &pairs);
            let norm = vec_norm(&w);
            if best.as_ref().is_none_or(|(b, _)| norm > *b) {
                best = Some((norm, w));
            }
        }
        let (norm, mut new_p) = best.expect("positive dimension");
        if norm < 1e-10 {
            return Err(Error::numeric(
                "completion-failure",
                "no candidate survives the pairing projection".to_string(),
            ));
        }
        for z in new_p.iter_mut() {
            *z /= norm;
        }
        // partner with the largest pairing per unit length against new_p
        let mut best_q: Option<(f64, Vec<Complex64>)> = None;
        for cand in 0..dim {
            let mut e = vec![Complex64::new(0.0, 0.0); dim];
            e[cand] = Complex64::new(1.0, 0.0);
            let w = project(&e, &pairs);
            let wn = vec_norm(&w);
            if wn < 1e-12 {
                continue;
            }
            let score = nu(&new_p, &w).norm() / wn;
            if best_q.as_ref().is_none_or(|(b, _)| score > *b) {
                best_q = Some((score, w));
            }
        }
        let (score, w) = best_q.ok_or_else(|| {
            Error::numeric(
                "completion-failure",
                "no partner candidate survives projection".to_string(),
            )
        })?;
        if score < 1e-10 {
            return Err(Error::numeric(
                "completion-failure",
                "pairing degenerates on the candidate complement".to_string(),
            ));
        }
        let factor = nu(&new_p, &w);
        let mut new_q: Vec<Complex64> = w.iter().map(|z| z / factor).collect();
        // balance the pair: scaling p by c and q by 1/c keeps the pairing
        let c = vec_norm(&new_q).sqrt();
        for z in new_p.iter_mut() {
            *z *= c;
        }
        for z in new_q.iter_mut() {
            *z /= c;
        }
        pairs.push((new_p, new_q));
    }
    let mut s: CMat = Mat::zeros(dim, dim);
    for (p, (u, v)) in pairs.iter().enumerate() {
        for i in 0..dim {
            s[(i, p)] = u[i];
            s[(i, n + p)] = v[i];
        }
    }
    Ok(s)
}

/// Geodesic with a bisection fallback: either the principal-log geodesic, or
/// a chain of re-orthonormalized interpolation legs routed around singular
/// interpolants.
enum GeodesicPlan<F: FloatScalar> {
    Geodesic(StiefelGeodesic<F>),
    Legs(Vec<(DoubledFrame<F>, DoubledFrame<F>)>),
}

impl<F: FloatScalar> GeodesicPlan<F> {
    fn build(f0: &DoubledFrame<F>, f1: &DoubledFrame<F>) -> Result<Self> {
        match StiefelGeodesic::new(f0, f1) {
            Ok(geo) => Ok(GeodesicPlan::Geodesic(geo)),
            Err(Error::Numeric { .. }) => {
                let mut legs = Vec::new();
                collect_legs(f0, f1, 4, &mut legs)?;
                Ok(GeodesicPlan::Legs(legs))
            }
            Err(e) => Err(e),
        }
    }

    fn sample(&self, u: f64) -> Result<DoubledFrame<F>> {
        match self {
            GeodesicPlan::Geodesic(geo) => Ok(geo.sample(u)),
            GeodesicPlan::Legs(legs) => {
                let total = legs.len() as f64;
                let pos = (u * total).min(total - 1e-12);
                let idx = pos.floor() as usize;
                let local = pos - idx as f64;
                polar_interpolate(&legs[idx].0, &legs[idx].1, local)
            }
        }
    }
}

/// Split `f0 → f1` into interpolation legs whose interpolants keep full
/// rank, detouring through intermediate frames where necessary.
fn collect_legs<F: FloatScalar>(
    f0: &DoubledFrame<F>,
    f1: &DoubledFrame<F>,
    depth: usize,
    out: &mut Vec<(DoubledFrame<F>, DoubledFrame<F>)>,
) -> Result<()> {
    // the retraction is safe when the interpolant's smallest Gram eigenvalue
    // stays bounded below along the leg
    let probes = 32;
    let ok = (0..=probes).all(|i| {
        crate::frames::interpolant_gram_floor(f0, f1, i as f64 / probes as f64)
            .map(|floor| floor > 0.05)
            .unwrap_or(false)
    });
    if ok {
        out.push((f0.clone(), f1.clone()));
        return Ok(());
    }
    if depth == 0 {
        return Err(Error::numeric(
            "fallback-exhausted",
            "could not route the interpolation around singular interpolants".to_string(),
        ));
    }
    // detour: rotate the start frame by the doubling unit, which never
    // degenerates against f0, then recurse toward f1
    let unit = if F::COMPLEX {
        Doubled::new(F::imaginary_unit().expect("complex float"), F::zero())
    } else {
        Doubled::new(F::zero(), F::one())
    };
    let mut mid = f0.clone();
    for i in 0..mid.n {
        for j in 0..mid.r {
            *mid.entry_mut(i, j) = mid.entry(i, j).mul(&unit);
        }
    }
    collect_legs(f0, &mid, depth - 1, out)?;
    collect_legs(&mid, f1, depth - 1, out)
}

/// Chart point for the k = 2 rank-2 fiber over ℝ: a unit vector `u` paired
/// with a free vector `v`, both stored in block coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct SpherePoint<S> {
    pub n: usize,
    pub u: Vec<S>,
    pub v: Vec<S>,
}

impl<S: Scalar> SpherePoint<S> {
    pub fn to_json(&self) -> Result<Value> {
        let u: Result<Vec<_>> = self.u.iter().map(Scalar::to_json).collect();
        let v: Result<Vec<_>> = self.v.iter().map(Scalar::to_json).collect();
        Ok(json!({"n": self.n, "u": u?, "v": v?}))
    }
}

fn rows_of_pairs<S: Scalar>(m: &LinearMap<S>) -> (Vec<S>, Vec<S>, Vec<S>, Vec<S>) {
    // x_j, y_j ∈ 𝔽ⁿ built from the paired rows of the convention
    let n = m.n;
    let pick = |j: usize, y: bool| -> Vec<S> {
        (0..n)
            .map(|p| {
                let row = match m.convention {
                    Convention::OmegaN => 2 * p + usize::from(y),
                    Convention::Jn => p + if y { n } else { 0 },
                };
                m.mat[(row, j)].clone()
            })
            .collect()
    };
    (pick(0, false), pick(1, false), pick(0, true), pick(1, true))
}

fn norm_sq<S: Scalar>(v: &[S]) -> S {
    v.iter()
        .fold(S::zero(), |acc, x| acc + x.clone() * x.clone())
}

/// Forward chart of the k = 2 rank-2 fiber over ℝ:
/// `M ↦ (u, v) ∈ S^{2n−1} × ℝ²ⁿ` with
/// `u = ((x₁+y₂)/√D, (y₁−x₂)/√D)`, `v = ((y₂−x₁)/2, (y₁+x₂)/2)`,
/// `D = 4 + ‖y₁+x₂‖² + ‖y₂−x₁‖²`.
pub fn homeo_k2_forward<S: Scalar>(m: &LinearMap<S>) -> Result<SpherePoint<S>> {
    if S::COMPLEX {
        return Err(Error::Regime("the k = 2 chart is defined over ℝ".into()));
    }
    if m.k != 2 {
        return Err(Error::Shape(format!("chart needs k = 2, got k = {}", m.k)));
    }
    let target: SkewMatrix<S> = SkewMatrix::standard_form(2, 1);
    let deviation = phi(m).matrix().sub(target.matrix()).max_abs();
    let tol = if S::EXACT {
        0.0
    } else {
        1e-9 * m.mat.max_abs().max(1.0).powi(2)
    };
    if deviation > tol {
        return Err(Error::domain(
            "phi-not-standard",
            "the map does not lie in the rank-2 fiber".to_string(),
        ));
    }
    let (x1, x2, y1, y2) = rows_of_pairs(m);
    let n = m.n;
    let four = S::from_int(4);
    let sum_yx: Vec<S> = (0..n).map(|p| y1[p].clone() + x2[p].clone()).collect();
    let diff_yx: Vec<S> = (0..n).map(|p| y2[p].clone() - x1[p].clone()).collect();
    let d = four + norm_sq(&sum_yx) + norm_sq(&diff_yx);
    let root = d.sqrt_checked().ok_or_else(|| {
        Error::domain(
            "not-a-square",
            "the normalizer is not a square in the exact field".to_string(),
        )
    })?;
    let inv_root = root.inv().expect("positive normalizer");
    let half = S::from_int(2).inv().expect("2 invertible");
    let mut u = Vec::with_capacity(2 * n);
    let mut v = Vec::with_capacity(2 * n);
    for p in 0..n {
        u.push((x1[p].clone() + y2[p].clone()) * inv_root.clone());
    }
    for p in 0..n {
        u.push((y1[p].clone() - x2[p].clone()) * inv_root.clone());
    }
    for p in 0..n {
        v.push((y2[p].clone() - x1[p].clone()) * half.clone());
    }
    for p in 0..n {
        v.push((y1[p].clone() + x2[p].clone()) * half.clone());
    }
    Ok(SpherePoint { n, u, v })
}

/// Inverse chart: rebuild the map from `(u, v)`; the length normalizer is
/// recovered from `1 + ‖v‖²`.
pub fn homeo_k2_inverse<S: Scalar>(
    point: &SpherePoint<S>,
    convention: Convention,
) -> Result<LinearMap<S>> {
    if S::COMPLEX {
        return Err(Error::Regime("the k = 2 chart is defined over ℝ".into()));
    }
    let n = point.n;
    if point.u.len() != 2 * n || point.v.len() != 2 * n {
        return Err(Error::Shape("chart point has inconsistent lengths".into()));
    }
    let len_sq = S::one() + norm_sq(&point.v);
    let scale = len_sq.sqrt_checked().ok_or_else(|| {
        Error::domain(
            "not-a-square",
            "the length normalizer is not a square in the exact field".to_string(),
        )
    })?;
    let u1: Vec<S> = (0..n).map(|p| point.u[p].clone() * scale.clone()).collect();
    let u2: Vec<S> = (0..n)
        .map(|p| point.u[n + p].clone() * scale.clone())
        .collect();
    let v1 = &point.v[..n];
    let v2 = &point.v[n..];
    let mut mat = Mat::zeros(2 * n, 2);
    for p in 0..n {
        let x1 = u1[p].clone() - v1[p].clone();
        let y2 = u1[p].clone() + v1[p].clone();
        let x2 = v2[p].clone() - u2[p].clone();
        let y1 = v2[p].clone() + u2[p].clone();
        let (xr, yr) = match convention {
            Convention::OmegaN => (2 * p, 2 * p + 1),
            Convention::Jn => (p, n + p),
        };
        mat[(xr, 0)] = x1;
        mat[(xr, 1)] = x2;
        mat[(yr, 0)] = y1;
        mat[(yr, 1)] = y2;
    }
    LinearMap::new(n, 2, convention, mat)
}
