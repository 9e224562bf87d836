//! Rank stratification of the isotropic-map spaces, the conjugation action
//! and its orbit normal form, rational-point detection (irrational tori),
//! and the stable-splitting summand inventory.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::invariant::LinearMap;
use crate::lie::{omega_form, riffle_shuffle, Convention, FieldTag, HeisenbergElement, Lattice};
use crate::matrix::Mat;
use crate::scalar::{ExactScalar, Rat, Scalar};

/// A map together with its rank and an exact basis of its kernel.
#[derive(Clone, Debug)]
pub struct StratumPoint<S> {
    pub f: LinearMap<S>,
    pub d: usize,
    pub kernel_basis: Vec<Vec<S>>,
}

impl<S: ExactScalar> StratumPoint<S> {
    pub fn new(f: LinearMap<S>) -> Self {
        let kernel_basis = f.mat.kernel_basis();
        let d = f.k - kernel_basis.len();
        StratumPoint { f, d, kernel_basis }
    }
}

/// A fiber point `(f, v)` with `v ∈ ker f`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitPoint<S> {
    pub f: LinearMap<S>,
    pub v: Vec<S>,
}

impl<S: Scalar> OrbitPoint<S> {
    pub fn new(f: LinearMap<S>, v: Vec<S>) -> Result<Self> {
        if v.len() != f.k {
            return Err(Error::Shape(format!(
                "vector length {} does not match k = {}",
                v.len(),
                f.k
            )));
        }
        if !f.mat.mul_vec(&v).iter().all(Scalar::is_zero) {
            return Err(Error::domain(
                "not-in-kernel",
                "v is not annihilated by f".to_string(),
            ));
        }
        Ok(OrbitPoint { f, v })
    }
}

/// Rank of the map, by exact elimination.
pub fn stratum_index<S: ExactScalar>(f: &LinearMap<S>) -> usize {
    f.mat.rank()
}

/// Orthogonal (hermitian) projection of 𝔽ᵏ onto ker f, computed exactly as
/// `V (V*V)⁻¹ V*` from an exact kernel basis `V`.
pub fn kernel_projection<S: ExactScalar>(f: &LinearMap<S>) -> Mat<S> {
    let basis = f.mat.kernel_basis();
    let k = f.k;
    if basis.is_empty() {
        return Mat::zeros(k, k);
    }
    let v = Mat::from_fn(k, basis.len(), |r, c| basis[c][r].clone());
    let vh = v.conj_transpose();
    let gram = vh.mul(&v);
    let gram_inv = gram
        .inverse()
        .expect("Gram matrix of independent columns is invertible");
    v.mul(&gram_inv).mul(&vh)
}

/// Conjugation of the tuple `(f, z)` by the group element `exp(g)`: `f` is
/// unchanged and each `zᵢ` shifts by the pairing of the i-th column of `f`
/// with the vector part of `g`.
pub fn conjugate_tuple<S: Scalar>(
    f: &LinearMap<S>,
    z: &[S],
    g: &HeisenbergElement<S>,
) -> Result<(LinearMap<S>, Vec<S>)> {
    if z.len() != f.k {
        return Err(Error::Shape(format!(
            "central vector length {} does not match k = {}",
            z.len(),
            f.k
        )));
    }
    if g.n != f.n {
        return Err(Error::Shape(format!(
            "group element has n = {}, map has n = {}",
            g.n, f.n
        )));
    }
    // vector part of g in the map's convention
    let mut xy: Vec<S> = g.a.iter().chain(g.b.iter()).cloned().collect();
    if f.convention == Convention::OmegaN {
        let perm = riffle_shuffle(f.n);
        let mut interleaved = vec![S::zero(); 2 * f.n];
        for (block_pos, &inter_pos) in perm.iter().enumerate() {
            interleaved[inter_pos] = xy[block_pos].clone();
        }
        xy = interleaved;
    }
    let shifted = (0..f.k)
        .map(|i| {
            let col = f.mat.col(i);
            Ok(z[i].clone() + omega_form(&col, &xy, f.convention)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((f.clone(), shifted))
}

/// `(f, z) ↦ (f, ρ_f(z))`: idempotent, constant on conjugation orbits.
pub fn orbit_normal_form<S: ExactScalar>(f: &LinearMap<S>, z: &[S]) -> Result<OrbitPoint<S>> {
    if z.len() != f.k {
        return Err(Error::Shape(format!(
            "central vector length {} does not match k = {}",
            z.len(),
            f.k
        )));
    }
    let rho = kernel_projection(f);
    OrbitPoint::new(f.clone(), rho.mul_vec(z))
}

/// Whether the kernel torus of `f` is an honest torus: the ℚ-rank of the
/// projected lattice generators equals the real dimension of ker f. Exact
/// regimes only; quadratic-field entries are flattened to rational
/// coordinates before the rank computation.
pub fn is_rational_point<S: ExactScalar>(f: &LinearMap<S>, lattice: &Lattice<S>) -> Result<bool> {
    if !S::EXACT {
        return Err(Error::Regime(
            "rationality is only decidable over exact scalars".into(),
        ));
    }
    let k = f.k;
    let dim_ker_real = (k - f.mat.rank()) * if S::COMPLEX { 2 } else { 1 };
    let scale = match lattice {
        Lattice::Trivial => {
            // the trivial lattice projects to rank 0
            return Ok(dim_ker_real == 0);
        }
        Lattice::Scaled(c) => c.clone(),
    };
    let rho = kernel_projection(f);
    // generators of A^k: scale·e_i, plus scale·i·e_i in the complex case
    let mut gens: Vec<Vec<S>> = Vec::new();
    for i in 0..k {
        let mut e = vec![S::zero(); k];
        e[i] = scale.clone();
        gens.push(e);
        if S::COMPLEX {
            let mut ei = vec![S::zero(); k];
            ei[i] = scale.clone() * S::imaginary_unit().expect("complex regime");
            gens.push(ei);
        }
    }
    // flatten projected generators to rational coordinates and take the rank
    let projected: Vec<Vec<Rat>> = gens
        .iter()
        .map(|g| {
            rho.mul_vec(g)
                .iter()
                .flat_map(|s| s.rational_parts())
                .collect()
        })
        .collect();
    let flat = Mat::from_rows(projected)?;
    Ok(flat.rank() == dim_ker_real)
}

/// One wedge summand of the stable splitting of a stratum, as pure
/// dimension bookkeeping under the documented "v1" convention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SummandDescriptor {
    pub l: usize,
    pub base_dim: usize,
    pub fiber_rank: usize,
}

impl SummandDescriptor {
    pub fn to_json(&self) -> Value {
        json!({
            "l": self.l,
            "base_dim": self.base_dim,
            "fiber_rank": self.fiber_rank,
            "convention": "v1",
        })
    }
}

/// Dimension inventory of the d-stratum splitting: one descriptor per
/// `0 ≤ l ≤ d`.
///
/// `base_dim` is dim_ℝ Gr(d, 𝔽ᵏ) + dim_ℝ Gr(l, D(𝔽)ᵈ). `fiber_rank` follows
/// the fixed v1 reading: the adjoint summand contributes dim_ℝ of the
/// isometry group of D(𝔽)ˡ, and the canonical representation (of real
/// dimension l·dim_ℝ D(𝔽)) is tensored with one copy per real dimension of
/// D(𝔽)^{n−d} ⊕ ζ, where ζ is the 𝔽-tautological bundle of rank d.
pub fn splitting_inventory(
    field: FieldTag,
    k: usize,
    n: usize,
    d: usize,
) -> Result<Vec<SummandDescriptor>> {
    if !(d <= k && k <= n) {
        return Err(Error::domain(
            "inventory-range",
            format!("need 0 <= d <= k <= n, got d={d}, k={k}, n={n}"),
        ));
    }
    let tau = match field {
        FieldTag::Real => 1,
        FieldTag::Complex => 2,
    };
    let dim_d = 2 * tau; // dim_ℝ D(𝔽)
                         // dim_ℝ of the isometry group of D(𝔽)^l: U(l) for D = ℂ, Sp(l) for D = ℍ
    let ad_dim = |l: usize| match field {
        FieldTag::Real => l * l,
        FieldTag::Complex => l * (2 * l + 1),
    };
    let mut out = Vec::with_capacity(d + 1);
    for l in 0..=d {
        let base_dim = d * (k - d) * tau + l * (d - l) * dim_d;
        let copies = (n - d) * dim_d + d * tau;
        let fiber_rank = ad_dim(l) + copies * (l * dim_d);
        out.push(SummandDescriptor {
            l,
            base_dim,
            fiber_rank,
        });
    }
    Ok(out)
}
