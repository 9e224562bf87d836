//! Exact arithmetic for the strictly-upper-triangular algebras and their
//! Heisenberg subalgebras: brackets, the nilpotent exponential/logarithm,
//! the 2-step product, and the almost-commuting predicate.

use num_bigint::BigInt;
use serde_json::{json, Value};

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::scalar::{ExactScalar, Scalar};

/// Base field marker: determines the central lattice (rank 1 over ℤ for the
/// real family, Gaussian integers for the complex one).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FieldTag {
    Real,
    Complex,
}

impl FieldTag {
    pub fn for_scalar<S: Scalar>() -> FieldTag {
        if S::COMPLEX {
            FieldTag::Complex
        } else {
            FieldTag::Real
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            FieldTag::Real => "R",
            FieldTag::Complex => "C",
        }
    }

    /// Rank of the central lattice as an abelian group.
    pub fn lattice_rank(&self) -> usize {
        match self {
            FieldTag::Real => 1,
            FieldTag::Complex => 2,
        }
    }
}

impl std::str::FromStr for FieldTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" => Ok(FieldTag::Real),
            "C" => Ok(FieldTag::Complex),
            other => Err(Error::Schema(format!("unknown field tag {other:?}"))),
        }
    }
}

/// Central lattice `A ⊂ Z(𝔤)`: either trivial, or `c·ℤ` (real) /
/// `c·ℤ[i]` (complex) for a nonzero scale `c`.
#[derive(Clone, PartialEq, Debug)]
pub enum Lattice<S> {
    Trivial,
    Scaled(S),
}

impl<S: ExactScalar> Lattice<S> {
    /// The standard unit lattice ℤ (or ℤ[i]).
    pub fn unit() -> Self {
        Lattice::Scaled(S::one())
    }

    /// Lattice coordinates of `z`, if `z` lies in the lattice: `z = c(p+qi)`
    /// with integers `p, q` (`q = 0` over a real field).
    pub fn coords_of(&self, z: &S) -> Option<(BigInt, BigInt)> {
        match self {
            Lattice::Trivial => {
                if z.is_zero() {
                    Some((BigInt::from(0), BigInt::from(0)))
                } else {
                    None
                }
            }
            Lattice::Scaled(c) => {
                // a zero scale degenerates to the trivial lattice
                let scaled = match c.inv() {
                    Some(inv) => z.clone() * inv,
                    None => return Lattice::Trivial.coords_of(z),
                };
                let (p, q) = scaled.as_gauss_int()?;
                if !S::COMPLEX && q != BigInt::from(0) {
                    return None;
                }
                Some((p, q))
            }
        }
    }

    pub fn contains(&self, z: &S) -> bool {
        self.coords_of(z).is_some()
    }
}

/// Element of the strictly upper triangular algebra in the coordinates
/// (a, b, x, z): first-row block `a`, last-column block `b`, inner strictly
/// upper block `x`, and corner entry `z`.
#[derive(Clone, PartialEq, Debug)]
pub struct StrictUpperElement<S> {
    pub n: usize,
    pub a: Vec<S>,
    pub b: Vec<S>,
    pub x: Mat<S>,
    pub z: S,
}

impl<S: Scalar> StrictUpperElement<S> {
    pub fn new(a: Vec<S>, b: Vec<S>, x: Mat<S>, z: S) -> Result<Self> {
        let n = a.len();
        if b.len() != n || x.rows() != n || x.cols() != n {
            return Err(Error::Shape(format!(
                "inconsistent dimensions: |a|={}, |b|={}, x is {}x{}",
                a.len(),
                b.len(),
                x.rows(),
                x.cols()
            )));
        }
        for i in 0..n {
            for j in 0..=i {
                if !x[(i, j)].is_zero() {
                    return Err(Error::domain(
                        "not-strictly-upper",
                        format!("x has a nonzero entry at ({i},{j})"),
                    ));
                }
            }
        }
        Ok(StrictUpperElement { n, a, b, x, z })
    }

    pub fn zero(n: usize) -> Self {
        StrictUpperElement {
            n,
            a: vec![S::zero(); n],
            b: vec![S::zero(); n],
            x: Mat::zeros(n, n),
            z: S::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(Scalar::is_zero)
            && self.b.iter().all(Scalar::is_zero)
            && self.x.is_zero()
            && self.z.is_zero()
    }

    /// Whether the x-block vanishes, i.e. the element lies in the Heisenberg
    /// subalgebra.
    pub fn is_heisenberg(&self) -> bool {
        self.x.is_zero()
    }

    /// Central elements have only the corner coordinate.
    pub fn is_central(&self) -> bool {
        self.a.iter().all(Scalar::is_zero) && self.b.iter().all(Scalar::is_zero) && self.x.is_zero()
    }

    /// The ambient (n+2)x(n+2) strictly upper triangular matrix.
    pub fn to_matrix(&self) -> Mat<S> {
        let n = self.n;
        let mut m = Mat::zeros(n + 2, n + 2);
        for j in 0..n {
            m[(0, j + 1)] = self.a[j].clone();
            m[(j + 1, n + 1)] = self.b[j].clone();
        }
        m[(0, n + 1)] = self.z.clone();
        for i in 0..n {
            for j in i + 1..n {
                m[(i + 1, j + 1)] = self.x[(i, j)].clone();
            }
        }
        m
    }

    /// Read an element back from a strictly upper triangular ambient matrix.
    pub fn from_matrix(m: &Mat<S>) -> Result<Self> {
        if m.rows() != m.cols() || m.rows() < 2 {
            return Err(Error::Shape(format!(
                "ambient matrix is {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let n = m.rows() - 2;
        for i in 0..n + 2 {
            for j in 0..=i {
                if !m[(i, j)].is_zero() {
                    return Err(Error::domain(
                        "not-strictly-upper",
                        format!("nonzero entry at ({i},{j})"),
                    ));
                }
            }
        }
        let a = (0..n).map(|j| m[(0, j + 1)].clone()).collect();
        let b = (0..n).map(|j| m[(j + 1, n + 1)].clone()).collect();
        let x = Mat::from_fn(n, n, |i, j| {
            if j > i {
                m[(i + 1, j + 1)].clone()
            } else {
                S::zero()
            }
        });
        Ok(StrictUpperElement {
            n,
            a,
            b,
            x,
            z: m[(0, n + 1)].clone(),
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        StrictUpperElement {
            n: self.n,
            a: zip_add(&self.a, &other.a),
            b: zip_add(&self.b, &other.b),
            x: self.x.add(&other.x),
            z: self.z.clone() + other.z.clone(),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        StrictUpperElement {
            n: self.n,
            a: self.a.iter().map(|v| v.clone() * s.clone()).collect(),
            b: self.b.iter().map(|v| v.clone() * s.clone()).collect(),
            x: self.x.scale(s),
            z: self.z.clone() * s.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    pub fn to_json(&self) -> Result<Value> {
        let a: Result<Vec<_>> = self.a.iter().map(Scalar::to_json).collect();
        let b: Result<Vec<_>> = self.b.iter().map(Scalar::to_json).collect();
        let mut x_rows = Vec::new();
        for i in 0..self.n {
            let row: Result<Vec<_>> = self.x.row(i).iter().map(Scalar::to_json).collect();
            x_rows.push(Value::Array(row?));
        }
        Ok(json!({
            "n": self.n,
            "a": a?,
            "b": b?,
            "x": x_rows,
            "z": self.z.to_json()?,
        }))
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Schema(format!("expected element object, got {v}")))?;
        let n = obj
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Schema("element missing integer \"n\"".into()))?
            as usize;
        let parse_vec = |key: &str| -> Result<Vec<S>> {
            let arr = obj
                .get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Schema(format!("element missing array \"{key}\"")))?;
            if arr.len() != n {
                return Err(Error::Schema(format!(
                    "\"{key}\" has length {}, expected {n}",
                    arr.len()
                )));
            }
            arr.iter().map(S::from_json).collect()
        };
        let a = parse_vec("a")?;
        let b = parse_vec("b")?;
        let x = match obj.get("x") {
            None | Some(Value::Null) => Mat::zeros(n, n),
            Some(Value::Array(rows)) if rows.is_empty() && n > 0 => Mat::zeros(n, n),
            Some(Value::Array(rows)) => {
                if rows.len() != n {
                    return Err(Error::Schema(format!(
                        "\"x\" has {} rows, expected {n}",
                        rows.len()
                    )));
                }
                let mut parsed = Vec::new();
                for row in rows {
                    let row = row
                        .as_array()
                        .ok_or_else(|| Error::Schema("\"x\" rows must be arrays".into()))?;
                    if row.len() != n {
                        return Err(Error::Schema(format!(
                            "\"x\" row has length {}, expected {n}",
                            row.len()
                        )));
                    }
                    parsed.push(row.iter().map(S::from_json).collect::<Result<Vec<_>>>()?);
                }
                Mat::from_rows(parsed)?
            }
            Some(other) => {
                return Err(Error::Schema(format!(
                    "\"x\" must be a matrix, got {other}"
                )))
            }
        };
        let z = S::from_json(
            obj.get("z")
                .ok_or_else(|| Error::Schema("element missing \"z\"".into()))?,
        )?;
        StrictUpperElement::new(a, b, x, z)
    }
}

/// Heisenberg algebra element (a, b, z); the x-block is identically zero.
#[derive(Clone, PartialEq, Debug)]
pub struct HeisenbergElement<S> {
    pub n: usize,
    pub a: Vec<S>,
    pub b: Vec<S>,
    pub z: S,
}

impl<S: Scalar> HeisenbergElement<S> {
    pub fn new(a: Vec<S>, b: Vec<S>, z: S) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::Shape(format!("|a|={} but |b|={}", a.len(), b.len())));
        }
        Ok(HeisenbergElement {
            n: a.len(),
            a,
            b,
            z,
        })
    }

    pub fn from_ints(a: &[i64], b: &[i64], z: i64) -> Self {
        HeisenbergElement::new(
            a.iter().map(|&v| S::from_int(v)).collect(),
            b.iter().map(|&v| S::from_int(v)).collect(),
            S::from_int(z),
        )
        .expect("matching lengths")
    }

    pub fn zero(n: usize) -> Self {
        HeisenbergElement {
            n,
            a: vec![S::zero(); n],
            b: vec![S::zero(); n],
            z: S::zero(),
        }
    }

    pub fn to_strict(&self) -> StrictUpperElement<S> {
        StrictUpperElement {
            n: self.n,
            a: self.a.clone(),
            b: self.b.clone(),
            x: Mat::zeros(self.n, self.n),
            z: self.z.clone(),
        }
    }

    pub fn from_strict(e: &StrictUpperElement<S>) -> Result<Self> {
        if !e.is_heisenberg() {
            return Err(Error::domain(
                "not-heisenberg",
                "element has a nonzero x-block".to_string(),
            ));
        }
        Ok(HeisenbergElement {
            n: e.n,
            a: e.a.clone(),
            b: e.b.clone(),
            z: e.z.clone(),
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        HeisenbergElement {
            n: self.n,
            a: zip_add(&self.a, &other.a),
            b: zip_add(&self.b, &other.b),
            z: self.z.clone() + other.z.clone(),
        }
    }

    /// The bracket of two Heisenberg elements is central with corner
    /// `a·b' − a'·b`.
    pub fn bracket_z(&self, other: &Self) -> S {
        dot(&self.a, &other.b) - dot(&other.a, &self.b)
    }
}

fn zip_add<S: Scalar>(u: &[S], v: &[S]) -> Vec<S> {
    u.iter()
        .zip(v)
        .map(|(a, b)| a.clone() + b.clone())
        .collect()
}

fn dot<S: Scalar>(u: &[S], v: &[S]) -> S {
    u.iter()
        .zip(v)
        .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
}

/// Bracket of two strictly upper elements, i.e. the commutator of the
/// ambient matrices read back in (a, b, x, z) coordinates:
/// `[u, v] = (a·x' − a'·x, x·b' − x'·b, [x, x'], a·b' − a'·b)`.
pub fn st_bracket<S: Scalar>(
    u: &StrictUpperElement<S>,
    v: &StrictUpperElement<S>,
) -> Result<StrictUpperElement<S>> {
    if u.n != v.n {
        return Err(Error::Shape(format!("n mismatch: {} vs {}", u.n, v.n)));
    }
    let n = u.n;
    let row_times = |a: &[S], x: &Mat<S>| -> Vec<S> {
        (0..n)
            .map(|j| {
                let mut acc = S::zero();
                for i in 0..n {
                    acc = acc + a[i].clone() * x[(i, j)].clone();
                }
                acc
            })
            .collect()
    };
    let a = sub_vec(&row_times(&u.a, &v.x), &row_times(&v.a, &u.x));
    let b = sub_vec(&u.x.mul_vec(&v.b), &v.x.mul_vec(&u.b));
    let x = u.x.mul(&v.x).sub(&v.x.mul(&u.x));
    let z = dot(&u.a, &v.b) - dot(&v.a, &u.b);
    Ok(StrictUpperElement { n, a, b, x, z })
}

fn sub_vec<S: Scalar>(u: &[S], v: &[S]) -> Vec<S> {
    u.iter()
        .zip(v)
        .map(|(a, b)| a.clone() - b.clone())
        .collect()
}

/// Coordinate pairing conventions for the symplectic form on 𝔽^{2n}.
///
/// `OmegaN` pairs interleaved coordinates (1,2),(3,4),…; `Jn` pairs the two
/// half blocks (1,n+1),(2,n+2),…. The riffle shuffle permutation conjugates
/// one into the other.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Convention {
    OmegaN,
    Jn,
}

impl Convention {
    pub fn as_str(&self) -> &'static str {
        match self {
            Convention::OmegaN => "omega",
            Convention::Jn => "j",
        }
    }
}

impl std::str::FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "omega" => Ok(Convention::OmegaN),
            "j" => Ok(Convention::Jn),
            other => Err(Error::Schema(format!("unknown convention {other:?}"))),
        }
    }
}

/// Matrix of the symplectic form on 𝔽^{2n} in the given convention.
pub fn omega_matrix<S: Scalar>(n: usize, convention: Convention) -> Mat<S> {
    let mut m = Mat::zeros(2 * n, 2 * n);
    match convention {
        Convention::OmegaN => {
            for p in 0..n {
                m[(2 * p, 2 * p + 1)] = S::one();
                m[(2 * p + 1, 2 * p)] = -S::one();
            }
        }
        Convention::Jn => {
            for p in 0..n {
                m[(p, n + p)] = S::one();
                m[(n + p, p)] = -S::one();
            }
        }
    }
    m
}

/// Symplectic pairing of two vectors in 𝔽^{2n}. Bilinear and antisymmetric
/// in both conventions; only the coordinate pairing differs.
pub fn omega_form<S: Scalar>(u: &[S], v: &[S], convention: Convention) -> Result<S> {
    if u.len() != v.len() || !u.len().is_multiple_of(2) {
        return Err(Error::Shape(format!(
            "omega needs two vectors of equal even length, got {} and {}",
            u.len(),
            v.len()
        )));
    }
    let n = u.len() / 2;
    let mut acc = S::zero();
    match convention {
        Convention::OmegaN => {
            for p in 0..n {
                acc = acc + u[2 * p].clone() * v[2 * p + 1].clone()
                    - u[2 * p + 1].clone() * v[2 * p].clone();
            }
        }
        Convention::Jn => {
            for p in 0..n {
                acc = acc + u[p].clone() * v[n + p].clone() - u[n + p].clone() * v[p].clone();
            }
        }
    }
    Ok(acc)
}

/// Riffle shuffle sending block coordinates (x₁..xₙ, y₁..yₙ) to interleaved
/// coordinates (x₁, y₁, x₂, y₂, …): entry `p` of the result is the
/// interleaved position of block position `p`.
pub fn riffle_shuffle(n: usize) -> Vec<usize> {
    let mut perm = vec![0; 2 * n];
    for p in 0..n {
        perm[p] = 2 * p;
        perm[n + p] = 2 * p + 1;
    }
    perm
}

/// Permutation matrix `P` with `P·v_block = v_interleaved`; it conjugates the
/// block form into the interleaved one: `Pᵀ·Ω_interleaved·P = J_block`.
pub fn riffle_shuffle_matrix<S: Scalar>(n: usize) -> Mat<S> {
    let perm = riffle_shuffle(n);
    let mut m = Mat::zeros(2 * n, 2 * n);
    for (block_pos, &inter_pos) in perm.iter().enumerate() {
        m[(inter_pos, block_pos)] = S::one();
    }
    m
}

/// Finite exponential series of a nilpotent strictly upper element; exact.
pub fn nilpotent_exp<S: Scalar>(x: &StrictUpperElement<S>) -> Mat<S> {
    let m = x.to_matrix();
    let dim = m.rows();
    let mut out = Mat::identity(dim);
    let mut power = Mat::identity(dim);
    let mut factorial = S::one();
    for j in 1..dim {
        power = power.mul(&m);
        if power.is_zero() {
            break;
        }
        factorial = factorial * S::from_int(j as i64);
        out = out.add(&power.scale(&factorial.inv().expect("nonzero factorial")));
    }
    out
}

/// Finite logarithm of a unipotent upper triangular matrix; exact inverse of
/// `nilpotent_exp`.
pub fn nilpotent_log<S: Scalar>(g: &Mat<S>) -> Result<StrictUpperElement<S>> {
    let dim = g.rows();
    if g.cols() != dim || dim < 2 {
        return Err(Error::Shape(format!(
            "expected square matrix, got {}x{}",
            g.rows(),
            g.cols()
        )));
    }
    for i in 0..dim {
        for j in 0..=i {
            let expected_one = i == j;
            let e = &g[(i, j)];
            let ok = if expected_one {
                *e == S::one()
            } else {
                e.is_zero()
            };
            if !ok {
                return Err(Error::domain(
                    "not-unipotent",
                    format!("entry ({i},{j}) violates unipotence"),
                ));
            }
        }
    }
    let n = g.sub(&Mat::identity(dim));
    let mut out = Mat::zeros(dim, dim);
    let mut power = Mat::identity(dim);
    for j in 1..dim {
        power = power.mul(&n);
        if power.is_zero() {
            break;
        }
        let coeff = if j % 2 == 1 { S::one() } else { -S::one() };
        let term = coeff * S::from_int(j as i64).inv().expect("nonzero index");
        out = out.add(&power.scale(&term));
    }
    StrictUpperElement::from_matrix(&out)
}

/// 2-step product `x + y + ½[x, y]`; matches the matrix product of the
/// exponentials exactly on Heisenberg inputs.
pub fn bch_product_2step<S: Scalar>(
    x: &HeisenbergElement<S>,
    y: &HeisenbergElement<S>,
) -> Result<HeisenbergElement<S>> {
    if x.n != y.n {
        return Err(Error::Shape(format!("n mismatch: {} vs {}", x.n, y.n)));
    }
    let half = S::from_int(2).inv().expect("2 is invertible");
    let mut out = x.add(y);
    out.z = out.z + x.bracket_z(y) * half;
    Ok(out)
}

/// Logarithm of the group commutator `exp(x)⁻¹ exp(y)⁻¹ exp(x) exp(y)`,
/// computed on the matrix side. For Heisenberg inputs it is central and
/// equal to the algebra bracket.
pub fn group_commutator_log<S: Scalar>(
    x: &HeisenbergElement<S>,
    y: &HeisenbergElement<S>,
) -> Result<HeisenbergElement<S>> {
    if x.n != y.n {
        return Err(Error::Shape(format!("n mismatch: {} vs {}", x.n, y.n)));
    }
    let gx = nilpotent_exp(&x.to_strict());
    let gy = nilpotent_exp(&y.to_strict());
    let gx_inv = nilpotent_exp(&x.to_strict().neg());
    let gy_inv = nilpotent_exp(&y.to_strict().neg());
    let comm = gx_inv.mul(&gy_inv).mul(&gx).mul(&gy);
    HeisenbergElement::from_strict(&nilpotent_log(&comm)?)
}

/// `Σ ad(x)^m(y)/m!`, the linear action of `exp(x)` by conjugation; the sum
/// terminates by nilpotency.
pub fn adjoint_action<S: Scalar>(
    x: &StrictUpperElement<S>,
    y: &StrictUpperElement<S>,
) -> Result<StrictUpperElement<S>> {
    if x.n != y.n {
        return Err(Error::Shape(format!("n mismatch: {} vs {}", x.n, y.n)));
    }
    let mut out = y.clone();
    let mut term = y.clone();
    let mut factorial = S::one();
    for m in 1..=(x.n + 2) as i64 {
        term = st_bracket(x, &term)?;
        if term.is_zero() {
            break;
        }
        factorial = factorial * S::from_int(m);
        out = out.add(&term.scale(&factorial.inv().expect("nonzero factorial")));
    }
    Ok(out)
}

/// A k-tuple of group elements of the reduced group, stored as logarithms
/// together with the central lattice.
#[derive(Clone, PartialEq, Debug)]
pub struct GroupTuple<S> {
    pub field: FieldTag,
    pub n: usize,
    pub k: usize,
    pub logs: Vec<StrictUpperElement<S>>,
    pub lattice: Lattice<S>,
}

impl<S: ExactScalar> GroupTuple<S> {
    pub fn new(logs: Vec<StrictUpperElement<S>>, lattice: Lattice<S>) -> Result<Self> {
        let k = logs.len();
        if k == 0 {
            return Err(Error::Shape("a tuple needs at least one element".into()));
        }
        let n = logs[0].n;
        if logs.iter().any(|l| l.n != n) {
            return Err(Error::Shape("tuple elements have mixed dimensions".into()));
        }
        Ok(GroupTuple {
            field: FieldTag::for_scalar::<S>(),
            n,
            k,
            logs,
            lattice,
        })
    }

    pub fn from_heisenberg(logs: Vec<HeisenbergElement<S>>, lattice: Lattice<S>) -> Result<Self> {
        GroupTuple::new(
            logs.iter().map(HeisenbergElement::to_strict).collect(),
            lattice,
        )
    }

    /// Whether all logs lie in the Heisenberg subalgebra.
    pub fn is_heisenberg(&self) -> bool {
        self.logs.iter().all(StrictUpperElement::is_heisenberg)
    }

    pub fn to_json(&self) -> Result<Value> {
        let logs: Result<Vec<_>> = self.logs.iter().map(StrictUpperElement::to_json).collect();
        let lattice = match &self.lattice {
            Lattice::Trivial => json!("trivial"),
            Lattice::Scaled(c) => {
                if *c == S::one() {
                    json!("unit")
                } else {
                    json!({"scale": c.to_json()?})
                }
            }
        };
        Ok(json!({
            "field": self.field.as_str(),
            "n": self.n,
            "k": self.k,
            "lattice": lattice,
            "logs": logs?,
        }))
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Schema(format!("expected tuple object, got {v}")))?;
        let field = FieldTag::from_str(
            obj.get("field")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Schema("tuple missing \"field\"".into()))?,
        )?;
        if field != FieldTag::for_scalar::<S>() {
            return Err(Error::Schema(format!(
                "field tag {} does not match the scalar regime",
                field.as_str()
            )));
        }
        let lattice = match obj.get("lattice") {
            None => Lattice::unit(),
            Some(Value::String(s)) if s == "unit" => Lattice::unit(),
            Some(Value::String(s)) if s == "trivial" => Lattice::Trivial,
            Some(Value::Object(o)) => {
                let c =
                    S::from_json(o.get("scale").ok_or_else(|| {
                        Error::Schema("lattice object missing \"scale\"".into())
                    })?)?;
                if c.is_zero() {
                    return Err(Error::Schema("lattice scale must be nonzero".into()));
                }
                Lattice::Scaled(c)
            }
            Some(other) => return Err(Error::Schema(format!("bad lattice spec {other}"))),
        };
        let logs = obj
            .get("logs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Schema("tuple missing \"logs\" array".into()))?
            .iter()
            .map(StrictUpperElement::from_json)
            .collect::<Result<Vec<_>>>()?;
        GroupTuple::new(logs, lattice)
    }
}

/// Whether every pairwise bracket of the logs is central and lies in the
/// lattice. This certifies that the tuple of exponentials commutes in the
/// reduced group.
pub fn is_almost_commuting<S: ExactScalar>(t: &GroupTuple<S>) -> bool {
    for i in 0..t.k {
        for j in i + 1..t.k {
            let br = st_bracket(&t.logs[i], &t.logs[j]).expect("shared dimensions");
            if !br.is_central() || !t.lattice.contains(&br.z) {
                return false;
            }
        }
    }
    true
}
