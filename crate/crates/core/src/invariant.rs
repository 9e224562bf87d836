//! The commutator-invariant map φ, antisymmetric rank and congruence normal
//! form, component labels of almost-commuting tuples, realizability, and the
//! rank-2 Plücker test.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lie::{is_almost_commuting, omega_matrix, st_bracket, Convention, FieldTag, GroupTuple};
use crate::matrix::Mat;
use crate::scalar::{ExactScalar, GaussRational, Rat, Scalar};

/// Entry of the central lattice: a Gaussian integer `re + im·i`
/// (`im = 0` over the real field).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GaussInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        GaussInt {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn zero() -> Self {
        GaussInt::new(0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn neg(&self) -> Self {
        GaussInt::new(-self.re.clone(), -self.im.clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        GaussInt::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        GaussInt::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &Self) -> Self {
        GaussInt::new(&self.re - &o.re, &self.im - &o.im)
    }

    /// As a field scalar of the matching regime. Imaginary entries require a
    /// complex regime.
    pub fn to_scalar<S: Scalar>(&self) -> S {
        let re = S::from_rat(&Rat::from_integer(self.re.clone()));
        if self.im.is_zero() {
            return re;
        }
        let i = S::imaginary_unit().expect("imaginary lattice entry in a real regime");
        let im = S::from_rat(&Rat::from_integer(self.im.clone()));
        re + im * i
    }
}

impl std::fmt::Display for GaussInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

/// k×k antisymmetric matrix over the central lattice: the component label.
#[derive(Clone, PartialEq, Debug)]
pub struct SkewLabel {
    pub k: usize,
    pub field: FieldTag,
    entries: Vec<GaussInt>, // row-major k×k, antisymmetry enforced
}

impl SkewLabel {
    pub fn zero(k: usize, field: FieldTag) -> Self {
        SkewLabel {
            k,
            field,
            entries: vec![GaussInt::zero(); k * k],
        }
    }

    /// Build from the strict upper triangle in row-major order
    /// (β₁₂, β₁₃, …, β₁ₖ, β₂₃, …).
    pub fn from_upper_triangle(k: usize, field: FieldTag, upper: Vec<GaussInt>) -> Result<Self> {
        let expected = k * (k.saturating_sub(1)) / 2;
        if upper.len() != expected {
            return Err(Error::Shape(format!(
                "upper triangle for k={k} needs {expected} entries, got {}",
                upper.len()
            )));
        }
        if field == FieldTag::Real && upper.iter().any(|e| !e.im.is_zero()) {
            return Err(Error::Schema(
                "real label with imaginary lattice entries".into(),
            ));
        }
        let mut label = SkewLabel::zero(k, field);
        let mut it = upper.into_iter();
        for i in 0..k {
            for j in i + 1..k {
                let e = it.next().unwrap();
                label.entries[i * k + j] = e.clone();
                label.entries[j * k + i] = e.neg();
            }
        }
        Ok(label)
    }

    pub fn from_upper_ints(k: usize, upper: &[i64]) -> Self {
        SkewLabel::from_upper_triangle(
            k,
            FieldTag::Real,
            upper.iter().map(|&v| GaussInt::new(v, 0)).collect(),
        )
        .expect("consistent triangle")
    }

    pub fn entry(&self, i: usize, j: usize) -> &GaussInt {
        &self.entries[i * self.k + j]
    }

    pub fn upper_triangle(&self) -> Vec<&GaussInt> {
        let mut out = Vec::new();
        for i in 0..self.k {
            for j in i + 1..self.k {
                out.push(self.entry(i, j));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(GaussInt::is_zero)
    }

    pub fn neg(&self) -> Self {
        SkewLabel {
            k: self.k,
            field: self.field,
            entries: self.entries.iter().map(GaussInt::neg).collect(),
        }
    }

    /// The label as an antisymmetric matrix over the matching field.
    pub fn to_skew_matrix<S: Scalar>(&self) -> Result<SkewMatrix<S>> {
        if (self.field == FieldTag::Complex) != S::COMPLEX {
            return Err(Error::Regime(format!(
                "label over {} read in a {} scalar regime",
                self.field.as_str(),
                if S::COMPLEX { "complex" } else { "real" }
            )));
        }
        let mat = Mat::from_fn(self.k, self.k, |i, j| self.entry(i, j).to_scalar::<S>());
        SkewMatrix::new(mat)
    }

    /// Rank over the base field; always even.
    pub fn rank(&self) -> usize {
        match self.field {
            FieldTag::Real => self.to_skew_matrix::<Rat>().unwrap().rank(),
            FieldTag::Complex => self.to_skew_matrix::<GaussRational>().unwrap().rank(),
        }
    }

    pub fn to_json(&self) -> Result<Value> {
        let to_i64 = |b: &BigInt| {
            b.to_i64()
                .ok_or_else(|| Error::Schema("label entry exceeds the JSON integer range".into()))
        };
        let entries: Result<Vec<Value>> = self
            .upper_triangle()
            .iter()
            .map(|e| {
                Ok(match self.field {
                    FieldTag::Real => json!(to_i64(&e.re)?),
                    FieldTag::Complex => json!({"re": to_i64(&e.re)?, "im": to_i64(&e.im)?}),
                })
            })
            .collect();
        Ok(json!({
            "k": self.k,
            "field": self.field.as_str(),
            "entries": entries?,
        }))
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Schema(format!("expected label object, got {v}")))?;
        let k = obj
            .get("k")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Schema("label missing integer \"k\"".into()))?
            as usize;
        let field = FieldTag::from_str(
            obj.get("field")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Schema("label missing \"field\"".into()))?,
        )?;
        let entries = obj
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Schema("label missing \"entries\" array".into()))?;
        let parsed = entries
            .iter()
            .map(|e| {
                if let Some(n) = e.as_i64() {
                    Ok(GaussInt::new(n, 0))
                } else if let Some(o) = e.as_object() {
                    let re = o
                        .get("re")
                        .and_then(Value::as_i64)
                        .ok_or_else(|| Error::Schema("label entry missing \"re\"".into()))?;
                    let im = o
                        .get("im")
                        .and_then(Value::as_i64)
                        .ok_or_else(|| Error::Schema("label entry missing \"im\"".into()))?;
                    Ok(GaussInt::new(re, im))
                } else {
                    Err(Error::Schema(format!("bad label entry {e}")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        SkewLabel::from_upper_triangle(k, field, parsed)
    }
}

/// k×k antisymmetric matrix over the field.
#[derive(Clone, PartialEq, Debug)]
pub struct SkewMatrix<S> {
    pub k: usize,
    mat: Mat<S>,
}

impl<S: Scalar> SkewMatrix<S> {
    pub fn new(mat: Mat<S>) -> Result<Self> {
        let k = mat.rows();
        if mat.cols() != k {
            return Err(Error::Shape(format!(
                "expected square, got {}x{}",
                k,
                mat.cols()
            )));
        }
        for i in 0..k {
            for j in 0..=i {
                let sym = mat[(i, j)].clone() + mat[(j, i)].clone();
                if !sym.is_zero() {
                    return Err(Error::domain(
                        "not-antisymmetric",
                        format!("entries ({i},{j}) and ({j},{i}) do not cancel"),
                    ));
                }
            }
        }
        Ok(SkewMatrix { k, mat })
    }

    pub(crate) fn new_unchecked(mat: Mat<S>) -> Self {
        SkewMatrix { k: mat.rows(), mat }
    }

    pub fn zero(k: usize) -> Self {
        SkewMatrix {
            k,
            mat: Mat::zeros(k, k),
        }
    }

    /// `Ω_r ⊕ 0_{k−2r}` in the interleaved convention.
    pub fn standard_form(k: usize, r: usize) -> Self {
        let mut mat = Mat::zeros(k, k);
        for p in 0..r {
            mat[(2 * p, 2 * p + 1)] = S::one();
            mat[(2 * p + 1, 2 * p)] = -S::one();
        }
        SkewMatrix { k, mat }
    }

    pub fn matrix(&self) -> &Mat<S> {
        &self.mat
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> SkewMatrix<T> {
        SkewMatrix {
            k: self.k,
            mat: self.mat.map(f),
        }
    }

    pub fn to_json(&self) -> Result<Value> {
        let mut rows = Vec::new();
        for i in 0..self.k {
            let row: Result<Vec<_>> = self.mat.row(i).iter().map(Scalar::to_json).collect();
            rows.push(Value::Array(row?));
        }
        Ok(json!({"k": self.k, "entries": rows}))
    }
}

impl<S: ExactScalar> SkewMatrix<S> {
    pub fn rank(&self) -> usize {
        self.mat.rank()
    }
}

/// A 2n×k matrix representing `f: 𝔽ᵏ → 𝔽²ⁿ`, tagged with the coordinate
/// convention of the ambient symplectic form.
#[derive(Clone, PartialEq, Debug)]
pub struct LinearMap<S> {
    pub n: usize,
    pub k: usize,
    pub convention: Convention,
    pub mat: Mat<S>,
}

impl<S: Scalar> LinearMap<S> {
    pub fn new(n: usize, k: usize, convention: Convention, mat: Mat<S>) -> Result<Self> {
        if mat.rows() != 2 * n || mat.cols() != k {
            return Err(Error::Shape(format!(
                "expected {}x{k}, got {}x{}",
                2 * n,
                mat.rows(),
                mat.cols()
            )));
        }
        Ok(LinearMap {
            n,
            k,
            convention,
            mat,
        })
    }

    pub fn zero(n: usize, k: usize, convention: Convention) -> Self {
        LinearMap {
            n,
            k,
            convention,
            mat: Mat::zeros(2 * n, k),
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> LinearMap<T> {
        LinearMap {
            n: self.n,
            k: self.k,
            convention: self.convention,
            mat: self.mat.map(f),
        }
    }

    pub fn to_float(&self) -> LinearMap<S::Float> {
        self.map(|x| x.to_float())
    }

    pub fn to_json(&self) -> Result<Value> {
        let mut rows = Vec::new();
        for i in 0..2 * self.n {
            let row: Result<Vec<_>> = self.mat.row(i).iter().map(Scalar::to_json).collect();
            rows.push(Value::Array(row?));
        }
        Ok(json!({
            "n": self.n,
            "k": self.k,
            "field": if S::COMPLEX { "C" } else { "R" },
            "convention": self.convention.as_str(),
            "entries": rows,
        }))
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Schema(format!("expected linear map object, got {v}")))?;
        let n = obj
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Schema("linear map missing integer \"n\"".into()))?
            as usize;
        let k = obj
            .get("k")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Schema("linear map missing integer \"k\"".into()))?
            as usize;
        let convention = match obj.get("convention") {
            None => Convention::OmegaN,
            Some(Value::String(s)) => Convention::from_str(s)?,
            Some(other) => return Err(Error::Schema(format!("bad convention {other}"))),
        };
        let rows = obj
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Schema("linear map missing \"entries\"".into()))?;
        if rows.len() != 2 * n {
            return Err(Error::Schema(format!(
                "linear map needs {} rows, got {}",
                2 * n,
                rows.len()
            )));
        }
        let mut parsed = Vec::new();
        for row in rows {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Schema("linear map rows must be arrays".into()))?;
            if row.len() != k {
                return Err(Error::Schema(format!(
                    "linear map row has length {}, expected {k}",
                    row.len()
                )));
            }
            parsed.push(row.iter().map(S::from_json).collect::<Result<Vec<_>>>()?);
        }
        LinearMap::new(n, k, convention, Mat::from_rows(parsed)?)
    }
}

/// `φ(M) = Mᵀ·Ω·M` for the map's convention; antisymmetric by construction.
pub fn phi<S: Scalar>(m: &LinearMap<S>) -> SkewMatrix<S> {
    let omega = omega_matrix::<S>(m.n, m.convention);
    SkewMatrix::new_unchecked(m.mat.transpose().mul(&omega).mul(&m.mat))
}

/// The same invariant computed as `Σᵢ x⁽ⁱ⁾ ∧ y⁽ⁱ⁾` over the row pairs of the
/// map's convention; agrees with `phi` identically.
pub fn phi_rowwedge<S: Scalar>(m: &LinearMap<S>) -> SkewMatrix<S> {
    let mut out: Mat<S> = Mat::zeros(m.k, m.k);
    for p in 0..m.n {
        let (xr, yr) = match m.convention {
            Convention::OmegaN => (2 * p, 2 * p + 1),
            Convention::Jn => (p, m.n + p),
        };
        let x = m.mat.row(xr).to_vec();
        let y = m.mat.row(yr).to_vec();
        for i in 0..m.k {
            for j in 0..m.k {
                let t = x[i].clone() * y[j].clone() - y[i].clone() * x[j].clone();
                out[(i, j)] = out[(i, j)].clone() + t;
            }
        }
    }
    SkewMatrix::new_unchecked(out)
}

/// Congruence to the normal form: returns `(P, r)` with `Pᵀ·B·P = Ω_r ⊕ 0`
/// exactly (interleaved convention) and `P` invertible. Deterministic:
/// pivot pairs are chosen lexicographically, columns left-to-right.
pub fn darboux_normal_form<S: ExactScalar>(b: &SkewMatrix<S>) -> (Mat<S>, usize) {
    let k = b.k;
    let pairing = |u: &[S], v: &[S]| -> S {
        let mut acc = S::zero();
        for i in 0..k {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..k {
                if !b.mat[(i, j)].is_zero() {
                    acc = acc + u[i].clone() * b.mat[(i, j)].clone() * v[j].clone();
                }
            }
        }
        acc
    };
    let mut remaining: Vec<Vec<S>> = (0..k)
        .map(|i| {
            let mut v = vec![S::zero(); k];
            v[i] = S::one();
            v
        })
        .collect();
    let mut paired: Vec<Vec<S>> = Vec::new();
    loop {
        // first column of the remaining block with a nonzero pairing, then
        // the first row within it
        let mut found = None;
        'scan: for q in 0..remaining.len() {
            for p in 0..remaining.len() {
                if p != q && !pairing(&remaining[p], &remaining[q]).is_zero() {
                    found = Some((q, p));
                    break 'scan;
                }
            }
        }
        let Some((q, p)) = found else {
            break; // remaining block pairs to zero: kernel part
        };
        let u = remaining[q].clone();
        let c = pairing(&u, &remaining[p]);
        let cinv = c.inv().expect("nonzero pairing");
        let v: Vec<S> = remaining[p]
            .iter()
            .map(|e| e.clone() * cinv.clone())
            .collect();
        let (hi, lo) = (q.max(p), q.min(p));
        remaining.remove(hi);
        remaining.remove(lo);
        // make the rest pairing-orthogonal to the new pair:
        // w ← w + ω(v,w)·u − ω(u,w)·v
        for w in remaining.iter_mut() {
            let cu = pairing(&v, w);
            let cv = pairing(&u, w);
            for i in 0..k {
                let t = cu.clone() * u[i].clone() - cv.clone() * v[i].clone();
                w[i] = w[i].clone() + t;
            }
        }
        paired.push(u);
        paired.push(v);
    }
    let r = paired.len() / 2;
    paired.append(&mut remaining);
    let p_mat = Mat::from_fn(k, k, |i, j| paired[j][i].clone());
    (p_mat, r)
}

/// Antisymmetric rank over the field, via the congruence normal form.
pub fn skew_rank<S: ExactScalar>(b: &SkewMatrix<S>) -> usize {
    2 * darboux_normal_form(b).1
}

/// Component label of an almost-commuting tuple: the matrix of central
/// brackets read in lattice coordinates.
pub fn component_label<S: ExactScalar>(t: &GroupTuple<S>) -> Result<SkewLabel> {
    if !is_almost_commuting(t) {
        return Err(Error::domain(
            "not-almost-commuting",
            "tuple has a bracket outside the lattice".to_string(),
        ));
    }
    let mut upper = Vec::new();
    for i in 0..t.k {
        for j in i + 1..t.k {
            let br = st_bracket(&t.logs[i], &t.logs[j])?;
            let (re, im) = t
                .lattice
                .coords_of(&br.z)
                .expect("almost-commuting guarantees lattice membership");
            upper.push(GaussInt { re, im });
        }
    }
    SkewLabel::from_upper_triangle(t.k, t.field, upper)
}

/// The stacked (a,b)-matrix of the logs: column i holds the symplectic
/// vector of log i in the requested convention. `phi` of this map equals the
/// bracket matrix of the tuple.
pub fn stacked_map<S: ExactScalar>(t: &GroupTuple<S>, convention: Convention) -> LinearMap<S> {
    let mat = Mat::from_fn(2 * t.n, t.k, |row, col| {
        let log = &t.logs[col];
        match convention {
            Convention::OmegaN => {
                if row % 2 == 0 {
                    log.a[row / 2].clone()
                } else {
                    log.b[row / 2].clone()
                }
            }
            Convention::Jn => {
                if row < t.n {
                    log.a[row].clone()
                } else {
                    log.b[row - t.n].clone()
                }
            }
        }
    });
    LinearMap {
        n: t.n,
        k: t.k,
        convention,
        mat,
    }
}

/// A label is realizable in ambient dimension `n` iff `rank/2 ≤ n`.
pub fn is_realizable(beta: &SkewLabel, n: usize) -> bool {
    beta.rank() / 2 <= n
}

/// All quadric relations `β_{ij}β_{lm} − β_{il}β_{jm} + β_{im}β_{jl}` vanish
/// iff the label has rank ≤ 2 (is a decomposable wedge); cross-checked
/// against the congruence rank in the test suites.
pub fn plucker_rank2_test(beta: &SkewLabel) -> bool {
    let k = beta.k;
    for i in 0..k {
        for j in i + 1..k {
            for l in j + 1..k {
                for m in l + 1..k {
                    let q = beta
                        .entry(i, j)
                        .mul(beta.entry(l, m))
                        .sub(&beta.entry(i, l).mul(beta.entry(j, m)))
                        .add(&beta.entry(i, m).mul(beta.entry(j, l)));
                    if !q.is_zero() {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{HeisenbergElement, Lattice};

    type M = LinearMap<Rat>;

    fn lm(n: usize, k: usize, rows: &[&[i64]]) -> M {
        LinearMap::new(n, k, Convention::OmegaN, Mat::from_ints(rows)).unwrap()
    }

    #[test]
    fn phi_identity_pullback() {
        let m = lm(1, 2, &[&[1, 0], &[0, 1]]);
        assert_eq!(phi(&m), SkewMatrix::standard_form(2, 1));
    }

    #[test]
    fn phi_diagonal_example() {
        let m = lm(1, 2, &[&[2, 0], &[0, 3]]);
        let b = phi(&m);
        assert_eq!(b.matrix()[(0, 1)], Rat::from_int(6));
        assert_eq!(b.matrix()[(1, 0)], Rat::from_int(-6));
    }

    #[test]
    fn phi_zero() {
        assert!(phi(&M::zero(2, 3, Convention::OmegaN)).is_zero());
    }

    #[test]
    fn rowwedge_single_pair() {
        let m = lm(1, 2, &[&[1, 0], &[0, 1]]);
        assert_eq!(phi_rowwedge(&m), SkewMatrix::standard_form(2, 1));
        assert!(phi_rowwedge(&M::zero(2, 4, Convention::OmegaN)).is_zero());
    }

    #[test]
    fn rowwedge_matches_phi_both_conventions() {
        let mat = Mat::from_ints(&[&[1, 2, 0], &[3, -1, 2], &[0, 5, 1], &[2, 2, -3]]);
        for conv in [Convention::OmegaN, Convention::Jn] {
            let m = LinearMap::<Rat>::new(2, 3, conv, mat.clone()).unwrap();
            assert_eq!(phi(&m), phi_rowwedge(&m));
        }
    }

    #[test]
    fn darboux_examples() {
        // B = [[0,5],[-5,0]] → P = diag(1, 1/5), r = 1
        let b = SkewMatrix::new(Mat::from_ints(&[&[0, 5], &[-5, 0]])).unwrap();
        let (p, r) = darboux_normal_form(&b);
        assert_eq!(r, 1);
        let mut expected: Mat<Rat> = Mat::identity(2);
        expected[(1, 1)] = Rat::new(1.into(), 5.into());
        assert_eq!(p, expected);
        let normal = p.transpose().mul(b.matrix()).mul(&p);
        assert_eq!(normal, SkewMatrix::standard_form(2, 1).matrix().clone());

        let z = SkewMatrix::<Rat>::zero(3);
        let (p, r) = darboux_normal_form(&z);
        assert_eq!(r, 0);
        assert_eq!(p, Mat::identity(3));

        // already normal, k = 5
        let nf = SkewMatrix::<Rat>::standard_form(5, 2);
        let (p, r) = darboux_normal_form(&nf);
        assert_eq!(r, 2);
        assert_eq!(p, Mat::identity(5));
    }

    #[test]
    fn darboux_congruence_holds() {
        let b = SkewMatrix::new(Mat::from_ints(&[
            &[0, 2, -1, 3],
            &[-2, 0, 0, 1],
            &[1, 0, 0, -2],
            &[-3, -1, 2, 0],
        ]))
        .unwrap();
        let (p, r) = darboux_normal_form(&b);
        let normal = p.transpose().mul(b.matrix()).mul(&p);
        assert_eq!(
            normal,
            SkewMatrix::<Rat>::standard_form(4, r).matrix().clone()
        );
        assert!(!Scalar::is_zero(&p.det()));
    }

    #[test]
    fn rejects_non_antisymmetric() {
        assert!(SkewMatrix::<Rat>::new(Mat::from_ints(&[&[0, 1], &[1, 0]])).is_err());
        assert!(SkewMatrix::<Rat>::new(Mat::from_ints(&[&[1, 0], &[0, 0]])).is_err());
    }

    #[test]
    fn component_label_canonical_pair() {
        let pair = GroupTuple::from_heisenberg(
            vec![
                HeisenbergElement::<Rat>::from_ints(&[1], &[0], 0),
                HeisenbergElement::<Rat>::from_ints(&[0], &[1], 0),
            ],
            Lattice::unit(),
        )
        .unwrap();
        let label = component_label(&pair).unwrap();
        assert_eq!(label, SkewLabel::from_upper_ints(2, &[1]));

        // all logs central → zero label
        let central = GroupTuple::from_heisenberg(
            vec![
                HeisenbergElement::<Rat>::from_ints(&[0], &[0], 3),
                HeisenbergElement::<Rat>::from_ints(&[0], &[0], -2),
            ],
            Lattice::unit(),
        )
        .unwrap();
        assert!(component_label(&central).unwrap().is_zero());

        // not almost-commuting → domain error
        let bad = GroupTuple::from_heisenberg(
            vec![
                HeisenbergElement::<Rat>::from_ints(&[1], &[0], 0),
                HeisenbergElement::<Rat>::from_ints(&[0], &[1], 0),
            ],
            Lattice::Scaled(Rat::from_int(2)),
        )
        .unwrap();
        assert!(component_label(&bad).is_err());
    }

    #[test]
    fn label_equals_phi_of_stack() {
        let tuple = GroupTuple::from_heisenberg(
            vec![
                HeisenbergElement::<Rat>::from_ints(&[1, 2], &[0, 1], 0),
                HeisenbergElement::<Rat>::from_ints(&[0, 3], &[1, -1], 0),
                HeisenbergElement::<Rat>::from_ints(&[2, 0], &[4, 2], 0),
            ],
            Lattice::unit(),
        )
        .unwrap();
        let label = component_label(&tuple).unwrap();
        for conv in [Convention::OmegaN, Convention::Jn] {
            let b = phi(&stacked_map(&tuple, conv));
            let from_label: SkewMatrix<Rat> = label.to_skew_matrix().unwrap();
            assert_eq!(b, from_label);
        }
    }

    #[test]
    fn realizability() {
        let rank4 = SkewLabel::from_upper_ints(4, &[1, 0, 0, 0, 0, 1]);
        assert_eq!(rank4.rank(), 4);
        assert!(!is_realizable(&rank4, 1));
        assert!(is_realizable(&rank4, 2));
        assert!(is_realizable(&SkewLabel::zero(3, FieldTag::Real), 1));
        assert!(is_realizable(&SkewLabel::from_upper_ints(2, &[7]), 1));
    }

    #[test]
    fn plucker_examples() {
        // e1∧e2 + e3∧e4 has rank 4: quadric value 1
        let rank4 = SkewLabel::from_upper_ints(4, &[1, 0, 0, 0, 0, 1]);
        assert!(!plucker_rank2_test(&rank4));
        // e1∧e2 is decomposable
        let rank2 = SkewLabel::from_upper_ints(4, &[1, 0, 0, 0, 0, 0]);
        assert!(plucker_rank2_test(&rank2));
        // k < 4 has no quadrics
        assert!(plucker_rank2_test(&SkewLabel::from_upper_ints(
            3,
            &[1, 2, 3]
        )));
    }

    #[test]
    fn label_json_round_trip() {
        let label = SkewLabel::from_upper_ints(3, &[1, -2, 5]);
        let back = SkewLabel::from_json(&label.to_json().unwrap()).unwrap();
        assert_eq!(label, back);

        let complex =
            SkewLabel::from_upper_triangle(2, FieldTag::Complex, vec![GaussInt::new(1, -3)])
                .unwrap();
        let back = SkewLabel::from_json(&complex.to_json().unwrap()).unwrap();
        assert_eq!(complex, back);
    }

    #[test]
    fn gauss_label_rank() {
        let label = SkewLabel::from_upper_triangle(2, FieldTag::Complex, vec![GaussInt::new(0, 2)])
            .unwrap();
        assert_eq!(label.rank(), 2);
        let m: SkewMatrix<GaussRational> = label.to_skew_matrix().unwrap();
        assert_eq!(m.matrix()[(0, 1)], GaussRational::from_ints(0, 2));
    }

    #[test]
    fn linear_map_json_round_trip() {
        let m = lm(2, 3, &[&[1, 0, 2], &[0, 1, -1], &[3, 0, 0], &[0, 0, 1]]);
        let back = LinearMap::<Rat>::from_json(&m.to_json().unwrap()).unwrap();
        assert_eq!(m, back);
    }
}
