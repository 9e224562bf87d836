//! Scalar tower: exact field elements over ℚ, ℚ(i) and ℚ(√m), plus the
//! floating regimes used on homotopy paths.
//!
//! Every operation in this crate runs in exactly one scalar regime. Exact
//! regimes (`Rat`, `GaussRational`, `QuadRational`) back all identities that
//! must hold on the nose; `f64` and `Complex64` appear only where paths and
//! polar factors are intrinsically transcendental.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

pub use num_complex::Complex64;

/// Arbitrary-precision rational, the base of the exact tower.
pub type Rat = BigRational;

/// Field element usable throughout the library.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Floating counterpart used when a computation leaves the exact regime.
    type Float: FloatScalar;

    /// Whether the field contains a square root of -1.
    const COMPLEX: bool;
    /// Whether arithmetic is exact (no rounding).
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_int(v: i64) -> Self;
    fn from_rat(r: &Rat) -> Self;

    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    /// Hermitian conjugate: identity on real-embedded types, complex
    /// conjugation on ℚ(i) and on `Complex64`.
    fn conj(&self) -> Self;

    /// A square root of -1, in the regimes that have one.
    fn imaginary_unit() -> Option<Self> {
        None
    }

    /// Approximate magnitude, used for float pivoting and residual norms.
    fn abs_f64(&self) -> f64;

    fn to_float(&self) -> Self::Float;

    /// Exact square root when one exists in the field (used by the explicit
    /// k=2 chart over ℝ). Floats always succeed on non-negative input.
    fn sqrt_checked(&self) -> Option<Self> {
        None
    }

    fn to_json(&self) -> Result<Value>;
    fn from_json(v: &Value) -> Result<Self>;

    fn div_exact(&self, rhs: &Self) -> Self {
        self.clone() * rhs.inv().expect("division by zero")
    }
}

/// Exact scalars admit decompositions into rational coordinates, which is
/// what lattice-rank computations consume.
pub trait ExactScalar: Scalar {
    /// Coordinates of the value over ℚ with respect to the field basis
    /// (1 for ℚ; 1,i for ℚ(i); 1,√m for ℚ(√m)).
    fn rational_parts(&self) -> Vec<Rat>;

    /// The value as `re + im·i` with rational `re, im`, when the value lies
    /// in ℚ(i). `None` for irrational quadratic elements.
    fn gauss_parts(&self) -> Option<(Rat, Rat)>;

    /// The value as a Gaussian integer `p + q·i`, when it is one.
    fn as_gauss_int(&self) -> Option<(BigInt, BigInt)> {
        let (re, im) = self.gauss_parts()?;
        if re.denom().is_one() && im.denom().is_one() {
            Some((re.numer().clone(), im.numer().clone()))
        } else {
            None
        }
    }
}

/// Floating scalars embed losslessly into `Complex64`, which is the single
/// substrate of the numerical kernels.
pub trait FloatScalar: Scalar + Copy {
    fn to_c64(&self) -> Complex64;
    /// Read back from `Complex64`. For `f64` the imaginary part is dropped;
    /// callers only do this after structure-preserving operations where it
    /// carries rounding noise.
    fn from_c64(c: Complex64) -> Self;
    fn re_f64(&self) -> f64;
}

// ---------------------------------------------------------------------------
// ℚ

fn rat_is_square(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer();
    let d = r.denom();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &sn.clone() * &sn == *n && &sd.clone() * &sd == *d {
        Some(Rat::new(sn, sd))
    } else {
        None
    }
}

fn bigint_to_json(b: &BigInt) -> Result<Value> {
    b.to_i64()
        .map(|v| json!(v))
        .ok_or_else(|| Error::Schema(format!("integer {b} exceeds the JSON integer range")))
}

fn json_to_bigint(v: &Value) -> Result<BigInt> {
    v.as_i64()
        .map(BigInt::from)
        .ok_or_else(|| Error::Schema(format!("expected integer, got {v}")))
}

pub fn rat_to_json(r: &Rat) -> Result<Value> {
    Ok(json!({
        "num": bigint_to_json(r.numer())?,
        "den": bigint_to_json(r.denom())?,
    }))
}

pub fn rat_from_json(v: &Value) -> Result<Rat> {
    // Accept both {"num","den"} objects and bare integers.
    if let Some(n) = v.as_i64() {
        return Ok(Rat::from_integer(BigInt::from(n)));
    }
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Schema(format!("expected rational, got {v}")))?;
    let num = json_to_bigint(
        obj.get("num")
            .ok_or_else(|| Error::Schema("rational missing \"num\"".into()))?,
    )?;
    let den = json_to_bigint(
        obj.get("den")
            .ok_or_else(|| Error::Schema("rational missing \"den\"".into()))?,
    )?;
    if den.is_zero() {
        return Err(Error::Schema("rational with zero denominator".into()));
    }
    Ok(Rat::new(num, den))
}

impl Scalar for Rat {
    type Float = f64;
    const COMPLEX: bool = false;
    const EXACT: bool = true;

    fn zero() -> Self {
        Rat::from_integer(BigInt::from(0))
    }
    fn one() -> Self {
        Rat::from_integer(BigInt::from(1))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_int(v: i64) -> Self {
        Rat::from_integer(BigInt::from(v))
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn abs_f64(&self) -> f64 {
        self.to_float().abs()
    }
    fn to_float(&self) -> f64 {
        self.numer().to_f64().unwrap_or(f64::NAN) / self.denom().to_f64().unwrap_or(f64::NAN)
    }
    fn sqrt_checked(&self) -> Option<Self> {
        rat_is_square(self)
    }
    fn to_json(&self) -> Result<Value> {
        rat_to_json(self)
    }
    fn from_json(v: &Value) -> Result<Self> {
        rat_from_json(v)
    }
}

impl ExactScalar for Rat {
    fn rational_parts(&self) -> Vec<Rat> {
        vec![self.clone()]
    }
    fn gauss_parts(&self) -> Option<(Rat, Rat)> {
        Some((self.clone(), Rat::from_int(0)))
    }
}

// ---------------------------------------------------------------------------
// ℚ(i)

/// Gaussian rational `re + im·i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GaussRational {
    pub re: Rat,
    pub im: Rat,
}

impl GaussRational {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussRational { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussRational::new(Rat::from_int(re), Rat::from_int(im))
    }

    /// Squared modulus `re² + im²`, a rational.
    pub fn norm_sq(&self) -> Rat {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}i", self.re, self.im)
    }
}

impl Add for GaussRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        GaussRational::new(self.re + o.re, self.im + o.im)
    }
}
impl Sub for GaussRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        GaussRational::new(self.re - o.re, self.im - o.im)
    }
}
impl Mul for GaussRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        GaussRational::new(
            self.re.clone() * o.re.clone() - self.im.clone() * o.im.clone(),
            self.re * o.im + self.im * o.re,
        )
    }
}
impl Neg for GaussRational {
    type Output = Self;
    fn neg(self) -> Self {
        GaussRational::new(-self.re, -self.im)
    }
}

impl Scalar for GaussRational {
    type Float = Complex64;
    const COMPLEX: bool = true;
    const EXACT: bool = true;

    fn zero() -> Self {
        GaussRational::from_ints(0, 0)
    }
    fn one() -> Self {
        GaussRational::from_ints(1, 0)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
    fn from_int(v: i64) -> Self {
        GaussRational::from_ints(v, 0)
    }
    fn from_rat(r: &Rat) -> Self {
        GaussRational::new(r.clone(), Rat::from_int(0))
    }
    fn inv(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            return None;
        }
        let n = self.norm_sq();
        Some(GaussRational::new(
            self.re.clone() / n.clone(),
            -self.im.clone() / n,
        ))
    }
    fn conj(&self) -> Self {
        GaussRational::new(self.re.clone(), -self.im.clone())
    }
    fn imaginary_unit() -> Option<Self> {
        Some(GaussRational::from_ints(0, 1))
    }
    fn abs_f64(&self) -> f64 {
        self.to_float().norm()
    }
    fn to_float(&self) -> Complex64 {
        Complex64::new(Scalar::to_float(&self.re), Scalar::to_float(&self.im))
    }
    fn to_json(&self) -> Result<Value> {
        Ok(json!({"re": rat_to_json(&self.re)?, "im": rat_to_json(&self.im)?}))
    }
    fn from_json(v: &Value) -> Result<Self> {
        // plain rationals embed with zero imaginary part
        if v.is_i64() || v.as_object().is_some_and(|o| o.contains_key("num")) {
            return Ok(GaussRational::new(rat_from_json(v)?, Rat::from_int(0)));
        }
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Schema(format!("expected Gaussian rational, got {v}")))?;
        let re = rat_from_json(
            obj.get("re")
                .ok_or_else(|| Error::Schema("Gaussian rational missing \"re\"".into()))?,
        )?;
        let im = rat_from_json(
            obj.get("im")
                .ok_or_else(|| Error::Schema("Gaussian rational missing \"im\"".into()))?,
        )?;
        Ok(GaussRational::new(re, im))
    }
}

impl ExactScalar for GaussRational {
    fn rational_parts(&self) -> Vec<Rat> {
        vec![self.re.clone(), self.im.clone()]
    }
    fn gauss_parts(&self) -> Option<(Rat, Rat)> {
        Some((self.re.clone(), self.im.clone()))
    }
}

// ---------------------------------------------------------------------------
// ℚ(√m)

/// Element `a + b·√m` of a real quadratic field, `m ≥ 2` not a perfect
/// square. Values with `b = 0` are plain rationals and carry `m = 0` until
/// combined with a genuine quadratic value, at which point they adopt its
/// field. Mixing two distinct quadratic fields is a programming error and
/// panics.
#[derive(Clone, Debug)]
pub struct QuadRational {
    pub a: Rat,
    pub b: Rat,
    pub m: i64,
}

impl QuadRational {
    pub fn new(a: Rat, b: Rat, m: i64) -> Result<Self> {
        if !Zero::is_zero(&b) {
            Self::check_m(m)?;
        }
        Ok(QuadRational { a, b, m })
    }

    pub fn check_m(m: i64) -> Result<()> {
        if m < 2 {
            return Err(Error::Schema(format!(
                "quadratic field needs m >= 2, got {m}"
            )));
        }
        let s = (m as f64).sqrt() as i128;
        for r in s.saturating_sub(1)..=s + 1 {
            if r >= 0 && r * r == m as i128 {
                return Err(Error::Schema(format!(
                    "m = {m} is a perfect square; the field would collapse to the rationals"
                )));
            }
        }
        Ok(())
    }

    /// `√m` in the field with the given discriminant.
    pub fn sqrt_m(m: i64) -> Result<Self> {
        QuadRational::new(Rat::from_int(0), Rat::from_int(1), m)
    }

    fn unified_m(&self, other: &Self) -> i64 {
        match (Zero::is_zero(&self.b), Zero::is_zero(&other.b)) {
            (true, _) => other.m,
            (_, true) => self.m,
            (false, false) => {
                assert_eq!(
                    self.m, other.m,
                    "cannot mix elements of distinct quadratic fields"
                );
                self.m
            }
        }
    }

    /// Galois conjugate `a - b·√m` (not the hermitian conjugate).
    pub fn galois_conj(&self) -> Self {
        QuadRational {
            a: self.a.clone(),
            b: -self.b.clone(),
            m: self.m,
        }
    }

    /// Field norm `a² - m·b²`, a rational.
    pub fn field_norm(&self) -> Rat {
        self.a.clone() * self.a.clone() - Rat::from_int(self.m) * self.b.clone() * self.b.clone()
    }
}

impl PartialEq for QuadRational {
    fn eq(&self, other: &Self) -> bool {
        // b = 0 values are rationals regardless of the recorded field.
        self.a == other.a && self.b == other.b && (Zero::is_zero(&self.b) || self.m == other.m)
    }
}

impl fmt::Display for QuadRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Zero::is_zero(&self.b) {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}+{}*sqrt({})", self.a, self.b, self.m)
        }
    }
}

impl Add for QuadRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let m = self.unified_m(&o);
        QuadRational {
            a: self.a + o.a,
            b: self.b + o.b,
            m,
        }
    }
}
impl Sub for QuadRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let m = self.unified_m(&o);
        QuadRational {
            a: self.a - o.a,
            b: self.b - o.b,
            m,
        }
    }
}
impl Mul for QuadRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let m = self.unified_m(&o);
        QuadRational {
            a: self.a.clone() * o.a.clone() + Rat::from_int(m) * self.b.clone() * o.b.clone(),
            b: self.a * o.b + self.b * o.a,
            m,
        }
    }
}
impl Neg for QuadRational {
    type Output = Self;
    fn neg(self) -> Self {
        QuadRational {
            a: -self.a,
            b: -self.b,
            m: self.m,
        }
    }
}

impl Scalar for QuadRational {
    type Float = f64;
    const COMPLEX: bool = false;
    const EXACT: bool = true;

    fn zero() -> Self {
        QuadRational {
            a: Rat::from_int(0),
            b: Rat::from_int(0),
            m: 0,
        }
    }
    fn one() -> Self {
        QuadRational {
            a: Rat::from_int(1),
            b: Rat::from_int(0),
            m: 0,
        }
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }
    fn from_int(v: i64) -> Self {
        QuadRational {
            a: Rat::from_int(v),
            b: Rat::from_int(0),
            m: 0,
        }
    }
    fn from_rat(r: &Rat) -> Self {
        QuadRational {
            a: r.clone(),
            b: Rat::from_int(0),
            m: 0,
        }
    }
    fn inv(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            return None;
        }
        // (a + b√m)⁻¹ = (a − b√m)/(a² − m b²); the norm is nonzero because
        // √m is irrational.
        let n = self.field_norm();
        let g = self.galois_conj();
        Some(QuadRational {
            a: g.a / n.clone(),
            b: g.b / n,
            m: self.m,
        })
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn abs_f64(&self) -> f64 {
        self.to_float().abs()
    }
    fn to_float(&self) -> f64 {
        Scalar::to_float(&self.a) + Scalar::to_float(&self.b) * (self.m as f64).sqrt()
    }
    fn to_json(&self) -> Result<Value> {
        Ok(json!({
            "a": rat_to_json(&self.a)?,
            "b": rat_to_json(&self.b)?,
            "m": self.m,
        }))
    }
    fn from_json(v: &Value) -> Result<Self> {
        // plain rationals embed with b = 0
        if v.is_i64() || v.as_object().is_some_and(|o| o.contains_key("num")) {
            return Ok(QuadRational::from_rat(&rat_from_json(v)?));
        }
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Schema(format!("expected quadratic element, got {v}")))?;
        let a = rat_from_json(
            obj.get("a")
                .ok_or_else(|| Error::Schema("quadratic element missing \"a\"".into()))?,
        )?;
        let b = rat_from_json(
            obj.get("b")
                .ok_or_else(|| Error::Schema("quadratic element missing \"b\"".into()))?,
        )?;
        let m = obj
            .get("m")
            .and_then(Value::as_i64)
            .ok_or_else(|| Error::Schema("quadratic element missing integer \"m\"".into()))?;
        QuadRational::new(a, b, m)
    }
}

impl ExactScalar for QuadRational {
    fn rational_parts(&self) -> Vec<Rat> {
        vec![self.a.clone(), self.b.clone()]
    }
    fn gauss_parts(&self) -> Option<(Rat, Rat)> {
        if Zero::is_zero(&self.b) {
            Some((self.a.clone(), Rat::from_int(0)))
        } else {
            None
        }
    }
}

// ---------------------------------------------------------------------------
// Floats

impl Scalar for f64 {
    type Float = f64;
    const COMPLEX: bool = false;
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn from_int(v: i64) -> Self {
        v as f64
    }
    fn from_rat(r: &Rat) -> Self {
        Scalar::to_float(r)
    }
    fn inv(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }
    fn conj(&self) -> Self {
        *self
    }
    fn abs_f64(&self) -> f64 {
        self.abs()
    }
    fn to_float(&self) -> f64 {
        *self
    }
    fn sqrt_checked(&self) -> Option<Self> {
        if *self >= 0.0 {
            Some(f64::sqrt(*self))
        } else {
            None
        }
    }
    fn to_json(&self) -> Result<Value> {
        Ok(json!(self))
    }
    fn from_json(v: &Value) -> Result<Self> {
        v.as_f64()
            .ok_or_else(|| Error::Schema(format!("expected float, got {v}")))
    }
}

impl FloatScalar for f64 {
    fn to_c64(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
    fn from_c64(c: Complex64) -> Self {
        c.re
    }
    fn re_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for Complex64 {
    type Float = Complex64;
    const COMPLEX: bool = true;
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_int(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn from_rat(r: &Rat) -> Self {
        Complex64::new(Scalar::to_float(r), 0.0)
    }
    fn inv(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            None
        } else {
            Some(1.0 / self)
        }
    }
    fn conj(&self) -> Self {
        Complex64::new(self.re, -self.im)
    }
    fn imaginary_unit() -> Option<Self> {
        Some(Complex64::new(0.0, 1.0))
    }
    fn abs_f64(&self) -> f64 {
        self.norm()
    }
    fn to_float(&self) -> Complex64 {
        *self
    }
    fn to_json(&self) -> Result<Value> {
        Ok(json!({"re": self.re, "im": self.im}))
    }
    fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Schema(format!("expected complex float, got {v}")))?;
        let re = obj
            .get("re")
            .and_then(Value::as_f64)
            .ok_or_else(|| Error::Schema("complex float missing \"re\"".into()))?;
        let im = obj
            .get("im")
            .and_then(Value::as_f64)
            .ok_or_else(|| Error::Schema("complex float missing \"im\"".into()))?;
        Ok(Complex64::new(re, im))
    }
}

impl FloatScalar for Complex64 {
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn from_c64(c: Complex64) -> Self {
        c
    }
    fn re_f64(&self) -> f64 {
        self.re
    }
}
