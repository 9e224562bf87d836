//! Shared fixtures for the integration suites: a deterministic generator and
//! structured random instances (tuples, labels, symplectic transforms,
//! isotropic embeddings) for every scalar regime under test.

#![allow(dead_code)]
#![allow(clippy::needless_range_loop)]

use nilcomm::invariant::{LinearMap, SkewMatrix};
use nilcomm::lie::{omega_matrix, Convention, GroupTuple, Lattice, StrictUpperElement};
use nilcomm::matrix::Mat;
use nilcomm::scalar::{ExactScalar, GaussRational, Rat, Scalar};

/// SplitMix64: small, deterministic, seedable.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        let span = (hi - lo + 1) as u64;
        lo + (self.next_u64() % span) as i64
    }

    pub fn f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Small rational with numerator in `[-b, b]` and denominator in `1..=d`.
    pub fn rat(&mut self, b: i64, d: i64) -> Rat {
        Rat::new(self.int(-b, b).into(), self.int(1, d).into())
    }

    pub fn gauss_int(&mut self, b: i64) -> GaussRational {
        GaussRational::from_ints(self.int(-b, b), self.int(-b, b))
    }
}

pub fn int_vec<S: Scalar>(rng: &mut TestRng, len: usize, bound: i64) -> Vec<S> {
    (0..len)
        .map(|_| S::from_int(rng.int(-bound, bound)))
        .collect()
}

/// Random antisymmetric matrix with small rational entries.
pub fn rand_skew(rng: &mut TestRng, k: usize, num_bound: i64, den_bound: i64) -> SkewMatrix<Rat> {
    let mut upper = vec![vec![Rat::from_int(0); k]; k];
    for i in 0..k {
        for j in i + 1..k {
            upper[i][j] = rng.rat(num_bound, den_bound);
        }
    }
    let mat = Mat::from_fn(k, k, |i, j| {
        if i < j {
            upper[i][j].clone()
        } else if i > j {
            -upper[j][i].clone()
        } else {
            Rat::from_int(0)
        }
    });
    SkewMatrix::new(mat).expect("antisymmetric by construction")
}

/// Symplectic transvection `x ↦ x + λ·ω(x, v)·v` as a matrix for the given
/// convention; always preserves the form.
pub fn transvection<S: Scalar>(n: usize, v: &[S], lambda: &S, convention: Convention) -> Mat<S> {
    let omega = omega_matrix::<S>(n, convention);
    let omega_v = omega.mul_vec(v);
    Mat::from_fn(2 * n, 2 * n, |i, j| {
        let mut e = if i == j { S::one() } else { S::zero() };
        e = e + lambda.clone() * v[i].clone() * omega_v[j].clone();
        e
    })
}

/// Product of random small-integer transvections: an exact symplectic matrix.
pub fn rand_symplectic<S: Scalar>(
    rng: &mut TestRng,
    n: usize,
    factors: usize,
    convention: Convention,
    scalar: &mut impl FnMut(&mut TestRng) -> S,
) -> Mat<S> {
    let mut s: Mat<S> = Mat::identity(2 * n);
    for _ in 0..factors {
        let v: Vec<S> = (0..2 * n).map(|_| scalar(rng)).collect();
        let lambda = scalar(rng);
        s = s.mul(&transvection(n, &v, &lambda, convention));
    }
    s
}

pub fn small_int_scalar<S: Scalar>(bound: i64) -> impl FnMut(&mut TestRng) -> S {
    move |rng: &mut TestRng| S::from_int(rng.int(-bound, bound))
}

pub fn small_gauss_scalar(bound: i64) -> impl FnMut(&mut TestRng) -> GaussRational {
    move |rng: &mut TestRng| {
        GaussRational::from_ints(rng.int(-bound, bound), rng.int(-bound, bound))
    }
}

/// Random unimodular integer matrix (determinant ±1) from elementary ops.
pub fn rand_unimodular(rng: &mut TestRng, k: usize, ops: usize) -> Mat<Rat> {
    let mut m: Mat<Rat> = Mat::identity(k);
    for _ in 0..ops {
        match rng.int(0, 2) {
            0 => {
                // add an integer multiple of one row to another
                let i = rng.int(0, k as i64 - 1) as usize;
                let mut j = rng.int(0, k as i64 - 1) as usize;
                if i == j {
                    j = (j + 1) % k;
                }
                let c = Rat::from_int(rng.int(-2, 2));
                for col in 0..k {
                    let t = c.clone() * m[(j, col)].clone();
                    m[(i, col)] = m[(i, col)].clone() + t;
                }
            }
            1 => {
                // swap two rows
                let i = rng.int(0, k as i64 - 1) as usize;
                let j = rng.int(0, k as i64 - 1) as usize;
                if i != j {
                    let perm: Vec<usize> = (0..k)
                        .map(|r| {
                            if r == i {
                                j
                            } else if r == j {
                                i
                            } else {
                                r
                            }
                        })
                        .collect();
                    m = m.permute_rows(&perm);
                }
            }
            _ => {
                // negate a row
                let i = rng.int(0, k as i64 - 1) as usize;
                for col in 0..k {
                    m[(i, col)] = -m[(i, col)].clone();
                }
            }
        }
    }
    m
}

/// Random rational-orthogonal matrix from Pythagorean Givens rotations.
pub fn rand_orthonormal_rational(rng: &mut TestRng, n: usize, rotations: usize) -> Mat<Rat> {
    let mut m: Mat<Rat> = Mat::identity(n);
    if n < 2 {
        return m;
    }
    for _ in 0..rotations {
        let p = rng.int(1, 5);
        let q = rng.int(1, 5);
        let (p2, q2) = (p * p, q * q);
        let c = Rat::new((p2 - q2).into(), (p2 + q2).into());
        let s = Rat::new((2 * p * q).into(), (p2 + q2).into());
        let i = rng.int(0, n as i64 - 1) as usize;
        let mut j = rng.int(0, n as i64 - 1) as usize;
        if i == j {
            j = (j + 1) % n;
        }
        let mut g: Mat<Rat> = Mat::identity(n);
        g[(i, i)] = c.clone();
        g[(j, j)] = c;
        g[(i, j)] = -s.clone();
        g[(j, i)] = s;
        m = m.mul(&g);
    }
    m
}

/// Random Gaussian-rational unitary: Pythagorean Givens mixed with unit
/// Gaussian phases like (3+4i)/5.
pub fn rand_unitary_gauss(rng: &mut TestRng, n: usize, rotations: usize) -> Mat<GaussRational> {
    let mut m: Mat<GaussRational> = rand_orthonormal_rational(rng, n, rotations)
        .map(|r| GaussRational::new(r.clone(), Rat::from_int(0)));
    for d in 0..n {
        // unit-modulus Gaussian rational phase
        let p = rng.int(1, 4);
        let q = rng.int(1, 4);
        let norm = Rat::from_int(p * p + q * q);
        let phase = GaussRational::new(
            Rat::from_int(p * p - q * q) / norm.clone(),
            Rat::from_int(2 * p * q) / norm,
        );
        for col in 0..n {
            m[(d, col)] = m[(d, col)].clone() * phase.clone();
        }
    }
    m
}

/// Random almost-commuting tuple in the strict algebra with nonzero x-blocks:
/// shared nilpotent direction `x` scaled per element, paired with integer
/// vectors from its annihilators.
pub fn rand_almost_commuting_strict(rng: &mut TestRng, n: usize, k: usize) -> GroupTuple<Rat> {
    // strictly upper x with a single random band
    let mut x: Mat<Rat> = Mat::zeros(n, n);
    if n >= 2 {
        for _ in 0..n {
            let i = rng.int(0, n as i64 - 2) as usize;
            let j = rng.int(i as i64 + 1, n as i64 - 1) as usize;
            x[(i, j)] = Rat::from_int(rng.int(-2, 2));
        }
    }
    // integer bases of the left/right annihilators of x
    let left = integer_kernel(&x.transpose());
    let right = integer_kernel(&x);
    let logs = (0..k)
        .map(|_| {
            let c = Rat::from_int(rng.int(-2, 2));
            let a = combine(rng, &left, n);
            let b = combine(rng, &right, n);
            StrictUpperElement::new(a, b, x.scale(&c), rng.rat(4, 3)).expect("strictly upper")
        })
        .collect();
    GroupTuple::new(logs, Lattice::unit()).expect("consistent dimensions")
}

fn integer_kernel(m: &Mat<Rat>) -> Vec<Vec<Rat>> {
    m.kernel_basis()
        .into_iter()
        .map(|v| {
            // clear denominators
            let lcm = v
                .iter()
                .map(|r| r.denom().clone())
                .fold(num_bigint_one(), num_lcm);
            v.iter()
                .map(|r| r.clone() * Rat::from_integer(lcm.clone()))
                .collect()
        })
        .collect()
}

fn num_bigint_one() -> num_bigint::BigInt {
    num_bigint::BigInt::from(1)
}

fn num_lcm(a: num_bigint::BigInt, b: num_bigint::BigInt) -> num_bigint::BigInt {
    use num_integer::Integer;
    a.lcm(&b)
}

fn combine(rng: &mut TestRng, basis: &[Vec<Rat>], n: usize) -> Vec<Rat> {
    let mut out = vec![Rat::from_int(0); n];
    for vec in basis {
        let c = Rat::from_int(rng.int(-3, 3));
        for (o, v) in out.iter_mut().zip(vec) {
            *o = o.clone() + c.clone() * v.clone();
        }
    }
    out
}

/// Random map in the fiber of the interleaved normal form `Ω_r ⊕ 0`:
/// a symplectic transform of the canonical core padded with kernel-direction
/// tail columns.
pub fn rand_normal_form_map(rng: &mut TestRng, n: usize, k: usize, r: usize) -> LinearMap<Rat> {
    assert!(2 * r <= k && r <= n);
    let mut base: Mat<Rat> = Mat::zeros(2 * n, k);
    for i in 0..2 * r {
        base[(i, i)] = Rat::from_int(1);
    }
    for j in 2 * r..k {
        for p in r..n {
            base[(2 * p, j)] = Rat::from_int(rng.int(-3, 3));
        }
    }
    let mut scalar = small_int_scalar::<Rat>(1);
    let s = rand_symplectic(rng, n, 3, Convention::OmegaN, &mut scalar);
    LinearMap::new(n, k, Convention::OmegaN, s.mul(&base)).expect("shapes agree")
}

/// Random exact map 2n×k with entries drawn from the scalar generator.
pub fn rand_int_map<S: ExactScalar>(
    rng: &mut TestRng,
    n: usize,
    k: usize,
    convention: Convention,
    scalar: &mut impl FnMut(&mut TestRng) -> S,
) -> LinearMap<S> {
    let mat = Mat::from_fn(2 * n, k, |_, _| scalar(rng));
    LinearMap::new(n, k, convention, mat).expect("shapes agree")
}
