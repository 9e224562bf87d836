//! Acceptance suite: one test per criterion, each printing a pass line and
//! enforcing its tolerance and runtime budget. Run with `--nocapture` to see
//! the per-criterion timing lines.

mod common;

use std::time::Instant;

use common::*;

use nilcomm::components::{
    canonical_representative, connect_in_fiber, homeo_k2_forward, homeo_k2_inverse, retract_kernel,
    retract_strict_to_heis,
};
use nilcomm::frames::{
    isotropic_to_symplectic, pack_cayley_dickson, polar_isotropic, unpack_cayley_dickson, Doubled,
    IsotropicEmbedding,
};
use nilcomm::invariant::{
    component_label, darboux_normal_form, is_realizable, phi, plucker_rank2_test, skew_rank,
    GaussInt, LinearMap, SkewLabel, SkewMatrix,
};
use nilcomm::lie::{
    bch_product_2step, group_commutator_log, nilpotent_exp, st_bracket, Convention, FieldTag,
    HeisenbergElement, Lattice,
};
use nilcomm::matrix::Mat;
use nilcomm::numeric;
use nilcomm::scalar::Complex64;
use nilcomm::strata::is_rational_point;
use nilcomm::{GaussRational, QuadRational, Rat, Scalar};

fn budget(name: &str, started: Instant, limit_s: f64) {
    let elapsed = started.elapsed().as_secs_f64();
    println!("acceptance {name}: PASS in {elapsed:.2}s (budget {limit_s}s)");
    assert!(
        elapsed < limit_s,
        "{name} exceeded its runtime budget: {elapsed:.2}s >= {limit_s}s"
    );
}

#[test]
fn criterion_1_bch_dictionary() {
    let started = Instant::now();
    let mut rng = TestRng::new(0xBC4);
    for trial in 0..1000 {
        let n = (trial % 3) + 1;
        let x = HeisenbergElement::new(
            int_vec::<Rat>(&mut rng, n, 4),
            int_vec::<Rat>(&mut rng, n, 4),
            rng.rat(4, 4),
        )
        .unwrap();
        let y = HeisenbergElement::new(
            int_vec::<Rat>(&mut rng, n, 4),
            int_vec::<Rat>(&mut rng, n, 4),
            rng.rat(4, 4),
        )
        .unwrap();
        // product dictionary, exactly
        let p = bch_product_2step(&x, &y).unwrap();
        let lhs = nilpotent_exp(&p.to_strict());
        let rhs = nilpotent_exp(&x.to_strict()).mul(&nilpotent_exp(&y.to_strict()));
        assert_eq!(lhs, rhs, "trial {trial}");
        // commutator dictionary, exactly
        let log = group_commutator_log(&x, &y).unwrap();
        let br = st_bracket(&x.to_strict(), &y.to_strict()).unwrap();
        assert_eq!(log.to_strict(), br, "trial {trial}");
    }
    budget("criterion 1 (BCH dictionary)", started, 5.0);
}

#[test]
fn criterion_2_component_classification() {
    let started = Instant::now();
    for k in [2usize, 3, 4] {
        let cells = k * (k - 1) / 2;
        let mut upper = vec![-2i64; cells];
        loop {
            let label = SkewLabel::from_upper_ints(k, &upper);
            let rank = label.rank();
            for n in [1usize, 2] {
                let realizable = is_realizable(&label, n);
                assert_eq!(realizable, rank / 2 <= n);
                match canonical_representative::<Rat>(&label, n, Convention::OmegaN) {
                    Ok(m) => {
                        assert!(realizable, "k={k} n={n} {upper:?}");
                        assert_eq!(phi(&m), label.to_skew_matrix().unwrap(), "k={k} n={n}");
                    }
                    Err(_) => assert!(!realizable, "k={k} n={n} {upper:?}"),
                }
                // maximal-rank labels are rejected exactly when ⌊k/2⌋ > n
                if rank == 2 * (k / 2) {
                    assert_eq!(!realizable, k / 2 > n);
                }
            }
            let mut done = true;
            for slot in (0..cells).rev() {
                if upper[slot] < 2 {
                    upper[slot] += 1;
                    upper[slot + 1..].fill(-2);
                    done = false;
                    break;
                }
            }
            if done {
                break;
            }
        }
    }
    budget("criterion 2 (component classification)", started, 60.0);
}

#[test]
fn criterion_3_darboux_normal_form() {
    let started = Instant::now();
    let mut rng = TestRng::new(0xDA4B);
    for trial in 0..1000 {
        let k = (trial % 6) + 1;
        let b = rand_skew(&mut rng, k, 6, 3);
        let (p, r) = darboux_normal_form(&b);
        let normal = p.transpose().mul(b.matrix()).mul(&p);
        assert_eq!(
            normal,
            SkewMatrix::<Rat>::standard_form(k, r).matrix().clone(),
            "trial {trial}"
        );
        assert!(!Scalar::is_zero(&p.det()), "trial {trial}");
    }
    budget("criterion 3 (Darboux normal form)", started, 10.0);
}

#[test]
fn criterion_4_homotopy_invariance() {
    let started = Instant::now();
    let svals = [
        Rat::from_int(0),
        Rat::new(1.into(), 4.into()),
        Rat::new(1.into(), 2.into()),
        Rat::new(3.into(), 4.into()),
        Rat::from_int(1),
    ];
    let mut rng = TestRng::new(0x4E7);
    // x-scaling retraction: labels constant, exactly
    for trial in 0..500 {
        let n = (trial % 2) + 2;
        let k = (trial % 3) + 2;
        let t = rand_almost_commuting_strict(&mut rng, n, k);
        let label = component_label(&t).unwrap();
        for s in &svals {
            let rt = retract_strict_to_heis(&t, s).unwrap();
            assert_eq!(
                component_label(&rt).unwrap(),
                label.clone(),
                "trial {trial}"
            );
        }
    }
    // kernel-column retraction: phi constant, exactly
    for trial in 0..500 {
        let n = (trial % 3) + 2;
        let k = (trial % 3) + 2;
        let r = (k / 2).min(n - 1);
        let m = rand_normal_form_map(&mut rng, n, k, r);
        let beta: SkewMatrix<Rat> = SkewMatrix::standard_form(k, r);
        assert_eq!(phi(&m), beta, "trial {trial}");
        for s in &svals {
            let rm = retract_kernel(&m, &beta, s).unwrap();
            assert_eq!(phi(&rm), beta.clone(), "trial {trial}");
        }
    }
    budget("criterion 4 (homotopy invariance)", started, 10.0);
}

#[test]
fn criterion_5_fiber_connectivity() {
    let started = Instant::now();
    let mut rng = TestRng::new(0xF1BE);
    // 25 real + 25 complex same-label pairs
    for trial in 0..25 {
        let n = rng.int(1, 4) as usize;
        let k = rng.int(2, 4) as usize;
        let mut sc = small_int_scalar::<Rat>(2);
        let m0 = rand_int_map(&mut rng, n, k, Convention::OmegaN, &mut sc);
        let mut sc1 = small_int_scalar::<Rat>(1);
        let s = rand_symplectic(&mut rng, n, 3, Convention::OmegaN, &mut sc1);
        let m1 = LinearMap::new(n, k, Convention::OmegaN, s.mul(&m0.mat)).unwrap();
        assert_eq!(phi(&m0), phi(&m1));
        let path = connect_in_fiber(&m0, &m1, 64, 1e-9).unwrap();
        assert!(
            path.max_residual() < 1e-9,
            "real trial {trial}: residual {}",
            path.max_residual()
        );
        assert_eq!(path.samples[0].mat, m0.to_float().mat, "real trial {trial}");
        assert_eq!(
            path.samples.last().unwrap().mat,
            m1.to_float().mat,
            "real trial {trial}"
        );
    }
    for trial in 0..25 {
        let n = rng.int(1, 4) as usize;
        let k = rng.int(2, 4) as usize;
        let mut sc = small_gauss_scalar(1);
        let m0 = rand_int_map::<GaussRational>(&mut rng, n, k, Convention::OmegaN, &mut sc);
        let mut sc1 = small_gauss_scalar(1);
        let s = rand_symplectic(&mut rng, n, 2, Convention::OmegaN, &mut sc1);
        let m1 = LinearMap::new(n, k, Convention::OmegaN, s.mul(&m0.mat)).unwrap();
        assert_eq!(phi(&m0), phi(&m1));
        let path = connect_in_fiber(&m0, &m1, 64, 1e-9).unwrap();
        assert!(
            path.max_residual() < 1e-9,
            "complex trial {trial}: residual {}",
            path.max_residual()
        );
        assert_eq!(path.samples[0].mat, m0.to_float().mat);
        assert_eq!(path.samples.last().unwrap().mat, m1.to_float().mat);
    }
    budget("criterion 5 (fiber connectivity)", started, 60.0);
}

#[test]
fn criterion_6_explicit_k2_chart() {
    let started = Instant::now();
    let mut rng = TestRng::new(0x6AB);
    for trial in 0..200 {
        let n = (trial % 3) + 1;
        // float point of the rank-2 fiber: symplectic transform of the core
        let mut base: Mat<f64> = Mat::zeros(2 * n, 2);
        base[(0, 0)] = 1.0;
        base[(1, 1)] = 1.0;
        let mut sc = |rng: &mut TestRng| rng.f64() * 2.0 - 1.0;
        let s = rand_symplectic::<f64>(&mut rng, n, 3, Convention::OmegaN, &mut sc);
        let m = LinearMap::new(n, 2, Convention::OmegaN, s.mul(&base)).unwrap();
        let point = homeo_k2_forward(&m).unwrap();
        // unit-sphere constraint
        let norm_sq: f64 = point.u.iter().map(|x| x * x).sum();
        assert!((norm_sq - 1.0).abs() < 1e-12, "trial {trial}: {norm_sq}");
        // round trip
        let back = homeo_k2_inverse(&point, Convention::OmegaN).unwrap();
        let err = back.mat.sub(&m.mat).max_abs();
        assert!(err < 1e-12, "trial {trial}: round trip error {err}");
    }
    budget("criterion 6 (explicit k=2 chart)", started, 5.0);
}

#[test]
fn criterion_7_frames() {
    let started = Instant::now();
    let mut rng = TestRng::new(0x7F4);

    // symplectic preservation, exact, real and complex inputs
    for trial in 0..200 {
        let n = rng.int(1, 4) as usize;
        let d = rng.int(1, n as i64) as usize;
        if trial % 2 == 0 {
            let o = rand_orthonormal_rational(&mut rng, n, 6);
            let mat = Mat::from_fn(2 * n, d, |i, j| {
                if i < n {
                    o[(i, j)].clone()
                } else {
                    Rat::from_int(0)
                }
            });
            let emb = IsotropicEmbedding::new(n, mat).unwrap();
            let frame = isotropic_to_symplectic(&emb, true).unwrap();
            assert_eq!(frame.symplectic_residual(), 0.0, "trial {trial}");
            assert_eq!(frame.orthonormal_residual(), 0.0, "trial {trial}");
        } else {
            let u = rand_unitary_gauss(&mut rng, n, 5);
            let mat = Mat::from_fn(2 * n, d, |i, j| {
                if i < n {
                    u[(i, j)].clone()
                } else {
                    GaussRational::zero()
                }
            });
            let emb = IsotropicEmbedding::new(n, mat).unwrap();
            let frame = isotropic_to_symplectic(&emb, true).unwrap();
            assert_eq!(frame.symplectic_residual(), 0.0, "trial {trial}");
            assert_eq!(frame.orthonormal_residual(), 0.0, "trial {trial}");
        }
    }

    // polar reconstruction on float instances
    for trial in 0..200 {
        let n = rng.int(1, 4) as usize;
        let d = rng.int(1, n as i64) as usize;
        let top = Mat::from_fn(2 * n, d, |i, j| {
            if i < n && (i + j) < 2 * n {
                rng.f64() * 2.0 - 1.0
            } else {
                0.0
            }
        });
        let mut sc = |rng: &mut TestRng| (rng.f64() * 2.0 - 1.0) * 0.7;
        let s = rand_symplectic::<f64>(&mut rng, n, 2, Convention::Jn, &mut sc);
        let a_mat = s.mul(&top);
        let Ok(a) = IsotropicEmbedding::new(n, a_mat) else {
            continue;
        };
        let Ok((u, sym)) = polar_isotropic(&a) else {
            continue; // rank-deficient draw
        };
        assert!(u.is_orthonormal(1e-10), "trial {trial}");
        // U stays isotropic and reconstructs A through exp(S)
        let exp_s = numeric::hermitian_func(&sym.map(|x| Complex64::new(*x, 0.0)), f64::exp)
            .unwrap()
            .map(|z| z.re);
        let rebuilt = u.mat.mul(&exp_s);
        let err = rebuilt.sub(&a.mat).max_abs();
        assert!(err < 1e-10, "trial {trial}: reconstruction error {err}");
        let sym_err = sym.sub(&sym.transpose()).max_abs();
        assert!(sym_err < 1e-12, "trial {trial}: S asymmetry {sym_err}");
    }

    // pack/unpack exact inverses + Gram characterization, both directions
    for trial in 0..200 {
        let n = rng.int(1, 3) as usize;
        let r = rng.int(1, n as i64) as usize;
        let o = rand_orthonormal_rational(&mut rng, n, 5);
        let mat = Mat::from_fn(2 * n, r, |i, j| {
            if i < n {
                o[(i, j)].clone()
            } else {
                Rat::from_int(0)
            }
        });
        let frame =
            isotropic_to_symplectic(&IsotropicEmbedding::new(n, mat).unwrap(), true).unwrap();
        let packed = pack_cayley_dickson(&frame).unwrap();
        let unpacked = unpack_cayley_dickson(&packed);
        assert_eq!(unpacked.mat, frame.mat, "trial {trial}");
        assert!(packed.gram_is_identity(), "trial {trial}");

        // perturb in packed coordinates: the doubling structure survives the
        // round trip, so Gram-identity must match frame validity exactly
        let mut perturbed = packed.clone();
        let bump = Doubled::new(rng.rat(2, 2), rng.rat(2, 2));
        let i = rng.int(0, n as i64 - 1) as usize;
        let j = rng.int(0, r as i64 - 1) as usize;
        *perturbed.entry_mut(i, j) = perturbed.entry(i, j).add(&bump);
        let back = unpack_cayley_dickson(&perturbed);
        let valid = back.symplectic_residual() == 0.0 && back.orthonormal_residual() == 0.0;
        assert_eq!(perturbed.gram_is_identity(), valid, "trial {trial}");
    }

    budget("criterion 7 (frames)", started, 20.0);
}

#[test]
fn criterion_8_irrational_torus() {
    let started = Instant::now();
    let s2 = QuadRational::sqrt_m(2).unwrap();
    let one = QuadRational::one();
    let mat = Mat::from_rows(vec![
        vec![s2.clone(), one.clone()],
        vec![s2.clone(), one.clone()],
    ])
    .unwrap();
    let irrational = LinearMap::new(1, 2, Convention::OmegaN, mat).unwrap();
    assert!(!is_rational_point(&irrational, &Lattice::unit()).unwrap());

    // all-rational maps are rational points
    let mut rng = TestRng::new(0x8AD);
    for _ in 0..30 {
        let n = rng.int(1, 2) as usize;
        let k = rng.int(1, 3) as usize;
        let mut sc = small_int_scalar::<Rat>(3);
        let f = rand_int_map(&mut rng, n, k, Convention::OmegaN, &mut sc);
        assert!(is_rational_point(&f, &Lattice::unit()).unwrap());
    }

    // invariance under 100 unimodular changes of basis
    for trial in 0..100 {
        let u = rand_unimodular(&mut rng, 2, 6);
        let uq = u.map(QuadRational::from_rat);
        let fu = LinearMap::new(1, 2, Convention::OmegaN, irrational.mat.mul(&uq)).unwrap();
        assert!(
            !is_rational_point(&fu, &Lattice::unit()).unwrap(),
            "trial {trial}"
        );
    }
    budget("criterion 8 (irrational torus)", started, 5.0);
}

#[test]
fn criterion_9_plucker_equivalence() {
    let started = Instant::now();
    // all 5^6 = 15,625 integer labels with entries in [-2, 2], k = 4
    let mut upper = [-2i64; 6];
    let mut seen: u64 = 0;
    loop {
        let label = SkewLabel::from_upper_ints(4, &upper);
        let by_quadrics = plucker_rank2_test(&label);
        let by_rank = skew_rank(&label.to_skew_matrix::<Rat>().unwrap()) <= 2;
        assert_eq!(by_quadrics, by_rank, "{upper:?}");
        seen += 1;
        let mut done = true;
        for slot in (0..6).rev() {
            if upper[slot] < 2 {
                upper[slot] += 1;
                upper[slot + 1..].fill(-2);
                done = false;
                break;
            }
        }
        if done {
            break;
        }
    }
    assert_eq!(seen, 15_625);
    // keep the complex entry path honest on a spot check
    let gauss = SkewLabel::from_upper_triangle(
        4,
        FieldTag::Complex,
        vec![
            GaussInt::new(1, 1),
            GaussInt::new(0, 0),
            GaussInt::new(0, 0),
            GaussInt::new(0, 0),
            GaussInt::new(0, 0),
            GaussInt::new(2, -1),
        ],
    )
    .unwrap();
    assert_eq!(plucker_rank2_test(&gauss), gauss.rank() <= 2);
    budget("criterion 9 (Plucker equivalence)", started, 30.0);
}
