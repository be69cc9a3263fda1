use super::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn gauss1(a: Complex64, b: Complex64, amp: Complex64) -> GeneralizedGaussian {
    GeneralizedGaussian::new(
        amp,
        ComplexSymMatrix::scalar(1, a),
        CVec::from_element(1, b),
    )
    .unwrap()
}

/// Trapezoid rule on `[−8, 8]` with step `h`.
fn trapezoid_1d(f: impl Fn(f64) -> Complex64, h: f64) -> Complex64 {
    let n = (16.0 / h).round() as i64;
    (0..=n).map(|k| f(-8.0 + k as f64 * h)).sum::<Complex64>() * h
}

fn random_real_sym(rng: &mut impl Rng, d: usize, r: f64) -> ComplexSymMatrix {
    ComplexSymMatrix::from_real_fn(d, |_, _| rng.gen_range(-r..r))
}

#[test]
fn integral_examples() {
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    assert!((gauss_integral(&gauss1(one, zero, one)).unwrap() - one).norm() < 1e-14);
    let v = gauss_integral(&gauss1(c(2.0, 0.0), zero, one)).unwrap();
    assert!((v - c(2f64.powf(-0.5), 0.0)).norm() < 1e-14);
    let v = gauss_integral(&gauss1(c(1.0, 1.0), zero, one)).unwrap();
    let expect = Complex64::from_polar(2f64.powf(-0.25), -PI / 8.0);
    assert!((v - expect).norm() < 1e-14);
}

#[test]
fn integral_matches_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let f = random_gaussian(&mut rng, 1);
        let exact = gauss_integral(&f).unwrap();
        let num = trapezoid_1d(|t| f.eval(&[t]), 1e-3);
        assert!(
            (exact - num).norm() < 1e-9 * exact.norm().max(1.0),
            "{exact} vs {num}"
        );
    }
}

#[test]
fn log_det_branch_matches_continuation() {
    // Continue log det along (1−τ)I + τA: the increments are small so the
    // principal log of each ratio tracks the branch.
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for d in 1..=4 {
        for _ in 0..10 {
            let a = random_gaussian(&mut rng, d).quad().matrix().clone();
            let id = CMat::identity(d, d);
            let steps = 2000;
            let mut acc = c(0.0, 0.0);
            let mut prev = c(1.0, 0.0);
            for k in 1..=steps {
                let tau = k as f64 / steps as f64;
                let m = &id * c(1.0 - tau, 0.0) + &a * c(tau, 0.0);
                let det = m.determinant();
                acc += (det / prev).ln();
                prev = det;
            }
            let direct = linalg::log_det_right_half_plane(&a).unwrap();
            let fallback = linalg::log_det_via_real_part(&a).unwrap();
            assert!((direct - acc).norm() < 1e-9, "{direct} vs {acc}");
            assert!((fallback - acc).norm() < 1e-9, "{fallback} vs {acc}");
        }
    }
}

#[test]
fn rejects_non_positive_real_part() {
    let q = ComplexSymMatrix::scalar(1, c(-1.0, 2.0));
    let err = GeneralizedGaussian::new(c(1.0, 0.0), q, CVec::zeros(1)).unwrap_err();
    assert!(matches!(err, Error::NotPositiveDefinite { .. }));
    assert!(ComplexSymMatrix::try_new(CMat::from_row_slice(
        2,
        2,
        &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]
    ))
    .is_err());
}

#[test]
fn fourier_examples() {
    let phi = GeneralizedGaussian::standard(1);
    assert!(phi.fourier().unwrap().approx_eq(&phi, 1e-14));
    let f = GeneralizedGaussian::isotropic(1, 2.0).unwrap();
    let fh = f.fourier().unwrap();
    assert!((fh.quad().matrix()[(0, 0)] - c(0.5, 0.0)).norm() < 1e-15);
    assert!((fh.amplitude() - c(2f64.powf(-0.5), 0.0)).norm() < 1e-15);
}

#[test]
fn fourier_matches_quadrature_and_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let f = random_gaussian(&mut rng, 1);
        let fh = f.fourier().unwrap();
        for &xi in &[-1.3, -0.2, 0.0, 0.7, 1.9] {
            let num = trapezoid_1d(
                |t| f.eval(&[t]) * Complex64::from_polar(1.0, -2.0 * PI * xi * t),
                1e-3,
            );
            assert!((fh.eval(&[xi]) - num).norm() < 1e-9);
        }
        let back = fh.fourier().unwrap();
        for &t in &[-1.0, 0.3, 1.4] {
            assert!((back.eval(&[t]) - f.eval(&[-t])).norm() < 1e-10);
        }
    }
}

#[test]
fn plancherel() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in 0..100 {
        let f = random_gaussian(&mut rng, 1 + k % 3);
        let a = f.norm();
        let b = f.fourier().unwrap().norm();
        assert!((a - b).abs() < 1e-10 * a.max(1.0), "{a} vs {b}");
    }
}

#[test]
fn inner_product_examples() {
    let phi = GeneralizedGaussian::standard(1);
    let v = inner_product(&phi, &phi).unwrap();
    assert!((v - c(2f64.powf(-0.5), 0.0)).norm() < 1e-15);
    let phi2 = phi.tensor(&phi);
    assert!(phi2.approx_eq(&GeneralizedGaussian::standard(2), 0.0));
    assert!((inner_product(&phi2, &phi2).unwrap() - c(0.5, 0.0)).norm() < 1e-15);
    let n2 = phi
        .chirp(&ComplexSymMatrix::scalar(1, c(2.0, 0.0)))
        .unwrap();
    assert!((inner_product(&phi, &n2).unwrap().norm() - 8f64.powf(-0.25)).abs() < 1e-15);
}

#[test]
fn inner_product_is_sesquilinear() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let f = random_gaussian(&mut rng, 2);
    let g = random_gaussian(&mut rng, 2);
    let s = c(0.3, -1.2);
    let lhs = inner_product(&f, &g.scale(s).unwrap()).unwrap();
    let rhs = inner_product(&f, &g).unwrap() * s.conj();
    assert!((lhs - rhs).norm() < 1e-12 * rhs.norm());
    let ff = inner_product(&f, &f).unwrap();
    assert!(ff.im.abs() < 1e-12 * ff.re && ff.re > 0.0);
    assert!(matches!(
        inner_product(&f, &GeneralizedGaussian::standard(1)),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn translate_examples() {
    let phi = GeneralizedGaussian::standard(1);
    assert!(phi.translate(&[0.0]).unwrap().approx_eq(&phi, 0.0));
    let t = phi.translate(&[1.0]).unwrap();
    assert!((t.lin()[0] - c(2.0 * PI, 0.0)).norm() < 1e-14);
    assert!((t.amplitude() - c((-PI).exp(), 0.0)).norm() < 1e-16);
    for k in 0..16 {
        let s = -3.0 + 0.4 * k as f64;
        assert!((t.eval(&[s]) - phi.eval(&[s - 1.0])).norm() < 1e-14);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let f = random_gaussian(&mut rng, 2);
        let x = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
        let y = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
        let a = f.translate(&x).unwrap().translate(&y).unwrap();
        let b = f.translate(&[x[0] + y[0], x[1] + y[1]]).unwrap();
        assert!(a.approx_eq(&b, 1e-12), "{}", coefficient_distance(&a, &b));
    }
}

#[test]
fn modulate_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let f = random_gaussian(&mut rng, 1);
    assert!(f.modulate(&[0.0]).unwrap().approx_eq(&f, 0.0));
    let a = f.modulate(&[0.4]).unwrap().modulate(&[0.9]).unwrap();
    assert!(a.approx_eq(&f.modulate(&[1.3]).unwrap(), 1e-12));
    let m = f.modulate(&[1.0]).unwrap();
    for k in 0..16 {
        let t = -2.0 + 0.25 * k as f64;
        let expect = f.eval(&[t]) * Complex64::from_polar(1.0, 2.0 * PI * t);
        assert!((m.eval(&[t]) - expect).norm() < 1e-12 * expect.norm().max(1e-3));
    }
    // T_x M_ξ = e^{−2πiξ·x} M_ξ T_x
    let (x, xi) = ([0.7, -1.1], [1.3, 0.2]);
    let g = random_gaussian(&mut rng, 2);
    let lhs = g.modulate(&xi).unwrap().translate(&x).unwrap();
    let phase = -2.0 * PI * (xi[0] * x[0] + xi[1] * x[1]);
    let rhs = g
        .translate(&x)
        .unwrap()
        .modulate(&xi)
        .unwrap()
        .scale(Complex64::from_polar(1.0, phase))
        .unwrap();
    assert!(lhs.approx_eq(&rhs, 1e-12));
}

#[test]
fn chirp_examples() {
    let phi = GeneralizedGaussian::standard(1);
    let u = 1.7;
    let n = phi.chirp(&ComplexSymMatrix::scalar(1, c(u, 0.0))).unwrap();
    assert_eq!(n.quad().matrix()[(0, 0)], c(1.0, u));
    assert!(phi
        .chirp(&ComplexSymMatrix::zeros(1))
        .unwrap()
        .approx_eq(&phi, 0.0));
    assert!(matches!(
        phi.chirp(&ComplexSymMatrix::scalar(1, c(0.0, 1.0))),
        Err(Error::NonRealChirp)
    ));
    let cc = cross_chirp(3.0).real_part();
    let sq = &cc * &cc;
    assert!((sq - DMatrix::identity(2, 2) * 2.25).norm() < 1e-15);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let f = random_gaussian(&mut rng, 2);
    let (c1, c2) = (
        random_real_sym(&mut rng, 2, 2.0),
        random_real_sym(&mut rng, 2, 2.0),
    );
    let a = f.chirp(&c1).unwrap().chirp(&c2).unwrap();
    assert!(a.approx_eq(&f.chirp(&c1.add(&c2).unwrap()).unwrap(), 1e-12));
    let t = [0.4, -0.9];
    assert!((a.eval(&t).norm() - f.eval(&t).norm()).abs() < 1e-12);
}

#[test]
fn tensor_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let f = random_gaussian(&mut rng, 1);
    let g = random_gaussian(&mut rng, 2);
    let fg = f.tensor(&g);
    assert!((fg.norm() - f.norm() * g.norm()).abs() < 1e-12 * fg.norm());
    for i in 0..4 {
        for j in 0..4 {
            let (s, t) = (-1.5 + i as f64, -1.0 + 0.7 * j as f64);
            let lhs = fg.eval(&[s, t, 0.3]);
            let rhs = f.eval(&[s]) * g.eval(&[t, 0.3]);
            assert!((lhs - rhs).norm() < 1e-12 * rhs.norm().max(1e-6));
        }
    }
}

#[test]
fn affine_pullback_and_phase_match_pointwise() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let f = random_gaussian(&mut rng, 2);
    let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, -0.3, 1.2]);
    let v = [0.4, -0.6];
    let p = f.affine_pullback(&m, &v).unwrap();
    let h = DMatrix::from_row_slice(2, 2, &[0.3, -0.2, -0.2, 1.1]);
    let w = [0.5, -0.25];
    let q = f.mul_quadratic_phase(&h, &w, 0.125).unwrap();
    for &t in &[[0.0, 0.0], [0.3, -0.7], [-1.1, 0.4]] {
        let mt = [
            m[(0, 0)] * t[0] + m[(0, 1)] * t[1] + v[0],
            m[(1, 0)] * t[0] + m[(1, 1)] * t[1] + v[1],
        ];
        assert!((p.eval(&t) - f.eval(&mt)).norm() < 1e-12 * f.eval(&mt).norm().max(1e-6));
        let cycles = 0.5
            * (h[(0, 0)] * t[0] * t[0] + 2.0 * h[(0, 1)] * t[0] * t[1] + h[(1, 1)] * t[1] * t[1])
            + w[0] * t[0]
            + w[1] * t[1]
            + 0.125;
        let expect = f.eval(&t) * Complex64::from_polar(1.0, 2.0 * PI * cycles);
        assert!((q.eval(&t) - expect).norm() < 1e-12 * expect.norm().max(1e-6));
    }
}

#[test]
fn stft_examples() {
    let phi = GeneralizedGaussian::standard(1);
    let v = stft_closed(&phi, &phi, &PhaseSpacePoint::origin(1)).unwrap();
    assert!((v - c(2f64.powf(-0.5), 0.0)).norm() < 1e-15);
    let u = 3.0;
    let nu = phi.chirp(&ComplexSymMatrix::scalar(1, c(u, 0.0))).unwrap();
    let (x, xi) = (1.0, -1.0);
    let z = PhaseSpacePoint::new(vec![x], vec![xi]).unwrap();
    let got = stft_closed(&nu, &phi, &z).unwrap().norm();
    let expect = (4.0 + u * u).powf(-0.25)
        * (-PI * x * x / 2.0).exp()
        * (-2.0 * PI * (xi + u * x / 2.0).powi(2) / (4.0 + u * u)).exp();
    assert!((got - expect).abs() < 1e-14, "{got} vs {expect}");
}

#[test]
fn stft_factorizes_over_tensors() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..20 {
        let (f1, f2, g1, g2) = (
            random_gaussian(&mut rng, 1),
            random_gaussian(&mut rng, 1),
            random_gaussian(&mut rng, 1),
            random_gaussian(&mut rng, 1),
        );
        let x: Vec<f64> = (0..2).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let xi: Vec<f64> = (0..2).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let lhs = stft_closed(
            &f1.tensor(&f2),
            &g1.tensor(&g2),
            &PhaseSpacePoint::new(x.clone(), xi.clone()).unwrap(),
        )
        .unwrap();
        let a = stft_closed(
            &f1,
            &g1,
            &PhaseSpacePoint::new(vec![x[0]], vec![xi[0]]).unwrap(),
        )
        .unwrap();
        let b = stft_closed(
            &f2,
            &g2,
            &PhaseSpacePoint::new(vec![x[1]], vec![xi[1]]).unwrap(),
        )
        .unwrap();
        assert!((lhs - a * b).norm() < 1e-10 * lhs.norm().max(1e-12));
    }
}

#[test]
fn delta_examples() {
    let d0 = delta_matrix(&ComplexSymMatrix::zeros(1))
        .unwrap()
        .real_part();
    assert!((d0 - DMatrix::identity(2, 2) * 0.5).norm() < 1e-15);
    let cm = ComplexSymMatrix::real_from_rows(2, &[1.0, 0.0, 0.0, 3.0]).unwrap();
    let det = delta_matrix(&cm).unwrap().real_part().determinant();
    assert!((det - 1.0 / 65.0).abs() < 1e-15);
    let u = 2.0;
    let delta = delta_matrix(&ComplexSymMatrix::scalar(1, c(u, 0.0)))
        .unwrap()
        .real_part();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..10 {
        let (xi, x): (f64, f64) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let q = delta[(0, 0)] * xi * xi + 2.0 * delta[(0, 1)] * xi * x + delta[(1, 1)] * x * x;
        let expect = x * x / 2.0 + 2.0 * (xi + u * x / 2.0).powi(2) / (4.0 + u * u);
        assert!((q - expect).abs() < 1e-12);
    }
}

#[test]
fn delta_determinant_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for k in 0..100 {
        let d = 1 + k % 3;
        let cm = random_real_sym(&mut rng, d, 5.0);
        let delta = delta_matrix(&cm).unwrap().real_part();
        let cr = cm.real_part();
        let shifted = DMatrix::identity(d, d) * 4.0 + &cr * &cr;
        assert!((delta.determinant() * shifted.determinant() - 1.0).abs() < 1e-10);
        assert!(linalg::min_eigenvalue(&delta) > 0.0);
    }
}

#[test]
fn chirp_modulus_examples_and_agreement() {
    let z0 = [0.0, 0.0];
    assert!(
        (chirp_stft_modulus(&ComplexSymMatrix::zeros(1), &z0).unwrap() - 2f64.powf(-0.5)).abs()
            < 1e-15
    );
    let c2 = ComplexSymMatrix::scalar(1, c(2.0, 0.0));
    assert!((chirp_stft_modulus(&c2, &z0).unwrap() - 8f64.powf(-0.25)).abs() < 1e-15);
    let v = chirp_stft_modulus(&cross_chirp(4.0), &[0.0; 4]).unwrap();
    assert!((v - 8f64.powf(-0.5)).abs() < 1e-15);

    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for k in 0..200 {
        let d = 1 + k % 2;
        let cm = random_real_sym(&mut rng, d, 5.0);
        let z: Vec<f64> = (0..2 * d).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let phi = GeneralizedGaussian::standard(d);
        let p = PhaseSpacePoint::new(z[d..].to_vec(), z[..d].to_vec()).unwrap();
        let exact = stft_closed(&phi.chirp(&cm).unwrap(), &phi, &p)
            .unwrap()
            .norm();
        let closed = chirp_stft_modulus(&cm, &z).unwrap();
        assert!((exact - closed).abs() < 1e-10, "{exact} vs {closed}");
    }
}

#[test]
fn chirp_mp_norm_examples() {
    assert!(
        (chirp_mp_norm(&ComplexSymMatrix::zeros(1), 2.0).unwrap() - 2f64.powf(-0.5)).abs() < 1e-15
    );
    let c3 = ComplexSymMatrix::scalar(1, c(3.0, 0.0));
    assert!((chirp_mp_norm(&c3, 1.0).unwrap() - 13f64.powf(0.25)).abs() < 1e-14);
    assert!(chirp_mp_norm(&c3, 0.5).is_err());
    // L^1 quadrature of the closed-form modulus. The mass drifts along
    // ξ = −ux/2, so the box must be wider than the Gaussian envelope in x.
    let delta = delta_matrix(&c3).unwrap().real_part();
    let pref = chirp_stft_modulus(&c3, &[0.0, 0.0]).unwrap();
    let h = 0.02;
    let n = (20.0 / h) as i64;
    let mut acc = 0.0;
    for i in 0..=n {
        for j in 0..=n {
            let (xi, x) = (-10.0 + i as f64 * h, -10.0 + j as f64 * h);
            let q = delta[(0, 0)] * xi * xi + 2.0 * delta[(0, 1)] * xi * x + delta[(1, 1)] * x * x;
            acc += pref * (-PI * q).exp();
        }
    }
    assert!(
        (acc * h * h - 13f64.powf(0.25)).abs() < 1e-6,
        "{}",
        acc * h * h
    );
}

#[test]
fn gaussian_sum_linear() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let f = random_gaussian(&mut rng, 1);
    let g = random_gaussian(&mut rng, 1);
    let s = GaussianSum::from(f.clone())
        .add(&GaussianSum::from(g.clone()))
        .unwrap();
    assert!((s.eval(&[0.3]) - f.eval(&[0.3]) - g.eval(&[0.3])).norm() < 1e-14);
    let n2 = s.norm().unwrap().powi(2);
    let expect = f.norm_sq() + g.norm_sq() + 2.0 * inner_product(&f, &g).unwrap().re;
    assert!((n2 - expect).abs() < 1e-12);
    assert!(GaussianSum::zero().is_zero());
    let moved = s.map(|t| t.translate(&[1.0])).unwrap();
    assert!((moved.eval(&[1.3]) - s.eval(&[0.3])).norm() < 1e-12);
}
