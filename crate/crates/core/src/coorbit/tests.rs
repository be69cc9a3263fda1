use super::*;
use crate::gaussian::{chirp_mp_norm, random_gaussian, stft_closed, ComplexSymMatrix};
use crate::groups::{GroupElement, ALL_GROUPS};
use crate::representations::apply_rep;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn phi(d: usize) -> GeneralizedGaussian {
    GeneralizedGaussian::standard(d)
}

fn chirped(d: usize, c: f64) -> GeneralizedGaussian {
    phi(d)
        .chirp(&ComplexSymMatrix::scalar(d, Complex64::new(c, 0.0)))
        .unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn moyal_value_for_standard_gaussian() {
    let rep = RepSpec::new(Group::Heisenberg(1), 1.0, 0.0).unwrap();
    let spec = NormSpec::new(2.0).unwrap();
    let c = coorbit_norm(&rep, &phi(1), &phi(1), &spec).unwrap();
    // ∫|S_φφ|² = ‖φ‖₂⁴ = 1/2
    assert!((c.value * c.value - 0.5).abs() < 1e-5, "{}", c.value);
    let m = modulation_norm(&phi(1), &phi(1), &spec).unwrap();
    assert!((m.value * m.value - 0.5).abs() < 1e-5, "{}", m.value);
    assert!(m.numeric_coords.is_empty());
}

#[test]
fn full_grid_agrees_with_hybrid() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for group in [Group::Heisenberg(1), Group::G53] {
        let rep = RepSpec::new(group, 1.3, 0.7).unwrap();
        let d = rep.realization_dim();
        let f = random_gaussian(&mut rng, d);
        let g = random_gaussian(&mut rng, d);
        let box_ = QuadBox::symmetric(group.quotient_dim(), 6.0, 0.25).unwrap();
        let spec = NormSpec::new(1.0).unwrap().with_box(box_);
        let h = coorbit_norm(&rep, &f, &g, &spec).unwrap();
        let full = coorbit_norm(&rep, &f, &g, &spec.clone().with_method(Method::FullGrid)).unwrap();
        assert!(
            rel(h.value, full.value) < 1e-6,
            "{group}: {} vs {}",
            h.value,
            full.value
        );
        assert_eq!(full.analytic_coords.len(), 0);
    }
}

#[test]
fn chirp_modulation_norm_matches_closed_form() {
    for p in [1.0, 1.5, 4.0] {
        for u in [2.0, 4.0, 8.0] {
            let spec = NormSpec::new(p).unwrap();
            let v = modulation_norm(&chirped(1, u), &phi(1), &spec)
                .unwrap()
                .value;
            let c = ComplexSymMatrix::scalar(1, Complex64::new(u, 0.0));
            let exact = chirp_mp_norm(&c, p).unwrap();
            assert!(rel(v, exact) < 1e-4, "p={p} u={u}: {v} vs {exact}");
        }
    }
}

#[test]
fn chirp_norm_by_full_grid() {
    let u = 2.0;
    let spec = NormSpec::new(1.0)
        .unwrap()
        .with_method(Method::FullGrid)
        .with_box(QuadBox::symmetric(2, 10.0, 0.0625).unwrap());
    let v = modulation_norm(&chirped(1, u), &phi(1), &spec).unwrap();
    let exact = chirp_mp_norm(&ComplexSymMatrix::scalar(1, Complex64::new(u, 0.0)), 1.0).unwrap();
    assert!(rel(v.value, exact) < 1e-6, "{} vs {exact}", v.value);
    assert!(!v.tail_warning);
}

#[test]
fn tensor_multiplicativity() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let f1 = random_gaussian(&mut rng, 1);
    let f2 = random_gaussian(&mut rng, 1);
    let spec = NormSpec::new(1.0).unwrap();
    let a = modulation_norm(&f1, &phi(1), &spec).unwrap().value;
    let b = modulation_norm(&f2, &phi(1), &spec).unwrap().value;
    let ab = modulation_norm(&f1.tensor(&f2), &phi(2), &spec)
        .unwrap()
        .value;
    assert!(rel(ab, a * b) < 1e-10);
}

#[test]
fn mixed_norm_closed_form() {
    let (p, q) = (1.0, 3.0);
    let spec = NormSpec::mixed(p, q).unwrap();
    let v = modulation_norm(&phi(1), &phi(1), &spec).unwrap();
    let exact = 2f64.powf(-0.5) * (2.0 / p).powf(1.0 / (2.0 * p)) * (2.0 / q).powf(1.0 / (2.0 * q));
    assert!(rel(v.value, exact) < 1e-8, "{} vs {exact}", v.value);
    assert_eq!(v.numeric_coords, vec![1]);
    let same = modulation_norm(&phi(1), &phi(1), &NormSpec::mixed(2.0, 2.0).unwrap()).unwrap();
    assert!((same.value * same.value - 0.5).abs() < 1e-8);
}

#[test]
fn p_two_collapse_all_groups() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for group in ALL_GROUPS {
        let rep = RepSpec::new(group, 1.4, 0.6).unwrap();
        let d = rep.realization_dim();
        let f = random_gaussian(&mut rng, d);
        let g = random_gaussian(&mut rng, d);
        let v = coorbit_norm(&rep, &f, &g, &NormSpec::new(2.0).unwrap())
            .unwrap()
            .value;
        let exact = f.norm() * g.norm() / rep.formal_dimension_exact().sqrt();
        assert!(rel(v, exact) < 1e-3, "{group}: {v} vs {exact}");
    }
}

#[test]
fn isometry_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for group in ALL_GROUPS {
        let rep = RepSpec::new(group, 1.0, 1.0).unwrap();
        let d = rep.realization_dim();
        let f = random_gaussian(&mut rng, d);
        let g = phi(d);
        let spec = NormSpec::new(1.0).unwrap();
        let base = coorbit_norm(&rep, &f, &g, &spec).unwrap().value;
        for _ in 0..3 {
            let a = GroupElement::new(
                group,
                (0..group.total_dim())
                    .map(|_| rng.gen_range(-1.5..1.5))
                    .collect(),
            )
            .unwrap();
            let moved = coorbit_norm(&rep, &apply_rep(&rep, &a, &f).unwrap(), &g, &spec)
                .unwrap()
                .value;
            assert!(rel(moved, base) < 0.01, "{group}: {moved} vs {base}");
        }
    }
}

#[test]
fn heisenberg_reduces_to_modulation() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for d in [1, 2] {
        let group = Group::heisenberg(d).unwrap();
        let f = random_gaussian(&mut rng, d);
        let g = random_gaussian(&mut rng, d);
        for lambda in [1.0, 2.0, -2.0] {
            let rep = RepSpec::new(group, lambda, 0.0).unwrap();
            for p in [1.0, 3.0] {
                let spec = NormSpec::new(p).unwrap();
                let c = coorbit_norm(&rep, &f, &g, &spec).unwrap().value;
                let m = modulation_norm(&f, &g, &spec).unwrap().value;
                let expect = (lambda.abs().powi(-(d as i32)) * m.powf(p)).powf(1.0 / p);
                assert!(
                    rel(c, expect) < 1e-9,
                    "d={d} λ={lambda} p={p}: {c} vs {expect}"
                );
            }
        }
    }
}

#[test]
fn g616_reduction_with_weight() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let f = random_gaussian(&mut rng, 2);
    let g = phi(2);
    for (lambda, mu) in [(1.0, 0.0), (2.0, 1.0)] {
        let rep = RepSpec::new(Group::G616, lambda, mu).unwrap();
        for p in [1.0, 2.0] {
            for m in [
                WeightSpec::unit(),
                WeightSpec::on_coords(1.0, vec![0, 1]).unwrap(),
            ] {
                let pulled = weight_pullback_g616(&m, lambda, mu).unwrap();
                // the weight has a kink, so the step sets the agreement
                let spec = NormSpec::new(p)
                    .unwrap()
                    .with_box(QuadBox::symmetric(4, 6.0, 0.0625).unwrap());
                let c = coorbit_norm(&rep, &f, &g, &spec.clone().with_weight(m.clone())).unwrap();
                let s = modulation_norm(&f, &g, &spec.clone().with_weight(pulled)).unwrap();
                let expect = lambda.powf(-2.0 / p) * s.value;
                assert!(
                    rel(c.value, expect) < 1e-4,
                    "λ={lambda} μ={mu} p={p} s={}: {} vs {expect}",
                    m.exponent(),
                    c.value
                );
            }
        }
    }
}

#[test]
fn g53_tensor_formula() {
    // norm^p = ∫ ‖N_{x4} f2‖_{M^p}^p |S_φ f1(x3, x4)|^p dx3 dx4 for g = φ⊗φ
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let f1 = random_gaussian(&mut rng, 1);
    let f2 = phi(1);
    let p = 1.0;
    let rep = RepSpec::new(Group::G53, 1.0, 0.0).unwrap();
    let lhs = coorbit_norm(&rep, &f1.tensor(&f2), &phi(2), &NormSpec::new(p).unwrap())
        .unwrap()
        .value;
    let b = QuadBox::symmetric(2, 8.0, 0.0625).unwrap();
    let mut sum = 0.0;
    for (x3, w3) in b.axis_nodes(0) {
        for (x4, w4) in b.axis_nodes(1) {
            let c = ComplexSymMatrix::scalar(1, Complex64::new(x4, 0.0));
            let n = modulation_norm(&f2.chirp(&c).unwrap(), &phi(1), &NormSpec::new(p).unwrap())
                .unwrap()
                .value;
            let s = stft_closed(
                &f1,
                &phi(1),
                &crate::gaussian::PhaseSpacePoint::new(vec![x3], vec![x4]).unwrap(),
            )
            .unwrap();
            sum += w3 * w4 * n.powf(p) * s.norm().powf(p);
        }
    }
    let rhs = sum.powf(1.0 / p);
    assert!(rel(lhs, rhs) < 1e-4, "{lhs} vs {rhs}");
}

#[test]
fn weighted_hybrid_matches_full_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    let f = random_gaussian(&mut rng, 1);
    let b = QuadBox::symmetric(2, 7.0, 0.0625).unwrap();
    let spec = NormSpec::new(1.5)
        .unwrap()
        .with_weight(WeightSpec::on_coords(2.0, vec![1]).unwrap())
        .with_box(b);
    let h = modulation_norm(&f, &phi(1), &spec).unwrap();
    assert_eq!(h.numeric_coords, vec![1]);
    let full = modulation_norm(&f, &phi(1), &spec.clone().with_method(Method::FullGrid)).unwrap();
    assert!(
        rel(h.value, full.value) < 1e-6,
        "{} vs {}",
        h.value,
        full.value
    );
}

#[test]
fn formal_dimension_heisenberg() {
    let rep1 = RepSpec::new(Group::Heisenberg(1), 1.0, 0.0).unwrap();
    let fd = formal_dimension(&rep1, &phi(1), None).unwrap();
    assert!((fd.value - 1.0).abs() < 1e-4, "{}", fd.value);
    let rep2 = RepSpec::new(Group::Heisenberg(1), 2.0, 0.0).unwrap();
    assert!((formal_dimension(&rep2, &phi(1), None).unwrap().value - 2.0).abs() < 1e-3);
    let other = formal_dimension(&rep2, &chirped(1, 1.0), None).unwrap();
    assert!((other.value - 2.0).abs() < 1e-3);
    assert!(!other.box_too_small);
}

#[test]
fn formal_dimension_all_groups() {
    for group in ALL_GROUPS {
        let rep = RepSpec::new(group, 1.5, 0.5).unwrap();
        let fd = formal_dimension(&rep, &phi(rep.realization_dim()), None).unwrap();
        assert!(
            rel(fd.value, rep.formal_dimension_exact()) < 1e-6,
            "{group}: {}",
            fd.value
        );
    }
}

#[test]
fn small_box_is_flagged() {
    let rep = RepSpec::new(Group::G53, 1.0, 0.0).unwrap();
    let small = QuadBox::symmetric(4, 0.5, 0.125).unwrap();
    let fd = formal_dimension(&rep, &phi(2), Some(small.clone())).unwrap();
    assert!(fd.box_too_small);
    let r = coorbit_norm(
        &rep,
        &phi(2),
        &phi(2),
        &NormSpec::new(1.0).unwrap().with_box(small),
    )
    .unwrap();
    assert!(r.tail_warning);
}

#[test]
fn invalid_specs_rejected() {
    assert!(NormSpec::new(f64::INFINITY).is_err());
    assert!(NormSpec::new(0.5).is_err());
    assert!(NormSpec::mixed(1.0, 0.9).is_err());
    let rep = RepSpec::new(Group::Heisenberg(1), 1.0, 0.0).unwrap();
    let bad_box = NormSpec::new(1.0)
        .unwrap()
        .with_box(QuadBox::default_for(3));
    assert!(coorbit_norm(&rep, &phi(1), &phi(1), &bad_box).is_err());
    let bad_weight = NormSpec::new(1.0)
        .unwrap()
        .with_weight(WeightSpec::on_coords(1.0, vec![5]).unwrap());
    assert!(coorbit_norm(&rep, &phi(1), &phi(1), &bad_weight).is_err());
    assert!(coorbit_norm(&rep, &phi(2), &phi(1), &NormSpec::new(1.0).unwrap()).is_err());
    assert!(QuadBox::new(vec![1.0], vec![0.0], 0.1).is_err());
    assert!(weight_pullback_g616(&WeightSpec::unit(), 0.0, 1.0).is_err());
}

#[test]
fn moderate_weights() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let h1 = Group::Heisenberg(1);
    assert!(
        moderate_check(&WeightSpec::unit(), h1, 100, 5.0, &mut rng)
            .unwrap()
            .pass
    );
    let r = moderate_check(
        &WeightSpec::polynomial(2.0).unwrap(),
        h1,
        10_000,
        5.0,
        &mut rng,
    )
    .unwrap();
    assert!(r.pass, "{r:?}");
    let r = moderate_check(
        &WeightSpec::polynomial(-1.0).unwrap(),
        h1,
        10_000,
        5.0,
        &mut rng,
    )
    .unwrap();
    assert!(r.pass, "{r:?}");
    let v = WeightSpec::on_coords(0.25, vec![1, 2]).unwrap();
    assert!(
        moderate_check(&v, Group::G53, 2000, 3.0, &mut rng)
            .unwrap()
            .pass
    );
}

#[test]
fn pullback_is_relabeling_for_unit_lambda() {
    let m = WeightSpec::polynomial(1.5).unwrap();
    let pulled = weight_pullback_g616(&m, 1.0, 0.0).unwrap();
    let t = g616_transform(1.0, 0.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut worst: f64 = 0.0;
    let mut band = (f64::INFINITY, 0.0f64);
    let pulled2 = weight_pullback_g616(&m, 2.0, 1.0).unwrap();
    for _ in 0..200 {
        let x: Vec<f64> = (0..4).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let y = &t * nalgebra::DVector::from_vec(x.clone());
        worst = worst.max((pulled.eval(y.as_slice()) - m.eval(&x)).abs());
        let ratio = pulled2.eval(&x) / m.eval(&x);
        band = (band.0.min(ratio), band.1.max(ratio));
    }
    assert!(worst < 1e-12);
    assert!(band.0 > 0.1 && band.1 < 10.0, "{band:?}");
}

fn g53_curve() -> OrbitCurve {
    OrbitCurve::new(RepSpec::new(Group::G53, 1.0, 0.0).unwrap(), 3).unwrap()
}

#[test]
fn g53_orbit_slopes() {
    let u_grid = geometric_grid(10.0, 320.0, 6).unwrap();
    assert_eq!(u_grid.len(), 6);
    assert!((u_grid[1] - 20.0).abs() < 1e-9);
    let f = phi(2);
    let rep = RepSpec::new(Group::G53, 1.0, 0.0).unwrap();
    let g619 = RepSpec::new(Group::G619, 1.0, 1.0).unwrap();
    for p in [1.0, 4.0] {
        let spec = NormSpec::new(p).unwrap();
        let targets = vec![
            ScanTarget {
                tag: "mp".into(),
                space: ScanSpace::Modulation,
                window: phi(2),
                spec: spec.clone(),
                growth: vec![],
            },
            ScanTarget {
                tag: "co53".into(),
                space: ScanSpace::Coorbit(rep),
                window: phi(2),
                spec: spec.clone(),
                growth: vec![(2, 1.0)],
            },
            ScanTarget {
                tag: "co619".into(),
                space: ScanSpace::Coorbit(g619),
                window: phi(2),
                spec: spec.clone(),
                growth: vec![],
            },
        ];
        let scan = orbit_scan(&g53_curve(), &f, &targets, &u_grid).unwrap();
        let mp = scan.fit("mp").unwrap().slope_log_u;
        assert!((mp - (1.0 / p - 0.5)).abs() < 0.02, "p={p}: {mp}");
        let vals = scan.values("co53");
        let (lo, hi) = vals
            .iter()
            .fold((f64::INFINITY, 0.0f64), |a, v| (a.0.min(v.1), a.1.max(v.1)));
        assert!(hi / lo - 1.0 < 0.01, "p={p}: {vals:?}");
        let co619 = scan.fit("co619").unwrap().slope_log_1pu2;
        assert!((co619 - (0.5 / p - 0.25)).abs() < 0.02, "p={p}: {co619}");
        assert!(scan.rows.iter().all(|r| !r.tail_warning), "{:?}", scan.rows);
    }
}

#[test]
fn dynin_folland_orbit_slope() {
    let rep = RepSpec::new(Group::DyninFolland, 1.0, 0.0).unwrap();
    let curve = OrbitCurve::new(rep, 3).unwrap();
    let u_grid = geometric_grid(10.0, 320.0, 6).unwrap();
    for p in [1.0, 2.0, 4.0] {
        let t = ScanTarget {
            tag: "mp".into(),
            space: ScanSpace::Modulation,
            window: phi(3),
            spec: NormSpec::new(p).unwrap(),
            growth: vec![],
        };
        let scan = orbit_scan(&curve, &phi(3), &[t], &u_grid).unwrap();
        let s = scan.fit("mp").unwrap().slope_log_u;
        assert!((s - (2.0 / p - 1.0)).abs() < 0.03, "p={p}: {s}");
    }
}

#[test]
fn slope_fit_uses_top_decade() {
    let pts: Vec<(f64, f64)> = [1.0, 2.0, 10.0, 100.0]
        .iter()
        .map(|&u: &f64| (u, if u < 10.0 { 1.0 } else { u.powf(0.7) }))
        .collect();
    let fit = fit_slope("t", &pts).unwrap();
    assert_eq!(fit.points, 2);
    assert!((fit.slope_log_u - 0.7).abs() < 1e-12);
    assert!(fit_slope("t", &[(1.0, 1.0)]).is_err());
}

#[test]
fn window_equivalence_bands() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let rep = RepSpec::new(Group::Heisenberg(1), 1.0, 0.0).unwrap();
    let suite: Vec<GeneralizedGaussian> = (0..20).map(|_| random_gaussian(&mut rng, 1)).collect();
    let spec = NormSpec::new(1.0).unwrap();
    let same = window_equivalence(&rep, &suite, &phi(1), &phi(1), &spec).unwrap();
    assert!(same.ratios.iter().all(|r| (r - 1.0).abs() < 1e-12));
    let shifted = phi(1).translate(&[0.7]).unwrap();
    let band = window_equivalence(&rep, &suite, &phi(1), &shifted, &spec).unwrap();
    // translating the window is an isometry of the coefficient in L^p
    assert!(
        band.max_ratio < 1.7 && band.min_ratio > 1.0 / 1.7,
        "{band:?}"
    );
    let band = window_equivalence(&rep, &suite, &phi(1), &chirped(1, 1.0), &spec).unwrap();
    assert!(band.min_ratio.is_finite() && band.min_ratio > 0.0 && band.max_ratio.is_finite());
}
