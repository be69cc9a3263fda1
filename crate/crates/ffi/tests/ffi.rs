use std::ffi::{CStr, CString};
use std::ptr;

use coorbit_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(coorbit_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn standard(d: usize) -> *mut CoorbitGaussian {
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { coorbit_gaussian_standard(d, &mut g) },
        CoorbitStatus::Ok
    );
    g
}

#[test]
fn gaussian_handles() {
    unsafe {
        let g = standard(2);
        let mut d = 0;
        assert_eq!(coorbit_gaussian_dim(g, &mut d), CoorbitStatus::Ok);
        assert_eq!(d, 2);
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(
            coorbit_gaussian_eval(g, [0.0, 0.0].as_ptr(), &mut re, &mut im),
            CoorbitStatus::Ok
        );
        assert!((re - 1.0).abs() < 1e-14 && im == 0.0);
        let mut n = 0.0;
        assert_eq!(coorbit_gaussian_norm(g, &mut n), CoorbitStatus::Ok);
        assert!((n - 0.5f64.sqrt()).abs() < 1e-14);
        coorbit_gaussian_free(g);
        coorbit_gaussian_free(ptr::null_mut());
    }
}

#[test]
fn custom_gaussian_and_validation() {
    unsafe {
        let a_re = [1.0, 0.2, 0.2, 2.0];
        let a_im = [0.5, 0.0, 0.0, -0.5];
        let b = [0.0, 0.0];
        let mut g = ptr::null_mut();
        assert_eq!(
            coorbit_gaussian_new(
                2,
                1.0,
                0.0,
                a_re.as_ptr(),
                a_im.as_ptr(),
                b.as_ptr(),
                b.as_ptr(),
                &mut g
            ),
            CoorbitStatus::Ok
        );
        coorbit_gaussian_free(g);
        let bad = [-1.0, 0.0, 0.0, 1.0];
        let s = coorbit_gaussian_new(
            2,
            1.0,
            0.0,
            bad.as_ptr(),
            a_im.as_ptr(),
            b.as_ptr(),
            b.as_ptr(),
            &mut g,
        );
        assert_eq!(s, CoorbitStatus::NotPositiveDefinite);
        assert!(
            last_error().contains("positive definite"),
            "{}",
            last_error()
        );
        let s = coorbit_gaussian_new(
            2,
            1.0,
            0.0,
            ptr::null(),
            a_im.as_ptr(),
            b.as_ptr(),
            b.as_ptr(),
            &mut g,
        );
        assert_eq!(s, CoorbitStatus::NullPointer);
        assert!(last_error().contains("a_re"));
        assert_eq!(
            coorbit_gaussian_standard(0, &mut g),
            CoorbitStatus::InvalidArgument
        );
    }
}

#[test]
fn chirp_stft_and_norms() {
    unsafe {
        let phi = standard(1);
        let mut f = ptr::null_mut();
        assert_eq!(
            coorbit_gaussian_chirp(phi, [3.0].as_ptr(), &mut f),
            CoorbitStatus::Ok
        );
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(
            coorbit_stft(f, phi, [0.0].as_ptr(), [0.0].as_ptr(), &mut re, &mut im),
            CoorbitStatus::Ok
        );
        // |V_φ(N_Cφ)(0)| = (4 + C²)^{-1/4}
        assert!(((re * re + im * im).sqrt() - 13f64.powf(-0.25)).abs() < 1e-12);
        let (mut numeric, mut exact) = (0.0, 0.0);
        assert_eq!(
            coorbit_modulation_norm(f, phi, 1.0, &mut numeric),
            CoorbitStatus::Ok
        );
        assert_eq!(
            coorbit_chirp_mp_norm(1, [3.0].as_ptr(), 1.0, &mut exact),
            CoorbitStatus::Ok
        );
        assert!((numeric / exact - 1.0).abs() < 1e-8, "{numeric} vs {exact}");
        assert_eq!(
            coorbit_chirp_mp_norm(1, [3.0].as_ptr(), 0.5, &mut exact),
            CoorbitStatus::InvalidArgument
        );
        let two = standard(2);
        assert_eq!(
            coorbit_stft(two, phi, [0.0].as_ptr(), [0.0].as_ptr(), &mut re, &mut im),
            CoorbitStatus::DimensionMismatch
        );
        coorbit_gaussian_free(f);
        coorbit_gaussian_free(phi);
        coorbit_gaussian_free(two);
    }
}

#[test]
fn representations() {
    unsafe {
        let name = CString::new("g5_3").unwrap();
        let mut rep = ptr::null_mut();
        assert_eq!(
            coorbit_rep_new(name.as_ptr(), 2.0, 0.0, &mut rep),
            CoorbitStatus::Ok
        );
        let (mut d, mut n, mut fd) = (0, 0, 0.0);
        assert_eq!(coorbit_rep_realization_dim(rep, &mut d), CoorbitStatus::Ok);
        assert_eq!(coorbit_rep_group_dim(rep, &mut n), CoorbitStatus::Ok);
        assert_eq!(
            coorbit_rep_formal_dimension(rep, &mut fd),
            CoorbitStatus::Ok
        );
        assert_eq!((d, n, fd), (2, 5, 4.0));
        let phi = standard(2);
        let mut moved = ptr::null_mut();
        let a = [0.3, -0.2, 0.5, 1.0, 0.1];
        assert_eq!(
            coorbit_rep_apply(rep, a.as_ptr(), 5, phi, &mut moved),
            CoorbitStatus::Ok
        );
        let mut norm = 0.0;
        assert_eq!(coorbit_gaussian_norm(moved, &mut norm), CoorbitStatus::Ok);
        assert!((norm - 0.5f64.sqrt()).abs() < 1e-12);
        let (mut c1, mut c2) = (0.0, 0.0);
        assert_eq!(coorbit_norm(rep, phi, phi, 2.0, &mut c1), CoorbitStatus::Ok);
        assert_eq!(
            coorbit_norm(rep, moved, phi, 2.0, &mut c2),
            CoorbitStatus::Ok
        );
        // ‖f‖‖g‖ / √d_π with ‖φ‖² = 1/2 and d_π = 4
        assert!(
            (c1 - 0.25).abs() < 1e-4 && (c2 - 0.25).abs() < 1e-4,
            "{c1} {c2}"
        );
        assert_eq!(
            coorbit_rep_apply(rep, a.as_ptr(), 4, phi, &mut moved),
            CoorbitStatus::DimensionMismatch
        );
        let bad = CString::new("g7_1").unwrap();
        assert_eq!(
            coorbit_rep_new(bad.as_ptr(), 1.0, 0.0, &mut rep),
            CoorbitStatus::InvalidArgument
        );
        assert!(last_error().contains("g7_1"));
        let g619 = CString::new("g6_19").unwrap();
        assert_eq!(
            coorbit_rep_new(g619.as_ptr(), 1.0, 0.0, &mut rep),
            CoorbitStatus::InvalidArgument
        );
        coorbit_gaussian_free(moved);
        coorbit_gaussian_free(phi);
    }
}

#[test]
fn experiments_through_the_c_abi() {
    let dir = tempfile::tempdir().unwrap();
    let out = CString::new(dir.path().to_str().unwrap()).unwrap();
    let ok = CString::new("[experiment]\nkind = orbit-scan\n[scan]\nfamily = chirp\npoints = 3\n")
        .unwrap();
    assert_eq!(
        unsafe { coorbit_run_experiment(ok.as_ptr(), out.as_ptr()) },
        CoorbitStatus::Ok
    );
    assert!(dir.path().join("orbit-scan.csv").exists());
    assert!(dir.path().join("orbit-scan.json").exists());
    let strict = CString::new(
        "[experiment]\nkind = orbit-scan\n[scan]\nfamily = chirp\npoints = 3\ntolerance = 1e-12\n",
    )
    .unwrap();
    assert_eq!(
        unsafe { coorbit_run_experiment(strict.as_ptr(), out.as_ptr()) },
        CoorbitStatus::ToleranceViolated
    );
    let bad = CString::new("[experiment]\nkind = orbit-scan\n[norm]\np = 0.5\n").unwrap();
    assert_eq!(
        unsafe { coorbit_run_experiment(bad.as_ptr(), out.as_ptr()) },
        CoorbitStatus::ConfigError
    );
    assert!(
        last_error().starts_with("line 4, key `norm.p`"),
        "{}",
        last_error()
    );
    assert_eq!(
        unsafe { coorbit_run_experiment(ptr::null(), out.as_ptr()) },
        CoorbitStatus::NullPointer
    );
}

#[test]
fn errors_are_per_thread() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(
            coorbit_gaussian_standard(0, &mut g),
            CoorbitStatus::InvalidArgument
        );
    }
    let other = std::thread::spawn(last_error).join().unwrap();
    assert_eq!(other, "");
    assert!(!last_error().is_empty());
}

#[test]
fn header_declares_every_export() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/coorbit.h")).unwrap();
    for name in [
        "coorbit_last_error",
        "coorbit_version",
        "coorbit_gaussian_standard",
        "coorbit_gaussian_new",
        "coorbit_gaussian_chirp",
        "coorbit_gaussian_free",
        "coorbit_gaussian_eval",
        "coorbit_stft",
        "coorbit_chirp_mp_norm",
        "coorbit_modulation_norm",
        "coorbit_rep_new",
        "coorbit_rep_free",
        "coorbit_rep_apply",
        "coorbit_norm",
        "coorbit_run_experiment",
        "typedef struct CoorbitGaussian CoorbitGaussian",
        "COORBIT_STATUS_TOLERANCE_VIOLATED = 10",
    ] {
        assert!(header.contains(name), "{name}");
    }
    let v = unsafe { CStr::from_ptr(coorbit_version()) }
        .to_str()
        .unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
