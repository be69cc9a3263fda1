//! Small dense linear-algebra helpers over `nalgebra`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn to_complex(m: &DMatrix<f64>) -> CMat {
    m.map(|x| Complex64::new(x, 0.0))
}

pub fn real_part(m: &CMat) -> DMatrix<f64> {
    m.map(|z| z.re)
}

pub fn imag_part(m: &CMat) -> DMatrix<f64> {
    m.map(|z| z.im)
}

/// Smallest eigenvalue of a real symmetric matrix.
pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return f64::INFINITY;
    }
    m.clone()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

pub fn inverse(m: &CMat) -> Result<CMat> {
    m.clone()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("singular matrix".into()))
}

pub fn inverse_real(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    m.clone()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("singular matrix".into()))
}

/// `log det A` on the branch that is real for real positive definite `A`,
/// for complex symmetric `A` whose real part is positive definite.
///
/// Computed as the sum of principal logarithms of the eigenvalues of `A`,
/// which all lie in the open right half-plane.
pub fn log_det_right_half_plane(a: &CMat) -> Result<Complex64> {
    let n = a.nrows();
    if n == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let small = match n {
        1 => Some(vec![a[(0, 0)]]),
        2 => {
            let m = (a[(0, 0)] + a[(1, 1)]) * 0.5;
            let det = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
            let s = (m * m - det).sqrt();
            Some(vec![m + s, m - s])
        }
        _ => None,
    };
    if let Some(eigs) = small {
        if eigs.iter().all(|l| l.re > 0.0 && l.is_finite()) {
            return Ok(eigs.iter().map(|l| l.ln()).sum());
        }
        return log_det_via_real_part(a);
    }
    if let Some(eigs) = a.eigenvalues() {
        if eigs.iter().all(|l| l.re > 0.0 && l.is_finite()) {
            return Ok(eigs.iter().map(|l| l.ln()).sum());
        }
    }
    log_det_via_real_part(a)
}

/// Same branch as [`log_det_right_half_plane`], through the factorization
/// `A = B^{1/2} (I + i M) B^{1/2}` with `B = Re A` and `M` real symmetric.
pub fn log_det_via_real_part(a: &CMat) -> Result<Complex64> {
    let b = real_part(a);
    let c = imag_part(a);
    let chol = b.clone().cholesky().ok_or(Error::NotPositiveDefinite {
        min_eig: min_eigenvalue(&b),
    })?;
    let l = chol.l();
    let log_det_b: f64 = 2.0 * l.diagonal().iter().map(|x| x.ln()).sum::<f64>();
    let linv = l
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("singular Cholesky factor".into()))?;
    let m = &linv * c * linv.transpose();
    let m = (&m + m.transpose()) * 0.5;
    let tail: Complex64 = m
        .symmetric_eigenvalues()
        .iter()
        .map(|mu| Complex64::new(1.0, *mu).ln())
        .sum();
    Ok(Complex64::new(log_det_b, 0.0) + tail)
}

/// `xᵀ M y` without conjugation.
pub fn bilinear(x: &CVec, m: &CMat, y: &CVec) -> Complex64 {
    x.dot(&(m * y))
}

/// Block-diagonal concatenation.
pub fn block_diag(a: &CMat, b: &CMat) -> CMat {
    let (n, m) = (a.nrows(), b.nrows());
    let mut out = CMat::zeros(n + m, n + m);
    out.view_mut((0, 0), (n, n)).copy_from(a);
    out.view_mut((n, n), (m, m)).copy_from(b);
    out
}

/// Forces exact symmetry by averaging mirrored entries.
pub fn symmetrize(m: &CMat) -> CMat {
    (m + m.transpose()) * Complex64::new(0.5, 0.0)
}

pub fn symmetrize_real(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}
