//! Closed forms for the short-time Fourier transform of chirped Gaussians.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::ComplexSymMatrix;
use crate::error::{Error, Result};
use crate::linalg;

/// The cross chirp `C_u = [[0, u/2], [u/2, 0]]`.
pub fn cross_chirp(u: f64) -> ComplexSymMatrix {
    ComplexSymMatrix::from_real_fn(2, |i, j| if i == j { 0.0 } else { 0.5 * u })
}

fn real_chirp(c: &ComplexSymMatrix) -> Result<DMatrix<f64>> {
    if !c.is_real() {
        return Err(Error::NonRealChirp);
    }
    Ok(c.real_part())
}

/// `4I + C²`.
fn shifted_square(c: &DMatrix<f64>) -> DMatrix<f64> {
    let d = c.nrows();
    DMatrix::identity(d, d) * 4.0 + c * c
}

/// The `2d×2d` real symmetric matrix `Δ` with `|S_φ(N_C φ)(x, ξ)| =
/// det(4I + C²)^{−1/4} exp(−π Δ z·z)` in `z = (ξ, x)` ordering.
///
/// With `D = (4I + C²)^{−1}`: `Δ = [[2D, DC], [DC, I − 2D]]`.
pub fn delta_matrix(c: &ComplexSymMatrix) -> Result<ComplexSymMatrix> {
    let c = real_chirp(c)?;
    let d = c.nrows();
    let dm = linalg::inverse_real(&shifted_square(&c))?;
    let dc = &dm * &c;
    let mut delta = DMatrix::<f64>::zeros(2 * d, 2 * d);
    delta.view_mut((0, 0), (d, d)).copy_from(&(&dm * 2.0));
    delta.view_mut((0, d), (d, d)).copy_from(&dc);
    delta.view_mut((d, 0), (d, d)).copy_from(&dc.transpose());
    delta
        .view_mut((d, d), (d, d))
        .copy_from(&(DMatrix::identity(d, d) - &dm * 2.0));
    ComplexSymMatrix::try_real(&linalg::symmetrize_real(&delta))
}

/// `|S_φ(N_C φ)(z)|` for `z = (ξ, x)`.
pub fn chirp_stft_modulus(c: &ComplexSymMatrix, z: &[f64]) -> Result<f64> {
    let cr = real_chirp(c)?;
    crate::error::check_dim(2 * cr.nrows(), z.len())?;
    let delta = delta_matrix(c)?.real_part();
    let zv = nalgebra::DVector::from_column_slice(z);
    let q = zv.dot(&(&delta * &zv));
    let det = shifted_square(&cr).determinant();
    Ok(det.powf(-0.25) * (-PI * q).exp())
}

/// `‖N_C φ‖_{M^p}` with window `φ`: `p^{−d/p} det(4I + C²)^{1/(2p) − 1/4}`.
pub fn chirp_mp_norm(c: &ComplexSymMatrix, p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidParameter {
            name: "p",
            reason: format!("must be finite and >= 1, got {p}"),
        });
    }
    let cr = real_chirp(c)?;
    let d = cr.nrows() as f64;
    let det = shifted_square(&cr).determinant();
    Ok(p.powf(-d / p) * det.powf(1.0 / (2.0 * p) - 0.25))
}
