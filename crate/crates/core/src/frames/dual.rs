//! Canonical dual window `S^{-1}g` on a Heisenberg lattice by conjugate gradients.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{frame_bounds_estimate, FrameBounds, FrameSystem};
use crate::error::{check_dim, Error, Result};
use crate::gaussian::GeneralizedGaussian;
use crate::groups::Group;
use crate::numerics::{sample, GridSpec, SampledFunction};
use crate::representations::apply_rep;

#[derive(Debug, Clone, PartialEq)]
pub struct DualWindow {
    pub gamma: SampledFunction,
    pub iterations: usize,
    pub cg_residual: f64,
    /// `‖f − Σ⟨f, π(γ)g̃⟩π(γ)g‖₂ / ‖f‖₂` per test function.
    pub reconstruction_residuals: Vec<f64>,
    /// `‖g̃ − cg‖₂ / ‖g̃‖₂` with the best scalar `c`.
    pub snug_ratio: f64,
    pub bounds: FrameBounds,
}

/// Below this `A/B` the system is treated as not a frame.
pub const FRAME_RATIO_FLOOR: f64 = 0.01;

/// `e^{−2πiλyt} v(t − x)` on the grid, zero where the shift leaves it.
fn shift_modulate(
    v: &[Complex64],
    grid: &GridSpec,
    lambda: f64,
    x: f64,
    y: f64,
) -> Result<Vec<Complex64>> {
    let h = grid.spacing();
    let s = x / h;
    if (s - s.round()).abs() > 1e-9 {
        return Err(Error::InvalidParameter {
            name: "grid",
            reason: format!("lattice step {x} is not a multiple of the grid step {h}"),
        });
    }
    let s = s.round() as i64;
    let n = v.len() as i64;
    Ok((0..n)
        .map(|i| {
            let j = i - s;
            if j < 0 || j >= n {
                return Complex64::new(0.0, 0.0);
            }
            let t = grid.node_1d(i as usize);
            Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * lambda * y * t) * v[j as usize]
        })
        .collect())
}

fn conjugate_gradient(
    apply: impl Fn(&DVector<Complex64>) -> DVector<Complex64>,
    b: &DVector<Complex64>,
    max_iter: usize,
    tol: f64,
) -> Result<(DVector<Complex64>, usize, f64)> {
    let bn = b.norm();
    let mut x = DVector::zeros(b.len());
    let mut r = b.clone();
    let mut p = r.clone();
    let mut rr = r.norm_squared();
    for it in 1..=max_iter {
        let ap = apply(&p);
        let pap = p.dotc(&ap).re;
        if !(pap > 0.0) {
            return Err(Error::CgDiverged {
                iterations: it,
                residual: rr.sqrt() / bn,
            });
        }
        let alpha = rr / pap;
        x.axpy(Complex64::new(alpha, 0.0), &p, Complex64::new(1.0, 0.0));
        r.axpy(Complex64::new(-alpha, 0.0), &ap, Complex64::new(1.0, 0.0));
        let rr_new = r.norm_squared();
        if rr_new.sqrt() <= tol * bn {
            return Ok((x, it, rr_new.sqrt() / bn));
        }
        p = &r + &p * Complex64::new(rr_new / rr, 0.0);
        rr = rr_new;
    }
    Err(Error::CgDiverged {
        iterations: max_iter,
        residual: rr.sqrt() / bn,
    })
}

/// Solves `S g̃ = g` for the truncated frame operator of an `ℍ_1` system and
/// reports reconstruction residuals for `tests`.
pub fn dual_window_estimate(
    system: &FrameSystem,
    grid: &GridSpec,
    tests: &[GeneralizedGaussian],
    max_iter: usize,
    tol: f64,
) -> Result<DualWindow> {
    if system.rep.group() != Group::Heisenberg(1) {
        return Err(Error::UnsupportedGroup(
            "dual windows are computed on heisenberg(1) lattices",
        ));
    }
    check_dim(1, grid.dim())?;
    let bounds = frame_bounds_estimate(system, grid)?;
    if bounds.ratio() < FRAME_RATIO_FLOOR {
        return Err(Error::NotAFrame {
            ratio: bounds.ratio(),
        });
    }
    let lambda = system.rep.lambda();
    let points = system.lattice.points()?;
    let n = grid.len();
    let h = grid.spacing();
    let cols: Vec<Vec<Complex64>> = points
        .iter()
        .map(|(_, q)| {
            Ok(
                sample(&apply_rep(&system.rep, &q.section(), &system.window)?, grid)?
                    .values()
                    .to_vec(),
            )
        })
        .collect::<Result<_>>()?;
    let phi = DMatrix::from_fn(n, cols.len(), |i, j| cols[j][i]);
    let phi_adj = phi.adjoint();
    let frame_op = |v: &DVector<Complex64>| &phi * (&phi_adj * v) * Complex64::new(h, 0.0);

    let g = sample(&system.window, grid)?;
    let b = DVector::from_column_slice(g.values());
    let (x, iterations, cg_residual) = conjugate_gradient(frame_op, &b, max_iter, tol)?;
    let gamma = SampledFunction::new(*grid, x.as_slice().to_vec())?;

    let duals: Vec<Vec<Complex64>> = points
        .iter()
        .map(|(_, q)| shift_modulate(gamma.values(), grid, lambda, q.coords()[0], q.coords()[1]))
        .collect::<Result<_>>()?;
    let mut reconstruction_residuals = Vec::with_capacity(tests.len());
    for f in tests {
        let fs = sample(f, grid)?;
        let mut rec = DVector::<Complex64>::zeros(n);
        for (j, d) in duals.iter().enumerate() {
            let c: Complex64 = fs
                .values()
                .iter()
                .zip(d)
                .map(|(a, b)| a * b.conj())
                .sum::<Complex64>()
                * h;
            rec.axpy(c, &phi.column(j), Complex64::new(1.0, 0.0));
        }
        let err: f64 = fs
            .values()
            .iter()
            .zip(rec.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let norm: f64 = fs.values().iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        reconstruction_residuals.push(err / norm);
    }

    let c = gamma.inner_product(&g)? / g.inner_product(&g)?;
    let diff: f64 = gamma
        .values()
        .iter()
        .zip(g.values())
        .map(|(a, b)| (a - c * b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let snug_ratio = diff / (gamma.l2_norm() / h.sqrt());
    Ok(DualWindow {
        gamma,
        iterations,
        cg_residual,
        reconstruction_residuals,
        snug_ratio,
        bounds,
    })
}
