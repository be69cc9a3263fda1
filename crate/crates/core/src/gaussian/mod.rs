//! Exact calculus of generalized Gaussians `c·exp(−π A t·t + b·t)` on ℝ^d.
//!
//! Every function the representations act on lives in this class: it is
//! closed under translation, modulation, chirp multiplication, affine changes
//! of variable, tensor products and the Fourier transform. Amplitudes are kept
//! in logarithmic form so that far-shifted Gaussians (amplitude `e^{−π|x|²}`)
//! never underflow before they meet the matching exponential growth in an
//! inner product.

mod chirp;

pub use chirp::{chirp_mp_norm, chirp_stft_modulus, cross_chirp, delta_matrix};

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, bilinear, I};
pub use crate::linalg::{CMat, CVec};

/// Tolerance used when checking that `Re(A)` is positive definite.
pub const PD_TOLERANCE: f64 = 1e-12;

/// Complex symmetric `d×d` matrix. Symmetry is exact by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSymMatrix(CMat);

impl ComplexSymMatrix {
    /// Builds the matrix from `f(i, j)` evaluated on the upper triangle.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMat::zeros(dim, dim);
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Self(m)
    }

    pub fn from_real_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        Self::from_fn(dim, |i, j| Complex64::new(f(i, j), 0.0))
    }

    pub fn try_new(m: CMat) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSymmetric);
        }
        if m != m.transpose() {
            return Err(Error::NotSymmetric);
        }
        Ok(Self(m))
    }

    pub fn try_real(m: &DMatrix<f64>) -> Result<Self> {
        Self::try_new(linalg::to_complex(m))
    }

    /// Real symmetric matrix from row-major entries.
    pub fn real_from_rows(dim: usize, entries: &[f64]) -> Result<Self> {
        check_dim(dim * dim, entries.len())?;
        Self::try_real(&DMatrix::from_row_slice(dim, dim, entries))
    }

    pub(crate) fn symmetrized(m: CMat) -> Self {
        Self(linalg::symmetrize(&m))
    }

    pub fn identity(dim: usize) -> Self {
        Self(CMat::identity(dim, dim))
    }

    pub fn scalar(dim: usize, c: Complex64) -> Self {
        Self(CMat::identity(dim, dim) * c)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(CMat::zeros(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.0
    }

    pub fn is_real(&self) -> bool {
        self.0.iter().all(|z| z.im == 0.0)
    }

    pub fn real_part(&self) -> DMatrix<f64> {
        linalg::real_part(&self.0)
    }

    pub fn imag_part(&self) -> DMatrix<f64> {
        linalg::imag_part(&self.0)
    }

    pub fn block_diag(&self, other: &Self) -> Self {
        Self(linalg::block_diag(&self.0, &other.0))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self(&self.0 + &other.0))
    }
}

/// Phase-space point `(x, ξ)`: position and frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpacePoint {
    pub x: Vec<f64>,
    pub xi: Vec<f64>,
}

impl PhaseSpacePoint {
    pub fn new(x: Vec<f64>, xi: Vec<f64>) -> Result<Self> {
        check_dim(x.len(), xi.len())?;
        Ok(Self { x, xi })
    }

    pub fn origin(dim: usize) -> Self {
        Self {
            x: vec![0.0; dim],
            xi: vec![0.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// The point in `z = (ξ, x)` ordering.
    pub fn z(&self) -> Vec<f64> {
        self.xi.iter().chain(self.x.iter()).copied().collect()
    }
}

/// `t ↦ exp(log_amp − π tᵀ A t + bᵀ t)` with `Re A` positive definite.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedGaussian {
    quad: ComplexSymMatrix,
    lin: CVec,
    log_amp: Complex64,
}

impl GeneralizedGaussian {
    pub fn new(amplitude: Complex64, quad: ComplexSymMatrix, lin: CVec) -> Result<Self> {
        if amplitude == Complex64::new(0.0, 0.0) || !amplitude.is_finite() {
            return Err(Error::InvalidAmplitude);
        }
        Self::from_log_amplitude(amplitude.ln(), quad, lin)
    }

    pub fn from_log_amplitude(
        log_amp: Complex64,
        quad: ComplexSymMatrix,
        lin: CVec,
    ) -> Result<Self> {
        check_dim(quad.dim(), lin.len())?;
        if quad.dim() == 0 {
            return Err(Error::InvalidParameter {
                name: "dim",
                reason: "must be positive".into(),
            });
        }
        let min_eig = linalg::min_eigenvalue(&quad.real_part());
        if !(min_eig > PD_TOLERANCE) {
            return Err(Error::NotPositiveDefinite { min_eig });
        }
        if !log_amp.is_finite() || lin.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidAmplitude);
        }
        Ok(Self { quad, lin, log_amp })
    }

    /// Construction for operations that preserve `Re A ≻ 0` algebraically.
    fn raw(quad: CMat, lin: CVec, log_amp: Complex64) -> Self {
        Self {
            quad: ComplexSymMatrix::symmetrized(quad),
            lin,
            log_amp,
        }
    }

    /// The standard Gaussian `φ(t) = e^{−π t·t}`.
    pub fn standard(dim: usize) -> Self {
        Self::raw(
            CMat::identity(dim, dim),
            CVec::zeros(dim),
            Complex64::new(0.0, 0.0),
        )
    }

    /// `e^{−π a t·t}` for real `a > 0`.
    pub fn isotropic(dim: usize, a: f64) -> Result<Self> {
        Self::from_log_amplitude(
            Complex64::new(0.0, 0.0),
            ComplexSymMatrix::scalar(dim, Complex64::new(a, 0.0)),
            CVec::zeros(dim),
        )
    }

    pub fn dim(&self) -> usize {
        self.lin.len()
    }

    pub fn quad(&self) -> &ComplexSymMatrix {
        &self.quad
    }

    pub fn lin(&self) -> &CVec {
        &self.lin
    }

    pub fn log_amplitude(&self) -> Complex64 {
        self.log_amp
    }

    pub fn amplitude(&self) -> Complex64 {
        self.log_amp.exp()
    }

    pub fn log_eval(&self, t: &[f64]) -> Complex64 {
        let d = self.dim();
        debug_assert_eq!(t.len(), d);
        let a = self.quad.matrix();
        let mut q = Complex64::new(0.0, 0.0);
        let mut l = Complex64::new(0.0, 0.0);
        for i in 0..d {
            l += self.lin[i] * t[i];
            for j in 0..d {
                q += a[(i, j)] * (t[i] * t[j]);
            }
        }
        self.log_amp - q * PI + l
    }

    pub fn eval(&self, t: &[f64]) -> Complex64 {
        self.log_eval(t).exp()
    }

    /// Multiplies by a non-zero complex constant.
    pub fn scale(&self, c: Complex64) -> Result<Self> {
        if c == Complex64::new(0.0, 0.0) || !c.is_finite() {
            return Err(Error::InvalidAmplitude);
        }
        let mut out = self.clone();
        out.log_amp += c.ln();
        Ok(out)
    }

    pub fn conj(&self) -> Self {
        Self {
            quad: ComplexSymMatrix(self.quad.0.map(|z| z.conj())),
            lin: self.lin.map(|z| z.conj()),
            log_amp: self.log_amp.conj(),
        }
    }

    /// Pointwise product `f·g`.
    pub fn product(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self::raw(
            &self.quad.0 + &other.quad.0,
            &self.lin + &other.lin,
            self.log_amp + other.log_amp,
        ))
    }

    /// `T_x f(t) = f(t − x)`.
    pub fn translate(&self, x: &[f64]) -> Result<Self> {
        check_dim(self.dim(), x.len())?;
        let xv = real_vec(x);
        let ax = &self.quad.0 * &xv;
        let log_amp = self.log_amp - bilinear(&xv, &self.quad.0, &xv) * PI - self.lin.dot(&xv);
        Ok(Self::raw(
            self.quad.0.clone(),
            &self.lin + ax * Complex64::new(2.0 * PI, 0.0),
            log_amp,
        ))
    }

    /// `M_ξ f(t) = e^{2πi ξ·t} f(t)`.
    pub fn modulate(&self, xi: &[f64]) -> Result<Self> {
        check_dim(self.dim(), xi.len())?;
        let mut lin = self.lin.clone();
        for (b, &w) in lin.iter_mut().zip(xi) {
            *b += I * (2.0 * PI * w);
        }
        Ok(Self {
            quad: self.quad.clone(),
            lin,
            log_amp: self.log_amp,
        })
    }

    /// `N_C f(t) = e^{−iπ Ct·t} f(t)` for real symmetric `C`.
    pub fn chirp(&self, c: &ComplexSymMatrix) -> Result<Self> {
        check_dim(self.dim(), c.dim())?;
        if !c.is_real() {
            return Err(Error::NonRealChirp);
        }
        Ok(Self {
            quad: ComplexSymMatrix(&self.quad.0 + &c.0 * I),
            lin: self.lin.clone(),
            log_amp: self.log_amp,
        })
    }

    /// Multiplication by `e^{2πi(½ tᵀHt + w·t + c0)}` with real `H`, `w`, `c0`.
    pub fn mul_quadratic_phase(&self, h: &DMatrix<f64>, w: &[f64], c0: f64) -> Result<Self> {
        check_dim(self.dim(), h.nrows())?;
        check_dim(self.dim(), w.len())?;
        // e^{iπ tᵀHt} = e^{−π tᵀ(−iH)t}
        let quad = &self.quad.0 - linalg::to_complex(h) * I;
        let mut lin = self.lin.clone();
        for (b, &wi) in lin.iter_mut().zip(w) {
            *b += I * (2.0 * PI * wi);
        }
        Ok(Self::raw(quad, lin, self.log_amp + I * (2.0 * PI * c0)))
    }

    /// `t ↦ f(M t + v)` for real invertible `M`.
    pub fn affine_pullback(&self, m: &DMatrix<f64>, v: &[f64]) -> Result<Self> {
        check_dim(self.dim(), m.nrows())?;
        check_dim(self.dim(), m.ncols())?;
        check_dim(self.dim(), v.len())?;
        if m.determinant().abs() < 1e-300 {
            return Err(Error::Numerical("affine map not invertible".into()));
        }
        let mc = linalg::to_complex(m);
        let vv = real_vec(v);
        let a = &self.quad.0;
        let quad = mc.transpose() * a * &mc;
        let lin = mc.transpose() * (&self.lin - a * &vv * Complex64::new(2.0 * PI, 0.0));
        let log_amp = self.log_amp - bilinear(&vv, a, &vv) * PI + self.lin.dot(&vv);
        Ok(Self::raw(quad, lin, log_amp))
    }

    /// `f(−t)`.
    pub fn reflect(&self) -> Self {
        Self {
            quad: self.quad.clone(),
            lin: -self.lin.clone(),
            log_amp: self.log_amp,
        }
    }

    /// Tensor product `(f ⊗ g)(s, t) = f(s) g(t)`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut lin = CVec::zeros(self.dim() + other.dim());
        lin.rows_mut(0, self.dim()).copy_from(&self.lin);
        lin.rows_mut(self.dim(), other.dim()).copy_from(&other.lin);
        Self {
            quad: self.quad.block_diag(&other.quad),
            lin,
            log_amp: self.log_amp + other.log_amp,
        }
    }

    /// Fourier transform `f̂(ξ) = ∫ f(t) e^{−2πi ξ·t} dt`, exact within the class.
    pub fn fourier(&self) -> Result<Self> {
        let a = &self.quad.0;
        let ainv = linalg::inverse(a)?;
        let log_det = linalg::log_det_right_half_plane(a)?;
        let ainv_b = &ainv * &self.lin;
        let log_amp = self.log_amp - log_det * 0.5 + self.lin.dot(&ainv_b) / (4.0 * PI);
        Ok(Self::raw(ainv, ainv_b * (-I), log_amp))
    }

    pub fn norm_sq(&self) -> f64 {
        // ⟨f, f⟩ is real and positive; failure is impossible for a valid f.
        log_inner_product(self, self)
            .map(|z| z.re.exp())
            .unwrap_or(f64::NAN)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Coefficient-level comparison. Amplitudes are compared through their
    /// logarithms, imaginary parts modulo `2π`. Tolerances are relative to
    /// the magnitude of each coefficient when it exceeds one.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        coefficient_distance(self, other) <= tol
    }
}

/// Largest scaled coefficient discrepancy between two Gaussians; infinite on
/// dimension mismatch.
pub fn coefficient_distance(f: &GeneralizedGaussian, g: &GeneralizedGaussian) -> f64 {
    if f.dim() != g.dim() {
        return f64::INFINITY;
    }
    let rel = |a: Complex64, b: Complex64| (a - b).norm() / a.norm().max(b.norm()).max(1.0);
    let mut worst: f64 = 0.0;
    for (a, b) in f.quad.0.iter().zip(g.quad.0.iter()) {
        worst = worst.max(rel(*a, *b));
    }
    for (a, b) in f.lin.iter().zip(g.lin.iter()) {
        worst = worst.max(rel(*a, *b));
    }
    let dre = (f.log_amp.re - g.log_amp.re).abs() / f.log_amp.re.abs().max(1.0);
    let dphase = wrap_phase(f.log_amp.im - g.log_amp.im).abs() / f.log_amp.im.abs().max(1.0);
    worst.max(dre).max(dphase)
}

pub(crate) fn wrap_phase(x: f64) -> f64 {
    let two_pi = 2.0 * PI;
    x - two_pi * (x / two_pi).round()
}

fn real_vec(x: &[f64]) -> CVec {
    DVector::from_iterator(x.len(), x.iter().map(|&v| Complex64::new(v, 0.0)))
}

/// Finite linear combination of generalized Gaussians of equal dimension.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GaussianSum {
    terms: Vec<GeneralizedGaussian>,
}

impl GaussianSum {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn from_terms(terms: Vec<GeneralizedGaussian>) -> Result<Self> {
        if let Some(first) = terms.first() {
            for t in &terms {
                check_dim(first.dim(), t.dim())?;
            }
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[GeneralizedGaussian] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.terms.first().map(GeneralizedGaussian::dim)
    }

    pub fn push(&mut self, term: GeneralizedGaussian) -> Result<()> {
        if let Some(d) = self.dim() {
            check_dim(d, term.dim())?;
        }
        self.terms.push(term);
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for t in &other.terms {
            out.push(t.clone())?;
        }
        Ok(out)
    }

    pub fn eval(&self, t: &[f64]) -> Complex64 {
        self.terms.iter().map(|g| g.eval(t)).sum()
    }

    /// Applies an operator of the Gaussian class termwise.
    pub fn map(
        &self,
        op: impl Fn(&GeneralizedGaussian) -> Result<GeneralizedGaussian>,
    ) -> Result<Self> {
        Ok(Self {
            terms: self.terms.iter().map(op).collect::<Result<_>>()?,
        })
    }

    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for f in &self.terms {
            for g in &other.terms {
                acc += inner_product(f, g)?;
            }
        }
        Ok(acc)
    }

    pub fn norm(&self) -> Result<f64> {
        Ok(self.inner_product(self)?.re.max(0.0).sqrt())
    }
}

impl From<GeneralizedGaussian> for GaussianSum {
    fn from(g: GeneralizedGaussian) -> Self {
        Self { terms: vec![g] }
    }
}

/// `log ∫ f(t) dt`, on the branch real for real positive-definite `A`.
pub fn log_gauss_integral(f: &GeneralizedGaussian) -> Result<Complex64> {
    let a = &f.quad.0;
    let log_det = linalg::log_det_right_half_plane(a)?;
    let ainv_b = a
        .clone()
        .lu()
        .solve(&f.lin)
        .ok_or_else(|| Error::Numerical("singular quadratic form".into()))?;
    Ok(f.log_amp - log_det * 0.5 + f.lin.dot(&ainv_b) / (4.0 * PI))
}

/// `∫ f(t) dt = c·det(A)^{−1/2}·exp(A^{−1}b·b / 4π)`.
pub fn gauss_integral(f: &GeneralizedGaussian) -> Result<Complex64> {
    Ok(log_gauss_integral(f)?.exp())
}

/// `log ⟨f, g⟩` with `⟨f, g⟩ = ∫ f(t) conj(g(t)) dt`.
pub fn log_inner_product(f: &GeneralizedGaussian, g: &GeneralizedGaussian) -> Result<Complex64> {
    log_gauss_integral(&f.product(&g.conj())?)
}

pub fn inner_product(f: &GeneralizedGaussian, g: &GeneralizedGaussian) -> Result<Complex64> {
    Ok(log_inner_product(f, g)?.exp())
}

/// `log S_g f(x, ξ)` with `S_g f(x, ξ) = ⟨f, M_ξ T_x g⟩`.
pub fn log_stft_closed(
    f: &GeneralizedGaussian,
    g: &GeneralizedGaussian,
    z: &PhaseSpacePoint,
) -> Result<Complex64> {
    check_dim(f.dim(), z.dim())?;
    let window = g.translate(&z.x)?.modulate(&z.xi)?;
    log_inner_product(f, &window)
}

pub fn stft_closed(
    f: &GeneralizedGaussian,
    g: &GeneralizedGaussian,
    z: &PhaseSpacePoint,
) -> Result<Complex64> {
    Ok(log_stft_closed(f, g, z)?.exp())
}

/// Random Gaussian with `Re A ⪰ 0.3 I`, bounded chirp and linear terms.
/// Used by the randomized self-test suites.
pub fn random_gaussian(rng: &mut impl rand::Rng, d: usize) -> GeneralizedGaussian {
    let b = DMatrix::<f64>::from_fn(d, d, |_, _| rng.gen_range(-0.5..0.5));
    let re = &b * b.transpose() + DMatrix::identity(d, d) * rng.gen_range(0.3..1.5);
    let im = DMatrix::<f64>::from_fn(d, d, |_, _| rng.gen_range(-1.0..1.0));
    let quad = ComplexSymMatrix::from_fn(d, |i, j| {
        Complex64::new(re[(i, j)], 0.5 * (im[(i, j)] + im[(j, i)]))
    });
    let lin = CVec::from_fn(d, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-2.0..2.0))
    });
    let amp = Complex64::new(rng.gen_range(0.5..2.0), rng.gen_range(-1.0..1.0));
    GeneralizedGaussian::new(amp, quad, lin)
        .expect("real part is positive definite by construction")
}

#[cfg(test)]
mod tests;
