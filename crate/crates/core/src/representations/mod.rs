//! The square-integrable (modulo center) representations of the five groups,
//! acting exactly on generalized Gaussians.
//!
//! Every operator has the form
//! `π(a)g(t) = e^{2πi(½ tᵀHt + w·t + c0)} g(Mt + v)`
//! with `M`, `v`, `H`, `w` and `c0` polynomial in the coordinates of `a`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{check_dim, Error, Result};
use crate::gaussian::{log_inner_product, GaussianSum, GeneralizedGaussian};
use crate::groups::{Group, GroupElement, QuotientPoint};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepSpec {
    group: Group,
    lambda: f64,
    mu: f64,
    omit_phase: bool,
}

impl RepSpec {
    /// `π_{λ,μ}` with the coordinate-only phase omitted. `mu` is ignored by
    /// the one-parameter families.
    pub fn new(group: Group, lambda: f64, mu: f64) -> Result<Self> {
        if !lambda.is_finite() || !mu.is_finite() {
            return Err(Error::InvalidParameter {
                name: "lambda",
                reason: "parameters must be finite".into(),
            });
        }
        if lambda == 0.0 {
            return Err(Error::InvalidParameter {
                name: "lambda",
                reason: format!("{group} requires lambda != 0"),
            });
        }
        if group == Group::G619 && mu == 0.0 {
            return Err(Error::InvalidParameter {
                name: "mu",
                reason: "g6_19 requires lambda*mu != 0".into(),
            });
        }
        Ok(Self {
            group,
            lambda,
            mu,
            omit_phase: true,
        })
    }

    pub fn with_omit_phase(mut self, omit: bool) -> Self {
        self.omit_phase = omit;
        self
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn omit_phase(&self) -> bool {
        self.omit_phase
    }

    /// Dimension `d` of the realization on `L²(ℝ^d)`.
    pub fn realization_dim(&self) -> usize {
        match self.group {
            Group::Heisenberg(d) => d,
            Group::G616 | Group::G53 | Group::G619 => 2,
            Group::DyninFolland => 3,
        }
    }

    /// `d_π` for Lebesgue measure on the section coordinates.
    pub fn formal_dimension_exact(&self) -> f64 {
        let l = self.lambda.abs();
        match self.group {
            Group::Heisenberg(d) => l.powi(d as i32),
            Group::G616 | Group::G53 => l * l,
            Group::G619 => l * self.mu.abs(),
            Group::DyninFolland => l.powi(3),
        }
    }

    /// Quotient coordinates in which `log|V|` is not a quadratic polynomial.
    /// In all other coordinates the coefficient of two Gaussians is exactly a
    /// Gaussian.
    pub fn nonlinear_coords(&self) -> Vec<usize> {
        match self.group {
            Group::Heisenberg(_) | Group::G616 => vec![],
            Group::G53 => vec![2],
            Group::G619 => vec![3],
            Group::DyninFolland => vec![2, 4],
        }
    }

    /// The data `(M, v, H, w, c0)` of `π(a)`.
    pub fn action(&self, a: &GroupElement) -> Result<Action> {
        if a.group() != self.group {
            return Err(Error::GroupMismatch(
                a.group().to_string(),
                self.group.to_string(),
            ));
        }
        let x = a.coords();
        let (l, m) = (self.lambda, self.mu);
        let d = self.realization_dim();
        let mut act = Action::identity(d);
        match self.group {
            Group::Heisenberg(d) => {
                for i in 0..d {
                    act.v[i] = -x[i];
                    act.w[i] = -l * x[d + i];
                }
                act.c0 = l * x[2 * d];
            }
            Group::G616 => {
                act.v = vec![-x[4], -x[5]];
                act.w = vec![-l * x[2] + m * x[5], -l * x[3]];
                act.c0 = l * x[0] + m * (x[1] - x[4] * x[5]);
            }
            Group::G53 => {
                act.v = vec![-x[2], -x[4]];
                act.h[(1, 1)] = l * x[3];
                act.w = vec![l * x[3], -l * x[1]];
                act.c0 = l * (x[0] - x[2] * x[3]);
            }
            Group::G619 => {
                act.v = vec![-x[4], -x[5]];
                act.h[(0, 0)] = -m * x[5];
                act.w = vec![m * (-x[3] + x[4] * x[5]), -l * x[2]];
                act.c0 = l * x[0] + m * (x[1] - 0.5 * x[4] * x[4] * x[5]);
            }
            Group::DyninFolland => {
                // variables ordered (t3, t2, t1); coordinates (z, y1, y2, y3, x1, x2, x3)
                act.m[(0, 2)] = x[5];
                act.v = vec![x[4], x[5], x[6]];
                act.w = vec![l * x[3], l * x[2], l * x[1]];
                act.h[(1, 2)] = -0.5 * l * x[3];
                act.h[(2, 1)] = -0.5 * l * x[3];
                act.c0 = l * x[0];
            }
        }
        if self.omit_phase {
            act.c0 = 0.0;
        }
        Ok(act)
    }
}

/// `g ↦ e^{2πi(½ tᵀHt + w·t + c0)} g(Mt + v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Action {
    pub m: DMatrix<f64>,
    pub v: Vec<f64>,
    pub h: DMatrix<f64>,
    pub w: Vec<f64>,
    pub c0: f64,
}

impl Action {
    fn identity(d: usize) -> Self {
        Self {
            m: DMatrix::identity(d, d),
            v: vec![0.0; d],
            h: DMatrix::zeros(d, d),
            w: vec![0.0; d],
            c0: 0.0,
        }
    }

    fn is_translation(&self) -> bool {
        self.m == DMatrix::identity(self.m.nrows(), self.m.ncols())
    }

    pub fn apply(&self, g: &GeneralizedGaussian) -> Result<GeneralizedGaussian> {
        check_dim(self.v.len(), g.dim())?;
        let moved = if self.is_translation() {
            let x: Vec<f64> = self.v.iter().map(|v| -v).collect();
            g.translate(&x)?
        } else {
            g.affine_pullback(&self.m, &self.v)?
        };
        moved.mul_quadratic_phase(&self.h, &self.w, self.c0)
    }
}

/// `π(a)g`, exact within the Gaussian class.
pub fn apply_rep(
    rep: &RepSpec,
    a: &GroupElement,
    g: &GeneralizedGaussian,
) -> Result<GeneralizedGaussian> {
    check_dim(rep.realization_dim(), g.dim())?;
    rep.action(a)?.apply(g)
}

pub fn apply_rep_sum(rep: &RepSpec, a: &GroupElement, g: &GaussianSum) -> Result<GaussianSum> {
    let act = rep.action(a)?;
    g.map(|t| {
        check_dim(rep.realization_dim(), t.dim())?;
        act.apply(t)
    })
}

/// `(π(a)g)(t)` evaluated directly from the defining formula of each
/// representation, for an arbitrary function `g`. Used as an oracle.
pub fn apply_rep_pointwise(
    rep: &RepSpec,
    a: &GroupElement,
    g: impl Fn(&[f64]) -> Complex64,
    t: &[f64],
) -> Complex64 {
    let x = a.coords();
    let (l, m) = (rep.lambda, rep.mu);
    let (phase, arg): (f64, Vec<f64>) = match rep.group {
        Group::Heisenberg(d) => {
            let central = l * x[2 * d];
            let lin: f64 = (0..d).map(|i| x[d + i] * t[i]).sum();
            (central - l * lin, (0..d).map(|i| t[i] - x[i]).collect())
        }
        Group::G616 => {
            let (s, tt) = (t[0], t[1]);
            (
                l * (x[0] - x[2] * s - x[3] * tt) + m * (x[1] - x[4] * x[5] + x[5] * s),
                vec![s - x[4], tt - x[5]],
            )
        }
        Group::G53 => {
            let (s, tt) = (t[0], t[1]);
            (
                l * (x[0] - x[2] * x[3] + x[3] * s - x[1] * tt + 0.5 * x[3] * tt * tt),
                vec![s - x[2], tt - x[4]],
            )
        }
        Group::G619 => {
            let (s, tt) = (t[0], t[1]);
            let ph = l * (x[0] - x[2] * tt)
                + m * (x[1] - 0.5 * x[4] * x[4] * x[5] - x[3] * s + x[4] * x[5] * s
                    - 0.5 * x[5] * s * s);
            (ph, vec![s - x[4], tt - x[5]])
        }
        Group::DyninFolland => {
            let (t3, t2, t1) = (t[0], t[1], t[2]);
            let (z, y1, y2, y3, x1, x2, x3) = (x[0], x[1], x[2], x[3], x[4], x[5], x[6]);
            let ph = l * (z + t1 * y1 + t2 * y2 + t3 * y3 - t1 * t2 * y3 / 2.0);
            (ph, vec![t3 + x1 + t1 * x2, t2 + x2, t1 + x3])
        }
    };
    let phase = if rep.omit_phase {
        phase - coordinate_phase(rep, x)
    } else {
        phase
    };
    g(&arg) * Complex64::from_polar(1.0, 2.0 * PI * phase)
}

/// The phase (in cycles) that depends only on the group coordinates.
fn coordinate_phase(rep: &RepSpec, x: &[f64]) -> f64 {
    let (l, m) = (rep.lambda, rep.mu);
    match rep.group {
        Group::Heisenberg(d) => l * x[2 * d],
        Group::G616 => l * x[0] + m * (x[1] - x[4] * x[5]),
        Group::G53 => l * (x[0] - x[2] * x[3]),
        Group::G619 => l * x[0] + m * (x[1] - 0.5 * x[4] * x[4] * x[5]),
        Group::DyninFolland => l * x[0],
    }
}

fn check_point(rep: &RepSpec, q: &QuotientPoint) -> Result<()> {
    if q.group() != rep.group {
        return Err(Error::GroupMismatch(
            q.group().to_string(),
            rep.group.to_string(),
        ));
    }
    Ok(())
}

/// `log V_g^π f(q)` with `V_g^π f(q) = ⟨f, π(section(q))g⟩`.
pub fn log_rep_coefficient(
    rep: &RepSpec,
    f: &GeneralizedGaussian,
    g: &GeneralizedGaussian,
    q: &QuotientPoint,
) -> Result<Complex64> {
    check_point(rep, q)?;
    check_dim(rep.realization_dim(), f.dim())?;
    log_inner_product(f, &apply_rep(rep, &q.section(), g)?)
}

pub fn rep_coefficient(
    rep: &RepSpec,
    f: &GeneralizedGaussian,
    g: &GeneralizedGaussian,
    q: &QuotientPoint,
) -> Result<Complex64> {
    Ok(log_rep_coefficient(rep, f, g, q)?.exp())
}

/// Coefficient of finite Gaussian sums, by sesquilinearity.
pub fn rep_coefficient_sum(
    rep: &RepSpec,
    f: &GaussianSum,
    g: &GaussianSum,
    q: &QuotientPoint,
) -> Result<Complex64> {
    check_point(rep, q)?;
    let moved = apply_rep_sum(rep, &q.section(), g)?;
    f.inner_product(&moved)
}

/// `(|V^{π_λ}f(x_2, x_3, x_4, x_5)|, |V^{π_1}f(λx_2, x_3, λx_4, x_5)|)` on `G_{5,3}`.
pub fn homogeneity_check(
    f: &GeneralizedGaussian,
    g: &GeneralizedGaussian,
    q: &QuotientPoint,
    lambda: f64,
) -> Result<(f64, f64)> {
    if q.group() != Group::G53 {
        return Err(Error::UnsupportedGroup("g5_3"));
    }
    let rep = RepSpec::new(Group::G53, lambda, 0.0)?;
    let rep1 = RepSpec::new(Group::G53, 1.0, 0.0)?;
    let x = q.coords();
    let scaled = QuotientPoint::new(Group::G53, vec![lambda * x[0], x[1], lambda * x[2], x[3]])?;
    let lhs = log_rep_coefficient(&rep, f, g, q)?.re.exp();
    let rhs = log_rep_coefficient(&rep1, f, g, &scaled)?.re.exp();
    Ok((lhs, rhs))
}
