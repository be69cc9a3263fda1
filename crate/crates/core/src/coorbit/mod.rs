//! Weighted coorbit and modulation norms.
//!
//! The integrand `|V|^p m^p` is integrated by a hybrid rule. For two Gaussians
//! `log|V|` is an exact real quadratic polynomial in most coordinates once the
//! remaining ("numeric") coordinates are fixed. At each node of a trapezoid
//! grid over the numeric coordinates the quadratic is recovered by finite
//! differences and integrated in closed form over the others. Coordinates the
//! weight depends on, and the outer block of a mixed norm, are always numeric.
//! `Method::FullGrid` treats every coordinate numerically.

mod scan;
mod weight;

pub use scan::{
    family_scan, fit_slope, geometric_grid, orbit_scan, window_equivalence, OrbitCurve, OrbitRow,
    OrbitScan, ScanSpace, ScanTarget, SlopeFit, WindowBand,
};
pub use weight::{
    g616_transform, moderate_check, weight_pullback_g616, ModerateReport, WeightSpec,
};

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{check_dim, Error, Result};
use crate::gaussian::{log_stft_closed, GeneralizedGaussian, PhaseSpacePoint};
use crate::groups::{Group, QuotientPoint};
use crate::representations::{log_rep_coefficient, RepSpec};

pub const DEFAULT_HALF_WIDTH: f64 = 8.0;
pub const DEFAULT_STEP: f64 = 0.125;
/// Relative boundary magnitude above which a norm is flagged.
pub const TAIL_THRESHOLD: f64 = 1e-9;

/// `log|V|` of a coefficient function on `ℝ^n`.
pub trait CoefficientField {
    fn dim(&self) -> usize;
    fn log_abs(&self, x: &[f64]) -> Result<f64>;
    /// Coordinates in which `log|V|` is not quadratic.
    fn nonlinear_coords(&self) -> Vec<usize>;
    /// Inner block of mixed norms when none is given.
    fn default_inner(&self) -> Vec<usize>;
}

/// `S_g f` on phase space, coordinates `(x_1..x_d, ξ_1..ξ_d)`.
pub struct StftField<'a> {
    pub f: &'a GeneralizedGaussian,
    pub g: &'a GeneralizedGaussian,
}

impl CoefficientField for StftField<'_> {
    fn dim(&self) -> usize {
        2 * self.f.dim()
    }

    fn log_abs(&self, x: &[f64]) -> Result<f64> {
        let d = self.f.dim();
        let z = PhaseSpacePoint::new(x[..d].to_vec(), x[d..].to_vec())?;
        Ok(log_stft_closed(self.f, self.g, &z)?.re)
    }

    fn nonlinear_coords(&self) -> Vec<usize> {
        vec![]
    }

    fn default_inner(&self) -> Vec<usize> {
        (0..self.f.dim()).collect()
    }
}

/// `V_g^π f` on the section of `G/Z`.
pub struct RepField<'a> {
    pub rep: &'a RepSpec,
    pub f: &'a GeneralizedGaussian,
    pub g: &'a GeneralizedGaussian,
}

impl CoefficientField for RepField<'_> {
    fn dim(&self) -> usize {
        self.rep.group().quotient_dim()
    }

    fn log_abs(&self, x: &[f64]) -> Result<f64> {
        let q = QuotientPoint::new(self.rep.group(), x.to_vec())?;
        Ok(log_rep_coefficient(self.rep, self.f, self.g, &q)?.re)
    }

    fn nonlinear_coords(&self) -> Vec<usize> {
        self.rep.nonlinear_coords()
    }

    /// The translation ("time") coordinates.
    fn default_inner(&self) -> Vec<usize> {
        match self.rep.group() {
            Group::Heisenberg(d) => (0..d).collect(),
            Group::G616 | Group::G619 => vec![2, 3],
            Group::G53 => vec![1, 3],
            Group::DyninFolland => vec![3, 4, 5],
        }
    }
}

/// Truncation box with a common trapezoid step.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadBox {
    lo: Vec<f64>,
    hi: Vec<f64>,
    step: f64,
}

impl QuadBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, step: f64) -> Result<Self> {
        check_dim(lo.len(), hi.len())?;
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::InvalidParameter {
                name: "step",
                reason: format!("must be positive, got {step}"),
            });
        }
        if lo
            .iter()
            .zip(&hi)
            .any(|(a, b)| !(a < b) || !a.is_finite() || !b.is_finite())
        {
            return Err(Error::InvalidParameter {
                name: "box",
                reason: "each axis needs finite lo < hi".into(),
            });
        }
        Ok(Self { lo, hi, step })
    }

    pub fn symmetric(dim: usize, half_width: f64, step: f64) -> Result<Self> {
        Self::new(vec![-half_width; dim], vec![half_width; dim], step)
    }

    pub fn default_for(dim: usize) -> Self {
        Self::symmetric(dim, DEFAULT_HALF_WIDTH, DEFAULT_STEP).expect("default box is valid")
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    /// Widens axis `axis` by `amount` on both sides.
    pub fn grow(&mut self, axis: usize, amount: f64) {
        self.lo[axis] -= amount;
        self.hi[axis] += amount;
    }

    /// Trapezoid nodes and weights along one axis. The step is shrunk so that
    /// the nodes hit both ends.
    pub fn axis_nodes(&self, axis: usize) -> Vec<(f64, f64)> {
        let (a, b) = (self.lo[axis], self.hi[axis]);
        let n = ((b - a) / self.step).round().max(1.0) as usize;
        let h = (b - a) / n as f64;
        (0..=n)
            .map(|k| {
                let w = if k == 0 || k == n { 0.5 * h } else { h };
                (a + k as f64 * h, w)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Hybrid,
    FullGrid,
}

/// `(p, q, m)` plus truncation. With `q` the norm is
/// `(∫ (∫ |F|^p m^p d(inner))^{q/p} d(outer))^{1/q}`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormSpec {
    pub p: f64,
    pub q: Option<f64>,
    pub inner: Option<Vec<usize>>,
    pub weight: WeightSpec,
    pub domain: Option<QuadBox>,
    pub method: Method,
}

fn check_exponent(name: &'static str, p: f64) -> Result<()> {
    if p.is_infinite() {
        return Err(Error::InvalidParameter {
            name,
            reason: "p = infinity is not supported".into(),
        });
    }
    if !(p >= 1.0) {
        return Err(Error::InvalidParameter {
            name,
            reason: format!("must be >= 1, got {p}"),
        });
    }
    Ok(())
}

impl NormSpec {
    pub fn new(p: f64) -> Result<Self> {
        check_exponent("p", p)?;
        Ok(Self {
            p,
            q: None,
            inner: None,
            weight: WeightSpec::unit(),
            domain: None,
            method: Method::Hybrid,
        })
    }

    pub fn mixed(p: f64, q: f64) -> Result<Self> {
        check_exponent("q", q)?;
        Ok(Self {
            q: Some(q),
            ..Self::new(p)?
        })
    }

    pub fn with_weight(mut self, w: WeightSpec) -> Self {
        self.weight = w;
        self
    }

    pub fn with_box(mut self, b: QuadBox) -> Self {
        self.domain = Some(b);
        self
    }

    pub fn with_method(mut self, m: Method) -> Self {
        self.method = m;
        self
    }

    pub fn with_inner(mut self, inner: Vec<usize>) -> Self {
        self.inner = Some(inner);
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_exponent("p", self.p)?;
        if let Some(q) = self.q {
            check_exponent("q", q)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormReport {
    pub value: f64,
    pub p: f64,
    pub q: Option<f64>,
    pub numeric_coords: Vec<usize>,
    pub analytic_coords: Vec<usize>,
    pub nodes: usize,
    /// Largest boundary integrand relative to the largest integrand.
    pub tail_ratio: f64,
    /// Share of the integral carried by boundary nodes.
    pub boundary_fraction: f64,
    pub tail_warning: bool,
}

/// Real quadratic `F(c + b) = k + r·b − π bᵀPb` around a center `c`.
struct QuadraticModel {
    center: Vec<f64>,
    k: f64,
    r: DVector<f64>,
    p: DMatrix<f64>,
}

impl QuadraticModel {
    fn peak(&self) -> Result<Vec<f64>> {
        let shift = self
            .p
            .clone()
            .cholesky()
            .ok_or(Error::NotIntegrable)?
            .solve(&self.r)
            / (2.0 * PI);
        Ok(self
            .center
            .iter()
            .zip(shift.iter())
            .map(|(c, s)| c + s)
            .collect())
    }

    fn eval(&self, a: &[f64]) -> f64 {
        let b = DVector::from_iterator(a.len(), a.iter().zip(&self.center).map(|(x, c)| x - c));
        self.k + self.r.dot(&b) - PI * b.dot(&(&self.p * &b))
    }

    /// `log ∫ exp(p·F)` over all of `ℝ^k`.
    fn log_integral(&self, p: f64) -> Result<f64> {
        let chol = self.p.clone().cholesky().ok_or(Error::NotIntegrable)?;
        let log_det: f64 = 2.0 * chol.l().diagonal().iter().map(|v| v.ln()).sum::<f64>();
        let pinv_r = chol.solve(&self.r);
        let k = self.r.len() as f64;
        let fmax = self.k + self.r.dot(&pinv_r) / (4.0 * PI);
        Ok(p * fmax - 0.5 * k * p.ln() - 0.5 * log_det)
    }
}

const FD_STEP: f64 = 0.5;

/// Evaluates `F` on the analytic coordinates with the numeric ones fixed.
struct Slice<'a> {
    field: &'a dyn CoefficientField,
    base: Vec<f64>,
    analytic: &'a [usize],
}

impl Slice<'_> {
    fn eval(&self, a: &[f64]) -> Result<f64> {
        let mut x = self.base.clone();
        for (&i, &v) in self.analytic.iter().zip(a) {
            x[i] = v;
        }
        self.field.log_abs(&x)
    }

    fn model(&self, center: &[f64]) -> Result<QuadraticModel> {
        let k = self.analytic.len();
        let s = FD_STEP;
        let f0 = self.eval(center)?;
        let at = |offsets: &[(usize, f64)]| {
            let mut a = center.to_vec();
            for &(i, d) in offsets {
                a[i] += d;
            }
            self.eval(&a)
        };
        let mut plus = vec![0.0; k];
        let mut minus = vec![0.0; k];
        for i in 0..k {
            plus[i] = at(&[(i, s)])?;
            minus[i] = at(&[(i, -s)])?;
        }
        let mut hess = DMatrix::<f64>::zeros(k, k);
        let mut r = DVector::<f64>::zeros(k);
        for i in 0..k {
            r[i] = (plus[i] - minus[i]) / (2.0 * s);
            hess[(i, i)] = (plus[i] - 2.0 * f0 + minus[i]) / (s * s);
            for j in 0..i {
                let v = (at(&[(i, s), (j, s)])? - plus[i] - plus[j] + f0) / (s * s);
                hess[(i, j)] = v;
                hess[(j, i)] = v;
            }
        }
        Ok(QuadraticModel {
            center: center.to_vec(),
            k: f0,
            r,
            p: hess / (-2.0 * PI),
        })
    }

    /// Model re-centered at its peak, checked off-axis.
    fn fitted_model(&self, guess: &[f64]) -> Result<QuadraticModel> {
        let mut model = self.model(guess)?;
        let peak = model.peak()?;
        if peak.iter().zip(guess).any(|(a, b)| (a - b).abs() > 0.5) {
            model = self.model(&peak)?;
        }
        let probe: Vec<f64> = model
            .center
            .iter()
            .enumerate()
            .map(|(i, c)| c + if i % 2 == 0 { 0.37 } else { -0.29 })
            .collect();
        let actual = self.eval(&probe)?;
        let predicted = model.eval(&probe);
        if (actual - predicted).abs() > 1e-7 * (1.0 + actual.abs()) {
            return Err(Error::NotIntegrable);
        }
        Ok(model)
    }
}

enum Marginal {
    Direct,
    Global(GlobalMarginal),
    PerNode { guess: Vec<f64> },
}

/// For a field that is quadratic everywhere: one model, marginalized in
/// closed form at every numeric node.
struct GlobalMarginal {
    model: QuadraticModel,
    numeric: Vec<usize>,
    analytic: Vec<usize>,
    p: f64,
    /// `P_AA^{-1}` and the node-independent part of the log integral.
    paa_inv: DMatrix<f64>,
    constant: f64,
}

impl GlobalMarginal {
    fn new(
        field: &dyn CoefficientField,
        numeric: &[usize],
        analytic: &[usize],
        p: f64,
    ) -> Result<Self> {
        let all: Vec<usize> = (0..field.dim()).collect();
        let slice = Slice {
            field,
            base: vec![0.0; all.len()],
            analytic: &all,
        };
        let model = slice.fitted_model(&vec![0.0; all.len()])?;
        let k = analytic.len();
        let paa = DMatrix::from_fn(k, k, |i, j| model.p[(analytic[i], analytic[j])]);
        let chol = paa.cholesky().ok_or(Error::NotIntegrable)?;
        let log_det: f64 = 2.0 * chol.l().diagonal().iter().map(|v| v.ln()).sum::<f64>();
        Ok(Self {
            paa_inv: chol.inverse(),
            constant: -0.5 * k as f64 * p.ln() - 0.5 * log_det,
            model,
            numeric: numeric.to_vec(),
            analytic: analytic.to_vec(),
            p,
        })
    }

    fn log_integral(&self, x: &[f64]) -> f64 {
        let m = &self.model;
        let b: Vec<f64> = self.numeric.iter().map(|&i| x[i] - m.center[i]).collect();
        let mut fixed = m.k;
        for (a, &i) in self.numeric.iter().enumerate() {
            fixed += m.r[i] * b[a];
            for (c, &j) in self.numeric.iter().enumerate() {
                fixed -= PI * b[a] * m.p[(i, j)] * b[c];
            }
        }
        let s = DVector::from_iterator(
            self.analytic.len(),
            self.analytic.iter().map(|&i| {
                m.r[i]
                    - 2.0
                        * PI
                        * self
                            .numeric
                            .iter()
                            .zip(&b)
                            .map(|(&j, bj)| m.p[(i, j)] * bj)
                            .sum::<f64>()
            }),
        );
        self.p * (fixed + s.dot(&(&self.paa_inv * &s)) / (4.0 * PI)) + self.constant
    }
}

fn complement(n: usize, set: &[usize]) -> Vec<usize> {
    (0..n).filter(|i| !set.contains(i)).collect()
}

/// Iterates the tensor grid over `axes` in lexicographic order.
fn for_each_node(
    domain: &QuadBox,
    axes: &[usize],
    mut body: impl FnMut(&[(f64, f64)], bool) -> Result<()>,
) -> Result<usize> {
    let nodes: Vec<Vec<(f64, f64)>> = axes.iter().map(|&a| domain.axis_nodes(a)).collect();
    let mut idx = vec![0usize; axes.len()];
    let mut current: Vec<(f64, f64)> = nodes.iter().map(|n| n[0]).collect();
    let mut count = 0;
    loop {
        let boundary = idx
            .iter()
            .zip(&nodes)
            .any(|(&i, n)| i == 0 || i + 1 == n.len());
        body(&current, boundary)?;
        count += 1;
        let mut a = axes.len();
        loop {
            if a == 0 {
                return Ok(count);
            }
            a -= 1;
            idx[a] += 1;
            if idx[a] < nodes[a].len() {
                current[a] = nodes[a][idx[a]];
                break;
            }
            idx[a] = 0;
            current[a] = nodes[a][0];
        }
    }
}

/// Weighted `L^p` (or mixed `L^{p,q}`) norm of a coefficient field.
pub fn lp_norm(field: &dyn CoefficientField, spec: &NormSpec) -> Result<NormReport> {
    spec.validate()?;
    let n = field.dim();
    spec.weight.validate(n)?;
    let domain = spec
        .domain
        .clone()
        .unwrap_or_else(|| QuadBox::default_for(n));
    check_dim(n, domain.dim())?;

    let (inner, outer) = match spec.q {
        Some(_) => {
            let inner = spec.inner.clone().unwrap_or_else(|| field.default_inner());
            if inner.iter().any(|&i| i >= n) || inner.is_empty() || inner.len() >= n {
                return Err(Error::InvalidParameter {
                    name: "inner",
                    reason: "inner block must be a proper subset".into(),
                });
            }
            let outer = complement(n, &inner);
            (inner, outer)
        }
        None => ((0..n).collect(), vec![]),
    };
    let mut numeric: Vec<usize> = match spec.method {
        Method::FullGrid => (0..n).collect(),
        Method::Hybrid => {
            let mut s = field.nonlinear_coords();
            s.extend(spec.weight.touched_coords(n));
            s.extend(outer.iter().copied());
            s
        }
    };
    numeric.sort_unstable();
    numeric.dedup();
    let analytic = complement(n, &numeric);
    let inner_numeric: Vec<usize> = inner
        .iter()
        .copied()
        .filter(|i| numeric.contains(i))
        .collect();

    let p = spec.p;
    let mut marginal = if analytic.is_empty() {
        Marginal::Direct
    } else if field.nonlinear_coords().is_empty() {
        Marginal::Global(GlobalMarginal::new(field, &numeric, &analytic, p)?)
    } else {
        Marginal::PerNode {
            guess: vec![0.0; analytic.len()],
        }
    };
    let mut max_all: f64 = 0.0;
    let mut max_boundary: f64 = 0.0;
    let mut boundary_sum = 0.0;
    let mut total_sum = 0.0;
    let mut outer_sum = 0.0;
    let mut base = vec![0.0; n];

    let mut nodes = 0;
    for_each_node(&domain, &outer, |onodes, obound| {
        let mut w_outer = 1.0;
        for (&axis, &(x, w)) in outer.iter().zip(onodes) {
            base[axis] = x;
            w_outer *= w;
        }
        let mut inner_sum = 0.0;
        let inner_count = for_each_node(&domain, &inner_numeric, |inodes, ibound| {
            let mut w = w_outer;
            for (&axis, &(x, wi)) in inner_numeric.iter().zip(inodes) {
                base[axis] = x;
                w *= wi;
            }
            let weight = spec.weight.eval(&base).powf(p);
            let log_g = match &mut marginal {
                Marginal::Direct => p * field.log_abs(&base)?,
                Marginal::Global(m) => m.log_integral(&base),
                Marginal::PerNode { guess } => {
                    let slice = Slice {
                        field,
                        base: base.clone(),
                        analytic: &analytic,
                    };
                    let model = slice.fitted_model(guess)?;
                    *guess = model.peak()?;
                    model.log_integral(p)?
                }
            };
            let value = weight * log_g.exp();
            max_all = max_all.max(value);
            let contrib = value * w / w_outer;
            if obound || ibound {
                max_boundary = max_boundary.max(value);
                boundary_sum += contrib * w_outer;
            }
            total_sum += contrib * w_outer;
            inner_sum += contrib;
            Ok(())
        })?;
        nodes += inner_count;
        match spec.q {
            Some(q) => outer_sum += w_outer * inner_sum.powf(q / p),
            None => outer_sum += inner_sum,
        }
        Ok(())
    })?;

    let value = match spec.q {
        Some(q) => outer_sum.powf(1.0 / q),
        None => outer_sum.powf(1.0 / p),
    };
    let tail_ratio = if max_all > 0.0 {
        max_boundary / max_all
    } else {
        0.0
    };
    // boundary nodes only exist when something is integrated numerically
    let has_grid = !numeric.is_empty();
    Ok(NormReport {
        value,
        p,
        q: spec.q,
        numeric_coords: numeric,
        analytic_coords: analytic,
        nodes,
        tail_ratio: if has_grid { tail_ratio } else { 0.0 },
        boundary_fraction: if has_grid && total_sum > 0.0 {
            boundary_sum / total_sum
        } else {
            0.0
        },
        tail_warning: has_grid && tail_ratio > TAIL_THRESHOLD,
    })
}

/// `‖V_g^π f‖_{L^p_m(G/Z)}` over the zero-center section.
pub fn coorbit_norm(
    rep: &RepSpec,
    f: &GeneralizedGaussian,
    g: &GeneralizedGaussian,
    spec: &NormSpec,
) -> Result<NormReport> {
    check_dim(rep.realization_dim(), f.dim())?;
    check_dim(rep.realization_dim(), g.dim())?;
    if g.norm() == 0.0 {
        return Err(Error::InvalidParameter {
            name: "g",
            reason: "window must be non-zero".into(),
        });
    }
    lp_norm(&RepField { rep, f, g }, spec)
}

/// `‖S_g f‖_{L^p_m(ℝ^{2d})}` (or the mixed `M^{p,q}_m` norm, inner block = positions).
pub fn modulation_norm(
    f: &GeneralizedGaussian,
    g: &GeneralizedGaussian,
    spec: &NormSpec,
) -> Result<NormReport> {
    check_dim(f.dim(), g.dim())?;
    lp_norm(&StftField { f, g }, spec)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormalDimension {
    pub value: f64,
    /// `∫_box |V_g g|²`.
    pub integral: f64,
    pub boundary_fraction: f64,
    pub tail_ratio: f64,
    /// Set when the boundary carries more than 1% of the integral.
    pub box_too_small: bool,
}

/// `‖g‖⁴ / ∫ |V_g^π g|²` over the box: the formal dimension for Lebesgue
/// measure on the section coordinates.
pub fn formal_dimension(
    rep: &RepSpec,
    g: &GeneralizedGaussian,
    domain: Option<QuadBox>,
) -> Result<FormalDimension> {
    let mut spec = NormSpec::new(2.0)?;
    spec.domain = domain;
    let report = coorbit_norm(rep, g, g, &spec)?;
    let integral = report.value * report.value;
    let n2 = g.norm_sq();
    Ok(FormalDimension {
        value: n2 * n2 / integral,
        integral,
        boundary_fraction: report.boundary_fraction,
        tail_ratio: report.tail_ratio,
        box_too_small: report.boundary_fraction > 0.01,
    })
}

#[cfg(test)]
mod tests;
