//! Norms along one-parameter orbits `u ↦ π(a(u)) f` and window changes.

use rayon::prelude::*;

use super::{coorbit_norm, modulation_norm, NormSpec, QuadBox};
use crate::error::{Error, Result};
use crate::gaussian::GeneralizedGaussian;
use crate::groups::GroupElement;
use crate::representations::{apply_rep, RepSpec};

/// `u ↦ π(exp(u X_axis))`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitCurve {
    rep: RepSpec,
    axis: usize,
}

impl OrbitCurve {
    pub fn new(rep: RepSpec, axis: usize) -> Result<Self> {
        if axis >= rep.group().total_dim() {
            return Err(Error::InvalidParameter {
                name: "axis",
                reason: format!("axis {axis} out of range for {}", rep.group()),
            });
        }
        Ok(Self { rep, axis })
    }

    pub fn rep(&self) -> &RepSpec {
        &self.rep
    }

    pub fn axis(&self) -> usize {
        self.axis
    }

    pub fn element(&self, u: f64) -> Result<GroupElement> {
        GroupElement::exp_axis(self.rep.group(), self.axis, u)
    }

    pub fn apply(&self, u: f64, f: &GeneralizedGaussian) -> Result<GeneralizedGaussian> {
        apply_rep(&self.rep, &self.element(u)?, f)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScanSpace {
    Modulation,
    Coorbit(RepSpec),
}

/// One norm tracked along the orbit. `growth` widens axis `i` of the box by
/// `factor·|u|` on both sides.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanTarget {
    pub tag: String,
    pub space: ScanSpace,
    pub window: GeneralizedGaussian,
    pub spec: NormSpec,
    pub growth: Vec<(usize, f64)>,
}

impl ScanTarget {
    fn dim(&self) -> usize {
        match &self.space {
            ScanSpace::Modulation => 2 * self.window.dim(),
            ScanSpace::Coorbit(rep) => rep.group().quotient_dim(),
        }
    }

    fn spec_at(&self, u: f64) -> NormSpec {
        let mut spec = self.spec.clone();
        if !self.growth.is_empty() {
            let mut b = spec
                .domain
                .take()
                .unwrap_or_else(|| QuadBox::default_for(self.dim()));
            for &(axis, factor) in &self.growth {
                b.grow(axis, factor * u.abs());
            }
            spec.domain = Some(b);
        }
        spec
    }

    fn norm(&self, f: &GeneralizedGaussian, u: f64) -> Result<super::NormReport> {
        let spec = self.spec_at(u);
        match &self.space {
            ScanSpace::Modulation => modulation_norm(f, &self.window, &spec),
            ScanSpace::Coorbit(rep) => coorbit_norm(rep, f, &self.window, &spec),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitRow {
    pub u: f64,
    pub tag: String,
    pub value: f64,
    pub tail_ratio: f64,
    pub tail_warning: bool,
}

/// Least-squares slopes of `log value` against `log u` and `log(1 + u²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeFit {
    pub tag: String,
    pub slope_log_u: f64,
    pub slope_log_1pu2: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitScan {
    pub rows: Vec<OrbitRow>,
    pub fits: Vec<SlopeFit>,
}

impl OrbitScan {
    pub fn fit(&self, tag: &str) -> Option<&SlopeFit> {
        self.fits.iter().find(|f| f.tag == tag)
    }

    pub fn values(&self, tag: &str) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.tag == tag)
            .map(|r| (r.u, r.value))
            .collect()
    }
}

/// `n` points from `lo` to `hi`, equally spaced in `log u`.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && n >= 2) {
        return Err(Error::InvalidParameter {
            name: "u_grid",
            reason: "need 0 < lo < hi and at least 2 points".into(),
        });
    }
    let r = (hi / lo).ln() / (n - 1) as f64;
    Ok((0..n)
        .map(|k| {
            if k + 1 == n {
                hi
            } else {
                lo * (r * k as f64).exp()
            }
        })
        .collect())
}

fn least_squares_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Fits over the largest decade `[u_max/10, u_max]` of `|u|`.
pub fn fit_slope(tag: &str, points: &[(f64, f64)]) -> Result<SlopeFit> {
    let umax = points.iter().map(|p| p.0.abs()).fold(0.0, f64::max);
    let tail: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|p| p.0.abs() >= umax / 10.0 * (1.0 - 1e-12))
        .collect();
    if tail.len() < 2 || tail.iter().any(|p| !(p.1 > 0.0)) {
        return Err(Error::Numerical(format!(
            "{tag}: need two positive values in the top decade"
        )));
    }
    let ly: Vec<f64> = tail.iter().map(|p| p.1.ln()).collect();
    let lu: Vec<f64> = tail.iter().map(|p| p.0.abs().ln()).collect();
    let lu2: Vec<f64> = tail.iter().map(|p| (1.0 + p.0 * p.0).ln()).collect();
    Ok(SlopeFit {
        tag: tag.to_string(),
        slope_log_u: least_squares_slope(&lu, &ly),
        slope_log_1pu2: least_squares_slope(&lu2, &ly),
        points: tail.len(),
    })
}

/// Evaluates every target on `π(a(u)) f` for each `u`, rows ordered by `u`
/// then target.
pub fn orbit_scan(
    curve: &OrbitCurve,
    f: &GeneralizedGaussian,
    targets: &[ScanTarget],
    u_grid: &[f64],
) -> Result<OrbitScan> {
    family_scan(|u| curve.apply(u, f), targets, u_grid)
}

/// Same as [`orbit_scan`] for an arbitrary family `u ↦ f_u`.
pub fn family_scan(
    family: impl Fn(f64) -> Result<GeneralizedGaussian> + Sync,
    targets: &[ScanTarget],
    u_grid: &[f64],
) -> Result<OrbitScan> {
    if u_grid.is_empty() {
        return Err(Error::InvalidParameter {
            name: "u_grid",
            reason: "empty".into(),
        });
    }
    let per_u: Vec<Result<Vec<OrbitRow>>> = u_grid
        .par_iter()
        .map(|&u| {
            let fu = family(u)?;
            targets
                .iter()
                .map(|t| {
                    let r = t.norm(&fu, u)?;
                    Ok(OrbitRow {
                        u,
                        tag: t.tag.clone(),
                        value: r.value,
                        tail_ratio: r.tail_ratio,
                        tail_warning: r.tail_warning,
                    })
                })
                .collect()
        })
        .collect();
    let mut rows = Vec::with_capacity(u_grid.len() * targets.len());
    for r in per_u {
        rows.extend(r?);
    }
    let scan = OrbitScan { rows, fits: vec![] };
    let fits = targets
        .iter()
        .map(|t| fit_slope(&t.tag, &scan.values(&t.tag)))
        .collect::<Result<_>>()?;
    Ok(OrbitScan { fits, ..scan })
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindowBand {
    pub ratios: Vec<f64>,
    pub min_ratio: f64,
    pub max_ratio: f64,
}

/// Range of `‖V_{g1} f‖ / ‖V_{g2} f‖` over a suite of signals.
pub fn window_equivalence(
    rep: &RepSpec,
    suite: &[GeneralizedGaussian],
    g1: &GeneralizedGaussian,
    g2: &GeneralizedGaussian,
    spec: &NormSpec,
) -> Result<WindowBand> {
    if suite.is_empty() {
        return Err(Error::InvalidParameter {
            name: "suite",
            reason: "empty".into(),
        });
    }
    let ratios = suite
        .iter()
        .map(|f| Ok(coorbit_norm(rep, f, g1, spec)?.value / coorbit_norm(rep, f, g2, spec)?.value))
        .collect::<Result<Vec<f64>>>()?;
    let min_ratio = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    Ok(WindowBand {
        ratios,
        min_ratio,
        max_ratio,
    })
}
