//! Uniform-grid oracle: sampled functions, a DFT-based short-time Fourier
//! transform and brute-force quadrature of representation coefficients.
//!
//! Nothing here uses the closed-form Gaussian calculus beyond pointwise
//! evaluation, so agreement with it is an independent check.

use std::f64::consts::PI;
use std::io::{BufRead, Write};

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{check_dim, Error, Result};
use crate::gaussian::{GaussianSum, GeneralizedGaussian};
use crate::groups::QuotientPoint;
use crate::representations::{apply_rep_pointwise, RepSpec};

/// Relative boundary magnitude above which a quadrature is flagged.
pub const TAIL_THRESHOLD: f64 = 1e-9;

/// `N^d` nodes `t_k = −L/2 + k·h`, `h = L/N`, on `[−L/2, L/2)^d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    dim: usize,
    length: f64,
    points: usize,
}

impl GridSpec {
    pub fn new(dim: usize, length: f64, points: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter {
                name: "dim",
                reason: "must be positive".into(),
            });
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidParameter {
                name: "length",
                reason: format!("must be positive, got {length}"),
            });
        }
        if points < 2 || !points.is_power_of_two() {
            return Err(Error::InvalidParameter {
                name: "points",
                reason: format!("must be a power of two >= 2, got {points}"),
            });
        }
        Ok(Self {
            dim,
            length,
            points,
        })
    }

    /// Desk-scale default per dimension.
    pub fn default_for_dim(dim: usize) -> Result<Self> {
        match dim {
            1 => Self::new(1, 16.0, 512),
            2 => Self::new(2, 12.0, 128),
            3 => Self::new(3, 10.0, 64),
            _ => Err(Error::InvalidParameter {
                name: "dim",
                reason: format!("no default grid for dimension {dim}"),
            }),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.points as f64
    }

    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node_1d(&self, k: usize) -> f64 {
        -0.5 * self.length + k as f64 * self.spacing()
    }

    /// Multi-index of a flat index; the first axis varies slowest.
    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim];
        for a in (0..self.dim).rev() {
            idx[a] = flat % self.points;
            flat /= self.points;
        }
        idx
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &k| acc * self.points + k)
    }

    pub fn node(&self, flat: usize) -> Vec<f64> {
        self.multi_index(flat)
            .into_iter()
            .map(|k| self.node_1d(k))
            .collect()
    }

    pub fn is_boundary(&self, flat: usize) -> bool {
        self.multi_index(flat)
            .iter()
            .any(|&k| k == 0 || k == self.points - 1)
    }

    /// Frequency of bin `m ∈ [−N/2, N/2)`.
    pub fn frequency(&self, m: i64) -> f64 {
        m as f64 / self.length
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: GridSpec,
    values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn new(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        check_dim(grid.len(), values.len())?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical("sampled values must be finite".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn at(&self, idx: &[usize]) -> Complex64 {
        self.values[self.grid.flat_index(idx)]
    }

    /// Riemann-sum `L²` norm.
    pub fn l2_norm(&self) -> f64 {
        let h = self.grid.spacing().powi(self.grid.dim as i32);
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * h).sqrt()
    }

    /// Trapezoid (equal weights on a periodic grid) inner product.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let h = self.grid.spacing().powi(self.grid.dim as i32);
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b.conj())
            .sum::<Complex64>()
            * h)
    }

    /// CSV with header `index,re,im`, one row per node (flat index).
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "index,re,im")?;
        for (k, v) in self.values.iter().enumerate() {
            writeln!(out, "{k},{},{}", v.re, v.im)?;
        }
        Ok(())
    }

    pub fn read_csv(grid: GridSpec, input: impl BufRead) -> Result<Self> {
        let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
        let mut seen = vec![false; grid.len()];
        let bad = |line: usize, msg: &str| Error::InvalidParameter {
            name: "csv",
            reason: format!("line {line}: {msg}"),
        };
        for (n, line) in input.lines().enumerate() {
            let line = line.map_err(|e| bad(n + 1, &e.to_string()))?;
            if n == 0 {
                if line.trim() != "index,re,im" {
                    return Err(bad(1, "expected header `index,re,im`"));
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(bad(n + 1, "expected three fields"));
            }
            let k: usize = fields[0].parse().map_err(|_| bad(n + 1, "bad index"))?;
            let re: f64 = fields[1].parse().map_err(|_| bad(n + 1, "bad real part"))?;
            let im: f64 = fields[2]
                .parse()
                .map_err(|_| bad(n + 1, "bad imaginary part"))?;
            if k >= values.len() {
                return Err(bad(n + 1, "index out of range"));
            }
            values[k] = Complex64::new(re, im);
            seen[k] = true;
        }
        if let Some(k) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidParameter {
                name: "csv",
                reason: format!("missing node {k}"),
            });
        }
        Self::new(grid, values)
    }
}

pub fn sample_fn(f: impl Fn(&[f64]) -> Complex64, grid: &GridSpec) -> SampledFunction {
    let values = (0..grid.len()).map(|k| f(&grid.node(k))).collect();
    SampledFunction {
        grid: *grid,
        values,
    }
}

pub fn sample(f: &GeneralizedGaussian, grid: &GridSpec) -> Result<SampledFunction> {
    check_dim(grid.dim, f.dim())?;
    SampledFunction::new(
        *grid,
        (0..grid.len()).map(|k| f.eval(&grid.node(k))).collect(),
    )
}

pub fn sample_sum(f: &GaussianSum, grid: &GridSpec) -> Result<SampledFunction> {
    if let Some(d) = f.dim() {
        check_dim(grid.dim, d)?;
    }
    SampledFunction::new(
        *grid,
        (0..grid.len()).map(|k| f.eval(&grid.node(k))).collect(),
    )
}

/// DFT-based STFT at selected grid-aligned shifts.
#[derive(Debug, Clone, PartialEq)]
pub struct StftTable {
    pub grid: GridSpec,
    /// Shift multi-indices `j ∈ [−N/2, N/2)^d`; the shift is `x_j = j·h`.
    pub shifts: Vec<Vec<i64>>,
    /// Per shift, `N^d` values over bins `m ∈ [−N/2, N/2)^d`, first axis slowest.
    pub values: Vec<Vec<Complex64>>,
}

impl StftTable {
    pub fn shift_position(&self, s: usize) -> Vec<f64> {
        self.shifts[s]
            .iter()
            .map(|&j| j as f64 * self.grid.spacing())
            .collect()
    }

    /// Signed bin indices of a flat frequency index.
    pub fn bin(&self, flat: usize) -> Vec<i64> {
        let half = (self.grid.points / 2) as i64;
        self.grid
            .multi_index(flat)
            .into_iter()
            .map(|k| k as i64 - half)
            .collect()
    }

    pub fn frequency(&self, flat: usize) -> Vec<f64> {
        self.bin(flat)
            .into_iter()
            .map(|m| self.grid.frequency(m))
            .collect()
    }
}

/// For each shift `x_j`, the DFT of `t ↦ f(t)·conj(g(t − x_j))` (periodic
/// wrap) scaled by `h^d`, reported at `ξ_m = m/L`. The factor `(−1)^m` per axis
/// accounts for the grid starting at `−L/2`.
pub fn dft_stft_at_shifts(
    f: &SampledFunction,
    g: &SampledFunction,
    shifts: &[Vec<i64>],
) -> Result<StftTable> {
    if f.grid != g.grid {
        return Err(Error::GridMismatch);
    }
    let grid = f.grid;
    let n = grid.points;
    let d = grid.dim;
    for s in shifts {
        check_dim(d, s.len())?;
    }
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(n);
    let scale = grid.spacing().powi(d as i32);
    let half = n / 2;
    let mut values = Vec::with_capacity(shifts.len());
    let mut buf = vec![Complex64::new(0.0, 0.0); grid.len()];
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for shift in shifts {
        for (k, slot) in buf.iter_mut().enumerate() {
            let idx = grid.multi_index(k);
            let src: Vec<usize> = idx
                .iter()
                .zip(shift)
                .map(|(&i, &j)| (i as i64 - j).rem_euclid(n as i64) as usize)
                .collect();
            *slot = f.values[k] * g.values[grid.flat_index(&src)].conj();
        }
        // separable transform, one axis at a time
        for axis in 0..d {
            let stride = n.pow((d - 1 - axis) as u32);
            let outer = grid.len() / n;
            for o in 0..outer {
                let base = (o / stride) * stride * n + o % stride;
                for (i, l) in line.iter_mut().enumerate() {
                    *l = buf[base + i * stride];
                }
                fft.process(&mut line);
                for (i, l) in line.iter().enumerate() {
                    buf[base + i * stride] = *l;
                }
            }
        }
        // reorder bins to m ∈ [−N/2, N/2) and apply (−1)^m
        let mut out = vec![Complex64::new(0.0, 0.0); grid.len()];
        for (flat, slot) in out.iter_mut().enumerate() {
            let idx = grid.multi_index(flat);
            let mut sign = 1.0;
            let src: Vec<usize> = idx
                .iter()
                .map(|&k| {
                    let m = k as i64 - half as i64;
                    if m.rem_euclid(2) == 1 {
                        sign = -sign;
                    }
                    m.rem_euclid(n as i64) as usize
                })
                .collect();
            *slot = buf[grid.flat_index(&src)] * (sign * scale);
        }
        values.push(out);
    }
    Ok(StftTable {
        grid,
        shifts: shifts.to_vec(),
        values,
    })
}

/// DFT-based STFT at every grid shift. Intended for one-dimensional grids.
pub fn dft_stft(f: &SampledFunction, g: &SampledFunction) -> Result<StftTable> {
    let n = f.grid.points as i64;
    let d = f.grid.dim;
    let count = f.grid.len();
    let shifts: Vec<Vec<i64>> = (0..count)
        .map(|flat| {
            f.grid
                .multi_index(flat)
                .into_iter()
                .map(|k| k as i64 - n / 2)
                .collect::<Vec<_>>()
        })
        .collect();
    debug_assert!(shifts.iter().all(|s| s.len() == d));
    dft_stft_at_shifts(f, g, &shifts)
}

/// Result of a brute-force quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    /// Largest boundary `|integrand|` relative to the largest overall.
    pub tail_ratio: f64,
    pub tail_warning: bool,
}

/// `∫ f(t)·conj((π(section(q))g)(t)) dt` by the equal-weight rule on `grid`,
/// with `π` evaluated from its defining formula.
pub fn quad_rep_coefficient_fn(
    rep: &RepSpec,
    f: impl Fn(&[f64]) -> Complex64,
    g: impl Fn(&[f64]) -> Complex64,
    q: &QuotientPoint,
    grid: &GridSpec,
) -> Result<Quadrature> {
    check_dim(rep.realization_dim(), grid.dim)?;
    if q.group() != rep.group() {
        return Err(Error::GroupMismatch(
            q.group().to_string(),
            rep.group().to_string(),
        ));
    }
    let a = q.section();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut max_all: f64 = 0.0;
    let mut max_boundary: f64 = 0.0;
    for k in 0..grid.len() {
        let t = grid.node(k);
        let v = f(&t) * apply_rep_pointwise(rep, &a, &g, &t).conj();
        let m = v.norm();
        max_all = max_all.max(m);
        if grid.is_boundary(k) {
            max_boundary = max_boundary.max(m);
        }
        acc += v;
    }
    let tail_ratio = if max_all > 0.0 {
        max_boundary / max_all
    } else {
        0.0
    };
    Ok(Quadrature {
        value: acc * grid.spacing().powi(grid.dim as i32),
        tail_ratio,
        tail_warning: tail_ratio > TAIL_THRESHOLD,
    })
}

pub fn quad_rep_coefficient(
    rep: &RepSpec,
    f: &GeneralizedGaussian,
    g: &GeneralizedGaussian,
    q: &QuotientPoint,
    grid: &GridSpec,
) -> Result<Quadrature> {
    check_dim(grid.dim, f.dim())?;
    check_dim(grid.dim, g.dim())?;
    quad_rep_coefficient_fn(rep, |t| f.eval(t), |t| g.eval(t), q, grid)
}

/// `L²`-normalized Hermite functions `h_0, …, h_{n−1}` for the `e^{−πt²}`
/// scaling, evaluated at `t`.
pub fn hermite_functions(n: usize, t: &[f64]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    let sqrt_pi = PI.sqrt();
    out.push(
        t.iter()
            .map(|&x| 2f64.powf(0.25) * (-PI * x * x).exp())
            .collect(),
    );
    for k in 0..n - 1 {
        let prev = if k == 0 { None } else { Some(&out[k - 1]) };
        let cur = &out[k];
        let next: Vec<f64> = t
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let back = prev.map_or(0.0, |p| (k as f64).sqrt() * p[i]);
                (2.0 * sqrt_pi * x * cur[i] - back) / ((k + 1) as f64).sqrt()
            })
            .collect();
        out.push(next);
    }
    out
}
