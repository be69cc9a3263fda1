//! Quasi-lattices in `G/Z`, box-counting density and finite-section frame
//! bounds for coherent systems `{π(γ)g}`.

mod dual;

pub use dual::{dual_window_estimate, DualWindow};

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::coorbit::formal_dimension;
use crate::error::{check_dim, Error, Result};
use crate::gaussian::GeneralizedGaussian;
use crate::groups::{Group, QuotientPoint};
use crate::numerics::{hermite_functions, sample, GridSpec};
use crate::representations::{apply_rep, RepSpec};

/// `Γ = {e^{k_n εX_n} ··· e^{k_1 εX_1} : |k_i| ≤ range_i}` over the quotient axes.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiLattice {
    group: Group,
    epsilon: f64,
    ranges: Vec<usize>,
}

impl QuasiLattice {
    pub fn new(group: Group, epsilon: f64, range: usize) -> Result<Self> {
        Self::with_ranges(group, epsilon, vec![range; group.quotient_dim()])
    }

    pub fn with_ranges(group: Group, epsilon: f64, ranges: Vec<usize>) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                reason: format!("must be positive, got {epsilon}"),
            });
        }
        check_dim(group.quotient_dim(), ranges.len())?;
        if ranges.contains(&0) {
            return Err(Error::InvalidParameter {
                name: "range",
                reason: "must be at least 1".into(),
            });
        }
        Ok(Self {
            group,
            epsilon,
            ranges,
        })
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn ranges(&self) -> &[usize] {
        &self.ranges
    }

    pub fn dim(&self) -> usize {
        self.group.quotient_dim()
    }

    fn axis(&self, i: usize, s: f64) -> QuotientPoint {
        let mut c = vec![0.0; self.dim()];
        c[i] = s;
        QuotientPoint::new(self.group, c).expect("dimension matches")
    }

    /// `γ_k`.
    pub fn point(&self, k: &[i64]) -> Result<QuotientPoint> {
        check_dim(self.dim(), k.len())?;
        let mut g = QuotientPoint::origin(self.group);
        for i in (0..k.len()).rev() {
            g = g.multiply(&self.axis(i, k[i] as f64 * self.epsilon))?;
        }
        Ok(g)
    }

    /// `K = [−ε/2, ε/2)^n` in section coordinates.
    pub fn in_fundamental_domain(&self, y: &QuotientPoint) -> bool {
        let h = 0.5 * self.epsilon;
        y.coords().iter().all(|&v| -h <= v && v < h)
    }

    /// The `k` with `γ_k^{-1} x ∈ K`, and `γ_k^{-1} x`. Peels the last axis
    /// first: left multiplication by `e^{sX_i}` moves coordinate `i` and only
    /// coordinates of lower index.
    pub fn locate(&self, x: &QuotientPoint) -> Result<(Vec<i64>, QuotientPoint)> {
        if x.group() != self.group {
            return Err(Error::GroupMismatch(
                x.group().to_string(),
                self.group.to_string(),
            ));
        }
        let n = self.dim();
        let mut k = vec![0i64; n];
        let mut y = x.clone();
        for i in (0..n).rev() {
            k[i] = (y.coords()[i] / self.epsilon + 0.5).floor() as i64;
            if k[i] != 0 {
                y = self.axis(i, -(k[i] as f64) * self.epsilon).multiply(&y)?;
            }
        }
        Ok((k, y))
    }

    /// All index tuples in the range box, last index fastest.
    pub fn indices(&self) -> Vec<Vec<i64>> {
        let n = self.dim();
        let sides: Vec<usize> = self.ranges.iter().map(|r| 2 * r + 1).collect();
        let total: usize = sides.iter().product();
        (0..total)
            .map(|mut flat| {
                let mut k = vec![0i64; n];
                for i in (0..n).rev() {
                    k[i] = (flat % sides[i]) as i64 - self.ranges[i] as i64;
                    flat /= sides[i];
                }
                k
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.ranges.iter().map(|r| 2 * r + 1).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn on_shell(&self, k: &[i64]) -> bool {
        k.iter()
            .zip(&self.ranges)
            .any(|(v, r)| v.unsigned_abs() as usize == *r)
    }

    pub fn points(&self) -> Result<Vec<(Vec<i64>, QuotientPoint)>> {
        self.indices()
            .into_iter()
            .map(|k| Ok((k.clone(), self.point(&k)?)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TilingReport {
    pub group: Group,
    pub samples: usize,
    /// Located `γ` whose recomputed `γ^{-1}x` falls outside `K`.
    pub membership_failures: usize,
    /// Neighbouring `γ'` with `γ'^{-1}x ∈ K` as well.
    pub multiplicity_failures: usize,
    /// Leading samples that also had their neighbours checked.
    pub multiplicity_samples: usize,
}

impl TilingReport {
    pub fn pass(&self) -> bool {
        self.membership_failures == 0 && self.multiplicity_failures == 0
    }
}

/// Neighbour checks are limited to this many leading samples.
pub const MULTIPLICITY_SAMPLES: usize = 500;

/// Samples `x` uniformly in `[−radius, radius]^n` and checks that the located
/// `γ` has `γ^{-1}x ∈ K`. For the first [`MULTIPLICITY_SAMPLES`] it also
/// checks that none of the `3^n − 1` index neighbours does.
pub fn tiling_check(
    lattice: &QuasiLattice,
    samples: usize,
    radius: f64,
    rng: &mut impl Rng,
) -> Result<TilingReport> {
    let n = lattice.dim();
    let multiplicity_samples = samples.min(MULTIPLICITY_SAMPLES);
    let mut membership_failures = 0;
    let mut multiplicity_failures = 0;
    let offsets: Vec<Vec<i64>> = (0..3usize.pow(n as u32))
        .map(|mut f| {
            (0..n)
                .map(|_| {
                    let v = (f % 3) as i64 - 1;
                    f /= 3;
                    v
                })
                .collect()
        })
        .filter(|o: &Vec<i64>| o.iter().any(|&v| v != 0))
        .collect();
    for i in 0..samples {
        let x = QuotientPoint::new(
            lattice.group,
            (0..n).map(|_| rng.gen_range(-radius..radius)).collect(),
        )?;
        let (k, _) = lattice.locate(&x)?;
        if !lattice.in_fundamental_domain(&lattice.point(&k)?.inverse().multiply(&x)?) {
            membership_failures += 1;
        }
        if i >= multiplicity_samples {
            continue;
        }
        for o in &offsets {
            let kk: Vec<i64> = k.iter().zip(o).map(|(a, b)| a + b).collect();
            if lattice.in_fundamental_domain(&lattice.point(&kk)?.inverse().multiply(&x)?) {
                multiplicity_failures += 1;
            }
        }
    }
    Ok(TilingReport {
        group: lattice.group,
        samples,
        membership_failures,
        multiplicity_failures,
        multiplicity_samples,
    })
}

/// `#{k : c^{-1}γ_k ∈ [−r, r)^n}` over the whole quasi-lattice.
///
/// Coordinate `i` of `c^{-1}γ_k` depends only on `k_i, …, k_{n−1}` and moves
/// by `ε` per unit of `k_i`, so the admissible `k_i` form an interval once the
/// later indices are fixed. Every leaf is re-checked against the full box.
fn count_in_box(lattice: &QuasiLattice, cinv: &QuotientPoint, r: f64) -> Result<usize> {
    fn walk(l: &QuasiLattice, prefix: &QuotientPoint, i: usize, r: f64) -> Result<usize> {
        let eps = l.epsilon;
        let v0 = prefix.coords()[i];
        let lo = ((-r - v0) / eps).ceil() as i64;
        let hi = ((r - v0) / eps).ceil() as i64;
        let mut count = 0;
        for k in lo..hi {
            let next = prefix.multiply(&l.axis(i, k as f64 * eps))?;
            if i == 0 {
                if next.coords().iter().all(|&v| -r <= v && v < r) {
                    count += 1;
                }
            } else {
                count += walk(l, &next, i - 1, r)?;
            }
        }
        Ok(count)
    }
    walk(lattice, cinv, lattice.dim() - 1, r)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub radii: Vec<f64>,
    /// `min_c #(Γ ∩ cQ_r) / |Q_r|` per radius.
    pub min_density: Vec<f64>,
    pub max_density: Vec<f64>,
    /// The infimum at the largest radius.
    pub density: f64,
    pub centers: usize,
}

/// Lower density with group-translated boxes `cQ_r`, `Q_r = [−r, r)^n`,
/// over random centers `c ∈ [−center_radius, center_radius]^n`. Counts run
/// over the untruncated quasi-lattice, so the index ranges play no role.
pub fn beurling_density(
    lattice: &QuasiLattice,
    radii: &[f64],
    centers: usize,
    center_radius: f64,
    rng: &mut impl Rng,
) -> Result<DensityReport> {
    if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0) || !r.is_finite()) || centers == 0 {
        return Err(Error::InvalidParameter {
            name: "radii",
            reason: "need positive radii and at least one center".into(),
        });
    }
    let n = lattice.dim();
    let mut min_density = vec![f64::INFINITY; radii.len()];
    let mut max_density = vec![0.0f64; radii.len()];
    for _ in 0..centers {
        let c = QuotientPoint::new(
            lattice.group,
            (0..n)
                .map(|_| rng.gen_range(-center_radius..=center_radius))
                .collect(),
        )?;
        let cinv = c.inverse();
        for (j, &r) in radii.iter().enumerate() {
            let dens = count_in_box(lattice, &cinv, r)? as f64 / (2.0 * r).powi(n as i32);
            min_density[j] = min_density[j].min(dens);
            max_density[j] = max_density[j].max(dens);
        }
    }
    let largest = radii
        .iter()
        .enumerate()
        .fold(0, |best, (j, r)| if *r > radii[best] { j } else { best });
    Ok(DensityReport {
        radii: radii.to_vec(),
        density: min_density[largest],
        min_density,
        max_density,
        centers,
    })
}

/// Coherent system `{π(γ)g : γ ∈ Γ}` with a Hermite test space of total
/// degree below `test_degree`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSystem {
    pub rep: RepSpec,
    pub window: GeneralizedGaussian,
    pub lattice: QuasiLattice,
    pub test_degree: usize,
}

/// Phase-space radius of the Hermite functions of degree below `k`.
pub fn hermite_radius(k: usize) -> f64 {
    ((2 * k + 1) as f64 / (2.0 * PI)).sqrt()
}

impl FrameSystem {
    pub fn new(
        rep: RepSpec,
        window: GeneralizedGaussian,
        lattice: QuasiLattice,
        test_degree: usize,
    ) -> Result<Self> {
        check_dim(rep.realization_dim(), window.dim())?;
        if rep.group() != lattice.group() {
            return Err(Error::GroupMismatch(
                rep.group().to_string(),
                lattice.group().to_string(),
            ));
        }
        if window.norm() == 0.0 {
            return Err(Error::InvalidParameter {
                name: "g",
                reason: "window must be non-zero".into(),
            });
        }
        if test_degree == 0 {
            return Err(Error::InvalidParameter {
                name: "test_degree",
                reason: "must be at least 1".into(),
            });
        }
        Ok(Self {
            rep,
            window,
            lattice,
            test_degree,
        })
    }

    /// Heisenberg system whose lattice covers the test space's phase-space
    /// disc plus `margin` in both position and frequency.
    pub fn heisenberg(
        rep: RepSpec,
        window: GeneralizedGaussian,
        epsilon: f64,
        test_degree: usize,
        margin: f64,
    ) -> Result<Self> {
        if !matches!(rep.group(), Group::Heisenberg(_)) {
            return Err(Error::UnsupportedGroup(
                "automatic lattice range needs a Heisenberg group",
            ));
        }
        let reach = hermite_radius(test_degree) + margin;
        let scale = 1.0f64.max(1.0 / rep.lambda().abs());
        let range = (reach * scale / epsilon).ceil().max(1.0) as usize;
        let lattice = QuasiLattice::new(rep.group(), epsilon, range)?;
        Self::new(rep, window, lattice, test_degree)
    }

    /// A one-dimensional grid with a dyadic step that resolves the test space
    /// and the lattice's frequency reach.
    pub fn suggested_grid(&self, margin: f64) -> Result<GridSpec> {
        let reach = hermite_radius(self.test_degree) + margin + 4.0;
        let h = 2f64.powi(-((2.0 * reach).log2().ceil() as i32));
        let n = ((2.0 * reach / h).log2().ceil() as u32).max(1);
        let points = 2usize.pow(n);
        GridSpec::new(self.window.dim(), points as f64 * h, points)
    }

    pub fn test_indices(&self) -> Vec<Vec<usize>> {
        multi_indices(self.window.dim(), self.test_degree)
    }
}

/// Multi-indices of total degree `< k`, graded then lexicographic.
pub fn multi_indices(d: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(d: usize, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() + 1 == d {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for v in (0..=left).rev() {
            prefix.push(v);
            rec(d, left - v, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for total in 0..k {
        rec(d, total, &mut Vec::new(), &mut out);
    }
    out
}

/// `⟨h_n, G⟩` for all test indices, from the generating function
/// `Σ h_n(t) z^n/√n! = 2^{d/4} exp(−π|t|² + 2√π z·t − z·z/2)`.
pub fn hermite_coefficients(
    g: &GeneralizedGaussian,
    indices: &[Vec<usize>],
) -> Result<Vec<Complex64>> {
    let d = g.dim();
    let q = DMatrix::<Complex64>::identity(d, d) + g.quad().matrix().map(|v| v.conj());
    let bbar = g.lin().map(|v| v.conj());
    let qinv = q
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("singular Hermite form".into()))?;
    let logdet = crate::linalg::log_det_right_half_plane(&q)?;
    let qb = &qinv * &bbar;
    let a0 = Complex64::new(0.25 * d as f64 * 2f64.ln(), 0.0) + g.log_amplitude().conj()
        - 0.5 * logdet
        + bbar.dot(&qb) / (4.0 * PI);
    let a1 = qb.map(|v| v / PI.sqrt());
    let a2 = qinv - DMatrix::<Complex64>::identity(d, d) * Complex64::new(0.5, 0.0);
    let lookup: HashMap<&[usize], usize> = indices
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_slice(), i))
        .collect();
    let mut c = vec![Complex64::new(0.0, 0.0); indices.len()];
    for (slot, n) in indices.iter().enumerate() {
        let Some(j) = n.iter().position(|&v| v > 0) else {
            c[slot] = a0.exp();
            continue;
        };
        let mut m = n.clone();
        m[j] -= 1;
        let parent = *lookup
            .get(m.as_slice())
            .ok_or_else(|| Error::Numerical("index set is not downward closed".into()))?;
        let mut acc = a1[j] * c[parent];
        for k in 0..d {
            if m[k] > 0 {
                let mut mm = m.clone();
                mm[k] -= 1;
                let grand = lookup[mm.as_slice()];
                acc += Complex64::new(2.0 * (m[k] as f64).sqrt(), 0.0) * a2[(j, k)] * c[grand];
            }
        }
        c[slot] = acc / (n[j] as f64).sqrt();
    }
    Ok(c)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Assembly {
    /// Columns from grid samples of `π(γ)g`.
    Grid(GridSpec),
    /// Columns from the Hermite generating function.
    Exact,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameBounds {
    pub a_est: f64,
    pub b_est: f64,
    pub lattice_points: usize,
    pub test_dim: usize,
    /// Largest column energy on the lattice shell over the largest overall.
    pub boundary_contamination: f64,
    /// `max |⟨h_m, h_n⟩_grid − δ_{mn}|`, zero for exact assembly.
    pub basis_defect: f64,
    pub method: &'static str,
}

impl FrameBounds {
    pub fn ratio(&self) -> f64 {
        if self.b_est > 0.0 {
            self.a_est / self.b_est
        } else {
            0.0
        }
    }
}

pub const CONTAMINATION_THRESHOLD: f64 = 1e-6;
const BASIS_THRESHOLD: f64 = 1e-8;

/// Sampled tensor Hermite basis on a grid, one row per index.
fn sampled_basis(grid: &GridSpec, indices: &[Vec<usize>], degree: usize) -> Vec<Vec<f64>> {
    let t: Vec<f64> = (0..grid.points()).map(|k| grid.node_1d(k)).collect();
    let h1 = hermite_functions(degree, &t);
    indices
        .iter()
        .map(|n| {
            (0..grid.len())
                .map(|flat| {
                    grid.multi_index(flat)
                        .iter()
                        .zip(n)
                        .map(|(&i, &ni)| h1[ni][i])
                        .product()
                })
                .collect()
        })
        .collect()
}

fn basis_defect(grid: &GridSpec, basis: &[Vec<f64>]) -> f64 {
    let h = grid.spacing().powi(grid.dim() as i32);
    let mut worst: f64 = 0.0;
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate().take(i + 1) {
            let ip: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() * h;
            worst = worst.max((ip - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    worst
}

/// Rows `C_γ = (⟨h_n, π(γ)g⟩)_n` for every lattice point, in index order.
fn coefficient_rows(
    system: &FrameSystem,
    assembly: &Assembly,
) -> Result<(Vec<Vec<Complex64>>, Vec<bool>, f64)> {
    let indices = system.test_indices();
    let lattice = &system.lattice;
    let ks = lattice.indices();
    let shell: Vec<bool> = ks.iter().map(|k| lattice.on_shell(k)).collect();
    let moved = |k: &Vec<i64>| -> Result<GeneralizedGaussian> {
        apply_rep(&system.rep, &lattice.point(k)?.section(), &system.window)
    };
    match assembly {
        Assembly::Exact => {
            let rows = ks
                .par_iter()
                .map(|k| hermite_coefficients(&moved(k)?, &indices))
                .collect::<Result<Vec<_>>>()?;
            Ok((rows, shell, 0.0))
        }
        Assembly::Grid(grid) => {
            check_dim(system.window.dim(), grid.dim())?;
            let basis = sampled_basis(grid, &indices, system.test_degree);
            let defect = basis_defect(grid, &basis);
            let h = grid.spacing().powi(grid.dim() as i32);
            let rows = ks
                .par_iter()
                .map(|k| {
                    let s = sample(&moved(k)?, grid)?;
                    Ok(basis
                        .iter()
                        .map(|row| {
                            row.iter()
                                .zip(s.values())
                                .map(|(b, v)| v.conj() * *b)
                                .sum::<Complex64>()
                                * h
                        })
                        .collect())
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((rows, shell, defect))
        }
    }
}

/// The test-space frame matrix `M = C^*C`.
pub fn frame_matrix(system: &FrameSystem, assembly: &Assembly) -> Result<DMatrix<Complex64>> {
    Ok(frame_matrix_with_diagnostics(system, assembly)?.0)
}

fn frame_matrix_with_diagnostics(
    system: &FrameSystem,
    assembly: &Assembly,
) -> Result<(DMatrix<Complex64>, usize, f64, f64)> {
    let (rows, shell, defect) = coefficient_rows(system, assembly)?;
    let t = rows.first().map_or(0, Vec::len);
    let c = DMatrix::from_fn(rows.len(), t, |i, j| rows[i][j]);
    let m = c.adjoint() * &c;
    let energy: Vec<f64> = rows
        .iter()
        .map(|r| r.iter().map(|v| v.norm_sqr()).sum())
        .collect();
    let max_all = energy.iter().copied().fold(0.0, f64::max);
    let max_shell = energy
        .iter()
        .zip(&shell)
        .filter(|(_, s)| **s)
        .map(|(e, _)| *e)
        .fold(0.0, f64::max);
    let contamination = if max_all > 0.0 {
        max_shell / max_all
    } else {
        0.0
    };
    Ok((m, rows.len(), contamination, defect))
}

/// Extreme eigenvalues of the frame matrix on the test space.
pub fn frame_bounds_with(system: &FrameSystem, assembly: &Assembly) -> Result<FrameBounds> {
    let (m, points, contamination, defect) = frame_matrix_with_diagnostics(system, assembly)?;
    if defect > BASIS_THRESHOLD {
        return Err(Error::TruncationTooSmall(format!(
            "grid does not resolve the test space (defect {defect:.2e})"
        )));
    }
    if contamination > CONTAMINATION_THRESHOLD {
        return Err(Error::TruncationTooSmall(format!(
            "lattice shell carries {contamination:.2e} of the peak column energy"
        )));
    }
    let test_dim = m.nrows();
    let eig = m.symmetric_eigen();
    let b = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max)
        .max(0.0);
    let a = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
        .clamp(0.0, b);
    Ok(FrameBounds {
        a_est: a,
        b_est: b,
        lattice_points: points,
        test_dim,
        boundary_contamination: contamination,
        basis_defect: defect,
        method: match assembly {
            Assembly::Grid(_) => "grid",
            Assembly::Exact => "exact",
        },
    })
}

/// Grid-sampled frame bounds.
pub fn frame_bounds_estimate(system: &FrameSystem, grid: &GridSpec) -> Result<FrameBounds> {
    frame_bounds_with(system, &Assembly::Grid(*grid))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensitySweepConfig {
    /// Test-space degrees, smallest first; the verdict uses the last.
    pub degrees: Vec<usize>,
    pub margin: f64,
    /// Lattice range for non-Heisenberg groups.
    pub range: usize,
    pub density_radii_in_epsilon: Vec<f64>,
    pub density_centers: usize,
    pub assembly_grid: bool,
}

impl Default for DensitySweepConfig {
    fn default() -> Self {
        Self {
            degrees: vec![50, 100],
            margin: 3.0,
            range: 3,
            density_radii_in_epsilon: vec![5.0, 10.0, 20.0],
            density_centers: 16,
            assembly_grid: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityRow {
    pub epsilon: f64,
    pub density: f64,
    pub formal_dimension: f64,
    /// `(degree, A_est, B_est)` per truncation.
    pub bounds: Vec<(usize, f64, f64)>,
    pub ratio: f64,
    pub below_threshold: bool,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityCheck {
    pub rows: Vec<DensityRow>,
    pub pass: bool,
}

/// For each `ε` pairs the measured density with the frame-bound ratio; every
/// row with density below `0.95·d_π` must have `A/B < 0.01`.
pub fn density_theorem_check(
    rep: &RepSpec,
    g: &GeneralizedGaussian,
    epsilons: &[f64],
    config: &DensitySweepConfig,
    rng: &mut impl Rng,
) -> Result<DensityCheck> {
    if config.degrees.is_empty() {
        return Err(Error::InvalidParameter {
            name: "degrees",
            reason: "need at least one test degree".into(),
        });
    }
    let fd = formal_dimension(rep, g, None)?.value;
    let heisenberg = matches!(rep.group(), Group::Heisenberg(_));
    let mut rows = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let radii: Vec<f64> = config
            .density_radii_in_epsilon
            .iter()
            .map(|r| r * eps)
            .collect();
        let density = beurling_density(
            &QuasiLattice::new(rep.group(), eps, 1)?,
            &radii,
            config.density_centers,
            eps,
            rng,
        )?
        .density;
        let mut bounds = Vec::with_capacity(config.degrees.len());
        for &k in &config.degrees {
            let system = if heisenberg {
                FrameSystem::heisenberg(*rep, g.clone(), eps, k, config.margin)?
            } else {
                FrameSystem::new(
                    *rep,
                    g.clone(),
                    QuasiLattice::new(rep.group(), eps, config.range)?,
                    k,
                )?
            };
            let assembly = if config.assembly_grid && g.dim() == 1 {
                Assembly::Grid(system.suggested_grid(config.margin)?)
            } else {
                Assembly::Exact
            };
            let fb = if heisenberg {
                frame_bounds_with(&system, &assembly)?
            } else {
                // exploratory: no truncation verdict outside the Heisenberg case
                let (m, _, _, _) = frame_matrix_with_diagnostics(&system, &assembly)?;
                let test_dim = m.nrows();
                let e = m.symmetric_eigen().eigenvalues;
                let b = e.iter().copied().fold(0.0, f64::max);
                let a = e
                    .iter()
                    .copied()
                    .fold(f64::INFINITY, f64::min)
                    .clamp(0.0, b);
                FrameBounds {
                    a_est: a,
                    b_est: b,
                    lattice_points: 0,
                    test_dim,
                    boundary_contamination: 0.0,
                    basis_defect: 0.0,
                    method: "exact",
                }
            };
            bounds.push((k, fb.a_est, fb.b_est));
        }
        let &(_, a, b) = bounds.last().expect("non-empty");
        let ratio = if b > 0.0 { a / b } else { 0.0 };
        let below = density < 0.95 * fd;
        rows.push(DensityRow {
            epsilon: eps,
            density,
            formal_dimension: fd,
            bounds,
            ratio,
            below_threshold: below,
            consistent: !below || ratio < 0.01,
        });
    }
    let pass = rows.iter().all(|r| r.consistent);
    Ok(DensityCheck { rows, pass })
}
