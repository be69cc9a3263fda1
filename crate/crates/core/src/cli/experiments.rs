//! One runner per experiment kind. Each returns CSV rows plus JSON metrics.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use super::config::{ExperimentConfig, ExperimentKind, ScanFamily};
use crate::coorbit::{
    coorbit_norm, family_scan, formal_dimension, geometric_grid, modulation_norm,
    weight_pullback_g616, NormSpec, OrbitCurve, QuadBox, ScanSpace, ScanTarget, WeightSpec,
};
use crate::error::{Error, Result};
use crate::frames::{
    beurling_density, density_theorem_check, tiling_check, DensitySweepConfig, QuasiLattice,
};
use crate::gaussian::{
    chirp_mp_norm, chirp_stft_modulus, coefficient_distance, cross_chirp, delta_matrix,
    random_gaussian, stft_closed, ComplexSymMatrix, GeneralizedGaussian, PhaseSpacePoint,
};
use crate::groups::{Group, GroupElement};
use crate::numerics::{dft_stft_at_shifts, sample, GridSpec};
use crate::representations::{apply_rep, RepSpec};

/// Tabular output plus the JSON summary fields.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub metrics: Map<String, Value>,
    pub pass: bool,
}

impl Outcome {
    fn new(header: Vec<&'static str>) -> Self {
        Self {
            header,
            rows: vec![],
            metrics: Map::new(),
            pass: true,
        }
    }

    fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    fn metric(&mut self, key: &str, v: impl Into<Value>) {
        self.metrics.insert(key.to_string(), v.into());
    }

    /// Records a tolerance check and folds it into `pass`.
    fn check(&mut self, key: &str, value: f64, tolerance: f64) -> bool {
        let ok = value.abs() <= tolerance;
        self.metric(
            key,
            json!({ "value": value, "tolerance": tolerance, "pass": ok }),
        );
        self.pass &= ok;
        ok
    }

    pub fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        // writing to memory cannot fail; rows match the header by construction
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("cells are UTF-8")
    }
}

trait Cell {
    fn cell(&self) -> String;
}

impl Cell for f64 {
    /// Plain decimals for moderate magnitudes, scientific otherwise.
    fn cell(&self) -> String {
        let a = self.abs();
        if a == 0.0 || (1e-4..1e6).contains(&a) || !a.is_finite() {
            self.to_string()
        } else {
            format!("{self:e}")
        }
    }
}

macro_rules! display_cell {
    ($($t:ty),*) => {$(impl Cell for $t {
        fn cell(&self) -> String {
            self.to_string()
        }
    })*};
}

display_cell!(usize, i32, bool, &str, String, Group);

fn s(x: impl Cell) -> String {
    x.cell()
}

pub fn run_experiment(c: &ExperimentConfig) -> Result<Outcome> {
    match c.kind {
        ExperimentKind::VerifyGaussian => verify_gaussian(c),
        ExperimentKind::RepSelftest => rep_selftest(c),
        ExperimentKind::OrbitScan => orbit_scan(c),
        ExperimentKind::CoorbitNorm => coorbit_norms(c),
        ExperimentKind::FrameSweep => frame_sweep(c),
        ExperimentKind::Density => density(c),
    }
}

fn rng_for(c: &ExperimentConfig) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(c.seed())
}

fn random_chirp(rng: &mut impl Rng, d: usize, r: f64) -> ComplexSymMatrix {
    let m = nalgebra::DMatrix::<f64>::from_fn(d, d, |_, _| rng.gen_range(-r..r));
    ComplexSymMatrix::try_real(&((&m + m.transpose()) * 0.5)).expect("symmetric by construction")
}

fn shifted_square_det(c: &ComplexSymMatrix) -> f64 {
    let cr = c.real_part();
    let d = cr.nrows();
    (nalgebra::DMatrix::<f64>::identity(d, d) * 4.0 + &cr * &cr).determinant()
}

/// CSV: `check,d,index,computed,reference,abs_error`.
fn verify_gaussian(c: &ExperimentConfig) -> Result<Outcome> {
    let mut rng = rng_for(c);
    let mut out = Outcome::new(vec![
        "check",
        "d",
        "index",
        "computed",
        "reference",
        "abs_error",
    ]);

    let mut worst_closed: f64 = 0.0;
    for d in [1usize, 2] {
        let phi = GeneralizedGaussian::standard(d);
        for i in 0..c.samples {
            let ch = random_chirp(&mut rng, d, 4.0);
            let z: Vec<f64> = (0..2 * d).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let (x, xi) = z.split_at(d);
            let f = phi.chirp(&ch)?;
            let v = stft_closed(&f, &phi, &PhaseSpacePoint::new(x.to_vec(), xi.to_vec())?)?.norm();
            let zx: Vec<f64> = xi.iter().chain(x).copied().collect();
            let r = chirp_stft_modulus(&ch, &zx)?;
            worst_closed = worst_closed.max((v - r).abs());
            out.row(vec![
                s("closed-form"),
                s(d),
                s(i),
                s(v),
                s(r),
                s((v - r).abs()),
            ]);
        }
    }
    out.check("closed_form_max_abs_error", worst_closed, 1e-10);

    // DFT oracle: d = 1 on the configured grid, d = 2 on the default grid
    let mut worst_dft: f64 = 0.0;
    let mut compared = 0usize;
    let mut cases: Vec<(GridSpec, ComplexSymMatrix)> = [-3.0, 0.5, 2.0]
        .iter()
        .map(|&u| {
            (
                c.grid_spec(),
                ComplexSymMatrix::scalar(1, Complex64::new(u, 0.0)),
            )
        })
        .collect();
    cases.push((
        GridSpec::default_for_dim(2)?,
        ComplexSymMatrix::real_from_rows(2, &[1.0, 0.5, 0.5, -0.8])?,
    ));
    for (case, (grid, ch)) in cases.iter().enumerate() {
        let d = grid.dim();
        let phi = GeneralizedGaussian::standard(d);
        let f = sample(&phi.chirp(ch)?, grid)?;
        let g = sample(&phi, grid)?;
        let h = grid.spacing();
        let reach = (2.0 / h).floor() as i64;
        let shifts: Vec<Vec<i64>> = if d == 1 {
            (-reach..=reach).step_by(4).map(|j| vec![j]).collect()
        } else {
            vec![
                vec![0, 0],
                vec![reach / 2, -reach / 3],
                vec![-reach, reach / 2],
            ]
        };
        let table = dft_stft_at_shifts(&f, &g, &shifts)?;
        let mut case_worst: f64 = 0.0;
        for si in 0..shifts.len() {
            let x = table.shift_position(si);
            for (m, v) in table.values[si].iter().enumerate() {
                let xi = table.frequency(m);
                if xi.iter().any(|w| w.abs() > 3.0) {
                    continue;
                }
                let zx: Vec<f64> = xi.iter().chain(&x).copied().collect();
                compared += 1;
                case_worst = case_worst.max((v.norm() - chirp_stft_modulus(ch, &zx)?).abs());
            }
        }
        worst_dft = worst_dft.max(case_worst);
        out.row(vec![
            s("dft-oracle"),
            s(d),
            s(case),
            s(""),
            s(""),
            s(case_worst),
        ]);
    }
    out.metric("dft_points_compared", compared);
    out.check("dft_oracle_max_abs_error", worst_dft, 1e-6);
    out.pass &= compared > 0;

    let mut worst_det: f64 = 0.0;
    for i in 0..100 {
        let d = 1 + i % 3;
        let ch = random_chirp(&mut rng, d, 4.0);
        let det_delta = delta_matrix(&ch)?.real_part().determinant();
        let prod = det_delta * shifted_square_det(&ch);
        worst_det = worst_det.max((prod - 1.0).abs());
        out.row(vec![
            s("determinant"),
            s(d),
            s(i),
            s(prod),
            s(1.0),
            s((prod - 1.0).abs()),
        ]);
    }
    out.check("determinant_identity_max_abs_error", worst_det, 1e-10);
    Ok(out)
}

fn random_element(rng: &mut impl Rng, g: Group, r: f64) -> Result<GroupElement> {
    GroupElement::new(
        g,
        (0..g.total_dim()).map(|_| rng.gen_range(-r..r)).collect(),
    )
}

/// `(group, λ, μ)` for every configured pair the group accepts.
fn valid_reps(c: &ExperimentConfig) -> Vec<RepSpec> {
    c.rep
        .groups()
        .into_iter()
        .flat_map(|g| {
            c.rep
                .params()
                .into_iter()
                .filter_map(move |(l, m)| RepSpec::new(g, l, m).ok())
        })
        .collect()
}

/// CSV: `group,lambda,mu,homomorphism_error,projective_error,unitarity_error`,
/// the worst case over the sampled pairs.
fn rep_selftest(c: &ExperimentConfig) -> Result<Outcome> {
    let mut rng = rng_for(c);
    let mut out = Outcome::new(vec![
        "group",
        "lambda",
        "mu",
        "homomorphism_error",
        "projective_error",
        "unitarity_error",
    ]);
    let (mut hom, mut proj, mut unit) = (0.0f64, 0.0f64, 0.0f64);
    for rep in valid_reps(c) {
        let full = rep.with_omit_phase(false);
        let reduced = rep.with_omit_phase(true);
        let d = rep.realization_dim();
        let (mut h, mut p, mut u) = (0.0f64, 0.0f64, 0.0f64);
        for _ in 0..c.samples {
            let a = random_element(&mut rng, rep.group(), 1.5)?;
            let b = random_element(&mut rng, rep.group(), 1.5)?;
            let g = random_gaussian(&mut rng, d);
            let ab = a.multiply(&b)?;
            let lhs = apply_rep(&full, &a, &apply_rep(&full, &b, &g)?)?;
            let rhs = apply_rep(&full, &ab, &g)?;
            h = h.max(coefficient_distance(&lhs, &rhs));
            // without the central phase the identity holds up to a unimodular factor
            let lhs = apply_rep(&reduced, &a, &apply_rep(&reduced, &b, &g)?)?;
            let rhs = apply_rep(&reduced, &ab, &g)?;
            let ph = rhs.amplitude() / lhs.amplitude();
            p = p.max(coefficient_distance(&lhs.scale(ph / ph.norm())?, &rhs));
            u = u.max((apply_rep(&full, &a, &g)?.norm() - g.norm()).abs() / g.norm());
        }
        out.row(vec![
            s(rep.group()),
            s(rep.lambda()),
            s(rep.mu()),
            s(h),
            s(p),
            s(u),
        ]);
        hom = hom.max(h);
        proj = proj.max(p);
        unit = unit.max(u);
    }
    out.metric("pairs_per_representation", c.samples);
    out.check("homomorphism_max_error", hom, 1e-10);
    out.check("projective_homomorphism_max_error", proj, 1e-10);
    out.check("unitarity_max_error", unit, 1e-10);
    Ok(out)
}

type Family = Box<dyn Fn(f64) -> Result<GeneralizedGaussian> + Sync>;
type Reference = Box<dyn Fn(f64) -> Result<f64>>;

struct Expectation {
    tag: String,
    p: f64,
    kind: &'static str,
    expected: f64,
    tolerance: f64,
}

/// CSV: `family,tag,p,u,value,reference,tail_ratio`. Fitted slopes go to the
/// JSON summary.
fn orbit_scan(c: &ExperimentConfig) -> Result<Outcome> {
    let u_grid = geometric_grid(c.scan.u_min, c.scan.u_max, c.scan.points)?;
    let tol = c.scan.tolerance;
    let mut out = Outcome::new(vec![
        "family",
        "tag",
        "p",
        "u",
        "value",
        "reference",
        "tail_ratio",
    ]);
    let mut fits = Vec::new();
    let spec_for = |p: f64| -> Result<NormSpec> {
        let spec = match c.norm.q {
            Some(q) => NormSpec::mixed(p, q)?,
            None => NormSpec::new(p)?,
        };
        Ok(spec.with_method(c.norm.method))
    };
    // p = 2 carries the tighter flatness tolerance
    let slope_tol = |p: f64| if p == 2.0 { tol.min(0.005) } else { tol };

    for &p in &c.norm.p {
        let spec = spec_for(p)?;
        let mut targets = Vec::new();
        let mut expect = Vec::new();
        let (family, reference): (Family, Option<Reference>) = match c.scan.family {
            ScanFamily::Chirp | ScanFamily::CrossChirp => {
                let d = if c.scan.family == ScanFamily::Chirp {
                    1
                } else {
                    2
                };
                let chirp = move |u: f64| {
                    if d == 1 {
                        ComplexSymMatrix::scalar(1, Complex64::new(u, 0.0))
                    } else {
                        cross_chirp(u)
                    }
                };
                let tag = format!("mp_p{p}");
                targets.push(ScanTarget {
                    tag: tag.clone(),
                    space: ScanSpace::Modulation,
                    window: GeneralizedGaussian::standard(d),
                    spec,
                    growth: vec![],
                });
                expect.push(Expectation {
                    tag,
                    p,
                    kind: "slope_log_u",
                    expected: d as f64 * (1.0 / p - 0.5),
                    tolerance: slope_tol(p),
                });
                let phi = GeneralizedGaussian::standard(d);
                (
                    Box::new(move |u| phi.chirp(&chirp(u))),
                    if c.norm.q.is_none() && c.norm.method == crate::coorbit::Method::Hybrid {
                        Some(Box::new(move |u| chirp_mp_norm(&chirp(u), p)))
                    } else {
                        None
                    },
                )
            }
            ScanFamily::Curve => {
                let group = c.rep.groups()[0];
                let (lambda, mu) = c.rep.params()[0];
                let rep = RepSpec::new(group, lambda, mu)?;
                let d = rep.realization_dim();
                let phi = GeneralizedGaussian::standard(d);
                let curve = OrbitCurve::new(rep, c.scan.axis)?;
                let mp = format!("mp_p{p}");
                targets.push(ScanTarget {
                    tag: mp.clone(),
                    space: ScanSpace::Modulation,
                    window: phi.clone(),
                    spec: spec.clone(),
                    growth: vec![],
                });
                match (group, c.scan.axis) {
                        (Group::G53, 3) => {
                            expect.push(Expectation { tag: mp, p, kind: "slope_log_u", expected: 1.0 / p - 0.5, tolerance: slope_tol(p) });
                            let own = format!("co_g5_3_p{p}");
                            targets.push(ScanTarget {
                                tag: own.clone(),
                                space: ScanSpace::Coorbit(rep),
                                window: phi.clone(),
                                spec: spec.clone(),
                                growth: vec![(2, 1.0)],
                            });
                            expect.push(Expectation { tag: own, p, kind: "relative_spread", expected: 0.0, tolerance: 0.01 });
                            let other = format!("co_g6_19_p{p}");
                            targets.push(ScanTarget {
                                tag: other.clone(),
                                space: ScanSpace::Coorbit(RepSpec::new(Group::G619, 1.0, 1.0)?),
                                window: phi.clone(),
                                spec: spec.clone(),
                                growth: vec![],
                            });
                            expect.push(Expectation { tag: other, p, kind: "slope_log_1pu2", expected: 0.5 / p - 0.25, tolerance: slope_tol(p) });
                        }
                        (Group::DyninFolland, 3) => {
                            expect.push(Expectation { tag: mp, p, kind: "slope_log_u", expected: 2.0 / p - 1.0, tolerance: tol.max(0.03) });
                        }
                        (g, a) => {
                            return Err(Error::InvalidParameter {
                                name: "scan",
                                reason: format!("no reference exponent for the {g} curve along axis {a}; use g5_3 or dynin_folland with axis 3"),
                            })
                        }
                    }
                (Box::new(move |u| curve.apply(u, &phi)), None)
            }
        };
        let scan = family_scan(&*family, &targets, &u_grid)?;
        for r in &scan.rows {
            let reference = match &reference {
                Some(f) => s(f(r.u)?),
                None => String::new(),
            };
            out.row(vec![
                s(c.scan.family.name()),
                r.tag.clone(),
                s(p),
                s(r.u),
                s(r.value),
                reference,
                s(r.tail_ratio),
            ]);
        }
        if let Some(f) = &reference {
            let worst = scan
                .rows
                .iter()
                .map(|r| Ok((r.value / f(r.u)? - 1.0).abs()))
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            out.check(&format!("closed_form_rel_error_p{p}"), worst, 1e-6);
        }
        for e in expect {
            let fit = scan.fit(&e.tag).expect("every target is fitted");
            let measured = match e.kind {
                "slope_log_u" => fit.slope_log_u,
                "slope_log_1pu2" => fit.slope_log_1pu2,
                _ => {
                    let v = scan.values(&e.tag);
                    let (lo, hi) = v
                        .iter()
                        .fold((f64::INFINITY, 0.0f64), |a, x| (a.0.min(x.1), a.1.max(x.1)));
                    hi / lo - 1.0
                }
            };
            let ok = (measured - e.expected).abs() <= e.tolerance;
            out.pass &= ok;
            fits.push(json!({
                "tag": e.tag, "p": e.p, "quantity": e.kind, "measured": measured, "expected": e.expected,
                "tolerance": e.tolerance, "slope_log_u": fit.slope_log_u, "slope_log_1pu2": fit.slope_log_1pu2, "pass": ok,
            }));
        }
        let warnings = scan.rows.iter().filter(|r| r.tail_warning).count();
        out.metric(&format!("tail_warnings_p{p}"), warnings);
    }
    out.metric("fits", Value::Array(fits));
    Ok(out)
}

fn weight(c: &ExperimentConfig) -> Result<WeightSpec> {
    if c.norm.weight == 0.0 {
        return Ok(WeightSpec::unit());
    }
    match &c.norm.weight_coords {
        Some(coords) => WeightSpec::on_coords(c.norm.weight, coords.clone()),
        None => WeightSpec::polynomial(c.norm.weight),
    }
}

/// CSV: `check,group,lambda,mu,p,sample,value,reference,rel_error`.
///
/// `collapse` compares the `p = 2` norm with `‖f‖₂‖g‖₂ d_π^{−1/2}` on the
/// default box. `g616-reduction` compares the `G_{6,16}` norm with the
/// pulled-back modulation norm on the configured box and weight.
fn coorbit_norms(c: &ExperimentConfig) -> Result<Outcome> {
    let mut rng = rng_for(c);
    let mut out = Outcome::new(vec![
        "check",
        "group",
        "lambda",
        "mu",
        "p",
        "sample",
        "value",
        "reference",
        "rel_error",
    ]);
    let mut worst_collapse: f64 = 0.0;
    for rep in valid_reps(c) {
        let d = rep.realization_dim();
        for i in 0..c.samples {
            let f = random_gaussian(&mut rng, d);
            let g = random_gaussian(&mut rng, d);
            let v = coorbit_norm(&rep, &f, &g, &NormSpec::new(2.0)?)?.value;
            let exact = f.norm() * g.norm() / rep.formal_dimension_exact().sqrt();
            let e = (v / exact - 1.0).abs();
            worst_collapse = worst_collapse.max(e);
            out.row(vec![
                s("collapse"),
                s(rep.group()),
                s(rep.lambda()),
                s(rep.mu()),
                s(2),
                s(i),
                s(v),
                s(exact),
                s(e),
            ]);
        }
    }
    out.check("collapse_max_rel_error", worst_collapse, 1e-3);

    if c.rep.groups().contains(&Group::G616) {
        let m = weight(c)?;
        let domain = QuadBox::symmetric(4, c.norm.half_width, c.norm.step)?;
        let f = random_gaussian(&mut rng, 2);
        let g = GeneralizedGaussian::standard(2);
        let mut worst: f64 = 0.0;
        for (lambda, mu) in c.rep.params() {
            let rep = RepSpec::new(Group::G616, lambda, mu)?;
            let pulled = weight_pullback_g616(&m, lambda, mu)?;
            for &p in &c.norm.p {
                let spec = NormSpec::new(p)?
                    .with_box(domain.clone())
                    .with_method(c.norm.method);
                let v = coorbit_norm(&rep, &f, &g, &spec.clone().with_weight(m.clone()))?.value;
                let reference = lambda.abs().powf(-2.0 / p)
                    * modulation_norm(&f, &g, &spec.with_weight(pulled.clone()))?.value;
                let e = (v / reference - 1.0).abs();
                worst = worst.max(e);
                out.row(vec![
                    s("g616-reduction"),
                    s(Group::G616),
                    s(lambda),
                    s(mu),
                    s(p),
                    s(0),
                    s(v),
                    s(reference),
                    s(e),
                ]);
            }
        }
        out.metric("weight_exponent", c.norm.weight);
        out.check("g616_reduction_max_rel_error", worst, 1e-4);
    }
    Ok(out)
}

/// CSV: `group,lambda,epsilon,density,formal_dimension,degree,a_est,b_est,ratio,below_threshold,consistent`.
fn frame_sweep(c: &ExperimentConfig) -> Result<Outcome> {
    let mut rng = rng_for(c);
    let mut out = Outcome::new(vec![
        "group",
        "lambda",
        "epsilon",
        "density",
        "formal_dimension",
        "degree",
        "a_est",
        "b_est",
        "ratio",
        "below_threshold",
        "consistent",
    ]);
    let config = DensitySweepConfig {
        degrees: c.frames.degrees.clone(),
        margin: c.frames.margin,
        range: c.frames.range,
        density_radii_in_epsilon: c.frames.density_radii.clone(),
        density_centers: c.frames.density_centers,
        assembly_grid: true,
    };
    let mut worst_fd: f64 = 0.0;
    let mut all_consistent = true;
    let mut heisenberg_rows = 0;
    for rep in valid_reps(c) {
        let phi = GeneralizedGaussian::standard(rep.realization_dim());
        let fd = formal_dimension(&rep, &phi, None)?;
        let exact = rep.formal_dimension_exact();
        worst_fd = worst_fd.max((fd.value - exact).abs() / exact.max(1.0));
        let check = density_theorem_check(&rep, &phi, &c.frames.epsilons, &config, &mut rng)?;
        let heisenberg = matches!(rep.group(), Group::Heisenberg(_));
        for r in &check.rows {
            for &(k, a, b) in &r.bounds {
                out.row(vec![
                    s(rep.group()),
                    s(rep.lambda()),
                    s(r.epsilon),
                    s(r.density),
                    s(r.formal_dimension),
                    s(k),
                    s(a),
                    s(b),
                    s(if b > 0.0 { a / b } else { 0.0 }),
                    s(r.below_threshold),
                    s(r.consistent),
                ]);
            }
        }
        // only the Heisenberg sweep has a truncation verdict
        if heisenberg {
            heisenberg_rows += check.rows.len();
            all_consistent &= check.pass;
        }
    }
    out.check("formal_dimension_max_error", worst_fd, 1e-3);
    out.metric("heisenberg_rows", heisenberg_rows);
    out.metric("density_theorem_consistent", all_consistent);
    out.pass &= all_consistent;
    Ok(out)
}

/// CSV: `group,epsilon,samples,membership_failures,multiplicity_failures,density,expected_density`.
fn density(c: &ExperimentConfig) -> Result<Outcome> {
    let mut rng = rng_for(c);
    let mut out = Outcome::new(vec![
        "group",
        "epsilon",
        "samples",
        "membership_failures",
        "multiplicity_failures",
        "density",
        "expected_density",
    ]);
    let mut membership = 0;
    let mut multiplicity = 0;
    let mut worst_density: f64 = 0.0;
    for group in c.rep.groups() {
        for &eps in &c.frames.epsilons {
            let lattice = QuasiLattice::new(group, eps, c.frames.range)?;
            let t = tiling_check(&lattice, c.frames.samples, c.frames.radius, &mut rng)?;
            membership += t.membership_failures;
            multiplicity += t.multiplicity_failures;
            let radii: Vec<f64> = c.frames.density_radii.iter().map(|r| r * eps).collect();
            let dens = beurling_density(&lattice, &radii, c.frames.density_centers, eps, &mut rng)?
                .density;
            let expected = eps.powi(-(group.quotient_dim() as i32));
            worst_density = worst_density.max((dens / expected - 1.0).abs());
            out.row(vec![
                s(group),
                s(eps),
                s(t.samples),
                s(t.membership_failures),
                s(t.multiplicity_failures),
                s(dens),
                s(expected),
            ]);
        }
    }
    out.check("membership_failures", membership as f64, 0.0);
    out.check("multiplicity_failures", multiplicity as f64, 0.0);
    // finite-radius counts are informative only
    out.metric("density_max_rel_deviation", worst_density);
    Ok(out)
}
