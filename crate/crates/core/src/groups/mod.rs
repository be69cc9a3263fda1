//! Coordinate realizations of the five nilpotent groups.
//!
//! Coordinates are those of the printed multiplication laws. In every group
//! the coordinate axes `s ↦ s·e_i` are the one-parameter subgroups `e^{sX_i}`.

use std::fmt;
use std::str::FromStr;

use crate::error::{check_dim, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Group {
    /// `ℍ_d` with coordinates `(x_1..x_d, y_1..y_d, z)`.
    Heisenberg(usize),
    /// `G_{6,16}` with coordinates `(x_1..x_6)`, center `(x_1, x_2)`.
    G616,
    /// `G_{5,3}` with coordinates `(x_1..x_5)`, center `x_1`.
    G53,
    /// `G_{6,19}` with coordinates `(x_1..x_6)`, center `(x_1, x_2)`.
    G619,
    /// Dynin-Folland group with coordinates `(z, y_1, y_2, y_3, x_1, x_2, x_3)`.
    DyninFolland,
}

pub const ALL_GROUPS: [Group; 5] = [
    Group::Heisenberg(1),
    Group::G616,
    Group::G53,
    Group::G619,
    Group::DyninFolland,
];

/// `[X_i, X_j] = coeff·X_k` on total coordinate indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub coeff: f64,
}

const fn br(i: usize, j: usize, k: usize, coeff: f64) -> Bracket {
    Bracket { i, j, k, coeff }
}

impl Group {
    pub fn heisenberg(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter {
                name: "d",
                reason: "Heisenberg dimension must be positive".into(),
            });
        }
        Ok(Group::Heisenberg(d))
    }

    pub fn total_dim(&self) -> usize {
        match self {
            Group::Heisenberg(d) => 2 * d + 1,
            Group::G616 | Group::G619 => 6,
            Group::G53 => 5,
            Group::DyninFolland => 7,
        }
    }

    pub fn center_dim(&self) -> usize {
        self.center_indices().len()
    }

    pub fn quotient_dim(&self) -> usize {
        self.total_dim() - self.center_dim()
    }

    pub fn center_indices(&self) -> Vec<usize> {
        match self {
            Group::Heisenberg(d) => vec![2 * d],
            Group::G616 | Group::G619 => vec![0, 1],
            Group::G53 | Group::DyninFolland => vec![0],
        }
    }

    /// Total coordinate indices of the quotient coordinates, in order.
    pub fn quotient_indices(&self) -> Vec<usize> {
        let center = self.center_indices();
        (0..self.total_dim())
            .filter(|i| !center.contains(i))
            .collect()
    }

    pub fn coordinate_labels(&self) -> Vec<String> {
        match self {
            Group::Heisenberg(d) => (1..=*d)
                .map(|i| format!("x{i}"))
                .chain((1..=*d).map(|i| format!("y{i}")))
                .chain(std::iter::once("z".to_string()))
                .collect(),
            Group::DyninFolland => ["z", "y1", "y2", "y3", "x1", "x2", "x3"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            _ => (1..=self.total_dim()).map(|i| format!("x{i}")).collect(),
        }
    }

    pub fn quotient_labels(&self) -> Vec<String> {
        let labels = self.coordinate_labels();
        self.quotient_indices()
            .into_iter()
            .map(|i| labels[i].clone())
            .collect()
    }

    /// The non-trivial brackets of the Lie algebra, one entry per pair.
    pub fn brackets(&self) -> Vec<Bracket> {
        match self {
            Group::Heisenberg(d) => (0..*d).map(|i| br(i, d + i, 2 * d, 1.0)).collect(),
            Group::G616 => vec![br(5, 4, 1, 1.0), br(5, 3, 0, 1.0), br(4, 2, 0, 1.0)],
            Group::G53 => vec![br(4, 3, 1, 1.0), br(4, 1, 0, 1.0), br(3, 2, 0, 1.0)],
            Group::G619 => vec![br(5, 4, 3, 1.0), br(5, 2, 0, 1.0), br(4, 3, 1, 1.0)],
            Group::DyninFolland => vec![
                br(6, 1, 0, 1.0),
                br(5, 2, 0, 1.0),
                br(4, 3, 0, 1.0),
                br(5, 3, 1, 0.5),
                br(6, 3, 2, -0.5),
                br(6, 5, 4, 1.0),
            ],
        }
    }

    /// Structure constant `c` with `[X_i, X_j] = Σ_k c_k X_k`.
    pub fn bracket_vector(&self, i: usize, j: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.total_dim()];
        for b in self.brackets() {
            if b.i == i && b.j == j {
                out[b.k] += b.coeff;
            } else if b.i == j && b.j == i {
                out[b.k] -= b.coeff;
            }
        }
        out
    }

    /// Multiplication law on raw coordinates.
    pub fn mul_coords(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        debug_assert_eq!(a.len(), self.total_dim());
        debug_assert_eq!(b.len(), self.total_dim());
        let mut c: Vec<f64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        match self {
            Group::Heisenberg(d) => {
                let d = *d;
                c[2 * d] += (0..d).map(|i| a[i] * b[d + i]).sum::<f64>();
            }
            Group::G616 => {
                c[0] += a[4] * b[2] + a[5] * b[3];
                c[1] += a[5] * b[4];
            }
            Group::G53 => {
                c[0] += a[3] * b[2] + a[4] * b[1] + 0.5 * a[4] * a[4] * b[3];
                c[1] += a[4] * b[3];
            }
            Group::G619 => {
                c[0] += a[5] * b[2];
                c[1] += a[4] * b[3] + a[4] * a[5] * b[4] + 0.5 * a[5] * b[4] * b[4];
                c[3] += a[5] * b[4];
            }
            Group::DyninFolland => {
                let (x1, x2, x3) = (a[4], a[5], a[6]);
                let (v1, v2, v3, u2) = (b[1], b[2], b[3], b[5]);
                c[0] += v1 * x3 + v2 * x2 + v3 * (x1 - 0.5 * x3 * x2);
                c[1] += 0.5 * v3 * x2;
                c[2] -= 0.5 * v3 * x3;
                c[4] += x3 * u2;
            }
        }
        c
    }

    /// Inverse on raw coordinates.
    pub fn inv_coords(&self, a: &[f64]) -> Vec<f64> {
        debug_assert_eq!(a.len(), self.total_dim());
        let mut c: Vec<f64> = a.iter().map(|x| -x).collect();
        match self {
            Group::Heisenberg(d) => {
                let d = *d;
                c[2 * d] += (0..d).map(|i| a[i] * a[d + i]).sum::<f64>();
            }
            Group::G616 => {
                c[0] += a[2] * a[4] + a[3] * a[5];
                c[1] += a[4] * a[5];
            }
            Group::G53 => {
                c[0] += a[2] * a[3] + a[1] * a[4] - 0.5 * a[3] * a[4] * a[4];
                c[1] += a[3] * a[4];
            }
            Group::G619 => {
                c[0] += a[2] * a[5];
                c[1] += a[3] * a[4] - 0.5 * a[4] * a[4] * a[5];
                c[3] += a[4] * a[5];
            }
            Group::DyninFolland => {
                let (y1, y2, y3, x1, x2, x3) = (a[1], a[2], a[3], a[4], a[5], a[6]);
                c[0] += y1 * x3 + y2 * x2 + y3 * x1 - 0.5 * y3 * x2 * x3;
                c[1] += 0.5 * y3 * x2;
                c[2] -= 0.5 * y3 * x3;
                c[4] += x2 * x3;
            }
        }
        c
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::Heisenberg(d) => write!(f, "heisenberg({d})"),
            Group::G616 => f.write_str("g6_16"),
            Group::G53 => f.write_str("g5_3"),
            Group::G619 => f.write_str("g6_19"),
            Group::DyninFolland => f.write_str("dynin_folland"),
        }
    }
}

impl FromStr for Group {
    type Err = Error;

    /// Accepts the display names, plus `heisenberg` for `heisenberg(1)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter {
            name: "group",
            reason: format!("unknown group `{s}`"),
        };
        match s.trim() {
            "heisenberg" => Ok(Group::Heisenberg(1)),
            "g6_16" => Ok(Group::G616),
            "g5_3" => Ok(Group::G53),
            "g6_19" => Ok(Group::G619),
            "dynin_folland" => Ok(Group::DyninFolland),
            other => {
                let d = other
                    .strip_prefix("heisenberg(")
                    .and_then(|r| r.strip_suffix(')'))
                    .and_then(|r| r.trim().parse::<usize>().ok())
                    .ok_or_else(bad)?;
                Group::heisenberg(d)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    group: Group,
    coords: Vec<f64>,
}

impl GroupElement {
    pub fn new(group: Group, coords: Vec<f64>) -> Result<Self> {
        check_dim(group.total_dim(), coords.len())?;
        Ok(Self { group, coords })
    }

    pub fn identity(group: Group) -> Self {
        Self {
            group,
            coords: vec![0.0; group.total_dim()],
        }
    }

    /// `e^{sX_i}` for total coordinate index `i`.
    pub fn exp_axis(group: Group, i: usize, s: f64) -> Result<Self> {
        if i >= group.total_dim() {
            return Err(Error::InvalidParameter {
                name: "axis",
                reason: format!("index {i} out of range for {group}"),
            });
        }
        let mut coords = vec![0.0; group.total_dim()];
        coords[i] = s;
        Ok(Self { group, coords })
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        same_group(self.group, other.group)?;
        Ok(Self {
            group: self.group,
            coords: self.group.mul_coords(&self.coords, &other.coords),
        })
    }

    pub fn inverse(&self) -> Self {
        Self {
            group: self.group,
            coords: self.group.inv_coords(&self.coords),
        }
    }

    /// Image in `G/Z` (drops the central coordinates).
    pub fn project(&self) -> QuotientPoint {
        let coords = self
            .group
            .quotient_indices()
            .into_iter()
            .map(|i| self.coords[i])
            .collect();
        QuotientPoint {
            group: self.group,
            coords,
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn same_group(a: Group, b: Group) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::GroupMismatch(a.to_string(), b.to_string()))
    }
}

pub fn multiply(a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
    a.multiply(b)
}

pub fn inverse(a: &GroupElement) -> GroupElement {
    a.inverse()
}

/// Point of `G/Z` in quotient coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientPoint {
    group: Group,
    coords: Vec<f64>,
}

impl QuotientPoint {
    pub fn new(group: Group, coords: Vec<f64>) -> Result<Self> {
        check_dim(group.quotient_dim(), coords.len())?;
        Ok(Self { group, coords })
    }

    pub fn origin(group: Group) -> Self {
        Self {
            group,
            coords: vec![0.0; group.quotient_dim()],
        }
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Lift with central coordinates zero.
    pub fn section(&self) -> GroupElement {
        self.lift(&vec![0.0; self.group.center_dim()])
            .expect("center dimension is fixed by the group")
    }

    /// Lift with prescribed central coordinates.
    pub fn lift(&self, center: &[f64]) -> Result<GroupElement> {
        check_dim(self.group.center_dim(), center.len())?;
        let mut coords = vec![0.0; self.group.total_dim()];
        for (k, i) in self.group.quotient_indices().into_iter().enumerate() {
            coords[i] = self.coords[k];
        }
        for (k, i) in self.group.center_indices().into_iter().enumerate() {
            coords[i] = center[k];
        }
        Ok(GroupElement {
            group: self.group,
            coords,
        })
    }

    /// Quotient group law.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        Ok(self.section().multiply(&other.section())?.project())
    }

    pub fn inverse(&self) -> Self {
        self.section().inverse().project()
    }
}

pub fn section(q: &QuotientPoint) -> GroupElement {
    q.section()
}

/// Per-pair outcome of [`bracket_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub expected: Vec<f64>,
    pub measured: Vec<f64>,
    pub error: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BracketReport {
    pub group: Group,
    pub step: f64,
    pub tolerance: f64,
    pub entries: Vec<BracketEntry>,
}

impl BracketReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }
}

/// Compares the group commutator `e^{sX_i} e^{tX_j} e^{−sX_i} e^{−tX_j}` with
/// `st·[X_i, X_j]` for every basis pair. The symmetric combination
/// `(c(s, t) + c(−s, −t)) / 2st` cancels the third-order remainder.
pub fn bracket_check(group: Group, step: f64, tolerance: f64) -> BracketReport {
    let n = group.total_dim();
    let commutator = |i: usize, j: usize, s: f64, t: f64| {
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        a[i] = s;
        b[j] = t;
        let ab = group.mul_coords(&a, &b);
        let aba = group.mul_coords(&ab, &group.inv_coords(&a));
        group.mul_coords(&aba, &group.inv_coords(&b))
    };
    let mut entries = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (s, t) = (step, step);
            let plus = commutator(i, j, s, t);
            let minus = commutator(i, j, -s, -t);
            let measured: Vec<f64> = plus
                .iter()
                .zip(&minus)
                .map(|(p, m)| (p + m) / (2.0 * s * t))
                .collect();
            let expected = group.bracket_vector(i, j);
            let error = measured
                .iter()
                .zip(&expected)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            entries.push(BracketEntry {
                i,
                j,
                expected,
                measured,
                error,
                pass: error <= tolerance,
            });
        }
    }
    BracketReport {
        group,
        step,
        tolerance,
        entries,
    }
}

/// Determinant of the Jacobian of `x ↦ a·x` at `x`, by central differences.
pub fn left_translation_jacobian_det(a: &GroupElement, x: &GroupElement, h: f64) -> Result<f64> {
    same_group(a.group, x.group)?;
    let g = a.group;
    let n = g.total_dim();
    let mut jac = nalgebra::DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let mut xp = x.coords.clone();
        let mut xm = x.coords.clone();
        xp[k] += h;
        xm[k] -= h;
        let fp = g.mul_coords(&a.coords, &xp);
        let fm = g.mul_coords(&a.coords, &xm);
        for r in 0..n {
            jac[(r, k)] = (fp[r] - fm[r]) / (2.0 * h);
        }
    }
    Ok(jac.determinant())
}
