//! Polynomial weights `(1 + |L x_S|₂)^s` and their moderateness.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{check_dim, Error, Result};
use crate::groups::{Group, QuotientPoint};

#[derive(Debug, Clone, PartialEq)]
pub struct WeightSpec {
    exponent: f64,
    coords: Option<Vec<usize>>,
    transform: Option<DMatrix<f64>>,
}

impl WeightSpec {
    /// `m ≡ 1`.
    pub fn unit() -> Self {
        Self {
            exponent: 0.0,
            coords: None,
            transform: None,
        }
    }

    /// `(1 + |x|₂)^s` over all coordinates.
    pub fn polynomial(s: f64) -> Result<Self> {
        if !s.is_finite() {
            return Err(Error::InvalidParameter {
                name: "s",
                reason: "weight exponent must be finite".into(),
            });
        }
        Ok(Self {
            exponent: s,
            coords: None,
            transform: None,
        })
    }

    /// `(1 + |x_S|₂)^s` over the coordinate subset `S`.
    pub fn on_coords(s: f64, coords: Vec<usize>) -> Result<Self> {
        let mut w = Self::polynomial(s)?;
        if coords.is_empty() {
            return Err(Error::InvalidParameter {
                name: "coords",
                reason: "coordinate subset must be non-empty".into(),
            });
        }
        w.coords = Some(coords);
        Ok(w)
    }

    /// Replaces `x_S` by `L x_S`.
    pub fn with_transform(mut self, l: DMatrix<f64>) -> Result<Self> {
        if let Some(c) = &self.coords {
            check_dim(c.len(), l.ncols())?;
        }
        self.transform = Some(l);
        Ok(self)
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn coords(&self) -> Option<&[usize]> {
        self.coords.as_deref()
    }

    pub fn transform(&self) -> Option<&DMatrix<f64>> {
        self.transform.as_ref()
    }

    pub fn is_unit(&self) -> bool {
        self.exponent == 0.0
    }

    /// Coordinates of a `dim`-dimensional domain the weight depends on.
    pub fn touched_coords(&self, dim: usize) -> Vec<usize> {
        if self.is_unit() {
            return vec![];
        }
        let base: Vec<usize> = match &self.coords {
            Some(c) => c.clone(),
            None => (0..dim).collect(),
        };
        match &self.transform {
            Some(l) if l.ncols() == base.len() => base
                .iter()
                .enumerate()
                .filter(|&(j, _)| l.column(j).iter().any(|v| *v != 0.0))
                .map(|(_, &i)| i)
                .collect(),
            _ => base,
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        let sel = self.touched_coords(dim);
        if let Some(&bad) = sel.iter().find(|&&i| i >= dim) {
            return Err(Error::InvalidParameter {
                name: "coords",
                reason: format!("weight coordinate {bad} out of range"),
            });
        }
        if let Some(l) = &self.transform {
            let n = self.coords.as_ref().map_or(dim, Vec::len);
            check_dim(n, l.ncols())?;
        }
        Ok(())
    }

    fn radius(&self, x: &[f64]) -> f64 {
        let sel: Vec<f64> = match &self.coords {
            Some(c) => c.iter().map(|&i| x[i]).collect(),
            None => x.to_vec(),
        };
        match &self.transform {
            Some(l) => (l * DVector::from_vec(sel)).norm(),
            None => sel.iter().map(|v| v * v).sum::<f64>().sqrt(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        if self.is_unit() {
            return 1.0;
        }
        (1.0 + self.radius(x)).powf(self.exponent)
    }

    /// The submultiplicative companion `(1 + |x|)^{|s|}` of the same shape.
    pub fn companion(&self) -> Self {
        Self {
            exponent: self.exponent.abs(),
            coords: self.coords.clone(),
            transform: self.transform.clone(),
        }
    }

    /// Composition with a linear change of variables: `y ↦ m(A y)`.
    pub fn pullback(&self, a: &DMatrix<f64>) -> Result<Self> {
        let dim = a.nrows();
        let select = match &self.coords {
            Some(c) => {
                let mut s = DMatrix::<f64>::zeros(c.len(), dim);
                for (r, &i) in c.iter().enumerate() {
                    if i >= dim {
                        return Err(Error::InvalidParameter {
                            name: "coords",
                            reason: format!("coordinate {i} out of range"),
                        });
                    }
                    s[(r, i)] = 1.0;
                }
                s
            }
            None => DMatrix::identity(dim, dim),
        };
        let inner = match &self.transform {
            Some(l) => l * select,
            None => select,
        };
        Ok(Self {
            exponent: self.exponent,
            coords: None,
            transform: Some(inner * a),
        })
    }
}

/// The linear map `T` of `G_{6,16}/Z` onto phase space: quotient coordinates
/// `(x_3, x_4, x_5, x_6)` go to `(x_5, x_6, −λx_3 + μx_6, −λx_4)`, i.e. position
/// then frequency.
pub fn g616_transform(lambda: f64, mu: f64) -> Result<DMatrix<f64>> {
    if lambda == 0.0 || !lambda.is_finite() || !mu.is_finite() {
        return Err(Error::InvalidParameter {
            name: "lambda",
            reason: "g6_16 requires finite lambda != 0".into(),
        });
    }
    #[rustfmt::skip]
    let t = DMatrix::from_row_slice(4, 4, &[
        0.0, 0.0, 1.0, 0.0,
        0.0, 0.0, 0.0, 1.0,
        -lambda, 0.0, 0.0, mu,
        0.0, -lambda, 0.0, 0.0,
    ]);
    Ok(t)
}

/// `m ∘ T^{−1}` as a weight on phase space.
pub fn weight_pullback_g616(m: &WeightSpec, lambda: f64, mu: f64) -> Result<WeightSpec> {
    let t = g616_transform(lambda, mu)?;
    let tinv = t
        .try_inverse()
        .ok_or_else(|| Error::Numerical("singular transform".into()))?;
    m.pullback(&tinv)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModerateReport {
    pub group: Group,
    pub samples: usize,
    /// `max m(xy) / (v(x) m(y))`.
    pub max_moderate_ratio: f64,
    /// `max v(xy) / (v(x) v(y))`.
    pub max_submultiplicative_ratio: f64,
    pub pass: bool,
}

/// Samples pairs in `[−radius, radius]^n` of `G/Z` and checks
/// `m(xy) ≤ v(x) m(y)` and `v(xy) ≤ v(x) v(y)` with `v` the companion of `m`.
pub fn moderate_check(
    m: &WeightSpec,
    group: Group,
    samples: usize,
    radius: f64,
    rng: &mut impl Rng,
) -> Result<ModerateReport> {
    let n = group.quotient_dim();
    m.validate(n)?;
    let v = m.companion();
    let mut r1: f64 = 0.0;
    let mut r2: f64 = 0.0;
    for _ in 0..samples {
        let x = QuotientPoint::new(
            group,
            (0..n).map(|_| rng.gen_range(-radius..radius)).collect(),
        )?;
        let y = QuotientPoint::new(
            group,
            (0..n).map(|_| rng.gen_range(-radius..radius)).collect(),
        )?;
        let xy = x.multiply(&y)?;
        r1 = r1.max(m.eval(xy.coords()) / (v.eval(x.coords()) * m.eval(y.coords())));
        r2 = r2.max(v.eval(xy.coords()) / (v.eval(x.coords()) * v.eval(y.coords())));
    }
    let tol = 1.0 + 1e-12;
    Ok(ModerateReport {
        group,
        samples,
        max_moderate_ratio: r1,
        max_submultiplicative_ratio: r2,
        pass: r1 <= tol && r2 <= tol,
    })
}
