//! Base losses `L(θ)` over box domains, shifted so their global minimum is 0.
//!
//! The registry ships smooth test landscapes with strictly positive bad local
//! minima, plus one field (`violator-1d`, `x² + 1`) whose minimum is 1. The
//! violator is deliberately left unnormalized and is only meant for negative
//! tests.

use std::f64::consts::{E, PI};
use std::fmt;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::descent::{backtracking_descent, norm, DescentOptions};
use crate::diff::Scalar;

/// Values in `[-NORMALIZATION_TOL, 0)` are treated as rounding and clamped.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Seed for the multistart search that locates each field's offset.
pub const NORMALIZATION_SEED: u64 = 0x6d69_6e66;
pub const NORMALIZATION_STARTS: usize = 32;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("dimension mismatch: field expects {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coordinate {coord} = {value} outside domain [{lo}, {hi}]")]
    OutsideDomain {
        coord: usize,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("non-finite {what} at θ = {theta:?}")]
    NonFinite { what: &'static str, theta: Vec<f64> },
    #[error("value {value} is below the normalized minimum by more than {NORMALIZATION_TOL}")]
    BelowMinimum { value: f64 },
    #[error("normalization of `{name}` failed: {reason}")]
    NormalizationFailed { name: String, reason: String },
    #[error("unknown field `{0}`")]
    UnknownField(String),
}

/// A parameter vector θ with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ThetaVector(Vec<f64>);

impl ThetaVector {
    pub fn new(coords: Vec<f64>) -> Result<Self, FieldError> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(FieldError::NonFinite {
                what: "coordinate",
                theta: coords,
            });
        }
        Ok(Self(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl From<ThetaVector> for Vec<f64> {
    fn from(t: ThetaVector) -> Self {
        t.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }
}

/// The closed-form families behind the shipped fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Landscape {
    /// `Σ x²`
    Quadratic,
    /// `10n + Σ (x² − 10 cos 2πx)`, evaluated as `Σ (x² + 20 sin² πx)`
    Rastrigin,
    /// `−20 exp(−0.2 √(Σx²/n)) − exp(Σ cos(2πx)/n) + e + 20`
    Ackley,
    /// `x⁴ − 2x² + 0.3x`, summed over coordinates
    DoubleWell,
    /// `Σ x² + 1`; never reaches zero.
    ShiftedQuadratic,
}

impl Landscape {
    /// Unnormalized value, generic so that dual numbers can be pushed through.
    pub fn raw_value<T: Scalar>(self, x: &[T]) -> T {
        let c = T::constant;
        let n = x.len() as f64;
        match self {
            Landscape::Quadratic => x.iter().fold(c(0.0), |acc, &xi| acc + xi * xi),
            Landscape::ShiftedQuadratic => x.iter().fold(c(1.0), |acc, &xi| acc + xi * xi),
            // 10(1 − cos 2πx) = 20 sin²(πx), without the cancellation near 0
            Landscape::Rastrigin => x.iter().fold(c(0.0), |acc, &xi| {
                acc + xi * xi + c(20.0) * (c(PI) * xi).sin().square()
            }),
            Landscape::Ackley => {
                let sq = x.iter().fold(c(0.0), |acc, &xi| acc + xi * xi);
                let cs = x
                    .iter()
                    .fold(c(0.0), |acc, &xi| acc + (c(2.0 * PI) * xi).cos());
                c(-20.0) * (c(-0.2) * (sq / c(n)).sqrt()).exp() - (cs / c(n)).exp()
                    + c(E + 20.0)
            }
            Landscape::DoubleWell => x.iter().fold(c(0.0), |acc, &xi| {
                acc + xi.powi(4) - c(2.0) * xi * xi + c(0.3) * xi
            }),
        }
    }

    /// Closed-form gradient of [`Landscape::raw_value`].
    ///
    /// Ackley is not differentiable at the origin; the zero subgradient is
    /// returned there.
    pub fn raw_gradient(self, x: &[f64]) -> Vec<f64> {
        let n = x.len() as f64;
        match self {
            Landscape::Quadratic | Landscape::ShiftedQuadratic => {
                x.iter().map(|xi| 2.0 * xi).collect()
            }
            Landscape::Rastrigin => x
                .iter()
                .map(|xi| 2.0 * xi + 20.0 * PI * (2.0 * PI * xi).sin())
                .collect(),
            Landscape::Ackley => {
                let r = (x.iter().map(|v| v * v).sum::<f64>() / n).sqrt();
                let cos_mean = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
                let radial = if r > 0.0 {
                    4.0 * (-0.2 * r).exp() / (n * r)
                } else {
                    0.0
                };
                let wave = 2.0 * PI / n * cos_mean.exp();
                x.iter()
                    .map(|xi| radial * xi + wave * (2.0 * PI * xi).sin())
                    .collect()
            }
            Landscape::DoubleWell => x
                .iter()
                .map(|xi| 4.0 * xi.powi(3) - 4.0 * xi + 0.3)
                .collect(),
        }
    }
}

/// Blueprint for a field before its offset is known.
#[derive(Debug, Clone)]
pub struct RawField {
    pub name: String,
    pub landscape: Landscape,
    pub domain: Vec<Interval>,
    /// Extra start for the minimum search, e.g. a known analytic minimizer.
    pub global_min_hint: Option<Vec<f64>>,
    /// Seeds polished into `known_bad_minima`.
    pub bad_minimum_seeds: Vec<Vec<f64>>,
}

impl RawField {
    pub fn dim(&self) -> usize {
        self.domain.len()
    }

    fn project(&self, x: &mut [f64]) {
        for (xi, iv) in x.iter_mut().zip(&self.domain) {
            *xi = iv.clamp(*xi);
        }
    }

    /// Gradient with components zeroed where they push out of the box.
    fn projected_gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = self.landscape.raw_gradient(x);
        for ((gi, &xi), iv) in g.iter_mut().zip(x).zip(&self.domain) {
            if (xi <= iv.lo && *gi > 0.0) || (xi >= iv.hi && *gi < 0.0) {
                *gi = 0.0;
            }
        }
        g
    }

    fn local_descent(&self, start: &[f64], offset: f64, opts: &DescentOptions) -> (Vec<f64>, f64, f64) {
        let objective = |x: &[f64]| {
            let v = self.landscape.raw_value(x) - offset;
            let g = self.projected_gradient(x);
            (v.is_finite() && g.iter().all(|c| c.is_finite())).then_some((v, g))
        };
        let r = backtracking_descent(objective, |x| self.project(x), start, opts);
        (r.x, r.value, r.grad_norm)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BadMinimum {
    pub theta: ThetaVector,
    pub value: f64,
}

/// A named loss `L(θ)` on a box, with `min L = 0` unless it is the violator.
#[derive(Debug, Clone, Serialize)]
pub struct ScalarField {
    name: String,
    landscape: Landscape,
    domain: Vec<Interval>,
    offset: f64,
    global_min: Option<ThetaVector>,
    known_bad_minima: Vec<BadMinimum>,
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

const SEARCH_OPTS: DescentOptions = DescentOptions {
    initial_step: 1e-2,
    max_step: 1.0,
    max_iters: 5_000,
    max_halvings: 60,
    grad_tol: 1e-12,
    max_displacement: None,
};

const POLISH_OPTS: DescentOptions = DescentOptions {
    initial_step: 1e-3,
    max_step: 1.0,
    max_iters: 20_000,
    max_halvings: 60,
    grad_tol: 1e-13,
    max_displacement: None,
};

/// Stationarity required of the located global minimum and of every
/// registered bad minimum.
pub const STATIONARITY_TOL: f64 = 1e-6;

/// Bad minima must exceed this value (10× the critical-point L tolerance).
pub const BAD_MINIMUM_FLOOR: f64 = 1e-3;

/// Locates the global minimum of `raw` by seeded multistart descent and
/// returns the field shifted so that minimum is 0.
pub fn normalize_field(raw: RawField) -> Result<ScalarField, FieldError> {
    let fail = |reason: String| FieldError::NormalizationFailed {
        name: raw.name.clone(),
        reason,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(NORMALIZATION_SEED);
    let mut starts: Vec<Vec<f64>> = raw.global_min_hint.iter().cloned().collect();
    for _ in 0..NORMALIZATION_STARTS {
        starts.push(raw.domain.iter().map(|iv| rng.gen_range(iv.lo..=iv.hi)).collect());
    }

    let mut best: Option<(Vec<f64>, f64)> = None;
    for start in &starts {
        if start.len() != raw.dim() {
            return Err(fail(format!("start {start:?} has wrong dimension")));
        }
        let (x, v, _) = raw.local_descent(start, 0.0, &SEARCH_OPTS);
        if v.is_finite() && best.as_ref().is_none_or(|(_, bv)| v < *bv) {
            best = Some((x, v));
        }
    }
    let (x, _) = best.ok_or_else(|| fail("no start produced a finite value".into()))?;
    let (x, value, grad_norm) = raw.local_descent(&x, 0.0, &POLISH_OPTS);
    if !value.is_finite() || grad_norm > STATIONARITY_TOL {
        return Err(fail(format!(
            "best point {x:?} not stationary (|∇| = {grad_norm:e})"
        )));
    }

    let mut field = ScalarField {
        name: raw.name.clone(),
        landscape: raw.landscape,
        domain: raw.domain.clone(),
        offset: value,
        global_min: Some(ThetaVector(x)),
        known_bad_minima: Vec::new(),
    };
    field.known_bad_minima = register_bad_minima(&raw, value);
    Ok(field)
}

fn register_bad_minima(raw: &RawField, offset: f64) -> Vec<BadMinimum> {
    let mut found: Vec<BadMinimum> = Vec::new();
    for seed in &raw.bad_minimum_seeds {
        let (x, value, grad_norm) = raw.local_descent(seed, offset, &POLISH_OPTS);
        if grad_norm > STATIONARITY_TOL || value < BAD_MINIMUM_FLOOR {
            continue;
        }
        let duplicate = found
            .iter()
            .any(|m| norm(&sub(m.theta.as_slice(), &x)) < 1e-6);
        if !duplicate {
            found.push(BadMinimum {
                theta: ThetaVector(x),
                value,
            });
        }
    }
    found
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

impl ScalarField {
    /// A field taken as-is, offset 0 and no registered global minimum.
    pub fn unnormalized(raw: RawField) -> Self {
        let mut field = ScalarField {
            name: raw.name.clone(),
            landscape: raw.landscape,
            domain: raw.domain.clone(),
            offset: 0.0,
            global_min: None,
            known_bad_minima: Vec::new(),
        };
        field.known_bad_minima = register_bad_minima(&raw, 0.0);
        field
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn landscape(&self) -> Landscape {
        self.landscape
    }

    pub fn dim(&self) -> usize {
        self.domain.len()
    }

    pub fn domain(&self) -> &[Interval] {
        &self.domain
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Registered global minimizer; `None` for fields that never reach 0.
    pub fn global_min(&self) -> Option<&ThetaVector> {
        self.global_min.as_ref()
    }

    /// Whether the field satisfies `min L = 0`.
    pub fn is_normalized(&self) -> bool {
        self.global_min.is_some()
    }

    pub fn known_bad_minima(&self) -> &[BadMinimum] {
        &self.known_bad_minima
    }

    pub fn check_dim(&self, theta: &[f64]) -> Result<(), FieldError> {
        if theta.len() != self.dim() {
            return Err(FieldError::DimensionMismatch {
                expected: self.dim(),
                got: theta.len(),
            });
        }
        Ok(())
    }

    pub fn check_domain(&self, theta: &[f64]) -> Result<(), FieldError> {
        self.check_dim(theta)?;
        for (coord, (&value, iv)) in theta.iter().zip(&self.domain).enumerate() {
            if !iv.contains(value) {
                return Err(FieldError::OutsideDomain {
                    coord,
                    value,
                    lo: iv.lo,
                    hi: iv.hi,
                });
            }
        }
        Ok(())
    }

    /// Clamps θ into the domain box; returns whether any coordinate moved.
    pub fn clamp_to_domain(&self, theta: &mut [f64]) -> bool {
        let mut moved = false;
        for (x, iv) in theta.iter_mut().zip(&self.domain) {
            let c = iv.clamp(*x);
            if c != *x {
                *x = c;
                moved = true;
            }
        }
        moved
    }

    /// `L(θ)`, normalized and clamped at 0.
    pub fn eval(&self, theta: &[f64]) -> Result<f64, FieldError> {
        self.check_domain(theta)?;
        let v = self.landscape.raw_value(theta) - self.offset;
        if !v.is_finite() {
            return Err(FieldError::NonFinite {
                what: "value",
                theta: theta.to_vec(),
            });
        }
        if v < -NORMALIZATION_TOL {
            return Err(FieldError::BelowMinimum { value: v });
        }
        Ok(v.max(0.0))
    }

    /// `∇L(θ)` from the closed form.
    pub fn grad(&self, theta: &[f64]) -> Result<Vec<f64>, FieldError> {
        self.check_domain(theta)?;
        let g = self.landscape.raw_gradient(theta);
        if g.iter().any(|c| !c.is_finite()) {
            return Err(FieldError::NonFinite {
                what: "gradient",
                theta: theta.to_vec(),
            });
        }
        Ok(g)
    }

    /// `L(θ)` over a generic scalar, without domain checks or clamping.
    pub fn value_lifted<T: Scalar>(&self, theta: &[T]) -> T {
        self.landscape.raw_value(theta) - T::constant(self.offset)
    }
}

/// Free-function form of [`ScalarField::eval`].
pub fn eval_field(field: &ScalarField, theta: &ThetaVector) -> Result<f64, FieldError> {
    field.eval(theta.as_slice())
}

/// Free-function form of [`ScalarField::grad`].
pub fn grad_field(field: &ScalarField, theta: &ThetaVector) -> Result<ThetaVector, FieldError> {
    field.grad(theta.as_slice()).map(ThetaVector)
}

fn cube(dim: usize, lo: f64, hi: f64) -> Vec<Interval> {
    vec![Interval::new(lo, hi); dim]
}

/// Blueprints of every shipped field, in registry order.
pub fn raw_fields() -> Vec<RawField> {
    let rastrigin_1d_seeds: Vec<Vec<f64>> = [1.0, -1.0, 2.0, -2.0, 3.0, -3.0]
        .iter()
        .map(|&x| vec![x])
        .collect();
    let rastrigin_2d_seeds: Vec<Vec<f64>> = [
        [1.0, 0.0],
        [0.0, 1.0],
        [-1.0, 0.0],
        [0.0, -1.0],
        [1.0, 1.0],
        [-1.0, -1.0],
        [2.0, 0.0],
    ]
    .iter()
    .map(|p| p.to_vec())
    .collect();
    let ackley_seeds: Vec<Vec<f64>> = [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [1.0, 1.0], [2.0, 0.0]]
        .iter()
        .map(|p| p.to_vec())
        .collect();

    vec![
        RawField {
            name: "quadratic-1d".into(),
            landscape: Landscape::Quadratic,
            domain: cube(1, -5.0, 5.0),
            global_min_hint: Some(vec![0.0]),
            bad_minimum_seeds: vec![],
        },
        RawField {
            name: "quadratic-2d".into(),
            landscape: Landscape::Quadratic,
            domain: cube(2, -5.0, 5.0),
            global_min_hint: Some(vec![0.0, 0.0]),
            bad_minimum_seeds: vec![],
        },
        RawField {
            name: "rastrigin-1d".into(),
            landscape: Landscape::Rastrigin,
            domain: cube(1, -5.12, 5.12),
            global_min_hint: Some(vec![0.0]),
            bad_minimum_seeds: rastrigin_1d_seeds,
        },
        RawField {
            name: "rastrigin-2d".into(),
            landscape: Landscape::Rastrigin,
            domain: cube(2, -5.12, 5.12),
            global_min_hint: Some(vec![0.0, 0.0]),
            bad_minimum_seeds: rastrigin_2d_seeds,
        },
        RawField {
            name: "ackley-2d".into(),
            landscape: Landscape::Ackley,
            domain: cube(2, -5.0, 5.0),
            global_min_hint: Some(vec![0.0, 0.0]),
            bad_minimum_seeds: ackley_seeds,
        },
        RawField {
            name: "double-well-1d".into(),
            landscape: Landscape::DoubleWell,
            domain: cube(1, -2.0, 2.0),
            global_min_hint: None,
            bad_minimum_seeds: vec![vec![1.0]],
        },
        RawField {
            name: "violator-1d".into(),
            landscape: Landscape::ShiftedQuadratic,
            domain: cube(1, -3.0, 3.0),
            global_min_hint: None,
            bad_minimum_seeds: vec![],
        },
    ]
}

/// Every shipped field. Normalization runs once, on first access.
pub fn registry() -> &'static [ScalarField] {
    static REGISTRY: OnceLock<Vec<ScalarField>> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        raw_fields()
            .into_iter()
            .map(|raw| match raw.landscape {
                Landscape::ShiftedQuadratic => ScalarField::unnormalized(raw),
                _ => normalize_field(raw).expect("shipped field failed to normalize"),
            })
            .collect()
    })
}

pub fn field_names() -> Vec<&'static str> {
    registry().iter().map(|f| f.name()).collect()
}

pub fn field_by_name(name: &str) -> Result<&'static ScalarField, FieldError> {
    registry()
        .iter()
        .find(|f| f.name == name)
        .ok_or_else(|| FieldError::UnknownField(name.to_string()))
}

/// Normalized fields only (everything except the violator).
pub fn normalized_fields() -> impl Iterator<Item = &'static ScalarField> {
    registry().iter().filter(|f| f.is_normalized())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diff::{fd_gradient, relative_error, DEFAULT_H_SCALE};

    fn theta(v: &[f64]) -> ThetaVector {
        ThetaVector::new(v.to_vec()).unwrap()
    }

    /// Dense grid then bisection on the derivative; independent of the
    /// descent machinery.
    fn grid_bisect_min(f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
        let step = 1e-4;
        let n = ((hi - lo) / step) as usize;
        let (mut bx, mut bv) = (lo, f(lo));
        for i in 0..=n {
            let x = lo + i as f64 * step;
            if f(x) < bv {
                bx = x;
                bv = f(x);
            }
        }
        let (mut a, mut b) = (bx - step, bx + step);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if df(m) > 0.0 {
                b = m;
            } else {
                a = m;
            }
        }
        let x = 0.5 * (a + b);
        (x, f(x))
    }

    #[test]
    fn quadratic_zero_at_origin() {
        let f = field_by_name("quadratic-2d").unwrap();
        assert_eq!(eval_field(f, &theta(&[0.0, 0.0])).unwrap(), 0.0);
        assert_eq!(f.offset(), 0.0);
    }

    #[test]
    fn quadratic_gradient() {
        let f = field_by_name("quadratic-1d").unwrap();
        assert_eq!(grad_field(f, &theta(&[3.0])).unwrap().as_slice(), &[6.0]);
    }

    #[test]
    fn rastrigin_origin_is_zero_and_stationary() {
        let f = field_by_name("rastrigin-1d").unwrap();
        assert_eq!(f.eval(&[0.0]).unwrap(), 0.0);
        assert_eq!(f.grad(&[0.0]).unwrap(), vec![0.0]);
        assert!(f.offset().abs() <= 1e-12);
    }

    #[test]
    fn rastrigin_first_bad_minimum_near_one() {
        let f = field_by_name("rastrigin-1d").unwrap();
        let raw = |x: f64| 10.0 + x * x - 10.0 * (2.0 * PI * x).cos();
        let draw = |x: f64| 2.0 * x + 20.0 * PI * (2.0 * PI * x).sin();
        let (x_star, v_star) = grid_bisect_min(raw, draw, 0.5, 1.5);
        let bad = &f.known_bad_minima()[0];
        assert!((bad.theta.as_slice()[0] - x_star).abs() < 1e-8);
        assert!((bad.value - v_star).abs() < 1e-10);
        assert!((f.eval(&[x_star]).unwrap() - 1.0).abs() < 1e-2);
    }

    #[test]
    fn double_well_offset_matches_oracle() {
        let g = |x: f64| x.powi(4) - 2.0 * x * x + 0.3 * x;
        let dg = |x: f64| 4.0 * x.powi(3) - 4.0 * x + 0.3;
        let (x_star, g_min) = grid_bisect_min(g, dg, -2.0, 2.0);
        let f = field_by_name("double-well-1d").unwrap();
        assert!((f.offset() - g_min).abs() < 1e-12, "{} vs {g_min}", f.offset());
        let x = f.global_min().unwrap().as_slice()[0];
        assert!((x - x_star).abs() < 1e-7, "{x} vs {x_star}");
        let bad = &f.known_bad_minima()[0];
        assert!(bad.theta.as_slice()[0] > 0.9 && bad.value > 0.5);
    }

    #[test]
    fn double_well_gradient_matches_fd() {
        let f = field_by_name("double-well-1d").unwrap();
        let fd = fd_gradient(|x| f.value_lifted(x), &[0.5], DEFAULT_H_SCALE).unwrap();
        let g = f.grad(&[0.5]).unwrap();
        assert!(relative_error(g[0], fd[0]) <= 1e-6);
        assert!((g[0] - (4.0 * 0.125 - 2.0 + 0.3)).abs() < 1e-15);
    }

    #[test]
    fn violator_is_not_normalized() {
        let f = field_by_name("violator-1d").unwrap();
        assert!(!f.is_normalized());
        assert_eq!(f.eval(&[0.0]).unwrap(), 1.0);
        assert!(f.known_bad_minima().is_empty());
    }

    #[test]
    fn errors() {
        let f = field_by_name("quadratic-2d").unwrap();
        assert_eq!(
            f.eval(&[0.0]).unwrap_err(),
            FieldError::DimensionMismatch { expected: 2, got: 1 }
        );
        assert!(matches!(
            f.eval(&[0.0, 7.0]).unwrap_err(),
            FieldError::OutsideDomain { coord: 1, .. }
        ));
        assert!(matches!(
            f.eval(&[0.0, f64::NAN]).unwrap_err(),
            FieldError::OutsideDomain { .. }
        ));
        assert!(ThetaVector::new(vec![f64::INFINITY]).is_err());
        assert!(matches!(
            field_by_name("nope").unwrap_err(),
            FieldError::UnknownField(_)
        ));
    }

    #[test]
    fn clamp_reports_movement() {
        let f = field_by_name("rastrigin-2d").unwrap();
        let mut t = [6.0, 0.5];
        assert!(f.clamp_to_domain(&mut t));
        assert_eq!(t, [5.12, 0.5]);
        assert!(!f.clamp_to_domain(&mut t));
    }

    #[test]
    fn normalization_rejects_malformed_start() {
        let raw = RawField {
            name: "bad-hint".into(),
            landscape: Landscape::Quadratic,
            domain: cube(1, -1.0, 1.0),
            global_min_hint: Some(vec![0.0, 0.0]),
            bad_minimum_seeds: vec![],
        };
        assert!(matches!(
            normalize_field(raw),
            Err(FieldError::NormalizationFailed { .. })
        ));
    }

    #[test]
    fn normalization_handles_boundary_minimum() {
        let raw = RawField {
            name: "offset-bowl".into(),
            landscape: Landscape::Quadratic,
            domain: cube(1, 1.0, 2.0),
            global_min_hint: None,
            bad_minimum_seeds: vec![],
        };
        let f = normalize_field(raw).unwrap();
        assert_eq!(f.offset(), 1.0);
        assert_eq!(f.eval(&[1.0]).unwrap(), 0.0);
    }

    #[test]
    fn registry_names() {
        assert_eq!(
            field_names(),
            vec![
                "quadratic-1d",
                "quadratic-2d",
                "rastrigin-1d",
                "rastrigin-2d",
                "ackley-2d",
                "double-well-1d",
                "violator-1d"
            ]
        );
    }
}
