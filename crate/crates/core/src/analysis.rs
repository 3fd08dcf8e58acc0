//! Numerical checks on the shape of the augmented landscape.
//!
//! - [`find_critical_points`] hunts for finite stationary points of `L̃` from
//!   seeded starts. Every one it certifies should sit at `a = 0` over a zero of
//!   `L`.
//! - [`probe_infimum`] follows the curve `a = e⁻ᵇ` (where `a·eᵇ = 1` exactly)
//!   to show `inf_{a,b} L̃ = L(θ)`.
//! - [`sample_contour`] and [`stationarity_scan`] evaluate `L̃` over an
//!   `(a, b)` grid at a fixed base value. An empty scan for `L > 0` is the
//!   finite-grid stand-in for "no local minimum in ℝ²"; it is a proxy, and a
//!   coarse grid can break it (cells that straddle the valley `a = e⁻ᵇ` can
//!   each beat their neighbours).

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::augment::{aux_partials, augmented_from_base, grad_augmented, value_and_gradient, AugConfig, AugError, AugPoint};
use crate::descent::{backtracking_descent, DescentOptions, DescentStatus};
use crate::field::{ScalarField, ThetaVector};
use crate::optimize::{random_point, run_rng, Thresholds};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error(transparent)]
    Aug(#[from] AugError),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

/// Step-length cap for the finder. Uncapped Armijo steps can throw `b` from
/// the seed box to `b ≈ −15` in one move, onto the flat side where `L̃ → 2L`
/// and the gradient decays like `e^{2b}`; capped steps follow the gradient
/// flow instead.
pub const FINDER_MAX_DISPLACEMENT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FinderOptions {
    pub descent: DescentOptions,
    pub b_max: f64,
}

impl Default for FinderOptions {
    fn default() -> Self {
        Self {
            descent: DescentOptions {
                initial_step: 1e-2,
                max_step: 1.0,
                max_iters: 20_000,
                max_halvings: 60,
                grad_tol: 1e-8,
                max_displacement: Some(FINDER_MAX_DISPLACEMENT),
            },
            b_max: Thresholds::default().b_max,
        }
    }
}

/// Outcome of one finder run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalPointReport {
    pub point: AugPoint,
    pub grad_norm: f64,
    pub l_value: f64,
    pub a_value: f64,
    pub seed_index: usize,
    pub iterations: usize,
    pub converged: bool,
}

/// Runs damped descent with step halving from `n_seeds` seeded starts
/// (θ uniform in the domain, `a ∈ [−2, 2]`, `b ∈ [−3, 3]`).
///
/// Every run is reported. A report is `converged` when the gradient norm at
/// its final point, recomputed from scratch, is within tolerance and
/// `|b| ≤ b_max`.
pub fn find_critical_points(field: &ScalarField, cfg: &AugConfig, n_seeds: usize, seed: u64) -> Vec<CriticalPointReport> {
    find_critical_points_with(field, cfg, n_seeds, seed, &FinderOptions::default())
}

pub fn find_critical_points_with(
    field: &ScalarField,
    cfg: &AugConfig,
    n_seeds: usize,
    seed: u64,
    opts: &FinderOptions,
) -> Vec<CriticalPointReport> {
    (0..n_seeds)
        .into_par_iter()
        .map(|i| {
            let start = random_point(field, &mut run_rng(seed, i as u64));
            locate(field, cfg, &start, i, opts)
        })
        .collect()
}

fn locate(field: &ScalarField, cfg: &AugConfig, start: &AugPoint, seed_index: usize, opts: &FinderOptions) -> CriticalPointReport {
    let n = field.dim();
    let objective = |x: &[f64]| {
        let (e, g) = value_and_gradient(field, &x[..n], x[n], x[n + 1], cfg).ok()?;
        (e.value.is_finite() && !g.saturated).then(|| (e.value, g.to_vec()))
    };
    let project = |x: &mut [f64]| {
        field.clamp_to_domain(&mut x[..n]);
    };
    let r = backtracking_descent(objective, project, &start.to_vec(), &opts.descent);

    let point = AugPoint::from_slice(&r.x).unwrap_or_else(|_| start.clone());
    let grad_norm = grad_augmented(field, &point, cfg)
        .map(|g| if g.saturated { f64::INFINITY } else { g.norm() })
        .unwrap_or(f64::INFINITY);
    let l_value = field.eval(point.theta.as_slice()).unwrap_or(f64::NAN);
    let converged = r.status != DescentStatus::NonFinite
        && grad_norm <= opts.descent.grad_tol
        && point.b.abs() <= opts.b_max;
    CriticalPointReport {
        a_value: point.a,
        point,
        grad_norm,
        l_value,
        seed_index,
        iterations: r.iters,
        converged,
    }
}

/// Converged reports that break the theorem: `L > l_tol` or `|a| > a_tol`.
pub fn theorem_violations<'a>(reports: &'a [CriticalPointReport], th: &Thresholds) -> Vec<&'a CriticalPointReport> {
    reports
        .iter()
        .filter(|r| r.converged && !(r.l_value <= th.l_tol && r.a_value.abs() <= th.a_tol))
        .collect()
}

/// Points sampled along `a = e⁻ᵇ`, `b ∈ [0, b_max]`.
pub const INFIMUM_CURVE_SAMPLES: usize = 401;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InfimumProbe {
    pub value: f64,
    pub a: f64,
    pub b: f64,
}

/// `inf_{a,b} L̃` for a fixed base value `L`.
///
/// Takes the best of `a = 0` and the curve `a = e⁻ᵇ` (on which
/// `L̃ = L + λe⁻²ᵇ`), then polishes locally in `(a, b)`.
pub fn probe_infimum_base(base: f64, cfg: &AugConfig) -> Result<InfimumProbe, AugError> {
    let b_max = Thresholds::default().b_max;
    let mut best = InfimumProbe {
        value: augmented_from_base(base, 0.0, 0.0, cfg)?.value,
        a: 0.0,
        b: 0.0,
    };
    for k in 0..INFIMUM_CURVE_SAMPLES {
        let b = b_max * k as f64 / (INFIMUM_CURVE_SAMPLES - 1) as f64;
        let a = (-b).exp();
        let v = augmented_from_base(base, a, b, cfg)?.value;
        if v < best.value {
            best = InfimumProbe { value: v, a, b };
        }
    }
    if best.value > base {
        let objective = |x: &[f64]| {
            let e = augmented_from_base(base, x[0], x[1], cfg).ok()?;
            let p = aux_partials(base, x[0], x[1], cfg).ok()?;
            (e.value.is_finite() && !p.saturated).then(|| (e.value, vec![p.d_a, p.d_b]))
        };
        let opts = DescentOptions {
            max_iters: 500,
            grad_tol: 1e-14,
            ..DescentOptions::default()
        };
        let r = backtracking_descent(objective, |_| {}, &[best.a, best.b], &opts);
        if r.value < best.value {
            best = InfimumProbe {
                value: r.value,
                a: r.x[0],
                b: r.x[1],
            };
        }
    }
    Ok(best)
}

/// `inf_{a,b} L̃(θ, a, b)`; lies in `[L(θ), L(θ) + 1e−3]`.
pub fn probe_infimum(field: &ScalarField, theta: &ThetaVector, cfg: &AugConfig) -> Result<f64, AugError> {
    let base = field.eval(theta.as_slice())?;
    probe_infimum_base(base, cfg).map(|p| p.value)
}

/// Uniform axis with exact endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self, AnalysisError> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(AnalysisError::InvalidGrid(format!("range [{lo}, {hi}] must be finite and increasing")));
        }
        if n < 2 {
            return Err(AnalysisError::InvalidGrid(format!("resolution must be at least 2, got {n}")));
        }
        Ok(Self { lo, hi, n })
    }

    pub fn at(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.hi
        } else {
            self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.at(i)).collect()
    }
}

/// `L̃` over an `(a, b)` grid at a fixed base value; `values[i][j]` is taken
/// at `(a_axis[i], b_axis[j])`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContourGrid {
    pub a_spec: Axis,
    pub b_spec: Axis,
    pub a_axis: Vec<f64>,
    pub b_axis: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub l_slice: f64,
    pub lambda: f64,
    /// Cells whose evaluation hit the exponent clamp.
    pub saturated_cells: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridCell {
    pub i: usize,
    pub j: usize,
    pub a: f64,
    pub b: f64,
    pub value: f64,
}

impl ContourGrid {
    pub fn cell(&self, i: usize, j: usize) -> GridCell {
        GridCell {
            i,
            j,
            a: self.a_axis[i],
            b: self.b_axis[j],
            value: self.values[i][j],
        }
    }

    /// Smallest value, first in row-major order on ties.
    pub fn minimum(&self) -> GridCell {
        let mut best = (0, 0);
        for (i, row) in self.values.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v < self.values[best.0][best.1] {
                    best = (i, j);
                }
            }
        }
        self.cell(best.0, best.1)
    }

    /// All cells attaining the grid minimum exactly, row-major.
    pub fn minimizing_set(&self) -> Vec<(usize, usize)> {
        let m = self.minimum().value;
        let mut out = Vec::new();
        for (i, row) in self.values.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v == m {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Writes the value matrix, one line per `a`, one column per `b`.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        for row in &self.values {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }
}

/// Evaluates `L̃` with `L(θ)` replaced by `l_slice` over the grid.
pub fn sample_contour(
    l_slice: f64,
    lambda: f64,
    a_range: (f64, f64),
    b_range: (f64, f64),
    resolution: (usize, usize),
) -> Result<ContourGrid, AnalysisError> {
    if !(l_slice >= 0.0 && l_slice.is_finite()) {
        return Err(AnalysisError::InvalidGrid(format!("L slice must be finite and non-negative, got {l_slice}")));
    }
    let cfg = AugConfig::with_lambda(lambda)?;
    let a_spec = Axis::new(a_range.0, a_range.1, resolution.0)?;
    let b_spec = Axis::new(b_range.0, b_range.1, resolution.1)?;
    let a_axis = a_spec.values();
    let b_axis = b_spec.values();

    let rows: Vec<(Vec<f64>, Vec<usize>)> = a_axis
        .par_iter()
        .map(|&a| {
            let mut saturated = Vec::new();
            let row = b_axis
                .iter()
                .enumerate()
                .map(|(j, &b)| {
                    let e = augmented_from_base(l_slice, a, b, &cfg).expect("flag policy never errors on finite input");
                    if e.saturated {
                        saturated.push(j);
                    }
                    e.value
                })
                .collect();
            (row, saturated)
        })
        .collect();

    let mut values = Vec::with_capacity(rows.len());
    let mut saturated_cells = Vec::new();
    for (i, (row, sat)) in rows.into_iter().enumerate() {
        values.push(row);
        saturated_cells.extend(sat.into_iter().map(|j| (i, j)));
    }
    Ok(ContourGrid {
        a_spec,
        b_spec,
        a_axis,
        b_axis,
        values,
        l_slice,
        lambda,
        saturated_cells,
    })
}

/// Interior cells that are weakly minimal over their 8-neighbourhood, in
/// row-major order. Plateaus are reported cell by cell.
pub fn stationarity_scan(grid: &ContourGrid) -> Vec<(usize, usize)> {
    let v = &grid.values;
    let (na, nb) = (v.len(), v.first().map_or(0, Vec::len));
    let mut out = Vec::new();
    for i in 1..na.saturating_sub(1) {
        for j in 1..nb.saturating_sub(1) {
            let c = v[i][j];
            let minimal = (i - 1..=i + 1).all(|p| (j - 1..=j + 1).all(|q| (p == i && q == j) || c <= v[p][q]));
            if minimal {
                out.push((i, j));
            }
        }
    }
    out
}
