//! Property suites behind `minfinity verify`.
//!
//! Each suite samples seeded points, checks one family of identities and
//! reports per-field counts, worst cases and every violation found.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{find_critical_points, probe_infimum, theorem_violations, CriticalPointReport};
use crate::augment::{evaluate, grad_augmented, lifted_augmented_flat, AugConfig, AugPoint};
use crate::diff::{dual_gradient, fd_gradient, max_relative_error, DEFAULT_H_SCALE};
use crate::field::{ScalarField, ThetaVector};
use crate::optimize::{random_point, run_rng, Thresholds};

pub const FD_TOL: f64 = 1e-6;
pub const DUAL_TOL: f64 = 1e-12;
pub const INFIMUM_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    GradCheck,
    CriticalPoints,
    Infimum,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub suite: Suite,
    pub seed: u64,
    pub lambda: f64,
    /// Points per field for the gradient check.
    pub grad_points: usize,
    /// Finder starts per field.
    pub finder_seeds: usize,
    /// θ samples per field for the infimum probe.
    pub infimum_points: usize,
    /// Samples per field for `L̃ ≥ L`.
    pub lower_bound_samples: usize,
    pub thresholds: Thresholds,
}

impl VerifyConfig {
    pub fn new(suite: Suite, seed: u64) -> Self {
        Self {
            suite,
            seed,
            lambda: 1.0,
            grad_points: 1000,
            finder_seeds: 256,
            infimum_points: 100,
            lower_bound_samples: 10_000,
            thresholds: Thresholds::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GradViolation {
    pub point: Vec<f64>,
    pub fd_rel_error: f64,
    pub dual_rel_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GradCheckField {
    pub field: String,
    pub points: usize,
    pub max_fd_rel_error: f64,
    pub max_dual_rel_error: f64,
    pub violations: Vec<GradViolation>,
}

/// Compares the closed-form gradient of `L̃` with central differences and
/// with forward-mode dual numbers at `n` seeded points of the seed box.
pub fn grad_check(field: &ScalarField, cfg: &AugConfig, n: usize, seed: u64) -> GradCheckField {
    let lambda = cfg.lambda;
    let rows: Vec<(Vec<f64>, f64, f64)> = (0..n)
        .into_par_iter()
        .map(|k| {
            let p = random_point(field, &mut run_rng(seed, k as u64));
            let x = p.to_vec();
            let analytic = match grad_augmented(field, &p, cfg) {
                Ok(g) if !g.saturated => g.to_vec(),
                _ => return (x, f64::INFINITY, f64::INFINITY),
            };
            let fd = fd_gradient(|y: &[f64]| lifted_augmented_flat(field, y, lambda), &x, DEFAULT_H_SCALE);
            let dual = dual_gradient(|y| lifted_augmented_flat(field, y, lambda), &x);
            let fd_err = fd.map_or(f64::INFINITY, |g| max_relative_error(&analytic, &g));
            let dual_err = dual.map_or(f64::INFINITY, |g| max_relative_error(&analytic, &g));
            (x, fd_err, dual_err)
        })
        .collect();
    let mut out = GradCheckField {
        field: field.name().to_owned(),
        points: n,
        max_fd_rel_error: 0.0,
        max_dual_rel_error: 0.0,
        violations: Vec::new(),
    };
    for (x, fd, dual) in rows {
        out.max_fd_rel_error = out.max_fd_rel_error.max(fd);
        out.max_dual_rel_error = out.max_dual_rel_error.max(dual);
        if !(fd <= FD_TOL && dual <= DUAL_TOL) {
            out.violations.push(GradViolation {
                point: x,
                fd_rel_error: fd,
                dual_rel_error: dual,
            });
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct CriticalPointsField {
    pub field: String,
    pub starts: usize,
    pub converged: usize,
    /// Largest `L(θ)` over converged reports.
    pub max_l: f64,
    /// Largest `|a|` over converged reports.
    pub max_abs_a: f64,
    pub violations: Vec<CriticalPointReport>,
}

pub fn critical_points(field: &ScalarField, cfg: &AugConfig, n: usize, seed: u64, th: &Thresholds) -> CriticalPointsField {
    let reports = find_critical_points(field, cfg, n, seed);
    let converged: Vec<_> = reports.iter().filter(|r| r.converged).collect();
    CriticalPointsField {
        field: field.name().to_owned(),
        starts: n,
        converged: converged.len(),
        max_l: converged.iter().map(|r| r.l_value).fold(0.0, f64::max),
        max_abs_a: converged.iter().map(|r| r.a_value.abs()).fold(0.0, f64::max),
        violations: theorem_violations(&reports, th).into_iter().cloned().collect(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InfimumViolation {
    pub theta: Vec<f64>,
    pub base: f64,
    pub probe: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LowerBoundViolation {
    pub point: AugPoint,
    pub base: f64,
    pub augmented: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct InfimumField {
    pub field: String,
    pub probes: usize,
    pub max_deviation: f64,
    pub lower_bound_samples: usize,
    pub violations: Vec<InfimumViolation>,
    pub lower_bound_violations: Vec<LowerBoundViolation>,
}

/// `inf_{a,b} L̃(θ, ·, ·) = L(θ)` at seeded θ, and `L̃ ≥ L` at seeded
/// `(θ, a, b)`.
pub fn infimum(field: &ScalarField, cfg: &AugConfig, n_probes: usize, n_lower: usize, seed: u64) -> InfimumField {
    let probes: Vec<(Vec<f64>, f64, f64)> = (0..n_probes)
        .into_par_iter()
        .map(|k| {
            let mut rng = run_rng(seed, k as u64);
            let theta: Vec<f64> = field.domain().iter().map(|iv| rng.gen_range(iv.lo..=iv.hi)).collect();
            let base = field.eval(&theta).unwrap_or(f64::NAN);
            let tv = ThetaVector::new(theta.clone()).expect("domain draws are finite");
            let probe = probe_infimum(field, &tv, cfg).unwrap_or(f64::NAN);
            (theta, base, probe)
        })
        .collect();
    let lower: Vec<Option<LowerBoundViolation>> = (0..n_lower)
        .into_par_iter()
        .map(|k| {
            // disjoint stream range from the probes above
            let p = random_point(field, &mut run_rng(seed, (1 << 32) + k as u64));
            let e = evaluate(field, &p, cfg).ok()?;
            (!(e.value >= e.base)).then_some(LowerBoundViolation {
                point: p,
                base: e.base,
                augmented: e.value,
            })
        })
        .collect();

    let mut out = InfimumField {
        field: field.name().to_owned(),
        probes: n_probes,
        max_deviation: 0.0,
        lower_bound_samples: n_lower,
        violations: Vec::new(),
        lower_bound_violations: lower.into_iter().flatten().collect(),
    };
    for (theta, base, probe) in probes {
        let dev = (probe - base).abs();
        out.max_deviation = out.max_deviation.max(if dev.is_nan() { f64::INFINITY } else { dev });
        if !(dev <= INFIMUM_TOL) {
            out.violations.push(InfimumViolation { theta, base, probe });
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grad_check: Option<Vec<GradCheckField>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub critical_points: Option<Vec<CriticalPointsField>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub infimum: Option<Vec<InfimumField>>,
    pub total_violations: usize,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.total_violations == 0
    }
}

/// Runs the selected suites over `fields`.
///
/// The infimum identity assumes `min L = 0`, so that suite skips
/// unnormalized fields. The other suites run on every field; on an
/// unnormalized one, any converged critical point is itself a violation.
pub fn run_suites(fields: &[&ScalarField], cfg: &VerifyConfig) -> Result<VerifyReport, crate::augment::AugError> {
    let aug = AugConfig::with_lambda(cfg.lambda)?;
    let wants = |s: Suite| cfg.suite == s || cfg.suite == Suite::All;
    let mut report = VerifyReport {
        config: *cfg,
        grad_check: None,
        critical_points: None,
        infimum: None,
        total_violations: 0,
    };
    if wants(Suite::GradCheck) {
        let r: Vec<_> = fields.iter().map(|f| grad_check(f, &aug, cfg.grad_points, cfg.seed)).collect();
        report.total_violations += r.iter().map(|f| f.violations.len()).sum::<usize>();
        report.grad_check = Some(r);
    }
    if wants(Suite::CriticalPoints) {
        let r: Vec<_> = fields
            .iter()
            .map(|f| critical_points(f, &aug, cfg.finder_seeds, cfg.seed, &cfg.thresholds))
            .collect();
        report.total_violations += r.iter().map(|f| f.violations.len()).sum::<usize>();
        report.critical_points = Some(r);
    }
    if wants(Suite::Infimum) {
        let r: Vec<_> = fields
            .iter()
            .filter(|f| f.is_normalized())
            .map(|f| infimum(f, &aug, cfg.infimum_points, cfg.lower_bound_samples, cfg.seed))
            .collect();
        report.total_violations += r
            .iter()
            .map(|f| f.violations.len() + f.lower_bound_violations.len())
            .sum::<usize>();
        report.infimum = Some(r);
    }
    Ok(report)
}
