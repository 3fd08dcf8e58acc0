//! First-order optimizers over `(θ, a, b)`, trajectory recording and terminal
//! outcome labels.
//!
//! A run on the augmented loss ends in one of four ways: it converges to a
//! finite stationary point, it slides off to a minimum at infinity
//! (`b → ∞`, `a → 0`, `a·eᵇ → 1`), it runs out of budget, or it hits a
//! non-finite value. The thresholds separating these live in [`Thresholds`].

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::augment::{value_and_gradient, AugConfig, AugError, AugPoint};
use crate::descent::norm;
use crate::field::{FieldError, ScalarField, ThetaVector};

/// Every step is recorded up to here, every tenth step after.
pub const FULL_RECORD_STEPS: u64 = 10_000;
pub const RECORD_STRIDE: u64 = 10;

/// Auxiliary start used when only θ is given.
pub const DEFAULT_AUX_START: (f64, f64) = (0.1, 0.0);

/// Box for seeded random auxiliary starts.
pub const SEED_A_RANGE: (f64, f64) = (-2.0, 2.0);
pub const SEED_B_RANGE: (f64, f64) = (-3.0, 3.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OptimizeError {
    #[error("invalid optimizer spec: {0}")]
    InvalidSpec(String),
    #[error("invalid start: {0}")]
    InvalidStart(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Aug(#[from] AugError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptimizerKind {
    Gd,
    Momentum,
    Adam,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptimizerSpec {
    pub kind: OptimizerKind,
    pub step_size: f64,
    /// Heavy-ball coefficient, used by `momentum`.
    pub momentum: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub max_steps: u64,
    pub grad_tol: f64,
}

impl Default for OptimizerSpec {
    fn default() -> Self {
        Self {
            kind: OptimizerKind::Gd,
            step_size: 1e-2,
            momentum: 0.9,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            max_steps: 100_000,
            grad_tol: Thresholds::default().grad_tol,
        }
    }
}

impl OptimizerSpec {
    pub fn gd(step_size: f64, max_steps: u64) -> Self {
        Self {
            kind: OptimizerKind::Gd,
            step_size,
            max_steps,
            ..Self::default()
        }
    }

    pub fn momentum(step_size: f64, momentum: f64, max_steps: u64) -> Self {
        Self {
            kind: OptimizerKind::Momentum,
            step_size,
            momentum,
            max_steps,
            ..Self::default()
        }
    }

    pub fn adam(step_size: f64, max_steps: u64) -> Self {
        Self {
            kind: OptimizerKind::Adam,
            step_size,
            max_steps,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), OptimizeError> {
        let bad = |msg: String| Err(OptimizeError::InvalidSpec(msg));
        if !(self.step_size > 0.0 && self.step_size.is_finite()) {
            return bad(format!("step_size must be positive, got {}", self.step_size));
        }
        if self.max_steps < 1 {
            return bad("max_steps must be at least 1".into());
        }
        if !(self.grad_tol > 0.0) {
            return bad(format!("grad_tol must be positive, got {}", self.grad_tol));
        }
        match self.kind {
            OptimizerKind::Gd => {}
            OptimizerKind::Momentum => {
                if !(0.0..1.0).contains(&self.momentum) {
                    return bad(format!("momentum must lie in [0, 1), got {}", self.momentum));
                }
            }
            OptimizerKind::Adam => {
                if !(self.epsilon > 0.0) {
                    return bad(format!("epsilon must be positive, got {}", self.epsilon));
                }
                for (name, beta) in [("beta1", self.beta1), ("beta2", self.beta2)] {
                    if !(0.0..1.0).contains(&beta) {
                        return bad(format!("{name} must lie in [0, 1), got {beta}"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Classification thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Thresholds {
    /// `b` beyond which a run counts as diverging; `e²⁰ ≈ 4.9e8`.
    pub b_max: f64,
    /// `|a|` bound for a finite minimum; diverging runs need `|a| ≤ 10·a_tol`.
    pub a_tol: f64,
    pub u_tol: f64,
    pub grad_tol: f64,
    /// `L(θ)` bound for a finite minimum to count as global.
    pub l_tol: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            b_max: 20.0,
            a_tol: 1e-3,
            u_tol: 0.1,
            grad_tol: 1e-8,
            l_tol: 1e-4,
        }
    }
}

/// What is being minimized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    /// `L̃(θ, a, b)` over all `n + 2` coordinates.
    Augmented,
    /// `L(θ)` alone; recorded rows carry `a = b = u = 0`.
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    ConvergedFinite,
    MinimumAtInfinity,
    BudgetExhausted,
    NumericalFailure,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::ConvergedFinite => "converged-finite",
            Outcome::MinimumAtInfinity => "minimum-at-infinity",
            Outcome::BudgetExhausted => "budget-exhausted",
            Outcome::NumericalFailure => "numerical-failure",
        }
    }
}

/// Numbers backing a label, taken from the final recorded row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Certificate {
    pub step: u64,
    pub a: f64,
    pub b: f64,
    pub u: f64,
    pub base_loss: f64,
    pub loss: f64,
    pub grad_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutcomeLabel {
    pub outcome: Outcome,
    pub certificate: Certificate,
}

/// One recorded optimizer step.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryRow {
    pub step: u64,
    pub theta: Vec<f64>,
    pub a: f64,
    pub b: f64,
    pub u: f64,
    /// `L(θ)`
    pub base_loss: f64,
    /// Objective value: `L̃` for augmented runs, `L` for plain ones.
    pub loss: f64,
    pub grad_norm: f64,
    pub saturated: bool,
}

impl TrajectoryRow {
    fn is_finite(&self) -> bool {
        self.loss.is_finite()
            && self.base_loss.is_finite()
            && self.grad_norm.is_finite()
            && self.a.is_finite()
            && self.b.is_finite()
            && self.theta.iter().all(|t| t.is_finite())
    }

    pub fn point(&self) -> Option<AugPoint> {
        let theta = ThetaVector::new(self.theta.clone()).ok()?;
        AugPoint::new(theta, self.a, self.b).ok()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub field: String,
    pub objective: Objective,
    pub spec: OptimizerSpec,
    pub seed: u64,
    pub rows: Vec<TrajectoryRow>,
    pub outcome: OutcomeLabel,
    /// Steps after which θ had to be clamped back into the domain box.
    pub clamp_events: u64,
    pub saturated_steps: u64,
    /// Total optimizer steps taken (rows may be strided).
    pub steps_taken: u64,
}

impl Trajectory {
    pub fn last(&self) -> &TrajectoryRow {
        self.rows.last().expect("trajectory has at least one row")
    }

    pub fn final_base_loss(&self) -> f64 {
        self.last().base_loss
    }

    /// Writes `step,theta_0..,a,b,u,L,L_tilde,grad_norm`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let dim = self.rows.first().map_or(0, |r| r.theta.len());
        write!(w, "step")?;
        for i in 0..dim {
            write!(w, ",theta_{i}")?;
        }
        writeln!(w, ",a,b,u,L,L_tilde,grad_norm")?;
        for r in &self.rows {
            write!(w, "{}", r.step)?;
            for t in &r.theta {
                write!(w, ",{t}")?;
            }
            writeln!(
                w,
                ",{},{},{},{},{},{}",
                r.a, r.b, r.u, r.base_loss, r.loss, r.grad_norm
            )?;
        }
        Ok(())
    }

    pub fn summary(&self) -> TrajectorySummary<'_> {
        TrajectorySummary {
            field: &self.field,
            objective: self.objective,
            spec: &self.spec,
            seed: self.seed,
            outcome: self.outcome.outcome,
            certificate: &self.outcome.certificate,
            steps_taken: self.steps_taken,
            recorded_rows: self.rows.len(),
            clamp_events: self.clamp_events,
            saturated_steps: self.saturated_steps,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct TrajectorySummary<'a> {
    pub field: &'a str,
    pub objective: Objective,
    pub spec: &'a OptimizerSpec,
    pub seed: u64,
    pub outcome: Outcome,
    pub certificate: &'a Certificate,
    pub steps_taken: u64,
    pub recorded_rows: usize,
    pub clamp_events: u64,
    pub saturated_steps: u64,
}

fn certificate(row: &TrajectoryRow) -> Certificate {
    Certificate {
        step: row.step,
        a: row.a,
        b: row.b,
        u: row.u,
        base_loss: row.base_loss,
        loss: row.loss,
        grad_norm: row.grad_norm,
    }
}

fn looks_divergent(row: &TrajectoryRow, th: &Thresholds) -> bool {
    row.b >= th.b_max && (row.u - 1.0).abs() <= th.u_tol && row.a.abs() <= 10.0 * th.a_tol
}

/// First index of the window covering the final quarter of `len` rows, plus
/// the row just before it so the first step of the quarter is compared too.
fn final_quarter_start(len: usize) -> usize {
    len.saturating_sub((len / 4).max(1) + 1)
}

fn b_rises_over(rows: &[TrajectoryRow]) -> bool {
    rows.windows(2).all(|w| w[1].b >= w[0].b)
        && rows.len() >= 2
        && rows[rows.len() - 1].b > rows[0].b
}

/// Labels a trajectory from its recorded rows.
///
/// Precedence: any non-finite row gives `numerical-failure`; otherwise the
/// final row decides between `converged-finite`, `minimum-at-infinity` and the
/// `budget-exhausted` fallback.
pub fn classify_trajectory(rows: &[TrajectoryRow], th: &Thresholds) -> OutcomeLabel {
    let last = rows.last().expect("classify_trajectory needs at least one row");
    let outcome = if rows.iter().any(|r| !r.is_finite()) {
        Outcome::NumericalFailure
    } else if last.grad_norm <= th.grad_tol && last.b.abs() <= th.b_max {
        Outcome::ConvergedFinite
    } else if looks_divergent(last, th) && b_rises_over(&rows[final_quarter_start(rows.len())..]) {
        Outcome::MinimumAtInfinity
    } else {
        Outcome::BudgetExhausted
    };
    let failed = rows.iter().find(|r| !r.is_finite()).unwrap_or(last);
    OutcomeLabel {
        outcome,
        certificate: certificate(if outcome == Outcome::NumericalFailure {
            failed
        } else {
            last
        }),
    }
}

enum State {
    Gd,
    Momentum(Vec<f64>),
    Adam { m: Vec<f64>, v: Vec<f64>, t: i32 },
}

impl State {
    fn new(spec: &OptimizerSpec, len: usize) -> Self {
        match spec.kind {
            OptimizerKind::Gd => State::Gd,
            OptimizerKind::Momentum => State::Momentum(vec![0.0; len]),
            OptimizerKind::Adam => State::Adam {
                m: vec![0.0; len],
                v: vec![0.0; len],
                t: 0,
            },
        }
    }

    fn step(&mut self, spec: &OptimizerSpec, x: &mut [f64], g: &[f64]) {
        let eta = spec.step_size;
        match self {
            State::Gd => {
                for (xi, gi) in x.iter_mut().zip(g) {
                    *xi -= eta * gi;
                }
            }
            State::Momentum(vel) => {
                for ((xi, vi), gi) in x.iter_mut().zip(vel.iter_mut()).zip(g) {
                    *vi = spec.momentum * *vi + gi;
                    *xi -= eta * *vi;
                }
            }
            State::Adam { m, v, t } => {
                *t = t.saturating_add(1);
                let c1 = 1.0 - spec.beta1.powi(*t);
                let c2 = 1.0 - spec.beta2.powi(*t);
                for (((xi, mi), vi), gi) in x.iter_mut().zip(m.iter_mut()).zip(v.iter_mut()).zip(g) {
                    *mi = spec.beta1 * *mi + (1.0 - spec.beta1) * gi;
                    *vi = spec.beta2 * *vi + (1.0 - spec.beta2) * gi * gi;
                    *xi -= eta * (*mi / c1) / ((*vi / c2).sqrt() + spec.epsilon);
                }
            }
        }
    }
}

struct Recorder {
    rows: Vec<TrajectoryRow>,
    /// Index of the last recorded row whose `b` dropped below its predecessor.
    last_b_drop: usize,
}

impl Recorder {
    fn push(&mut self, row: TrajectoryRow) {
        if let Some(prev) = self.rows.last() {
            if !(row.b >= prev.b) {
                self.last_b_drop = self.rows.len();
            }
        }
        self.rows.push(row);
    }

    /// Whether `b` rose monotonically over the final quarter of the rows.
    fn b_rising_tail(&self) -> bool {
        let n = self.rows.len();
        if n < 2 {
            return false;
        }
        let start = final_quarter_start(n);
        self.last_b_drop <= start && self.rows[n - 1].b > self.rows[start].b
    }
}

fn evaluate_row(
    field: &ScalarField,
    objective: Objective,
    x: &[f64],
    cfg: &AugConfig,
    step: u64,
    grad: &mut Vec<f64>,
) -> TrajectoryRow {
    let n = field.dim();
    let failed = |theta: &[f64], a, b| TrajectoryRow {
        step,
        theta: theta.to_vec(),
        a,
        b,
        u: f64::NAN,
        base_loss: f64::NAN,
        loss: f64::NAN,
        grad_norm: f64::NAN,
        saturated: false,
    };
    match objective {
        Objective::Augmented => {
            let (theta, a, b) = (&x[..n], x[n], x[n + 1]);
            match value_and_gradient(field, theta, a, b, cfg) {
                Ok((e, g)) => {
                    grad.clear();
                    grad.extend_from_slice(&g.d_theta);
                    grad.push(g.d_a);
                    grad.push(g.d_b);
                    TrajectoryRow {
                        step,
                        theta: theta.to_vec(),
                        a,
                        b,
                        u: e.u,
                        base_loss: e.base,
                        loss: e.value,
                        grad_norm: norm(grad),
                        saturated: e.saturated,
                    }
                }
                Err(_) => failed(theta, a, b),
            }
        }
        Objective::Plain => match (field.eval(x), field.grad(x)) {
            (Ok(v), Ok(g)) => {
                let grad_norm = norm(&g);
                *grad = g;
                TrajectoryRow {
                    step,
                    theta: x.to_vec(),
                    a: 0.0,
                    b: 0.0,
                    u: 0.0,
                    base_loss: v,
                    loss: v,
                    grad_norm,
                    saturated: false,
                }
            }
            _ => failed(x, 0.0, 0.0),
        },
    }
}

/// Runs `spec` on the augmented loss from `start`.
///
/// Deterministic in its inputs; `seed` is carried into the trajectory for
/// provenance. Never returns an error for numerical trouble mid-run; that
/// becomes a `numerical-failure` label.
pub fn run_optimizer(
    field: &ScalarField,
    start: &AugPoint,
    spec: &OptimizerSpec,
    cfg: &AugConfig,
    seed: u64,
) -> Result<Trajectory, OptimizeError> {
    let th = Thresholds {
        grad_tol: spec.grad_tol,
        ..Thresholds::default()
    };
    run_with(field, Objective::Augmented, start, spec, cfg, &th, seed)
}

/// [`run_optimizer`] with explicit objective and thresholds. For
/// [`Objective::Plain`] only `start.theta` is used.
pub fn run_with(
    field: &ScalarField,
    objective: Objective,
    start: &AugPoint,
    spec: &OptimizerSpec,
    cfg: &AugConfig,
    th: &Thresholds,
    seed: u64,
) -> Result<Trajectory, OptimizeError> {
    spec.validate()?;
    cfg.validate()?;
    field.check_dim(start.theta.as_slice())?;
    let n = field.dim();

    let mut x = match objective {
        Objective::Augmented => start.to_vec(),
        Objective::Plain => start.theta.as_slice().to_vec(),
    };
    let mut clamp_events = 0;
    if field.clamp_to_domain(&mut x[..n]) {
        clamp_events += 1;
    }

    let mut state = State::new(spec, x.len());
    let mut grad = Vec::with_capacity(x.len());
    let mut rec = Recorder {
        rows: Vec::new(),
        last_b_drop: 0,
    };
    let mut saturated_steps = 0;
    let mut steps_taken = 0;

    for k in 0..=spec.max_steps {
        steps_taken = k;
        let row = evaluate_row(field, objective, &x, cfg, k, &mut grad);
        if row.saturated {
            saturated_steps += 1;
        }
        let finite = row.is_finite() && grad.iter().all(|g| g.is_finite());
        let converged = finite && row.grad_norm <= th.grad_tol && row.b.abs() <= th.b_max;
        let last = !finite || converged || k == spec.max_steps;
        let divergence_candidate = finite && objective == Objective::Augmented && looks_divergent(&row, th);

        let keep = k < FULL_RECORD_STEPS || k % RECORD_STRIDE == 0 || last || divergence_candidate;
        if keep {
            rec.push(row);
        }
        if last || (divergence_candidate && rec.b_rising_tail()) {
            break;
        }

        state.step(spec, &mut x, &grad);
        if field.clamp_to_domain(&mut x[..n]) {
            clamp_events += 1;
        }
    }

    let outcome = classify_trajectory(&rec.rows, th);
    Ok(Trajectory {
        field: field.name().to_string(),
        objective,
        spec: *spec,
        seed,
        rows: rec.rows,
        outcome,
        clamp_events,
        saturated_steps,
        steps_taken,
    })
}

/// Plain and augmented runs from the same θ with the same spec and seed.
#[derive(Debug, Clone, Serialize)]
pub struct BaselineComparison {
    pub plain: Trajectory,
    pub augmented: Trajectory,
}

impl BaselineComparison {
    pub fn report(&self) -> BaselineReport {
        BaselineReport {
            field: self.plain.field.clone(),
            plain_outcome: self.plain.outcome.outcome,
            plain_final_loss: self.plain.final_base_loss(),
            augmented_outcome: self.augmented.outcome.outcome,
            augmented_final_base_loss: self.augmented.final_base_loss(),
            augmented_final_a: self.augmented.last().a,
            augmented_final_b: self.augmented.last().b,
            augmented_final_u: self.augmented.last().u,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BaselineReport {
    pub field: String,
    pub plain_outcome: Outcome,
    pub plain_final_loss: f64,
    pub augmented_outcome: Outcome,
    pub augmented_final_base_loss: f64,
    pub augmented_final_a: f64,
    pub augmented_final_b: f64,
    pub augmented_final_u: f64,
}

pub fn compare_baseline(
    field: &ScalarField,
    theta_start: &ThetaVector,
    aux_start: (f64, f64),
    spec: &OptimizerSpec,
    cfg: &AugConfig,
    seed: u64,
) -> Result<BaselineComparison, OptimizeError> {
    let start = AugPoint::new(theta_start.clone(), aux_start.0, aux_start.1)?;
    let th = Thresholds {
        grad_tol: spec.grad_tol,
        ..Thresholds::default()
    };
    let (plain, augmented) = rayon::join(
        || run_with(field, Objective::Plain, &start, spec, cfg, &th, seed),
        || run_with(field, Objective::Augmented, &start, spec, cfg, &th, seed),
    );
    Ok(BaselineComparison {
        plain: plain?,
        augmented: augmented?,
    })
}

/// How a run's starting point is chosen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum StartSpec {
    Explicit {
        theta: Vec<f64>,
        a: f64,
        b: f64,
    },
    /// θ uniform in the domain, `a`, `b` uniform in the seed box.
    SeededRandom,
    /// A registered bad local minimum of the field.
    BadMinimum {
        index: usize,
        #[serde(default = "default_a")]
        a: f64,
        #[serde(default)]
        b: f64,
    },
    /// The registered global minimizer.
    GlobalMinimum {
        #[serde(default)]
        a: f64,
        #[serde(default)]
        b: f64,
    },
}

fn default_a() -> f64 {
    DEFAULT_AUX_START.0
}

/// Uniform draw over the field's domain and the auxiliary seed box.
pub fn random_point(field: &ScalarField, rng: &mut impl Rng) -> AugPoint {
    let theta: Vec<f64> = field
        .domain()
        .iter()
        .map(|iv| rng.gen_range(iv.lo..=iv.hi))
        .collect();
    let a = rng.gen_range(SEED_A_RANGE.0..=SEED_A_RANGE.1);
    let b = rng.gen_range(SEED_B_RANGE.0..=SEED_B_RANGE.1);
    AugPoint {
        theta: ThetaVector::new(theta).expect("domain bounds are finite"),
        a,
        b,
    }
}

/// Independent, reproducible RNG for run `index` under `seed`.
pub fn run_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn resolve_start(field: &ScalarField, start: &StartSpec, seed: u64) -> Result<AugPoint, OptimizeError> {
    let point = match start {
        StartSpec::Explicit { theta, a, b } => {
            field.check_dim(theta)?;
            AugPoint::new(ThetaVector::new(theta.clone())?, *a, *b)?
        }
        StartSpec::SeededRandom => random_point(field, &mut run_rng(seed, 0)),
        StartSpec::BadMinimum { index, a, b } => {
            let m = field.known_bad_minima().get(*index).ok_or_else(|| {
                OptimizeError::InvalidStart(format!(
                    "field `{}` has {} registered bad minima, index {index} requested",
                    field.name(),
                    field.known_bad_minima().len()
                ))
            })?;
            AugPoint::new(m.theta.clone(), *a, *b)?
        }
        StartSpec::GlobalMinimum { a, b } => {
            let theta = field.global_min().ok_or_else(|| {
                OptimizeError::InvalidStart(format!(
                    "field `{}` has no registered global minimum",
                    field.name()
                ))
            })?;
            AugPoint::new(theta.clone(), *a, *b)?
        }
    };
    Ok(point)
}

/// One run of a sweep.
#[derive(Debug, Clone)]
pub struct SweepJob<'a> {
    pub field: &'a ScalarField,
    pub start: AugPoint,
    pub spec: OptimizerSpec,
}

/// Runs jobs in parallel; results come back in job order.
pub fn run_sweep(jobs: &[SweepJob<'_>], cfg: &AugConfig, seed: u64) -> Vec<Result<Trajectory, OptimizeError>> {
    jobs.par_iter()
        .map(|job| run_optimizer(job.field, &job.start, &job.spec, cfg, seed))
        .collect()
}

/// The standard sweep: `n_starts` seeded random starts per field, each run
/// under plain GD, heavy-ball momentum and Adam.
pub fn sweep_grid<'a>(
    fields: &[&'a ScalarField],
    n_starts: usize,
    max_steps: u64,
    seed: u64,
) -> Vec<SweepJob<'a>> {
    let specs = [
        OptimizerSpec::gd(1e-3, max_steps),
        OptimizerSpec::momentum(1e-4, 0.9, max_steps),
        OptimizerSpec::adam(1e-2, max_steps),
    ];
    let mut jobs = Vec::new();
    for (fi, field) in fields.iter().enumerate() {
        for s in 0..n_starts {
            let start = random_point(field, &mut run_rng(seed, (fi * n_starts + s) as u64));
            for spec in specs {
                jobs.push(SweepJob {
                    field,
                    start: start.clone(),
                    spec,
                });
            }
        }
    }
    jobs
}
