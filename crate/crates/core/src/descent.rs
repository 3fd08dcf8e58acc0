//! Monotone gradient descent with step halving.
//!
//! Shared by field normalization, bad-minimum registration and the
//! critical-point finder.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescentOptions {
    pub initial_step: f64,
    pub max_step: f64,
    pub max_iters: usize,
    /// Halvings tried per iteration before the run is declared stalled.
    pub max_halvings: u32,
    pub grad_tol: f64,
    /// Upper bound on the Euclidean length of a single step, if any.
    pub max_displacement: Option<f64>,
}

impl Default for DescentOptions {
    fn default() -> Self {
        Self {
            initial_step: 1e-2,
            max_step: 1.0,
            max_iters: 20_000,
            max_halvings: 60,
            grad_tol: 1e-8,
            max_displacement: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DescentStatus {
    Converged,
    Stalled,
    BudgetExhausted,
    NonFinite,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DescentResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub grad_norm: f64,
    pub iters: usize,
    pub status: DescentStatus,
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Runs descent on `objective`, which returns `(value, gradient)` or `None`
/// when the point cannot be evaluated. `project` maps a trial point back into
/// the feasible set in place.
///
/// A trial is accepted when the value strictly decreases, or when the change
/// is below rounding of the current value and the gradient norm shrinks.
/// The second clause lets the run finish near minima whose value is a
/// difference of two O(1) numbers.
pub fn backtracking_descent<F, P>(
    objective: F,
    project: P,
    x0: &[f64],
    opts: &DescentOptions,
) -> DescentResult
where
    F: Fn(&[f64]) -> Option<(f64, Vec<f64>)>,
    P: Fn(&mut [f64]),
{
    let mut x = x0.to_vec();
    project(&mut x);
    let Some((mut fx, mut g)) = objective(&x) else {
        return DescentResult {
            x,
            value: f64::NAN,
            grad_norm: f64::NAN,
            iters: 0,
            status: DescentStatus::NonFinite,
        };
    };
    let mut gn = norm(&g);
    let mut step = opts.initial_step;
    let mut trial = vec![0.0; x.len()];

    for iter in 0..opts.max_iters {
        if gn <= opts.grad_tol {
            return DescentResult {
                x,
                value: fx,
                grad_norm: gn,
                iters: iter,
                status: DescentStatus::Converged,
            };
        }
        let slack = 64.0 * f64::EPSILON * fx.abs().max(1.0);
        if let Some(cap) = opts.max_displacement {
            step = step.min(cap / gn);
        }
        let mut accepted = None;
        for _ in 0..=opts.max_halvings {
            for ((t, xi), gi) in trial.iter_mut().zip(&x).zip(&g) {
                *t = xi - step * gi;
            }
            project(&mut trial);
            if let Some((ft, gt)) = objective(&trial) {
                if ft < fx || (ft <= fx + slack && norm(&gt) < gn) {
                    accepted = Some((ft, gt));
                    break;
                }
            }
            step *= 0.5;
        }
        match accepted {
            Some((ft, gt)) => {
                std::mem::swap(&mut x, &mut trial);
                fx = ft;
                gn = norm(&gt);
                g = gt;
                step = (2.0 * step).min(opts.max_step);
            }
            None => {
                return DescentResult {
                    x,
                    value: fx,
                    grad_norm: gn,
                    iters: iter,
                    status: DescentStatus::Stalled,
                };
            }
        }
    }
    let status = if gn <= opts.grad_tol {
        DescentStatus::Converged
    } else {
        DescentStatus::BudgetExhausted
    };
    DescentResult {
        x,
        value: fx,
        grad_norm: gn,
        iters: opts.max_iters,
        status,
    }
}
