//! The augmented loss
//!
//! ```text
//! L̃(θ, a, b) = L(θ)·(1 + (a·eᵇ − 1)²) + λ·a²
//! ```
//!
//! and its closed-form gradient. The product `u = a·eᵇ` is formed in log
//! space, so the regime of interest (`a → 0`, `b → ∞`, `u ≈ 1`) stays
//! representable long after `eᵇ` alone would lose precision.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diff::Scalar;
use crate::field::{FieldError, ScalarField, ThetaVector};

pub const DEFAULT_LAMBDA: f64 = 1.0;
pub const DEFAULT_B_CLAMP: f64 = 700.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AugError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("exponent {exponent} exceeds clamp {clamp} at a = {a}, b = {b}")]
    Saturated {
        a: f64,
        b: f64,
        exponent: f64,
        clamp: f64,
    },
    #[error("non-finite {what}")]
    NonFinite { what: &'static str },
    #[error("invalid augmentation config: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SaturationPolicy {
    /// Refuse to evaluate past the clamp.
    Error,
    /// Clamp the exponent and mark the result.
    #[default]
    FlagAndSaturate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AugConfig {
    pub lambda: f64,
    pub b_clamp: f64,
    pub saturation: SaturationPolicy,
}

impl Default for AugConfig {
    fn default() -> Self {
        Self {
            lambda: DEFAULT_LAMBDA,
            b_clamp: DEFAULT_B_CLAMP,
            saturation: SaturationPolicy::FlagAndSaturate,
        }
    }
}

impl AugConfig {
    pub fn new(lambda: f64, b_clamp: f64, saturation: SaturationPolicy) -> Result<Self, AugError> {
        let cfg = Self {
            lambda,
            b_clamp,
            saturation,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_lambda(lambda: f64) -> Result<Self, AugError> {
        Self::new(lambda, DEFAULT_B_CLAMP, SaturationPolicy::FlagAndSaturate)
    }

    pub fn validate(&self) -> Result<(), AugError> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(AugError::InvalidConfig(format!(
                "lambda must be positive and finite, got {}",
                self.lambda
            )));
        }
        if !(self.b_clamp > 0.0 && self.b_clamp.exp().is_finite()) {
            return Err(AugError::InvalidConfig(format!(
                "b_clamp must be positive with exp(b_clamp) finite, got {}",
                self.b_clamp
            )));
        }
        Ok(())
    }
}

/// A point `(θ, a, b)` of the augmented parameter space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugPoint {
    pub theta: ThetaVector,
    pub a: f64,
    pub b: f64,
}

impl AugPoint {
    pub fn new(theta: ThetaVector, a: f64, b: f64) -> Result<Self, AugError> {
        if !a.is_finite() || !b.is_finite() {
            return Err(AugError::NonFinite {
                what: "auxiliary parameter",
            });
        }
        Ok(Self { theta, a, b })
    }

    /// Flattened `[θ…, a, b]`.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = self.theta.as_slice().to_vec();
        v.push(self.a);
        v.push(self.b);
        v
    }

    pub fn from_slice(x: &[f64]) -> Result<Self, AugError> {
        let n = x.len();
        if n < 3 {
            return Err(AugError::InvalidConfig(format!(
                "flattened point needs at least 3 entries, got {n}"
            )));
        }
        Self::new(ThetaVector::new(x[..n - 2].to_vec())?, x[n - 2], x[n - 1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UValue {
    pub u: f64,
    pub saturated: bool,
}

/// Gradient of `L̃`, split into θ and auxiliary blocks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AugGradient {
    pub d_theta: Vec<f64>,
    pub d_a: f64,
    pub d_b: f64,
    pub saturated: bool,
}

impl AugGradient {
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = self.d_theta.clone();
        v.push(self.d_a);
        v.push(self.d_b);
        v
    }

    pub fn norm(&self) -> f64 {
        (self.d_theta.iter().map(|g| g * g).sum::<f64>() + self.d_a * self.d_a + self.d_b * self.d_b)
            .sqrt()
    }
}

/// Value of `L̃` with the pieces that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evaluation {
    /// `L(θ)`
    pub base: f64,
    /// `L̃(θ, a, b)`
    pub value: f64,
    pub u: f64,
    pub saturated: bool,
}

fn saturate(cfg: &AugConfig, a: f64, b: f64, exponent: f64) -> Result<f64, AugError> {
    match cfg.saturation {
        SaturationPolicy::Error => Err(AugError::Saturated {
            a,
            b,
            exponent,
            clamp: cfg.b_clamp,
        }),
        SaturationPolicy::FlagAndSaturate => Ok(exponent.clamp(-cfg.b_clamp, cfg.b_clamp)),
    }
}

fn check_aux(a: f64, b: f64) -> Result<(), AugError> {
    if a.is_finite() && b.is_finite() {
        Ok(())
    } else {
        Err(AugError::NonFinite {
            what: "auxiliary parameter",
        })
    }
}

/// `u = a·eᵇ`, computed as `sign(a)·exp(ln|a| + b)`.
pub fn eval_u(a: f64, b: f64, cfg: &AugConfig) -> Result<UValue, AugError> {
    check_aux(a, b)?;
    if a == 0.0 {
        return Ok(UValue {
            u: 0.0,
            saturated: false,
        });
    }
    let exponent = a.abs().ln() + b;
    if exponent.abs() <= cfg.b_clamp {
        return Ok(UValue {
            u: a.signum() * exponent.exp(),
            saturated: false,
        });
    }
    let clamped = saturate(cfg, a, b, exponent)?;
    Ok(UValue {
        u: a.signum() * clamped.exp(),
        saturated: true,
    })
}

/// `eᵇ` alone, subject to the same clamp.
fn exp_b(a: f64, b: f64, cfg: &AugConfig) -> Result<(f64, bool), AugError> {
    if b.abs() <= cfg.b_clamp {
        Ok((b.exp(), false))
    } else {
        Ok((saturate(cfg, a, b, b)?.exp(), true))
    }
}

fn finish(value: f64, saturated: bool, cfg: &AugConfig) -> Result<bool, AugError> {
    if value.is_finite() {
        return Ok(saturated);
    }
    match cfg.saturation {
        SaturationPolicy::Error => Err(AugError::NonFinite {
            what: "augmented value",
        }),
        SaturationPolicy::FlagAndSaturate => Ok(true),
    }
}

/// `L̃` for a given base value `L ≥ 0`.
pub fn augmented_from_base(base: f64, a: f64, b: f64, cfg: &AugConfig) -> Result<Evaluation, AugError> {
    let UValue { u, saturated } = eval_u(a, b, cfg)?;
    let value = base * (1.0 + (u - 1.0) * (u - 1.0)) + cfg.lambda * a * a;
    let saturated = finish(value, saturated, cfg)?;
    Ok(Evaluation {
        base,
        value,
        u,
        saturated,
    })
}

/// Auxiliary partials for a given base value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxPartials {
    pub d_a: f64,
    pub d_b: f64,
    /// `1 + (u − 1)²`, the factor applied to `∇L`.
    pub multiplier: f64,
    pub u: f64,
    pub saturated: bool,
}

/// `∂ₐL̃ = 2L(u − 1)eᵇ + 2λa` and `∂_bL̃ = 2L(u − 1)u`.
pub fn aux_partials(base: f64, a: f64, b: f64, cfg: &AugConfig) -> Result<AuxPartials, AugError> {
    let UValue { u, saturated } = eval_u(a, b, cfg)?;
    let (eb, eb_saturated) = exp_b(a, b, cfg)?;
    let r = u - 1.0;
    let d_a = 2.0 * base * r * eb + 2.0 * cfg.lambda * a;
    let d_b = 2.0 * base * r * u;
    let multiplier = 1.0 + r * r;
    let mut saturated = saturated || eb_saturated;
    for v in [d_a, d_b, multiplier] {
        saturated = finish(v, saturated, cfg)?;
    }
    Ok(AuxPartials {
        d_a,
        d_b,
        multiplier,
        u,
        saturated,
    })
}

/// Value and gradient in one pass over a flat θ slice.
pub fn value_and_gradient(
    field: &ScalarField,
    theta: &[f64],
    a: f64,
    b: f64,
    cfg: &AugConfig,
) -> Result<(Evaluation, AugGradient), AugError> {
    let base = field.eval(theta)?;
    let grad_base = field.grad(theta)?;
    let mut eval = augmented_from_base(base, a, b, cfg)?;
    let aux = aux_partials(base, a, b, cfg)?;
    let d_theta: Vec<f64> = grad_base.iter().map(|g| g * aux.multiplier).collect();
    let mut saturated = aux.saturated || eval.saturated;
    for &g in &d_theta {
        saturated = finish(g, saturated, cfg)?;
    }
    eval.saturated = saturated;
    Ok((
        eval,
        AugGradient {
            d_theta,
            d_a: aux.d_a,
            d_b: aux.d_b,
            saturated,
        },
    ))
}

pub fn evaluate(field: &ScalarField, p: &AugPoint, cfg: &AugConfig) -> Result<Evaluation, AugError> {
    let base = field.eval(p.theta.as_slice())?;
    augmented_from_base(base, p.a, p.b, cfg)
}

/// `L̃(θ, a, b)`.
pub fn eval_augmented(field: &ScalarField, p: &AugPoint, cfg: &AugConfig) -> Result<f64, AugError> {
    evaluate(field, p, cfg).map(|e| e.value)
}

/// `∇L̃(θ, a, b)` from the closed form.
pub fn grad_augmented(field: &ScalarField, p: &AugPoint, cfg: &AugConfig) -> Result<AugGradient, AugError> {
    value_and_gradient(field, p.theta.as_slice(), p.a, p.b, cfg).map(|(_, g)| g)
}

/// Direct substitution into the augmented loss over a generic scalar:
/// `a·exp(b)` is formed naively, no clamps, no domain checks. Used by the
/// derivative oracles.
pub fn lifted_augmented<T: Scalar>(field: &ScalarField, theta: &[T], a: T, b: T, lambda: f64) -> T {
    let base = field.value_lifted(theta);
    let r = a * b.exp() - T::constant(1.0);
    base * (T::constant(1.0) + r * r) + T::constant(lambda) * a * a
}

/// [`lifted_augmented`] over a flat `[θ…, a, b]` vector.
pub fn lifted_augmented_flat<T: Scalar>(field: &ScalarField, x: &[T], lambda: f64) -> T {
    let n = x.len();
    lifted_augmented(field, &x[..n - 2], x[n - 2], x[n - 1], lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diff::{dual_gradient, fd_gradient, max_relative_error, DEFAULT_H_SCALE};
    use crate::field::field_by_name;
    use proptest::prelude::*;
    use std::f64::consts::LN_2;

    fn cfg() -> AugConfig {
        AugConfig::default()
    }

    fn point(theta: &[f64], a: f64, b: f64) -> AugPoint {
        AugPoint::new(ThetaVector::new(theta.to_vec()).unwrap(), a, b).unwrap()
    }

    #[test]
    fn u_examples() {
        assert_eq!(eval_u(0.0, 50.0, &cfg()).unwrap(), UValue { u: 0.0, saturated: false });
        assert_eq!(eval_u(0.5, LN_2, &cfg()).unwrap().u, 1.0);
    }

    #[test]
    fn u_tiny_a_large_b_stays_unflagged_inside_clamp() {
        // ln(1e-300) + 800 ≈ 109.2: representable, so no flag even though b > clamp
        let r = eval_u(1e-300, 800.0, &cfg()).unwrap();
        assert!(!r.saturated);
        let expect = (1e-300f64.ln() + 800.0).exp();
        assert_eq!(r.u, expect);
        assert!((r.u.ln() - 109.2).abs() < 0.1);
    }

    #[test]
    fn u_past_clamp() {
        let r = eval_u(1.0, 800.0, &cfg()).unwrap();
        assert!(r.saturated);
        assert_eq!(r.u, 700f64.exp());
        let neg = eval_u(-1.0, -800.0, &cfg()).unwrap();
        assert!(neg.saturated && neg.u < 0.0);

        let strict = AugConfig {
            saturation: SaturationPolicy::Error,
            ..cfg()
        };
        assert!(matches!(
            eval_u(1.0, 800.0, &strict),
            Err(AugError::Saturated { .. })
        ));
        assert!(matches!(eval_u(f64::NAN, 0.0, &cfg()), Err(AugError::NonFinite { .. })));
    }

    #[test]
    fn config_validation() {
        assert!(AugConfig::with_lambda(0.0).is_err());
        assert!(AugConfig::with_lambda(-1.0).is_err());
        assert!(AugConfig::new(1.0, 710.0, SaturationPolicy::Error).is_err());
        assert!(AugConfig::new(1.0, 700.0, SaturationPolicy::Error).is_ok());
    }

    #[test]
    fn value_examples() {
        let c = cfg();
        assert_eq!(augmented_from_base(0.0, 0.0, 5.0, &c).unwrap().value, 0.0);
        assert_eq!(augmented_from_base(1.0, 0.0, 0.0, &c).unwrap().value, 2.0);
        assert_eq!(augmented_from_base(2.0, 0.5, LN_2, &c).unwrap().value, 2.25);
    }

    #[test]
    fn value_example_against_naive_substitution() {
        // 2·(1 + (0.5·exp(ln 2) − 1)²) + 0.25, evaluated without log-space tricks
        let naive = 2.0 * (1.0 + (0.5 * LN_2.exp() - 1.0).powi(2)) + 0.25;
        let ours = augmented_from_base(2.0, 0.5, LN_2, &cfg()).unwrap().value;
        assert!((naive - ours).abs() < 1e-15);
    }

    #[test]
    fn gradient_examples() {
        let c = cfg();
        let p = aux_partials(1.0, 0.0, 0.0, &c).unwrap();
        assert_eq!(p.d_a, -2.0);
        for b in [-3.0, 0.0, 7.0, 40.0] {
            assert_eq!(aux_partials(0.7, 0.0, b, &c).unwrap().d_b, 0.0);
        }
        let quad = field_by_name("quadratic-1d").unwrap();
        let g = grad_augmented(quad, &point(&[1.0], 0.0, 0.0), &c).unwrap();
        assert_eq!(g.d_theta, vec![4.0]);
        assert_eq!(g.d_a, -2.0);
        let fd = fd_gradient(|x| lifted_augmented_flat(quad, x, 1.0), &[1.0, 0.0, 0.0], DEFAULT_H_SCALE).unwrap();
        assert!(max_relative_error(&fd, &g.to_vec()) <= 1e-6);
    }

    #[test]
    fn dual_check_at_u_equal_one() {
        let quad = field_by_name("quadratic-1d").unwrap();
        // θ = 1 gives L = 1
        let g = dual_gradient(|x| lifted_augmented_flat(quad, x, 1.0), &[1.0, 0.5, LN_2]).unwrap();
        assert!((g[1] - 1.0).abs() < 1e-15);
        assert!(g[2].abs() < 1e-15);
        let an = grad_augmented(quad, &point(&[1.0], 0.5, LN_2), &cfg()).unwrap();
        assert_eq!(an.d_a, 1.0);
        assert_eq!(an.d_b, 0.0);
    }

    #[test]
    fn saturated_gradient_is_flagged_or_refused() {
        let quad = field_by_name("quadratic-1d").unwrap();
        let g = grad_augmented(quad, &point(&[1.0], 1e-300, 800.0), &cfg()).unwrap();
        assert!(g.saturated);
        let strict = AugConfig {
            saturation: SaturationPolicy::Error,
            ..cfg()
        };
        assert!(grad_augmented(quad, &point(&[1.0], 1e-300, 800.0), &strict).is_err());
        assert!(grad_augmented(quad, &point(&[1.0], 1.0, 400.0), &strict).is_err());
    }

    #[test]
    fn field_errors_propagate() {
        let quad = field_by_name("quadratic-1d").unwrap();
        assert!(matches!(
            eval_augmented(quad, &point(&[9.0], 0.0, 0.0), &cfg()),
            Err(AugError::Field(FieldError::OutsideDomain { .. }))
        ));
    }

    #[test]
    fn flat_roundtrip() {
        let p = point(&[0.25, -1.0], 0.5, 3.0);
        assert_eq!(AugPoint::from_slice(&p.to_vec()).unwrap(), p);
        assert!(AugPoint::from_slice(&[1.0, 2.0]).is_err());
    }

    proptest! {
        #[test]
        fn lower_bound_holds(base in 0.0..1e3f64, a in -5.0..5.0f64, b in -10.0..10.0f64, lambda in 1e-3..1e2f64) {
            let c = AugConfig::with_lambda(lambda).unwrap();
            let e = augmented_from_base(base, a, b, &c).unwrap();
            prop_assert!(e.value >= base);
            prop_assert!(e.value >= 0.0);
        }

        #[test]
        fn restriction_to_a_zero_is_twice_base(base in 0.0..1e3f64, b1 in -700.0..700.0f64, b2 in -700.0..700.0f64) {
            let c = cfg();
            let v1 = augmented_from_base(base, 0.0, b1, &c).unwrap().value;
            let v2 = augmented_from_base(base, 0.0, b2, &c).unwrap().value;
            prop_assert_eq!(v1, 2.0 * base);
            prop_assert_eq!(v1, v2);
        }

        #[test]
        fn global_min_slice_is_regularizer(a in -5.0..5.0f64, b in -10.0..10.0f64) {
            let c = cfg();
            let v = augmented_from_base(0.0, a, b, &c).unwrap().value;
            prop_assert_eq!(v, a * a);
            prop_assert!(v >= augmented_from_base(0.0, 0.0, b, &c).unwrap().value);
        }
    }
}
