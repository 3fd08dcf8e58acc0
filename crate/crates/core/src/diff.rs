//! Derivative oracles: central finite differences and forward-mode dual numbers.
//!
//! Neither is used on the hot path. The analytic gradients in [`crate::field`]
//! and [`crate::augment`] are checked against both.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use thiserror::Error;

/// Default relative step for central differences.
pub const DEFAULT_H_SCALE: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiffError {
    #[error("non-finite value {value} at stencil point {index} (coordinate {coord})")]
    NonFiniteStencil { index: usize, coord: usize, value: f64 },
    #[error("non-finite tangent in coordinate {coord}")]
    NonFiniteTangent { coord: usize },
    #[error("empty point")]
    EmptyPoint,
    #[error("h_scale must be positive and finite, got {0}")]
    BadStep(f64),
}

/// Real-valued scalar that can be pushed through a loss formula.
///
/// Implemented for `f64` and [`Dual`], so a single generic formula yields both
/// values and exact directional derivatives.
pub trait Scalar:
    Copy
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn constant(v: f64) -> Self;
    fn value(self) -> f64;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sqrt(self) -> Self;
    fn powi(self, n: i32) -> Self;
    fn powf(self, p: f64) -> Self;

    fn square(self) -> Self {
        self * self
    }
}

impl Scalar for f64 {
    fn constant(v: f64) -> Self {
        v
    }
    fn value(self) -> f64 {
        self
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    fn powf(self, p: f64) -> Self {
        f64::powf(self, p)
    }
}

/// Dual number `primal + tangent·ε` with `ε² = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual {
    pub primal: f64,
    pub tangent: f64,
}

impl Dual {
    pub const fn new(primal: f64, tangent: f64) -> Self {
        Self { primal, tangent }
    }

    /// A variable seeded with unit tangent.
    pub const fn variable(primal: f64) -> Self {
        Self::new(primal, 1.0)
    }

    fn chain(self, f: f64, df: f64) -> Self {
        Self::new(f, df * self.tangent)
    }
}

impl fmt::Display for Dual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}ε", self.primal, self.tangent)
    }
}

impl From<f64> for Dual {
    fn from(v: f64) -> Self {
        Self::new(v, 0.0)
    }
}

impl Add for Dual {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.primal + rhs.primal, self.tangent + rhs.tangent)
    }
}

impl Sub for Dual {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.primal - rhs.primal, self.tangent - rhs.tangent)
    }
}

impl Mul for Dual {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.primal * rhs.primal,
            self.primal * rhs.tangent + self.tangent * rhs.primal,
        )
    }
}

impl Div for Dual {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let q = self.primal / rhs.primal;
        Self::new(q, (self.tangent - q * rhs.tangent) / rhs.primal)
    }
}

impl Neg for Dual {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.primal, -self.tangent)
    }
}

impl Scalar for Dual {
    fn constant(v: f64) -> Self {
        Self::from(v)
    }
    fn value(self) -> f64 {
        self.primal
    }
    fn exp(self) -> Self {
        let e = self.primal.exp();
        self.chain(e, e)
    }
    fn ln(self) -> Self {
        self.chain(self.primal.ln(), 1.0 / self.primal)
    }
    fn sin(self) -> Self {
        self.chain(self.primal.sin(), self.primal.cos())
    }
    fn cos(self) -> Self {
        self.chain(self.primal.cos(), -self.primal.sin())
    }
    fn sqrt(self) -> Self {
        let s = self.primal.sqrt();
        self.chain(s, 0.5 / s)
    }
    fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Self::from(1.0);
        }
        self.chain(self.primal.powi(n), f64::from(n) * self.primal.powi(n - 1))
    }
    fn powf(self, p: f64) -> Self {
        self.chain(self.primal.powf(p), p * self.primal.powf(p - 1.0))
    }
}

/// Central-difference gradient with per-coordinate step `h_scale·max(1, |x_i|)`.
pub fn fd_gradient<F>(f: F, x: &[f64], h_scale: f64) -> Result<Vec<f64>, DiffError>
where
    F: Fn(&[f64]) -> f64,
{
    if x.is_empty() {
        return Err(DiffError::EmptyPoint);
    }
    if !(h_scale > 0.0 && h_scale.is_finite()) {
        return Err(DiffError::BadStep(h_scale));
    }
    let mut probe = x.to_vec();
    let mut grad = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        let h = h_scale * x[i].abs().max(1.0);
        probe[i] = x[i] + h;
        let hi = f(&probe);
        probe[i] = x[i] - h;
        let lo = f(&probe);
        probe[i] = x[i];
        for (index, value) in [(0, hi), (1, lo)] {
            if !value.is_finite() {
                return Err(DiffError::NonFiniteStencil {
                    index,
                    coord: i,
                    value,
                });
            }
        }
        grad.push((hi - lo) / (2.0 * h));
    }
    Ok(grad)
}

/// Exact gradient by `x.len()` forward passes, one unit tangent per pass.
pub fn dual_gradient<F>(f: F, x: &[f64]) -> Result<Vec<f64>, DiffError>
where
    F: Fn(&[Dual]) -> Dual,
{
    if x.is_empty() {
        return Err(DiffError::EmptyPoint);
    }
    let mut seeded: Vec<Dual> = x.iter().copied().map(Dual::from).collect();
    let mut grad = Vec::with_capacity(x.len());
    for coord in 0..x.len() {
        seeded[coord].tangent = 1.0;
        let out = f(&seeded);
        seeded[coord].tangent = 0.0;
        if !out.tangent.is_finite() {
            return Err(DiffError::NonFiniteTangent { coord });
        }
        grad.push(out.tangent);
    }
    Ok(grad)
}

/// `|x − y| / max(|x|, |y|, 1)`: relative for large magnitudes, absolute near zero.
pub fn relative_error(x: f64, y: f64) -> f64 {
    (x - y).abs() / x.abs().max(y.abs()).max(1.0)
}

/// Largest [`relative_error`] over paired components.
pub fn max_relative_error(xs: &[f64], ys: &[f64]) -> f64 {
    xs.iter()
        .zip(ys)
        .map(|(&x, &y)| relative_error(x, y))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn fd_square_at_three() {
        let g = fd_gradient(|x| x[0] * x[0], &[3.0], 1e-6).unwrap();
        assert!((g[0] - 6.0).abs() <= 1e-6, "{}", g[0]);
    }

    #[test]
    fn fd_exp_at_zero() {
        let g = fd_gradient(|x| x[0].exp(), &[0.0], 1e-6).unwrap();
        assert!((g[0] - 1.0).abs() <= 1e-9, "{}", g[0]);
    }

    #[test]
    fn fd_rejects_non_finite_stencil() {
        let err = fd_gradient(|x| 1.0 / x[0], &[0.0], 0.0).unwrap_err();
        assert_eq!(err, DiffError::BadStep(0.0));
        let err = fd_gradient(|x| (x[0] - 1e-6).ln(), &[0.0], 1e-6).unwrap_err();
        assert!(matches!(err, DiffError::NonFiniteStencil { coord: 0, .. }));
    }

    #[test]
    fn dual_product_rule_x_exp_x() {
        let g = dual_gradient(|x| x[0] * x[0].exp(), &[1.0]).unwrap();
        assert_eq!(g[0], 2.0 * std::f64::consts::E);
    }

    #[test]
    fn dual_constant_function_has_zero_gradient() {
        let g = dual_gradient(|_| Dual::constant(4.2), &[1.0, -2.0, 3.0]).unwrap();
        assert_eq!(g, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn dual_gradient_flags_non_finite() {
        let err = dual_gradient(|x| x[0].sqrt(), &[0.0]).unwrap_err();
        assert_eq!(err, DiffError::NonFiniteTangent { coord: 0 });
    }

    #[test]
    fn lifted_trig_and_powers() {
        let x = Dual::variable(0.7);
        assert!((x.sin().tangent - 0.7f64.cos()).abs() < 1e-15);
        assert!((x.cos().tangent + 0.7f64.sin()).abs() < 1e-15);
        assert!((x.powi(3).tangent - 3.0 * 0.49).abs() < 1e-15);
        assert!((x.powf(2.5).tangent - 2.5 * 0.7f64.powf(1.5)).abs() < 1e-15);
        assert!((x.ln().tangent - 1.0 / 0.7).abs() < 1e-15);
        assert!((x.sqrt().tangent - 0.5 / 0.7f64.sqrt()).abs() < 1e-15);
        assert_eq!(x.powi(0), Dual::new(1.0, 0.0));
    }

    fn operand() -> impl Strategy<Value = (f64, f64)> {
        (-10.0..10.0f64, -10.0..10.0f64)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn tangent_is_linear((x, dx) in operand(), (y, dy) in operand(), k in -5.0..5.0f64) {
            let s = Dual::new(x, dx) + Dual::constant(k) * Dual::new(y, dy);
            prop_assert!((s.tangent - (dx + k * dy)).abs() <= 1e-12 * (1.0 + dx.abs() + (k * dy).abs()));
        }

        #[test]
        fn product_rule((x, dx) in operand(), (y, dy) in operand()) {
            let p = Dual::new(x, dx) * Dual::new(y, dy);
            prop_assert_eq!(p.primal, x * y);
            let expect = x * dy + dx * y;
            prop_assert!((p.tangent - expect).abs() <= 1e-12 * (1.0 + (x * dy).abs() + (dx * y).abs()));
        }

        #[test]
        fn exp_chain_rule((x, dx) in operand(), (y, dy) in operand()) {
            // d/dε exp(x·y) = exp(x·y)·(x·dy + dx·y)
            let e = (Dual::new(x, dx) * Dual::new(y, dy)).exp();
            let expect = (x * y).exp() * (x * dy + dx * y);
            prop_assert!((e.tangent - expect).abs() <= 1e-12 * expect.abs().max(1.0));
        }
    }
}
