//! Augmented loss landscapes in which every finite critical point is a global
//! minimum of the base loss.
//!
//! Given a base loss `L(θ) ≥ 0` with `min L = 0`, the augmented loss
//! `L̃(θ, a, b) = L(θ)·(1 + (a·eᵇ − 1)²) + λa²` has no bad local minima in
//! `(θ, a, b)`: wherever `L(θ) > 0`, descent drives `a → 0` and `b → ∞` with
//! `a·eᵇ → 1`, a minimum at infinity rather than a local minimum.
//!
//! - [`field`]: base losses and the shipped registry
//! - [`augment`]: `L̃` and its closed-form gradient
//! - [`diff`]: finite-difference and dual-number oracles
//! - [`optimize`]: optimizers, trajectories and outcome labels
//! - [`analysis`]: critical-point finder, infimum probe, contour grids
//! - [`render`]: SVG contour plots
//! - [`verify`]: the property suites behind `minfinity verify`
//! - [`cli`]: the `minfinity` command-line runner

// `!(x <= tol)` is used deliberately so that NaN counts as a failure.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod augment;
pub mod cli;
pub mod descent;
pub mod diff;
pub mod field;
pub mod optimize;
pub mod render;
pub mod verify;
