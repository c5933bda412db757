//! Envelopes of orthonormal Jacobi polynomials.
//!
//! Stable evaluation of `P_k^{(α,β)}` and its weighted forms, the Sonin
//! function of the damped envelope `Z`, oscillatory-region bounds, localization
//! windows for the extrema of `M`, exact rational certification of the proof
//! polynomials, and sweeps that check the envelope bounds over parameter grids.

// `!(a < b)` is used on purpose so that NaN counts as a failure.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod extrema;
pub mod jacobi;
pub mod lemmas;
pub mod osc;
pub mod params;
pub mod quadrature;
pub mod report;
pub mod signed_log;
pub mod sonin;
pub mod verifier;

pub use error::{Error, Result};
pub use jacobi::{eval_jacobi, eval_m, eval_orthonormal, eval_weighted_sq, eval_z, log_norm, EvalResult};
pub use params::{delta_interval, derive_params, DerivedParams, Interval, JacobiParams};
pub use signed_log::SignedLog;
pub use sonin::{find_x0, sonin_s, X0Result};
pub use verifier::{Check, GridSpec, ReportItem, VerificationReport};
