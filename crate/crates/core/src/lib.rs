//! Exact-arithmetic workbench for deciding and certifying module super-amenability
//! of finite inverse semigroup algebras.
//!
//! The pipeline works over the rational semigroup algebra `A = Q[S]` of a finite
//! semigroup `S`, with the algebra of idempotents `Q[E]` acting on `A` trivially on
//! the left (through the constant-one character) and by multiplication on the right.
//! From that action the crate builds:
//!
//! * the ideal `J` of `A`, both as the span of `d_{set} - d_{st}` and as the ideal
//!   generated by the multiplication image of the balancing ideal `I` of `A (x) A`
//!   (the two are asserted equal),
//! * the congruence `s ~ t  iff  d_s - d_t in J` and the quotient `S/~`, together
//!   with a group check,
//! * the module-diagonal system on `A (x) A / I` (solved and verified exactly over
//!   the rationals, no floating point anywhere),
//! * a first-cohomology oracle: spaces of module derivations into small commutative
//!   test bimodules, cross-checked against diagonal existence.
//!
//! Everything is deterministic for a fixed input and seed. With the default
//! `parallel` feature the hot kernels use rayon; disabling the feature (or calling
//! [`par::force_sequential`]) falls back to sequential execution with identical
//! results.

pub mod algebra;
pub mod battery;
pub mod cohomology;
pub mod diagonal;
pub mod linalg;
pub mod module_algebra;
pub mod par;
pub mod report;
pub mod semigroup;

use serde::Serialize;
use thiserror::Error;

/// Internal consistency violations: situations the underlying theory rules out.
///
/// These are findings, not user errors; callers surface them with their witness
/// data (the CLI maps them to exit code 3).
#[derive(Debug, Clone, Error, PartialEq, Serialize)]
pub enum InternalFinding {
    /// The congruence classes do not multiply consistently: `(s, t)` and
    /// `(s2, t2)` are classwise equal pairs with products in different classes.
    #[error("quotient ill-defined: products of ({s}, {t}) and ({s2}, {t2}) land in different classes")]
    QuotientIllDefined { s: String, t: String, s2: String, t2: String },
    /// The multiplication image of the ideal `I` escapes `J`.
    #[error("multiplication image of I is not contained in J (witness basis vector {witness})")]
    OmegaImageEscapesJ { witness: String },
    /// The two constructions of `J` disagree.
    #[error("span and ideal constructions of J disagree: span dim {span_dim}, ideal dim {ideal_dim}")]
    JConstructionsDisagree { span_dim: usize, ideal_dim: usize },
}

/// Size guards for the analysis layers. All analysis entry points take the guard
/// that applies to them; the hard caps below are never exceeded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guards {
    /// Largest element count accepted by table validation (hard cap 250).
    pub validation_max: usize,
    /// Largest element count for algebra-level work (J, congruence, quotient).
    pub algebra_max: usize,
    /// Largest element count for tensor-level work (ideals in `A (x) A`, diagonals).
    pub tensor_max: usize,
}

/// Hard cap on validated table size.
pub const VALIDATION_HARD_CAP: usize = 250;
/// Tensor-level guard ceiling without an explicit force override.
pub const TENSOR_SOFT_CAP: usize = 12;

impl Default for Guards {
    fn default() -> Self {
        Guards { validation_max: VALIDATION_HARD_CAP, algebra_max: 40, tensor_max: TENSOR_SOFT_CAP }
    }
}

impl Guards {
    /// Applies a user override, clamping to the hard caps unless `force` is set.
    /// The validation cap is absolute.
    pub fn with_override(max_size: Option<usize>, force: bool) -> Self {
        let mut g = Guards::default();
        if let Some(m) = max_size {
            g.algebra_max = m;
            g.tensor_max = if force { m } else { m.min(TENSOR_SOFT_CAP) };
            g.validation_max = m.min(VALIDATION_HARD_CAP);
        } else if force {
            g.tensor_max = g.algebra_max;
        }
        g
    }
}

/// Guard violation: the requested structure exceeds the applicable size guard.
#[derive(Debug, Clone, Error, PartialEq, Eq, Serialize)]
#[error("size guard: {what} has size {size}, guard allows {max}")]
pub struct SizeGuard {
    pub what: String,
    pub size: usize,
    pub max: usize,
}

pub(crate) fn guard(what: &str, size: usize, max: usize) -> Result<(), SizeGuard> {
    if size > max {
        Err(SizeGuard { what: what.to_string(), size, max })
    } else {
        Ok(())
    }
}
