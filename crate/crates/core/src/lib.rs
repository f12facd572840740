//! Lower bounds on the classical communication and the entanglement
//! inefficiency of LOCC conversion between partially entangled pure bipartite
//! states, built on a finite-N accounting of the Lo-Popescu dilution protocol.
//!
//! Module map:
//!
//! - [`states`]: Schmidt probability vectors, entropy, α, Ωᵢ and Ω_t.
//! - [`special`]: Lambert W, Gaussian tail and Mills bounds, exact combinatorics.
//! - [`typical`]: typical windows, atypical weights, the ε_LP2 residual and the
//!   error-to-γ inversions.
//! - [`lp`]: the Lo-Popescu resource ledger, asymptotic and exact.
//! - [`bounds`]: the error budget and the conversion lower bounds.
//! - [`sweep`], [`output`], [`verify`]: grids, rendering and self-checks used by
//!   the `locc` binary.
//!
//! ```
//! use locc_bounds::bounds::{cc_lower_bound_two_term, ErrorBudget};
//! use locc_bounds::states::{SchmidtState, TwoTermState};
//!
//! let psi1 = TwoTermState::new(0.43).unwrap();
//! let psi2: SchmidtState = "0.14,0.86".parse().unwrap();
//! let bound = cc_lower_bound_two_term(&psi1, &psi2, &ErrorBudget::new(0.0).unwrap()).unwrap();
//! assert!(!bound.vacuous);
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// oracle values are written with every digit the oracle produced
#![cfg_attr(
    test,
    allow(clippy::excessive_precision, clippy::inconsistent_digit_grouping)
)]

pub mod bounds;
pub mod error;
pub mod lp;
pub mod output;
pub mod special;
pub mod states;
pub mod sweep;
pub mod typical;
pub mod verify;

pub use error::{Error, Result};
