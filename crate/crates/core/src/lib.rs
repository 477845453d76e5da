//! Operatorial classical mechanics on phase space: superfield lifting of
//! Hamiltonians, extended Poisson brackets, minimal coupling and gauge
//! transformations, grid Liouvillians, and closed-form spectra for the
//! oscillator, Landau and Aharonov-Bohm problems.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod expr;
pub mod state;
pub mod dynamics;
pub mod superspace;
pub mod config;
pub mod gauge;
pub mod grid;
pub mod liouville;
pub mod spectra;
pub mod aharonov;
pub mod testing;

pub use error::{KvnError, Result};
pub use expr::{Expr, Jet3};
pub use state::ExtendedState;
pub use superspace::GrassmannElement;
