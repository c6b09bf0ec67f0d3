//! Finite-dimensional toolkit for coarse geometry of quantum metric spaces:
//! Lipschitz seminorms, Monge–Kantorovich distances, spectral propagation,
//! relative-commutant seminorms, and cover-based cutting of operators.

// `!(x > 0.0)` is used deliberately so NaN is rejected with the rest.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod algebra;
pub mod cli;
pub mod coarse;
pub mod config;
pub mod constructions;
pub mod cutting;
pub mod error;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod metric;
pub mod report;
pub mod rng;
pub mod spectral;
pub mod verify;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use linalg::Operator;
