//! Dense complex matrix kernels.

mod eig;
mod functions;
mod operator;

pub use eig::{herm_eig, EigenDecomposition};
pub use functions::{
    block_exceeds, block_norm, expi, expi_from_eig, herm_fun, op_norm, projection_from_eig, spectral_projection,
    trace_norm, Interval,
};
pub use operator::Operator;
