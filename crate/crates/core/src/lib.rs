//! Simulation and numerics laboratory for city networks built on Poisson
//! line processes.
//!
//! The library covers four layers:
//!
//! * exact planar geometry ([`geom`]) and shared numerics ([`numerics`]);
//! * samplers for the isotropic Poisson line process and its improper
//!   anisotropic scaling limit ([`line_process`]);
//! * the cell/route construction between two nodes, with lateral
//!   displacement and excess-length statistics ([`routes`]), and the
//!   equivalent event-driven growth/subordinator dynamics ([`growth`]);
//! * traffic-flow functionals at the centre of a disk city, both by
//!   Monte Carlo and by quadrature ([`flow`]), with a rectilinear-grid
//!   comparison city ([`manhattan`]).
//!
//! Everything stochastic runs on explicit [`numerics::RngStream`] values
//! (master seed plus stream index), so replicated experiments are
//! reproducible bit-for-bit regardless of thread scheduling.

pub mod acceptance;
pub mod flow;
pub mod geom;
pub mod growth;
pub mod line_process;
pub mod manhattan;
pub mod numerics;
pub mod render;
pub mod routes;

use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Half-plane clip removed the whole polygon.
    #[error("half-plane clip removed the whole polygon")]
    EmptyIntersection,
    /// Hitting measure asked for an unsupported body shape.
    #[error("hitting measure supports segments and disks only")]
    UnsupportedBody,
    /// Cell was still open after the maximum number of window enlargements.
    #[error("cell not closed by pattern lines after {doublings} window doublings")]
    UnboundedAtMaxWindow { doublings: u32 },
    /// Ray/boundary bookkeeping failed on a degenerate cell fixture.
    #[error("degenerate cell: {0}")]
    DegenerateCell(String),
    /// Argument outside the documented domain.
    #[error("domain error: {0}")]
    DomainError(String),
    /// Adaptive quadrature could not reach the requested tolerance.
    #[error("quadrature failed: error estimate {err_estimate:e} above tolerance")]
    QuadratureFailure { err_estimate: f64 },
    /// Event budget or path horizon exhausted before the stopping condition.
    #[error("event budget or horizon exhausted")]
    HorizonExceeded,
    /// Exact enumeration requested beyond its size bound.
    #[error("input too large for exact enumeration")]
    TooLarge,
    /// Precondition violated (documented per operation).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Shorthand result type used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
