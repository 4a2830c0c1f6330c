//! Belyi maps `f_n` of the family: assembly from division values of `phi`,
//! reconstruction of exact rational coefficients, and certification.

mod assemble;
mod certify;
mod pipeline;
pub mod poly;
mod rationalize;
pub mod rational_function;
mod small_system;

use thiserror::Error;

use crate::dessins::DessinError;
use crate::lattice::EisensteinPoint;
use crate::weierstrass::WeierstrassError;

pub use assemble::{assemble_belyi, Assembly};
pub use certify::{certify, critical_value_residual, BelyiCertificate};
pub use pipeline::{compute_belyi, BelyiComputation, WorkingPrecision, DEFAULT_TOLERANCE};
pub use poly::{Polynomial, RationalPolynomial};
pub use rational_function::{ExactRationalFunction, RationalFunction};
pub use rationalize::{denominator_bound, rationalize, rationalize_real};
pub use small_system::{solve_small_system, SmallSystemSolution};

#[derive(Debug, Error, PartialEq)]
pub enum BelyiError {
    #[error("division point classes are for index {found}, expected {expected}")]
    IndexMismatch { expected: u32, found: u32 },
    #[error("phi is infinite at {0:?} where a finite factor is required")]
    NonFiniteFactor(EisensteinPoint),
    #[error("cannot normalize at the one-class point {0:?}")]
    Normalization(EisensteinPoint),
    #[error("coefficient {index} has imaginary part {value:e} above the tolerance")]
    ImaginaryPart { index: usize, value: f64 },
    #[error("no rational with denominator at most {bound} lies within tolerance of coefficient {index} = {value}")]
    Reconstruction { index: usize, value: f64, bound: u64 },
    #[error("constant function")]
    Degenerate,
    #[error("numerator and denominator share a factor")]
    NonCoprime,
    #[error("the coefficient system has no admissible rational solution")]
    NoSolution,
    #[error(transparent)]
    Weierstrass(#[from] WeierstrassError),
    #[error(transparent)]
    Dessin(#[from] DessinError),
}
