use serde::Serialize;

use super::assemble::assemble_belyi;
use super::certify::{certify, BelyiCertificate};
use super::rational_function::ExactRationalFunction;
use super::rationalize::rationalize;
use super::BelyiError;
use crate::dessins::build_family_dessin;
use crate::lattice::classify_division_points;
use crate::numeric::{Dd, Real};
use crate::weierstrass::LatticeScaling;

/// Absolute tolerance on the assembled coefficients, imaginary parts
/// included, once the denominator is monic.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WorkingPrecision {
    Double,
    DoubleDouble,
}

#[derive(Debug, Clone)]
pub struct BelyiComputation {
    pub n: u32,
    pub function: ExactRationalFunction,
    pub certificate: BelyiCertificate,
    pub working_precision: WorkingPrecision,
    pub normalization_residual: f64,
}

fn attempt<R: Real>(n: u32, precision: f64, tolerance: f64) -> Result<BelyiComputation, BelyiError> {
    let scaling = LatticeScaling::<R>::new(precision)?;
    let classes = classify_division_points(n);
    let assembly = assemble_belyi(n, &classes, &scaling)?;
    let function = rationalize(&assembly.function, tolerance)?;
    let certificate = certify(&function, &build_family_dessin(n)?)?;
    let working_precision =
        if R::decimal_digits() > 17 { WorkingPrecision::DoubleDouble } else { WorkingPrecision::Double };
    Ok(BelyiComputation {
        n,
        function,
        certificate,
        working_precision,
        normalization_residual: assembly.normalization_residual,
    })
}

/// Computes and certifies `f_n`.
///
/// The first attempt runs in `f64` at `precision`. If reconstruction fails or
/// the certificate does not pass, the computation is repeated in double-double
/// with the precision target squared (at least `1e-28`).
pub fn compute_belyi(n: u32, precision: f64) -> Result<BelyiComputation, BelyiError> {
    build_family_dessin(n)?;
    match attempt::<f64>(n, precision, DEFAULT_TOLERANCE) {
        Ok(c) if c.certificate.passes() => Ok(c),
        first => {
            let fine = (precision * precision).max(Dd::finest_precision());
            match attempt::<Dd>(n, fine, DEFAULT_TOLERANCE) {
                Ok(c) => Ok(c),
                Err(e) => first.or(Err(e)),
            }
        }
    }
}
