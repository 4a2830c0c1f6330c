use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::Polynomial;
use super::rational_function::{ExactRationalFunction, RationalFunction};
use super::BelyiError;
use crate::numeric::Real;

/// Largest denominator searched for a given tolerance. Two rationals with
/// denominators at most `Q` differ by at least `1/Q^2`, so `Q^2 < 1/(2 tol)`
/// makes the reconstruction unique.
pub fn denominator_bound(tolerance: f64) -> u64 {
    let q = (2.0 * tolerance).powf(-0.5).floor();
    q.clamp(1.0, 1e6) as u64
}

/// Simplest rational within `tolerance` of `x` with denominator at most
/// `max_den`, from the continued-fraction convergents of `x`.
pub fn rationalize_real<R: Real>(x: R, tolerance: f64, max_den: u64) -> Option<BigRational> {
    // integer parts must stay exact in the f64 shadow of `R`
    if !x.is_finite() || x.abs().approx() > 2f64.powi(52) {
        return None;
    }
    let tol = R::lift(tolerance);
    let max_den = BigInt::from(max_den);
    let (mut h1, mut h2) = (BigInt::one(), BigInt::zero());
    let (mut k1, mut k2) = (BigInt::zero(), BigInt::one());
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        let ai = BigInt::from(a.approx() as i64);
        let h = &ai * &h1 + &h2;
        let k = &ai * &k1 + &k2;
        if k > max_den {
            return None;
        }
        let candidate = BigRational::new(h.clone(), k.clone());
        if (x - R::from_ratio(&candidate)).abs() <= tol {
            return Some(candidate);
        }
        let frac = rest - a;
        if frac.is_zero() {
            return None;
        }
        rest = R::one() / frac;
        (h2, h1) = (h1, h);
        (k2, k1) = (k1, k);
    }
    None
}

/// Replaces every coefficient by an exact rational after scaling the
/// denominator to be monic; the result is in canonical form.
pub fn rationalize<R: Real>(
    f: &RationalFunction<Complex<R>>,
    tolerance: f64,
) -> Result<ExactRationalFunction, BelyiError> {
    let lead = *f.denominator.leading().expect("nonzero denominator");
    let bound = denominator_bound(tolerance);
    let convert = |p: &Polynomial<Complex<R>>, offset: usize| -> Result<Polynomial<BigRational>, BelyiError> {
        let mut out = Vec::with_capacity(p.coeffs().len());
        for (j, c) in p.coeffs().iter().enumerate() {
            let c = *c / lead;
            let index = offset + j;
            if c.im.abs().approx() > tolerance {
                return Err(BelyiError::ImaginaryPart { index, value: c.im.approx() });
            }
            let q = rationalize_real(c.re, tolerance, bound).ok_or(BelyiError::Reconstruction {
                index,
                value: c.re.approx(),
                bound,
            })?;
            out.push(q);
        }
        Ok(Polynomial::new(out))
    };
    let numerator = convert(&f.numerator, 0)?;
    let denominator = convert(&f.denominator, f.numerator.coeffs().len())?;
    if denominator.is_zero() {
        return Err(BelyiError::Degenerate);
    }
    Ok(ExactRationalFunction::canonical(numerator, denominator))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Dd;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn reconstruction_examples() {
        let tol = 1e-9;
        let b = denominator_bound(tol);
        assert_eq!(rationalize_real(0.125000000001f64, 1e-11, denominator_bound(1e-11)), Some(q(1, 8)));
        assert_eq!(rationalize_real(2.0000000000f64, tol, b), Some(q(2, 1)));
        assert_eq!(rationalize_real(0.3333333333f64, tol, b), Some(q(1, 3)));
        assert_eq!(rationalize_real(-1.5f64, tol, b), Some(q(-3, 2)));
        assert_eq!(rationalize_real(std::f64::consts::PI, 1e-12, 1000), None);
    }

    #[test]
    fn double_double_reconstructs_large_coefficients() {
        let x = Dd::from_ratio(&q(123_456_789_012_345, 216));
        assert_eq!(rationalize_real(x, 1e-12, 1000), Some(q(123_456_789_012_345, 216)));
    }

    #[test]
    fn imaginary_parts_are_rejected() {
        let f = RationalFunction::new(
            Polynomial::new(vec![Complex::new(1.0, 1e-3)]),
            Polynomial::new(vec![Complex::new(1.0, 0.0)]),
        );
        assert!(matches!(rationalize(&f, 1e-8), Err(BelyiError::ImaginaryPart { index: 0, .. })));
    }
}
