//! Quotients of polynomials, with an exact canonical form over `Q`.

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{Coeff, Polynomial};
use super::BelyiError;
use crate::numeric::{cabs, Projective, Real};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction<T> {
    pub numerator: Polynomial<T>,
    pub denominator: Polynomial<T>,
}

pub type ExactRationalFunction = RationalFunction<BigRational>;

impl<T: Coeff> RationalFunction<T> {
    /// # Panics
    /// If the denominator is zero.
    pub fn new(numerator: Polynomial<T>, denominator: Polynomial<T>) -> Self {
        assert!(!denominator.is_zero(), "zero denominator");
        RationalFunction { numerator, denominator }
    }

    pub fn identity() -> Self {
        Self::new(Polynomial::monomial(T::one(), 1), Polynomial::one())
    }

    /// Degree as a map of the sphere, assuming a coprime representation.
    pub fn degree(&self) -> usize {
        self.numerator.degree().unwrap_or(0).max(self.denominator.degree().unwrap_or(0))
    }

    /// `self - 1` with the same denominator.
    pub fn minus_one(&self) -> Self {
        Self::new(&self.numerator - &self.denominator, self.denominator.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(&self.numerator * &other.numerator, &self.denominator * &other.denominator)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            &(&self.numerator * &other.denominator) + &(&other.numerator * &self.denominator),
            &self.denominator * &other.denominator,
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&Self::new(-&other.numerator, other.denominator.clone()))
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.numerator.scale(c), self.denominator.clone())
    }

    /// Numerator of the derivative, `N' D - N D'`.
    pub fn derivative_numerator(&self) -> Polynomial<T> {
        &(&self.numerator.derivative() * &self.denominator) - &(&self.numerator * &self.denominator.derivative())
    }
}

impl ExactRationalFunction {
    /// Cancels the gcd and makes the denominator monic.
    ///
    /// # Panics
    /// If the denominator is zero.
    pub fn canonical(numerator: Polynomial<BigRational>, denominator: Polynomial<BigRational>) -> Self {
        assert!(!denominator.is_zero(), "zero denominator");
        let g = numerator.gcd(&denominator);
        let (n, d) = if g.degree().unwrap_or(0) > 0 {
            (numerator.div_rem(&g).0, denominator.div_rem(&g).0)
        } else {
            (numerator, denominator)
        };
        let lead = d.leading().unwrap().clone();
        let inv = BigRational::one() / lead;
        RationalFunction { numerator: n.scale(&inv), denominator: d.scale(&inv) }
    }

    pub fn canonicalize(&self) -> Self {
        Self::canonical(self.numerator.clone(), self.denominator.clone())
    }

    pub fn is_coprime(&self) -> bool {
        self.numerator.gcd(&self.denominator).degree() == Some(0)
    }

    /// Exact value at a rational point.
    pub fn evaluate(&self, x: &BigRational) -> Result<Projective<BigRational>, BelyiError> {
        let n = self.numerator.eval(x);
        let d = self.denominator.eval(x);
        match (n.is_zero(), d.is_zero()) {
            (true, true) => Err(BelyiError::NonCoprime),
            (_, true) => Ok(Projective::Infinity),
            _ => Ok(Projective::Finite(n / d)),
        }
    }

    pub fn to_complex<R: Real>(&self) -> RationalFunction<Complex<R>> {
        let conv = |c: &BigRational| Complex::new(R::from_ratio(c), R::zero());
        RationalFunction::new(self.numerator.map(conv), self.denominator.map(conv))
    }
}

impl<R: Real> RationalFunction<Complex<R>> {
    /// Value at `x`, infinity when the denominator vanishes to working
    /// precision relative to the numerator.
    pub fn evaluate(&self, x: Complex<R>) -> Projective<Complex<R>> {
        let n = self.numerator.eval(&x);
        let d = self.denominator.eval(&x);
        let dn = cabs(d);
        if dn.is_zero() || dn < cabs(n) * R::unit_roundoff() {
            Projective::Infinity
        } else {
            Projective::Finite(n / d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::belyi::poly::RationalPolynomial;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn f2() -> ExactRationalFunction {
        let num = (&RationalPolynomial::from_integers(&[1, 1]).pow(3) * &RationalPolynomial::from_integers(&[-1, 1]))
            .scale(&q(1, 8));
        let den = RationalPolynomial::linear_root(q(1, 2)).pow(3);
        ExactRationalFunction::canonical(num, den)
    }

    #[test]
    fn evaluation_of_second_member() {
        let f = f2();
        assert_eq!(f.evaluate(&q(0, 1)).unwrap(), Projective::Finite(q(1, 1)));
        assert_eq!(f.evaluate(&q(1, 1)).unwrap(), Projective::Finite(q(0, 1)));
        assert_eq!(f.evaluate(&q(1, 2)).unwrap(), Projective::Infinity);
        let c = f.to_complex::<f64>();
        let v = c.evaluate(Complex::new(2.0, 0.0)).finite().unwrap();
        assert!((v - 1.0).norm() < 1e-14);
        assert!(c.evaluate(Complex::new(0.5, 0.0)).is_infinite());
    }

    #[test]
    fn canonical_form_cancels_and_normalizes() {
        let common = RationalPolynomial::from_integers(&[3, 1]);
        let num = &RationalPolynomial::from_integers(&[1, 2]) * &common;
        let den = (&RationalPolynomial::from_integers(&[5, 1]) * &common).scale(&q(4, 1));
        let f = ExactRationalFunction::canonical(num, den);
        assert_eq!(f.denominator, RationalPolynomial::from_integers(&[5, 1]));
        assert_eq!(f.numerator, RationalPolynomial::from_integers(&[1, 2]).scale(&q(1, 4)));
        assert!(f.is_coprime());
    }

    #[test]
    fn non_coprime_evaluation_is_detected() {
        let p = RationalPolynomial::from_integers(&[-1, 1]);
        let f = ExactRationalFunction::new(p.clone(), p);
        assert_eq!(f.evaluate(&q(1, 1)), Err(BelyiError::NonCoprime));
    }
}
