use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::RationalPolynomial;
use super::rational_function::ExactRationalFunction;
use super::BelyiError;

/// Parameters of `f(z) = k (z-1)(z-beta)^3 / (z-gamma)^3` with
/// `f(z) - 1 = k z (z-alpha)^3 / (z-gamma)^3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallSystemSolution {
    pub k: BigRational,
    pub alpha: BigRational,
    pub beta: BigRational,
    pub gamma: BigRational,
}

impl SmallSystemSolution {
    /// `k(z-1)(z-beta)^3 - k z (z-alpha)^3 - (z-gamma)^3`.
    pub fn identity_polynomial(&self) -> RationalPolynomial {
        let lin = |r: &BigRational| RationalPolynomial::linear_root(r.clone());
        let left = (&lin(&BigRational::one()) * &lin(&self.beta).pow(3)).scale(&self.k);
        let right = (&RationalPolynomial::from_integers(&[0, 1]) * &lin(&self.alpha).pow(3)).scale(&self.k);
        &(&left - &right) - &lin(&self.gamma).pow(3)
    }

    pub fn rational_function(&self) -> ExactRationalFunction {
        let lin = |r: &BigRational| RationalPolynomial::linear_root(r.clone());
        let num = (&lin(&BigRational::one()) * &lin(&self.beta).pow(3)).scale(&self.k);
        ExactRationalFunction::canonical(num, lin(&self.gamma).pow(3))
    }
}

fn var() -> ExactRationalFunction {
    ExactRationalFunction::identity()
}

fn constant(c: i64) -> ExactRationalFunction {
    ExactRationalFunction::new(RationalPolynomial::from_integers(&[c]), RationalPolynomial::from_integers(&[1]))
}

fn quotient(a: &ExactRationalFunction, b: &ExactRationalFunction) -> ExactRationalFunction {
    ExactRationalFunction::canonical(&a.numerator * &b.denominator, &a.denominator * &b.numerator)
}

/// Solves the coefficient equations of
/// `k(z-1)(z-beta)^3 - k z (z-alpha)^3 - (z-gamma)^3 = 0` exactly.
///
/// With `t = gamma/beta` the constant term gives `k = -t^3`, the cubic term
/// `alpha - beta = (t^3 - 1)/(3 t^3)`, the quadratic term `beta` as a rational
/// function of `t`, and the linear term a single polynomial equation in `t`
/// whose rational roots are tested. Branches where `f` degenerates (`beta = 0`,
/// `gamma = beta`, `gamma = 1`, `alpha = 0`) are discarded.
pub fn solve_small_system() -> Result<SmallSystemSolution, BelyiError> {
    let t = var();
    let t2 = t.mul(&t);
    let t3 = t2.mul(&t);
    let s = quotient(&t3.sub(&constant(1)), &t3.scale(&BigRational::from_integer(3.into())));
    // beta (1 - t^2 + 2 s t^2) = -t^2 s^2
    let beta_den = constant(1).sub(&t2).add(&s.mul(&t2).scale(&BigRational::from_integer(2.into())));
    let beta = quotient(&t2.mul(&s).mul(&s).scale(&-BigRational::one()), &beta_den).canonicalize();
    let alpha = beta.add(&s).canonicalize();
    let cube = |f: &ExactRationalFunction| f.mul(f).mul(f).canonicalize();
    let b2 = beta.mul(&beta).canonicalize();
    // -t (alpha^3 - beta^3 - 3 beta^2) - 3 beta^2
    let three_b2 = b2.scale(&BigRational::from_integer(3.into()));
    let equation = t
        .mul(&cube(&alpha).sub(&cube(&beta)).sub(&three_b2))
        .scale(&-BigRational::one())
        .sub(&three_b2)
        .canonicalize();

    for r in equation.numerator.rational_roots() {
        if r.is_zero() {
            continue;
        }
        let r3 = &r * &r * &r;
        let s = (&r3 - BigRational::one()) / (&r3 * BigRational::from_integer(3.into()));
        let den = BigRational::one() - &r * &r + &s * &r * &r * BigRational::from_integer(2.into());
        if den.is_zero() {
            continue;
        }
        let beta = -(&r * &r * &s * &s) / den;
        let alpha = &beta + &s;
        let gamma = &r * &beta;
        let k = -r3;
        let degenerate = beta.is_zero() || alpha.is_zero() || gamma == beta || gamma.is_one();
        if degenerate {
            continue;
        }
        let sol = SmallSystemSolution { k, alpha, beta, gamma };
        if sol.identity_polynomial().is_zero() && sol.rational_function().degree() == 4 {
            return Ok(sol);
        }
    }
    Err(BelyiError::NoSolution)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn recovers_known_parameters() {
        let s = solve_small_system().unwrap();
        assert_eq!(s, SmallSystemSolution { k: q(1, 8), alpha: q(2, 1), beta: q(-1, 1), gamma: q(1, 2) });
        assert!(s.identity_polynomial().is_zero());
    }

    #[test]
    fn one_fibre_has_expected_shape() {
        let s = solve_small_system().unwrap();
        let f = s.rational_function();
        // f - 1 = k z (z - alpha)^3 / (z - gamma)^3
        let g = f.minus_one();
        let expected =
            (&RationalPolynomial::from_integers(&[0, 1]) * &RationalPolynomial::linear_root(s.alpha.clone()).pow(3))
                .scale(&s.k);
        assert_eq!(g.numerator, expected);
    }
}
