use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::poly::RationalPolynomial;
use super::rational_function::ExactRationalFunction;
use super::BelyiError;
use crate::dessins::Dessin;
use crate::numeric::{chordal_distance, complex_to_f64, polynomial_roots, Dd, Projective, Real};

/// Ramification data of a rational function over 0, 1 and infinity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BelyiCertificate {
    pub degree: usize,
    /// Multiplicities of the points over 0, largest first; likewise below.
    pub zero_pattern: Vec<usize>,
    pub one_pattern: Vec<usize>,
    pub pole_pattern: Vec<usize>,
    /// Exact check: every critical point lies over {0, 1, infinity} and the
    /// three fibres have `degree + 2` points in total.
    pub exact_pass: bool,
    /// Largest chordal distance from a critical value to {0, 1, infinity}.
    pub max_critical_residual: f64,
    pub passport_match: bool,
}

impl BelyiCertificate {
    pub fn passes(&self) -> bool {
        self.exact_pass && self.passport_match
    }
}

/// Multiplicities of the finite roots of `p`, plus `extra` at infinity.
fn pattern(p: &RationalPolynomial, at_infinity: usize) -> Vec<usize> {
    let mut out: Vec<usize> = p
        .square_free_decomposition()
        .iter()
        .flat_map(|(a, e)| std::iter::repeat_n(*e as usize, a.degree().unwrap_or(0)))
        .collect();
    if at_infinity > 0 {
        out.push(at_infinity);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Certifies `f` as a Belyi map and compares its ramification with the
/// passport of `d`: zeros with the white vertices, ones with the black
/// vertices, poles with the faces.
pub fn certify(f: &ExactRationalFunction, d: &Dessin) -> Result<BelyiCertificate, BelyiError> {
    let n = &f.numerator;
    let den = &f.denominator;
    if n.is_zero() || (n.degree() == Some(0) && den.degree() == Some(0)) {
        return Err(BelyiError::Degenerate);
    }
    if !f.is_coprime() {
        return Err(BelyiError::NonCoprime);
    }
    let deg_n = n.degree().unwrap();
    let deg_d = den.degree().unwrap();
    let degree = deg_n.max(deg_d);
    let n_minus_d = n - den;
    if n_minus_d.is_zero() {
        return Err(BelyiError::Degenerate);
    }
    let deg_nd = n_minus_d.degree().unwrap();

    let zero_pattern = pattern(n, degree - deg_n);
    let one_pattern = pattern(&n_minus_d, degree - deg_nd);
    let pole_pattern = pattern(den, degree - deg_d);

    // Riemann-Hurwitz on the sphere: branching only over three points iff
    // the three fibres have degree + 2 points.
    let fibre_points = zero_pattern.len() + one_pattern.len() + pole_pattern.len();
    let w = f.derivative_numerator();
    let product = &(n * &n_minus_d) * den;
    let critical_points_covered = w.is_zero() || w.square_free_part().divides(&product);
    let exact_pass = fibre_points == degree + 2 && critical_points_covered;

    let passport = d.passport();
    let passport_match = zero_pattern == passport.white_cycles
        && one_pattern == passport.black_cycles
        && pole_pattern == passport.face_cycles;

    Ok(BelyiCertificate {
        degree,
        zero_pattern,
        one_pattern,
        pole_pattern,
        exact_pass,
        max_critical_residual: critical_value_residual(f),
        passport_match,
    })
}

/// Largest chordal distance from `f(c)` to {0, 1, infinity} over the finite
/// critical points `c`, located numerically in double-double arithmetic.
pub fn critical_value_residual(f: &ExactRationalFunction) -> f64 {
    let w = f.derivative_numerator();
    if w.degree().unwrap_or(0) == 0 {
        return 0.0;
    }
    let sf = w.square_free_part();
    let coeffs: Vec<Complex<Dd>> =
        sf.coeffs().iter().map(|c: &BigRational| Complex::new(Dd::from_ratio(c), Dd::zero())).collect();
    let fc = f.to_complex::<Dd>();
    let targets = [Some(Complex::new(0.0, 0.0)), Some(Complex::new(1.0, 0.0)), None];
    polynomial_roots(&coeffs)
        .into_iter()
        .map(|c| {
            let v = match fc.evaluate(c) {
                Projective::Finite(v) => Some(complex_to_f64(v)),
                Projective::Infinity => None,
            };
            targets.iter().map(|t| chordal_distance(v, *t)).fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dessins::build_family_dessin;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn second(pole: BigRational) -> ExactRationalFunction {
        let num = (&RationalPolynomial::from_integers(&[1, 1]).pow(3) * &RationalPolynomial::from_integers(&[-1, 1]))
            .scale(&q(1, 8));
        ExactRationalFunction::canonical(num, RationalPolynomial::linear_root(pole).pow(3))
    }

    #[test]
    fn second_member_certificate() {
        let c = certify(&second(q(1, 2)), &build_family_dessin(2).unwrap()).unwrap();
        assert_eq!(c.degree, 4);
        assert_eq!(c.zero_pattern, vec![3, 1]);
        assert_eq!(c.one_pattern, vec![3, 1]);
        assert_eq!(c.pole_pattern, vec![3, 1]);
        assert!(c.exact_pass && c.passport_match);
        assert!(c.max_critical_residual < 1e-20);
    }

    #[test]
    fn identity_certificate() {
        let f = ExactRationalFunction::identity();
        let c = certify(&f, &build_family_dessin(1).unwrap()).unwrap();
        assert_eq!((c.degree, c.zero_pattern.clone(), c.one_pattern.clone(), c.pole_pattern.clone()), (1, vec![1], vec![1], vec![1]));
        assert!(c.passes());
    }

    #[test]
    fn perturbed_pole_fails() {
        let c = certify(&second(q(51, 100)), &build_family_dessin(2).unwrap()).unwrap();
        assert!(!c.exact_pass);
        assert!(!c.passes());
        assert!(c.max_critical_residual > 1e-3);
    }

    #[test]
    fn degenerate_inputs() {
        let d = build_family_dessin(1).unwrap();
        let constant = ExactRationalFunction::new(
            RationalPolynomial::from_integers(&[2]),
            RationalPolynomial::from_integers(&[1]),
        );
        assert_eq!(certify(&constant, &d), Err(BelyiError::Degenerate));
        let p = RationalPolynomial::from_integers(&[-1, 1]);
        let shared = ExactRationalFunction::new(&p * &p, p);
        assert_eq!(certify(&shared, &d), Err(BelyiError::NonCoprime));
    }
}
