//! Weierstrass functions of the hexagonal lattice scaled to the curve
//! `y^2 = x^3 - 1`, and the map `phi = -4i / (wp' - 2i)`.
//!
//! Scaling `Z[zeta6]` by `c = (g3/4)^(1/6)` gives `g2 = 0`, `g3 = 4`, so that
//! `wp'^2 = 4 wp^3 - 4` and `(wp, wp'/2)` is a point of the curve.
//!
//! Evaluation reduces the argument to the Voronoi cell of the origin, where
//! `|z| <= c/sqrt(3)`, and sums the Laurent series about 0. With `g2 = 0` only
//! every third coefficient is nonzero and consecutive nonzero terms shrink by
//! about `(|z|/c)^6 <= 1/27`. The series is cut once the omitted terms are
//! below a tenth of the precision target at the cell's corners; under that
//! ratio the remainder is at most `27/26` times the first omitted term.

use num_complex::Complex;
use thiserror::Error;

use crate::lattice::EisensteinPoint;
use crate::numeric::{cabs, exp, nth_root, zeta6, Projective, Real};

#[derive(Debug, Error, PartialEq)]
pub enum WeierstrassError {
    #[error("truncation radius {0} is below the minimum of 10")]
    RadiusTooSmall(u32),
    #[error("precision {requested:e} is outside the supported range [{finest:e}, 1e-6]")]
    PrecisionOutOfRange { requested: f64, finest: f64 },
    #[error("Eisenstein series did not converge: residual {residual:e} exceeds {precision:e}")]
    NotConverged { residual: f64, precision: f64 },
    #[error("argument is within {0:e} of a lattice point")]
    Pole(f64),
}

/// Distance to the lattice below which `wp` and `wp'` report a pole.
pub const POLE_THRESHOLD: f64 = 1e-8;

/// `(g2, g3)` of the unit lattice `Z[zeta6]` by direct summation over the
/// nonzero lattice points with `|omega| <= truncation_radius`.
///
/// The omitted tail of the `g3` sum is bounded in absolute value by
/// `140 * (2 pi / (sqrt(3)/2)) / (4 R^4)`, about `3e-7 (100/R)^4`; in practice
/// the angular cancellation of `omega^-6` makes the error far smaller.
pub fn eisenstein_invariants(
    truncation_radius: u32,
) -> Result<(Complex<f64>, Complex<f64>), WeierstrassError> {
    if truncation_radius < 10 {
        return Err(WeierstrassError::RadiusTooSmall(truncation_radius));
    }
    let r = truncation_radius as i64;
    let r2 = (r * r) as f64;
    let w = zeta6::<f64>();
    // Neumaier summation keeps the many small far-away terms.
    let mut s4 = KahanComplex::default();
    let mut s6 = KahanComplex::default();
    // |m + n zeta6|^2 = m^2 + mn + n^2 >= 3n^2/4
    let n_max = (2.0 * r as f64 / 3f64.sqrt()).ceil() as i64 + 1;
    for n in -n_max..=n_max {
        for m in -2 * r - 2..=2 * r + 2 {
            let norm = (m * m + m * n + n * n) as f64;
            if norm == 0.0 || norm > r2 {
                continue;
            }
            let omega = Complex::new(m as f64, 0.0) + w * n as f64;
            let inv2 = (omega * omega).inv();
            let inv4 = inv2 * inv2;
            s4.add(inv4);
            s6.add(inv4 * inv2);
        }
    }
    Ok((s4.value() * 60.0, s6.value() * 140.0))
}

/// Documented tail bound for [`eisenstein_invariants`].
pub fn eisenstein_tail_bound(truncation_radius: u32) -> f64 {
    let r = truncation_radius as f64;
    140.0 * (2.0 * std::f64::consts::PI / (3f64.sqrt() / 2.0)) / (4.0 * r.powi(4))
}

#[derive(Default)]
struct KahanComplex {
    sum: Complex<f64>,
    comp: Complex<f64>,
}

impl KahanComplex {
    fn add(&mut self, x: Complex<f64>) {
        let two_sum = |s: f64, x: f64, c: &mut f64| -> f64 {
            let t = s + x;
            if s.abs() >= x.abs() {
                *c += (s - t) + x;
            } else {
                *c += (x - t) + s;
            }
            t
        };
        self.sum.re = two_sum(self.sum.re, x.re, &mut self.comp.re);
        self.sum.im = two_sum(self.sum.im, x.im, &mut self.comp.im);
    }

    fn value(&self) -> Complex<f64> {
        self.sum + self.comp
    }
}

/// `sigma_k(n)`, the sum of the `k`-th powers of the divisors of `n`.
fn divisor_power_sum(n: u64, k: u32) -> u64 {
    (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| d.pow(k)).sum()
}

/// Value of `phi` on the Riemann sphere.
pub type PhiValue<R> = Projective<Complex<R>>;

/// The hexagonal lattice scaled so that its invariants are `g2 = 0`, `g3 = 4`.
#[derive(Debug, Clone)]
pub struct LatticeScaling<R> {
    /// Scale factor applied to `Z[zeta6]`.
    pub c: R,
    pub g2: Complex<R>,
    pub g3: Complex<R>,
    /// Target absolute error of the evaluations.
    pub precision: f64,
    /// `g3` of the unscaled lattice.
    pub g3_unit: R,
    /// Nonzero Laurent coefficients: `wp(z) = z^-2 + sum laurent[j] z^(6j+4)`.
    laurent: Vec<R>,
}

impl LatticeScaling<f64> {
    /// Working-precision `f64` scaling.
    pub fn scale_to_curve(precision: f64) -> Result<Self, WeierstrassError> {
        Self::new(precision)
    }
}

/// Shorthand for [`LatticeScaling::scale_to_curve`].
pub fn scale_to_curve(precision: f64) -> Result<LatticeScaling<f64>, WeierstrassError> {
    LatticeScaling::scale_to_curve(precision)
}

impl<R: Real> LatticeScaling<R> {
    /// Computes the invariants from their `q`-expansions at `tau = zeta6`,
    /// `q = -exp(-pi sqrt 3)`, and rescales.
    pub fn new(precision: f64) -> Result<Self, WeierstrassError> {
        let finest = R::finest_precision().max(1e-30);
        if !(finest..=1e-6).contains(&precision) {
            return Err(WeierstrassError::PrecisionOutOfRange { requested: precision, finest });
        }
        let pi = R::pi();
        let q = -exp(-pi * R::from_int(3).sqrt());
        let mut e4 = R::one();
        let mut e6 = R::one();
        let mut qn = R::one();
        for n in 1..64u64 {
            qn = qn * q;
            let t4 = R::from_int(240 * divisor_power_sum(n, 3) as i64) * qn;
            let t6 = R::from_int(504 * divisor_power_sum(n, 5) as i64) * qn;
            e4 = e4 + t4;
            e6 = e6 - t6;
            if t6.abs() < R::unit_roundoff() * R::lift(1e-3) {
                break;
            }
        }
        let pi2 = pi * pi;
        let g2_unit = R::from_int(4) * pi2 * pi2 / R::from_int(3) * e4;
        let g3_unit = R::from_int(8) * pi2 * pi2 * pi2 / R::from_int(27) * e6;
        let c = nth_root(g3_unit / R::from_int(4), 6);
        let c2 = c * c;
        let g2 = Complex::new(g2_unit / (c2 * c2), R::zero());
        let g3 = Complex::new(g3_unit / (c2 * c2 * c2), R::zero());
        let residual = cabs(g2).approx().max((g3.re - R::from_int(4)).abs().approx());
        if residual > precision {
            return Err(WeierstrassError::NotConverged { residual, precision });
        }
        let laurent = Self::laurent_coefficients(c, precision);
        Ok(LatticeScaling { c, g2, g3, precision, g3_unit, laurent })
    }

    /// Nonzero coefficients of `wp - z^-2` for `g2 = 0`, `g3 = 4`:
    /// `c_3 = 1/7` and `c_k = 3/((2k+1)(k-3)) sum_{m=2}^{k-2} c_m c_{k-m}`
    /// for the coefficient `c_k` of `z^(2k-2)`, nonzero only when `3 | k`.
    fn laurent_coefficients(c: R, precision: f64) -> Vec<R> {
        let rmax = c / R::from_int(3).sqrt();
        let target = R::lift(precision / 10.0);
        let mut coeff: Vec<R> = vec![R::zero(); 4];
        coeff[3] = R::one() / R::from_int(7);
        let mut out = vec![coeff[3]];
        let mut k = 3usize;
        loop {
            k += 1;
            let mut sum = R::zero();
            for m in 2..=k - 2 {
                sum = sum + coeff[m] * coeff[k - m];
            }
            let ck = R::from_int(3) * sum / R::from_int(((2 * k + 1) * (k - 3)) as i64);
            coeff.push(ck);
            if !k.is_multiple_of(3) {
                continue;
            }
            // size of this term of wp' at the corner of the Voronoi cell
            let term = ck.abs() * R::from_int(2 * k as i64 - 2) * rmax.powi(2 * k as i32 - 3);
            if term < target || out.len() > 200 {
                break;
            }
            out.push(ck);
        }
        out
    }

    pub fn laurent_terms(&self) -> usize {
        self.laurent.len()
    }

    /// `c (a + b zeta6)`.
    pub fn embed(&self, p: EisensteinPoint) -> Complex<R> {
        p.to_complex::<R>() * self.c
    }

    /// Representative of `z` modulo `c Z[zeta6]` in the Voronoi cell of 0.
    pub fn reduce(&self, z: Complex<R>) -> Complex<R> {
        let w = z / self.c;
        let half_sqrt3 = R::from_int(3).sqrt() / R::from_int(2);
        let b = w.im / half_sqrt3;
        let a = w.re - b / R::from_int(2);
        let (fa, fb) = (a.floor(), b.floor());
        let z6 = zeta6::<R>();
        let mut best = w;
        let mut best_norm = R::lift(f64::INFINITY);
        for (da, db) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            let lattice = Complex::new(fa + R::from_int(da), R::zero()) + z6 * (fb + R::from_int(db));
            let cand = w - lattice;
            let n = cand.norm_sqr();
            if n < best_norm {
                best = cand;
                best_norm = n;
            }
        }
        best * self.c
    }

    fn reduced_checked(&self, z: Complex<R>) -> Result<Complex<R>, WeierstrassError> {
        let r = self.reduce(z);
        let d = cabs(r).approx();
        if d < POLE_THRESHOLD {
            return Err(WeierstrassError::Pole(d));
        }
        Ok(r)
    }

    /// `wp(z)` for the scaled lattice.
    pub fn wp(&self, z: Complex<R>) -> Result<Complex<R>, WeierstrassError> {
        let z = self.reduced_checked(z)?;
        let z2 = z * z;
        let z6 = z2 * z2 * z2;
        // sum laurent[j] z^(6j+4), Horner in z^6
        let mut acc = Complex::new(R::zero(), R::zero());
        for &a in self.laurent.iter().rev() {
            acc = acc * z6 + Complex::new(a, R::zero());
        }
        Ok(z2.inv() + acc * z2 * z2)
    }

    /// `wp'(z)` for the scaled lattice.
    pub fn wp_prime(&self, z: Complex<R>) -> Result<Complex<R>, WeierstrassError> {
        let z = self.reduced_checked(z)?;
        let z2 = z * z;
        let z6 = z2 * z2 * z2;
        // derivative of laurent[j] z^(6j+4) is (6j+4) laurent[j] z^(6j+3)
        let mut acc = Complex::new(R::zero(), R::zero());
        for (j, &a) in self.laurent.iter().enumerate().rev() {
            acc = acc * z6 + Complex::new(a * R::from_int(6 * j as i64 + 4), R::zero());
        }
        let z3 = z2 * z;
        Ok(-(z3.inv() * R::from_int(2)) + acc * z3)
    }

    /// `phi(z) = -4i / (wp'(z) - 2i)`; lattice points map to 0. Reported as
    /// infinity when `|wp'(z) - 2i|` is below the precision target.
    pub fn phi(&self, z: Complex<R>) -> PhiValue<R> {
        let i = Complex::new(R::zero(), R::one());
        match self.wp_prime(z) {
            Err(_) => PhiValue::Finite(Complex::new(R::zero(), R::zero())),
            Ok(d) => {
                let den = d - i * R::from_int(2);
                if cabs(den).approx() < self.precision {
                    PhiValue::Infinity
                } else {
                    PhiValue::Finite(-(i * R::from_int(4)) / den)
                }
            }
        }
    }

    /// `phi` at `c p`. The three classes of rotation centers take the exact
    /// values 0, infinity and 1.
    pub fn phi_point(&self, p: EisensteinPoint) -> PhiValue<R> {
        match p.rotation_center() {
            Some(0) => PhiValue::Finite(Complex::new(R::zero(), R::zero())),
            Some(1) => PhiValue::Infinity,
            Some(_) => PhiValue::Finite(Complex::new(R::one(), R::zero())),
            None => self.phi(self.embed(p)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Dd;

    fn s() -> LatticeScaling<f64> {
        scale_to_curve(1e-12).unwrap()
    }

    #[test]
    fn unit_invariants_by_summation() {
        let (g2, g3) = eisenstein_invariants(200).unwrap();
        assert!(g2.norm() < 1e-10, "{g2}");
        assert!(g3.im.abs() < 1e-10 && g3.re > 0.0);
        assert!((g3.re - s().g3_unit).abs() < 1e-9, "{g3}");
    }

    #[test]
    fn rejects_small_radius_and_bad_precision() {
        assert_eq!(eisenstein_invariants(5), Err(WeierstrassError::RadiusTooSmall(5)));
        assert!(matches!(scale_to_curve(1e-16), Err(WeierstrassError::PrecisionOutOfRange { .. })));
        assert!(matches!(scale_to_curve(1e-3), Err(WeierstrassError::PrecisionOutOfRange { .. })));
    }

    #[test]
    fn scaled_invariants() {
        let s = s();
        assert!((s.g3.re - 4.0).abs() < 1e-12);
        assert!(s.g2.norm() < 1e-12);
        assert!((s.c - 2.428650647887581).abs() < 1e-13);
    }

    #[test]
    fn half_periods_are_zeros_of_wp_prime() {
        let s = s();
        for p in [EisensteinPoint::v1(), EisensteinPoint::v2(), EisensteinPoint::v1() + EisensteinPoint::v2()] {
            assert!(s.wp_prime(s.embed(p)).unwrap().norm() < 1e-10);
        }
    }

    #[test]
    fn values_at_rotation_centers_and_thirds() {
        let s = s();
        let p = EisensteinPoint::ratio(-1, 3, -1, 3);
        let v = s.wp_prime(s.embed(p)).unwrap();
        assert!((v - Complex::new(0.0, -2.0)).norm() < 1e-9, "{v}");
        let p = EisensteinPoint::ratio(1, 3, 1, 3);
        assert!((s.wp_prime(s.embed(p)).unwrap() - Complex::new(0.0, 2.0)).norm() < 1e-9);
        let p = EisensteinPoint::ratio(1, 6, 1, 6);
        assert!((s.wp_prime(s.embed(p)).unwrap() - Complex::new(0.0, 6.0)).norm() < 1e-9);
    }

    #[test]
    fn phi_division_values() {
        let s = s();
        let phi = |p: EisensteinPoint| s.phi(s.embed(p)).finite().unwrap();
        let v1 = EisensteinPoint::v1();
        let v2 = EisensteinPoint::v2();
        let third = num_rational::Rational64::new(1, 3);
        assert!((phi(v1) - 2.0).norm() < 1e-9);
        assert!((phi((v1 + v2).scale(third)) + 1.0).norm() < 1e-9);
        assert!((phi((v2 + v2 - v1).scale(third)) - 0.5).norm() < 1e-9);
        assert_eq!(s.phi_point(EisensteinPoint::ratio(1, 3, 1, 3)), PhiValue::Infinity);
        assert!(matches!(s.phi(s.embed(EisensteinPoint::ratio(1, 3, 1, 3))), PhiValue::Infinity));
    }

    #[test]
    fn pole_is_reported() {
        let s = s();
        assert!(matches!(s.wp_prime(Complex::new(s.c, 0.0)), Err(WeierstrassError::Pole(_))));
    }

    #[test]
    fn double_double_scaling_is_consistent() {
        let d = LatticeScaling::<Dd>::new(1e-28).unwrap();
        assert!((d.c.approx() - s().c).abs() < 1e-14);
        let p = EisensteinPoint::ratio(1, 6, 1, 6);
        let v = d.wp_prime(d.embed(p)).unwrap();
        assert!((v.im - Dd::from(6.0)).abs() < Dd::from(1e-27), "{:?}", v);
        assert!(v.re.abs() < Dd::from(1e-27));
    }
}
