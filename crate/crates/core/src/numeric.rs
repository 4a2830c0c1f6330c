//! Floating-point scalars used by the numerical parts of the pipeline.
//!
//! Everything numerical is generic over [`Real`], implemented for `f64` and
//! for the double-double type [`Dd`] (about 106 bits of mantissa). The Belyi
//! pipeline starts in `f64` and retries in double-double when reconstruction
//! of the exact coefficients fails.

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_bigint::{BigInt, Sign};
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, Zero};
use twofloat::TwoFloat;

/// A real scalar with enough structure for series evaluation and rational
/// reconstruction.
pub trait Real:
    Num + Copy + PartialOrd + Neg<Output = Self> + Debug + Display + Send + Sync + 'static
{
    /// Relative rounding unit of the type.
    fn unit_roundoff() -> Self;

    /// Number of significant decimal digits printed by [`to_decimal`].
    fn decimal_digits() -> usize;

    /// Smallest absolute precision target that the type can honour for
    /// quantities of order one.
    fn finest_precision() -> f64;

    fn lift(x: f64) -> Self;

    /// Nearest `f64`.
    fn approx(self) -> f64;

    fn abs(self) -> Self;

    fn sqrt(self) -> Self;

    fn floor(self) -> Self;

    fn pi() -> Self;

    fn is_finite(self) -> bool {
        self.approx().is_finite()
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn powi(self, e: i32) -> Self {
        pow_int(self, e)
    }

    fn from_int(n: i64) -> Self {
        Self::lift(n as f64)
    }

    /// Converts an exact integer without losing the low-order bits.
    fn from_bigint(n: &BigInt) -> Self {
        // Horner's rule over 32-bit halves of the 64-bit limbs.
        let (sign, mut digits) = n.to_u64_digits();
        let mut acc = Self::zero();
        let base = Self::from_int(1 << 32);
        digits.reverse();
        for d in digits {
            let hi = Self::from_int((d >> 32) as i64);
            let lo = Self::from_int((d & 0xffff_ffff) as i64);
            acc = (acc * base + hi) * base + lo;
        }
        if sign == Sign::Minus {
            -acc
        } else {
            acc
        }
    }

    fn from_ratio(q: &BigRational) -> Self {
        Self::from_bigint(q.numer()) / Self::from_bigint(q.denom())
    }
}

impl Real for f64 {
    fn unit_roundoff() -> Self {
        f64::EPSILON
    }
    fn decimal_digits() -> usize {
        17
    }
    fn finest_precision() -> f64 {
        1e-14
    }
    fn lift(x: f64) -> Self {
        x
    }
    fn approx(self) -> f64 {
        self
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn floor(self) -> Self {
        f64::floor(self)
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
}

/// Double-double scalar.
///
/// Wraps [`TwoFloat`] but replaces its division, which loses the low word
/// when the divisor's residual is formed without a fused multiply-add.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct Dd(TwoFloat);

impl Dd {
    pub fn new(x: TwoFloat) -> Self {
        Dd(x)
    }

    pub fn hi(self) -> f64 {
        self.0.hi()
    }

    pub fn lo(self) -> f64 {
        self.0.lo()
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd(TwoFloat::from(x))
    }
}

impl Debug for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dd({})", to_decimal(*self))
    }
}

impl Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&to_decimal(*self))
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, rhs: Dd) -> Dd {
        Dd(self.0 + rhs.0)
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, rhs: Dd) -> Dd {
        Dd(self.0 - rhs.0)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, rhs: Dd) -> Dd {
        Dd(self.0 * rhs.0)
    }
}

impl Div for Dd {
    type Output = Dd;
    /// Long division with three `f64` quotient digits.
    fn div(self, rhs: Dd) -> Dd {
        let d = rhs.0.hi();
        let q1 = self.0.hi() / d;
        if !q1.is_finite() {
            return Dd::from(q1);
        }
        let r = self.0 - rhs.0 * q1;
        let q2 = r.hi() / d;
        let r = r - rhs.0 * q2;
        let q3 = r.hi() / d;
        Dd(TwoFloat::new_add(q1, q2) + q3)
    }
}

impl Rem for Dd {
    type Output = Dd;
    fn rem(self, rhs: Dd) -> Dd {
        let q = Dd((self / rhs).0.trunc());
        self - q * rhs
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd(-self.0)
    }
}

impl Zero for Dd {
    fn zero() -> Self {
        Dd::from(0.0)
    }
    fn is_zero(&self) -> bool {
        self.0.hi() == 0.0 && self.0.lo() == 0.0
    }
}

impl One for Dd {
    fn one() -> Self {
        Dd::from(1.0)
    }
}

impl Num for Dd {
    type FromStrRadixErr = std::num::ParseFloatError;

    /// Parses through `f64`; only used for literals in tests.
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        assert_eq!(radix, 10, "decimal only");
        s.parse::<f64>().map(Dd::from)
    }
}

impl Real for Dd {
    fn unit_roundoff() -> Self {
        Dd::from(f64::EPSILON * f64::EPSILON)
    }
    fn decimal_digits() -> usize {
        32
    }
    fn finest_precision() -> f64 {
        1e-28
    }
    fn lift(x: f64) -> Self {
        Dd::from(x)
    }
    fn approx(self) -> f64 {
        self.0.hi() + self.0.lo()
    }
    fn abs(self) -> Self {
        Dd(self.0.abs())
    }
    fn sqrt(self) -> Self {
        // one Newton step on top of the library's estimate
        let s = Dd(self.0.sqrt());
        if s.is_zero() || !s.is_finite() {
            return s;
        }
        (s + self / s) / Dd::from(2.0)
    }
    fn floor(self) -> Self {
        Dd(self.0.floor())
    }
    fn pi() -> Self {
        Dd(twofloat::consts::PI)
    }
}

/// A point of the projective line over `T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Projective<T> {
    Finite(T),
    Infinity,
}

impl<T> Projective<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            Projective::Finite(z) => Some(z),
            Projective::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Projective::Infinity)
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Projective<U> {
        match self {
            Projective::Finite(z) => Projective::Finite(f(z)),
            Projective::Infinity => Projective::Infinity,
        }
    }
}

impl<R: Real> Projective<Complex<R>> {
    pub fn to_f64(self) -> Projective<Complex<f64>> {
        self.map(complex_to_f64)
    }
}

/// Modulus of a complex number.
pub fn cabs<R: Real>(z: Complex<R>) -> R {
    let (a, b) = (z.re.abs(), z.im.abs());
    let (big, small) = if a >= b { (a, b) } else { (b, a) };
    if big.is_zero() {
        return big;
    }
    let t = small / big;
    big * (R::one() + t * t).sqrt()
}

/// `exp(x)` evaluated with the working precision of `R`.
///
/// The double-double library ships an `exp` accurate only to about `f64`
/// level, so the series is summed here after halving the argument.
pub fn exp<R: Real>(x: R) -> R {
    let mut halvings = 0;
    let mut r = x;
    let threshold = R::lift(0.5);
    let two = R::from_int(2);
    while r.abs() > threshold {
        r = r / two;
        halvings += 1;
    }
    let mut term = R::one();
    let mut sum = R::one();
    for k in 1..40 {
        term = term * r / R::from_int(k);
        sum = sum + term;
        if term.abs() < R::unit_roundoff() * sum.abs() {
            break;
        }
    }
    for _ in 0..halvings {
        sum = sum * sum;
    }
    sum
}

/// Real `n`-th root of a positive number, refined by Newton's method.
pub fn nth_root<R: Real>(x: R, n: i32) -> R {
    assert!(x > R::zero() && n > 0);
    let seed = x.approx().powf(1.0 / n as f64);
    let mut r = R::lift(seed);
    let nn = R::from_int(n as i64);
    for _ in 0..8 {
        r = r - (r.powi(n) - x) / (nn * r.powi(n - 1));
    }
    r
}

/// Primitive sixth root of unity `exp(2 pi i / 6)`.
pub fn zeta6<R: Real>() -> Complex<R> {
    let half = R::one() / R::from_int(2);
    Complex::new(half, R::from_int(3).sqrt() * half)
}

pub fn complex_from_f64<R: Real>(z: Complex<f64>) -> Complex<R> {
    Complex::new(R::lift(z.re), R::lift(z.im))
}

pub fn complex_to_f64<R: Real>(z: Complex<R>) -> Complex<f64> {
    Complex::new(z.re.approx(), z.im.approx())
}

/// Formats `x` in scientific notation with `R::decimal_digits()` significant
/// digits. The output depends only on the value, so it is stable across runs.
pub fn to_decimal<R: Real>(x: R) -> String {
    let digits = R::decimal_digits();
    #[allow(clippy::eq_op)]
    if x != x {
        return "NaN".into();
    }
    if x.is_zero() {
        return format!("0.{}e0", "0".repeat(digits - 1));
    }
    let negative = x < R::zero();
    let mut v = x.abs();
    let ten = R::from_int(10);
    let mut exponent = v.approx().log10().floor() as i32;
    v = v / pow_int(ten, exponent);
    // log10 in f64 can be off by one near powers of ten.
    while v >= ten {
        v = v / ten;
        exponent += 1;
    }
    while v < R::one() {
        v = v * ten;
        exponent -= 1;
    }
    let mut out: Vec<u8> = Vec::with_capacity(digits + 1);
    for _ in 0..digits {
        let d = (v.floor().approx() as i64).clamp(0, 9);
        out.push(d as u8);
        v = (v - R::from_int(d)) * ten;
    }
    // round half up on the next digit
    if v.floor().approx() >= 5.0 {
        let mut i = out.len();
        loop {
            if i == 0 {
                out.insert(0, 1);
                out.pop();
                exponent += 1;
                break;
            }
            i -= 1;
            if out[i] == 9 {
                out[i] = 0;
            } else {
                out[i] += 1;
                break;
            }
        }
    }
    let mantissa: String = out.iter().map(|d| char::from(b'0' + d)).collect();
    format!(
        "{}{}.{}e{}",
        if negative { "-" } else { "" },
        &mantissa[..1],
        &mantissa[1..],
        exponent
    )
}

fn pow_int<R: Real>(base: R, e: i32) -> R {
    let mut acc = R::one();
    let mut b = if e < 0 { R::one() / base } else { base };
    let mut k = e.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * b;
        }
        b = b * b;
        k >>= 1;
    }
    acc
}

/// Chordal distance on the Riemann sphere; `None` stands for infinity.
pub fn chordal_distance(a: Option<Complex<f64>>, b: Option<Complex<f64>>) -> f64 {
    match (a, b) {
        (None, None) => 0.0,
        (Some(z), None) | (None, Some(z)) => 2.0 / (1.0 + z.norm_sqr()).sqrt(),
        (Some(z), Some(w)) => {
            2.0 * (z - w).norm() / ((1.0 + z.norm_sqr()).sqrt() * (1.0 + w.norm_sqr()).sqrt())
        }
    }
}

/// All complex roots of a polynomial (ascending coefficients) by the
/// Aberth–Ehrlich iteration.
pub fn polynomial_roots<R: Real>(coeffs: &[Complex<R>]) -> Vec<Complex<R>> {
    let mut c: Vec<Complex<R>> = coeffs.to_vec();
    while c.len() > 1 && c.last().unwrap().is_zero() {
        c.pop();
    }
    let degree = c.len() - 1;
    if degree == 0 {
        return Vec::new();
    }
    let lead = *c.last().unwrap();
    let monic: Vec<Complex<R>> = c.iter().map(|x| *x / lead).collect();
    // Fujiwara bound for the initial circle: 2 max |a_{d-k}|^(1/k).
    let bound = (1..=degree)
        .map(|k| 2.0 * complex_to_f64(monic[degree - k]).norm().powf(1.0 / k as f64))
        .fold(0.0f64, f64::max);
    let bound = R::lift(bound.max(1e-3));
    let mut roots: Vec<Complex<R>> = (0..degree)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / degree as f64 + 0.4;
            Complex::new(R::lift(angle.cos()), R::lift(angle.sin())) * bound * R::lift(0.5)
        })
        .collect();
    let eval = |z: Complex<R>| {
        let mut p = Complex::<R>::zero();
        let mut dp = Complex::<R>::zero();
        for a in monic.iter().rev() {
            dp = dp * z + p;
            p = p * z + *a;
        }
        (p, dp)
    };
    let tiny = R::unit_roundoff();
    for _ in 0..2000 {
        let mut max_step = R::zero();
        for i in 0..degree {
            let (p, dp) = eval(roots[i]);
            if p.is_zero() {
                continue;
            }
            let ratio = p / dp;
            let mut repulsion = Complex::<R>::zero();
            for j in 0..degree {
                if i != j {
                    let d = roots[i] - roots[j];
                    if !d.is_zero() {
                        repulsion = repulsion + Complex::<R>::one() / d;
                    }
                }
            }
            let denom = Complex::<R>::one() - ratio * repulsion;
            let step = if denom.is_zero() { ratio } else { ratio / denom };
            if step.re.is_finite() && step.im.is_finite() {
                roots[i] = roots[i] - step;
                max_step = max_step.max(cabs(step) / (R::one() + cabs(roots[i])));
            }
        }
        if max_step < tiny * R::from_int(16) {
            break;
        }
    }
    roots
}

/// Groups numerically close roots; returns representative and cluster size.
pub fn cluster_roots<R: Real>(roots: &[Complex<R>], radius: f64) -> Vec<(Complex<R>, usize)> {
    let mut clusters: Vec<(Complex<R>, usize, Complex<R>)> = Vec::new();
    for &r in roots {
        let found = clusters.iter_mut().find(|(center, _, _)| {
            (complex_to_f64(*center) - complex_to_f64(r)).norm()
                <= radius * (1.0 + complex_to_f64(r).norm())
        });
        match found {
            Some((center, count, sum)) => {
                *sum = *sum + r;
                *count += 1;
                *center = *sum / R::from_int(*count as i64);
            }
            None => clusters.push((r, 1, r)),
        }
    }
    clusters.into_iter().map(|(c, n, _)| (c, n)).collect()
}

/// `1` as a complex number in `R`.
pub fn c_one<R: Real>() -> Complex<R> {
    Complex::one()
}
