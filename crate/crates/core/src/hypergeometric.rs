//! Local solutions of the hypergeometric equation in standard form
//!
//! `w'' + ((1-l)/x + (1-m)/(x-1)) w' + ((1-l-m)^2 - n^2)/(4x(x-1)) w = 0`
//!
//! with exponent differences `l, m, n` at `0, 1, infinity`, and the Schwarz
//! map `y = w1/w2`.
//!
//! The equation is Gauss's with `c = 1 - l`, `a, b = (1 - l - m +- n)/2`.
//! Each local pair is built from Kummer's solutions, chosen so that
//! `y ~ t^e` in the local parameter `t` (`x`, `1 - x`, `1/x`) with `e` the
//! exponent difference there. The series in `t` are summed for `|t| <= 0.9`
//! until a term drops below `1e-17` of the partial sum; the remainder is then
//! below `1e-16 / (1 - |t|)` relative to the sum.

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum HypergeometricError {
    #[error("exponent difference {0} is outside (0, 1]")]
    OutOfRange(Rational64),
    #[error("exponent difference {0} is an integer; only the generic case is supported")]
    NonGeneric(Rational64),
    #[error("|t| = {0} exceeds the series domain 0.9 of the local solutions")]
    DomainExceeded(f64),
    #[error("w2 vanishes at x = {0}")]
    ZeroDenominator(Complex64),
    #[error("basis change is singular")]
    SingularBasis,
    #[error("regression needs at least 3 samples, got {0}")]
    InsufficientSamples(usize),
}

/// Largest local parameter modulus at which the series are summed.
pub const SERIES_DOMAIN: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Spherical,
    Euclidean,
    Hyperbolic,
}

/// Exponent differences at 0, 1 and infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HGParams {
    pub lambda: Rational64,
    pub mu: Rational64,
    pub nu: Rational64,
}

impl HGParams {
    pub fn new(lambda: Rational64, mu: Rational64, nu: Rational64) -> Result<Self, HypergeometricError> {
        for e in [lambda, mu, nu] {
            if e <= Rational64::zero() || e > Rational64::from_integer(1) {
                return Err(HypergeometricError::OutOfRange(e));
            }
        }
        Ok(HGParams { lambda, mu, nu })
    }

    pub fn regime(&self) -> Regime {
        let s = self.lambda + self.mu + self.nu;
        let one = Rational64::from_integer(1);
        if s < one {
            Regime::Hyperbolic
        } else if s == one {
            Regime::Euclidean
        } else {
            Regime::Spherical
        }
    }

    /// Gauss parameters `(a, b, c)`.
    pub fn gauss(&self) -> (f64, f64, f64) {
        let f = |q: Rational64| q.to_f64().unwrap();
        let (l, m, n) = (f(self.lambda), f(self.mu), f(self.nu));
        ((1.0 - l - m + n) / 2.0, (1.0 - l - m - n) / 2.0, 1.0 - l)
    }

    fn exponents(&self) -> (f64, f64, f64) {
        let f = |q: Rational64| q.to_f64().unwrap();
        (f(self.lambda), f(self.mu), f(self.nu))
    }

    /// Coefficients `p, q` of `w'' + p w' + q w = 0`.
    pub fn coefficients(&self, x: Complex64) -> (Complex64, Complex64) {
        let (l, m, n) = self.exponents();
        let p = (1.0 - l) / x + (1.0 - m) / (x - 1.0);
        let q = ((1.0 - l - m).powi(2) - n * n) / (4.0 * x * (x - 1.0));
        (p, q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Vertex {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
    #[serde(rename = "inf")]
    Infinity,
}

impl Vertex {
    pub const ALL: [Vertex; 3] = [Vertex::Zero, Vertex::One, Vertex::Infinity];

    /// Point at local parameter `t`.
    pub fn point(self, t: Complex64) -> Complex64 {
        match self {
            Vertex::Zero => t,
            Vertex::One => 1.0 - t,
            Vertex::Infinity => t.inv(),
        }
    }

    fn parameter(self, x: Complex64) -> Complex64 {
        match self {
            Vertex::Zero => x,
            Vertex::One => 1.0 - x,
            Vertex::Infinity => x.inv(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Prefactor {
    /// `x^e`
    X(f64),
    /// `(1 - x)^e`
    OneMinusX(f64),
}

/// `prefactor(x) * F(a, b; c; t(x))`.
#[derive(Debug, Clone, Copy)]
struct Kummer {
    prefactor: Prefactor,
    a: f64,
    b: f64,
    c: f64,
}

/// `F, F', F''` at `t` by direct summation.
fn gauss_series(a: f64, b: f64, c: f64, t: Complex64) -> (Complex64, Complex64, Complex64) {
    let mut term = Complex64::new(1.0, 0.0); // coefficient of t^k times t^k
    let mut f = term;
    let mut df = Complex64::zero();
    let mut d2f = Complex64::zero();
    for k in 0..20_000 {
        let kf = k as f64;
        let ratio = (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0));
        term = term * ratio * t;
        let k1 = kf + 1.0;
        // d/dt of coefficient * t^(k+1) is (k+1)/t times the term
        if !t.is_zero() {
            df += term * k1 / t;
            d2f += term * k1 * kf / (t * t);
        }
        f += term;
        if k > 4 && term.norm() < 1e-17 * f.norm() {
            break;
        }
    }
    if t.is_zero() {
        let d1 = a * b / c;
        let d2 = a * (a + 1.0) * b * (b + 1.0) / (c * (c + 1.0));
        return (f, Complex64::new(d1, 0.0), Complex64::new(d2, 0.0));
    }
    (f, df, d2f)
}

impl Kummer {
    /// Value and first two derivatives in `x`.
    fn eval(&self, vertex: Vertex, x: Complex64) -> (Complex64, Complex64, Complex64) {
        let t = vertex.parameter(x);
        let (g, dg, d2g) = gauss_series(self.a, self.b, self.c, t);
        // chain rule for t(x)
        let (t1, t2) = match vertex {
            Vertex::Zero => (Complex64::new(1.0, 0.0), Complex64::zero()),
            Vertex::One => (Complex64::new(-1.0, 0.0), Complex64::zero()),
            Vertex::Infinity => (-(x * x).inv(), 2.0 * (x * x * x).inv()),
        };
        let h = g;
        let h1 = dg * t1;
        let h2 = d2g * t1 * t1 + dg * t2;
        let (p, p1, p2) = match self.prefactor {
            Prefactor::X(e) => (x.powf(e), e * x.powf(e - 1.0), e * (e - 1.0) * x.powf(e - 2.0)),
            Prefactor::OneMinusX(e) => {
                let u = 1.0 - x;
                (u.powf(e), -e * u.powf(e - 1.0), e * (e - 1.0) * u.powf(e - 2.0))
            }
        };
        (p * h, p1 * h + p * h1, p2 * h + 2.0 * p1 * h1 + p * h2)
    }
}

/// A pair of independent solutions near a singular point. The pair is
/// `B (u1, u2)` for the local Kummer pair `(u1, u2)` and a basis matrix `B`.
#[derive(Debug, Clone)]
pub struct SchwarzSolution {
    pub params: HGParams,
    pub base: Vertex,
    local: [Kummer; 2],
    basis: [[Complex64; 2]; 2],
}

/// Local solutions at `base` with `y = w1/w2 ~ t^e`.
pub fn solve_hg(params: HGParams, base: Vertex) -> Result<SchwarzSolution, HypergeometricError> {
    for e in [params.lambda, params.mu, params.nu] {
        if e.is_integer() {
            return Err(HypergeometricError::NonGeneric(e));
        }
    }
    let (a, b, c) = params.gauss();
    let (l, m, _) = params.exponents();
    let local = match base {
        Vertex::Zero => [
            Kummer { prefactor: Prefactor::X(l), a: a - c + 1.0, b: b - c + 1.0, c: 2.0 - c },
            Kummer { prefactor: Prefactor::X(0.0), a, b, c },
        ],
        Vertex::One => [
            Kummer { prefactor: Prefactor::OneMinusX(m), a: c - a, b: c - b, c: 1.0 + m },
            Kummer { prefactor: Prefactor::OneMinusX(0.0), a, b, c: 1.0 - m },
        ],
        Vertex::Infinity => [
            Kummer { prefactor: Prefactor::X(-a), a, b: a - c + 1.0, c: a - b + 1.0 },
            Kummer { prefactor: Prefactor::X(-b), a: b, b: b - c + 1.0, c: b - a + 1.0 },
        ],
    };
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::zero();
    Ok(SchwarzSolution { params, base, local, basis: [[one, zero], [zero, one]] })
}

impl SchwarzSolution {
    fn check_domain(&self, x: Complex64) -> Result<(), HypergeometricError> {
        let t = self.base.parameter(x).norm();
        if !t.is_finite() || t > SERIES_DOMAIN {
            return Err(HypergeometricError::DomainExceeded(t));
        }
        Ok(())
    }

    /// `(w1, w1', w1'')` and `(w2, w2', w2'')` at `x`.
    pub fn jets(&self, x: Complex64) -> Result<[(Complex64, Complex64, Complex64); 2], HypergeometricError> {
        self.check_domain(x)?;
        let u = [self.local[0].eval(self.base, x), self.local[1].eval(self.base, x)];
        let combine = |row: [Complex64; 2]| {
            (
                row[0] * u[0].0 + row[1] * u[1].0,
                row[0] * u[0].1 + row[1] * u[1].1,
                row[0] * u[0].2 + row[1] * u[1].2,
            )
        };
        Ok([combine(self.basis[0]), combine(self.basis[1])])
    }

    /// New pair `(a w1 + b w2, c w1 + d w2)` for `m = [[a, b], [c, d]]`.
    pub fn transformed(&self, m: [[Complex64; 2]; 2]) -> Result<Self, HypergeometricError> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if det.norm() < 1e-14 {
            return Err(HypergeometricError::SingularBasis);
        }
        let b = self.basis;
        let mul = |r: [Complex64; 2]| [r[0] * b[0][0] + r[1] * b[1][0], r[0] * b[0][1] + r[1] * b[1][1]];
        Ok(SchwarzSolution { basis: [mul(m[0]), mul(m[1])], ..self.clone() })
    }

    /// Scaled ODE residual `|w'' + p w' + q w| / max(1, |w''|, |p w'|, |q w|)`
    /// for both solutions.
    pub fn ode_residual(&self, x: Complex64) -> Result<f64, HypergeometricError> {
        let (p, q) = self.params.coefficients(x);
        let jets = self.jets(x)?;
        Ok(jets
            .iter()
            .map(|&(w, w1, w2)| {
                let scale = 1f64.max(w2.norm()).max((p * w1).norm()).max((q * w).norm());
                (w2 + p * w1 + q * w).norm() / scale
            })
            .fold(0.0, f64::max))
    }

    pub fn wronskian(&self, x: Complex64) -> Result<Complex64, HypergeometricError> {
        let [(w1, d1, _), (w2, d2, _)] = self.jets(x)?;
        Ok(w1 * d2 - d1 * w2)
    }

    /// `W x^(1-l) (1-x)^(1-m)`, constant by Abel's identity.
    pub fn abel_invariant(&self, x: Complex64) -> Result<Complex64, HypergeometricError> {
        let (l, m, _) = self.params.exponents();
        Ok(self.wronskian(x)? * x.powf(1.0 - l) * (1.0 - x).powf(1.0 - m))
    }

    fn mobius_at_vertex(&self) -> Option<Complex64> {
        // y_local -> 0 at the base vertex
        let (b, d) = (self.basis[0][1], self.basis[1][1]);
        (!d.is_zero()).then(|| b / d)
    }
}

/// `y(x) = w1(x) / w2(x)`.
pub fn schwarz_map(sol: &SchwarzSolution, x: Complex64) -> Result<Complex64, HypergeometricError> {
    let [(w1, _, _), (w2, _, _)] = sol.jets(x)?;
    if w2.norm() < 1e-300 {
        return Err(HypergeometricError::ZeroDenominator(x));
    }
    Ok(w1 / w2)
}

/// Angle of the image triangle at `vertex`, divided by `pi`, estimated as
/// the coefficient of `log t` in a regression of `log |y(x) - y(vertex)|` on
/// 20 log-spaced local parameters `t` from `1e-2` to `1e-4` along the real
/// axis.
///
/// Uses `sol` when it is based at `vertex`, otherwise the local pair there;
/// the angle does not depend on the basis.
pub fn vertex_angle_exponent(sol: &SchwarzSolution, vertex: Vertex) -> Result<f64, HypergeometricError> {
    let radii: Vec<f64> = (0..20).map(|k| 10f64.powf(-2.0 - 2.0 * k as f64 / 19.0)).collect();
    vertex_angle_regression(sol, vertex, &radii)
}

/// [`vertex_angle_exponent`] on explicit local parameters.
pub fn vertex_angle_regression(
    sol: &SchwarzSolution,
    vertex: Vertex,
    radii: &[f64],
) -> Result<f64, HypergeometricError> {
    let local = if sol.base == vertex { sol.clone() } else { solve_hg(sol.params, vertex)? };
    let (y0, invert) = match local.mobius_at_vertex() {
        Some(y0) => (y0, false),
        None => (Complex64::zero(), true),
    };
    let mut pts = Vec::new();
    for &t in radii {
        let y = schwarz_map(&local, vertex.point(Complex64::new(t, 0.0)))?;
        let y = if invert { y.inv() } else { y - y0 };
        let v = y.norm().ln();
        if v.is_finite() {
            pts.push((t.ln(), v));
        }
    }
    if pts.len() < 3 {
        return Err(HypergeometricError::InsufficientSamples(pts.len()));
    }
    // least squares on log|y| = e log t + b + c t; the t column absorbs the
    // first-order term of the local series, which would bias e by O(t)
    let mut ata = [[0.0f64; 3]; 3];
    let mut atb = [0.0f64; 3];
    for &(lt, ly) in &pts {
        let row = [lt, 1.0, lt.exp()];
        for i in 0..3 {
            atb[i] += row[i] * ly;
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    Ok(solve3(ata, atb)[0])
}

/// Gaussian elimination with partial pivoting on a 3x3 system.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> [f64; 3] {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        let pivot_row = a[col];
        for row in col + 1..3 {
            let f = a[row][col] / pivot_row[col];
            for (x, p) in a[row].iter_mut().zip(pivot_row).skip(col) {
                *x -= f * p;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let tail: f64 = (row + 1..3).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    x
}

/// True if four points lie on a common circle or line, tested by the
/// imaginary part of their cross-ratio.
pub fn concyclic(p: [Complex64; 4], tolerance: f64) -> bool {
    let cr = ((p[0] - p[2]) * (p[1] - p[3])) / ((p[0] - p[3]) * (p[1] - p[2]));
    cr.im.abs() <= tolerance * (1.0 + cr.norm())
}
