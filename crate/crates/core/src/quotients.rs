//! Riemann-Hurwitz bookkeeping for quotients by an automorphism of prime
//! order, and a numeric check of the cover
//! `X: y'^2 = x'^6 - 1  ->  E: y^2 = x^3 - 1,  (x', y') -> (x'^2, y')`
//! composed with a degree-3 Belyi function on `E`.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::numeric::{chordal_distance, cluster_roots, polynomial_roots};

#[derive(Debug, Error, PartialEq)]
pub enum QuotientError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = {0} must be at least 5")]
    TooSmall(u64),
    #[error("genus {0} must be at least 2")]
    GenusTooSmall(u64),
    #[error("the congruence 2g' = 0 mod {0} has no unique solution below g")]
    NoQuotientGenus(u64),
    #[error("need at least 100 samples, got {0}")]
    TooFewSamples(usize),
    #[error("candidate Belyi function rejected: {0}")]
    CandidateRejected(String),
}

/// Ramification data of `X -> X/<sigma>` for `sigma` of prime order `p` on a
/// curve of genus `(p-1)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuotientReport {
    pub p: u64,
    pub g: u64,
    pub g_quotient: u64,
    pub m: u64,
}

impl QuotientReport {
    /// `2g - 2 = p(2g' - 2) + m(p - 1)` in exact integer arithmetic.
    pub fn riemann_hurwitz_holds(&self) -> bool {
        let (p, g, gq, m) = (self.p as i128, self.g as i128, self.g_quotient as i128, self.m as i128);
        2 * g - 2 == p * (2 * gq - 2) + m * (p - 1)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Assumes every branch point of the cyclic cover is totally ramified, so
/// each contributes `p - 1`.
///
/// Reducing Riemann-Hurwitz mod `p - 1` gives `2g' = 0 mod (p - 1)`; the
/// quotient genus is the unique such `g' < g`, and `m` follows.
pub fn quotient_ramification(p: u64) -> Result<QuotientReport, QuotientError> {
    if p < 5 {
        return Err(QuotientError::TooSmall(p));
    }
    if !is_prime(p) {
        return Err(QuotientError::NotPrime(p));
    }
    let g = (p - 1) / 2;
    let candidates: Vec<u64> = (0..g).filter(|gq| (2 * gq) % (p - 1) == 0).collect();
    let &[g_quotient] = candidates.as_slice() else {
        return Err(QuotientError::NoQuotientGenus(p - 1));
    };
    let lhs = 2 * g as i128 - 2 - p as i128 * (2 * g_quotient as i128 - 2);
    if lhs < 0 || lhs % (p as i128 - 1) != 0 {
        return Err(QuotientError::NoQuotientGenus(p - 1));
    }
    let report = QuotientReport { p, g, g_quotient, m: (lhs / (p as i128 - 1)) as u64 };
    debug_assert!(report.riemann_hurwitz_holds());
    Ok(report)
}

/// `Some(2g + 1)` when it is a prime `>= 5`.
pub fn signature_for_genus(g: u64) -> Result<Option<(u64, u64, u64)>, QuotientError> {
    if g < 2 {
        return Err(QuotientError::GenusTooSmall(g));
    }
    let p = 2 * g + 1;
    Ok(is_prime(p).then_some((p, p, p)))
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// The Belyi candidate on `E`, as a function of `y`: `-2i / (y - i)`.
pub const BETA_CANDIDATE: &str = "-2i/(y - i)";

fn beta(y: Complex64) -> Option<Complex64> {
    let d = y - I;
    (d.norm() > 1e-300).then(|| -2.0 * I / d)
}

fn beta_inverse(w: Option<Complex64>) -> Option<Complex64> {
    match w {
        None => Some(I),
        Some(w) if w.norm() < 1e-300 => None,
        Some(w) => Some(I - 2.0 * I / w),
    }
}

/// Place on a curve, as a point in an affine chart or at infinity.
#[derive(Debug, Clone, Copy)]
enum Place {
    Affine(Complex64, Complex64),
    /// `(1/x, y / x^ceil(d/2))`
    AtInfinity(Complex64, Complex64),
}

impl Place {
    fn distance(&self, other: &Place) -> f64 {
        match (self, other) {
            (Place::Affine(a, b), Place::Affine(c, d)) | (Place::AtInfinity(a, b), Place::AtInfinity(c, d)) => {
                (a - c).norm().max((b - d).norm())
            }
            _ => f64::INFINITY,
        }
    }
}

/// `y^2 = x^d - 1`.
#[derive(Debug, Clone, Copy)]
struct Curve {
    d: u32,
}

impl Curve {
    fn genus(&self) -> i64 {
        (self.d as i64 - 1) / 2
    }

    fn place(&self, x: Complex64, y: Complex64) -> Place {
        if x.norm() <= 1e3 {
            Place::Affine(x, y)
        } else {
            Place::AtInfinity(x.inv(), y / x.powu(self.d.div_ceil(2)))
        }
    }

    /// Points with the given `y`, from the roots of `x^d - (y^2 + 1)`.
    fn points_over_y(&self, y: Complex64) -> Vec<Place> {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.d as usize + 1];
        coeffs[0] = -(y * y + 1.0);
        coeffs[self.d as usize] = Complex64::new(1.0, 0.0);
        polynomial_roots(&coeffs).into_iter().map(|x| self.place(x, y)).collect()
    }

    /// Preimages of `w` under `beta(y)`, perturbed by `eps`, grouped into
    /// places; the group sizes are the ramification indices over `w`.
    fn fibre_pattern(&self, w: Option<Complex64>) -> Vec<usize> {
        let eps = Complex64::from_polar(1e-12, 0.3);
        let perturbed = match w {
            Some(w) => Some(w + eps),
            None => Some(eps.inv()),
        };
        let y = beta_inverse(perturbed).expect("perturbed value is finite");
        let mut groups: Vec<(Place, usize)> = Vec::new();
        for p in self.points_over_y(y) {
            match groups.iter_mut().find(|(q, _)| q.distance(&p) < 0.1) {
                Some((_, n)) => *n += 1,
                None => groups.push((p, 1)),
            }
        }
        let mut out: Vec<usize> = groups.into_iter().map(|(_, n)| n).collect();
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }
}

/// A local chart in which `beta(y)` or its reciprocal is holomorphic.
struct Chart {
    /// Curve point at parameter `t`, or `None` outside the chart.
    point: Box<dyn Fn(Complex64) -> Option<(Complex64, Complex64)>>,
    /// Value of the chart function and its derivative.
    jet: Box<dyn Fn(Complex64) -> Option<(Complex64, Complex64)>>,
    /// Whether the chart function is `1/beta`.
    reciprocal: bool,
    radius: f64,
}

fn charts(curve: Curve) -> Vec<Chart> {
    let d = curve.d as i32;
    let df = d as f64;
    let mut out = Vec::new();
    for s in [1.0, -1.0] {
        // x chart on sheet y = s sqrt(x^d - 1)
        let y_of = move |x: Complex64| s * (x.powi(d) - 1.0).sqrt();
        let dy = move |x: Complex64, y: Complex64| df * x.powi(d - 1) / (2.0 * y);
        for reciprocal in [false, true] {
            out.push(Chart {
                point: Box::new(move |x| Some((x, y_of(x)))),
                jet: Box::new(move |x| {
                    let y = y_of(x);
                    if y.norm() < 1e-12 {
                        return None;
                    }
                    let yp = dy(x, y);
                    if reciprocal {
                        Some(((I * y + 1.0) / 2.0, I * yp / 2.0))
                    } else {
                        let den = y - I;
                        Some((-2.0 * I / den, 2.0 * I * yp / (den * den)))
                    }
                }),
                reciprocal,
                radius: 1.5,
            });
        }
        // chart at infinity: x = t^-k, y = t^-m w, w^2 = 1 - t^(k d)
        let (k, m) = if d % 2 == 0 { (1, d / 2) } else { (2, d) };
        let w_of = move |t: Complex64| s * (1.0 - t.powi(k * d)).sqrt();
        out.push(Chart {
            point: Box::new(move |t| {
                (t.norm() > 1e-300).then(|| (t.powi(-k), t.powi(-m) * w_of(t)))
            }),
            jet: Box::new(move |t| {
                let w = w_of(t);
                let p = t.powi(m);
                let pp = m as f64 * t.powi(m - 1);
                let wp = -((k * d) as f64) * t.powi(k * d - 1) / (2.0 * w);
                let den = w - I * p;
                let denp = wp - I * pp;
                Some((-2.0 * I * p / den, -2.0 * I * (pp * den - p * denp) / (den * den)))
            }),
            reciprocal: false,
            radius: 0.8,
        });
    }
    // y chart around the points with y = 0, where beta is Moebius in y
    out.push(Chart {
        point: Box::new(move |y: Complex64| {
            let x = (y * y + 1.0).powf(1.0 / df);
            Some((x, y))
        }),
        jet: Box::new(|y| {
            let den = y - I;
            Some((-2.0 * I / den, 2.0 * I / (den * den)))
        }),
        reciprocal: false,
        radius: 0.5,
    });
    out
}

/// Deterministic starting points filling a disc (sunflower spiral).
fn spiral(count: usize, radius: f64) -> impl Iterator<Item = Complex64> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count).map(move |k| {
        let r = radius * ((k as f64 + 0.5) / count as f64).sqrt();
        Complex64::from_polar(r, golden * k as f64)
    })
}

#[derive(Debug, Clone, Copy)]
struct CriticalPoint {
    place: Place,
    value: Option<Complex64>,
}

/// Newton iteration on the derivative of each chart function.
fn critical_points(curve: Curve, samples: usize) -> Vec<CriticalPoint> {
    let all = charts(curve);
    let per_chart = samples.div_ceil(all.len()).max(1);
    let mut found: Vec<CriticalPoint> = Vec::new();
    for chart in &all {
        let deriv = |t: Complex64| chart.jet.as_ref()(t).map(|(_, d)| d);
        for start in spiral(per_chart, chart.radius) {
            let mut t = start;
            let mut converged = false;
            // multiple zeros converge linearly, so stop on the step size
            for _ in 0..400 {
                let Some(g) = deriv(t) else { break };
                if g.norm() == 0.0 {
                    converged = true;
                    break;
                }
                let h = 1e-6 * t.norm().max(1e-6);
                let (Some(a), Some(b)) = (deriv(t + h), deriv(t - h)) else { break };
                let gp = (a - b) / (2.0 * h);
                let step = g / gp;
                if !step.re.is_finite() || !step.im.is_finite() {
                    break;
                }
                t -= step;
                if t.norm() > 2.0 * chart.radius {
                    break;
                }
                if step.norm() < 1e-12 * (1.0 + t.norm()) {
                    converged = deriv(t).is_some_and(|g| g.norm() < 1e-10);
                    break;
                }
            }
            if !converged || t.norm() > 2.0 * chart.radius {
                continue;
            }
            let (Some((x, y)), Some((v, _))) = (chart.point.as_ref()(t), chart.jet.as_ref()(t)) else {
                continue;
            };
            let value = if chart.reciprocal {
                (v.norm() > 1e-12).then(|| v.inv())
            } else {
                Some(v)
            };
            let place = curve.place(x, y);
            if !found.iter().any(|c| c.place.distance(&place) < 1e-4) {
                found.push(CriticalPoint { place, value });
            }
        }
    }
    found
}

fn critical_residual(points: &[CriticalPoint]) -> f64 {
    let targets = [Some(Complex64::new(0.0, 0.0)), Some(Complex64::new(1.0, 0.0)), None];
    points
        .iter()
        .map(|c| targets.iter().map(|t| chordal_distance(c.value, *t)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

/// Labels of {0, 1, inf} within `1e-8` of some critical value.
fn branch_labels(points: &[CriticalPoint]) -> Vec<String> {
    let targets = [("0", Some(Complex64::new(0.0, 0.0))), ("1", Some(Complex64::new(1.0, 0.0))), ("inf", None)];
    targets
        .iter()
        .filter(|(_, t)| points.iter().any(|c| chordal_distance(c.value, *t) < 1e-8))
        .map(|(l, _)| l.to_string())
        .collect()
}

/// Ramification of a map over 0, 1 and infinity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FibrePatterns {
    pub zero: Vec<usize>,
    pub one: Vec<usize>,
    pub infinity: Vec<usize>,
}

impl FibrePatterns {
    fn of(curve: Curve) -> Self {
        FibrePatterns {
            zero: curve.fibre_pattern(Some(Complex64::new(0.0, 0.0))),
            one: curve.fibre_pattern(Some(Complex64::new(1.0, 0.0))),
            infinity: curve.fibre_pattern(None),
        }
    }

    fn ramification(&self) -> i64 {
        [&self.zero, &self.one, &self.infinity].iter().flat_map(|p| p.iter()).map(|&e| e as i64 - 1).sum()
    }

    fn degree(&self) -> usize {
        self.zero.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverCertificate {
    pub samples: usize,
    pub beta_candidate: String,
    pub beta_degree: usize,
    pub beta_patterns: FibrePatterns,
    pub beta_branch_locus: Vec<String>,
    pub composition_degree: usize,
    pub composition_patterns: FibrePatterns,
    pub composition_branch_locus: Vec<String>,
    /// Distinct critical places of the composition found by the search.
    pub critical_points: usize,
    pub max_critical_residual: f64,
    /// `2g - 2 = -2 deg + sum (e - 1)` over the fibres of 0, 1, infinity.
    pub riemann_hurwitz_holds: bool,
    /// Branch values of `x' -> x'^2` on the x-line.
    pub pi_branch_locus: Vec<String>,
    pub pi_fibre_generic: usize,
    pub pi_fibre_over_zero: usize,
    pub pi_fibre_over_infinity: usize,
    /// Places of `X` over the point at infinity of `E`.
    pub pi_curve_places_over_infinity: usize,
    /// Branch locus of `beta` together with `beta` of the branch points of
    /// the curve map, compared with the branch locus of the composition.
    pub branch_union_matches: bool,
}

impl CoverCertificate {
    pub fn passes(&self) -> bool {
        self.composition_degree == 6
            && self.max_critical_residual < 1e-8
            && self.riemann_hurwitz_holds
            && self.pi_branch_locus == ["0", "inf"]
            && self.branch_union_matches
    }
}

/// Branch values of `t -> t^2` on the sphere. In the chart at 0 and in the
/// chart `u = 1/t` the map has the same local form, so one Newton search on
/// the derivative `2t` serves both; a critical point at the chart origin is
/// a branch value at 0, respectively infinity.
fn square_map_branch_locus(samples: usize) -> Vec<String> {
    let at_origin = spiral(samples, 2.0).any(|mut t| {
        for _ in 0..60 {
            let g = 2.0 * t;
            if g.norm() < 1e-14 {
                return true;
            }
            t -= g / 2.0;
        }
        false
    });
    if at_origin {
        vec!["0".to_string(), "inf".to_string()]
    } else {
        Vec::new()
    }
}

fn square_root_count(c: Complex64) -> usize {
    let roots = polynomial_roots(&[-c, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
    cluster_roots(&roots, 1e-6).len()
}

/// Numerically checks that `beta o pi` is a degree-6 Belyi map on `X`.
pub fn verify_composition_cover(samples: usize) -> Result<CoverCertificate, QuotientError> {
    if samples < 100 {
        return Err(QuotientError::TooFewSamples(samples));
    }
    let e = Curve { d: 3 };
    let x = Curve { d: 6 };

    let beta_patterns = FibrePatterns::of(e);
    let beta_degree = e.points_over_y(Complex64::new(0.37, 0.21)).len();
    let beta_critical = critical_points(e, samples);
    let beta_rh = 2 * e.genus() - 2 == -2 * beta_degree as i64 + beta_patterns.ramification();
    let expected = vec![3];
    if beta_degree != 3
        || beta_patterns.zero != expected
        || beta_patterns.one != expected
        || beta_patterns.infinity != expected
        || !beta_rh
        || critical_residual(&beta_critical) >= 1e-8
    {
        return Err(QuotientError::CandidateRejected(format!(
            "{BETA_CANDIDATE}: degree {beta_degree}, patterns {beta_patterns:?}, riemann-hurwitz {beta_rh}"
        )));
    }
    let beta_branch_locus = branch_labels(&beta_critical);

    let composition_patterns = FibrePatterns::of(x);
    let generic = x.points_over_y(Complex64::new(0.37, 0.21));
    let composition_degree = generic.len();
    let composition_critical = critical_points(x, samples);
    let riemann_hurwitz_holds = 2 * x.genus() - 2
        == -2 * composition_degree as i64 + composition_patterns.ramification()
        && composition_patterns.degree() == composition_degree;
    let composition_branch_locus = branch_labels(&composition_critical);

    // the curve map ramifies at (0, +-i) on E; their beta values
    let mut union = beta_branch_locus.clone();
    for y in [I, -I] {
        let over = x.points_over_y(y);
        let places = over.iter().fold(Vec::<Place>::new(), |mut acc, p| {
            if !acc.iter().any(|q| q.distance(p) < 1e-3) {
                acc.push(*p);
            }
            acc
        });
        let ramified = places.len() < over.len();
        if ramified {
            let label = match beta(y) {
                None => "inf",
                Some(v) if (v - 1.0).norm() < 1e-12 => "1",
                Some(_) => "0",
            };
            if !union.iter().any(|l| l == label) {
                union.push(label.to_string());
            }
        }
    }
    let order = |l: &String| ["0", "1", "inf"].iter().position(|m| m == l);
    union.sort_by_key(order);

    // places of X above a point of E near infinity
    let t = 1e-4;
    let (ex, ey) = (Complex64::new(t, 0.0).powi(-2), Complex64::new(t, 0.0).powi(-3) * (1.0 - t.powi(6)).sqrt());
    let over_infinity: Vec<Place> = [ex.sqrt(), -ex.sqrt()].iter().map(|&xp| x.place(xp, ey)).collect();
    let pi_curve_places_over_infinity = if over_infinity[0].distance(&over_infinity[1]) < 0.1 { 1 } else { 2 };

    Ok(CoverCertificate {
        samples,
        beta_candidate: BETA_CANDIDATE.to_string(),
        beta_degree,
        beta_patterns,
        beta_branch_locus,
        composition_degree,
        composition_patterns,
        branch_union_matches: union == composition_branch_locus,
        composition_branch_locus,
        critical_points: composition_critical.len(),
        max_critical_residual: critical_residual(&composition_critical),
        riemann_hurwitz_holds,
        pi_branch_locus: square_map_branch_locus(samples),
        pi_fibre_generic: square_root_count(Complex64::new(0.37, 0.21)),
        pi_fibre_over_zero: square_root_count(Complex64::new(0.0, 0.0)),
        // chart u = 1/x: u'^2 = u at u = 0
        pi_fibre_over_infinity: square_root_count(Complex64::new(0.0, 0.0)),
        pi_curve_places_over_infinity,
    })
}
