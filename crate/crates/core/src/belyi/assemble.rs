use num_complex::Complex;

use super::poly::Polynomial;
use super::rational_function::RationalFunction;
use super::BelyiError;
use crate::dessins::VertexClass;
use crate::lattice::{DivisionPointClasses, EisensteinPoint};
use crate::numeric::{cabs, Projective, Real};
use crate::weierstrass::LatticeScaling;

/// `f_n` with floating coefficients together with its normalization data.
#[derive(Debug, Clone)]
pub struct Assembly<R> {
    pub i: u32,
    pub function: RationalFunction<Complex<R>>,
    pub k: Complex<R>,
    /// One-class point whose value fixes `k`.
    pub anchor: EisensteinPoint,
    /// Largest `|f(phi(o)) - 1|` over the remaining one-class points and
    /// their mirror images.
    pub normalization_residual: f64,
}

/// Builds `f_i = k * prod(zero factors) / prod(pole factors) * g_i`.
///
/// Interior points contribute `(x - phi(z))^3 (x - phi(z*))^3` where `z*` is
/// the mirror image, boundary points `(x - phi(z))^3`. The corner factor
/// `g_i` depends on `i mod 3`; the corner `p0` is sent to infinity and has no
/// factor.
pub fn assemble_belyi<R: Real>(
    i: u32,
    classes: &DivisionPointClasses,
    scaling: &LatticeScaling<R>,
) -> Result<Assembly<R>, BelyiError> {
    if classes.i != i {
        return Err(BelyiError::IndexMismatch { expected: i, found: classes.i });
    }
    let finite_phi = |p: EisensteinPoint| -> Result<Complex<R>, BelyiError> {
        scaling.phi_point(p).finite().ok_or(BelyiError::NonFiniteFactor(p))
    };
    let cubed_factors = |class: VertexClass| -> Result<Polynomial<Complex<R>>, BelyiError> {
        let mut roots = Vec::new();
        for p in classes.points(class) {
            roots.push(finite_phi(p.point)?);
            if !p.on_boundary {
                roots.push(finite_phi(p.point.mirror())?);
            }
        }
        Ok(Polynomial::from_roots(roots.iter()).pow(3))
    };
    let mut numerator = cubed_factors(VertexClass::Zero)?;
    let mut denominator = cubed_factors(VertexClass::Pole)?;
    let top = Polynomial::linear_root(finite_phi(classes.top)?);
    let bottom = Polynomial::linear_root(finite_phi(classes.bottom)?);
    match classes.a_residue {
        0 => denominator = &(&denominator * &top) * &bottom,
        1 => numerator = &numerator * &bottom,
        _ => numerator = &numerator * &top,
    }

    let mut ones: Vec<EisensteinPoint> = classes.ones.iter().map(|p| p.point).collect();
    for (corner, class) in [(classes.top, classes.top_class), (classes.bottom, classes.bottom_class)] {
        if class == VertexClass::One {
            ones.push(corner);
        }
    }
    let anchor = *ones
        .iter()
        .min_by_key(|p| p.reduce_mod_lattice())
        .ok_or(BelyiError::Normalization(classes.p0))?;
    let x = finite_phi(anchor)?;
    let unscaled = RationalFunction::new(numerator.clone(), denominator.clone());
    let k = match unscaled.evaluate(x) {
        Projective::Finite(v) if cabs(v).approx() > 0.0 => v.inv(),
        _ => return Err(BelyiError::Normalization(anchor)),
    };
    let function = RationalFunction::new(numerator.scale(&k), denominator);

    let mut residual = 0.0f64;
    let interior: Vec<EisensteinPoint> =
        classes.ones.iter().filter(|p| !p.on_boundary).map(|p| p.point.mirror()).collect();
    for p in ones.iter().chain(&interior) {
        if *p == anchor {
            continue;
        }
        let v = function.evaluate(finite_phi(*p)?);
        let r = match v {
            Projective::Finite(v) => cabs(v - Complex::new(R::one(), R::zero())).approx(),
            Projective::Infinity => f64::INFINITY,
        };
        residual = residual.max(r);
    }
    Ok(Assembly { i, function, k, anchor, normalization_residual: residual })
}
