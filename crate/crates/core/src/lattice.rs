//! Exact points of `C` in the basis `1, zeta6`, and the division points of
//! the big triangle that carry the ramification of `f_n`.
//!
//! The big triangle has corners `0` (bottom), `p0 = (1 + zeta6)/3` (sent to
//! infinity) and `top = (2 zeta6 - 1)/3`. These are the three rotation
//! centers of order 3 of the hexagonal lattice, one from each class mod the
//! lattice. Its `n`-fold subdivision has vertices
//! `z(s, t) = (s p0 + t top)/n` with `s, t >= 0`, `s + t <= n`.

use std::fmt;

use num_complex::Complex;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::dessins::{grid_class, VertexClass};
use crate::numeric::{zeta6, Real};

/// The point `a + b zeta6` with rational coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EisensteinPoint {
    pub a: Rational64,
    pub b: Rational64,
}

impl fmt::Debug for EisensteinPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

impl Serialize for EisensteinPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("EisensteinPoint", 2)?;
        st.serialize_field("a", &self.a.to_string())?;
        st.serialize_field("b", &self.b.to_string())?;
        st.end()
    }
}

impl std::ops::Add for EisensteinPoint {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        EisensteinPoint { a: self.a + o.a, b: self.b + o.b }
    }
}

impl std::ops::Sub for EisensteinPoint {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        EisensteinPoint { a: self.a - o.a, b: self.b - o.b }
    }
}

impl std::ops::Neg for EisensteinPoint {
    type Output = Self;
    fn neg(self) -> Self {
        EisensteinPoint { a: -self.a, b: -self.b }
    }
}

fn frac(x: Rational64) -> Rational64 {
    x - x.floor()
}

impl EisensteinPoint {
    pub fn new(a: Rational64, b: Rational64) -> Self {
        EisensteinPoint { a, b }
    }

    /// `(a_num/a_den) + (b_num/b_den) zeta6`.
    pub fn ratio(a_num: i64, a_den: i64, b_num: i64, b_den: i64) -> Self {
        EisensteinPoint { a: Rational64::new(a_num, a_den), b: Rational64::new(b_num, b_den) }
    }

    pub fn zero() -> Self {
        EisensteinPoint { a: Rational64::zero(), b: Rational64::zero() }
    }

    /// Half period `1/2`.
    pub fn v1() -> Self {
        Self::ratio(1, 2, 0, 1)
    }

    /// Half period `zeta6 / 2`.
    pub fn v2() -> Self {
        Self::ratio(0, 1, 1, 2)
    }

    pub fn scale(self, k: Rational64) -> Self {
        EisensteinPoint { a: self.a * k, b: self.b * k }
    }

    /// Canonical representative with `0 <= a, b < 1`.
    pub fn reduce_mod_lattice(self) -> Self {
        EisensteinPoint { a: frac(self.a), b: frac(self.b) }
    }

    pub fn is_lattice_point(self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    /// Complex conjugate: `conj(a + b zeta6) = (a + b) - b zeta6`.
    pub fn conjugate(self) -> Self {
        EisensteinPoint { a: self.a + self.b, b: -self.b }
    }

    /// Reflection `z -> -conj(z)` in the imaginary axis. It fixes each class
    /// of rotation centers and satisfies `phi(-conj z) = conj phi(z)`.
    pub fn mirror(self) -> Self {
        -self.conjugate()
    }

    /// Multiplication by `zeta3 = zeta6^2`.
    pub fn rotate_third(self) -> Self {
        EisensteinPoint { a: -self.a - self.b, b: self.a }
    }

    /// True if `self = zeta3^k other + lattice` for some `k`. The function
    /// `phi` is invariant under this equivalence.
    pub fn equivalent_mod_rotation(self, other: Self) -> bool {
        let target = self.reduce_mod_lattice();
        let mut w = other;
        (0..3).any(|_| {
            let hit = w.reduce_mod_lattice() == target;
            w = w.rotate_third();
            hit
        })
    }

    /// Index of the order-3 rotation center congruent to `self`:
    /// 0 for the lattice, 1 for `(1 + zeta6)/3`, 2 for `2(1 + zeta6)/3`.
    pub fn rotation_center(self) -> Option<u32> {
        let r = self.reduce_mod_lattice();
        if r.a != r.b {
            return None;
        }
        let three = r.a * Rational64::from_integer(3);
        three.is_integer().then(|| three.to_integer() as u32)
    }

    /// True if `n z` lies in the lattice.
    pub fn is_division_point(self, n: u32) -> bool {
        self.scale(Rational64::from_integer(n as i64)).is_lattice_point()
    }

    /// Position in `C` before any scaling of the lattice.
    pub fn to_complex<R: Real>(self) -> Complex<R> {
        let a = R::from_int(*self.a.numer()) / R::from_int(*self.a.denom());
        let b = R::from_int(*self.b.numer()) / R::from_int(*self.b.denom());
        Complex::new(a, R::zero()) + zeta6::<R>() * b
    }

    /// Squared Euclidean norm `a^2 + a b + b^2`.
    pub fn norm_squared(self) -> Rational64 {
        self.a * self.a + self.a * self.b + self.b * self.b
    }
}

/// Corner `p0 = (1 + zeta6)/3` of the big triangle.
pub fn big_triangle_p0() -> EisensteinPoint {
    EisensteinPoint::ratio(1, 3, 1, 3)
}

/// Corner `top = (2 zeta6 - 1)/3` of the big triangle.
pub fn big_triangle_top() -> EisensteinPoint {
    EisensteinPoint::ratio(-1, 3, 2, 3)
}

/// Grid coordinates `(n u, n v)` of `z = u p0 + v top`, or `None` when `z`
/// lies outside the closed big triangle or off the `n`-grid.
pub fn grid_coordinates(z: EisensteinPoint, n: u32) -> Option<(u32, u32)> {
    // a = (u - v)/3, b = (u + 2v)/3
    let u = z.a * 2 + z.b;
    let v = z.b - z.a;
    if u.is_negative() || v.is_negative() || u + v > Rational64::one() {
        return None;
    }
    let n = Rational64::from_integer(n as i64);
    let (s, t) = (u * n, v * n);
    (s.is_integer() && t.is_integer()).then(|| (s.to_integer() as u32, t.to_integer() as u32))
}

/// The vertex `z(s, t)` of the `n`-grid.
pub fn grid_point(n: u32, s: u32, t: u32) -> EisensteinPoint {
    let k = Rational64::new(1, n as i64);
    (big_triangle_p0().scale(Rational64::from_integer(s as i64))
        + big_triangle_top().scale(Rational64::from_integer(t as i64)))
    .scale(k)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifiedPoint {
    pub point: EisensteinPoint,
    pub s: u32,
    pub t: u32,
    pub class: VertexClass,
    /// On the boundary of the big triangle, the image of the real line.
    pub on_boundary: bool,
}

impl ClassifiedPoint {
    fn to_json(&self) -> Value {
        json!({
            "a": self.point.a.to_string(),
            "b": self.point.b.to_string(),
            "class": self.class.as_str(),
            "on_boundary": self.on_boundary,
        })
    }
}

/// Zeros, ones and poles of `f_n` in the closed big triangle, excluding the
/// three corners which are recorded separately.
#[derive(Debug, Clone)]
pub struct DivisionPointClasses {
    pub i: u32,
    pub zeros: Vec<ClassifiedPoint>,
    pub ones: Vec<ClassifiedPoint>,
    pub poles: Vec<ClassifiedPoint>,
    pub top: EisensteinPoint,
    pub bottom: EisensteinPoint,
    pub top_class: VertexClass,
    pub bottom_class: VertexClass,
    pub a_residue: u32,
    pub p0: EisensteinPoint,
}

impl DivisionPointClasses {
    pub fn points(&self, class: VertexClass) -> &[ClassifiedPoint] {
        match class {
            VertexClass::Zero => &self.zeros,
            VertexClass::One => &self.ones,
            VertexClass::Pole => &self.poles,
        }
    }

    /// Number of preimages of the class value counted with multiplicity,
    /// including the corners. Interior points stand for themselves and their
    /// mirror image on the back sheet.
    pub fn weighted_count(&self, class: VertexClass) -> u32 {
        let body: u32 = self
            .points(class)
            .iter()
            .map(|p| if p.on_boundary { 3 } else { 6 })
            .sum();
        let corners = [self.top_class, self.bottom_class, VertexClass::Pole]
            .iter()
            .filter(|&&c| c == class)
            .count() as u32;
        body + corners
    }

    pub fn to_json(&self) -> Value {
        let list = |v: &[ClassifiedPoint]| Value::Array(v.iter().map(ClassifiedPoint::to_json).collect());
        json!({
            "a_residue": self.a_residue,
            "bottom": self.bottom,
            "bottom_class": self.bottom_class.as_str(),
            "i": self.i,
            "ones": list(&self.ones),
            "p0": self.p0,
            "poles": list(&self.poles),
            "top": self.top,
            "top_class": self.top_class.as_str(),
            "zeros": list(&self.zeros),
        })
    }
}

/// Classifies the vertices of the `i`-grid of the big triangle.
///
/// `i z(s, t)` is congruent to the rotation center with index
/// `(s - t) mod 3`. Centers are labeled so that `p0` is a pole and the labels
/// of the other two corners follow `i mod 3`.
///
/// # Panics
/// If `i == 0`.
pub fn classify_division_points(i: u32) -> DivisionPointClasses {
    assert!(i >= 1, "family index must be positive");
    let mut zeros = Vec::new();
    let mut ones = Vec::new();
    let mut poles = Vec::new();
    for t in 0..=i {
        for s in 0..=i - t {
            let corner = (s, t) == (0, 0) || (s, t) == (i, 0) || (s, t) == (0, i);
            if corner {
                continue;
            }
            let class = grid_class(i, s, t);
            let p = ClassifiedPoint {
                point: grid_point(i, s, t),
                s,
                t,
                class,
                on_boundary: s == 0 || t == 0 || s + t == i,
            };
            match class {
                VertexClass::Zero => zeros.push(p),
                VertexClass::One => ones.push(p),
                VertexClass::Pole => poles.push(p),
            }
        }
    }
    DivisionPointClasses {
        i,
        zeros,
        ones,
        poles,
        top: grid_point(i, 0, i),
        bottom: grid_point(i, 0, 0),
        top_class: grid_class(i, 0, i),
        bottom_class: grid_class(i, 0, 0),
        a_residue: i % 3,
        p0: grid_point(i, i, 0),
    }
}
