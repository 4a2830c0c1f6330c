//! Dessins d'enfants as pairs of permutations on an edge set.
//!
//! `sigma` rotates the edges around the vertices lying over 0 and `tau`
//! around the vertices lying over 1; the faces correspond to the cycles of
//! `sigma` followed by `tau`, and lie over infinity.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DessinError {
    #[error("the family index must be at least 1")]
    ZeroIndex,
    #[error("sigma acts on {sigma} points but tau on {tau}")]
    LengthMismatch { sigma: usize, tau: usize },
    #[error("a dessin needs at least one edge")]
    Empty,
    #[error("{name} is not a permutation of 0..{len}")]
    NotAPermutation { name: &'static str, len: usize },
    #[error("the permutations do not act transitively on the edges")]
    NotTransitive,
    #[error("odd Euler characteristic {0}")]
    OddEulerCharacteristic(i64),
    #[error("unsupported export format `{0}`")]
    UnsupportedFormat(String),
    #[error("malformed dessin JSON: {0}")]
    Json(String),
}

/// Which of the three points 0, 1, infinity a vertex lies over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexClass {
    Zero,
    One,
    Pole,
}

impl VertexClass {
    pub fn as_str(self) -> &'static str {
        match self {
            VertexClass::Zero => "zero",
            VertexClass::One => "one",
            VertexClass::Pole => "pole",
        }
    }

    /// The cyclic relabeling zero -> one -> pole -> zero, applied `k` times.
    pub fn rotate(self, k: u32) -> Self {
        (0..k % 3).fold(self, |c, _| match c {
            VertexClass::Zero => VertexClass::One,
            VertexClass::One => VertexClass::Pole,
            VertexClass::Pole => VertexClass::Zero,
        })
    }
}

/// A permutation of `0..n` stored by images.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Permutation(images))
    }

    /// Builds a permutation of `0..n` from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Option<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x >= n || touched[x] {
                    return None;
                }
                touched[x] = true;
                images[x] = cycle[(k + 1) % cycle.len()];
            }
        }
        Some(Permutation(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&i| other.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    pub fn pow(&self, k: u32) -> Permutation {
        (0..k).fold(Permutation::identity(self.len()), |acc, _| acc.then(self))
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut j = self.0[start];
            while j != start {
                seen[j] = true;
                cycle.push(j);
                j = self.0[j];
            }
            out.push(cycle);
        }
        out
    }

    /// Sorted cycle lengths, largest first.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Passport {
    pub white_cycles: Vec<usize>,
    pub black_cycles: Vec<usize>,
    pub face_cycles: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Svg,
    Json,
}

impl FromStr for ExportFormat {
    type Err = DessinError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dot" => Ok(ExportFormat::Dot),
            "svg" => Ok(ExportFormat::Svg),
            "json" => Ok(ExportFormat::Json),
            other => Err(DessinError::UnsupportedFormat(other.to_string())),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct DessinJson {
    edges: usize,
    sigma: Vec<usize>,
    tau: Vec<usize>,
}

/// A connected dessin given by its rotation permutations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dessin {
    sigma: Permutation,
    tau: Permutation,
}

impl Dessin {
    pub fn new(sigma: Permutation, tau: Permutation) -> Result<Self, DessinError> {
        if sigma.len() != tau.len() {
            return Err(DessinError::LengthMismatch { sigma: sigma.len(), tau: tau.len() });
        }
        if sigma.is_empty() {
            return Err(DessinError::Empty);
        }
        let d = Dessin { sigma, tau };
        if !d.is_transitive() {
            return Err(DessinError::NotTransitive);
        }
        Ok(d)
    }

    pub fn from_images(sigma: Vec<usize>, tau: Vec<usize>) -> Result<Self, DessinError> {
        let n = sigma.len();
        let sigma = Permutation::from_images(sigma)
            .ok_or(DessinError::NotAPermutation { name: "sigma", len: n })?;
        let m = tau.len();
        let tau = Permutation::from_images(tau)
            .ok_or(DessinError::NotAPermutation { name: "tau", len: m })?;
        Dessin::new(sigma, tau)
    }

    pub fn edge_count(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma(&self) -> &Permutation {
        &self.sigma
    }

    pub fn tau(&self) -> &Permutation {
        &self.tau
    }

    /// Face rotation: `sigma` followed by `tau`.
    pub fn faces(&self) -> Permutation {
        self.sigma.then(&self.tau)
    }

    fn is_transitive(&self) -> bool {
        let n = self.edge_count();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(e) = stack.pop() {
            for next in [self.sigma.apply(e), self.tau.apply(e)] {
                if !seen[next] {
                    seen[next] = true;
                    count += 1;
                    stack.push(next);
                }
            }
        }
        count == n
    }

    pub fn passport(&self) -> Passport {
        Passport {
            white_cycles: self.sigma.cycle_type(),
            black_cycles: self.tau.cycle_type(),
            face_cycles: self.faces().cycle_type(),
        }
    }

    /// Genus of the underlying surface from the Euler characteristic
    /// `V - E + F = c(sigma) + c(tau) - E + c(sigma tau)`.
    pub fn genus(&self) -> Result<u32, DessinError> {
        let chi = self.sigma.cycles().len() as i64 + self.tau.cycles().len() as i64
            + self.faces().cycles().len() as i64
            - self.edge_count() as i64;
        if chi % 2 != 0 || chi > 2 {
            return Err(DessinError::OddEulerCharacteristic(chi));
        }
        Ok(((2 - chi) / 2) as u32)
    }

    /// True iff the cartographic group is a quotient of the (3,3,3) triangle
    /// group, i.e. `sigma^3 = tau^3 = (sigma tau)^3 = 1`.
    pub fn verify_333_epimorphism(&self) -> bool {
        self.is_transitive()
            && self.sigma.pow(3).is_identity()
            && self.tau.pow(3).is_identity()
            && self.faces().pow(3).is_identity()
    }

    /// The same dessin on the surface with reversed orientation.
    pub fn mirror(&self) -> Dessin {
        Dessin { sigma: self.sigma.inverse(), tau: self.tau.inverse() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&DessinJson {
            edges: self.edge_count(),
            sigma: self.sigma.images().to_vec(),
            tau: self.tau.images().to_vec(),
        })
        .expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Dessin, DessinError> {
        let parsed: DessinJson =
            serde_json::from_str(s).map_err(|e| DessinError::Json(e.to_string()))?;
        if parsed.sigma.len() != parsed.edges {
            return Err(DessinError::Json(format!(
                "`edges` is {} but sigma has {} entries",
                parsed.edges,
                parsed.sigma.len()
            )));
        }
        Dessin::from_images(parsed.sigma, parsed.tau)
    }

    pub fn export_graph(&self, format: ExportFormat) -> Vec<u8> {
        match format {
            ExportFormat::Json => self.to_json().into_bytes(),
            ExportFormat::Dot => self.to_dot().into_bytes(),
            ExportFormat::Svg => self.to_svg().into_bytes(),
        }
    }

    /// Bipartite graph: (white vertex, black vertex) for each edge.
    fn incidences(&self) -> (usize, usize, Vec<(usize, usize)>) {
        let vertex_of = |p: &Permutation| {
            let mut v = vec![0; p.len()];
            let cycles = p.cycles();
            for (k, c) in cycles.iter().enumerate() {
                for &e in c {
                    v[e] = k;
                }
            }
            (cycles.len(), v)
        };
        let (whites, w) = vertex_of(&self.sigma);
        let (blacks, b) = vertex_of(&self.tau);
        let edges = (0..self.edge_count()).map(|e| (w[e], b[e])).collect();
        (whites, blacks, edges)
    }

    fn to_dot(&self) -> String {
        let (whites, blacks, edges) = self.incidences();
        let mut s = String::from("graph dessin {\n");
        for i in 0..whites {
            let _ = writeln!(s, "  w{i} [shape=circle, style=\"\", label=\"\"];");
        }
        for i in 0..blacks {
            let _ = writeln!(s, "  b{i} [shape=circle, style=filled, fillcolor=black, label=\"\"];");
        }
        for (e, (w, b)) in edges.iter().enumerate() {
            let _ = writeln!(s, "  w{w} -- b{b} [label=\"{e}\"];");
        }
        s.push_str("}\n");
        s
    }

    fn to_svg(&self) -> String {
        let (whites, blacks, edges) = self.incidences();
        let rows = whites.max(blacks).max(1);
        let height = 60 * rows + 40;
        let y = |i: usize| 50 + 60 * i;
        let mut s = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"{height}\" viewBox=\"0 0 400 {height}\">\n"
        );
        // multi-edges fan out as quadratic curves
        let mut multiplicity: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (e, &(w, b)) in edges.iter().enumerate() {
            let k = multiplicity.entry((w, b)).or_insert(0);
            let bend = (*k as i64 + 1) / 2 * if (*k).is_multiple_of(2) { 1 } else { -1 } * 40;
            *k += 1;
            let (x1, y1, x2, y2) = (100, y(w), 300, y(b));
            let cx = 200;
            let cy = (y1 + y2) as i64 / 2 + bend;
            let _ = writeln!(
                s,
                "  <path class=\"edge\" data-edge=\"{e}\" d=\"M {x1} {y1} Q {cx} {cy} {x2} {y2}\" stroke=\"black\" fill=\"none\"/>"
            );
        }
        for i in 0..whites {
            let _ = writeln!(
                s,
                "  <circle class=\"white\" cx=\"100\" cy=\"{}\" r=\"8\" fill=\"white\" stroke=\"black\"/>",
                y(i)
            );
        }
        for i in 0..blacks {
            let _ = writeln!(
                s,
                "  <circle class=\"black\" cx=\"300\" cy=\"{}\" r=\"8\" fill=\"black\" stroke=\"black\"/>",
                y(i)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sheet {
    Front,
    Back,
}

/// A vertex of the subdivided triangle `T_n`: `s` steps towards the corner
/// sent to infinity, `t` steps towards the top corner, starting at the
/// bottom corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridVertex {
    pub sheet: Sheet,
    pub s: u32,
    pub t: u32,
}

/// The sphere triangulation `S_n`: two copies of the `n`-fold subdivided
/// triangle glued along their common boundary.
#[derive(Debug, Clone)]
pub struct TriangulationGrid {
    pub n: u32,
    pub vertices: Vec<GridVertex>,
    /// Counter-clockwise vertex triples (as seen from outside the sphere).
    pub triangles: Vec<[usize; 3]>,
    pub triangle_sheet: Vec<Sheet>,
}

impl TriangulationGrid {
    pub fn new(n: u32) -> Result<Self, DessinError> {
        if n == 0 {
            return Err(DessinError::ZeroIndex);
        }
        let mut index: HashMap<GridVertex, usize> = HashMap::new();
        let mut vertices = Vec::new();
        let on_boundary = |s: u32, t: u32| s == 0 || t == 0 || s + t == n;
        let mut vertex = |sheet: Sheet, s: u32, t: u32| -> usize {
            // boundary vertices are shared by both sheets
            let sheet = if on_boundary(s, t) { Sheet::Front } else { sheet };
            let key = GridVertex { sheet, s, t };
            *index.entry(key).or_insert_with(|| {
                vertices.push(key);
                vertices.len() - 1
            })
        };
        let mut triangles = Vec::new();
        let mut triangle_sheet = Vec::new();
        for sheet in [Sheet::Front, Sheet::Back] {
            for t in 0..n {
                for s in 0..n - t {
                    let up = [vertex(sheet, s, t), vertex(sheet, s + 1, t), vertex(sheet, s, t + 1)];
                    let mut tris = vec![up];
                    if s + t + 2 <= n {
                        tris.push([
                            vertex(sheet, s + 1, t),
                            vertex(sheet, s + 1, t + 1),
                            vertex(sheet, s, t + 1),
                        ]);
                    }
                    for mut tri in tris {
                        if sheet == Sheet::Back {
                            // the back copy is seen through the sphere: reverse orientation
                            tri.swap(1, 2);
                        }
                        triangles.push(tri);
                        triangle_sheet.push(sheet);
                    }
                }
            }
        }
        Ok(TriangulationGrid { n, vertices, triangles, triangle_sheet })
    }

    /// Color of a vertex in `Z/3`; adjacent vertices always differ.
    pub fn color(&self, v: usize) -> u32 {
        let GridVertex { s, t, .. } = self.vertices[v];
        (s + 2 * t) % 3
    }

    /// Label of a vertex over {0, 1, infinity}. The corner `(n, 0)` lies
    /// over infinity and the labels follow the colors cyclically.
    pub fn vertex_class(&self, v: usize) -> VertexClass {
        let GridVertex { s, t, .. } = self.vertices[v];
        grid_class(self.n, s, t)
    }

    /// True if both endpoints lie on the same side of the big triangle.
    pub fn is_boundary_edge(&self, u: usize, v: usize) -> bool {
        let (a, b) = (self.vertices[u], self.vertices[v]);
        (a.s == 0 && b.s == 0) || (a.t == 0 && b.t == 0) || (a.s + a.t == self.n && b.s + b.t == self.n)
    }

    /// True if the triangle reads zero, one, pole counter-clockwise.
    pub fn is_positive(&self, tri: usize) -> bool {
        let classes = self.triangles[tri].map(|v| self.vertex_class(v));
        let start = classes.iter().position(|&c| c == VertexClass::Zero).expect("three colors");
        classes[(start + 1) % 3] == VertexClass::One
    }
}

/// Class of the grid vertex `(s, t)` of `T_n`.
///
/// `n * z` for the corresponding division point is congruent to the rotation
/// center with index `(s - t) mod 3`, and the base map sends the centers
/// 0, 1, 2 to zero, pole, one respectively. The labels are then rotated so
/// that the corner `(n, 0)` is a pole.
pub fn grid_class(n: u32, s: u32, t: u32) -> VertexClass {
    let center = (s + 2 * t) % 3; // == (s - t) mod 3
    base_center_class(center).rotate(rotation_for(n))
}

/// Number of cyclic steps applied to the base labeling for index `n`.
pub fn rotation_for(n: u32) -> u32 {
    (n + 2) % 3 // (n - 1) mod 3
}

pub fn base_center_class(center: u32) -> VertexClass {
    match center % 3 {
        0 => VertexClass::Zero,
        1 => VertexClass::Pole,
        _ => VertexClass::One,
    }
}

/// Builds the dessin `D_n` of the sphere triangulation `S_n`.
///
/// Edges are the positively oriented triangles (zero, one, pole read
/// counter-clockwise), ordered front sheet first, then by grid row and column.
pub fn build_family_dessin(n: u32) -> Result<Dessin, DessinError> {
    let grid = TriangulationGrid::new(n)?;
    // Interior edges of the two sheets may join the same pair of boundary
    // vertices, so edges off the boundary are keyed by sheet as well.
    let edge_key = |k: usize, u: usize, v: usize| -> (usize, usize, Sheet) {
        let sheet = if grid.is_boundary_edge(u, v) { Sheet::Front } else { grid.triangle_sheet[k] };
        (u, v, sheet)
    };
    let mut directed: HashMap<(usize, usize, Sheet), usize> = HashMap::new();
    for (k, tri) in grid.triangles.iter().enumerate() {
        for j in 0..3 {
            directed.insert(edge_key(k, tri[j], tri[(j + 1) % 3]), k);
        }
    }
    // Next triangle counter-clockwise around vertex `u` of triangle `k`.
    let next_around = |k: usize, u: usize| -> usize {
        let tri = grid.triangles[k];
        let j = tri.iter().position(|&v| v == u).expect("vertex of triangle");
        let previous = tri[(j + 2) % 3];
        directed[&edge_key(k, u, previous)]
    };
    let positive: Vec<usize> = (0..grid.triangles.len()).filter(|&k| grid.is_positive(k)).collect();
    let edge_of: HashMap<usize, usize> = positive.iter().enumerate().map(|(e, &k)| (k, e)).collect();
    let vertex_with = |k: usize, class: VertexClass| -> usize {
        *grid.triangles[k]
            .iter()
            .find(|&&v| grid.vertex_class(v) == class)
            .expect("each triangle has all classes")
    };
    let rotate = |class: VertexClass| -> Vec<usize> {
        positive
            .iter()
            .map(|&k| {
                let u = vertex_with(k, class);
                let k2 = next_around(next_around(k, u), u);
                edge_of[&k2]
            })
            .collect()
    };
    let sigma = rotate(VertexClass::Zero);
    let tau = rotate(VertexClass::One);
    Dessin::from_images(sigma, tau)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_index_zero() {
        assert_eq!(build_family_dessin(0), Err(DessinError::ZeroIndex));
    }

    #[test]
    fn first_member_is_a_single_edge() {
        let d = build_family_dessin(1).unwrap();
        assert_eq!(d.edge_count(), 1);
        assert!(d.sigma().is_identity() && d.tau().is_identity());
        let p = d.passport();
        assert_eq!((p.white_cycles, p.black_cycles, p.face_cycles), (vec![1], vec![1], vec![1]));
        assert_eq!(d.genus().unwrap(), 0);
        assert!(d.verify_333_epimorphism());
    }

    #[test]
    fn second_member_passport() {
        let d = build_family_dessin(2).unwrap();
        assert_eq!(d.edge_count(), 4);
        let p = d.passport();
        assert_eq!(p.white_cycles, vec![3, 1]);
        assert_eq!(p.black_cycles, vec![3, 1]);
        assert_eq!(p.face_cycles, vec![3, 1]);
        assert!(d.verify_333_epimorphism());
    }

    #[test]
    fn genus_two_example() {
        let c = Permutation::from_cycles(5, &[&[0, 1, 2, 3, 4]]).unwrap();
        let d = Dessin::new(c.clone(), c).unwrap();
        assert_eq!(d.genus().unwrap(), 2);
    }

    #[test]
    fn order_two_generator_is_not_333() {
        let sigma = Permutation::from_cycles(2, &[&[0, 1]]).unwrap();
        let d = Dessin::new(sigma, Permutation::identity(2)).unwrap();
        assert!(!d.verify_333_epimorphism());
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            Dessin::from_images(vec![0, 0], vec![0, 1]),
            Err(DessinError::NotAPermutation { name: "sigma", .. })
        ));
        assert!(matches!(
            Dessin::from_images(vec![0, 1], vec![0, 1]),
            Err(DessinError::NotTransitive)
        ));
        assert!(matches!(
            Dessin::from_images(vec![0], vec![0, 1]),
            Err(DessinError::LengthMismatch { .. })
        ));
        assert!(matches!("png".parse::<ExportFormat>(), Err(DessinError::UnsupportedFormat(_))));
    }

    #[test]
    fn json_export_of_first_member() {
        let d = build_family_dessin(1).unwrap();
        assert_eq!(d.to_json(), r#"{"edges":1,"sigma":[0],"tau":[0]}"#);
        assert_eq!(Dessin::from_json(&d.to_json()).unwrap(), d);
    }

    #[test]
    fn dot_export_of_second_member() {
        let dot = String::from_utf8(build_family_dessin(2).unwrap().export_graph(ExportFormat::Dot))
            .unwrap();
        assert_eq!(dot.matches("shape=circle").count(), 4);
        assert_eq!(dot.matches("style=filled").count(), 2);
        assert_eq!(dot.matches(" -- ").count(), 4);
    }

    #[test]
    fn svg_export_of_second_member() {
        let svg = String::from_utf8(build_family_dessin(2).unwrap().export_graph(ExportFormat::Svg))
            .unwrap();
        assert_eq!(svg.matches("<circle class=\"black\"").count(), 2);
        assert_eq!(svg.matches("<circle class=\"white\"").count(), 2);
        assert_eq!(svg.matches("class=\"edge\"").count(), 4);
    }

    #[test]
    fn grid_corners_follow_residue_rule() {
        for n in 1..10 {
            assert_eq!(grid_class(n, n, 0), VertexClass::Pole);
            let (top, bottom) = (grid_class(n, 0, n), grid_class(n, 0, 0));
            match n % 3 {
                0 => assert_eq!((top, bottom), (VertexClass::Pole, VertexClass::Pole)),
                1 => assert_eq!((top, bottom), (VertexClass::One, VertexClass::Zero)),
                _ => assert_eq!((top, bottom), (VertexClass::Zero, VertexClass::One)),
            }
        }
    }

    #[test]
    fn triangulation_counts() {
        for n in 1..8u32 {
            let g = TriangulationGrid::new(n).unwrap();
            assert_eq!(g.vertices.len() as u32, n * n + 2);
            assert_eq!(g.triangles.len() as u32, 2 * n * n);
            let positive = (0..g.triangles.len()).filter(|&k| g.is_positive(k)).count();
            assert_eq!(positive as u32, n * n);
        }
    }
}
