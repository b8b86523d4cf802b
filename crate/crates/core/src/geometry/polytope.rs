use serde::{Deserialize, Serialize};

use super::planar::{self, P2};
use super::space::{self, FlatPolygon, P3};
use crate::error::{Error, Result};

/// Absolute tolerance on coordinates for geometric predicates.
pub const COORD_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolytopeKind {
    General,
    Box,
}

#[derive(Debug, Clone)]
pub(crate) enum Shape {
    AxisBox { origin: Vec<f64>, lengths: Vec<f64> },
    Polygon { vertices: Vec<P2>, edges: Vec<[usize; 2]> },
    Polyhedron { vertices: Vec<P3>, faces: Vec<Vec<usize>> },
}

/// An n-dimensional polytope: a polygon (n = 2), a polyhedron (n = 3), or an
/// axis-aligned box in any dimension.
///
/// Faces are stored with outward orientation. In 2-D a face is a directed edge
/// `[i, j]` with the interior on its left; in 3-D a face is a vertex cycle
/// that is counter-clockwise seen from outside.
#[derive(Debug, Clone)]
pub struct Polytope {
    id: String,
    tiling: bool,
    pub(crate) shape: Shape,
}

/// On-disk description of a polytope.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeSpec {
    pub dimension: usize,
    pub kind: PolytopeKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub faces: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lengths: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(default)]
    pub tiling: bool,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidGeometry(msg.into())
}

impl Polytope {
    /// Axis-aligned box `[0, L_1] × … × [0, L_n]`.
    pub fn axis_box(lengths: &[f64]) -> Result<Self> {
        Self::axis_box_at(&vec![0.0; lengths.len()], lengths)
    }

    pub fn axis_box_at(origin: &[f64], lengths: &[f64]) -> Result<Self> {
        if lengths.len() < 2 {
            return Err(invalid("a box needs dimension n >= 2"));
        }
        if origin.len() != lengths.len() {
            return Err(invalid("box origin and lengths differ in dimension"));
        }
        if lengths.iter().any(|l| !l.is_finite() || *l <= 0.0) {
            return Err(invalid("box side lengths must be positive and finite"));
        }
        Ok(Self {
            id: "box".into(),
            tiling: true,
            shape: Shape::AxisBox {
                origin: origin.to_vec(),
                lengths: lengths.to_vec(),
            },
        })
    }

    /// Simple polygon from a counter-clockwise vertex cycle.
    pub fn polygon(vertices: &[[f64; 2]]) -> Result<Self> {
        let n = vertices.len();
        let edges = (0..n).map(|i| [i, (i + 1) % n]).collect();
        Self::polygon_with_edges(vertices.to_vec(), edges)
    }

    /// Polygon given by directed boundary edges; several loops (holes) are
    /// allowed as long as every vertex has exactly one incoming and one
    /// outgoing edge.
    pub fn polygon_with_edges(vertices: Vec<[f64; 2]>, edges: Vec<[usize; 2]>) -> Result<Self> {
        let p = Self {
            id: "polygon".into(),
            tiling: false,
            shape: Shape::Polygon { vertices, edges },
        };
        p.validate_polygon()?;
        Ok(p)
    }

    pub fn polyhedron(vertices: Vec<[f64; 3]>, faces: Vec<Vec<usize>>) -> Result<Self> {
        let p = Self {
            id: "polyhedron".into(),
            tiling: false,
            shape: Shape::Polyhedron { vertices, faces },
        };
        p.validate_polyhedron()?;
        Ok(p)
    }

    pub fn from_spec(spec: &PolytopeSpec) -> Result<Self> {
        let mut poly = match spec.kind {
            PolytopeKind::Box => {
                if spec.vertices.is_some() || spec.faces.is_some() {
                    return Err(Error::Parse(
                        "kind \"box\" takes `lengths` only, not `vertices`/`faces`".into(),
                    ));
                }
                let lengths = spec
                    .lengths
                    .as_ref()
                    .ok_or_else(|| Error::Parse("kind \"box\" requires `lengths`".into()))?;
                if lengths.len() != spec.dimension {
                    return Err(Error::Parse(format!(
                        "`lengths` has {} entries but dimension is {}",
                        lengths.len(),
                        spec.dimension
                    )));
                }
                Self::axis_box(lengths)?
            }
            PolytopeKind::General => {
                if spec.lengths.is_some() {
                    return Err(Error::Parse(
                        "kind \"general\" takes `vertices` and `faces`, not `lengths`".into(),
                    ));
                }
                let (Some(vertices), Some(faces)) = (&spec.vertices, &spec.faces) else {
                    return Err(Error::Parse(
                        "kind \"general\" requires both `vertices` and `faces`".into(),
                    ));
                };
                if let Some(bad) = vertices.iter().position(|v| v.len() != spec.dimension) {
                    return Err(Error::Parse(format!(
                        "vertex {bad} does not have {} coordinates",
                        spec.dimension
                    )));
                }
                match spec.dimension {
                    2 => {
                        let verts = vertices.iter().map(|v| [v[0], v[1]]).collect();
                        let mut edges = Vec::with_capacity(faces.len());
                        for (i, f) in faces.iter().enumerate() {
                            if f.len() != 2 {
                                return Err(Error::Parse(format!(
                                    "2-D face {i} must be an edge [i, j], got {} indices",
                                    f.len()
                                )));
                            }
                            edges.push([f[0], f[1]]);
                        }
                        Self::polygon_with_edges(verts, edges)?
                    }
                    3 => {
                        let verts = vertices.iter().map(|v| [v[0], v[1], v[2]]).collect();
                        Self::polyhedron(verts, faces.clone())?
                    }
                    n => {
                        return Err(Error::Parse(format!(
                            "general polytopes are supported for n = 2, 3 only (got n = {n}); use kind \"box\""
                        )))
                    }
                }
            }
        };
        if let Some(id) = &spec.id {
            poly.id = id.clone();
        }
        poly.tiling = spec.tiling || matches!(spec.kind, PolytopeKind::Box);
        Ok(poly)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: PolytopeSpec =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_spec(&spec)
    }

    pub fn to_spec(&self) -> PolytopeSpec {
        let (kind, vertices, faces, lengths) = match &self.shape {
            Shape::AxisBox { lengths, .. } => (PolytopeKind::Box, None, None, Some(lengths.clone())),
            Shape::Polygon { vertices, edges } => (
                PolytopeKind::General,
                Some(vertices.iter().map(|v| v.to_vec()).collect()),
                Some(edges.iter().map(|e| e.to_vec()).collect()),
                None,
            ),
            Shape::Polyhedron { vertices, faces } => (
                PolytopeKind::General,
                Some(vertices.iter().map(|v| v.to_vec()).collect()),
                Some(faces.clone()),
                None,
            ),
        };
        PolytopeSpec {
            dimension: self.dimension(),
            kind,
            vertices,
            faces,
            lengths,
            id: Some(self.id.clone()),
            tiling: self.tiling,
        }
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn with_tiling(mut self, tiling: bool) -> Self {
        self.tiling = tiling;
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// Whether congruent copies of the domain tile space.
    pub fn is_tiling(&self) -> bool {
        self.tiling
    }

    pub fn dimension(&self) -> usize {
        match &self.shape {
            Shape::AxisBox { lengths, .. } => lengths.len(),
            Shape::Polygon { .. } => 2,
            Shape::Polyhedron { .. } => 3,
        }
    }

    pub fn kind(&self) -> PolytopeKind {
        match self.shape {
            Shape::AxisBox { .. } => PolytopeKind::Box,
            _ => PolytopeKind::General,
        }
    }

    /// Side lengths if the polytope is an axis-aligned box.
    pub fn box_lengths(&self) -> Option<&[f64]> {
        match &self.shape {
            Shape::AxisBox { lengths, .. } => Some(lengths),
            _ => None,
        }
    }

    /// Vertices as coordinate vectors (box corners are not materialized).
    pub fn vertices(&self) -> Vec<Vec<f64>> {
        match &self.shape {
            Shape::AxisBox { .. } => Vec::new(),
            Shape::Polygon { vertices, .. } => vertices.iter().map(|v| v.to_vec()).collect(),
            Shape::Polyhedron { vertices, .. } => vertices.iter().map(|v| v.to_vec()).collect(),
        }
    }

    pub fn face_count(&self) -> usize {
        match &self.shape {
            Shape::AxisBox { lengths, .. } => 2 * lengths.len(),
            Shape::Polygon { edges, .. } => edges.len(),
            Shape::Polyhedron { faces, .. } => faces.len(),
        }
    }

    pub fn scaled(&self, t: f64) -> Self {
        let shape = match &self.shape {
            Shape::AxisBox { origin, lengths } => Shape::AxisBox {
                origin: origin.iter().map(|x| x * t).collect(),
                lengths: lengths.iter().map(|x| x * t).collect(),
            },
            Shape::Polygon { vertices, edges } => Shape::Polygon {
                vertices: vertices.iter().map(|v| planar::scale(*v, t)).collect(),
                edges: edges.clone(),
            },
            Shape::Polyhedron { vertices, faces } => Shape::Polyhedron {
                vertices: vertices.iter().map(|v| space::scale(*v, t)).collect(),
                faces: faces.clone(),
            },
        };
        Self {
            id: self.id.clone(),
            tiling: self.tiling,
            shape,
        }
    }

    pub fn translated(&self, offset: &[f64]) -> Self {
        assert_eq!(offset.len(), self.dimension(), "offset dimension mismatch");
        let shape = match &self.shape {
            Shape::AxisBox { origin, lengths } => Shape::AxisBox {
                origin: origin.iter().zip(offset).map(|(a, b)| a + b).collect(),
                lengths: lengths.clone(),
            },
            Shape::Polygon { vertices, edges } => Shape::Polygon {
                vertices: vertices
                    .iter()
                    .map(|v| [v[0] + offset[0], v[1] + offset[1]])
                    .collect(),
                edges: edges.clone(),
            },
            Shape::Polyhedron { vertices, faces } => Shape::Polyhedron {
                vertices: vertices
                    .iter()
                    .map(|v| [v[0] + offset[0], v[1] + offset[1], v[2] + offset[2]])
                    .collect(),
                faces: faces.clone(),
            },
        };
        Self {
            id: self.id.clone(),
            tiling: self.tiling,
            shape,
        }
    }

    /// Axis-aligned bounding box `(lower, upper)`.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        match &self.shape {
            Shape::AxisBox { origin, lengths } => (
                origin.clone(),
                origin.iter().zip(lengths).map(|(o, l)| o + l).collect(),
            ),
            Shape::Polygon { vertices, .. } => bbox(vertices.iter().map(|v| v.as_slice()), 2),
            Shape::Polyhedron { vertices, .. } => bbox(vertices.iter().map(|v| v.as_slice()), 3),
        }
    }

    /// Largest bounding-box extent; the length scale of the domain.
    pub fn diameter_scale(&self) -> f64 {
        let (lo, hi) = self.bounding_box();
        lo.iter().zip(&hi).map(|(a, b)| b - a).fold(0.0, f64::max)
    }

    /// Volume V(Ω).
    pub fn volume(&self) -> f64 {
        match &self.shape {
            Shape::AxisBox { lengths, .. } => lengths.iter().product(),
            Shape::Polygon { vertices, edges } => polygon_moments(vertices, edges).0,
            Shape::Polyhedron { vertices, faces } => polyhedron_moments(vertices, faces).0,
        }
    }

    /// Boundary measure A(∂Ω).
    pub fn surface_area(&self) -> f64 {
        self.face_areas().iter().sum()
    }

    /// Per-face (n−1)-measure, in face order. A box lists the lower then the
    /// upper face for each axis in turn.
    pub fn face_areas(&self) -> Vec<f64> {
        match &self.shape {
            Shape::AxisBox { lengths, .. } => {
                let v: f64 = lengths.iter().product();
                lengths.iter().flat_map(|l| [v / l, v / l]).collect()
            }
            Shape::Polygon { vertices, edges } => edges
                .iter()
                .map(|e| planar::norm(planar::sub(vertices[e[1]], vertices[e[0]])))
                .collect(),
            Shape::Polyhedron { vertices, faces } => faces
                .iter()
                .map(|f| space::polygon_area(&face_points(vertices, f)))
                .collect(),
        }
    }

    pub fn centroid(&self) -> Vec<f64> {
        match &self.shape {
            Shape::AxisBox { origin, lengths } => {
                origin.iter().zip(lengths).map(|(o, l)| o + 0.5 * l).collect()
            }
            Shape::Polygon { vertices, edges } => {
                let (v, c, _) = polygon_moments(vertices, edges);
                let r = vertices[0];
                vec![r[0] + c[0] / v, r[1] + c[1] / v]
            }
            Shape::Polyhedron { vertices, faces } => {
                let (v, c, _) = polyhedron_moments(vertices, faces);
                let r = vertices[0];
                (0..3).map(|i| r[i] + c[i] / v).collect()
            }
        }
    }

    /// Moment of inertia I(Ω) = min_a ∫_Ω |x − a|² dx, attained at the
    /// centroid.
    pub fn moment_of_inertia(&self) -> f64 {
        match &self.shape {
            Shape::AxisBox { lengths, .. } => {
                let v: f64 = lengths.iter().product();
                v * lengths.iter().map(|l| l * l / 12.0).sum::<f64>()
            }
            Shape::Polygon { vertices, edges } => {
                let (v, c, s) = polygon_moments(vertices, edges);
                s - (c[0] * c[0] + c[1] * c[1]) / v
            }
            Shape::Polyhedron { vertices, faces } => {
                let (v, c, s) = polyhedron_moments(vertices, faces);
                s - space::dot(c, c) / v
            }
        }
    }

    /// Open-interior membership; points within [`COORD_TOL`] of the boundary
    /// are exterior.
    pub fn contains(&self, x: &[f64]) -> bool {
        assert_eq!(x.len(), self.dimension(), "point dimension mismatch");
        match &self.shape {
            Shape::AxisBox { origin, lengths } => x
                .iter()
                .zip(origin.iter().zip(lengths))
                .all(|(xi, (o, l))| xi - o > COORD_TOL && o + l - xi > COORD_TOL),
            Shape::Polygon { vertices, edges } => {
                let p = [x[0], x[1]];
                let near = edges.iter().any(|e| {
                    planar::point_segment_distance(p, vertices[e[0]], vertices[e[1]]) <= COORD_TOL
                });
                !near
                    && planar::crossing_parity(
                        p,
                        edges.iter().map(|e| (vertices[e[0]], vertices[e[1]])),
                    )
            }
            Shape::Polyhedron { vertices, faces } => {
                let flats = flat_faces(vertices, faces);
                polyhedron_contains(&flats, [x[0], x[1], x[2]])
            }
        }
    }

    /// Smallest parameter `t ∈ [0, 1]` at which the segment `a → b` meets
    /// the boundary.
    pub fn first_boundary_hit(&self, a: &[f64], b: &[f64]) -> Option<f64> {
        match &self.shape {
            Shape::AxisBox { origin, lengths } => {
                let mut best: Option<f64> = None;
                for axis in 0..lengths.len() {
                    let d = b[axis] - a[axis];
                    if d == 0.0 {
                        continue;
                    }
                    for wall in [origin[axis], origin[axis] + lengths[axis]] {
                        let t = (wall - a[axis]) / d;
                        if !(0.0..=1.0).contains(&t) {
                            continue;
                        }
                        let on_face = (0..lengths.len()).filter(|&j| j != axis).all(|j| {
                            let x = a[j] + t * (b[j] - a[j]);
                            x >= origin[j] - COORD_TOL && x <= origin[j] + lengths[j] + COORD_TOL
                        });
                        if on_face {
                            best = Some(best.map_or(t, |bt| bt.min(t)));
                        }
                    }
                }
                best
            }
            Shape::Polygon { vertices, edges } => edges
                .iter()
                .filter_map(|e| {
                    planar::segment_hit_parameter(
                        [a[0], a[1]],
                        [b[0], b[1]],
                        vertices[e[0]],
                        vertices[e[1]],
                    )
                })
                .reduce(f64::min),
            Shape::Polyhedron { vertices, faces } => flat_faces(vertices, faces)
                .iter()
                .filter_map(|f| f.segment_hit([a[0], a[1], a[2]], [b[0], b[1], b[2]]))
                .reduce(f64::min),
        }
    }

    fn validate_polygon(&self) -> Result<()> {
        let Shape::Polygon { vertices, edges } = &self.shape else {
            unreachable!()
        };
        let nv = vertices.len();
        if nv < 3 || edges.len() < 3 {
            return Err(invalid("a polygon needs at least three vertices and edges"));
        }
        if vertices.iter().flatten().any(|c| !c.is_finite()) {
            return Err(invalid("non-finite vertex coordinate"));
        }
        let mut outgoing = vec![0usize; nv];
        let mut incoming = vec![0usize; nv];
        for (i, e) in edges.iter().enumerate() {
            if e[0] >= nv || e[1] >= nv {
                return Err(invalid(format!("edge {i} references a missing vertex")));
            }
            if e[0] == e[1] {
                return Err(invalid(format!("edge {i} is a loop")));
            }
            if planar::norm(planar::sub(vertices[e[1]], vertices[e[0]])) <= COORD_TOL {
                return Err(invalid(format!("edge {i} has zero length")));
            }
            outgoing[e[0]] += 1;
            incoming[e[1]] += 1;
        }
        if let Some(v) = (0..nv).find(|&v| outgoing[v] != 1 || incoming[v] != 1) {
            return Err(invalid(format!(
                "boundary is not closed: vertex {v} has {} outgoing and {} incoming edges",
                outgoing[v], incoming[v]
            )));
        }
        for i in 0..edges.len() {
            for j in (i + 1)..edges.len() {
                let (a, b) = (edges[i], edges[j]);
                let shares = a[0] == b[0] || a[0] == b[1] || a[1] == b[0] || a[1] == b[1];
                let d = planar::segment_segment_distance(
                    vertices[a[0]],
                    vertices[a[1]],
                    vertices[b[0]],
                    vertices[b[1]],
                );
                if !shares && d <= COORD_TOL {
                    return Err(invalid(format!("edges {i} and {j} intersect")));
                }
            }
        }
        if self.volume() <= COORD_TOL {
            return Err(invalid(
                "polygon area is not positive (edges must run counter-clockwise around the interior)",
            ));
        }
        Ok(())
    }

    fn validate_polyhedron(&self) -> Result<()> {
        let Shape::Polyhedron { vertices, faces } = &self.shape else {
            unreachable!()
        };
        let nv = vertices.len();
        if nv < 4 || faces.len() < 4 {
            return Err(invalid("a polyhedron needs at least four vertices and faces"));
        }
        if vertices.iter().flatten().any(|c| !c.is_finite()) {
            return Err(invalid("non-finite vertex coordinate"));
        }
        let scale_ref = self.diameter_scale().max(1e-300);
        let mut directed = std::collections::HashMap::new();
        for (i, f) in faces.iter().enumerate() {
            if f.len() < 3 {
                return Err(invalid(format!("face {i} has fewer than three vertices")));
            }
            if f.iter().any(|&v| v >= nv) {
                return Err(invalid(format!("face {i} references a missing vertex")));
            }
            let pts = face_points(vertices, f);
            let Some(flat) = FlatPolygon::new(pts.clone()) else {
                return Err(invalid(format!("face {i} is degenerate (zero area)")));
            };
            if space::polygon_area(&pts) <= COORD_TOL * scale_ref {
                return Err(invalid(format!("face {i} is degenerate (zero area)")));
            }
            if pts
                .iter()
                .any(|p| flat.frame.height(*p).abs() > 1e-9 * scale_ref)
            {
                return Err(invalid(format!("face {i} is not planar")));
            }
            for k in 0..f.len() {
                let key = (f[k], f[(k + 1) % f.len()]);
                if key.0 == key.1 {
                    return Err(invalid(format!("face {i} repeats a vertex")));
                }
                if directed.insert(key, i).is_some() {
                    return Err(invalid(format!(
                        "directed edge {:?} appears twice (inconsistent orientation)",
                        key
                    )));
                }
            }
        }
        for &(a, b) in directed.keys() {
            if !directed.contains_key(&(b, a)) {
                return Err(invalid(format!(
                    "edge ({a}, {b}) is not shared by exactly two faces; boundary is not watertight"
                )));
            }
        }
        if self.volume() <= COORD_TOL * scale_ref.powi(3) {
            return Err(invalid(
                "polyhedron volume is not positive (faces must be oriented outward)",
            ));
        }
        Ok(())
    }

    /// Segment–boundary intersection queries with per-face data cached.
    pub(crate) fn boundary_probe(&self) -> BoundaryProbe<'_> {
        let flats = match &self.shape {
            Shape::Polyhedron { vertices, faces } => Some(flat_faces(vertices, faces)),
            _ => None,
        };
        BoundaryProbe { poly: self, flats }
    }
}

pub(crate) struct BoundaryProbe<'a> {
    poly: &'a Polytope,
    flats: Option<Vec<FlatPolygon>>,
}

impl BoundaryProbe<'_> {
    pub(crate) fn first_hit(&self, a: &[f64], b: &[f64]) -> Option<f64> {
        match &self.flats {
            Some(flats) => flats
                .iter()
                .filter_map(|f| f.segment_hit([a[0], a[1], a[2]], [b[0], b[1], b[2]]))
                .reduce(f64::min),
            None => self.poly.first_boundary_hit(a, b),
        }
    }

    pub(crate) fn contains(&self, x: &[f64]) -> bool {
        match &self.flats {
            Some(flats) => polyhedron_contains(flats, [x[0], x[1], x[2]]),
            None => self.poly.contains(x),
        }
    }
}

fn bbox<'a>(pts: impl Iterator<Item = &'a [f64]>, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut lo = vec![f64::INFINITY; n];
    let mut hi = vec![f64::NEG_INFINITY; n];
    for p in pts {
        for i in 0..n {
            lo[i] = lo[i].min(p[i]);
            hi[i] = hi[i].max(p[i]);
        }
    }
    (lo, hi)
}

pub(crate) fn face_points(vertices: &[P3], face: &[usize]) -> Vec<P3> {
    face.iter().map(|&i| vertices[i]).collect()
}

fn flat_faces(vertices: &[P3], faces: &[Vec<usize>]) -> Vec<FlatPolygon> {
    faces
        .iter()
        .map(|f| FlatPolygon::new(face_points(vertices, f)).expect("validated face"))
        .collect()
}

/// `(area, first moment, trace of second moment)` relative to vertex 0, via
/// signed triangles over the directed edges.
fn polygon_moments(vertices: &[P2], edges: &[[usize; 2]]) -> (f64, P2, f64) {
    let r = vertices[0];
    let mut area = 0.0;
    let mut first = [0.0; 2];
    let mut second = 0.0;
    for e in edges {
        let a = planar::sub(vertices[e[0]], r);
        let b = planar::sub(vertices[e[1]], r);
        let t = 0.5 * planar::cross(a, b);
        area += t;
        first[0] += t * (a[0] + b[0]) / 3.0;
        first[1] += t * (a[1] + b[1]) / 3.0;
        let s = planar::add(a, b);
        second += t / 12.0 * (planar::dot(a, a) + planar::dot(b, b) + planar::dot(s, s));
    }
    (area, first, second)
}

/// Same as [`polygon_moments`] for tetrahedra fanned from vertex 0.
fn polyhedron_moments(vertices: &[P3], faces: &[Vec<usize>]) -> (f64, P3, f64) {
    let r = vertices[0];
    let mut vol = 0.0;
    let mut first = [0.0; 3];
    let mut second = 0.0;
    for f in faces {
        let a = space::sub(vertices[f[0]], r);
        for k in 1..f.len() - 1 {
            let b = space::sub(vertices[f[k]], r);
            let c = space::sub(vertices[f[k + 1]], r);
            let t = space::dot(a, space::cross(b, c)) / 6.0;
            vol += t;
            let s = space::add(space::add(a, b), c);
            for i in 0..3 {
                first[i] += t * s[i] / 4.0;
            }
            second += t / 20.0
                * (space::dot(a, a) + space::dot(b, b) + space::dot(c, c) + space::dot(s, s));
        }
    }
    (vol, first, second)
}

fn polyhedron_contains(faces: &[FlatPolygon], p: P3) -> bool {
    if faces.iter().any(|f| f.point_distance(p) <= COORD_TOL) {
        return false;
    }
    const DIRS: [P3; 5] = [
        [0.573_016_4, 0.311_938_7, 0.757_793_1],
        [-0.428_11, 0.819_13, 0.381_77],
        [0.912_34, -0.177_21, 0.369_54],
        [0.101_97, -0.612_48, -0.783_87],
        [-0.664_33, -0.523_31, 0.533_71],
    ];
    'dir: for d in DIRS {
        let mut inside = false;
        for f in faces {
            let denom = space::dot(f.frame.normal, d);
            if denom.abs() < 1e-9 {
                continue;
            }
            let t = -f.frame.height(p) / denom;
            if t <= 0.0 {
                continue;
            }
            let hit = space::add(p, space::scale(d, t));
            let q = f.frame.project(hit);
            if planar::distance_to_cycle(q, &f.pts2) < 1e-9 {
                continue 'dir;
            }
            if planar::point_in_cycle(q, &f.pts2) {
                inside = !inside;
            }
        }
        return inside;
    }
    false
}
