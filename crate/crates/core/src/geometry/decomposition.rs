use super::planar::{self, P2};
use super::polytope::{face_points, Polytope, Shape};
use super::space::{self, FlatPolygon, P3};
use crate::error::{Error, Result};

/// Number of bisection steps used to maximize the erosion margin.
pub const BISECTION_STEPS: usize = 64;

/// A convex (n−1)-dimensional piece lying inside one face.
#[derive(Debug, Clone, PartialEq)]
pub enum Patch {
    /// Sub-segment of a polygon edge.
    Segment([[f64; 2]; 2]),
    /// Convex planar polygon on a polyhedron face.
    Polygon(Vec<[f64; 3]>),
    /// Axis-aligned (n−1)-box on the face `x[axis] = at` of a box.
    Rect {
        axis: usize,
        at: f64,
        lower: Vec<f64>,
        upper: Vec<f64>,
    },
}

impl Patch {
    /// (n−1)-dimensional measure.
    pub fn measure(&self) -> f64 {
        match self {
            Patch::Segment([a, b]) => planar::norm(planar::sub(*b, *a)),
            Patch::Polygon(pts) => space::polygon_area(pts),
            Patch::Rect {
                axis, lower, upper, ..
            } => (0..lower.len())
                .filter(|j| j != axis)
                .map(|j| upper[j] - lower[j])
                .product(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FacePatches {
    pub face_area: f64,
    pub patches: Vec<Patch>,
    pub patch_area_total: f64,
    /// Distance from the union of patches to the rest of the boundary.
    pub distance: f64,
    pub erosion_margin: f64,
}

/// Per-face eroded patches together with their boundary distances.
#[derive(Debug, Clone)]
pub struct FaceDecomposition {
    pub fraction: f64,
    pub faces: Vec<FacePatches>,
}

impl FaceDecomposition {
    pub fn min_distance(&self) -> f64 {
        self.faces.iter().map(|f| f.distance).fold(f64::INFINITY, f64::min)
    }

    pub fn min_face_area(&self) -> f64 {
        self.faces.iter().map(|f| f.face_area).fold(f64::INFINITY, f64::min)
    }
}

/// Largest `δ ∈ [0, hi]` with `area(δ) ≥ target`, for `area` non-increasing.
fn max_margin(area: impl Fn(f64) -> f64, target: f64, hi: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, hi);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if area(mid) >= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Erodes every face inward by the largest margin keeping at least
/// `fraction` of its area, then measures the distance from the eroded
/// patches to the other faces.
pub fn face_decomposition(p: &Polytope, fraction: f64) -> Result<FaceDecomposition> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::Config(format!(
            "face decomposition fraction must lie in (0, 1), got {fraction}"
        )));
    }
    let floor = 1e-9 * p.diameter_scale();
    let faces = match &p.shape {
        Shape::AxisBox { origin, lengths } => box_faces(origin, lengths, fraction)?,
        Shape::Polygon { vertices, edges } => polygon_faces(vertices, edges, fraction)?,
        Shape::Polyhedron { vertices, faces } => polyhedron_faces(vertices, faces, fraction)?,
    };
    for (i, f) in faces.iter().enumerate() {
        if f.erosion_margin < floor {
            return Err(Error::Decomposition {
                face: i,
                reason: format!(
                    "erosion margin {:.3e} is below the floor {:.3e} at fraction {fraction}",
                    f.erosion_margin, floor
                ),
            });
        }
        if !(f.distance > floor) {
            return Err(Error::Decomposition {
                face: i,
                reason: format!(
                    "patch distance to the remaining boundary {:.3e} is not positive",
                    f.distance
                ),
            });
        }
    }
    Ok(FaceDecomposition { fraction, faces })
}

fn box_faces(origin: &[f64], lengths: &[f64], fraction: f64) -> Result<Vec<FacePatches>> {
    let n = lengths.len();
    let mut out = Vec::with_capacity(2 * n);
    for axis in 0..n {
        let others: Vec<f64> = (0..n).filter(|&j| j != axis).map(|j| lengths[j]).collect();
        let face_area: f64 = others.iter().product();
        let shortest = others.iter().copied().fold(f64::INFINITY, f64::min);
        let area = |d: f64| others.iter().map(|l| (l - 2.0 * d).max(0.0)).product::<f64>();
        let delta = max_margin(area, fraction * face_area, 0.5 * shortest);
        for side in 0..2 {
            let at = origin[axis] + side as f64 * lengths[axis];
            let mut lower = Vec::with_capacity(n);
            let mut upper = Vec::with_capacity(n);
            for j in 0..n {
                if j == axis {
                    lower.push(at);
                    upper.push(at);
                } else {
                    lower.push(origin[j] + delta);
                    upper.push(origin[j] + lengths[j] - delta);
                }
            }
            let patch = Patch::Rect {
                axis,
                at,
                lower,
                upper,
            };
            out.push(FacePatches {
                face_area,
                patch_area_total: patch.measure(),
                patches: vec![patch],
                distance: delta.min(lengths[axis]),
                erosion_margin: delta,
            });
        }
    }
    Ok(out)
}

fn polygon_faces(vertices: &[P2], edges: &[[usize; 2]], fraction: f64) -> Result<Vec<FacePatches>> {
    let mut out = Vec::with_capacity(edges.len());
    for (i, e) in edges.iter().enumerate() {
        let a = vertices[e[0]];
        let b = vertices[e[1]];
        let len = planar::norm(planar::sub(b, a));
        let delta = max_margin(|d| len - 2.0 * d, fraction * len, 0.5 * len);
        let dir = planar::scale(planar::sub(b, a), 1.0 / len);
        let pa = planar::add(a, planar::scale(dir, delta));
        let pb = planar::sub(b, planar::scale(dir, delta));
        let distance = edges
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, o)| planar::segment_segment_distance(pa, pb, vertices[o[0]], vertices[o[1]]))
            .fold(f64::INFINITY, f64::min);
        let patch = Patch::Segment([pa, pb]);
        out.push(FacePatches {
            face_area: len,
            patch_area_total: patch.measure(),
            patches: vec![patch],
            distance,
            erosion_margin: delta,
        });
    }
    Ok(out)
}

fn polyhedron_faces(vertices: &[P3], faces: &[Vec<usize>], fraction: f64) -> Result<Vec<FacePatches>> {
    let flats: Vec<FlatPolygon> = faces
        .iter()
        .map(|f| FlatPolygon::new(face_points(vertices, f)).expect("validated face"))
        .collect();
    let mut out = Vec::with_capacity(faces.len());
    for (i, face) in flats.iter().enumerate() {
        let face_area = planar::signed_area(&face.pts2);
        let pieces = planar::convex_partition(&face.pts2);
        let covered: f64 = pieces.iter().map(|c| planar::signed_area(c)).sum();
        if (covered - face_area).abs() > 1e-9 * face_area {
            return Err(Error::Decomposition {
                face: i,
                reason: "convex partition did not cover the face".into(),
            });
        }
        let area = |d: f64| {
            pieces
                .iter()
                .map(|c| {
                    let inset = planar::inset_convex(c, d);
                    if inset.len() < 3 {
                        0.0
                    } else {
                        planar::signed_area(&inset)
                    }
                })
                .sum::<f64>()
        };
        let (lo, hi) = bbox2(&face.pts2);
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]);
        let delta = max_margin(area, fraction * face_area, 0.5 * span);
        let patches: Vec<Patch> = pieces
            .iter()
            .map(|c| planar::inset_convex(c, delta))
            .filter(|c| c.len() >= 3 && planar::signed_area(c) > 0.0)
            .map(|c| Patch::Polygon(c.iter().map(|q| face.frame.lift(*q)).collect()))
            .collect();
        let mut distance = f64::INFINITY;
        for patch in &patches {
            let Patch::Polygon(pts) = patch else { unreachable!() };
            let Some(fp) = FlatPolygon::new(pts.clone()) else {
                continue;
            };
            for (j, other) in flats.iter().enumerate() {
                if j != i {
                    distance = distance.min(space::polygon_polygon_distance(&fp, other));
                }
            }
        }
        out.push(FacePatches {
            face_area,
            patch_area_total: patches.iter().map(Patch::measure).sum(),
            patches,
            distance,
            erosion_margin: delta,
        });
    }
    Ok(out)
}

fn bbox2(pts: &[P2]) -> (P2, P2) {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in pts {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    (lo, hi)
}
