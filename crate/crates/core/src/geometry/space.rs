//! Three-dimensional primitives: planar-polygon frames and exact distances.

use super::planar::{self, P2};

pub(crate) type P3 = [f64; 3];

#[inline]
pub(crate) fn sub(a: P3, b: P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub(crate) fn add(a: P3, b: P3) -> P3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub(crate) fn scale(a: P3, s: f64) -> P3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub(crate) fn dot(a: P3, b: P3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub(crate) fn cross(a: P3, b: P3) -> P3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub(crate) fn norm(a: P3) -> f64 {
    dot(a, a).sqrt()
}

/// Newell's vector: twice the vector area of a planar cycle.
pub(crate) fn newell(poly: &[P3]) -> P3 {
    let n = poly.len();
    let r = poly[0];
    let mut acc = [0.0; 3];
    for i in 1..n.saturating_sub(1) {
        acc = add(acc, cross(sub(poly[i], r), sub(poly[i + 1], r)));
    }
    acc
}

pub(crate) fn polygon_area(poly: &[P3]) -> f64 {
    0.5 * norm(newell(poly))
}

/// Orthonormal in-plane frame of a planar polygon; `normal` follows the
/// right-hand rule on the vertex order.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PlaneFrame {
    pub origin: P3,
    pub u: P3,
    pub v: P3,
    pub normal: P3,
}

impl PlaneFrame {
    pub(crate) fn of_polygon(poly: &[P3]) -> Option<Self> {
        let nv = newell(poly);
        let len = norm(nv);
        if len == 0.0 {
            return None;
        }
        let normal = scale(nv, 1.0 / len);
        let origin = poly[0];
        let mut u = [0.0; 3];
        for p in &poly[1..] {
            let d = sub(*p, origin);
            let inplane = sub(d, scale(normal, dot(d, normal)));
            if norm(inplane) > norm(u) {
                u = inplane;
            }
        }
        let ul = norm(u);
        if ul == 0.0 {
            return None;
        }
        let u = scale(u, 1.0 / ul);
        let v = cross(normal, u);
        Some(Self {
            origin,
            u,
            v,
            normal,
        })
    }

    pub(crate) fn project(&self, p: P3) -> P2 {
        let d = sub(p, self.origin);
        [dot(d, self.u), dot(d, self.v)]
    }

    pub(crate) fn lift(&self, q: P2) -> P3 {
        add(self.origin, add(scale(self.u, q[0]), scale(self.v, q[1])))
    }

    pub(crate) fn height(&self, p: P3) -> f64 {
        dot(sub(p, self.origin), self.normal)
    }
}

/// A planar polygon with its frame and 2-D image cached.
#[derive(Debug, Clone)]
pub(crate) struct FlatPolygon {
    pub frame: PlaneFrame,
    pub pts3: Vec<P3>,
    pub pts2: Vec<P2>,
}

impl FlatPolygon {
    pub(crate) fn new(pts3: Vec<P3>) -> Option<Self> {
        let frame = PlaneFrame::of_polygon(&pts3)?;
        let pts2 = pts3.iter().map(|p| frame.project(*p)).collect();
        Some(Self { frame, pts3, pts2 })
    }

    pub(crate) fn point_distance(&self, p: P3) -> f64 {
        let h = self.frame.height(p);
        let q = self.frame.project(p);
        if planar::point_in_cycle(q, &self.pts2) {
            h.abs()
        } else {
            let d = planar::distance_to_cycle(q, &self.pts2);
            d.hypot(h)
        }
    }

    /// Parameter of the first point where segment `a→b` meets the closed
    /// polygon, if any.
    pub(crate) fn segment_hit(&self, a: P3, b: P3) -> Option<f64> {
        let ha = self.frame.height(a);
        let hb = self.frame.height(b);
        if ha.abs() < 1e-14 && hb.abs() < 1e-14 {
            // segment lies in the plane
            let pa = self.frame.project(a);
            let pb = self.frame.project(b);
            if planar::point_in_cycle(pa, &self.pts2) {
                return Some(0.0);
            }
            let n = self.pts2.len();
            return (0..n)
                .filter_map(|i| {
                    planar::segment_hit_parameter(pa, pb, self.pts2[i], self.pts2[(i + 1) % n])
                })
                .reduce(f64::min);
        }
        if (ha > 0.0 && hb > 0.0) || (ha < 0.0 && hb < 0.0) {
            return None;
        }
        let t = ha / (ha - hb);
        let hit = add(a, scale(sub(b, a), t));
        let q = self.frame.project(hit);
        let scale_ref = norm(sub(b, a)).max(1e-300);
        if planar::point_in_cycle(q, &self.pts2)
            || planar::distance_to_cycle(q, &self.pts2) < 1e-12 * scale_ref.max(1.0)
        {
            Some(t)
        } else {
            None
        }
    }

    pub(crate) fn edges(&self) -> impl Iterator<Item = (P3, P3)> + '_ {
        let n = self.pts3.len();
        (0..n).map(move |i| (self.pts3[i], self.pts3[(i + 1) % n]))
    }
}

pub(crate) fn point_segment_distance(p: P3, a: P3, b: P3) -> f64 {
    let ab = sub(b, a);
    let len2 = dot(ab, ab);
    let t = if len2 > 0.0 {
        (dot(sub(p, a), ab) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    norm(sub(p, add(a, scale(ab, t))))
}

/// Closest distance between closed segments `p1q1` and `p2q2`.
pub(crate) fn segment_segment_distance(p1: P3, q1: P3, p2: P3, q2: P3) -> f64 {
    let d1 = sub(q1, p1);
    let d2 = sub(q2, p2);
    let r = sub(p1, p2);
    let a = dot(d1, d1);
    let e = dot(d2, d2);
    let f = dot(d2, r);
    let eps = 1e-300;
    let (s, t);
    if a <= eps && e <= eps {
        return norm(r);
    }
    if a <= eps {
        s = 0.0;
        t = (f / e).clamp(0.0, 1.0);
    } else {
        let c = dot(d1, r);
        if e <= eps {
            t = 0.0;
            s = (-c / a).clamp(0.0, 1.0);
        } else {
            let b = dot(d1, d2);
            let denom = a * e - b * b;
            let mut s0 = if denom > 1e-14 * a * e {
                ((b * f - c * e) / denom).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let mut t0 = (b * s0 + f) / e;
            if t0 < 0.0 {
                t0 = 0.0;
                s0 = (-c / a).clamp(0.0, 1.0);
            } else if t0 > 1.0 {
                t0 = 1.0;
                s0 = ((b - c) / a).clamp(0.0, 1.0);
            }
            s = s0;
            t = t0;
        }
    }
    let c1 = add(p1, scale(d1, s));
    let c2 = add(p2, scale(d2, t));
    let direct = norm(sub(c1, c2));
    // the parallel branch above picks one candidate; endpoint checks make the
    // result exact in that case too
    direct
        .min(point_segment_distance(p1, p2, q2))
        .min(point_segment_distance(q1, p2, q2))
        .min(point_segment_distance(p2, p1, q1))
        .min(point_segment_distance(q2, p1, q1))
}

/// Exact distance between two planar polygons in space.
pub(crate) fn polygon_polygon_distance(a: &FlatPolygon, b: &FlatPolygon) -> f64 {
    let mut best = f64::INFINITY;
    for (p, q) in a.edges() {
        if b.segment_hit(p, q).is_some() {
            return 0.0;
        }
        for (r, s) in b.edges() {
            best = best.min(segment_segment_distance(p, q, r, s));
        }
    }
    for (p, q) in b.edges() {
        if a.segment_hit(p, q).is_some() {
            return 0.0;
        }
    }
    for p in &a.pts3 {
        best = best.min(b.point_distance(*p));
    }
    for p in &b.pts3 {
        best = best.min(a.point_distance(*p));
    }
    best
}
