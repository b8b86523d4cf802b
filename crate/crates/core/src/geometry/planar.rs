//! Planar primitives shared by polygons, polyhedron faces and the grid
//! boundary search.

pub(crate) type P2 = [f64; 2];

#[inline]
pub(crate) fn sub(a: P2, b: P2) -> P2 {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub(crate) fn add(a: P2, b: P2) -> P2 {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
pub(crate) fn scale(a: P2, s: f64) -> P2 {
    [a[0] * s, a[1] * s]
}

#[inline]
pub(crate) fn dot(a: P2, b: P2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub(crate) fn cross(a: P2, b: P2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
pub(crate) fn norm(a: P2) -> f64 {
    a[0].hypot(a[1])
}

/// Shoelace signed area; positive for counter-clockwise cycles.
pub(crate) fn signed_area(poly: &[P2]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let r = poly[0];
    let mut acc = 0.0;
    for i in 1..n - 1 {
        acc += cross(sub(poly[i], r), sub(poly[i + 1], r));
    }
    0.5 * acc
}

pub(crate) fn point_segment_distance(p: P2, a: P2, b: P2) -> f64 {
    let ab = sub(b, a);
    let ap = sub(p, a);
    let len2 = dot(ab, ab);
    let t = if len2 > 0.0 {
        (dot(ap, ab) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    norm(sub(ap, scale(ab, t)))
}

fn orient(a: P2, b: P2, c: P2) -> f64 {
    cross(sub(b, a), sub(c, a))
}

fn on_segment(a: P2, b: P2, p: P2) -> bool {
    p[0] >= a[0].min(b[0])
        && p[0] <= a[0].max(b[0])
        && p[1] >= a[1].min(b[1])
        && p[1] <= a[1].max(b[1])
}

/// Closed-segment intersection test (touching counts).
pub(crate) fn segments_intersect(a: P2, b: P2, c: P2, d: P2) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

/// Exact Euclidean distance between closed segments `ab` and `cd`.
pub(crate) fn segment_segment_distance(a: P2, b: P2, c: P2, d: P2) -> f64 {
    if segments_intersect(a, b, c, d) {
        return 0.0;
    }
    point_segment_distance(a, c, d)
        .min(point_segment_distance(b, c, d))
        .min(point_segment_distance(c, a, b))
        .min(point_segment_distance(d, a, b))
}

/// Parameter `t ∈ [0, 1]` at which segment `p + t(q - p)` meets segment `ab`,
/// taking the smallest such `t` when they overlap.
pub(crate) fn segment_hit_parameter(p: P2, q: P2, a: P2, b: P2) -> Option<f64> {
    let r = sub(q, p);
    let s = sub(b, a);
    let denom = cross(r, s);
    let ap = sub(a, p);
    if denom.abs() < 1e-300 {
        // parallel; collinear overlap reduces to endpoint hits
        if cross(ap, r).abs() > 1e-14 * norm(r).max(1.0) * norm(ap).max(1.0) {
            return None;
        }
        let rr = dot(r, r);
        if rr == 0.0 {
            return None;
        }
        let t0 = dot(ap, r) / rr;
        let t1 = dot(sub(b, p), r) / rr;
        let (lo, hi) = if t0 < t1 { (t0, t1) } else { (t1, t0) };
        if hi < 0.0 || lo > 1.0 {
            return None;
        }
        return Some(lo.max(0.0));
    }
    let t = cross(ap, s) / denom;
    let u = cross(ap, r) / denom;
    const EPS: f64 = 1e-12;
    if (-EPS..=1.0 + EPS).contains(&t) && (-EPS..=1.0 + EPS).contains(&u) {
        Some(t.clamp(0.0, 1.0))
    } else {
        None
    }
}

/// Even-odd crossing parity of the horizontal ray from `p` towards `+x`.
pub(crate) fn crossing_parity<'a>(p: P2, edges: impl Iterator<Item = (P2, P2)> + 'a) -> bool {
    let mut inside = false;
    for (a, b) in edges {
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if x > p[0] {
                inside = !inside;
            }
        }
    }
    inside
}

/// Even-odd point-in-polygon for a single closed cycle.
pub(crate) fn point_in_cycle(p: P2, poly: &[P2]) -> bool {
    let n = poly.len();
    crossing_parity(p, (0..n).map(|i| (poly[i], poly[(i + 1) % n])))
}

pub(crate) fn distance_to_cycle(p: P2, poly: &[P2]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| point_segment_distance(p, poly[i], poly[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min)
}

pub(crate) fn is_convex(poly: &[P2]) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    let scale_ref = poly
        .iter()
        .map(|p| norm(sub(*p, poly[0])))
        .fold(0.0, f64::max)
        .max(1e-300);
    let tol = 1e-12 * scale_ref * scale_ref;
    (0..n).all(|i| orient(poly[i], poly[(i + 1) % n], poly[(i + 2) % n]) >= -tol)
}

/// Keeps the part of a convex polygon where `dot(normal, x) >= offset`.
pub(crate) fn clip_halfplane(poly: &[P2], normal: P2, offset: f64) -> Vec<P2> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let cur = poly[i];
        let nxt = poly[(i + 1) % n];
        let dc = dot(normal, cur) - offset;
        let dn = dot(normal, nxt) - offset;
        if dc >= 0.0 {
            out.push(cur);
        }
        if (dc >= 0.0) != (dn >= 0.0) {
            let t = dc / (dc - dn);
            out.push(add(cur, scale(sub(nxt, cur), t)));
        }
    }
    out
}

/// Uniform inward offset of a counter-clockwise convex polygon.
pub(crate) fn inset_convex(poly: &[P2], delta: f64) -> Vec<P2> {
    let n = poly.len();
    let mut out = poly.to_vec();
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let e = sub(b, a);
        let len = norm(e);
        if len == 0.0 {
            continue;
        }
        let inward = [-e[1] / len, e[0] / len];
        out = clip_halfplane(&out, inward, dot(inward, a) + delta);
        if out.len() < 3 {
            return Vec::new();
        }
    }
    out
}

fn point_in_triangle(p: P2, a: P2, b: P2, c: P2) -> bool {
    orient(a, b, p) >= 0.0 && orient(b, c, p) >= 0.0 && orient(c, a, p) >= 0.0
}

/// Ear-clipping triangulation of a simple counter-clockwise polygon.
pub(crate) fn triangulate(poly: &[P2]) -> Vec<[usize; 3]> {
    let mut idx: Vec<usize> = (0..poly.len()).collect();
    let mut tris = Vec::with_capacity(poly.len().saturating_sub(2));
    let mut guard = 0;
    while idx.len() > 3 && guard < 10 * poly.len() * poly.len() {
        guard += 1;
        let m = idx.len();
        let mut clipped = false;
        for i in 0..m {
            let (ia, ib, ic) = (idx[(i + m - 1) % m], idx[i], idx[(i + 1) % m]);
            let (a, b, c) = (poly[ia], poly[ib], poly[ic]);
            if orient(a, b, c) <= 0.0 {
                continue;
            }
            let blocked = idx
                .iter()
                .filter(|&&j| j != ia && j != ib && j != ic)
                .any(|&j| point_in_triangle(poly[j], a, b, c));
            if !blocked {
                tris.push([ia, ib, ic]);
                idx.remove(i);
                clipped = true;
                break;
            }
        }
        if !clipped {
            break;
        }
    }
    if idx.len() == 3 {
        tris.push([idx[0], idx[1], idx[2]]);
    }
    tris
}

/// Hertel–Mehlhorn convex partition: triangulate, then greedily drop
/// diagonals whose removal keeps both sides convex.
pub(crate) fn convex_partition(poly: &[P2]) -> Vec<Vec<P2>> {
    if is_convex(poly) {
        return vec![poly.to_vec()];
    }
    let mut pieces: Vec<Option<Vec<usize>>> = triangulate(poly)
        .into_iter()
        .map(|t| Some(t.to_vec()))
        .collect();
    loop {
        let mut merged_any = false;
        'outer: for a in 0..pieces.len() {
            for b in (a + 1)..pieces.len() {
                let (Some(pa), Some(pb)) = (&pieces[a], &pieces[b]) else {
                    continue;
                };
                if let Some(m) = merge_along_shared_edge(pa, pb) {
                    let pts: Vec<P2> = m.iter().map(|&i| poly[i]).collect();
                    if is_convex(&pts) {
                        pieces[a] = Some(m);
                        pieces[b] = None;
                        merged_any = true;
                        break 'outer;
                    }
                }
            }
        }
        if !merged_any {
            break;
        }
    }
    pieces
        .into_iter()
        .flatten()
        .map(|c| c.iter().map(|&i| poly[i]).collect())
        .collect()
}

fn merge_along_shared_edge(a: &[usize], b: &[usize]) -> Option<Vec<usize>> {
    let na = a.len();
    let nb = b.len();
    for i in 0..na {
        let (u, v) = (a[i], a[(i + 1) % na]);
        for j in 0..nb {
            if b[j] == v && b[(j + 1) % nb] == u {
                // walk a from v around to u, then b from u (exclusive) to v (exclusive)
                let mut out = Vec::with_capacity(na + nb - 2);
                for k in 0..na {
                    out.push(a[(i + 1 + k) % na]);
                }
                for k in 2..nb {
                    out.push(b[(j + k) % nb]);
                }
                return Some(out);
            }
        }
    }
    None
}
