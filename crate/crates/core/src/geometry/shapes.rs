//! Stock domains.

use super::polytope::Polytope;

pub fn unit_square() -> Polytope {
    Polytope::axis_box(&[1.0, 1.0]).unwrap().with_id("unit_square")
}

pub fn unit_cube() -> Polytope {
    Polytope::axis_box(&[1.0, 1.0, 1.0]).unwrap().with_id("unit_cube")
}

pub fn axis_box(lengths: &[f64]) -> Polytope {
    Polytope::axis_box(lengths).unwrap()
}

/// Square `[0, side]²` stored as a general polygon.
pub fn square_polygon(side: f64) -> Polytope {
    Polytope::polygon(&[[0.0, 0.0], [side, 0.0], [side, side], [0.0, side]])
        .unwrap()
        .with_id("square_polygon")
        .with_tiling(true)
}

/// `[0,2]² ∖ [1,2)²`.
pub fn l_shape() -> Polytope {
    Polytope::polygon(&[
        [0.0, 0.0],
        [2.0, 0.0],
        [2.0, 1.0],
        [1.0, 1.0],
        [1.0, 2.0],
        [0.0, 2.0],
    ])
    .unwrap()
    .with_id("l_shape")
    .with_tiling(true)
}

pub fn equilateral_triangle(side: f64) -> Polytope {
    Polytope::polygon(&[[0.0, 0.0], [side, 0.0], [0.5 * side, 0.5 * 3f64.sqrt() * side]])
        .unwrap()
        .with_id("equilateral_triangle")
        .with_tiling(true)
}

/// Triangle with vertices `(0,0)`, `(leg,0)`, `(0,leg)`.
pub fn right_isosceles_triangle(leg: f64) -> Polytope {
    Polytope::polygon(&[[0.0, 0.0], [leg, 0.0], [0.0, leg]])
        .unwrap()
        .with_id("right_isosceles_triangle")
        .with_tiling(true)
}

/// Unit cube stored as a general polyhedron with outward faces.
pub fn unit_cube_polyhedron() -> Polytope {
    let v = vec![
        [0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [1.0, 1.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [1.0, 0.0, 1.0],
        [1.0, 1.0, 1.0],
        [0.0, 1.0, 1.0],
    ];
    let f = vec![
        vec![0, 3, 2, 1],
        vec![4, 5, 6, 7],
        vec![0, 1, 5, 4],
        vec![2, 3, 7, 6],
        vec![0, 4, 7, 3],
        vec![1, 2, 6, 5],
    ];
    Polytope::polyhedron(v, f)
        .unwrap()
        .with_id("unit_cube_polyhedron")
        .with_tiling(true)
}

/// L-shaped prism `([0,2]² ∖ [1,2)²) × [0,1]`, whose top and bottom faces
/// are non-convex.
pub fn l_prism() -> Polytope {
    let base = [
        [0.0, 0.0],
        [2.0, 0.0],
        [2.0, 1.0],
        [1.0, 1.0],
        [1.0, 2.0],
        [0.0, 2.0],
    ];
    let m = base.len();
    let mut v: Vec<[f64; 3]> = base.iter().map(|p| [p[0], p[1], 0.0]).collect();
    v.extend(base.iter().map(|p| [p[0], p[1], 1.0]));
    let mut f = vec![(0..m).rev().collect::<Vec<_>>(), (m..2 * m).collect()];
    for i in 0..m {
        let j = (i + 1) % m;
        f.push(vec![i, j, j + m, i + m]);
    }
    Polytope::polyhedron(v, f).unwrap().with_id("l_prism")
}

/// Regular tetrahedron-like simplex with vertices at the origin and the unit
/// axis points.
pub fn corner_simplex() -> Polytope {
    let v = vec![
        [0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
    ];
    let f = vec![vec![0, 2, 1], vec![0, 1, 3], vec![0, 3, 2], vec![1, 2, 3]];
    Polytope::polyhedron(v, f).unwrap().with_id("corner_simplex")
}
