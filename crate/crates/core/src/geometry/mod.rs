//! Polytopes and the geometric quantities entering the bounds.

mod decomposition;
mod planar;
mod polytope;
pub mod shapes;
mod space;

pub use decomposition::{face_decomposition, FaceDecomposition, FacePatches, Patch, BISECTION_STEPS};
pub use polytope::{Polytope, PolytopeKind, PolytopeSpec, COORD_TOL};

use crate::error::{Error, Result};

/// Volume B_n of the unit ball in ℝⁿ.
pub fn unit_ball_volume(n: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::Domain("unit ball volume needs n >= 1".into()));
    }
    let (mut even, mut odd) = (1.0, 2.0);
    for k in 2..=n {
        let next = 2.0 * std::f64::consts::PI / k as f64;
        if k % 2 == 0 {
            even *= next;
        } else {
            odd *= next;
        }
    }
    Ok(if n.is_multiple_of(2) { even } else { odd })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ball_volumes() {
        assert!((unit_ball_volume(1).unwrap() - 2.0).abs() < 1e-15);
        assert!((unit_ball_volume(2).unwrap() - PI).abs() < 1e-15);
        assert!((unit_ball_volume(3).unwrap() - 4.0 * PI / 3.0).abs() < 1e-15);
        assert!((unit_ball_volume(4).unwrap() - PI * PI / 2.0).abs() < 1e-15);
        assert!(unit_ball_volume(0).is_err());
    }
}
