use std::f64::consts::PI;

use super::{Method, Spectrum};
use crate::error::{Error, Result};
use crate::geometry::unit_ball_volume;

/// Cap on lattice points visited by one enumeration.
pub const MAX_LATTICE_POINTS: usize = 200_000_000;

const GUARD: f64 = 1e-9;

/// The `count` smallest values of π² Σ (m_i / L_i)², m_i ≥ 1.
pub fn box_spectrum_exact(lengths: &[f64], count: usize) -> Result<Spectrum> {
    if lengths.is_empty() {
        return Err(Error::Domain("box needs at least one side length".into()));
    }
    if lengths.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
        return Err(Error::Domain("box side lengths must be positive and finite".into()));
    }
    if count == 0 {
        return Err(Error::Domain("count must be at least 1".into()));
    }
    let n = lengths.len();
    let inv2: Vec<f64> = lengths.iter().map(|l| 1.0 / (l * l)).collect();
    let ground: f64 = inv2.iter().sum();
    let volume: f64 = lengths.iter().product();
    let bn = unit_ball_volume(n)?;
    // Weyl: N(λ) ≈ B_n V λ^{n/2} / (2π)^n, in units of s = λ/π²
    let weyl_s = |k: f64| 4.0 * (k / (bn * volume)).powf(2.0 / n as f64);
    let mut cutoff = (1.2 * weyl_s((count + 1) as f64) + 2.0 * ground).max(1.5 * ground);
    loop {
        let estimate = bn * volume * cutoff.powf(0.5 * n as f64) / 2f64.powi(n as i32);
        if estimate > 0.5 * MAX_LATTICE_POINTS as f64 {
            return Err(Error::Resource(format!(
                "box enumeration needs about {estimate:.3e} lattice points (cap {MAX_LATTICE_POINTS})"
            )));
        }
        let mut values = Vec::new();
        let mut budget = MAX_LATTICE_POINTS;
        sweep(&inv2, lengths, cutoff, 0, 0.0, &mut values, &mut budget)?;
        if values.len() > count {
            values.sort_by(f64::total_cmp);
            let next = values[count];
            if next * (1.0 + GUARD) <= cutoff {
                values.truncate(count);
                let eig: Vec<f64> = values.iter().map(|s| PI * PI * s).collect();
                let limit = (PI * PI * next).next_down();
                return Spectrum::new(eig, Method::ExactBox, None, "box", limit);
            }
        }
        cutoff *= 1.5;
    }
}

fn sweep(
    inv2: &[f64],
    lengths: &[f64],
    cutoff: f64,
    axis: usize,
    partial: f64,
    out: &mut Vec<f64>,
    budget: &mut usize,
) -> Result<()> {
    let rest: f64 = inv2[axis + 1..].iter().sum();
    let room = cutoff - partial - rest;
    if room < inv2[axis] {
        return Ok(());
    }
    let top = (lengths[axis] * room.sqrt()).floor() + 1.0;
    if top > 1e9 {
        return Err(Error::Resource(format!(
            "lattice sweep bound {top:.3e} along axis {axis} is too large"
        )));
    }
    for m in 1..=top as u64 {
        let s = partial + (m * m) as f64 * inv2[axis];
        if s + rest > cutoff {
            break;
        }
        if axis + 1 == inv2.len() {
            if *budget == 0 {
                return Err(Error::Resource(format!(
                    "lattice sweep exceeded {MAX_LATTICE_POINTS} points"
                )));
            }
            *budget -= 1;
            out.push(s);
        } else {
            sweep(inv2, lengths, cutoff, axis + 1, s, out, budget)?;
        }
    }
    Ok(())
}

/// The `count` smallest values of (16π² / (9 a²)) (m² + mn + n²), m, n ≥ 1.
pub fn equilateral_triangle_spectrum_exact(side: f64, count: usize) -> Result<Spectrum> {
    if !(side.is_finite() && side > 0.0) {
        return Err(Error::Domain("triangle side must be positive and finite".into()));
    }
    if count == 0 {
        return Err(Error::Domain("count must be at least 1".into()));
    }
    let c = 16.0 * PI * PI / (9.0 * side * side);
    // N(key ≤ K) ≈ (π / (2√3)) K for large K
    let mut cutoff = ((count + 1) as f64 * 1.2 * 2.0 * 3f64.sqrt() / PI) as u64 + 16;
    loop {
        if cutoff > (1u64 << 52) {
            return Err(Error::Resource("triangle enumeration bound overflow".into()));
        }
        let estimate = (cutoff as f64 * PI / (2.0 * 3f64.sqrt())) as usize;
        if estimate > MAX_LATTICE_POINTS {
            return Err(Error::Resource(format!(
                "triangle enumeration would exceed {MAX_LATTICE_POINTS} points"
            )));
        }
        let mut keys = Vec::new();
        let mut m = 1u64;
        while m * m + m < cutoff {
            let mut n = 1u64;
            while m * m + m * n + n * n <= cutoff {
                keys.push(m * m + m * n + n * n);
                n += 1;
            }
            m += 1;
        }
        if keys.len() > count {
            keys.sort_unstable();
            let next = keys[count];
            keys.truncate(count);
            let eig: Vec<f64> = keys.iter().map(|&k| c * k as f64).collect();
            let limit = (c * next as f64).next_down();
            return Spectrum::new(eig, Method::ExactTriangle, None, "equilateral_triangle", limit);
        }
        cutoff = cutoff * 3 / 2 + 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_first_three() {
        let s = box_spectrum_exact(&[1.0, 1.0], 3).unwrap();
        let pi2 = PI * PI;
        assert_eq!(s.eigenvalues(), &[2.0 * pi2, 5.0 * pi2, 5.0 * pi2]);
    }

    #[test]
    fn cube_and_rectangle_ground_states() {
        let pi2 = PI * PI;
        let c = box_spectrum_exact(&[1.0; 3], 1).unwrap();
        assert!((c.eigenvalues()[0] - 3.0 * pi2).abs() < 1e-12);
        let r = box_spectrum_exact(&[1.0, 2.0], 1).unwrap();
        assert!((r.eigenvalues()[0] - 1.25 * pi2).abs() < 1e-12);
    }

    #[test]
    fn triangle_ground_state_and_multiplicity() {
        let s = equilateral_triangle_spectrum_exact(1.0, 3).unwrap();
        let e = s.eigenvalues();
        assert!((e[0] - 16.0 * PI * PI / 3.0).abs() < 1e-12);
        assert_eq!(e[1], e[2]);
        assert!((e[1] - 16.0 * PI * PI / 9.0 * 7.0).abs() < 1e-12);
        let big = equilateral_triangle_spectrum_exact(2.0, 3).unwrap();
        for (a, b) in big.eigenvalues().iter().zip(e) {
            assert!((a * 4.0 - b).abs() < 1e-12 * b);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(box_spectrum_exact(&[1.0, 0.0], 1).is_err());
        assert!(box_spectrum_exact(&[1.0, 1.0], 0).is_err());
        assert!(equilateral_triangle_spectrum_exact(-1.0, 1).is_err());
    }

    #[test]
    fn exceeds_resource_cap() {
        let err = box_spectrum_exact(&[1.0, 1.0], MAX_LATTICE_POINTS + 1).unwrap_err();
        assert!(matches!(err, Error::Resource(_)));
    }
}
