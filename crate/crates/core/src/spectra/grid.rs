use crate::error::{Error, Result};
use crate::geometry::Polytope;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stencil {
    /// 5/7-point stencil; links leaving the domain are dropped.
    Standard,
    /// Links crossing the boundary use the fractional arm length θh.
    ShortleyWeller,
}

#[derive(Debug, Clone, Copy)]
pub struct AssemblyOptions {
    pub min_nodes: usize,
    /// Smallest fractional arm length θ admitted by the Shortley–Weller
    /// stencil.
    pub theta_min: f64,
}

impl Default for AssemblyOptions {
    fn default() -> Self {
        Self {
            min_nodes: 10,
            theta_min: 1e-3,
        }
    }
}

/// Symmetric positive-definite Dirichlet Laplacian on the interior lattice
/// nodes of a polytope, stored as full CSR.
#[derive(Debug, Clone)]
pub struct GridOperator {
    h: f64,
    dimension: usize,
    origin: Vec<f64>,
    nodes: Vec<Vec<i64>>,
    stencil: Stencil,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
    domain_id: String,
}

impl GridOperator {
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    pub fn stencil(&self) -> Stencil {
        self.stencil
    }

    pub fn domain_id(&self) -> &str {
        &self.domain_id
    }

    /// Lattice multi-index of node `i`; its position is `origin + h·index`.
    pub fn node(&self, i: usize) -> &[i64] {
        &self.nodes[i]
    }

    pub fn node_position(&self, i: usize) -> Vec<f64> {
        self.nodes[i]
            .iter()
            .zip(&self.origin)
            .map(|(j, o)| o + *j as f64 * self.h)
            .collect()
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// `(column, value)` pairs of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[r.clone()].iter().copied().zip(self.values[r].iter().copied())
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|(c, _)| *c == j).map_or(0.0, |(_, v)| v)
    }

    pub fn diagonal(&self, i: usize) -> f64 {
        self.entry(i, i)
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).map(|(j, v)| v * x[j]).sum();
        }
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size()).all(|i| self.row(i).all(|(j, v)| self.entry(j, i) == v))
    }

    /// Diagonal entry ≥ sum of off-diagonal magnitudes in every row.
    pub fn is_diagonally_dominant(&self) -> bool {
        (0..self.size()).all(|i| {
            let off: f64 = self.row(i).filter(|(j, _)| *j != i).map(|(_, v)| v.abs()).sum();
            self.diagonal(i) >= off
        })
    }

    pub(crate) fn csr(&self) -> (&[usize], &[usize], &[f64]) {
        (&self.row_ptr, &self.col_idx, &self.values)
    }
}

pub fn fd_assemble(p: &Polytope, h: f64, stencil: Stencil) -> Result<GridOperator> {
    fd_assemble_with(p, h, stencil, AssemblyOptions::default())
}

pub fn fd_assemble_with(
    p: &Polytope,
    h: f64,
    stencil: Stencil,
    opts: AssemblyOptions,
) -> Result<GridOperator> {
    let n = p.dimension();
    if !(n == 2 || n == 3) {
        return Err(Error::Domain(format!(
            "finite differences support n = 2, 3 only (got n = {n})"
        )));
    }
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::Domain(format!("grid spacing must be positive, got {h}")));
    }
    let (lo, hi) = p.bounding_box();
    let extent: Vec<usize> = lo
        .iter()
        .zip(&hi)
        .map(|(a, b)| ((b - a) / h).ceil() as usize + 1)
        .collect();
    let total: f64 = extent.iter().map(|&e| e as f64).product();
    if total > 1e9 {
        return Err(Error::Resource(format!(
            "grid with spacing {h} has {total:.3e} lattice points"
        )));
    }
    let probe = p.boundary_probe();
    let strides: Vec<usize> = (0..n)
        .map(|d| extent[d + 1..].iter().product())
        .collect();
    let mut index = vec![usize::MAX; total as usize];
    let mut nodes = Vec::new();
    let point = |idx: &[i64]| -> Vec<f64> {
        idx.iter().zip(&lo).map(|(j, o)| o + *j as f64 * h).collect()
    };
    let mut idx = vec![0i64; n];
    for flat in 0..total as usize {
        let mut r = flat;
        for d in 0..n {
            idx[d] = (r / strides[d]) as i64;
            r %= strides[d];
        }
        if probe.contains(&point(&idx)) {
            index[flat] = nodes.len();
            nodes.push(idx.clone());
        }
    }
    if nodes.len() < opts.min_nodes.max(1) {
        return Err(Error::Resolution(format!(
            "spacing {h} leaves {} interior nodes (need at least {})",
            nodes.len(),
            opts.min_nodes.max(1)
        )));
    }
    let lookup = |idx: &[i64]| -> Option<usize> {
        let mut flat = 0usize;
        for d in 0..n {
            if idx[d] < 0 || idx[d] as usize >= extent[d] {
                return None;
            }
            flat += idx[d] as usize * strides[d];
        }
        let i = index[flat];
        (i != usize::MAX).then_some(i)
    };
    let inv_h2 = 1.0 / (h * h);
    let mut row_ptr = Vec::with_capacity(nodes.len() + 1);
    let mut col_idx = Vec::with_capacity(nodes.len() * (2 * n + 1));
    let mut values = Vec::with_capacity(nodes.len() * (2 * n + 1));
    row_ptr.push(0);
    let mut row: Vec<(usize, f64)> = Vec::with_capacity(2 * n + 1);
    for (i, node) in nodes.iter().enumerate() {
        row.clear();
        let x = point(node);
        let mut diag = 0.0;
        for d in 0..n {
            for step in [-1i64, 1] {
                let mut nb = node.clone();
                nb[d] += step;
                let j = lookup(&nb);
                match stencil {
                    Stencil::Standard => {
                        diag += inv_h2;
                        if let Some(j) = j {
                            row.push((j, -inv_h2));
                        }
                    }
                    Stencil::ShortleyWeller => {
                        let y = point(&nb);
                        let hit = probe.first_hit(&x, &y);
                        match (j, hit) {
                            (Some(j), None) => {
                                diag += inv_h2;
                                row.push((j, -inv_h2));
                            }
                            (_, hit) => {
                                let theta = hit.unwrap_or(1.0).clamp(opts.theta_min, 1.0);
                                diag += inv_h2 / theta;
                            }
                        }
                    }
                }
            }
        }
        row.push((i, diag));
        row.sort_by_key(|e| e.0);
        for &(j, v) in &row {
            col_idx.push(j);
            values.push(v);
        }
        row_ptr.push(col_idx.len());
    }
    Ok(GridOperator {
        h,
        dimension: n,
        origin: lo,
        nodes,
        stencil,
        row_ptr,
        col_idx,
        values,
        domain_id: p.id().to_string(),
    })
}
