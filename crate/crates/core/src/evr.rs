//! Extreme vertex representation (EVR) of unions of boxes.
//!
//! A union of boxes that agree outside a set of active dimensions is an
//! orthogonal polyhedron over those dimensions. Its extreme vertices are the
//! grid points whose neighbourhood holds an odd number of full cells; the
//! color of any cell is then the parity of the vertices below it. Converting
//! boxes to vertices and back yields a compact disjoint decomposition.

use crate::interval::{Interval, IntervalBox};

/// Largest number of grid cells a conversion may allocate.
pub const MAX_CELLS: usize = 1 << 26;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvrError {
    #[error("boxes differ outside the active dimensions")]
    InactiveMismatch,
    #[error("box has zero width in active dimension {0}")]
    DegenerateBox(usize),
    #[error("boxes do not all have dimension {0}")]
    DimensionMismatch(usize),
    #[error("grid would need more than {MAX_CELLS} cells")]
    TooLarge,
}

/// Sorted distinct coordinates per active dimension.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Grid {
    pub coords: Vec<Vec<f64>>,
}

impl Grid {
    /// Number of cells along each dimension.
    pub fn cells(&self) -> Vec<usize> {
        self.coords.iter().map(|c| c.len().saturating_sub(1)).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtremeVertexSet {
    dims: Vec<usize>,
    /// Any input box; supplies the components outside `dims`.
    template: Option<IntervalBox>,
    grid: Grid,
    /// Grid indices of the extreme vertices, lexicographically sorted.
    vertices: Vec<Vec<u32>>,
}

impl ExtremeVertexSet {
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn vertices(&self) -> &[Vec<u32>] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Vertices as coordinates over the active dimensions.
    pub fn vertex_points(&self) -> Vec<Vec<f64>> {
        self.vertices
            .iter()
            .map(|v| v.iter().enumerate().map(|(d, &i)| self.grid.coords[d][i as usize]).collect())
            .collect()
    }
}

fn strides(shape: &[usize]) -> Vec<usize> {
    let mut s = vec![1; shape.len()];
    for d in (0..shape.len().saturating_sub(1)).rev() {
        s[d] = s[d + 1] * shape[d + 1];
    }
    s
}

fn checked_product(shape: &[usize]) -> Result<usize, EvrError> {
    shape
        .iter()
        .try_fold(1usize, |acc, &n| acc.checked_mul(n))
        .filter(|&n| n <= MAX_CELLS)
        .ok_or(EvrError::TooLarge)
}

/// Calls `f` with every multi-index in `0..shape` in row-major order.
fn for_each_index(shape: &[usize], mut f: impl FnMut(&[usize])) {
    if shape.contains(&0) {
        return;
    }
    let mut idx = vec![0usize; shape.len()];
    loop {
        f(&idx);
        let mut d = shape.len();
        loop {
            if d == 0 {
                return;
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < shape[d] {
                break;
            }
            idx[d] = 0;
        }
    }
}

fn position(coords: &[f64], x: f64) -> usize {
    coords.partition_point(|&c| c < x)
}

/// Converts a union of boxes to its extreme vertex set over `dims`.
pub fn dbr_to_evr(boxes: &[IntervalBox], dims: &[usize]) -> Result<ExtremeVertexSet, EvrError> {
    let k = dims.len();
    let Some(template) = boxes.first() else {
        return Ok(ExtremeVertexSet { dims: dims.to_vec(), template: None, grid: Grid::default(), vertices: vec![] });
    };
    let n = template.dim();
    let mut active = vec![false; n];
    for &d in dims {
        active[d] = true;
    }
    let mut coords: Vec<Vec<f64>> = vec![Vec::with_capacity(2 * boxes.len()); k];
    for b in boxes {
        if b.dim() != n {
            return Err(EvrError::DimensionMismatch(n));
        }
        for i in 0..n {
            if !active[i] && b[i] != template[i] {
                return Err(EvrError::InactiveMismatch);
            }
        }
        for (j, &d) in dims.iter().enumerate() {
            if !(b[d].lo() < b[d].hi()) {
                return Err(EvrError::DegenerateBox(d));
            }
            coords[j].push(b[d].lo());
            coords[j].push(b[d].hi());
        }
    }
    for c in &mut coords {
        c.sort_by(f64::total_cmp);
        c.dedup();
    }
    let shape: Vec<usize> = coords.iter().map(|c| c.len() - 1).collect();
    let total = checked_product(&shape)?;
    let st = strides(&shape);
    let mut color = vec![false; total];
    for b in boxes {
        let ranges: Vec<(usize, usize)> =
            dims.iter().enumerate().map(|(j, &d)| (position(&coords[j], b[d].lo()), position(&coords[j], b[d].hi()))).collect();
        let span: Vec<usize> = ranges.iter().map(|(a, z)| z - a).collect();
        for_each_index(&span, |off| {
            let cell: usize = off.iter().enumerate().map(|(j, &o)| (ranges[j].0 + o) * st[j]).sum();
            color[cell] = true;
        });
    }

    let pshape: Vec<usize> = shape.iter().map(|s| s + 1).collect();
    checked_product(&pshape)?;
    let mut vertices = Vec::new();
    for_each_index(&pshape, |x| {
        let mut odd = false;
        for mask in 0..1usize << k {
            let mut cell = 0;
            let mut inside = true;
            for j in 0..k {
                let c = if mask >> j & 1 == 1 { x[j] as isize - 1 } else { x[j] as isize };
                if c < 0 || c as usize >= shape[j] {
                    inside = false;
                    break;
                }
                cell += c as usize * st[j];
            }
            if inside && color[cell] {
                odd = !odd;
            }
        }
        if odd {
            vertices.push(x.iter().map(|&i| i as u32).collect::<Vec<u32>>());
        }
    });

    // Keep only coordinates that carry a vertex; the grid is then unique to
    // the point set.
    let mut used: Vec<Vec<bool>> = coords.iter().map(|c| vec![false; c.len()]).collect();
    for v in &vertices {
        for (j, &i) in v.iter().enumerate() {
            used[j][i as usize] = true;
        }
    }
    let remap: Vec<Vec<u32>> = used
        .iter()
        .map(|u| {
            let mut next = 0u32;
            u.iter()
                .map(|&keep| {
                    let r = next;
                    next += u32::from(keep);
                    r
                })
                .collect()
        })
        .collect();
    for v in &mut vertices {
        for (j, i) in v.iter_mut().enumerate() {
            *i = remap[j][*i as usize];
        }
    }
    vertices.sort();
    let coords = coords.iter().zip(&used).map(|(c, u)| c.iter().zip(u).filter(|(_, &k)| k).map(|(&x, _)| x).collect()).collect();
    Ok(ExtremeVertexSet { dims: dims.to_vec(), template: Some(template.clone()), grid: Grid { coords }, vertices })
}

type IndexBox = Vec<(u32, u32)>;

/// Decomposition of the black cells of the sub-array at `base` over
/// dimensions `k..`.
fn decompose(color: &[bool], shape: &[usize], st: &[usize], k: usize, base: usize) -> Vec<IndexBox> {
    let n = shape[k];
    if k + 1 == shape.len() {
        let mut out = Vec::new();
        let mut s = 0;
        while s < n {
            if color[base + s * st[k]] {
                let start = s;
                while s < n && color[base + s * st[k]] {
                    s += 1;
                }
                out.push(vec![(start as u32, s as u32)]);
            } else {
                s += 1;
            }
        }
        return out;
    }
    let mut out = Vec::new();
    let mut s = 0;
    while s < n {
        let sec = decompose(color, shape, st, k + 1, base + s * st[k]);
        let start = s;
        s += 1;
        while s < n && decompose(color, shape, st, k + 1, base + s * st[k]) == sec {
            s += 1;
        }
        for b in sec {
            let mut full = Vec::with_capacity(b.len() + 1);
            full.push((start as u32, s as u32));
            full.extend(b);
            out.push(full);
        }
    }
    out
}

/// Disjoint boxes whose union is the polyhedron described by `e`.
pub fn evr_to_dbr(e: &ExtremeVertexSet) -> Vec<IntervalBox> {
    let Some(template) = &e.template else {
        return vec![];
    };
    if e.vertices.is_empty() {
        return vec![];
    }
    let k = e.dims.len();
    if k == 0 {
        return vec![template.clone()];
    }
    let shape = e.grid.cells();
    if shape.contains(&0) {
        return vec![];
    }
    let st = strides(&shape);
    let mut color = vec![false; shape.iter().product()];
    for v in &e.vertices {
        if v.iter().zip(&shape).all(|(&i, &n)| (i as usize) < n) {
            let cell: usize = v.iter().zip(&st).map(|(&i, &s)| i as usize * s).sum();
            color[cell] ^= true;
        }
    }
    // Prefix XOR along every axis turns vertex marks into cell colors.
    for d in 0..k {
        for_each_index(&shape, |x| {
            if x[d] > 0 {
                let cell: usize = x.iter().zip(&st).map(|(&i, &s)| i * s).sum();
                let prev = cell - st[d];
                color[cell] ^= color[prev];
            }
        });
    }
    decompose(&color, &shape, &st, 0, 0)
        .into_iter()
        .map(|ib| {
            let mut b = template.clone();
            for (j, &(a, z)) in ib.iter().enumerate() {
                let c = &e.grid.coords[j];
                b[e.dims[j]] = Interval::new(c[a as usize], c[z as usize]);
            }
            b
        })
        .collect()
}

/// Re-decomposes a union of boxes through its extreme vertex set.
pub fn combine(boxes: &[IntervalBox], dims: &[usize]) -> Result<Vec<IntervalBox>, EvrError> {
    Ok(evr_to_dbr(&dbr_to_evr(boxes, dims)?))
}
