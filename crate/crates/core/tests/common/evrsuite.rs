//! Checks of the extreme vertex conversion on random griddy sets.

use bcs_core::evr::{combine, dbr_to_evr, evr_to_dbr};
use bcs_core::{Interval, IntervalBox};
use rand::Rng;

use super::{in_interior, GriddySet};

fn all_dims(g: &GriddySet) -> Vec<usize> {
    (0..g.coords.len()).collect()
}

/// The parity of the vertices below each grid point equals the color of
/// the cell whose lowest corner is that point.
pub fn xor_cone(g: &GriddySet) -> Result<(), String> {
    let boxes = g.boxes();
    let e = dbr_to_evr(&boxes, &all_dims(g)).map_err(|e| e.to_string())?;
    if boxes.is_empty() {
        return if e.is_empty() { Ok(()) } else { Err("vertices for an empty set".into()) };
    }
    let coords = &e.grid().coords;
    let shape: Vec<usize> = coords.iter().map(Vec::len).collect();
    let total: usize = shape.iter().product();
    for flat in 0..total {
        let mut idx = Vec::with_capacity(shape.len());
        let mut f = flat;
        for &s in &shape {
            idx.push(f % s);
            f /= s;
        }
        let parity = e.vertices().iter().filter(|v| v.iter().zip(&idx).all(|(&a, &b)| a as usize <= b)).count() % 2 == 1;
        // Color of the cell above this point, probed off the original grid
        // lines a merged cell may contain.
        let color = if idx.iter().zip(&shape).any(|(&i, &s)| i + 1 == s) {
            false
        } else {
            let center: Vec<f64> = idx.iter().enumerate().map(|(d, &i)| coords[d][i] + 0.3719 * (coords[d][i + 1] - coords[d][i])).collect();
            in_interior(&boxes, &center)
        };
        if parity != color {
            return Err(format!("grid point {idx:?}: parity {parity}, color {color}"));
        }
    }
    Ok(())
}

/// Converting back and forth reproduces the same vertex set and grid.
pub fn canonicity(g: &GriddySet) -> Result<(), String> {
    let dims = all_dims(g);
    let e = dbr_to_evr(&g.boxes(), &dims).map_err(|e| e.to_string())?;
    let back = evr_to_dbr(&e);
    let e2 = dbr_to_evr(&back, &dims).map_err(|e| e.to_string())?;
    if e2.vertices() != e.vertices() || e2.grid() != e.grid() {
        return Err(format!("{} vertices became {}", e.vertices().len(), e2.vertices().len()));
    }
    Ok(())
}

/// `combine` keeps the volume and the point set, and its output is disjoint.
pub fn round_trip(g: &GriddySet, points: usize, rng: &mut impl Rng) -> Result<(), String> {
    let boxes = g.boxes();
    let out = combine(&boxes, &all_dims(g)).map_err(|e| e.to_string())?;
    let (v0, v1) = (g.volume(), out.iter().map(IntervalBox::volume).sum::<f64>());
    if (v0 - v1).abs() > 1e-9 * v0.max(1e-300) {
        return Err(format!("volume {v0} became {v1}"));
    }
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            if out[i].interior_overlaps(&out[j]) {
                return Err(format!("output boxes {i} and {j} overlap"));
            }
        }
    }
    let hull: IntervalBox = g.coords.iter().map(|c| Interval::new(c[0] - 1.0, c[c.len() - 1] + 1.0)).collect();
    for _ in 0..points {
        let x: Vec<f64> = hull.iter().map(|c| rng.random_range(c.lo()..c.hi())).collect();
        if in_interior(&boxes, &x) != in_interior(&out, &x) {
            return Err(format!("point {x:?} classified differently"));
        }
    }
    Ok(())
}

/// Union of intervals by sorting and sweeping; touching intervals merge.
pub fn merge_intervals(mut xs: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    xs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (a, b) in xs {
        match out.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

/// On one active dimension `combine` equals interval merging; the other
/// components are carried through unchanged.
pub fn one_dim(rng: &mut impl Rng) -> Result<(), String> {
    let n = rng.random_range(1..12);
    let fixed = Interval::new(-1.0, 2.5);
    let active = rng.random_range(0..2);
    let xs: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            let a = f64::from(rng.random_range(-20i32..20)) * 0.5;
            (a, a + f64::from(rng.random_range(1i32..8)) * 0.5)
        })
        .collect();
    let boxes: Vec<IntervalBox> = xs
        .iter()
        .map(|&(a, b)| {
            let mut v = vec![fixed; 2];
            v[active] = Interval::new(a, b);
            IntervalBox::new(v)
        })
        .collect();
    let mut got = Vec::new();
    for b in combine(&boxes, &[active]).map_err(|e| e.to_string())? {
        if b[1 - active] != fixed {
            return Err(format!("inactive component changed to {}", b[1 - active]));
        }
        got.push((b[active].lo(), b[active].hi()));
    }
    got.sort_by(|a, b| a.0.total_cmp(&b.0));
    let want = merge_intervals(xs);
    if got != want {
        return Err(format!("combine gave {got:?}, merging gave {want:?}"));
    }
    Ok(())
}
