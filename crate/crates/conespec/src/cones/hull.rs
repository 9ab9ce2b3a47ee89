//! Vertex/halfspace conversion for pointed solid polyhedral cones in low
//! dimension, by enumeration of (d-1)-subsets.
//!
//! Every facet normal of a pointed solid cone in R^d is orthogonal to d-1
//! independent generators, and dually every extreme ray is cut out by d-1
//! independent facets; enumerating subsets is exact and cheap for d <= 4.

use crate::error::{Error, Result};
use crate::linalg::factor::Cpqr;
use crate::linalg::types::CMatrix;

/// Largest dimension for which subset enumeration is attempted.
pub const MAX_CONVERSION_DIM: usize = 4;

fn unit(v: &[f64]) -> Option<Vec<f64>> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n == 0.0 {
        None
    } else {
        Some(v.iter().map(|x| x / n).collect())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn push_unique(out: &mut Vec<Vec<f64>>, cand: Vec<f64>) {
    let dup = out.iter().any(|h| {
        h.iter().zip(&cand).map(|(a, b)| (a - b).abs()).fold(0.0f64, f64::max) < 1e-9
    });
    if !dup {
        out.push(cand);
    }
}

fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    rec(0, m, k, &mut cur, &mut out);
    out
}

/// Directions orthogonal to each (d-1)-subset of `rows` that weakly support
/// all of `check` on the nonnegative side. This single routine serves both
/// conversion directions: facets from generators, and rays from facets.
fn supporting_directions(rows: &[Vec<f64>], check: &[Vec<f64>], d: usize) -> Result<Vec<Vec<f64>>> {
    const TOL: f64 = 1e-10;
    let mut out: Vec<Vec<f64>> = Vec::new();
    for subset in subsets(rows.len(), d.saturating_sub(1)) {
        let sub: Vec<Vec<f64>> = subset.iter().map(|&i| rows[i].clone()).collect();
        let m = CMatrix::from_real_rows(&if sub.is_empty() {
            vec![vec![0.0; d]]
        } else {
            sub
        })?;
        let ns = Cpqr::factor(&m).nullspace(1e-12 * m.norm_fro().max(1.0));
        if ns.len() != if subset.is_empty() { d } else { 1 } {
            continue; // dependent subset: not a ridge/vertex pattern
        }
        let candidates: Vec<Vec<f64>> = if subset.is_empty() {
            // d == 1: the nullspace is everything; probe the single axis
            vec![vec![1.0]]
        } else {
            vec![ns[0].real_part()]
        };
        for cand in candidates {
            let Some(h) = unit(&cand) else { continue };
            let margins: Vec<f64> = check.iter().map(|g| dot(&h, g)).collect();
            if margins.iter().all(|&v| v >= -TOL) {
                push_unique(&mut out, h);
            } else if margins.iter().all(|&v| v <= TOL) {
                push_unique(&mut out, h.iter().map(|x| -x).collect());
            }
        }
    }
    if out.is_empty() {
        return Err(Error::NumericalFailure(
            "halfspace/ray enumeration produced no supporting directions".into(),
        ));
    }
    Ok(out)
}

/// Outward facet normals of cone(generators) in R^d, d <= 4.
pub fn facets_from_generators(generators: &[Vec<f64>], d: usize) -> Result<Vec<Vec<f64>>> {
    if d > MAX_CONVERSION_DIM {
        return Err(Error::RepresentationMissing(format!(
            "facet derivation is limited to dimension {MAX_CONVERSION_DIM}, got {d}"
        )));
    }
    let normed: Vec<Vec<f64>> = generators.iter().filter_map(|g| unit(g)).collect();
    supporting_directions(&normed, &normed, d)
}

/// Extreme-ray directions of {x : h x >= 0 for all facets h} in R^d, d <= 4.
pub fn generators_from_facets(facets: &[Vec<f64>], d: usize) -> Result<Vec<Vec<f64>>> {
    if d > MAX_CONVERSION_DIM {
        return Err(Error::RepresentationMissing(format!(
            "ray derivation is limited to dimension {MAX_CONVERSION_DIM}, got {d}"
        )));
    }
    let normed: Vec<Vec<f64>> = facets.iter().filter_map(|h| unit(h)).collect();
    supporting_directions(&normed, &normed, d)
}
