//! Weighted Schwartz seminorms `sup_x sup_{|γ|<=4c} (1+|x|²)^{c/2} |∂^γ f(x)|`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::testfn::{GridFunction, Point, TestFunction};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Seminorm {
    pub value: f64,
    /// Points per axis of the central-difference stencil (grid functions only).
    pub stencil_points: Option<usize>,
}

/// All multi-indices over `dim` coordinates with total order at most `max`.
pub fn multi_indices(dim: usize, max: usize) -> Vec<Vec<usize>> {
    fn rec(dim: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == dim {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(dim, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, max, &mut Vec::new(), &mut out);
    out
}

fn weight(x: &[f64], c: usize) -> f64 {
    (1.0 + x.iter().map(|v| v * v).sum::<f64>()).powf(c as f64 / 2.0)
}

pub fn schwartz_seminorm(f: &TestFunction, c: usize) -> Result<Seminorm> {
    match f {
        TestFunction::Smooth { bumps } => {
            if bumps.is_empty() {
                return Ok(Seminorm { value: 0.0, stencil_points: None });
            }
            Ok(Seminorm { value: smooth_seminorm(f, c)?, stencil_points: None })
        }
        TestFunction::Grid(g) => grid_seminorm(g, c),
    }
}

fn smooth_seminorm(f: &TestFunction, c: usize) -> Result<f64> {
    let bumps = f.bumps()?;
    // Derivatives are generated along a tree: each multi-index from its parent.
    let indices = multi_indices(4, 4 * c);
    let mut derivs: std::collections::HashMap<Vec<usize>, TestFunction> = std::collections::HashMap::new();
    derivs.insert(vec![0; 4], f.clone());
    let mut sorted = indices.clone();
    sorted.sort_by_key(|g| g.iter().sum::<usize>());
    for g in &sorted {
        if derivs.contains_key(g) {
            continue;
        }
        let k = g.iter().position(|&e| e > 0).expect("nonzero multi-index");
        let mut parent = g.clone();
        parent[k] -= 1;
        let d = derivs[&parent].derivative(k)?;
        derivs.insert(g.clone(), d);
    }

    // Candidate points: a grid around every bump plus refined maxima for
    // every weight order up to c, so the result is monotone in c.
    let mut grid_pts: Vec<Point> = vec![[0.0; 4]];
    let offsets = [-3.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0];
    for b in bumps {
        for a in offsets {
            for bb in offsets {
                for cc in offsets {
                    for d in offsets {
                        let o = [a, bb, cc, d];
                        grid_pts.push(std::array::from_fn(|k| b.center[k] + o[k] * b.width));
                    }
                }
            }
        }
    }
    let min_width = bumps.iter().map(|b| b.width).fold(f64::INFINITY, f64::min);

    let mut best = 0.0f64;
    for g in &indices {
        let d = &derivs[g];
        let abs_at = |x: &Point| d.eval(x).norm();
        let values: Vec<f64> = grid_pts.iter().map(abs_at).collect();
        let mut candidates: Vec<Point> = Vec::new();
        for cw in 0..=c {
            let (i, _) = values
                .iter()
                .enumerate()
                .map(|(i, v)| (i, v * weight(&grid_pts[i], cw)))
                .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            candidates.push(refine(|x| abs_at(x) * weight(x, cw), grid_pts[i], 0.25 * min_width));
        }
        let on_grid = values.iter().zip(&grid_pts).map(|(v, x)| v * weight(x, c)).fold(0.0, f64::max);
        let refined = candidates.iter().map(|x| abs_at(x) * weight(x, c)).fold(0.0, f64::max);
        best = best.max(on_grid).max(refined);
    }
    Ok(best)
}

/// Compass search for a local maximum.
fn refine(obj: impl Fn(&Point) -> f64, start: Point, step0: f64) -> Point {
    let mut x = start;
    let mut fx = obj(&x);
    let mut step = step0;
    while step > 1e-7 * step0.max(1e-12) {
        let mut improved = false;
        for k in 0..4 {
            for s in [-1.0, 1.0] {
                let mut y = x;
                y[k] += s * step;
                let fy = obj(&y);
                if fy > fx {
                    x = y;
                    fx = fy;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    x
}

fn grid_seminorm(g: &GridFunction, c: usize) -> Result<Seminorm> {
    let order = 4 * c;
    let dim = g.dims.len();
    let per_axis_needed = 2 * order + 1;
    if let Some(&ext) = g.dims.iter().min() {
        if order + 1 > ext {
            return Err(Error::GridTooCoarse { order, supported: ext.saturating_sub(1) });
        }
    }
    let coords_phys: Vec<Vec<f64>> = (0..g.values.len())
        .map(|i| {
            g.coords(i)
                .iter()
                .zip(&g.dims)
                .map(|(&s, &l)| {
                    let centered = if s < l / 2 { s as f64 } else { s as f64 - l as f64 };
                    centered * g.spacing
                })
                .collect()
        })
        .collect();
    let mut best = 0.0f64;
    for gamma in multi_indices(dim, order) {
        let mut vals = g.values.clone();
        for (k, &e) in gamma.iter().enumerate() {
            for _ in 0..e {
                vals = central_difference(g, &vals, k);
            }
        }
        for (v, x) in vals.iter().zip(&coords_phys) {
            best = best.max(v.norm() * weight(x, c));
        }
    }
    Ok(Seminorm { value: best, stencil_points: Some(per_axis_needed.min(*g.dims.iter().max().unwrap_or(&1))) })
}

fn central_difference(g: &GridFunction, vals: &[Complex64], k: usize) -> Vec<Complex64> {
    let mut plus = vec![0i64; g.dims.len()];
    plus[k] = 1;
    let minus: Vec<i64> = plus.iter().map(|v| -v).collect();
    let tmp = GridFunction { values: vals.to_vec(), ..g.clone() };
    // translate(a) gives f(x - a)
    let fwd = tmp.translate(&minus);
    let bwd = tmp.translate(&plus);
    fwd.values.iter().zip(&bwd.values).map(|(a, b)| (a - b) / (2.0 * g.spacing)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_gaussian_order_zero() {
        let f = TestFunction::gaussian([0.0; 4], 1.0);
        let s = schwartz_seminorm(&f, 0).unwrap();
        assert!((s.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_function() {
        let f = TestFunction::Smooth { bumps: vec![] };
        assert_eq!(schwartz_seminorm(&f, 2).unwrap().value, 0.0);
    }

    #[test]
    fn grid_too_coarse() {
        let g = GridFunction::zeros(&[4, 4], 1.0);
        assert!(matches!(schwartz_seminorm(&TestFunction::Grid(g), 1), Err(Error::GridTooCoarse { .. })));
    }

    #[test]
    fn multi_index_count() {
        // C(4c + 4, 4) for c = 1
        assert_eq!(multi_indices(4, 4).len(), 70);
    }
}
