//! Convex hull vertices of small point clouds via Wolfe's minimum-norm-point
//! algorithm.

use nalgebra::{DMatrix, DVector};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn combine(points: &[Vec<f64>], idx: &[usize], w: &[f64]) -> Vec<f64> {
    let dim = points[idx[0]].len();
    let mut x = vec![0.0; dim];
    for (&i, &wi) in idx.iter().zip(w) {
        for (xk, pk) in x.iter_mut().zip(&points[i]) {
            *xk += wi * pk;
        }
    }
    x
}

/// Weights of the point of minimal norm on the affine hull of `points[idx]`.
fn affine_minimizer(points: &[Vec<f64>], idx: &[usize]) -> Option<Vec<f64>> {
    let k = idx.len();
    let mut m = DMatrix::zeros(k + 1, k + 1);
    for a in 0..k {
        for b in 0..k {
            m[(a, b)] = dot(&points[idx[a]], &points[idx[b]]);
        }
        m[(a, k)] = 1.0;
        m[(k, a)] = 1.0;
    }
    let mut rhs = DVector::zeros(k + 1);
    rhs[k] = 1.0;
    let sol = m.lu().solve(&rhs)?;
    let w: Vec<f64> = sol.iter().take(k).copied().collect();
    w.iter().all(|x| x.is_finite()).then_some(w)
}

/// Point of minimal Euclidean norm in the convex hull of `points`.
pub fn min_norm_point(points: &[Vec<f64>]) -> Vec<f64> {
    assert!(!points.is_empty(), "min_norm_point needs at least one point");
    let scale = points.iter().map(|p| dot(p, p)).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let eps = 1e-12 * scale;
    let start = (0..points.len())
        .min_by(|&a, &b| dot(&points[a], &points[a]).total_cmp(&dot(&points[b], &points[b])))
        .expect("nonempty");
    let mut idx = vec![start];
    let mut lam = vec![1.0];
    let mut x = points[start].clone();
    for _ in 0..100 * (points.len() + 1) {
        let j = (0..points.len())
            .min_by(|&a, &b| dot(&x, &points[a]).total_cmp(&dot(&x, &points[b])))
            .expect("nonempty");
        if dot(&x, &x) - dot(&x, &points[j]) <= eps || idx.contains(&j) {
            break;
        }
        idx.push(j);
        lam.push(0.0);
        loop {
            let Some(w) = affine_minimizer(points, &idx) else {
                // degenerate affine set: drop the newest point and stop
                idx.pop();
                lam.pop();
                return x;
            };
            if w.iter().all(|&v| v > 1e-14) {
                lam = w;
                x = combine(points, &idx, &lam);
                break;
            }
            let theta = lam
                .iter()
                .zip(&w)
                .filter(|(_, &wi)| wi <= 1e-14)
                .map(|(&l, &wi)| l / (l - wi))
                .fold(1.0, f64::min);
            for (l, wi) in lam.iter_mut().zip(&w) {
                *l = theta * wi + (1.0 - theta) * *l;
            }
            let keep: Vec<usize> = (0..idx.len()).filter(|&i| lam[i] > 1e-14).collect();
            idx = keep.iter().map(|&i| idx[i]).collect();
            lam = keep.iter().map(|&i| lam[i]).collect();
            let total: f64 = lam.iter().sum();
            lam.iter_mut().for_each(|l| *l /= total);
            x = combine(points, &idx, &lam);
        }
    }
    x
}

/// Distance from `p` to the convex hull of `others`.
pub fn distance_to_hull(p: &[f64], others: &[Vec<f64>]) -> f64 {
    if others.is_empty() {
        return f64::INFINITY;
    }
    let shifted: Vec<Vec<f64>> = others
        .iter()
        .map(|q| q.iter().zip(p).map(|(a, b)| a - b).collect())
        .collect();
    let x = min_norm_point(&shifted);
    dot(&x, &x).sqrt()
}

/// Indices of the extreme points of `points`. Among coincident points only
/// the first is kept.
pub fn hull_vertices(points: &[Vec<f64>], tol: f64) -> Vec<usize> {
    let mut distinct: Vec<usize> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let dup = distinct.iter().any(|&j| {
            points[j].iter().zip(p).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) <= tol
        });
        if !dup {
            distinct.push(i);
        }
    }
    distinct
        .iter()
        .copied()
        .filter(|&i| {
            let others: Vec<Vec<f64>> = distinct.iter().filter(|&&j| j != i).map(|&j| points[j].clone()).collect();
            distance_to_hull(&points[i], &others) > tol
        })
        .collect()
}
