//! Convex hulls and hull membership.

use crate::error::Result;
use crate::lp;

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Monotone-chain convex hull, counter-clockwise, collinear points dropped.
/// Degenerate inputs return one point or the two extremes of a segment.
pub fn convex_hull_2d(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts: Vec<[f64; 2]> = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn dist_to_segment(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return dist(p, a);
    }
    let s = (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0);
    dist(p, [a[0] + s * dx, a[1] + s * dy])
}

/// Signed distance test against a counter-clockwise hull from
/// [`convex_hull_2d`]: true when `p` is inside or within `tol` of the boundary.
pub fn hull_contains_2d(hull: &[[f64; 2]], p: [f64; 2], tol: f64) -> bool {
    match hull.len() {
        0 => false,
        1 => dist(p, hull[0]) <= tol,
        2 => dist_to_segment(p, hull[0], hull[1]) <= tol,
        n => (0..n).all(|i| {
            let a = hull[i];
            let b = hull[(i + 1) % n];
            cross(a, b, p) / dist(a, b) >= -tol
        }),
    }
}

/// Membership of `z` in the convex hull of `points` in any dimension.
/// Planar and linear cases use the direct tests; higher dimensions solve the
/// barycentric feasibility problem.
pub fn in_convex_hull(points: &[Vec<f64>], z: &[f64], tol: f64) -> Result<bool> {
    if points.is_empty() {
        return Ok(false);
    }
    match z.len() {
        1 => {
            let lo = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
            let hi = points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
            Ok(z[0] >= lo - tol && z[0] <= hi + tol)
        }
        2 => {
            let pts: Vec<[f64; 2]> = points.iter().map(|p| [p[0], p[1]]).collect();
            Ok(hull_contains_2d(&convex_hull_2d(&pts), [z[0], z[1]], tol))
        }
        d => {
            let n = points.len();
            let mut a = vec![vec![1.0; n]];
            let mut b = vec![1.0];
            for k in 0..d {
                a.push(points.iter().map(|p| p[k]).collect());
                b.push(z[k]);
            }
            let out = lp::phase_one(&a, &b, n)?;
            Ok(out.objective <= tol)
        }
    }
}
