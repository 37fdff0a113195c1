//! Planar convex geometry: unit-sphere grids, symmetric hulls and inscribed balls.

use crate::linalg::{vector_norm, NormKind};

/// Points closer than this (max-entry distance) are merged before hull construction.
pub const MERGE_TOL: f64 = 1e-12;
/// Relative cross-product threshold for collinearity.
pub const COLLINEAR_TOL: f64 = 1e-12;

#[inline]
fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// The vector at polar angle `theta` scaled to unit length in `kind`.
pub fn unit_direction(theta: f64, kind: NormKind) -> [f64; 2] {
    let v = [theta.cos(), theta.sin()];
    let n = vector_norm(&v, kind);
    [v[0] / n, v[1] / n]
}

/// Polar angle in `[0, 2π)`.
pub fn angle_of(x: &[f64]) -> f64 {
    let t = x[1].atan2(x[0]);
    if t < 0.0 {
        t + std::f64::consts::TAU
    } else {
        t
    }
}

/// Vertices of `conv(V ∪ −V)` in counter-clockwise order, or `None` when the hull
/// has empty interior.
pub fn symmetric_hull(points: &[[f64; 2]]) -> Option<Vec<[f64; 2]>> {
    let scale = points.iter().fold(0.0_f64, |m, p| m.max(p[0].abs()).max(p[1].abs()));
    if scale == 0.0 {
        return None;
    }
    let mut pts: Vec<[f64; 2]> = points.iter().flat_map(|p| [*p, [-p[0], -p[1]]]).collect();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut merged: Vec<[f64; 2]> = Vec::with_capacity(pts.len());
    for p in pts {
        if !merged.iter().any(|q| (q[0] - p[0]).abs() <= MERGE_TOL && (q[1] - p[1]).abs() <= MERGE_TOL) {
            merged.push(p);
        }
    }

    let far = *merged.iter().max_by(|a, b| a[0].hypot(a[1]).total_cmp(&b[0].hypot(b[1]))).expect("nonempty");
    let threshold = COLLINEAR_TOL * scale * scale;
    if merged.iter().all(|p| cross([0.0, 0.0], far, *p).abs() <= threshold) {
        return None;
    }

    // Andrew's monotone chain; collinear boundary points are dropped
    let mut hull: Vec<[f64; 2]> = Vec::with_capacity(merged.len() + 1);
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &[f64; 2]>> =
            if pass == 0 { Box::new(merged.iter()) } else { Box::new(merged.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= threshold {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.len() < 3 {
        return None;
    }
    Some(hull)
}

/// Largest `t` with `{x : ‖x‖ ≤ t} ⊆ conv(V ∪ −V)`.
///
/// For each hull edge with outward normal `u` the admissible radius is
/// `support(u) / ‖u‖_*`; the answer is the minimum over edges. Degenerate hulls give 0.
pub fn inscribed_radius_planar(points: &[[f64; 2]], kind: NormKind) -> f64 {
    let Some(hull) = symmetric_hull(points) else {
        return 0.0;
    };
    let dual = kind.dual();
    let mut best = f64::INFINITY;
    for i in 0..hull.len() {
        let p = hull[i];
        let q = hull[(i + 1) % hull.len()];
        let normal = [q[1] - p[1], p[0] - q[0]];
        let support = normal[0] * p[0] + normal[1] * p[1];
        let t = support / vector_norm(&normal, dual);
        best = best.min(t);
    }
    best.max(0.0)
}

/// Upper bound on the distance from any unit vector to the nearest of the grid
/// points `±x_j`, `x_j = unit_direction(jπ/n)`.
///
/// Along the unit circle of a planar norm, `‖y − a‖` grows monotonically as `y`
/// moves away from `a`, so in each gap `[a, b]` the worst point is where the
/// distances to `a` and `b` cross. Bisection brackets the crossing and the bound
/// takes the larger endpoint value, which keeps it one-sided.
pub fn covering_radius(n: usize, kind: NormKind) -> f64 {
    let step = std::f64::consts::PI / n as f64;
    let point = |j: usize| -> [f64; 2] {
        if j == n {
            let x0 = unit_direction(0.0, kind);
            [-x0[0], -x0[1]]
        } else {
            unit_direction(j as f64 * step, kind)
        }
    };
    let dist = |y: [f64; 2], z: [f64; 2]| vector_norm(&[y[0] - z[0], y[1] - z[1]], kind);

    let mut worst = 0.0_f64;
    for j in 0..n {
        let (a, b) = (point(j), point(j + 1));
        let (mut lo, mut hi) = (j as f64 * step, (j + 1) as f64 * step);
        // invariant: at lo, dist to a ≤ dist to b; at hi, the reverse
        for _ in 0..64 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let y = unit_direction(mid, kind);
            if dist(y, a) <= dist(y, b) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let bound = dist(unit_direction(hi, kind), a).max(dist(unit_direction(lo, kind), b));
        worst = worst.max(bound);
    }
    worst
}
