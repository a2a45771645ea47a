//! Convex hulls in the plane and in space.

use crate::error::{Error, Result};
use crate::linalg::{centroid, cross3, dot, sub};

/// Andrew's monotone chain. Returns the hull in counter-clockwise order
/// without collinear points.
pub fn hull_2d(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut pts: Vec<[f64; 2]> = points.iter().map(|p| [p[0], p[1]]).collect();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts.into_iter().map(|p| p.to_vec()).collect();
    }
    let scale = pts
        .iter()
        .flat_map(|p| p.iter())
        .fold(0.0f64, |m, x| m.max(x.abs()))
        .max(1e-300);
    // relative collinearity threshold
    let eps = 1e-14 * scale * scale;
    let turn = |o: &[f64; 2], a: &[f64; 2], b: &[f64; 2]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut lower: Vec<[f64; 2]> = Vec::with_capacity(pts.len());
    for p in &pts {
        while lower.len() >= 2 && turn(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= eps {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::with_capacity(pts.len());
    for p in pts.iter().rev() {
        while upper.len() >= 2 && turn(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= eps {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower.into_iter().map(|p| p.to_vec()).collect()
}

/// Triangulated convex hull of a point cloud in R³.
#[derive(Debug, Clone)]
pub struct Hull3 {
    pub vertices: Vec<Vec<f64>>,
    /// Counter-clockwise (outward) oriented triangles.
    pub triangles: Vec<[usize; 3]>,
}

pub fn hull_3d(points: &[Vec<f64>]) -> Result<Hull3> {
    let hull = chull::ConvexHullWrapper::try_new(points, None)
        .map_err(|e| Error::Hull(e.to_string()))?;
    let (vertices, indices) = hull.vertices_indices();
    let inner = centroid(&vertices);
    let triangles = indices
        .chunks_exact(3)
        .map(|t| {
            let (a, b, c) = (&vertices[t[0]], &vertices[t[1]], &vertices[t[2]]);
            let n = cross3(&sub(b, a), &sub(c, a));
            if dot(&n, &sub(a, &inner)) >= 0.0 {
                [t[0], t[1], t[2]]
            } else {
                [t[0], t[2], t[1]]
            }
        })
        .collect();
    Ok(Hull3 { vertices, triangles })
}

/// Signed area of a closed polygon (positive when counter-clockwise).
pub fn polygon_area(ring: &[Vec<f64>]) -> f64 {
    let n = ring.len();
    let mut s = 0.0;
    for i in 0..n {
        let a = &ring[i];
        let b = &ring[(i + 1) % n];
        s += a[0] * b[1] - a[1] * b[0];
    }
    0.5 * s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_with_interior_and_collinear_points() {
        let pts = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.5, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
            vec![0.5, 0.5],
        ];
        let h = hull_2d(&pts);
        assert_eq!(h.len(), 4);
        assert!((polygon_area(&h) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cube_hull_volume() {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push(vec![(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64]);
        }
        pts.push(vec![0.5, 0.5, 0.5]);
        let h = hull_3d(&pts).unwrap();
        assert_eq!(h.vertices.len(), 8);
        // divergence theorem: V = (1/3) Σ ⟨x, n⟩ A, with n·A = cross/2
        let vol: f64 = h
            .triangles
            .iter()
            .map(|t| {
                let (a, b, c) = (&h.vertices[t[0]], &h.vertices[t[1]], &h.vertices[t[2]]);
                dot(a, &cross3(&sub(b, a), &sub(c, a))) / 6.0
            })
            .sum();
        assert!((vol - 1.0).abs() < 1e-12, "{vol}");
    }
}
