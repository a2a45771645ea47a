//! Shape constructors and convex-geometry helpers for polygons.

use rand::Rng;

use crate::error::Result;
use crate::gauge::{directions, sphere_triangulation, Gauge};
use crate::hull::{hull_2d, hull_3d};
use crate::linalg::{dot, norm, sub};
use crate::mesh::Mesh;
use crate::numerics::nelder_mead;

/// Polygon (n = 2) or triangulated surface (n = 3) of the axis-aligned
/// ellipse/ellipsoid with the given semi-axes, centered at the origin.
pub fn ellipse(semi_axes: &[f64], resolution: usize) -> Mesh {
    match semi_axes.len() {
        2 => {
            let ring: Vec<Vec<f64>> = directions(2, resolution)
                .into_iter()
                .map(|u| vec![semi_axes[0] * u[0], semi_axes[1] * u[1]])
                .collect();
            Mesh::from_polygon(&ring)
        }
        _ => {
            let s = sphere_triangulation(resolution).expect("sphere triangulation");
            let verts: Vec<Vec<f64>> = s
                .vertices
                .iter()
                .map(|u| u.iter().zip(semi_axes).map(|(x, a)| x * a).collect())
                .collect();
            Mesh::from_triangles(&verts, &s.triangles)
        }
    }
}

/// Closed convex polygon or polytope spanned by `points`.
pub fn convex_hull_mesh(points: &[Vec<f64>]) -> Result<Mesh> {
    if points[0].len() == 2 {
        Ok(Mesh::from_polygon(&hull_2d(points)))
    } else {
        let h = hull_3d(points)?;
        Ok(Mesh::from_triangles(&h.vertices, &h.triangles))
    }
}

/// Hull of `count` uniform points in the box `center + [−half, half]^n`,
/// resampled until it has positive area.
pub fn random_convex_points<R: Rng>(dim: usize, center: &[f64], half: &[f64], count: usize, rng: &mut R) -> Vec<Vec<f64>> {
    loop {
        let pts: Vec<Vec<f64>> = (0..count.max(dim + 1))
            .map(|_| (0..dim).map(|k| center[k] + rng.gen_range(-half[k]..half[k])).collect())
            .collect();
        if dim == 2 {
            let h = hull_2d(&pts);
            if h.len() >= 3 && crate::hull::polygon_area(&h) > 1e-3 * half[0] * half[1] {
                return h;
            }
        } else if let Ok(h) = hull_3d(&pts) {
            if h.vertices.len() >= 4 {
                return h.vertices;
            }
        }
    }
}

/// Counter-clockwise vertex ring of a closed polygonal mesh.
pub fn ring_of(mesh: &Mesh) -> Vec<Vec<f64>> {
    hull_2d(&mesh.vertices().cloned().collect::<Vec<_>>())
}

/// Radius of the largest disk inside a convex counter-clockwise polygon,
/// by enumerating triples of active edge constraints.
pub fn inradius(ring: &[Vec<f64>]) -> f64 {
    let m = ring.len();
    // ⟨ν_i, x⟩ + r ≤ c_i for outward unit normals
    let rows: Vec<([f64; 2], f64)> = (0..m)
        .map(|i| {
            let (a, b) = (&ring[i], &ring[(i + 1) % m]);
            let d = sub(b, a);
            let len = norm(&d);
            let nu = [d[1] / len, -d[0] / len];
            (nu, nu[0] * a[0] + nu[1] * a[1])
        })
        .collect();
    let feasible_r = |x: [f64; 2]| rows.iter().map(|(nu, c)| c - nu[0] * x[0] - nu[1] * x[1]).fold(f64::INFINITY, f64::min);
    let mut best = 0.0f64;
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                // solve [ν_p 1] (x, r) = c_p for p ∈ {i, j, k}
                let a = [
                    [rows[i].0[0], rows[i].0[1], 1.0, rows[i].1],
                    [rows[j].0[0], rows[j].0[1], 1.0, rows[j].1],
                    [rows[k].0[0], rows[k].0[1], 1.0, rows[k].1],
                ];
                if let Some(s) = solve3(a) {
                    let r = feasible_r([s[0], s[1]]);
                    if (r - s[2]).abs() <= 1e-9 * s[2].abs().max(1.0) {
                        best = best.max(r);
                    }
                }
            }
        }
    }
    best
}

fn solve3(mut a: [[f64; 4]; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        for r in 0..3 {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..4 {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    Some([a[0][3] / a[0][0], a[1][3] / a[1][1], a[2][3] / a[2][2]])
}

/// Distance from `p` to a convex counter-clockwise polygon (0 inside).
pub fn distance_to_polygon(p: &[f64], ring: &[Vec<f64>]) -> f64 {
    let m = ring.len();
    let (px, py) = (p[0], p[1]);
    let mut inside = true;
    let mut best = f64::INFINITY;
    for i in 0..m {
        let (a, b) = (&ring[i], &ring[(i + 1) % m]);
        let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
        let (ex, ey) = (px - a[0], py - a[1]);
        if dx * ey - dy * ex < 0.0 {
            inside = false;
        }
        let t = ((ex * dx + ey * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
        let (qx, qy) = (ex - t * dx, ey - t * dy);
        best = best.min(qx * qx + qy * qy);
    }
    if inside {
        0.0
    } else {
        best.sqrt()
    }
}

/// Hausdorff distance between convex polygons; the farthest points sit at vertices.
pub fn hausdorff_convex(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let one = |x: &[Vec<f64>], y: &[Vec<f64>]| x.iter().map(|p| distance_to_polygon(p, y)).fold(0.0, f64::max);
    one(a, b).max(one(b, a))
}

/// Part of a convex counter-clockwise polygon with `⟨n, x⟩ ≥ 0`.
pub fn clip_ring(ring: &[Vec<f64>], n: &[f64]) -> Vec<Vec<f64>> {
    let k = ring.len();
    let mut out = Vec::with_capacity(k + 1);
    for i in 0..k {
        let (a, b) = (&ring[i], &ring[(i + 1) % k]);
        let (sa, sb) = (dot(n, a), dot(n, b));
        if sa >= 0.0 {
            out.push(a.clone());
        }
        if (sa >= 0.0) != (sb >= 0.0) {
            let t = sa / (sa - sb);
            out.push(vec![a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
    }
    out
}

/// Smallest Hausdorff distance from the convex polygon `ring` to a set
/// `(c + sW) ∩ Σ`, where `W` is the Wulff shape of `h` and `Σ` is cut out by
/// `cone_normals`. Center and scale are free.
pub fn best_fit_wulff_distance(ring: &[Vec<f64>], h: &Gauge, cone_normals: &[Vec<f64>], resolution: usize) -> Result<f64> {
    let wulff = ring_of(&h.wulff(resolution)?);
    let area = crate::hull::polygon_area(ring);
    let w_area = crate::hull::polygon_area(&wulff);
    let c0 = crate::linalg::centroid(ring);
    let s0 = (area / w_area).sqrt();
    let fit = |p: &[f64]| -> f64 {
        if !(p[2] > 0.0) {
            return f64::INFINITY;
        }
        let mut m: Vec<Vec<f64>> = wulff.iter().map(|v| vec![p[0] + p[2] * v[0], p[1] + p[2] * v[1]]).collect();
        for n in cone_normals {
            m = clip_ring(&m, n);
        }
        if m.len() < 3 {
            return f64::INFINITY;
        }
        hausdorff_convex(ring, &m)
    };
    let start = [c0[0], c0[1], s0];
    let (_, d) = nelder_mead(fit, &start, 0.2 * s0, 1e-8, 400);
    Ok(d.min(fit(&start)))
}
