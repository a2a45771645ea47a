//! Oriented boundary meshes of compact sets in the plane and in space.
//!
//! A facet is a segment (n = 2) or a planar polygon (n = 3) with an outward
//! unit normal and its length/area. Facets created on a clipping hyperplane
//! carry `on_cut = true`.

use crate::error::{Error, Result};
use crate::hull::polygon_area;
use crate::linalg::{axpy, centroid, compensated_sum, cross3, dot, norm, scale, sub};

/// Points within this fraction of the mesh diameter of a clipping hyperplane
/// count as lying on it, so clipping an already clipped mesh is a no-op.
const CLIP_SNAP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    pub vertices: Vec<Vec<f64>>,
    pub normal: Vec<f64>,
    pub measure: f64,
    pub centroid: Vec<f64>,
    /// Facet lies on a clipping hyperplane (boundary of the cone).
    pub on_cut: bool,
}

impl Facet {
    /// Segment `a → b` of a counter-clockwise polygon.
    pub fn segment(a: &[f64], b: &[f64]) -> Facet {
        let d = sub(b, a);
        let len = norm(&d);
        let normal = if len > 0.0 { vec![d[1] / len, -d[0] / len] } else { vec![0.0, 0.0] };
        Facet {
            vertices: vec![a.to_vec(), b.to_vec()],
            normal,
            measure: len,
            centroid: vec![0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])],
            on_cut: false,
        }
    }

    /// Triangle with counter-clockwise vertices as seen from outside.
    pub fn triangle(a: &[f64], b: &[f64], c: &[f64]) -> Facet {
        let cr = cross3(&sub(b, a), &sub(c, a));
        let twice = norm(&cr);
        let normal = if twice > 0.0 { scale(&cr, 1.0 / twice) } else { vec![0.0; 3] };
        Facet {
            vertices: vec![a.to_vec(), b.to_vec(), c.to_vec()],
            normal,
            measure: 0.5 * twice,
            centroid: centroid(&[a.to_vec(), b.to_vec(), c.to_vec()]),
            on_cut: false,
        }
    }

    /// Vector area `measure · normal`.
    pub fn vector_area(&self) -> Vec<f64> {
        scale(&self.normal, self.measure)
    }

    fn map_points(&self, f: impl Fn(&[f64]) -> Vec<f64>, measure_factor: f64) -> Facet {
        Facet {
            vertices: self.vertices.iter().map(|v| f(v)).collect(),
            normal: self.normal.clone(),
            measure: self.measure * measure_factor,
            centroid: f(&self.centroid),
            on_cut: self.on_cut,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub dim: usize,
    pub facets: Vec<Facet>,
    pub closed: bool,
}

impl Mesh {
    pub fn empty(dim: usize) -> Mesh {
        Mesh { dim, facets: Vec::new(), closed: true }
    }

    /// Closed polygon from a vertex ring; orientation is normalized to
    /// counter-clockwise.
    pub fn from_polygon(ring: &[Vec<f64>]) -> Mesh {
        let mut ring = ring.to_vec();
        if polygon_area(&ring) < 0.0 {
            ring.reverse();
        }
        let n = ring.len();
        let facets = (0..n)
            .map(|i| Facet::segment(&ring[i], &ring[(i + 1) % n]))
            .filter(|f| f.measure > 0.0)
            .collect();
        Mesh { dim: 2, facets, closed: true }
    }

    /// Closed triangulated surface; triangles must be outward oriented.
    pub fn from_triangles(vertices: &[Vec<f64>], triangles: &[[usize; 3]]) -> Mesh {
        let facets = triangles
            .iter()
            .map(|t| Facet::triangle(&vertices[t[0]], &vertices[t[1]], &vertices[t[2]]))
            .filter(|f| f.measure > 0.0)
            .collect();
        Mesh { dim: 3, facets, closed: true }
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn total_measure(&self) -> f64 {
        compensated_sum(self.facets.iter().map(|f| f.measure))
    }

    /// `|Σ measure·ν| / Σ measure`; zero for a closed surface.
    pub fn closure_residual(&self) -> f64 {
        let total = self.total_measure();
        if total == 0.0 {
            return 0.0;
        }
        let v: Vec<f64> = (0..self.dim)
            .map(|k| compensated_sum(self.facets.iter().map(|f| f.measure * f.normal[k])))
            .collect();
        norm(&v) / total
    }

    /// Errors unless the mesh is flagged closed and passes the divergence check.
    pub fn require_closed(&self) -> Result<()> {
        let residual = self.closure_residual();
        if !self.closed || residual > 1e-8 {
            return Err(Error::OpenMesh { residual });
        }
        Ok(())
    }

    /// Lebesgue measure of the enclosed region, `(1/n) Σ ⟨x_f, ν_f⟩ |f|`.
    pub fn enclosed_volume(&self) -> f64 {
        compensated_sum(
            self.facets
                .iter()
                .map(|f| dot(&f.centroid, &f.normal) * f.measure),
        ) / self.dim as f64
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Vec<f64>> {
        self.facets.iter().flat_map(|f| f.vertices.iter())
    }

    /// Support function `max ⟨u, x⟩` over mesh vertices.
    pub fn support(&self, u: &[f64]) -> f64 {
        self.vertices().map(|v| dot(u, v)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Bounding-box diagonal.
    pub fn diameter(&self) -> f64 {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for v in self.vertices() {
            for k in 0..self.dim {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        if lo[0].is_infinite() {
            return 0.0;
        }
        norm(&sub(&hi, &lo))
    }

    pub fn scaled(&self, c: f64) -> Mesh {
        assert!(c > 0.0);
        let factor = c.powi(self.dim as i32 - 1);
        Mesh {
            dim: self.dim,
            facets: self.facets.iter().map(|f| f.map_points(|p| scale(p, c), factor)).collect(),
            closed: self.closed,
        }
    }

    pub fn translated(&self, t: &[f64]) -> Mesh {
        Mesh {
            dim: self.dim,
            facets: self.facets.iter().map(|f| f.map_points(|p| axpy(p, 1.0, t), 1.0)).collect(),
            closed: self.closed,
        }
    }

    /// Intersection with the halfspace `{⟨n, x⟩ ≥ offset}`; the new facets on
    /// the hyperplane are tagged `on_cut`.
    pub fn clip_halfspace(&self, n: &[f64], offset: f64) -> Mesh {
        match self.dim {
            2 => self.clip_halfspace_2d(n, offset),
            _ => self.clip_halfspace_3d(n, offset),
        }
    }

    fn clip_halfspace_2d(&self, n: &[f64], offset: f64) -> Mesh {
        let tol = CLIP_SNAP * self.diameter() * norm(n);
        let side = |p: &[f64]| {
            let s = dot(n, p) - offset;
            if s.abs() <= tol { 0.0 } else { s }
        };
        let mut facets = Vec::new();
        let mut crossings: Vec<Vec<f64>> = Vec::new();
        for f in &self.facets {
            let (a, b) = (&f.vertices[0], &f.vertices[1]);
            let (sa, sb) = (side(a), side(b));
            match (sa >= 0.0, sb >= 0.0) {
                (true, true) => facets.push(f.clone()),
                (false, false) => {}
                (ina, _) => {
                    let t = sa / (sa - sb);
                    let p = axpy(a, t, &sub(b, a));
                    let mut piece = if ina { Facet::segment(a, &p) } else { Facet::segment(&p, b) };
                    piece.on_cut = f.on_cut;
                    piece.normal = f.normal.clone();
                    if piece.measure > 0.0 {
                        facets.push(piece);
                    }
                    crossings.push(p);
                }
            }
        }
        // interior of the polygon along the cut line is a union of
        // [c0, c1] ∪ [c2, c3] ∪ … when sorted in the direction d
        let d = [n[1], -n[0]];
        crossings.sort_by(|p, q| dot(&d, p).total_cmp(&dot(&d, q)));
        for pair in crossings.chunks_exact(2) {
            let mut cap = Facet::segment(&pair[0], &pair[1]);
            if cap.measure > 0.0 {
                cap.on_cut = true;
                facets.push(cap);
            }
        }
        Mesh { dim: 2, facets, closed: self.closed }
    }

    fn clip_halfspace_3d(&self, n: &[f64], offset: f64) -> Mesh {
        let tol = CLIP_SNAP * self.diameter() * norm(n);
        let side = |p: &[f64]| {
            let s = dot(n, p) - offset;
            if s.abs() <= tol { 0.0 } else { s }
        };
        let mut facets = Vec::new();
        // oriented cap edges (entry → exit)
        let mut cap_edges: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
        for f in &self.facets {
            let s: Vec<f64> = f.vertices.iter().map(|v| side(v)).collect();
            if s.iter().all(|&x| x >= 0.0) {
                facets.push(f.clone());
                continue;
            }
            if s.iter().all(|&x| x < 0.0) {
                continue;
            }
            let k = f.vertices.len();
            let mut out: Vec<Vec<f64>> = Vec::with_capacity(k + 1);
            let (mut exit, mut entry) = (None, None);
            for i in 0..k {
                let j = (i + 1) % k;
                let (cur, next) = (&f.vertices[i], &f.vertices[j]);
                let (ic, inx) = (s[i] >= 0.0, s[j] >= 0.0);
                if ic {
                    out.push(cur.clone());
                }
                if ic != inx {
                    let t = s[i] / (s[i] - s[j]);
                    let p = axpy(cur, t, &sub(next, cur));
                    if ic {
                        exit = Some(p.clone());
                    } else {
                        entry = Some(p.clone());
                    }
                    out.push(p);
                }
            }
            if let (Some(en), Some(ex)) = (entry, exit) {
                cap_edges.push((en, ex));
            }
            for t in 1..out.len().saturating_sub(1) {
                let mut piece = Facet::triangle(&out[0], &out[t], &out[t + 1]);
                if piece.measure > 0.0 {
                    piece.normal = f.normal.clone();
                    piece.on_cut = f.on_cut;
                    facets.push(piece);
                }
            }
        }
        if !cap_edges.is_empty() {
            let pts: Vec<Vec<f64>> = cap_edges.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect();
            let c = centroid(&pts);
            let outward = scale(n, -1.0 / norm(n));
            let mut area = 0.0;
            let mut moment = vec![0.0; 3];
            for (p, q) in &cap_edges {
                let a = 0.5 * dot(&cross3(&sub(p, &c), &sub(q, &c)), &outward);
                area += a;
                for k in 0..3 {
                    moment[k] += a * (c[k] + p[k] + q[k]) / 3.0;
                }
            }
            if area > 0.0 {
                facets.push(Facet {
                    vertices: pts,
                    normal: outward,
                    measure: area,
                    centroid: scale(&moment, 1.0 / area),
                    on_cut: true,
                });
            }
        }
        Mesh { dim: 3, facets, closed: self.closed }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Mesh {
        Mesh::from_polygon(&[
            vec![-1.0, -1.0],
            vec![1.0, -1.0],
            vec![1.0, 1.0],
            vec![-1.0, 1.0],
        ])
    }

    fn cube() -> Mesh {
        let h = crate::hull::hull_3d(
            &(0..8)
                .map(|i| vec![(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64])
                .collect::<Vec<_>>(),
        )
        .unwrap();
        Mesh::from_triangles(&h.vertices, &h.triangles)
    }

    #[test]
    fn clockwise_ring_is_reoriented() {
        let mut ring = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        ring.reverse();
        let m = Mesh::from_polygon(&ring);
        assert!((m.enclosed_volume() - 0.5).abs() < 1e-15);
        assert!(m.closure_residual() < 1e-15);
    }

    #[test]
    fn clip_square_to_upper_half() {
        let m = square().clip_halfspace(&[0.0, 1.0], 0.0);
        assert!((m.enclosed_volume() - 2.0).abs() < 1e-14);
        assert!(m.closure_residual() < 1e-14);
        let cut: f64 = m.facets.iter().filter(|f| f.on_cut).map(|f| f.measure).sum();
        assert!((cut - 2.0).abs() < 1e-14);
    }

    #[test]
    fn clip_nonconvex_polygon_produces_two_caps() {
        // a "U" shape cut below the notch: line y = 1.5 crosses it four times
        let u = Mesh::from_polygon(&[
            vec![0.0, 0.0],
            vec![3.0, 0.0],
            vec![3.0, 2.0],
            vec![2.0, 2.0],
            vec![2.0, 1.0],
            vec![1.0, 1.0],
            vec![1.0, 2.0],
            vec![0.0, 2.0],
        ]);
        let top = u.clip_halfspace(&[0.0, 1.0], 1.5);
        assert!((top.enclosed_volume() - 1.0).abs() < 1e-14);
        assert!(top.closure_residual() < 1e-14);
        assert_eq!(top.facets.iter().filter(|f| f.on_cut).count(), 2);
    }

    #[test]
    fn clip_cube_keeps_volume_and_closure() {
        let m = cube().clip_halfspace(&[0.0, 0.0, 1.0], 0.25);
        assert!((m.enclosed_volume() - 0.75).abs() < 1e-13);
        assert!(m.closure_residual() < 1e-13);
        let cap: Vec<_> = m.facets.iter().filter(|f| f.on_cut).collect();
        assert_eq!(cap.len(), 1);
        assert!((cap[0].measure - 1.0).abs() < 1e-13);
        assert!((cap[0].centroid[0] - 0.5).abs() < 1e-13);
        assert!((cap[0].centroid[2] - 0.25).abs() < 1e-13);
    }

    #[test]
    fn scaling_and_translation() {
        let m = square();
        assert!((m.scaled(3.0).enclosed_volume() - 36.0).abs() < 1e-12);
        assert!((m.translated(&[5.0, -2.0]).enclosed_volume() - 4.0).abs() < 1e-12);
        assert!(m.require_closed().is_ok());
    }

    #[test]
    fn open_mesh_is_rejected() {
        let mut m = square();
        m.facets.pop();
        assert!(matches!(m.require_closed(), Err(Error::OpenMesh { .. })));
    }
}
