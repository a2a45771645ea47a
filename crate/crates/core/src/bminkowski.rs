//! Minkowski combinations of convex bodies, Brunn–Minkowski slack, forward
//! Minkowski content, the midpoint-set trace of the main inequality, and the
//! coarea comparison for gauge-radial functions.

use crate::cone::{omega_n, weighted_perimeter, weighted_volume, ConeSpec, WeightKind, WeightSpec};
use crate::error::{Error, Result};
use crate::gauge::{directions, Gauge, GaugeKind, Polytope};
use crate::hull::{hull_2d, hull_3d, polygon_area};
use crate::linalg::{add, cross2, dot, scale, sub};
use crate::mesh::Mesh;
use crate::numerics::richardson;

/// Compact convex body given by its extreme points.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexBody {
    pub dim: usize,
    /// Counter-clockwise ring (n = 2) or hull vertices (n = 3).
    pub vertices: Vec<Vec<f64>>,
    mesh: Mesh,
}

impl ConvexBody {
    /// Convex hull of `points`; fails on bodies without interior.
    pub fn new(points: &[Vec<f64>]) -> Result<ConvexBody> {
        let dim = points.first().map(|p| p.len()).ok_or(Error::EmptySet)?;
        let (vertices, mesh) = match dim {
            2 => {
                let ring = hull_2d(points);
                if ring.len() < 3 {
                    return Err(Error::EmptySet);
                }
                let mesh = Mesh::from_polygon(&ring);
                (ring, mesh)
            }
            3 => {
                let h = hull_3d(points)?;
                let mesh = Mesh::from_triangles(&h.vertices, &h.triangles);
                (h.vertices, mesh)
            }
            _ => return Err(Error::InvalidArgument(format!("convex bodies live in dimension 2 or 3, got {dim}"))),
        };
        if !(mesh.enclosed_volume() > 0.0) {
            return Err(Error::EmptySet);
        }
        Ok(ConvexBody { dim, vertices, mesh })
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn volume(&self) -> f64 {
        self.mesh.enclosed_volume()
    }

    pub fn support(&self, u: &[f64]) -> f64 {
        self.vertices.iter().map(|v| dot(u, v)).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn scaled(&self, c: f64) -> ConvexBody {
        ConvexBody { dim: self.dim, vertices: self.vertices.iter().map(|v| scale(v, c)).collect(), mesh: self.mesh.scaled(c) }
    }

    pub fn translated(&self, t: &[f64]) -> ConvexBody {
        ConvexBody { dim: self.dim, vertices: self.vertices.iter().map(|v| add(v, t)).collect(), mesh: self.mesh.translated(t) }
    }

    /// `max_f (⟨ν_f, p⟩ − h(ν_f))` over facets: positive outside, ≤ 0 inside.
    pub fn outside_margin(&self, p: &[f64]) -> f64 {
        self.mesh
            .facets
            .iter()
            .map(|f| dot(&f.normal, p) - dot(&f.normal, &f.vertices[0]))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Minkowski sum `self ⊕ other`.
    pub fn minkowski_sum(&self, other: &ConvexBody) -> Result<ConvexBody> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        if self.dim == 2 {
            return ConvexBody::new(&merge_rings(&self.vertices, &other.vertices));
        }
        let sums: Vec<Vec<f64>> = self
            .vertices
            .iter()
            .flat_map(|a| other.vertices.iter().map(move |b| add(a, b)))
            .collect();
        ConvexBody::new(&sums)
    }
}

/// Vertices of the sum of two convex counter-clockwise polygons by merging
/// their edge sequences in angular order.
fn merge_rings(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let start = |r: &[Vec<f64>]| {
        (0..r.len())
            .min_by(|&i, &j| r[i][1].total_cmp(&r[j][1]).then(r[i][0].total_cmp(&r[j][0])))
            .unwrap()
    };
    let rot = |r: &[Vec<f64>]| {
        let s = start(r);
        let mut v: Vec<Vec<f64>> = r[s..].iter().chain(&r[..s]).cloned().collect();
        v.push(v[0].clone());
        v.push(v[1].clone());
        v
    };
    let (p, q) = (rot(a), rot(b));
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(n + m);
    while i < n || j < m {
        out.push(add(&p[i], &q[j]));
        let c = cross2(&sub(&p[i + 1], &p[i]), &sub(&q[j + 1], &q[j]));
        if j == m || (i < n && c > 0.0) {
            i += 1;
        } else if i == n || c < 0.0 {
            j += 1;
        } else {
            i += 1;
            j += 1;
        }
    }
    hull_2d(&out)
}

/// `Z_t(A, B) = (1 − t)A ⊕ tB`.
pub fn midpoint_set(a: &ConvexBody, b: &ConvexBody, t: f64) -> Result<ConvexBody> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidArgument(format!("t must lie in [0, 1], got {t}")));
    }
    if t == 0.0 {
        return Ok(a.clone());
    }
    if t == 1.0 {
        return Ok(b.clone());
    }
    a.scaled(1.0 - t).minkowski_sum(&b.scaled(t))
}

/// `m(Z_t)^{1/N} − (1 − t) m(A)^{1/N} − t m(B)^{1/N}` with `m` the weighted volume in `Σ`.
pub fn bm_slack(a: &ConvexBody, b: &ConvexBody, t: f64, w: &WeightSpec, cone: &ConeSpec, n: f64) -> Result<f64> {
    if n < w.n_total() - 1e-12 {
        return Err(Error::InvalidArgument(format!("need N ≥ n + α = {}, got {n}", w.n_total())));
    }
    let z = midpoint_set(a, b, t)?;
    let m = |body: &ConvexBody| -> Result<f64> { Ok(weighted_volume(body.mesh(), w, cone)?.max(0.0).powf(1.0 / n)) };
    Ok(m(&z)? - (1.0 - t) * m(a)? - t * m(b)?)
}

/// Convex polygon containing the unit ball `{F ≤ 1}`: intersection of the
/// supporting halfplanes `⟨ν, x⟩ ≤ F*(ν)` over `resolution` normals.
/// Polytope balls are returned exactly.
pub fn outer_unit_ball(f: &Gauge, resolution: usize) -> Result<ConvexBody> {
    if matches!(f.kind, GaugeKind::Polytopal(_) | GaugeKind::Support(_)) || f.dim != 2 {
        let ball = f.forward_ball(&vec![0.0; f.dim], 1.0, resolution)?;
        return ConvexBody::new(&ball.vertices().cloned().collect::<Vec<_>>());
    }
    let dual = f.dual()?;
    let normals = directions(2, resolution);
    let offsets = normals.iter().map(|u| dual.eval(u)).collect::<Result<Vec<f64>>>()?;
    let k = normals.len();
    let verts: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            let j = (i + 1) % k;
            let (u, v) = (&normals[i], &normals[j]);
            let det = u[0] * v[1] - u[1] * v[0];
            vec![(offsets[i] * v[1] - offsets[j] * u[1]) / det, (u[0] * offsets[j] - v[0] * offsets[i]) / det]
        })
        .collect();
    ConvexBody::new(&verts)
}

/// Difference quotients of the forward Minkowski content and their extrapolation.
#[derive(Debug, Clone, PartialEq)]
pub struct ContentReport {
    /// `(ε, (m(B⁺(E, ε)) − m(E))/ε)` in ladder order.
    pub quotients: Vec<(f64, f64)>,
    pub extrapolated: f64,
    /// Computed on a voxel grid (nonconvex input).
    pub approximate: bool,
}

fn check_ladder(eps: &[f64]) -> Result<()> {
    if eps.is_empty() || eps.iter().any(|e| !(*e > 0.0)) || eps.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument("ε ladder must be positive and strictly decreasing".into()));
    }
    Ok(())
}

/// Default ladder `{0.1, 0.05, 0.025}·r` for a body of inradius `r`.
pub fn default_ladder(inradius: f64) -> Vec<f64> {
    vec![0.1 * inradius, 0.05 * inradius, 0.025 * inradius]
}

/// Forward Minkowski content of a convex body: `B⁺(E, ε) = E ⊕ εK` with `K`
/// the unit ball of `F` (outer polygon of `resolution` supporting lines in 2D).
pub fn minkowski_content(
    e: &ConvexBody,
    f: &Gauge,
    w: &WeightSpec,
    cone: &ConeSpec,
    eps: &[f64],
    resolution: usize,
) -> Result<ContentReport> {
    check_ladder(eps)?;
    let k = outer_unit_ball(f, resolution)?;
    let m0 = weighted_volume(e.mesh(), w, cone)?;
    let quotients = eps
        .iter()
        .map(|&ep| {
            let grown = e.minkowski_sum(&k.scaled(ep))?;
            Ok((ep, (weighted_volume(grown.mesh(), w, cone)? - m0) / ep))
        })
        .collect::<Result<Vec<_>>>()?;
    let (hs, vs): (Vec<f64>, Vec<f64>) = quotients.iter().cloned().unzip();
    Ok(ContentReport { extrapolated: richardson(&hs, &vs, 1), quotients, approximate: false })
}

/// Default scanline count for nonconvex content.
pub const VOXEL_GRID: usize = 1024;

/// Content of a simple (possibly nonconvex) polygon by scanline integration
/// of the union of `T ⊕ εK` over a triangulation of the polygon.
///
/// Rows sit at slab midpoints between vertex heights, spans are exact unions
/// of intervals clipped to the cone, and the weight is sampled on `grid`
/// cells per row.
pub fn minkowski_content_voxel(
    ring: &[Vec<f64>],
    f: &Gauge,
    w: &WeightSpec,
    cone: &ConeSpec,
    eps: &[f64],
    resolution: usize,
    grid: usize,
) -> Result<ContentReport> {
    check_ladder(eps)?;
    if grid < 2 {
        return Err(Error::InvalidArgument("grid must be at least 2".into()));
    }
    let ring = if polygon_area(ring) < 0.0 { ring.iter().rev().cloned().collect() } else { ring.to_vec() };
    let tris = ear_clip(&ring)?;
    let k = outer_unit_ball(f, resolution)?;
    let reach = eps[0] * k.vertices.iter().map(|v| v[0].abs().max(v[1].abs())).fold(0.0, f64::max);
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in &ring {
        for d in 0..2 {
            lo[d] = lo[d].min(p[d] - reach);
            hi[d] = hi[d].max(p[d] + reach);
        }
    }
    let scan = Scanline { cell: (hi[0] - lo[0]).max(hi[1] - lo[1]) / grid as f64, w, cone };
    let base: Vec<Vec<Vec<f64>>> = tris.iter().map(|t| t.to_vec()).collect();
    let m0 = scan.measure(&base);
    let quotients = eps
        .iter()
        .map(|&ep| {
            let kk = k.scaled(ep);
            let pieces = tris
                .iter()
                .map(|t| Ok(ConvexBody::new(t)?.minkowski_sum(&kk)?.vertices))
                .collect::<Result<Vec<_>>>()?;
            Ok((ep, (scan.measure(&pieces) - m0) / ep))
        })
        .collect::<Result<Vec<_>>>()?;
    let (hs, vs): (Vec<f64>, Vec<f64>) = quotients.iter().cloned().unzip();
    Ok(ContentReport { extrapolated: richardson(&hs, &vs, 1), quotients, approximate: true })
}

struct Scanline<'a> {
    cell: f64,
    w: &'a WeightSpec,
    cone: &'a ConeSpec,
}

impl Scanline<'_> {
    /// Weighted measure of the union of convex counter-clockwise polygons.
    fn measure(&self, pieces: &[Vec<Vec<f64>>]) -> f64 {
        let mut ys: Vec<f64> = pieces.iter().flatten().map(|p| p[1]).collect();
        ys.sort_by(f64::total_cmp);
        ys.dedup();
        let mut total = 0.0;
        for slab in ys.windows(2) {
            let height = slab[1] - slab[0];
            if !(height > 0.0) {
                continue;
            }
            let rows = (height / self.cell).ceil().max(1.0) as usize;
            let dy = height / rows as f64;
            for r in 0..rows {
                let y = slab[0] + (r as f64 + 0.5) * dy;
                total += dy * self.row(pieces, y);
            }
        }
        total
    }

    fn row(&self, pieces: &[Vec<Vec<f64>>], y: f64) -> f64 {
        let mut spans: Vec<(f64, f64)> = pieces.iter().filter_map(|p| convex_span(p, y)).collect();
        spans.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(spans.len());
        for (a, b) in spans {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        merged.into_iter().filter_map(|(a, b)| self.clip_to_cone(a, b, y)).map(|(a, b)| self.integrate(a, b, y)).sum()
    }

    /// `{x ∈ [a, b] : (x, y) ∈ Σ}`, exact since each constraint is linear in `x`.
    fn clip_to_cone(&self, mut a: f64, mut b: f64, y: f64) -> Option<(f64, f64)> {
        for n in self.cone.normals() {
            // n_x x + n_y y ≥ 0
            if n[0] > 0.0 {
                a = a.max(-n[1] * y / n[0]);
            } else if n[0] < 0.0 {
                b = b.min(-n[1] * y / n[0]);
            } else if n[1] * y < 0.0 {
                return None;
            }
        }
        (b > a).then_some((a, b))
    }

    fn integrate(&self, a: f64, b: f64, y: f64) -> f64 {
        if matches!(self.w.kind, WeightKind::One) {
            return b - a;
        }
        let m = ((b - a) / self.cell).ceil().max(1.0) as usize;
        let dx = (b - a) / m as f64;
        (0..m).map(|i| self.w.eval(&[a + (i as f64 + 0.5) * dx, y])).sum::<f64>() * dx
    }
}

/// Horizontal chord of a convex polygon at height `y`.
fn convex_span(ring: &[Vec<f64>], y: f64) -> Option<(f64, f64)> {
    let n = ring.len();
    let (mut xl, mut xr) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let (a, b) = (&ring[i], &ring[(i + 1) % n]);
        if (a[1] - y) * (b[1] - y) <= 0.0 && a[1] != b[1] {
            let x = a[0] + (y - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            xl = xl.min(x);
            xr = xr.max(x);
        }
    }
    (xr > xl).then_some((xl, xr))
}

/// Ear-clipping triangulation of a simple counter-clockwise polygon.
pub fn ear_clip(ring: &[Vec<f64>]) -> Result<Vec<[Vec<f64>; 3]>> {
    let mut idx: Vec<usize> = (0..ring.len()).collect();
    let mut out = Vec::with_capacity(ring.len().saturating_sub(2));
    let inside = |p: &[f64], a: &[f64], b: &[f64], c: &[f64]| {
        cross2(&sub(b, a), &sub(p, a)) >= 0.0 && cross2(&sub(c, b), &sub(p, b)) >= 0.0 && cross2(&sub(a, c), &sub(p, c)) >= 0.0
    };
    while idx.len() > 3 {
        let k = idx.len();
        let ear = (0..k).find(|&i| {
            let (a, b, c) = (&ring[idx[(i + k - 1) % k]], &ring[idx[i]], &ring[idx[(i + 1) % k]]);
            cross2(&sub(b, a), &sub(c, b)) > 0.0
                && idx
                    .iter()
                    .filter(|&&j| ![idx[(i + k - 1) % k], idx[i], idx[(i + 1) % k]].contains(&j))
                    .all(|&j| !inside(&ring[j], a, b, c))
        });
        let i = ear.ok_or_else(|| Error::InvalidArgument("polygon is not simple".into()))?;
        out.push([ring[idx[(i + k - 1) % k]].clone(), ring[idx[i]].clone(), ring[idx[(i + 1) % k]].clone()]);
        idx.remove(i);
    }
    out.push([ring[idx[0]].clone(), ring[idx[1]].clone(), ring[idx[2]].clone()]);
    Ok(out)
}

/// One rung of the midpoint-set trace.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub r: f64,
    pub m_ball: f64,
    pub m_z: f64,
    /// `((1 − t) m(E)^{1/N} + t m(B_R)^{1/N})^N`.
    pub bm_rhs: f64,
    pub bm_holds: bool,
    /// Largest signed distance of a vertex of `Z_t` outside `E ⊕ t(d + R)K`.
    pub containment_margin: f64,
    pub containment_holds: bool,
    /// `(m(Z_t) − m(E)) / (t(d + R))`, zero at `t = 0`.
    pub quotient: f64,
    /// `N m(E)^{1−1/N} (m(B_R)^{1/N} − m(E)^{1/N}) / (d + R)`.
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub n: f64,
    pub m_e: f64,
    /// Gauge diameter `sup_{x,y ∈ E} F(y − x)`.
    pub d: f64,
    /// `N (ω_N AVR)^{1/N} m(E)^{1−1/N}`.
    pub limit: f64,
    pub rows: Vec<TraceRow>,
}

/// Runs the midpoint-set argument for `E` and forward balls `B⁺(x0, R)`.
///
/// The gauge is replaced by the polytope gauge whose unit ball is the
/// `resolution`-vertex forward ball of `f`; for that gauge every set in the
/// argument is an exact polytope.
#[allow(clippy::too_many_arguments)]
pub fn main_inequality_trace(
    e: &ConvexBody,
    f: &Gauge,
    w: &WeightSpec,
    cone: &ConeSpec,
    x0: &[f64],
    radii: &[f64],
    t: f64,
    resolution: usize,
) -> Result<TraceRecord> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidArgument(format!("t must lie in [0, 1], got {t}")));
    }
    let ball = f.forward_ball(&vec![0.0; e.dim], 1.0, resolution)?;
    let k = ConvexBody::new(&ball.vertices().cloned().collect::<Vec<_>>())?;
    let poly = Polytope::new(&k.vertices)?;
    let n = w.n_total();
    let m = |b: &ConvexBody| weighted_volume(b.mesh(), w, cone);
    let m_e = m(e)?;
    if !(m_e > 0.0) {
        return Err(Error::EmptySet);
    }
    // gauge diameter: max_j (max_v ⟨a_j, v⟩ − min_v ⟨a_j, v⟩) over facet normals a_j
    let d = poly
        .facet_normals
        .iter()
        .map(|a| {
            let (lo, hi) = e.vertices.iter().map(|v| dot(a, v)).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
            hi - lo
        })
        .fold(0.0, f64::max);
    let avr = weighted_volume(k.mesh(), w, cone)? / omega_n(n);
    let limit = n * (omega_n(n) * avr).powf(1.0 / n) * m_e.powf(1.0 - 1.0 / n);
    let scale_len = e.mesh().diameter();
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        let reach: Vec<f64> = e.vertices.iter().map(|v| poly.gauge(&sub(v, x0))).collect();
        if let Some(bad) = reach.iter().find(|&&v| v > r * (1.0 + 1e-12)) {
            return Err(Error::Containment(format!("E is not inside B⁺(x0, {r}): reach {bad}")));
        }
        let b = k.scaled(r).translated(x0);
        let m_ball = m(&b)?;
        let z = midpoint_set(e, &b, t)?;
        let m_z = m(&z)?;
        let bm_rhs = ((1.0 - t) * m_e.powf(1.0 / n) + t * m_ball.powf(1.0 / n)).powf(n);
        let target = if t == 0.0 { e.clone() } else { e.minkowski_sum(&k.scaled(t * (d + r)))? };
        let margin = z.vertices.iter().map(|p| target.outside_margin(p)).fold(f64::NEG_INFINITY, f64::max);
        let tol = 1e-12 * (scale_len + r);
        let quotient = if t == 0.0 { 0.0 } else { (m_z - m_e) / (t * (d + r)) };
        rows.push(TraceRow {
            r,
            m_ball,
            m_z,
            bm_rhs,
            bm_holds: m_z >= bm_rhs * (1.0 - 1e-12),
            containment_margin: margin,
            containment_holds: margin <= tol,
            quotient,
            bound: n * m_e.powf(1.0 - 1.0 / n) * (m_ball.powf(1.0 / n) - m_e.powf(1.0 / n)) / (d + r),
        });
    }
    Ok(TraceRecord { n, m_e, d, limit, rows })
}

/// Nonincreasing, compactly supported piecewise-linear profile `φ` on `[0, ∞)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    knots: Vec<(f64, f64)>,
}

impl RadialProfile {
    /// Knots `(r_k, φ_k)` starting at `r = 0` and ending with `φ = 0`; zero beyond.
    pub fn new(knots: Vec<(f64, f64)>) -> Result<RadialProfile> {
        if knots.is_empty() || knots[0].0 != 0.0 || knots.last().unwrap().1 != 0.0 {
            return Err(Error::InvalidArgument("profile knots must start at r = 0 and end at φ = 0".into()));
        }
        for w in knots.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::InvalidArgument("profile knots must have increasing r".into()));
            }
            if w[1].1 > w[0].1 {
                return Err(Error::NonMonotoneProfile(w[1].0));
            }
        }
        Ok(RadialProfile { knots })
    }

    /// `φ(r) = (1 − r/radius)⁺`.
    pub fn cone(radius: f64) -> RadialProfile {
        RadialProfile { knots: vec![(0.0, 1.0), (radius, 0.0)] }
    }

    pub fn zero() -> RadialProfile {
        RadialProfile { knots: vec![(0.0, 0.0)] }
    }

    pub fn eval(&self, r: f64) -> f64 {
        let k = &self.knots;
        let i = k.partition_point(|p| p.0 <= r);
        if i == 0 {
            return k[0].1;
        }
        if i == k.len() {
            return 0.0;
        }
        let (a, b) = (k[i - 1], k[i]);
        a.1 + (b.1 - a.1) * (r - a.0) / (b.0 - a.0)
    }

    /// `φ′(r)` (right derivative at knots).
    pub fn derivative(&self, r: f64) -> f64 {
        let k = &self.knots;
        let i = k.partition_point(|p| p.0 <= r);
        if i == 0 || i == k.len() {
            return 0.0;
        }
        (k[i].1 - k[i - 1].1) / (k[i].0 - k[i - 1].0)
    }

    pub fn support_radius(&self) -> f64 {
        self.knots.last().unwrap().0
    }

    /// `∫_0^{φ(0)} r_s^{N−1} ds` with `r_s = sup{r : φ(r) ≥ s}`.
    fn level_moment(&self, n: f64) -> f64 {
        self.knots
            .windows(2)
            .map(|w| {
                let (a, b) = (w[0], w[1]);
                let slope = (a.1 - b.1) / (b.0 - a.0);
                slope * (b.0.powf(n) - a.0.powf(n)) / n
            })
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoareaResult {
    /// `∫_0^∞ m⁺({f ≥ s}) ds`.
    pub lhs: f64,
    /// `∫ F*(−df) dm` at the finer grid.
    pub rhs: f64,
    /// `|rhs(grid) − rhs(grid/2)|`.
    pub rhs_error: f64,
}

/// Coarea comparison for `f(x) = φ(F(x))` in the plane.
///
/// Superlevel sets are `r·K` with `K = {F ≤ 1}`, whose content is
/// `N m(K) r^{N−1}`; `m(K)` comes from the `resolution`-vertex ball mesh.
/// The right side is midpoint quadrature on a `grid × grid` box.
pub fn coarea_check(
    phi: &RadialProfile,
    f: &Gauge,
    w: &WeightSpec,
    cone: &ConeSpec,
    resolution: usize,
    grid: usize,
) -> Result<CoareaResult> {
    if f.dim != 2 {
        return Err(Error::InvalidArgument("coarea quadrature is implemented in the plane".into()));
    }
    let n = w.n_total();
    let radius = phi.support_radius();
    if radius == 0.0 {
        return Ok(CoareaResult { lhs: 0.0, rhs: 0.0, rhs_error: 0.0 });
    }
    let ball = f.forward_ball(&[0.0, 0.0], 1.0, resolution)?;
    let m_k = weighted_volume(&ball, w, cone)?;
    let lhs = n * m_k * phi.level_moment(n);
    let dual = f.dual()?;
    let reach = ball.vertices().map(|v| v[0].abs().max(v[1].abs())).fold(0.0, f64::max) * radius;
    let integrate = |cells: usize| -> Result<f64> {
        let h = 2.0 * reach / cells as f64;
        let mut s = crate::linalg::KahanSum::default();
        for iy in 0..cells {
            for ix in 0..cells {
                let x = [-reach + (ix as f64 + 0.5) * h, -reach + (iy as f64 + 0.5) * h];
                if !cone.contains(&x) {
                    continue;
                }
                let fx = f.eval_unchecked(&x);
                let dphi = phi.derivative(fx);
                if dphi == 0.0 || fx == 0.0 {
                    continue;
                }
                let grad = if f.is_smooth() { f.gradient(&x)? } else { central_gradient(f, &x, 1e-7 * reach) };
                s.add(dual.eval(&scale(&grad, -dphi))? * w.eval(&x));
            }
        }
        Ok(s.value() * h * h)
    };
    let fine = integrate(grid)?;
    let coarse = integrate(grid / 2)?;
    Ok(CoareaResult { lhs, rhs: fine, rhs_error: (fine - coarse).abs() })
}

fn central_gradient(f: &Gauge, x: &[f64], h: f64) -> Vec<f64> {
    (0..x.len())
        .map(|k| {
            let mut p = x.to_vec();
            let mut q = x.to_vec();
            p[k] += h;
            q[k] -= h;
            (f.eval_unchecked(&p) - f.eval_unchecked(&q)) / (2.0 * h)
        })
        .collect()
}

/// `weighted_perimeter(E, F*, w, Σ)`, the first-order term of the content.
pub fn content_oracle(e: &ConvexBody, f: &Gauge, w: &WeightSpec, cone: &ConeSpec) -> Result<f64> {
    weighted_perimeter(e.mesh(), &f.dual()?, w, cone)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::{inradius, random_convex_points};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn square(side: f64) -> ConvexBody {
        let h = 0.5 * side;
        ConvexBody::new(&[vec![-h, -h], vec![h, -h], vec![h, h], vec![-h, h]]).unwrap()
    }

    fn disk(r: f64, res: usize) -> ConvexBody {
        let m = Gauge::euclidean(2).forward_ball(&[0.0, 0.0], r, res).unwrap();
        ConvexBody::new(&m.vertices().cloned().collect::<Vec<_>>()).unwrap()
    }

    fn upper() -> ConeSpec {
        ConeSpec::new(2, vec![vec![0.0, 1.0]]).unwrap()
    }

    #[test]
    fn midpoint_examples() {
        let (a, b) = (square(1.0), square(3.0));
        assert_eq!(midpoint_set(&a, &b, 0.0).unwrap(), a);
        assert_eq!(midpoint_set(&a, &b, 1.0).unwrap(), b);
        let z = midpoint_set(&a, &b, 0.5).unwrap();
        assert_relative_eq!(z.volume(), 4.0, max_relative = 1e-14);
        assert_eq!(z.vertices.len(), 4);
        let same = midpoint_set(&a, &a, 0.3).unwrap();
        assert_relative_eq!(same.volume(), a.volume(), max_relative = 1e-14);
    }

    #[test]
    fn support_functions_add() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let a = ConvexBody::new(&random_convex_points(2, &[0.0, 0.0], &[1.0, 1.0], 12, &mut rng)).unwrap();
            let b = ConvexBody::new(&random_convex_points(2, &[1.0, 2.0], &[2.0, 0.5], 9, &mut rng)).unwrap();
            let t = rng.gen_range(0.0..1.0);
            let z = midpoint_set(&a, &b, t).unwrap();
            for u in directions(2, 256) {
                let expect = (1.0 - t) * a.support(&u) + t * b.support(&u);
                assert!((z.support(&u) - expect).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn three_dim_midpoint_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let a = ConvexBody::new(&random_convex_points(3, &[0.0; 3], &[1.0; 3], 10, &mut rng)).unwrap();
        let b = ConvexBody::new(&random_convex_points(3, &[1.0; 3], &[0.5; 3], 10, &mut rng)).unwrap();
        let z = midpoint_set(&a, &b, 0.4).unwrap();
        for u in directions(3, 256) {
            assert!((z.support(&u) - 0.6 * a.support(&u) - 0.4 * b.support(&u)).abs() <= 1e-9);
        }
        let s = bm_slack(&a, &b, 0.4, &WeightSpec::one(3), &ConeSpec::whole(3), 3.0).unwrap();
        assert!(s >= -1e-9);
    }

    #[test]
    fn bm_slack_examples() {
        let w = WeightSpec::one(2);
        let r2 = ConeSpec::whole(2);
        let a = square(1.0);
        let b = a.scaled(2.5).translated(&[3.0, -1.0]);
        assert!(bm_slack(&a, &b, 0.3, &w, &r2, 2.0).unwrap().abs() <= 1e-9);
        let slack = bm_slack(&square(1.0), &disk(1.0, 4096), 0.5, &w, &r2, 2.0).unwrap();
        let oracle = (0.25 + 1.0 + PI / 4.0f64).sqrt() - (0.5 + 0.5 * PI.sqrt());
        assert!((slack - oracle).abs() <= 1e-5, "{slack} vs {oracle}");
        let c = disk(0.7, 64).translated(&[0.2, 0.1]);
        let s1 = bm_slack(&a, &c, 0.2, &w, &r2, 2.0).unwrap();
        let s2 = bm_slack(&c, &a, 0.8, &w, &r2, 2.0).unwrap();
        assert_relative_eq!(s1, s2, epsilon = 1e-12);
    }

    #[test]
    fn weighted_bm_on_corpus_and_dilations() {
        let cone = upper();
        let w = WeightSpec::new(1.0, WeightKind::LinearPower { c: vec![0.0, 1.0] }, &cone).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let a = ConvexBody::new(&random_convex_points(2, &[0.0, 1.5], &[1.0, 1.0], 8, &mut rng)).unwrap();
            let b = ConvexBody::new(&random_convex_points(2, &[1.0, 2.0], &[1.5, 1.5], 8, &mut rng)).unwrap();
            let t = rng.gen_range(0.0..1.0);
            assert!(bm_slack(&a, &b, t, &w, &cone, 3.0).unwrap() >= -1e-9);
        }
        let a = ConvexBody::new(&random_convex_points(2, &[0.0, 1.5], &[1.0, 1.0], 8, &mut rng)).unwrap();
        assert!(bm_slack(&a, &a.scaled(3.0), 0.4, &w, &cone, 3.0).unwrap().abs() <= 1e-9);
        assert!(bm_slack(&a, &a, 0.4, &w, &cone, 2.0).is_err());
    }

    #[test]
    fn content_examples() {
        let w = WeightSpec::one(2);
        let r2 = ConeSpec::whole(2);
        let eu = Gauge::euclidean(2);
        let d = disk(1.3, 4096);
        let c = minkowski_content(&d, &eu, &w, &r2, &[0.1, 0.05, 0.025], 4096).unwrap();
        assert!((c.extrapolated - 2.0 * PI * 1.3).abs() <= 1e-3);
        let c = minkowski_content(&square(1.0), &eu, &w, &r2, &[0.1, 0.05, 0.025], 4096).unwrap();
        assert!((c.extrapolated - 4.0).abs() <= 1e-3);
        assert!(c.quotients.windows(2).all(|p| p[1].1 <= p[0].1));
        assert!(minkowski_content(&square(1.0), &eu, &w, &r2, &[0.05, 0.1], 64).is_err());
    }

    #[test]
    fn content_matches_dual_perimeter() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let gauges = [
            Gauge::euclidean(2),
            Gauge::randers(&[0.5, 0.0]).unwrap(),
            Gauge::polytopal(&[vec![1.0, 1.0], vec![-1.0, 1.0], vec![-1.0, -1.0], vec![1.0, -1.0]]).unwrap(),
        ];
        let w = WeightSpec::one(2);
        let r2 = ConeSpec::whole(2);
        for _ in 0..5 {
            let e = ConvexBody::new(&random_convex_points(2, &[0.0, 0.0], &[1.0, 1.0], 10, &mut rng)).unwrap();
            let ladder = default_ladder(inradius(&e.vertices));
            for f in &gauges {
                let c = minkowski_content(&e, f, &w, &r2, &ladder, 4096).unwrap();
                let p = content_oracle(&e, f, &w, &r2).unwrap();
                assert_relative_eq!(c.extrapolated, p, max_relative = 1e-3);
                assert!(c.quotients.iter().all(|q| q.1 >= p - 1e-9));
            }
        }
    }

    #[test]
    fn weighted_content_in_cone() {
        let cone = upper();
        let w = WeightSpec::new(1.0, WeightKind::LinearPower { c: vec![0.0, 1.0] }, &cone).unwrap();
        let e = ConvexBody::new(&[vec![-1.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![-1.0, 1.0]]).unwrap();
        let f = Gauge::randers(&[0.2, 0.3]).unwrap();
        let c = minkowski_content(&e, &f, &w, &cone, &[0.02, 0.01, 0.005], 4096).unwrap();
        let p = content_oracle(&e, &f, &w, &cone).unwrap();
        assert_relative_eq!(c.extrapolated, p, max_relative = 1e-3);
    }

    #[test]
    fn voxel_content_of_an_l_shape() {
        let ring = vec![
            vec![0.0, 0.0],
            vec![2.0, 0.0],
            vec![2.0, 1.0],
            vec![1.0, 1.0],
            vec![1.0, 2.0],
            vec![0.0, 2.0],
        ];
        assert_eq!(ear_clip(&ring).unwrap().len(), 4);
        let c = minkowski_content_voxel(&ring, &Gauge::euclidean(2), &WeightSpec::one(2), &ConeSpec::whole(2), &[0.1, 0.05, 0.025], 256, VOXEL_GRID).unwrap();
        assert!(c.approximate);
        assert!((c.extrapolated - 8.0).abs() <= 0.1, "{c:?}");
        assert!(c.quotients.iter().all(|q| q.1 >= 8.0 - 0.1));
        // five convex corners add quarter disks, the reflex corner double-counts an ε × ε square
        for (ep, q) in &c.quotients {
            assert!((q - (8.0 + (1.25 * PI - 1.0) * ep)).abs() <= 2e-3, "{ep} {q}");
        }
    }

    #[test]
    fn trace_on_unit_disk() {
        let res = 4096;
        let e = disk(1.0, res);
        let eu = Gauge::euclidean(2);
        let rec = main_inequality_trace(&e, &eu, &WeightSpec::one(2), &ConeSpec::whole(2), &[0.0, 0.0], &[10.0, 40.0, 160.0], 1e-3, res).unwrap();
        assert_relative_eq!(rec.limit, 2.0 * PI, max_relative = 1e-5);
        assert!(rec.rows.iter().all(|r| r.bm_holds && r.containment_holds));
        assert!(rec.rows.windows(2).all(|p| p[1].bound > p[0].bound));
        let last = rec.rows.last().unwrap();
        assert!(last.bound < rec.limit && (rec.limit - last.bound) / rec.limit <= 0.02);
        // closed form 2π(R − 1)/(R + 2) for the exact disk
        assert_relative_eq!(last.bound, 2.0 * PI * 159.0 / 162.0, max_relative = 1e-5);
        assert!(rec.rows.iter().all(|r| r.quotient >= r.bound * (1.0 - 1e-6)));
        let zero = main_inequality_trace(&e, &eu, &WeightSpec::one(2), &ConeSpec::whole(2), &[0.0, 0.0], &[10.0], 0.0, res).unwrap();
        assert_eq!(zero.rows[0].quotient, 0.0);
        assert_eq!(zero.rows[0].m_z, zero.m_e);
        assert!(main_inequality_trace(&e, &eu, &WeightSpec::one(2), &ConeSpec::whole(2), &[0.0, 0.0], &[0.5], 0.1, res).is_err());
    }

    #[test]
    fn trace_on_randers_wulff_shape() {
        let h = Gauge::randers(&[0.5, 0.0]).unwrap();
        let f = h.dual().unwrap().dual().unwrap();
        let res = 1024;
        let wulff = h.dual().unwrap().wulff(res).unwrap();
        let e = ConvexBody::new(&wulff.vertices().cloned().collect::<Vec<_>>()).unwrap();
        let rec = main_inequality_trace(&e, &f, &WeightSpec::one(2), &ConeSpec::whole(2), &[0.0, 0.0], &[10.0, 40.0, 160.0], 1e-3, res).unwrap();
        let content = minkowski_content(&e, &f, &WeightSpec::one(2), &ConeSpec::whole(2), &[0.01, 0.005, 0.0025], res).unwrap();
        let gaps: Vec<f64> = rec.rows.iter().map(|r| content.extrapolated - r.bound).collect();
        assert!(gaps.iter().all(|g| *g > 0.0));
        assert!(gaps.windows(2).all(|p| p[1] < p[0]));
        assert!(rec.rows.iter().all(|r| r.containment_holds && r.bm_holds));
    }

    #[test]
    fn coarea_examples() {
        let w = WeightSpec::one(2);
        let r2 = ConeSpec::whole(2);
        let eu = Gauge::euclidean(2);
        let c = coarea_check(&RadialProfile::cone(1.0), &eu, &w, &r2, 4096, 800).unwrap();
        assert_relative_eq!(c.lhs, PI, max_relative = 1e-5);
        assert!((c.rhs - PI).abs() <= 1e-3 && (c.lhs - c.rhs).abs() <= 3.0 * c.rhs_error + 1e-4);
        let z = coarea_check(&RadialProfile::zero(), &eu, &w, &r2, 4096, 100).unwrap();
        assert_eq!((z.lhs, z.rhs), (0.0, 0.0));
        let rd = Gauge::randers(&[0.5, 0.0]).unwrap();
        let c = coarea_check(&RadialProfile::cone(1.0), &rd, &w, &r2, 4096, 800).unwrap();
        assert!(c.lhs <= c.rhs + 3.0 * c.rhs_error + 1e-4, "{c:?}");
        assert!(RadialProfile::new(vec![(0.0, 1.0), (1.0, 2.0), (2.0, 0.0)]).is_err());
    }
}
