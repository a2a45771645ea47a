//! Translation-invariant Finsler gauges on Rⁿ (n = 2, 3).
//!
//! On such a space `d(x, y) = F(y − x)`, geodesics are segments and the
//! forward ball `B⁺(x, r)` is `x + r·{F ≤ 1}`.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hull::{hull_2d, hull_3d, Hull3};
use crate::linalg::{axpy, cross3, dot, norm, normalize, scale, sub};
use crate::mesh::Mesh;
use crate::numerics::{golden_section_max, nelder_mead};

pub const DEFAULT_DIRECTIONS_2D: usize = 4096;
pub const DEFAULT_DIRECTIONS_3D: usize = 8192;

/// Convex polytope containing the origin in its interior, stored with its
/// facet inequalities `⟨a_j, x⟩ ≤ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    pub vertices: Vec<Vec<f64>>,
    pub facet_normals: Vec<Vec<f64>>,
}

impl Polytope {
    pub fn new(points: &[Vec<f64>]) -> Result<Polytope> {
        let dim = points.first().map_or(0, Vec::len);
        let (vertices, planes): (Vec<Vec<f64>>, Vec<(Vec<f64>, f64)>) = match dim {
            2 => {
                let ring = hull_2d(points);
                if ring.len() < 3 {
                    return Err(Error::InvalidGauge("polytope has empty interior".into()));
                }
                let k = ring.len();
                let planes = (0..k)
                    .map(|i| {
                        let (a, b) = (&ring[i], &ring[(i + 1) % k]);
                        let n = normalize(&[b[1] - a[1], a[0] - b[0]]);
                        let c = dot(&n, a);
                        (n, c)
                    })
                    .collect();
                (ring, planes)
            }
            3 => {
                let Hull3 { vertices, triangles } = hull_3d(points)?;
                let planes = triangles
                    .iter()
                    .map(|t| {
                        let (a, b, c) = (&vertices[t[0]], &vertices[t[1]], &vertices[t[2]]);
                        let n = normalize(&cross3(&sub(b, a), &sub(c, a)));
                        let off = dot(&n, a);
                        (n, off)
                    })
                    .collect();
                (vertices, planes)
            }
            _ => return Err(Error::InvalidGauge(format!("unsupported dimension {dim}"))),
        };
        let scale_ref = vertices.iter().map(|v| norm(v)).fold(0.0, f64::max);
        let mut facet_normals = Vec::with_capacity(planes.len());
        for (n, c) in planes {
            if c <= 1e-12 * scale_ref {
                return Err(Error::InvalidGauge(
                    "origin must lie in the interior of the polytope".into(),
                ));
            }
            facet_normals.push(scale(&n, 1.0 / c));
        }
        Ok(Polytope { vertices, facet_normals })
    }

    /// Minkowski functional `min{t ≥ 0 : v ∈ tP}`.
    pub fn gauge(&self, v: &[f64]) -> f64 {
        self.facet_normals
            .iter()
            .map(|a| dot(a, v))
            .fold(0.0, f64::max)
    }

    /// Support function `max ⟨v, p⟩` over vertices.
    pub fn support(&self, v: &[f64]) -> f64 {
        self.vertices
            .iter()
            .map(|p| dot(p, v))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn is_centrally_symmetric(&self) -> bool {
        let tol = 1e-12 * self.vertices.iter().map(|v| norm(v)).fold(0.0, f64::max);
        self.vertices.iter().all(|v| {
            self.vertices
                .iter()
                .any(|w| v.iter().zip(w).all(|(a, b)| (a + b).abs() <= tol))
        })
    }
}

/// Named analytic gauge families available through configuration files.
#[derive(Debug, Clone, PartialEq)]
pub enum CustomFamily {
    /// `‖v‖_p`, smooth and strictly convex for `1 < p < ∞`.
    Lp { p: f64 },
    /// `sqrt(Σ (v_i / a_i)²)`.
    Elliptic { semi_axes: Vec<f64> },
    /// `‖v‖_p + ⟨b, v⟩` with `‖b‖_q < 1`; irreversible.
    LpRanders { p: f64, drift: Vec<f64> },
}

impl CustomFamily {
    fn eval(&self, v: &[f64]) -> f64 {
        match self {
            CustomFamily::Lp { p } => lp_norm(v, *p),
            CustomFamily::Elliptic { semi_axes } => v
                .iter()
                .zip(semi_axes)
                .map(|(x, a)| (x / a) * (x / a))
                .sum::<f64>()
                .sqrt(),
            CustomFamily::LpRanders { p, drift } => lp_norm(v, *p) + dot(drift, v),
        }
    }

    fn gradient(&self, v: &[f64]) -> Vec<f64> {
        match self {
            CustomFamily::Lp { p } => lp_gradient(v, *p),
            CustomFamily::Elliptic { semi_axes } => {
                let f = self.eval(v);
                v.iter().zip(semi_axes).map(|(x, a)| x / (a * a * f)).collect()
            }
            CustomFamily::LpRanders { p, drift } => axpy(&lp_gradient(v, *p), 1.0, drift),
        }
    }

    fn smooth(&self) -> bool {
        match self {
            CustomFamily::Lp { p } | CustomFamily::LpRanders { p, .. } => *p > 1.0 && p.is_finite(),
            CustomFamily::Elliptic { .. } => true,
        }
    }
}

fn lp_norm(v: &[f64], p: f64) -> f64 {
    let m = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if m == 0.0 {
        return 0.0;
    }
    m * v.iter().map(|x| (x.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
}

fn lp_gradient(v: &[f64], p: f64) -> Vec<f64> {
    let f = lp_norm(v, p);
    v.iter()
        .map(|x| x.signum() * (x.abs() / f).powf(p - 1.0))
        .collect()
}

/// Unit sphere of a gauge, sampled along a direction set; used to take
/// numerical duals.
#[derive(Debug, Clone)]
pub struct SampledSphere {
    primal: Box<Gauge>,
    /// Boundary points `u / F(u)` of the primal unit ball.
    points: Arc<Vec<Vec<f64>>>,
}

impl PartialEq for SampledSphere {
    fn eq(&self, other: &Self) -> bool {
        self.primal == other.primal && self.points.len() == other.points.len()
    }
}

impl SampledSphere {
    fn new(primal: Gauge, resolution: usize) -> Result<SampledSphere> {
        let points = directions(primal.dim, resolution)
            .into_iter()
            .map(|u| {
                let f = primal.eval_unchecked(&u);
                if f <= 0.0 || !f.is_finite() {
                    Err(Error::DegenerateGauge { value: f })
                } else {
                    Ok(scale(&u, 1.0 / f))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SampledSphere { primal: Box::new(primal), points: Arc::new(points) })
    }

    /// Maximizer of `⟨ω, p⟩` over the primal unit ball, with the maximum.
    fn argmax(&self, omega: &[f64]) -> (Vec<f64>, f64) {
        let (i, _) = self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| (i, dot(omega, p)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        let primal = &self.primal;
        let on_sphere = |u: &[f64]| scale(u, 1.0 / primal.eval_unchecked(u));
        if primal.dim == 2 {
            let k = self.points.len() as f64;
            let step = 2.0 * PI / k;
            let theta0 = 2.0 * PI * i as f64 / k;
            let obj = |t: f64| {
                let u = [t.cos(), t.sin()];
                dot(omega, &u) / primal.eval_unchecked(&u)
            };
            let (t, v) = golden_section_max(obj, theta0 - step, theta0 + step, 1e-13);
            (on_sphere(&[t.cos(), t.sin()]), v)
        } else {
            let u0 = normalize(&self.points[i]);
            let (e1, e2) = tangent_basis(&u0);
            let chart = |st: &[f64]| {
                normalize(&axpy(&axpy(&u0, st[0], &e1), st[1], &e2))
            };
            let obj = |st: &[f64]| {
                let u = chart(st);
                -dot(omega, &u) / primal.eval_unchecked(&u)
            };
            let spacing = (4.0 * PI / self.points.len() as f64).sqrt();
            let (st, v) = nelder_mead(obj, &[0.0, 0.0], spacing, 1e-18, 400);
            (on_sphere(&chart(&st)), -v)
        }
    }
}

fn tangent_basis(u: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let helper = if u[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let e1 = normalize(&cross3(u, &helper));
    let e2 = cross3(u, &e1).to_vec();
    (e1, e2)
}

#[derive(Debug, Clone, PartialEq)]
pub enum GaugeKind {
    Euclidean,
    /// Minkowski functional of a polytope.
    Polytopal(Polytope),
    /// Support function of a polytope (dual of `Polytopal`).
    Support(Polytope),
    /// `|v| + ⟨b, v⟩`, `|b| < 1`.
    Randers { drift: Vec<f64> },
    /// Dual of the Randers gauge with the same drift, in closed form.
    RandersDual { drift: Vec<f64> },
    Custom(CustomFamily),
    /// Numerical dual of another gauge.
    SampledDual(SampledSphere),
}

/// Positively 1-homogeneous convex function on Rⁿ, positive away from 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Gauge {
    pub dim: usize,
    pub kind: GaugeKind,
    /// Direction count used by sampled duals and sampled reversibility.
    pub resolution: usize,
}

impl Gauge {
    fn with_kind(dim: usize, kind: GaugeKind) -> Gauge {
        Gauge { dim, kind, resolution: default_directions(dim) }
    }

    pub fn euclidean(dim: usize) -> Gauge {
        Gauge::with_kind(dim, GaugeKind::Euclidean)
    }

    /// Gauge whose unit ball is the convex hull of `vertices`.
    pub fn polytopal(vertices: &[Vec<f64>]) -> Result<Gauge> {
        let p = Polytope::new(vertices)?;
        Ok(Gauge::with_kind(p.vertices[0].len(), GaugeKind::Polytopal(p)))
    }

    /// Support function of the convex hull of `points`.
    pub fn support(points: &[Vec<f64>]) -> Result<Gauge> {
        let p = Polytope::new(points)?;
        Ok(Gauge::with_kind(p.vertices[0].len(), GaugeKind::Support(p)))
    }

    pub fn randers(drift: &[f64]) -> Result<Gauge> {
        if norm(drift) >= 1.0 || drift.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidGauge(format!("randers drift must satisfy |b| < 1, got {drift:?}")));
        }
        Ok(Gauge::with_kind(drift.len(), GaugeKind::Randers { drift: drift.to_vec() }))
    }

    pub fn custom(dim: usize, family: CustomFamily) -> Result<Gauge> {
        match &family {
            CustomFamily::Lp { p } if *p < 1.0 || p.is_nan() => {
                return Err(Error::InvalidGauge(format!("lp exponent must be ≥ 1, got {p}")))
            }
            CustomFamily::Elliptic { semi_axes } if semi_axes.len() != dim || semi_axes.iter().any(|a| *a <= 0.0) => {
                return Err(Error::InvalidGauge("elliptic semi-axes must be positive, one per dimension".into()))
            }
            CustomFamily::LpRanders { p, drift } => {
                if *p <= 1.0 || drift.len() != dim {
                    return Err(Error::InvalidGauge("lp-randers needs p > 1 and a drift per dimension".into()));
                }
                let q = *p / (*p - 1.0);
                if lp_norm(drift, q) >= 1.0 {
                    return Err(Error::InvalidGauge("lp-randers drift must satisfy ‖b‖_q < 1".into()));
                }
            }
            _ => {}
        }
        Ok(Gauge::with_kind(dim, GaugeKind::Custom(family)))
    }

    pub fn with_resolution(mut self, resolution: usize) -> Gauge {
        self.resolution = resolution.max(8);
        if let GaugeKind::SampledDual(s) = &self.kind {
            // rebuild the sample at the new resolution
            let primal = (*s.primal).clone();
            if let Ok(s) = SampledSphere::new(primal, self.resolution) {
                self.kind = GaugeKind::SampledDual(s);
            }
        }
        self
    }

    fn check_dim(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        Ok(())
    }

    /// `F(v)`.
    pub fn eval(&self, v: &[f64]) -> Result<f64> {
        self.check_dim(v)?;
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("vector has non-finite entries".into()));
        }
        Ok(self.eval_unchecked(v))
    }

    pub(crate) fn eval_unchecked(&self, v: &[f64]) -> f64 {
        match &self.kind {
            GaugeKind::Euclidean => norm(v),
            GaugeKind::Polytopal(p) => p.gauge(v),
            GaugeKind::Support(p) => p.support(v),
            GaugeKind::Randers { drift } => norm(v) + dot(drift, v),
            GaugeKind::RandersDual { drift } => randers_dual_eval(drift, v),
            GaugeKind::Custom(c) => c.eval(v),
            GaugeKind::SampledDual(s) => {
                if v.iter().all(|x| *x == 0.0) {
                    0.0
                } else {
                    s.argmax(v).1
                }
            }
        }
    }

    /// Dual gauge `F*(ω) = sup{⟨ω, v⟩ : F(v) ≤ 1}`.
    pub fn dual(&self) -> Result<Gauge> {
        let kind = match &self.kind {
            GaugeKind::Euclidean => GaugeKind::Euclidean,
            GaugeKind::Polytopal(p) => GaugeKind::Support(p.clone()),
            GaugeKind::Support(p) => GaugeKind::Polytopal(p.clone()),
            GaugeKind::Randers { drift } => GaugeKind::RandersDual { drift: drift.clone() },
            GaugeKind::RandersDual { drift } => GaugeKind::Randers { drift: drift.clone() },
            GaugeKind::Custom(_) => GaugeKind::SampledDual(SampledSphere::new(self.clone(), self.resolution)?),
            GaugeKind::SampledDual(s) => return Ok((*s.primal).clone()),
        };
        Ok(Gauge { dim: self.dim, kind, resolution: self.resolution })
    }

    /// Smooth and strictly convex away from the origin.
    pub fn is_smooth(&self) -> bool {
        match &self.kind {
            GaugeKind::Polytopal(_) | GaugeKind::Support(_) => false,
            GaugeKind::Custom(c) => c.smooth(),
            GaugeKind::SampledDual(s) => s.primal.is_smooth(),
            _ => true,
        }
    }

    /// Gradient of `F` at `v ≠ 0`; for polytopes an element of the subdifferential.
    pub fn gradient(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(v)?;
        let n = norm(v);
        if n == 0.0 {
            return Err(Error::InvalidArgument("gradient at the origin".into()));
        }
        Ok(match &self.kind {
            GaugeKind::Euclidean => scale(v, 1.0 / n),
            GaugeKind::Randers { drift } => axpy(&scale(v, 1.0 / n), 1.0, drift),
            GaugeKind::RandersDual { drift } => randers_dual_gradient(drift, v),
            GaugeKind::Polytopal(p) => p
                .facet_normals
                .iter()
                .max_by(|a, b| dot(a, v).total_cmp(&dot(b, v)))
                .cloned()
                .unwrap(),
            GaugeKind::Support(p) => p
                .vertices
                .iter()
                .max_by(|a, b| dot(a, v).total_cmp(&dot(b, v)))
                .cloned()
                .unwrap(),
            GaugeKind::Custom(c) => c.gradient(v),
            // Danskin: the maximizer on the primal unit sphere
            GaugeKind::SampledDual(s) => s.argmax(v).0,
        })
    }

    /// Legendre transform: the unique `v` with `F(v) = F*(ω)` and `⟨ω, v⟩ = F*(ω)²`.
    pub fn legendre(&self, omega: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(omega)?;
        if !self.is_smooth() {
            return Err(Error::NotStrictlyConvex);
        }
        if omega.iter().all(|x| *x == 0.0) {
            return Ok(vec![0.0; self.dim]);
        }
        let dual = self.dual()?;
        let fstar = dual.eval_unchecked(omega);
        // ∇F*(ω) lies on {F = 1} and pairs with ω to F*(ω) (Euler)
        let v = scale(&dual.gradient(omega)?, fstar);
        let residual = ((self.eval_unchecked(&v) - fstar).abs()
            + (dot(omega, &v) - fstar * fstar).abs() / fstar.max(f64::MIN_POSITIVE))
            / fstar.max(f64::MIN_POSITIVE);
        if residual > 1e-10 || !residual.is_finite() {
            return Err(Error::NonConvergence { tolerance: 1e-10, residual });
        }
        Ok(v)
    }

    /// Reversibility constant `Λ_F = sup F(v) / F(−v)`.
    pub fn reversibility(&self) -> f64 {
        match &self.kind {
            GaugeKind::Euclidean => 1.0,
            GaugeKind::Randers { drift } | GaugeKind::RandersDual { drift } => {
                let b = norm(drift);
                (1.0 + b) / (1.0 - b)
            }
            // Λ_F = Λ_{F*}, so both polytope kinds reduce to the Minkowski functional
            GaugeKind::Polytopal(p) | GaugeKind::Support(p) => {
                if p.is_centrally_symmetric() {
                    1.0
                } else if self.dim == 2 {
                    // the ratio is quasi-linear on each cone spanned by
                    // consecutive vertices of P and −P, so the sup sits on one of them
                    p.vertices
                        .iter()
                        .flat_map(|v| [v.clone(), scale(v, -1.0)])
                        .map(|v| p.gauge(&v) / p.gauge(&scale(&v, -1.0)))
                        .fold(1.0, f64::max)
                } else {
                    self.sampled_reversibility()
                }
            }
            GaugeKind::Custom(CustomFamily::Lp { .. } | CustomFamily::Elliptic { .. }) => 1.0,
            GaugeKind::Custom(_) | GaugeKind::SampledDual(_) => self.sampled_reversibility(),
        }
    }

    fn sampled_reversibility(&self) -> f64 {
        let ratio = |u: &[f64]| self.eval_unchecked(u) / self.eval_unchecked(&scale(u, -1.0));
        let dirs = directions(self.dim, self.resolution);
        let (i, best) = dirs
            .iter()
            .enumerate()
            .map(|(i, u)| (i, ratio(u)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        let refined = if self.dim == 2 {
            let step = 2.0 * PI / dirs.len() as f64;
            let t0 = 2.0 * PI * i as f64 / dirs.len() as f64;
            golden_section_max(|t| ratio(&[t.cos(), t.sin()]), t0 - step, t0 + step, 1e-12).1
        } else {
            let u0 = dirs[i].clone();
            let (e1, e2) = tangent_basis(&u0);
            let obj = |st: &[f64]| -ratio(&normalize(&axpy(&axpy(&u0, st[0], &e1), st[1], &e2)));
            let spacing = (4.0 * PI / dirs.len() as f64).sqrt();
            -nelder_mead(obj, &[0.0, 0.0], spacing, 1e-16, 400).1
        };
        best.max(refined).max(1.0)
    }

    /// Slope of a function with differential `df`: `F*(−df)`.
    pub fn slope(&self, df: &[f64]) -> Result<f64> {
        self.check_dim(df)?;
        if df.iter().all(|x| *x == 0.0) {
            return Ok(0.0);
        }
        self.dual()?.eval(&scale(df, -1.0))
    }

    /// Mesh of the closed forward ball `{y : F(y − center) ≤ r}`.
    ///
    /// Vertices are `center + r·u/F(u)` over a quasi-uniform direction set of
    /// size `resolution`. Polytope balls are returned exactly.
    pub fn forward_ball(&self, center: &[f64], r: f64, resolution: usize) -> Result<Mesh> {
        self.check_dim(center)?;
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
        }
        if resolution < 8 {
            return Err(Error::InvalidArgument(format!("resolution must be ≥ 8, got {resolution}")));
        }
        let place = |p: &[f64]| axpy(center, r, p);
        let exact_vertices = match &self.kind {
            GaugeKind::Polytopal(p) => Some(p.vertices.clone()),
            GaugeKind::Support(p) => Some(p.facet_normals.clone()),
            _ => None,
        };
        if let Some(verts) = exact_vertices {
            let placed: Vec<Vec<f64>> = verts.iter().map(|v| place(v)).collect();
            return Ok(if self.dim == 2 {
                Mesh::from_polygon(&hull_2d(&placed))
            } else {
                let h = hull_3d(&placed)?;
                Mesh::from_triangles(&h.vertices, &h.triangles)
            });
        }
        let boundary = |u: &[f64]| -> Result<Vec<f64>> {
            let f = self.eval_unchecked(u);
            if f <= 0.0 || !f.is_finite() {
                return Err(Error::DegenerateGauge { value: f });
            }
            Ok(place(&scale(u, 1.0 / f)))
        };
        if self.dim == 2 {
            let ring = directions(2, resolution)
                .iter()
                .map(|u| boundary(u))
                .collect::<Result<Vec<_>>>()?;
            Ok(Mesh::from_polygon(&ring))
        } else {
            let sphere = sphere_triangulation(resolution)?;
            let verts = sphere
                .vertices
                .iter()
                .map(|u| boundary(u))
                .collect::<Result<Vec<_>>>()?;
            Ok(Mesh::from_triangles(&verts, &sphere.triangles))
        }
    }

    /// Wulff shape of `self` seen as an integrand on normals: the unit ball of
    /// the dual gauge.
    pub fn wulff(&self, resolution: usize) -> Result<Mesh> {
        self.dual()?.forward_ball(&vec![0.0; self.dim], 1.0, resolution)
    }
}

fn randers_dual_eval(drift: &[f64], omega: &[f64]) -> f64 {
    // smallest t with |ω − t b| ≤ t
    let b2 = dot(drift, drift);
    let wb = dot(omega, drift);
    let w2 = dot(omega, omega);
    let disc = (wb * wb + (1.0 - b2) * w2).sqrt();
    if wb <= 0.0 {
        (disc - wb) / (1.0 - b2)
    } else {
        // rationalized to avoid cancellation
        w2 / (disc + wb)
    }
}

fn randers_dual_gradient(drift: &[f64], omega: &[f64]) -> Vec<f64> {
    let t = randers_dual_eval(drift, omega);
    let b2 = dot(drift, drift);
    let denom = t * (1.0 - b2) + dot(omega, drift);
    scale(&axpy(omega, -t, drift), 1.0 / denom)
}

pub fn default_directions(dim: usize) -> usize {
    if dim == 3 {
        DEFAULT_DIRECTIONS_3D
    } else {
        DEFAULT_DIRECTIONS_2D
    }
}

/// Quasi-uniform unit directions: a uniform angle grid in the plane, a
/// Fibonacci lattice on the sphere.
pub fn directions(dim: usize, count: usize) -> Vec<Vec<f64>> {
    match dim {
        2 => (0..count)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / count as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        3 => {
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|k| {
                    let z = 1.0 - (2.0 * k as f64 + 1.0) / count as f64;
                    let rho = (1.0 - z * z).sqrt();
                    let phi = golden * k as f64;
                    vec![rho * phi.cos(), rho * phi.sin(), z]
                })
                .collect()
        }
        _ => Vec::new(),
    }
}

/// Triangulation of a Fibonacci point set on the unit sphere (its convex hull).
pub fn sphere_triangulation(count: usize) -> Result<Hull3> {
    use std::collections::HashMap;
    use std::sync::Mutex;
    static CACHE: std::sync::OnceLock<Mutex<HashMap<usize, Hull3>>> = std::sync::OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(h) = cache.lock().unwrap().get(&count) {
        return Ok(h.clone());
    }
    let dirs = directions(3, count);
    let h = hull_3d(&dirs)?;
    // the hull may perturb coordinates; recover each vertex's lattice index from z
    let remap = |v: &Vec<f64>| {
        let k = ((1.0 - v[2]) * count as f64 / 2.0 - 0.5).round();
        (k.max(0.0) as usize).min(count - 1)
    };
    let triangles = h
        .triangles
        .iter()
        .map(|t| [remap(&h.vertices[t[0]]), remap(&h.vertices[t[1]]), remap(&h.vertices[t[2]])])
        .collect();
    let out = Hull3 { vertices: dirs, triangles };
    cache.lock().unwrap().insert(count, out.clone());
    Ok(out)
}
