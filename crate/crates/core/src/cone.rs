//! Weighted anisotropic perimeter, weighted volume, asymptotic volume ratio and
//! the isoperimetric quotient inside convex cones with vertex at the origin.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gauge::{directions, Gauge};
use crate::linalg::{compensated_sum, dot, norm, scale};
use crate::mesh::{Facet, Mesh};

/// `ω_N = π^{N/2} / Γ(N/2 + 1)`, the volume of the unit ball in dimension `N`.
pub fn omega_n(n: f64) -> f64 {
    std::f64::consts::PI.powf(0.5 * n) / libm::tgamma(0.5 * n + 1.0)
}

/// Convex cone `{x : ⟨n_j, x⟩ ≥ 0 ∀ j}`; no normals means the whole space.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeSpec {
    pub dim: usize,
    normals: Vec<Vec<f64>>,
    interior: Vec<f64>,
}

const CONE_SAMPLES: usize = 4096;
/// Facets within this fraction of the set diameter of a cone hyperplane lie on `∂Σ`.
pub const BOUNDARY_TOL: f64 = 1e-9;

impl ConeSpec {
    pub fn whole(dim: usize) -> ConeSpec {
        let mut interior = vec![0.0; dim];
        interior[0] = 1.0;
        ConeSpec { dim, normals: Vec::new(), interior }
    }

    /// Normals are rescaled to unit length; the interior must be nonempty.
    pub fn new(dim: usize, normals: Vec<Vec<f64>>) -> Result<ConeSpec> {
        if !(2..=3).contains(&dim) {
            return Err(Error::InvalidArgument(format!("cones are supported in dimension 2 or 3, got {dim}")));
        }
        let mut unit = Vec::with_capacity(normals.len());
        for n in &normals {
            if n.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: n.len() });
            }
            let len = norm(n);
            if !(len > 0.0) || !len.is_finite() {
                return Err(Error::InvalidArgument("cone normals must be nonzero".into()));
            }
            unit.push(scale(n, 1.0 / len));
        }
        if unit.is_empty() {
            return Ok(ConeSpec::whole(dim));
        }
        let interior = directions(dim, CONE_SAMPLES)
            .into_iter()
            .map(|u| {
                let depth = unit.iter().map(|n| dot(n, &u)).fold(f64::INFINITY, f64::min);
                (depth, u)
            })
            .max_by(|a, b| a.0.total_cmp(&b.0))
            .filter(|(depth, _)| *depth > 1e-9)
            .map(|(_, u)| u)
            .ok_or_else(|| Error::InvalidArgument("cone has empty interior".into()))?;
        Ok(ConeSpec { dim, normals: unit, interior })
    }

    pub fn normals(&self) -> &[Vec<f64>] {
        &self.normals
    }

    /// A unit direction strictly inside the cone.
    pub fn interior_direction(&self) -> &[f64] {
        &self.interior
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.normals.iter().all(|n| dot(n, x) >= 0.0)
    }

    /// `min_j ⟨n_j, x⟩`; `+∞` for the whole space.
    pub fn depth(&self, x: &[f64]) -> f64 {
        self.normals.iter().map(|n| dot(n, x)).fold(f64::INFINITY, f64::min)
    }

    /// Random point of `Σ ∩ B(0, radius)` with positive depth.
    pub fn sample_interior<R: Rng>(&self, radius: f64, rng: &mut R) -> Vec<f64> {
        loop {
            let u: Vec<f64> = (0..self.dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let len = norm(&u);
            if !(len > 1e-3 && len <= 1.0) {
                continue;
            }
            let x = scale(&u, radius * rng.gen_range(0.05f64..1.0));
            if self.depth(&x) > 1e-6 * radius {
                return x;
            }
        }
    }
}

/// Named weight families.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightKind {
    One,
    /// `⟨c, x⟩^α` with `c` in the dual cone.
    LinearPower { c: Vec<f64> },
    /// `Π max(x_i, 0)^{a_i}` with `α = Σ a_i`.
    Monomial { exponents: Vec<f64> },
}

/// An `α`-homogeneous weight validated against a cone.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSpec {
    pub alpha: f64,
    pub kind: WeightKind,
    pub dim: usize,
}

const VALIDATION_PAIRS: usize = 10_000;
const VALIDATION_SEED: u64 = 0x5eed_0f_c0e5;

impl WeightSpec {
    pub fn one(dim: usize) -> WeightSpec {
        WeightSpec { alpha: 0.0, kind: WeightKind::One, dim }
    }

    /// Builds the weight and checks homogeneity, positivity and concavity of
    /// `w^{1/α}` on sampled interior points of `cone`.
    pub fn new(alpha: f64, kind: WeightKind, cone: &ConeSpec) -> Result<WeightSpec> {
        let dim = cone.dim;
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::InadmissibleWeight(format!("α must be finite and ≥ 0, got {alpha}")));
        }
        match &kind {
            WeightKind::One if alpha != 0.0 => {
                return Err(Error::InadmissibleWeight("the constant weight has α = 0".into()))
            }
            WeightKind::LinearPower { c } if c.len() != dim => {
                return Err(Error::DimensionMismatch { expected: dim, got: c.len() })
            }
            WeightKind::Monomial { exponents } => {
                if exponents.len() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, got: exponents.len() });
                }
                if exponents.iter().any(|a| !(*a >= 0.0)) {
                    return Err(Error::InadmissibleWeight("monomial exponents must be ≥ 0".into()));
                }
                let sum: f64 = exponents.iter().sum();
                if (sum - alpha).abs() > 1e-12 * alpha.max(1.0) {
                    return Err(Error::InadmissibleWeight(format!(
                        "monomial exponents sum to {sum}, expected α = {alpha}"
                    )));
                }
            }
            _ => {}
        }
        let w = WeightSpec { alpha, kind, dim };
        w.validate(cone)?;
        Ok(w)
    }

    fn validate(&self, cone: &ConeSpec) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(VALIDATION_SEED);
        for _ in 0..VALIDATION_PAIRS {
            let x = cone.sample_interior(1.0, &mut rng);
            let y = cone.sample_interior(1.0, &mut rng);
            let (wx, wy) = (self.eval(&x), self.eval(&y));
            if !(wx > 0.0) || !(wy > 0.0) {
                return Err(Error::InadmissibleWeight(format!("w vanishes at interior point {x:?}")));
            }
            let c = [0.5, 2.0, 10.0][rng.gen_range(0..3)];
            let wc = self.eval(&scale(&x, c));
            if (wc - c.powf(self.alpha) * wx).abs() > 1e-10 * wc.abs() {
                return Err(Error::InadmissibleWeight(format!("w is not {}-homogeneous", self.alpha)));
            }
            if self.alpha > 0.0 {
                let root = |v: f64| v.powf(1.0 / self.alpha);
                let mid: Vec<f64> = x.iter().zip(&y).map(|(a, b)| 0.5 * (a + b)).collect();
                let lhs = root(self.eval(&mid));
                let rhs = 0.5 * (root(wx) + root(wy));
                if lhs < rhs - 1e-10 * rhs.abs() {
                    return Err(Error::InadmissibleWeight(format!("w^(1/α) is not concave between {x:?} and {y:?}")));
                }
            }
        }
        Ok(())
    }

    /// `N = n + α`.
    pub fn n_total(&self) -> f64 {
        self.dim as f64 + self.alpha
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match &self.kind {
            WeightKind::One => 1.0,
            WeightKind::LinearPower { c } => dot(c, x).max(0.0).powf(self.alpha),
            WeightKind::Monomial { exponents } => exponents
                .iter()
                .zip(x)
                .map(|(a, xi)| if *a == 0.0 { 1.0 } else { xi.max(0.0).powf(*a) })
                .product(),
        }
    }

    /// `∫_f w dS`.
    pub fn facet_integral(&self, f: &Facet) -> f64 {
        if let WeightKind::One = self.kind {
            return f.measure;
        }
        match f.vertices.len() {
            2 => self.segment_integral(f),
            3 => self.triangle_integral(f),
            _ => f.measure * self.eval(&f.centroid),
        }
    }

    fn segment_integral(&self, f: &Facet) -> f64 {
        let (a, b) = (&f.vertices[0], &f.vertices[1]);
        if let WeightKind::LinearPower { c } = &self.kind {
            let (sa, sb) = (dot(c, a).max(0.0), dot(c, b).max(0.0));
            let p = self.alpha + 1.0;
            if (sb - sa).abs() <= 1e-9 * sa.max(sb) {
                return f.measure * (0.5 * (sa + sb)).powf(self.alpha);
            }
            return f.measure * (sb.powf(p) - sa.powf(p)) / (p * (sb - sa));
        }
        let s: f64 = GAUSS_5
            .iter()
            .map(|(t, wt)| {
                let u = 0.5 * (1.0 + t);
                let x: Vec<f64> = a.iter().zip(b).map(|(p, q)| p + u * (q - p)).collect();
                wt * self.eval(&x)
            })
            .sum();
        0.5 * f.measure * s
    }

    fn triangle_integral(&self, f: &Facet) -> f64 {
        let v = &f.vertices;
        if let WeightKind::LinearPower { c } = &self.kind {
            if self.alpha.fract() == 0.0 && self.alpha <= 12.0 {
                let k = self.alpha as u32;
                let s = [dot(c, &v[0]).max(0.0), dot(c, &v[1]).max(0.0), dot(c, &v[2]).max(0.0)];
                // ∫_T ℓ^k = 2|T| k!/(k+2)! Σ_{i+j+l=k} s_a^i s_b^j s_c^l
                let mut h = 0.0;
                for i in 0..=k {
                    for j in 0..=k - i {
                        h += s[0].powi(i as i32) * s[1].powi(j as i32) * s[2].powi((k - i - j) as i32);
                    }
                }
                let kf = k as f64;
                return 2.0 * f.measure * h / ((kf + 1.0) * (kf + 2.0));
            }
        }
        let s: f64 = DUNAVANT_5
            .iter()
            .map(|(l, wt)| {
                let x: Vec<f64> = (0..v[0].len()).map(|d| l[0] * v[0][d] + l[1] * v[1][d] + l[2] * v[2][d]).collect();
                wt * self.eval(&x)
            })
            .sum();
        f.measure * s
    }
}

const GAUSS_5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664_0, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664_0, 0.236_926_885_056_189_1),
];

const D5_A1: f64 = 0.059_715_871_789_770;
const D5_B1: f64 = 0.470_142_064_105_115;
const D5_W1: f64 = 0.132_394_152_788_506;
const D5_A2: f64 = 0.797_426_985_353_087;
const D5_B2: f64 = 0.101_286_507_323_456;
const D5_W2: f64 = 0.125_939_180_544_827;

/// Degree-5 symmetric rule on the triangle, barycentric points and weights.
const DUNAVANT_5: [([f64; 3], f64); 7] = [
    ([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], 0.225),
    ([D5_A1, D5_B1, D5_B1], D5_W1),
    ([D5_B1, D5_A1, D5_B1], D5_W1),
    ([D5_B1, D5_B1, D5_A1], D5_W1),
    ([D5_A2, D5_B2, D5_B2], D5_W2),
    ([D5_B2, D5_A2, D5_B2], D5_W2),
    ([D5_B2, D5_B2, D5_A2], D5_W2),
];

/// `E ∩ Σ`; an empty intersection gives an empty mesh.
pub fn clip(e: &Mesh, cone: &ConeSpec) -> Mesh {
    cone.normals().iter().fold(e.clone(), |m, n| m.clip_halfspace(n, 0.0))
}

/// Whether every vertex of `f` lies within `tol` of one cone hyperplane.
fn on_cone_boundary(f: &Facet, cone: &ConeSpec, tol: f64) -> bool {
    cone.normals()
        .iter()
        .any(|n| f.vertices.iter().all(|v| dot(n, v).abs() <= tol))
}

/// Relative perimeter `∫_{∂(E∩Σ) ∖ ∂Σ} H(ν) w dS` of `E ∩ Σ`.
pub fn weighted_perimeter(e: &Mesh, h: &Gauge, w: &WeightSpec, cone: &ConeSpec) -> Result<f64> {
    e.require_closed()?;
    let m = clip(e, cone);
    let tol = BOUNDARY_TOL * m.diameter();
    let terms = m
        .facets
        .iter()
        .filter(|f| !on_cone_boundary(f, cone, tol))
        .map(|f| Ok(h.eval(&f.normal)? * w.facet_integral(f)))
        .collect::<Result<Vec<f64>>>()?;
    Ok(compensated_sum(terms))
}

/// `∫_{E∩Σ} w dx` via `(1/N) Σ ⟨x, ν⟩ ∫_f w dS`, using `div(w x) = N w`.
pub fn weighted_volume(e: &Mesh, w: &WeightSpec, cone: &ConeSpec) -> Result<f64> {
    e.require_closed()?;
    let m = clip(e, cone);
    let n = w.n_total();
    Ok(compensated_sum(m.facets.iter().map(|f| dot(&f.centroid, &f.normal) * w.facet_integral(f))) / n)
}

/// `AVR = w(W ∩ Σ) / ω_N`.
pub fn avr(h: &Gauge, w: &WeightSpec, cone: &ConeSpec, resolution: usize) -> Result<f64> {
    let wulff = h.wulff(resolution)?;
    let v = weighted_volume(&wulff, w, cone)? / omega_n(w.n_total());
    if !(v > 0.0) {
        return Err(Error::DegenerateAvr(v));
    }
    Ok(v)
}

/// Quantities entering the isoperimetric quotient of `E ∩ Σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuotientParts {
    pub perimeter: f64,
    pub volume: f64,
    pub avr: f64,
    pub omega: f64,
    pub n: f64,
    pub q: f64,
}

/// `Q = P / (N (ω_N AVR)^{1/N} m^{(N−1)/N})`, with AVR computed at `resolution`.
pub fn iso_quotient(e: &Mesh, h: &Gauge, w: &WeightSpec, cone: &ConeSpec, resolution: usize) -> Result<QuotientParts> {
    let a = avr(h, w, cone, resolution)?;
    iso_quotient_with_avr(e, h, w, cone, a)
}

pub fn iso_quotient_with_avr(e: &Mesh, h: &Gauge, w: &WeightSpec, cone: &ConeSpec, avr: f64) -> Result<QuotientParts> {
    let n = w.n_total();
    let perimeter = weighted_perimeter(e, h, w, cone)?;
    let volume = weighted_volume(e, w, cone)?;
    if !(volume > 0.0) {
        return Err(Error::EmptySet);
    }
    let omega = omega_n(n);
    let q = perimeter / (n * (omega * avr).powf(1.0 / n) * volume.powf((n - 1.0) / n));
    Ok(QuotientParts { perimeter, volume, avr, omega, n, q })
}
