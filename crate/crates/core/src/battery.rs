//! Acceptance battery: named suites of pass/fail criteria, each reporting the
//! measured value, the bound it is compared against and the tolerance.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bminkowski::{
    bm_slack, content_oracle, default_ladder, main_inequality_trace, minkowski_content, minkowski_content_voxel,
    coarea_check, ConvexBody, RadialProfile, VOXEL_GRID,
};
use crate::cone::{avr, clip, iso_quotient, iso_quotient_with_avr, omega_n, weighted_perimeter, ConeSpec, WeightKind, WeightSpec};
use crate::error::{Error, Result};
use crate::gauge::Gauge;
use crate::mesh::Mesh;
use crate::model1d::{
    measure1d, monotonia_gap, perimeter1d, profile, random_cd_density, random_interval_set, residual, residual_v,
    Density1D, IntervalSet, LeftCost, OneDimFinsler,
};
use crate::shapes::{best_fit_wulff_distance, ellipse, inradius, random_convex_points, ring_of};

/// How `measured` is compared with `bound`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `measured ≤ bound + tolerance`.
    AtMost,
    /// `measured ≥ bound − tolerance`.
    AtLeast,
    /// `measured > bound`.
    Above,
    /// `|measured − bound| ≤ tolerance`.
    Within,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub suite: String,
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub tolerance: f64,
    pub relation: Relation,
    /// Number of instances aggregated into `measured`.
    pub count: usize,
    pub passed: bool,
}

impl Criterion {
    fn new(suite: Suite, name: &str, measured: f64, relation: Relation, bound: f64, tolerance: f64, count: usize) -> Criterion {
        let passed = match relation {
            Relation::AtMost => measured <= bound + tolerance,
            Relation::AtLeast => measured >= bound - tolerance,
            Relation::Above => measured > bound,
            Relation::Within => (measured - bound).abs() <= tolerance,
        };
        Criterion { suite: suite.to_string(), name: name.to_string(), measured, bound, tolerance, relation, count, passed }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.relation {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
            Relation::Above => ">",
            Relation::Within => "~=",
        };
        write!(
            f,
            "{} {}/{}: measured {:.6e} {op} {:.6e} (tol {:.1e}, n = {})",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite,
            self.name,
            self.measured,
            self.bound,
            self.tolerance,
            self.count
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Profiles,
    Residuals,
    Wulff,
    Bm,
    Content,
    Coarea,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Profiles, Suite::Residuals, Suite::Wulff, Suite::Bm, Suite::Content, Suite::Coarea];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Profiles => "profiles",
            Suite::Residuals => "residuals",
            Suite::Wulff => "wulff",
            Suite::Bm => "bm",
            Suite::Content => "content",
            Suite::Coarea => "coarea",
        };
        f.write_str(s)
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.to_string() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

/// Parses `"all"` or a single suite name.
pub fn parse_suites(name: &str) -> Result<Vec<Suite>> {
    if name == "all" {
        Ok(Suite::ALL.to_vec())
    } else {
        Ok(vec![name.parse()?])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub seed: u64,
    pub suites: Vec<Suite>,
    pub criteria: Vec<Criterion>,
    pub failures: usize,
    pub passed: bool,
}

/// Runs `suites` concurrently; criteria come back in suite order.
pub fn run(suites: &[Suite], seed: u64) -> Result<Summary> {
    let results: Vec<Vec<Criterion>> = suites.par_iter().map(|s| run_suite(*s, seed)).collect::<Result<_>>()?;
    let criteria: Vec<Criterion> = results.into_iter().flatten().collect();
    let failures = criteria.iter().filter(|c| !c.passed).count();
    Ok(Summary { seed, suites: suites.to_vec(), criteria, failures, passed: failures == 0 })
}

pub fn run_suite(suite: Suite, seed: u64) -> Result<Vec<Criterion>> {
    let mut out = Vec::new();
    match suite {
        Suite::Profiles => {
            out.extend(milman_bound(seed)?);
            out.extend(small_volume()?);
            out.extend(monotonia()?);
        }
        Suite::Residuals => {
            out.extend(zero_residual()?);
            out.extend(irreversibility(seed)?);
        }
        Suite::Wulff => {
            out.extend(wulff_equality(WULFF_RESOLUTION)?);
            out.extend(sharpness(seed)?);
        }
        Suite::Bm => {
            out.extend(brunn_minkowski(seed)?);
            out.extend(main_trace()?);
        }
        Suite::Content => out.extend(content_vs_perimeter(seed)?),
        Suite::Coarea => out.extend(coarea()?),
    }
    Ok(out)
}

/// `count` independent generators derived from the master seed on a per-group stream.
pub fn instance_rngs(seed: u64, stream: u64, count: usize) -> Vec<ChaCha8Rng> {
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    master.set_stream(stream);
    (0..count).map(|_| ChaCha8Rng::seed_from_u64(master.next_u64())).collect()
}

fn min_of(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(f64::INFINITY, f64::min)
}

fn max_of(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

pub const CORPUS_1D: usize = 200;
const DIMENSIONS_1D: [f64; 3] = [2.0, 2.5, 3.5];

/// Random CD(0,N) density, interval set with `0 < v < 1`, and the set's volume.
fn corpus_instance(rng: &mut ChaCha8Rng) -> (f64, f64, Density1D, IntervalSet, f64) {
    loop {
        let n = DIMENSIONS_1D[rng.gen_range(0..DIMENSIONS_1D.len())];
        let dp = rng.gen_range(0.5..2.0);
        let h = random_cd_density(n, dp, rng);
        let e = random_interval_set(dp, rng);
        let v = measure1d(&h, &e);
        if v > 0.0 && v < 1.0 {
            return (n, dp, h, e, v);
        }
    }
}

/// Reversible perimeter against the sharp profile on a random corpus.
pub fn milman_bound(seed: u64) -> Result<Vec<Criterion>> {
    let margins = instance_rngs(seed, 11, CORPUS_1D)
        .into_par_iter()
        .map(|mut rng| {
            let (n, dp, h, e, v) = corpus_instance(&mut rng);
            Ok(perimeter1d(&OneDimFinsler::reversible(h), &e) - profile(n, dp, v)?.value)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(vec![Criterion::new(Suite::Profiles, "milman_profile_bound", min_of(margins), Relation::AtLeast, 0.0, 1e-6, CORPUS_1D)])
}

pub const SMALL_VOLUMES: [f64; 4] = [1e-1, 1e-2, 1e-3, 1e-4];

/// `I_{N,1}(v) / (N v^{1−1/N})` against the window `[1 − 5 v^{1/N}, 1]`.
pub fn small_volume() -> Result<Vec<Criterion>> {
    let (mut lower, mut upper, mut step) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY);
    for n in [2.0, 3.0] {
        let mut prev = f64::NEG_INFINITY;
        for v in SMALL_VOLUMES {
            let ratio = profile(n, 1.0, v)?.value / (n * v.powf(1.0 - 1.0 / n));
            lower = lower.min(ratio - (1.0 - 5.0 * v.powf(1.0 / n)));
            upper = upper.max(ratio);
            step = step.min(ratio - prev);
            prev = ratio;
        }
    }
    let count = 2 * SMALL_VOLUMES.len();
    Ok(vec![
        Criterion::new(Suite::Profiles, "small_volume_lower_window", lower, Relation::AtLeast, 0.0, 0.0, count),
        Criterion::new(Suite::Profiles, "small_volume_upper_window", upper, Relation::AtMost, 1.0, 1e-12, count),
        Criterion::new(Suite::Profiles, "small_volume_monotone", step, Relation::AtLeast, 0.0, 0.0, count),
    ])
}

pub const MONOTONIA_GRID: usize = 4000;

pub fn monotonia() -> Result<Vec<Criterion>> {
    let g = |eta: f64| monotonia_gap(2.0, eta, MONOTONIA_GRID);
    let (g0, g1, g2, g3) = (g(0.0)?, g(0.1)?, g(0.01)?, g(0.001)?);
    Ok(vec![
        Criterion::new(Suite::Profiles, "monotonia_gap_at_zero", g0, Relation::AtMost, 1.0 / MONOTONIA_GRID as f64, 0.0, 1),
        Criterion::new(Suite::Profiles, "monotonia_gap_decreasing", (g1 - g2).min(g2 - g3), Relation::Above, 0.0, 0.0, 3),
        // g(η) ~ √η, so a hundredfold drop in η shrinks the gap by about ten
        Criterion::new(Suite::Profiles, "monotonia_gap_vanishing", g3 / g1, Relation::AtMost, 0.2, 0.0, 2),
    ])
}

pub const RESIDUAL_VOLUMES: [f64; 3] = [1e-1, 1e-2, 1e-3];

pub fn zero_residual() -> Result<Vec<Criterion>> {
    let mut worst = 0.0f64;
    for n in [2.0, 3.0] {
        let h = Density1D::model(n, 1.0, 0.0)?;
        for w in RESIDUAL_VOLUMES {
            worst = worst.max(residual_v(&h, 1.0, w)?.abs());
        }
    }
    // uniform density on [0, 1], N = 2, E = [0, 1/9]: D·P / (N m^{1/2}) − 1 = 1/(2/3) − 1
    let uniform = OneDimFinsler::reversible(Density1D::model(2.0, 1.0, f64::INFINITY)?);
    let hand = residual(&uniform, 1.0, &IntervalSet::new(vec![(0.0, 1.0 / 9.0)])?)?;
    Ok(vec![
        Criterion::new(Suite::Residuals, "model_residual_vanishes", worst, Relation::AtMost, 0.0, 1e-8, 2 * RESIDUAL_VOLUMES.len()),
        Criterion::new(Suite::Residuals, "uniform_residual_hand_value", hand, Relation::Within, 0.5, 1e-12, 1),
    ])
}

/// `∫_0^{D′} F_left` for piecewise-linear knots, constant beyond the ends.
fn left_length(left: &[(f64, f64)], dp: f64) -> f64 {
    let mut s = left[0].0.max(0.0) * left[0].1;
    for w in left.windows(2) {
        s += 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1);
    }
    s + (dp - left[left.len() - 1].0).max(0.0) * left[left.len() - 1].1
}

pub fn irreversibility(seed: u64) -> Result<Vec<Criterion>> {
    let lambda = Gauge::randers(&[0.5, 0.0])?.reversibility();
    let margins = instance_rngs(seed, 12, CORPUS_1D)
        .into_par_iter()
        .map(|mut rng| {
            let (n, dp, h, e, v) = corpus_instance(&mut rng);
            let lam = rng.gen_range(1.0..4.0);
            let knots = vec![(0.0, lam), (0.5 * dp, 1.0 / lam), (dp, 1.0)];
            // forward diameter of ([0, D′], F): the longer of the two traversals
            let diameter = dp.max(left_length(&knots, dp));
            let m = OneDimFinsler::new(h, LeftCost::Knots(knots))?;
            Ok(perimeter1d(&m, &e) - profile(n, diameter, v)?.value / m.lambda())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(vec![
        Criterion::new(Suite::Residuals, "randers_reversibility", lambda, Relation::Within, 3.0, 1e-12, 1),
        Criterion::new(Suite::Residuals, "irreversible_profile_bound", min_of(margins), Relation::AtLeast, 0.0, 1e-6, CORPUS_1D),
    ])
}

pub const WULFF_RESOLUTION: usize = 4096;

/// Integrands of the Wulff matrix: Euclidean, dual of Randers `|b| = 1/2`, support of a square.
pub fn wulff_gauges() -> Result<Vec<(&'static str, Gauge)>> {
    Ok(vec![
        ("euclidean", Gauge::euclidean(2)),
        ("randers_dual", Gauge::randers(&[0.5, 0.0])?.dual()?),
        ("square_support", Gauge::support(&[vec![1.0, 1.0], vec![-1.0, 1.0], vec![-1.0, -1.0], vec![1.0, -1.0]])?),
    ])
}

/// `(w, Σ)` cells: `(1, R²)`, `(1, half-plane)`, `(y, upper half-plane)`, `(1, quadrant)`.
pub fn wulff_cells() -> Result<Vec<(&'static str, WeightSpec, ConeSpec)>> {
    let upper = ConeSpec::new(2, vec![vec![0.0, 1.0]])?;
    let half = ConeSpec::new(2, vec![vec![1.0, 0.0]])?;
    let quadrant = ConeSpec::new(2, vec![vec![1.0, 0.0], vec![0.0, 1.0]])?;
    let y = WeightSpec::new(1.0, WeightKind::LinearPower { c: vec![0.0, 1.0] }, &upper)?;
    Ok(vec![
        ("plane", WeightSpec::one(2), ConeSpec::whole(2)),
        ("half_plane", WeightSpec::one(2), half),
        ("weighted_upper", y, upper),
        ("quadrant", WeightSpec::one(2), quadrant),
    ])
}

/// Quotient of the Wulff shape in every cell of the matrix.
pub fn wulff_equality(resolution: usize) -> Result<Vec<Criterion>> {
    let gauges = wulff_gauges()?;
    let cells = wulff_cells()?;
    let pairs: Vec<(&Gauge, &WeightSpec, &ConeSpec)> =
        gauges.iter().flat_map(|(_, h)| cells.iter().map(move |(_, w, c)| (h, w, c))).collect();
    let rows = pairs
        .par_iter()
        .map(|(h, w, c)| {
            let wulff = h.wulff(resolution)?;
            let q = iso_quotient(&wulff, h, w, c, resolution)?;
            let q2 = iso_quotient_with_avr(&wulff.scaled(2.5), h, w, c, q.avr)?;
            Ok(((q.q - 1.0).abs(), ((q.perimeter - q.n * q.volume) / (q.n * q.volume)).abs(), ((q2.q - q.q) / q.q).abs()))
        })
        .collect::<Result<Vec<(f64, f64, f64)>>>()?;
    // weighted half-disk of radius r: P = 2r², m = (2/3) r³, N = 3, AVR = 1/(2π)
    let r: f64 = 1.7;
    let hand = 2.0 * r * r / (3.0 * (omega_n(3.0) / (2.0 * PI)).powf(1.0 / 3.0) * (2.0 / 3.0 * r.powi(3)).powf(2.0 / 3.0));
    let tol = 3.0 / resolution as f64;
    let k = rows.len();
    Ok(vec![
        Criterion::new(Suite::Wulff, "wulff_quotient_equality", max_of(rows.iter().map(|r| r.0)), Relation::AtMost, 0.0, tol, k),
        Criterion::new(Suite::Wulff, "wulff_perimeter_is_n_volume", max_of(rows.iter().map(|r| r.1)), Relation::AtMost, 0.0, tol, k),
        Criterion::new(Suite::Wulff, "quotient_scale_invariance", max_of(rows.iter().map(|r| r.2)), Relation::AtMost, 0.0, 1e-10, k),
        Criterion::new(Suite::Wulff, "weighted_half_disk_hand_value", hand, Relation::Within, 1.0, 1e-14, 1),
    ])
}

pub const SHARPNESS_PER_CELL: usize = 100;
const SHARPNESS_VERTICES: usize = 8;
const BEST_FIT_RESOLUTION: usize = 256;
/// Minimal Hausdorff distance to the best-fit Wulff shape, relative to the inradius.
pub const FAR_FROM_WULFF: f64 = 0.05;
pub const SHARPNESS_MARGIN: f64 = 1e-3;

/// Random convex polygon in the cone: hull of points in a unit box around an
/// interior point, clipped to `Σ`.
fn random_cone_polygon(cone: &ConeSpec, rng: &mut ChaCha8Rng) -> Result<Mesh> {
    let center: Vec<f64> = cone.interior_direction().iter().map(|x| 1.5 * x).collect();
    loop {
        let ring = random_convex_points(2, &center, &[1.0, 1.0], SHARPNESS_VERTICES, rng);
        let clipped = clip(&Mesh::from_polygon(&ring), cone);
        if !clipped.is_empty() && clipped.enclosed_volume() > 0.05 {
            return Ok(clipped);
        }
    }
}

/// Quotients of random polygons away from every rescaled Wulff shape, and the
/// `(2, 1)` ellipse.
pub fn sharpness(seed: u64) -> Result<Vec<Criterion>> {
    let gauges = wulff_gauges()?;
    let cells = wulff_cells()?;
    let mut margins = Vec::new();
    for (gi, (_, h)) in gauges.iter().enumerate() {
        for (ci, (_, w, cone)) in cells.iter().enumerate() {
            let a = avr(h, w, cone, WULFF_RESOLUTION)?;
            let stream = 100 + (gi * cells.len() + ci) as u64;
            let cell = instance_rngs(seed, stream, SHARPNESS_PER_CELL)
                .into_par_iter()
                .map(|mut rng| -> Result<Option<f64>> {
                    let e = random_cone_polygon(cone, &mut rng)?;
                    let ring = ring_of(&e);
                    let far = best_fit_wulff_distance(&ring, h, cone.normals(), BEST_FIT_RESOLUTION)?;
                    if far < FAR_FROM_WULFF * inradius(&ring) {
                        return Ok(None);
                    }
                    Ok(Some(iso_quotient_with_avr(&e, h, w, cone, a)?.q - 1.0))
                })
                .collect::<Result<Vec<Option<f64>>>>()?;
            margins.extend(cell.into_iter().flatten());
        }
    }
    let eu = Gauge::euclidean(2);
    let q = iso_quotient(&ellipse(&[2.0, 1.0], WULFF_RESOLUTION), &eu, &WeightSpec::one(2), &ConeSpec::whole(2), WULFF_RESOLUTION)?.q;
    Ok(vec![
        Criterion::new(Suite::Wulff, "sharpness_margin", min_of(margins.iter().copied()), Relation::AtLeast, SHARPNESS_MARGIN, 0.0, margins.len()),
        Criterion::new(Suite::Wulff, "ellipse_quotient", q, Relation::Within, 1.0903, 1e-3, 1),
    ])
}

pub const BM_CORPUS: usize = 500;

/// Admissible `(w, Σ, α)` for the Brunn–Minkowski corpus.
fn bm_weights() -> Result<Vec<(WeightSpec, ConeSpec)>> {
    let upper = ConeSpec::new(2, vec![vec![0.0, 1.0]])?;
    let quadrant = ConeSpec::new(2, vec![vec![1.0, 0.0], vec![0.0, 1.0]])?;
    Ok(vec![
        (WeightSpec::one(2), ConeSpec::whole(2)),
        (WeightSpec::new(1.0, WeightKind::LinearPower { c: vec![0.0, 1.0] }, &upper)?, upper),
        (WeightSpec::new(2.0, WeightKind::LinearPower { c: vec![0.3, 1.0] }, &quadrant)?, quadrant.clone()),
        (WeightSpec::new(2.0, WeightKind::Monomial { exponents: vec![1.0, 1.0] }, &quadrant)?, quadrant),
    ])
}

fn random_body(cone: &ConeSpec, rng: &mut ChaCha8Rng) -> Result<ConvexBody> {
    let center: Vec<f64> = cone.interior_direction().iter().map(|x| rng.gen_range(1.5..3.0) * x).collect();
    let half = [rng.gen_range(0.3..1.2), rng.gen_range(0.3..1.2)];
    ConvexBody::new(&random_convex_points(2, &center, &half, rng.gen_range(3..12), rng))
}

fn square(side: f64) -> Result<ConvexBody> {
    let h = 0.5 * side;
    ConvexBody::new(&[vec![-h, -h], vec![h, -h], vec![h, h], vec![-h, h]])
}

pub fn brunn_minkowski(seed: u64) -> Result<Vec<Criterion>> {
    let weights = bm_weights()?;
    let rows = instance_rngs(seed, 13, BM_CORPUS)
        .into_par_iter()
        .map(|mut rng| {
            let (w, cone) = &weights[rng.gen_range(0..weights.len())];
            let a = random_body(cone, &mut rng)?;
            let b = random_body(cone, &mut rng)?;
            let t = rng.gen_range(0.0..1.0);
            let slack = bm_slack(&a, &b, t, w, cone, w.n_total())?;
            // dilation about the vertex is an equality case for every admissible weight
            let homothetic = bm_slack(&a, &a.scaled(rng.gen_range(0.3..3.0)), t, w, cone, w.n_total())?;
            Ok((slack, homothetic.abs()))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;
    let plain = WeightSpec::one(2);
    let r2 = ConeSpec::whole(2);
    let a = square(1.0)?;
    let translated = bm_slack(&a, &a.scaled(2.5).translated(&[3.0, -1.0]), 0.3, &plain, &r2, 2.0)?.abs();
    let disk = Gauge::euclidean(2).forward_ball(&[0.0, 0.0], 1.0, WULFF_RESOLUTION)?;
    let disk = ConvexBody::new(&disk.vertices().cloned().collect::<Vec<_>>())?;
    let steiner = bm_slack(&a, &disk, 0.5, &plain, &r2, 2.0)?;
    Ok(vec![
        Criterion::new(Suite::Bm, "bm_slack_nonnegative", min_of(rows.iter().map(|r| r.0)), Relation::AtLeast, 0.0, 1e-9, BM_CORPUS),
        Criterion::new(
            Suite::Bm,
            "bm_homothetic_equality",
            max_of(rows.iter().map(|r| r.1).chain([translated])),
            Relation::AtMost,
            0.0,
            1e-9,
            BM_CORPUS + 1,
        ),
        Criterion::new(Suite::Bm, "bm_square_disk_slack", steiner, Relation::Within, 0.0405, 1e-4, 1),
    ])
}

pub const TRACE_RADII: [f64; 3] = [10.0, 40.0, 160.0];
pub const TRACE_T: f64 = 1e-3;

/// Midpoint-set trace for the unit disk with `w = 1` and the Euclidean gauge.
pub fn main_trace() -> Result<Vec<Criterion>> {
    let res = WULFF_RESOLUTION;
    let eu = Gauge::euclidean(2);
    let disk = eu.forward_ball(&[0.0, 0.0], 1.0, res)?;
    let e = ConvexBody::new(&disk.vertices().cloned().collect::<Vec<_>>())?;
    let rec = main_inequality_trace(&e, &eu, &WeightSpec::one(2), &ConeSpec::whole(2), &[0.0, 0.0], &TRACE_RADII, TRACE_T, res)?;
    let k = rec.rows.len();
    let increase = min_of(rec.rows.windows(2).map(|p| p[1].bound - p[0].bound));
    let last = rec.rows[k - 1].bound;
    let excess = max_of(rec.rows.iter().map(|r| r.bound - 2.0 * PI));
    Ok(vec![
        Criterion::new(Suite::Bm, "trace_limit_candidate", rec.limit, Relation::Within, 2.0 * PI, 1e-5 * 2.0 * PI, 1),
        Criterion::new(Suite::Bm, "trace_bound_increasing", increase, Relation::Above, 0.0, 0.0, k),
        Criterion::new(Suite::Bm, "trace_bound_below_limit", excess, Relation::AtMost, 0.0, 0.0, k),
        Criterion::new(Suite::Bm, "trace_final_gap", (2.0 * PI - last) / (2.0 * PI), Relation::AtMost, 0.02, 0.0, 1),
        Criterion::new(
            Suite::Bm,
            "trace_containment",
            rec.rows.iter().filter(|r| !r.containment_holds).count() as f64,
            Relation::AtMost,
            0.0,
            0.0,
            k,
        ),
        Criterion::new(Suite::Bm, "trace_bm_step", rec.rows.iter().filter(|r| !r.bm_holds).count() as f64, Relation::AtMost, 0.0, 0.0, k),
    ])
}

pub const CONTENT_CORPUS: usize = 50;
pub const CONTENT_RESOLUTION: usize = 4096;

pub fn content_gauges() -> Result<Vec<Gauge>> {
    Ok(vec![
        Gauge::euclidean(2),
        Gauge::randers(&[0.5, 0.0])?,
        Gauge::polytopal(&[vec![1.0, 1.0], vec![-1.0, 1.0], vec![-1.0, -1.0], vec![1.0, -1.0]])?,
    ])
}

pub fn content_vs_perimeter(seed: u64) -> Result<Vec<Criterion>> {
    let gauges = content_gauges()?;
    let w = WeightSpec::one(2);
    let r2 = ConeSpec::whole(2);
    let rows = instance_rngs(seed, 14, CONTENT_CORPUS)
        .into_par_iter()
        .map(|mut rng| {
            let e = ConvexBody::new(&random_convex_points(2, &[0.0, 0.0], &[1.0, 1.0], rng.gen_range(3..16), &mut rng))?;
            let ladder = default_ladder(inradius(&e.vertices));
            gauges
                .iter()
                .map(|f| {
                    let c = minkowski_content(&e, f, &w, &r2, &ladder, CONTENT_RESOLUTION)?;
                    let p = content_oracle(&e, f, &w, &r2)?;
                    let rel = ((c.extrapolated - p) / p).abs();
                    let dominance = min_of(c.quotients.iter().map(|q| q.1 - p));
                    let shrink = min_of(c.quotients.windows(2).map(|q| q[0].1 - q[1].1));
                    Ok((rel, dominance, shrink))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<Vec<(f64, f64, f64)>>>>()?;
    let rows: Vec<(f64, f64, f64)> = rows.into_iter().flatten().collect();
    let k = rows.len();
    // L-shaped hexagon through the scanline path
    let l_shape = vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![2.0, 1.0], vec![1.0, 1.0], vec![1.0, 2.0], vec![0.0, 2.0]];
    let eu = Gauge::euclidean(2);
    let ladder = [0.1, 0.05, 0.025];
    let voxel = minkowski_content_voxel(&l_shape, &eu, &w, &r2, &ladder, 256, VOXEL_GRID)?;
    let p_l = weighted_perimeter(&Mesh::from_polygon(&l_shape), &eu, &w, &r2)?;
    Ok(vec![
        Criterion::new(Suite::Content, "content_equals_perimeter", max_of(rows.iter().map(|r| r.0)), Relation::AtMost, 0.0, 1e-3, k),
        Criterion::new(Suite::Content, "content_quotients_dominate", min_of(rows.iter().map(|r| r.1)), Relation::AtLeast, 0.0, 1e-9, k),
        Criterion::new(Suite::Content, "content_quotients_shrink_with_eps", min_of(rows.iter().map(|r| r.2)), Relation::AtLeast, 0.0, 1e-9, k),
        Criterion::new(
            Suite::Content,
            "nonconvex_content_dominates",
            min_of(voxel.quotients.iter().map(|q| q.1 - p_l)),
            Relation::AtLeast,
            0.0,
            1e-2,
            ladder.len(),
        ),
    ])
}

pub const COAREA_GRID: usize = 800;

pub fn coarea() -> Result<Vec<Criterion>> {
    let w = WeightSpec::one(2);
    let r2 = ConeSpec::whole(2);
    let eu = Gauge::euclidean(2);
    let randers = Gauge::randers(&[0.5, 0.0])?;
    let cone_profile = RadialProfile::cone(1.0);
    let c = coarea_check(&cone_profile, &eu, &w, &r2, WULFF_RESOLUTION, COAREA_GRID)?;
    let z = coarea_check(&RadialProfile::zero(), &eu, &w, &r2, WULFF_RESOLUTION, COAREA_GRID)?;
    let rd = coarea_check(&cone_profile, &randers, &w, &r2, WULFF_RESOLUTION, COAREA_GRID)?;
    Ok(vec![
        Criterion::new(Suite::Coarea, "coarea_lhs_cone_profile", c.lhs, Relation::Within, PI, 1e-5, 1),
        Criterion::new(Suite::Coarea, "coarea_rhs_cone_profile", c.rhs, Relation::Within, PI, 1e-2, 1),
        Criterion::new(Suite::Coarea, "coarea_zero_profile", z.lhs.abs().max(z.rhs.abs()), Relation::AtMost, 0.0, 0.0, 1),
        Criterion::new(Suite::Coarea, "coarea_randers_inequality", rd.rhs + rd.rhs_error - rd.lhs, Relation::AtLeast, 0.0, 0.0, 1),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
        }
        assert_eq!(parse_suites("all").unwrap().len(), 6);
        assert!(parse_suites("nope").is_err());
    }

    #[test]
    fn relations() {
        let c = Criterion::new(Suite::Bm, "x", 1.0, Relation::AtMost, 0.5, 0.5, 1);
        assert!(c.passed);
        assert!(!Criterion::new(Suite::Bm, "x", 0.0, Relation::Above, 0.0, 1.0, 1).passed);
        assert!(Criterion::new(Suite::Bm, "x", 0.9, Relation::Within, 1.0, 0.1 + 1e-15, 1).passed);
        assert!(!Criterion::new(Suite::Bm, "x", 0.4, Relation::AtLeast, 0.5, 0.05, 1).passed);
    }

    #[test]
    fn instance_streams_are_deterministic_and_distinct() {
        let a: Vec<u64> = instance_rngs(7, 1, 3).into_iter().map(|mut r| r.next_u64()).collect();
        let b: Vec<u64> = instance_rngs(7, 1, 3).into_iter().map(|mut r| r.next_u64()).collect();
        let c: Vec<u64> = instance_rngs(7, 2, 3).into_iter().map(|mut r| r.next_u64()).collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a[0], a[1]);
    }

    #[test]
    fn left_length_of_knots() {
        let k = vec![(0.0, 2.0), (0.5, 0.5), (1.0, 1.0)];
        assert!((left_length(&k, 1.0) - (0.25 * 2.5 + 0.25 * 1.5)).abs() < 1e-15);
        assert!((left_length(&[(0.2, 1.0)], 1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn quick_suites_pass() {
        for s in [Suite::Profiles, Suite::Residuals, Suite::Coarea] {
            let c = run_suite(s, 3).unwrap();
            assert!(c.iter().all(|c| c.passed), "{:#?}", c.iter().filter(|c| !c.passed).collect::<Vec<_>>());
        }
    }
}
