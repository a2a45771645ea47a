//! Subcommand arguments and their implementations.

use anyhow::{bail, ensure, Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::json;

use finsler_iso::battery::{self, Criterion};
use finsler_iso::bminkowski::{
    bm_slack, content_oracle, default_ladder, main_inequality_trace, midpoint_set, minkowski_content,
    minkowski_content_voxel, coarea_check, ConvexBody, RadialProfile, VOXEL_GRID,
};
use finsler_iso::cone::{iso_quotient, weighted_perimeter, weighted_volume, ConeSpec, WeightSpec};
use finsler_iso::gauge::Gauge;
use finsler_iso::io::{ConeConfig, DensityConfig, GaugeConfig, IntervalSetConfig, ShapeConfig, WeightConfig, XiName, XiValue};
use finsler_iso::mesh::Mesh;
use finsler_iso::model1d::{measure1d, perimeter1d, profile, rigidity_probe};
use finsler_iso::numerics::richardson;
use finsler_iso::shapes::{inradius, ring_of};

use crate::config::{need, JsonArg};
use crate::output::{num, Cell, Report, Table};

/// Settings shared by every subcommand after merging config and flags.
#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub seed: u64,
    pub resolution: usize,
}

fn gauge_of(arg: &Option<JsonArg>, dim: usize) -> Result<Gauge> {
    match arg {
        Some(j) => Ok(j.parse::<GaugeConfig>("gauge")?.build()?),
        None => Ok(Gauge::euclidean(dim)),
    }
}

fn cone_of(arg: &Option<JsonArg>, dim: usize) -> Result<ConeSpec> {
    match arg {
        Some(j) => Ok(j.parse::<ConeConfig>("cone")?.build(dim)?),
        None => Ok(ConeSpec::whole(dim)),
    }
}

fn weight_of(arg: &Option<JsonArg>, cone: &ConeSpec) -> Result<WeightSpec> {
    match arg {
        Some(j) => Ok(j.parse::<WeightConfig>("weight")?.build(cone)?),
        None => Ok(WeightSpec::one(cone.dim)),
    }
}

fn shape_of(arg: &Option<JsonArg>, name: &str, resolution: usize) -> Result<(ShapeConfig, Mesh)> {
    let cfg: ShapeConfig = need(arg.as_ref(), name)?.parse(name)?;
    let mesh = cfg.build(resolution)?;
    Ok((cfg, mesh))
}

fn xi_json(xi: f64) -> serde_json::Value {
    let v = if xi.is_infinite() { XiValue::Named(XiName::Inf) } else { XiValue::Finite(xi) };
    serde_json::to_value(v).expect("ξ serializes")
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProfileArgs {
    /// Dimension parameter N > 1.
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: Option<f64>,
    /// Diameter bound D > 0.
    #[arg(long = "D")]
    #[serde(rename = "D")]
    pub d: Option<f64>,
    /// Volumes in (0, 1), comma separated.
    #[arg(long, value_delimiter = ',')]
    pub v: Option<Vec<f64>>,
    /// Evenly spaced sweep `start:end:count` inside (0, 1).
    #[arg(long = "v-range")]
    pub v_range: Option<String>,
}

fn parse_range(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    ensure!(parts.len() == 3, "v-range must be start:end:count, got {s:?}");
    let a: f64 = parts[0].parse().context("v-range start")?;
    let b: f64 = parts[1].parse().context("v-range end")?;
    let k: usize = parts[2].parse().context("v-range count")?;
    ensure!(a > 0.0 && b < 1.0 && a < b && k >= 2, "invalid v-range {s:?}: need 0 < start < end < 1 and count ≥ 2");
    Ok((0..k).map(|i| a + (b - a) * i as f64 / (k - 1) as f64).collect())
}

pub fn cmd_profile(args: &ProfileArgs) -> Result<Report> {
    let n = need(args.n, "N")?;
    let d = need(args.d, "D")?;
    let vs = match (&args.v, &args.v_range) {
        (Some(v), None) => v.clone(),
        (None, Some(r)) => parse_range(r)?,
        (Some(_), Some(_)) => bail!("give either --v or --v-range, not both"),
        (None, None) => bail!("missing required parameter --v or --v-range"),
    };
    ensure!(!vs.is_empty(), "no volumes given");
    let increasing = vs.windows(2).all(|w| w[1] > w[0]);
    if args.v_range.is_some() {
        ensure!(increasing, "v-range sweep is not strictly increasing");
    }
    let mut table = Table::new(&["v", "profile", "argmin_xi"]);
    let mut rows = Vec::new();
    for v in vs {
        let p = profile(n, d, v)?;
        table.push(vec![v.into(), p.value.into(), Cell::Num(p.argmin_xi)]);
        rows.push(json!({"v": v, "profile": p.value, "argmin_xi": xi_json(p.argmin_xi)}));
    }
    Ok(Report { result: json!({"N": n, "D": d, "v_increasing": increasing, "rows": rows}), table, ok: true })
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResidualArgs {
    /// Density JSON (inline or path).
    #[arg(long)]
    pub density: Option<JsonArg>,
    /// Interval set JSON `[[a, b], …]` (inline or path).
    #[arg(long)]
    pub set: Option<JsonArg>,
    /// Diameter bound D ≥ D′; defaults to D′.
    #[arg(long = "D")]
    #[serde(rename = "D")]
    pub d: Option<f64>,
}

pub fn cmd_residual(args: &ResidualArgs) -> Result<Report> {
    let space = need(args.density.as_ref(), "density")?.parse::<DensityConfig>("density")?.build_space()?;
    let set = need(args.set.as_ref(), "set")?.parse::<IntervalSetConfig>("interval set")?.build()?;
    set.check_within(space.density.dprime)?;
    let d = args.d.unwrap_or(space.density.dprime);
    let rec = rigidity_probe(&space, d, &set)?;
    let perimeter = perimeter1d(&space, &set);
    let measure = measure1d(&space.density, &set);
    let result = json!({
        "N": space.density.n,
        "Dprime": space.density.dprime,
        "D": d,
        "lambda": space.lambda(),
        "measure": measure,
        "perimeter": perimeter,
        "residual": rec.residual,
        "a": rec.a,
        "b": rec.b,
        "b_model": rec.b_model,
        "gaps": rec.gaps,
        "hypothesis_holds": rec.hypothesis_holds,
    });
    let mut table = Table::new(&["N", "Dprime", "D", "lambda", "measure", "perimeter", "residual", "gap_b", "gap_a", "gap_diameter", "hypothesis_holds"]);
    table.push(vec![
        space.density.n.into(),
        space.density.dprime.into(),
        d.into(),
        space.lambda().into(),
        measure.into(),
        perimeter.into(),
        rec.residual.into(),
        rec.gaps[0].into(),
        rec.gaps[1].into(),
        rec.gaps[2].into(),
        rec.hypothesis_holds.into(),
    ]);
    Ok(Report { result, table, ok: true })
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaugeArgs {
    /// Gauge JSON (inline or path).
    #[arg(long)]
    pub gauge: Option<JsonArg>,
    /// Homothety factor of the Wulff shape.
    #[arg(long)]
    pub scale: Option<f64>,
}

pub fn cmd_gauge_info(args: &GaugeArgs, ctx: Settings) -> Result<Report> {
    let cfg: GaugeConfig = need(args.gauge.as_ref(), "gauge")?.parse("gauge")?;
    let g = cfg.build()?;
    let dual = g.dual()?;
    let origin = vec![0.0; g.dim];
    let ball = g.forward_ball(&origin, 1.0, ctx.resolution)?.enclosed_volume();
    let wulff = g.wulff(ctx.resolution)?.enclosed_volume();
    let mut table = Table::new(&["axis", "sign", "F", "F_dual"]);
    let mut axes = Vec::new();
    for k in 0..g.dim {
        for sign in [1.0, -1.0] {
            let mut e = origin.clone();
            e[k] = sign;
            let (f, fd) = (g.eval(&e)?, dual.eval(&e)?);
            table.push(vec![k.into(), sign.into(), f.into(), fd.into()]);
            axes.push(json!({"axis": k, "sign": sign, "F": f, "F_dual": fd}));
        }
    }
    let result = json!({
        "gauge": cfg,
        "dim": g.dim,
        "smooth": g.is_smooth(),
        "reversibility": g.reversibility(),
        "unit_ball_measure": ball,
        "wulff_measure": wulff,
        "axes": axes,
    });
    Ok(Report { result, table, ok: true })
}

pub fn cmd_wulff(args: &GaugeArgs, ctx: Settings) -> Result<Report> {
    let cfg: GaugeConfig = need(args.gauge.as_ref(), "gauge")?.parse("gauge")?;
    let scale = args.scale.unwrap_or(1.0);
    ensure!(scale > 0.0, "scale must be positive");
    let mesh = cfg.build()?.wulff(ctx.resolution)?.scaled(scale);
    let vertices: Vec<Vec<f64>> = if mesh.dim == 2 { ring_of(&mesh) } else { unique_vertices(&mesh) };
    let cols: &[&str] = if mesh.dim == 2 { &["x", "y"] } else { &["x", "y", "z"] };
    let mut table = Table::new(cols);
    for v in &vertices {
        table.push(v.iter().map(|x| Cell::Num(*x)).collect());
    }
    let result = json!({"dim": mesh.dim, "scale": scale, "measure": mesh.enclosed_volume(), "vertices": vertices});
    Ok(Report { result, table, ok: true })
}

fn unique_vertices(mesh: &Mesh) -> Vec<Vec<f64>> {
    let mut seen = std::collections::BTreeSet::new();
    mesh.vertices().filter(|v| seen.insert(v.iter().map(|x| x.to_bits()).collect::<Vec<u64>>())).cloned().collect()
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConeReportArgs {
    /// Shape JSON (inline or path).
    #[arg(long)]
    pub shape: Option<JsonArg>,
    /// Integrand gauge H on normals (Euclidean by default).
    #[arg(long)]
    pub gauge: Option<JsonArg>,
    /// Weight JSON (w = 1 by default).
    #[arg(long)]
    pub weight: Option<JsonArg>,
    /// Cone JSON (whole space by default).
    #[arg(long)]
    pub cone: Option<JsonArg>,
}

pub fn cmd_cone_report(args: &ConeReportArgs, ctx: Settings) -> Result<Report> {
    let (cfg, mesh) = shape_of(&args.shape, "shape", ctx.resolution)?;
    let dim = mesh.dim;
    let h = gauge_of(&args.gauge, dim)?;
    let cone = cone_of(&args.cone, dim)?;
    let w = weight_of(&args.weight, &cone)?;
    let q = iso_quotient(&mesh, &h, &w, &cone, ctx.resolution)?;
    let coarse_res = (ctx.resolution / 2).max(8);
    let coarse = iso_quotient(&cfg.build(coarse_res)?, &h, &w, &cone, coarse_res)?;
    // polygonal errors are second order in the vertex spacing
    let q_extrapolated = richardson(&[1.0 / ctx.resolution as f64, 1.0 / coarse_res as f64], &[q.q, coarse.q], 2);
    let lambda_f = h.dual()?.reversibility();
    let result = json!({
        "perimeter": q.perimeter,
        "measure": q.volume,
        "avr": q.avr,
        "omega_N": q.omega,
        "N": q.n,
        "Q": q.q,
        "Q_coarse": coarse.q,
        "coarse_resolution": coarse_res,
        "Q_extrapolated": q_extrapolated,
        "lambda_F": lambda_f,
    });
    let mut table = Table::new(&["perimeter", "measure", "avr", "omega_N", "N", "Q", "Q_coarse", "Q_extrapolated", "lambda_F"]);
    table.push(vec![
        q.perimeter.into(),
        q.volume.into(),
        q.avr.into(),
        q.omega.into(),
        q.n.into(),
        q.q.into(),
        coarse.q.into(),
        q_extrapolated.into(),
        lambda_f.into(),
    ]);
    Ok(Report { result, table, ok: true })
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BmArgs {
    /// First convex body (shape JSON).
    #[arg(long)]
    pub a: Option<JsonArg>,
    /// Second convex body; omit with --radii to trace forward balls instead.
    #[arg(long)]
    pub b: Option<JsonArg>,
    /// Interpolation parameter in [0, 1].
    #[arg(long)]
    pub t: Option<f64>,
    /// Exponent N ≥ n + α (defaults to n + α).
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: Option<f64>,
    #[arg(long)]
    pub weight: Option<JsonArg>,
    #[arg(long)]
    pub cone: Option<JsonArg>,
    /// Gauge F whose forward balls enter the trace.
    #[arg(long)]
    pub gauge: Option<JsonArg>,
    /// Ball radii R for the midpoint-set trace of body A, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub radii: Option<Vec<f64>>,
    /// Ball center for the trace (origin by default).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x0: Option<Vec<f64>>,
}

pub fn cmd_bm_check(args: &BmArgs, ctx: Settings) -> Result<Report> {
    let a = need(args.a.as_ref(), "a")?.parse::<ShapeConfig>("shape a")?.build_convex(ctx.resolution)?;
    let dim = a.dim;
    let cone = cone_of(&args.cone, dim)?;
    let w = weight_of(&args.weight, &cone)?;
    let t = args.t.unwrap_or(0.5);
    if let Some(radii) = &args.radii {
        ensure!(args.b.is_none(), "--b and --radii are exclusive");
        let f = gauge_of(&args.gauge, dim)?;
        let x0 = args.x0.clone().unwrap_or_else(|| vec![0.0; dim]);
        let rec = main_inequality_trace(&a, &f, &w, &cone, &x0, radii, t, ctx.resolution)?;
        let mut table = Table::new(&["R", "m_ball", "m_z", "bm_rhs", "bm_holds", "containment_margin", "containment_holds", "quotient", "bound", "limit"]);
        let mut rows = Vec::new();
        for r in &rec.rows {
            table.push(vec![
                r.r.into(),
                r.m_ball.into(),
                r.m_z.into(),
                r.bm_rhs.into(),
                r.bm_holds.into(),
                r.containment_margin.into(),
                r.containment_holds.into(),
                r.quotient.into(),
                r.bound.into(),
                rec.limit.into(),
            ]);
            rows.push(json!({
                "R": r.r, "m_ball": r.m_ball, "m_z": r.m_z, "bm_rhs": r.bm_rhs, "bm_holds": r.bm_holds,
                "containment_margin": r.containment_margin, "containment_holds": r.containment_holds,
                "quotient": r.quotient, "bound": r.bound,
            }));
        }
        let ok = rec.rows.iter().all(|r| r.bm_holds && r.containment_holds);
        let result = json!({"mode": "trace", "t": t, "N": rec.n, "measure": rec.m_e, "gauge_diameter": rec.d, "limit": rec.limit, "rows": rows});
        return Ok(Report { result, table, ok });
    }
    let b = need(args.b.as_ref(), "b")?.parse::<ShapeConfig>("shape b")?.build_convex(ctx.resolution)?;
    let n = args.n.unwrap_or(w.n_total());
    let slack = bm_slack(&a, &b, t, &w, &cone, n)?;
    let z = midpoint_set(&a, &b, t)?;
    let m = |body: &ConvexBody| weighted_volume(body.mesh(), &w, &cone);
    let (ma, mb, mz) = (m(&a)?, m(&b)?, m(&z)?);
    let result = json!({"mode": "slack", "t": t, "N": n, "m_a": ma, "m_b": mb, "m_z": mz, "slack": slack});
    let mut table = Table::new(&["t", "N", "m_a", "m_b", "m_z", "slack"]);
    table.push(vec![t.into(), n.into(), ma.into(), mb.into(), mz.into(), slack.into()]);
    Ok(Report { result, table, ok: slack >= -1e-9 })
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContentArgs {
    /// Shape JSON; nonconvex polygons go through scanline dilation.
    #[arg(long)]
    pub shape: Option<JsonArg>,
    /// Gauge F of the forward enlargement.
    #[arg(long)]
    pub gauge: Option<JsonArg>,
    #[arg(long)]
    pub weight: Option<JsonArg>,
    #[arg(long)]
    pub cone: Option<JsonArg>,
    /// Strictly decreasing ε ladder (default {0.1, 0.05, 0.025}·inradius).
    #[arg(long, value_delimiter = ',')]
    pub eps: Option<Vec<f64>>,
    /// Scanline count for nonconvex input.
    #[arg(long)]
    pub grid: Option<usize>,
}

fn is_convex_ring(ring: &[Vec<f64>]) -> bool {
    let k = ring.len();
    let turns: Vec<f64> = (0..k)
        .map(|i| {
            let (a, b, c) = (&ring[i], &ring[(i + 1) % k], &ring[(i + 2) % k]);
            (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
        })
        .collect();
    turns.iter().all(|t| *t >= 0.0) || turns.iter().all(|t| *t <= 0.0)
}

fn shortest_edge(ring: &[Vec<f64>]) -> f64 {
    (0..ring.len())
        .map(|i| {
            let (a, b) = (&ring[i], &ring[(i + 1) % ring.len()]);
            (b[0] - a[0]).hypot(b[1] - a[1])
        })
        .fold(f64::INFINITY, f64::min)
}

pub fn cmd_mink_content(args: &ContentArgs, ctx: Settings) -> Result<Report> {
    let (cfg, mesh) = shape_of(&args.shape, "shape", ctx.resolution)?;
    let dim = mesh.dim;
    let f = gauge_of(&args.gauge, dim)?;
    let cone = cone_of(&args.cone, dim)?;
    let w = weight_of(&args.weight, &cone)?;
    let nonconvex = match &cfg {
        ShapeConfig::Polygon { vertices } => !is_convex_ring(vertices),
        _ => false,
    };
    let (report, perimeter) = if nonconvex {
        let ShapeConfig::Polygon { vertices } = &cfg else { unreachable!() };
        let eps = match &args.eps {
            Some(e) => e.clone(),
            None => default_ladder(0.5 * shortest_edge(vertices)),
        };
        let r = minkowski_content_voxel(vertices, &f, &w, &cone, &eps, ctx.resolution, args.grid.unwrap_or(VOXEL_GRID))?;
        (r, weighted_perimeter(&mesh, &f.dual()?, &w, &cone)?)
    } else {
        let body = ConvexBody::new(&mesh.vertices().cloned().collect::<Vec<_>>())?;
        let eps = match &args.eps {
            Some(e) => e.clone(),
            None if dim == 2 => default_ladder(inradius(&body.vertices)),
            None => bail!("give --eps for three-dimensional shapes"),
        };
        let r = minkowski_content(&body, &f, &w, &cone, &eps, ctx.resolution)?;
        (r, content_oracle(&body, &f, &w, &cone)?)
    };
    let mut table = Table::new(&["eps", "quotient", "extrapolated", "perimeter", "approximate"]);
    for (e, q) in &report.quotients {
        table.push(vec![(*e).into(), (*q).into(), report.extrapolated.into(), perimeter.into(), report.approximate.into()]);
    }
    let quotients: Vec<_> = report.quotients.iter().map(|(e, q)| json!({"eps": e, "quotient": q})).collect();
    let result = json!({
        "quotients": quotients,
        "extrapolated": report.extrapolated,
        "perimeter": perimeter,
        "approximate": report.approximate,
    });
    Ok(Report { result, table, ok: true })
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CoareaArgs {
    /// Profile knots `[[r, φ], …]` starting at r = 0 and ending at φ = 0.
    #[arg(long)]
    pub profile: Option<JsonArg>,
    /// Radius of the cone profile φ(r) = (1 − r/radius)⁺ when no knots are given.
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub gauge: Option<JsonArg>,
    #[arg(long)]
    pub weight: Option<JsonArg>,
    #[arg(long)]
    pub cone: Option<JsonArg>,
    /// Quadrature cells per side.
    #[arg(long)]
    pub grid: Option<usize>,
}

pub fn cmd_coarea(args: &CoareaArgs, ctx: Settings) -> Result<Report> {
    let phi = match (&args.profile, args.radius) {
        (Some(k), None) => RadialProfile::new(k.parse::<Vec<(f64, f64)>>("profile knots")?)?,
        (None, r) => RadialProfile::cone(r.unwrap_or(1.0)),
        (Some(_), Some(_)) => bail!("give either --profile or --radius, not both"),
    };
    let f = gauge_of(&args.gauge, 2)?;
    let cone = cone_of(&args.cone, 2)?;
    let w = weight_of(&args.weight, &cone)?;
    let grid = args.grid.unwrap_or(battery::COAREA_GRID);
    ensure!(grid >= 4, "grid must be at least 4");
    let c = coarea_check(&phi, &f, &w, &cone, ctx.resolution, grid)?;
    let holds = c.lhs <= c.rhs + c.rhs_error;
    let result = json!({"lhs": c.lhs, "rhs": c.rhs, "rhs_error": c.rhs_error, "grid": grid, "inequality_holds": holds});
    let mut table = Table::new(&["lhs", "rhs", "rhs_error", "grid", "inequality_holds"]);
    table.push(vec![c.lhs.into(), c.rhs.into(), c.rhs_error.into(), grid.into(), holds.into()]);
    Ok(Report { result, table, ok: holds })
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyArgs {
    /// Suite name (profiles, residuals, wulff, bm, content, coarea) or `all`.
    #[arg(long)]
    pub suite: Option<String>,
}

pub fn cmd_verify(args: &VerifyArgs, ctx: Settings) -> Result<Report> {
    let suites = battery::parse_suites(args.suite.as_deref().unwrap_or("all"))?;
    let summary = battery::run(&suites, ctx.seed)?;
    let mut table = Table::new(&["suite", "criterion", "measured", "relation", "bound", "tolerance", "count", "passed"]);
    for c in &summary.criteria {
        table.push(criterion_row(c));
    }
    let result = serde_json::to_value(&summary)?;
    let result = sanitize(result, &summary.criteria);
    Ok(Report { result, table, ok: summary.passed })
}

fn criterion_row(c: &Criterion) -> Vec<Cell> {
    let rel = serde_json::to_value(c.relation).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
    vec![
        c.suite.as_str().into(),
        c.name.as_str().into(),
        c.measured.into(),
        Cell::Text(rel),
        c.bound.into(),
        c.tolerance.into(),
        c.count.into(),
        c.passed.into(),
    ]
}

/// Replaces non-finite measured values, which JSON cannot carry, by strings.
fn sanitize(mut v: serde_json::Value, criteria: &[Criterion]) -> serde_json::Value {
    if let Some(list) = v.get_mut("criteria").and_then(|c| c.as_array_mut()) {
        for (item, c) in list.iter_mut().zip(criteria) {
            item["measured"] = num(c.measured);
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use finsler_iso::cone::omega_n;

    #[test]
    fn ranges_and_convexity() {
        assert_eq!(parse_range("0.1:0.5:3").unwrap(), vec![0.1, 0.30000000000000004, 0.5]);
        assert!(parse_range("0.5:0.1:3").is_err());
        assert!(parse_range("0:0.5:3").is_err());
        let l = vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![2.0, 1.0], vec![1.0, 1.0], vec![1.0, 2.0], vec![0.0, 2.0]];
        assert!(!is_convex_ring(&l));
        assert!(is_convex_ring(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]));
    }

    #[test]
    fn profile_at_half_is_uniform() {
        let r = cmd_profile(&ProfileArgs { n: Some(2.0), d: Some(1.0), v: Some(vec![0.5]), v_range: None }).unwrap();
        assert_eq!(r.result["rows"][0]["argmin_xi"], json!("inf"));
        assert!((r.result["rows"][0]["profile"].as_f64().unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn omega_in_cone_report() {
        let args = ConeReportArgs {
            shape: Some(r#"{"kind": "ball", "center": [0, 0], "radius": 1}"#.parse().unwrap()),
            ..Default::default()
        };
        let r = cmd_cone_report(&args, Settings { seed: 0, resolution: 1024 }).unwrap();
        assert!((r.result["omega_N"].as_f64().unwrap() - omega_n(2.0)).abs() <= 1e-15);
        assert!((r.result["Q"].as_f64().unwrap() - 1.0).abs() <= 3.0 / 1024.0);
    }
}
