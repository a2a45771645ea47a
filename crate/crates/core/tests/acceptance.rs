//! Acceptance battery: one line per criterion, nonzero exit on any failure.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use finsler_iso::battery::{self, Criterion};
use finsler_iso::cone::{iso_quotient, omega_n, ConeSpec, WeightKind, WeightSpec};
use finsler_iso::gauge::Gauge;
use finsler_iso::mesh::Mesh;
use finsler_iso::model1d::{residual, Density1D, IntervalSet, OneDimFinsler};
use finsler_iso::numerics::simpson;

const SEED: u64 = 7;

struct Outcome {
    checks: Vec<(String, bool)>,
    elapsed: Duration,
    budget: Duration,
}

impl Outcome {
    fn passed(&self) -> bool {
        self.elapsed <= self.budget && self.checks.iter().all(|c| c.1)
    }
}

fn from_battery(criteria: &[Criterion]) -> Vec<(String, bool)> {
    criteria
        .iter()
        .map(|c| (format!("{}={:.6e} ({:?} {:.3e} ± {:.1e})", c.name, c.measured, c.relation, c.bound, c.tolerance), c.passed))
        .collect()
}

fn within(name: &str, measured: f64, expected: f64, tol: f64) -> (String, bool) {
    (format!("{name}={measured:.10} vs {expected:.10} (± {tol:.1e})"), (measured - expected).abs() <= tol)
}

fn timed(budget_secs: f64, f: impl FnOnce() -> Vec<(String, bool)>) -> Outcome {
    let start = Instant::now();
    let checks = f();
    Outcome { checks, elapsed: start.elapsed(), budget: Duration::from_secs_f64(budget_secs) }
}

/// Counter-clockwise arc from `(r, 0)` to `(−r, 0)`, closed by the diameter.
fn half_disk(r: f64, resolution: usize) -> Mesh {
    let ring: Vec<Vec<f64>> = (0..=resolution)
        .map(|i| {
            let th = PI * i as f64 / resolution as f64;
            vec![r * th.cos(), r * th.sin()]
        })
        .collect();
    Mesh::from_polygon(&ring)
}

fn c1_wulff_equality() -> Outcome {
    let cells = battery::wulff_gauges().unwrap().len() * battery::wulff_cells().unwrap().len();
    timed(2.0 * cells as f64, || {
        let mut checks = from_battery(&battery::wulff_equality(battery::WULFF_RESOLUTION).unwrap());
        // half-disk of radius r under w = y: P = ∫_0^π y r dθ, m = ∫∫ y dA by quadrature
        let r: f64 = 1.7;
        let p = simpson(|th| r * th.sin() * r, 0.0, PI, 2000);
        let m = simpson(|th| simpson(|rho| rho * th.sin() * rho, 0.0, r, 200), 0.0, PI, 2000);
        let avr = m / r.powi(3) / omega_n(3.0);
        let q_oracle = p / (3.0 * (omega_n(3.0) * avr).powf(1.0 / 3.0) * m.powf(2.0 / 3.0));
        checks.push(within("half_disk_oracle_Q", q_oracle, 1.0, 1e-10));
        let upper = ConeSpec::new(2, vec![vec![0.0, 1.0]]).unwrap();
        let w = WeightSpec::new(1.0, WeightKind::LinearPower { c: vec![0.0, 1.0] }, &upper).unwrap();
        let res = battery::WULFF_RESOLUTION;
        let lib = iso_quotient(&half_disk(r, res), &Gauge::euclidean(2), &w, &upper, res).unwrap();
        checks.push(within("half_disk_library_P", lib.perimeter, p, 3.0 / res as f64 * p));
        checks.push(within("half_disk_library_m", lib.volume, m, 3.0 / res as f64 * m));
        checks.push(within("half_disk_library_Q", lib.q, q_oracle, 3.0 / res as f64));
        checks
    })
}

fn c2_sharpness() -> Outcome {
    timed(60.0, || {
        let crit = battery::sharpness(SEED).unwrap();
        let mut checks = from_battery(&crit);
        // ellipse (2, 1): perimeter by quadrature, area 2π, Q = P / (2 √(π · 2π))
        let p = simpson(|th| (4.0 * th.sin().powi(2) + th.cos().powi(2)).sqrt(), 0.0, 2.0 * PI, 20_000);
        let q = p / (2.0 * (PI * 2.0 * PI).sqrt());
        let measured = crit.iter().find(|c| c.name == "ellipse_quotient").unwrap().measured;
        checks.push(within("ellipse_oracle_Q", measured, q, 1e-5));
        let count = crit.iter().find(|c| c.name == "sharpness_margin").unwrap().count;
        let total = battery::SHARPNESS_PER_CELL * 12;
        checks.push((format!("polygons_far_from_wulff={count}/{total} (≥ {})", total / 2), count >= total / 2));
        checks
    })
}

fn c3_milman() -> Outcome {
    timed(10.0, || from_battery(&battery::milman_bound(SEED).unwrap()))
}

fn c4_small_volume() -> Outcome {
    timed(1.0, || from_battery(&battery::small_volume().unwrap()))
}

fn c5_zero_residual() -> Outcome {
    timed(1.0, || {
        let mut checks = from_battery(&battery::zero_residual().unwrap());
        // uniform h = 1 on [0, 1], E = [0, 1/9]: P = h(1/9) = 1, m = 1/9, N = 2
        let (n, w): (f64, f64) = (2.0, 1.0 / 9.0);
        let oracle = 1.0 * 1.0 / (n * w.powf(1.0 - 1.0 / n)) - 1.0;
        let uniform = OneDimFinsler::reversible(Density1D::model(2.0, 1.0, f64::INFINITY).unwrap());
        let lib = residual(&uniform, 1.0, &IntervalSet::new(vec![(0.0, w)]).unwrap()).unwrap();
        checks.push(within("uniform_residual_oracle", lib, oracle, 1e-12));
        checks.push(within("uniform_residual_oracle_value", oracle, 0.5, 1e-15));
        checks
    })
}

fn c6_brunn_minkowski() -> Outcome {
    timed(20.0, || {
        let crit = battery::brunn_minkowski(SEED).unwrap();
        let mut checks = from_battery(&crit);
        // Steiner: area(K ⊕ ρB) = |K| + ρ·per(K) + πρ² with K = ½·square, ρ = ½
        let area = 0.25 + 0.5 * 2.0 + PI * 0.25;
        let oracle = area.sqrt() - 0.5 - 0.5 * PI.sqrt();
        let measured = crit.iter().find(|c| c.name == "bm_square_disk_slack").unwrap().measured;
        checks.push(within("steiner_oracle_slack", measured, oracle, 1e-5));
        checks.push(within("steiner_oracle_value", oracle, 0.0405, 1e-4));
        checks
    })
}

fn c7_content() -> Outcome {
    timed(30.0, || from_battery(&battery::content_vs_perimeter(SEED).unwrap()))
}

fn c8_trace() -> Outcome {
    timed(10.0, || {
        let mut checks = from_battery(&battery::main_trace().unwrap());
        // unit disk, w = 1: N (ω_N AVR)^{1/N} m^{1−1/N} = 2 √π √π
        checks.push(within("trace_limit_oracle", 2.0 * PI.sqrt() * PI.sqrt(), 2.0 * PI, 1e-12));
        checks
    })
}

fn c9_irreversibility() -> Outcome {
    timed(5.0, || {
        let mut checks = from_battery(&battery::irreversibility(SEED).unwrap());
        // Randers |v| + ⟨b, v⟩: Λ = (1 + |b|)/(1 − |b|)
        let b: f64 = 0.5;
        checks.push(within("randers_lambda_oracle", (1.0 + b) / (1.0 - b), 3.0, 1e-15));
        checks
    })
}

fn c10_monotonia() -> Outcome {
    timed(1.0, || from_battery(&battery::monotonia().unwrap()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("wulff equality", c1_wulff_equality),
        ("sharpness margin", c2_sharpness),
        ("milman profile bound", c3_milman),
        ("small-volume expansion", c4_small_volume),
        ("zero-residual model", c5_zero_residual),
        ("brunn-minkowski", c6_brunn_minkowski),
        ("content vs perimeter", c7_content),
        ("midpoint-set trace", c8_trace),
        ("irreversibility bookkeeping", c9_irreversibility),
        ("monotonia gap", c10_monotonia),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let status = if o.passed() { "PASS" } else { "FAIL" };
        println!(
            "{status} criterion {:>2} {name}: {:.2} s (budget {:.0} s)",
            i + 1,
            o.elapsed.as_secs_f64(),
            o.budget.as_secs_f64()
        );
        for (detail, ok) in &o.checks {
            println!("       {} {detail}", if *ok { "ok  " } else { "FAIL" });
        }
        if !o.passed() {
            failures += 1;
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
