//! Scalar optimization, extrapolation and quadrature used across the crate.

/// 1/φ, the golden-section contraction factor.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of a unimodal `f` on `[a, b]`.
///
/// Returns `(x_min, f_min)`. Stops when the bracket is shorter than `tol`.
pub fn golden_section_min(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    // each step shrinks by INV_PHI; 200 steps reach below 1e-40 of the bracket
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    // the midpoint of the final bracket may beat both probes
    let m = 0.5 * (a + b);
    let fm = f(m);
    [(m, fm), (c, fc), (d, fd)]
        .into_iter()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .unwrap()
}

/// Golden-section search for a maximum.
pub fn golden_section_max(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (x, v) = golden_section_min(|x| -f(x), a, b, tol);
    (x, -v)
}

/// Minimizes `f` over `[a, b]` by scanning `samples` uniform points and then
/// refining around the best one with golden-section search.
///
/// Endpoints are part of the scan, so a minimum sitting on the boundary is kept.
pub fn grid_then_golden_min(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    samples: usize,
    tol: f64,
) -> (f64, f64) {
    let samples = samples.max(3);
    let step = (b - a) / (samples - 1) as f64;
    let (mut best_i, mut best_v) = (0, f64::INFINITY);
    for i in 0..samples {
        let x = if i == samples - 1 { b } else { a + step * i as f64 };
        let v = f(x);
        if v < best_v {
            best_v = v;
            best_i = i;
        }
    }
    let best_x = if best_i == samples - 1 { b } else { a + step * best_i as f64 };
    let lo = if best_i == 0 { a } else { a + step * (best_i - 1) as f64 };
    let hi = if best_i + 1 >= samples - 1 { b } else { a + step * (best_i + 1) as f64 };
    let (x, v) = golden_section_min(&f, lo, hi, tol);
    if v < best_v {
        (x, v)
    } else {
        (best_x, best_v)
    }
}

/// Bisection for a root of `f` on `[a, b]` where `f(a)` and `f(b)` have opposite signs.
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Richardson extrapolation of `values[k] ≈ A + Σ_j c_j·h_k^(order + j)`
/// computed at step sizes `steps[k]`; returns the fitted `A`.
///
/// With `m` samples the expansion is truncated after `m − 1` correction
/// terms and the resulting square system is solved exactly.
pub fn richardson(steps: &[f64], values: &[f64], order: u32) -> f64 {
    assert_eq!(steps.len(), values.len());
    assert!(!steps.is_empty());
    let n = steps.len();
    let href = steps.iter().fold(0.0f64, |m, h| m.max(h.abs()));
    // rows [1, (h/href)^order, (h/href)^(order+1), …] | value
    let mut a: Vec<Vec<f64>> = steps
        .iter()
        .zip(values)
        .map(|(h, v)| {
            let x = h / href;
            let mut row = vec![1.0];
            row.extend((0..n - 1).map(|j| x.powi((order as usize + j) as i32)));
            row.push(*v);
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..=n {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    a[0][n] / a[0][0]
}

/// Composite midpoint rule on `[a, b]` with `n` cells.
pub fn midpoint_rule(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    crate::linalg::compensated_sum((0..n).map(|i| f(a + h * (i as f64 + 0.5)))) * h
}

/// Composite Simpson rule on `[a, b]` with `n` (rounded up to even) cells.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n.max(2) + n % 2;
    let h = (b - a) / n as f64;
    let mut s = crate::linalg::KahanSum::default();
    s.add(f(a));
    s.add(f(b));
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s.add(w * f(a + h * i as f64));
    }
    s.value() * h / 3.0
}

/// Downhill simplex minimization. Returns `(x, f(x))`.
pub fn nelder_mead(
    f: impl Fn(&[f64]) -> f64,
    x0: &[f64],
    initial_step: f64,
    tol: f64,
    max_iter: usize,
) -> (Vec<f64>, f64) {
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += initial_step;
        simplex.push(p);
    }
    let mut vals: Vec<f64> = simplex.iter().map(|p| f(p)).collect();
    for _ in 0..max_iter {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();
        if (vals[n] - vals[0]).abs() <= tol * (1.0 + vals[0].abs()) {
            let spread = simplex
                .iter()
                .map(|p| crate::linalg::dist(p, &simplex[0]))
                .fold(0.0, f64::max);
            if spread <= tol.sqrt() {
                break;
            }
        }
        let mut centroid = vec![0.0; n];
        for p in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(p) {
                *c += x / n as f64;
            }
        }
        let toward = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n])
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };
        let xr = toward(-1.0);
        let fr = f(&xr);
        if fr < vals[0] {
            let xe = toward(-2.0);
            let fe = f(&xe);
            if fe < fr {
                simplex[n] = xe;
                vals[n] = fe;
            } else {
                simplex[n] = xr;
                vals[n] = fr;
            }
        } else if fr < vals[n - 1] {
            simplex[n] = xr;
            vals[n] = fr;
        } else {
            let (xc, fc) = if fr < vals[n] {
                let xc = toward(-0.5);
                let fc = f(&xc);
                (xc, fc)
            } else {
                let xc = toward(0.5);
                let fc = f(&xc);
                (xc, fc)
            };
            if fc < vals[n].min(fr) {
                simplex[n] = xc;
                vals[n] = fc;
            } else {
                let best = simplex[0].clone();
                for i in 1..=n {
                    simplex[i] = crate::linalg::lerp(&best, &simplex[i], 0.5);
                    vals[i] = f(&simplex[i]);
                }
            }
        }
    }
    let (i, v) = vals
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, v)| (i, *v))
        .unwrap();
    (simplex[i].clone(), v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn golden_finds_parabola_vertex() {
        let (x, v) = golden_section_min(|x| (x - 0.3).powi(2) + 1.0, -2.0, 5.0, 1e-12);
        assert_abs_diff_eq!(x, 0.3, epsilon = 1e-6);
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn grid_scan_keeps_boundary_minimum() {
        let (x, _) = grid_then_golden_min(|x| -x, 0.0, 1.0, 16, 1e-12);
        assert_eq!(x, 1.0);
    }

    #[test]
    fn richardson_removes_linear_term() {
        let steps = [0.1, 0.05, 0.025];
        let vals: Vec<f64> = steps.iter().map(|h| 4.0 + 3.0 * h).collect();
        assert_abs_diff_eq!(richardson(&steps, &vals, 1), 4.0, epsilon = 1e-12);
        let vals: Vec<f64> = steps.iter().map(|h| 2.0 + h * h - h * h * h).collect();
        assert_abs_diff_eq!(richardson(&steps, &vals, 2), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn simpson_is_exact_on_cubics() {
        let v = simpson(|x| x * x * x - x, 0.0, 2.0, 4);
        assert_abs_diff_eq!(v, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn nelder_mead_rosenbrock() {
        let (x, _) = nelder_mead(
            |p| (1.0 - p[0]).powi(2) + 100.0 * (p[1] - p[0] * p[0]).powi(2),
            &[-1.2, 1.0],
            0.5,
            1e-14,
            5000,
        );
        assert_abs_diff_eq!(x[0], 1.0, epsilon = 1e-4);
        assert_abs_diff_eq!(x[1], 1.0, epsilon = 1e-4);
    }

    #[test]
    fn bisect_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14);
        assert_abs_diff_eq!(r, std::f64::consts::SQRT_2, epsilon = 1e-12);
    }
}
