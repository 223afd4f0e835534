//! One-dimensional search primitives shared by the rest of the crate.

// Float supplies sqrt, ln and friends without std; the lint cannot tell
// whether the trait or a (gated) inherent method resolves the call.
#[allow(unused_imports)]
use num_traits::Float;

/// Result of a one-dimensional minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub arg: f64,
    pub value: f64,
}

const TERNARY_MAX_ITER: usize = 400;

/// Ternary search for a convex function on `[lo, hi]`, stopping once the
/// bracket is narrower than `tol`.
///
/// The returned argument is the smallest minimizer up to `tol`: when the
/// minimum is attained on an interval (flat regions of the hinge, say) the
/// left end of that interval is reported.
pub fn ternary_min<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Minimum {
    debug_assert!(lo <= hi);
    let (mut a, mut b) = (lo, hi);
    let mut iter = 0;
    while b - a > tol && iter < TERNARY_MAX_ITER {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        // `<=` keeps the left part on ties, which biases towards the
        // smallest minimizer on flat stretches.
        if f(m1) <= f(m2) {
            b = m2;
        } else {
            a = m1;
        }
        iter += 1;
    }
    let mid = 0.5 * (a + b);
    let mut best = Minimum { arg: mid, value: f(mid) };
    for x in [lo, hi] {
        let v = f(x);
        if v < best.value {
            best = Minimum { arg: x, value: v };
        }
    }
    leftmost_level(&f, lo, best, tol)
}

/// Move `best.arg` to the left end of the sublevel set `{x : f(x) <= best.value + slack}`.
fn leftmost_level<F: Fn(f64) -> f64>(f: &F, lo: f64, best: Minimum, tol: f64) -> Minimum {
    if !best.value.is_finite() {
        return best;
    }
    let level = best.value + 1e-13 * best.value.abs().max(1.0);
    if f(lo) <= level {
        return Minimum { arg: lo, value: f(lo) };
    }
    let (mut bad, mut good) = (lo, best.arg);
    let mut iter = 0;
    while good - bad > tol && iter < TERNARY_MAX_ITER {
        let mid = 0.5 * (bad + good);
        if f(mid) <= level {
            good = mid;
        } else {
            bad = mid;
        }
        iter += 1;
    }
    let value = f(good);
    if value <= best.value {
        Minimum { arg: good, value }
    } else {
        Minimum { arg: good, value: best.value }
    }
}

/// Dense-grid minimization with local ternary refinement around the best
/// grid point. Used for losses that are not convex.
pub fn grid_min<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, points: usize, tol: f64) -> Minimum {
    let points = points.max(3);
    let step = (hi - lo) / (points - 1) as f64;
    let mut best_k = 0;
    let mut best_v = f64::INFINITY;
    for k in 0..points {
        let v = f(lo + step * k as f64);
        if v < best_v {
            best_v = v;
            best_k = k;
        }
    }
    let left = lo + step * best_k.saturating_sub(1) as f64;
    let right = (lo + step * (best_k + 1) as f64).min(hi);
    let local = ternary_min(&f, left, right, tol);
    let grid_arg = lo + step * best_k as f64;
    if local.value <= best_v {
        local
    } else {
        Minimum { arg: grid_arg, value: best_v }
    }
}

/// Bisection on a monotone predicate: `pred(bad)` is false and `pred(good)`
/// true; returns the point on the `good` side once the bracket is below `tol`
/// or after `max_iter` halvings.
pub fn bisect_boundary<P: Fn(f64) -> bool>(
    pred: P,
    mut bad: f64,
    mut good: f64,
    tol: f64,
    max_iter: usize,
) -> f64 {
    let mut iter = 0;
    while (good - bad).abs() > tol && iter < max_iter {
        let mid = 0.5 * (bad + good);
        if pred(mid) {
            good = mid;
        } else {
            bad = mid;
        }
        iter += 1;
    }
    good
}

/// Root of a decreasing function `h` inside `[lo, hi]` with `h(lo) >= 0 >= h(hi)`.
pub fn bisect_decreasing_root<H: FnMut(f64) -> f64>(
    mut h: H,
    lo: f64,
    hi: f64,
    tol: f64,
    max_iter: usize,
) -> f64 {
    let (mut a, mut b) = (lo, hi);
    let mut iter = 0;
    while b - a > tol && iter < max_iter {
        let mid = 0.5 * (a + b);
        if h(mid) > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
        iter += 1;
    }
    0.5 * (a + b)
}

/// `n` log-spaced points on `[lo, hi]`, endpoints included.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> alloc::vec::Vec<f64> {
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| {
            if k == 0 {
                lo
            } else if k + 1 == n {
                hi
            } else {
                (llo + (lhi - llo) * k as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// `n` evenly spaced points on `[lo, hi]`, endpoints included.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> alloc::vec::Vec<f64> {
    if n == 1 {
        return alloc::vec![lo];
    }
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ternary_finds_quadratic_minimum() {
        let m = ternary_min(|x| (x - 1.25) * (x - 1.25) + 3.0, -50.0, 50.0, 1e-10);
        assert!((m.arg - 1.25).abs() < 1e-6);
        assert!((m.value - 3.0).abs() < 1e-12);
    }

    #[test]
    fn ternary_reports_leftmost_minimizer_on_flat_region() {
        // flat on [-1, 1]
        let f = |x: f64| (x.abs() - 1.0).max(0.0);
        let m = ternary_min(f, -50.0, 50.0, 1e-10);
        assert!((m.arg + 1.0).abs() < 1e-8, "{m:?}");
        assert_eq!(m.value, 0.0);
    }

    #[test]
    fn grid_min_handles_nonconvex() {
        let f = |x: f64| (x * x - 4.0).powi(2) + 0.1 * x;
        let m = grid_min(f, -10.0, 10.0, 100_001, 1e-12);
        assert!(m.arg < 0.0);
        assert!((m.arg + 2.0).abs() < 1e-2);
    }

    #[test]
    fn log_grid_hits_endpoints() {
        let g = log_grid(1e-2, 1e2, 5);
        assert_eq!(g[0], 1e-2);
        assert_eq!(g[4], 1e2);
        assert!((g[2] - 1.0).abs() < 1e-12);
    }
}
