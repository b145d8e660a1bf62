//! Deterministic 1-D minimization: a uniform coarse grid followed by
//! golden-section refinement inside the bracket around the best grid point.

/// Default number of coarse grid points.
pub const COARSE_POINTS: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
}

/// Minimize `f` over the half-open interval (lo, hi]. Non-finite values are
/// treated as +∞. Returns +∞ at `hi` when `f` is nowhere finite.
pub fn grid_golden_minimize<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, points: usize) -> Minimum {
    let points = points.max(3);
    let step = (hi - lo) / points as f64;
    let eval = |x: f64| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut best = Minimum {
        x: hi,
        value: f64::INFINITY,
    };
    let mut best_i = points;
    for i in 1..=points {
        let x = lo + step * i as f64;
        let v = eval(x);
        if v < best.value {
            best = Minimum { x, value: v };
            best_i = i;
        }
    }
    if !best.value.is_finite() {
        return best;
    }
    let a = lo + step * (best_i as f64 - 1.0);
    let b = (lo + step * (best_i as f64 + 1.0)).min(hi);
    let refined = golden_section(&eval, a, b, 200);
    if refined.value < best.value {
        refined
    } else {
        best
    }
}

fn golden_section<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, max_iter: usize) -> Minimum {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..max_iter {
        if (b - a).abs() <= 1e-14 * (a.abs() + b.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        Minimum { x: c, value: fc }
    } else {
        Minimum { x: d, value: fd }
    }
}

/// Bisection for a root of `f` on [lo, hi] where f(lo) and f(hi) differ in
/// sign. Returns `None` when they do not.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> Option<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if (f_lo > 0.0) == (f_hi > 0.0) {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let fm = f(mid);
        if (fm > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}
