//! Monte-Carlo maximum-likelihood estimates for the single-parameter
//! interferometric measurements, used to check the analytic error formulas.
//!
//! Each replication draws k ~ Binomial(N, P(x_true)) detections and solves
//! P(x) = k/N on the monotone branch of the fringe that contains x_true.

use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::cowsim::{detection_probability, CowInterferometer, CowSignalModel};
use crate::error::{positive, Error, Result};
use crate::homsim::noisy_coincidence;
use crate::optimize::bisect;

/// Interval around `x0` on which `f` is monotone, found by stepping outward
/// until the finite difference changes sign or `span` is exhausted.
fn monotone_bracket<F: Fn(f64) -> f64>(f: &F, x0: f64, step: f64, span: f64) -> (f64, f64) {
    let rising = f(x0 + step) > f(x0 - step);
    let ok = |a: f64, b: f64| (f(b) > f(a)) == rising;
    let mut hi = x0;
    while hi - x0 < span && ok(hi, hi + step) {
        hi += step;
    }
    let mut lo = x0;
    while x0 - lo < span && ok(lo - step, lo) {
        lo -= step;
    }
    (lo, hi)
}

fn invert_on_bracket<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, target: f64) -> f64 {
    let (flo, fhi) = (f(lo), f(hi));
    let (min, max) = (flo.min(fhi), flo.max(fhi));
    if target <= min {
        return if flo <= fhi { lo } else { hi };
    }
    if target >= max {
        return if flo >= fhi { lo } else { hi };
    }
    bisect(|x| f(x) - target, lo, hi).unwrap_or(0.5 * (lo + hi))
}

fn estimates<F: Fn(f64) -> f64, R: Rng + ?Sized>(
    f: F,
    x_true: f64,
    step: f64,
    span: f64,
    n: u64,
    reps: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if n == 0 || reps == 0 {
        return Err(Error::Domain {
            what: "events or replications",
            value: 0.0,
        });
    }
    let prob = f(x_true);
    let (lo, hi) = monotone_bracket(&f, x_true, step, span);
    let draw = Binomial::new(n, prob).map_err(|_| Error::Domain {
        what: "detection probability",
        value: prob,
    })?;
    Ok((0..reps)
        .map(|_| invert_on_bracket(&f, lo, hi, draw.sample(rng) as f64 / n as f64))
        .collect())
}

/// Maximum-likelihood phase estimates from `reps` runs of `n` photons.
pub fn cow_phase_estimates<R: Rng + ?Sized>(
    phi_true: f64,
    model: &CowSignalModel,
    ifo: &CowInterferometer,
    n: u64,
    reps: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    estimates(
        |phi| detection_probability(phi, model, ifo),
        phi_true,
        1e-3,
        2.0 * std::f64::consts::PI,
        n,
        reps,
        rng,
    )
}

/// Maximum-likelihood delay estimates from `reps` runs of `n` coincidences.
pub fn hom_delay_estimates<R: Rng + ?Sized>(
    tau_true: f64,
    sigma: f64,
    domega: f64,
    p: f64,
    n: u64,
    reps: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let sigma = positive("bandwidth", sigma)?;
    let mut scale = 1.0 / sigma;
    if domega != 0.0 {
        scale = scale.min(std::f64::consts::PI / domega.abs());
    }
    estimates(
        |t| noisy_coincidence(t, sigma, domega, p),
        tau_true,
        scale * 1e-3,
        10.0 * scale,
        n,
        reps,
        rng,
    )
}

/// Sample standard deviation with Bessel's correction.
pub fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}
