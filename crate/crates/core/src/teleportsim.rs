//! Quality of the entangled resource for ground-to-space teleportation:
//! Werner states, simulated two-qubit polarization tomography with
//! maximum-likelihood reconstruction, fidelity maps and mission rates.

use nalgebra::{DMatrix, DVector, Matrix4, Vector4};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{positive, unit_interval, Error, Result};
use crate::linkbudget::{
    entangled_one_channel_rate, LinkModel, LossFactors, OpticalTerminal, SourceSpec,
};
use crate::physcore::db_to_transmission;

type C4 = Matrix4<Complex64>;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const EIGEN_TOL: f64 = -1e-10;

pub const MLE_MAX_ITERATIONS: usize = 5000;
pub const MLE_TOLERANCE: f64 = 1e-10;

/// Classical teleportation cannot exceed this fidelity.
pub const CLASSICAL_FIDELITY_BOUND: f64 = 2.0 / 3.0;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Two-qubit density matrix in the |HH⟩, |HV⟩, |VH⟩, |VV⟩ basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix4(C4);

impl DensityMatrix4 {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(m: C4) -> Result<Self> {
        let asym = (m - m.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if asym > HERMITIAN_TOL {
            return Err(Error::Domain {
                what: "density matrix anti-Hermitian part",
                value: asym,
            });
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::Domain {
                what: "density matrix trace",
                value: tr.re,
            });
        }
        let s = Self(m);
        let min = s.eigenvalues()[3];
        if min < EIGEN_TOL {
            return Err(Error::Domain {
                what: "density matrix eigenvalue",
                value: min,
            });
        }
        Ok(s)
    }

    pub fn maximally_mixed() -> Self {
        Self(C4::identity() * c(0.25, 0.0))
    }

    pub fn pure(psi: &Vector4<Complex64>) -> Result<Self> {
        let norm = psi.norm();
        positive("state vector norm", norm)?;
        let v = psi / c(norm, 0.0);
        Self::new(v * v.adjoint())
    }

    /// (|HH⟩ + |VV⟩)/√2.
    pub fn phi_plus() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::pure(&Vector4::new(
            c(s, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(s, 0.0),
        ))
        .expect("normalized")
    }

    pub fn matrix(&self) -> &C4 {
        &self.0
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> [f64; 4] {
        hermitian_eigenvalues(&self.0)
    }

    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }

    /// ⟨ψ|ρ|ψ⟩ for a normalized ψ.
    pub fn expectation(&self, psi: &Vector4<Complex64>) -> f64 {
        (psi.adjoint() * self.0 * psi)[(0, 0)].re
    }
}

fn hermitian_eigenvalues(m: &C4) -> [f64; 4] {
    let e = m.symmetric_eigen().eigenvalues;
    let mut v = [e[0], e[1], e[2], e[3]];
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// p·|Φ⁺⟩⟨Φ⁺| + (1 − p)·I/4.
pub fn werner_state(p: f64) -> Result<DensityMatrix4> {
    let p = unit_interval("Werner parameter", p)?;
    let m = DensityMatrix4::phi_plus().0 * c(p, 0.0)
        + DensityMatrix4::maximally_mixed().0 * c(1.0 - p, 0.0);
    DensityMatrix4::new(m)
}

/// Tr(ρσ) for a pure target σ.
pub fn state_fidelity(rho: &DensityMatrix4, target: &DensityMatrix4) -> Result<f64> {
    let purity = target.purity();
    if (purity - 1.0).abs() > 1e-9 {
        return Err(Error::Domain {
            what: "target purity (must be a pure state)",
            value: purity,
        });
    }
    Ok((rho.0 * target.0).trace().re)
}

/// ½·Σ|λᵢ(ρ − σ)|.
pub fn trace_distance(a: &DensityMatrix4, b: &DensityMatrix4) -> f64 {
    0.5 * hermitian_eigenvalues(&(a.0 - b.0))
        .iter()
        .map(|x| x.abs())
        .sum::<f64>()
}

/// Single-photon polarization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Polarization {
    H,
    V,
    D,
    A,
    R,
    L,
}

impl Polarization {
    fn ket(self) -> [Complex64; 2] {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            Self::H => [c(1.0, 0.0), c(0.0, 0.0)],
            Self::V => [c(0.0, 0.0), c(1.0, 0.0)],
            Self::D => [c(s, 0.0), c(s, 0.0)],
            Self::A => [c(s, 0.0), c(-s, 0.0)],
            Self::R => [c(s, 0.0), c(0.0, s)],
            Self::L => [c(s, 0.0), c(0.0, -s)],
        }
    }

    pub fn orthogonal(self) -> Self {
        match self {
            Self::H => Self::V,
            Self::V => Self::H,
            Self::D => Self::A,
            Self::A => Self::D,
            Self::R => Self::L,
            Self::L => Self::R,
        }
    }
}

fn product_ket(a: Polarization, b: Polarization) -> Vector4<Complex64> {
    let (x, y) = (a.ket(), b.ket());
    Vector4::new(x[0] * y[0], x[0] * y[1], x[1] * y[0], x[1] * y[1])
}

/// Analyzer orientation for the two photons. Each setting records four
/// outcomes: (a, b), (a, b⊥), (a⊥, b), (a⊥, b⊥).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Setting {
    pub a: Polarization,
    pub b: Polarization,
}

impl Setting {
    pub fn outcome_kets(&self) -> [Vector4<Complex64>; 4] {
        let (a, b) = (self.a, self.b);
        [
            product_ket(a, b),
            product_ket(a, b.orthogonal()),
            product_ket(a.orthogonal(), b),
            product_ket(a.orthogonal(), b.orthogonal()),
        ]
    }
}

/// The standard sixteen-setting two-qubit tomography set.
pub fn tomography_settings() -> [Setting; 16] {
    use Polarization::*;
    [
        (H, H),
        (H, V),
        (V, V),
        (V, H),
        (R, H),
        (R, V),
        (D, V),
        (D, H),
        (D, R),
        (D, D),
        (R, D),
        (H, D),
        (V, D),
        (V, L),
        (H, L),
        (R, L),
    ]
    .map(|(a, b)| Setting { a, b })
}

/// How counts are distributed over settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Acquisition {
    /// Equal time per setting; every outcome is an independent Poisson
    /// draw with mean n_total/16·Tr(ρΠ).
    #[default]
    PerSetting,
    /// Exactly round(n_total) events shared multinomially over all outcomes.
    FixedTotal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TomographyRun {
    pub settings: [Setting; 16],
    pub counts: [[u64; 4]; 16],
    /// Expected number of signal events over all settings.
    pub n_total: f64,
}

impl TomographyRun {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    fn kets_and_counts(&self) -> Vec<(Vector4<Complex64>, f64)> {
        self.settings
            .iter()
            .zip(&self.counts)
            .flat_map(|(s, n)| {
                s.outcome_kets()
                    .into_iter()
                    .zip(n.iter().map(|&k| k as f64))
            })
            .collect()
    }
}

/// Expected count for every setting and outcome.
pub fn expected_counts(rho: &DensityMatrix4, n_total: f64) -> [[f64; 4]; 16] {
    tomography_settings().map(|s| {
        s.outcome_kets()
            .map(|k| n_total / 16.0 * rho.expectation(&k).max(0.0))
    })
}

pub fn simulate_tomography(rho: &DensityMatrix4, n_total: f64, seed: u64) -> Result<TomographyRun> {
    simulate_tomography_with(
        rho,
        n_total,
        Acquisition::PerSetting,
        &mut ChaCha8Rng::seed_from_u64(seed),
    )
}

pub fn simulate_tomography_with<R: rand::Rng + ?Sized>(
    rho: &DensityMatrix4,
    n_total: f64,
    acquisition: Acquisition,
    rng: &mut R,
) -> Result<TomographyRun> {
    let n_total = positive("expected signal events", n_total)?;
    let mean = expected_counts(rho, n_total);
    let counts = match acquisition {
        Acquisition::PerSetting => mean.map(|row| {
            row.map(|m| {
                if m > 0.0 {
                    Poisson::new(m).expect("positive mean").sample(rng) as u64
                } else {
                    0
                }
            })
        }),
        Acquisition::FixedTotal => {
            let probs: Vec<f64> = mean.iter().flatten().map(|m| m / n_total).collect();
            let draws = crate::bellstats::multinomial(n_total.round() as u64, &probs, rng);
            let mut out = [[0u64; 4]; 16];
            for (i, k) in draws.into_iter().enumerate() {
                out[i / 4][i % 4] = k;
            }
            out
        }
    };
    Ok(TomographyRun {
        settings: tomography_settings(),
        counts,
        n_total,
    })
}

fn pauli(i: usize) -> [[Complex64; 2]; 2] {
    let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
    match i {
        0 => [[o, z], [z, o]],
        1 => [[z, o], [o, z]],
        2 => [[z, c(0.0, -1.0)], [c(0.0, 1.0), z]],
        _ => [[o, z], [z, -o]],
    }
}

fn pauli_product(i: usize, j: usize) -> C4 {
    let (a, b) = (pauli(i), pauli(j));
    C4::from_fn(|r, col| a[r / 2][col / 2] * b[r % 2][col % 2])
}

/// Least-squares inversion of per-setting frequencies in the Pauli basis.
/// The result is Hermitian with unit trace but may have negative eigenvalues.
pub fn linear_inversion(run: &TomographyRun) -> C4 {
    let basis: Vec<C4> = (0..16).map(|k| pauli_product(k / 4, k % 4)).collect();
    let mut rows = Vec::new();
    let mut freqs = Vec::new();
    for (s, n) in run.settings.iter().zip(&run.counts) {
        let total: u64 = n.iter().sum();
        if total == 0 {
            continue;
        }
        for (ket, &k) in s.outcome_kets().iter().zip(n) {
            rows.push(
                basis
                    .iter()
                    .map(|p| (ket.adjoint() * p * ket)[(0, 0)].re / 4.0)
                    .collect::<Vec<_>>(),
            );
            freqs.push(k as f64 / total as f64);
        }
    }
    if rows.is_empty() {
        return DensityMatrix4::maximally_mixed().0;
    }
    let b = DMatrix::from_fn(rows.len(), 16, |r, k| rows[r][k]);
    let f = DVector::from_vec(freqs);
    let r = b
        .svd(true, true)
        .solve(&f, 1e-12)
        .expect("SVD computed with U and V");
    let mut m = C4::identity() * c(0.25, 0.0);
    for k in 1..16 {
        m += basis[k] * c(r[k] / 4.0, 0.0);
    }
    m
}

/// Eigenvalues clipped at zero, renormalized, then mixed with a little I/4
/// so the result is strictly positive definite.
fn nearest_positive_definite(m: &C4, mix: f64) -> C4 {
    let h = (m + m.adjoint()) * c(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let vals: Vec<f64> = eig.eigenvalues.iter().map(|v| v.max(0.0)).collect();
    let sum: f64 = vals.iter().sum();
    if sum <= 0.0 {
        return DensityMatrix4::maximally_mixed().0;
    }
    let d = C4::from_diagonal(&Vector4::from_iterator(
        vals.iter().map(|v| c(v / sum, 0.0)),
    ));
    let psd = eig.eigenvectors * d * eig.eigenvectors.adjoint();
    psd * c(1.0 - mix, 0.0) + C4::identity() * c(mix / 4.0, 0.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MleResult {
    pub state: DensityMatrix4,
    pub iterations: usize,
    pub converged: bool,
    /// Mean log-probability per recorded count.
    pub log_likelihood: f64,
}

struct Likelihood {
    kets: Vec<(Vector4<Complex64>, f64)>,
    total: f64,
}

impl Likelihood {
    fn rho(a: &C4) -> C4 {
        let m = a * a.adjoint();
        m / m.trace()
    }

    fn value(&self, a: &C4) -> f64 {
        let rho = Self::rho(a);
        let mut sum = 0.0;
        for (k, n) in &self.kets {
            if *n > 0.0 {
                let p = (k.adjoint() * rho * k)[(0, 0)].re;
                if !(p > 0.0) {
                    return f64::NEG_INFINITY;
                }
                sum += n * p.ln();
            }
        }
        sum / self.total
    }

    /// Ascent direction 2(G − Tr(Gρ)I)A/Tr(AA†), kept lower triangular.
    fn gradient(&self, a: &C4) -> C4 {
        let t = (a * a.adjoint()).trace().re;
        let rho = Self::rho(a);
        let mut g = C4::zeros();
        for (k, n) in &self.kets {
            if *n > 0.0 {
                let p = (k.adjoint() * rho * k)[(0, 0)].re.max(1e-300);
                g += k * k.adjoint() * c(n / (p * self.total), 0.0);
            }
        }
        let shift = (g * rho).trace();
        let mut d = (g - C4::identity() * shift) * a * c(2.0 / t, 0.0);
        d.fill_upper_triangle(c(0.0, 0.0), 1);
        d
    }
}

fn normalize(a: C4) -> C4 {
    let t = (a * a.adjoint()).trace().re.sqrt();
    a / c(t, 0.0)
}

/// Maximum-likelihood state over ρ = AA†/Tr(AA†) with A lower triangular,
/// by accelerated gradient ascent with backtracking and momentum restart.
/// Starts from the linear-inversion estimate made positive definite.
pub fn mle_reconstruct(run: &TomographyRun) -> Result<MleResult> {
    let total = run.total();
    if total == 0 {
        return Err(Error::Infeasible("tomography run has no counts".into()));
    }
    let lik = Likelihood {
        kets: run.kets_and_counts(),
        total: total as f64,
    };
    let start = nearest_positive_definite(&linear_inversion(run), 1e-3);
    let mut x = normalize(
        start
            .cholesky()
            .expect("positive definite by construction")
            .l(),
    );
    let mut fx = lik.value(&x);
    let mut y = x;
    let mut momentum_k = 1.0f64;
    let mut step = 0.1;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < MLE_MAX_ITERATIONS {
        iterations += 1;
        let fy = lik.value(&y);
        let g = lik.gradient(&y);
        let g2: f64 = g.iter().map(|z| z.norm_sqr()).sum();
        let (mut x_new, mut f_new);
        loop {
            x_new = normalize(y + g * c(step, 0.0));
            f_new = lik.value(&x_new);
            if f_new >= fy + 0.5 * step * g2 || step < 1e-18 {
                break;
            }
            step *= 0.5;
        }
        if !(f_new >= fx) {
            // momentum overshot; restart from the current best iterate
            if y == x {
                converged = true;
                break;
            }
            y = x;
            momentum_k = 1.0;
            continue;
        }
        let improvement = f_new - fx;
        let beta = (momentum_k - 1.0) / (momentum_k + 2.0);
        momentum_k += 1.0;
        y = x_new + (x_new - x) * c(beta, 0.0);
        x = x_new;
        fx = f_new;
        step *= 2.0;
        if improvement < MLE_TOLERANCE {
            converged = true;
            break;
        }
    }

    let rho = Likelihood::rho(&x);
    let rho = (rho + rho.adjoint()) * c(0.5, 0.0);
    let rho = rho / rho.trace();
    Ok(MleResult {
        state: DensityMatrix4::new(rho)?,
        iterations,
        converged,
        log_likelihood: fx,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FidelityCell {
    pub p: f64,
    pub n_total: f64,
    pub mean_fidelity: f64,
    pub stddev_fidelity: f64,
    pub min_fidelity: f64,
    pub max_fidelity: f64,
    pub mean_iterations: f64,
    pub all_converged: bool,
}

/// Mean fidelity to Φ⁺ of reconstructed Werner states over a p × N grid,
/// p-major. Cell i draws from stream i of a generator seeded with `seed`, so
/// results do not depend on thread count.
pub fn fidelity_map(
    ps: &[f64],
    ns: &[f64],
    reps: usize,
    seed: u64,
    acquisition: Acquisition,
) -> Result<Vec<FidelityCell>> {
    if ps.is_empty() || ns.is_empty() || reps == 0 {
        return Err(Error::Domain {
            what: "fidelity map grid size",
            value: 0.0,
        });
    }
    let target = DensityMatrix4::phi_plus();
    (0..ps.len() * ns.len())
        .into_par_iter()
        .map(|idx| {
            let (p, n) = (ps[idx / ns.len()], ns[idx % ns.len()]);
            let rho = werner_state(p)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(idx as u64);
            let mut fids = Vec::with_capacity(reps);
            let mut iterations = 0usize;
            let mut all_converged = true;
            for _ in 0..reps {
                let run = simulate_tomography_with(&rho, n, acquisition, &mut rng)?;
                let fit = match mle_reconstruct(&run) {
                    Ok(fit) => fit,
                    // nothing detected: no information beyond the prior
                    Err(Error::Infeasible(_)) => MleResult {
                        state: DensityMatrix4::maximally_mixed(),
                        iterations: 0,
                        converged: true,
                        log_likelihood: 0.0,
                    },
                    Err(e) => return Err(e),
                };
                iterations += fit.iterations;
                all_converged &= fit.converged;
                fids.push(state_fidelity(&fit.state, &target)?);
            }
            let mean = fids.iter().sum::<f64>() / reps as f64;
            let var = if reps > 1 {
                fids.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / (reps - 1) as f64
            } else {
                0.0
            };
            Ok(FidelityCell {
                p,
                n_total: n,
                mean_fidelity: mean,
                stddev_fidelity: var.sqrt(),
                min_fidelity: fids.iter().copied().fold(f64::INFINITY, f64::min),
                max_fidelity: fids.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                mean_iterations: iterations as f64 / reps as f64,
                all_converged,
            })
        })
        .collect()
}

/// One photon of each pair sent to a distant terminal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TeleportScenario {
    pub tx: OpticalTerminal,
    pub rx: OpticalTerminal,
    pub wavelength: f64,
    pub range: f64,
    pub link_model: LinkModel,
    pub losses: LossFactors,
    /// Loss on top of `losses`, dB.
    pub extra_loss_db: f64,
    pub source: SourceSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TeleportRate {
    pub link_efficiency: f64,
    pub events_per_s: f64,
}

impl TeleportRate {
    /// Integration time needed for `n` events.
    pub fn time_for_counts(&self, n: f64) -> Result<f64> {
        if self.events_per_s <= 0.0 {
            return Err(Error::Infeasible("zero event rate".into()));
        }
        Ok(n / self.events_per_s)
    }
}

pub fn teleport_scenario_rate(sc: &TeleportScenario) -> Result<TeleportRate> {
    let eta = sc
        .link_model
        .efficiency(&sc.tx, &sc.rx, sc.range, sc.wavelength, &sc.losses)?
        * db_to_transmission(sc.extra_loss_db);
    Ok(TeleportRate {
        link_efficiency: eta,
        events_per_s: entangled_one_channel_rate(&sc.source, eta)?,
    })
}

/// Largest noise rate keeping noise:signal ≤ (1 − P)/P. Fails if that rate
/// would put a noise event in every detection window.
pub fn noise_requirement(signal_rate: f64, purity_target: f64, dt_r: f64) -> Result<f64> {
    let signal_rate = crate::error::non_negative("signal rate", signal_rate)?;
    if !(purity_target > 0.0 && purity_target <= 1.0) {
        return Err(Error::Domain {
            what: "purity target",
            value: purity_target,
        });
    }
    positive("detection window", dt_r)?;
    let noise = signal_rate * (1.0 - purity_target) / purity_target;
    if noise * dt_r >= 1.0 {
        return Err(Error::SaturatedNoise(noise * dt_r));
    }
    Ok(noise)
}
