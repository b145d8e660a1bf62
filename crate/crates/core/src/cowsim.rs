//! Single-photon gravitational phase (COW-type) interferometry between a
//! ground station and a satellite: phase prediction, fringe statistics,
//! operating-point optimization and α error versus orbit altitude.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{non_negative, positive, unit_interval, Error, Result};
use crate::linkbudget::{single_photon_rate, LinkModel, LossFactors, OpticalTerminal, SourceSpec};
use crate::optimize::{grid_golden_minimize, COARSE_POINTS};
use crate::physcore::{db_to_transmission, SPEED_OF_LIGHT};
use crate::relorbit::{integration_time, Body, PassGeometry};

/// Unbalanced interferometer pair separated in height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CowInterferometer {
    pub wavelength: f64,
    /// Height difference between the two interferometers, m.
    pub altitude_difference: f64,
    /// Delay-line length ℓ, m.
    pub delay_length: f64,
    pub gravity: f64,
    pub bias_phase: f64,
    /// Redshift-violation parameter; zero in general relativity.
    pub alpha: f64,
    /// Group index of the delay line; multiplies ℓ in the phase.
    pub refractive_index: f64,
}

impl CowInterferometer {
    pub fn new(
        wavelength: f64,
        altitude_difference: f64,
        delay_length: f64,
        gravity: f64,
    ) -> Result<Self> {
        Ok(Self {
            wavelength: positive("wavelength", wavelength)?,
            altitude_difference: non_negative("altitude difference", altitude_difference)?,
            delay_length: positive("delay length", delay_length)?,
            gravity: non_negative("gravitational acceleration", gravity)?,
            bias_phase: 0.0,
            alpha: 0.0,
            refractive_index: 1.0,
        })
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_refractive_index(mut self, n: f64) -> Self {
        self.refractive_index = n;
        self
    }

    /// ω₀ = 2πc/λ.
    pub fn omega0(&self) -> f64 {
        2.0 * PI * SPEED_OF_LIGHT / self.wavelength
    }
}

/// Photon bandwidth and overall fringe quality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CowSignalModel {
    /// Half-bandwidth σ, rad/s.
    pub sigma: f64,
    /// Quality factor p.
    pub quality: f64,
}

impl CowSignalModel {
    pub fn new(sigma: f64, quality: f64) -> Result<Self> {
        Ok(Self {
            sigma: positive("bandwidth", sigma)?,
            quality: unit_interval("quality factor", quality)?,
        })
    }

    pub fn from_noise(sigma: f64, fidelity: f64, noise_rate: f64, dt_r: f64) -> Result<Self> {
        Self::new(sigma, quality_factor(noise_rate, dt_r, fidelity)?)
    }

    fn envelope(&self, phi: f64, omega0: f64) -> f64 {
        let tau = phi / omega0;
        (-2.0 * self.sigma * self.sigma * tau * tau).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalPhase {
    pub phi_opt: f64,
    pub dphi_opt: f64,
}

/// φ_GR = (1 + α)·(2π/λ)·g·h·nℓ/c².
pub fn gravitational_phase(ifo: &CowInterferometer) -> f64 {
    (1.0 + ifo.alpha) * 2.0 * PI / ifo.wavelength
        * ifo.gravity
        * ifo.altitude_difference
        * ifo.refractive_index
        * ifo.delay_length
        / (SPEED_OF_LIGHT * SPEED_OF_LIGHT)
}

/// First-order Doppler phase (2π/λ)·ℓ·v/c; signed like `v`.
pub fn doppler_phase(wavelength: f64, delay_length: f64, v: f64) -> Result<f64> {
    let wavelength = positive("wavelength", wavelength)?;
    let delay_length = positive("delay length", delay_length)?;
    Ok(2.0 * PI / wavelength * delay_length * v / SPEED_OF_LIGHT)
}

/// P_A = (p/2)(1 − e^{−2σ²τ²} cos φ) + (1 − p)/2 with τ = φ/ω₀.
pub fn detection_probability(phi: f64, model: &CowSignalModel, ifo: &CowInterferometer) -> f64 {
    let v = model.envelope(phi, ifo.omega0());
    0.5 * model.quality * (1.0 - v * phi.cos()) + 0.5 * (1.0 - model.quality)
}

/// Per-detection phase uncertainty ΔP_A / |∂P_A/∂φ|:
///
/// √(1 − p²V²cos²φ) / (p·V·|sin φ + 4σ²φ/ω₀²·cos φ|), V = e^{−2σ²φ²/ω₀²}.
///
/// Returns +∞ at stationary points of the fringe. Divide by √N for N events.
pub fn phase_error(phi: f64, model: &CowSignalModel, ifo: &CowInterferometer) -> f64 {
    let w0 = ifo.omega0();
    let v = model.envelope(phi, w0);
    let p = model.quality;
    let slope = phi.sin() + 4.0 * model.sigma * model.sigma * phi / (w0 * w0) * phi.cos();
    let denom = p * v * slope.abs();
    if denom <= 0.0 {
        return f64::INFINITY;
    }
    let tau = phi / w0;
    fringe_variance(p, -2.0 * model.sigma * model.sigma * tau * tau, phi.sin()).sqrt() / denom
}

/// 1 − p²V²cos²x with V = e^{log_v}, written as (1 − p²V²) + p²V²sin²x so it
/// stays accurate where the fringe is at an extremum.
pub(crate) fn fringe_variance(p: f64, log_v: f64, sin_x: f64) -> f64 {
    let pv2 = p * p * (2.0 * log_v).exp();
    ((1.0 - p * p) - p * p * (2.0 * log_v).exp_m1() + pv2 * sin_x * sin_x).max(0.0)
}

/// The estimator in the form it is commonly printed, with the derivative
/// terms |4(φ²/ω₀²)σ² cos φ + ω₀ sin φ| in the denominator. The mixed units
/// make it scale as 1/ω₀; kept for comparison with [`phase_error`].
pub fn phase_error_as_printed(phi: f64, model: &CowSignalModel, ifo: &CowInterferometer) -> f64 {
    let w0 = ifo.omega0();
    let v = model.envelope(phi, w0);
    let p = model.quality;
    let denom = p
        * v
        * (4.0 * phi * phi / (w0 * w0) * model.sigma * model.sigma * phi.cos() + w0 * phi.sin())
            .abs();
    if denom <= 0.0 {
        return f64::INFINITY;
    }
    let c = p * v * phi.cos();
    (1.0 - c * c).max(0.0).sqrt() / denom
}

/// Bias phase minimizing [`phase_error`] on (0, 2π).
pub fn optimal_phase_error(model: &CowSignalModel, ifo: &CowInterferometer) -> OptimalPhase {
    let m = grid_golden_minimize(
        |phi| phase_error(phi, model, ifo),
        0.0,
        2.0 * PI,
        COARSE_POINTS,
    );
    OptimalPhase {
        phi_opt: m.x,
        dphi_opt: m.value,
    }
}

/// p = (1 − N_noise·Δt_R)·F.
pub fn quality_factor(noise_rate: f64, dt_r: f64, fidelity: f64) -> Result<f64> {
    crate::bellstats::effective_purity(fidelity, noise_rate, dt_r)
}

/// Local gravitational acceleration used in the phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GravityModel {
    /// Fixed g regardless of altitude.
    Uniform { g: f64 },
    /// g(h) = g_surface·(R/(R + h))².
    InverseSquare { g_surface: f64 },
}

impl GravityModel {
    pub fn at(&self, altitude: f64, body: &Body) -> f64 {
        match *self {
            Self::Uniform { g } => g,
            Self::InverseSquare { g_surface } => {
                let s = body.radius() / (body.radius() + altitude);
                g_surface * s * s
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CowScanScenario {
    /// Satellite (transmitting) terminal.
    pub tx: OpticalTerminal,
    /// Ground (receiving) terminal.
    pub rx: OpticalTerminal,
    pub link_model: LinkModel,
    pub losses: LossFactors,
    pub source: SourceSpec,
    pub min_elevation: f64,
    pub body: Body,
    pub wavelength: f64,
    pub delay_length: f64,
    pub refractive_index: f64,
    pub fiber_loss_db_per_km: f64,
    pub sigma: f64,
    pub noise_rate: f64,
    pub dt_r: f64,
    pub gravity: GravityModel,
}

impl CowScanScenario {
    /// Beer's-law transmission of the delay fiber.
    pub fn fiber_transmission(&self) -> f64 {
        db_to_transmission(self.fiber_loss_db_per_km * self.delay_length / 1e3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CowScanCell {
    pub altitude: f64,
    /// False when no pass occurs (super-synchronous orbit or zero flux).
    pub feasible: bool,
    pub integration_time: f64,
    pub photons: f64,
    pub phi_gr: f64,
    pub dphi_opt: f64,
    pub delta_alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CowScan {
    pub cells: Vec<CowScanCell>,
    /// Index of the feasible cell with the smallest Δα.
    pub best: Option<usize>,
}

/// Δα = Δφ_opt / (φ_GR·√N) per altitude, with N the photons collected during
/// one pass.
pub fn alpha_error_scan(altitudes: &[f64], sc: &CowScanScenario) -> Result<CowScan> {
    let model = CowSignalModel::from_noise(sc.sigma, sc.source.fidelity, sc.noise_rate, sc.dt_r)?;
    let probe = CowInterferometer::new(sc.wavelength, 1.0, sc.delay_length, 1.0)?;
    let opt = optimal_phase_error(&model, &probe);
    let fiber = sc.fiber_transmission();
    let cells: Vec<CowScanCell> = altitudes
        .par_iter()
        .map(|&h| {
            let pass = PassGeometry::from_altitude(h, sc.min_elevation, sc.body)?;
            let ifo = CowInterferometer::new(
                sc.wavelength,
                h,
                sc.delay_length,
                sc.gravity.at(h, &sc.body),
            )?
            .with_refractive_index(sc.refractive_index);
            let phi_gr = gravitational_phase(&ifo);
            let t = match integration_time(&pass) {
                Ok(t) => t,
                Err(Error::SuperSynchronous { .. }) => 0.0,
                Err(e) => return Err(e),
            };
            let eta = sc
                .link_model
                .efficiency(&sc.tx, &sc.rx, h, sc.wavelength, &sc.losses)?
                * fiber;
            let photons = single_photon_rate(&sc.source, eta)? * t;
            let feasible = photons > 0.0 && phi_gr > 0.0;
            let delta_alpha = if feasible {
                opt.dphi_opt / (phi_gr * photons.sqrt())
            } else {
                f64::INFINITY
            };
            Ok(CowScanCell {
                altitude: h,
                feasible,
                integration_time: t,
                photons,
                phi_gr,
                dphi_opt: opt.dphi_opt,
                delta_alpha,
            })
        })
        .collect::<Result<_>>()?;
    let best = argmin_by_altitude(
        cells
            .iter()
            .map(|c| (c.feasible, c.delta_alpha, c.altitude)),
    );
    Ok(CowScan { cells, best })
}

/// Smallest value among feasible entries; ties go to the lowest altitude so
/// the choice does not depend on grid order.
pub(crate) fn argmin_by_altitude<I: Iterator<Item = (bool, f64, f64)>>(items: I) -> Option<usize> {
    let mut best: Option<(usize, f64, f64)> = None;
    for (i, (ok, v, h)) in items.enumerate() {
        if !ok || !v.is_finite() {
            continue;
        }
        match best {
            Some((_, bv, bh)) if v > bv || (v == bv && h >= bh) => {}
            _ => best = Some((i, v, h)),
        }
    }
    best.map(|b| b.0)
}
