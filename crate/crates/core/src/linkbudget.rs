//! Free-space optical link budget: diffraction-limited collection efficiency,
//! photon and pair delivery rates, and background noise.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{non_negative, positive, unit_interval, Error, Result};

/// A telescope aperture with the beam quality of the light it launches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OpticalTerminal {
    pub aperture: f64,
    pub m_squared: f64,
}

impl OpticalTerminal {
    pub fn new(aperture: f64, m_squared: f64) -> Result<Self> {
        positive("aperture diameter", aperture)?;
        if !(m_squared >= 1.0) {
            return Err(Error::Domain {
                what: "beam quality M^2",
                value: m_squared,
            });
        }
        Ok(Self {
            aperture,
            m_squared,
        })
    }
}

/// Multiplicative efficiencies outside the diffraction term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LossFactors {
    pub eta_rx: f64,
    pub eta_d: f64,
    pub eta_tx: f64,
    pub eta_atm: f64,
    pub eta_margin: f64,
}

impl LossFactors {
    pub fn new(
        eta_rx: f64,
        eta_d: f64,
        eta_tx: f64,
        eta_atm: f64,
        eta_margin: f64,
    ) -> Result<Self> {
        Ok(Self {
            eta_rx: unit_interval("receiver efficiency", eta_rx)?,
            eta_d: unit_interval("detector efficiency", eta_d)?,
            eta_tx: unit_interval("transmitter efficiency", eta_tx)?,
            eta_atm: unit_interval("atmospheric transmission", eta_atm)?,
            eta_margin: unit_interval("margin", eta_margin)?,
        })
    }

    pub fn lossless() -> Self {
        Self {
            eta_rx: 1.0,
            eta_d: 1.0,
            eta_tx: 1.0,
            eta_atm: 1.0,
            eta_margin: 1.0,
        }
    }

    /// All losses lumped into the margin term.
    pub fn lumped(total: f64) -> Result<Self> {
        Ok(Self {
            eta_margin: unit_interval("lumped efficiency", total)?,
            ..Self::lossless()
        })
    }

    pub fn aggregate(&self) -> f64 {
        aggregate_losses(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SourceSpec {
    /// Pulse (clock) rate, Hz.
    pub clock_rate: f64,
    /// Pair-production probability per pulse.
    pub pair_probability: f64,
    pub fidelity: f64,
}

impl SourceSpec {
    pub fn new(clock_rate: f64, pair_probability: f64, fidelity: f64) -> Result<Self> {
        Ok(Self {
            clock_rate: positive("clock rate", clock_rate)?,
            pair_probability: unit_interval("pair probability", pair_probability)?,
            fidelity: unit_interval("source fidelity", fidelity)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct NoiseEnvironment {
    /// Background radiance, photons s⁻¹ m⁻² sr⁻¹ Hz⁻¹.
    pub radiance: f64,
    /// Full linear field of view, rad.
    pub fov: f64,
    pub collection_area: f64,
    pub bandwidth: f64,
    /// Excess counts from the source itself, 1/s.
    pub source_excess: f64,
    pub dark_rate: f64,
    pub eta_rx: f64,
}

impl NoiseEnvironment {
    pub fn validate(&self) -> Result<()> {
        non_negative("radiance", self.radiance)?;
        non_negative("field of view", self.fov)?;
        non_negative("collection area", self.collection_area)?;
        non_negative("filter bandwidth", self.bandwidth)?;
        non_negative("source excess rate", self.source_excess)?;
        non_negative("dark rate", self.dark_rate)?;
        non_negative("receiver efficiency", self.eta_rx)?;
        Ok(())
    }
}

/// Far-field efficiency together with the validity flag for the
/// approximation. Evaluating outside the far field is allowed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FarFieldEfficiency {
    pub efficiency: f64,
    pub far_field_valid: bool,
}

/// Exponent k in p = (1 − N·Δt_R)^k · F.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NoiseExponent {
    /// Single detection (one photon must be noise-free).
    Single,
    /// Two-photon coincidence (both detections must be noise-free).
    Squared,
}

impl NoiseExponent {
    pub fn power(self) -> i32 {
        match self {
            Self::Single => 1,
            Self::Squared => 2,
        }
    }
}

/// Which diffraction formula a scenario uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkModel {
    /// [`link_efficiency`]
    Full,
    /// [`link_efficiency_far_field`]
    FarField,
}

impl LinkModel {
    pub fn efficiency(
        self,
        tx: &OpticalTerminal,
        rx: &OpticalTerminal,
        range: f64,
        wavelength: f64,
        losses: &LossFactors,
    ) -> Result<f64> {
        match self {
            Self::Full => link_efficiency(tx, rx, range, wavelength, losses),
            Self::FarField => {
                // the far-field expression exceeds one at short range
                link_efficiency_far_field(tx, rx, range, wavelength, losses)
                    .map(|f| f.efficiency.min(1.0))
            }
        }
    }
}

pub fn aggregate_losses(f: &LossFactors) -> f64 {
    f.eta_rx * f.eta_d * f.eta_tx * f.eta_atm * f.eta_margin
}

/// η_x · (1 − exp(−2π²D_T²D_R² / (π²D_T⁴ + (M²)²R²λ²))).
///
/// This is the closed form as usually quoted. Note that its small-argument
/// limit is 2π² times [`link_efficiency_far_field`], not equal to it.
pub fn link_efficiency(
    tx: &OpticalTerminal,
    rx: &OpticalTerminal,
    range: f64,
    wavelength: f64,
    losses: &LossFactors,
) -> Result<f64> {
    let range = positive("range", range)?;
    let wavelength = positive("wavelength", wavelength)?;
    let dt2 = tx.aperture * tx.aperture;
    let dr2 = rx.aperture * rx.aperture;
    let m2 = tx.m_squared;
    let spread = m2 * m2 * range * range * wavelength * wavelength;
    let x = 2.0 * PI * PI * dt2 * dr2 / (PI * PI * dt2 * dt2 + spread);
    Ok(losses.aggregate() * -(-x).exp_m1())
}

/// η_x · D_R² / (M²·(λ/D_T)·R)².
pub fn link_efficiency_far_field(
    tx: &OpticalTerminal,
    rx: &OpticalTerminal,
    range: f64,
    wavelength: f64,
    losses: &LossFactors,
) -> Result<FarFieldEfficiency> {
    let range = positive("range", range)?;
    let wavelength = positive("wavelength", wavelength)?;
    let spot = tx.m_squared * (wavelength / tx.aperture) * range;
    Ok(FarFieldEfficiency {
        efficiency: losses.aggregate() * rx.aperture * rx.aperture / (spot * spot),
        far_field_valid: far_field_valid(range, tx.aperture, wavelength),
    })
}

/// R ≥ 10·πD_T²/λ.
pub fn far_field_valid(range: f64, d_tx: f64, wavelength: f64) -> bool {
    range >= 10.0 * PI * d_tx * d_tx / wavelength
}

/// Received single-photon flux F_clock·η.
pub fn single_photon_rate(src: &SourceSpec, eta: f64) -> Result<f64> {
    Ok(src.clock_rate * unit_interval("link efficiency", eta)?)
}

/// One photon of each pair sent over the link: F_clock·p₁·η.
pub fn entangled_one_channel_rate(src: &SourceSpec, eta: f64) -> Result<f64> {
    Ok(src.clock_rate * src.pair_probability * unit_interval("link efficiency", eta)?)
}

/// Both photons sent over separate links: F_clock·p₁·η₁·η₂.
pub fn entangled_pair_rate(src: &SourceSpec, eta_1: f64, eta_2: f64) -> Result<f64> {
    Ok(src.clock_rate
        * src.pair_probability
        * unit_interval("link efficiency", eta_1)?
        * unit_interval("link efficiency", eta_2)?)
}

/// η_Rx·(W·A·FOV²/4·BW + S_n) + D_r.
pub fn noise_rate(env: &NoiseEnvironment) -> f64 {
    let background = env.radiance * env.collection_area * env.fov * env.fov / 4.0 * env.bandwidth;
    env.eta_rx * (background + env.source_excess) + env.dark_rate
}

/// Largest noise rate that still leaves quality factor `p_target`, inverting
/// p = (1 − N·Δt_R)^k · F.
pub fn max_noise_for_purity(
    fidelity: f64,
    p_target: f64,
    dt_r: f64,
    exponent: NoiseExponent,
) -> Result<f64> {
    let dt_r = positive("timing window", dt_r)?;
    unit_interval("fidelity", fidelity)?;
    if !(p_target > 0.0) {
        return Err(Error::Domain {
            what: "target purity",
            value: p_target,
        });
    }
    if p_target > fidelity {
        return Err(Error::Infeasible(format!(
            "target purity {p_target} exceeds source fidelity {fidelity}"
        )));
    }
    let k = f64::from(exponent.power());
    Ok((1.0 - (p_target / fidelity).powf(1.0 / k)) / dt_r)
}
