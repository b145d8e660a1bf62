//! Orbital geometry and relativistic clock-rate bookkeeping: fractional rate
//! offsets of ground and orbiting clocks, pass durations, Doppler magnitudes
//! and light-cone timing constraints for space-based Bell tests.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{non_negative, positive, Error, Result};
use crate::physcore::{
    EARTH_MASS, EARTH_RADIUS, EARTH_ROTATION_RATE, GRAVITATIONAL_CONSTANT, MOON_MASS, MOON_RADIUS,
    MOON_ROTATION_RATE, SPEED_OF_LIGHT,
};

/// A spherical, uniformly rotating gravitating body.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Body {
    mass: f64,
    radius: f64,
    rotation_rate: f64,
}

impl Body {
    pub fn new(mass: f64, radius: f64, rotation_rate: f64) -> Result<Self> {
        Ok(Self {
            mass: positive("body mass", mass)?,
            radius: positive("body radius", radius)?,
            rotation_rate: non_negative("body rotation rate", rotation_rate)?,
        })
    }

    pub fn earth() -> Self {
        Self {
            mass: EARTH_MASS,
            radius: EARTH_RADIUS,
            rotation_rate: EARTH_ROTATION_RATE,
        }
    }

    pub fn moon() -> Self {
        Self {
            mass: MOON_MASS,
            radius: MOON_RADIUS,
            rotation_rate: MOON_ROTATION_RATE,
        }
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn rotation_rate(&self) -> f64 {
        self.rotation_rate
    }

    /// Equatorial rotation speed.
    pub fn surface_speed(&self) -> f64 {
        self.rotation_rate * self.radius
    }

    pub fn gm(&self) -> f64 {
        GRAVITATIONAL_CONSTANT * self.mass
    }

    pub fn schwarzschild_radius(&self) -> f64 {
        2.0 * self.gm() / (SPEED_OF_LIGHT * SPEED_OF_LIGHT)
    }

    fn check_outside(&self, r: f64) -> Result<f64> {
        if r > self.radius && r.is_finite() {
            Ok(r)
        } else {
            Err(Error::Domain {
                what: "orbital radius (must exceed body radius)",
                value: r,
            })
        }
    }
}

/// Satellite position on its orbit. Circular orbits have a = r.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrbitSpec {
    Circular {
        radius: f64,
    },
    Elliptic {
        radius: f64,
        semi_major_axis: f64,
        eccentricity: f64,
    },
}

impl OrbitSpec {
    pub fn circular(radius: f64) -> Result<Self> {
        Ok(Self::Circular {
            radius: positive("orbital radius", radius)?,
        })
    }

    pub fn elliptic(radius: f64, semi_major_axis: f64, eccentricity: f64) -> Result<Self> {
        positive("semi-major axis", semi_major_axis)?;
        if !(0.0..1.0).contains(&eccentricity) {
            return Err(Error::Domain {
                what: "eccentricity",
                value: eccentricity,
            });
        }
        let slack = 1e-12 * semi_major_axis;
        let perigee = semi_major_axis * (1.0 - eccentricity);
        let apogee = semi_major_axis * (1.0 + eccentricity);
        if radius < perigee - slack || radius > apogee + slack {
            return Err(Error::Domain {
                what: "radius outside [perigee, apogee]",
                value: radius,
            });
        }
        Ok(Self::Elliptic {
            radius,
            semi_major_axis,
            eccentricity,
        })
    }

    pub fn radius(&self) -> f64 {
        match *self {
            Self::Circular { radius } | Self::Elliptic { radius, .. } => radius,
        }
    }

    pub fn semi_major_axis(&self) -> f64 {
        match *self {
            Self::Circular { radius } => radius,
            Self::Elliptic {
                semi_major_axis, ..
            } => semi_major_axis,
        }
    }

    pub fn eccentricity(&self) -> f64 {
        match *self {
            Self::Circular { .. } => 0.0,
            Self::Elliptic { eccentricity, .. } => eccentricity,
        }
    }
}

/// Simplified ground-station pass: circular orbit of radius `semi_major_axis`
/// seen above a minimum elevation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PassGeometry {
    pub semi_major_axis: f64,
    pub min_elevation: f64,
    pub body: Body,
}

impl PassGeometry {
    pub fn new(semi_major_axis: f64, min_elevation: f64, body: Body) -> Result<Self> {
        if !(0.0..=PI / 2.0).contains(&min_elevation) {
            return Err(Error::Domain {
                what: "minimum elevation",
                value: min_elevation,
            });
        }
        body.check_outside(semi_major_axis)?;
        Ok(Self {
            semi_major_axis,
            min_elevation,
            body,
        })
    }

    /// Convenience constructor from altitude above the surface.
    pub fn from_altitude(altitude: f64, min_elevation: f64, body: Body) -> Result<Self> {
        Self::new(body.radius + altitude, min_elevation, body)
    }

    /// Orbital angular rate minus body rotation, erroring when not positive.
    fn relative_rate(&self) -> Result<f64> {
        let orbital_rate = (self.body.gm() / self.semi_major_axis.powi(3)).sqrt();
        let rel = orbital_rate - self.body.rotation_rate;
        if rel > 0.0 {
            Ok(rel)
        } else {
            Err(Error::SuperSynchronous {
                orbital_rate,
                rotation_rate: self.body.rotation_rate,
            })
        }
    }
}

/// Reaction/caching timeline for a Bell test with human choosers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HumanBellTiming {
    pub t_question: f64,
    pub t_choice: f64,
    pub t_transmit: f64,
    /// Distance from the pair source to the nearer analyzer.
    pub source_distance: f64,
}

impl HumanBellTiming {
    pub fn new(
        t_question: f64,
        t_choice: f64,
        t_transmit: f64,
        source_distance: f64,
    ) -> Result<Self> {
        if !(t_choice > 0.0) {
            return Err(Error::Domain {
                what: "choice interval",
                value: t_choice,
            });
        }
        if t_question + t_choice > t_transmit {
            return Err(Error::Domain {
                what: "transmit deadline before choice completes",
                value: t_transmit,
            });
        }
        non_negative("source distance", source_distance)?;
        Ok(Self {
            t_question,
            t_choice,
            t_transmit,
            source_distance,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HumanBellGeometry {
    pub min_source_distance: f64,
    pub fraction_of_earth_moon: f64,
    pub rate_gain_vs_full: f64,
    pub rate_gain_vs_midway: f64,
    /// Whether the configured source distance satisfies the light-cone bound.
    pub source_distance_sufficient: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecisionWindows {
    pub earth: f64,
    pub moon: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileSample {
    pub true_anomaly: f64,
    pub radius: f64,
    pub epsilon_satellite: f64,
    pub epsilon_observatory: f64,
    /// ε_observatory − ε_satellite, i.e. clock rate ratio minus one.
    pub net_rate: f64,
}

/// ½(r_s/R + v²/c²) for a clock on the equator of `body`.
pub fn epsilon_observatory(body: &Body) -> f64 {
    let v = body.surface_speed() / SPEED_OF_LIGHT;
    0.5 * (body.schwarzschild_radius() / body.radius + v * v)
}

/// ¾ r_s / r.
pub fn epsilon_satellite_circular(r: f64, body: &Body) -> Result<f64> {
    let r = body.check_outside(r)?;
    Ok(0.75 * body.schwarzschild_radius() / r)
}

/// r_s (1/r − 1/(4a)).
pub fn epsilon_satellite_elliptic(r: f64, semi_major_axis: f64, body: &Body) -> Result<f64> {
    let r = body.check_outside(r)?;
    if !(2.0 * semi_major_axis > r) {
        return Err(Error::Domain {
            what: "semi-major axis (need r < 2a)",
            value: semi_major_axis,
        });
    }
    Ok(body.schwarzschild_radius() * (1.0 / r - 0.25 / semi_major_axis))
}

/// Vis-viva: GM(2/r − 1/a).
pub fn velocity_squared_elliptic(r: f64, semi_major_axis: f64, body: &Body) -> Result<f64> {
    let r = body.check_outside(r)?;
    let v2 = body.gm() * (2.0 / r - 1.0 / semi_major_axis);
    if v2 > 0.0 && semi_major_axis > 0.0 {
        Ok(v2)
    } else {
        Err(Error::Domain {
            what: "squared orbital speed",
            value: v2,
        })
    }
}

pub fn circular_speed(r: f64, body: &Body) -> Result<f64> {
    velocity_squared_elliptic(r, r, body).map(f64::sqrt)
}

/// Tick-interval ratio 1 + ε_observatory − ε_satellite.
pub fn clock_rate_ratio(observatory: &Body, sat: &OrbitSpec) -> Result<f64> {
    let eps_sat = epsilon_satellite_elliptic(sat.radius(), sat.semi_major_axis(), observatory)?;
    Ok(1.0 + epsilon_observatory(observatory) - eps_sat)
}

/// Circular-orbit radius at which ground and satellite clock offsets cancel.
pub fn cancellation_radius(body: &Body) -> Result<f64> {
    let eps = positive("observatory epsilon", epsilon_observatory(body))?;
    Ok(0.75 * body.schwarzschild_radius() / eps)
}

/// |v|/c.
pub fn doppler_fraction(v_radial: f64) -> Result<f64> {
    doppler_fraction_signed(v_radial).map(f64::abs)
}

/// v/c with the sign of the radial velocity kept.
pub fn doppler_fraction_signed(v_radial: f64) -> Result<f64> {
    if v_radial.abs() < SPEED_OF_LIGHT {
        Ok(v_radial / SPEED_OF_LIGHT)
    } else {
        Err(Error::Domain {
            what: "radial velocity",
            value: v_radial,
        })
    }
}

/// Rate offsets sampled uniformly in true anomaly over half an orbit, from
/// perigee (ν = 0) to apogee (ν = π). The other half mirrors it.
pub fn epsilon_profile(
    body: &Body,
    orbit: &OrbitSpec,
    samples: usize,
) -> Result<Vec<ProfileSample>> {
    if samples < 2 {
        return Err(Error::Domain {
            what: "profile sample count",
            value: samples as f64,
        });
    }
    let a = orbit.semi_major_axis();
    let e = orbit.eccentricity();
    let eps_obs = epsilon_observatory(body);
    (0..samples)
        .map(|i| {
            let nu = PI * i as f64 / (samples - 1) as f64;
            let radius = a * (1.0 - e * e) / (1.0 + e * nu.cos());
            let eps_sat = epsilon_satellite_elliptic(radius, a, body)?;
            Ok(ProfileSample {
                true_anomaly: nu,
                radius,
                epsilon_satellite: eps_sat,
                epsilon_observatory: eps_obs,
                net_rate: eps_obs - eps_sat,
            })
        })
        .collect()
}

/// Number of sign flips of the net rate along a profile.
pub fn sign_changes(profile: &[ProfileSample]) -> usize {
    profile
        .windows(2)
        .filter(|w| (w[0].net_rate > 0.0) != (w[1].net_rate > 0.0))
        .count()
}

/// Pass integration time from the simplified orbit model, evaluated exactly
/// as the closed form reads:
/// 2·√(R² + a² − R·a·sin θ) / (√(GM/a³) − Ω) · cos θ / a.
///
/// The cross term lacks the factor 2 of a law-of-cosines chord, so passes come
/// out longer than real LEO passes; [`pass_duration_chord`] gives the geometric
/// reference.
pub fn integration_time(pass: &PassGeometry) -> Result<f64> {
    let rel = pass.relative_rate()?;
    let re = pass.body.radius;
    let a = pass.semi_major_axis;
    let th = pass.min_elevation;
    let chord = (re * re + a * a - re * a * th.sin()).sqrt();
    Ok(2.0 * chord / rel * th.cos() / a)
}

/// Time above the elevation mask for an overhead pass, from spherical
/// geometry: ψ = arccos(R cos θ / a) − θ, T = 2ψ/(ω − Ω).
pub fn pass_duration_chord(pass: &PassGeometry) -> Result<f64> {
    let rel = pass.relative_rate()?;
    let th = pass.min_elevation;
    let psi = (pass.body.radius * th.cos() / pass.semi_major_axis).acos() - th;
    Ok(2.0 * psi.max(0.0) / rel)
}

/// Δt = v·D/c², the window within which two measurements are simultaneous in
/// some frame moving at `v_rel`.
pub fn simultaneity_window(v_rel: f64, separation: f64) -> Result<f64> {
    if !(v_rel > 0.0 && v_rel < SPEED_OF_LIGHT) {
        return Err(Error::Domain {
            what: "relative velocity",
            value: v_rel,
        });
    }
    let separation = positive("separation", separation)?;
    Ok(v_rel * separation / (SPEED_OF_LIGHT * SPEED_OF_LIGHT))
}

pub fn light_travel_distance(dt: f64) -> f64 {
    SPEED_OF_LIGHT * dt
}

/// N = 1/(4Δθ²), from Δθ = 1/(2√N).
pub fn polarization_counts_for_angle_error(delta_theta: f64) -> Result<f64> {
    let d = positive("angle error", delta_theta)?;
    Ok(1.0 / (4.0 * d * d))
}

/// Minimum source distance for human-chosen settings and the pair-rate gain
/// (1/R⁴ scaling) compared with a source at the full or half Earth–Moon
/// distance.
pub fn human_bell_geometry(
    timing: &HumanBellTiming,
    earth_moon_distance: f64,
) -> Result<HumanBellGeometry> {
    let earth_moon_distance = positive("Earth-Moon distance", earth_moon_distance)?;
    let min_source_distance = positive(
        "transmit minus question time",
        SPEED_OF_LIGHT * (timing.t_transmit - timing.t_question),
    )?;
    let fraction = min_source_distance / earth_moon_distance;
    Ok(HumanBellGeometry {
        min_source_distance,
        fraction_of_earth_moon: fraction,
        rate_gain_vs_full: fraction.powi(-4),
        rate_gain_vs_midway: (2.0 * fraction).powi(-4),
        source_distance_sufficient: timing.source_distance >= min_source_distance,
    })
}

/// Each participant's decision window is twice their light travel time to the
/// source.
pub fn decision_window_midway(
    distance_to_earth: f64,
    distance_to_moon: f64,
) -> Result<DecisionWindows> {
    Ok(DecisionWindows {
        earth: 2.0 * non_negative("source distance to Earth", distance_to_earth)? / SPEED_OF_LIGHT,
        moon: 2.0 * non_negative("source distance to Moon", distance_to_moon)? / SPEED_OF_LIGHT,
    })
}
