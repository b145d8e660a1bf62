//! Hong-Ou-Mandel interferometry between a ground station and a satellite:
//! coincidence probabilities for degenerate and frequency-entangled pairs,
//! the relativistic delay between the arms, timing-error optimization and α
//! error contours over bandwidth and altitude.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::cowsim::argmin_by_altitude;
use crate::error::{positive, unit_interval, Error, Result};
use crate::linkbudget::{entangled_pair_rate, LinkModel, LossFactors, OpticalTerminal, SourceSpec};
use crate::optimize::{grid_golden_minimize, COARSE_POINTS};
use crate::physcore::{point_mass_potential, wavelength_to_angular_frequency, SPEED_OF_LIGHT};
use crate::relorbit::{integration_time, Body, PassGeometry};

/// Largest photon half-bandwidth accepted by scans, rad/s.
pub const MAX_BANDWIDTH: f64 = 4.7e13;

const C2: f64 = SPEED_OF_LIGHT * SPEED_OF_LIGHT;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HomSource {
    pub omega_1: f64,
    pub omega_2: f64,
    /// Half-bandwidth of each photon, rad/s.
    pub sigma: f64,
}

impl HomSource {
    pub fn new(omega_1: f64, omega_2: f64, sigma: f64) -> Result<Self> {
        Ok(Self {
            omega_1: positive("photon frequency", omega_1)?,
            omega_2: positive("photon frequency", omega_2)?,
            sigma: positive("bandwidth", sigma)?,
        })
    }

    pub fn from_wavelengths(wavelength_1: f64, wavelength_2: f64, sigma: f64) -> Result<Self> {
        Self::new(
            wavelength_to_angular_frequency(wavelength_1)?,
            wavelength_to_angular_frequency(wavelength_2)?,
            sigma,
        )
    }

    pub fn is_degenerate(&self) -> bool {
        self.omega_1 == self.omega_2
    }

    pub fn domega(&self) -> f64 {
        self.omega_1 - self.omega_2
    }
}

/// Arm geometry and the kinematic/gravitational state of both stations.
/// Potentials follow U = −GM/r.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct HomGeometry {
    pub delay_length: f64,
    pub delta_length: f64,
    pub v_ground_los: f64,
    pub v_sat_los: f64,
    pub v_ground_sq: f64,
    pub v_sat_sq: f64,
    pub u_ground: f64,
    pub u_sat: f64,
    pub control_delay: f64,
}

impl HomGeometry {
    pub fn validate(&self) -> Result<()> {
        positive("delay length", self.delay_length)?;
        if self.delta_length.abs() >= 1e-3 * self.delay_length {
            return Err(Error::Domain {
                what: "delay-line mismatch (must be << delay length)",
                value: self.delta_length,
            });
        }
        Ok(())
    }

    /// (1 + n·v_S/c)/(1 + n·v_G/c) − 1.
    fn doppler_factor(&self) -> f64 {
        (self.v_sat_los - self.v_ground_los)
            / SPEED_OF_LIGHT
            / (1.0 + self.v_ground_los / SPEED_OF_LIGHT)
    }

    /// (v_S² − v_G²)/2c² − (U_S − U_G)/c².
    fn rate_offset(&self) -> f64 {
        (self.v_sat_sq - self.v_ground_sq) / (2.0 * C2) - (self.u_sat - self.u_ground) / C2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalTiming {
    pub tau_opt: f64,
    pub dtau_opt: f64,
}

/// ½(1 − e^{−2σ²τ²}).
pub fn hom_dip_degenerate(tau: f64, sigma: f64) -> f64 {
    0.5 * (1.0 - (-2.0 * sigma * sigma * tau * tau).exp())
}

/// ½(1 − cos(Δω·τ)·e^{−2σ²τ²}).
pub fn hom_entangled(tau: f64, sigma: f64, domega: f64) -> f64 {
    0.5 * (1.0 - (domega * tau).cos() * (-2.0 * sigma * sigma * tau * tau).exp())
}

/// (p/2)(1 − cos(Δωτ)e^{−2σ²τ²}) + (1 − p)/2.
pub fn noisy_coincidence(tau: f64, sigma: f64, domega: f64, p: f64) -> f64 {
    p * hom_entangled(tau, sigma, domega) + 0.5 * (1.0 - p)
}

/// p = (1 − N_noise·Δt_R)²·F; both photons must arrive noise-free.
pub fn quality_factor_hom(noise_rate: f64, dt_r: f64, fidelity: f64) -> Result<f64> {
    let single = crate::bellstats::effective_purity(1.0, noise_rate, dt_r)?;
    Ok(single * single * unit_interval("fidelity", fidelity)?)
}

/// Delay between the arms from Doppler, time dilation and redshift:
/// (ℓ/c)·[((1 + v_S·n/c)/(1 + v_G·n/c))·(1 + (v_S² − v_G²)/2c² − (U_S − U_G)/c²) − 1].
pub fn relativistic_time_shift(geo: &HomGeometry) -> f64 {
    let d = geo.doppler_factor();
    let g = geo.rate_offset();
    geo.delay_length / SPEED_OF_LIGHT * (d + g + d * g)
}

/// τ_GR = (ℓ/c)(Δv²/2c² − ΔU/c²), the part a measurement is after.
pub fn gr_time_shift(geo: &HomGeometry) -> f64 {
    geo.delay_length / SPEED_OF_LIGHT * geo.rate_offset()
}

/// τ_GR + Δℓ/c + τ_c plus the first-order Doppler delay.
pub fn total_time_shift(geo: &HomGeometry) -> Result<f64> {
    geo.validate()?;
    let doppler = geo.delay_length / SPEED_OF_LIGHT * geo.doppler_factor();
    Ok(gr_time_shift(geo) + geo.delta_length / SPEED_OF_LIGHT + geo.control_delay + doppler)
}

/// δφ = Δω·τ.
pub fn hom_phase_shift(domega: f64, tau_rel: f64) -> f64 {
    domega * tau_rel
}

/// Per-coincidence delay uncertainty
/// √(1 − p²e^{−4σ²τ²}cos²(Δωτ)) / (p·e^{−2σ²τ²}·|4τσ²cos(Δωτ) + Δω sin(Δωτ)|).
/// Returns +∞ where the coincidence curve is flat.
pub fn timing_error(tau: f64, sigma: f64, domega: f64, p: f64) -> f64 {
    let v = (-2.0 * sigma * sigma * tau * tau).exp();
    let (s, c) = (domega * tau).sin_cos();
    let denom = p * v * (4.0 * tau * sigma * sigma * c + domega * s).abs();
    if denom <= 0.0 {
        return f64::INFINITY;
    }
    crate::cowsim::fringe_variance(p, -2.0 * sigma * sigma * tau * tau, s).sqrt() / denom
}

/// Delay minimizing [`timing_error`] over (0, max(6/σ, 4π/Δω)]. The coarse
/// grid keeps at least 32 points per half beat period so the refinement
/// never straddles several fringes.
pub fn optimal_timing_error(sigma: f64, domega: f64, p: f64) -> Result<OptimalTiming> {
    let sigma = positive("bandwidth", sigma)?;
    let beat_span = if domega != 0.0 {
        4.0 * PI / domega.abs()
    } else {
        0.0
    };
    let hi = (6.0 / sigma).max(beat_span);
    let points = if domega != 0.0 {
        let half_period = PI / domega.abs();
        ((32.0 * hi / half_period).ceil() as usize).clamp(COARSE_POINTS, 1 << 20)
    } else {
        COARSE_POINTS
    };
    let m = grid_golden_minimize(|t| timing_error(t, sigma, domega, p), 0.0, hi, points);
    Ok(OptimalTiming {
        tau_opt: m.x,
        dtau_opt: m.value,
    })
}

/// Δα = Δτ / ((ℓ/c)·(ΔU/c²)·√N_c), as a magnitude.
pub fn alpha_error_hom(dtau: f64, delay_length: f64, delta_u: f64, n_c: f64) -> Result<f64> {
    let n_c = positive("coincidence count", n_c)?;
    if delta_u == 0.0 {
        return Err(Error::Infeasible(
            "zero potential difference gives no redshift signal".into(),
        ));
    }
    Ok((dtau / (delay_length / SPEED_OF_LIGHT * delta_u / C2 * n_c.sqrt())).abs())
}

/// Sum of point-mass potentials from (mass, distance) pairs.
pub fn superposed_potential(sources: &[(f64, f64)]) -> Result<f64> {
    sources
        .iter()
        .map(|&(m, r)| point_mass_potential(m, r))
        .sum()
}

/// Photon wavelengths sent down the two channels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HomMode {
    Degenerate {
        wavelength: f64,
    },
    NonDegenerate {
        wavelength_1: f64,
        wavelength_2: f64,
    },
}

impl HomMode {
    pub fn wavelengths(&self) -> (f64, f64) {
        match *self {
            Self::Degenerate { wavelength } => (wavelength, wavelength),
            Self::NonDegenerate {
                wavelength_1,
                wavelength_2,
            } => (wavelength_1, wavelength_2),
        }
    }

    pub fn domega(&self) -> Result<f64> {
        let (a, b) = self.wavelengths();
        if a == b {
            return Ok(0.0);
        }
        crate::physcore::angular_frequency_difference(a, b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HomScanScenario {
    /// Satellite (transmitting) terminal.
    pub tx: OpticalTerminal,
    /// Ground (receiving) terminal.
    pub rx: OpticalTerminal,
    pub link_model: LinkModel,
    /// Per-channel losses.
    pub losses: LossFactors,
    pub source: SourceSpec,
    pub min_elevation: f64,
    pub body: Body,
    pub delay_length: f64,
    pub noise_rate: f64,
    pub dt_r: f64,
    pub mode: HomMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HomScanCell {
    pub sigma: f64,
    pub altitude: f64,
    pub feasible: bool,
    pub integration_time: f64,
    pub coincidences: f64,
    pub delta_u: f64,
    pub tau_opt: f64,
    pub dtau_opt: f64,
    pub delta_alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomScan {
    /// σ-major: all altitudes for the first σ, then the next σ.
    pub cells: Vec<HomScanCell>,
    pub best: Option<usize>,
}

/// Δα over a σ × altitude grid. Each photon is diffracted at its own
/// wavelength; pairs need both channels to succeed.
pub fn hom_alpha_scan(sigmas: &[f64], altitudes: &[f64], sc: &HomScanScenario) -> Result<HomScan> {
    for &s in sigmas {
        positive("bandwidth", s)?;
        if s > MAX_BANDWIDTH {
            return Err(Error::Domain {
                what: "bandwidth above 4.7e13 rad/s cap",
                value: s,
            });
        }
    }
    let p = quality_factor_hom(sc.noise_rate, sc.dt_r, sc.source.fidelity)?;
    let domega = sc.mode.domega()?;
    let (l1, l2) = sc.mode.wavelengths();
    let timing: Vec<OptimalTiming> = sigmas
        .par_iter()
        .map(|&s| optimal_timing_error(s, domega, p))
        .collect::<Result<_>>()?;

    let per_altitude: Vec<(f64, f64, f64, bool)> = altitudes
        .par_iter()
        .map(|&h| {
            let pass = PassGeometry::from_altitude(h, sc.min_elevation, sc.body)?;
            let t = match integration_time(&pass) {
                Ok(t) => t,
                Err(Error::SuperSynchronous { .. }) => 0.0,
                Err(e) => return Err(e),
            };
            let eta_1 = sc
                .link_model
                .efficiency(&sc.tx, &sc.rx, h, l1, &sc.losses)?;
            let eta_2 = sc
                .link_model
                .efficiency(&sc.tx, &sc.rx, h, l2, &sc.losses)?;
            let n_c = entangled_pair_rate(&sc.source, eta_1, eta_2)? * t;
            let gm = sc.body.gm();
            let delta_u = gm / sc.body.radius() - gm / (sc.body.radius() + h);
            Ok((t, n_c, delta_u, n_c > 0.0 && delta_u > 0.0))
        })
        .collect::<Result<_>>()?;

    let mut cells = Vec::with_capacity(sigmas.len() * altitudes.len());
    for (&sigma, opt) in sigmas.iter().zip(&timing) {
        for (&altitude, &(t, n_c, delta_u, feasible)) in altitudes.iter().zip(&per_altitude) {
            let delta_alpha = if feasible {
                alpha_error_hom(opt.dtau_opt, sc.delay_length, delta_u, n_c)?
            } else {
                f64::INFINITY
            };
            cells.push(HomScanCell {
                sigma,
                altitude,
                feasible,
                integration_time: t,
                coincidences: n_c,
                delta_u,
                tau_opt: opt.tau_opt,
                dtau_opt: opt.dtau_opt,
                delta_alpha,
            });
        }
    }
    let best = argmin_by_altitude(
        cells
            .iter()
            .map(|c| (c.feasible, c.delta_alpha, c.altitude)),
    );
    Ok(HomScan { cells, best })
}

/// Cell-by-cell ratio Δα(first)/Δα(second) for scans on the same grid.
pub fn ratio_grid(first: &HomScan, second: &HomScan) -> Result<Vec<f64>> {
    if first.cells.len() != second.cells.len() {
        return Err(Error::Domain {
            what: "scan grid size mismatch",
            value: second.cells.len() as f64,
        });
    }
    Ok(first
        .cells
        .iter()
        .zip(&second.cells)
        .map(|(a, b)| a.delta_alpha / b.delta_alpha)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physcore::{EARTH_MASS, EARTH_MOON_DISTANCE, EARTH_RADIUS, MOON_MASS};
    use crate::relorbit::{circular_speed, epsilon_observatory, epsilon_satellite_circular};

    fn rel(a: f64, b: f64) -> f64 {
        (a / b - 1.0).abs()
    }

    fn gateway(ell: f64) -> HomGeometry {
        let earth = Body::earth();
        HomGeometry {
            delay_length: ell,
            v_ground_sq: earth.surface_speed().powi(2),
            v_sat_sq: 1.022e3f64.powi(2),
            u_ground: point_mass_potential(EARTH_MASS, EARTH_RADIUS).unwrap(),
            u_sat: point_mass_potential(EARTH_MASS, EARTH_MOON_DISTANCE).unwrap(),
            ..Default::default()
        }
    }

    #[test]
    fn dips() {
        assert_eq!(hom_dip_degenerate(0.0, 1e13), 0.0);
        assert!((hom_dip_degenerate(1e-13, 1e13) - 0.4323).abs() < 1e-4);
        assert!((hom_dip_degenerate(1.0, 1e13) - 0.5).abs() < 1e-15);
        assert_eq!(hom_entangled(0.0, 1e13, 1e15), 0.0);
        let tau = PI / 1e15;
        assert!((hom_entangled(tau, 1e9, 1e15) - 1.0).abs() < 1e-9);
        for t in [1e-15, 3e-14, 2e-13] {
            assert_eq!(hom_entangled(t, 2e13, 0.0), hom_dip_degenerate(t, 2e13));
        }
        assert_eq!(noisy_coincidence(1e-14, 1e13, 1e15, 0.0), 0.5);
        assert_eq!(
            noisy_coincidence(1e-14, 1e13, 1e15, 1.0),
            hom_entangled(1e-14, 1e13, 1e15)
        );
        assert!((noisy_coincidence(0.0, 1e13, 1e15, 0.9) - 0.05).abs() < 1e-15);
    }

    #[test]
    fn quality_factors() {
        assert_eq!(quality_factor_hom(0.0, 1e-9, 0.95).unwrap(), 0.95);
        assert_eq!(quality_factor_hom(0.5e9, 1e-9, 1.0).unwrap(), 0.25);
        let single = crate::cowsim::quality_factor(1e8, 1e-9, 0.9).unwrap();
        let squared = quality_factor_hom(1e8, 1e-9, 0.9).unwrap();
        assert!(rel(squared, single * single / 0.9) < 1e-12);
    }

    #[test]
    fn gateway_time_shift() {
        let geo = gateway(1e3);
        let tau = relativistic_time_shift(&geo);
        assert!(rel(tau.abs(), 2.3e-15) < 0.1);
        // the satellite sits higher in the potential, so its arm lags
        assert!(tau < 0.0);
        let phase = hom_phase_shift(
            crate::physcore::angular_frequency_difference(1500e-9, 1600e-9).unwrap(),
            tau.abs(),
        );
        assert!((0.17..=0.21).contains(&phase));
        let twice = hom_phase_shift(7.85e13, relativistic_time_shift(&gateway(2e3)));
        assert!(rel(twice, 2.0 * hom_phase_shift(7.85e13, tau)) < 1e-12);

        // lunar potential at a 70,000 km Gateway apolune barely changes it
        let mut both = geo;
        both.u_sat =
            superposed_potential(&[(EARTH_MASS, EARTH_MOON_DISTANCE), (MOON_MASS, 7e7)]).unwrap();
        assert!(rel(relativistic_time_shift(&both), tau) < 0.01);
    }

    #[test]
    fn equal_states_no_shift() {
        let g = HomGeometry {
            delay_length: 1e3,
            v_ground_los: 5.0,
            v_sat_los: 5.0,
            v_ground_sq: 9.0,
            v_sat_sq: 9.0,
            u_ground: -1e7,
            u_sat: -1e7,
            ..Default::default()
        };
        assert_eq!(relativistic_time_shift(&g), 0.0);
    }

    #[test]
    fn doppler_dominates_line_of_sight() {
        let g = HomGeometry {
            delay_length: 1e3,
            v_sat_los: 3e3,
            ..Default::default()
        };
        let tau = relativistic_time_shift(&g);
        assert!(rel(tau / (1e3 / SPEED_OF_LIGHT), 1e-5) < 0.01);
    }

    #[test]
    fn matches_clock_epsilon_difference() {
        let earth = Body::earth();
        for h in [400e3, 2e6, 3.58e7] {
            let r = earth.radius() + h;
            let v = circular_speed(r, &earth).unwrap();
            let g = HomGeometry {
                delay_length: 1e3,
                v_ground_sq: earth.surface_speed().powi(2),
                v_sat_sq: v * v,
                u_ground: point_mass_potential(earth.mass(), earth.radius()).unwrap(),
                u_sat: point_mass_potential(earth.mass(), r).unwrap(),
                ..Default::default()
            };
            let scaled = relativistic_time_shift(&g) * SPEED_OF_LIGHT / 1e3;
            let eps = epsilon_satellite_circular(r, &earth).unwrap() - epsilon_observatory(&earth);
            assert!(rel(scaled, eps) < 1e-3, "h = {h}");
        }
    }

    #[test]
    fn total_shift() {
        let mut g = gateway(1e3);
        g.v_sat_los = 10.0;
        let gr = gr_time_shift(&g);
        let plain = HomGeometry {
            v_sat_los: 0.0,
            ..g
        };
        assert!(rel(total_time_shift(&plain).unwrap(), gr) < 1e-12);
        let doppler = 1e3 / SPEED_OF_LIGHT * 10.0 / SPEED_OF_LIGHT;
        g.control_delay = -(gr + doppler);
        assert!(total_time_shift(&g).unwrap().abs() < 1e-27);
        // GEO vs ground is redshift-dominated
        let earth = Body::earth();
        let r = 4.2164e7;
        let geo = HomGeometry {
            delay_length: 1e3,
            v_ground_sq: earth.surface_speed().powi(2),
            v_sat_sq: circular_speed(r, &earth).unwrap().powi(2),
            u_ground: point_mass_potential(EARTH_MASS, EARTH_RADIUS).unwrap(),
            u_sat: point_mass_potential(EARTH_MASS, r).unwrap(),
            ..Default::default()
        };
        let ratio = gr_time_shift(&geo).abs() / (1e3 / SPEED_OF_LIGHT);
        assert!((5e-10..7e-10).contains(&ratio));
        let bad = HomGeometry {
            delta_length: 10.0,
            ..geo
        };
        assert!(total_time_shift(&bad).is_err());
    }

    #[test]
    fn timing_error_oracle() {
        for &(sigma, domega, p) in &[(1e13, 0.0, 0.95), (3e13, 1.2e15, 0.8)] {
            for tau in [3e-15, 2e-14, 7e-14] {
                let h = tau * 1e-6;
                let dp = (noisy_coincidence(tau + h, sigma, domega, p)
                    - noisy_coincidence(tau - h, sigma, domega, p))
                    / (2.0 * h);
                let pc = noisy_coincidence(tau, sigma, domega, p);
                let oracle = (pc * (1.0 - pc)).sqrt() / dp.abs();
                assert!(rel(timing_error(tau, sigma, domega, p), oracle) < 1e-5);
            }
        }
        assert!(timing_error(0.0, 1e13, 1e15, 0.9).is_infinite());
    }

    #[test]
    fn degenerate_optimum_scales_inverse_sigma() {
        let mut products = Vec::new();
        for sigma in [1e12, 3e12, 1e13, 5e13] {
            let o = optimal_timing_error(sigma, 0.0, 0.95).unwrap();
            products.push(o.dtau_opt * sigma);
        }
        for w in products.windows(2) {
            assert!(rel(w[0], w[1]) < 1e-6);
        }
    }

    #[test]
    fn non_degenerate_advantage() {
        let domega = crate::physcore::angular_frequency_difference(780e-9, 1550e-9).unwrap();
        let mut nd = Vec::new();
        for sigma in [1e12, 1e13, 4.7e13] {
            let d = optimal_timing_error(sigma, 0.0, 0.95).unwrap().dtau_opt;
            let n = optimal_timing_error(sigma, domega, 0.95).unwrap().dtau_opt;
            assert!(d / n >= 10.0, "sigma = {sigma}: {}", d / n);
            nd.push(n);
        }
        assert!(rel(nd[0], nd[2]) < 0.1);
        // bandwidth comparable to the beat frequency
        let d = optimal_timing_error(domega, 0.0, 0.95).unwrap().dtau_opt;
        let n = optimal_timing_error(domega, domega, 0.95).unwrap().dtau_opt;
        assert!(n < d);
    }

    #[test]
    fn alpha_error_scaling() {
        let a = alpha_error_hom(1e-16, 1e3, 6e7, 1e6).unwrap();
        assert!(rel(alpha_error_hom(1e-16, 1e3, 6e7, 4e6).unwrap(), a / 2.0) < 1e-12);
        assert!(rel(alpha_error_hom(1e-16, 2e3, 6e7, 1e6).unwrap(), a / 2.0) < 1e-12);
        assert!(matches!(
            alpha_error_hom(1e-16, 1e3, 0.0, 1e6),
            Err(Error::Infeasible(_))
        ));
    }

    fn scenario(mode: HomMode) -> HomScanScenario {
        HomScanScenario {
            tx: OpticalTerminal::new(0.3, 1.05).unwrap(),
            rx: OpticalTerminal::new(1.0, 1.05).unwrap(),
            link_model: LinkModel::Full,
            losses: LossFactors::lumped(0.03).unwrap(),
            source: SourceSpec::new(1e9, 0.01, 0.95).unwrap(),
            min_elevation: 20f64.to_radians(),
            body: Body::earth(),
            delay_length: 1e3,
            noise_rate: 0.0,
            dt_r: 1e-9,
            mode,
        }
    }

    #[test]
    fn degenerate_equals_zero_split() {
        let deg = hom_alpha_scan(
            &[1e13, 4e13],
            &[8e5, 1.4e6],
            &scenario(HomMode::Degenerate { wavelength: 780e-9 }),
        )
        .unwrap();
        let same = hom_alpha_scan(
            &[1e13, 4e13],
            &[8e5, 1.4e6],
            &scenario(HomMode::NonDegenerate {
                wavelength_1: 780e-9,
                wavelength_2: 780e-9,
            }),
        )
        .unwrap();
        assert_eq!(deg, same);
    }

    #[test]
    fn bandwidth_cap_enforced() {
        let sc = scenario(HomMode::Degenerate { wavelength: 780e-9 });
        assert!(hom_alpha_scan(&[5e13], &[1e6], &sc).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn even_in_tau(tau in 0.0f64..1e-12, sigma in 1e11f64..5e13, dw in -2e15f64..2e15) {
                prop_assert_eq!(hom_entangled(-tau, sigma, dw), hom_entangled(tau, sigma, dw));
            }

            #[test]
            fn coincidence_bounds(tau in -1e-12f64..1e-12, sigma in 1e11f64..5e13, dw in 0.0f64..2e15, p in 0.0f64..1.0) {
                let c = noisy_coincidence(tau, sigma, dw, p);
                prop_assert!(c >= (1.0 - p) / 2.0 - 1e-12 && c <= (1.0 + p) / 2.0 + 1e-12);
            }
        }
    }
}
