//! Closed-form rate estimates for gravitational decoherence models: energy
//! basis (ABH) with its Planck-scale noise temperature, Diósi-Penrose
//! collapse, interferometric dephasing of massive and photonic probes, and
//! anomalous wave-packet spreading. Inverse solvers answer the usual "what
//! mass / energy / temperature is needed" questions.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{non_negative, positive, Result};
use crate::physcore::{
    BOLTZMANN, GRAVITATIONAL_CONSTANT, HBAR, PLANCK_TEMPERATURE, PLANCK_TIME, SPEED_OF_LIGHT,
};

/// Smallest collapse cutoff length not already excluded, m.
pub const ELL_CUT_FLOOR: f64 = 0.5e-10;

/// Test mass flown through an interferometer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MassiveSystem {
    pub mass: f64,
    pub radius: f64,
    pub velocity: f64,
    /// Propagation distance through the interferometer, m.
    pub distance: f64,
}

impl MassiveSystem {
    pub fn new(mass: f64, radius: f64, velocity: f64, distance: f64) -> Result<Self> {
        Ok(Self {
            mass: non_negative("mass", mass)?,
            radius: positive("radius", radius)?,
            velocity: positive("velocity", velocity)?,
            distance: positive("propagation distance", distance)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    /// ABH correlation time, s.
    pub tau: f64,
    /// ABH noise temperature, K.
    pub theta: f64,
    /// DP cutoff length, m.
    pub ell_cut: f64,
    /// Position-diffusion coefficient, kg²·m²/s³.
    pub lambda_diff: f64,
}

impl ModelParams {
    /// τ derived from Θ; the cutoff is raised to [`ELL_CUT_FLOOR`].
    pub fn from_theta(theta: f64, ell_cut: f64, lambda_diff: f64) -> Result<Self> {
        Ok(Self {
            tau: abh_tau_from_theta(theta)?,
            theta,
            ell_cut: non_negative("cutoff length", ell_cut)?.max(ELL_CUT_FLOOR),
            lambda_diff: non_negative("diffusion coefficient", lambda_diff)?,
        })
    }
}

/// Γ = (ΔE)²τ/ħ².
pub fn gamma_abh(delta_e: f64, tau: f64) -> Result<f64> {
    let delta_e = non_negative("energy spread", delta_e)?;
    Ok(delta_e * delta_e * non_negative("correlation time", tau)? / (HBAR * HBAR))
}

/// Energy spread giving decoherence rate `gamma` at correlation time `tau`.
pub fn delta_e_for_gamma_abh(gamma: f64, tau: f64) -> Result<f64> {
    Ok(HBAR
        * (non_negative("decoherence rate", gamma)? / positive("correlation time", tau)?).sqrt())
}

/// τ = (32π/9)·τ_P·(Θ/T_P).
pub fn abh_tau_from_theta(theta: f64) -> Result<f64> {
    Ok(
        32.0 * PI / 9.0 * PLANCK_TIME * non_negative("noise temperature", theta)?
            / PLANCK_TEMPERATURE,
    )
}

pub fn theta_from_abh_tau(tau: f64) -> Result<f64> {
    Ok(
        non_negative("correlation time", tau)? * PLANCK_TEMPERATURE * 9.0
            / (32.0 * PI * PLANCK_TIME),
    )
}

/// Γ = G·M²/(ħ·√(R² + ℓ²)).
pub fn gamma_dp(sys: &MassiveSystem, ell_cut: f64) -> Result<f64> {
    let ell = non_negative("cutoff length", ell_cut)?;
    Ok(GRAVITATIONAL_CONSTANT * sys.mass * sys.mass / (HBAR * sys.radius.hypot(ell)))
}

/// (ΔΦ)² = m²v³τL/ħ².
pub fn abh_dephasing(sys: &MassiveSystem, tau: f64) -> Result<f64> {
    let tau = non_negative("correlation time", tau)?;
    Ok(sys.mass * sys.mass * sys.velocity.powi(3) * tau * sys.distance / (HBAR * HBAR))
}

/// Noise temperature at which [`abh_dephasing`] reaches `target`.
pub fn abh_theta_for_dephasing(sys: &MassiveSystem, target: f64) -> Result<f64> {
    let target = non_negative("target dephasing", target)?;
    let per_tau = abh_dephasing(sys, 1.0)?;
    theta_from_abh_tau(target / positive("dephasing per unit correlation time", per_tau)?)
}

/// (ΔΦ)² = G·m²·L/(ħ·R·v).
pub fn dp_dephasing(sys: &MassiveSystem) -> f64 {
    GRAVITATIONAL_CONSTANT * sys.mass * sys.mass * sys.distance / (HBAR * sys.radius * sys.velocity)
}

/// Mass at which [`dp_dephasing`] reaches `target`, kg.
pub fn dp_mass_for_dephasing(
    radius: f64,
    velocity: f64,
    distance: f64,
    target: f64,
) -> Result<f64> {
    let unit = MassiveSystem::new(1.0, radius, velocity, distance)?;
    Ok((non_negative("target dephasing", target)? / dp_dephasing(&unit)).sqrt())
}

/// (Δx)² = (Δx)_S² + Λt³/(2m²).
pub fn wavepacket_spread(schrodinger_sq: f64, lambda_diff: f64, mass: f64, t: f64) -> Result<f64> {
    let m = positive("mass", mass)?;
    let t = positive("time", t)?;
    Ok(non_negative("free spread", schrodinger_sq)?
        + non_negative("diffusion coefficient", lambda_diff)? * t.powi(3) / (2.0 * m * m))
}

/// Time at which the anomalous term equals (Δx)_S².
pub fn crossover_time(schrodinger_sq: f64, lambda_diff: f64, mass: f64) -> Result<f64> {
    let m = positive("mass", mass)?;
    Ok((2.0 * m * m * non_negative("free spread", schrodinger_sq)?
        / positive("diffusion coefficient", lambda_diff)?)
    .cbrt())
}

/// (ΔΦ)² = 8G·(k_BΘ)·E²·L/(ħ²c⁶) for a photon of energy E over distance L.
pub fn photon_visibility_loss(theta: f64, energy: f64, distance: f64) -> Result<f64> {
    let kt = BOLTZMANN * non_negative("noise temperature", theta)?;
    let e = non_negative("photon energy", energy)?;
    Ok(
        8.0 * GRAVITATIONAL_CONSTANT * kt * e * e * non_negative("distance", distance)?
            / (HBAR * HBAR * SPEED_OF_LIGHT.powi(6)),
    )
}

/// Mean photon number resolving a phase ΔΦ: 1/ΔΦ².
pub fn photons_for_visibility(delta_phi: f64) -> Result<f64> {
    Ok(positive("phase", delta_phi)?.powi(-2))
}

/// All rates for one system, as reported by the command-line tool.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecoherenceReport {
    pub system: MassiveSystem,
    pub params: ModelParams,
    pub gamma_dp: f64,
    pub abh_dephasing: f64,
    pub dp_dephasing: f64,
    pub abh_theta_for_unit_dephasing: f64,
    pub wavepacket_crossover_time: Option<f64>,
}

pub fn report(
    sys: &MassiveSystem,
    params: &ModelParams,
    schrodinger_sq: f64,
) -> Result<DecoherenceReport> {
    Ok(DecoherenceReport {
        system: *sys,
        params: *params,
        gamma_dp: gamma_dp(sys, params.ell_cut)?,
        abh_dephasing: abh_dephasing(sys, params.tau)?,
        dp_dephasing: dp_dephasing(sys),
        abh_theta_for_unit_dephasing: abh_theta_for_dephasing(sys, 1.0)?,
        wavepacket_crossover_time: if params.lambda_diff > 0.0 && sys.mass > 0.0 {
            Some(crossover_time(
                schrodinger_sq,
                params.lambda_diff,
                sys.mass,
            )?)
        } else {
            None
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physcore::{ATOMIC_MASS_UNIT, ELECTRON_VOLT};

    fn rel(a: f64, b: f64) -> f64 {
        (a / b - 1.0).abs()
    }

    fn sphere(amu: f64, v: f64) -> MassiveSystem {
        MassiveSystem::new(amu * ATOMIC_MASS_UNIT, 100e-9, v, 100e3).unwrap()
    }

    /// Slope of log f against log x over three decades.
    fn loglog_slope(f: impl Fn(f64) -> f64, x0: f64) -> f64 {
        ((f(x0 * 1e3)).ln() - f(x0).ln()) / 1e3f64.ln()
    }

    #[test]
    fn abh_examples() {
        let de = delta_e_for_gamma_abh(1e-3, PLANCK_TIME).unwrap();
        assert!((1.2e-14..=1.6e-14).contains(&de));
        assert!(rel(gamma_abh(de, PLANCK_TIME).unwrap(), 1e-3) < 1e-12);
        assert_eq!(gamma_abh(0.0, PLANCK_TIME).unwrap(), 0.0);
        assert!(rel(gamma_abh(2.0 * de, PLANCK_TIME).unwrap(), 4e-3) < 1e-12);
        assert!(rel(abh_tau_from_theta(PLANCK_TEMPERATURE).unwrap(), 6.02e-43) < 0.01);
        assert_eq!(abh_tau_from_theta(0.0).unwrap(), 0.0);
        assert!(
            rel(
                theta_from_abh_tau(abh_tau_from_theta(3.0).unwrap()).unwrap(),
                3.0
            ) < 1e-12
        );
    }

    #[test]
    fn dp_examples() {
        let g = gamma_dp(&sphere(1e10, 10.0), ELL_CUT_FLOOR).unwrap();
        assert!((1e-3..=3e-3).contains(&g), "{g}");
        assert_eq!(gamma_dp(&sphere(0.0, 10.0), 0.0).unwrap(), 0.0);
        let s = sphere(1e10, 10.0);
        let far = gamma_dp(&s, 1e-3).unwrap();
        assert!(rel(gamma_dp(&s, 2e-3).unwrap(), far / 2.0) < 1e-4);
        let mut last = f64::INFINITY;
        for ell in [0.0, 1e-10, 1e-8, 1e-7, 1e-6, 1e-4] {
            let g = gamma_dp(&s, ell).unwrap();
            assert!(g <= last);
            last = g;
        }
    }

    #[test]
    fn dephasing_examples() {
        assert_eq!(abh_dephasing(&sphere(1e10, 1e4), 0.0).unwrap(), 0.0);
        let m = dp_mass_for_dephasing(100e-9, 10.0, 100e3, 1.0).unwrap() / ATOMIC_MASS_UNIT;
        assert!((1e9..=1e10).contains(&m), "{m}");
        assert!(rel(m, 2.39e9) < 0.01);
        assert!(
            rel(
                dp_dephasing(&sphere(1e10, 5.0)),
                2.0 * dp_dephasing(&sphere(1e10, 10.0))
            ) < 1e-12
        );
        assert_eq!(dp_dephasing(&sphere(0.0, 10.0)), 0.0);

        let sys = sphere(1e10, 1e4);
        let theta = abh_theta_for_dephasing(&sys, 1.0).unwrap();
        let tau = abh_tau_from_theta(theta).unwrap();
        assert!(rel(abh_dephasing(&sys, tau).unwrap(), 1.0) < 1e-12);
        assert!(rel(theta / PLANCK_TEMPERATURE, 6.7e-10) < 0.02);
    }

    #[test]
    fn spread_examples() {
        let m = 1e-17;
        assert_eq!(wavepacket_spread(1e-14, 0.0, m, 3.0).unwrap(), 1e-14);
        let lam = 1e-40;
        let c1 = wavepacket_spread(0.0, lam, m, 1.0).unwrap();
        assert!(rel(wavepacket_spread(0.0, lam, m, 2.0).unwrap(), 8.0 * c1) < 1e-12);
        let t = crossover_time(1e-14, lam, m).unwrap();
        assert!(rel(wavepacket_spread(1e-14, lam, m, t).unwrap(), 2e-14) < 1e-12);
    }

    #[test]
    fn photon_examples() {
        assert_eq!(
            photon_visibility_loss(0.0, ELECTRON_VOLT, 1e8).unwrap(),
            0.0
        );
        let one = photon_visibility_loss(1e10, ELECTRON_VOLT, 1e8).unwrap();
        assert!(
            rel(
                photon_visibility_loss(1e10, 2.0 * ELECTRON_VOLT, 1e8).unwrap(),
                4.0 * one
            ) < 1e-12
        );
        let planck = photon_visibility_loss(PLANCK_TEMPERATURE, ELECTRON_VOLT, 1e8).unwrap();
        assert!(rel(planck, 3.3e-13) < 0.02, "{planck}");
        assert!(rel(photons_for_visibility(1e-8).unwrap(), 1e16) < 1e-12);
        assert_eq!(photons_for_visibility(1.0).unwrap(), 1.0);
        assert!(rel(photons_for_visibility(1e-4).unwrap(), 1e8) < 1e-12);
    }

    #[test]
    fn monomial_exponents() {
        let tau = 1e-50;
        type Case = (f64, Box<dyn Fn(f64) -> f64>, f64);
        let cases: Vec<Case> = vec![
            (
                2.0,
                Box::new(|m| gamma_dp(&sphere(m, 10.0), 0.0).unwrap()),
                1e8,
            ),
            (
                3.0,
                Box::new(move |v| abh_dephasing(&sphere(1e10, v), tau).unwrap()),
                1.0,
            ),
            (
                2.0,
                Box::new(move |m| abh_dephasing(&sphere(m, 10.0), tau).unwrap()),
                1e8,
            ),
            (-1.0, Box::new(|v| dp_dephasing(&sphere(1e10, v))), 1.0),
            (
                1.0,
                Box::new(|l| dp_dephasing(&MassiveSystem::new(1e-17, 1e-7, 10.0, l).unwrap())),
                1.0,
            ),
            (2.0, Box::new(|de| gamma_abh(de, 1e-43).unwrap()), 1e-16),
            (1.0, Box::new(|t| abh_tau_from_theta(t).unwrap()), 1.0),
            (
                2.0,
                Box::new(|e| photon_visibility_loss(1e20, e, 1e8).unwrap()),
                1e-20,
            ),
            (
                1.0,
                Box::new(|t| photon_visibility_loss(t, 1e-19, 1e8).unwrap()),
                1e10,
            ),
            (
                3.0,
                Box::new(|t| wavepacket_spread(0.0, 1e-40, 1e-17, t).unwrap()),
                1e-2,
            ),
            (-2.0, Box::new(|d| photons_for_visibility(d).unwrap()), 1e-8),
        ];
        for (i, (want, f, x0)) in cases.iter().enumerate() {
            let got = loglog_slope(f, *x0);
            assert!((got - want).abs() < 1e-9, "case {i}: slope {got}");
        }
    }

    #[test]
    fn report_populates() {
        let sys = sphere(1e10, 10.0);
        let params = ModelParams::from_theta(1e-5 * PLANCK_TEMPERATURE, 0.0, 1e-40).unwrap();
        assert_eq!(params.ell_cut, ELL_CUT_FLOOR);
        let r = report(&sys, &params, 1e-14).unwrap();
        assert!(r.gamma_dp > 0.0 && r.wavepacket_crossover_time.is_some());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn non_negative_outputs(m in 0.0f64..1e-15, v in 1e-3f64..1e5, l in 1e-3f64..1e9, tau in 0.0f64..1e-40) {
                let sys = MassiveSystem::new(m, 1e-7, v, l).unwrap();
                prop_assert!(gamma_dp(&sys, 1e-10).unwrap() >= 0.0);
                prop_assert!(abh_dephasing(&sys, tau).unwrap() >= 0.0);
                prop_assert!(dp_dephasing(&sys) >= 0.0);
            }

            #[test]
            fn dp_monotone_in_cutoff(a in 0.0f64..1e-5, b in 0.0f64..1e-5) {
                let sys = MassiveSystem::new(1e-17, 1e-7, 10.0, 1e5).unwrap();
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                prop_assert!(gamma_dp(&sys, hi).unwrap() <= gamma_dp(&sys, lo).unwrap());
            }
        }
    }
}
