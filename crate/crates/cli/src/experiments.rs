//! Dispatch from a validated scenario to the core models.

use dsql_core::bellstats::{
    bell_mission_scan, chsh_s, expected_s, n_sigma, required_counts, sigma_s,
    simulate_bell_counts_with,
};
use dsql_core::cowsim::alpha_error_scan;
use dsql_core::decoherence as dec;
use dsql_core::homsim::{hom_alpha_scan, ratio_grid, HomMode};
use dsql_core::linkbudget::{
    entangled_one_channel_rate, entangled_pair_rate, far_field_valid, link_efficiency,
    link_efficiency_far_field,
};
use dsql_core::physcore::{ATOMIC_MASS_UNIT, PLANCK_TEMPERATURE, PLANCK_TIME};
use dsql_core::relorbit::{
    clock_rate_ratio, decision_window_midway, epsilon_observatory, epsilon_profile,
    epsilon_satellite_circular, human_bell_geometry, sign_changes, OrbitSpec,
};
use dsql_core::teleportsim::{
    fidelity_map, noise_requirement, teleport_scenario_rate, TeleportRate,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::output::{Cell, Table};
use crate::scenario::{Experiment, HomScanKind, Scenario};
use crate::CliError;

pub struct RunResult {
    pub table: Table,
    /// Scalar findings recorded in the summary.
    pub extras: Value,
}

/// Figures commonly quoted for the reference cases, reported next to the
/// computed values.
const REFERENCE_TELEPORT_RATE: f64 = 250.0;
const REFERENCE_ABH_THETA_OVER_PLANCK: f64 = 1e-5;
const REFERENCE_PHOTON_PHASE: f64 = 1e-8;

pub fn run(sc: &Scenario, seed: Option<u64>) -> Result<RunResult, CliError> {
    if sc.is_monte_carlo() && seed.is_none() {
        return Err(CliError::Validation {
            line: 0,
            message: format!("scenario '{}' is Monte-Carlo and needs a seed", sc.name),
        });
    }
    let seed = seed.unwrap_or(0);
    match &sc.experiment {
        Experiment::ClockCircular { body, altitudes } => {
            let mut t = Table::new(&[
                "altitude_m",
                "radius_m",
                "epsilon_satellite",
                "epsilon_observatory",
                "net_rate",
            ]);
            let eps_obs = epsilon_observatory(body);
            for &h in &altitudes.0 {
                let r = body.radius() + h;
                let eps = epsilon_satellite_circular(r, body)?;
                let ratio = clock_rate_ratio(body, &OrbitSpec::circular(r)?)?;
                t.push(vec![
                    h.into(),
                    r.into(),
                    eps.into(),
                    eps_obs.into(),
                    (ratio - 1.0).into(),
                ]);
            }
            let extras =
                json!({ "cancellation_radius_m": dsql_core::relorbit::cancellation_radius(body)? });
            Ok(RunResult { table: t, extras })
        }
        Experiment::ClockProfile {
            body,
            orbit,
            samples,
        } => {
            let profile = epsilon_profile(body, orbit, *samples)?;
            let mut t = Table::new(&[
                "true_anomaly_rad",
                "radius_m",
                "epsilon_satellite",
                "epsilon_observatory",
                "net_rate",
            ]);
            for s in &profile {
                t.push(vec![
                    s.true_anomaly.into(),
                    s.radius.into(),
                    s.epsilon_satellite.into(),
                    s.epsilon_observatory.into(),
                    s.net_rate.into(),
                ]);
            }
            Ok(RunResult {
                table: t,
                extras: json!({ "sign_changes": sign_changes(&profile) }),
            })
        }
        Experiment::Link {
            tx,
            rx,
            losses,
            source,
            link_model,
            wavelength,
            ranges,
        } => {
            let mut t = Table::new(&[
                "range_m",
                "efficiency_full",
                "efficiency_far_field",
                "far_field_valid",
                "single_channel_rate_hz",
                "pair_efficiency",
                "pair_rate_hz",
            ]);
            for &r in &ranges.0 {
                let full = link_efficiency(tx, rx, r, *wavelength, losses)?;
                let ff = link_efficiency_far_field(tx, rx, r, *wavelength, losses)?;
                let eta = link_model.efficiency(tx, rx, r, *wavelength, losses)?;
                t.push(vec![
                    r.into(),
                    full.into(),
                    ff.efficiency.into(),
                    far_field_valid(r, tx.aperture, *wavelength).into(),
                    entangled_one_channel_rate(source, eta)?.into(),
                    (eta * eta).into(),
                    entangled_pair_rate(source, eta, eta)?.into(),
                ]);
            }
            Ok(RunResult {
                table: t,
                extras: json!({ "link_model": format!("{link_model:?}") }),
            })
        }
        Experiment::Bell {
            counts,
            purities,
            target_sigma,
            simulate,
        } => {
            let mut cols = vec!["n_counts", "purity", "expected_s", "sigma_s", "n_sigma"];
            if target_sigma.is_some() {
                cols.push("required_counts");
            }
            if *simulate {
                cols.push("simulated_s");
            }
            let cells: Vec<(f64, f64)> = counts
                .0
                .iter()
                .flat_map(|&n| purities.0.iter().map(move |&p| (n, p)))
                .collect();
            let rows: Vec<Vec<Cell>> = cells
                .par_iter()
                .enumerate()
                .map(|(i, &(n, p))| -> Result<Vec<Cell>, CliError> {
                    let mut row: Vec<Cell> = vec![
                        n.into(),
                        p.into(),
                        expected_s(p)?.into(),
                        sigma_s(n, p)?.into(),
                        n_sigma(n, p)?.into(),
                    ];
                    if let Some(target) = target_sigma {
                        row.push(Cell::Int(required_counts(p, *target)?));
                    }
                    if *simulate {
                        let mut rng = ChaCha8Rng::seed_from_u64(seed);
                        rng.set_stream(i as u64);
                        let counts = simulate_bell_counts_with(p, n.round() as u64, &mut rng)?;
                        row.push(chsh_s(&counts).map_or(f64::NAN, |s| s).into());
                    }
                    Ok(row)
                })
                .collect::<Result<_, _>>()?;
            let mut t = Table::new(&cols);
            rows.into_iter().for_each(|r| t.push(r));
            Ok(RunResult {
                table: t,
                extras: Value::Null,
            })
        }
        Experiment::BellScan {
            scenario,
            altitudes,
            purities,
        } => {
            let cells = bell_mission_scan(&altitudes.0, &purities.0, scenario)?;
            let mut t = Table::new(&[
                "altitude_m",
                "purity",
                "integration_time_s",
                "pairs",
                "n_sigma",
            ]);
            for c in &cells {
                t.push(vec![
                    c.altitude.into(),
                    c.p.into(),
                    c.integration_time.into(),
                    c.pairs.into(),
                    c.n_sigma.into(),
                ]);
            }
            Ok(RunResult {
                table: t,
                extras: Value::Null,
            })
        }
        Experiment::CowScan {
            scenario,
            altitudes,
        } => {
            let scan = alpha_error_scan(&altitudes.0, scenario)?;
            let mut t = Table::new(&[
                "altitude_m",
                "feasible",
                "integration_time_s",
                "photons",
                "phi_gr_rad",
                "dphi_opt_rad",
                "delta_alpha",
            ]);
            for c in &scan.cells {
                t.push(vec![
                    c.altitude.into(),
                    c.feasible.into(),
                    c.integration_time.into(),
                    c.photons.into(),
                    c.phi_gr.into(),
                    c.dphi_opt.into(),
                    c.delta_alpha.into(),
                ]);
            }
            let best = scan.best.map(|i| scan.cells[i]);
            let extras = json!({
                "best_altitude_m": best.map(|c| c.altitude),
                "best_delta_alpha": best.map(|c| c.delta_alpha),
            });
            Ok(RunResult { table: t, extras })
        }
        Experiment::HomScan {
            scenario,
            kind,
            wavelength_2,
            sigmas,
            altitudes,
        } => {
            let first = hom_alpha_scan(&sigmas.0, &altitudes.0, scenario)?;
            let best = |s: &dsql_core::homsim::HomScan| {
                s.best.map(|i| json!({ "sigma": s.cells[i].sigma, "altitude_m": s.cells[i].altitude, "delta_alpha": s.cells[i].delta_alpha }))
            };
            let base = [
                "sigma_rad_per_s",
                "altitude_m",
                "feasible",
                "integration_time_s",
                "coincidences",
                "delta_u_j_per_kg",
                "dtau_opt_s",
                "delta_alpha",
            ];
            let row = |c: &dsql_core::homsim::HomScanCell| -> Vec<Cell> {
                vec![
                    c.sigma.into(),
                    c.altitude.into(),
                    c.feasible.into(),
                    c.integration_time.into(),
                    c.coincidences.into(),
                    c.delta_u.into(),
                    c.dtau_opt.into(),
                    c.delta_alpha.into(),
                ]
            };
            if *kind != HomScanKind::Ratio {
                let mut t = Table::new(&base);
                first.cells.iter().for_each(|c| t.push(row(c)));
                return Ok(RunResult {
                    table: t,
                    extras: json!({ "best": best(&first) }),
                });
            }
            let HomMode::Degenerate { wavelength } = scenario.mode else {
                unreachable!("ratio scans start from the degenerate mode")
            };
            let nd_sc = dsql_core::homsim::HomScanScenario {
                mode: HomMode::NonDegenerate {
                    wavelength_1: wavelength,
                    wavelength_2: *wavelength_2,
                },
                ..*scenario
            };
            let second = hom_alpha_scan(&sigmas.0, &altitudes.0, &nd_sc)?;
            let ratios = ratio_grid(&first, &second)?;
            let mut t = Table::new(&[
                "sigma_rad_per_s",
                "altitude_m",
                "delta_alpha_degenerate",
                "delta_alpha_non_degenerate",
                "ratio",
            ]);
            for ((a, b), r) in first.cells.iter().zip(&second.cells).zip(&ratios) {
                t.push(vec![
                    a.sigma.into(),
                    a.altitude.into(),
                    a.delta_alpha.into(),
                    b.delta_alpha.into(),
                    (*r).into(),
                ]);
            }
            let finite = ratios.iter().copied().filter(|r| r.is_finite());
            let extras = json!({
                "best_degenerate": best(&first),
                "best_non_degenerate": best(&second),
                "min_ratio": finite.clone().fold(f64::INFINITY, f64::min),
                "max_ratio": finite.fold(f64::NEG_INFINITY, f64::max),
            });
            Ok(RunResult { table: t, extras })
        }
        Experiment::TeleportMap {
            rate,
            purities,
            totals,
            reps,
            acquisition,
            target_counts,
            purity_target,
            detection_window,
            reference_rate,
        } => {
            let cells = fidelity_map(&purities.0, &totals.0, *reps, seed, *acquisition)?;
            let mut t = Table::new(&[
                "werner_p",
                "n_total",
                "mean_fidelity",
                "stddev_fidelity",
                "min_fidelity",
                "max_fidelity",
                "mean_iterations",
                "all_converged",
            ]);
            for c in &cells {
                t.push(vec![
                    c.p.into(),
                    c.n_total.into(),
                    c.mean_fidelity.into(),
                    c.stddev_fidelity.into(),
                    c.min_fidelity.into(),
                    c.max_fidelity.into(),
                    c.mean_iterations.into(),
                    c.all_converged.into(),
                ]);
            }
            let composed = teleport_scenario_rate(rate)?;
            let reference = TeleportRate {
                link_efficiency: f64::NAN,
                events_per_s: reference_rate.unwrap_or(REFERENCE_TELEPORT_RATE),
            };
            let extras = json!({
                "composed_link_efficiency": composed.link_efficiency,
                "composed_events_per_s": composed.events_per_s,
                "composed_time_for_target_s": composed.time_for_counts(*target_counts).ok(),
                "composed_max_noise_hz": noise_requirement(composed.events_per_s, *purity_target, *detection_window).ok(),
                "reference_events_per_s": reference.events_per_s,
                "reference_time_for_target_s": reference.time_for_counts(*target_counts)?,
                "reference_max_noise_hz": noise_requirement(reference.events_per_s, *purity_target, *detection_window)?,
                "composed_over_reference": composed.events_per_s / reference.events_per_s,
            });
            Ok(RunResult { table: t, extras })
        }
        Experiment::Decohere(job) => {
            let sys = &job.system;
            let theta_unit = dec::abh_theta_for_dephasing(sys, 1.0)?;
            let dp_mass =
                dec::dp_mass_for_dephasing(sys.radius, job.dp_velocity, sys.distance, 1.0)?;
            let dp_sys = dec::MassiveSystem {
                velocity: job.dp_velocity,
                ..*sys
            };
            let photon = dec::photon_visibility_loss(
                job.photon_theta,
                job.photon_energy,
                job.photon_distance,
            )?;
            let mut rows: Vec<(&str, Cell)> = vec![
                ("abh_tau_s", job.params.tau.into()),
                (
                    "abh_theta_over_planck",
                    (job.params.theta / PLANCK_TEMPERATURE).into(),
                ),
                (
                    "gamma_dp_per_s",
                    dec::gamma_dp(sys, job.params.ell_cut)?.into(),
                ),
                (
                    "delta_e_for_gamma_target_j",
                    dec::delta_e_for_gamma_abh(job.gamma_target, PLANCK_TIME)?.into(),
                ),
                (
                    "abh_dephasing",
                    dec::abh_dephasing(sys, job.params.tau)?.into(),
                ),
                (
                    "abh_theta_over_planck_for_unit_dephasing",
                    (theta_unit / PLANCK_TEMPERATURE).into(),
                ),
                (
                    "reference_abh_theta_over_planck",
                    REFERENCE_ABH_THETA_OVER_PLANCK.into(),
                ),
                ("dp_dephasing", dec::dp_dephasing(&dp_sys).into()),
                (
                    "dp_mass_amu_for_unit_dephasing",
                    (dp_mass / ATOMIC_MASS_UNIT).into(),
                ),
                ("photon_dephasing", photon.into()),
                ("photon_phase", photon.sqrt().into()),
                ("reference_photon_phase", REFERENCE_PHOTON_PHASE.into()),
                (
                    "photon_phase_over_reference",
                    (photon.sqrt() / REFERENCE_PHOTON_PHASE).into(),
                ),
                (
                    "photons_for_reference_phase",
                    dec::photons_for_visibility(REFERENCE_PHOTON_PHASE)?.into(),
                ),
            ];
            if job.params.lambda_diff > 0.0 && job.free_spread > 0.0 {
                rows.push((
                    "wavepacket_crossover_time_s",
                    dec::crossover_time(job.free_spread, job.params.lambda_diff, sys.mass)?.into(),
                ));
            }
            let report = dec::report(sys, &job.params, job.free_spread)?;
            Ok(RunResult {
                table: Table::key_values(rows),
                extras: serde_json::to_value(report).expect("plain data"),
            })
        }
        Experiment::HumanBell {
            timing,
            earth_moon_distance,
        } => {
            let g = human_bell_geometry(timing, *earth_moon_distance)?;
            let half = 0.5 * earth_moon_distance;
            let windows = decision_window_midway(half, half)?;
            let rows: Vec<(&str, Cell)> = vec![
                ("min_source_distance_m", g.min_source_distance.into()),
                ("fraction_of_earth_moon", g.fraction_of_earth_moon.into()),
                ("inverse_fraction", (1.0 / g.fraction_of_earth_moon).into()),
                ("rate_gain_vs_full", g.rate_gain_vs_full.into()),
                ("rate_gain_vs_midway", g.rate_gain_vs_midway.into()),
                (
                    "source_distance_sufficient",
                    g.source_distance_sufficient.into(),
                ),
                ("midway_decision_window_s", windows.earth.into()),
            ];
            Ok(RunResult {
                table: Table::key_values(rows),
                extras: Value::Null,
            })
        }
    }
}
