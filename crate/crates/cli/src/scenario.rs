//! Scenario files: TOML with unit-suffixed keys, validated into the core
//! model types. Errors carry the line of the offending entry.

use std::collections::BTreeMap;
use std::path::PathBuf;

use dsql_core::bellstats::BellScanScenario;
use dsql_core::cowsim::{CowScanScenario, GravityModel};
use dsql_core::decoherence::{MassiveSystem, ModelParams};
use dsql_core::homsim::{HomMode, HomScanScenario};
use dsql_core::linkbudget::{
    noise_rate, LinkModel, LossFactors, NoiseEnvironment, OpticalTerminal, SourceSpec,
};
use dsql_core::physcore::{
    ATOMIC_MASS_UNIT, EARTH_MOON_DISTANCE, ELECTRON_VOLT, PLANCK_TEMPERATURE, STANDARD_GRAVITY,
};
use dsql_core::relorbit::{Body, HumanBellTiming, OrbitSpec};
use dsql_core::teleportsim::{Acquisition, TeleportScenario};
use serde::Deserialize;
use toml::Spanned;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    min: Option<Spanned<f64>>,
    max: Option<Spanned<f64>>,
    points: Option<usize>,
    scale: Option<Scale>,
    values: Option<Vec<f64>>,
}

/// Axis values in SI units.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

/// Known axes and the factor taking the file's unit to SI.
const GRID_AXES: &[(&str, f64)] = &[
    ("altitude_km", 1e3),
    ("range_km", 1e3),
    ("purity", 1.0),
    ("n_counts", 1.0),
    ("sigma_rad_per_s", 1.0),
    ("werner_p", 1.0),
    ("n_total", 1.0),
];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBody {
    preset: Option<String>,
    mass_kg: Option<f64>,
    radius_km: Option<f64>,
    rotation_rate_rad_per_s: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerminals {
    tx_aperture_m: f64,
    rx_aperture_m: f64,
    tx_m_squared: Option<f64>,
    rx_m_squared: Option<f64>,
    link_model: Option<String>,
    min_elevation_deg: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLosses {
    total: Option<f64>,
    eta_rx: Option<f64>,
    eta_d: Option<f64>,
    eta_tx: Option<f64>,
    eta_atm: Option<f64>,
    eta_margin: Option<f64>,
    extra_loss_db: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSource {
    clock_rate_hz: f64,
    pair_probability: f64,
    fidelity: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNoise {
    rate_hz: Option<f64>,
    radiance_per_s_m2_sr_hz: Option<f64>,
    fov_rad: Option<f64>,
    collection_area_m2: Option<f64>,
    bandwidth_hz: Option<f64>,
    source_excess_hz: Option<f64>,
    dark_rate_hz: Option<f64>,
    eta_rx: Option<f64>,
    detection_window_ns: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawClock {
    semi_major_axis_km: Option<f64>,
    eccentricity: Option<f64>,
    samples: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLink {
    wavelength_nm: f64,
    range_km: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBell {
    target_sigma: Option<f64>,
    simulate_counts: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBellScan {
    wavelength_nm: f64,
    max_integration_time_s: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCow {
    wavelength_nm: f64,
    delay_length_km: f64,
    refractive_index: Option<f64>,
    fiber_loss_db_per_km: Option<f64>,
    sigma_rad_per_s: f64,
    gravity: Option<String>,
    g_m_per_s2: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHom {
    mode: String,
    wavelength_nm: f64,
    wavelength_2_nm: Option<f64>,
    delay_length_km: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTeleport {
    reps: usize,
    acquisition: Option<String>,
    wavelength_nm: f64,
    range_km: f64,
    target_counts: f64,
    purity_target: f64,
    reference_rate_hz: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDecohere {
    mass_amu: f64,
    radius_nm: f64,
    velocity_m_per_s: f64,
    distance_km: f64,
    theta_over_planck: f64,
    ell_cut_m: Option<f64>,
    lambda_diff_kg2_m2_per_s3: Option<f64>,
    free_spread_m2: Option<f64>,
    gamma_target_per_s: Option<f64>,
    dp_velocity_m_per_s: Option<f64>,
    photon_energy_ev: f64,
    photon_distance_km: f64,
    photon_theta_over_planck: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHumanBell {
    question_s: f64,
    choice_s: f64,
    transmit_s: f64,
    source_distance_km: f64,
    earth_moon_distance_km: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: Spanned<String>,
    description: Option<String>,
    experiment: Spanned<String>,
    seed: Option<u64>,
    output: Option<String>,
    body: Option<Spanned<RawBody>>,
    terminals: Option<Spanned<RawTerminals>>,
    losses: Option<Spanned<RawLosses>>,
    source: Option<Spanned<RawSource>>,
    noise: Option<Spanned<RawNoise>>,
    clock: Option<Spanned<RawClock>>,
    link: Option<Spanned<RawLink>>,
    bell: Option<Spanned<RawBell>>,
    bell_scan: Option<Spanned<RawBellScan>>,
    cow: Option<Spanned<RawCow>>,
    hom: Option<Spanned<RawHom>>,
    teleport: Option<Spanned<RawTeleport>>,
    decohere: Option<Spanned<RawDecohere>>,
    human_bell: Option<Spanned<RawHumanBell>>,
    #[serde(default)]
    grids: BTreeMap<String, Spanned<RawGrid>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub experiment: Experiment,
}

impl Scenario {
    pub fn kind(&self) -> &'static str {
        match self.experiment {
            Experiment::ClockCircular { .. } | Experiment::ClockProfile { .. } => "clock",
            Experiment::Link { .. } => "link",
            Experiment::Bell { .. } => "bell",
            Experiment::BellScan { .. } => "bell-scan",
            Experiment::CowScan { .. } => "cow-scan",
            Experiment::HomScan { .. } => "hom-scan",
            Experiment::TeleportMap { .. } => "teleport-map",
            Experiment::Decohere { .. } => "decohere",
            Experiment::HumanBell { .. } => "human-bell",
        }
    }

    /// Whether results depend on the seed.
    pub fn is_monte_carlo(&self) -> bool {
        match self.experiment {
            Experiment::TeleportMap { .. } => true,
            Experiment::Bell { simulate, .. } => simulate,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomScanKind {
    Degenerate,
    NonDegenerate,
    /// Degenerate over non-degenerate on the same grid.
    Ratio,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Experiment {
    ClockCircular {
        body: Body,
        altitudes: Grid,
    },
    ClockProfile {
        body: Body,
        orbit: OrbitSpec,
        samples: usize,
    },
    Link {
        tx: OpticalTerminal,
        rx: OpticalTerminal,
        losses: LossFactors,
        source: SourceSpec,
        link_model: LinkModel,
        wavelength: f64,
        ranges: Grid,
    },
    Bell {
        counts: Grid,
        purities: Grid,
        target_sigma: Option<f64>,
        simulate: bool,
    },
    BellScan {
        scenario: BellScanScenario,
        altitudes: Grid,
        purities: Grid,
    },
    CowScan {
        scenario: CowScanScenario,
        altitudes: Grid,
    },
    HomScan {
        scenario: HomScanScenario,
        kind: HomScanKind,
        wavelength_2: f64,
        sigmas: Grid,
        altitudes: Grid,
    },
    TeleportMap {
        rate: TeleportScenario,
        purities: Grid,
        totals: Grid,
        reps: usize,
        acquisition: Acquisition,
        target_counts: f64,
        purity_target: f64,
        detection_window: f64,
        reference_rate: Option<f64>,
    },
    Decohere(DecohereJob),
    HumanBell {
        timing: HumanBellTiming,
        earth_moon_distance: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecohereJob {
    pub system: MassiveSystem,
    pub params: ModelParams,
    pub free_spread: f64,
    pub gamma_target: f64,
    pub dp_velocity: f64,
    pub photon_energy: f64,
    pub photon_distance: f64,
    pub photon_theta: f64,
}

/// Maps byte offsets to 1-based line numbers.
struct Lines<'a>(&'a str);

impl Lines<'_> {
    fn at(&self, offset: usize) -> usize {
        self.0[..offset.min(self.0.len())]
            .bytes()
            .filter(|&b| b == b'\n')
            .count()
            + 1
    }

    fn err(&self, offset: usize, message: impl Into<String>) -> CliError {
        CliError::Validation {
            line: self.at(offset),
            message: message.into(),
        }
    }
}

fn core_err<'a>(lines: &'a Lines<'a>, offset: usize) -> impl Fn(dsql_core::Error) -> CliError + 'a {
    move |e| lines.err(offset, e.to_string())
}

/// Parses and validates scenario text.
pub fn parse(src: &str) -> Result<Scenario, CliError> {
    let raw: RawScenario = toml::from_str(src).map_err(|e| {
        let line = e.span().map(|s| Lines(src).at(s.start)).unwrap_or(0);
        CliError::Validation {
            line,
            message: e.message().to_string(),
        }
    })?;
    let lines = Lines(src);
    let name = raw.name.get_ref().clone();
    if name.is_empty()
        || !name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
    {
        return Err(lines.err(raw.name.span().start, "name must be a non-empty identifier"));
    }

    let mut grids = BTreeMap::new();
    for (key, g) in &raw.grids {
        let pos = g.span().start;
        let Some(&(_, factor)) = GRID_AXES.iter().find(|(k, _)| k == key) else {
            let known: Vec<&str> = GRID_AXES.iter().map(|(k, _)| *k).collect();
            return Err(lines.err(
                pos,
                format!(
                    "unknown grid axis '{key}' (expected one of {})",
                    known.join(", ")
                ),
            ));
        };
        let values = grid_values(g.get_ref())
            .map_err(|(at, m)| lines.err(at.unwrap_or(pos), format!("grid '{key}': {m}")))?;
        grids.insert(
            key.as_str(),
            Grid(values.into_iter().map(|v| v * factor).collect()),
        );
    }
    let exp_pos = raw.experiment.span().start;
    let mut take_grid = |key: &str| {
        grids
            .remove(key)
            .ok_or_else(|| lines.err(exp_pos, format!("experiment needs a [grids.{key}] axis")))
    };
    let need = |what: &str| lines.err(exp_pos, format!("experiment needs a [{what}] section"));

    let body = match &raw.body {
        Some(b) => body(b.get_ref()).map_err(|m| lines.err(b.span().start, m))?,
        None => Body::earth(),
    };

    let experiment = match raw.experiment.get_ref().as_str() {
        "clock" => match &raw.clock {
            Some(c) if c.get_ref().semi_major_axis_km.is_some() => {
                let pos = c.span().start;
                let r = c.get_ref();
                let a = r.semi_major_axis_km.unwrap_or_default() * 1e3;
                let e = r.eccentricity.ok_or_else(|| lines.err(pos, "elliptic orbit needs eccentricity"))?;
                let orbit = OrbitSpec::elliptic(a * (1.0 - e), a, e).map_err(core_err(&lines, pos))?;
                let samples = r.samples.unwrap_or(181);
                if samples < 2 {
                    return Err(lines.err(pos, "samples must be at least 2"));
                }
                Experiment::ClockProfile { body, orbit, samples }
            }
            _ => Experiment::ClockCircular { body, altitudes: take_grid("altitude_km")? },
        },
        "link" => {
            let l = raw.link.as_ref().ok_or_else(|| need("link"))?;
            let (tx, rx, link_model, _) = terminals(&raw.terminals, &lines, exp_pos)?;
            let ranges = match l.get_ref().range_km {
                Some(r) => Grid(vec![positive(&lines, l.span().start, "range_km", r)? * 1e3]),
                None => take_grid("range_km")?,
            };
            Experiment::Link {
                tx,
                rx,
                link_model,
                losses: losses(&raw.losses, &lines)?.0,
                source: source(&raw.source, &lines, exp_pos)?,
                wavelength: positive(&lines, l.span().start, "wavelength_nm", l.get_ref().wavelength_nm)? * 1e-9,
                ranges,
            }
        }
        "bell" => {
            let b = raw.bell.as_ref();
            let target_sigma = b.and_then(|b| b.get_ref().target_sigma);
            if let (Some(t), Some(b)) = (target_sigma, b) {
                positive(&lines, b.span().start, "target_sigma", t)?;
            }
            let counts = take_grid("n_counts")?;
            let purities = take_grid("purity")?;
            check_unit(&lines, exp_pos, "purity", &purities)?;
            Experiment::Bell {
                counts,
                purities,
                target_sigma,
                simulate: b.and_then(|b| b.get_ref().simulate_counts).unwrap_or(false),
            }
        }
        "bell-scan" => {
            let s = raw.bell_scan.as_ref().ok_or_else(|| need("bell_scan"))?;
            let pos = s.span().start;
            let (tx, rx, link_model, min_elevation) = terminals(&raw.terminals, &lines, exp_pos)?;
            let purities = take_grid("purity")?;
            check_unit(&lines, exp_pos, "purity", &purities)?;
            Experiment::BellScan {
                scenario: BellScanScenario {
                    tx,
                    rx,
                    wavelength: positive(&lines, pos, "wavelength_nm", s.get_ref().wavelength_nm)? * 1e-9,
                    losses: losses(&raw.losses, &lines)?.0,
                    link_model,
                    source: source(&raw.source, &lines, exp_pos)?,
                    min_elevation,
                    body,
                    max_integration_time: positive(&lines, pos, "max_integration_time_s", s.get_ref().max_integration_time_s)?,
                },
                altitudes: take_grid("altitude_km")?,
                purities,
            }
        }
        "cow-scan" => {
            let c = raw.cow.as_ref().ok_or_else(|| need("cow"))?;
            let pos = c.span().start;
            let r = c.get_ref();
            let (tx, rx, link_model, min_elevation) = terminals(&raw.terminals, &lines, exp_pos)?;
            let (noise, dt_r) = noise(&raw.noise, &lines)?;
            let g = r.g_m_per_s2.unwrap_or(STANDARD_GRAVITY);
            let gravity = match r.gravity.as_deref().unwrap_or("uniform") {
                "uniform" => GravityModel::Uniform { g },
                "inverse_square" => GravityModel::InverseSquare { g_surface: g },
                other => return Err(lines.err(pos, format!("gravity must be 'uniform' or 'inverse_square', got '{other}'"))),
            };
            let n = r.refractive_index.unwrap_or(1.0);
            if !(n >= 1.0) {
                return Err(lines.err(pos, "refractive_index must be at least 1"));
            }
            Experiment::CowScan {
                scenario: CowScanScenario {
                    tx,
                    rx,
                    link_model,
                    losses: losses(&raw.losses, &lines)?.0,
                    source: source(&raw.source, &lines, exp_pos)?,
                    min_elevation,
                    body,
                    wavelength: positive(&lines, pos, "wavelength_nm", r.wavelength_nm)? * 1e-9,
                    delay_length: positive(&lines, pos, "delay_length_km", r.delay_length_km)? * 1e3,
                    refractive_index: n,
                    fiber_loss_db_per_km: r.fiber_loss_db_per_km.unwrap_or(0.0),
                    sigma: positive(&lines, pos, "sigma_rad_per_s", r.sigma_rad_per_s)?,
                    noise_rate: noise,
                    dt_r,
                    gravity,
                },
                altitudes: take_grid("altitude_km")?,
            }
        }
        "hom-scan" => {
            let h = raw.hom.as_ref().ok_or_else(|| need("hom"))?;
            let pos = h.span().start;
            let r = h.get_ref();
            let (tx, rx, link_model, min_elevation) = terminals(&raw.terminals, &lines, exp_pos)?;
            let (noise, dt_r) = noise(&raw.noise, &lines)?;
            let l1 = positive(&lines, pos, "wavelength_nm", r.wavelength_nm)? * 1e-9;
            let l2 = match r.wavelength_2_nm {
                Some(w) => positive(&lines, pos, "wavelength_2_nm", w)? * 1e-9,
                None => l1,
            };
            let (kind, mode) = match r.mode.as_str() {
                "degenerate" => (HomScanKind::Degenerate, HomMode::Degenerate { wavelength: l1 }),
                "non_degenerate" | "ratio" if r.wavelength_2_nm.is_none() => {
                    return Err(lines.err(pos, "non-degenerate mode needs wavelength_2_nm"));
                }
                "non_degenerate" => {
                    (HomScanKind::NonDegenerate, HomMode::NonDegenerate { wavelength_1: l1, wavelength_2: l2 })
                }
                "ratio" => (HomScanKind::Ratio, HomMode::Degenerate { wavelength: l1 }),
                other => {
                    return Err(lines.err(pos, format!("mode must be degenerate, non_degenerate or ratio, got '{other}'")))
                }
            };
            Experiment::HomScan {
                scenario: HomScanScenario {
                    tx,
                    rx,
                    link_model,
                    losses: losses(&raw.losses, &lines)?.0,
                    source: source(&raw.source, &lines, exp_pos)?,
                    min_elevation,
                    body,
                    delay_length: positive(&lines, pos, "delay_length_km", r.delay_length_km)? * 1e3,
                    noise_rate: noise,
                    dt_r,
                    mode,
                },
                kind,
                wavelength_2: l2,
                sigmas: take_grid("sigma_rad_per_s")?,
                altitudes: take_grid("altitude_km")?,
            }
        }
        "teleport-map" => {
            let t = raw.teleport.as_ref().ok_or_else(|| need("teleport"))?;
            let pos = t.span().start;
            let r = t.get_ref();
            let (tx, rx, link_model, _) = terminals(&raw.terminals, &lines, exp_pos)?;
            let (losses, extra_loss_db) = losses(&raw.losses, &lines)?;
            let (_, detection_window) = noise(&raw.noise, &lines)?;
            if r.reps == 0 {
                return Err(lines.err(pos, "reps must be positive"));
            }
            let acquisition = match r.acquisition.as_deref().unwrap_or("per_setting") {
                "per_setting" => Acquisition::PerSetting,
                "fixed_total" => Acquisition::FixedTotal,
                other => return Err(lines.err(pos, format!("acquisition must be per_setting or fixed_total, got '{other}'"))),
            };
            let purities = take_grid("werner_p")?;
            check_unit(&lines, exp_pos, "werner_p", &purities)?;
            let totals = take_grid("n_total")?;
            if totals.0.iter().any(|&n| !(n > 0.0)) {
                return Err(lines.err(exp_pos, "n_total values must be positive"));
            }
            Experiment::TeleportMap {
                rate: TeleportScenario {
                    tx,
                    rx,
                    wavelength: positive(&lines, pos, "wavelength_nm", r.wavelength_nm)? * 1e-9,
                    range: positive(&lines, pos, "range_km", r.range_km)? * 1e3,
                    link_model,
                    losses,
                    extra_loss_db,
                    source: source(&raw.source, &lines, exp_pos)?,
                },
                purities,
                totals,
                reps: r.reps,
                acquisition,
                target_counts: positive(&lines, pos, "target_counts", r.target_counts)?,
                purity_target: r.purity_target,
                detection_window,
                reference_rate: r.reference_rate_hz,
            }
        }
        "decohere" => {
            let d = raw.decohere.as_ref().ok_or_else(|| need("decohere"))?;
            let pos = d.span().start;
            let r = d.get_ref();
            let err = core_err(&lines, pos);
            let system = MassiveSystem::new(
                r.mass_amu * ATOMIC_MASS_UNIT,
                r.radius_nm * 1e-9,
                r.velocity_m_per_s,
                r.distance_km * 1e3,
            )
            .map_err(&err)?;
            let params = ModelParams::from_theta(
                r.theta_over_planck * PLANCK_TEMPERATURE,
                r.ell_cut_m.unwrap_or(0.0),
                r.lambda_diff_kg2_m2_per_s3.unwrap_or(0.0),
            )
            .map_err(&err)?;
            Experiment::Decohere(DecohereJob {
                system,
                params,
                free_spread: r.free_spread_m2.unwrap_or(0.0),
                gamma_target: r.gamma_target_per_s.unwrap_or(1e-3),
                dp_velocity: r.dp_velocity_m_per_s.unwrap_or(r.velocity_m_per_s),
                photon_energy: positive(&lines, pos, "photon_energy_ev", r.photon_energy_ev)? * ELECTRON_VOLT,
                photon_distance: positive(&lines, pos, "photon_distance_km", r.photon_distance_km)? * 1e3,
                photon_theta: r.photon_theta_over_planck.unwrap_or(1.0) * PLANCK_TEMPERATURE,
            })
        }
        "human-bell" => {
            let h = raw.human_bell.as_ref().ok_or_else(|| need("human_bell"))?;
            let pos = h.span().start;
            let r = h.get_ref();
            Experiment::HumanBell {
                timing: HumanBellTiming::new(r.question_s, r.choice_s, r.transmit_s, r.source_distance_km * 1e3)
                    .map_err(core_err(&lines, pos))?,
                earth_moon_distance: r.earth_moon_distance_km.map_or(EARTH_MOON_DISTANCE, |d| d * 1e3),
            }
        }
        other => {
            return Err(lines.err(
                exp_pos,
                format!(
                    "unknown experiment '{other}' (expected clock, link, bell, bell-scan, cow-scan, hom-scan, \
                     teleport-map, decohere or human-bell)"
                ),
            ))
        }
    };
    if let Some((key, _)) = grids.iter().next() {
        let pos = raw.grids[*key].span().start;
        return Err(lines.err(pos, format!("grid '{key}' is not used by this experiment")));
    }

    Ok(Scenario {
        name,
        description: raw.description.unwrap_or_default(),
        seed: raw.seed,
        output: raw.output.map(PathBuf::from),
        experiment,
    })
}

/// Errors carry the offset of the offending key when there is one.
fn grid_values(g: &RawGrid) -> Result<Vec<f64>, (Option<usize>, String)> {
    if let Some(values) = &g.values {
        if g.min.is_some() || g.max.is_some() || g.points.is_some() || g.scale.is_some() {
            return Err((
                None,
                "give either values or min/max/points, not both".into(),
            ));
        }
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return Err((
                None,
                "values must be a non-empty list of finite numbers".into(),
            ));
        }
        return Ok(values.clone());
    }
    let (Some(min_s), Some(max_s), Some(points)) = (&g.min, &g.max, g.points) else {
        return Err((None, "needs min, max and points".into()));
    };
    let (min, max) = (*min_s.get_ref(), *max_s.get_ref());
    let at_min = Some(min_s.span().start);
    if !(min.is_finite() && max.is_finite()) || min >= max {
        return Err((at_min, format!("min ({min}) must be below max ({max})")));
    }
    if points < 2 {
        return Err((None, "points must be at least 2".into()));
    }
    let step = |i: usize| i as f64 / (points - 1) as f64;
    Ok(match g.scale.unwrap_or(Scale::Linear) {
        Scale::Linear => (0..points).map(|i| min + (max - min) * step(i)).collect(),
        Scale::Log => {
            if min <= 0.0 {
                return Err((at_min, "log scale needs min > 0".into()));
            }
            let (a, b) = (min.ln(), max.ln());
            (0..points).map(|i| (a + (b - a) * step(i)).exp()).collect()
        }
    })
}

fn positive(lines: &Lines, pos: usize, key: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(lines.err(pos, format!("{key} must be positive, got {v}")))
    }
}

fn check_unit(lines: &Lines, pos: usize, key: &str, g: &Grid) -> Result<(), CliError> {
    if g.0.iter().all(|v| (0.0..=1.0).contains(v)) {
        Ok(())
    } else {
        Err(lines.err(pos, format!("grid '{key}' values must lie in [0, 1]")))
    }
}

fn body(b: &RawBody) -> Result<Body, String> {
    match (&b.preset, b.mass_kg, b.radius_km) {
        (Some(p), None, None) => match p.as_str() {
            "earth" => Ok(Body::earth()),
            "moon" => Ok(Body::moon()),
            other => Err(format!(
                "unknown body preset '{other}' (expected earth or moon)"
            )),
        },
        (None, Some(m), Some(r)) => Body::new(m, r * 1e3, b.rotation_rate_rad_per_s.unwrap_or(0.0))
            .map_err(|e| e.to_string()),
        _ => Err("body needs either preset or mass_kg with radius_km".into()),
    }
}

fn terminals(
    t: &Option<Spanned<RawTerminals>>,
    lines: &Lines,
    exp_pos: usize,
) -> Result<(OpticalTerminal, OpticalTerminal, LinkModel, f64), CliError> {
    let t = t
        .as_ref()
        .ok_or_else(|| lines.err(exp_pos, "experiment needs a [terminals] section"))?;
    let pos = t.span().start;
    let r = t.get_ref();
    let err = core_err(lines, pos);
    let tx = OpticalTerminal::new(r.tx_aperture_m, r.tx_m_squared.unwrap_or(1.0)).map_err(&err)?;
    let rx = OpticalTerminal::new(r.rx_aperture_m, r.rx_m_squared.unwrap_or(1.0)).map_err(&err)?;
    let model = match r.link_model.as_deref().unwrap_or("full") {
        "full" => LinkModel::Full,
        "far_field" => LinkModel::FarField,
        other => {
            return Err(lines.err(
                pos,
                format!("link_model must be full or far_field, got '{other}'"),
            ))
        }
    };
    let elevation = r.min_elevation_deg.unwrap_or(20.0);
    if !(0.0..90.0).contains(&elevation) {
        return Err(lines.err(
            pos,
            format!("min_elevation_deg must lie in [0, 90), got {elevation}"),
        ));
    }
    Ok((tx, rx, model, elevation.to_radians()))
}

/// Loss factors and the extra loss in dB.
fn losses(l: &Option<Spanned<RawLosses>>, lines: &Lines) -> Result<(LossFactors, f64), CliError> {
    let Some(l) = l else {
        return Ok((LossFactors::lossless(), 0.0));
    };
    let pos = l.span().start;
    let r = l.get_ref();
    let err = core_err(lines, pos);
    let parts = [r.eta_rx, r.eta_d, r.eta_tx, r.eta_atm, r.eta_margin];
    let factors = match r.total {
        Some(total) if parts.iter().all(Option::is_none) => {
            LossFactors::lumped(total).map_err(&err)?
        }
        Some(_) => return Err(lines.err(pos, "give either total or the individual eta_* factors")),
        None => {
            let [a, b, c, d, e] = parts.map(|p| p.unwrap_or(1.0));
            LossFactors::new(a, b, c, d, e).map_err(&err)?
        }
    };
    let extra = r.extra_loss_db.unwrap_or(0.0);
    if !(extra >= 0.0 && extra.is_finite()) {
        return Err(lines.err(pos, "extra_loss_db must be non-negative"));
    }
    Ok((factors, extra))
}

fn source(
    s: &Option<Spanned<RawSource>>,
    lines: &Lines,
    exp_pos: usize,
) -> Result<SourceSpec, CliError> {
    let s = s
        .as_ref()
        .ok_or_else(|| lines.err(exp_pos, "experiment needs a [source] section"))?;
    let r = s.get_ref();
    SourceSpec::new(
        r.clock_rate_hz,
        r.pair_probability,
        r.fidelity.unwrap_or(1.0),
    )
    .map_err(core_err(lines, s.span().start))
}

/// Noise rate (1/s) and detection window (s).
fn noise(n: &Option<Spanned<RawNoise>>, lines: &Lines) -> Result<(f64, f64), CliError> {
    let Some(n) = n else {
        return Ok((0.0, 1e-9));
    };
    let pos = n.span().start;
    let r = n.get_ref();
    let window = positive(
        lines,
        pos,
        "detection_window_ns",
        r.detection_window_ns.unwrap_or(1.0),
    )? * 1e-9;
    let env_keys = [
        r.radiance_per_s_m2_sr_hz,
        r.fov_rad,
        r.collection_area_m2,
        r.bandwidth_hz,
        r.source_excess_hz,
        r.dark_rate_hz,
        r.eta_rx,
    ];
    let rate = match r.rate_hz {
        Some(_) if env_keys.iter().any(Option::is_some) => {
            return Err(lines.err(
                pos,
                "give either rate_hz or the background environment, not both",
            ));
        }
        Some(rate) if rate >= 0.0 && rate.is_finite() => rate,
        Some(rate) => {
            return Err(lines.err(pos, format!("rate_hz must be non-negative, got {rate}")))
        }
        None => {
            let [radiance, fov, collection_area, bandwidth, source_excess, dark_rate, eta_rx] =
                env_keys.map(|k| k.unwrap_or(0.0));
            let env = NoiseEnvironment {
                radiance,
                fov,
                collection_area,
                bandwidth,
                source_excess,
                dark_rate,
                eta_rx,
            };
            env.validate().map_err(core_err(lines, pos))?;
            noise_rate(&env)
        }
    };
    Ok((rate, window))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
name = "t"
experiment = "clock"

[grids.altitude_km]
min = 200
max = 2000
points = 4
"#;

    #[test]
    fn parses_minimal() {
        let s = parse(MINIMAL).unwrap();
        let Experiment::ClockCircular { altitudes, .. } = s.experiment else {
            panic!()
        };
        assert_eq!(altitudes.0, vec![200e3, 800e3, 1400e3, 2000e3]);
    }

    #[test]
    fn reports_line_of_bad_grid() {
        let src = MINIMAL.replace("min = 200", "min = 3000");
        match parse(&src) {
            Err(CliError::Validation { line, message }) => {
                assert_eq!(line, 6);
                assert!(message.contains("min"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_unitless_key() {
        let src = "name = \"t\"\nexperiment = \"link\"\n[link]\nwavelength = 810\n";
        match parse(src) {
            Err(CliError::Validation { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn log_grid() {
        let g: RawGrid =
            toml::from_str("min = 1.0\nmax = 100.0\npoints = 3\nscale = \"log\"").unwrap();
        let v = grid_values(&g).unwrap();
        assert!((v[1] - 10.0).abs() < 1e-12);
    }

    #[test]
    fn unused_grid_rejected() {
        let src = format!("{MINIMAL}\n[grids.purity]\nvalues = [0.9]\n");
        assert!(matches!(
            parse(&src),
            Err(CliError::Validation { line: 10, .. })
        ));
    }
}
