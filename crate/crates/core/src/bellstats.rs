//! CHSH statistics for a partially mixed Bell state: correlation estimates,
//! significance of a violation, accidental-coincidence modeling, synthetic
//! count generation and orbit/purity significance scans.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{non_negative, positive, unit_interval, Error, Result};
use crate::linkbudget::{entangled_pair_rate, LinkModel, LossFactors, OpticalTerminal, SourceSpec};
use crate::relorbit::{integration_time, Body, PassGeometry};

/// Analyzer angles (Alice, Bob) of the four CHSH blocks, in the order they
/// enter S = E₀ + E₁ + E₂ − E₃.
pub const CHSH_SETTINGS: [(f64, f64); 4] = [
    (0.0, PI / 8.0),
    (0.0, -PI / 8.0),
    (PI / 4.0, PI / 8.0),
    (PI / 4.0, -PI / 8.0),
];

/// p·|Bell⟩⟨Bell| + (1 − p)·I/4.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixedBellState {
    p: f64,
}

impl MixedBellState {
    pub fn new(p: f64) -> Result<Self> {
        Ok(Self {
            p: unit_interval("Bell fraction", p)?,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// E(a, b) = p·cos(2(a − b)).
    pub fn correlation(&self, alice: f64, bob: f64) -> f64 {
        self.p * (2.0 * (alice - bob)).cos()
    }

    /// Outcome probabilities within one setting block, ordered as
    /// [`CorrelationBlock`] fields.
    pub fn block_probabilities(&self, alice: f64, bob: f64) -> [f64; 4] {
        let e = self.correlation(alice, bob);
        let same = (1.0 + e) / 4.0;
        let diff = (1.0 - e) / 4.0;
        [same, same, diff, diff]
    }
}

/// Tallies for one pair of analyzer settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct CorrelationBlock {
    pub n_ab: u64,
    pub n_a_perp_b_perp: u64,
    pub n_a_b_perp: u64,
    pub n_a_perp_b: u64,
}

impl CorrelationBlock {
    pub fn from_array(n: [u64; 4]) -> Self {
        Self {
            n_ab: n[0],
            n_a_perp_b_perp: n[1],
            n_a_b_perp: n[2],
            n_a_perp_b: n[3],
        }
    }

    pub fn total(&self) -> u64 {
        self.n_ab + self.n_a_perp_b_perp + self.n_a_b_perp + self.n_a_perp_b
    }

    pub fn correlation(&self) -> Result<f64> {
        correlation_coefficient(self)
    }
}

/// The 16 coincidence tallies of a CHSH run, one block per entry of
/// [`CHSH_SETTINGS`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct BellCounts {
    pub blocks: [CorrelationBlock; 4],
}

impl BellCounts {
    pub fn total(&self) -> u64 {
        self.blocks.iter().map(CorrelationBlock::total).sum()
    }
}

/// Source, efficiency and background rates for coincidence accounting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatesModel {
    pub r_entangled: f64,
    pub r_incoherent: f64,
    pub eta_a: f64,
    pub eta_b: f64,
    pub noise_a: f64,
    pub noise_b: f64,
    pub window: f64,
}

impl RatesModel {
    pub fn validate(&self) -> Result<()> {
        non_negative("entangled pair rate", self.r_entangled)?;
        non_negative("incoherent pair rate", self.r_incoherent)?;
        unit_interval("efficiency a", self.eta_a)?;
        unit_interval("efficiency b", self.eta_b)?;
        non_negative("noise rate a", self.noise_a)?;
        non_negative("noise rate b", self.noise_b)?;
        non_negative("coincidence window", self.window)?;
        Ok(())
    }

    fn singles(&self) -> (f64, f64) {
        let pairs = self.r_entangled + self.r_incoherent;
        (
            pairs * self.eta_a + self.noise_a,
            pairs * self.eta_b + self.noise_b,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AccidentalRate {
    pub rate: f64,
    /// False when a singles rate times the window reaches 0.1 and the
    /// small-occupancy approximation is no longer trustworthy.
    pub poisson_ok: bool,
}

/// (N(a,b) + N(a⊥,b⊥) − N(a,b⊥) − N(a⊥,b)) / total.
pub fn correlation_coefficient(block: &CorrelationBlock) -> Result<f64> {
    let total = block.total();
    if total == 0 {
        return Err(Error::UndefinedCorrelation);
    }
    let same = (block.n_ab + block.n_a_perp_b_perp) as f64;
    let diff = (block.n_a_b_perp + block.n_a_perp_b) as f64;
    Ok((same - diff) / total as f64)
}

pub fn chsh_s(counts: &BellCounts) -> Result<f64> {
    let e: Vec<f64> = counts
        .blocks
        .iter()
        .map(correlation_coefficient)
        .collect::<Result<_>>()?;
    Ok(e[0] + e[1] + e[2] - e[3])
}

/// 2√2·p.
pub fn expected_s(p: f64) -> Result<f64> {
    Ok(2.0 * SQRT_2 * unit_interval("Bell fraction", p)?)
}

/// √(8(2 − p²)/N).
pub fn sigma_s(n: f64, p: f64) -> Result<f64> {
    let n = positive("event count", n)?;
    Ok((8.0 * (2.0 - p * p) / n).sqrt())
}

/// √N·(p − 1/√2)/√(2 − p²). Negative when there is no violation.
pub fn n_sigma(n: f64, p: f64) -> Result<f64> {
    let n = positive("event count", n)?;
    unit_interval("Bell fraction", p)?;
    Ok(n.sqrt() * (p - FRAC_1_SQRT_2) / (2.0 - p * p).sqrt())
}

/// Smallest whole number of events reaching `n_target` standard deviations.
pub fn required_counts(p: f64, n_target: f64) -> Result<u64> {
    unit_interval("Bell fraction", p)?;
    if p <= FRAC_1_SQRT_2 {
        return Err(Error::Infeasible(format!(
            "no CHSH violation possible for p = {p} <= 1/sqrt(2)"
        )));
    }
    if n_target <= 0.0 {
        return Ok(1);
    }
    let closed = n_target * n_target * (2.0 - p * p) / (p - FRAC_1_SQRT_2).powi(2);
    let mut n = closed.ceil().max(1.0) as u64;
    // guard against rounding at the boundary
    while n > 1 && n_sigma((n - 1) as f64, p)? >= n_target {
        n -= 1;
    }
    while n_sigma(n as f64, p)? < n_target {
        n += 1;
    }
    Ok(n)
}

/// (r_eη_a + r_iη_a + n_a)(r_eη_b + r_iη_b + n_b)·t.
pub fn accidental_rate(m: &RatesModel) -> Result<AccidentalRate> {
    m.validate()?;
    let (sa, sb) = m.singles();
    Ok(AccidentalRate {
        rate: sa * sb * m.window,
        poisson_ok: sa * m.window < 0.1 && sb * m.window < 0.1,
    })
}

/// r_e·η_a·η_b.
pub fn entangled_coincidence_rate(m: &RatesModel) -> Result<f64> {
    m.validate()?;
    Ok(m.r_entangled * m.eta_a * m.eta_b)
}

/// 1/(1 + accidental/entangled).
pub fn purity_from_rates(m: &RatesModel) -> Result<f64> {
    let ent = entangled_coincidence_rate(m)?;
    if ent <= 0.0 {
        return Err(Error::UndefinedPurity);
    }
    let acc = accidental_rate(m)?.rate;
    Ok(1.0 / (1.0 + acc / ent))
}

/// (1 − N·Δt_R)·F.
pub fn effective_purity(fidelity: f64, noise_rate: f64, dt_r: f64) -> Result<f64> {
    unit_interval("fidelity", fidelity)?;
    let occupancy = non_negative("noise rate", noise_rate)? * non_negative("timing window", dt_r)?;
    if occupancy >= 1.0 {
        return Err(Error::SaturatedNoise(occupancy));
    }
    Ok((1.0 - occupancy) * fidelity)
}

/// Probability of exactly `k` Poisson arrivals in a window of length `t`.
pub fn poisson_window(rate: f64, t: f64, k: u32) -> Result<f64> {
    let mean = non_negative("rate", rate)? * non_negative("window", t)?;
    if mean == 0.0 {
        return Ok(if k == 0 { 1.0 } else { 0.0 });
    }
    let ln_fact: f64 = (2..=k).map(|i| f64::from(i).ln()).sum();
    Ok((f64::from(k) * mean.ln() - mean - ln_fact).exp())
}

/// 1 − e^{−rt}.
pub fn poisson_at_least_one(rate: f64, t: f64) -> Result<f64> {
    let mean = non_negative("rate", rate)? * non_negative("window", t)?;
    Ok(-(-mean).exp_m1())
}

/// Multinomial draw of `n` CHSH trials with uniformly chosen setting pairs.
pub fn simulate_bell_counts(p: f64, n: u64, seed: u64) -> Result<BellCounts> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    simulate_bell_counts_with(p, n, &mut rng)
}

pub fn simulate_bell_counts_with<R: rand::Rng + ?Sized>(
    p: f64,
    n: u64,
    rng: &mut R,
) -> Result<BellCounts> {
    let state = MixedBellState::new(p)?;
    let mut probs = [0.0; 16];
    for (i, &(a, b)) in CHSH_SETTINGS.iter().enumerate() {
        for (j, q) in state.block_probabilities(a, b).iter().enumerate() {
            probs[4 * i + j] = q / 4.0;
        }
    }
    let tallies = multinomial(n, &probs, rng);
    let mut counts = BellCounts::default();
    for i in 0..4 {
        counts.blocks[i] = CorrelationBlock::from_array([
            tallies[4 * i],
            tallies[4 * i + 1],
            tallies[4 * i + 2],
            tallies[4 * i + 3],
        ]);
    }
    Ok(counts)
}

/// Sequential conditional binomials.
pub(crate) fn multinomial<R: rand::Rng + ?Sized>(n: u64, probs: &[f64], rng: &mut R) -> Vec<u64> {
    let mut out = vec![0u64; probs.len()];
    let mut remaining = n;
    let mut mass = 1.0;
    for (i, &q) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if i + 1 == probs.len() {
            out[i] = remaining;
            break;
        }
        let cond = (q / mass).clamp(0.0, 1.0);
        let k = Binomial::new(remaining, cond)
            .expect("probability clamped to [0, 1]")
            .sample(rng);
        out[i] = k;
        remaining -= k;
        mass -= q;
        if mass <= 0.0 {
            break;
        }
    }
    out
}

/// Mission parameters for a significance scan over orbit altitude and Bell
/// fraction. The two downlinks are identical.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BellScanScenario {
    pub tx: OpticalTerminal,
    pub rx: OpticalTerminal,
    pub wavelength: f64,
    pub losses: LossFactors,
    pub link_model: LinkModel,
    pub source: SourceSpec,
    pub min_elevation: f64,
    pub body: Body,
    /// Upper bound on a single pass, also used when the orbit is
    /// super-synchronous.
    pub max_integration_time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BellScanCell {
    pub altitude: f64,
    pub p: f64,
    pub integration_time: f64,
    pub pairs: f64,
    pub n_sigma: f64,
}

/// Pairs per pass and resulting significance for every (altitude, p) cell,
/// altitude-major. Cells without a violation read zero.
pub fn bell_mission_scan(
    altitudes: &[f64],
    purities: &[f64],
    sc: &BellScanScenario,
) -> Result<Vec<BellScanCell>> {
    for &p in purities {
        unit_interval("Bell fraction", p)?;
    }
    let per_altitude: Vec<(f64, f64, f64)> = altitudes
        .par_iter()
        .map(|&h| {
            let pass = PassGeometry::from_altitude(h, sc.min_elevation, sc.body)?;
            let t = match integration_time(&pass) {
                Ok(t) => t.min(sc.max_integration_time),
                Err(Error::SuperSynchronous { .. }) => sc.max_integration_time,
                Err(e) => return Err(e),
            };
            let eta = sc
                .link_model
                .efficiency(&sc.tx, &sc.rx, h, sc.wavelength, &sc.losses)?;
            let rate = entangled_pair_rate(&sc.source, eta, eta)?;
            Ok((h, t, rate * t))
        })
        .collect::<Result<_>>()?;
    let mut cells = Vec::with_capacity(altitudes.len() * purities.len());
    for &(altitude, integration_time, pairs) in &per_altitude {
        for &p in purities {
            let n_sigma = if p <= FRAC_1_SQRT_2 || pairs <= 0.0 {
                0.0
            } else {
                n_sigma(pairs, p)?
            };
            cells.push(BellScanCell {
                altitude,
                p,
                integration_time,
                pairs,
                n_sigma,
            });
        }
    }
    Ok(cells)
}

/// Allowed clock drift: timing window / integration time.
pub fn sync_drift_budget(timing_window: f64, integration_time: f64) -> Result<f64> {
    Ok(non_negative("timing window", timing_window)?
        / positive("integration time", integration_time)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a / b - 1.0).abs()
    }

    /// Rounded expectation counts for a mixed state, `per_block` events each.
    fn expected_counts(p: f64, per_block: f64) -> BellCounts {
        let state = MixedBellState::new(p).unwrap();
        let mut c = BellCounts::default();
        for (i, &(a, b)) in CHSH_SETTINGS.iter().enumerate() {
            let q = state.block_probabilities(a, b);
            c.blocks[i] = CorrelationBlock::from_array(q.map(|x| (x * per_block).round() as u64));
        }
        c
    }

    #[test]
    fn correlation_examples() {
        let c = |n| correlation_coefficient(&CorrelationBlock::from_array(n)).unwrap();
        assert_eq!(c([100, 100, 0, 0]), 1.0);
        assert_eq!(c([25, 25, 25, 25]), 0.0);
        assert!((c([85, 85, 15, 15]) - 0.7).abs() < 1e-15);
        assert_eq!(
            correlation_coefficient(&CorrelationBlock::default()),
            Err(Error::UndefinedCorrelation)
        );
    }

    #[test]
    fn chsh_on_expected_counts() {
        assert!((chsh_s(&expected_counts(1.0, 1e12)).unwrap() - 2.0 * SQRT_2).abs() < 1e-9);
        assert!(chsh_s(&expected_counts(0.0, 1e12)).unwrap().abs() < 1e-9);
        assert!((chsh_s(&expected_counts(0.85, 1e12)).unwrap() - 2.404).abs() < 1e-3);
    }

    #[test]
    fn expected_and_sigma() {
        assert!((expected_s(1.0).unwrap() - 2.828).abs() < 1e-3);
        assert_eq!(expected_s(0.0).unwrap(), 0.0);
        assert!((expected_s(FRAC_1_SQRT_2).unwrap() - 2.0).abs() < 1e-15);
        assert!((sigma_s(800.0, 1.0).unwrap() - 0.1).abs() < 1e-15);
        assert!((sigma_s(8.0, 0.0).unwrap() - SQRT_2).abs() < 1e-15);
        assert!(sigma_s(1e30, 0.5).unwrap() < 1e-14);
    }

    #[test]
    fn significance_examples() {
        assert!((n_sigma(500.0, 0.85).unwrap() - 2.83).abs() < 0.01);
        assert!(n_sigma(1234.0, FRAC_1_SQRT_2).unwrap().abs() < 1e-12);
        assert!((n_sigma(1000.0, 0.90).unwrap() - 5.59).abs() < 0.01);
        assert!(n_sigma(100.0, 0.5).unwrap() < 0.0);
    }

    #[test]
    fn required_counts_examples() {
        // closed-form inversion oracle: n²(2 − p²)/(p − 1/√2)²
        let oracle =
            |p: f64, n: f64| (n * n * (2.0 - p * p) / (p - FRAC_1_SQRT_2).powi(2)).ceil() as u64;
        assert_eq!(required_counts(0.85, 3.0).unwrap(), oracle(0.85, 3.0));
        assert_eq!(required_counts(0.85, 3.0).unwrap(), 564);
        assert_eq!(required_counts(1.0, 5.0).unwrap(), 292);
        assert!(matches!(
            required_counts(0.7, 3.0),
            Err(Error::Infeasible(_))
        ));
        assert!(required_counts(FRAC_1_SQRT_2 + 1e-4, 3.0).unwrap() > 10_000_000);
    }

    #[test]
    fn rate_models() {
        let bg = RatesModel {
            r_entangled: 0.0,
            r_incoherent: 0.0,
            eta_a: 0.5,
            eta_b: 0.5,
            noise_a: 100.0,
            noise_b: 100.0,
            window: 1e-9,
        };
        assert!(rel(accidental_rate(&bg).unwrap().rate, 1e-5) < 1e-12);
        assert_eq!(
            accidental_rate(&RatesModel { window: 0.0, ..bg })
                .unwrap()
                .rate,
            0.0
        );
        let sym = RatesModel {
            r_entangled: 1e6,
            eta_a: 1e-3,
            eta_b: 1e-3,
            noise_a: 0.0,
            noise_b: 0.0,
            ..bg
        };
        assert!(rel(accidental_rate(&sym).unwrap().rate, 1e-3) < 1e-12);
        assert!(accidental_rate(&sym).unwrap().poisson_ok);
        let busy = RatesModel {
            window: 1e-3,
            ..sym
        };
        assert!(!accidental_rate(&busy).unwrap().poisson_ok);

        let link = RatesModel {
            r_entangled: 1e7,
            eta_a: 2.6e-3,
            eta_b: 2.6e-3,
            ..sym
        };
        assert!(rel(entangled_coincidence_rate(&link).unwrap(), 67.6) < 1e-12);
        let unit = RatesModel {
            eta_a: 1.0,
            eta_b: 1.0,
            ..link
        };
        assert_eq!(entangled_coincidence_rate(&unit).unwrap(), 1e7);

        let clean = RatesModel {
            window: 0.0,
            ..link
        };
        assert_eq!(purity_from_rates(&clean).unwrap(), 1.0);
        assert_eq!(
            purity_from_rates(&RatesModel { eta_a: 0.0, ..link }),
            Err(Error::UndefinedPurity)
        );
        // accidental/entangled = 0.41 lands on the local-realism threshold
        assert!((1.0 / 1.41 - FRAC_1_SQRT_2).abs() < 0.003);
    }

    #[test]
    fn purity_and_poisson() {
        assert!((effective_purity(0.9, 0.0556 / 333e-9, 333e-9).unwrap() - 0.85).abs() < 1e-3);
        assert_eq!(effective_purity(0.9, 0.0, 1e-9).unwrap(), 0.9);
        assert_eq!(effective_purity(1.0, 0.5e9, 1e-9).unwrap(), 0.5);
        assert!(matches!(
            effective_purity(1.0, 1e9, 1e-9),
            Err(Error::SaturatedNoise(_))
        ));

        assert_eq!(poisson_window(0.0, 1.0, 0).unwrap(), 1.0);
        assert!(rel(poisson_at_least_one(1e-3, 1.0).unwrap(), 1e-3) < 1e-3);
        assert!((poisson_window(2.0, 1.0, 2).unwrap() - 2.0 * (-2f64).exp()).abs() < 1e-15);
        assert!((poisson_window(2.0, 1.0, 2).unwrap() - 0.2707).abs() < 1e-4);
    }

    #[test]
    fn simulated_counts() {
        for p in [1.0, 0.0] {
            let c = simulate_bell_counts(p, 1_000_000, 11).unwrap();
            assert_eq!(c.total(), 1_000_000);
            let s = chsh_s(&c).unwrap();
            assert!((s - expected_s(p).unwrap()).abs() < 3.0 * sigma_s(1e6, p).unwrap());
        }
        assert_eq!(
            simulate_bell_counts(0.85, 5000, 3).unwrap(),
            simulate_bell_counts(0.85, 5000, 3).unwrap()
        );
    }

    #[test]
    fn drift() {
        assert!((sync_drift_budget(100e-12, 5.0).unwrap() - 20e-12).abs() < 1e-24);
        assert!(rel(sync_drift_budget(100e-12, 4.5 * 3600.0).unwrap(), 6.17e-15) < 1e-3);
        assert_eq!(sync_drift_budget(0.0, 1.0).unwrap(), 0.0);
    }

    fn scan_scenario() -> BellScanScenario {
        BellScanScenario {
            tx: OpticalTerminal::new(0.3, 1.05).unwrap(),
            rx: OpticalTerminal::new(1.0, 1.05).unwrap(),
            wavelength: 810e-9,
            losses: LossFactors::lumped(0.1).unwrap(),
            link_model: LinkModel::Full,
            source: SourceSpec::new(1e9, 0.01, 0.95).unwrap(),
            min_elevation: 20f64.to_radians(),
            body: Body::earth(),
            max_integration_time: 3600.0,
        }
    }

    #[test]
    fn mission_scan_threshold_and_clamp() {
        let sc = scan_scenario();
        let alts = [500e3, 2000e3, 40_000e3];
        let ps = [0.5, FRAC_1_SQRT_2, 0.85, 1.0];
        let cells = bell_mission_scan(&alts, &ps, &sc).unwrap();
        assert_eq!(cells.len(), 12);
        for c in &cells {
            if c.p <= FRAC_1_SQRT_2 {
                assert_eq!(c.n_sigma, 0.0);
            } else {
                assert!((c.n_sigma - n_sigma(c.pairs, c.p).unwrap()).abs() < 1e-12);
            }
        }
        assert_eq!(cells[8].integration_time, 3600.0);
    }

    #[test]
    fn mission_scan_aperture_scaling() {
        let sc = scan_scenario();
        let mut big = sc;
        big.rx = OpticalTerminal::new(2.0, 1.05).unwrap();
        big.link_model = LinkModel::FarField;
        let mut base = sc;
        base.link_model = LinkModel::FarField;
        let a = bell_mission_scan(&[1e7], &[0.9], &base).unwrap()[0].pairs;
        let b = bell_mission_scan(&[1e7], &[0.9], &big).unwrap()[0].pairs;
        assert!(rel(b / a, 16.0) < 1e-12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn n_sigma_monotone(n in 1.0f64..1e8, p in 0.71f64..0.999, k in 1.001f64..10.0) {
                let base = n_sigma(n, p).unwrap();
                prop_assert!(n_sigma(n * k, p).unwrap() > base);
                let higher = p + 0.5 * (1.0 - p);
                prop_assert!(n_sigma(n, higher).unwrap() > base);
            }

            #[test]
            fn required_counts_is_tight(p in 0.72f64..1.0, target in 0.1f64..8.0) {
                let n = required_counts(p, target).unwrap();
                prop_assert!(n_sigma(n as f64, p).unwrap() >= target);
                if n > 1 {
                    prop_assert!(n_sigma((n - 1) as f64, p).unwrap() < target);
                }
            }

            #[test]
            fn purity_in_unit_interval(re in 1.0f64..1e8, ri in 0.0f64..1e8, ea in 1e-6f64..1.0,
                                       eb in 1e-6f64..1.0, na in 0.0f64..1e6, t in 0.0f64..1e-8) {
                let m = RatesModel { r_entangled: re, r_incoherent: ri, eta_a: ea, eta_b: eb,
                                     noise_a: na, noise_b: na, window: t };
                let purity = purity_from_rates(&m).unwrap();
                prop_assert!(purity > 0.0 && purity <= 1.0);
                prop_assert_eq!(purity == 1.0, accidental_rate(&m).unwrap().rate == 0.0);
            }

            #[test]
            fn chsh_bounded(counts in proptest::array::uniform16(0u64..1000)) {
                let mut c = BellCounts::default();
                for i in 0..4 {
                    c.blocks[i] = CorrelationBlock::from_array([counts[4*i], counts[4*i+1], counts[4*i+2], counts[4*i+3]]);
                }
                if let Ok(s) = chsh_s(&c) {
                    prop_assert!(s.abs() <= 4.0);
                }
            }
        }
    }
}
