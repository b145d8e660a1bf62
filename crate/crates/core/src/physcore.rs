//! Physical constants (CODATA 2018 plus standard Earth/Moon figures) and a
//! few elementary conversions. Everything is SI.

use std::f64::consts::PI;

use crate::error::{positive, Result};

pub const GRAVITATIONAL_CONSTANT: f64 = 6.674_30e-11;
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const HBAR: f64 = 1.054_571_817e-34;
pub const BOLTZMANN: f64 = 1.380_649e-23;
pub const PLANCK_TIME: f64 = 5.391_247e-44;
pub const PLANCK_TEMPERATURE: f64 = 1.416_784e32;
pub const EARTH_MASS: f64 = 5.9722e24;
pub const EARTH_RADIUS: f64 = 6.371e6;
/// Sidereal rotation rate.
pub const EARTH_ROTATION_RATE: f64 = 7.292_115_9e-5;
pub const MOON_MASS: f64 = 7.342e22;
pub const MOON_RADIUS: f64 = 1.7374e6;
pub const MOON_ROTATION_RATE: f64 = 2.661_7e-6;
pub const EARTH_MOON_DISTANCE: f64 = 3.844e8;
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;
pub const STANDARD_GRAVITY: f64 = 9.806_65;
pub const ELECTRON_VOLT: f64 = 1.602_176_634e-19;

/// The constant set as a value, for callers that want to pass it around or
/// print it.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PhysicalConstants {
    pub gravitational_constant: f64,
    pub speed_of_light: f64,
    pub hbar: f64,
    pub boltzmann: f64,
    pub planck_time: f64,
    pub planck_temperature: f64,
    pub earth_mass: f64,
    pub earth_radius: f64,
    pub earth_rotation_rate: f64,
    pub moon_mass: f64,
    pub earth_moon_distance: f64,
    pub atomic_mass_unit: f64,
    pub standard_gravity: f64,
}

pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
    gravitational_constant: GRAVITATIONAL_CONSTANT,
    speed_of_light: SPEED_OF_LIGHT,
    hbar: HBAR,
    boltzmann: BOLTZMANN,
    planck_time: PLANCK_TIME,
    planck_temperature: PLANCK_TEMPERATURE,
    earth_mass: EARTH_MASS,
    earth_radius: EARTH_RADIUS,
    earth_rotation_rate: EARTH_ROTATION_RATE,
    moon_mass: MOON_MASS,
    earth_moon_distance: EARTH_MOON_DISTANCE,
    atomic_mass_unit: ATOMIC_MASS_UNIT,
    standard_gravity: STANDARD_GRAVITY,
};

impl PhysicalConstants {
    pub fn as_array(&self) -> [f64; 13] {
        [
            self.gravitational_constant,
            self.speed_of_light,
            self.hbar,
            self.boltzmann,
            self.planck_time,
            self.planck_temperature,
            self.earth_mass,
            self.earth_radius,
            self.earth_rotation_rate,
            self.moon_mass,
            self.earth_moon_distance,
            self.atomic_mass_unit,
            self.standard_gravity,
        ]
    }
}

/// ω = 2πc/λ.
pub fn wavelength_to_angular_frequency(wavelength: f64) -> Result<f64> {
    let wavelength = positive("wavelength", wavelength)?;
    Ok(2.0 * PI * SPEED_OF_LIGHT / wavelength)
}

/// ω₁ − ω₂ for two vacuum wavelengths.
pub fn angular_frequency_difference(wavelength_1: f64, wavelength_2: f64) -> Result<f64> {
    Ok(wavelength_to_angular_frequency(wavelength_1)?
        - wavelength_to_angular_frequency(wavelength_2)?)
}

/// r_s = 2GM/c².
pub fn schwarzschild_radius(mass: f64) -> Result<f64> {
    let mass = positive("mass", mass)?;
    Ok(2.0 * GRAVITATIONAL_CONSTANT * mass / (SPEED_OF_LIGHT * SPEED_OF_LIGHT))
}

/// Newtonian point-mass potential U = −GM/r (m²/s²).
pub fn point_mass_potential(mass: f64, distance: f64) -> Result<f64> {
    let distance = positive("distance", distance)?;
    Ok(-GRAVITATIONAL_CONSTANT * mass / distance)
}

/// Attenuation in dB to a transmission fraction.
pub fn db_to_transmission(loss_db: f64) -> f64 {
    10f64.powf(-loss_db / 10.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn constants_positive() {
        assert!(CODATA_2018.as_array().iter().all(|&v| v > 0.0));
    }

    #[test]
    fn planck_units_match_quoted_values() {
        assert!((PLANCK_TIME / 5.4e-44 - 1.0).abs() < 0.01);
        assert!((PLANCK_TEMPERATURE / 1.4e32 - 1.0).abs() < 0.015);
        // independent: sqrt(hbar G / c^5)
        let tp = (HBAR * GRAVITATIONAL_CONSTANT / SPEED_OF_LIGHT.powi(5)).sqrt();
        assert!((tp / PLANCK_TIME - 1.0).abs() < 1e-5);
        let temp = (HBAR * SPEED_OF_LIGHT.powi(5) / GRAVITATIONAL_CONSTANT).sqrt() / BOLTZMANN;
        assert!((temp / PLANCK_TEMPERATURE - 1.0).abs() < 1e-5);
    }

    #[test]
    fn angular_frequency_examples() {
        let w = wavelength_to_angular_frequency(1500e-9).unwrap();
        assert!((w / 1.2558e15 - 1.0).abs() < 1e-4);
        let dw = angular_frequency_difference(1500e-9, 1600e-9).unwrap();
        let oracle = 2.0 * PI * SPEED_OF_LIGHT * 100e-9 / (1500e-9 * 1600e-9);
        assert!((dw / oracle - 1.0).abs() < 1e-12);
        assert!((dw / 7.85e13 - 1.0).abs() < 1e-3);
        assert!(matches!(
            wavelength_to_angular_frequency(0.0),
            Err(Error::Domain { .. })
        ));
        assert!(
            wavelength_to_angular_frequency(1e3).unwrap()
                > wavelength_to_angular_frequency(1e4).unwrap()
        );
    }

    #[test]
    fn schwarzschild_examples() {
        let rs = schwarzschild_radius(EARTH_MASS).unwrap();
        assert!((rs / 8.87e-3 - 1.0).abs() < 0.01);
        assert!(rs < 0.01);
        let moon = schwarzschild_radius(MOON_MASS).unwrap();
        assert!((moon / 1.09e-4 - 1.0).abs() < 0.01);
        assert!(schwarzschild_radius(0.0).is_err());
    }

    #[test]
    fn db_conversion() {
        assert!((db_to_transmission(10.0) - 0.1).abs() < 1e-15);
        assert_eq!(db_to_transmission(0.0), 1.0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn schwarzschild_is_linear(m in 1e-3f64..1e35) {
                let one = schwarzschild_radius(m).unwrap();
                let two = schwarzschild_radius(2.0 * m).unwrap();
                prop_assert_eq!(two, 2.0 * one);
            }

            #[test]
            fn omega_times_lambda(l in 1e-9f64..1e3) {
                let w = wavelength_to_angular_frequency(l).unwrap();
                prop_assert!(((w * l) / (2.0 * PI * SPEED_OF_LIGHT) - 1.0).abs() < 1e-14);
            }
        }
    }
}
