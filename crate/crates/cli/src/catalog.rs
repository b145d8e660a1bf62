//! Scenarios shipped inside the binary.

pub struct Bundled {
    pub name: &'static str,
    pub experiment: &'static str,
    /// The figure or table of numbers the scenario regenerates.
    pub reproduces: &'static str,
    pub text: &'static str,
}

pub const BUNDLED: &[Bundled] = &[
    Bundled {
        name: "clock_circular",
        experiment: "clock",
        reproduces:
            "Clock-rate offset versus circular-orbit altitude, with the cancellation radius",
        text: include_str!("../scenarios/clock_circular.toml"),
    },
    Bundled {
        name: "clock_molniya",
        experiment: "clock",
        reproduces: "Clock-rate offset around a highly elliptic orbit",
        text: include_str!("../scenarios/clock_molniya.toml"),
    },
    Bundled {
        name: "link_bell_reference",
        experiment: "link",
        reproduces: "Single-channel and pair efficiency for the intercontinental Bell test link",
        text: include_str!("../scenarios/link_bell_reference.toml"),
    },
    Bundled {
        name: "bell_reference",
        experiment: "bell",
        reproduces: "CHSH significance grid over collected pairs and Bell fraction",
        text: include_str!("../scenarios/bell_reference.toml"),
    },
    Bundled {
        name: "bell_orbit_scan",
        experiment: "bell-scan",
        reproduces: "Bell-test significance per pass versus orbit altitude",
        text: include_str!("../scenarios/bell_orbit_scan.toml"),
    },
    Bundled {
        name: "cow_altitude_scan",
        experiment: "cow-scan",
        reproduces: "Single-photon interferometer redshift error versus altitude",
        text: include_str!("../scenarios/cow_altitude_scan.toml"),
    },
    Bundled {
        name: "hom_degenerate_scan",
        experiment: "hom-scan",
        reproduces: "Degenerate two-photon interference redshift error, bandwidth x altitude",
        text: include_str!("../scenarios/hom_degenerate_scan.toml"),
    },
    Bundled {
        name: "hom_nondegenerate_scan",
        experiment: "hom-scan",
        reproduces:
            "Frequency-entangled two-photon interference redshift error, bandwidth x altitude",
        text: include_str!("../scenarios/hom_nondegenerate_scan.toml"),
    },
    Bundled {
        name: "hom_ratio_scan",
        experiment: "hom-scan",
        reproduces: "Ratio of degenerate to frequency-entangled redshift error",
        text: include_str!("../scenarios/hom_ratio_scan.toml"),
    },
    Bundled {
        name: "teleport_fidelity",
        experiment: "teleport-map",
        reproduces: "Tomography fidelity map over Bell fraction and signal counts",
        text: include_str!("../scenarios/teleport_fidelity.toml"),
    },
    Bundled {
        name: "decoherence_reference",
        experiment: "decohere",
        reproduces: "Gravitational decoherence rates and dephasing for a nanosphere and photons",
        text: include_str!("../scenarios/decoherence_reference.toml"),
    },
    Bundled {
        name: "human_bell_l3",
        experiment: "human-bell",
        reproduces: "Source distance and rate gain for an Earth-Moon Bell test with human choices",
        text: include_str!("../scenarios/human_bell_l3.toml"),
    },
];

pub fn find(name: &str) -> Option<&'static Bundled> {
    BUNDLED.iter().find(|b| b.name == name)
}
