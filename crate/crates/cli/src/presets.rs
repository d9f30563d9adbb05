//! Scenarios reproducing the figures at desk scale. Each preset is one or more runs;
//! runs with `[sweep]` axes execute as sweeps.

pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    /// `(subdirectory, scenario source)`.
    pub runs: &'static [(&'static str, &'static str)],
}

macro_rules! run {
    ($dir:literal, $file:literal) => {
        ($dir, include_str!(concat!("../presets/", $file, ".toml")))
    };
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig4_1a",
        description: "Burgers N=2048, Fourier filter k_f=2 on [0.16, 0.2): energy trace",
        runs: &[run!("fourier", "fig4_1a")],
    },
    Preset {
        name: "fig4_1b",
        description: "Burgers N=2048, Meyer filter (j_f, i_f) = (1, 1) on [0.16, 0.2): energy trace",
        runs: &[run!("meyer", "fig4_1b")],
    },
    Preset {
        name: "fig4_2",
        description: "delta against dt for Fourier, Shannon, Meyer and Daubechies-12 filters",
        runs: &[
            run!("fourier", "fig4_2_fourier"),
            run!("shannon", "fig4_2_shannon"),
            run!("meyer", "fig4_2_meyer"),
            run!("daubechies12", "fig4_2_db12"),
        ],
    },
    Preset {
        name: "fig5_1",
        description: "Burgers N=16384 snapshots at t = 0.1644, 0.1793, 0.3: Galerkin against CVS (Shannon, safety)",
        runs: &[run!("galerkin", "fig5_1_galerkin"), run!("cvs", "fig5_1_cvs")],
    },
    Preset {
        name: "fig5_2b",
        description: "error against dx, CVS (Shannon, q=8) with safety zone, N = 1024..8192",
        runs: &[run!("sweep", "fig5_2b")],
    },
    Preset {
        name: "fig5_2c",
        description: "error against dx, CVS (Shannon, q=8) without safety zone, N = 1024..8192",
        runs: &[run!("sweep", "fig5_2c")],
    },
    Preset {
        name: "fig5_3",
        description: "energy evolution of CVS runs for three wavelets, with and without safety zone",
        runs: &[
            run!("shannon_safety", "fig5_3_shannon_safety"),
            run!("shannon_nosafety", "fig5_3_shannon_nosafety"),
            run!("meyer_safety", "fig5_3_meyer_safety"),
            run!("meyer_nosafety", "fig5_3_meyer_nosafety"),
            run!("daubechies12_safety", "fig5_3_daubechies12_safety"),
            run!("daubechies12_nosafety", "fig5_3_daubechies12_nosafety"),
        ],
    },
    Preset {
        name: "fig5_4",
        description: "2D Euler n=256 enstrophy, Galerkin against CVS; a qualitative stand-in for the 1024^2 runs",
        runs: &[run!("galerkin", "fig5_4_galerkin"), run!("cvs", "fig5_4_cvs")],
    },
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse;

    #[test]
    fn every_preset_parses() {
        for p in PRESETS {
            for (dir, src) in p.runs {
                let cfg = parse(src, &[]).unwrap_or_else(|e| panic!("{}/{dir}: {e}", p.name));
                assert!(cfg.n <= 16384);
            }
        }
    }

    #[test]
    fn names_are_unique() {
        let mut names: Vec<&str> = PRESETS.iter().map(|p| p.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), PRESETS.len());
        assert!(find("fig4_1a").is_some() && find("fig9").is_none());
    }
}
