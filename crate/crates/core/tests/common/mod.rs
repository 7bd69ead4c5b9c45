//! Shared fixtures for the integration tests.
#![allow(dead_code)]
// frozen oracle output, kept digit for digit
#![allow(clippy::excessive_precision, clippy::approx_constant)]

use std::path::PathBuf;

use phwave::image::{read_image, star_field, ImageGrid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Extremal-phase Daubechies low-pass filters (sum = sqrt 2), produced
/// offline by `tests/oracle/daubechies_oracle.py` with 50-digit arithmetic.
pub const DAUBECHIES: [&[f64]; 6] = [
    &[7.0710678118654752e-1, 7.0710678118654752e-1],
    &[
        4.8296291314453414e-1,
        8.3651630373780791e-1,
        2.2414386804201338e-1,
        -1.2940952255126038e-1,
    ],
    &[
        3.3267055295008262e-1,
        8.0689150931109258e-1,
        4.5987750211849157e-1,
        -1.3501102001025459e-1,
        -8.5441273882026662e-2,
        3.5226291885709537e-2,
    ],
    &[
        2.303778133088965e-1,
        7.1484657055291565e-1,
        6.3088076792985891e-1,
        -2.7983769416859854e-2,
        -1.8703481171909308e-1,
        3.0841381835560764e-2,
        3.28830116668852e-2,
        -1.0597401785069032e-2,
    ],
    &[
        1.6010239797419291e-1,
        6.0382926979718967e-1,
        7.2430852843777293e-1,
        1.3842814590132073e-1,
        -2.4229488706638203e-1,
        -3.2244869584638375e-2,
        7.7571493840045714e-2,
        -6.2414902127982743e-3,
        -1.2580751999081999e-2,
        3.3357252854737713e-3,
    ],
    &[
        1.1154074335010946e-1,
        4.9462389039845309e-1,
        7.5113390802109535e-1,
        3.1525035170919763e-1,
        -2.2626469396543982e-1,
        -1.2976686756726194e-1,
        9.7501605587323049e-2,
        2.7522865530305729e-2,
        -3.158203931748603e-2,
        5.5384220116149614e-4,
        4.7772575109455106e-3,
        -1.0773010853084796e-3,
    ],
];

/// Seed of the reference star field used throughout the tests.
pub const STAR_SEED: u64 = 2010;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("data")
        .join(name)
}

pub fn load(name: &str) -> ImageGrid {
    read_image(data_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn random_image(width: usize, height: usize, seed: u64) -> ImageGrid {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let px = (0..width * height)
        .map(|_| rng.random_range(0..=255u8) as f64)
        .collect();
    ImageGrid::new(width, height, px).unwrap()
}

pub fn stars128() -> ImageGrid {
    star_field(128, 128, STAR_SEED).unwrap()
}

/// Every named test image: two natural photographs, an astronomical crop,
/// random noise at both sizes, and the synthetic star field.
pub fn test_images() -> Vec<(&'static str, ImageGrid)> {
    vec![
        ("camera128", load("camera128.pgm")),
        ("camera256", load("camera256.pgm")),
        ("hubble128", load("hubble128.pgm")),
        ("random128", random_image(128, 128, 11)),
        ("random256", random_image(256, 256, 12)),
        ("stars128", stars128()),
        ("stars256", star_field(256, 256, STAR_SEED).unwrap()),
    ]
}
