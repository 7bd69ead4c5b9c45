//! Grayscale images: PGM (P5) read/write, BMP read, synthetic star fields.

use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

/// Row-major real image with power-of-two dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageGrid {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl ImageGrid {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        for d in [width, height] {
            if !d.is_power_of_two() {
                return Err(Error::NotPowerOfTwo(d));
            }
        }
        if pixels.len() != width * height {
            return Err(Error::LengthMismatch {
                expected: width * height,
                actual: pixels.len(),
            });
        }
        if pixels.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(ImageGrid {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.pixels[y * self.width + x]
    }

    pub fn row(&self, y: usize) -> &[f64] {
        &self.pixels[y * self.width..(y + 1) * self.width]
    }

    pub fn energy(&self) -> f64 {
        self.pixels.iter().map(|p| p * p).sum()
    }

    pub fn max_abs_diff(&self, other: &ImageGrid) -> f64 {
        self.pixels
            .iter()
            .zip(&other.pixels)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn transposed(&self) -> ImageGrid {
        let mut out = vec![0.0; self.pixels.len()];
        for y in 0..self.height {
            for x in 0..self.width {
                out[x * self.height + y] = self.pixels[y * self.width + x];
            }
        }
        ImageGrid {
            width: self.height,
            height: self.width,
            pixels: out,
        }
    }

    /// Round to the nearest integer and clamp to `0..=255`.
    pub fn to_u8(&self) -> Vec<u8> {
        self.pixels
            .iter()
            .map(|p| p.round().clamp(0.0, 255.0) as u8)
            .collect()
    }

    pub fn from_u8(width: usize, height: usize, bytes: &[u8]) -> Result<Self> {
        Self::new(width, height, bytes.iter().map(|&b| b as f64).collect())
    }

    /// The image as it would be stored in an 8-bit file.
    pub fn quantized_8bit(&self) -> ImageGrid {
        ImageGrid {
            width: self.width,
            height: self.height,
            pixels: self.to_u8().into_iter().map(f64::from).collect(),
        }
    }
}

fn pgm_token<'a>(data: &'a [u8], pos: &mut usize) -> Result<&'a [u8]> {
    loop {
        while *pos < data.len() && data[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < data.len() && data[*pos] == b'#' {
            while *pos < data.len() && data[*pos] != b'\n' {
                *pos += 1;
            }
        } else {
            break;
        }
    }
    let start = *pos;
    while *pos < data.len() && !data[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    if start == *pos {
        return Err(Error::Format("truncated PGM header".into()));
    }
    Ok(&data[start..*pos])
}

fn pgm_number(data: &[u8], pos: &mut usize) -> Result<usize> {
    let tok = pgm_token(data, pos)?;
    std::str::from_utf8(tok)
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Format("bad number in PGM header".into()))
}

/// Decode a binary 8-bit PGM.
pub fn decode_pgm(data: &[u8]) -> Result<ImageGrid> {
    let mut pos = 0;
    if pgm_token(data, &mut pos)? != b"P5" {
        return Err(Error::Format("not a binary PGM (P5)".into()));
    }
    let width = pgm_number(data, &mut pos)?;
    let height = pgm_number(data, &mut pos)?;
    let maxval = pgm_number(data, &mut pos)?;
    if maxval == 0 || maxval > 255 {
        return Err(Error::Format(format!("unsupported PGM maxval {maxval}")));
    }
    // exactly one whitespace byte separates the header from the raster
    pos += 1;
    let n = width * height;
    if data.len() < pos + n {
        return Err(Error::Format("truncated PGM raster".into()));
    }
    let raster = &data[pos..pos + n];
    if maxval == 255 {
        ImageGrid::from_u8(width, height, raster)
    } else {
        let scale = 255.0 / maxval as f64;
        ImageGrid::new(
            width,
            height,
            raster.iter().map(|&b| (b as f64 * scale).round()).collect(),
        )
    }
}

pub fn encode_pgm(image: &ImageGrid) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", image.width, image.height).into_bytes();
    out.extend(image.to_u8());
    out
}

/// Decode a grayscale BMP. Palette images are accepted only when every pixel
/// has equal color channels.
pub fn decode_bmp(data: &[u8]) -> Result<ImageGrid> {
    let img = ::image::load_from_memory_with_format(data, ::image::ImageFormat::Bmp)
        .map_err(|e| Error::Format(format!("BMP: {e}")))?;
    let rgb = img.to_rgb8();
    let (w, h) = rgb.dimensions();
    let mut bytes = Vec::with_capacity((w * h) as usize);
    for p in rgb.pixels() {
        let [r, g, b] = p.0;
        if r != g || g != b {
            return Err(Error::Format("BMP is not grayscale".into()));
        }
        bytes.push(r);
    }
    ImageGrid::from_u8(w as usize, h as usize, &bytes)
}

/// Read a PGM or BMP file, chosen by its magic bytes.
pub fn read_image(path: impl AsRef<Path>) -> Result<ImageGrid> {
    let data = fs::read(path.as_ref())?;
    match data.get(..2) {
        Some(b"P5") => decode_pgm(&data),
        Some(b"BM") => decode_bmp(&data),
        _ => Err(Error::Format(format!(
            "{}: expected a P5 PGM or a BMP",
            path.as_ref().display()
        ))),
    }
}

pub fn write_pgm(path: impl AsRef<Path>, image: &ImageGrid) -> Result<()> {
    fs::write(path, encode_pgm(image))?;
    Ok(())
}

/// Seeded synthetic star field: dark noisy sky (level 6, noise sigma 1.2)
/// with Gaussian point sources, one per 400 pixels. Values are rounded to
/// 8 bits.
pub fn star_field(width: usize, height: usize, seed: u64) -> Result<ImageGrid> {
    star_field_with_noise(width, height, seed, 1.2)
}

/// [`star_field`] with a chosen sky-noise standard deviation; `0` gives a
/// flat sky.
pub fn star_field_with_noise(
    width: usize,
    height: usize,
    seed: u64,
    sigma_n: f64,
) -> Result<ImageGrid> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sky = 6.0;
    let noise = Normal::new(0.0, sigma_n).expect("valid sigma");
    let mut pixels: Vec<f64> = (0..width * height)
        .map(|_| sky + noise.sample(&mut rng))
        .collect();
    let stars = (width * height / 400).max(1);
    for _ in 0..stars {
        let cx = rng.random_range(0.0..width as f64);
        let cy = rng.random_range(0.0..height as f64);
        // brightness roughly log-uniform, few bright stars
        let peak = 12.0 * (rng.random_range(0.0..1.0f64) * 3.0).exp();
        let sigma: f64 = rng.random_range(0.6..1.8);
        let reach = (4.0 * sigma).ceil() as isize;
        let (ix, iy) = (cx as isize, cy as isize);
        for y in (iy - reach).max(0)..(iy + reach + 1).min(height as isize) {
            for x in (ix - reach).max(0)..(ix + reach + 1).min(width as isize) {
                let dx = x as f64 + 0.5 - cx;
                let dy = y as f64 + 0.5 - cy;
                let v = peak * (-(dx * dx + dy * dy) / (2.0 * sigma * sigma)).exp();
                pixels[y as usize * width + x as usize] += v;
            }
        }
    }
    for p in pixels.iter_mut() {
        *p = p.round().clamp(0.0, 255.0);
    }
    ImageGrid::new(width, height, pixels)
}
