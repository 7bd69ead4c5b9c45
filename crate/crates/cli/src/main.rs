//! `phw`: filters, codec, comparison tables and coefficient scatter export.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage error (bad flags,
//! non-power-of-two input, out-of-range parameters).

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use phwave::codec::{
    compress, decompress, measure, CodecSettings, CompressedImage, Metrics, Transform, DEFAULT_BITS,
};
use phwave::dbbaseline::{db_forward, db_scatter_export};
use phwave::image::{read_image, star_field_with_noise, write_pgm, ImageGrid};
use phwave::mask::make_filter_pair;
use phwave::phtransform::{forward, scatter_export, PhOptions};
use phwave::scatter::write_csv;
use phwave::wavelet1d::Boundary;

#[derive(Parser)]
#[command(
    name = "phw",
    version,
    about = "Polyharmonic subdivision wavelet tools"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print analysis filter taps as CSV (N,xi,k,tap_index,h,g)
    Filters {
        #[arg(long, short = 'N', default_value_t = 2)]
        order: usize,
        #[arg(long, default_value_t = 0.0)]
        xi: f64,
        #[arg(long, short, default_value_t = 0)]
        k: u32,
    },
    /// Encode a grayscale PGM/BMP into a PHW1 container
    Compress {
        input: PathBuf,
        #[arg(long, short)]
        output: PathBuf,
        #[command(flatten)]
        codec: CodecArgs,
        /// Print metrics as JSON after encoding
        #[arg(long)]
        metrics: bool,
    },
    /// Decode a PHW1 container into an 8-bit PGM
    Decompress {
        input: PathBuf,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Compare PH and DB at the same settings
    Compare {
        input: PathBuf,
        #[command(flatten)]
        params: TransformParams,
        #[arg(long, default_value_t = DEFAULT_BITS)]
        bits: u8,
        /// Also write the table as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Export every coefficient as CSV (eta,level,j,re,im,kind)
    Scatter {
        input: PathBuf,
        #[arg(long, short)]
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = TransformArg::Ph)]
        transform: TransformArg,
        #[arg(long, value_enum, default_value_t = BoundaryArg::Periodic)]
        boundary: BoundaryArg,
        #[command(flatten)]
        params: TransformParams,
    },
    /// Metrics of a container against the original image, as JSON
    Metrics {
        original: PathBuf,
        container: PathBuf,
    },
    /// Write a seeded synthetic star field
    Starfield {
        #[arg(long, short)]
        output: PathBuf,
        #[arg(long, default_value_t = 2010)]
        seed: u64,
        #[arg(long, default_value_t = 128)]
        width: usize,
        #[arg(long, default_value_t = 128)]
        height: usize,
        /// Sky noise standard deviation
        #[arg(long, default_value_t = 1.2)]
        noise: f64,
    },
}

#[derive(Args, Clone, Copy)]
struct TransformParams {
    /// Daubechies order N
    #[arg(long, short = 'N', default_value_t = 2)]
    order: usize,
    /// Coarsest level m0
    #[arg(long = "coarse-level", short = 'm', default_value_t = 3)]
    coarse_level: u32,
}

#[derive(Args)]
struct CodecArgs {
    #[arg(long, value_enum, default_value_t = TransformArg::Ph)]
    transform: TransformArg,
    #[command(flatten)]
    params: TransformParams,
    #[arg(long, default_value_t = DEFAULT_BITS)]
    bits: u8,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Periodic)]
    boundary: BoundaryArg,
    /// Run the Fourier transform along the vertical axis (PH only)
    #[arg(long)]
    transpose: bool,
    /// Disable the mean level shift before the transform
    #[arg(long)]
    no_level_shift: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TransformArg {
    Ph,
    Db,
}

impl From<TransformArg> for Transform {
    fn from(t: TransformArg) -> Self {
        match t {
            TransformArg::Ph => Transform::Ph,
            TransformArg::Db => Transform::Db,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BoundaryArg {
    Periodic,
    Expansive,
}

impl From<BoundaryArg> for Boundary {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Periodic => Boundary::Periodic,
            BoundaryArg::Expansive => Boundary::SymmetricExpansive,
        }
    }
}

/// Marks errors that should exit with status 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

/// Library errors caused by the caller's parameters or image shape.
fn classify(e: phwave::Error) -> anyhow::Error {
    use phwave::Error as E;
    match e {
        E::NotPowerOfTwo(_)
        | E::InvalidParameter(_)
        | E::OrderOutOfRange(_)
        | E::DampingUnderflow { .. } => usage(e.to_string()),
        other => other.into(),
    }
}

fn load(path: &Path) -> Result<ImageGrid> {
    read_image(path)
        .map_err(classify)
        .with_context(|| format!("reading {}", path.display()))
}

fn settings(t: Transform, p: TransformParams, bits: u8) -> CodecSettings {
    CodecSettings::new(t, p.order, p.coarse_level, bits)
}

fn encode(image: &ImageGrid, s: &CodecSettings) -> Result<(CompressedImage, Metrics)> {
    let c = compress(image, s).map_err(classify)?;
    let out = decompress(&c)?;
    let m = measure(image, &out, &c)?;
    Ok((c, m))
}

fn fmt_psnr(p: f64) -> String {
    if p.is_finite() {
        format!("{p:.4}")
    } else {
        "inf".into()
    }
}

fn cmd_filters(order: usize, xi: f64, k: u32) -> Result<()> {
    let f = make_filter_pair(order, xi, k).map_err(classify)?;
    let mut out = io::stdout().lock();
    writeln!(out, "N,xi,k,tap_index,h,g")?;
    for (j, (h, g)) in f.lowpass.iter().zip(&f.highpass).enumerate() {
        writeln!(out, "{order},{xi:?},{k},{j},{h:?},{g:?}")?;
    }
    Ok(())
}

fn cmd_compress(input: &Path, output: &Path, a: &CodecArgs, metrics: bool) -> Result<()> {
    let image = load(input)?;
    let mut s = settings(a.transform.into(), a.params, a.bits);
    s.boundary = a.boundary.into();
    s.transpose = a.transpose;
    s.level_shift = !a.no_level_shift;
    let (c, m) = encode(&image, &s)?;
    fs::write(output, c.to_bytes()).with_context(|| format!("writing {}", output.display()))?;
    if metrics {
        println!("{}", serde_json::to_string_pretty(&m)?);
    }
    Ok(())
}

fn cmd_decompress(input: &Path, output: &Path) -> Result<()> {
    let bytes = fs::read(input).with_context(|| format!("reading {}", input.display()))?;
    let c = CompressedImage::from_bytes(&bytes)
        .with_context(|| format!("decoding {}", input.display()))?;
    write_pgm(output, &decompress(&c)?).with_context(|| format!("writing {}", output.display()))?;
    Ok(())
}

fn cmd_compare(input: &Path, p: TransformParams, bits: u8, csv: Option<&Path>) -> Result<()> {
    let image = load(input)?;
    let mut rows = Vec::new();
    for t in [Transform::Ph, Transform::Db] {
        let (_, m) = encode(&image, &settings(t, p, bits))?;
        rows.push((t, m));
    }
    println!("N={} m0={} bits={}", p.order, p.coarse_level, bits);
    println!(
        "{:<9} {:>8} {:>10} {:>8}",
        "transform", "ratio", "psnr_db", "bytes"
    );
    for (t, m) in &rows {
        println!(
            "{:<9} {:>8.4} {:>10} {:>8}",
            t.name(),
            m.compression_ratio,
            fmt_psnr(m.psnr),
            m.container_bytes
        );
    }
    if let Some(path) = csv {
        let mut s = String::from("transform,N,m0,bits,compression_ratio,psnr_db,container_bytes\n");
        for (t, m) in &rows {
            s += &format!(
                "{},{},{},{},{},{},{}\n",
                t.name(),
                p.order,
                p.coarse_level,
                bits,
                m.compression_ratio,
                fmt_psnr(m.psnr),
                m.container_bytes
            );
        }
        fs::write(path, s).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn cmd_scatter(
    input: &Path,
    output: &Path,
    t: TransformArg,
    b: BoundaryArg,
    p: TransformParams,
) -> Result<()> {
    let image = load(input)?;
    let rows = match t {
        TransformArg::Ph => {
            let c = forward(&image, &PhOptions::new(p.order, p.coarse_level, b.into()))
                .map_err(classify)?;
            scatter_export(&c)?
        }
        TransformArg::Db => {
            if b != BoundaryArg::Periodic {
                return Err(usage("the DB baseline supports only the periodic boundary"));
            }
            db_scatter_export(&db_forward(&image, p.order, p.coarse_level).map_err(classify)?)
        }
    };
    let file =
        fs::File::create(output).with_context(|| format!("creating {}", output.display()))?;
    write_csv(io::BufWriter::new(file), &rows)?;
    Ok(())
}

fn cmd_metrics(original: &Path, container: &Path) -> Result<()> {
    let image = load(original)?;
    let bytes = fs::read(container).with_context(|| format!("reading {}", container.display()))?;
    let c = CompressedImage::from_bytes(&bytes)?;
    let m = measure(&image, &decompress(&c)?, &c).map_err(classify)?;
    println!("{}", serde_json::to_string_pretty(&m)?);
    Ok(())
}

fn cmd_starfield(output: &Path, seed: u64, width: usize, height: usize, noise: f64) -> Result<()> {
    if !(noise.is_finite() && noise >= 0.0) {
        return Err(usage("--noise must be a nonnegative number"));
    }
    let img = star_field_with_noise(width, height, seed, noise).map_err(classify)?;
    write_pgm(output, &img).with_context(|| format!("writing {}", output.display()))?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Filters { order, xi, k } => cmd_filters(order, xi, k),
        Command::Compress {
            input,
            output,
            codec,
            metrics,
        } => cmd_compress(&input, &output, &codec, metrics),
        Command::Decompress { input, output } => cmd_decompress(&input, &output),
        Command::Compare {
            input,
            params,
            bits,
            csv,
        } => cmd_compare(&input, params, bits, csv.as_deref()),
        Command::Scatter {
            input,
            output,
            transform,
            boundary,
            params,
        } => cmd_scatter(&input, &output, transform, boundary, params),
        Command::Metrics {
            original,
            container,
        } => cmd_metrics(&original, &container),
        Command::Starfield {
            output,
            seed,
            width,
            height,
            noise,
        } => cmd_starfield(&output, seed, width, height, noise),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("phw: {e:#}");
            if e.chain().any(|c| c.is::<Usage>()) {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
