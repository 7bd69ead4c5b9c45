//! Coefficient scatter tables (`eta,level,j,re,im,kind`).

use std::fmt;
use std::io::{self, Write};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoefficientKind {
    Detail,
    Approx,
    /// Separable subbands; first letter is the horizontal filter.
    LL,
    LH,
    HL,
    HH,
}

impl fmt::Display for CoefficientKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoefficientKind::Detail => "detail",
            CoefficientKind::Approx => "approx",
            CoefficientKind::LL => "LL",
            CoefficientKind::LH => "LH",
            CoefficientKind::HL => "HL",
            CoefficientKind::HH => "HH",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterRow {
    /// Frequency index; `None` for the separable baseline.
    pub eta: Option<i64>,
    pub level: u32,
    pub j: usize,
    pub re: f64,
    pub im: f64,
    pub kind: CoefficientKind,
}

impl ScatterRow {
    pub fn magnitude(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

pub const CSV_HEADER: &str = "eta,level,j,re,im,kind";

/// Write rows as CSV with LF line endings. Floats use the shortest
/// representation that round-trips.
pub fn write_csv<W: Write>(mut out: W, rows: &[ScatterRow]) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        match r.eta {
            Some(e) => write!(out, "{e},")?,
            None => write!(out, ",")?,
        }
        writeln!(out, "{},{},{:?},{:?},{}", r.level, r.j, r.re, r.im, r.kind)?;
    }
    out.flush()
}

pub fn to_csv_string(rows: &[ScatterRow]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("ascii output")
}
