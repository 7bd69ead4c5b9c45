//! `PHW1` container: fixed 48-byte little-endian header, entropy payload,
//! CRC-32 trailer.
//!
//! ```text
//! offset size field
//!  0     4    magic "PHW1"
//!  4     1    version (1)
//!  5     1    transform: 0 = PH, 1 = DB
//!  6     1    boundary: 0 = periodic, 1 = symmetric-expansive
//!  7     1    flags: bit 0 = Fourier axis is vertical; other bits zero
//!  8     4    width  (u32)
//! 12     4    height (u32)
//! 16     1    Daubechies order N
//! 17     1    coarse level m0
//! 18     1    quantizer bits
//! 19     1    level shift added back after the inverse transform (u8)
//! 20     8    xi scale (f64)
//! 28     8    real-plane amplitude (f64)
//! 36     8    imaginary-plane amplitude (f64)
//! 44     4    payload length in bytes (u32)
//! 48     n    entropy payload
//! 48+n   4    CRC-32 (IEEE) of bytes 0 .. 48+n
//! ```

use super::quantizer::{MAX_BITS, MIN_BITS};
use crate::error::{Error, Result};
use crate::mask::MAX_ORDER;
use crate::wavelet1d::Boundary;

pub const MAGIC: &[u8; 4] = b"PHW1";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 48;
pub const TRAILER_LEN: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transform {
    /// Polyharmonic subdivision (mixed Fourier x wavelet).
    Ph,
    /// Separable Daubechies.
    Db,
}

impl Transform {
    pub fn name(self) -> &'static str {
        match self {
            Transform::Ph => "PH",
            Transform::Db => "DB",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContainerHeader {
    pub transform: Transform,
    pub boundary: Boundary,
    pub transpose: bool,
    pub width: u32,
    pub height: u32,
    pub order: u8,
    pub coarse_level: u8,
    pub bits: u8,
    /// Subtracted from every pixel before the forward transform.
    pub level_shift: u8,
    pub xi_scale: f64,
    pub amplitude_re: f64,
    pub amplitude_im: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompressedImage {
    pub header: ContainerHeader,
    pub payload: Vec<u8>,
}

impl ContainerHeader {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Container(m));
        for d in [self.width, self.height] {
            if d == 0 || !d.is_power_of_two() {
                return bad(format!("dimension {d} is not a power of two"));
            }
        }
        if !(1..=MAX_ORDER as u8).contains(&self.order) {
            return bad(format!("order {} out of range", self.order));
        }
        if !(MIN_BITS..=MAX_BITS).contains(&self.bits) {
            return bad(format!("quantizer bits {} out of range", self.bits));
        }
        for a in [self.amplitude_re, self.amplitude_im] {
            if !(a.is_finite() && a > 0.0) {
                return bad(format!("invalid amplitude {a}"));
            }
        }
        if !(self.xi_scale.is_finite() && self.xi_scale >= 0.0) {
            return bad(format!("invalid xi scale {}", self.xi_scale));
        }
        if self.transform == Transform::Db
            && (self.boundary != Boundary::Periodic || self.transpose)
        {
            return bad("DB containers are periodic and untransposed".into());
        }
        Ok(())
    }
}

impl CompressedImage {
    pub fn byte_len(&self) -> usize {
        HEADER_LEN + self.payload.len() + TRAILER_LEN
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let h = &self.header;
        let mut out = Vec::with_capacity(self.byte_len());
        out.extend(MAGIC);
        out.push(VERSION);
        out.push(match h.transform {
            Transform::Ph => 0,
            Transform::Db => 1,
        });
        out.push(match h.boundary {
            Boundary::Periodic => 0,
            Boundary::SymmetricExpansive => 1,
        });
        out.push(h.transpose as u8);
        out.extend(h.width.to_le_bytes());
        out.extend(h.height.to_le_bytes());
        out.extend([h.order, h.coarse_level, h.bits, h.level_shift]);
        out.extend(h.xi_scale.to_le_bytes());
        out.extend(h.amplitude_re.to_le_bytes());
        out.extend(h.amplitude_im.to_le_bytes());
        out.extend((self.payload.len() as u32).to_le_bytes());
        out.extend(&self.payload);
        let crc = crc32fast::hash(&out);
        out.extend(crc.to_le_bytes());
        out
    }

    pub fn from_bytes(data: &[u8]) -> Result<Self> {
        let bad = |m: &str| Error::Container(m.to_string());
        if data.len() < HEADER_LEN + TRAILER_LEN {
            return Err(bad("truncated container"));
        }
        if &data[0..4] != MAGIC {
            return Err(bad("bad magic"));
        }
        if data[4] != VERSION {
            return Err(Error::Container(format!("unsupported version {}", data[4])));
        }
        let u32_at = |o: usize| u32::from_le_bytes(data[o..o + 4].try_into().unwrap());
        let f64_at = |o: usize| f64::from_le_bytes(data[o..o + 8].try_into().unwrap());
        let payload_len = u32_at(44) as usize;
        if data.len() != HEADER_LEN + payload_len + TRAILER_LEN {
            return Err(Error::Container(format!(
                "container is {} bytes, header announces {}",
                data.len(),
                HEADER_LEN + payload_len + TRAILER_LEN
            )));
        }
        let body = &data[..HEADER_LEN + payload_len];
        if crc32fast::hash(body) != u32_at(HEADER_LEN + payload_len) {
            return Err(bad("checksum mismatch"));
        }
        let transform = match data[5] {
            0 => Transform::Ph,
            1 => Transform::Db,
            t => return Err(Error::Container(format!("unknown transform {t}"))),
        };
        let boundary = match data[6] {
            0 => Boundary::Periodic,
            1 => Boundary::SymmetricExpansive,
            b => return Err(Error::Container(format!("unknown boundary {b}"))),
        };
        if data[7] & !1 != 0 {
            return Err(bad("reserved bits set"));
        }
        let header = ContainerHeader {
            transform,
            boundary,
            transpose: data[7] & 1 == 1,
            width: u32_at(8),
            height: u32_at(12),
            order: data[16],
            coarse_level: data[17],
            bits: data[18],
            level_shift: data[19],
            xi_scale: f64_at(20),
            amplitude_re: f64_at(28),
            amplitude_im: f64_at(36),
        };
        header.validate()?;
        Ok(CompressedImage {
            header,
            payload: data[HEADER_LEN..HEADER_LEN + payload_len].to_vec(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CompressedImage {
        CompressedImage {
            header: ContainerHeader {
                transform: Transform::Ph,
                boundary: Boundary::SymmetricExpansive,
                transpose: true,
                width: 128,
                height: 64,
                order: 3,
                coarse_level: 2,
                bits: 9,
                level_shift: 17,
                xi_scale: 0.5,
                amplitude_re: 1234.5,
                amplitude_im: 17.25,
            },
            payload: vec![1, 2, 3, 4, 5],
        }
    }

    #[test]
    fn layout() {
        let c = sample();
        let bytes = c.to_bytes();
        assert_eq!(bytes.len(), c.byte_len());
        assert_eq!(&bytes[0..4], b"PHW1");
        assert_eq!(bytes[4], 1);
        assert_eq!(bytes[5], 0);
        assert_eq!(bytes[6], 1);
        assert_eq!(bytes[7], 1);
        assert_eq!(&bytes[8..12], &128u32.to_le_bytes());
        assert_eq!(&bytes[16..20], &[3, 2, 9, 17]);
        assert_eq!(&bytes[20..28], &0.5f64.to_le_bytes());
        assert_eq!(&bytes[44..48], &5u32.to_le_bytes());
        assert_eq!(&bytes[48..53], &[1, 2, 3, 4, 5]);
        assert_eq!(CompressedImage::from_bytes(&bytes).unwrap(), c);
    }

    #[test]
    fn every_single_byte_flip_is_rejected() {
        let bytes = sample().to_bytes();
        for i in 0..bytes.len() {
            let mut b = bytes.clone();
            b[i] ^= 0x10;
            assert!(CompressedImage::from_bytes(&b).is_err(), "byte {i}");
        }
    }

    #[test]
    fn truncation_rejected() {
        let bytes = sample().to_bytes();
        for cut in 0..bytes.len() {
            assert!(CompressedImage::from_bytes(&bytes[..cut]).is_err());
        }
    }

    #[test]
    fn header_validation() {
        let mut c = sample();
        c.header.width = 100;
        assert!(CompressedImage::from_bytes(&c.to_bytes()).is_err());
        let mut c = sample();
        c.header.transform = Transform::Db;
        assert!(c.header.validate().is_err());
    }
}
