use crate::error::{Error, Result};

/// MSB-first bit packer.
#[derive(Debug, Default)]
pub struct BitWriter {
    bytes: Vec<u8>,
    acc: u64,
    pending: u32,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn write(&mut self, value: u32, bits: u32) {
        debug_assert!(bits <= 32);
        debug_assert!(bits == 32 || value >> bits == 0);
        if bits == 0 {
            return;
        }
        self.acc = (self.acc << bits) | value as u64;
        self.pending += bits;
        while self.pending >= 8 {
            self.pending -= 8;
            self.bytes.push((self.acc >> self.pending) as u8);
        }
        self.acc &= (1u64 << self.pending) - 1;
    }

    /// Flush with zero padding to a byte boundary.
    pub fn finish(mut self) -> Vec<u8> {
        if self.pending > 0 {
            self.bytes.push((self.acc << (8 - self.pending)) as u8);
        }
        self.bytes
    }
}

pub struct BitReader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(data: &'a [u8]) -> Self {
        BitReader { data, pos: 0 }
    }

    pub fn read_bit(&mut self) -> Result<u32> {
        let byte = self
            .data
            .get(self.pos / 8)
            .ok_or_else(|| Error::Entropy("truncated bitstream".into()))?;
        let bit = (byte >> (7 - self.pos % 8)) & 1;
        self.pos += 1;
        Ok(bit as u32)
    }

    pub fn read(&mut self, bits: u32) -> Result<u32> {
        let mut v = 0u32;
        for _ in 0..bits {
            v = (v << 1) | self.read_bit()?;
        }
        Ok(v)
    }

    /// Fails unless only zero padding of the final byte remains.
    pub fn expect_end(&mut self) -> Result<()> {
        while !self.pos.is_multiple_of(8) {
            if self.read_bit()? != 0 {
                return Err(Error::Entropy("nonzero padding bits".into()));
            }
        }
        if self.pos / 8 != self.data.len() {
            return Err(Error::Entropy(format!(
                "{} trailing bytes after the last symbol",
                self.data.len() - self.pos / 8
            )));
        }
        Ok(())
    }
}
