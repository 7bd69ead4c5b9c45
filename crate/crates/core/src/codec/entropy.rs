//! Lossless layer: zero-run tokens coded with a static canonical Huffman code.
//!
//! The symbol stream is cut into tokens `(run, value)`, a run of zeros
//! followed by one nonzero value; trailing zeros become a final token with
//! no value. A token's alphabet id is `run_class * 18 + value_class`, where a
//! class is the bit length of the magnitude (value class 0 marks the final
//! run-only token). The remaining bits of the run, the sign and the
//! remaining bits of the value follow the code word verbatim.
//!
//! Stream layout:
//!
//! ```text
//! u32 LE   symbol count
//! u16 LE   code table size T
//! bits     T x (10-bit id, 5-bit code length), ids ascending
//! bits     tokens
//! bits     zero padding to a byte boundary
//! ```

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::bitio::{BitReader, BitWriter};
use crate::error::{Error, Result};

const VALUE_CLASSES: u32 = 18;
const RUN_CLASSES: u32 = 33;
const ALPHABET: usize = (VALUE_CLASSES * RUN_CLASSES) as usize;
const MAX_CODE_LEN: u32 = 24;
const ID_BITS: u32 = 10;
const LEN_BITS: u32 = 5;

/// Largest magnitude the layer can carry.
pub const MAX_MAGNITUDE: u32 = (1 << 17) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Token {
    run: u32,
    value: Option<i32>,
}

fn bit_len(v: u32) -> u32 {
    32 - v.leading_zeros()
}

impl Token {
    fn id(&self) -> usize {
        let vc = self.value.map_or(0, |v| bit_len(v.unsigned_abs()));
        (bit_len(self.run) * VALUE_CLASSES + vc) as usize
    }

    fn write_extra(&self, w: &mut BitWriter) {
        let rc = bit_len(self.run);
        if rc >= 2 {
            w.write(self.run - (1 << (rc - 1)), rc - 1);
        }
        if let Some(v) = self.value {
            let mag = v.unsigned_abs();
            let vc = bit_len(mag);
            w.write((v < 0) as u32, 1);
            if vc >= 2 {
                w.write(mag - (1 << (vc - 1)), vc - 1);
            }
        }
    }

    fn read(id: usize, r: &mut BitReader) -> Result<Token> {
        let rc = id as u32 / VALUE_CLASSES;
        let vc = id as u32 % VALUE_CLASSES;
        let run = match rc {
            0 => 0,
            1 => 1,
            _ => (1u32 << (rc - 1)) | r.read(rc - 1)?,
        };
        let value = if vc == 0 {
            None
        } else {
            let negative = r.read_bit()? == 1;
            let mag = if vc == 1 {
                1
            } else {
                (1u32 << (vc - 1)) | r.read(vc - 1)?
            };
            Some(if negative { -(mag as i32) } else { mag as i32 })
        };
        Ok(Token { run, value })
    }
}

fn valid_id(id: usize) -> bool {
    // class (0, 0) would be an empty token
    id < ALPHABET && id != 0
}

fn tokenize(symbols: &[i32]) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut run = 0u32;
    for &s in symbols {
        if s == 0 {
            run += 1;
        } else {
            if s.unsigned_abs() > MAX_MAGNITUDE {
                return Err(Error::SymbolOutOfRange {
                    symbol: s as i64,
                    limit: MAX_MAGNITUDE as i64,
                });
            }
            tokens.push(Token {
                run,
                value: Some(s),
            });
            run = 0;
        }
    }
    if run > 0 {
        tokens.push(Token { run, value: None });
    }
    Ok(tokens)
}

/// Huffman code lengths for the nonzero counts, limited to `MAX_CODE_LEN` by
/// halving counts until the tree is shallow enough.
fn code_lengths(counts: &[u64]) -> Vec<u32> {
    let mut weights: Vec<u64> = counts.to_vec();
    let used: Vec<usize> = (0..counts.len()).filter(|&i| counts[i] > 0).collect();
    let mut lengths = vec![0u32; counts.len()];
    if used.len() == 1 {
        lengths[used[0]] = 1;
        return lengths;
    }
    loop {
        // (weight, tie-break order) min-heap; parents indexed after leaves
        let mut heap = BinaryHeap::new();
        let mut parent: Vec<usize> = vec![usize::MAX; used.len()];
        for (slot, &sym) in used.iter().enumerate() {
            heap.push(Reverse((weights[sym], slot)));
        }
        let mut next = used.len();
        while heap.len() > 1 {
            let Reverse((wa, a)) = heap.pop().unwrap();
            let Reverse((wb, b)) = heap.pop().unwrap();
            parent.push(usize::MAX);
            parent[a] = next;
            parent[b] = next;
            heap.push(Reverse((wa + wb, next)));
            next += 1;
        }
        let mut depth = vec![0u32; parent.len()];
        for node in (0..parent.len()).rev() {
            if parent[node] != usize::MAX {
                depth[node] = depth[parent[node]] + 1;
            }
        }
        let deepest = used
            .iter()
            .enumerate()
            .map(|(s, _)| depth[s])
            .max()
            .unwrap_or(0);
        if deepest <= MAX_CODE_LEN {
            for (slot, &sym) in used.iter().enumerate() {
                lengths[sym] = depth[slot];
            }
            return lengths;
        }
        for &sym in &used {
            weights[sym] = weights[sym].div_ceil(2);
        }
    }
}

/// Canonical code words `(code, length)` in order of `(length, id)`.
fn canonical(lengths: &[(usize, u32)]) -> Vec<(usize, u32, u32)> {
    let mut sorted: Vec<(usize, u32)> = lengths.to_vec();
    sorted.sort_by_key(|&(id, len)| (len, id));
    let mut out = Vec::with_capacity(sorted.len());
    let mut code = 0u32;
    let mut prev = 0u32;
    for (i, &(id, len)) in sorted.iter().enumerate() {
        if i > 0 {
            code += 1;
        }
        code <<= len - prev;
        prev = len;
        out.push((id, code, len));
    }
    out
}

pub fn entropy_encode(symbols: &[i32]) -> Result<Vec<u8>> {
    let count = u32::try_from(symbols.len())
        .map_err(|_| Error::Entropy("more than 2^32 - 1 symbols".into()))?;
    let tokens = tokenize(symbols)?;
    let mut counts = vec![0u64; ALPHABET];
    for t in &tokens {
        counts[t.id()] += 1;
    }
    let lengths = code_lengths(&counts);
    let table: Vec<(usize, u32)> = (0..ALPHABET)
        .filter(|&i| lengths[i] > 0)
        .map(|i| (i, lengths[i]))
        .collect();
    let mut codes = vec![(0u32, 0u32); ALPHABET];
    for (id, code, len) in canonical(&table) {
        codes[id] = (code, len);
    }

    let mut out = Vec::with_capacity(6 + tokens.len());
    out.extend(count.to_le_bytes());
    out.extend((table.len() as u16).to_le_bytes());
    let mut w = BitWriter::new();
    for &(id, len) in &table {
        w.write(id as u32, ID_BITS);
        w.write(len, LEN_BITS);
    }
    for t in &tokens {
        let (code, len) = codes[t.id()];
        w.write(code, len);
        t.write_extra(&mut w);
    }
    out.extend(w.finish());
    Ok(out)
}

struct Decoder {
    /// ids sorted by (length, id)
    symbols: Vec<usize>,
    /// per length: (first code, number of codes, index of first symbol)
    per_len: Vec<(u32, u32, usize)>,
}

impl Decoder {
    fn new(table: &[(usize, u32)]) -> Result<Self> {
        let mut kraft = 0u64;
        for &(_, len) in table {
            kraft += 1u64 << (MAX_CODE_LEN - len);
        }
        if kraft > 1u64 << MAX_CODE_LEN {
            return Err(Error::Entropy("code table is over-subscribed".into()));
        }
        let words = canonical(table);
        let mut per_len = vec![(0u32, 0u32, 0usize); MAX_CODE_LEN as usize + 1];
        for (i, &(_, code, len)) in words.iter().enumerate() {
            let e = &mut per_len[len as usize];
            if e.1 == 0 {
                *e = (code, 0, i);
            }
            e.1 += 1;
        }
        Ok(Decoder {
            symbols: words.iter().map(|w| w.0).collect(),
            per_len,
        })
    }

    fn next(&self, r: &mut BitReader) -> Result<usize> {
        let mut code = 0u32;
        for len in 1..=MAX_CODE_LEN as usize {
            code = (code << 1) | r.read_bit()?;
            let (first, n, base) = self.per_len[len];
            if n > 0 && code >= first && code - first < n {
                return Ok(self.symbols[base + (code - first) as usize]);
            }
        }
        Err(Error::Entropy("invalid code word".into()))
    }
}

pub fn entropy_decode(data: &[u8]) -> Result<Vec<i32>> {
    if data.len() < 6 {
        return Err(Error::Entropy("truncated stream header".into()));
    }
    let count = u32::from_le_bytes(data[0..4].try_into().unwrap()) as usize;
    let table_len = u16::from_le_bytes(data[4..6].try_into().unwrap()) as usize;
    let mut r = BitReader::new(&data[6..]);
    let mut table = Vec::with_capacity(table_len);
    let mut last_id = None;
    for _ in 0..table_len {
        let id = r.read(ID_BITS)? as usize;
        let len = r.read(LEN_BITS)?;
        if !valid_id(id) || len == 0 || len > MAX_CODE_LEN {
            return Err(Error::Entropy(format!("bad table entry ({id}, {len})")));
        }
        if last_id.is_some_and(|l| id <= l) {
            return Err(Error::Entropy("code table ids not ascending".into()));
        }
        last_id = Some(id);
        table.push((id, len));
    }
    if count > 0 && table.is_empty() {
        return Err(Error::Entropy(
            "symbols present but code table is empty".into(),
        ));
    }
    let decoder = Decoder::new(&table)?;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let token = Token::read(decoder.next(&mut r)?, &mut r)?;
        let needed = token.run as usize + token.value.is_some() as usize;
        if out.len() + needed > count {
            return Err(Error::Entropy("token runs past the symbol count".into()));
        }
        out.extend(std::iter::repeat_n(0, token.run as usize));
        match token.value {
            Some(v) => out.push(v),
            None if out.len() != count => {
                return Err(Error::Entropy("run-only token before the end".into()));
            }
            None => {}
        }
    }
    r.expect_end()?;
    Ok(out)
}
