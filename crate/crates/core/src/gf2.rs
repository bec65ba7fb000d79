//! Binary vectors and dense matrices over GF(2).
//!
//! A [`BitBlock`] packs up to 64 bits into a single word. Position 0 is the
//! first transmitted bit and is stored in the least significant bit, so the
//! integer value of a block reads position `i` as weight `2^i`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest block length a [`BitBlock`] can hold.
pub const MAX_BITS: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitBlock {
    bits: u64,
    len: usize,
}

fn mask(len: usize) -> u64 {
    if len == MAX_BITS {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl BitBlock {
    pub fn zeros(len: usize) -> Result<Self> {
        Self::from_u64(0, len)
    }

    /// Builds a block from its integer value. Bits above `len` must be clear.
    pub fn from_u64(bits: u64, len: usize) -> Result<Self> {
        if len > MAX_BITS {
            return Err(Error::BlockTooLong(len));
        }
        if bits & !mask(len) != 0 {
            return Err(Error::InvalidConfig(format!(
                "value {bits:#x} does not fit in {len} bits"
            )));
        }
        Ok(Self { bits, len })
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Result<Self> {
        let mut value = 0u64;
        let mut len = 0usize;
        for bit in bits {
            if len == MAX_BITS {
                return Err(Error::BlockTooLong(len + 1));
            }
            value |= (bit as u64) << len;
            len += 1;
        }
        Ok(Self { bits: value, len })
    }

    /// Unit vector with a single one at `pos`.
    pub fn unit(pos: usize, len: usize) -> Result<Self> {
        if pos >= len {
            return Err(Error::LengthMismatch {
                expected: len,
                actual: pos + 1,
            });
        }
        Self::from_u64(1u64 << pos, len)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn as_u64(&self) -> u64 {
        self.bits
    }

    pub fn get(&self, pos: usize) -> bool {
        assert!(
            pos < self.len,
            "bit index {pos} out of range for length {}",
            self.len
        );
        (self.bits >> pos) & 1 == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| (self.bits >> i) & 1 == 1)
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn xor(&self, other: &BitBlock) -> Result<BitBlock> {
        check_len(self.len, other.len)?;
        Ok(BitBlock {
            bits: self.bits ^ other.bits,
            len: self.len,
        })
    }
}

fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::LengthMismatch { expected, actual });
    }
    Ok(())
}

impl fmt::Display for BitBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in self.iter() {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitBlock({self})")
    }
}

/// Parses a string of `0`/`1` characters, first character at position 0.
impl FromStr for BitBlock {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidConfig(format!(
                    "invalid bit character {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        BitBlock::from_bits(bits)
    }
}

pub fn xor(a: &BitBlock, b: &BitBlock) -> Result<BitBlock> {
    a.xor(b)
}

pub fn hamming_weight(v: &BitBlock) -> u32 {
    v.weight()
}

pub fn hamming_distance(a: &BitBlock, b: &BitBlock) -> Result<u32> {
    Ok(a.xor(b)?.weight())
}

/// Dense binary matrix stored as a list of row blocks.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitMatrix {
    rows: Vec<BitBlock>,
    cols: usize,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        let row = BitBlock::zeros(cols)?;
        Ok(Self {
            rows: vec![row; rows],
            cols,
        })
    }

    pub fn identity(size: usize) -> Result<Self> {
        let rows = (0..size)
            .map(|i| BitBlock::unit(i, size))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { rows, cols: size })
    }

    pub fn from_rows(rows: Vec<BitBlock>) -> Result<Self> {
        let cols = rows.first().map_or(0, BitBlock::len);
        for row in &rows {
            check_len(cols, row.len())?;
        }
        Ok(Self { rows, cols })
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &BitBlock {
        &self.rows[r]
    }

    pub fn row_blocks(&self) -> &[BitBlock] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    /// Column `c` read top to bottom as a block of length `rows`.
    pub fn column(&self, c: usize) -> BitBlock {
        BitBlock::from_bits(self.rows.iter().map(|row| row.get(c)))
            .expect("row count checked at construction")
    }

    pub fn transpose(&self) -> Result<BitMatrix> {
        if self.rows.len() > MAX_BITS {
            return Err(Error::BlockTooLong(self.rows.len()));
        }
        let rows = (0..self.cols).map(|c| self.column(c)).collect();
        Ok(BitMatrix {
            rows,
            cols: self.rows.len(),
        })
    }

    /// Matrix product over GF(2).
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        let rows = self
            .rows
            .iter()
            .map(|row| mat_vec_mul(row, other))
            .collect::<Result<Vec<_>>>()?;
        Ok(BitMatrix {
            rows,
            cols: other.cols,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitBlock::is_zero)
    }

    /// Rank over GF(2) by Gaussian elimination on a copy of the rows.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<u64> = self.rows.iter().map(BitBlock::as_u64).collect();
        let mut rank = 0;
        for c in 0..self.cols {
            let bit = 1u64 << c;
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r] & bit != 0) else {
                continue;
            };
            rows.swap(rank, pivot);
            let pivot_row = rows[rank];
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && *row & bit != 0 {
                    *row ^= pivot_row;
                }
            }
            rank += 1;
        }
        rank
    }
}

/// Row vector times matrix: `result[j] = XOR_i v[i] & m[i][j]`.
pub fn mat_vec_mul(v: &BitBlock, m: &BitMatrix) -> Result<BitBlock> {
    if v.len() != m.rows() {
        return Err(Error::DimensionMismatch {
            vector: v.len(),
            rows: m.rows(),
        });
    }
    let mut acc = 0u64;
    let mut remaining = v.as_u64();
    while remaining != 0 {
        let i = remaining.trailing_zeros() as usize;
        acc ^= m.rows[i].as_u64();
        remaining &= remaining - 1;
    }
    BitBlock::from_u64(acc, m.cols)
}
