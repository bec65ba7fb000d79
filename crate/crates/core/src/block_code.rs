//! Binary linear block codes used as Slepian-Wolf binning codes.
//!
//! Each coset of the code is one bin, labelled by its syndrome `c * H^T`.
//! Decoding a syndrome returns the coset leader: the minimum-weight pattern in
//! that coset. Ties between equal-weight patterns go to the pattern with the
//! smallest integer value (position 0 least significant).

use crate::error::{Error, Result};
use crate::gf2::{mat_vec_mul, BitBlock, BitMatrix, MAX_BITS};

/// Generator polynomials of the narrow-sense binary BCH codes of length 15,
/// as `(n, k, t, poly)` with bit `i` holding the coefficient of `x^i`.
const BCH15: [(usize, usize, usize, u64); 3] = [
    // x^4 + x + 1
    (15, 11, 1, 0b1_0011),
    // x^8 + x^7 + x^6 + x^4 + 1
    (15, 7, 2, 0b1_1101_0001),
    // x^10 + x^8 + x^5 + x^4 + x^2 + x + 1
    (15, 5, 3, 0b101_0011_0111),
];

/// Largest syndrome length for which the full coset-leader table is built.
const MAX_SYNDROME_BITS: usize = 20;

#[derive(Clone, Debug)]
pub struct LinearBlockCode {
    n: usize,
    k: usize,
    t: usize,
    generator_poly: Option<u64>,
    generator: BitMatrix,
    parity_check: BitMatrix,
    parity_check_t: BitMatrix,
    coset_leaders: Vec<BitBlock>,
}

/// Builds one of the supported length-15 BCH codes.
pub fn make_bch(n: usize, k: usize) -> Result<LinearBlockCode> {
    let &(_, _, t, poly) = BCH15
        .iter()
        .find(|&&(cn, ck, _, _)| cn == n && ck == k)
        .ok_or(Error::UnsupportedCode { n, k })?;
    LinearBlockCode::from_generator_poly(n, k, t, poly)
}

/// The `(n, k)` pairs accepted by [`make_bch`].
pub fn supported_codes() -> impl Iterator<Item = (usize, usize)> {
    BCH15.iter().map(|&(n, k, _, _)| (n, k))
}

impl LinearBlockCode {
    /// Builds the cyclic code generated by `poly` (degree `n - k`) and checks
    /// that its minimum distance supports correcting `t` errors.
    pub fn from_generator_poly(n: usize, k: usize, t: usize, poly: u64) -> Result<Self> {
        if k == 0 || k >= n || n > MAX_BITS {
            return Err(Error::UnsupportedCode { n, k });
        }
        let m = n - k;
        if m > MAX_SYNDROME_BITS || poly >> m != 1 || poly & 1 == 0 {
            return Err(Error::UnsupportedCode { n, k });
        }
        let shifted = (0..k)
            .map(|i| BitBlock::from_u64(poly << i, n))
            .collect::<Result<Vec<_>>>()?;
        let generator = systematic(BitMatrix::from_rows(shifted)?, k)?;

        // H = [P^T | I_m] for G = [I_k | P].
        let parity_rows = (0..m)
            .map(|j| {
                let mut bits = 1u64 << (k + j);
                for i in 0..k {
                    if generator.get(i, k + j) {
                        bits |= 1 << i;
                    }
                }
                BitBlock::from_u64(bits, n)
            })
            .collect::<Result<Vec<_>>>()?;
        let parity_check = BitMatrix::from_rows(parity_rows)?;
        let parity_check_t = parity_check.transpose()?;

        let mut code = Self {
            n,
            k,
            t,
            generator_poly: Some(poly),
            generator,
            parity_check,
            parity_check_t,
            coset_leaders: Vec::new(),
        };
        let d_min = code.minimum_distance();
        if (d_min as usize) < 2 * t + 1 {
            return Err(Error::InvalidConfig(format!(
                "({n},{k}) code has minimum distance {d_min}, cannot correct {t} errors"
            )));
        }
        code.coset_leaders = build_coset_leader_table(&code);
        Ok(code)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Syndrome length `n - k`.
    pub fn m(&self) -> usize {
        self.n - self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn generator_poly(&self) -> Option<u64> {
        self.generator_poly
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.parity_check
    }

    pub fn coset_leaders(&self) -> &[BitBlock] {
        &self.coset_leaders
    }

    pub fn compression_ratio(&self) -> f64 {
        self.m() as f64 / self.n as f64
    }

    pub fn syndrome(&self, word: &BitBlock) -> Result<BitBlock> {
        if word.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: word.len(),
            });
        }
        mat_vec_mul(word, &self.parity_check_t)
    }

    pub fn encode(&self, message: &BitBlock) -> Result<BitBlock> {
        if message.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                actual: message.len(),
            });
        }
        mat_vec_mul(message, &self.generator)
    }

    /// Coset leader for syndrome `s`.
    pub fn decode_error_pattern(&self, s: &BitBlock) -> Result<BitBlock> {
        if s.len() != self.m() {
            return Err(Error::LengthMismatch {
                expected: self.m(),
                actual: s.len(),
            });
        }
        Ok(self.coset_leaders[s.as_u64() as usize])
    }

    pub fn codewords(&self) -> impl Iterator<Item = BitBlock> + '_ {
        (0..1u64 << self.k).map(move |msg| {
            let msg = BitBlock::from_u64(msg, self.k).expect("message fits in k bits");
            mat_vec_mul(&msg, &self.generator).expect("generator has k rows")
        })
    }

    /// Minimum distance by enumeration of all nonzero codewords.
    pub fn minimum_distance(&self) -> u32 {
        self.codewords()
            .filter(|c| !c.is_zero())
            .map(|c| c.weight())
            .min()
            .unwrap_or(0)
    }
}

/// Row-reduces `g` so that its first `k` columns form the identity.
fn systematic(g: BitMatrix, k: usize) -> Result<BitMatrix> {
    let n = g.cols();
    let mut rows: Vec<u64> = g.row_blocks().iter().map(BitBlock::as_u64).collect();
    for c in 0..k {
        let bit = 1u64 << c;
        let pivot = (c..k)
            .find(|&r| rows[r] & bit != 0)
            .ok_or_else(|| Error::InvalidConfig("generator is not systematic-reducible".into()))?;
        rows.swap(c, pivot);
        let pivot_row = rows[c];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != c && *row & bit != 0 {
                *row ^= pivot_row;
            }
        }
    }
    BitMatrix::from_rows(
        rows.into_iter()
            .map(|r| BitBlock::from_u64(r, n))
            .collect::<Result<Vec<_>>>()?,
    )
}

/// Next larger integer with the same popcount (Gosper's hack).
fn next_same_weight(v: u64) -> Option<u64> {
    let c = v & v.wrapping_neg();
    let r = v.checked_add(c)?;
    Some((((r ^ v) >> 2) / c) | r)
}

/// Fills one minimum-weight leader per syndrome, visiting patterns by
/// increasing weight and, within a weight, by increasing integer value.
pub fn build_coset_leader_table(code: &LinearBlockCode) -> Vec<BitBlock> {
    let n = code.n();
    let size = 1usize << code.m();
    let mut table: Vec<Option<BitBlock>> = vec![None; size];
    let mut filled = 0;
    let limit = if n == MAX_BITS { u64::MAX } else { 1u64 << n };

    'weights: for w in 0..=n {
        let mut pattern = if w == 0 { 0 } else { (1u64 << w) - 1 };
        loop {
            let e = BitBlock::from_u64(pattern, n).expect("pattern fits in n bits");
            let s = code.syndrome(&e).expect("length n").as_u64() as usize;
            if table[s].is_none() {
                table[s] = Some(e);
                filled += 1;
                if filled == size {
                    break 'weights;
                }
            }
            if w == 0 {
                break;
            }
            match next_same_weight(pattern) {
                Some(next) if next < limit => pattern = next,
                _ => break,
            }
        }
    }
    table
        .into_iter()
        .map(|e| e.expect("every coset has a member of weight <= n"))
        .collect()
}
