//! Correlated source pairs with bounded Hamming distance.
//!
//! `c1` is uniform over all n-bit words and `c2 = c1 ^ e`, where `e` is drawn
//! uniformly from the Hamming ball of radius `t`. The ball is enumerated once
//! at construction so every draw is a single index lookup.

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::{BitBlock, MAX_BITS};

const MAX_BALL: u128 = 1 << 22;

#[derive(Clone, Debug)]
pub struct CorrelationModel {
    n: usize,
    t: usize,
    ball: Ball,
}

#[derive(Clone, Debug)]
enum Ball {
    Listed(Vec<u64>),
    /// `t == n`: every word is in the ball.
    Everything,
}

impl CorrelationModel {
    pub fn new(n: usize, t: usize) -> Result<Self> {
        if n == 0 || n > MAX_BITS || t > n {
            return Err(Error::InvalidConfig(format!(
                "correlation model needs 0 <= t <= n <= {MAX_BITS}, got n={n}, t={t}"
            )));
        }
        let ball = if t == n {
            Ball::Everything
        } else {
            let size: u128 = (0..=t).map(|w| binomial(n, w)).sum();
            if size > MAX_BALL {
                return Err(Error::InvalidConfig(format!(
                    "Hamming ball of radius {t} in {n} bits has {size} members"
                )));
            }
            Ball::Listed(enumerate_ball(n, t))
        };
        Ok(Self { n, t, ball })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Number of admissible difference patterns.
    pub fn ball_size(&self) -> u128 {
        match &self.ball {
            Ball::Listed(v) => v.len() as u128,
            Ball::Everything => 1u128 << self.n,
        }
    }

    pub fn generate_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> (BitBlock, BitBlock) {
        let c1 = random_word(self.n, rng);
        let e = match &self.ball {
            Ball::Listed(v) => v[rng.random_range(0..v.len())],
            Ball::Everything => random_word(self.n, rng),
        };
        let c1 = BitBlock::from_u64(c1, self.n).expect("masked to n bits");
        let e = BitBlock::from_u64(e, self.n).expect("ball member has n bits");
        let c2 = c1.xor(&e).expect("equal lengths");
        (c1, c2)
    }

    /// Worst-case normalized correlation `1 - 2t/n`.
    pub fn correlation_factor(&self) -> f64 {
        correlation_factor(self.n, self.t)
    }
}

pub fn correlation_factor(n: usize, t: usize) -> f64 {
    1.0 - 2.0 * t as f64 / n as f64
}

fn random_word<R: Rng + ?Sized>(n: usize, rng: &mut R) -> u64 {
    let w: u64 = rng.random();
    if n == MAX_BITS {
        w
    } else {
        w & ((1u64 << n) - 1)
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn enumerate_ball(n: usize, t: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut stack: Vec<(u64, usize, usize)> = vec![(0, 0, 0)];
    // Depth-first: choose the next set position from `start`, up to t ones.
    while let Some((pattern, start, weight)) = stack.pop() {
        out.push(pattern);
        if weight == t {
            continue;
        }
        for pos in start..n {
            stack.push((pattern | 1 << pos, pos + 1, weight + 1));
        }
    }
    out.sort_unstable_by_key(|&p| (p.count_ones(), p));
    out
}
