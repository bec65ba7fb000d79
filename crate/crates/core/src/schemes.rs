//! Single-exchange pipelines for the three relaying schemes.
//!
//! Every exchange has an uplink phase (both sources transmit simultaneously,
//! the relay applies the PNC mapping) and a downlink phase (the relay
//! broadcasts, each source demodulates with its own noise realization). The
//! schemes differ in what crosses the air:
//!
//! | scheme       | uplink        | downlink        |
//! |--------------|---------------|-----------------|
//! | SCPNC        | syndromes (m) | XOR syndrome (m)|
//! | RCPNC        | messages (n)  | syndrome of XOR estimate (m) |
//! | Conventional | messages (n)  | XOR estimate (n)|

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::block_code::LinearBlockCode;
use crate::error::{Error, Result};
use crate::gf2::{hamming_distance, BitBlock};
use crate::phy::{awgn, bpsk_demodulate, bpsk_modulate, multiple_access, pnc_map, ChannelParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    Scpnc,
    Rcpnc,
    Conventional,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 3] = [
        SchemeKind::Scpnc,
        SchemeKind::Rcpnc,
        SchemeKind::Conventional,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SchemeKind::Scpnc => "scpnc",
            SchemeKind::Rcpnc => "rcpnc",
            SchemeKind::Conventional => "conventional",
        }
    }

    /// `(uplink, downlink)` symbol intervals per exchange.
    pub fn symbol_budget(&self, n: usize, k: usize) -> (usize, usize) {
        let m = n - k;
        match self {
            SchemeKind::Scpnc => (m, m),
            SchemeKind::Rcpnc => (n, m),
            SchemeKind::Conventional => (n, n),
        }
    }

    /// Blocks per time slot when every exchange succeeds in both directions.
    pub fn throughput_ceiling(&self, n: usize, k: usize) -> f64 {
        let (up, down) = self.symbol_budget(n, k);
        2.0 * n as f64 / (up + down) as f64
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "scpnc" => Ok(SchemeKind::Scpnc),
            "rcpnc" => Ok(SchemeKind::Rcpnc),
            "conventional" | "conv" => Ok(SchemeKind::Conventional),
            other => Err(Error::InvalidConfig(format!("unknown scheme {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    /// T2 recovered c1 exactly.
    pub ok_1to2: bool,
    /// T1 recovered c2 exactly.
    pub ok_2to1: bool,
    pub uplink_symbols: usize,
    pub downlink_symbols: usize,
}

impl TrialOutcome {
    pub fn successes(&self) -> u32 {
        self.ok_1to2 as u32 + self.ok_2to1 as u32
    }

    pub fn symbols(&self) -> usize {
        self.uplink_symbols + self.downlink_symbols
    }
}

/// Intermediate values of one exchange, for inspection in tests and tools.
#[derive(Clone, Debug)]
pub struct Exchange {
    /// What the relay believes the XOR of the uplink payloads is.
    pub relay_estimate: BitBlock,
    /// The block the relay broadcasts.
    pub broadcast: BitBlock,
    /// Hard decisions at T1 and T2.
    pub received: [BitBlock; 2],
    /// Recovered `c2` at T1 and `c1` at T2.
    pub recovered: [BitBlock; 2],
    pub outcome: TrialOutcome,
}

fn check_pair(code: &LinearBlockCode, c1: &BitBlock, c2: &BitBlock) -> Result<()> {
    for c in [c1, c2] {
        if c.len() != code.n() {
            return Err(Error::LengthMismatch {
                expected: code.n(),
                actual: c.len(),
            });
        }
    }
    let distance = hamming_distance(c1, c2)?;
    if distance as usize > code.t() {
        return Err(Error::CorrelationViolation {
            distance,
            t: code.t(),
        });
    }
    Ok(())
}

fn uplink<R: Rng + ?Sized>(
    a: &BitBlock,
    b: &BitBlock,
    params: &ChannelParams,
    rng: &mut R,
) -> Result<BitBlock> {
    let y = multiple_access(&bpsk_modulate(a, 1.0), &bpsk_modulate(b, 1.0), params, rng)?;
    pnc_map(&y, params)
}

/// Relay broadcast: one independent noisy copy per destination.
fn downlink<R: Rng + ?Sized>(
    broadcast: &BitBlock,
    params: &ChannelParams,
    rng: &mut R,
) -> Result<[BitBlock; 2]> {
    let x = bpsk_modulate(broadcast, params.energy());
    let at_t1 = bpsk_demodulate(&awgn(&x, params, rng))?;
    let at_t2 = bpsk_demodulate(&awgn(&x, params, rng))?;
    Ok([at_t1, at_t2])
}

/// Slepian-Wolf decoding with side information: the coset leader of the
/// received syndrome is the estimated difference pattern.
pub fn sw_decode(code: &LinearBlockCode, syndrome: &BitBlock, own: &BitBlock) -> Result<BitBlock> {
    code.decode_error_pattern(syndrome)?.xor(own)
}

/// RCPNC relay compression of its XOR estimate.
pub fn relay_compress(code: &LinearBlockCode, estimate: &BitBlock) -> Result<BitBlock> {
    code.syndrome(estimate)
}

fn finish(
    c1: &BitBlock,
    c2: &BitBlock,
    relay_estimate: BitBlock,
    broadcast: BitBlock,
    received: [BitBlock; 2],
    recovered: [BitBlock; 2],
    budget: (usize, usize),
) -> Exchange {
    let outcome = TrialOutcome {
        ok_1to2: recovered[1] == *c1,
        ok_2to1: recovered[0] == *c2,
        uplink_symbols: budget.0,
        downlink_symbols: budget.1,
    };
    Exchange {
        relay_estimate,
        broadcast,
        received,
        recovered,
        outcome,
    }
}

pub fn scpnc_exchange<R: Rng + ?Sized>(
    code: &LinearBlockCode,
    params: &ChannelParams,
    (c1, c2): (&BitBlock, &BitBlock),
    rng: &mut R,
) -> Result<Exchange> {
    check_pair(code, c1, c2)?;
    let s1 = code.syndrome(c1)?;
    let s2 = code.syndrome(c2)?;
    let s_r = uplink(&s1, &s2, params, rng)?;
    let received = downlink(&s_r, params, rng)?;
    let recovered = [
        sw_decode(code, &received[0], c1)?,
        sw_decode(code, &received[1], c2)?,
    ];
    let budget = SchemeKind::Scpnc.symbol_budget(code.n(), code.k());
    Ok(finish(c1, c2, s_r, s_r, received, recovered, budget))
}

pub fn rcpnc_exchange<R: Rng + ?Sized>(
    code: &LinearBlockCode,
    params: &ChannelParams,
    (c1, c2): (&BitBlock, &BitBlock),
    rng: &mut R,
) -> Result<Exchange> {
    check_pair(code, c1, c2)?;
    let c_r = uplink(c1, c2, params, rng)?;
    let s_r = relay_compress(code, &c_r)?;
    let received = downlink(&s_r, params, rng)?;
    let recovered = [
        sw_decode(code, &received[0], c1)?,
        sw_decode(code, &received[1], c2)?,
    ];
    let budget = SchemeKind::Rcpnc.symbol_budget(code.n(), code.k());
    Ok(finish(c1, c2, c_r, s_r, received, recovered, budget))
}

pub fn conventional_exchange<R: Rng + ?Sized>(
    params: &ChannelParams,
    (c1, c2): (&BitBlock, &BitBlock),
    n: usize,
    rng: &mut R,
) -> Result<Exchange> {
    for c in [c1, c2] {
        if c.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: c.len(),
            });
        }
    }
    let c_r = uplink(c1, c2, params, rng)?;
    let received = downlink(&c_r, params, rng)?;
    let recovered = [received[0].xor(c1)?, received[1].xor(c2)?];
    Ok(finish(c1, c2, c_r, c_r, received, recovered, (n, n)))
}

pub fn run_scpnc<R: Rng + ?Sized>(
    code: &LinearBlockCode,
    params: &ChannelParams,
    pair: (&BitBlock, &BitBlock),
    rng: &mut R,
) -> Result<TrialOutcome> {
    scpnc_exchange(code, params, pair, rng).map(|e| e.outcome)
}

pub fn run_rcpnc<R: Rng + ?Sized>(
    code: &LinearBlockCode,
    params: &ChannelParams,
    pair: (&BitBlock, &BitBlock),
    rng: &mut R,
) -> Result<TrialOutcome> {
    rcpnc_exchange(code, params, pair, rng).map(|e| e.outcome)
}

pub fn run_conventional<R: Rng + ?Sized>(
    params: &ChannelParams,
    pair: (&BitBlock, &BitBlock),
    n: usize,
    rng: &mut R,
) -> Result<TrialOutcome> {
    conventional_exchange(params, pair, n, rng).map(|e| e.outcome)
}

/// Runs one exchange of `kind`. The conventional scheme ignores the code
/// apart from its block length.
pub fn run_trial<R: Rng + ?Sized>(
    kind: SchemeKind,
    code: &LinearBlockCode,
    params: &ChannelParams,
    pair: (&BitBlock, &BitBlock),
    rng: &mut R,
) -> Result<TrialOutcome> {
    match kind {
        SchemeKind::Scpnc => run_scpnc(code, params, pair, rng),
        SchemeKind::Rcpnc => run_rcpnc(code, params, pair, rng),
        SchemeKind::Conventional => run_conventional(params, pair, code.n(), rng),
    }
}
