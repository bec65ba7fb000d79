//! Link-level simulation of correlated two-way relaying with physical-layer
//! network coding and syndrome-based (Slepian-Wolf) compression.
//!
//! Three schemes are modelled: compression at both sources (SCPNC),
//! compression at the relay (RCPNC), and uncompressed two-slot PNC. The
//! crate provides the coding and channel primitives, single-exchange
//! pipelines, closed-form BLER expressions, and a reproducible Monte Carlo
//! sweep runner.

pub mod analytics;
pub mod block_code;
pub mod error;
pub mod gf2;
pub mod phy;
pub mod schemes;
pub mod simkit;
pub mod sources;

pub use block_code::{make_bch, LinearBlockCode};
pub use error::{Error, Result};
pub use gf2::{BitBlock, BitMatrix};
pub use phy::{ChannelParams, SymbolBlock};
pub use schemes::{SchemeKind, TrialOutcome};
pub use sources::CorrelationModel;
