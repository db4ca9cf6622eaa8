//! Coded caching for partially cooperative device-to-device networks.
//!
//! `K` users each cache `M` files out of a server library of `N`; after
//! demands arrive the server is gone and only `K - S` of the users transmit,
//! while all `K` must decode their demanded file. This crate implements a
//! scheme for that setting end to end:
//!
//! * [`combinat`] — binomial coefficients, lexicographic subset
//!   ranking/unranking, and the global coded-subfile index map;
//! * [`gf`] / [`mds`] — GF(2^8)/GF(2^16) arithmetic and a systematic MDS
//!   erasure code with any-k-of-n reconstruction;
//! * [`scheme`] — placement, independent per-user XOR delivery, coordinated
//!   (reduced) delivery, and per-user decoding on real payloads;
//! * [`tradeoff`] — exact-rational memory-load corner points, memory-sharing
//!   envelopes, the cut-set lower bound, and the high-memory optimality
//!   regime;
//! * [`library`] / [`rational`] — deterministic fixture generation and
//!   rational formatting shared with the CLI harness.
//!
//! Placement needs only the *number* of selfish users; delivery needs no
//! coordination at all in the default mode (each transmitter reads just its
//! own cache and the demand vector). Decoding requires knowing which users
//! transmitted.
//!
//! The `parallel` feature (default) runs per-file and per-user loops on
//! rayon; without it the same code runs sequentially.

pub mod combinat;
pub mod gf;
pub mod library;
pub mod mds;
mod par;
pub mod rational;
pub mod scheme;
pub mod tradeoff;

pub use gf::{Field, FieldOrder, Symbol};
pub use mds::MdsCode;
pub use scheme::{DeliveryMode, RoundOutcome, SchemeError, SchemeParams};
pub use tradeoff::{AchievableCurve, CutSetBound, TradeoffPoint};
