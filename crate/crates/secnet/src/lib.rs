//! Secure linear network coding under combined eavesdropping and sequential
//! error-injection attacks.
//!
//! The crate models an acyclic linear network whose edges can be wiretapped
//! (set `E_E`) and written to (set `E_A`) by an adversary who chooses each
//! injected symbol causally from everything she has observed so far. On top
//! of the channel model it provides:
//!
//! - exact finite-field and dense linear algebra kernels ([`field`],
//!   [`linalg`]),
//! - transfer-matrix derivation and channel parameters ([`net`]),
//! - the sequential attack simulator and strategy enumeration ([`attack`]),
//! - a randomized robust code with Vandermonde side information and a
//!   Gaussian-elimination decoder ([`robust`]),
//! - modified-Toeplitz universal hashing, privacy amplification, rate
//!   formulas and verification tags ([`hashing`]),
//! - exact information-leakage oracles, including the audit showing active
//!   strategies leak exactly as much as passive wiretapping ([`leakage`]),
//! - scenario builders (circle QKD networks, attacked-node rank validation,
//!   multicast parameter reduction) and the experiment runner
//!   ([`scenario`], [`experiment`]).
//!
//! The `secnet` binary exposes the same machinery as a CLI; see the README.

pub mod attack;
pub mod experiment;
pub mod field;
pub mod hashing;
pub mod leakage;
pub mod linalg;
pub mod net;
pub mod robust;
pub mod scenario;

pub use field::{ArithOp, FieldElement, FieldError, FieldSpec};
pub use linalg::{FqMatrix, LinalgError};
pub use net::{AdversaryPlacement, ChannelParams, LinearNetwork, NetError, TransferMatrices};
