//! Quantum threshold secret sharing over polynomial codes.
//!
//! A secret of dimension `s` is encoded into `2k-1` registers of dimension
//! `q` (the smallest prime with `q >= s` and `q >= 2k-1`). Any `k` shares
//! recover the secret; fewer reveal nothing.

pub mod error;
pub mod gfq;
pub mod hilbert;
pub mod polycode;
pub mod scheme;
pub mod verify;

pub use error::{Error, Result};
pub use gfq::{choose_prime, FieldMatrix, Prime};
pub use hilbert::{fidelity, trace_distance, DensityMatrix, PureState, RegisterSystem, SubsetOperator};
pub use num_complex::Complex64;
pub use polycode::{decode_subset, encode, CodeParams, SubsetDecoder};
pub use scheme::{
    build_threshold, reconstruct, split, AccessStructure, Reconstruction, Recovered, SchemeSpec, Share, SharedState,
};
pub use verify::{full_report, Verdict, VerificationReport, VerifyOptions};
