//! Robust private information retrieval from GRS-coded distributed storage.
//!
//! A database of `m` files is stored across `n` servers with a `[n, k]`
//! generalized Reed–Solomon code. A user retrieves one file while staying
//! private against any `t` colluding servers and still decoding correctly when
//! up to `b` servers answer adversarially and `r` do not answer at all.
//!
//! The crate is organised bottom-up:
//!
//! * [`field`]: prime fields, polynomials, interpolation.
//! * [`linalg`]: dense row reduction, ranks and solves over `GF(p)`.
//! * [`grs`]: GRS codes, duals, puncturing and star products.
//! * [`decoder`]: errors-and-erasures decoding plus a brute-force oracle.
//! * [`storage`]: database layout and server shares.
//! * [`pir`]: parameters, the query construction and file recovery.
//! * [`adversary`]: byzantine/silent/colluding simulation and privacy audits.
//! * [`analysis`]: exact rate formulas and comparison tables.
//! * [`transcript`]: the text format of a simulated session.
//! * [`cli`]: the `robust-pir` command line.
//!
//! Runnable walkthroughs live in `examples/`:
//!
//! ```text
//! cargo run --example params
//! cargo run --example encode_database
//! cargo run --example honest_retrieval
//! cargo run --example byzantine_retrieval
//! cargo run --example placement_sweep
//! cargo run --example symmetric_retrieval
//! cargo run --example privacy_audit
//! cargo run --example rate_comparison
//! cargo run --example decode_errors_erasures
//! cargo run --example star_products
//! ```

pub mod adversary;
pub mod analysis;
pub mod cli;
pub mod decoder;
pub mod error;
pub mod field;
pub mod grs;
pub mod linalg;
pub mod pir;
pub mod storage;
pub mod transcript;

pub use error::{Error, Result};
pub use field::{Fp, Poly, PrimeField};
pub use grs::{GenMatrix, GrsCode};
pub use pir::{compute_params, Scheme, SchemeParams};
