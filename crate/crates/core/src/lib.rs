//! Graph-cover pseudocodewords of linear codes over F2 and F3.
//!
//! The crate provides
//!
//! * exact F2/F3 arithmetic and parity-check matrices ([`field`]),
//! * Tanner graphs, their degree-`M` covers, and the pseudocodeword matrices
//!   of labeled covers ([`tanner`]),
//! * the explicit inequality systems of the binary and ternary fundamental
//!   cones, with exact membership tests and criticality analysis ([`cone`]),
//! * a constructive lift that builds a cover realizing any integer cone point
//!   satisfying the modular syndrome condition ([`lift`]),
//! * brute-force oracles over all covers of small codes ([`oracle`]).
//!
//! ```
//! use pcw_core::{fixtures, cone, tanner};
//!
//! let h = fixtures::paper_4_2();
//! let cover = fixtures::paper_cover_16();
//! assert!(tanner::verify_pseudocodeword(&cover));
//! let f = tanner::pseudocodeword_matrix(&cover);
//! assert!(cone::member_k3(&h, &f).unwrap().is_member());
//! ```

pub mod cone;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod io;
pub mod lift;
mod matching;
pub mod oracle;
pub mod tanner;

pub use cone::{ConeInequality, ConeSystem, CriticalReport, InequalityKind, Membership, Verdict};
pub use error::{Error, Result};
pub use field::{Field, FieldElement, FieldMatrix, RationalMatrix};
pub use lift::{LiftResult, PairSelection, SetDecomposition, TraceStep};
pub use tanner::{CoverGraph, CoverLabeling, PseudoMatrix, TannerGraph};
