//! Commuting k-tuples in reduced Heisenberg and reduced unitriangular groups
//! over ℝ and ℂ.
//!
//! The crate classifies such tuples by their antisymmetric component label,
//! constructs canonical representatives for every realizable label, connects
//! same-label tuples by explicit sampled homotopies, and analyzes the rank
//! strata and rationality of the resulting moduli data. Identities hold
//! exactly over the exact scalar tower; floats appear only on paths and in
//! polar factors.
//!
//! ```
//! use nilcomm::components::canonical_representative;
//! use nilcomm::invariant::{component_label, is_realizable, phi};
//! use nilcomm::lie::{Convention, GroupTuple, HeisenbergElement, Lattice};
//! use nilcomm::Rat;
//!
//! // a pair of canonical generators: the bracket lands in the unit lattice
//! let tuple = GroupTuple::from_heisenberg(
//!     vec![
//!         HeisenbergElement::<Rat>::from_ints(&[1], &[0], 0),
//!         HeisenbergElement::<Rat>::from_ints(&[0], &[1], 0),
//!     ],
//!     Lattice::unit(),
//! )?;
//! let label = component_label(&tuple)?;
//! assert_eq!(label.rank(), 2);
//! assert!(is_realizable(&label, 1));
//!
//! // a canonical point of that component, with the label recovered exactly
//! let map = canonical_representative::<Rat>(&label, 1, Convention::OmegaN)?;
//! assert_eq!(phi(&map), label.to_skew_matrix()?);
//! # Ok::<(), nilcomm::Error>(())
//! ```

// indexed loops are the house style for the small dense kernels here
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod matrix;
pub mod scalar;

pub mod components;
pub mod frames;
pub mod invariant;
pub mod lie;
pub mod numeric;
pub mod strata;

pub use error::{Error, Result};
pub use matrix::Mat;
pub use scalar::{Complex64, ExactScalar, FloatScalar, GaussRational, QuadRational, Rat, Scalar};
