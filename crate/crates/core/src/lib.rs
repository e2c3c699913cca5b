//! Exact computer algebra for the necklace Lie bialgebra of symplectic
//! derivations, its Chevalley–Eilenberg complexes, Drinfel'd deformations and
//! symplectic expansions.

pub mod cobracket;
pub mod complex;
pub mod deformation;
pub mod derivation;
pub mod error;
pub mod expansion;
pub mod homology;
pub mod json;
pub mod linalg;
pub mod lincomb;
pub mod matrix;
pub mod necklace;
pub mod scalar;
pub mod series;
pub mod tensor;
pub mod verify;
pub mod wedge;
pub mod word;

pub use error::{Error, Result};
pub use lincomb::LinComb;
pub use matrix::{Basis, SparseRationalMatrix};
pub use necklace::{DerivationElem, Necklace};
pub use scalar::Scalar;
pub use series::TruncatedSeries;
pub use tensor::{PairTensor, Tensor};
pub use word::{Genus, Letter, LetterKind, Word};
