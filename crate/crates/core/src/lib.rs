//! Exact construction and certification of quasi K-matrices for quantum
//! symmetric pair coideal subalgebras.
//!
//! Everything is computed symbolically over the rational function field
//! `Q(q)`: no floating point, no Groebner black boxes, no truncation other
//! than the explicit weight-height cutoff that makes the ambient completion
//! finite.  The pipeline is
//!
//! 1. [`root`] — symmetrizable generalized Cartan matrices, the bilinear
//!    form on the root lattice, and finite-type subdiagram data (positive
//!    roots, longest-element words, copairings).
//! 2. [`uplus`] — the positive part of the quantized enveloping algebra as
//!    a quotient of the free algebra on the `E_i` by the joint kernel of
//!    the skew derivations, with memoized per-weight linear bases.
//! 3. [`ufull`] — triangular-form elements `F K E` of the full quantized
//!    enveloping algebra, straightening, the bar involution, and Lusztig's
//!    braid-group automorphisms.
//! 4. [`satake`] — generalized Satake diagrams `(X, tau)`, the involution
//!    `Theta`, coideal generators `B_i`, and the admissibility algebra for
//!    the parameter family `c`.
//! 5. [`quasik`] — the degree-by-degree construction of the quasi K-matrix
//!    itself, plus the verification suite (intertwining identity,
//!    centralizer property, bar-involution certificate, inverse).
//!
//! The [`scalar`] module supplies the arithmetic and [`report`] the
//! serializable job reports consumed by the command-line front end.

pub mod linalg;
pub mod quasik;
pub mod report;
pub mod root;
pub mod satake;
pub mod scalar;
pub mod ufull;
pub mod uplus;

pub use quasik::{BarStatus, CheckRecord, QuasiK, QuasiKError, QuasiKOptions};
pub use root::{RootDatum, Weight};
pub use satake::{ParameterFamily, SatakeDiagram};
pub use scalar::RatFuncQ;
pub use ufull::UElt;
pub use uplus::{FreeWord, UPlusElt, WeightBases};
