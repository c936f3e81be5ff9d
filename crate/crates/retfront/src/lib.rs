//! Bifurcations of wavefronts emitted by a hypersurface with a boundary,
//! corner, or r-corner.
//!
//! The crate has two halves. The exact half ([`jetalg`], [`equivalence`],
//! [`stability`], [`catalog`]) does truncated local-ring linear algebra over
//! arbitrary-precision rationals: finite determinacy of corner germs,
//! infinitesimal versality/stability of one-parameter unfoldings, and the
//! catalog of generic normal forms together with a germ recognizer. The
//! numeric half ([`wavefront`], [`propagation`]) extracts the bifurcating
//! fronts of a generating family as sampled geometry and simulates the
//! underlying propagation mechanism by characteristic flow of a homogeneous
//! Hamiltonian.

pub mod catalog;
pub mod equivalence;
pub mod jetalg;
pub mod propagation;
pub mod stability;
pub mod wavefront;

pub use jetalg::{JetPoly, Monomial, RingContext, SubspaceBasis, Var, VarClass};
