//! Exact-arithmetic stability tests for linearised group actions on spaces
//! of weighted-homogeneous hypersurfaces, with a numerical moment-map
//! cross-check.
//!
//! The crate decides stability and semistability in three settings:
//!
//! * diagonal torus actions on projective space, via the convex-hull
//!   position of the support weights ([`torus`]);
//! * the non-reductive groups `U ⋊ ℂ*` and `U ⋊ GL(2)` acting on weighted
//!   degree-`d` forms in `x, y, z` with `deg z = 2`, where `U = (ℂ⁺)³` acts
//!   by `z ↦ z + αx² + βxy + γy²` ([`nonreductive`]);
//! * small-scale construction of the enveloping spaces `W_m` attached to a
//!   commuting nilpotent representation, together with `sl₂`-completions of
//!   nilpotent matrices ([`envelope`]).
//!
//! All verdicts are computed over ℚ with arbitrary-precision rationals; the
//! only floating-point component is the Kempf–Ness gradient flow in
//! [`moment`], which serves as an independent numerical cross-check of the
//! exact torus verdicts.

pub mod binary;
pub mod convex;
pub mod envelope;
pub mod error;
pub mod groebner;
pub mod linalg;
pub mod moment;
pub mod multipoly;
pub mod nonreductive;
pub mod rational;
pub mod sampling;
pub mod torus;
pub mod verdict;
pub mod weighted;

pub use error::CoreError;
pub use rational::Rat;
