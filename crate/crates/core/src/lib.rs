//! Spectral Barron spaces of operators over finite phase spaces.
//!
//! The phase space is `Λ = G × Ĝ` for a finite abelian group `G = Z_{n₁} × … × Z_{n_k}`,
//! represented on `H = C^N` (`N = Π nᵢ`) by clock-and-shift Weyl operators. On top of
//! that representation the crate provides:
//!
//! - the quantum Fourier transform of operators `F(T)(ξ) = tr(T U_ξ*)`, its inverse and
//!   twisted convolution ([`qft`]),
//! - weighted Barron and Sobolev norms, Schatten norms and the Peetre gate ([`spaces`]),
//! - diagonal transformers such as `(1+γ²)^s`, the Laplacian and resolvents ([`transformers`]),
//! - a Picard solver for `(I − Δ + V)S = T` with a dense direct oracle ([`solver`]),
//! - seeded instance generation and a property suite ([`oracles`]),
//! - JSON file formats shared with the command-line tool ([`io`]).
//!
//! The Haar measure on the dual phase space is counting measure scaled by `1/N`, so the
//! inversion formula, Plancherel and the convolution theorem hold without extra constants.

pub mod error;
pub mod io;
pub mod numeric;
pub mod oracles;
pub mod phase_space;
pub mod qft;
pub mod solver;
pub mod spaces;
pub mod transformers;
pub mod weyl;

pub use error::{Error, Result};
pub use phase_space::{symmetric_residue, Group, PhasePoint};
pub use qft::{iqft, qft_fast, qft_naive, twisted_convolution, PhaseFunction};
pub use spaces::{
    barron_norm, gamma_euclid, operator_norm, schatten_norm, sobolev_norm, NormReport,
    PeetreCheck, WeightFunction,
};
pub use transformers::{q_isometry_pair, resolvent_apply, DiagonalTransformer, TransformerKind};
pub use solver::{contraction_factor, solve_direct, solve_fixed_point, SolveConfig, SolveResult};
pub use weyl::WeylSystem;

/// Complex double-precision scalar.
pub type C64 = nalgebra::Complex<f64>;

/// A dense `N × N` operator on `H = C^N`.
pub type Operator = nalgebra::DMatrix<C64>;
