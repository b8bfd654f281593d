//! Certified lower bounds for weighted time averages of the Dirac field
//! energy density, instantiated on a flat spatial 3-torus mode sum.
//!
//! The crate is organized in layers:
//!
//! * [`spinor`] — gamma matrices, frame vectors, and the plane-wave mode
//!   basis (the "classical field" layer).
//! * [`weights`] — weight functions f = g² with compact support, their
//!   Fourier transforms under the +i sign convention, convolution, and the
//!   product-to-convolution kernel identity.
//! * [`worldline`] — vacuum two-point kernels pulled back to an inertial
//!   worldline, the dominating spectral functions Y and the scaling
//!   function σ.
//! * [`states`] — quasifree state labels Q, explicit Fock vectors, their
//!   normal-ordered two-point blocks, energy density and time averages.
//! * [`bounds`] — the frequency-domain kernel J, the cutoff machinery,
//!   the certified constants C_Λ, C', C''_Λ, quadrant and remainder
//!   bounds, and the assembled total lower bound B.
//! * [`config`] / [`run`] — batch-driver configuration and reporting used
//!   by the `qwei` binary.
//!
//! Everything downstream of the mode basis is a finite computation; all
//! reported scalars are produced by fixed-order reductions so repeated
//! runs are bit-identical.

pub mod bounds;
pub mod config;
pub mod error;
pub mod grid;
pub mod linalg;
pub mod run;
pub mod spinor;
pub mod states;
pub mod weights;
pub mod worldline;

pub use error::{Error, Result, Warning};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;

/// Dense complex vector.
pub type CVector = nalgebra::DVector<C64>;
