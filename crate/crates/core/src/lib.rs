//! Random Gabor synthesis matrices for compressive sensing.
//!
//! The crate builds the `n × n²` matrix whose columns are all cyclic
//! time-frequency shifts `π(k, ℓ) g = M^ℓ T^k g` of a window `g ∈ ℂⁿ`, applies
//! it (and its adjoint) in `O(n² log n)` through per-translate FFTs, and
//! provides the tooling around it:
//!
//! * [`tf`]: shift/modulation operators, windows and their generation.
//! * [`operator`]: the synthesis operator, the block matrices `A_q`,
//!   pairwise atom inner products and coherence.
//! * [`analysis`]: restricted isometry constants (exhaustive and Monte Carlo),
//!   the chaos matrices `B(x)`, metrics and a numerical identity checker.
//! * [`recovery`]: IHT, HTP, CoSaMP, OMP and ℓ₁ basis pursuit running on the
//!   fast operator.
//! * [`channel`]: delay-Doppler channel identification experiments.
//! * [`sweep`], [`table`], [`svg`], [`cli`]: experiment harness and the
//!   command-line front end.
//!
//! ```
//! use gabor_cs::{GaborOperator, Window, WindowKind};
//!
//! let window = Window::generate(WindowKind::Alltop, 7, 0).unwrap();
//! let op = GaborOperator::new(window);
//! assert!((op.coherence() - 1.0 / 7f64.sqrt()).abs() < 1e-10);
//! ```

pub mod analysis;
pub mod channel;
pub mod cli;
pub mod error;
pub mod fft;
pub mod operator;
pub mod recovery;
pub mod rng;
pub mod svg;
pub mod sweep;
pub mod table;
pub mod tf;

pub use num_complex::Complex64;

pub use error::{Error, Result};
pub use operator::{GaborOperator, SparseVector};
pub use tf::{Dim, TfIndex, Window, WindowKind};
