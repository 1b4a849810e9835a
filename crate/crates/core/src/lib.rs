//! Instantaneous quantum polynomial-time (IQP) programs over GF(2): exact
//! simulation, quadratic-residue code challenges, a sample-based
//! verification protocol, the classical linear-system attack on it, and
//! translations between equivalent circuit architectures.
//!
//! ```
//! use iqp_core::gf2::BitMatrix;
//! use iqp_core::simulator::distribution_fourier;
//! use iqp_core::xprogram::{Action, ConstantActionProgram};
//!
//! let p = BitMatrix::from_strs(&["110", "011"]);
//! let prog = ConstantActionProgram::new(p, Action::PI_OVER_8).to_xprogram();
//! let dist = distribution_fourier(&prog).unwrap();
//! assert!((dist.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
//! ```

pub mod cheat;
pub mod codes;
pub mod error;
pub mod format;
pub mod gf2;
pub mod protocol;
pub mod reductions;
pub mod simulator;
pub mod wht;
pub mod xprogram;

pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector};
pub use xprogram::{Action, ConstantActionProgram, Element, XProgram};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/x-programs.md")]
    mod x_programs {}
    #[doc = include_str!("../../../book/src/codes-and-bias.md")]
    mod codes_and_bias {}
    #[doc = include_str!("../../../book/src/protocol.md")]
    mod protocol {}
    #[doc = include_str!("../../../book/src/classical-cheating.md")]
    mod classical_cheating {}
    #[doc = include_str!("../../../book/src/architectures.md")]
    mod architectures {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
