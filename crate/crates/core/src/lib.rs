//! Line-energy computations for unit-length divergence-free fields on the
//! disk-plus-kite domain: the viscosity solution, the kite competitor, the 1D
//! transition and its periodic tilings.
//!
//! Start with [`fields`] to build a field, [`costfn::JumpCost`] for the jump
//! cost and [`energy::line_energy`] to integrate it.

pub mod analysis;
pub mod cli;
pub mod costfn;
pub mod energy;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod plot;
pub mod raster;
pub mod vec2;

pub use costfn::JumpCost;
pub use error::{Error, Result};
pub use fields::PiecewiseField;
pub use vec2::Vec2;
