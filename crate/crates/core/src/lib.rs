//! Exact quantum transport matrices of planar directed networks and
//! checkers for their RTT, loop-algebra and reflection-equation relations.

pub mod error;
pub mod qalg;
pub mod rmat;
pub mod ncmat;
pub mod network;
pub mod affine;
pub mod verify;

pub use error::{Error, Result};
