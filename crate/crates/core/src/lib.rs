//! Non-semisimple spin quantum invariants of closed 3-manifolds computed from
//! surgery presentations, using the unrolled quantum group at `q = e^{iπ/r}`.

pub mod anchors;
pub mod corpus;
pub mod diagram;
pub mod error;
pub mod io;
pub mod repcat;
pub mod scalar;
pub mod snf;
pub mod spin;
pub mod surgery;

pub use error::{Error, Result};
pub use scalar::{c64, Mod2C, ScalarContext, Sign, C64};
