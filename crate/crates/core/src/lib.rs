//! Torus bundles over the circle through their monodromy matrices: exact
//! integer algebra, `SL(2, Z)` conjugacy, and certified decomposability
//! for fiber dimension up to 3.

pub mod batch;
pub mod bundles;
pub mod classify;
pub mod error;
pub mod exactmat;
pub mod monodromy3;
pub mod oracle;
pub mod polyint;
pub mod report;
pub mod sl2z;
pub mod sweep;

pub use error::{Error, Result};
