//! Shipped task systems.

pub mod bakery;
pub mod relay;

pub use bakery::{BakeImplTState, BakeSpecTState, BakeryImpl, BakerySpec, BakeryVariant, SpecLoc};
pub use relay::{Relay, RelayLoc};
