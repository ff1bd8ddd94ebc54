//! Command-line front end for the fairstep checker.

pub mod cli;
pub mod codec;
pub mod formats;
pub mod registry;
pub mod render;
