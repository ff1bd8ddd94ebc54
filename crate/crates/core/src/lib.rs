//! Single-step obligations for fair stuttering refinement of task-based
//! transition systems, checked by explicit-state exploration of small
//! instances, plus run simulation and progress measures.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod explore;
pub mod measures;
pub mod model;
pub mod obligations;
pub mod ordinal;
pub mod report;
pub mod run;
pub mod systems;

pub use model::{Key, KeySet, Refines, Selector, SystemState, TaskSystem, Validity};
pub use ordinal::Ordinal;
pub use report::{CheckReport, Completeness, Counterexample, Status, Suite, Theorem, Verdict};
