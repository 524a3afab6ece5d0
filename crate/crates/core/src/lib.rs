//! Rule-based repair of typed graphs against nested graph constraints.

pub mod acsynth;
pub mod condition;
pub mod consistency;
pub mod error;
pub mod graph;
pub mod rewrite;
pub mod conflicts;
pub mod fixtures;
pub mod fuzz;
pub mod io;
pub mod repair;
