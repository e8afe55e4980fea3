//! Parameterized solvers: deletion-set branching and the affected-voters
//! search.

pub mod cvd;
pub mod deletion;
pub mod fvs;
pub mod partial_dom;
