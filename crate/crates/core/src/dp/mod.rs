//! Pseudo-polynomial dynamic programs and tree decompositions.

pub mod cluster;
pub mod decomposition;
pub mod path;
pub mod treewidth;
