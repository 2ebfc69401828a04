//! File formats, the solve/round pipeline and experiment grids behind the
//! `ugdecomp` command line.

pub mod error;
pub mod experiment;
pub mod format;
pub mod pipeline;
