//! Sweep orchestration and file formats behind the `spinphase` binary.

pub mod sweep;
