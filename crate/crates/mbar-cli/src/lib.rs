//! Support library for the `mbar` binary: the plain-text class cache and the
//! report rendering shared by every subcommand.

pub mod cache;
pub mod report;
