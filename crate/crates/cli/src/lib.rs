//! File formats, the on-disk cache and the verification driver behind the
//! `bisetkit` binary.

pub mod cache;
pub mod error;
pub mod format;
pub mod manifest;
pub mod verify;

pub use error::CliError;
