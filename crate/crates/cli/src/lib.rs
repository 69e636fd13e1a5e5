//! Config loading, command implementations and the validation suite behind
//! the `qwell` binary.

pub mod commands;
pub mod config;
pub mod output;
pub mod validate;

use std::io;

use config::ConfigError;

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    /// A validation check or table tolerance failed.
    pub const CHECK_FAILED: u8 = 1;
    /// Bad config, flags or physical inputs.
    pub const CONFIG: u8 = 2;
    /// The numerics could not produce an answer.
    pub const NUMERICAL: u8 = 3;
}

/// Maps an error to the exit code it should produce.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<ConfigError>().is_some() || err.downcast_ref::<io::Error>().is_some() {
        return exit::CONFIG;
    }
    match err.downcast_ref::<qwell_core::Error>() {
        Some(e) if e.is_validation() => exit::CONFIG,
        _ => exit::NUMERICAL,
    }
}
