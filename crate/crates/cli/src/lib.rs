// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Command implementations behind the `pulseforge` binary.

pub mod commands;
pub mod demo;
pub mod iq;
pub mod output;

use std::fmt;

use pulseforge_core::ErrorKind;

/// Validation failure carrying human-readable diagnostics.
#[derive(Debug)]
pub struct Diagnostics(pub Vec<String>);

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} diagnostic(s) of severity error", self.0.len())?;
        for d in &self.0 {
            write!(f, "\n  error: {d}")?;
        }
        Ok(())
    }
}

impl std::error::Error for Diagnostics {}

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// Map an error chain to a process exit code. The innermost recognized
/// cause decides.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    let mut code = EXIT_VALIDATION;
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<pulseforge_core::Error>() {
            code = match e.kind() {
                ErrorKind::Numeric => EXIT_NUMERIC,
                ErrorKind::Validation => EXIT_VALIDATION,
            };
        } else if let Some(e) = cause.downcast_ref::<serde_json::Error>() {
            code = if e.is_io() { EXIT_IO } else { EXIT_VALIDATION };
        } else if let Some(e) = cause.downcast_ref::<csv::Error>() {
            code = if e.is_io_error() { EXIT_IO } else { EXIT_VALIDATION };
        } else if cause.downcast_ref::<std::io::Error>().is_some() {
            code = EXIT_IO;
        } else if cause.downcast_ref::<Diagnostics>().is_some() {
            code = EXIT_VALIDATION;
        }
    }
    code
}

#[cfg(test)]
mod tests {
    use super::*;
    use anyhow::Context;

    #[test]
    fn exit_codes_follow_the_innermost_cause() {
        let io: anyhow::Error = std::io::Error::new(std::io::ErrorKind::NotFound, "x").into();
        assert_eq!(exit_code(&io.context("reading")), EXIT_IO);
        let num = Err::<(), _>(pulseforge_core::Error::NoRoot("r".into())).context("stage").unwrap_err();
        assert_eq!(exit_code(&num), EXIT_NUMERIC);
        let val = Err::<(), _>(pulseforge_core::Error::InvalidData("d".into())).context("stage").unwrap_err();
        assert_eq!(exit_code(&val), EXIT_VALIDATION);
        let json = serde_json::from_str::<u32>("{").unwrap_err();
        assert_eq!(exit_code(&json.into()), EXIT_VALIDATION);
        assert_eq!(exit_code(&Diagnostics(vec!["bad".into()]).into()), EXIT_VALIDATION);
    }
}
