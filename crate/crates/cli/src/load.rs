//! Reading inputs from files or built-in fixture names.

use std::fs;
use std::path::Path;

use pcw_core::field::{FieldMatrix, RationalMatrix};
use pcw_core::{fixtures, io, CoverLabeling};

use crate::CliError;

fn read(input: &str) -> Result<String, CliError> {
    if let Some(src) = fixtures::source(input) {
        return Ok(src.to_string());
    }
    if !Path::new(input).exists() {
        return Err(CliError::Input(format!(
            "{input}: no such file or fixture (fixtures: {})",
            fixtures::NAMES.join(", ")
        )));
    }
    fs::read_to_string(input).map_err(|e| CliError::Input(format!("{input}: {e}")))
}

fn context(input: &str) -> impl Fn(pcw_core::Error) -> CliError + '_ {
    move |e| CliError::from(e).within(input)
}

pub fn matrix(input: &str) -> Result<FieldMatrix, CliError> {
    io::parse_matrix(&read(input)?).map_err(context(input))
}

pub fn pseudomatrix(input: &str) -> Result<RationalMatrix, CliError> {
    io::parse_pseudomatrix(&read(input)?).map_err(context(input))
}

pub fn cover(input: &str) -> Result<CoverLabeling, CliError> {
    io::parse_cover(&read(input)?).map_err(context(input))
}

pub fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}
