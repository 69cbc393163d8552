use std::fmt;
use std::process::ExitCode;

/// Everything that stops a run, mapped onto the exit-code contract.
#[derive(Debug)]
pub enum Failure {
    /// A checked property did not hold (exit 1).
    Property(String),
    /// Bad flags, config, input file or output path (exit 2).
    Config(String),
    /// A numerical routine broke down (exit 3).
    Numerical {
        module: &'static str,
        op: &'static str,
        source: nodal_atlas::Error,
    },
}

impl Failure {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            Failure::Property(_) => 1,
            Failure::Config(_) => 2,
            Failure::Numerical { .. } => 3,
        })
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Property(msg) => write!(f, "property failed: {msg}"),
            Failure::Config(msg) => write!(f, "configuration error: {msg}"),
            Failure::Numerical { module, op, source } => {
                write!(f, "numerical breakdown in {module}::{op}: {source}")
            }
        }
    }
}

pub trait Numerical<T> {
    /// Tags a core error with where it happened. Invalid-input errors are
    /// configuration problems, everything else is a numerical breakdown.
    fn during(self, module: &'static str, op: &'static str) -> Result<T, Failure>;
}

impl<T> Numerical<T> for nodal_atlas::Result<T> {
    fn during(self, module: &'static str, op: &'static str) -> Result<T, Failure> {
        self.map_err(|source| match source {
            nodal_atlas::Error::InvalidInput(msg) => Failure::Config(format!("{module}::{op}: {msg}")),
            source => Failure::Numerical { module, op, source },
        })
    }
}
