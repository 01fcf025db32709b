use std::fmt;
use std::process::ExitCode;

/// Failure classes, each with its own process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Usage,
    Data,
    Numerical,
}

impl Kind {
    pub fn exit_code(self) -> ExitCode {
        ExitCode::from(match self {
            Kind::Usage => 1,
            Kind::Data => 2,
            Kind::Numerical => 3,
        })
    }
}

#[derive(Debug)]
pub struct CliError {
    pub kind: Kind,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            kind: Kind::Usage,
            message: message.into(),
        }
    }

    pub fn data(message: impl Into<String>) -> Self {
        Self {
            kind: Kind::Data,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<dyncorr::Error> for CliError {
    fn from(e: dyncorr::Error) -> Self {
        let kind = match e {
            dyncorr::Error::InvalidInput(_) => Kind::Data,
            dyncorr::Error::Numerical(_) => Kind::Numerical,
        };
        Self {
            kind,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::data(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::data(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::data(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Attach the offending path to an I/O-ish failure.
pub fn at_path<T, E: Into<CliError>>(r: Result<T, E>, path: &std::path::Path) -> CliResult<T> {
    r.map_err(|e| {
        let mut e = e.into();
        e.message = format!("{}: {}", path.display(), e.message);
        e
    })
}
