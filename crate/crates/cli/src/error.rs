use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Config,
    BlowUp,
    Io,
    Numerical,
}

/// Error reported by the CLI as a JSON object on stderr.
#[derive(Clone, Debug, Serialize)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
}

impl CliError {
    pub fn config(message: impl Into<String>, path: Option<String>) -> Self {
        Self {
            kind: ErrorKind::Config,
            message: message.into(),
            path,
            t: None,
        }
    }

    pub fn io(context: impl fmt::Display, err: std::io::Error) -> Self {
        Self {
            kind: ErrorKind::Io,
            message: format!("{context}: {err}"),
            path: None,
            t: None,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self.kind {
            ErrorKind::Config => 2,
            ErrorKind::BlowUp => 3,
            ErrorKind::Io => 4,
            ErrorKind::Numerical => 5,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self }).to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)?;
        if let Some(p) = &self.path {
            write!(f, " (at {p})")?;
        }
        Ok(())
    }
}

impl From<dyngal::Error> for CliError {
    fn from(e: dyngal::Error) -> Self {
        let (kind, t) = match e {
            dyngal::Error::Config(_) => (ErrorKind::Config, None),
            dyngal::Error::BlowUp { t } => (ErrorKind::BlowUp, Some(t)),
            dyngal::Error::Integrity(_) | dyngal::Error::Argument(_) => (ErrorKind::Numerical, None),
        };
        Self {
            kind,
            message: e.to_string(),
            path: None,
            t,
        }
    }
}
