use thiserror::Error;

use crate::solver::Trajectory;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid infection response: {0}")]
    InvalidResponse(String),

    #[error("invalid initial data: {0}")]
    InvalidInitialData(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    /// Non-finite values appeared; `partial` holds every frame recorded before the failure.
    #[error("blow-up at t = {t}: {detail}")]
    BlowUp {
        t: f64,
        detail: String,
        partial: Box<Trajectory>,
    },

    #[error("monitor `{monitor}` violated at t = {t}: {detail}")]
    MonitorViolation {
        monitor: &'static str,
        t: f64,
        detail: String,
    },

    #[error("bound certificate failed: {0}")]
    CertificateFailure(String),

    #[error("{}", fmt_config(.key, *.line, .message))]
    Config {
        key: String,
        line: Option<usize>,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn fmt_config(key: &str, line: Option<usize>, message: &str) -> String {
    match line {
        Some(l) => format!("config line {l}: `{key}`: {message}"),
        None => format!("config: `{key}`: {message}"),
    }
}
