use thiserror::Error;

use crate::nagata::{NagataCert, RelevanceReport};

/// Chart numbers carried by errors are 1-based.
pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("polynomials live in different variable tables ({left} vs {right})")]
    TableMismatch { left: String, right: String },

    #[error("element is not in the Nagata ring{}", chart.map(|c| format!(" of chart {c}")).unwrap_or_default())]
    NotInNagataRing {
        chart: Option<usize>,
        cert: Box<NagataCert>,
    },

    #[error("ideal is not relevant{}", chart.map(|c| format!(" in chart {c}")).unwrap_or_default())]
    NotRelevant {
        chart: Option<usize>,
        report: Box<RelevanceReport>,
    },

    #[error("ideal sheaf does not glue on charts ({0}, {1})")]
    GlueFailure(usize, usize),

    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("malformed input in field `{field}`: {message}")]
    Schema { field: String, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn schema(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            field: field.into(),
            message: message.into(),
        }
    }
}
