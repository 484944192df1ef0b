//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Caller violated a precondition (mismatched lengths, bad arity, ...).
    #[error("argument error: {0}")]
    Argument(String),

    /// The requested computation cannot be resolved at the available
    /// precision. `needed_digits` names the decimal working precision that
    /// would have been required.
    #[error("insufficient precision: need roughly {needed_digits} decimal digits{context}")]
    Precision { needed_digits: u64, context: String },

    /// A size budget (term count, order cap) was exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// Two series on incompatible radial grids were combined.
    #[error("radial grid mismatch: {0}")]
    GridMismatch(String),

    /// An operation required a d_F-closed form and got one that is not.
    #[error("form is not closed: d_F residual {residual:e}")]
    NotClosed { residual: f64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

impl Error {
    pub fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub fn precision(needed_digits: u64, context: impl Into<String>) -> Self {
        let context = {
            let c: String = context.into();
            if c.is_empty() {
                c
            } else {
                format!(" ({c})")
            }
        };
        Error::Precision {
            needed_digits,
            context,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
