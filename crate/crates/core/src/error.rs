use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{what} = {value} exceeds the limit of {limit}")]
    Capacity {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    #[error("singular: {0}")]
    Singular(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn check_capacity(what: &'static str, value: usize, limit: usize) -> Result<()> {
    if value > limit {
        Err(Error::Capacity { what, value, limit })
    } else {
        Ok(())
    }
}

pub(crate) fn check_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be finite, got {x}")))
    }
}
