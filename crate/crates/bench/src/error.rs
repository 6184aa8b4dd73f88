use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    /// A scenario, spec or summary file could not be read or parsed.
    #[error("load error: {0}")]
    Load(String),

    #[error(transparent)]
    Plan(#[from] bfmt::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl BenchError {
    /// 2 for load errors, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Load(_) => 2,
            _ => 1,
        }
    }
}
