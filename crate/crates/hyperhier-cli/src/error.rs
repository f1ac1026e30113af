use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] hyperhier_core::Error),
    #[error("sampler exhausted after {attempts} attempts ({found} of {wanted} points)")]
    Exhausted {
        attempts: usize,
        found: usize,
        wanted: usize,
    },
    #[error("{0}")]
    Io(#[from] std::io::Error),
}
