use blowup::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Core(e) => match e {
                CoreError::Domain(_) => 2,
                CoreError::NoBlowup { .. } | CoreError::Degenerate(_) => 4,
                CoreError::Window(_) | CoreError::FlatField(_) => 5,
                _ => 3,
            },
        }
    }

    /// Extra advice printed under the message.
    pub fn hint(&self) -> Option<&'static str> {
        match self {
            CliError::Core(CoreError::Window(_)) | CliError::Core(CoreError::FlatField(_)) => {
                Some("try a larger window (--half-width) or more points (--points)")
            }
            CliError::Core(CoreError::NoBlowup { .. }) => {
                Some("the data never steepen; choose decreasing initial data")
            }
            CliError::Core(CoreError::Degenerate(_)) => {
                Some("the steepest characteristic is not a generic cubic blow-up point")
            }
            _ => None,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
