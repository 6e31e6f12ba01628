use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iteration hit its cap without meeting the residual tolerance.
    #[error("no convergence: {0}")]
    Convergence(String),

    /// The classical solution no longer exists at the requested time.
    #[error("t = {t} is not before the blow-up time {t_blowup}")]
    PostBlowup { t: f64, t_blowup: f64 },

    /// The foot of the characteristic could not be bracketed inside the working interval.
    #[error("no characteristic foot for x = {x} inside [{lo}, {hi}]")]
    Bracket { x: f64, lo: f64, hi: f64 },

    /// Initial data whose characteristic speed never decreases.
    #[error("no blow-up: min slope of the characteristic speed is {min_slope} >= 0")]
    NoBlowup { min_slope: f64 },

    /// Blow-up exists but is not a generic cusp (or a required divisor vanishes).
    #[error("degenerate blow-up: {0}")]
    Degenerate(String),

    /// The sampled field does not vanish where the window taper acts.
    #[error("window too small: {0}")]
    Window(String),

    /// The spectral maximum sits on the edge of the resolved band.
    #[error("flat field: {0}")]
    FlatField(String),

    /// A least-squares fit has no unique solution.
    #[error("rank-deficient fit: {0}")]
    Rank(String),
}

pub type Result<T> = std::result::Result<T, Error>;
