use crate::C64;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at {token:?}: {reason}")]
    Parse { token: String, reason: String },

    #[error("closed form not available for word length {0} (supported: 2..=7)")]
    UnsupportedLength(usize),

    #[error("root finder did not converge after {sweeps} sweeps")]
    RootConvergence { sweeps: usize, best: Vec<C64> },

    #[error("QR iteration did not converge on an active block of size {block}; {} eigenvalues deflated", .deflated.len())]
    QrConvergence { block: usize, deflated: Vec<C64> },

    #[error("transfer map is degenerate at z = {z}: R(z) = 0, fixed point at infinity")]
    DegenerateMap { z: C64 },

    #[error("gauge coefficient s[{index}] is zero")]
    SingularGauge { index: usize },

    #[error("size {size} exceeds the cap of {cap}")]
    SizeCap { size: usize, cap: usize },

    #[error("no stable fixed point among words of length <= {0}")]
    InsufficientMaxLength(usize),
}

impl Error {
    pub(crate) fn parse(token: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse { token: token.into(), reason: reason.into() }
    }
}
