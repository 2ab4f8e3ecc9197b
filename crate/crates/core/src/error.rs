use crate::lattice::Vertex;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid vertex ({0}, {1}): {2}")]
    InvalidVertex(i64, i64, String),
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("vertex {0} lies outside the window of radius {1}")]
    OutsideWindow(Vertex, u32),
    #[error("budget exceeded on turn {turn}: budget {budget}, requested {requested}")]
    BudgetExceeded { turn: u32, budget: u32, requested: u32 },
    #[error("vertex {0} is already burning")]
    AlreadyBurning(Vertex),
    #[error("vertex {0} is already protected")]
    AlreadyProtected(Vertex),
    #[error("the fire is already contained")]
    Contained,
    #[error("unknown strategy '{0}'")]
    UnknownStrategy(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("instance too large: {size} exceeds the cap of {cap}")]
    TooLarge { size: u64, cap: u64 },
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable code, shared by the HTTP service and the C ABI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidVertex(..) => "InvalidVertex",
            Error::InvalidLattice(_) => "InvalidLattice",
            Error::OutsideWindow(..) => "WindowExceeded",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::AlreadyBurning(_) => "ProtectBurning",
            Error::AlreadyProtected(_) => "AlreadyProtected",
            Error::Contained => "Contained",
            Error::UnknownStrategy(_) => "UnknownStrategy",
            Error::InvalidParams(_) => "InvalidParams",
            Error::Precondition(_) => "PreconditionViolation",
            Error::TooLarge { .. } => "TooLarge",
            Error::Numeric(_) => "Numeric",
            Error::Io(_) => "Io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InvalidParams(e.to_string())
    }
}
