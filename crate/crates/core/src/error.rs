use alloc::string::String;
use core::fmt;

use crate::lp::LpError;
use crate::model::{Commodity, Mode};

pub type Result<T, E = ModelError> = core::result::Result<T, E>;

/// Errors raised by the optimization models.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelError {
    Lp(LpError),
    /// The commodity cannot travel by this mode.
    InvalidPairing(Commodity, Mode),
    /// A site LP produced no commodity at all.
    DegenerateSite(String),
    /// The site has no international route for the commodity.
    NoExportRoute(String),
    DemandExceedsSupply { demand: f64, supply: f64 },
    NoFeasibleOption(String),
    InstanceTooLarge(f64),
    /// A solver returned a status the model cannot interpret.
    Infeasible(String),
    MissingData(String),
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::Lp(e) => write!(f, "{e}"),
            ModelError::InvalidPairing(c, m) => write!(f, "{c} cannot be transported by {m}"),
            ModelError::DegenerateSite(s) => write!(f, "site {s} produces nothing"),
            ModelError::NoExportRoute(s) => write!(f, "site {s} has no export route"),
            ModelError::DemandExceedsSupply { demand, supply } => {
                write!(f, "demand {demand} MWh exceeds total supply {supply} MWh")
            }
            ModelError::NoFeasibleOption(s) => write!(f, "no available distribution mode for {s}"),
            ModelError::InstanceTooLarge(n) => write!(f, "enumeration space of {n} vectors is too large"),
            ModelError::Infeasible(s) => write!(f, "infeasible: {s}"),
            ModelError::MissingData(s) => write!(f, "missing data: {s}"),
        }
    }
}

impl core::error::Error for ModelError {}

impl From<LpError> for ModelError {
    fn from(e: LpError) -> Self {
        ModelError::Lp(e)
    }
}
