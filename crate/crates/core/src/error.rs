use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown firm id {0:?}")]
    UnknownFirmId(String),
    #[error("duplicate firm id {0:?}")]
    DuplicateFirmId(String),
    #[error("negative liability {amount} on contract {from} -> {to}")]
    NegativeLiability {
        from: String,
        to: String,
        amount: String,
    },
    #[error("default cost {name} = {value} is outside [0, 1]")]
    DefaultCostOutOfRange { name: &'static str, value: String },
    #[error("firm {0:?} cannot owe itself")]
    SelfLoopDebt(String),
    #[error("CDS {from} -> {to} references {reference}, which is a party to the contract")]
    CdsDegenerateReference {
        from: String,
        to: String,
        reference: String,
    },
    #[error("recovery rate {value} for firm {firm} is outside [0, 1]")]
    RecoveryOutOfRange { firm: String, value: String },
    #[error("strategy space of {count} exceeds the cap of {cap}")]
    StrategySpaceTooLarge { count: u128, cap: u128 },
    #[error("inner fixed point did not settle within {0} regime changes")]
    NonFiniteRegime(usize),
    #[error("CDS recovery iteration did not converge within {0} rounds")]
    NonConvergent(usize),
    #[error("clearing did not converge for profile {0}")]
    NonConvergentProfile(String),
    #[error("enumeration of {count} items exceeds the cap of {cap}")]
    EnumerationCapExceeded { count: u128, cap: u128 },
    #[error("this check requires alpha = beta = 1")]
    PreconditionDefaultCosts,
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("parameter {name} = {value} is out of range: {expected}")]
    ParamOutOfRange {
        name: String,
        value: String,
        expected: String,
    },
    #[error("invalid strategy for firm {firm}: {reason}")]
    InvalidStrategy { firm: String, reason: String },
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
