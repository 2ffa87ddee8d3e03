//! Error-to-exit-code mapping: 2 for input and validation problems, 3 for
//! exceeded resource caps.

use succinct_core::circuit::CircuitError;
use succinct_core::ltl::LtlError;
use succinct_core::plan::PlanError;
use succinct_core::proplogic::FormulaError;
use succinct_core::qbf::QbfError;
use succinct_core::seq::SeqError;

pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }

    pub fn cap(message: impl Into<String>) -> Self {
        CliError { code: 3, message: message.into() }
    }
}

impl From<CircuitError> for CliError {
    fn from(e: CircuitError) -> Self {
        match e {
            CircuitError::EnumerationCap(_) => CliError::cap(e.to_string()),
            _ => CliError::input(e.to_string()),
        }
    }
}

impl From<FormulaError> for CliError {
    fn from(e: FormulaError) -> Self {
        match e {
            FormulaError::CapExceeded { .. } => CliError::cap(e.to_string()),
            _ => CliError::input(e.to_string()),
        }
    }
}

impl From<QbfError> for CliError {
    fn from(e: QbfError) -> Self {
        match e {
            QbfError::CapExceeded { .. } => CliError::cap(e.to_string()),
            QbfError::Circuit(inner) => inner.into(),
            QbfError::Formula(inner) => inner.into(),
            _ => CliError::input(e.to_string()),
        }
    }
}

impl From<SeqError> for CliError {
    fn from(e: SeqError) -> Self {
        match e {
            SeqError::ExpansionCap { .. } | SeqError::CapExceeded { .. } => {
                CliError::cap(e.to_string())
            }
            SeqError::Circuit(inner) => inner.into(),
            _ => CliError::input(e.to_string()),
        }
    }
}

impl From<PlanError> for CliError {
    fn from(e: PlanError) -> Self {
        match e {
            PlanError::CapExceeded { .. } | PlanError::TooWideForTracking(_) => {
                CliError::cap(e.to_string())
            }
            PlanError::Circuit(inner) => inner.into(),
            PlanError::Seq(inner) => inner.into(),
            _ => CliError::input(e.to_string()),
        }
    }
}

impl From<LtlError> for CliError {
    fn from(e: LtlError) -> Self {
        match e {
            LtlError::CapExceeded { .. } => CliError::cap(e.to_string()),
            LtlError::Circuit(inner) => inner.into(),
            LtlError::Seq(inner) => inner.into(),
            _ => CliError::input(e.to_string()),
        }
    }
}
