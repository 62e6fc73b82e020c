//! Error classification onto the exit-code contract:
//! 0 success, 1 usage error, 2 data error, 3 numerical failure.

use std::fmt;

use semipartm_core::baselines::BaselineError;
use semipartm_core::corpus::CorpusError;
use semipartm_core::evaluate::EvalError;
use semipartm_core::io::IoError;
use semipartm_core::nmf::NmfError;
use semipartm_core::numerics::NumericsError;
use semipartm_core::simulate::SimulateError;
use semipartm_core::splinereg::SplineError;
use semipartm_core::study::StudyError;
use semipartm_core::tuning::TuningError;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Data(_) => "data",
            CliError::Numerical(_) => "numerical",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Numerical(m) => m,
        }
    }

    /// Single-line JSON error record for stderr.
    pub fn record(&self) -> String {
        format!(
            "{{\"error\":\"{}\",\"message\":{}}}",
            self.kind(),
            serde_json::to_string(self.message()).unwrap_or_else(|_| "\"\"".to_string())
        )
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind(), self.message())
    }
}

pub fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}

pub fn data(message: impl Into<String>) -> CliError {
    CliError::Data(message.into())
}

impl From<NumericsError> for CliError {
    fn from(e: NumericsError) -> Self {
        match e {
            NumericsError::ConvergenceFailure { .. } | NumericsError::SingularSystem { .. } => {
                CliError::Numerical(e.to_string())
            }
            NumericsError::InvalidRank { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<NmfError> for CliError {
    fn from(e: NmfError) -> Self {
        match e {
            NmfError::InvalidRank { .. } => CliError::Usage(e.to_string()),
            NmfError::NumericalFailure { .. } => CliError::Numerical(e.to_string()),
            NmfError::NonNegativityViolated { .. } => CliError::Data(e.to_string()),
            NmfError::Numerics(inner) => inner.into(),
        }
    }
}

impl From<SplineError> for CliError {
    fn from(e: SplineError) -> Self {
        match e {
            SplineError::InvalidKnots(_) => CliError::Usage(e.to_string()),
            SplineError::Numerics(inner) => inner.into(),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<TuningError> for CliError {
    fn from(e: TuningError) -> Self {
        match e {
            TuningError::GridEmpty | TuningError::InvalidFoldCount { .. } => {
                CliError::Usage(e.to_string())
            }
            TuningError::FoldTooSmall { .. } => CliError::Data(e.to_string()),
            TuningError::Nmf(inner) => inner.into(),
            TuningError::Spline(inner) => inner.into(),
            TuningError::Numerics(inner) => inner.into(),
        }
    }
}

impl From<BaselineError> for CliError {
    fn from(e: BaselineError) -> Self {
        match e {
            BaselineError::SingularValueZero { .. } => CliError::Numerical(e.to_string()),
            BaselineError::Numerics(inner) => inner.into(),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<SimulateError> for CliError {
    fn from(e: SimulateError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<StudyError> for CliError {
    fn from(e: StudyError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::UnknownMethod(_) => CliError::Usage(e.to_string()),
            EvalError::EmptyInput => CliError::Usage(e.to_string()),
            EvalError::Nmf(inner) => inner.into(),
            EvalError::Baseline(inner) => inner.into(),
            EvalError::Spline(inner) => inner.into(),
            EvalError::Tuning(inner) => inner.into(),
            EvalError::Numerics(inner) => inner.into(),
            _ => CliError::Data(e.to_string()),
        }
    }
}
