use gkm_core::equivariant::ClassError;
use gkm_core::gkm::GraphError;
use gkm_core::kirwan::KirwanError;
use gkm_core::symcore::ArithError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed file: {0}")]
    Format(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error(transparent)]
    Kirwan(#[from] KirwanError),
    #[error("{failed} of {total} checks failed")]
    Verify { failed: usize, total: usize },
}

impl From<ArithError> for CliError {
    fn from(e: ArithError) -> Self {
        CliError::Class(e.into())
    }
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "Io",
            CliError::Format(_) => "Format",
            CliError::Usage(_) => "Usage",
            CliError::Graph(e) => match e {
                GraphError::InvalidInput(_) => "InvalidInput",
                GraphError::UnknownVertex(_) => "UnknownVertex",
                GraphError::NotAPolytopeSkeleton(_) => "NotAPolytopeSkeleton",
                GraphError::NotDelzant { .. } => "NotDelzant",
                GraphError::SuppliedXiNotGeneric => "SuppliedXiNotGeneric",
            },
            CliError::Class(e) | CliError::Kirwan(KirwanError::Class(e)) => class_kind(e),
            CliError::Kirwan(e) => match e {
                KirwanError::InvalidCircle(_) => "InvalidCircle",
                KirwanError::NonUniqueMaximum => "NonUniqueMaximum",
                KirwanError::NotFreeAction { .. } => "NotFreeAction",
                KirwanError::UnknownReducedPoint(_) => "UnknownReducedPoint",
                KirwanError::Class(_) => unreachable!(),
            },
            CliError::Verify { .. } => "VerificationFailure",
        }
    }

    /// 2 for bad input, 3 when a computation broke its own contract, 4 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 4,
            CliError::Class(e) | CliError::Kirwan(KirwanError::Class(e)) => match e {
                ClassError::Arith(_)
                | ClassError::NonPolynomialIndex { .. }
                | ClassError::DivisionFailure { .. }
                | ClassError::VerificationFailure(_)
                | ClassError::NonConstantQuotient { .. }
                | ClassError::IntegralityFailure { .. } => 3,
                _ => 2,
            },
            CliError::Verify { .. } => 3,
            _ => 2,
        }
    }
}

fn class_kind(e: &ClassError) -> &'static str {
    match e {
        ClassError::Arith(ArithError::RankMismatch { .. }) => "RankMismatch",
        ClassError::Arith(ArithError::ZeroWeight) => "ZeroWeight",
        ClassError::Arith(ArithError::NotDivisible) => "NotDivisible",
        ClassError::Arith(ArithError::NotUnimodular) => "NotUnimodular",
        ClassError::ShapeMismatch(_) => "ShapeMismatch",
        ClassError::NotGkm { .. } => "NotGkm",
        ClassError::NonPolynomialIndex { .. } => "NonPolynomialIndex",
        ClassError::DivisionFailure { .. } => "DivisionFailure",
        ClassError::VerificationFailure(_) => "VerificationFailure",
        ClassError::NotIndexIncreasing { .. } => "NotIndexIncreasing",
        ClassError::NotECanEdge { .. } => "NotECanEdge",
        ClassError::NonConstantQuotient { .. } => "NonConstantQuotient",
        ClassError::IntegralityFailure { .. } => "IntegralityFailure",
    }
}
