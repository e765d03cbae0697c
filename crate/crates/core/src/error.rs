use thiserror::Error;

/// Validation failures for spaces and maps. All checks are exact.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MeasureError {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("point `{label}` has negative weight {weight}")]
    NegativeWeight { label: String, weight: String },
    #[error("point `{label}` has an unreadable weight: {reason}")]
    BadWeight { label: String, reason: String },
    #[error("{labels} labels but {weights} weights")]
    LengthMismatch { labels: usize, weights: usize },
    #[error("domain point `{0}` is not assigned a target")]
    UnmappedPoint(String),
    #[error("`{0}` is not a point of the domain")]
    UnknownSource(String),
    #[error("domain point `{source_label}` is assigned twice (`{first}` and `{second}`)")]
    ConflictingAssignment {
        source_label: String,
        first: String,
        second: String,
    },
    #[error("domain point `{source_label}` maps to `{target}`, which is not in the codomain")]
    TargetNotInCodomain {
        source_label: String,
        target: String,
    },
    #[error("pushforward mismatch at codomain point `{label}`: codomain weight {stated}, pushforward {pushed}")]
    PushforwardMismatch {
        label: String,
        stated: String,
        pushed: String,
    },
    #[error("total mass is zero")]
    ZeroTotalMass,
}

/// Failures of the structural combinators.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CombinatorError {
    #[error("maps are not composable: codomain and domain differ at `{0}`")]
    NotComposable(String),
    #[error("{coefficients} coefficients for {items} items")]
    CoefficientMismatch { coefficients: usize, items: usize },
    #[error("coefficients are not convex: {0}")]
    NotConvex(String),
    #[error("space is not a probability space (total mass {0})")]
    NotProbability(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EntropyError {
    #[error("entropy order must be a positive finite number, got {0}")]
    InvalidOrder(String),
    #[error("space is not a probability space (total mass {0})")]
    NotProbability(String),
    #[error("common denominator {0} exceeds the reconstruction bound")]
    OversizedDenominator(String),
    #[error("phi is defined for n >= 1")]
    ZeroPoints,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LossError {
    #[error("loss constant must be finite and nonnegative, got {0}")]
    NegativeConstant(f64),
    #[error("entropy difference {0} is negative beyond rounding; internal inconsistency")]
    NegativeLoss(f64),
    #[error("the conditional form is only defined for order 1")]
    OrderNotOne,
    #[error(transparent)]
    Combinator(#[from] CombinatorError),
}
