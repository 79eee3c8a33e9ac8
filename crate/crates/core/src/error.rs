use crate::scalar::Indeterminate;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Indeterminate(#[from] Indeterminate),
    #[error("vector is not spacelike")]
    NotSpacelike,
    #[error("expected a future-pointing timelike or null vector")]
    BadCausality,
    #[error("square root of {0} does not lie in the scalar field")]
    NoExactRoot(String),
    #[error("matrix does not preserve the Lorentzian form with positive time orientation")]
    NotAnIsometry,
    #[error("2x2 matrix does not have determinant 1")]
    NotUnimodular,
    #[error("matrix is singular")]
    Singular,
    #[error("isometry is neither hyperbolic nor parabolic")]
    NotHyperbolicOrParabolic,
    #[error("vector is not fixed by the linear part")]
    NotFixedVector,
    #[error("expected pair type {expected}, found {found}")]
    WrongPairType { expected: &'static str, found: String },
    #[error("direction vectors are not consistently oriented")]
    NotConsistentlyOriented,
    #[error("no labeling of the asymptotic pair has v1- parallel to v2+")]
    LabelingFailed,
    #[error("ray direction is tangent to the half-plane boundary")]
    TangentDirection,
    #[error("exact oracle requires exact scalars")]
    NotRational,
    #[error("generator {0} is elliptic")]
    EllipticGenerator(usize),
    #[error("generators {0} and {1} share a fixed direction")]
    CoincidentAxes(usize, usize),
    #[error("linear map has rank {0}, expected 3")]
    RankDeficient(usize),
    #[error("no real b3 with b3 + 1/b3 = {0}")]
    NoRealB3(String),
    #[error("no sign choice makes the trace-slice product project to the identity")]
    RelationUnsatisfiable,
    #[error("endpoints x_i and x_(i+1) are orthogonal")]
    DegenerateEndpoints,
    #[error("Margulis invariants ({0}) must all have the same sign, and positive: mixed signs rule out a proper action, and negative triples need negatively extended crooked planes")]
    NonPositiveMu(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("kissing search exhausted after {steps} steps; pair {pair:?} still intersects")]
    SearchExhausted { steps: usize, pair: (usize, usize) },
    #[error("expected positive integers, got {0}")]
    NonPositiveInteger(String),
    #[error("matrix does not normalize the translation subgroup")]
    NotInNormalizer,
    #[error("printed formula gives {printed}, direct computation gives {direct}")]
    FormulaMismatch { printed: String, direct: String },
}
