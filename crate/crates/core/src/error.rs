use num_bigint::BigInt;
use thiserror::Error;

/// Domain errors raised by the algebraic operations when their
/// preconditions are not met.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("the zero polynomial has no content or primitive part")]
    ZeroPolynomial,
    #[error("polynomial is constant")]
    ConstantPolynomial,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("factor degrees sum to {got}, expected {expected}")]
    DegreeSumMismatch { expected: usize, got: usize },
    #[error("degree sets are for different degrees ({0} vs {1})")]
    DegreeSetMismatch(usize, usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("Möbius matrix is degenerate (determinant zero)")]
    DegenerateMatrix,
    #[error("only {found} usable evaluation points found, {needed} needed")]
    TooFewPoints { needed: usize, found: usize },
    #[error("evidence does not intersect to the requested degree set")]
    EvidenceMismatch,
    #[error("modulus {0} is not a usable prime")]
    BadModulus(u64),
}

/// Failures of the polynomial text parser. Offsets are 0-based character
/// positions into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty input")]
    Empty,
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable '{found}' at offset {offset} (only x is allowed)")]
    UnknownVariable { offset: usize, found: char },
}

impl ParseError {
    pub fn offset(&self) -> Option<usize> {
        match self {
            ParseError::Empty => None,
            ParseError::Syntax { offset, .. } | ParseError::UnknownVariable { offset, .. } => {
                Some(*offset)
            }
        }
    }
}

/// Errors from reading a certificate document.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertParseError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("unsupported format version {0:?}")]
    Version(String),
    #[error("unknown kind {0:?}")]
    UnknownKind(String),
    #[error("a transform certificate may not wrap another transform")]
    NestedTransform,
    #[error("non-canonical rational {0:?}")]
    NonCanonicalRational(String),
    #[error("non-canonical integer {0:?}")]
    NonCanonicalInteger(String),
    #[error("schema violation: {0}")]
    Schema(String),
}

/// A failed verification step. [`VerifyError::check`] gives a stable short
/// name for the step; `Display` adds the details.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("certificate is for a different polynomial")]
    PolynomialMismatch,
    #[error("polynomial is zero or constant")]
    NotPositiveDegree,
    #[error("linear certificate used for a polynomial of degree {0}")]
    NotLinear(usize),
    #[error("certificate kind requires degree at least 2, got {0}")]
    DegreeTooSmall(usize),

    // degree analysis
    #[error("modulus {0} is not prime")]
    ModulusNotPrime(BigInt),
    #[error("modulus {0} is too large")]
    ModulusTooLarge(BigInt),
    #[error("modulus {0} divides the leading coefficient")]
    ModulusDividesLeading(u64),
    #[error("factor modulo {0} is not monic or not reduced")]
    FactorNotMonic(u64),
    #[error("factor modulo {0} is not irreducible")]
    FactorReducible(u64),
    #[error("repeated factor modulo {0}")]
    DuplicateFactor(u64),
    #[error("product of factors modulo {0} does not equal the polynomial")]
    ProductMismatch(u64),
    #[error("degree analysis leaves possible factor degree {0}")]
    DegreesRemain(usize),

    // root bound and witness
    #[error("root bound must be positive")]
    RootBoundNotPositive,
    #[error("too many Gräffe iterations ({0})")]
    TooManyGraeffeIterations(u32),
    #[error("f* is not positive at the claimed root bound")]
    RootBound,
    #[error("evaluation point does not exceed 1 + rho")]
    EvaluationPointTooSmall,
    #[error("polynomial vanishes at the evaluation point")]
    ZeroValue,
    #[error("claimed prime does not divide |f(n)|")]
    NotADivisor,
    #[error("cofactor s is not below (|n| - rho)^delta")]
    CofactorTooLarge,
    #[error("factor degree lower bound must be at least 1")]
    DeltaZero,
    #[error("delta = 1 must not carry degree evidence")]
    DeltaEvidenceUnexpected,
    #[error("degree evidence certifies only delta = {certified}, claimed {claimed}")]
    DeltaNotCertified { claimed: u64, certified: u64 },
    #[error("claimed prime is less than 2")]
    PrimeTooSmall,
    #[error("strict mode requires a primality certificate")]
    PrimalityCertificateRequired,
    #[error("probable-prime test failed for {0}")]
    ProbablePrimeFailed(BigInt),

    // pratt
    #[error("small-prime certificate used for {0} which is not below the threshold")]
    SmallPrimeOutOfRange(BigInt),
    #[error("{0} is not prime (trial division)")]
    SmallPrimeComposite(BigInt),
    #[error("Lucas-Pratt certificate has no factors")]
    EmptyFactorList,
    #[error("factor exponent must be positive")]
    ZeroExponent,
    #[error("factorization of n - 1 does not match for n = {0}")]
    FactorizationMismatch(BigInt),
    #[error("witness fails w^(n-1) = 1 mod {0}")]
    FermatCondition(BigInt),
    #[error("witness fails order condition for q = {q} modulo {n}")]
    OrderCondition { n: BigInt, q: BigInt },
    #[error("probable-prime certificates are not accepted in strict mode")]
    ProbablePrimeInStrictMode,

    // transform
    #[error("transform matrix is degenerate")]
    DegenerateMatrix,
    #[error("transformed image is not primitive with positive leading coefficient")]
    ImageNotPrimitive,
    #[error("transformed image has degree {got}, expected {expected}")]
    ImageDegree { expected: usize, got: usize },
    #[error("not enough usable evaluation points to check the transform")]
    TooFewPoints,
    #[error("value ratios differ: image is not the transform of the polynomial")]
    RatioMismatch,
    #[error("transform certificates may not be nested")]
    NestedTransform,
}

impl VerifyError {
    /// Short, stable name of the failed check.
    pub fn check(&self) -> &'static str {
        use VerifyError::*;
        match self {
            PolynomialMismatch => "polynomial-match",
            NotPositiveDegree => "degree",
            NotLinear(_) => "linear",
            DegreeTooSmall(_) => "degree",
            ModulusNotPrime(_) | ModulusTooLarge(_) => "modulus-prime",
            ModulusDividesLeading(_) => "modulus-leading-coefficient",
            FactorNotMonic(_) => "factor-monic",
            FactorReducible(_) => "factor-irreducible",
            DuplicateFactor(_) => "factor-distinct",
            ProductMismatch(_) => "factor-product",
            DegreesRemain(_) => "degree-set",
            RootBoundNotPositive | TooManyGraeffeIterations(_) | RootBound => "root-bound",
            EvaluationPointTooSmall => "evaluation-point",
            ZeroValue | NotADivisor => "prime-divides",
            CofactorTooLarge => "cofactor-bound",
            DeltaZero | DeltaEvidenceUnexpected | DeltaNotCertified { .. } => "delta",
            PrimeTooSmall
            | PrimalityCertificateRequired
            | ProbablePrimeFailed(_)
            | SmallPrimeOutOfRange(_)
            | SmallPrimeComposite(_)
            | EmptyFactorList
            | ZeroExponent
            | FactorizationMismatch(_)
            | FermatCondition(_)
            | OrderCondition { .. }
            | ProbablePrimeInStrictMode => "primality",
            DegenerateMatrix
            | ImageNotPrimitive
            | ImageDegree { .. }
            | TooFewPoints
            | RatioMismatch
            | NestedTransform => "transform",
        }
    }
}
