use std::fmt;

/// Errors produced by space construction, solvers, matchers, and measure
/// operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Distance matrix is not square.
    NonSquareMatrix { rows: usize, cols: usize },
    /// Matrix or coordinate entry is NaN or infinite.
    NonFiniteEntry { row: usize, col: usize },
    /// Negative distance entry.
    NegativeEntry { row: usize, col: usize, value: f64 },
    /// |m[i][j] - m[j][i]| exceeds the symmetry tolerance.
    AsymmetricEntry { row: usize, col: usize, delta: f64 },
    /// Diagonal entry is not zero.
    NonzeroDiagonal { index: usize, value: f64 },
    /// A space needs at least one point.
    EmptySpace,
    /// Point-cloud rows have inconsistent dimension.
    DimensionMismatch { expected: usize, found: usize, row: usize },
    /// Epsilon must be positive and finite.
    InvalidEpsilon { eps: f64 },
    /// Bowen distance needs at least one iterate.
    ZeroIterations,
    /// Disjoint-union cross distance below the internal diameters.
    CrossDistanceTooSmall { cross: f64, required: f64 },
    /// Instance larger than the configured exact-solver cap.
    ExactCapExceeded { n: usize, cap: usize },
    /// Point index outside the space.
    PointOutOfRange { index: usize, n: usize },
    /// A claimed separated set contains a pair closer than epsilon.
    NotSeparated { a: usize, b: usize, dist: f64, eps: f64 },
    /// A claimed net leaves a point uncovered.
    NotANet { uncovered: usize },
    /// Two witnesses that must have equal cardinality do not.
    WitnessSizeMismatch { left: usize, right: usize },
    /// A matching that should saturate the left side does not; carries the
    /// Hall violator S with |N(S)| < |S|.
    MatchingIncomplete { unmatched: Vec<usize>, violator: Vec<usize> },
    /// An operation demanded exact semantics but got a greedy witness.
    NotExactWitness,
    /// Bipartite edge endpoint outside the declared sides.
    EdgeOutsideParts { left: usize, right: usize },
    /// A point map failed to preserve a distance within its claimed radius.
    IsometryViolation { x: usize, y: usize, before: f64, after: f64 },
    /// Forward map of a PointMap with an isometry radius must be a bijection.
    NotABijection,
    /// Transition matrix is not primitive (no power is strictly positive).
    NotPrimitive,
    /// Power iteration failed to converge within the iteration cap.
    PowerIterationDiverged { iterations: u64 },
    /// Word violates the transition matrix or the alphabet.
    InadmissibleWord { word: Vec<u8> },
    /// Malformed 0/1 transition matrix.
    InvalidTransitionMatrix { reason: String },
    /// Malformed distance specification (q <= 1, increasing scales, ...).
    InvalidDistanceSpec { reason: String },
    /// Group translation is only defined on full shifts.
    TranslationNeedsFullShift,
    /// Group translation is only exposed under scale-sequence metrics.
    TranslationNeedsScaleMetric,
    /// A prefix permutation must preserve the last symbol of each word.
    NotLastSymbolPreserving { from: Vec<u8>, to: Vec<u8> },
    /// Index list is not a permutation.
    NotAPermutation,
    /// Requested depth exceeds what the configuration can generate.
    DepthOutOfRange { depth: usize, max: usize },
    /// Epsilon is at or below the last generated scale; the rank is unknown.
    EpsilonBelowResolution,
    /// Closed-form complexity exceeds u128.
    ClosedFormOverflow { exponent: u32 },
    /// Epsilon schedules must be strictly decreasing and positive.
    ScheduleNotDecreasing,
    /// The comparison theorem requires a nonnegative test function.
    NegativePhi { point: usize, value: f64 },
    /// Invariance checks need eps within the map's isometry radius.
    IsometryRadiusExceeded { eps: f64, radius: f64 },
    /// The point map carries no isometry radius.
    NoIsometryRadius,
    /// Cell assignment is not a partition of the points.
    NotAPartition { reason: String },
    /// Too few profile entries for a fit.
    TooFewEntries { needed: usize, found: usize },
    /// Input text could not be parsed.
    Parse { line: usize, reason: String },
    /// Internal invariant failed; indicates a bug, not bad input.
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NonSquareMatrix { rows, cols } => {
                write!(f, "matrix is not square: {rows} rows, {cols} columns")
            }
            Self::NonFiniteEntry { row, col } => {
                write!(f, "non-finite entry at ({row}, {col})")
            }
            Self::NegativeEntry { row, col, value } => {
                write!(f, "negative entry {value} at ({row}, {col})")
            }
            Self::AsymmetricEntry { row, col, delta } => {
                write!(f, "asymmetric entry at ({row}, {col}): |m[i][j]-m[j][i]| = {delta}")
            }
            Self::NonzeroDiagonal { index, value } => {
                write!(f, "nonzero diagonal entry {value} at index {index}")
            }
            Self::EmptySpace => write!(f, "space must contain at least one point"),
            Self::DimensionMismatch { expected, found, row } => {
                write!(f, "row {row} has dimension {found}, expected {expected}")
            }
            Self::InvalidEpsilon { eps } => write!(f, "epsilon must be positive and finite, got {eps}"),
            Self::ZeroIterations => write!(f, "Bowen distance requires n >= 1"),
            Self::CrossDistanceTooSmall { cross, required } => {
                write!(f, "cross distance {cross} below required {required}")
            }
            Self::ExactCapExceeded { n, cap } => {
                write!(f, "instance size {n} exceeds exact-solver cap {cap}")
            }
            Self::PointOutOfRange { index, n } => {
                write!(f, "point index {index} out of range for {n}-point space")
            }
            Self::NotSeparated { a, b, dist, eps } => {
                write!(f, "points {a}, {b} at distance {dist} < {eps} in a claimed separated set")
            }
            Self::NotANet { uncovered } => {
                write!(f, "point {uncovered} is not covered by the claimed net")
            }
            Self::WitnessSizeMismatch { left, right } => {
                write!(f, "witness sizes differ: {left} vs {right}")
            }
            Self::MatchingIncomplete { unmatched, violator } => {
                write!(
                    f,
                    "matching leaves {} left vertices unmatched; Hall violator of size {}",
                    unmatched.len(),
                    violator.len()
                )
            }
            Self::NotExactWitness => write!(f, "operation requires an exact witness, got greedy"),
            Self::EdgeOutsideParts { left, right } => {
                write!(f, "edge ({left}, {right}) not contained in the declared sides")
            }
            Self::IsometryViolation { x, y, before, after } => {
                write!(f, "map sends pair ({x}, {y}) at distance {before} to distance {after}")
            }
            Self::NotABijection => write!(f, "forward map is not a bijection"),
            Self::NotPrimitive => write!(f, "transition matrix is not primitive"),
            Self::PowerIterationDiverged { iterations } => {
                write!(f, "power iteration did not converge in {iterations} steps")
            }
            Self::InadmissibleWord { word } => write!(f, "inadmissible word {word:?}"),
            Self::InvalidTransitionMatrix { reason } => {
                write!(f, "invalid transition matrix: {reason}")
            }
            Self::InvalidDistanceSpec { reason } => write!(f, "invalid distance spec: {reason}"),
            Self::TranslationNeedsFullShift => {
                write!(f, "group translation is only defined on full shifts")
            }
            Self::TranslationNeedsScaleMetric => {
                write!(f, "group translation requires a scale-sequence metric")
            }
            Self::NotLastSymbolPreserving { from, to } => {
                write!(f, "permutation maps {from:?} to {to:?}, changing the last symbol")
            }
            Self::NotAPermutation => write!(f, "index list is not a permutation"),
            Self::DepthOutOfRange { depth, max } => {
                write!(f, "depth {depth} exceeds generated maximum {max}")
            }
            Self::EpsilonBelowResolution => {
                write!(f, "epsilon is below the resolution of the generated scale sequence")
            }
            Self::ClosedFormOverflow { exponent } => {
                write!(f, "closed form 2^{exponent} overflows u128")
            }
            Self::ScheduleNotDecreasing => {
                write!(f, "epsilon schedule must be strictly decreasing and positive")
            }
            Self::NegativePhi { point, value } => {
                write!(f, "test function is negative at point {point}: {value}")
            }
            Self::IsometryRadiusExceeded { eps, radius } => {
                write!(f, "eps {eps} exceeds the isometry radius {radius}")
            }
            Self::NoIsometryRadius => write!(f, "point map carries no isometry radius"),
            Self::NotAPartition { reason } => write!(f, "not a partition: {reason}"),
            Self::TooFewEntries { needed, found } => {
                write!(f, "need at least {needed} entries, found {found}")
            }
            Self::Parse { line, reason } => write!(f, "parse error on line {line}: {reason}"),
            Self::Internal(msg) => write!(f, "internal invariant violated: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
