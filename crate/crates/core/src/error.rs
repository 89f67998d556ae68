use thiserror::Error;

/// Errors from permutations, permutation groups and group tables.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("image array {images:?} is not a permutation")]
    NotAPermutation { images: Vec<usize> },
    #[error("generator {index} has degree {found}, expected {expected}")]
    DegreeMismatch { index: usize, expected: usize, found: usize },
    #[error("group of order {order} exceeds the brute-force bound {bound}")]
    TooLarge { order: usize, bound: usize },
    #[error("invalid group table: {0}")]
    InvalidTable(String),
    #[error("invalid Z-group parameters: {0}")]
    InvalidTriple(String),
}

/// Violations found while validating a left brace.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraceError {
    #[error("tables are not square of a common size: {0}")]
    Shape(String),
    #[error("addition is not an abelian group with identity 0: {0}")]
    NotAbelianGroup(String),
    #[error("multiplication is not a group with identity 0: {0}")]
    NotGroup(String),
    #[error("brace law fails at (a, b, c) = ({a}, {b}, {c}): a∘(b+c) != a∘b - a + a∘c")]
    BraceLawViolation { a: usize, b: usize, c: usize },
    #[error("subset is not an ideal: {0}")]
    NotAnIdeal(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("action is not valid: {0}")]
    InvalidAction(String),
    #[error("brace of order {order} exceeds the brute-force bound {bound}")]
    TooLarge { order: usize, bound: usize },
}

/// Violations found while validating a cycle set or solution.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycleSetError {
    #[error("table is not square: {0}")]
    Shape(String),
    #[error("left multiplication by {0} is not a bijection")]
    RowNotBijective(usize),
    #[error("cycle set law fails at (x, y, z) = ({x}, {y}, {z}): (x·y)·(x·z) != (y·x)·(y·z)")]
    LawViolation { x: usize, y: usize, z: usize },
    #[error("squaring map x ↦ x·x is not a bijection")]
    SquaringNotBijective,
    #[error("{0} is not in any transitive cycle base")]
    NotInTransitiveCycleBase(usize),
    #[error("size {size} exceeds the isomorphism search bound {bound}")]
    TooLarge { size: usize, bound: usize },
    #[error("solution is not involutive at ({x}, {y})")]
    NotInvolutive { x: usize, y: usize },
    #[error("braid relation fails at ({x}, {y}, {z})")]
    BraidViolation { x: usize, y: usize, z: usize },
    #[error("map {0} of the solution is not bijective")]
    Degenerate(String),
}

/// Problems with a structured Z-group brace description.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("invalid spec: {0}")]
    Invalid(String),
    #[error("order {0} is even; the construction needs odd order")]
    EvenOrder(u64),
    #[error("brace does not satisfy the decomposition preconditions: {0}")]
    NotDecomposable(String),
    #[error(transparent)]
    Brace(#[from] BraceError),
}

/// Errors from the classification layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("order {0} is even; uniconnected classification needs odd size")]
    EvenOrder(u64),
    #[error("order {0} is not square-free")]
    NotSquareFree(u64),
    #[error("additive group is not cyclic")]
    NotCyclic,
    #[error("{0} is not a base point")]
    NotABasePoint(usize),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    CycleSet(#[from] CycleSetError),
}
