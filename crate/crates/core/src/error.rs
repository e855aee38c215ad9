use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex id {id} is not in a graph of {vertex_count} vertices")]
    InvalidVertex { id: u32, vertex_count: usize },
    #[error("graph is disconnected: BFS from {start} reached {reached} of {vertex_count} vertices")]
    Disconnected {
        start: u32,
        reached: usize,
        vertex_count: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeedError {
    #[error("seed needs at least 2 vertices, got {0}")]
    TooSmall(usize),
    #[error("seed graph is not connected")]
    Disconnected,
    #[error("hook id {0} is not a seed vertex")]
    InvalidHook(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("step {step} is beyond the explicit sequence of length {len}; supply more values or fewer steps")]
    HorizonExceeded { step: usize, len: usize },
    #[error("building sequence values must be >= 1 (index {index})")]
    ZeroCopies { index: usize },
    #[error("condition R1 violated at step index {step}: k = {k} exceeds the {tau} available vertices")]
    R1Violation { step: usize, k: u64, tau: u64 },
    #[error("network order overflows u64 at step {step}")]
    Overflow { step: usize },
    #[error("cannot parse sequence spec '{0}' (expected const:<k>, linear, takeall, or explicit:<k0>,<k1>,...)")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrowthError {
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("step {step}: expected {expected} latches, got {got}")]
    LatchCount {
        step: usize,
        expected: u64,
        got: usize,
    },
    #[error("step {step}: latch {id} is not a vertex of the current graph")]
    InvalidLatch { step: usize, id: u32 },
    #[error("step {step}: latch {id} listed twice")]
    DuplicateLatch { step: usize, id: u32 },
    #[error("step {step}: adversarial selection needs at least 2 latches, sequence gives {k}")]
    TooFewLatches { step: usize, k: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error("recurrence coefficients cover {available} steps, {needed} requested")]
    ShortCoefficients { needed: usize, available: usize },
    #[error("asymptotic coefficient needs exactly known limits")]
    LimitsNotExact,
    #[error("limits a = {a}, b = {b} make the coefficient denominator vanish")]
    DegenerateDenominator { a: String, b: String },
    #[error("hypergeometric parameters out of range: population {population}, special {special}, sample {sample}")]
    Hypergeometric {
        population: u64,
        special: u64,
        sample: u64,
    },
    #[error("harmonic sum hits a pole at i = {i}")]
    HarmonicPole { i: u64 },
    #[error("min-degree law support reached {size} states at step {step}, cap is {cap}")]
    StateSpace { step: usize, size: usize, cap: usize },
    #[error("birth step {j} is after step {n}")]
    BirthAfterStep { j: usize, n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("seed file has no `hook` line")]
    MissingHook,
    #[error("invalid trace: {0}")]
    Trace(String),
}

/// Umbrella error for entry points that span several modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Seed(#[from] SeedError),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Growth(#[from] GrowthError),
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid configuration: {0}")]
    Config(String),
}
