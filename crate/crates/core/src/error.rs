use crate::modes::{Path, SingleModeLabel};

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("OAM index {oam} exceeds the configured bound |l| <= {l_max}")]
    OamOutOfRange { oam: i32, l_max: i32 },
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("polarizer axis is not normalized (norm {0})")]
    UnnormalizedAxis(f64),
    #[error("polarizer axis must be a pure polarization ket (single path, single OAM)")]
    AxisNotPolarization,
    #[error("beam splitter accepts paths a and b only, got {0:?}")]
    BeamSplitterPort(Path),
    #[error("mode map has no entry for {0:?}")]
    UnmappedLabel(SingleModeLabel),
    #[error("invalid Bell id (family {family}, m {m}, n {n})")]
    InvalidBellId { family: u8, m: u8, n: u8 },
    #[error("OAM labels must be pairwise distinct")]
    DuplicateLabels,
    #[error("invalid conventional Bell index m={m}, n={n} for d={d}")]
    InvalidConventionalIndex { m: usize, n: usize, d: usize },
    #[error("HOM input must have slot 1 on path a and slot 2 on path b")]
    WrongPorts,
    #[error("scan grid is empty")]
    EmptyGrid,
    #[error("scan grid must be strictly increasing")]
    NonMonotoneGrid,
    #[error("scan has no record at zero delay")]
    MissingZeroDelay,
    #[error("scan has no baseline records with |tau| >= 5 sigma")]
    MissingBaseline,
    #[error("baseline coincidence rate {0:e} is too small for a visibility")]
    UndefinedVisibility(f64),
    #[error("white-noise weight {0} is outside [0, 1]")]
    InvalidNoiseWeight(f64),
    #[error("coherence width must be positive, got {0}")]
    InvalidCoherenceWidth(f64),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("unsupported tomography dimension {0} (expected 2, 4 or 6)")]
    UnsupportedDimension(usize),
    #[error("projector set is not informationally complete (rank {rank} < {required})")]
    RankDeficient { rank: usize, required: usize },
    #[error("state has support outside the OAM label set or mixes internal modes")]
    NotOamOnly,
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(&'static str),
    #[error("counts are missing setting ({u}, {v})")]
    MissingSetting { u: usize, v: usize },
    #[error("shots per setting must be at least 1")]
    InvalidShots,
    #[error("fidelity {0} is outside [0, 1]")]
    InvalidFidelity(f64),
}
