use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("slope 0/0 is undefined")]
    ZeroSlope,
    #[error("unknown surface `{0}` (expected s11 or s04)")]
    UnknownSurface(String),
    #[error("depth {depth} exceeds the supported bound {bound}")]
    DepthBound { depth: usize, bound: usize },
    #[error("radius {radius} exceeds the supported bound {bound} for {surface}")]
    RadiusBound {
        radius: usize,
        bound: usize,
        surface: &'static str,
    },
    #[error("slopes {a} and {b} have det {det}, expected 2")]
    NotIntersectionFour { a: String, b: String, det: i64 },
    #[error("ambiguous resolution of {a}, {b}: {count} candidate edges")]
    AmbiguousResolution { a: String, b: String, count: usize },
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("invalid train track: {0}")]
    InvalidTrack(String),
    #[error("track is not complete on {0}")]
    NotComplete(&'static str),
    #[error("branch {0} is not large")]
    NotLarge(usize),
    #[error("measure does not trace a single closed curve ({0} components)")]
    NotSingleCurve(usize),
    #[error("track is not in class (1): {0}")]
    NotClassOne(String),
    #[error("wrong surface: expected {expected}")]
    WrongSurface { expected: &'static str },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("marking derivation failed: {0}")]
    Marking(String),
}

pub type Result<T> = std::result::Result<T, Error>;
