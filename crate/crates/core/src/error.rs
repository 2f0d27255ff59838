use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("edge {edge} is a self-loop at vertex {vertex}")]
    SelfLoop { edge: usize, vertex: usize },
    #[error("edge {edge} has endpoint {vertex} outside 0..{n}")]
    EndpointOutOfRange {
        edge: usize,
        vertex: usize,
        n: usize,
    },
    #[error("vertex {vertex} has odd degree {degree}")]
    OddDegree { vertex: usize, degree: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("edge {edge} has LP value {value}, expected 1/2 or 1")]
    HalfIntegralityViolation { edge: usize, value: String },
    #[error("vertex {vertex} has x(delta(v)) = {sum}, expected 2")]
    DegreeViolation { vertex: usize, sum: String },
    #[error("support graph has a cut of size {cut} < 4")]
    SubtourViolation { cut: usize },
    #[error("instance with {n} vertices is too small (need n >= 4)")]
    DegenerateInstance { n: usize },
    #[error("duplicate support edge between {u} and {v}")]
    DuplicateEdge { u: usize, v: usize },
    #[error("negative cost on edge {edge}")]
    NegativeCost { edge: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid blueprint: {0}")]
    BlueprintInvalid(String),
    #[error("{what} is too large ({size} > {limit})")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("metric completion undefined: {0}")]
    MetricUndefined(String),
    #[error("graph is not 4-regular (vertex {vertex} has degree {degree})")]
    NotFourRegular { vertex: usize, degree: usize },
    #[error("graph is not 4-edge-connected (min cut {cut})")]
    NotFourConnected { cut: usize },
    #[error("hierarchy node {node} is not a cycle cut")]
    NotCycleCut { node: usize },
    #[error("hierarchy node {node} is a singleton and has no frame")]
    NotApplicable { node: usize },
    #[error("boundary parities contain an odd number of odd edges")]
    ParityViolation,
    #[error("distribution ({0}) is not a probability vector")]
    InvalidDistribution(String),
    #[error("distribution ({0}) is outside the feasible region")]
    NotInRegion(String),
    #[error("chain parameter {name} = {value} outside [{lo}, {hi}]")]
    ParamOutOfRange {
        name: &'static str,
        value: String,
        lo: String,
        hi: String,
    },
    #[error("distribution at hierarchy node {node} is outside the feasible region")]
    RegionViolation { node: usize },
    #[error("hierarchy contains degree cut(s) at node(s) {nodes:?}")]
    DegreeCutPresent { nodes: Vec<usize> },
    #[error("root distribution must have p4 = 0")]
    RootDistributionUnsupported,
    #[error("pattern assignment does not match frame of node {node}")]
    FrameMismatch { node: usize },
}

impl Error {
    /// Stable name of the error variant, used in JSON reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SelfLoop { .. } => "SelfLoop",
            Error::EndpointOutOfRange { .. } => "EndpointOutOfRange",
            Error::OddDegree { .. } => "OddDegree",
            Error::Disconnected => "Disconnected",
            Error::HalfIntegralityViolation { .. } => "HalfIntegralityViolation",
            Error::DegreeViolation { .. } => "DegreeViolation",
            Error::SubtourViolation { .. } => "SubtourViolation",
            Error::DegenerateInstance { .. } => "DegenerateInstance",
            Error::DuplicateEdge { .. } => "DuplicateEdge",
            Error::NegativeCost { .. } => "NegativeCost",
            Error::Parse(_) => "ParseError",
            Error::BlueprintInvalid(_) => "BlueprintInvalid",
            Error::TooLarge { .. } => "TooLarge",
            Error::MetricUndefined(_) => "MetricUndefined",
            Error::NotFourRegular { .. } => "NotFourRegular",
            Error::NotFourConnected { .. } => "NotFourConnected",
            Error::NotCycleCut { .. } => "NotCycleCut",
            Error::NotApplicable { .. } => "NotApplicable",
            Error::ParityViolation => "ParityViolation",
            Error::InvalidDistribution(_) => "InvalidDistribution",
            Error::NotInRegion(_) => "NotInRegion",
            Error::ParamOutOfRange { .. } => "ParamOutOfRange",
            Error::RegionViolation { .. } => "RegionViolation",
            Error::DegreeCutPresent { .. } => "DegreeCutPresent",
            Error::RootDistributionUnsupported => "RootDistributionUnsupported",
            Error::FrameMismatch { .. } => "FrameMismatch",
        }
    }

    /// True for errors caused by the input rather than a violated property.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::DegreeCutPresent { .. }
                | Error::RegionViolation { .. }
                | Error::NotCycleCut { .. }
                | Error::FrameMismatch { .. }
                | Error::OddDegree { .. }
                | Error::Disconnected
        )
    }
}
