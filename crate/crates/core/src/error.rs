use thiserror::Error;

use crate::instance::ValidationReport;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("node count {0} exceeds the cap of 62")]
    TooManyNodes(usize),
    #[error("node {node} out of range for {node_count} nodes")]
    NodeOutOfRange { node: usize, node_count: usize },
    #[error("a bit's demanders and owners intersect")]
    DemanderOwnsBit,
    #[error("count {0} is not a non-negative integer")]
    FractionalCount(String),
    #[error("invalid instance:\n{0}")]
    Invalid(ValidationReport),
    #[error("malformed instance document: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Error)]
pub enum BoundError {
    #[error("invalid instance:\n{0}")]
    InvalidInstance(ValidationReport),
    #[error("instance is not centralized")]
    NotCentralized,
    #[error("count {0} is not an integer")]
    FractionalCount(String),
    #[error("not a permutation of clients 1..={clients}: {order:?}")]
    BadPermutation { clients: usize, order: Vec<usize> },
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("invalid parameters: {0}")]
    InvalidSpec(String),
    #[error("t = MK/N = {0} is not an integer")]
    NonIntegerT(String),
    #[error("{parts} parts do not divide F = {bits}")]
    Indivisible { parts: u64, bits: u64 },
    #[error("K*Delta = {needed} exceeds N = {files}")]
    TooFewFiles { needed: usize, files: usize },
    #[error("closed form is unbounded: {0}")]
    Unbounded(String),
    #[error("demand references file {file} outside 1..={files}")]
    UnknownFile { file: usize, files: usize },
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Bound(#[from] BoundError),
}

#[derive(Debug, Error)]
pub enum IndexCodingError {
    #[error("{clients} clients exceed the cap of {cap}")]
    TooManyClients { clients: usize, cap: usize },
    #[error("instance is not unicast (class {0} has |P| != 1)")]
    NotUnicast(usize),
    #[error("malformed scheme: {0}")]
    MalformedScheme(String),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Bound(#[from] BoundError),
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("instance exceeds oracle limits: {0}")]
    LimitsExceeded(String),
    #[error("search budget exhausted; optimal linear load lies in [{lower}, {upper}]")]
    BudgetExhausted { lower: u64, upper: u64 },
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Bound(#[from] BoundError),
}
