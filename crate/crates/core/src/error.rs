use thiserror::Error;

use crate::iso::Embedding;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex index {index} out of range for order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("order {0} exceeds the supported maximum of {max}", max = crate::bitset::MAX_ORDER)]
    OrderTooLarge(usize),
    #[error("empty piece")]
    EmptyPiece,
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("family member {0} is disconnected")]
    DisconnectedMember(usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph contains a forbidden induced {name}")]
    FreenessViolated { name: String, embedding: Embedding },
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("internal invariant broken: {0}")]
    InternalInvariantBroken(String),
    #[error("path piece with {len} vertices but the graph is P_{n}-free")]
    PathTooLong { len: usize, n: usize },
    #[error("star piece with {len} vertices exceeds {limit}")]
    StarTooLarge { len: usize, limit: usize },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
