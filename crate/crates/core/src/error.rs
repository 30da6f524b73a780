use thiserror::Error;

use crate::board::Cell;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("board dimensions must be positive, got {rows}x{cols}")]
    EmptyBoard { rows: usize, cols: usize },

    #[error("cell out of range: {cell} on a {rows}x{cols} board")]
    CellOutOfRange { cell: Cell, rows: usize, cols: usize },

    #[error("cell sets belong to different boards: {left:?} vs {right:?}")]
    BoardMismatch { left: (usize, usize), right: (usize, usize) },

    #[error("cell {0} is both black and white")]
    Overlap(Cell),

    #[error("cell {0} listed twice")]
    DuplicateCell(Cell),

    #[error("small case not tabulated: {m}x{n}")]
    NotTabulated { m: usize, n: usize },

    #[error("use oracle for small boards: {m}x{n} is outside the construction regime")]
    OutOfRegime { m: usize, n: usize },

    #[error("invalid placement: black {black} attacks white {white}")]
    InvalidPlacement { black: Cell, white: Cell },

    #[error("count mismatch on {what}: claimed {claimed}, actual {actual}")]
    CountMismatch { what: &'static str, claimed: usize, actual: usize },

    #[error("board too large for exhaustive search: {cells} cells (limit {limit}); set a search budget")]
    BoardTooLarge { cells: usize, limit: usize },

    #[error("search too large: {subsets} subsets to enumerate (limit {limit}); set a search budget")]
    SearchTooLarge { subsets: u128, limit: u128 },

    #[error("thread pool: {0}")]
    ThreadPool(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("malformed placement file: {0}")]
    Placement(String),

    #[error("malformed table file at line {line}: {reason}")]
    Table { line: usize, reason: String },

    #[error("malformed LP text at line {line}: {reason}")]
    Lp { line: usize, reason: String },
}
