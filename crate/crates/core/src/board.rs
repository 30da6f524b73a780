//! Board geometry, piece attack kernels and cell sets.
//!
//! Cells are 1-indexed `(row, col)` pairs. Row 1 is the top row and column 1
//! the leftmost column.
//!
//! Sliding pieces (rook, bishop, queen) use *unblocked* line adjacency: two
//! rooks on the same row attack each other no matter what stands between
//! them. This is the attack graph of the anticoloring problem, not
//! over-the-board chess.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const KNIGHT_OFFSETS: [(isize, isize); 8] = [(-2, -1), (-2, 1), (-1, -2), (-1, 2), (1, -2), (1, 2), (2, -1), (2, 1)];

const KING_OFFSETS: [(isize, isize); 8] = [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Piece {
    Knight,
    Rook,
    Bishop,
    King,
    Queen,
}

impl Piece {
    pub const ALL: [Piece; 5] = [Piece::Knight, Piece::Rook, Piece::Bishop, Piece::King, Piece::Queen];

    pub fn name(self) -> &'static str {
        match self {
            Piece::Knight => "knight",
            Piece::Rook => "rook",
            Piece::Bishop => "bishop",
            Piece::King => "king",
            Piece::Queen => "queen",
        }
    }
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Piece {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Piece::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown piece `{s}` (expected knight, rook, bishop, king or queen)"))
    }
}

/// A square of the board, 1-indexed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub const fn new(row: usize, col: usize) -> Self {
        Cell { row, col }
    }

    pub fn transpose(self) -> Cell {
        Cell::new(self.col, self.row)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

impl From<(usize, usize)> for Cell {
    fn from((row, col): (usize, usize)) -> Self {
        Cell::new(row, col)
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        [self.row, self.col].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Cell {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let [row, col] = <[usize; 2]>::deserialize(deserializer)?;
        Ok(Cell::new(row, col))
    }
}

/// Board dimensions plus the piece whose attack relation defines the graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoardSpec {
    rows: usize,
    cols: usize,
    piece: Piece,
}

impl BoardSpec {
    pub fn new(rows: usize, cols: usize, piece: Piece) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyBoard { rows, cols });
        }
        Ok(BoardSpec { rows, cols, piece })
    }

    pub fn knight(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, Piece::Knight)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn piece(&self) -> Piece {
        self.piece
    }

    /// Number of cells, `m·n`.
    pub fn area(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn contains(&self, cell: Cell) -> bool {
        (1..=self.rows).contains(&cell.row) && (1..=self.cols).contains(&cell.col)
    }

    pub fn check(&self, cell: Cell) -> Result<()> {
        if self.contains(cell) {
            Ok(())
        } else {
            Err(Error::CellOutOfRange { cell, rows: self.rows, cols: self.cols })
        }
    }

    /// Row-major 0-based index of an in-bounds cell.
    pub fn index(&self, cell: Cell) -> usize {
        debug_assert!(self.contains(cell));
        (cell.row - 1) * self.cols + (cell.col - 1)
    }

    pub fn cell_at(&self, index: usize) -> Cell {
        debug_assert!(index < self.area());
        Cell::new(index / self.cols + 1, index % self.cols + 1)
    }

    /// All cells in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.area()).map(move |i| self.cell_at(i))
    }

    pub fn transpose(&self) -> BoardSpec {
        BoardSpec { rows: self.cols, cols: self.rows, piece: self.piece }
    }

    pub fn empty_set(&self) -> CellSet {
        CellSet::empty(self.rows, self.cols)
    }

    pub fn full_set(&self) -> CellSet {
        let mut set = self.empty_set();
        set.bits.insert_range(..);
        set
    }

    /// Every cell of column `col`.
    pub fn column(&self, col: usize) -> Result<CellSet> {
        self.check(Cell::new(1, col))?;
        let mut set = self.empty_set();
        for row in 1..=self.rows {
            set.bits.insert(self.index(Cell::new(row, col)));
        }
        Ok(set)
    }

    pub fn set_of<I, C>(&self, cells: I) -> Result<CellSet>
    where
        I: IntoIterator<Item = C>,
        C: Into<Cell>,
    {
        let mut set = self.empty_set();
        for cell in cells {
            set.insert(cell.into())?;
        }
        Ok(set)
    }

    fn offset(&self, cell: Cell, dr: isize, dc: isize) -> Option<Cell> {
        let row = cell.row.checked_add_signed(dr)?;
        let col = cell.col.checked_add_signed(dc)?;
        let target = Cell::new(row, col);
        self.contains(target).then_some(target)
    }

    /// Calls `visit` once for every cell attacked from `from`, which must be
    /// in bounds.
    pub(crate) fn for_each_attack(&self, from: Cell, mut visit: impl FnMut(Cell)) {
        match self.piece {
            Piece::Knight => KNIGHT_OFFSETS.iter().filter_map(|&(dr, dc)| self.offset(from, dr, dc)).for_each(visit),
            Piece::King => KING_OFFSETS.iter().filter_map(|&(dr, dc)| self.offset(from, dr, dc)).for_each(visit),
            Piece::Rook | Piece::Bishop | Piece::Queen => {
                let straight = matches!(self.piece, Piece::Rook | Piece::Queen);
                let diagonal = matches!(self.piece, Piece::Bishop | Piece::Queen);
                for &(dr, dc) in &KING_OFFSETS {
                    let is_diagonal = dr != 0 && dc != 0;
                    if (is_diagonal && !diagonal) || (!is_diagonal && !straight) {
                        continue;
                    }
                    let mut at = from;
                    while let Some(next) = self.offset(at, dr, dc) {
                        visit(next);
                        at = next;
                    }
                }
            }
        }
    }

    /// Cells reachable from `from` by one move of the piece.
    pub fn attacks(&self, from: Cell) -> Result<CellSet> {
        self.check(from)?;
        let mut set = self.empty_set();
        self.for_each_attack(from, |c| set.bits.insert(self.index(c)));
        Ok(set)
    }

    /// `attacks(at) ∪ {at}`.
    pub fn closed_neighborhood(&self, at: Cell) -> Result<CellSet> {
        let mut set = self.attacks(at)?;
        set.bits.insert(self.index(at));
        Ok(set)
    }

    /// Union of `attacks(c)` over every member of `cells`.
    pub fn attack_closure(&self, cells: &CellSet) -> Result<CellSet> {
        self.check_set(cells)?;
        let mut out = self.empty_set();
        for from in cells.iter() {
            self.for_each_attack(from, |c| out.bits.insert(self.index(c)));
        }
        Ok(out)
    }

    pub(crate) fn check_set(&self, set: &CellSet) -> Result<()> {
        if set.dims() == (self.rows, self.cols) {
            Ok(())
        } else {
            Err(Error::BoardMismatch { left: (self.rows, self.cols), right: set.dims() })
        }
    }

    /// Symmetries of the board rectangle: the dihedral group of order 8 on
    /// square boards, the Klein four-group otherwise.
    pub fn symmetries(&self) -> &'static [Symmetry] {
        if self.is_square() {
            &Symmetry::ALL
        } else {
            &Symmetry::ALL[..4]
        }
    }
}

/// A rigid motion of the board rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symmetry {
    Identity,
    FlipRows,
    FlipCols,
    Rotate180,
    Transpose,
    AntiTranspose,
    Rotate90,
    Rotate270,
}

impl Symmetry {
    /// The first four elements preserve any rectangle; the rest need a square.
    pub const ALL: [Symmetry; 8] = [
        Symmetry::Identity,
        Symmetry::FlipRows,
        Symmetry::FlipCols,
        Symmetry::Rotate180,
        Symmetry::Transpose,
        Symmetry::AntiTranspose,
        Symmetry::Rotate90,
        Symmetry::Rotate270,
    ];

    pub fn apply(self, spec: &BoardSpec, cell: Cell) -> Cell {
        let (m, n) = (spec.rows, spec.cols);
        let (r, c) = (cell.row, cell.col);
        let (r, c) = match self {
            Symmetry::Identity => (r, c),
            Symmetry::FlipRows => (m + 1 - r, c),
            Symmetry::FlipCols => (r, n + 1 - c),
            Symmetry::Rotate180 => (m + 1 - r, n + 1 - c),
            Symmetry::Transpose => (c, r),
            Symmetry::AntiTranspose => (n + 1 - c, m + 1 - r),
            Symmetry::Rotate90 => (c, m + 1 - r),
            Symmetry::Rotate270 => (n + 1 - c, r),
        };
        Cell::new(r, c)
    }

    pub fn apply_set(self, spec: &BoardSpec, set: &CellSet) -> CellSet {
        let mut out = spec.empty_set();
        for cell in set.iter() {
            out.bits.insert(spec.index(self.apply(spec, cell)));
        }
        out
    }
}

/// Dense bit-per-cell set of cells of one board.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CellSet {
    rows: usize,
    cols: usize,
    bits: FixedBitSet,
}

impl CellSet {
    fn empty(rows: usize, cols: usize) -> Self {
        CellSet { rows, cols, bits: FixedBitSet::with_capacity(rows * cols) }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    fn index(&self, cell: Cell) -> Option<usize> {
        let inside = (1..=self.rows).contains(&cell.row) && (1..=self.cols).contains(&cell.col);
        inside.then(|| (cell.row - 1) * self.cols + (cell.col - 1))
    }

    fn cell_at(&self, index: usize) -> Cell {
        Cell::new(index / self.cols + 1, index % self.cols + 1)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.index(cell).is_some_and(|i| self.bits.contains(i))
    }

    /// Inserts `cell`, returning whether it was newly added.
    pub fn insert(&mut self, cell: Cell) -> Result<bool> {
        let i = self.index(cell).ok_or(Error::CellOutOfRange { cell, rows: self.rows, cols: self.cols })?;
        Ok(!self.bits.put(i))
    }

    pub fn remove(&mut self, cell: Cell) -> bool {
        match self.index(cell) {
            Some(i) if self.bits.contains(i) => {
                self.bits.set(i, false);
                true
            }
            _ => false,
        }
    }

    /// Members in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = Cell> + '_ {
        self.bits.ones().map(|i| self.cell_at(i))
    }

    fn same_board(&self, other: &CellSet) -> Result<()> {
        if self.dims() == other.dims() {
            Ok(())
        } else {
            Err(Error::BoardMismatch { left: self.dims(), right: other.dims() })
        }
    }

    pub fn union(&self, other: &CellSet) -> Result<CellSet> {
        self.same_board(other)?;
        let mut out = self.clone();
        out.bits.union_with(&other.bits);
        Ok(out)
    }

    pub fn intersection(&self, other: &CellSet) -> Result<CellSet> {
        self.same_board(other)?;
        let mut out = self.clone();
        out.bits.intersect_with(&other.bits);
        Ok(out)
    }

    pub fn difference(&self, other: &CellSet) -> Result<CellSet> {
        self.same_board(other)?;
        let mut out = self.clone();
        out.bits.difference_with(&other.bits);
        Ok(out)
    }

    pub fn complement(&self) -> CellSet {
        let mut out = self.clone();
        out.bits.toggle_range(..);
        out
    }

    pub fn is_subset(&self, other: &CellSet) -> Result<bool> {
        self.same_board(other)?;
        Ok(self.bits.is_subset(&other.bits))
    }

    pub fn is_disjoint(&self, other: &CellSet) -> Result<bool> {
        self.same_board(other)?;
        Ok(self.bits.is_disjoint(&other.bits))
    }

    /// The same cells on the transposed board.
    pub fn transpose(&self) -> CellSet {
        let mut out = CellSet::empty(self.cols, self.rows);
        for cell in self.iter() {
            let t = cell.transpose();
            out.bits.insert((t.row - 1) * out.cols + (t.col - 1));
        }
        out
    }

    /// Bit `i` set for the member with row-major index `i`. `None` when the
    /// board has more than 64 cells.
    pub fn to_mask(&self) -> Option<u64> {
        if self.rows * self.cols > 64 {
            return None;
        }
        Some(self.bits.ones().fold(0u64, |acc, i| acc | (1u64 << i)))
    }

    pub fn from_mask(spec: &BoardSpec, mask: u64) -> CellSet {
        let mut out = spec.empty_set();
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            debug_assert!(i < spec.area());
            out.bits.insert(i);
            rest &= rest - 1;
        }
        out
    }

    /// Lexicographic order of the row-major member lists.
    pub fn lex_cmp(&self, other: &CellSet) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl fmt::Debug for CellSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|c| (c.row, c.col))).finish()
    }
}
