//! Colorings, the anticoloring validity check, and the set of cells a black
//! set forces to stay uncolored.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::board::{BoardSpec, Cell, CellSet, Piece};
use crate::error::{Error, Result};

/// Disjoint black and white sets on one board. Every other cell is
/// uncolored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    spec: BoardSpec,
    black: CellSet,
    white: CellSet,
}

impl Coloring {
    pub fn new(spec: BoardSpec, black: CellSet, white: CellSet) -> Result<Self> {
        spec.check_set(&black)?;
        spec.check_set(&white)?;
        if let Some(cell) = black.intersection(&white)?.iter().next() {
            return Err(Error::Overlap(cell));
        }
        Ok(Coloring { spec, black, white })
    }

    pub fn uncolored_board(spec: BoardSpec) -> Self {
        Coloring { spec, black: spec.empty_set(), white: spec.empty_set() }
    }

    pub fn spec(&self) -> &BoardSpec {
        &self.spec
    }

    pub fn black(&self) -> &CellSet {
        &self.black
    }

    pub fn white(&self) -> &CellSet {
        &self.white
    }

    pub fn uncolored(&self) -> CellSet {
        let mut colored = self.black.clone();
        for c in self.white.iter() {
            colored.insert(c).expect("same board");
        }
        colored.complement()
    }

    pub fn transpose(&self) -> Coloring {
        Coloring { spec: self.spec.transpose(), black: self.black.transpose(), white: self.white.transpose() }
    }

    /// Swaps the two color classes.
    pub fn swap_colors(&self) -> Coloring {
        Coloring { spec: self.spec, black: self.white.clone(), white: self.black.clone() }
    }

    pub fn verify(&self) -> VerifyReport {
        verify(self)
    }

    /// ASCII picture: `B`, `W` or `.` per cell, row 1 on top, column 1 on the
    /// left, one line per row.
    pub fn render(&self) -> String {
        let mut out = String::with_capacity(self.spec.area() + self.spec.rows());
        for cell in self.spec.cells() {
            out.push(if self.black.contains(cell) {
                'B'
            } else if self.white.contains(cell) {
                'W'
            } else {
                '.'
            });
            if cell.col == self.spec.cols() {
                out.push('\n');
            }
        }
        out
    }

    pub fn to_placement(&self) -> Placement {
        Placement {
            rows: self.spec.rows(),
            cols: self.spec.cols(),
            piece: self.spec.piece(),
            black: self.black.iter().collect(),
            white: self.white.iter().collect(),
        }
    }

    /// Canonical placement-file text (pretty JSON, newline-terminated).
    pub fn to_placement_string(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.to_placement()).expect("placement serializes");
        text.push('\n');
        text
    }

    pub fn from_placement_str(text: &str) -> Result<Self> {
        let placement: Placement = serde_json::from_str(text).map_err(|e| Error::Placement(e.to_string()))?;
        placement.into_coloring()
    }
}

/// Outcome of [`verify`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub valid: bool,
    pub b: usize,
    pub w: usize,
    pub uncolored: usize,
    /// First offending `(black, white)` pair in lexicographic order.
    pub violation: Option<(Cell, Cell)>,
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "valid={} b={} w={} uncolored={}", self.valid, self.b, self.w, self.uncolored)?;
        if let Some((black, white)) = self.violation {
            write!(f, " violation: black {black} attacks white {white}")?;
        }
        Ok(())
    }
}

/// A coloring is valid when no black cell attacks a white cell.
pub fn verify(c: &Coloring) -> VerifyReport {
    let spec = &c.spec;
    let b = c.black.len();
    let w = c.white.len();
    let mut violation = None;
    // Black cells come out in row-major order; the first black with an
    // attacked white gives the least pair once its whites are minimized.
    for black in c.black.iter() {
        let mut first_white: Option<Cell> = None;
        spec.for_each_attack(black, |target| {
            if c.white.contains(target) && first_white.is_none_or(|w| target < w) {
                first_white = Some(target);
            }
        });
        if let Some(white) = first_white {
            violation = Some((black, white));
            break;
        }
    }
    VerifyReport { valid: violation.is_none(), b, w, uncolored: spec.area() - b - w, violation }
}

/// Cells attacked by `black` that are not themselves black. Its size is the
/// quantity `N(C)` for any coloring with this black set.
pub fn forced_uncolored(spec: &BoardSpec, black: &CellSet) -> Result<CellSet> {
    spec.attack_closure(black)?.difference(black)
}

/// The largest white set compatible with `black`. White cells may attack
/// each other, so the maximum is unique: everything neither black nor
/// attacked by black.
pub fn max_white(spec: &BoardSpec, black: &CellSet) -> Result<(usize, CellSet)> {
    let blocked = spec.attack_closure(black)?.union(black)?;
    let white = blocked.complement();
    Ok((white.len(), white))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ColumnFlags {
    pub empty: bool,
    pub compact: bool,
    pub almost_full: bool,
    pub full: bool,
}

/// Per-column black counts `b_k` and the column classifications the
/// normalization arguments use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnProfile {
    pub counts: Vec<usize>,
    pub flags: Vec<ColumnFlags>,
}

impl ColumnProfile {
    pub fn of_black(spec: &BoardSpec, black: &CellSet) -> Self {
        let m = spec.rows();
        let mut counts = vec![0; spec.cols()];
        let mut deepest = vec![0; spec.cols()];
        for cell in black.iter() {
            counts[cell.col - 1] += 1;
            deepest[cell.col - 1] = deepest[cell.col - 1].max(cell.row);
        }
        let flags = counts
            .iter()
            .zip(&deepest)
            .map(|(&b, &low)| ColumnFlags {
                empty: b == 0,
                // Blacks fill rows 1..=b exactly when the lowest one sits on row b.
                compact: b > 0 && low == b,
                almost_full: b > 0 && b < m && b + 2 >= m,
                full: b == m,
            })
            .collect();
        ColumnProfile { counts, flags }
    }

    /// 1-indexed count accessor.
    pub fn count(&self, col: usize) -> usize {
        self.counts[col - 1]
    }

    pub fn flag(&self, col: usize) -> ColumnFlags {
        self.flags[col - 1]
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

pub fn column_profile(c: &Coloring) -> ColumnProfile {
    ColumnProfile::of_black(&c.spec, &c.black)
}

/// On-disk form of a coloring: 1-indexed `[row, col]` lists, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Placement {
    pub rows: usize,
    pub cols: usize,
    pub piece: Piece,
    pub black: Vec<Cell>,
    pub white: Vec<Cell>,
}

impl Placement {
    pub fn into_coloring(self) -> Result<Coloring> {
        let spec = BoardSpec::new(self.rows, self.cols, self.piece)?;
        let mut black = spec.empty_set();
        for cell in self.black {
            if !black.insert(cell)? {
                return Err(Error::DuplicateCell(cell));
            }
        }
        let mut white = spec.empty_set();
        for cell in self.white {
            if !white.insert(cell)? {
                return Err(Error::DuplicateCell(cell));
            }
        }
        Coloring::new(spec, black, white)
    }
}
