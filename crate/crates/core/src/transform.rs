//! Rearrangements of a black set that are claimed never to increase the
//! number of forced-uncolored cells `N`, and the pipeline that chains them
//! into the block shape used by the lower-bound argument.
//!
//! Every operation is total and preserves `|black|`; preconditions such as
//! "input is compact" are established internally rather than rejected.
//! Whether `N` really stays non-increasing is measured, not assumed: see
//! [`TransformTrace::is_monotone`].
//!
//! Row versions of each operation are obtained with [`by_rows`], which
//! transposes the board, applies the column operation and transposes back.

use std::fmt::Write as _;

use crate::board::{BoardSpec, Cell, CellSet};
use crate::coloring::{forced_uncolored, ColumnProfile};
use crate::error::{Error, Result};
use crate::formula::{phi_knight, uncolored_target};

/// `N`: number of cells the black set forces to stay uncolored.
pub fn forced_count(spec: &BoardSpec, black: &CellSet) -> Result<usize> {
    Ok(forced_uncolored(spec, black)?.len())
}

/// Rebuilds a black set with `counts[k]` blacks in rows `1..=counts[k]` of
/// column `k + 1`.
fn compact_layout(spec: &BoardSpec, counts: &[usize]) -> CellSet {
    let mut out = spec.empty_set();
    for (k, &count) in counts.iter().enumerate() {
        for row in 1..=count {
            out.insert(Cell::new(row, k + 1)).expect("in bounds");
        }
    }
    out
}

/// Moves one black from outside the full and almost-full columns into the
/// first hole (lowest row number) of the leftmost almost-full column. The
/// moved black is the one in the rightmost such column, bottom-most first.
/// Identity when there is no almost-full column or no black to move.
pub fn fill_almost_full(spec: &BoardSpec, black: &CellSet) -> Result<CellSet> {
    spec.check_set(black)?;
    let profile = ColumnProfile::of_black(spec, black);
    let Some(target_col) = (1..=spec.cols()).find(|&k| profile.flag(k).almost_full) else {
        return Ok(black.clone());
    };
    let mover = black
        .iter()
        .filter(|c| {
            let f = profile.flag(c.col);
            !f.full && !f.almost_full
        })
        .max_by_key(|c| (c.col, c.row));
    let Some(mover) = mover else {
        return Ok(black.clone());
    };
    let hole = (1..=spec.rows())
        .map(|row| Cell::new(row, target_col))
        .find(|c| !black.contains(*c))
        .expect("almost-full columns have a hole");
    let mut out = black.clone();
    out.remove(mover);
    out.insert(hole)?;
    Ok(out)
}

/// Pushes every column's blacks up to rows `1..=b_k`.
pub fn compact_columns(spec: &BoardSpec, black: &CellSet) -> Result<CellSet> {
    spec.check_set(black)?;
    let profile = ColumnProfile::of_black(spec, black);
    Ok(compact_layout(spec, &profile.counts))
}

/// Compacts, then orders columns by decreasing count, flush left.
pub fn sort_columns(spec: &BoardSpec, black: &CellSet) -> Result<CellSet> {
    spec.check_set(black)?;
    let mut counts = ColumnProfile::of_black(spec, black).counts;
    counts.sort_unstable_by(|a, b| b.cmp(a));
    Ok(compact_layout(spec, &counts))
}

/// Redistributes the blacks into columns of height `h = max b_k`: columns
/// `1..=b/h` get `h`, the next gets `b mod h`.
pub fn fill_columns(spec: &BoardSpec, black: &CellSet) -> Result<CellSet> {
    spec.check_set(black)?;
    let profile = ColumnProfile::of_black(spec, black);
    let height = profile.counts.iter().copied().max().unwrap_or(0);
    Ok(compact_layout(spec, &stacked_counts(spec, profile.total(), height)))
}

fn stacked_counts(spec: &BoardSpec, total: usize, height: usize) -> Vec<usize> {
    let mut counts = vec![0; spec.cols()];
    if height == 0 {
        return counts;
    }
    let mut left = total;
    for slot in counts.iter_mut() {
        *slot = left.min(height);
        left -= *slot;
    }
    debug_assert_eq!(left, 0);
    counts
}

/// Fills columns to full height `m` when no column is full yet and there are
/// at least `m` blacks; identity otherwise.
pub fn complete_column(spec: &BoardSpec, black: &CellSet) -> Result<CellSet> {
    spec.check_set(black)?;
    let profile = ColumnProfile::of_black(spec, black);
    if profile.flags.iter().any(|f| f.full) || profile.total() < spec.rows() {
        return Ok(black.clone());
    }
    Ok(compact_layout(spec, &stacked_counts(spec, profile.total(), spec.rows())))
}

/// Slides the non-empty columns, unchanged and in their original order,
/// into columns `1, 2, …`; empty columns end up in one trailing block.
pub fn gather_blocks(spec: &BoardSpec, black: &CellSet) -> Result<CellSet> {
    spec.check_set(black)?;
    let profile = ColumnProfile::of_black(spec, black);
    let mut target = 0usize;
    let mut shift = vec![0usize; spec.cols() + 1];
    for (k, slot) in shift.iter_mut().enumerate().skip(1) {
        if !profile.flag(k).empty {
            target += 1;
            *slot = target;
        }
    }
    let mut out = spec.empty_set();
    for c in black.iter() {
        out.insert(Cell::new(c.row, shift[c.col]))?;
    }
    Ok(out)
}

/// Applies a column operation to rows by transposition.
pub fn by_rows(
    spec: &BoardSpec,
    black: &CellSet,
    op: impl Fn(&BoardSpec, &CellSet) -> Result<CellSet>,
) -> Result<CellSet> {
    spec.check_set(black)?;
    Ok(op(&spec.transpose(), &black.transpose())?.transpose())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    /// 0 for the input, then the pipeline pass the step belongs to.
    pub pass: usize,
    pub name: &'static str,
    pub black: CellSet,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformTrace {
    pub steps: Vec<TraceStep>,
    /// Number of pipeline passes run, including the final unchanged one.
    pub passes: usize,
    /// False when the pass limit was hit before a fixpoint.
    pub converged: bool,
}

impl TransformTrace {
    pub fn is_monotone(&self) -> bool {
        self.steps.windows(2).all(|w| w[1].n <= w[0].n)
    }

    /// First step whose `N` exceeds the step before it.
    pub fn first_increase(&self) -> Option<(&TraceStep, &TraceStep)> {
        self.steps.windows(2).find(|w| w[1].n > w[0].n).map(|w| (&w[0], &w[1]))
    }

    pub fn final_n(&self) -> usize {
        self.steps.last().map_or(0, |s| s.n)
    }

    /// One `pass step N` line per step.
    pub fn to_report(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            writeln!(out, "{} {} {}", s.pass, s.name, s.n).expect("write to string");
        }
        out
    }
}

/// Signature shared by the column operations.
pub type Step = fn(&BoardSpec, &CellSet) -> Result<CellSet>;

const PIPELINE: [(&str, Step); 5] = [
    ("compact_columns", compact_columns),
    ("gather_blocks", gather_blocks),
    ("sort_columns", sort_columns),
    ("fill_columns", fill_columns),
    ("complete_column", complete_column),
];

/// Runs the rearrangements to a fixpoint: repeated `fill_almost_full`, then
/// compact, gather, sort, fill and complete. Each pass records every step.
pub fn normalize(spec: &BoardSpec, black: &CellSet) -> Result<(CellSet, TransformTrace)> {
    spec.check_set(black)?;
    let max_passes = 2 * spec.cols() + 4;
    let mut current = black.clone();
    let mut steps =
        vec![TraceStep { pass: 0, name: "input", black: current.clone(), n: forced_count(spec, &current)? }];
    let mut converged = false;
    let mut passes = 0;
    while passes < max_passes {
        passes += 1;
        let start = current.clone();

        loop {
            let next = fill_almost_full(spec, &current)?;
            if next == current {
                break;
            }
            current = next;
        }
        steps.push(TraceStep {
            pass: passes,
            name: "fill_almost_full",
            black: current.clone(),
            n: forced_count(spec, &current)?,
        });

        for (name, op) in PIPELINE {
            current = op(spec, &current)?;
            steps.push(TraceStep { pass: passes, name, black: current.clone(), n: forced_count(spec, &current)? });
        }
        if current == start {
            converged = true;
            break;
        }
    }
    debug_assert!(steps.iter().all(|s| s.black.len() == black.len()));
    Ok((current, TransformTrace { steps, passes, converged }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerBoundCheck {
    pub holds: bool,
    /// `2m − 1` when both sides are odd, `2m` otherwise.
    pub bound: usize,
    pub input_n: usize,
    pub normalized_n: usize,
    pub trace: TransformTrace,
}

/// Checks `N(normalize(black)) ≥ 2m` (`2m − 1` on odd×odd boards) for a black
/// set of size `φ(m, n)` on a board with both sides at least 7.
pub fn n_lower_bound_check(spec: &BoardSpec, black: &CellSet) -> Result<LowerBoundCheck> {
    spec.check_set(black)?;
    let (m, n) = (spec.rows(), spec.cols());
    if m.min(n) < 7 {
        return Err(Error::Precondition(format!("both sides must be at least 7, got {m}x{n}")));
    }
    let phi = phi_knight(m, n)?.value;
    if black.len() != phi {
        return Err(Error::Precondition(format!("expected {phi} blacks on {m}x{n}, got {}", black.len())));
    }
    let bound = uncolored_target(m, n)?;
    let input_n = forced_count(spec, black)?;
    let (_, trace) = normalize(spec, black)?;
    let normalized_n = trace.final_n();
    Ok(LowerBoundCheck { holds: normalized_n >= bound, bound, input_n, normalized_n, trace })
}
