//! Closed-form values for balanced knight anticoloring.
//!
//! For `3 ≤ m ≤ n` with `n ≥ 7`:
//!
//! ```text
//! φ(m, n) = m(n-2)/2              n even
//! φ(m, n) = m(n-3)/2 + ⌈m/2⌉      n odd
//! ```
//!
//! One-row boards give `⌊n/2⌋`, two-row boards give `n`, and boards with
//! both sides at most 6 come from a table computed by exhaustive search
//! (see [`crate::oracle`]).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};

const SMALL_TABLE_TEXT: &str = include_str!("../data/small_phi.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    EvenN,
    OddN,
    Row1,
    Row2,
    SmallTable,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::EvenN => "even_n",
            Regime::OddN => "odd_n",
            Regime::Row1 => "row1",
            Regime::Row2 => "row2",
            Regime::SmallTable => "small_table",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PhiResult {
    /// The balanced optimum, `b = w = φ`.
    pub value: usize,
    /// Cells left uncolored by a balanced optimum, `m·n − 2φ`.
    pub uncolored_target: usize,
    pub regime: Regime,
    /// Shorter side.
    pub m: usize,
    /// Longer side.
    pub n: usize,
    /// False for `m ∈ {4, 5, 6}` with `n ≥ 7`: the closed form is applied
    /// there but is only claimed, not proven, for those row counts.
    pub proven_regime: bool,
}

fn normalize(m: usize, n: usize) -> Result<(usize, usize)> {
    if m == 0 || n == 0 {
        return Err(Error::EmptyBoard { rows: m, cols: n });
    }
    Ok((m.min(n), m.max(n)))
}

fn exact_half(x: usize) -> usize {
    assert!(x.is_multiple_of(2), "{x} is not even");
    x / 2
}

/// `φ_knight(m, n)`; the arguments may come in either order.
pub fn phi_knight(m: usize, n: usize) -> Result<PhiResult> {
    let (m, n) = normalize(m, n)?;
    let (value, regime) = match (m, n) {
        (1, _) => (n / 2, Regime::Row1),
        (2, _) => (n, Regime::Row2),
        (_, n) if n >= 7 && n % 2 == 0 => (m * exact_half(n - 2), Regime::EvenN),
        (_, n) if n >= 7 => (m * exact_half(n - 3) + m.div_ceil(2), Regime::OddN),
        _ => {
            let value = SmallCaseTable::builtin().get(m, n).ok_or(Error::NotTabulated { m, n })?;
            (value, Regime::SmallTable)
        }
    };
    let proven_regime = !(matches!(regime, Regime::EvenN | Regime::OddN) && (4..=6).contains(&m));
    Ok(PhiResult { value, uncolored_target: m * n - 2 * value, regime, m, n, proven_regime })
}

/// The earlier square-board conjecture, evaluated as written (it is wrong for
/// odd `n`). Signed because it goes negative at `n = 1`.
pub fn conjecture_value(n: usize) -> i64 {
    let n = n as i64;
    if n % 2 == 0 {
        n * (n - 2) / 2
    } else {
        n * (n - 3) / 2 + (n - 1) / 2
    }
}

fn construction_regime(m: usize, n: usize) -> Result<(usize, usize)> {
    let (m, n) = normalize(m, n)?;
    if m < 3 || n < 7 {
        return Err(Error::OutOfRegime { m, n });
    }
    Ok((m, n))
}

/// Uncolored cells of the minimum construction: `2m − 1` when both sides are
/// odd, `2m` otherwise.
pub fn uncolored_target(m: usize, n: usize) -> Result<usize> {
    let (m, n) = construction_regime(m, n)?;
    Ok(if m % 2 == 1 && n % 2 == 1 { 2 * m - 1 } else { 2 * m })
}

/// Whites left once `b` blacks sit in the minimum-uncolored layout:
/// `m·n − b − uncolored_target`.
pub fn w_opt(m: usize, n: usize, b: usize) -> Result<i64> {
    let target = uncolored_target(m, n)?;
    Ok((m * n) as i64 - b as i64 - target as i64)
}

/// Exact `φ` values for boards with both sides at most 6, keyed `m ≤ n`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SmallCaseTable {
    entries: BTreeMap<(usize, usize), usize>,
}

impl SmallCaseTable {
    pub fn builtin() -> &'static SmallCaseTable {
        static TABLE: OnceLock<SmallCaseTable> = OnceLock::new();
        TABLE.get_or_init(|| SmallCaseTable::parse(SMALL_TABLE_TEXT).expect("bundled table is well formed"))
    }

    /// Parses `m n phi` lines. Blank lines and `#` comments are skipped; keys
    /// must satisfy `m ≤ n` and appear in strictly increasing order.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        let mut last: Option<(usize, usize)> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |reason: String| Error::Table { line: i + 1, reason };
            let fields: Vec<usize> = line
                .split_whitespace()
                .map(|f| f.parse().map_err(|_| err(format!("`{f}` is not a count"))))
                .collect::<Result<_>>()?;
            let [m, n, phi] = fields[..] else {
                return Err(err(format!("expected 3 fields, found {}", fields.len())));
            };
            if m == 0 || m > n {
                return Err(err(format!("key ({m}, {n}) must satisfy 1 <= m <= n")));
            }
            if 2 * phi > m * n {
                return Err(err(format!("phi {phi} exceeds half of {m}x{n}")));
            }
            if last.is_some_and(|prev| prev >= (m, n)) {
                return Err(err(format!("key ({m}, {n}) out of order")));
            }
            last = Some((m, n));
            entries.insert((m, n), phi);
        }
        Ok(SmallCaseTable { entries })
    }

    pub fn get(&self, m: usize, n: usize) -> Option<usize> {
        self.entries.get(&(m.min(n), m.max(n))).copied()
    }

    pub fn insert(&mut self, m: usize, n: usize, phi: usize) {
        self.entries.insert((m.min(n), m.max(n)), phi);
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.entries.iter().map(|(&(m, n), &phi)| (m, n, phi))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_text(&self) -> String {
        self.iter().map(|(m, n, phi)| format!("{m} {n} {phi}\n")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_values() {
        assert_eq!(phi_knight(8, 8).unwrap().value, 24);
        assert_eq!(phi_knight(7, 7).unwrap().value, 18);
        assert_eq!(phi_knight(7, 8).unwrap().value, 21);
        assert_eq!(phi_knight(8, 9).unwrap().value, 28);
        let r = phi_knight(7, 7).unwrap();
        assert_eq!((r.regime, r.uncolored_target), (Regime::OddN, 13));
    }

    #[test]
    fn three_row_values() {
        assert_eq!(phi_knight(3, 7).unwrap().value, 8);
        assert_eq!(phi_knight(3, 8).unwrap().value, 9);
        assert_eq!(phi_knight(3, 9).unwrap().value, 11);
        assert!(phi_knight(3, 9).unwrap().proven_regime);
        assert!(!phi_knight(5, 9).unwrap().proven_regime);
    }

    #[test]
    fn one_and_two_rows() {
        assert_eq!(
            phi_knight(1, 9).unwrap(),
            PhiResult { value: 4, uncolored_target: 1, regime: Regime::Row1, m: 1, n: 9, proven_regime: true }
        );
        assert_eq!(phi_knight(2, 5).unwrap().value, 5);
        assert_eq!(phi_knight(6, 2).unwrap().value, 6);
        assert_eq!(phi_knight(2, 6).unwrap().regime, Regime::Row2);
    }

    #[test]
    fn small_boards_come_from_the_table() {
        let r = phi_knight(5, 5).unwrap();
        assert_eq!(r.regime, Regime::SmallTable);
        assert!(r.value >= 10);
        assert_eq!(phi_knight(4, 4).unwrap().regime, Regime::SmallTable);
        let missing = SmallCaseTable::default();
        assert_eq!(missing.get(4, 4), None);
    }

    #[test]
    fn inputs_are_normalized() {
        assert_eq!(phi_knight(9, 3).unwrap(), phi_knight(3, 9).unwrap());
        assert!(phi_knight(0, 4).is_err());
    }

    #[test]
    fn conjecture_as_written() {
        assert_eq!(conjecture_value(8), 24);
        assert_eq!(conjecture_value(5), 7);
        assert_eq!(conjecture_value(7), 17);
        assert_eq!(conjecture_value(1), -1);
    }

    #[test]
    fn uncolored_targets() {
        assert_eq!(uncolored_target(8, 8).unwrap(), 16);
        assert_eq!(uncolored_target(7, 8).unwrap(), 14);
        assert_eq!(uncolored_target(8, 7).unwrap(), 14);
        assert_eq!(uncolored_target(8, 9).unwrap(), 16);
        assert_eq!(uncolored_target(7, 7).unwrap(), 13);
        assert!(matches!(uncolored_target(3, 6), Err(Error::OutOfRegime { .. })));
        assert!(matches!(uncolored_target(2, 9), Err(Error::OutOfRegime { .. })));
    }

    #[test]
    fn white_optimum() {
        assert_eq!(w_opt(8, 8, 24).unwrap(), 24);
        assert_eq!(w_opt(7, 7, 18).unwrap(), 18);
        assert_eq!(w_opt(8, 8, 25).unwrap(), 23);
    }

    #[test]
    fn table_parser_validates() {
        let t = SmallCaseTable::parse("# m n phi\n1 1 0\n1 2 1\n\n2 2 2\n").unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.get(2, 1), Some(1));
        assert_eq!(SmallCaseTable::parse(&t.to_text()).unwrap(), t);
        assert!(SmallCaseTable::parse("1 2 1\n1 1 0\n").is_err());
        assert!(SmallCaseTable::parse("1 2 1\n1 2 1\n").is_err());
        assert!(SmallCaseTable::parse("3 2 1\n").is_err());
        assert!(SmallCaseTable::parse("2 2\n").is_err());
        assert!(SmallCaseTable::parse("2 2 x\n").is_err());
        assert!(SmallCaseTable::parse("2 2 3\n").is_err());
    }

    #[test]
    fn bundled_table_covers_every_small_board() {
        let table = SmallCaseTable::builtin();
        for m in 1..=6 {
            for n in m..=6 {
                assert!(table.get(m, n).is_some(), "{m}x{n}");
            }
        }
    }
}
