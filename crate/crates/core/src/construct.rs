//! Explicit optimal placements for `3 ≤ m ≤ n`, `n ≥ 7`.
//!
//! Even `n`: black fills columns `1..=(n-2)/2`, the next two columns stay
//! empty, white fills the rest.
//!
//! Odd `n`, with `K = (n-3)/2`: black fills columns `1..=K` plus the odd rows
//! of column `K+1`; column `K+2` stays empty; white takes the odd rows of
//! column `K+3` and all of columns `K+4..=n`. A knight reaches at most two
//! columns, so the only black-to-white move across the band would be from
//! column `K+1` to `K+3`, which changes the row by one and therefore lands on
//! an even row.

use crate::board::{BoardSpec, Cell, CellSet};
use crate::coloring::{verify, Coloring, VerifyReport};
use crate::error::{Error, Result};
use crate::formula::{phi_knight, PhiResult};

/// A placement together with the value it claims and the verifier's report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub coloring: Coloring,
    pub claimed: PhiResult,
    pub certificate: VerifyReport,
}

pub fn construct(m: usize, n: usize) -> Result<Construction> {
    let claimed = phi_knight(m, n)?;
    let (rows, cols) = (claimed.m, claimed.n);
    if rows < 3 || cols < 7 {
        return Err(Error::OutOfRegime { m: rows, n: cols });
    }
    let spec = BoardSpec::knight(rows, cols)?;
    let mut black = spec.empty_set();
    let mut white = spec.empty_set();
    let fill = |set: &mut CellSet, col: usize, odd_rows_only: bool| {
        for row in (1..=rows).filter(|r| !odd_rows_only || r % 2 == 1) {
            set.insert(Cell::new(row, col)).expect("in bounds");
        }
    };
    if cols % 2 == 0 {
        let k = (cols - 2) / 2;
        (1..=k).for_each(|c| fill(&mut black, c, false));
        (k + 3..=cols).for_each(|c| fill(&mut white, c, false));
    } else {
        let k = (cols - 3) / 2;
        (1..=k).for_each(|c| fill(&mut black, c, false));
        fill(&mut black, k + 1, true);
        fill(&mut white, k + 3, true);
        (k + 4..=cols).for_each(|c| fill(&mut white, c, false));
    }
    let mut coloring = Coloring::new(spec, black, white)?;
    if m > n {
        coloring = coloring.transpose();
    }
    certify(coloring, claimed)
}

/// Re-verifies `c` and checks its counts against `claimed`.
pub fn certify(c: Coloring, claimed: PhiResult) -> Result<Construction> {
    let certificate = verify(&c);
    if let Some((black, white)) = certificate.violation {
        return Err(Error::InvalidPlacement { black, white });
    }
    let checks = [
        ("black", claimed.value, certificate.b),
        ("white", claimed.value, certificate.w),
        ("uncolored", claimed.uncolored_target, certificate.uncolored),
    ];
    for (what, claimed, actual) in checks {
        if claimed != actual {
            return Err(Error::CountMismatch { what, claimed, actual });
        }
    }
    Ok(Construction { coloring: c, claimed, certificate })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_boards() {
        let c = construct(8, 8).unwrap();
        assert_eq!((c.certificate.b, c.certificate.w, c.certificate.uncolored), (24, 24, 16));
        let c = construct(7, 7).unwrap();
        assert_eq!((c.certificate.b, c.certificate.w, c.certificate.uncolored), (18, 18, 13));
    }

    #[test]
    fn three_rows_and_rectangles() {
        let c = construct(3, 8).unwrap();
        assert_eq!((c.certificate.b, c.certificate.w, c.certificate.uncolored), (9, 9, 6));
        let c = construct(3, 9).unwrap();
        assert_eq!(c.certificate.uncolored, 5);
        let c = construct(8, 9).unwrap();
        assert_eq!((c.certificate.b, c.certificate.w, c.certificate.uncolored), (28, 28, 16));
    }

    #[test]
    fn tall_boards_are_transposed_back() {
        let c = construct(9, 8).unwrap();
        assert_eq!((c.coloring.spec().rows(), c.coloring.spec().cols()), (9, 8));
        assert_eq!(c.certificate.b, 28);
        assert_eq!(c.coloring.transpose(), construct(8, 9).unwrap().coloring);
    }

    #[test]
    fn small_boards_are_refused() {
        let err = construct(3, 6).unwrap_err();
        assert!(err.to_string().contains("use oracle for small boards"));
        assert!(construct(2, 9).is_err());
    }

    #[test]
    fn odd_band_layout() {
        let c = construct(7, 9).unwrap();
        let render = c.coloring.render();
        let rows: Vec<&str> = render.lines().collect();
        assert_eq!(rows[0], "BBBB.WWWW");
        assert_eq!(rows[1], "BBB...WWW");
        assert_eq!(rows[6], "BBBB.WWWW");
    }

    #[test]
    fn certify_rejects_tampering() {
        let good = construct(8, 8).unwrap();
        assert_eq!(certify(good.coloring.clone(), good.claimed).unwrap(), good);

        let spec = *good.coloring.spec();
        let black = good.coloring.black().clone();
        let mut white = good.coloring.white().clone();
        white.remove(Cell::new(1, 8));
        white.insert(Cell::new(1, 5)).unwrap();
        let moved = Coloring::new(spec, black, white).unwrap();
        assert!(matches!(certify(moved, good.claimed), Err(Error::InvalidPlacement { .. })));

        let seven = construct(7, 7).unwrap();
        let mut claimed = seven.claimed;
        claimed.value = 19;
        let err = certify(seven.coloring, claimed).unwrap_err();
        assert!(matches!(err, Error::CountMismatch { claimed: 19, actual: 18, .. }), "{err}");
    }
}
