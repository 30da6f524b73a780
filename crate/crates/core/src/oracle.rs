//! Exact balanced anticoloring by separator enumeration.
//!
//! In a valid coloring every connected component of the attack graph
//! restricted to colored cells is monochromatic, and any assignment of whole
//! components to black or white is valid. So once the uncolored set `S` is
//! fixed, the best `min(b, w)` is the most even two-way split of the
//! component sizes of `G − S`, a small subset-sum problem.
//!
//! [`solve_balanced`] deepens over `u = |S|`. Every separator of size `u`
//! leaves `m·n − u` colored cells, so `⌊(m·n − u)/2⌋` bounds every value at
//! that level and the search stops as soon as the bound cannot beat the best
//! value already found.
//!
//! Two reductions keep the enumeration small, neither of which changes the
//! value:
//!
//! * symmetry: only separators that are the least image under the board's
//!   symmetry group are evaluated;
//! * dominance: a separator cell with fewer than two colored neighbours can
//!   be colored like its neighbour without lowering the value, so such a
//!   separator is dominated by one of size `u − 1`, which an earlier level
//!   already examined.
//!
//! Boards are limited to 64 cells so that cell sets fit in a `u64`.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::board::{BoardSpec, CellSet};
use crate::coloring::Coloring;
use crate::error::{Error, Result};

/// Largest board the oracle can represent.
pub const MAX_CELLS: usize = 64;

/// Largest board searched without an explicit budget.
pub const UNBUDGETED_CELLS: usize = 36;

/// Largest number of black subsets [`solve_fixed_b`] enumerates without an
/// explicit budget.
pub const UNBUDGETED_SUBSETS: u128 = 50_000_000;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SearchBudget {
    pub max_separator_size: Option<usize>,
    pub max_nodes: Option<u64>,
    pub time_limit: Option<Duration>,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn is_unlimited(&self) -> bool {
        self.max_separator_size.is_none() && self.max_nodes.is_none() && self.time_limit.is_none()
    }

    pub fn with_max_separator_size(mut self, u: usize) -> Self {
        self.max_separator_size = Some(u);
        self
    }

    pub fn with_max_nodes(mut self, nodes: u64) -> Self {
        self.max_nodes = Some(nodes);
        self
    }

    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.time_limit = Some(limit);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    /// Best `min(b, w)` found.
    pub value: usize,
    pub witness: Coloring,
    /// Uncolored cells in the witness.
    pub separator_size: usize,
    /// Separators whose components were computed.
    pub explored: u64,
    /// False when a budget stopped the search before the bound closed.
    pub proven_optimal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedBlackResult {
    pub b: usize,
    pub max_white: usize,
    pub witness: Coloring,
    pub explored: u64,
    pub proven_optimal: bool,
}

/// Configurable front end for both searches.
#[derive(Debug, Clone, Copy)]
pub struct Oracle {
    spec: BoardSpec,
    budget: SearchBudget,
    threads: usize,
    symmetry: bool,
    dominance: bool,
}

pub fn solve_balanced(spec: &BoardSpec, budget: SearchBudget) -> Result<SolveResult> {
    Oracle::new(*spec).budget(budget).solve_balanced()
}

pub fn solve_fixed_b(spec: &BoardSpec, b: usize, budget: SearchBudget) -> Result<FixedBlackResult> {
    Oracle::new(*spec).budget(budget).solve_fixed_b(b)
}

/// The least image of `cells` under the board's symmetry group, in the
/// lexicographic order of row-major member lists.
pub fn canonicalize(spec: &BoardSpec, cells: &CellSet) -> CellSet {
    spec.symmetries()
        .iter()
        .map(|g| g.apply_set(spec, cells))
        .min_by(|a, b| a.lex_cmp(b))
        .expect("identity is always present")
}

/// `a` precedes `b` in the lexicographic order of sorted member lists. Only
/// meaningful for sets of equal size, which is all the search compares.
#[inline]
fn lex_less(a: u64, b: u64) -> bool {
    let diff = a ^ b;
    diff != 0 && a & diff & diff.wrapping_neg() != 0
}

/// Next larger integer with the same number of set bits.
#[inline]
fn next_combination(x: u64) -> u64 {
    let low = x & x.wrapping_neg();
    let ripple = x + low;
    (((ripple ^ x) >> 2) / low) | ripple
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

#[inline]
fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (mask != 0).then(|| {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            i
        })
    })
}

/// The attack graph as neighbour masks, plus the non-identity symmetries as
/// cell permutations.
struct Graph {
    cells: usize,
    adj: Vec<u64>,
    perms: Vec<Vec<u8>>,
}

impl Graph {
    fn new(spec: &BoardSpec, symmetry: bool) -> Self {
        let adj =
            spec.cells().map(|c| spec.attacks(c).expect("in bounds").to_mask().expect("at most 64 cells")).collect();
        let perms = if symmetry {
            spec.symmetries()[1..]
                .iter()
                .map(|g| spec.cells().map(|c| spec.index(g.apply(spec, c)) as u8).collect())
                .collect()
        } else {
            Vec::new()
        };
        Graph { cells: spec.area(), adj, perms }
    }

    fn full(&self) -> u64 {
        if self.cells == 64 {
            u64::MAX
        } else {
            (1u64 << self.cells) - 1
        }
    }

    #[inline]
    fn is_canonical(&self, set: u64) -> bool {
        self.perms.iter().all(|perm| {
            let image = bits(set).fold(0u64, |acc, i| acc | 1u64 << perm[i]);
            !lex_less(image, set)
        })
    }

    #[inline]
    fn closure(&self, set: u64) -> u64 {
        bits(set).fold(0u64, |acc, i| acc | self.adj[i])
    }

    /// Every separator cell touches at least two colored cells.
    #[inline]
    fn undominated(&self, sep: u64) -> bool {
        let free = !sep;
        bits(sep).all(|i| {
            let around = self.adj[i] & free;
            around & around.wrapping_sub(1) != 0
        })
    }

    #[inline]
    fn for_each_component(&self, free: u64, mut visit: impl FnMut(u64)) {
        let mut rest = free;
        while rest != 0 {
            let mut comp = rest & rest.wrapping_neg();
            let mut frontier = comp;
            while frontier != 0 {
                let grown = self.closure(frontier) & rest & !comp;
                comp |= grown;
                frontier = grown;
            }
            rest &= !comp;
            visit(comp);
        }
    }

    /// Best `min(b, w)` over black/white assignments of whole components of
    /// the graph minus `sep`.
    #[inline]
    fn split_value(&self, sep: u64) -> usize {
        let free = self.full() & !sep;
        let total = free.count_ones() as usize;
        let mut reach: u128 = 1;
        self.for_each_component(free, |comp| reach |= reach << comp.count_ones());
        let half = total / 2;
        let window = reach & ((1u128 << (half + 1)) - 1);
        127 - window.leading_zeros() as usize
    }

    /// Black mask of the most even component split; black takes the smaller
    /// side. Components are considered in order of their lowest cell.
    fn split_witness(&self, sep: u64) -> (usize, u64) {
        let free = self.full() & !sep;
        let total = free.count_ones() as usize;
        let mut comps = Vec::new();
        self.for_each_component(free, |c| comps.push(c));
        let mut layers = vec![1u128];
        for c in &comps {
            let prev = *layers.last().expect("non-empty");
            layers.push(prev | prev << c.count_ones());
        }
        let half = total / 2;
        let window = layers[comps.len()] & ((1u128 << (half + 1)) - 1);
        let value = 127 - window.leading_zeros() as usize;
        let mut need = value;
        let mut black = 0u64;
        for (i, c) in comps.iter().enumerate().rev() {
            let size = c.count_ones() as usize;
            if layers[i] >> need & 1 == 1 {
                continue;
            }
            debug_assert!(size <= need && layers[i] >> (need - size) & 1 == 1);
            black |= c;
            need -= size;
        }
        debug_assert_eq!(need, 0);
        (value, black)
    }
}

/// Best separator seen so far in a level: highest value, then least
/// separator in lexicographic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Candidate {
    value: usize,
    sep: u64,
}

fn better(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (Some(x), Some(y)) => {
            if x.value > y.value || (x.value == y.value && lex_less(x.sep, y.sep)) {
                Some(x)
            } else {
                Some(y)
            }
        }
        (x, None) => x,
        (None, y) => y,
    }
}

struct Stop {
    nodes: AtomicU64,
    halted: AtomicBool,
    max_nodes: Option<u64>,
    deadline: Option<Instant>,
}

impl Stop {
    fn new(budget: &SearchBudget) -> Self {
        Stop {
            nodes: AtomicU64::new(0),
            halted: AtomicBool::new(false),
            max_nodes: budget.max_nodes,
            deadline: budget.time_limit.map(|t| Instant::now() + t),
        }
    }

    fn halted(&self) -> bool {
        self.halted.load(Ordering::Relaxed)
    }

    /// Adds `n` explored nodes; returns false once any budget is spent.
    fn charge(&self, n: u64) -> bool {
        let total = self.nodes.fetch_add(n, Ordering::Relaxed) + n;
        let over_nodes = self.max_nodes.is_some_and(|max| total > max);
        let over_time = self.deadline.is_some_and(|d| Instant::now() >= d);
        if over_nodes || over_time {
            self.halted.store(true, Ordering::Relaxed);
        }
        !self.halted()
    }
}

const CHARGE_EVERY: u64 = 1 << 12;

/// All `k`-subsets of bits `0..limit` in increasing numeric order, each
/// combined with `prefix`.
fn for_each_subset(prefix: u64, k: usize, limit: usize, mut visit: impl FnMut(u64) -> bool) {
    if k > limit {
        return;
    }
    if k == 0 {
        visit(prefix);
        return;
    }
    let end = 1u64 << limit;
    let mut x = (1u64 << k) - 1;
    while x < end {
        if !visit(prefix | x) {
            return;
        }
        x = next_combination(x);
    }
}

impl Oracle {
    pub fn new(spec: BoardSpec) -> Self {
        Oracle { spec, budget: SearchBudget::default(), threads: 1, symmetry: true, dominance: true }
    }

    pub fn budget(mut self, budget: SearchBudget) -> Self {
        self.budget = budget;
        self
    }

    /// Worker threads for the separator stream; values do not depend on it.
    pub fn threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    pub fn symmetry_pruning(mut self, on: bool) -> Self {
        self.symmetry = on;
        self
    }

    pub fn dominance_pruning(mut self, on: bool) -> Self {
        self.dominance = on;
        self
    }

    fn guard(&self) -> Result<()> {
        let cells = self.spec.area();
        if cells > MAX_CELLS {
            return Err(Error::BoardTooLarge { cells, limit: MAX_CELLS });
        }
        if cells > UNBUDGETED_CELLS && self.budget.is_unlimited() {
            return Err(Error::BoardTooLarge { cells, limit: UNBUDGETED_CELLS });
        }
        Ok(())
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new().num_threads(self.threads).build().map_err(|e| Error::ThreadPool(e.to_string()))
    }

    /// Maximum `min(b, w)` over all valid colorings.
    pub fn solve_balanced(&self) -> Result<SolveResult> {
        self.guard()?;
        let graph = Graph::new(&self.spec, self.symmetry);
        let stop = Stop::new(&self.budget);
        let pool = self.pool()?;
        let cells = graph.cells;

        let mut best: Option<Candidate> = None;
        let mut proven = false;
        for u in 0..=cells {
            let bound = (cells - u) / 2;
            if best.is_some_and(|b| bound <= b.value) {
                proven = true;
                break;
            }
            if self.budget.max_separator_size.is_some_and(|max| u > max) {
                break;
            }
            let threshold = best.map(|b| b.value);
            let found = pool.install(|| self.search_level(&graph, u, threshold, &stop));
            best = better(best, found);
            if stop.halted() {
                break;
            }
        }

        let sep = best.expect("level 0 always yields a candidate").sep;
        let (value, black) = graph.split_witness(sep);
        let white = graph.full() & !sep & !black;
        let witness =
            Coloring::new(self.spec, CellSet::from_mask(&self.spec, black), CellSet::from_mask(&self.spec, white))?;
        debug_assert!(witness.verify().valid);
        Ok(SolveResult {
            value,
            witness,
            separator_size: sep.count_ones() as usize,
            explored: stop.nodes.load(Ordering::Relaxed),
            proven_optimal: proven,
        })
    }

    /// Best separator of size `u` whose value exceeds `threshold`.
    fn search_level(&self, graph: &Graph, u: usize, threshold: Option<usize>, stop: &Stop) -> Option<Candidate> {
        let cells = graph.cells;
        // Fix the top one or two bits of each separator to split the stream.
        let prefixes: Vec<(u64, usize)> = match u {
            0 => vec![(0, 0)],
            1 => (0..cells).map(|t| (1u64 << t, t)).collect(),
            _ => (1..cells).flat_map(|t1| (0..t1).map(move |t2| ((1u64 << t1) | (1u64 << t2), t2))).collect(),
        };
        let rest = u.saturating_sub(2);

        prefixes
            .into_par_iter()
            .map(|(prefix, limit)| {
                if stop.halted() {
                    return None;
                }
                let mut local: Option<Candidate> = None;
                let mut pending = 0u64;
                for_each_subset(prefix, rest, limit, |sep| {
                    if self.dominance && !graph.undominated(sep) {
                        return true;
                    }
                    if !graph.is_canonical(sep) {
                        return true;
                    }
                    pending += 1;
                    let value = graph.split_value(sep);
                    if threshold.is_none_or(|t| value > t) {
                        local = better(local, Some(Candidate { value, sep }));
                    }
                    if pending == CHARGE_EVERY {
                        pending = 0;
                        return stop.charge(CHARGE_EVERY);
                    }
                    true
                });
                stop.charge(pending);
                local
            })
            .reduce(|| None, better)
    }

    /// Maximum number of whites over all valid colorings with exactly `b`
    /// blacks.
    pub fn solve_fixed_b(&self, b: usize) -> Result<FixedBlackResult> {
        let cells = self.spec.area();
        if cells > MAX_CELLS {
            return Err(Error::BoardTooLarge { cells, limit: MAX_CELLS });
        }
        if b > cells {
            return Err(Error::Precondition(format!("{b} blacks do not fit on {cells} cells")));
        }
        let subsets = binomial(cells, b);
        if subsets > UNBUDGETED_SUBSETS && self.budget.is_unlimited() {
            return Err(Error::SearchTooLarge { subsets, limit: UNBUDGETED_SUBSETS });
        }
        let graph = Graph::new(&self.spec, self.symmetry);
        let stop = Stop::new(&self.budget);
        let full = graph.full();

        let mut best: Option<(usize, u64)> = None;
        let mut pending = 0u64;
        let mut halted = false;
        for_each_subset(0, b, cells, |black| {
            if !graph.is_canonical(black) {
                return true;
            }
            pending += 1;
            let white = (full & !black & !graph.closure(black)).count_ones() as usize;
            if best.is_none_or(|(w, s)| white > w || (white == w && lex_less(black, s))) {
                best = Some((white, black));
            }
            if pending == CHARGE_EVERY {
                pending = 0;
                if !stop.charge(CHARGE_EVERY) {
                    halted = true;
                    return false;
                }
            }
            true
        });
        stop.charge(pending);

        let (max_white, black) = best.expect("at least one subset exists");
        let white = full & !black & !graph.closure(black);
        let witness =
            Coloring::new(self.spec, CellSet::from_mask(&self.spec, black), CellSet::from_mask(&self.spec, white))?;
        debug_assert!(witness.verify().valid);
        Ok(FixedBlackResult {
            b,
            max_white,
            witness,
            explored: stop.nodes.load(Ordering::Relaxed),
            proven_optimal: !halted,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::Piece;

    fn knight(m: usize, n: usize) -> BoardSpec {
        BoardSpec::knight(m, n).unwrap()
    }

    #[test]
    fn gosper_walks_all_combinations_in_order() {
        let mut seen = Vec::new();
        for_each_subset(0, 3, 6, |x| {
            seen.push(x);
            true
        });
        assert_eq!(seen.len(), 20);
        assert!(seen.windows(2).all(|w| w[0] < w[1]));
        assert!(seen.iter().all(|x| x.count_ones() == 3 && *x < 64));
    }

    #[test]
    fn lex_order_on_masks_matches_cell_lists() {
        let spec = knight(3, 3);
        for a in 0u64..512 {
            for b in 0u64..512 {
                if a.count_ones() != b.count_ones() {
                    continue;
                }
                let sa = CellSet::from_mask(&spec, a);
                let sb = CellSet::from_mask(&spec, b);
                assert_eq!(lex_less(a, b), sa.lex_cmp(&sb).is_lt(), "{a:b} {b:b}");
            }
        }
    }

    #[test]
    fn canonical_form_is_orbit_minimum() {
        let spec = knight(3, 3);
        let one = spec.set_of([(1, 2)]).unwrap();
        let canon = canonicalize(&spec, &one);
        assert_eq!(canon, spec.set_of([(1, 2)]).unwrap());
        assert_eq!(canonicalize(&spec, &canon), canon);
        let other = spec.set_of([(3, 2)]).unwrap();
        assert_eq!(canonicalize(&spec, &other), canon);
        let graph = Graph::new(&spec, true);
        assert!(graph.is_canonical(canon.to_mask().unwrap()));
        assert!(!graph.is_canonical(other.to_mask().unwrap()));
    }

    #[test]
    fn edgeless_boards_split_evenly() {
        let r = solve_balanced(&knight(1, 4), SearchBudget::default()).unwrap();
        assert_eq!((r.value, r.separator_size, r.proven_optimal), (2, 0, true));
        let r = solve_balanced(&knight(2, 2), SearchBudget::default()).unwrap();
        assert_eq!(r.value, 2);
        let r = solve_balanced(&knight(1, 1), SearchBudget::default()).unwrap();
        assert_eq!(r.value, 0);
        assert!(r.proven_optimal);
    }

    #[test]
    fn three_by_seven_matches_three_row_formula() {
        let r = solve_balanced(&knight(3, 7), SearchBudget::default()).unwrap();
        assert_eq!(r.value, 8);
        assert!(r.proven_optimal);
        let report = r.witness.verify();
        assert!(report.valid);
        assert_eq!(report.b.min(report.w), 8);
        assert_eq!(report.uncolored, r.separator_size);
    }

    #[test]
    fn fixed_black_extremes() {
        let spec = knight(3, 7);
        assert_eq!(solve_fixed_b(&spec, 0, SearchBudget::default()).unwrap().max_white, 21);
        assert_eq!(solve_fixed_b(&spec, 21, SearchBudget::default()).unwrap().max_white, 0);
        let r = solve_fixed_b(&spec, 8, SearchBudget::default()).unwrap();
        assert_eq!(r.max_white, 8);
        assert!(r.witness.verify().valid);
        assert!(solve_fixed_b(&spec, 22, SearchBudget::default()).is_err());
    }

    #[test]
    fn guards_refuse_large_unbudgeted_searches() {
        assert!(matches!(solve_balanced(&knight(7, 7), SearchBudget::default()), Err(Error::BoardTooLarge { .. })));
        assert!(matches!(
            solve_balanced(&knight(9, 8), SearchBudget::default().with_max_separator_size(1)),
            Err(Error::BoardTooLarge { .. })
        ));
        assert!(matches!(solve_fixed_b(&knight(6, 6), 18, SearchBudget::default()), Err(Error::SearchTooLarge { .. })));
    }

    #[test]
    fn budgets_never_claim_optimality() {
        let r = solve_balanced(&knight(7, 7), SearchBudget::default().with_max_separator_size(2)).unwrap();
        assert!(!r.proven_optimal);
        assert!(r.witness.verify().valid);
        let r = solve_balanced(&knight(5, 5), SearchBudget::default().with_max_nodes(10)).unwrap();
        assert!(!r.proven_optimal);
        assert!(r.witness.verify().valid);
    }

    #[test]
    fn other_pieces_are_accepted() {
        // Rooks on a 3x3 board: a separator must cut every row and column.
        let rook = BoardSpec::new(3, 3, Piece::Rook).unwrap();
        let r = solve_balanced(&rook, SearchBudget::default()).unwrap();
        assert!(r.proven_optimal && r.witness.verify().valid);
        assert_eq!(r.value, 2);
        let king = BoardSpec::new(2, 4, Piece::King).unwrap();
        let r = solve_balanced(&king, SearchBudget::default()).unwrap();
        assert_eq!(r.value, 2);
    }

    #[test]
    fn pruning_changes_work_not_values() {
        for (m, n) in [(3, 3), (3, 4), (4, 4), (2, 5), (4, 5)] {
            let spec = knight(m, n);
            let mut values = Vec::new();
            let mut work = Vec::new();
            for (sym, dom) in [(true, true), (false, true), (true, false), (false, false)] {
                let r = Oracle::new(spec).symmetry_pruning(sym).dominance_pruning(dom).solve_balanced().unwrap();
                assert!(r.proven_optimal && r.witness.verify().valid);
                values.push(r.value);
                work.push(r.explored);
            }
            assert!(values.iter().all(|&v| v == values[0]), "{m}x{n}: {values:?}");
            assert!(work[0] <= work[3], "{m}x{n}: {work:?}");
        }
    }
}
