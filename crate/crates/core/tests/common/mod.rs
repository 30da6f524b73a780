#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fmt::Write as _;

use anticolor::board::{BoardSpec, Cell, CellSet};
use anticolor::coloring::{max_white, Coloring};
use anticolor::formula::phi_knight;
use anticolor::transform::{n_lower_bound_check, TransformTrace};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform black set of exactly `size` cells.
pub fn random_black(spec: &BoardSpec, size: usize, rng: &mut impl Rng) -> CellSet {
    let mut set = spec.empty_set();
    for i in sample(rng, spec.area(), size) {
        set.insert(spec.cell_at(i)).unwrap();
    }
    set
}

/// Disjoint black and white sets, each cell black, white or uncolored with
/// roughly equal odds. Usually invalid on larger boards.
pub fn random_coloring(spec: &BoardSpec, rng: &mut impl Rng) -> Coloring {
    let mut black = spec.empty_set();
    let mut white = spec.empty_set();
    for cell in spec.cells() {
        match rng.gen_range(0..3) {
            0 => black.insert(cell).unwrap(),
            1 => white.insert(cell).unwrap(),
            _ => false,
        };
    }
    Coloring::new(*spec, black, white).unwrap()
}

/// A valid coloring: random black set, white a random subset of the
/// cells the black set leaves free.
pub fn random_valid_coloring(spec: &BoardSpec, rng: &mut impl Rng) -> Coloring {
    let size = rng.gen_range(0..=spec.area());
    let black = random_black(spec, size, rng);
    let (_, free) = max_white(spec, &black).unwrap();
    let keep = rng.gen_range(0.0..=1.0);
    let mut white = spec.empty_set();
    for cell in free.iter() {
        if rng.gen_bool(keep) {
            white.insert(cell).unwrap();
        }
    }
    Coloring::new(*spec, black, white).unwrap()
}

pub fn random_board(rng: &mut impl Rng, max_rows: usize, max_cols: usize) -> BoardSpec {
    BoardSpec::knight(rng.gen_range(1..=max_rows), rng.gen_range(1..=max_cols)).unwrap()
}

/// Colored cells grouped into components of the attack graph.
pub fn colored_components(c: &Coloring) -> Vec<Vec<Cell>> {
    let spec = c.spec();
    let colored = c.black().union(c.white()).unwrap();
    let mut seen = spec.empty_set();
    let mut out = Vec::new();
    for start in colored.iter() {
        if seen.contains(start) {
            continue;
        }
        seen.insert(start).unwrap();
        let mut stack = vec![start];
        let mut component = Vec::new();
        while let Some(cell) = stack.pop() {
            component.push(cell);
            for next in spec.attacks(cell).unwrap().iter() {
                if colored.contains(next) && seen.insert(next).unwrap() {
                    stack.push(next);
                }
            }
        }
        out.push(component);
    }
    out
}

/// One sample where a pipeline step raised `N`.
#[derive(Debug, Clone)]
pub struct Increase {
    pub sample: usize,
    pub pass: usize,
    pub step: &'static str,
    pub before: usize,
    pub after: usize,
    pub black_before: CellSet,
    pub black_after: CellSet,
}

#[derive(Debug, Default)]
pub struct LemmaSuite {
    pub rows: usize,
    pub cols: usize,
    pub seed: u64,
    pub samples: usize,
    /// Samples with at least one rise, keyed by step name (first rise per
    /// step per sample).
    pub increases_by_step: BTreeMap<&'static str, usize>,
    pub increases: Vec<Increase>,
    pub bound_failures: Vec<(usize, usize, usize)>,
    pub unconverged: usize,
    pub without_full_column: usize,
}

impl LemmaSuite {
    /// Sample `i` uses the seed `seed + i`, so any sample can be replayed on
    /// its own.
    pub fn run(rows: usize, cols: usize, samples: usize, seed: u64) -> Self {
        let spec = BoardSpec::knight(rows, cols).unwrap();
        let phi = phi_knight(rows, cols).unwrap().value;
        let mut suite = LemmaSuite { rows, cols, seed, samples, ..Default::default() };
        for i in 0..samples {
            let black = random_black(&spec, phi, &mut rng(seed.wrapping_add(i as u64)));
            let check = n_lower_bound_check(&spec, &black).unwrap();
            if !check.holds {
                suite.bound_failures.push((i, check.normalized_n, check.bound));
            }
            if !check.trace.converged {
                suite.unconverged += 1;
            }
            let last = &check.trace.steps.last().unwrap().black;
            if !(1..=cols).any(|k| spec.column(k).unwrap().is_subset(last).unwrap()) {
                suite.without_full_column += 1;
            }
            suite.record(i, &check.trace);
        }
        suite
    }

    fn record(&mut self, sample: usize, trace: &TransformTrace) {
        let mut counted = Vec::new();
        for w in trace.steps.windows(2) {
            if w[1].n > w[0].n {
                if !counted.contains(&w[1].name) {
                    counted.push(w[1].name);
                    *self.increases_by_step.entry(w[1].name).or_default() += 1;
                }
                self.increases.push(Increase {
                    sample,
                    pass: w[1].pass,
                    step: w[1].name,
                    before: w[0].n,
                    after: w[1].n,
                    black_before: w[0].black.clone(),
                    black_after: w[1].black.clone(),
                });
            }
        }
    }

    pub fn monotone(&self) -> bool {
        self.increases.is_empty()
    }

    pub fn summary(&self) -> String {
        let steps: Vec<String> = self.increases_by_step.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!(
            "{}x{}: {} samples, {} rises ({}), {} bound failures",
            self.rows,
            self.cols,
            self.samples,
            self.increases.len(),
            if steps.is_empty() { "none".to_string() } else { steps.join(" ") },
            self.bound_failures.len()
        )
    }

    /// Line-oriented dump of every counterexample.
    pub fn artifact(&self) -> String {
        let mut out = String::new();
        let cells = |s: &CellSet| s.iter().map(|c| format!("{},{}", c.row, c.col)).collect::<Vec<_>>().join(" ");
        writeln!(out, "board {}x{} knight", self.rows, self.cols).unwrap();
        writeln!(out, "seed {} (sample i uses seed + i)", self.seed).unwrap();
        writeln!(out, "samples {}", self.samples).unwrap();
        writeln!(out, "{}", self.summary()).unwrap();
        for (sample, got, bound) in &self.bound_failures {
            writeln!(out, "bound sample={sample} normalized_n={got} bound={bound}").unwrap();
        }
        for inc in &self.increases {
            writeln!(
                out,
                "rise sample={} pass={} step={} n={}->{}\n  before: {}\n  after:  {}",
                inc.sample,
                inc.pass,
                inc.step,
                inc.before,
                inc.after,
                cells(&inc.black_before),
                cells(&inc.black_after)
            )
            .unwrap();
        }
        out
    }
}

/// Boards `7 ≤ m ≤ n ≤ 10`.
pub fn lemma_boards() -> impl Iterator<Item = BoardSpec> {
    (7..=10).flat_map(|m| (m..=10).map(move |n| BoardSpec::knight(m, n).unwrap()))
}

fn next_two_columns(spec: &BoardSpec, k: usize) -> CellSet {
    spec.column(k + 1).unwrap().union(&spec.column(k + 2).unwrap()).unwrap()
}

/// Every full column `k ≤ n − 2` must force all of columns `k + 1` and
/// `k + 2`. Returns the failing `(m, n, k)`.
pub fn full_column_failures() -> Vec<(usize, usize, usize)> {
    let mut failures = Vec::new();
    for spec in lemma_boards() {
        for k in 1..=spec.cols() - 2 {
            let forced = anticolor::coloring::forced_uncolored(&spec, &spec.column(k).unwrap()).unwrap();
            if !next_two_columns(&spec, k).is_subset(&forced).unwrap() {
                failures.push((spec.rows(), spec.cols(), k));
            }
        }
    }
    failures
}

/// Every column with one or two holes must force at least `2m − 4` cells of
/// columns `k + 1` and `k + 2`. Returns the number of configurations checked
/// and the failing `(m, n, k, holes)`.
/// `(m, n, k, hole rows)`.
pub type HoleCase = (usize, usize, usize, Vec<usize>);

pub fn almost_full_failures() -> (usize, Vec<HoleCase>) {
    let mut checked = 0;
    let mut failures = Vec::new();
    for spec in lemma_boards() {
        let m = spec.rows();
        let mut hole_sets: Vec<Vec<usize>> = (1..=m).map(|r| vec![r]).collect();
        hole_sets.extend((1..=m).flat_map(|a| (a + 1..=m).map(move |b| vec![a, b])));
        for k in 1..=spec.cols() - 2 {
            let target = next_two_columns(&spec, k);
            for holes in &hole_sets {
                let mut black = spec.column(k).unwrap();
                for &r in holes {
                    black.remove(Cell::new(r, k));
                }
                let forced = anticolor::coloring::forced_uncolored(&spec, &black).unwrap();
                checked += 1;
                if forced.intersection(&target).unwrap().len() < 2 * m - 4 {
                    failures.push((m, spec.cols(), k, holes.clone()));
                }
            }
        }
    }
    (checked, failures)
}
