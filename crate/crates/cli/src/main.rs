//! `anticolor`: balanced black-and-white anticolorings of chessboards from the
//! command line.
//!
//! Exit codes: 0 success, 1 `verify` found an invalid placement, 2 bad
//! input or an out-of-regime request, 3 internal error (a self-produced
//! placement failed verification).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anticolor::board::{BoardSpec, Piece};
use anticolor::coloring::{max_white, Coloring, Placement, VerifyReport};
use anticolor::construct::construct;
use anticolor::formula::phi_knight;
use anticolor::ipexport::{build_ip, write_lp};
use anticolor::oracle::{Oracle, SearchBudget};
use anticolor::transform::normalize;
use anticolor::Error;
use clap::{Parser, Subcommand};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "anticolor", version, about = "Balanced black-and-white anticolorings of chessboards")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Board {
    /// Rows.
    #[arg(long)]
    m: usize,
    /// Columns.
    #[arg(long)]
    n: usize,
}

#[derive(clap::Args)]
struct Search {
    #[arg(long, default_value = "knight")]
    piece: Piece,
    /// Largest uncolored set to try.
    #[arg(long)]
    max_sep: Option<usize>,
    /// Stop after this many separators.
    #[arg(long)]
    max_nodes: Option<u64>,
    /// Stop after this many seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Worker threads; the result does not depend on it.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Write the best placement found to this file.
    #[arg(long)]
    witness: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

impl Search {
    fn oracle(&self, board: &Board) -> Result<Oracle, Failure> {
        let spec = BoardSpec::new(board.m, board.n, self.piece).map_err(Failure::input)?;
        let mut budget = SearchBudget::unlimited();
        if let Some(u) = self.max_sep {
            budget = budget.with_max_separator_size(u);
        }
        if let Some(nodes) = self.max_nodes {
            budget = budget.with_max_nodes(nodes);
        }
        if let Some(secs) = self.time_limit {
            let limit = Duration::try_from_secs_f64(secs).map_err(|e| Failure::input(format!("--time-limit: {e}")))?;
            budget = budget.with_time_limit(limit);
        }
        Ok(Oracle::new(spec).budget(budget).threads(self.threads))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form balanced optimum for knights.
    Phi {
        #[command(flatten)]
        board: Board,
        #[arg(long)]
        json: bool,
    },
    /// Write an optimal knight placement for boards with sides at least 3 and 7.
    Construct {
        #[command(flatten)]
        board: Board,
        #[arg(long)]
        out: PathBuf,
        /// Print the board: row 1 at the top, column 1 at the left; B black,
        /// W white, `.` uncolored.
        #[arg(long)]
        render: bool,
    },
    /// Check a placement file.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Exact balanced optimum by exhaustive search.
    Solve {
        #[command(flatten)]
        board: Board,
        #[command(flatten)]
        search: Search,
    },
    /// Exact maximum white count for a fixed number of blacks.
    Obwc {
        #[command(flatten)]
        board: Board,
        #[arg(long)]
        b: usize,
        #[command(flatten)]
        search: Search,
    },
    /// Rearrange a placement's black set and record N after every step.
    Normalize {
        #[arg(long = "in")]
        input: PathBuf,
        /// Trace report: one `pass step N` line per step.
        #[arg(long)]
        trace: PathBuf,
        /// Write the normalized blacks with the largest compatible white set.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the balanced integer program in LP format.
    ExportIp {
        #[command(flatten)]
        board: Board,
        #[arg(long, default_value = "knight")]
        piece: Piece,
        /// Pin the number of blacks.
        #[arg(long)]
        fix_b: Option<usize>,
        /// Defaults to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(e: impl ToString) -> Self {
        Failure { code: 2, message: e.to_string() }
    }

    fn internal(e: impl ToString) -> Self {
        Failure { code: 3, message: e.to_string() }
    }
}

/// Writes through a temporary file in the target directory so a failed run
/// never leaves a partial file behind.
fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| Failure::input(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn read_placement(path: &Path) -> Result<Coloring, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Coloring::from_placement_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn print_json(value: &impl Serialize) {
    println!("{}", serde_json::to_string(value).expect("serializable"));
}

#[derive(Serialize)]
struct SolveOutput {
    value: usize,
    separator_size: usize,
    explored: u64,
    proven_optimal: bool,
    #[serde(flatten)]
    witness: Placement,
}

#[derive(Serialize)]
struct ObwcOutput {
    b: usize,
    max_white: usize,
    explored: u64,
    proven_optimal: bool,
    #[serde(flatten)]
    witness: Placement,
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Phi { board, json } => {
            let r = phi_knight(board.m, board.n).map_err(Failure::input)?;
            if json {
                print_json(&r);
            } else {
                println!("value {}", r.value);
                println!("uncolored {}", r.uncolored_target);
                println!("regime {}", r.regime);
                println!("proven_regime {}", r.proven_regime);
            }
        }
        Command::Construct { board, out, render } => {
            let c = construct(board.m, board.n).map_err(|e| match e {
                Error::InvalidPlacement { .. } | Error::CountMismatch { .. } => Failure::internal(e),
                e => Failure::input(e),
            })?;
            let report = c.coloring.verify();
            if !report.valid || report != c.certificate {
                return Err(Failure::internal(format!("construction failed verification: {report}")));
            }
            write_atomic(&out, &c.coloring.to_placement_string())?;
            if render {
                print!("{}", c.coloring.render());
            }
            println!("{report}");
        }
        Command::Verify { input, json } => {
            let report: VerifyReport = read_placement(&input)?.verify();
            if json {
                print_json(&report);
            } else {
                println!("{report}");
            }
            return Ok(if report.valid { 0 } else { 1 });
        }
        Command::Solve { board, search } => {
            let r = search.oracle(&board)?.solve_balanced().map_err(Failure::input)?;
            if let Some(path) = &search.witness {
                write_atomic(path, &r.witness.to_placement_string())?;
            }
            if search.json {
                print_json(&SolveOutput {
                    value: r.value,
                    separator_size: r.separator_size,
                    explored: r.explored,
                    proven_optimal: r.proven_optimal,
                    witness: r.witness.to_placement(),
                });
            } else {
                println!("value {}", r.value);
                println!("separator {}", r.separator_size);
                println!("proven {}", r.proven_optimal);
                println!("nodes {}", r.explored);
            }
        }
        Command::Obwc { board, b, search } => {
            let r = search.oracle(&board)?.solve_fixed_b(b).map_err(Failure::input)?;
            if let Some(path) = &search.witness {
                write_atomic(path, &r.witness.to_placement_string())?;
            }
            if search.json {
                print_json(&ObwcOutput {
                    b: r.b,
                    max_white: r.max_white,
                    explored: r.explored,
                    proven_optimal: r.proven_optimal,
                    witness: r.witness.to_placement(),
                });
            } else {
                println!("b {}", r.b);
                println!("w {}", r.max_white);
                println!("proven {}", r.proven_optimal);
                println!("nodes {}", r.explored);
            }
        }
        Command::Normalize { input, trace, out } => {
            let c = read_placement(&input)?;
            let spec = *c.spec();
            let (black, report) = normalize(&spec, c.black()).map_err(Failure::input)?;
            write_atomic(&trace, &report.to_report())?;
            if let Some(path) = out {
                let (_, white) = max_white(&spec, &black).map_err(Failure::internal)?;
                let normal = Coloring::new(spec, black, white).map_err(Failure::internal)?;
                write_atomic(&path, &normal.to_placement_string())?;
            }
            println!("passes {}", report.passes);
            println!("converged {}", report.converged);
            println!("n {} -> {}", report.steps[0].n, report.final_n());
            match report.first_increase() {
                None => println!("monotone true"),
                Some((before, after)) => {
                    println!("monotone false (pass {} {}: {} -> {})", after.pass, after.name, before.n, after.n)
                }
            }
        }
        Command::ExportIp { board, piece, fix_b, out } => {
            let spec = BoardSpec::new(board.m, board.n, piece).map_err(Failure::input)?;
            let mut model = build_ip(&spec);
            if let Some(b) = fix_b {
                if b > spec.area() {
                    return Err(Failure::input(format!("--fix-b {b} exceeds the {} cells of the board", spec.area())));
                }
                model = model.fix_b(b);
            }
            let text = write_lp(&model);
            match out {
                Some(path) => write_atomic(&path, &text)?,
                None => print!("{text}"),
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
