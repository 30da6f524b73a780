//! Regenerates `data/small_phi.txt` by exhaustive search.
//!
//! ```text
//! cargo run --release -p anticolor --example small_table > crates/core/data/small_phi.txt
//! ```

use std::time::Instant;

use anticolor::board::BoardSpec;
use anticolor::formula::SmallCaseTable;
use anticolor::oracle::{solve_balanced, SearchBudget};

fn main() -> anticolor::Result<()> {
    let max: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(6);
    let mut table = SmallCaseTable::default();
    for m in 1..=max {
        for n in m..=max {
            let start = Instant::now();
            let r = solve_balanced(&BoardSpec::knight(m, n)?, SearchBudget::unlimited())?;
            assert!(r.proven_optimal);
            eprintln!(
                "{m}x{n}: phi={} separator={} explored={} ({:.2?})",
                r.value,
                r.separator_size,
                r.explored,
                start.elapsed()
            );
            table.insert(m, n, r.value);
        }
    }
    println!("# m n phi  (knight, exhaustive separator search)");
    print!("{}", table.to_text());
    Ok(())
}
