//! Builds a batch file, runs it through the library CLI entry point and
//! prints the combined CSV.
//!
//! ```bash
//! cargo run --release -p bivalued --example batch_grid
//! ```
//!
//! The same file could be passed to `bivalued batch <file>`.

use bivalued::cli::{parse_batch, run_batch};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut entries = Vec::new();
    for h in [2u64, 4] {
        for n in [8usize, 12, 16] {
            entries.push(format!(r#"{{"command": "sweep", "n": {n}, "h": {h}, "auction": "derand"}}"#));
        }
    }
    entries.push(r#"{"command": "dist-d", "n": 100, "h": 10}"#.to_string());
    entries.push(r#"{"command": "demo-dop", "h": 10}"#.to_string());
    let text = format!("[{}]", entries.join(",\n"));
    println!("batch file:\n{text}\n");

    let experiments = parse_batch(&text)?;
    let batch = run_batch(&experiments)?;
    let rows = batch.experiments.iter().flat_map(|r| r.rows.iter());
    bivalued::cli::report::write_csv(std::io::stdout().lock(), rows)?;
    Ok(())
}
