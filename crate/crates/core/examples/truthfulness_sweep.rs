//! Flip every bid of every vector and confirm no offer moves with it.
//!
//! ```bash
//! cargo run --release -p bivalued --example truthfulness_sweep -- 12
//! ```

use bivalued::analysis::{bid_independence_sweep, flip_sweep};
use bivalued::{AuctionKind, AuctionParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(12);
    for h in [2u64, 3] {
        let params = AuctionParams::new(n, h)?;
        for kind in AuctionKind::ALL.into_iter().filter(|k| k.supports(params)) {
            let report = bid_independence_sweep(params, kind, 20)?;
            println!(
                "n = {n}, h = {h}, {:<14} {} pairs checked, {} violations",
                kind.name(),
                report.checked,
                report.violations.len()
            );
        }
    }

    // A rule that looks at bidder i's own bid is caught immediately.
    let params = AuctionParams::new(n.min(10), 2)?;
    let (checked, bad) = flip_sweep(params, 20, |b, i| b.bid(i).map(|bid| bid.value(2)).unwrap_or(0))?;
    println!("\nown-bid pricing at n = {}: {} of {checked} pairs flagged", params.n(), bad.len());
    Ok(())
}
