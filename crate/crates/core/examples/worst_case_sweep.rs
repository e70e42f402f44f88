//! Exhaustive worst-case additive loss of every auction over a grid.
//!
//! ```bash
//! cargo run --release -p bivalued --example worst_case_sweep
//! cargo run --release -p bivalued --example worst_case_sweep -- 16
//! ```
//!
//! The optional argument caps `n` (default 20). For each `(n, h)` the table
//! shows `global_worst / √(n·h)`; the derandomized column stays bounded while
//! DOP grows with `h`.

use bivalued::analysis::{lower_bound_gap, worst_case_sweep};
use bivalued::{AuctionKind, AuctionParams};
use num_traits::ToPrimitive;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let max_n: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(20);
    let kinds = [AuctionKind::Dop, AuctionKind::Randomized, AuctionKind::Derand];

    println!("{:>3} {:>2} {:>10} {:>10} {:>10} {:>10}  derand witness", "n", "h", "dop", "randomized", "derand", "gap");
    let mut worst_derand = (0.0f64, 0usize, 0u64);
    for h in [2u64, 3, 4, 8] {
        for n in 4..=max_n {
            let params = AuctionParams::new(n, h)?;
            let mut cells = Vec::new();
            let mut witness = String::new();
            for kind in kinds {
                let profile = worst_case_sweep(params, kind)?;
                cells.push(profile.normalized());
                if kind == AuctionKind::Derand {
                    witness = format!("{} (loss {})", profile.witness, profile.global_worst);
                    if profile.normalized() > worst_derand.0 {
                        worst_derand = (profile.normalized(), n, h);
                    }
                }
            }
            let gap = lower_bound_gap(params)
                .map(|g| format!("{:10.4}", g.to_f64().unwrap_or(f64::NAN) / params.loss_scale()))
                .unwrap_or_else(|_| format!("{:>10}", "-"));
            println!("{n:>3} {h:>2} {:10.4} {:10.4} {:10.4} {gap}  {witness}", cells[0], cells[1], cells[2]);
        }
    }
    println!(
        "largest derand loss / sqrt(nh): {:.4} at n = {}, h = {}",
        worst_derand.0, worst_derand.1, worst_derand.2
    );
    Ok(())
}
