//! Sampled revenues under the lower-bound distribution.
//!
//! ```bash
//! cargo run --release -p bivalued --example monte_carlo_under_d -- 100000 7
//! ```
//!
//! Arguments: sample count (default 100000) and seed (default 7). Every
//! auction averages about `n`; the benchmark averages about `n + gap`.

use bivalued::analysis::monte_carlo_under_d;
use bivalued::{AuctionKind, AuctionParams};
use num_traits::ToPrimitive;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let samples: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(100_000);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(7);
    let params = AuctionParams::new(100, 10)?;

    for kind in AuctionKind::ALL {
        let report = monte_carlo_under_d(params, kind, samples, seed)?;
        let z = (report.mc_mean_auction - 100.0) / report.mc_stderr_auction;
        println!(
            "{:<14} mean revenue {:>9.4} ± {:.4}  (z = {:+.2})",
            kind.name(),
            report.mc_mean_auction,
            report.mc_stderr_auction,
            z
        );
        if kind == AuctionKind::Derand {
            let exact = report.exact.as_ref().expect("10 divides 100");
            println!(
                "{:<14} mean           {:>9.4} ± {:.4}  (exact {:.4})",
                "offline-opt",
                report.mc_mean_opt,
                report.mc_stderr_opt,
                exact.e_opt.to_f64().unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}
