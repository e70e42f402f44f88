//! DOP collapses on vectors with exactly `n/h` h-bids.
//!
//! ```bash
//! cargo run -p bivalued --example dop_unboundedness
//! ```
//!
//! Every h-bidder sees `n/h − 1` other h-bids and is offered 1, while every
//! 1-bidder sees `n/h` and is offered `h`, so DOP collects `n/h` against a
//! benchmark of `n`.

use bivalued::analysis::dop_unboundedness_demo;
use bivalued::auctions::dop;
use bivalued::{AuctionParams, BidVector};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>4} {:>6} {:>5} {:>8} {:>7} {:>6}", "h", "n", "n_h", "opt", "revenue", "ratio");
    for h in [2u64, 5, 10, 20, 50] {
        let demo = dop_unboundedness_demo(h, None)?;
        println!(
            "{:>4} {:>6} {:>5} {:>8} {:>7} {:>6}",
            demo.h, demo.n, demo.count_high, demo.opt, demo.revenue, demo.ratio
        );
    }

    // The same effect at n = 100, h = 10, bidder by bidder.
    let params = AuctionParams::new(100, 10)?;
    let b = BidVector::with_leading_high(params, 10);
    let high_offer = dop::offer(&b.mask(1)?);
    let low_offer = dop::offer(&b.mask(100)?);
    println!("\nn = 100, h = 10, ten h-bids: h-bidders offered {high_offer}, 1-bidders offered {low_offer}");
    println!("DOP revenue {} vs offline optimum {}", dop::run(&b).revenue(), b.offline_optimal());
    Ok(())
}
