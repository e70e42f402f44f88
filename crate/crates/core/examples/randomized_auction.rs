//! The randomized auction: exact offer probabilities, exact expected
//! revenue, and a sampled average for comparison.
//!
//! ```bash
//! cargo run --release -p bivalued --example randomized_auction
//! ```

use bivalued::auctions::randomized::{self, OfferProbabilities, OfferProbability};
use bivalued::{AuctionParams, BidVector};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = AuctionParams::new(100, 10)?;

    println!("p(i) as a function of n_h(i) at n = 100, h = 10:");
    for m in [5usize, 10, 11, 12, 15, 20, 30] {
        let p = OfferProbability::for_count(params, m);
        println!("  n_h(i) = {m:>2}: p = {:<28} ≈ {:.6}", p.value().to_string(), p.to_f64());
    }

    let b = BidVector::with_leading_high(params, 11);
    let probs = OfferProbabilities::for_vector(&b);
    println!("\nn_h = 11: p_low_gets_one = {}", probs.p_low_gets_one);
    println!("          p_high_gets_h  = {}", probs.p_high_gets_h);

    let exact = randomized::exact_expectation(&b);
    let runs = 20_000u64;
    let total: u64 = (0..runs).map(|seed| randomized::run(&b, seed).revenue()).sum();
    println!("\nexact expected revenue {exact} ≈ {:.4}", exact.to_f64());
    println!("mean over {runs} seeded runs {:.4}", total as f64 / runs as f64);
    println!("offline optimum {}", b.offline_optimal());
    Ok(())
}
