//! Exact expectations under the distribution where each bid is `h` with
//! probability `1/h`: every auction earns `n`, the benchmark earns `n + gap`.
//!
//! ```bash
//! cargo run --release -p bivalued --example lower_bound_identities
//! ```

use bivalued::analysis::DistributionIdentities;
use bivalued::AuctionParams;
use num_traits::ToPrimitive;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>4} {:>3} {:>12} {:>10} {:>10} {:>8}", "n", "h", "E[OPT]", "E[DOP]", "gap", "gap/√nh");
    for h in [2u64, 4, 5, 8, 10] {
        for n in (h as usize..=200).step_by(h as usize * 5) {
            let params = AuctionParams::new(n, h)?;
            let ids = DistributionIdentities::compute(params)?;
            assert!(ids.violations().is_empty(), "identity failed at n = {n}, h = {h}");
            let gap = ids.gap.to_f64().unwrap_or(f64::NAN);
            println!(
                "{:>4} {:>3} {:>12.4} {:>10} {:>10.4} {:>8.4}",
                n,
                h,
                ids.e_opt.to_f64().unwrap_or(f64::NAN),
                ids.e_dop,
                gap,
                gap / params.loss_scale()
            );
        }
    }
    let ids = DistributionIdentities::compute(AuctionParams::new(4, 2)?)?;
    println!("\nn = 4, h = 2: E[OPT] = {}, E[DOP] = {}, gap = {}", ids.e_opt, ids.e_dop, ids.gap);
    Ok(())
}
