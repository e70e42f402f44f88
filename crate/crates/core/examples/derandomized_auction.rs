//! The modular derandomization, traced bidder by bidder.
//!
//! ```bash
//! cargo run -p bivalued --example derandomized_auction -- HHHHLLLLLLLL 3
//! ```
//!
//! Arguments: a bid vector as `H`/`L` characters (default `HHHH`) and `h`
//! (default 2). Prints `a(i)`, the modulus `b(i)`, `X(i)`, `Y(i)`, `Z(i)` and
//! the offer for each bidder, then checks the per-class block counts.

use bivalued::analysis::{additive_loss, block_structure_check};
use bivalued::auctions::derand;
use bivalued::{AuctionKind, AuctionParams, BidVector};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let text = args.next().unwrap_or_else(|| "HHHH".to_string());
    let h: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(2);
    let params = AuctionParams::new(text.chars().count(), h)?;
    let b = BidVector::parse(params, &text)?;

    let schedule = derand::run(&b);
    println!("{:>3} {:>3} {:>5} {:>4} {:>5} {:>3} {:>3} {:>5}", "i", "bid", "a", "b", "X", "Y", "Z", "offer");
    for i in 1..=b.n() {
        let s = derand::state(&b, i)?;
        println!(
            "{:>3} {:>3} {:>5} {:>4} {:>5} {:>3} {:>3} {:>5}",
            i,
            b.bid(i)?.value(h),
            s.a_val,
            s.b_val,
            s.x_val,
            s.y_val,
            s.z_val,
            schedule.offers()[i - 1]
        );
    }
    println!(
        "\nrevenue {} / offline optimum {} (loss {})",
        schedule.revenue(),
        b.offline_optimal(),
        additive_loss(&b, AuctionKind::Derand)?
    );
    match block_structure_check(&b) {
        Ok(()) => println!("block structure: ok"),
        Err(v) => println!("block structure violated: {v:?}"),
    }
    Ok(())
}
