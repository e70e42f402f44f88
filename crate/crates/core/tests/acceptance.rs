//! Acceptance suite. Each test prints one `criterion k PASS|FAIL` line.
//!
//! Run with `cargo test -p bivalued --test acceptance -- --nocapture`.

use std::collections::BTreeMap;

use bivalued::analysis::{
    bid_independence_sweep, block_structure_sweep, dop_unboundedness_demo, exact_e_dop_under_d, exact_e_opt_under_d,
    high_count_pmf, lower_bound_gap, monte_carlo_under_d, worst_case_sweep,
};
use bivalued::auctions::{derand, dop, randomized};
use bivalued::cli::report::Detail;
use bivalued::cli::{self, Command, Experiment, ExperimentConfig, OutputFormat, EXIT_IDENTITY, EXIT_OK};
use bivalued::{AuctionKind, AuctionParams, BidMask, BidVector, Surd};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Largest derand loss over the sweep grid: loss 21 at n = 7, h = 8.
const PINNED_DERAND: (i64, u64, u64) = (21, 7, 8);
/// Largest randomized expected loss per `√(nh)` over n <= 14,
/// h in {2, 3, 4}: loss 3 at n = 1, h = 4, n_h = 1 (the lone bidder bids h
/// and is offered 1). Among n >= 2 the maximum is `4 + √2` at n = 4, h = 4,
/// n_h = 2.
const PINNED_RANDOMIZED: (usize, u64, usize, i64) = (1, 4, 1, 3);
/// Monte Carlo tolerance in standard errors.
const MC_SIGMAS: f64 = 3.0;
const MC_SAMPLES: u64 = 100_000;
const MC_SEED: u64 = 0;
/// Normalized gap interval checked on the grid.
const GAP_INTERVAL: (f64, f64) = (0.05, 1.0);

const SWEEP_NS: std::ops::RangeInclusive<usize> = 4..=20;
const SWEEP_HS: [u64; 4] = [2, 3, 4, 8];

fn params(n: usize, h: u64) -> AuctionParams {
    AuctionParams::new(n, h).unwrap()
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn verdict(k: u32, what: &str, failures: &[String]) {
    if failures.is_empty() {
        println!("criterion {k} PASS: {what}");
    } else {
        println!("criterion {k} FAIL: {what}");
        for f in failures.iter().take(10) {
            println!("    {f}");
        }
        panic!("criterion {k}: {} failure(s)", failures.len());
    }
}

#[test]
fn criterion_01_exact_identities() {
    let mut failures = Vec::new();
    let mut points = 0;
    for h in [2u64, 4, 5, 8, 10] {
        for n in (h as usize..=200).step_by(h as usize) {
            let p = params(n, h);
            let e_opt = exact_e_opt_under_d(p).unwrap();
            let e_dop = exact_e_dop_under_d(p).unwrap();
            let gap = lower_bound_gap(p).unwrap();
            if e_dop != int(n as i64) {
                failures.push(format!("n={n} h={h}: E[DOP] = {e_dop}"));
            }
            if &e_opt - int(n as i64) != gap {
                failures.push(format!("n={n} h={h}: E[OPT] - n = {} but gap = {gap}", &e_opt - int(n as i64)));
            }
            points += 1;
        }
    }
    verdict(1, &format!("E[DOP] = n and E[OPT] - n = gap exactly at {points} points"), &failures);
}

/// Bidder `i` bids h iff bit `n - i` of `bits` is set.
fn naive_bids(bits: u64, n: usize) -> Vec<bool> {
    (1..=n).map(|i| bits >> (n - i) & 1 == 1).collect()
}

fn naive_threshold_revenue(bids: &[bool], h: u64) -> i64 {
    let n = bids.len();
    let total = bids.iter().filter(|&&b| b).count();
    bids.iter()
        .map(|&high| {
            let others = total - high as usize;
            let offer_h = others * h as usize >= n;
            match (offer_h, high) {
                (true, true) => h as i64,
                (true, false) => 0,
                (false, _) => 1,
            }
        })
        .sum()
}

fn naive_dop_revenue(bids: &[bool], h: u64) -> i64 {
    let n = bids.len();
    (0..n)
        .map(|i| {
            let others: Vec<bool> = bids.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &b)| b).collect();
            let at_one = others.len() as u64;
            let at_h = h * others.iter().filter(|&&b| b).count() as u64;
            let price = if at_h >= at_one { h } else { 1 };
            let bid = if bids[i] { h } else { 1 };
            if bid >= price {
                price as i64
            } else {
                0
            }
        })
        .sum()
}

#[test]
fn criterion_02_brute_force_equivalence() {
    let mut failures = Vec::new();
    for h in [2u64, 3, 4] {
        for n in 1..=12usize {
            let p = params(n, h);
            let scale = BigInt::from(h).pow(n as u32);
            let weight = |k: usize| BigRational::new(BigInt::from(h - 1).pow((n - k) as u32), scale.clone());

            let mut pmf = vec![BigRational::zero(); n + 1];
            let mut e_opt = BigRational::zero();
            let mut e_thr = BigRational::zero();
            let mut e_library = [BigRational::zero(), BigRational::zero(), BigRational::zero()];
            let mut e_rand = Surd::zero();
            for bits in 0..1u64 << n {
                let bids = naive_bids(bits, n);
                let k = bids.iter().filter(|&&b| b).count();
                let w = weight(k);
                pmf[k] += &w;
                e_opt += &w * int((n as i64).max(h as i64 * k as i64));
                e_thr += &w * int(naive_threshold_revenue(&bids, h));
                let b = BidVector::from_mask(p, BidMask::new(bits, n)).unwrap();
                for (slot, rev) in e_library.iter_mut().zip([
                    dop::run(&b).revenue(),
                    derand::run(&b).revenue(),
                    naive_dop_revenue(&bids, h) as u64,
                ]) {
                    *slot += &w * int(rev as i64);
                }
                e_rand = &e_rand + &(&randomized::exact_expectation(&b) * &w);
            }
            for (k, q) in pmf.iter().enumerate() {
                if *q != high_count_pmf(p, k) {
                    failures.push(format!("n={n} h={h}: pmf({k}) {q} vs {}", high_count_pmf(p, k)));
                }
            }
            // any bid-independent {1, h} auction earns exactly n on average
            for (name, e) in ["dop", "derand", "naive dop"].iter().zip(&e_library) {
                if *e != int(n as i64) {
                    failures.push(format!("n={n} h={h}: E[{name}] = {e}"));
                }
            }
            if e_rand != Surd::from_integer(n as i64) {
                failures.push(format!("n={n} h={h}: E[randomized] = {e_rand}"));
            }
            if n % h as usize == 0 {
                if e_opt != exact_e_opt_under_d(p).unwrap() {
                    failures.push(format!("n={n} h={h}: brute E[OPT] {e_opt}"));
                }
                if e_thr != exact_e_dop_under_d(p).unwrap() {
                    failures.push(format!("n={n} h={h}: brute E[threshold] {e_thr}"));
                }
            }
        }
    }

    // naive worst-case DOP search at n = 4, h = 2
    let (n, h) = (4usize, 2u64);
    let mut naive_per_nh: BTreeMap<usize, i64> = BTreeMap::new();
    let mut naive_worst: Option<(i64, Vec<bool>)> = None;
    for bits in 0..16u64 {
        let bids = naive_bids(bits, n);
        let k = bids.iter().filter(|&&b| b).count();
        let loss = (n as i64).max(h as i64 * k as i64) - naive_dop_revenue(&bids, h);
        let e = naive_per_nh.entry(k).or_insert(i64::MIN);
        *e = (*e).max(loss);
        if naive_worst.as_ref().is_none_or(|(w, _)| loss > *w) {
            naive_worst = Some((loss, bids));
        }
    }
    let profile = worst_case_sweep(params(n, h), AuctionKind::Dop).unwrap();
    let (worst, witness) = naive_worst.unwrap();
    if profile.global_worst != Surd::from_integer(worst) {
        failures.push(format!("DOP n=4 h=2 worst {} vs naive {worst}", profile.global_worst));
    }
    let lib_witness: Vec<bool> = profile.witness.bids().iter().map(|b| b.value(h) == h).collect();
    if lib_witness != witness {
        failures.push(format!("DOP n=4 h=2 witness {} vs naive {witness:?}", profile.witness.to_bitstring()));
    }
    for (k, loss) in naive_per_nh {
        if profile.per_nh_worst.get(&k) != Some(&Surd::from_integer(loss)) {
            failures.push(format!("DOP n=4 h=2 n_h={k}: {:?} vs naive {loss}", profile.per_nh_worst.get(&k)));
        }
    }
    verdict(2, "D-weighted brute force matches the formulas for n <= 12; naive DOP sweep matches at n=4, h=2", &failures);
}

#[test]
fn criterion_03_derand_upper_bound() {
    let (pin_loss, pin_n, pin_h) = PINNED_DERAND;
    let mut failures = Vec::new();
    let mut attained = false;
    let mut max_seen = (0i64, 0usize, 0u64);
    for h in SWEEP_HS {
        for n in SWEEP_NS {
            let profile = worst_case_sweep(params(n, h), AuctionKind::Derand).unwrap();
            let loss = profile.global_worst.to_rational().and_then(|q| q.to_integer().to_i64()).unwrap();
            // loss / √(nh) ≤ pin_loss / √(pin_n·pin_h), squared
            let lhs = i128::from(loss).pow(2) * i128::from(pin_n * pin_h);
            let rhs = i128::from(pin_loss).pow(2) * (n as i128 * h as i128);
            if loss > 0 && lhs > rhs {
                failures.push(format!("n={n} h={h}: loss {loss} exceeds the pinned constant"));
            }
            attained |= lhs == rhs && loss > 0;
            if max_seen.0 == 0 || (loss as f64 / ((n as u64 * h) as f64).sqrt()) > max_seen.0 as f64 / ((max_seen.1 as u64 * max_seen.2) as f64).sqrt() {
                max_seen = (loss, n, h);
            }
        }
    }
    if !attained {
        failures.push(format!("pinned constant is no longer attained; grid maximum is {max_seen:?}"));
    }
    let c = pin_loss as f64 / ((pin_n * pin_h) as f64).sqrt();
    verdict(3, &format!("derand loss <= C*sqrt(nh) on the grid with C = {pin_loss}/sqrt({}) = {c:.4}", pin_n * pin_h), &failures);
}

#[test]
fn criterion_04_lower_bound_floor() {
    let mut failures = Vec::new();
    let mut checked = 0;
    for h in SWEEP_HS {
        for n in SWEEP_NS.filter(|n| n % h as usize == 0) {
            let p = params(n, h);
            let gap = lower_bound_gap(p).unwrap();
            let normalized = gap.to_f64().unwrap() / p.loss_scale();
            if !(GAP_INTERVAL.0..=GAP_INTERVAL.1).contains(&normalized) {
                failures.push(format!("n={n} h={h}: gap/sqrt(nh) = {normalized}"));
            }
            let gap = Surd::from_rational(gap);
            for kind in AuctionKind::ALL {
                let profile = worst_case_sweep(p, kind).unwrap();
                if profile.global_worst < gap {
                    failures.push(format!("n={n} h={h} {kind}: worst {} below gap {gap}", profile.global_worst));
                }
                checked += 1;
            }
        }
    }
    verdict(4, &format!("global worst loss >= gap for {checked} (grid point, auction) pairs"), &failures);
}

#[test]
fn criterion_05_truthfulness() {
    let mut failures = Vec::new();
    let mut pairs = 0;
    for h in [2u64, 3] {
        for n in 1..=14usize {
            for kind in AuctionKind::ALL {
                let p = params(n, h);
                if !kind.supports(p) {
                    continue;
                }
                let report = bid_independence_sweep(p, kind, 14).unwrap();
                pairs += report.checked;
                for v in report.violations.iter().take(3) {
                    failures.push(format!("n={n} h={h} {kind}: bidder {} of {}", v.1, v.0));
                }
            }
        }
    }
    verdict(5, &format!("no offer depends on the bidder's own bid ({pairs} flips)"), &failures);
}

#[test]
fn criterion_06_block_structure() {
    let mut failures = Vec::new();
    let mut vectors = 0;
    for h in [2u64, 3, 4] {
        for n in 1..=14usize {
            match block_structure_sweep(params(n, h)) {
                Ok(count) => vectors += count,
                Err((b, v)) => failures.push(format!("n={n} h={h}: {} {v:?}", b.to_bitstring())),
            }
        }
    }
    verdict(6, &format!("block counts hold on all {vectors} vectors"), &failures);
}

#[test]
fn criterion_07_dop_unboundedness() {
    let mut failures = Vec::new();
    for h in [2u64, 10, 20] {
        let demo = dop_unboundedness_demo(h, None).unwrap();
        if demo.ratio != int(h as i64) {
            failures.push(format!("h={h}: ratio {}", demo.ratio));
        }
    }
    verdict(7, "DOP ratio equals h for h in {2, 10, 20}", &failures);
}

#[test]
fn criterion_08_monte_carlo() {
    let p = params(100, 10);
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for kind in [AuctionKind::ThresholdDop, AuctionKind::Derand] {
        let r = monte_carlo_under_d(p, kind, MC_SAMPLES, MC_SEED).unwrap();
        let z = (r.mc_mean_auction - 100.0) / r.mc_stderr_auction;
        notes.push(format!("{kind} z={z:+.2}"));
        if z.abs() > MC_SIGMAS {
            failures.push(format!("{kind}: mean {} stderr {}", r.mc_mean_auction, r.mc_stderr_auction));
        }
        let target = 100.0 + lower_bound_gap(p).unwrap().to_f64().unwrap();
        let z = (r.mc_mean_opt - target) / r.mc_stderr_opt;
        notes.push(format!("opt z={z:+.2}"));
        if z.abs() > MC_SIGMAS {
            failures.push(format!("OPT: mean {} stderr {} target {target}", r.mc_mean_opt, r.mc_stderr_opt));
        }
    }
    verdict(8, &format!("sampled means within {MC_SIGMAS} SE at n=100, h=10 ({})", notes.join(", ")), &failures);
}

#[test]
fn criterion_09_randomized_lemma() {
    let (pn, ph, pk, pin_loss) = PINNED_RANDOMIZED;
    let pinned_loss = &Surd::from_integer(params(pn, ph).n().max(ph as usize * pk) as i64)
        - &randomized::expectation_for_count(params(pn, ph), pk);
    let mut failures = Vec::new();
    if pinned_loss != Surd::from_integer(pin_loss) {
        failures.push(format!("pinned loss moved to {pinned_loss}"));
    }
    let pinned_scale = Surd::sqrt((pn as u64) * ph);
    let mut attained = false;
    let mut vectors = 0u64;
    let mut runner_up = (Surd::zero(), String::new());
    for h in [2u64, 3, 4] {
        for n in 1..=14usize {
            let p = params(n, h);
            let bound_scale = Surd::sqrt(n as u64 * h);
            for bits in 0..BidMask::space_size(n) {
                let b = BidVector::from_mask(p, BidMask::new(bits, n)).unwrap();
                let loss = &Surd::from_integer(b.offline_optimal() as i64) - &randomized::exact_expectation(&b);
                // loss / √(nh) ≤ pinned_loss / √(pn·ph)
                let lhs = &loss * &pinned_scale;
                let rhs = &pinned_loss * &bound_scale;
                if lhs > rhs {
                    failures.push(format!("n={n} h={h} {}: loss {loss}", b.to_bitstring()));
                }
                attained |= lhs == rhs;
                vectors += 1;
                if n >= 2 && loss > Surd::zero() && &loss * &bound_scale_inv(n as u64 * h) > runner_up.0 {
                    runner_up = (&loss * &bound_scale_inv(n as u64 * h), format!("n={n} h={h} {}", b.to_bitstring()));
                }
            }
        }
    }
    if !attained {
        failures.push("pinned constant is no longer attained".into());
    }
    // runner-up among n >= 2, reported for reference
    let expected_runner_up = &(&Surd::from_integer(4) + &Surd::sqrt(2)) * &bound_scale_inv(16);
    if runner_up.0 != expected_runner_up {
        failures.push(format!("n >= 2 maximum moved: {} at {}", runner_up.0, runner_up.1));
    }
    let c = pinned_loss.to_f64() / ((pn as u64 * ph) as f64).sqrt();
    verdict(9, &format!("E[randomized] >= OPT - C_r*sqrt(nh) on {vectors} vectors, C_r = {pin_loss}/sqrt({}) = {c:.4}", pn as u64 * ph), &failures);
}

/// `1/√r` as a surd.
fn bound_scale_inv(r: u64) -> Surd {
    Surd::scaled_sqrt(BigRational::new(BigInt::from(1), BigInt::from(r)), r)
}

fn capture(args: &[&str]) -> (i32, Vec<u8>, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["bivalued"];
    full.extend_from_slice(args);
    let code = cli::main_from_args(full, &mut out, &mut err);
    (code, out, err)
}

#[test]
fn criterion_10_cli_determinism() {
    let mut failures = Vec::new();
    let invocations: [&[&str]; 5] = [
        &["sweep", "--n", "12", "--h", "3", "--auction", "derand"],
        &["--format", "json", "sweep", "--n", "10", "--h", "2", "--auction", "randomized"],
        &["mc", "--n", "100", "--h", "10", "--auction", "randomized", "--samples", "2000", "--seed", "9"],
        &["--format", "json", "dist-d", "--n", "40", "--h", "4"],
        &["block-check", "--n", "10", "--h", "3"],
    ];
    for args in invocations {
        let first = capture(args);
        let again = capture(args);
        let mut threaded = vec!["--threads", "1"];
        threaded.extend_from_slice(args);
        let single = capture(&threaded);
        if first.0 != EXIT_OK {
            failures.push(format!("{args:?}: exit {} {}", first.0, String::from_utf8_lossy(&first.2)));
        }
        if first != again || first.1 != single.1 {
            failures.push(format!("{args:?}: output differs between runs"));
        }
    }

    let config = ExperimentConfig {
        experiment: Experiment {
            command: Command::DistD,
            n: Some(12),
            h: 3,
            auction: None,
            samples: None,
            seed: None,
            bids: None,
            limit: None,
        },
        output_format: OutputFormat::Csv,
        output_path: None,
    };
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let clean = cli::run(&config, &mut out, &mut err);
    let perturbed = cli::run_with(
        &config,
        |report| {
            if let Detail::DistributionD(ids) = &mut report.detail {
                ids.e_dop += int(1);
            }
        },
        &mut out,
        &mut err,
    );
    if clean != EXIT_OK || perturbed != EXIT_IDENTITY {
        failures.push(format!("exit codes clean={clean} perturbed={perturbed}"));
    }
    verdict(10, "repeated CLI runs are byte-identical and a perturbed identity exits 2", &failures);
}
