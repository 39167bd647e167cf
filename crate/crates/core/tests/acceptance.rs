//! One line per acceptance item; exits nonzero if any item fails or runs
//! past its time limit.

use sharbly::repro::{run_item, ReproOptions, ITEMS};

/// Wall-clock limit per item, in milliseconds.
const LIMITS_MS: [u128; 8] = [1_000, 30_000, 1_800_000, 300_000, 3_600_000, 300_000, 300_000, 300_000];

fn main() {
    let opts = ReproOptions::default();
    let mut failed = 0;
    for (k, &(id, _)) in ITEMS.iter().enumerate() {
        let r = run_item(id, &opts);
        let in_time = r.millis <= LIMITS_MS[k];
        let ok = r.passed && in_time;
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {}: {} [{}] {} ms (limit {} ms) {}",
            r.id,
            if ok { "PASS" } else { "FAIL" },
            r.name,
            r.millis,
            LIMITS_MS[k],
            r.detail
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
