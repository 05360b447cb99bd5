//! Spectral moments, the Gram matrix under ν_β and the single-atom
//! reduction for one β.

use swnlab::crosscheck::{proofchain_check, ChainTolerance};

fn main() {
    let beta = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3.0);
    for r in proofchain_check(beta, 6, &[0.5, 1.0], ChainTolerance::default()) {
        let p = &r.params;
        println!(
            "{:<20} order={:<4} area={:<4} rel_error={:.1e} {}",
            r.check,
            p.order.map(|o| o.to_string()).unwrap_or_default(),
            p.area.map(|a| a.to_string()).unwrap_or_default(),
            r.rel_error,
            if r.pass { "ok" } else { "FAIL" }
        );
    }
}
