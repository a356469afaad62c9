// Compares every cut of mid-cycle graphs with the matching cut of the target lift.

use std::collections::BTreeSet;

use expander_core::analyzer::{future_cut_suite, half_lemma_check};
use expander_core::state_at;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for n in 5..=12 {
        let state = state_at(6, n, 1)?;
        let suite = future_cut_suite(&state)?;
        println!(
            "n = {n:2}  S = {}  cuts {:4}  failures {}/{}  half future expansion {}",
            state.split_set().len(),
            suite.cuts_checked,
            suite.block_failures,
            suite.half_failures,
            suite.half_future_expansion()
        );
        assert!(suite.ok());
    }
    let state = state_at(6, 6, 1)?;
    let a: BTreeSet<_> = state.split_set().iter().copied().collect();
    let r = half_lemma_check(&state, &a)?;
    println!(
        "split set at n = 6: w_G = {}, w_H of future sets = {}",
        r.decomposition.w_g, r.decomposition.w_h
    );
    Ok(())
}
