// The expander mixing inequality on the first two doubled lifts for d = 6.

use expander_core::analyzer::{mixing_suite_exhaustive, mixing_suite_sampled};
use expander_core::graph_at;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let small = mixing_suite_exhaustive(&graph_at(6, 8, 1)?)?;
    println!(
        "n = 8, every disjoint pair: {} pairs, {} failures, min margin {:.4}",
        small.pairs_checked, small.failures, small.min_margin
    );
    let large = mixing_suite_sampled(&graph_at(6, 16, 1)?, 10_000, 7)?;
    println!(
        "n = 16, sampled pairs: {} pairs, {} failures, min margin {:.4}",
        large.pairs_checked, large.failures, large.min_margin
    );
    assert_eq!(small.failures + large.failures, 0);
    Ok(())
}
