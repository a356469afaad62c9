// The split set two steps past the doubled K_6 expands by exactly 4 = (2/3)(d/2 + 1),
// and lambda2 one split past a doubling stays close to d/2.

use expander_core::analyzer::{expansion_of_set, rayleigh_lower_bound_check};
use expander_core::state_at;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let state = state_at(10, 8, 1)?;
    let split = state.split_set().clone();
    let h = expansion_of_set(state.current(), &split)?;
    println!("d = 10, n = 8: split set of {} vertices expands by {h}", split.len());
    assert_eq!(h, num_rational::Ratio::from_integer(4));

    for i in 1..=4 {
        let r = rayleigh_lower_bound_check(6, i, 0.5, 1)?;
        println!(
            "d = 6, n = {:3}: lambda2 = {:.4} (threshold {}), test vector quotient {:.4}",
            r.n, r.lambda2, r.threshold, r.quotient
        );
        assert!(r.ok && r.quotient_below_lambda2);
    }
    Ok(())
}
