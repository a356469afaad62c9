// Searches signings for 2-lifts: exhaustively on K_4, at random on a larger base.

use expander_core::format::write_signing;
use expander_core::lift::halve;
use expander_core::{find_good_signing, initial_graph, next_bl_expander, spectral_report, two_lift, LiftParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g1 = initial_graph(6)?;
    let k4 = halve(&g1)?;
    let budget = LiftParams::default_budget(g1.degree_target());
    let search = find_good_signing(&k4, budget, 256, 1)?;
    let lift = two_lift(&k4, &search.signing)?;
    println!(
        "K_4: {} candidates (exhaustive: {}), lambda = {:.4}, budget {:.4}",
        search.candidates, search.exhaustive, search.lambda, budget
    );
    println!("lift has {} vertices, degree {:?}", lift.vertex_count(), lift.regular_degree());
    print!("{}", write_signing(&search.signing));

    let mut g = g1;
    for i in 1..=3 {
        g = next_bl_expander(&g, i)?;
        let s = spectral_report(&g)?;
        println!("G*_{}: n = {:3}, lambda = {:.4} (weighted)", i + 1, g.vertex_count(), s.lambda);
    }
    Ok(())
}
