// Grows the degree-6 sequence across two doubling cycles and prints every split.

use expander_core::format::write_graph;
use expander_core::{expansion_cost, Sequence};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut seq = Sequence::new(6, 1)?;
    println!("n = {:2}  doubled K_4", seq.n());
    while seq.n() < 16 {
        let before = seq.graph().clone();
        let log = seq.advance()?;
        assert_eq!(expansion_cost(&before, seq.graph()), log.cost);
        println!(
            "n = {:2}  split {:<4} into {:<5} and {:<5} cost {:2} = 3*{} + 5*{}/2",
            seq.n(),
            log.u.to_string(),
            log.u_zero().to_string(),
            log.u_prime.to_string(),
            log.cost,
            log.unsplit_neighbors,
            log.split_neighbors
        );
    }
    print!("{}", write_graph(seq.graph())?);
    Ok(())
}
