// Largest expansion cost per cycle against 5d/2 for several degrees.

use expander_core::Sequence;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for d in [6, 8, 10, 12] {
        let mut seq = Sequence::new(d, 1)?;
        let base = seq.n();
        for cycle in 0..2 {
            let mut max = 0;
            while seq.n() < base << (cycle + 1) {
                max = max.max(seq.advance()?.cost);
            }
            println!("d = {d:2}, cycle {cycle}: max cost {max:2}, 5d/2 = {}", 5 * d / 2);
            assert_eq!(max, 5 * d as u64 / 2);
        }
    }
    Ok(())
}
