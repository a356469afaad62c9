// Exact edge expansion and the Cheeger sandwich along the degree-8 sequence, with
// a graph-file round trip.

use expander_core::analyzer::{cheeger_check, edge_expansion_exact};
use expander_core::format::{parse_graph, write_graph};
use expander_core::{graph_at, graphs_equal};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for n in 5..=14 {
        let g = graph_at(8, n, 1)?;
        assert!(graphs_equal(&parse_graph(&write_graph(&g)?)?, &g));
        let exact = edge_expansion_exact(&g)?;
        let c = cheeger_check(&g)?;
        let argmin: Vec<String> = exact.argmin_set.iter().map(|v| v.to_string()).collect();
        println!(
            "n = {n:2}  h = {:>5}  {:.3} <= h <= {:.3}  lambda2 = {:.3}  argmin {{{}}}",
            exact.h.to_string(),
            c.lower,
            c.upper,
            c.lambda2,
            argmin.join(" ")
        );
        assert!(c.ok);
    }
    Ok(())
}
