// Drives the self-healing network through insertions and deletions, checking it
// against the reference sequence after each event.

use expander_core::sim::{run_script, AdversaryScript, Simulator};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut sim = Simulator::new(6, 1)?;
    let attach = ["init-0".to_string(), "init-2".to_string()];
    for id in ["a", "b", "c"] {
        let cost = sim.insert(id, &attach)?;
        println!(
            "insert {id}: n {} -> {}, {} rounds, {} messages, largest {} of {} bits",
            cost.n_before, cost.n_after, cost.rounds, cost.messages, cost.max_message_bits, cost.bit_budget
        );
    }
    for id in ["init-0", "b"] {
        let cost = sim.delete(id)?;
        println!(
            "delete {id}: n {} -> {}, {} rounds, {} messages, {} topology changes",
            cost.n_before, cost.n_after, cost.rounds, cost.messages, cost.topology_changes
        );
    }
    sim.check()?;
    for node in sim.nodes().filter(|n| n.is_coordinator()) {
        println!("coordinator {} holds n = {:?}", node.ext, node.coordinator_n);
    }

    let script = AdversaryScript::random(6, 60, 0.7, 3);
    let report = run_script(6, 1, &script)?;
    println!(
        "60 random events: final n = {}, rounds/log n <= {:.2}, messages/log n <= {:.2}, digest {}",
        report.final_n, report.fitted.rounds_per_log_n, report.fitted.messages_per_log_n, &report.digest[..16]
    );
    Ok(())
}
