//! Acceptance checks, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always reach the output.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_rational::Ratio;

use expander_core::analyzer::{
    cheeger_check, expansion_of_set, future_cut_suite, mixing_suite_exhaustive, mixing_suite_sampled,
    rayleigh_lower_bound_check,
};
use expander_core::format::write_graph;
use expander_core::lift::halve;
use expander_core::sim::{ceil_log2, run_script, AdversaryScript};
use expander_core::{expansion_cost, graph_at, graphs_equal, state_at, two_lift, Sequence};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.2?}, limit {limit:?}"))?;
    Ok(took)
}

/// Every step of two cycles costs exactly `3|U| + 5|S|/2 <= 5d/2`, and each
/// cycle's last split reaches `5d/2`.
fn cost_bound() -> Outcome {
    let start = Instant::now();
    let mut steps = 0;
    for d in [6u32, 8, 10] {
        let mut seq = Sequence::new(d, 1).map_err(|e| e.to_string())?;
        let base = seq.n();
        for cycle in 0..2 {
            let end = base << (cycle + 1);
            let mut costs = Vec::new();
            while seq.n() < end {
                let prev = seq.graph().clone();
                let log = seq.advance().map_err(|e| e.to_string())?;
                let audited = expansion_cost(&prev, seq.graph());
                let formula = 3 * log.unsplit_neighbors as u64 + 5 * log.split_neighbors as u64 / 2;
                ensure(log.split_neighbors % 2 == 0, || format!("d={d} n={}: odd |S(u)|", seq.n()))?;
                ensure(audited == formula && log.cost == formula, || {
                    format!("d={d} n={}: audited {audited}, logged {}, formula {formula}", seq.n(), log.cost)
                })?;
                ensure(2 * audited <= 5 * d as u64, || format!("d={d} n={}: cost {audited}", seq.n()))?;
                costs.push(audited);
                steps += 1;
            }
            let max = *costs.iter().max().unwrap();
            ensure(max == 5 * d as u64 / 2 && *costs.last().unwrap() == max, || {
                format!("d={d} cycle {cycle}: max {max}, last {}", costs.last().unwrap())
            })?;
        }
    }
    let took = within(start, Duration::from_secs(5))?;
    Ok(format!("{steps} steps in {took:.2?}"))
}

/// Split invariants after every split and equality with the independently
/// rebuilt doubled lift at each cycle end.
fn split_invariants() -> Outcome {
    let mut checked = 0;
    for d in [6u32, 8, 10] {
        let mut seq = Sequence::new(d, 1).map_err(|e| e.to_string())?;
        let base = seq.n();
        for cycle in 0..2 {
            let state = seq.state().map_err(|e| e.to_string())?;
            let half = halve(state.base()).map_err(|e| e.to_string())?;
            let lift = two_lift(&half, &state.lift_search().signing).map_err(|e| e.to_string())?;
            let target = lift.to_weighted(2, state.degree());
            ensure(graphs_equal(&target, state.target()), || format!("d={d} cycle {cycle}: target lift differs"))?;
            while seq.n() < base << (cycle + 1) {
                seq.advance().map_err(|e| e.to_string())?;
                if seq.n() == base << (cycle + 1) {
                    ensure(graphs_equal(seq.graph(), &target), || format!("d={d}: cycle end differs from the lift"))?;
                    ensure(seq.graph().edges().all(|(_, _, w)| w == 2), || format!("d={d}: cycle end not doubled"))?;
                } else {
                    let n = seq.n();
                    let state = seq.state().map_err(|e| e.to_string())?;
                    state.check_invariants().map_err(|e| format!("d={d} n={n}: {e}"))?;
                    let bad = state
                        .current()
                        .edges()
                        .find(|(a, b, w)| !state.is_paired(a, b) && !matches!(w, 1 | 2));
                    ensure(bad.is_none(), || format!("d={d} n={n}: weight outside {{1, 2}}: {bad:?}"))?;
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} splits"))
}

/// Every cut of every `G_n`, `4 <= n <= 16`, for d = 6.
fn future_cuts() -> Outcome {
    let start = Instant::now();
    let mut cuts = 0;
    for n in 4..=16 {
        let state = state_at(6, n, 1).map_err(|e| e.to_string())?;
        let suite = future_cut_suite(&state).map_err(|e| e.to_string())?;
        ensure(suite.cuts_checked == (1 << (n - 1)) - 1, || format!("n={n}: {} cuts", suite.cuts_checked))?;
        ensure(suite.ok(), || {
            format!("n={n}: {} block and {} half failures", suite.block_failures, suite.half_failures)
        })?;
        cuts += suite.cuts_checked;
    }
    let took = within(start, Duration::from_secs(60))?;
    Ok(format!("{cuts} cuts in {took:.2?}"))
}

/// Doubled K_6 plus two vertices: the split set expands by exactly 4.
fn tightness() -> Outcome {
    let state = state_at(10, 8, 1).map_err(|e| e.to_string())?;
    let split = state.split_set().clone();
    ensure(split.len() == 4, || format!("split set has {} vertices", split.len()))?;
    let h = expansion_of_set(state.current(), &split).map_err(|e| e.to_string())?;
    let want = Ratio::new(2 * 6, 3);
    ensure(h == want, || format!("expansion {h}, expected {want}"))?;
    Ok(format!("h(S) = {h}"))
}

fn cheeger() -> Outcome {
    let mut graphs = 0;
    let mut tightest = f64::INFINITY;
    for d in [6u32, 8, 10] {
        let base = d as usize / 2 + 1;
        for n in base..=16 {
            let g = graph_at(d, n, 1).map_err(|e| e.to_string())?;
            let c = cheeger_check(&g).map_err(|e| e.to_string())?;
            let h = *c.h.numer() as f64 / *c.h.denom() as f64;
            ensure(c.ok, || format!("d={d} n={n}: h = {h} outside [{}, {}]", c.lower, c.upper))?;
            tightest = tightest.min(h - c.lower);
            graphs += 1;
        }
    }
    Ok(format!("{graphs} graphs, smallest h - lower = {tightest:.4}"))
}

fn mixing() -> Outcome {
    let small = mixing_suite_exhaustive(&graph_at(6, 8, 1).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let large =
        mixing_suite_sampled(&graph_at(6, 16, 1).map_err(|e| e.to_string())?, 10_000, 0).map_err(|e| e.to_string())?;
    ensure(small.failures == 0, || format!("n=8: {} failures", small.failures))?;
    ensure(large.failures == 0, || format!("n=16: {} failures", large.failures))?;
    ensure(large.pairs_checked == 10_000, || format!("n=16: {} samples", large.pairs_checked))?;
    Ok(format!(
        "{} exhaustive pairs, {} samples, min margin {:.4}",
        small.pairs_checked,
        large.pairs_checked,
        small.min_margin.min(large.min_margin)
    ))
}

fn rayleigh() -> Outcome {
    let start = Instant::now();
    let r = rayleigh_lower_bound_check(6, 6, 0.5, 1).map_err(|e| e.to_string())?;
    ensure(r.n == 257, || format!("n = {}", r.n))?;
    ensure(r.ok, || format!("lambda2 = {} < {}", r.lambda2, r.threshold))?;
    ensure(r.quotient_below_lambda2, || format!("quotient {} > lambda2 {}", r.quotient, r.lambda2))?;
    let took = within(start, Duration::from_secs(30))?;
    Ok(format!("lambda2 = {:.4}, quotient = {:.4}, {took:.2?}", r.lambda2, r.quotient))
}

/// Runs the script twice; `run_script` compares the network with the
/// reference after every event.
fn self_healing() -> Outcome {
    let start = Instant::now();
    let script = AdversaryScript::random(6, 200, 0.7, 2024);
    let a = run_script(6, 1, &script).map_err(|e| e.to_string())?;
    let b = run_script(6, 1, &script).map_err(|e| e.to_string())?;
    ensure(a.digest == b.digest, || "digests differ".into())?;
    for e in &a.events {
        let log_n = ceil_log2(e.cost.n_before.max(e.cost.n_after) as u64) as u64;
        ensure(e.cost.rounds <= 6 * log_n, || format!("event {}: {} rounds", e.index, e.cost.rounds))?;
        ensure(e.cost.messages <= 40 * log_n, || format!("event {}: {} messages", e.index, e.cost.messages))?;
    }
    let took = within(start, Duration::from_secs(60))?;
    Ok(format!(
        "final n = {}, rounds/log n <= {:.2}, messages/log n <= {:.2}, bits/log n <= {:.2}, {took:.2?}",
        a.final_n, a.fitted.rounds_per_log_n, a.fitted.messages_per_log_n, a.fitted.bits_per_log_n
    ))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("g{k}.txt"));
        let status = Command::new(env!("CARGO_BIN_EXE_expander"))
            .args(["grow", "--d", "6", "--n", "64", "--lift-seed", "1", "--out"])
            .arg(&out)
            .env_remove("GROW_LIFT_SEED")
            .status()
            .map_err(|e| e.to_string())?;
        ensure(status.success(), || format!("exit status {status}"))?;
        outputs.push(std::fs::read(&out).map_err(|e| e.to_string())?);
    }
    ensure(outputs[0] == outputs[1], || "outputs differ".into())?;
    let lib = write_graph(&graph_at(6, 64, 1).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(outputs[0] == lib.as_bytes(), || "binary output differs from the library graph".into())?;
    Ok(format!("{} identical bytes", outputs[0].len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("cost-bound", cost_bound),
        ("split-invariants", split_invariants),
        ("future-cuts", future_cuts),
        ("tightness", tightness),
        ("cheeger", cheeger),
        ("mixing", mixing),
        ("rayleigh", rayleigh),
        ("self-healing", self_healing),
        ("determinism", determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        match check() {
            Ok(detail) => println!("acceptance {}/9 {name}: PASS ({detail})", k + 1),
            Err(why) => {
                failed += 1;
                println!("acceptance {}/9 {name}: FAIL ({why})", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
