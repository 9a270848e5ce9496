//! Runs the one-way quantum protocol on a single instance: Alice's
//! log(2n)-qubit state, Bob's matching-basis measurement, and majority-vote
//! amplification compared with the exact binomial-tail prediction.
//!
//! cargo run --release --example quantum_protocol

use bhm::instances::sample_t;
use bhm::quantum::{
    exact_success, outcome_probabilities, prepare_state, qubit_cost, QuantumProtocol,
};
use bhm::rng::from_seed;

fn main() -> bhm::Result<()> {
    let mut rng = from_seed(2024);
    let n = 8;
    let inst = sample_t(n, &mut rng);
    println!(
        "instance: x={} M={} w={}",
        inst.x(),
        inst.matching(),
        inst.w()
    );
    println!(
        "Mx={} distance={} class={:?} source={:?}",
        inst.parities(),
        inst.distance(),
        inst.promise_class(),
        inst.source()
    );

    let state = prepare_state(inst.x());
    println!(
        "message: {} amplitudes on {} qubits",
        state.dim(),
        qubit_cost(n)
    );
    let probs = outcome_probabilities(&state, inst.matching())?;
    for (edge, pair) in inst.matching().edges().iter().zip(probs.chunks(2)) {
        println!("  edge {:?}: P(+)={:.3} P(-)={:.3}", edge, pair[0], pair[1]);
    }

    let protocol = QuantumProtocol::default();
    let trials = 20_000;
    for r in [1, 3, 9, 27] {
        let hits = (0..trials)
            .filter(|_| {
                protocol
                    .run_repeated(&inst, r, &mut rng)
                    .map(|t| t.correct() == Some(true))
                    .unwrap_or(false)
            })
            .count();
        println!(
            "r={r:>2}: simulated {:.4}, exact {:.4}, cost {} qubits",
            hits as f64 / trials as f64,
            exact_success(&inst, r)?,
            r * u64::from(qubit_cost(n))
        );
    }
    Ok(())
}
