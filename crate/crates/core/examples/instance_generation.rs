//! Sampling from the hard distribution and classifying instances against
//! the promise, with the observed promise-violation rate next to its exact
//! value.
//!
//! cargo run --release --example instance_generation

use bhm::harness::generate_instances;
use bhm::instances::{outside_probability, sample_t, PromiseClass};
use bhm::rng::substream;

fn main() -> bhm::Result<()> {
    for inst in generate_instances(4, 3, 1)? {
        println!("{}", serde_json::to_string(&inst).expect("serializable"));
    }
    for n in [10, 50, 100, 200] {
        let trials = 50_000;
        let outside = (0..trials)
            .filter(|&i| sample_t(n, &mut substream(5, i)).promise_class() == PromiseClass::Outside)
            .count();
        println!(
            "n={n:>3}: outside the promise {:.4} (exact {:.4})",
            outside as f64 / trials as f64,
            outside_probability(n)
        );
    }
    Ok(())
}
