//! Counting perfect matchings and the probability γ_k that a fixed weight-k
//! string is a lifted character, exactly and by simulation, with the bound
//! and exponent used to show the classical lower bound.
//!
//! cargo run --release --example matching_combinatorics

use bhm::combinatorics::{count_matchings, gamma_report, proof_exponent};
use bhm::rng::from_seed;

fn main() -> bhm::Result<()> {
    for t in (2..=12).step_by(2) {
        println!("perfect matchings of {t} points: {}", count_matchings(t)?);
    }
    let mut rng = from_seed(11);
    let n = 8;
    println!(
        "\n{:>3} {:>12} {:>10} {:>10} {:>10}",
        "k", "exact", "mc", "bound", "exponent"
    );
    for k in (2..=10).step_by(2) {
        let r = gamma_report(n, k, Some(200_000), &mut rng)?;
        println!(
            "{k:>3} {:>12} {:>10.5} {:>10.5} {:>10.3}",
            r.exact_fraction,
            r.mc_estimate.unwrap_or(f64::NAN),
            r.bound,
            proof_exponent(n, k)?
        );
    }
    Ok(())
}
