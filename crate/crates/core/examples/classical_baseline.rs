//! The classical subset protocol: Alice sends c bits of x and Bob votes
//! over the matching edges he can see. Compares Monte-Carlo success under
//! the hard distribution with the exact value from the internal-edge law.
//!
//! cargo run --release --example classical_baseline

use bhm::classical::{classical_run, expected_internal_edges, subset_exact_success};
use bhm::combinatorics::internal_edge_distribution;
use num_traits::ToPrimitive;

fn main() -> bhm::Result<()> {
    let n = 512;
    println!(
        "{:>5} {:>10} {:>10} {:>10} {:>10}",
        "c", "E[edges]", "simulated", "sigma", "exact"
    );
    for c in [4, 11, 32, 64, 128, 256] {
        let report = classical_run(n, c, 20_000, 7)?;
        let sigma = match report.method {
            bhm::classical::SuccessMethod::MonteCarlo { std_error, .. } => std_error,
            _ => unreachable!(),
        };
        let exact = subset_exact_success(n, c)?.to_f64().unwrap_or(f64::NAN);
        println!(
            "{c:>5} {:>10.3} {:>10.4} {sigma:>10.4} {exact:>10.4}",
            expected_internal_edges(n, c),
            report.success_prob
        );
    }

    let law = internal_edge_distribution(n, 11)?;
    println!("\nlaw of the number of visible edges for c=11, 2n=1024:");
    for (k, p) in law.iter().enumerate().take(4) {
        println!("  P(k={k}) = {:.6}", p.to_f64().unwrap_or(f64::NAN));
    }
    Ok(())
}
