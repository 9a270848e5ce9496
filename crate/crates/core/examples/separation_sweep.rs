//! Quantum versus classical success at equal message length over a doubling
//! grid of n, written as CSV to standard output.
//!
//! cargo run --release --example separation_sweep

use bhm::harness::{emit, run_separation_sweep, Format, SweepConfig};

fn main() -> bhm::Result<()> {
    let config = SweepConfig {
        n_min: 4,
        n_max: 1024,
        reps: 1,
        subset_size: None,
        trials: 20_000,
        seed: 42,
    };
    let table = run_separation_sweep(&config)?;
    for row in 0..table.rows.len() {
        let col = |name| table.float(row, name).unwrap_or(f64::NAN);
        eprintln!(
            "2n={:>5}: quantum {:.3} vs classical {:.3} at {} bits",
            col("two_n"),
            col("quantum_success_t"),
            col("classical_success_t"),
            col("quantum_cost")
        );
    }
    emit(&table, Format::Csv, None)
}
