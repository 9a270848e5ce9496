//! Exhaustive search for the best deterministic one-bit Alice map at n=2,
//! with the exact success of a few natural maps for comparison.
//!
//! cargo run --release --example yao_bruteforce

use bhm::classical::{bayes_success, bruteforce_optimal, AliceMap};

fn main() -> bhm::Result<()> {
    let n = 2;
    let best = bruteforce_optimal(n, 1)?;
    println!(
        "optimal one-bit success: {} ({} tables searched)",
        best.value, best.maps_searched
    );
    for (message, class) in best.witness.partition().iter().enumerate() {
        let inputs: Vec<String> = class.iter().map(ToString::to_string).collect();
        println!("  message {message}: {}", inputs.join(" "));
    }

    let maps = [
        ("constant", AliceMap::constant(n)?),
        ("parity of x", AliceMap::parity(n)?),
        ("first bit", AliceMap::truncation(n, 1)?),
        ("first two bits", AliceMap::truncation(n, 2)?),
        ("all of x", AliceMap::identity(n)?),
    ];
    for (name, map) in &maps {
        println!(
            "{name:>15} ({} bits): {}",
            map.message_bits(),
            bayes_success(map)?
        );
    }
    Ok(())
}
