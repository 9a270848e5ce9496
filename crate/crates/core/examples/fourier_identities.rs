//! Numerical checks of the Fourier toolkit on the Boolean cube: Parseval,
//! the convolution theorem, the hypercontractive (KKL) inequality, the
//! spectrum of the bias difference and the lifting identity.
//!
//! cargo run --release --example fourier_identities

use std::collections::BTreeSet;

use bhm::fourier::{
    bias_difference, check_kkl, check_lift_identity, check_parseval, convolve, convolve_spectral,
    f_spectrum_closed_form, transform, CubeFunction,
};
use bhm::harness::random_sign_function;
use bhm::rng::from_seed;
use bhm::{BitString, PerfectMatching};
use rand::Rng;

fn main() -> bhm::Result<()> {
    let mut rng = from_seed(3);
    let m = 8;
    let f = CubeFunction::from_fn(m, |_| rng.random_range(-1.0..1.0))?;
    let g = CubeFunction::from_fn(m, |_| rng.random_range(-1.0..1.0))?;
    let p = check_parseval(&f)?;
    println!("Parseval: |f|^2 = {:.6}, 2^m sum f^2 = {:.6}", p.lhs, p.rhs);

    let direct = convolve(&f, &g)?;
    let spectral = convolve_spectral(&f, &g)?;
    let gap = direct
        .values()
        .iter()
        .zip(spectral.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("convolution: direct vs spectral max gap {gap:.2e}");

    let h = random_sign_function(m, &mut rng);
    for delta in [0.0, 0.5, 1.0] {
        let k = check_kkl(&h, delta)?;
        println!("KKL δ={delta}: {:.5} <= {:.5} ({})", k.lhs, k.rhs, k.holds);
    }

    let n = 6;
    let spectrum = transform(&bias_difference(n)?)?;
    for s in ["100000", "110000", "111000", "111111"] {
        let s: BitString = s.parse()?;
        println!(
            "bias difference at s={s}: {:.6} (closed form {:.6})",
            spectrum.coefficient(&s)?,
            f_spectrum_closed_form(n, &s)?
        );
    }

    let matching = PerfectMatching::random(3, &mut rng);
    let set: BTreeSet<BitString> = (0..20).map(|_| BitString::random(6, &mut rng)).collect();
    println!(
        "lifting identity on |A|={} under M={matching}: gap {:.2e}",
        set.len(),
        check_lift_identity(&set, &matching)?
    );
    Ok(())
}
