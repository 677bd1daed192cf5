//! How often do random systems satisfy the identification hypotheses?
//!
//! `cargo run --release --example monte_carlo -- [trials] [seed]`

use hankel_ident::experiments::{mc_estimate, Property, TrialConfig};

fn main() -> hankel_ident::Result<()> {
    let mut args = std::env::args().skip(1);
    let trials = args.next().and_then(|s| s.parse().ok()).unwrap_or(2000);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);

    println!(
        "{:<26} {:>2} {:>9} {:>9} {:>9} {:>9}",
        "property", "n", "success", "failure", "rejected", "estimate"
    );
    for p in Property::ALL {
        for n in 2..=4 {
            let r = mc_estimate(p, &TrialConfig::new(n, trials, seed))?;
            println!(
                "{:<26} {n:>2} {:>9} {:>9} {:>9} {:>9.4}",
                p.name(),
                r.successes,
                r.failures,
                r.numerical_rejections,
                r.estimate
            );
        }
    }
    Ok(())
}
