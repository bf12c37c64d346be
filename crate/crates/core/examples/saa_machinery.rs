//! The pieces of stochastic approximation annealing on their own: the density
//! partition, the desired distribution, both schedules and the weight update.
//!
//! ```bash
//! cargo run -p densest --example saa_machinery
//! ```

use densest::saa::{gain_factor, region_index, sqrt_temperature, SaaConfig, ThetaVector};

/// Returns the adapted weights after feeding a fixed sequence of densities.
pub fn run() -> densest::Result<ThetaVector> {
    let cfg = SaaConfig::default();
    let thresholds = cfg.partition.thresholds();
    println!(
        "{} regions, thresholds {:.3} .. {:.3}",
        cfg.partition.regions(),
        thresholds[0],
        thresholds[thresholds.len() - 1]
    );
    println!(
        "pi[1] = {:.5}, pi[N] = {:.5}",
        cfg.pi[0],
        cfg.pi[cfg.pi.len() - 1]
    );

    for l in [1, 1500, 6000, 24_000] {
        println!(
            "l = {l:>6}  T = {:.6}  eta = {:.4}",
            sqrt_temperature(l),
            gain_factor(l)
        );
    }

    let mut theta = ThetaVector::zeros(cfg.partition.regions());
    for (l, d) in (1u64..).zip([0.2, 0.4, 0.4, 0.6, 0.8, 1.0]) {
        let region = region_index(&cfg.partition, d)?;
        theta.update(region, &cfg.pi, cfg.gain(l))?;
        println!(
            "density {d:.1} -> region {region:>2}, theta[region] = {:+.4}",
            theta.weight(region)
        );
    }
    println!("sum of theta {:+.3e}", theta.sum());
    Ok(theta)
}

fn main() -> densest::Result<()> {
    run().map(drop)
}
