//! Min-cut under multiplicative Gaussian noise: averaging more samples per
//! query closes the gap to the exact minimum.

use submin::noise::ApproxOracleBudget;
use submin::prelude::*;

fn main() -> Result<()> {
    let cut = CutInstance::layered(3, 4, 3)?;
    let (_, opt) = brute_force_min(&Counted::new(cut.clone()))?;
    let cfg = PgmConfig::new(400).with_lipschitz(cut.lipschitz_bound());

    println!("m,mean_gap,hits");
    for m in [1, 10, 100] {
        let mut gap = 0.0;
        let mut hits = 0;
        for seed in 0..10 {
            let spec = NoiseSpec::multiplicative_gaussian(1.0, 0.1, seed).with_bound(1.6);
            let r = minimize_noisy(&Counted::new(cut.clone()), spec, m, &cfg)?;
            gap += r.true_value - opt;
            hits += usize::from(r.true_value - opt < 1e-9);
        }
        println!("{m},{:.4},{hits}/10", gap / 10.0);
    }

    let b: ApproxOracleBudget = plan_budget(0.5, 0.1, cut.dim(), cut.lipschitz_bound(),
        Some(&NoiseSpec::multiplicative_gaussian(1.0, 0.1, 0).with_bound(1.6)), Some(10.0))?;
    println!("\nbudget for ε′ = 0.5, δ′ = 0.1: T = {}, m = {:?}", b.iterations, b.samples);
    Ok(())
}
