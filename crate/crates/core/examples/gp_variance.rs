//! Sensor selection on a 1-D Gaussian process: variance reduction minus a
//! per-sensor cost, with the kernel-based β bound.

use submin::prelude::*;
use submin::zoo::{GpInstance, ItemCost};

fn main() -> Result<()> {
    let xs: Vec<f64> = (0..10).map(|i| i as f64 * 0.5).collect();
    let gp = GpInstance::rbf_1d(&xs, 0.4, 0.5, ItemCost::Linear { lambda: 0.3 })?;
    let beta = gp.variance_reduction_beta()?;
    let p = estimate_dr_parameters(&Counted::new(gp.variance_reduction()), Monotonicity::NonDecreasing)?;
    println!("β from the kernel spectrum: {beta:.4}");
    println!("exhaustive (α, β) of the variance reduction: ({:.4}, {:.4})", p.alpha, p.beta);

    let h = Counted::new(gp.objective());
    let r = minimize(&h, &PgmConfig::new(1000))?;
    let (s_star, opt) = brute_force_min(&Counted::new(gp.objective()))?;
    println!("PGM picks {} with H = {:.4}", r.rounded_set, h.evaluate(r.rounded_set)?);
    println!("optimum   {s_star} with H = {opt:.4}");
    Ok(())
}
