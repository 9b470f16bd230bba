//! Split an arbitrary set function into F − G and check the parts.

use submin::decomp::decomposition_bound;
use submin::prelude::*;
use submin::zoo::RandomTable;

fn main() -> Result<()> {
    let d = 6;
    let h = Counted::new(RandomTable::new(d, 1.0, 42)?);
    let eps = violation_eps(&h, 0.5)?;
    let dec = decompose(&h, 0.5, 0.5, eps)?;
    let spec = dec.spec();
    println!("ε_H = {eps:.4}, witness {:?}, scale = {:.4}, V⁻ = {}", spec.witness, spec.scale, spec.v_minus);

    let pf = estimate_dr_parameters(&Counted::new(dec.f()), Monotonicity::NonDecreasing)?;
    let pg = estimate_dr_parameters(&Counted::new(dec.g()), Monotonicity::NonDecreasing)?;
    println!("F: α = {:.4}", pf.alpha);
    println!("G: α = {:.4}, β = {:.4}", pg.alpha, pg.beta);

    let (s_star, h_star) = brute_force_min(&h)?;
    let bound = decomposition_bound(spec, h_star, s_star, 0.0);
    println!("H* = {h_star:.4} at {s_star}; guarantee H(Ŝ) <= {bound:.4}");

    let r = minimize(&h, &PgmConfig::new(2000))?;
    println!("PGM returned {} with H = {:.4}", r.rounded_set, h.evaluate(r.rounded_set)?);
    Ok(())
}
