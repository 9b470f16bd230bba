//! Minimize a layered cut with the projected subgradient method and compare
//! with brute force and with the certificate from its monotone split.

use submin::prelude::*;

fn main() -> Result<()> {
    let cut = CutInstance::layered(3, 4, 7)?;
    let d = cut.dim();
    let (f, g) = cut.monotone_split();
    let l = cut.lipschitz_bound();
    let h = Counted::new(cut);

    let iterations = 2000;
    let cfg = PgmConfig::new(iterations).with_lipschitz(l);
    let mut r = minimize(&h, &cfg)?;
    let found = h.function().value(r.rounded_set)?;

    let (s_star, opt) = brute_force_min(&Counted::new(h.function()))?;
    let ratios = r.certify(&Counted::new(&f), &Counted::new(&g), s_star)?;
    let bound = certificate_bound(f.value(s_star)?, g.value(s_star)?, 1.0, 1.0, l, cfg.radius_for(d), iterations)?;

    println!("d = {d}, L = {l:.3}, T = {iterations}");
    println!("PGM:         {} with H = {found:.4} (best iterate {})", r.rounded_set, r.best_iteration);
    println!("brute force: {s_star} with H = {opt:.4}");
    println!("certificate: H(Ŝ) <= {bound:.4}");
    println!("α_T = {:?}, β_T = {:?}", ratios.alpha_t, ratios.beta_t);
    println!("oracle calls: {}", r.oracle_calls);
    Ok(())
}
