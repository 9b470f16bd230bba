//! The hidden-partition instance: only near-balanced sets hide the minimum,
//! so random queries almost never see anything but zero.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use submin::prelude::*;
use submin::zoo::HardnessInstance;

fn main() -> Result<()> {
    let d = 12;
    let h = HardnessInstance::new(d, None, 0.5, 1.0, 5)?;
    println!("threshold ε = {}, hidden part C = {}", h.eps(), h.part_c());
    println!("H(C) = {} (optimum {})", h.value(h.part_c())?, h.optimal_value());

    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let trials = 10_000;
    let nonzero = (0..trials)
        .filter(|_| {
            let s = Subset::from_mask(d, rng.random_range(0..1u64 << d)).unwrap();
            h.value(s).unwrap() != 0.0
        })
        .count();
    println!("random sets with nonzero value: {nonzero}/{trials}");

    for eps in [None, Some(1.0 / d as f64)] {
        let inst = HardnessInstance::new(d, eps, 0.5, 1.0, 5)?;
        let v = violation_eps(&Counted::new(inst), 0.5)?;
        println!("ε = {:.4}: violation ε_H = {v:.4}", inst.eps());
    }
    Ok(())
}
