//! The Lovász extension of a small cut function: it agrees with the set
//! function on indicator vectors and is the dot product with the greedy
//! vector everywhere else.

use submin::prelude::*;

fn main() -> Result<()> {
    let cut = CutInstance::undirected(4, &[(0, 1, 1.0), (1, 2, 2.0), (2, 3, 1.0), (3, 0, 0.5)])?;
    let h = Counted::new(cut);

    for s in GroundSet::new(4)?.subsets().take(6) {
        let v = lovasz_value(&h, &FractionalPoint::indicator(s))?;
        println!("H({s}) = {}   h_L(1_S) = {v}", h.evaluate(s)?);
    }

    let x = FractionalPoint::new(vec![0.9, 0.2, 0.7, 0.4])?;
    let kappa = greedy_subgradient(&h, &x)?;
    println!("\nx = {:?}", x.coords());
    println!("ordering = {:?}", kappa.ordering.perm());
    println!("greedy vector = {:?}", kappa.kappa);
    println!("h_L(x) = {}  κ·x = {}", lovasz_value(&h, &x)?, kappa.dot(x.coords()));

    let (set, value) = round_by_superlevel(&h, &x)?;
    println!("best superlevel set {set} with value {value}");
    println!("oracle calls: {}", h.call_count());
    Ok(())
}
