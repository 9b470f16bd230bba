//! Support recovery for least squares with an interval-type penalty,
//! compared with the best interval found by enumeration.

use submin::prelude::*;
use submin::zoo::regression::generate_regression;
use submin::zoo::{Regularizer, SolveMode};

fn main() -> Result<()> {
    let (d, k) = (30, 5);
    println!("n,lambda,pgm,best_interval,support");
    for n in [15, 60] {
        let planted = generate_regression(d, n, k, 0.01, 1e-3, Regularizer::ModifiedRange, 1)?;
        for lambda in [1e-3, 1e-2, 1e-1] {
            let inst = planted.instance.with_lambda(lambda);
            let h = Counted::new(inst.objective(SolveMode::Chain));
            let r = minimize(&h, &PgmConfig::new(500))?;
            let value = h.function().value(r.rounded_set)?;
            let (_, best) = inst.best_interval()?;
            println!("{n},{lambda},{value:.5},{best:.5},{}", r.rounded_set);
        }
        println!("# planted support {}", planted.support);
    }
    Ok(())
}
