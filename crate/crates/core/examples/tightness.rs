//! The tightness construction: from its adversarial start the method returns
//! a set with value 0 while the optimum is (α − 1/β)(d − 1).

use submin::prelude::*;
use submin::zoo::TightnessInstance;

fn main() -> Result<()> {
    println!("alpha,beta,d,returned,optimum");
    for (alpha, beta) in [(1.0, 0.5), (0.5, 0.5), (0.25, 1.0)] {
        for d in [4, 6, 8] {
            let t = TightnessInstance::new(d, alpha, beta)?;
            let h = Counted::new(t.objective());
            let r = minimize(&h, &PgmConfig::new(300).with_start(t.adversarial_start()))?;
            println!("{alpha},{beta},{d},{},{}", t.h_value(r.rounded_set), t.optimal_value());
        }
    }
    Ok(())
}
