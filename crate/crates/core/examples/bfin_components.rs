//! Finite subsets of ℕ: components of the graph of ideals at finite
//! difference, and symbolic prime classification.

use std::collections::BTreeSet;

use lattice_repr::lazylf::{BFin, Covering};
use lattice_repr::repr::{components_finite, components_symbolic, SymbolicIdeals};
use lattice_repr::transpose::classify_prime_symbolic;
use lattice_repr::poset::Poset;

fn main() -> lattice_repr::Result<()> {
    println!("{}", components_symbolic(&BFin).to_json_pretty());

    let x: BTreeSet<u64> = [2, 5].into();
    println!("φ({x:?}) = {}", serde_json::to_string(&BFin.phi(&x))?);

    let c = Covering { lower: [2].into(), upper: [2, 5].into() };
    let v = classify_prime_symbolic(&BFin, &c, 32)?;
    println!("separator of {{2}} < {{2,5}} principal: {}, generator {:?}", v.is_principal(), v.generator());

    // finite analogue: the ideal graph of a 3-element antichain is connected
    let g = components_finite(&Poset::antichain(3), 1 << 12)?;
    println!("antichain(3): {} ideals, {} component(s)", g.ideals.len(), g.components);
    Ok(())
}
