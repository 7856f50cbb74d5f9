//! Birkhoff duality on a small poset: build the lattice of order ideals,
//! recover the poset from its join-irreducibles, and check the isomorphism.

use lattice_repr::lattice::{birkhoff_iso_check, Birkhoff};
use lattice_repr::poset::{Poset, DEFAULT_IDEAL_LIMIT};

fn main() -> lattice_repr::Result<()> {
    // the "N" poset: 0 < 2, 1 < 2, 1 < 3
    let p = Poset::from_covers(4, &[(0, 2), (1, 2), (1, 3)])?;
    let ideals = p.order_ideals(DEFAULT_IDEAL_LIMIT)?;
    println!("{} order ideals:", ideals.len());
    for i in &ideals {
        println!("  {:?}", i.members().to_vec());
    }

    let l = p.ideal_lattice(DEFAULT_IDEAL_LIMIT)?;
    println!("ideal lattice: {} elements, distributive = {}", l.len(), l.is_distributive());

    let b = Birkhoff::new(&l)?;
    println!("join-irreducibles: {:?}", b.irreducibles().iter().map(|&x| l.label(x)).collect::<Vec<_>>());
    println!("their order has covers {:?}", b.ji_poset().covers());
    for x in 0..l.len() {
        println!("  {:>12} -> {:?}", l.label(x), b.map(x).members().to_vec());
    }

    let r = birkhoff_iso_check(&l)?;
    println!("isomorphism holds: {}", r.holds);
    Ok(())
}
