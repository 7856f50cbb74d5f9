//! Prime filters of a finite distributive lattice, the φ embedding, and a
//! separating prime for each incomparable pair.

use lattice_repr::filters::{phi, prime_poset, separating_prime};
use lattice_repr::lattice::FiniteLattice;

fn main() -> lattice_repr::Result<()> {
    let l = FiniteLattice::divisors(36);
    let pp = prime_poset(&l)?;
    println!("D(36) has {} prime filters:", pp.len());
    for (i, f) in pp.primes.iter().enumerate() {
        let members: Vec<String> = f.members().iter().map(|x| l.label(x)).collect();
        println!("  {} = {members:?}", pp.order.label(i));
    }
    println!("prime order covers: {:?}", pp.order.covers());

    for x in 0..l.len() {
        let labels: Vec<String> = phi(&l, x)?.iter().map(|i| pp.order.label(i)).collect();
        println!("φ({}) = {labels:?}", l.label(x));
    }

    for x in 0..l.len() {
        for y in 0..l.len() {
            if x < y && !l.leq(x, y) && !l.leq(y, x) {
                let p = separating_prime(&l, &pp, x, y)?;
                println!("{} ∈ P, {} ∉ P for P = {:?}", l.label(x), l.label(y), p.members().iter().map(|i| l.label(i)).collect::<Vec<_>>());
            }
        }
    }
    Ok(())
}
