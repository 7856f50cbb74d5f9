//! The integer grid ℤ²: primes are half-planes, φ(x) is described by a base
//! plus a finite delta, and elements are rebuilt from their descriptors one
//! cover at a time.

use lattice_repr::lazylf::{Covering, SymbolicPrimes, ZGrid};
use lattice_repr::repr::{dp_join, dp_meet, inverse_phi, sym_diff, SymbolicIdeals};
use lattice_repr::transpose::classify_prime_symbolic;

fn main() -> lattice_repr::Result<()> {
    let z = ZGrid::new(2);
    let (x, y) = (vec![2, -1], vec![0, 3]);
    let (qx, qy) = (z.phi(&x), z.phi(&y));
    println!("φ{x:?} = {}", serde_json::to_string(&qx)?);
    println!("φ{y:?} = {}", serde_json::to_string(&qy)?);
    println!("|φx △ φy| = {}", sym_diff(&z, &qx, &qy).map_or(0, |d| d.len()));
    println!("φx ∧ φy = {}", serde_json::to_string(&dp_meet(&z, &qx, &qy)?)?);
    println!("φx ∨ φy = {}", serde_json::to_string(&dp_join(&z, &qx, &qy)?)?);

    let rec = inverse_phi(&z, &vec![0, 0], &qx)?;
    println!("rebuilding {x:?} from the origin in {} steps:", rec.steps.len());
    for s in &rec.steps {
        println!("  {:?} {:?}: {:?} -> {:?}", s.kind, s.prime, s.from, s.to);
    }

    let c = Covering { lower: vec![0, 0], upper: vec![1, 0] };
    println!("separator of {c:?}: {:?}", z.separator(&c)?);
    let v = classify_prime_symbolic(&z, &c, 8)?;
    println!("verdict: {}", serde_json::to_string_pretty(&v.to_json())?);
    Ok(())
}
