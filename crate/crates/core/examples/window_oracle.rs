//! Materialize intervals of locally-finite lattices as finite lattices and
//! compare lazy operators with the window.

use lattice_repr::lazylf::{interval, BFin, Covering, NGrid, SymbolicPrimes, ZGrid, DEFAULT_WINDOW_LIMIT};

fn main() -> lattice_repr::Result<()> {
    let z = ZGrid::new(2);
    let w = interval(&z, &vec![-1, -1], &vec![1, 2], DEFAULT_WINDOW_LIMIT)?;
    println!("[(-1,-1), (1,2)] in ℤ²: {} elements, distributive {}", w.len(), w.lattice().is_distributive());
    let jis: Vec<_> = w.lattice().join_irreducibles().iter().map(|i| w.element(i).clone()).collect();
    println!("window join-irreducibles (all on the lower boundary): {jis:?}");

    let c = Covering { lower: vec![0, 0], upper: vec![0, 1] };
    let sep = w.separator(&c)?;
    let p = z.separator(&c)?;
    println!("separator {p:?} cuts out {} of {} window elements", sep.len(), w.len());

    let n = NGrid::new(3);
    let w = interval(&n, &vec![0, 0, 0], &vec![1, 1, 2], DEFAULT_WINDOW_LIMIT)?;
    println!("[0, (1,1,2)] in ℕ³: {} elements, rank of top {}", w.len(), w.rank(w.len() - 1));

    let w = interval(&BFin, &[1].into(), &[1, 2, 3, 4].into(), DEFAULT_WINDOW_LIMIT)?;
    println!("[{{1}}, {{1,2,3,4}}] in 𝔹_fin: {} elements", w.len());
    Ok(())
}
