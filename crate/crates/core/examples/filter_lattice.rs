//! Filters of the divisor lattice of 60: every filter is principal, the
//! filter lattice is distributive, and M3 is rejected.

use lattice_repr::error::Error;
use lattice_repr::filters::{enumerate_filters, principal_filter, union_meet, union_meet_raw};
use lattice_repr::lattice::FiniteLattice;
use lattice_repr::poset::DEFAULT_IDEAL_LIMIT;

fn main() -> lattice_repr::Result<()> {
    let l = FiniteLattice::divisors(60);
    let f = enumerate_filters(&l, DEFAULT_IDEAL_LIMIT)?;
    println!("D(60): {} elements, {} filters, all principal: {}", l.len(), f.filters.len(), f.all_principal());
    println!("filter lattice distributive: {}", f.lattice.is_distributive());

    let (a, b) = (4, 6);
    let idx = |v: u64| (0..l.len()).find(|&i| l.label(i) == v.to_string()).unwrap();
    let (fa, fb) = (principal_filter(&l, idx(a)), principal_filter(&l, idx(b)));
    let m = union_meet(&l, &fa, &fb)?;
    let labels: Vec<String> = m.members().iter().map(|i| l.label(i)).collect();
    println!("PF({a}) ⩓ PF({b}) = {labels:?}");

    let m3 = FiniteLattice::m3();
    let (x, y) = (principal_filter(&m3, 1), principal_filter(&m3, 2));
    println!("M3 raw union-meet: {:?}", union_meet_raw(&m3, &x, &y).to_vec());
    match union_meet(&m3, &x, &y) {
        Err(Error::NotDistributive(w)) => println!("M3 rejected, distributivity witness {w:?}"),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
