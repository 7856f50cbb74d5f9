//! Graphviz output for a lattice, its filter lattice, its prime poset and an
//! ideal graph. Pipe a section into `dot -Tsvg` to draw it.

use lattice_repr::dot::{filter_lattice_dot, ideal_graph_dot, lattice_dot, prime_poset_dot, DEFAULT_DOT_LIMIT};
use lattice_repr::filters::{enumerate_filters, prime_poset};
use lattice_repr::lattice::FiniteLattice;
use lattice_repr::poset::{Poset, DEFAULT_IDEAL_LIMIT};
use lattice_repr::repr::components_finite;

fn main() -> lattice_repr::Result<()> {
    let l = FiniteLattice::divisors(12);
    println!("{}", lattice_dot(&l, DEFAULT_DOT_LIMIT)?);
    println!("{}", filter_lattice_dot(&enumerate_filters(&l, DEFAULT_IDEAL_LIMIT)?, DEFAULT_DOT_LIMIT)?);
    println!("{}", prime_poset_dot(&l, &prime_poset(&l)?, DEFAULT_DOT_LIMIT)?);
    let g = components_finite(&Poset::from_covers(3, &[(0, 1)])?, DEFAULT_IDEAL_LIMIT)?;
    println!("{}", ideal_graph_dot(&g, DEFAULT_DOT_LIMIT)?);
    Ok(())
}
