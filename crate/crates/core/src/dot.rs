//! Graphviz output. Hasse diagrams are drawn bottom-up with edges along
//! covers; elements of equal height share a rank.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::filters::{FilterLattice, PrimePoset};
use crate::lattice::FiniteLattice;
use crate::poset::Poset;
use crate::repr::IdealGraph;

/// Default bound on nodes in emitted graphs.
pub const DEFAULT_DOT_LIMIT: usize = 4096;

const PALETTE: [&str; 8] = [
    "#8dd3c7", "#fdb462", "#bebada", "#fb8072", "#80b1d3", "#b3de69", "#fccde5", "#d9d9d9",
];

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn check_size(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        Err(Error::SizeLimitExceeded { what: "nodes", limit })
    } else {
        Ok(())
    }
}

pub fn hasse_dot(p: &Poset, name: &str, limit: usize) -> Result<String> {
    check_size(p.len(), limit)?;
    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", escape(name)).unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=ellipse];").unwrap();
    for i in 0..p.len() {
        writeln!(out, "  n{i} [label=\"{}\"];", escape(&p.label(i))).unwrap();
    }
    let mut ranks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..p.len() {
        ranks.entry(p.height(i)).or_default().push(i);
    }
    for members in ranks.values() {
        let nodes: Vec<String> = members.iter().map(|i| format!("n{i}")).collect();
        writeln!(out, "  {{ rank=same; {}; }}", nodes.join("; ")).unwrap();
    }
    let mut covers = p.covers().to_vec();
    covers.sort();
    for (lo, hi) in covers {
        writeln!(out, "  n{lo} -> n{hi};").unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}

pub fn lattice_dot(l: &FiniteLattice, limit: usize) -> Result<String> {
    hasse_dot(l.poset(), "lattice", limit)
}

pub fn filter_lattice_dot(f: &FilterLattice, limit: usize) -> Result<String> {
    hasse_dot(f.lattice.poset(), "filters", limit)
}

/// The prime poset, nodes labelled `PF(x)` by generator when principal.
pub fn prime_poset_dot(l: &FiniteLattice, pp: &PrimePoset, limit: usize) -> Result<String> {
    let labels = (0..pp.len())
        .map(|i| match pp.witnesses[i] {
            Some(x) => format!("PF({})", l.label(x)),
            None => format!("p{i}"),
        })
        .collect();
    hasse_dot(&pp.order.clone().with_labels(labels), "primes", limit)
}

/// Undirected ideal graph, nodes filled by component.
pub fn ideal_graph_dot(g: &IdealGraph, limit: usize) -> Result<String> {
    check_size(g.ideals.len(), limit)?;
    let mut out = String::new();
    writeln!(out, "graph \"ideals\" {{").unwrap();
    writeln!(out, "  node [shape=box, style=filled];").unwrap();
    for (i, s) in g.ideals.iter().enumerate() {
        let members: Vec<String> = s.iter().map(|e| g.poset.label(e)).collect();
        writeln!(
            out,
            "  n{i} [label=\"{{{}}}\", fillcolor=\"{}\"];",
            escape(&members.join(",")),
            PALETTE[g.component[i] % PALETTE.len()]
        )
        .unwrap();
    }
    for &(a, b) in &g.edges {
        writeln!(out, "  n{a} -- n{b};").unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::prime_poset;
    use crate::poset::DEFAULT_IDEAL_LIMIT;
    use crate::repr::components_finite;

    fn count(s: &str, pat: &str) -> usize {
        s.lines().filter(|l| l.contains(pat)).count()
    }

    #[test]
    fn chain_of_three() {
        let d = lattice_dot(&FiniteLattice::chain(3), DEFAULT_DOT_LIMIT).unwrap();
        assert_eq!(count(&d, "[label="), 3);
        assert_eq!(count(&d, "->"), 2);
        assert!(d.contains("rankdir=BT"));
    }

    #[test]
    fn primes_of_twelve() {
        let l = FiniteLattice::divisors(12);
        let d = prime_poset_dot(&l, &prime_poset(&l).unwrap(), DEFAULT_DOT_LIMIT).unwrap();
        assert_eq!(count(&d, "[label="), 3);
        assert_eq!(count(&d, "->"), 1);
        assert!(d.contains("PF(2)") && d.contains("PF(4)"));
    }

    #[test]
    fn cube_graph_one_color() {
        let g = components_finite(&Poset::antichain(3), DEFAULT_IDEAL_LIMIT).unwrap();
        let d = ideal_graph_dot(&g, DEFAULT_DOT_LIMIT).unwrap();
        assert_eq!(count(&d, "--"), 12);
        assert_eq!(count(&d, PALETTE[0]), 8);
        assert_eq!(d, ideal_graph_dot(&g, DEFAULT_DOT_LIMIT).unwrap());
    }

    #[test]
    fn size_bound() {
        assert!(matches!(
            lattice_dot(&FiniteLattice::chain(10), 5),
            Err(Error::SizeLimitExceeded { .. })
        ));
    }
}
