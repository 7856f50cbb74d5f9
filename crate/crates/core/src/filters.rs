//! Lattice filters and ideals of a finite lattice, the union-meet algebra,
//! the filter lattice, prime filters, and the map sending an element to the
//! primes containing it.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{set_label, FiniteLattice};
use crate::poset::Poset;
use crate::report::PropertyReport;
use crate::subset::Subset;

/// Nonempty, meet-closed, up-closed subset of a lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct LatticeFilter {
    members: Subset,
}

/// Nonempty, join-closed, down-closed subset of a lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct LatticeIdeal {
    members: Subset,
}

impl LatticeFilter {
    pub fn new(lattice: &FiniteLattice, members: Subset) -> Result<Self> {
        if is_lattice_filter(lattice, &members) {
            Ok(LatticeFilter { members })
        } else {
            Err(Error::NotAFilter)
        }
    }

    pub fn members(&self) -> &Subset {
        &self.members
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_proper(&self) -> bool {
        !self.members.is_full()
    }

    /// Intersection: the join in the filter lattice.
    pub fn intersection(&self, other: &LatticeFilter) -> LatticeFilter {
        LatticeFilter {
            members: self.members.intersection(&other.members),
        }
    }

    /// Order of the filter lattice: `self ≤ other` iff `other ⊆ self`.
    pub fn le(&self, other: &LatticeFilter) -> bool {
        other.members.is_subset(&self.members)
    }
}

impl LatticeIdeal {
    pub fn new(lattice: &FiniteLattice, members: Subset) -> Result<Self> {
        if is_lattice_ideal(lattice, &members) {
            Ok(LatticeIdeal { members })
        } else {
            Err(Error::HypothesisFailed("not a lattice ideal".into()))
        }
    }

    pub fn members(&self) -> &Subset {
        &self.members
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn is_proper(&self) -> bool {
        !self.members.is_full()
    }
}

/// `{y : x ≤ y}`
pub fn principal_filter(lattice: &FiniteLattice, x: usize) -> LatticeFilter {
    LatticeFilter {
        members: lattice.poset().up_set(x).clone(),
    }
}

/// `{y : y ≤ x}`
pub fn principal_ideal(lattice: &FiniteLattice, x: usize) -> LatticeIdeal {
    LatticeIdeal {
        members: lattice.poset().down_set(x).clone(),
    }
}

pub fn is_meet_closed(lattice: &FiniteLattice, s: &Subset) -> bool {
    s.iter()
        .all(|x| s.iter().all(|y| s.contains(lattice.meet(x, y))))
}

pub fn is_join_closed(lattice: &FiniteLattice, s: &Subset) -> bool {
    s.iter()
        .all(|x| s.iter().all(|y| s.contains(lattice.join(x, y))))
}

pub fn is_lattice_filter(lattice: &FiniteLattice, s: &Subset) -> bool {
    s.universe() == lattice.len()
        && !s.is_empty()
        && lattice.poset().is_order_filter(s)
        && is_meet_closed(lattice, s)
}

pub fn is_lattice_ideal(lattice: &FiniteLattice, s: &Subset) -> bool {
    s.universe() == lattice.len()
        && !s.is_empty()
        && lattice.poset().is_order_ideal(s)
        && is_join_closed(lattice, s)
}

/// Proper, and `x ∨ y ∈ f` forces `x ∈ f` or `y ∈ f`.
pub fn is_prime_filter(lattice: &FiniteLattice, f: &LatticeFilter) -> bool {
    if !f.is_proper() {
        return false;
    }
    let outside = f.members.complement();
    let ok = outside
        .iter()
        .all(|x| outside.iter().all(|y| !f.contains(lattice.join(x, y))));
    ok
}

/// Proper, and `x ∧ y ∈ i` forces `x ∈ i` or `y ∈ i`.
pub fn is_prime_ideal(lattice: &FiniteLattice, i: &LatticeIdeal) -> bool {
    if !i.is_proper() {
        return false;
    }
    let outside = i.members.complement();
    let ok = outside
        .iter()
        .all(|x| outside.iter().all(|y| !i.contains(lattice.meet(x, y))));
    ok
}

/// The raw set `{x ∧ y : x ∈ f, y ∈ g}` with no closure applied.
pub fn union_meet_raw(lattice: &FiniteLattice, f: &LatticeFilter, g: &LatticeFilter) -> Subset {
    let mut out = Subset::empty(lattice.len());
    for x in f.members.iter() {
        for y in g.members.iter() {
            out.insert(lattice.meet(x, y));
        }
    }
    out
}

/// The raw set `{x ∨ y : x ∈ f, y ∈ g}`.
pub fn union_join_raw(lattice: &FiniteLattice, f: &LatticeIdeal, g: &LatticeIdeal) -> Subset {
    let mut out = Subset::empty(lattice.len());
    for x in f.members.iter() {
        for y in g.members.iter() {
            out.insert(lattice.join(x, y));
        }
    }
    out
}

/// `f ⩓ g`, the meet in the filter lattice. The raw set is materialized and
/// then checked against the filter axioms; no closure is taken.
pub fn union_meet(lattice: &FiniteLattice, f: &LatticeFilter, g: &LatticeFilter) -> Result<LatticeFilter> {
    lattice.require_distributive()?;
    let raw = union_meet_raw(lattice, f, g);
    if !is_lattice_filter(lattice, &raw) {
        return Err(Error::PropertyViolated {
            property: "union-meet-is-meet-closure".into(),
            detail: format!("union-meet {raw:?} is not a lattice filter"),
        });
    }
    Ok(LatticeFilter { members: raw })
}

/// `f ⩔ g` on lattice ideals.
pub fn union_join(lattice: &FiniteLattice, f: &LatticeIdeal, g: &LatticeIdeal) -> Result<LatticeIdeal> {
    lattice.require_distributive()?;
    let raw = union_join_raw(lattice, f, g);
    if !is_lattice_ideal(lattice, &raw) {
        return Err(Error::PropertyViolated {
            property: "union-join-is-join-closure".into(),
            detail: format!("union-join {raw:?} is not a lattice ideal"),
        });
    }
    Ok(LatticeIdeal { members: raw })
}

/// Complement of a prime filter, checked to be a prime lattice ideal.
pub fn complement(lattice: &FiniteLattice, f: &LatticeFilter) -> Result<LatticeIdeal> {
    let members = f.members.complement();
    let ideal = LatticeIdeal { members };
    if is_lattice_ideal(lattice, &ideal.members) && is_prime_ideal(lattice, &ideal) {
        Ok(ideal)
    } else {
        Err(Error::NotPrime)
    }
}

/// Minimum element of a filter of a finite lattice, if the filter is
/// principal on it.
pub fn generator(lattice: &FiniteLattice, f: &LatticeFilter) -> Option<usize> {
    let first = f.members.first()?;
    let m = f.members.iter().fold(first, |acc, x| lattice.meet(acc, x));
    (f.contains(m) && *lattice.poset().up_set(m) == f.members).then_some(m)
}

/// The lattice of all lattice filters under inverse inclusion.
#[derive(Clone, Debug)]
pub struct FilterLattice {
    pub filters: Vec<LatticeFilter>,
    /// Element `i` is `filters[i]`; join is ∩, meet is ⩓.
    pub lattice: FiniteLattice,
    pub generators: Vec<Option<usize>>,
}

impl FilterLattice {
    pub fn all_principal(&self) -> bool {
        self.generators.iter().all(Option::is_some)
    }

    pub fn index_of(&self, f: &LatticeFilter) -> Option<usize> {
        self.filters.iter().position(|g| g == f)
    }
}

/// Enumerates every lattice filter by scanning the up-sets of the order and
/// keeping the nonempty meet-closed ones. On a finite lattice every filter
/// should come out principal; `generators` records whether that held.
pub fn enumerate_filters(lattice: &FiniteLattice, limit: usize) -> Result<FilterLattice> {
    lattice.require_distributive()?;
    let filters: Vec<LatticeFilter> = lattice
        .poset()
        .order_filters(limit)?
        .into_iter()
        .filter(|s| !s.is_empty() && is_meet_closed(lattice, s))
        .map(|members| LatticeFilter { members })
        .collect();
    let m = filters.len();
    let index: HashMap<&Subset, usize> = filters.iter().enumerate().map(|(i, f)| (&f.members, i)).collect();
    let generators: Vec<Option<usize>> = filters.iter().map(|f| generator(lattice, f)).collect();

    let mut meet = vec![0usize; m * m];
    let mut join = vec![0usize; m * m];
    for a in 0..m {
        for b in a..m {
            let cap = filters[a].members.intersection(&filters[b].members);
            let j = *index.get(&cap).ok_or_else(|| Error::PropertyViolated {
                property: "filter-lattice-bounds".into(),
                detail: format!("intersection of filters {a} and {b} is not a filter"),
            })?;
            let um = union_meet(lattice, &filters[a], &filters[b])?;
            let mt = *index.get(&um.members).ok_or_else(|| Error::PropertyViolated {
                property: "filter-lattice-bounds".into(),
                detail: format!("union-meet of filters {a} and {b} missing from enumeration"),
            })?;
            join[a * m + b] = j;
            join[b * m + a] = j;
            meet[a * m + b] = mt;
            meet[b * m + a] = mt;
        }
    }
    let labels = filters
        .iter()
        .zip(&generators)
        .map(|(f, g)| match g {
            Some(x) => format!("PF({})", lattice.label(*x)),
            None => set_label(lattice.poset(), &f.members),
        })
        .collect();
    let poset = Poset::from_relation(m, |a, b| filters[b].members.is_subset(&filters[a].members))?
        .with_labels(labels);
    let as_lattice = FiniteLattice::from_tables(poset, meet, join).map_err(|e| Error::PropertyViolated {
        property: "filter-lattice-bounds".into(),
        detail: format!("∩/⩓ are not the join/meet of the filter order: {e}"),
    })?;
    Ok(FilterLattice {
        filters,
        lattice: as_lattice,
        generators,
    })
}

/// Prime filters of a finite distributive lattice under inverse inclusion.
#[derive(Clone, Debug)]
pub struct PrimePoset {
    pub primes: Vec<LatticeFilter>,
    pub order: Poset,
    /// Generator `x` with `PF(x)` equal to the prime, when there is one.
    pub witnesses: Vec<Option<usize>>,
}

impl PrimePoset {
    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Indices of the primes containing `x`.
    pub fn phi(&self, x: usize) -> Subset {
        Subset::from_indices(
            self.primes.len(),
            (0..self.primes.len()).filter(|&i| self.primes[i].contains(x)),
        )
    }

    pub fn index_of_generator(&self, x: usize) -> Option<usize> {
        self.witnesses.iter().position(|w| *w == Some(x))
    }
}

/// Every filter of a finite lattice contains the meet of its members, so the
/// principal filters are all the filters; the primes are found among them by
/// the pairwise primality test.
pub fn prime_poset(lattice: &FiniteLattice) -> Result<PrimePoset> {
    lattice.require_distributive()?;
    let mut found: Vec<(LatticeFilter, usize)> = (0..lattice.len())
        .map(|x| (principal_filter(lattice, x), x))
        .filter(|(f, _)| is_prime_filter(lattice, f))
        .collect();
    found.sort_by(|a, b| a.0.members.canonical_cmp(&b.0.members));
    let (primes, gens): (Vec<_>, Vec<_>) = found.into_iter().unzip();
    let labels = gens.iter().map(|&x| format!("PF({})", lattice.label(x))).collect();
    let order = Poset::from_relation(primes.len(), |a, b| primes[a].le(&primes[b]))?.with_labels(labels);
    Ok(PrimePoset {
        primes,
        order,
        witnesses: gens.into_iter().map(Some).collect(),
    })
}

/// The set of primes containing `x`, as indices into `prime_poset(lattice)`.
pub fn phi(lattice: &FiniteLattice, x: usize) -> Result<Subset> {
    Ok(prime_poset(lattice)?.phi(x))
}

/// First prime (canonical order) containing `x` but not `y`.
pub fn separating_prime(lattice: &FiniteLattice, primes: &PrimePoset, x: usize, y: usize) -> Result<LatticeFilter> {
    if lattice.leq(x, y) {
        return Err(Error::NotSeparable { x, y });
    }
    primes
        .primes
        .iter()
        .find(|p| p.contains(x) && !p.contains(y))
        .cloned()
        .ok_or_else(|| Error::PropertyViolated {
            property: "prime-separation".into(),
            detail: format!("no prime contains {} but not {}", lattice.label(x), lattice.label(y)),
        })
}

/// Checks, in the materialized filter lattice, that its join-irreducible
/// elements are exactly the prime filters.
pub fn ji_prime_check(lattice: &FiniteLattice, limit: usize) -> Result<PropertyReport> {
    let fl = enumerate_filters(lattice, limit)?;
    let ji = fl.lattice.join_irreducibles_by_covers();
    let mut report = PropertyReport::new("join-irreducible-prime");
    for (i, f) in fl.filters.iter().enumerate() {
        let prime = is_prime_filter(lattice, f);
        report.record(ji.contains(i) == prime, || {
            format!(
                "filter {:?}: join-irreducible in F = {}, prime = {}",
                f.members,
                ji.contains(i),
                prime
            )
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::DEFAULT_IDEAL_LIMIT;

    fn set(l: &FiniteLattice, xs: &[usize]) -> Subset {
        Subset::from_indices(l.len(), xs.iter().copied())
    }

    #[test]
    fn principal_filters() {
        let c3 = FiniteLattice::chain(3);
        assert_eq!(principal_filter(&c3, 1).members().to_vec(), vec![1, 2]);
        let b2 = FiniteLattice::boolean(2);
        assert!(principal_filter(&b2, 0).members().is_full());
        let d12 = FiniteLattice::divisors(12);
        let labels: Vec<String> = principal_filter(&d12, 1).members().iter().map(|i| d12.label(i)).collect();
        assert_eq!(labels, vec!["2", "4", "6", "12"]);
        assert_eq!(principal_ideal(&d12, 4).members().to_vec(), vec![0, 1, 2, 4]);
    }

    #[test]
    fn filter_predicate() {
        let b2 = FiniteLattice::boolean(2); // 0=∅ 1={a} 2={b} 3=⊤
        assert!(is_lattice_filter(&b2, &set(&b2, &[1, 3])));
        assert!(!is_lattice_filter(&b2, &set(&b2, &[1, 2, 3])));
        assert!(!is_lattice_filter(&b2, &Subset::empty(4)));
    }

    #[test]
    fn union_meet_examples() {
        let b2 = FiniteLattice::boolean(2);
        let fa = principal_filter(&b2, 1);
        let fb = principal_filter(&b2, 2);
        assert_eq!(union_meet(&b2, &fa, &fb).unwrap(), principal_filter(&b2, 0));
        assert_eq!(union_meet(&b2, &fa, &fa).unwrap(), fa);

        let m3 = FiniteLattice::m3();
        let pa = principal_filter(&m3, 1);
        let pb = principal_filter(&m3, 2);
        assert_eq!(union_meet_raw(&m3, &pa, &pb).to_vec(), vec![0, 1, 2, 4]);
        assert!(!m3.poset().is_order_filter(&union_meet_raw(&m3, &pa, &pb)));
        assert!(matches!(union_meet(&m3, &pa, &pb), Err(Error::NotDistributive(_))));
    }

    #[test]
    fn filter_enumeration() {
        let c3 = FiniteLattice::chain(3);
        let fl = enumerate_filters(&c3, DEFAULT_IDEAL_LIMIT).unwrap();
        let lists: Vec<Vec<usize>> = fl.filters.iter().map(|f| f.members().to_vec()).collect();
        assert_eq!(lists, vec![vec![2], vec![1, 2], vec![0, 1, 2]]);
        assert!(fl.all_principal());
        assert_eq!(fl.lattice.len(), 3);
        assert_eq!(fl.lattice.poset().covers().len(), 2);

        let b2 = FiniteLattice::boolean(2);
        let fl = enumerate_filters(&b2, DEFAULT_IDEAL_LIMIT).unwrap();
        assert_eq!(fl.filters.len(), 4);
        assert_eq!(fl.lattice.join_irreducibles().len(), 2);

        let d12 = FiniteLattice::divisors(12);
        let fl = enumerate_filters(&d12, DEFAULT_IDEAL_LIMIT).unwrap();
        assert_eq!(fl.filters.len(), 6);
        assert!(fl.all_principal());
    }

    #[test]
    fn primality() {
        let b2 = FiniteLattice::boolean(2);
        assert!(is_prime_filter(&b2, &principal_filter(&b2, 1)));
        assert!(!is_prime_filter(&b2, &principal_filter(&b2, 3)));
        assert!(!is_prime_filter(&b2, &principal_filter(&b2, 0)));
    }

    #[test]
    fn complements() {
        let c3 = FiniteLattice::chain(3);
        assert_eq!(complement(&c3, &principal_filter(&c3, 1)).unwrap().members().to_vec(), vec![0]);
        let b2 = FiniteLattice::boolean(2);
        assert_eq!(complement(&b2, &principal_filter(&b2, 1)).unwrap().members().to_vec(), vec![0, 2]);
        assert_eq!(complement(&b2, &principal_filter(&b2, 3)), Err(Error::NotPrime));
    }

    #[test]
    fn prime_posets() {
        let c3 = FiniteLattice::chain(3);
        let pp = prime_poset(&c3).unwrap();
        assert_eq!(pp.len(), 2);
        let i1 = pp.index_of_generator(1).unwrap();
        let i2 = pp.index_of_generator(2).unwrap();
        assert!(pp.order.leq(i1, i2));

        let b3 = FiniteLattice::boolean(3);
        let pp = prime_poset(&b3).unwrap();
        assert_eq!(pp.len(), 3);
        assert_eq!(pp.order.width(), 3);

        let d12 = FiniteLattice::divisors(12);
        let pp = prime_poset(&d12).unwrap();
        let gens: Vec<String> = pp.witnesses.iter().map(|w| d12.label(w.unwrap())).collect();
        let mut sorted = gens.clone();
        sorted.sort();
        assert_eq!(sorted, vec!["2", "3", "4"]);
        let i2 = pp.index_of_generator(1).unwrap();
        let i4 = pp.index_of_generator(3).unwrap();
        assert!(pp.order.leq(i2, i4));
        assert_eq!(pp.order.covers().len(), 1);
    }

    #[test]
    fn phi_examples() {
        let d12 = FiniteLattice::divisors(12);
        let pp = prime_poset(&d12).unwrap();
        assert!(pp.phi(d12.top()).is_full());
        let six: Vec<String> = pp.phi(4).iter().map(|i| d12.label(pp.witnesses[i].unwrap())).collect();
        let mut six = six;
        six.sort();
        assert_eq!(six, vec!["2", "3"]);
        let b2 = FiniteLattice::boolean(2);
        let pp = prime_poset(&b2).unwrap();
        let phi_a = pp.phi(1);
        assert_eq!(phi_a.len(), 1);
        assert_eq!(pp.primes[phi_a.first().unwrap()], principal_filter(&b2, 1));
    }

    #[test]
    fn separation() {
        let b2 = FiniteLattice::boolean(2);
        let pp = prime_poset(&b2).unwrap();
        assert_eq!(separating_prime(&b2, &pp, 1, 2).unwrap(), principal_filter(&b2, 1));
        assert_eq!(separating_prime(&b2, &pp, 0, 2), Err(Error::NotSeparable { x: 0, y: 2 }));
        let c3 = FiniteLattice::chain(3);
        let pp = prime_poset(&c3).unwrap();
        assert_eq!(separating_prime(&c3, &pp, 2, 1).unwrap().members().to_vec(), vec![2]);
    }

    #[test]
    fn ji_prime_on_fixtures() {
        for l in [FiniteLattice::chain(3), FiniteLattice::boolean(2), FiniteLattice::divisors(12)] {
            let r = ji_prime_check(&l, DEFAULT_IDEAL_LIMIT).unwrap();
            assert!(r.passed(), "{:?}", r.failures);
            assert_eq!(r.instances, l.len());
        }
        let c3 = FiniteLattice::chain(3);
        let fl = enumerate_filters(&c3, DEFAULT_IDEAL_LIMIT).unwrap();
        let primes: Vec<Vec<usize>> = fl
            .filters
            .iter()
            .filter(|f| is_prime_filter(&c3, f))
            .map(|f| f.members().to_vec())
            .collect();
        assert_eq!(primes, vec![vec![2], vec![1, 2]]);
    }
}
