//! Finite lattices: meet/join tables, distributivity, irreducibles, grading,
//! and the classical Birkhoff correspondence with order ideals of the
//! join-irreducibles.

use std::collections::{HashMap, VecDeque};
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poset::{OrderIdeal, Poset, DEFAULT_IDEAL_LIMIT};
use crate::subset::Subset;

/// Lattices up to this many elements keep dense meet/join tables; larger
/// ones compute meets and joins from the order on demand.
pub const TABLE_LIMIT: usize = 4096;

#[derive(Clone, Debug)]
enum Ops {
    Tables { meet: Vec<u32>, join: Vec<u32> },
    OnDemand,
}

#[derive(Clone, Debug)]
pub struct FiniteLattice {
    poset: Poset,
    ops: Ops,
    bottom: usize,
    top: usize,
    distributive: OnceLock<Option<(usize, usize, usize)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankInfo {
    pub graded: bool,
    /// Length of the longest chain from the bottom; a rank function when `graded`.
    pub rank: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IsoReport {
    pub holds: bool,
    pub lattice_size: usize,
    pub join_irreducibles: usize,
    pub ideals: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// For each ideal of the join-irreducible poset (canonical order), the
    /// lattice element obtained as the join of its members.
    pub inverse: Vec<usize>,
}

impl FiniteLattice {
    /// Derives meet and join from the order, failing with a witness pair if
    /// some pair lacks a greatest lower or least upper bound.
    pub fn from_poset(poset: Poset) -> Result<Self> {
        let n = poset.len();
        if n == 0 {
            return Err(Error::EmptyLattice);
        }
        let (bottom, top) = Self::bounds(&poset)?;
        let ops = if n <= TABLE_LIMIT {
            let mut meet = vec![0u32; n * n];
            let mut join = vec![0u32; n * n];
            for x in 0..n {
                for y in x..n {
                    let m = glb(&poset, x, y).ok_or(Error::NotALattice(x, y))?;
                    let j = lub(&poset, x, y).ok_or(Error::NotALattice(x, y))?;
                    meet[x * n + y] = m as u32;
                    meet[y * n + x] = m as u32;
                    join[x * n + y] = j as u32;
                    join[y * n + x] = j as u32;
                }
            }
            Ops::Tables { meet, join }
        } else {
            for x in 0..n {
                for y in x + 1..n {
                    if glb(&poset, x, y).is_none() || lub(&poset, x, y).is_none() {
                        return Err(Error::NotALattice(x, y));
                    }
                }
            }
            Ops::OnDemand
        };
        Ok(FiniteLattice {
            poset,
            ops,
            bottom,
            top,
            distributive: OnceLock::new(),
        })
    }

    /// Uses caller-supplied operation tables after checking that they are the
    /// greatest lower and least upper bounds of `poset`.
    pub fn from_tables(poset: Poset, meet: Vec<usize>, join: Vec<usize>) -> Result<Self> {
        let n = poset.len();
        if n == 0 {
            return Err(Error::EmptyLattice);
        }
        assert_eq!(meet.len(), n * n);
        assert_eq!(join.len(), n * n);
        let (bottom, top) = Self::bounds(&poset)?;
        for x in 0..n {
            for y in 0..n {
                let m = meet[x * n + y];
                let j = join[x * n + y];
                if m >= n || j >= n {
                    return Err(Error::NotALattice(x, y));
                }
                let lower = poset.down_set(x).intersection(poset.down_set(y));
                let upper = poset.up_set(x).intersection(poset.up_set(y));
                if !lower.contains(m) || !lower.is_subset(poset.down_set(m)) {
                    return Err(Error::NotALattice(x, y));
                }
                if !upper.contains(j) || !upper.is_subset(poset.up_set(j)) {
                    return Err(Error::NotALattice(x, y));
                }
            }
        }
        let ops = if n <= TABLE_LIMIT {
            Ops::Tables {
                meet: meet.into_iter().map(|v| v as u32).collect(),
                join: join.into_iter().map(|v| v as u32).collect(),
            }
        } else {
            Ops::OnDemand
        };
        Ok(FiniteLattice {
            poset,
            ops,
            bottom,
            top,
            distributive: OnceLock::new(),
        })
    }

    /// The lattice whose elements are the given order ideals of `base`
    /// (which must be closed under ∪ and ∩), ordered by inclusion.
    pub(crate) fn of_ideals(base: &Poset, ideals: &[OrderIdeal]) -> Result<Self> {
        let sets: Vec<&Subset> = ideals.iter().map(OrderIdeal::members).collect();
        let labels = sets.iter().map(|s| set_label(base, s)).collect();
        Self::of_sets(&sets, labels)
    }

    /// A lattice of sets under inclusion, with ∩ and ∪ as meet and join.
    pub(crate) fn of_sets(sets: &[&Subset], labels: Vec<String>) -> Result<Self> {
        let n = sets.len();
        let index: HashMap<&Subset, usize> = sets.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let poset = Poset::from_relation(n, |i, j| sets[i].is_subset(sets[j]))?.with_labels(labels);
        let mut meet = vec![0usize; n * n];
        let mut join = vec![0usize; n * n];
        for x in 0..n {
            for y in x..n {
                let m = *index
                    .get(&sets[x].intersection(sets[y]))
                    .ok_or(Error::NotALattice(x, y))?;
                let j = *index
                    .get(&sets[x].union(sets[y]))
                    .ok_or(Error::NotALattice(x, y))?;
                meet[x * n + y] = m;
                meet[y * n + x] = m;
                join[x * n + y] = j;
                join[y * n + x] = j;
            }
        }
        Self::from_tables(poset, meet, join)
    }

    fn bounds(poset: &Poset) -> Result<(usize, usize)> {
        let mins = poset.minimal_elements();
        let maxs = poset.maximal_elements();
        if mins.len() > 1 {
            return Err(Error::NotALattice(mins[0], mins[1]));
        }
        if maxs.len() > 1 {
            return Err(Error::NotALattice(maxs[0], maxs[1]));
        }
        Ok((mins[0], maxs[0]))
    }

    pub fn chain(k: usize) -> Self {
        Self::from_poset(Poset::chain(k)).expect("chains are lattices")
    }

    /// Boolean lattice on `k` atoms; element `i` is the subset with bitmask `i`.
    pub fn boolean(k: usize) -> Self {
        let n = 1usize << k;
        let poset = Poset::from_relation(n, |i, j| i & !j == 0)
            .expect("subset order")
            .with_labels((0..n).map(|m| format!("{m:0k$b}")).collect());
        Self::from_poset(poset).expect("boolean lattices are lattices")
    }

    /// Divisors of `m` under divisibility, listed in increasing order.
    pub fn divisors(m: u64) -> Self {
        let divs: Vec<u64> = (1..=m).filter(|d| m.is_multiple_of(*d)).collect();
        let poset = Poset::from_relation(divs.len(), |i, j| divs[j].is_multiple_of(divs[i]))
            .expect("divisibility order")
            .with_labels(divs.iter().map(u64::to_string).collect());
        Self::from_poset(poset).expect("divisor lattices are lattices")
    }

    /// The diamond `M3`: bottom 0, atoms 1, 2, 3, top 4.
    pub fn m3() -> Self {
        let poset = Poset::from_covers(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])
            .expect("acyclic")
            .with_labels(vec!["0".into(), "a".into(), "b".into(), "c".into(), "1".into()]);
        Self::from_poset(poset).expect("M3 is a lattice")
    }

    /// The pentagon `N5`: 0 < a < c < 1 and 0 < b < 1.
    pub fn n5() -> Self {
        let poset = Poset::from_covers(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)])
            .expect("acyclic")
            .with_labels(vec!["0".into(), "a".into(), "c".into(), "b".into(), "1".into()]);
        Self::from_poset(poset).expect("N5 is a lattice")
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.poset.leq(x, y)
    }

    #[inline]
    pub fn meet(&self, x: usize, y: usize) -> usize {
        match &self.ops {
            Ops::Tables { meet, .. } => meet[x * self.len() + y] as usize,
            Ops::OnDemand => glb(&self.poset, x, y).expect("verified at construction"),
        }
    }

    #[inline]
    pub fn join(&self, x: usize, y: usize) -> usize {
        match &self.ops {
            Ops::Tables { join, .. } => join[x * self.len() + y] as usize,
            Ops::OnDemand => lub(&self.poset, x, y).expect("verified at construction"),
        }
    }

    pub fn lower_covers(&self, x: usize) -> &[usize] {
        self.poset.lower_covers(x)
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        self.poset.upper_covers(x)
    }

    pub fn label(&self, x: usize) -> String {
        self.poset.label(x)
    }

    /// Overwrites one symmetric meet-table entry without any checking.
    /// Exists so fault-injection tests can corrupt a lattice.
    #[doc(hidden)]
    pub fn tamper_meet(&mut self, x: usize, y: usize, value: usize) {
        let n = self.len();
        if let Ops::Tables { meet, .. } = &mut self.ops {
            meet[x * n + y] = value as u32;
            meet[y * n + x] = value as u32;
        }
        self.distributive = OnceLock::new();
    }

    /// First triple (lowest indices) violating `x ∧ (y ∨ z) = (x ∧ y) ∨ (x ∧ z)`.
    pub fn distributivity_witness(&self) -> Option<(usize, usize, usize)> {
        *self.distributive.get_or_init(|| {
            let n = self.len();
            for x in 0..n {
                for y in 0..n {
                    let xy = self.meet(x, y);
                    for z in 0..n {
                        let lhs = self.meet(x, self.join(y, z));
                        let rhs = self.join(xy, self.meet(x, z));
                        if lhs != rhs {
                            return Some((x, y, z));
                        }
                    }
                }
            }
            None
        })
    }

    pub fn is_distributive(&self) -> bool {
        self.distributivity_witness().is_none()
    }

    pub(crate) fn require_distributive(&self) -> Result<()> {
        match self.distributivity_witness() {
            None => Ok(()),
            w => Err(Error::NotDistributive(w)),
        }
    }

    pub fn join_irreducibles_by_covers(&self) -> Subset {
        Subset::from_indices(
            self.len(),
            (0..self.len()).filter(|&x| self.lower_covers(x).len() == 1),
        )
    }

    /// Elements other than the bottom that are not the join of two strictly
    /// smaller elements.
    pub fn join_irreducibles_by_definition(&self) -> Subset {
        Subset::from_indices(
            self.len(),
            (0..self.len()).filter(|&x| {
                if x == self.bottom {
                    return false;
                }
                let below: Vec<usize> = self.poset.down_set(x).without(x).to_vec();
                !below
                    .iter()
                    .any(|&a| below.iter().any(|&b| self.join(a, b) == x))
            }),
        )
    }

    /// Join-irreducible elements. Computed by the single-lower-cover criterion
    /// and cross-checked against the definition; a mismatch means the lattice
    /// tables are inconsistent and panics.
    pub fn join_irreducibles(&self) -> Subset {
        let by_covers = self.join_irreducibles_by_covers();
        let by_def = self.join_irreducibles_by_definition();
        assert_eq!(
            by_covers, by_def,
            "join-irreducible criteria disagree: inconsistent lattice tables"
        );
        by_covers
    }

    pub fn meet_irreducibles_by_covers(&self) -> Subset {
        Subset::from_indices(
            self.len(),
            (0..self.len()).filter(|&x| self.upper_covers(x).len() == 1),
        )
    }

    pub fn meet_irreducibles_by_definition(&self) -> Subset {
        Subset::from_indices(
            self.len(),
            (0..self.len()).filter(|&x| {
                if x == self.top {
                    return false;
                }
                let above: Vec<usize> = self.poset.up_set(x).without(x).to_vec();
                !above
                    .iter()
                    .any(|&a| above.iter().any(|&b| self.meet(a, b) == x))
            }),
        )
    }

    pub fn meet_irreducibles(&self) -> Subset {
        let by_covers = self.meet_irreducibles_by_covers();
        let by_def = self.meet_irreducibles_by_definition();
        assert_eq!(
            by_covers, by_def,
            "meet-irreducible criteria disagree: inconsistent lattice tables"
        );
        by_covers
    }

    pub fn rank_info(&self) -> RankInfo {
        let n = self.len();
        let mut shortest = vec![usize::MAX; n];
        shortest[self.bottom] = 0;
        let mut queue = VecDeque::from([self.bottom]);
        while let Some(x) = queue.pop_front() {
            for &y in self.upper_covers(x) {
                if shortest[y] == usize::MAX {
                    shortest[y] = shortest[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        let rank: Vec<usize> = (0..n).map(|x| self.poset.height(x)).collect();
        RankInfo {
            graded: rank == shortest,
            rank,
        }
    }

    /// `[x, y]` as a list of element indices.
    pub fn interval(&self, x: usize, y: usize) -> Vec<usize> {
        self.poset
            .up_set(x)
            .intersection(self.poset.down_set(y))
            .to_vec()
    }
}

fn glb(poset: &Poset, x: usize, y: usize) -> Option<usize> {
    let lower = poset.down_set(x).intersection(poset.down_set(y));
    let m = lower.iter().max_by_key(|&z| poset.down_set(z).len())?;
    lower.is_subset(poset.down_set(m)).then_some(m)
}

fn lub(poset: &Poset, x: usize, y: usize) -> Option<usize> {
    let upper = poset.up_set(x).intersection(poset.up_set(y));
    let j = upper.iter().max_by_key(|&z| poset.up_set(z).len())?;
    upper.is_subset(poset.up_set(j)).then_some(j)
}

pub(crate) fn set_label(base: &Poset, s: &Subset) -> String {
    let parts: Vec<String> = s.iter().map(|i| base.label(i)).collect();
    format!("{{{}}}", parts.join(","))
}

/// The Birkhoff correspondence of a finite distributive lattice:
/// `x ↦ {j join-irreducible : j ≤ x}`.
#[derive(Clone, Debug)]
pub struct Birkhoff<'a> {
    lattice: &'a FiniteLattice,
    irreducibles: Vec<usize>,
    ji_poset: Poset,
}

impl<'a> Birkhoff<'a> {
    pub fn new(lattice: &'a FiniteLattice) -> Result<Self> {
        lattice.require_distributive()?;
        let irreducibles = lattice.join_irreducibles_by_covers().to_vec();
        let ji_poset = lattice.poset().induced(&irreducibles);
        Ok(Birkhoff {
            lattice,
            irreducibles,
            ji_poset,
        })
    }

    /// Join-irreducible elements; position `k` is element `k` of [`Self::ji_poset`].
    pub fn irreducibles(&self) -> &[usize] {
        &self.irreducibles
    }

    pub fn ji_poset(&self) -> &Poset {
        &self.ji_poset
    }

    pub fn map(&self, x: usize) -> OrderIdeal {
        let m = self.irreducibles.len();
        OrderIdeal::new_unchecked(Subset::from_indices(
            m,
            (0..m).filter(|&k| self.lattice.leq(self.irreducibles[k], x)),
        ))
    }

    /// Join of the irreducibles in `ideal` (the bottom for the empty ideal).
    pub fn inverse(&self, ideal: &Subset) -> usize {
        ideal.iter().fold(self.lattice.bottom(), |acc, k| {
            self.lattice.join(acc, self.irreducibles[k])
        })
    }

    pub fn iso_check(&self) -> IsoReport {
        let l = self.lattice;
        let n = l.len();
        let ideals = self
            .ji_poset
            .order_ideals(DEFAULT_IDEAL_LIMIT)
            .expect("ideal count of a finite lattice's irreducibles is bounded by the lattice");
        let images: Vec<OrderIdeal> = (0..n).map(|x| self.map(x)).collect();
        let inverse: Vec<usize> = ideals.iter().map(|i| self.inverse(i.members())).collect();

        let mut witness = None;
        let index: HashMap<&OrderIdeal, usize> = images.iter().enumerate().map(|(x, i)| (i, x)).collect();
        if ideals.len() != n {
            witness = Some(format!("{} elements but {} ideals", n, ideals.len()));
        } else if index.len() != n {
            witness = Some("map is not injective".to_string());
        } else if let Some(x) = (0..n).find(|&x| !self.ji_poset.is_order_ideal(images[x].members())) {
            witness = Some(format!("image of {} is not down-closed", l.label(x)));
        } else if let Some(i) = ideals.iter().position(|i| !index.contains_key(i)) {
            witness = Some(format!("ideal {:?} has no preimage", ideals[i].members()));
        } else if let Some(i) = (0..ideals.len()).find(|&i| images[inverse[i]] != ideals[i]) {
            witness = Some(format!("inverse of ideal {:?} is wrong", ideals[i].members()));
        } else {
            'pairs: for x in 0..n {
                for y in 0..n {
                    let m = images[l.meet(x, y)].members();
                    if *m != images[x].members().intersection(images[y].members()) {
                        witness = Some(format!(
                            "B({0} meet {1}) != B({0}) ∩ B({1})",
                            l.label(x),
                            l.label(y)
                        ));
                        break 'pairs;
                    }
                    let j = images[l.join(x, y)].members();
                    if *j != images[x].members().union(images[y].members()) {
                        witness = Some(format!(
                            "B({0} join {1}) != B({0}) ∪ B({1})",
                            l.label(x),
                            l.label(y)
                        ));
                        break 'pairs;
                    }
                }
            }
        }
        IsoReport {
            holds: witness.is_none(),
            lattice_size: n,
            join_irreducibles: self.irreducibles.len(),
            ideals: ideals.len(),
            witness,
            inverse,
        }
    }
}

/// `{j ∈ J(L) : j ≤ x}` as an order ideal of the join-irreducible poset.
pub fn birkhoff_map(lattice: &FiniteLattice, x: usize) -> Result<OrderIdeal> {
    Ok(Birkhoff::new(lattice)?.map(x))
}

pub fn birkhoff_iso_check(lattice: &FiniteLattice) -> Result<IsoReport> {
    Ok(Birkhoff::new(lattice)?.iso_check())
}
