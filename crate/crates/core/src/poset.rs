//! Finite posets, order ideals and filters, Hasse covers, and antichain width.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::FiniteLattice;
use crate::subset::Subset;

/// Default bound on the number of order ideals produced by enumeration.
pub const DEFAULT_IDEAL_LIMIT: usize = 1 << 20;

/// A finite partial order on `0..n`, stored as up-set and down-set rows
/// together with its cover relation (the transitive reduction).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    n: usize,
    up: Vec<Subset>,
    down: Vec<Subset>,
    covers: Vec<(usize, usize)>,
    lower_covers: Vec<Vec<usize>>,
    upper_covers: Vec<Vec<usize>>,
    height: Vec<usize>,
    labels: Option<Vec<String>>,
}

/// Serialized form: `{"n": .., "labels": [..]?, "covers": [[lo, hi], ..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub covers: Vec<[usize; 2]>,
}

/// A down-closed subset of a poset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct OrderIdeal {
    members: Subset,
}

impl OrderIdeal {
    pub fn new(poset: &Poset, members: Subset) -> Option<Self> {
        poset
            .is_order_ideal(&members)
            .then_some(OrderIdeal { members })
    }

    pub(crate) fn new_unchecked(members: Subset) -> Self {
        OrderIdeal { members }
    }

    pub fn members(&self) -> &Subset {
        &self.members
    }

    pub fn into_members(self) -> Subset {
        self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.contains(i)
    }
}

impl Poset {
    /// Builds a poset from generating cover pairs `(lower, upper)`.
    ///
    /// The order is the reflexive-transitive closure of the pairs; the stored
    /// covers are re-derived as its transitive reduction, so redundant input
    /// pairs are dropped.
    pub fn from_covers(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut strict = vec![Subset::empty(n); n];
        for &(lo, hi) in pairs {
            for idx in [lo, hi] {
                if idx >= n {
                    return Err(Error::IndexOutOfRange { index: idx, n });
                }
            }
            if lo == hi {
                return Err(Error::CycleDetected(lo, hi));
            }
            strict[lo].insert(hi);
        }
        // Warshall over bit rows.
        for k in 0..n {
            let row_k = strict[k].clone();
            for row in strict.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        for (i, row) in strict.iter().enumerate() {
            if row.contains(i) {
                let j = row
                    .iter()
                    .find(|&j| j != i && strict[j].contains(i))
                    .unwrap_or(i);
                return Err(Error::CycleDetected(i, j));
            }
        }
        Ok(Self::from_strict_rows(strict, None))
    }

    /// Builds a poset from an arbitrary order predicate, checking the
    /// partial-order axioms.
    pub fn from_relation(n: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let mut strict = vec![Subset::empty(n); n];
        for (i, row) in strict.iter_mut().enumerate() {
            if !leq(i, i) {
                return Err(Error::HypothesisFailed(format!(
                    "relation is not reflexive at {i}"
                )));
            }
            for j in 0..n {
                if i != j && leq(i, j) {
                    row.insert(j);
                }
            }
        }
        for i in 0..n {
            for j in strict[i].iter() {
                if strict[j].contains(i) {
                    return Err(Error::CycleDetected(i, j));
                }
                if !strict[j].is_subset(&strict[i]) {
                    return Err(Error::HypothesisFailed(format!(
                        "relation is not transitive through {i} <= {j}"
                    )));
                }
            }
        }
        Ok(Self::from_strict_rows(strict, None))
    }

    pub fn from_json(json: &PosetJson) -> Result<Self> {
        let pairs: Vec<(usize, usize)> = json.covers.iter().map(|c| (c[0], c[1])).collect();
        let poset = Self::from_covers(json.n, &pairs)?;
        match &json.labels {
            Some(labels) if labels.len() != json.n => Err(Error::Parse(format!(
                "expected {} labels, got {}",
                json.n,
                labels.len()
            ))),
            Some(labels) => Ok(poset.with_labels(labels.clone())),
            None => Ok(poset),
        }
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            n: self.n,
            labels: self.labels.clone(),
            covers: self.covers.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    fn from_strict_rows(strict: Vec<Subset>, labels: Option<Vec<String>>) -> Self {
        let n = strict.len();
        let mut up = strict.clone();
        for (i, row) in up.iter_mut().enumerate() {
            row.insert(i);
        }
        let mut down = vec![Subset::empty(n); n];
        for (i, row) in up.iter().enumerate() {
            for j in row.iter() {
                down[j].insert(i);
            }
        }

        let mut covers = Vec::new();
        let mut lower_covers = vec![Vec::new(); n];
        let mut upper_covers = vec![Vec::new(); n];
        for (i, row) in strict.iter().enumerate() {
            let mut reducible = Subset::empty(n);
            for k in row.iter() {
                reducible.union_with(&strict[k]);
            }
            for j in row.difference(&reducible).iter() {
                covers.push((i, j));
                upper_covers[i].push(j);
                lower_covers[j].push(i);
            }
        }

        // |down(i)| strictly increases along the order, so it is a linear extension.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (down[i].len(), i));
        let mut height = vec![0; n];
        for &i in &order {
            height[i] = lower_covers[i]
                .iter()
                .map(|&j| height[j] + 1)
                .max()
                .unwrap_or(0);
        }

        Poset {
            n,
            up,
            down,
            covers,
            lower_covers,
            upper_covers,
            height,
            labels,
        }
    }

    pub fn chain(k: usize) -> Self {
        let pairs: Vec<_> = (1..k).map(|i| (i - 1, i)).collect();
        Self::from_covers(k, &pairs).expect("chain is acyclic")
    }

    pub fn antichain(k: usize) -> Self {
        Self::from_covers(k, &[]).expect("antichain is acyclic")
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n);
        self.labels = Some(labels);
        self
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    #[inline]
    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) || self.leq(j, i)
    }

    /// `{j : i <= j}`
    pub fn up_set(&self, i: usize) -> &Subset {
        &self.up[i]
    }

    /// `{j : j <= i}`
    pub fn down_set(&self, i: usize) -> &Subset {
        &self.down[i]
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn lower_covers(&self, i: usize) -> &[usize] {
        &self.lower_covers[i]
    }

    pub fn upper_covers(&self, i: usize) -> &[usize] {
        &self.upper_covers[i]
    }

    pub fn is_cover(&self, lo: usize, hi: usize) -> bool {
        self.lower_covers[hi].contains(&lo)
    }

    pub fn height(&self, i: usize) -> usize {
        self.height[i]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&i| self.lower_covers[i].is_empty())
            .collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&i| self.upper_covers[i].is_empty())
            .collect()
    }

    pub fn dual(&self) -> Poset {
        let strict: Vec<Subset> = (0..self.n)
            .map(|i| self.down[i].without(i))
            .collect();
        Self::from_strict_rows(strict, self.labels.clone())
    }

    /// The subposet induced on `elems`; element `k` of the result is `elems[k]`.
    pub fn induced(&self, elems: &[usize]) -> Poset {
        let m = elems.len();
        let strict: Vec<Subset> = elems
            .iter()
            .map(|&a| {
                Subset::from_indices(
                    m,
                    elems
                        .iter()
                        .enumerate()
                        .filter(|&(_, &b)| self.lt(a, b))
                        .map(|(k, _)| k),
                )
            })
            .collect();
        let labels = elems.iter().map(|&a| self.label(a)).collect();
        Self::from_strict_rows(strict, Some(labels))
    }

    pub fn is_order_ideal(&self, s: &Subset) -> bool {
        s.universe() == self.n && s.iter().all(|x| self.down[x].is_subset(s))
    }

    pub fn is_order_filter(&self, s: &Subset) -> bool {
        s.universe() == self.n && s.iter().all(|x| self.up[x].is_subset(s))
    }

    /// All order ideals, each once, sorted by cardinality then lexicographically.
    ///
    /// Enumeration walks the cover graph of the ideal lattice upward from the
    /// empty ideal, adding one element whose strict down-set is already present.
    pub fn order_ideals(&self, limit: usize) -> Result<Vec<OrderIdeal>> {
        let strict_down: Vec<Subset> = (0..self.n).map(|i| self.down[i].without(i)).collect();
        let start = Subset::empty(self.n);
        let mut seen: HashSet<Subset> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        queue.push_back(start);
        while let Some(ideal) = queue.pop_front() {
            for e in 0..self.n {
                if ideal.contains(e) || !strict_down[e].is_subset(&ideal) {
                    continue;
                }
                let next = ideal.with(e);
                if !seen.contains(&next) {
                    if seen.len() >= limit {
                        return Err(Error::SizeLimitExceeded {
                            what: "order ideals",
                            limit,
                        });
                    }
                    seen.insert(next.clone());
                    queue.push_back(next);
                }
            }
        }
        let mut all: Vec<Subset> = seen.into_iter().collect();
        all.sort_by(Subset::canonical_cmp);
        Ok(all.into_iter().map(OrderIdeal::new_unchecked).collect())
    }

    /// All order filters (up-sets), in the same canonical order.
    pub fn order_filters(&self, limit: usize) -> Result<Vec<Subset>> {
        let mut filters: Vec<Subset> = self
            .dual()
            .order_ideals(limit)?
            .into_iter()
            .map(OrderIdeal::into_members)
            .collect();
        filters.sort_by(Subset::canonical_cmp);
        Ok(filters)
    }

    /// The lattice of order ideals under inclusion, with meet = ∩ and join = ∪.
    pub fn ideal_lattice(&self, limit: usize) -> Result<FiniteLattice> {
        let ideals = self.order_ideals(limit)?;
        FiniteLattice::of_ideals(self, &ideals)
    }

    /// Size of a maximum antichain (Dilworth: `n` minus a maximum matching
    /// in the strict comparability bipartite graph).
    pub fn width(&self) -> usize {
        let n = self.n;
        let mut match_right: Vec<Option<usize>> = vec![None; n];
        let mut matched = 0;
        for left in 0..n {
            let mut visited = vec![false; n];
            if self.augment(left, &mut visited, &mut match_right) {
                matched += 1;
            }
        }
        n - matched
    }

    fn augment(&self, left: usize, visited: &mut [bool], match_right: &mut [Option<usize>]) -> bool {
        for right in self.up[left].iter() {
            if right == left || visited[right] {
                continue;
            }
            visited[right] = true;
            let free = match match_right[right] {
                None => true,
                Some(other) => self.augment(other, visited, match_right),
            };
            if free {
                match_right[right] = Some(left);
                return true;
            }
        }
        false
    }

    pub fn is_antichain(&self, elems: &[usize]) -> bool {
        elems
            .iter()
            .enumerate()
            .all(|(k, &a)| elems[k + 1..].iter().all(|&b| !self.comparable(a, b)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Poset {
        Poset::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn fence() -> Poset {
        Poset::from_covers(3, &[(0, 1), (2, 1)]).unwrap()
    }

    fn brute_leq(n: usize, pairs: &[(usize, usize)]) -> Vec<Vec<bool>> {
        let mut r = vec![vec![false; n]; n];
        for (i, row) in r.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in pairs {
            r[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if r[i][k] && r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
        r
    }

    #[test]
    fn chain_closure() {
        let p = Poset::from_covers(3, &[(0, 1), (1, 2)]).unwrap();
        let trues = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .filter(|&(i, j)| p.leq(i, j))
            .count();
        assert_eq!(trues, 6);
        assert_eq!(p.covers(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn two_cycle_is_rejected() {
        assert_eq!(
            Poset::from_covers(2, &[(0, 1), (1, 0)]),
            Err(Error::CycleDetected(0, 1))
        );
    }

    #[test]
    fn out_of_range_cover() {
        assert!(matches!(
            Poset::from_covers(2, &[(0, 2)]),
            Err(Error::IndexOutOfRange { index: 2, n: 2 })
        ));
    }

    #[test]
    fn diamond_matches_warshall_and_keeps_covers() {
        let pairs = [(0, 1), (0, 2), (1, 3), (2, 3)];
        let p = diamond();
        let oracle = brute_leq(4, &pairs);
        for (i, row) in oracle.iter().enumerate() {
            for (j, &expected) in row.iter().enumerate() {
                assert_eq!(p.leq(i, j), expected, "({i},{j})");
            }
        }
        assert_eq!(p.covers(), &pairs);
    }

    #[test]
    fn redundant_covers_are_reduced() {
        let p = Poset::from_covers(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(p.covers(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn ideal_membership() {
        let c = Poset::chain(3);
        assert!(c.is_order_ideal(&Subset::from_indices(3, [0, 1])));
        assert!(!c.is_order_ideal(&Subset::from_indices(3, [1])));
        let a = Poset::antichain(2);
        for mask in 0..4usize {
            let s = Subset::from_indices(2, (0..2).filter(|i| mask >> i & 1 == 1));
            assert!(a.is_order_ideal(&s));
            assert!(a.is_order_filter(&s));
        }
    }

    #[test]
    fn ideal_counts() {
        let chain = Poset::chain(3).order_ideals(DEFAULT_IDEAL_LIMIT).unwrap();
        let lists: Vec<Vec<usize>> = chain.iter().map(|i| i.members().to_vec()).collect();
        assert_eq!(lists, vec![vec![], vec![0], vec![0, 1], vec![0, 1, 2]]);
        assert_eq!(Poset::antichain(3).order_ideals(DEFAULT_IDEAL_LIMIT).unwrap().len(), 8);

        // brute force over all 8 subsets of the fence
        let f = fence();
        let brute = (0..8usize)
            .filter(|mask| {
                let s = Subset::from_indices(3, (0..3).filter(|i| mask >> i & 1 == 1));
                (0..3).all(|x| {
                    !s.contains(x) || (0..3).all(|z| !f.leq(z, x) || s.contains(z))
                })
            })
            .count();
        assert_eq!(brute, 5);
        assert_eq!(f.order_ideals(DEFAULT_IDEAL_LIMIT).unwrap().len(), 5);
    }

    #[test]
    fn ideal_limit() {
        let err = Poset::antichain(5).order_ideals(10).unwrap_err();
        assert!(matches!(err, Error::SizeLimitExceeded { limit: 10, .. }));
    }

    #[test]
    fn widths() {
        assert_eq!(Poset::chain(5).width(), 1);
        assert_eq!(Poset::antichain(4).width(), 4);
        assert_eq!(Poset::antichain(0).width(), 0);
        // brute force all antichains of the diamond
        let d = diamond();
        let best = (0..16usize)
            .map(|mask| (0..4).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>())
            .filter(|s| d.is_antichain(s))
            .map(|s| s.len())
            .max()
            .unwrap();
        assert_eq!(best, 2);
        assert_eq!(d.width(), 2);
    }

    #[test]
    fn json_round_trip() {
        let p = fence().with_labels(vec!["a".into(), "b".into(), "c".into()]);
        let text = serde_json::to_string(&p.to_json()).unwrap();
        assert_eq!(text, r#"{"n":3,"labels":["a","b","c"],"covers":[[0,1],[2,1]]}"#);
        let back: PosetJson = serde_json::from_str(&text).unwrap();
        assert_eq!(Poset::from_json(&back).unwrap(), p);
    }

    #[test]
    fn heights_and_extremes() {
        let d = diamond();
        assert_eq!((0..4).map(|i| d.height(i)).collect::<Vec<_>>(), vec![0, 1, 1, 2]);
        assert_eq!(d.minimal_elements(), vec![0]);
        assert_eq!(d.maximal_elements(), vec![3]);
        assert!(d.dual().leq(3, 0));
    }
}
