use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filters::{prime_poset, PrimePoset};
use crate::lattice::FiniteLattice;

use super::{to_json, Covering, LocallyFiniteLattice, PrimeFamily, PrimeKind, Region, SymbolicPrimes};

/// The prime `{x : x[axis] ≥ threshold}` of an integer grid.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridPrime {
    pub axis: usize,
    pub threshold: i64,
}

impl GridPrime {
    pub fn new(axis: usize, threshold: i64) -> Self {
        GridPrime { axis, threshold }
    }
}

impl fmt::Display for GridPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{} ≥ {}}}", axis_name(self.axis), self.threshold)
    }
}

pub(crate) fn axis_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("x{i}")
    }
}

/// `ℤⁿ` under the componentwise order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZGrid {
    pub dim: usize,
}

/// `ℕⁿ` under the componentwise order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NGrid {
    pub dim: usize,
}

impl ZGrid {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1);
        ZGrid { dim }
    }
}

impl NGrid {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1);
        NGrid { dim }
    }
}

fn grid_validate(dim: usize, natural: bool, x: &[i64]) -> Result<()> {
    if x.len() != dim {
        return Err(Error::Parse(format!("expected {dim} coordinates, got {}", x.len())));
    }
    if natural && x.iter().any(|&v| v < 0) {
        return Err(Error::Parse(format!("{} has a negative coordinate", to_json(&x))));
    }
    Ok(())
}

fn grid_leq(x: &[i64], y: &[i64]) -> bool {
    x.iter().zip(y).all(|(a, b)| a <= b)
}

fn zip_with(x: &[i64], y: &[i64], f: fn(i64, i64) -> i64) -> Vec<i64> {
    x.iter().zip(y).map(|(&a, &b)| f(a, b)).collect()
}

fn bumped(x: &[i64], axis: usize, value: i64) -> Vec<i64> {
    let mut v = x.to_vec();
    v[axis] = value;
    v
}

fn grid_upper_below(x: &[i64], bound: &[i64]) -> Vec<Vec<i64>> {
    let mut v: Vec<Vec<i64>> = (0..x.len())
        .filter(|&i| x[i] < bound[i])
        .map(|i| bumped(x, i, x[i] + 1))
        .collect();
    v.sort();
    v
}

fn grid_lower(x: &[i64], floor: Option<i64>) -> Vec<Vec<i64>> {
    let mut v: Vec<Vec<i64>> = (0..x.len())
        .filter(|&i| floor.is_none_or(|f| x[i] > f))
        .map(|i| bumped(x, i, x[i] - 1))
        .collect();
    v.sort();
    v
}

fn grid_separator(l: &impl LocallyFiniteLattice<Elem = Vec<i64>>, c: &Covering<Vec<i64>>) -> Result<GridPrime> {
    c.check(l)?;
    let axis = (0..c.lower.len())
        .find(|&i| c.lower[i] != c.upper[i])
        .expect("a covering differs in one coordinate");
    Ok(GridPrime::new(axis, c.upper[axis]))
}

fn grid_raise(x: &[i64], p: &GridPrime) -> Result<Vec<i64>> {
    if x[p.axis] >= p.threshold {
        return Err(Error::AlreadyMember);
    }
    Ok(bumped(x, p.axis, p.threshold))
}

fn grid_lower_op(x: &[i64], p: &GridPrime) -> Result<Vec<i64>> {
    if x[p.axis] < p.threshold {
        return Err(Error::AlreadyMember);
    }
    Ok(bumped(x, p.axis, p.threshold - 1))
}

fn grid_region(elems: &[&Vec<i64>]) -> Region {
    let lo = elems.iter().flat_map(|e| e.iter()).copied().min().unwrap_or(0);
    let hi = elems.iter().flat_map(|e| e.iter()).copied().max().unwrap_or(0);
    Region::new(lo - 1, hi + 1)
}

impl LocallyFiniteLattice for ZGrid {
    type Elem = Vec<i64>;

    fn name(&self) -> String {
        format!("zgrid{}", self.dim)
    }

    fn validate(&self, x: &Vec<i64>) -> Result<()> {
        grid_validate(self.dim, false, x)
    }

    fn leq(&self, x: &Vec<i64>, y: &Vec<i64>) -> bool {
        grid_leq(x, y)
    }

    fn meet(&self, x: &Vec<i64>, y: &Vec<i64>) -> Vec<i64> {
        zip_with(x, y, i64::min)
    }

    fn join(&self, x: &Vec<i64>, y: &Vec<i64>) -> Vec<i64> {
        zip_with(x, y, i64::max)
    }

    fn upper_covers(&self, x: &Vec<i64>) -> Option<Vec<Vec<i64>>> {
        let mut v: Vec<Vec<i64>> = (0..self.dim).map(|i| bumped(x, i, x[i] + 1)).collect();
        v.sort();
        Some(v)
    }

    fn lower_covers(&self, x: &Vec<i64>) -> Vec<Vec<i64>> {
        grid_lower(x, None)
    }

    fn upper_covers_below(&self, x: &Vec<i64>, bound: &Vec<i64>) -> Vec<Vec<i64>> {
        if !grid_leq(x, bound) {
            return Vec::new();
        }
        grid_upper_below(x, bound)
    }
}

impl SymbolicPrimes for ZGrid {
    type Prime = GridPrime;

    fn family(&self) -> PrimeFamily {
        PrimeFamily {
            lattice: self.name(),
            description: format!("{} ℤ-indexed chains {{x : x_i ≥ k}}, incomparable across chains", self.dim),
            families: self.dim,
            kind: "secondary".into(),
        }
    }

    fn contains(&self, p: &GridPrime, x: &Vec<i64>) -> bool {
        x[p.axis] >= p.threshold
    }

    fn kind(&self, _p: &GridPrime) -> PrimeKind<Vec<i64>> {
        PrimeKind::Secondary
    }

    fn prime_leq(&self, p: &GridPrime, q: &GridPrime) -> bool {
        p.axis == q.axis && p.threshold <= q.threshold
    }

    fn prime_lower_covers(&self, p: &GridPrime) -> Vec<GridPrime> {
        vec![GridPrime::new(p.axis, p.threshold - 1)]
    }

    fn prime_upper_covers(&self, p: &GridPrime) -> Vec<GridPrime> {
        vec![GridPrime::new(p.axis, p.threshold + 1)]
    }

    fn primes_in(&self, region: &Region) -> Vec<GridPrime> {
        (0..self.dim)
            .flat_map(|i| (region.lo..=region.hi).map(move |k| GridPrime::new(i, k)))
            .collect()
    }

    fn sufficient_region(&self, elems: &[&Vec<i64>]) -> Region {
        grid_region(elems)
    }

    fn sample_window(&self, radius: i64) -> (Vec<i64>, Vec<i64>) {
        (vec![-radius; self.dim], vec![radius; self.dim])
    }

    fn separator(&self, c: &Covering<Vec<i64>>) -> Result<GridPrime> {
        grid_separator(self, c)
    }

    fn raise(&self, x: &Vec<i64>, p: &GridPrime) -> Result<Vec<i64>> {
        grid_raise(x, p)
    }

    fn lower(&self, x: &Vec<i64>, p: &GridPrime) -> Result<Vec<i64>> {
        grid_lower_op(x, p)
    }
}

impl LocallyFiniteLattice for NGrid {
    type Elem = Vec<i64>;

    fn name(&self) -> String {
        format!("ngrid{}", self.dim)
    }

    fn validate(&self, x: &Vec<i64>) -> Result<()> {
        grid_validate(self.dim, true, x)
    }

    fn leq(&self, x: &Vec<i64>, y: &Vec<i64>) -> bool {
        grid_leq(x, y)
    }

    fn meet(&self, x: &Vec<i64>, y: &Vec<i64>) -> Vec<i64> {
        zip_with(x, y, i64::min)
    }

    fn join(&self, x: &Vec<i64>, y: &Vec<i64>) -> Vec<i64> {
        zip_with(x, y, i64::max)
    }

    fn upper_covers(&self, x: &Vec<i64>) -> Option<Vec<Vec<i64>>> {
        let mut v: Vec<Vec<i64>> = (0..self.dim).map(|i| bumped(x, i, x[i] + 1)).collect();
        v.sort();
        Some(v)
    }

    fn lower_covers(&self, x: &Vec<i64>) -> Vec<Vec<i64>> {
        grid_lower(x, Some(0))
    }

    fn upper_covers_below(&self, x: &Vec<i64>, bound: &Vec<i64>) -> Vec<Vec<i64>> {
        if !grid_leq(x, bound) {
            return Vec::new();
        }
        grid_upper_below(x, bound)
    }

    fn bottom(&self) -> Option<Vec<i64>> {
        Some(vec![0; self.dim])
    }
}

impl SymbolicPrimes for NGrid {
    type Prime = GridPrime;

    fn family(&self) -> PrimeFamily {
        PrimeFamily {
            lattice: self.name(),
            description: format!("{} chains {{x : x_i ≥ k}}, k ≥ 1, each generated by k·e_i", self.dim),
            families: self.dim,
            kind: "principal".into(),
        }
    }

    fn contains(&self, p: &GridPrime, x: &Vec<i64>) -> bool {
        x[p.axis] >= p.threshold
    }

    fn kind(&self, p: &GridPrime) -> PrimeKind<Vec<i64>> {
        let mut g = vec![0; self.dim];
        g[p.axis] = p.threshold;
        PrimeKind::Principal(g)
    }

    fn prime_leq(&self, p: &GridPrime, q: &GridPrime) -> bool {
        p.axis == q.axis && p.threshold <= q.threshold
    }

    fn prime_lower_covers(&self, p: &GridPrime) -> Vec<GridPrime> {
        if p.threshold > 1 {
            vec![GridPrime::new(p.axis, p.threshold - 1)]
        } else {
            Vec::new()
        }
    }

    fn prime_upper_covers(&self, p: &GridPrime) -> Vec<GridPrime> {
        vec![GridPrime::new(p.axis, p.threshold + 1)]
    }

    fn primes_in(&self, region: &Region) -> Vec<GridPrime> {
        let lo = region.lo.max(1);
        (0..self.dim)
            .flat_map(|i| (lo..=region.hi).map(move |k| GridPrime::new(i, k)))
            .collect()
    }

    fn sufficient_region(&self, elems: &[&Vec<i64>]) -> Region {
        grid_region(elems)
    }

    fn sample_window(&self, radius: i64) -> (Vec<i64>, Vec<i64>) {
        (vec![0; self.dim], vec![radius; self.dim])
    }

    fn separator(&self, c: &Covering<Vec<i64>>) -> Result<GridPrime> {
        grid_separator(self, c)
    }

    fn raise(&self, x: &Vec<i64>, p: &GridPrime) -> Result<Vec<i64>> {
        grid_raise(x, p)
    }

    fn lower(&self, x: &Vec<i64>, p: &GridPrime) -> Result<Vec<i64>> {
        grid_lower_op(x, p)
    }
}

/// Finite subsets of `ℕ` under inclusion.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BFin;

/// The prime `{S : k ∈ S}` of the finite-subset lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Contains(pub u64);

impl fmt::Display for Contains {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P_{}", self.0)
    }
}

pub type FinSet = BTreeSet<u64>;

impl LocallyFiniteLattice for BFin {
    type Elem = FinSet;

    fn name(&self) -> String {
        "bfin".into()
    }

    fn leq(&self, x: &FinSet, y: &FinSet) -> bool {
        x.is_subset(y)
    }

    fn meet(&self, x: &FinSet, y: &FinSet) -> FinSet {
        x.intersection(y).copied().collect()
    }

    fn join(&self, x: &FinSet, y: &FinSet) -> FinSet {
        x.union(y).copied().collect()
    }

    fn upper_covers(&self, _x: &FinSet) -> Option<Vec<FinSet>> {
        None
    }

    fn lower_covers(&self, x: &FinSet) -> Vec<FinSet> {
        let mut v: Vec<FinSet> = x
            .iter()
            .map(|k| {
                let mut s = x.clone();
                s.remove(k);
                s
            })
            .collect();
        v.sort();
        v
    }

    fn upper_covers_below(&self, x: &FinSet, bound: &FinSet) -> Vec<FinSet> {
        if !x.is_subset(bound) {
            return Vec::new();
        }
        let mut v: Vec<FinSet> = bound
            .difference(x)
            .map(|&k| {
                let mut s = x.clone();
                s.insert(k);
                s
            })
            .collect();
        v.sort();
        v
    }

    fn bottom(&self) -> Option<FinSet> {
        Some(FinSet::new())
    }
}

impl SymbolicPrimes for BFin {
    type Prime = Contains;

    fn family(&self) -> PrimeFamily {
        PrimeFamily {
            lattice: self.name(),
            description: "ℕ-indexed antichain {S : k ∈ S}, each generated by {k}".into(),
            families: 1,
            kind: "principal".into(),
        }
    }

    fn contains(&self, p: &Contains, x: &FinSet) -> bool {
        x.contains(&p.0)
    }

    fn kind(&self, p: &Contains) -> PrimeKind<FinSet> {
        PrimeKind::Principal(FinSet::from([p.0]))
    }

    fn prime_leq(&self, p: &Contains, q: &Contains) -> bool {
        p == q
    }

    fn prime_lower_covers(&self, _p: &Contains) -> Vec<Contains> {
        Vec::new()
    }

    fn prime_upper_covers(&self, _p: &Contains) -> Vec<Contains> {
        Vec::new()
    }

    fn primes_in(&self, region: &Region) -> Vec<Contains> {
        (region.lo.max(0)..=region.hi).map(|k| Contains(k as u64)).collect()
    }

    fn sufficient_region(&self, elems: &[&FinSet]) -> Region {
        let hi = elems.iter().filter_map(|e| e.last()).copied().max().unwrap_or(0);
        Region::new(0, hi as i64 + 1)
    }

    /// `[∅, {0, .., radius-1}]`.
    fn sample_window(&self, radius: i64) -> (FinSet, FinSet) {
        (FinSet::new(), (0..radius.max(0) as u64).collect())
    }

    fn separator(&self, c: &Covering<FinSet>) -> Result<Contains> {
        c.check(self)?;
        let k = c.upper.difference(&c.lower).next().expect("covering adds one element");
        Ok(Contains(*k))
    }

    fn raise(&self, x: &FinSet, p: &Contains) -> Result<FinSet> {
        if x.contains(&p.0) {
            return Err(Error::AlreadyMember);
        }
        let mut y = x.clone();
        y.insert(p.0);
        Ok(y)
    }

    fn lower(&self, x: &FinSet, p: &Contains) -> Result<FinSet> {
        if !x.contains(&p.0) {
            return Err(Error::AlreadyMember);
        }
        let mut y = x.clone();
        y.remove(&p.0);
        Ok(y)
    }
}

/// A finite distributive lattice behind the oracle interface. Primes are
/// indices into its prime poset.
#[derive(Clone, Debug)]
pub struct FiniteAdapter {
    lattice: FiniteLattice,
    primes: PrimePoset,
}

impl FiniteAdapter {
    pub fn new(lattice: FiniteLattice) -> Result<Self> {
        let primes = prime_poset(&lattice)?;
        Ok(FiniteAdapter { lattice, primes })
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn primes(&self) -> &PrimePoset {
        &self.primes
    }
}

impl LocallyFiniteLattice for FiniteAdapter {
    type Elem = usize;

    fn name(&self) -> String {
        format!("finite({})", self.lattice.len())
    }

    fn validate(&self, x: &usize) -> Result<()> {
        if *x < self.lattice.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: *x,
                n: self.lattice.len(),
            })
        }
    }

    fn leq(&self, x: &usize, y: &usize) -> bool {
        self.lattice.leq(*x, *y)
    }

    fn meet(&self, x: &usize, y: &usize) -> usize {
        self.lattice.meet(*x, *y)
    }

    fn join(&self, x: &usize, y: &usize) -> usize {
        self.lattice.join(*x, *y)
    }

    fn upper_covers(&self, x: &usize) -> Option<Vec<usize>> {
        let mut v = self.lattice.upper_covers(*x).to_vec();
        v.sort();
        Some(v)
    }

    fn lower_covers(&self, x: &usize) -> Vec<usize> {
        let mut v = self.lattice.lower_covers(*x).to_vec();
        v.sort();
        v
    }

    fn bottom(&self) -> Option<usize> {
        Some(self.lattice.bottom())
    }

    fn top(&self) -> Option<usize> {
        Some(self.lattice.top())
    }
}

impl SymbolicPrimes for FiniteAdapter {
    type Prime = usize;

    fn family(&self) -> PrimeFamily {
        PrimeFamily {
            lattice: self.name(),
            description: format!("{} principal primes PF(j), j join-irreducible", self.primes.len()),
            families: 1,
            kind: "principal".into(),
        }
    }

    fn contains(&self, p: &usize, x: &usize) -> bool {
        self.primes.primes[*p].contains(*x)
    }

    fn kind(&self, p: &usize) -> PrimeKind<usize> {
        match self.primes.witnesses[*p] {
            Some(g) => PrimeKind::Principal(g),
            None => PrimeKind::Secondary,
        }
    }

    fn prime_leq(&self, p: &usize, q: &usize) -> bool {
        self.primes.order.leq(*p, *q)
    }

    fn prime_lower_covers(&self, p: &usize) -> Vec<usize> {
        self.primes.order.lower_covers(*p).to_vec()
    }

    fn prime_upper_covers(&self, p: &usize) -> Vec<usize> {
        self.primes.order.upper_covers(*p).to_vec()
    }

    fn primes_in(&self, region: &Region) -> Vec<usize> {
        (0..self.primes.len()).filter(|&i| region.contains(i as i64)).collect()
    }

    fn sufficient_region(&self, _elems: &[&usize]) -> Region {
        Region::new(0, self.primes.len() as i64 - 1)
    }

    fn sample_window(&self, _radius: i64) -> (usize, usize) {
        (self.lattice.bottom(), self.lattice.top())
    }

    fn separator(&self, c: &Covering<usize>) -> Result<usize> {
        c.check(self)?;
        let diff = self.primes.phi(c.upper).difference(&self.primes.phi(c.lower));
        let mut it = diff.iter();
        match (it.next(), it.next()) {
            (Some(p), None) => Ok(p),
            _ => Err(Error::PropertyViolated {
                property: "covering-unique-separator".into(),
                detail: format!("φ difference across {} ⋖ {} is {diff:?}", c.lower, c.upper),
            }),
        }
    }

    fn raise(&self, x: &usize, p: &usize) -> Result<usize> {
        let f = &self.primes.primes[*p];
        if f.contains(*x) {
            return Err(Error::AlreadyMember);
        }
        let within = f.members().intersection(self.lattice.poset().up_set(*x));
        let m = within
            .iter()
            .reduce(|a, b| self.lattice.meet(a, b))
            .expect("a prime filter meets every principal filter");
        Ok(m)
    }

    fn lower(&self, x: &usize, p: &usize) -> Result<usize> {
        let f = &self.primes.primes[*p];
        if !f.contains(*x) {
            return Err(Error::AlreadyMember);
        }
        let within = self.lattice.poset().down_set(*x).difference(f.members());
        let m = within
            .iter()
            .reduce(|a, b| self.lattice.join(a, b))
            .expect("the complement of a prime filter meets every principal ideal");
        Ok(m)
    }
}

/// Prime of a product: `p × B` or `A × q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductPrime<P, Q> {
    Left(P),
    Right(Q),
}

/// Componentwise product of two locally-finite lattices.
#[derive(Clone, Debug)]
pub struct Product<A, B> {
    pub left: A,
    pub right: B,
}

impl<A, B> Product<A, B> {
    pub fn new(left: A, right: B) -> Self {
        Product { left, right }
    }
}

impl<A: LocallyFiniteLattice, B: LocallyFiniteLattice> LocallyFiniteLattice for Product<A, B> {
    type Elem = (A::Elem, B::Elem);

    fn name(&self) -> String {
        format!("{}×{}", self.left.name(), self.right.name())
    }

    fn validate(&self, x: &Self::Elem) -> Result<()> {
        self.left.validate(&x.0)?;
        self.right.validate(&x.1)
    }

    fn leq(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        self.left.leq(&x.0, &y.0) && self.right.leq(&x.1, &y.1)
    }

    fn meet(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        (self.left.meet(&x.0, &y.0), self.right.meet(&x.1, &y.1))
    }

    fn join(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        (self.left.join(&x.0, &y.0), self.right.join(&x.1, &y.1))
    }

    fn upper_covers(&self, x: &Self::Elem) -> Option<Vec<Self::Elem>> {
        let l = self.left.upper_covers(&x.0)?;
        let r = self.right.upper_covers(&x.1)?;
        let mut v: Vec<Self::Elem> = l
            .into_iter()
            .map(|a| (a, x.1.clone()))
            .chain(r.into_iter().map(|b| (x.0.clone(), b)))
            .collect();
        v.sort();
        Some(v)
    }

    fn lower_covers(&self, x: &Self::Elem) -> Vec<Self::Elem> {
        let mut v: Vec<Self::Elem> = self
            .left
            .lower_covers(&x.0)
            .into_iter()
            .map(|a| (a, x.1.clone()))
            .chain(self.right.lower_covers(&x.1).into_iter().map(|b| (x.0.clone(), b)))
            .collect();
        v.sort();
        v
    }

    fn upper_covers_below(&self, x: &Self::Elem, bound: &Self::Elem) -> Vec<Self::Elem> {
        if !self.leq(x, bound) {
            return Vec::new();
        }
        let mut v: Vec<Self::Elem> = self
            .left
            .upper_covers_below(&x.0, &bound.0)
            .into_iter()
            .map(|a| (a, x.1.clone()))
            .chain(
                self.right
                    .upper_covers_below(&x.1, &bound.1)
                    .into_iter()
                    .map(|b| (x.0.clone(), b)),
            )
            .collect();
        v.sort();
        v
    }

    fn bottom(&self) -> Option<Self::Elem> {
        Some((self.left.bottom()?, self.right.bottom()?))
    }

    fn top(&self) -> Option<Self::Elem> {
        Some((self.left.top()?, self.right.top()?))
    }
}

impl<A: SymbolicPrimes, B: SymbolicPrimes> SymbolicPrimes for Product<A, B> {
    type Prime = ProductPrime<A::Prime, B::Prime>;

    fn family(&self) -> PrimeFamily {
        let l = self.left.family();
        let r = self.right.family();
        PrimeFamily {
            lattice: self.name(),
            description: format!("disjoint union of ({}) and ({})", l.description, r.description),
            families: l.families + r.families,
            kind: if l.kind == r.kind { l.kind } else { "mixed".into() },
        }
    }

    fn contains(&self, p: &Self::Prime, x: &Self::Elem) -> bool {
        match p {
            ProductPrime::Left(p) => self.left.contains(p, &x.0),
            ProductPrime::Right(q) => self.right.contains(q, &x.1),
        }
    }

    /// `PF((g, ⊥))` is `p × B` when `B` has a bottom; otherwise no principal
    /// filter of the product has that shape.
    fn kind(&self, p: &Self::Prime) -> PrimeKind<Self::Elem> {
        match p {
            ProductPrime::Left(p) => match (self.left.kind(p), self.right.bottom()) {
                (PrimeKind::Principal(g), Some(b)) => PrimeKind::Principal((g, b)),
                _ => PrimeKind::Secondary,
            },
            ProductPrime::Right(q) => match (self.right.kind(q), self.left.bottom()) {
                (PrimeKind::Principal(g), Some(a)) => PrimeKind::Principal((a, g)),
                _ => PrimeKind::Secondary,
            },
        }
    }

    fn prime_leq(&self, p: &Self::Prime, q: &Self::Prime) -> bool {
        match (p, q) {
            (ProductPrime::Left(a), ProductPrime::Left(b)) => self.left.prime_leq(a, b),
            (ProductPrime::Right(a), ProductPrime::Right(b)) => self.right.prime_leq(a, b),
            _ => false,
        }
    }

    fn prime_lower_covers(&self, p: &Self::Prime) -> Vec<Self::Prime> {
        match p {
            ProductPrime::Left(a) => self.left.prime_lower_covers(a).into_iter().map(ProductPrime::Left).collect(),
            ProductPrime::Right(b) => self.right.prime_lower_covers(b).into_iter().map(ProductPrime::Right).collect(),
        }
    }

    fn prime_upper_covers(&self, p: &Self::Prime) -> Vec<Self::Prime> {
        match p {
            ProductPrime::Left(a) => self.left.prime_upper_covers(a).into_iter().map(ProductPrime::Left).collect(),
            ProductPrime::Right(b) => self.right.prime_upper_covers(b).into_iter().map(ProductPrime::Right).collect(),
        }
    }

    fn primes_in(&self, region: &Region) -> Vec<Self::Prime> {
        self.left
            .primes_in(region)
            .into_iter()
            .map(ProductPrime::Left)
            .chain(self.right.primes_in(region).into_iter().map(ProductPrime::Right))
            .collect()
    }

    fn sufficient_region(&self, elems: &[&Self::Elem]) -> Region {
        let l: Vec<&A::Elem> = elems.iter().map(|e| &e.0).collect();
        let r: Vec<&B::Elem> = elems.iter().map(|e| &e.1).collect();
        self.left.sufficient_region(&l).union(&self.right.sufficient_region(&r))
    }

    fn sample_window(&self, radius: i64) -> (Self::Elem, Self::Elem) {
        let (a0, a1) = self.left.sample_window(radius);
        let (b0, b1) = self.right.sample_window(radius);
        ((a0, b0), (a1, b1))
    }

    fn separator(&self, c: &Covering<Self::Elem>) -> Result<Self::Prime> {
        c.check(self)?;
        if c.lower.0 != c.upper.0 {
            let inner = Covering {
                lower: c.lower.0.clone(),
                upper: c.upper.0.clone(),
            };
            Ok(ProductPrime::Left(self.left.separator(&inner)?))
        } else {
            let inner = Covering {
                lower: c.lower.1.clone(),
                upper: c.upper.1.clone(),
            };
            Ok(ProductPrime::Right(self.right.separator(&inner)?))
        }
    }

    fn raise(&self, x: &Self::Elem, p: &Self::Prime) -> Result<Self::Elem> {
        match p {
            ProductPrime::Left(a) => Ok((self.left.raise(&x.0, a)?, x.1.clone())),
            ProductPrime::Right(b) => Ok((x.0.clone(), self.right.raise(&x.1, b)?)),
        }
    }

    fn lower(&self, x: &Self::Elem, p: &Self::Prime) -> Result<Self::Elem> {
        match p {
            ProductPrime::Left(a) => Ok((self.left.lower(&x.0, a)?, x.1.clone())),
            ProductPrime::Right(b) => Ok((x.0.clone(), self.right.lower(&x.1, b)?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lazylf::{interval, phi_restricted, prime_on_window, rank_diff, rank_diff_in_window, DEFAULT_WINDOW_LIMIT};

    fn set(xs: &[u64]) -> FinSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn grid_oracles() {
        let z = ZGrid::new(2);
        assert_eq!(z.upper_covers(&vec![0, 0]).unwrap(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(z.meet(&vec![2, -1], &vec![0, 3]), vec![0, -1]);
        assert!(z.is_covering(&vec![3, 5], &vec![4, 5]));
        assert!(!z.is_covering(&vec![3, 5], &vec![4, 6]));
        let n = NGrid::new(2);
        assert_eq!(n.lower_covers(&vec![0, 2]), vec![vec![0, 1]]);
        assert!(n.validate(&vec![-1, 0]).is_err());
    }

    #[test]
    fn bfin_oracles() {
        assert_eq!(BFin.lower_covers(&set(&[1, 3])), vec![set(&[1]), set(&[3])]);
        assert_eq!(BFin.upper_covers(&set(&[])), None);
        assert!(BFin.is_covering(&set(&[1, 3]), &set(&[1, 3, 5])));
    }

    #[test]
    fn windows() {
        let z = ZGrid::new(2);
        let w = interval(&z, &vec![0, 0], &vec![2, 2], DEFAULT_WINDOW_LIMIT).unwrap();
        assert_eq!(w.len(), 9);
        assert!(w.lattice().is_distributive());
        for i in 0..w.len() {
            assert_eq!(w.from_global(&w.to_global(i)), Some(i));
        }
        let b = interval(&BFin, &set(&[]), &set(&[1, 2, 3]), DEFAULT_WINDOW_LIMIT).unwrap();
        assert_eq!(b.len(), 8);
        assert_eq!(b.lattice().join_irreducibles().len(), 3);
        assert!(b.lattice().is_distributive());
        assert!(matches!(
            interval(&z, &vec![0, 0], &vec![100, 100], 50),
            Err(Error::WindowTooLarge { limit: 50 })
        ));
        assert!(matches!(interval(&z, &vec![1, 0], &vec![0, 1], 50), Err(Error::NotComparable(_))));
    }

    #[test]
    fn raise_and_lower() {
        let z = ZGrid::new(2);
        assert_eq!(z.raise(&vec![0, 0], &GridPrime::new(1, 2)).unwrap(), vec![0, 2]);
        let y = z.raise(&vec![0, 0], &GridPrime::new(0, 1)).unwrap();
        assert_eq!(y, vec![1, 0]);
        assert_eq!(z.raise(&y, &GridPrime::new(0, 1)), Err(Error::AlreadyMember));
        assert_eq!(z.lower(&vec![3, 5], &GridPrime::new(0, 4)), Err(Error::AlreadyMember));
        assert_eq!(z.lower(&vec![4, 5], &GridPrime::new(0, 4)).unwrap(), vec![3, 5]);
        assert_eq!(BFin.raise(&set(&[1, 3]), &Contains(5)).unwrap(), set(&[1, 3, 5]));
        assert_eq!(BFin.lower(&set(&[1, 3, 5]), &Contains(5)).unwrap(), set(&[1, 3]));
    }

    #[test]
    fn separators() {
        let z = ZGrid::new(2);
        let c = Covering::new(&z, vec![3, 5], vec![4, 5]).unwrap();
        assert_eq!(z.separator(&c).unwrap(), GridPrime::new(0, 4));
        let c = Covering::new(&BFin, set(&[1, 3]), set(&[1, 3, 5])).unwrap();
        assert_eq!(BFin.separator(&c).unwrap(), Contains(5));
        assert_eq!(BFin.kind(&Contains(5)), PrimeKind::Principal(set(&[5])));
        let fa = FiniteAdapter::new(FiniteLattice::chain(3)).unwrap();
        let c = Covering::new(&fa, 1, 2).unwrap();
        let p = fa.separator(&c).unwrap();
        assert_eq!(fa.kind(&p), PrimeKind::Principal(2));
        assert!(matches!(
            Covering::new(&z, vec![0, 0], vec![1, 1]),
            Err(Error::NotACovering(_))
        ));
    }

    #[test]
    fn ranks() {
        let z = ZGrid::new(2);
        assert_eq!(rank_diff(&z, &vec![0, 0], &vec![2, 3]).unwrap(), 5);
        let region = Region::radius(4);
        let d: Vec<_> = phi_restricted(&z, &vec![2, 3], &region)
            .difference(&phi_restricted(&z, &vec![0, 0], &region))
            .cloned()
            .collect();
        assert_eq!(d.len(), 5);
        assert_eq!(rank_diff(&BFin, &set(&[]), &set(&[1, 3, 5])).unwrap(), 3);
        assert_eq!(rank_diff(&z, &vec![1, 1], &vec![1, 1]).unwrap(), 0);
        assert!(matches!(rank_diff(&z, &vec![1, 1], &vec![0, 1]), Err(Error::NotComparable(_))));
        let w = interval(&z, &vec![0, 0], &vec![3, 3], DEFAULT_WINDOW_LIMIT).unwrap();
        assert_eq!(rank_diff_in_window(&w, &vec![0, 0], &vec![2, 3]), Some(5));
    }

    #[test]
    fn phi_in_regions() {
        let z = ZGrid::new(2);
        let got = phi_restricted(&z, &vec![1, 2], &Region::radius(3));
        let want: BTreeSet<GridPrime> = (-3..=1)
            .map(|k| GridPrime::new(0, k))
            .chain((-3..=2).map(|k| GridPrime::new(1, k)))
            .collect();
        assert_eq!(got, want);
        for p in &got {
            for q in z.primes_in(&Region::radius(3)) {
                if z.prime_leq(&q, p) {
                    assert!(got.contains(&q));
                }
            }
        }
        let b = phi_restricted(&BFin, &set(&[1, 3]), &Region::new(0, 9));
        assert_eq!(b.into_iter().collect::<Vec<_>>(), vec![Contains(1), Contains(3)]);
    }

    #[test]
    fn predicates_are_window_primes() {
        let z = ZGrid::new(2);
        let w = interval(&z, &vec![-2, -2], &vec![2, 2], DEFAULT_WINDOW_LIMIT).unwrap();
        for p in z.primes_in(&Region::radius(3)) {
            assert!(prime_on_window(&z, &w, &p), "{p}");
        }
        let (a, b) = BFin.sample_window(4);
        let w = interval(&BFin, &a, &b, DEFAULT_WINDOW_LIMIT).unwrap();
        for p in BFin.primes_in(&Region::new(0, 5)) {
            assert!(prime_on_window(&BFin, &w, &p));
        }
    }

    #[test]
    fn product_of_chains() {
        let p = Product::new(NGrid::new(1), BFin);
        let x = (vec![1], set(&[2]));
        assert_eq!(p.lower_covers(&x), vec![(vec![0], set(&[2])), (vec![1], set(&[]))]);
        let q = ProductPrime::Left(GridPrime::new(0, 1));
        assert_eq!(p.kind(&q), PrimeKind::Principal((vec![1], set(&[]))));
        let w = interval(&p, &(vec![0], set(&[])), &(vec![2], set(&[0, 1])), DEFAULT_WINDOW_LIMIT).unwrap();
        assert_eq!(w.len(), 12);
        assert!(w.lattice().is_distributive());
    }
}
