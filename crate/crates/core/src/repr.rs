//! Order ideals of the prime poset at finite symmetric difference from a
//! base: membership, lattice operations, reconstruction of the lattice
//! element with a given ideal, and connected-component reports.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lazylf::{
    interval, to_json, BFin, Contains, Covering, FiniteAdapter, LocallyFiniteLattice, NGrid, Region, SymbolicPrimes, Token,
    ZGrid, DEFAULT_WINDOW_LIMIT,
};
use crate::lazylf::{GridPrime, PrimeFamily};
use crate::poset::Poset;
use crate::subset::Subset;

/// Position of an ideal within one chain family of a grid's prime poset:
/// nothing, everything up to a threshold, or the whole chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    NegInf,
    At(i64),
    PosInf,
}

impl Level {
    fn symbol(&self) -> &'static str {
        match self {
            Level::NegInf => "−∞",
            Level::At(_) => "fin",
            Level::PosInf => "+∞",
        }
    }
}

/// Base of the finite-subset lattice's prime poset (an antichain indexed by
/// `ℕ`): empty, everything, or a periodic set of indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetBase {
    Empty,
    All,
    Periodic { modulus: u64, residues: Vec<u64> },
}

impl SetBase {
    /// Canonical form: smallest period, sorted residues, degenerate cases
    /// folded into `Empty` and `All`.
    pub fn periodic(modulus: u64, residues: impl IntoIterator<Item = u64>) -> SetBase {
        assert!(modulus >= 1);
        let r: BTreeSet<u64> = residues.into_iter().map(|x| x % modulus).collect();
        if r.is_empty() {
            return SetBase::Empty;
        }
        if r.len() as u64 == modulus {
            return SetBase::All;
        }
        for d in (1..=modulus).filter(|d| modulus.is_multiple_of(*d)) {
            let periodic = (0..modulus).all(|i| r.contains(&i) == r.contains(&((i + d) % modulus)));
            if periodic {
                return SetBase::Periodic {
                    modulus: d,
                    residues: r.into_iter().filter(|&x| x < d).collect(),
                };
            }
        }
        unreachable!("the modulus itself is a period")
    }

    pub fn contains(&self, k: u64) -> bool {
        match self {
            SetBase::Empty => false,
            SetBase::All => true,
            SetBase::Periodic { modulus, residues } => residues.contains(&(k % modulus)),
        }
    }
}

/// A set of primes presented as `base △ delta` with `delta` finite.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IdealDescriptor<B, P: Ord> {
    pub base: B,
    pub delta: BTreeSet<P>,
}

impl<B, P: Ord> IdealDescriptor<B, P> {
    pub fn new(base: B, delta: impl IntoIterator<Item = P>) -> Self {
        IdealDescriptor {
            base,
            delta: delta.into_iter().collect(),
        }
    }
}

pub type Descriptor<L> = IdealDescriptor<<L as SymbolicIdeals>::Base, <L as SymbolicPrimes>::Prime>;

/// One class of ideals at pairwise finite difference.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentClass {
    pub label: String,
    pub representative: Value,
    #[serde(rename = "isoType")]
    pub iso_type: String,
    #[serde(rename = "imageOfPhi", skip_serializing_if = "std::ops::Not::not")]
    pub image_of_phi: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentCounts {
    #[serde(rename = "finiteClasses")]
    pub finite_classes: usize,
    #[serde(rename = "unboundedNote", skip_serializing_if = "Option::is_none")]
    pub unbounded_note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub lattice: String,
    pub classes: Vec<ComponentClass>,
    pub counts: ComponentCounts,
}

impl ComponentReport {
    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Built-ins whose order ideals of the prime poset have a symbolic form.
pub trait SymbolicIdeals: SymbolicPrimes {
    type Base: Token;

    /// `φ(x)`, the primes containing `x`.
    fn phi(&self, x: &Self::Elem) -> Descriptor<Self>;

    fn base_contains(&self, base: &Self::Base, p: &Self::Prime) -> bool;

    /// `a △ b` when it is finite.
    fn base_difference(&self, a: &Self::Base, b: &Self::Base) -> Option<BTreeSet<Self::Prime>>;

    /// Label of the component class containing ideals with this base.
    fn component_of(&self, base: &Self::Base) -> String;

    fn components(&self) -> ComponentReport;
}

pub fn contains<L: SymbolicIdeals>(l: &L, q: &Descriptor<L>, p: &L::Prime) -> bool {
    l.base_contains(&q.base, p) != q.delta.contains(p)
}

/// `q1 △ q2` when finite.
pub fn sym_diff<L: SymbolicIdeals>(l: &L, q1: &Descriptor<L>, q2: &Descriptor<L>) -> Option<BTreeSet<L::Prime>> {
    let base = l.base_difference(&q1.base, &q2.base)?;
    let support: BTreeSet<L::Prime> = base.iter().chain(&q1.delta).chain(&q2.delta).cloned().collect();
    Some(
        support
            .into_iter()
            .filter(|p| contains(l, q1, p) != contains(l, q2, p))
            .collect(),
    )
}

/// Whether two descriptors differ in finitely many primes.
pub fn in_dp<L: SymbolicIdeals>(l: &L, q: &Descriptor<L>, p0: &Descriptor<L>) -> bool {
    l.base_difference(&q.base, &p0.base).is_some()
}

/// Whether two descriptors present the same set.
pub fn same_ideal<L: SymbolicIdeals>(l: &L, q1: &Descriptor<L>, q2: &Descriptor<L>) -> bool {
    sym_diff(l, q1, q2).is_some_and(|d| d.is_empty())
}

fn combine<L: SymbolicIdeals>(
    l: &L,
    q1: &Descriptor<L>,
    q2: &Descriptor<L>,
    op: fn(bool, bool) -> bool,
) -> Result<Descriptor<L>> {
    let base = l.base_difference(&q1.base, &q2.base).ok_or_else(|| {
        Error::IncomparableBases(format!("{} vs {}", to_json(&q1.base), to_json(&q2.base)))
    })?;
    let support: BTreeSet<L::Prime> = base.iter().chain(&q1.delta).chain(&q2.delta).cloned().collect();
    let delta = support
        .into_iter()
        .filter(|p| op(contains(l, q1, p), contains(l, q2, p)) != l.base_contains(&q1.base, p))
        .collect();
    Ok(IdealDescriptor {
        base: q1.base.clone(),
        delta,
    })
}

/// Intersection, anchored at the base of `q1`.
pub fn dp_meet<L: SymbolicIdeals>(l: &L, q1: &Descriptor<L>, q2: &Descriptor<L>) -> Result<Descriptor<L>> {
    combine(l, q1, q2, |a, b| a && b)
}

/// Union, anchored at the base of `q1`.
pub fn dp_join<L: SymbolicIdeals>(l: &L, q1: &Descriptor<L>, q2: &Descriptor<L>) -> Result<Descriptor<L>> {
    combine(l, q1, q2, |a, b| a || b)
}

/// Whether `q` is an order ideal of the prime poset, given that its base is.
/// Only primes of `delta` and their neighbours can break down-closure.
pub fn is_ideal<L: SymbolicIdeals>(l: &L, q: &Descriptor<L>) -> bool {
    q.delta.iter().all(|p| {
        if contains(l, q, p) {
            l.prime_lower_covers(p).iter().all(|r| contains(l, q, r))
        } else {
            l.prime_upper_covers(p).iter().all(|r| !contains(l, q, r))
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    Remove,
    Insert,
}

/// One cover move of a reconstruction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step<E, P> {
    pub kind: StepKind,
    pub prime: P,
    pub from: E,
    pub to: E,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reconstruction<E, P> {
    pub element: E,
    pub steps: Vec<Step<E, P>>,
}

fn pick<L: SymbolicPrimes>(l: &L, pool: &BTreeSet<L::Prime>, maximal: bool) -> L::Prime {
    pool.iter()
        .find(|&p| {
            pool.iter()
                .all(|q| if maximal { !l.prime_lt(p, q) } else { !l.prime_lt(q, p) })
        })
        .cloned()
        .expect("a finite nonempty poset has extremal elements")
}

/// The element `y` with `φ(y) = q`, reached from `x0` by lowering through the
/// primes to remove (maximal first) and then raising through the primes to
/// add (minimal first). Each move is checked to be a single covering whose
/// separator is the prime being moved.
pub fn inverse_phi<L: SymbolicIdeals>(
    l: &L,
    x0: &L::Elem,
    q: &Descriptor<L>,
) -> Result<Reconstruction<L::Elem, L::Prime>> {
    l.validate(x0)?;
    if !is_ideal(l, q) {
        return Err(Error::NotAnIdeal(to_json(q)));
    }
    let start = l.phi(x0);
    let diff = sym_diff(l, &start, q).ok_or_else(|| {
        Error::HypothesisFailed(format!("{} is not at finite difference from φ({})", to_json(q), to_json(x0)))
    })?;
    let (mut remove, mut insert): (BTreeSet<_>, BTreeSet<_>) = diff.into_iter().partition(|p| contains(l, &start, p));
    let mut cur = x0.clone();
    let mut steps = Vec::new();
    while !remove.is_empty() {
        let p = pick(l, &remove, true);
        remove.remove(&p);
        let next = l.lower(&cur, &p)?;
        check_move(l, &next, &cur, &p, "lower-removes-one-prime")?;
        steps.push(Step {
            kind: StepKind::Remove,
            prime: p,
            from: cur,
            to: next.clone(),
        });
        cur = next;
    }
    while !insert.is_empty() {
        let p = pick(l, &insert, false);
        insert.remove(&p);
        let next = l.raise(&cur, &p)?;
        check_move(l, &cur, &next, &p, "raise-adds-one-prime")?;
        steps.push(Step {
            kind: StepKind::Insert,
            prime: p,
            from: cur,
            to: next.clone(),
        });
        cur = next;
    }
    if !same_ideal(l, &l.phi(&cur), q) {
        return Err(Error::PropertyViolated {
            property: "representation-bijection".into(),
            detail: format!("replay ended at {} whose ideal differs from {}", to_json(&cur), to_json(q)),
        });
    }
    Ok(Reconstruction { element: cur, steps })
}

fn check_move<L: SymbolicPrimes>(l: &L, lo: &L::Elem, hi: &L::Elem, p: &L::Prime, property: &str) -> Result<()> {
    let c = Covering {
        lower: lo.clone(),
        upper: hi.clone(),
    };
    let ok = l.is_covering(lo, hi) && l.separator(&c).is_ok_and(|s| s == *p);
    if ok {
        Ok(())
    } else {
        Err(Error::PropertyViolated {
            property: property.into(),
            detail: format!("{} ⋖ {} is not a cover separated by {}", to_json(lo), to_json(hi), to_json(p)),
        })
    }
}

fn grid_phi(x: &[i64]) -> Vec<Level> {
    x.iter().map(|&v| Level::At(v)).collect()
}

fn level_contains(level: Level, k: i64) -> bool {
    match level {
        Level::NegInf => false,
        Level::At(v) => k <= v,
        Level::PosInf => true,
    }
}

fn grid_difference(a: &[Level], b: &[Level], min_threshold: i64) -> Option<BTreeSet<GridPrime>> {
    let mut out = BTreeSet::new();
    for (axis, (&la, &lb)) in a.iter().zip(b).enumerate() {
        match (la, lb) {
            (Level::At(v), Level::At(w)) => {
                let (lo, hi) = (v.min(w), v.max(w));
                out.extend(((lo + 1).max(min_threshold)..=hi).map(|k| GridPrime::new(axis, k)));
            }
            _ if la == lb => {}
            _ => return None,
        }
    }
    Some(out)
}

fn grid_label(levels: &[Level]) -> String {
    let parts: Vec<&str> = levels.iter().map(Level::symbol).collect();
    format!("({})", parts.join(", "))
}

fn power(symbol: &str, m: usize) -> String {
    if m == 0 {
        "1".into()
    } else {
        vec![symbol; m].join("×")
    }
}

fn all_assignments(choices: &[Level], n: usize) -> Vec<Vec<Level>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |&c| {
                    let mut v = prefix.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out
}

impl SymbolicIdeals for ZGrid {
    type Base = Vec<Level>;

    fn phi(&self, x: &Vec<i64>) -> Descriptor<Self> {
        IdealDescriptor::new(grid_phi(x), [])
    }

    fn base_contains(&self, base: &Vec<Level>, p: &GridPrime) -> bool {
        level_contains(base[p.axis], p.threshold)
    }

    fn base_difference(&self, a: &Vec<Level>, b: &Vec<Level>) -> Option<BTreeSet<GridPrime>> {
        grid_difference(a, b, i64::MIN)
    }

    fn component_of(&self, base: &Vec<Level>) -> String {
        if base.iter().all(|l| matches!(l, Level::At(_))) {
            "central".into()
        } else {
            grid_label(base)
        }
    }

    /// Each chain family independently sits at `−∞`, at a finite level, or
    /// at `+∞`; the families at a finite level contribute a factor `ℤ`.
    fn components(&self) -> ComponentReport {
        let classes = all_assignments(&[Level::NegInf, Level::At(0), Level::PosInf], self.dim)
            .into_iter()
            .map(|levels| {
                let finite = levels.iter().filter(|l| matches!(l, Level::At(_))).count();
                ComponentClass {
                    label: self.component_of(&levels),
                    representative: json!(IdealDescriptor::<_, GridPrime>::new(levels, [])),
                    iso_type: power("ℤ", finite),
                    image_of_phi: finite == self.dim,
                }
            })
            .collect::<Vec<_>>();
        ComponentReport {
            lattice: self.name(),
            counts: ComponentCounts {
                finite_classes: classes.len(),
                unbounded_note: None,
            },
            classes,
        }
    }
}

impl SymbolicIdeals for NGrid {
    type Base = Vec<Level>;

    fn phi(&self, x: &Vec<i64>) -> Descriptor<Self> {
        IdealDescriptor::new(grid_phi(x), [])
    }

    fn base_contains(&self, base: &Vec<Level>, p: &GridPrime) -> bool {
        p.threshold >= 1 && level_contains(base[p.axis], p.threshold)
    }

    fn base_difference(&self, a: &Vec<Level>, b: &Vec<Level>) -> Option<BTreeSet<GridPrime>> {
        grid_difference(a, b, 1)
    }

    fn component_of(&self, base: &Vec<Level>) -> String {
        if base.iter().all(|l| matches!(l, Level::At(_))) {
            "bottom".into()
        } else {
            grid_label(base)
        }
    }

    /// Each chain family is either finite (a factor `ℕ`, starting from the
    /// empty ideal) or all of the chain.
    fn components(&self) -> ComponentReport {
        let classes = all_assignments(&[Level::At(0), Level::PosInf], self.dim)
            .into_iter()
            .map(|levels| {
                let finite = levels.iter().filter(|l| matches!(l, Level::At(_))).count();
                ComponentClass {
                    label: self.component_of(&levels),
                    representative: json!(IdealDescriptor::<_, GridPrime>::new(levels, [])),
                    iso_type: power("ℕ", finite),
                    image_of_phi: finite == self.dim,
                }
            })
            .collect::<Vec<_>>();
        ComponentReport {
            lattice: self.name(),
            counts: ComponentCounts {
                finite_classes: classes.len(),
                unbounded_note: None,
            },
            classes,
        }
    }
}

impl SymbolicIdeals for BFin {
    type Base = SetBase;

    fn phi(&self, x: &std::collections::BTreeSet<u64>) -> Descriptor<Self> {
        IdealDescriptor::new(SetBase::Empty, x.iter().map(|&k| Contains(k)))
    }

    fn base_contains(&self, base: &SetBase, p: &Contains) -> bool {
        base.contains(p.0)
    }

    /// Distinct canonical bases always differ in infinitely many indices.
    fn base_difference(&self, a: &SetBase, b: &SetBase) -> Option<BTreeSet<Contains>> {
        (a == b).then(BTreeSet::new)
    }

    fn component_of(&self, base: &SetBase) -> String {
        match base {
            SetBase::Empty => "bottom".into(),
            SetBase::All => "top".into(),
            SetBase::Periodic { .. } => "middle".into(),
        }
    }

    fn components(&self) -> ComponentReport {
        let class = |base: SetBase, iso: &str, image: bool| ComponentClass {
            label: self.component_of(&base),
            representative: json!(IdealDescriptor::<_, Contains>::new(base, [])),
            iso_type: iso.into(),
            image_of_phi: image,
        };
        ComponentReport {
            lattice: self.name(),
            classes: vec![
                class(SetBase::Empty, "𝔹_fin", true),
                class(SetBase::All, "𝔹_cofin", false),
                class(SetBase::periodic(2, [0]), "𝔹_fin × 𝔹_cofin", false),
            ],
            counts: ComponentCounts {
                finite_classes: 2,
                unbounded_note: Some(
                    "uncountably many middle classes (infinite, co-infinite ideals); one representative shown".into(),
                ),
            },
        }
    }
}

impl SymbolicIdeals for FiniteAdapter {
    type Base = Vec<usize>;

    fn phi(&self, x: &usize) -> Descriptor<Self> {
        IdealDescriptor::new(self.primes().phi(*x).to_vec(), [])
    }

    fn base_contains(&self, base: &Vec<usize>, p: &usize) -> bool {
        base.binary_search(p).is_ok()
    }

    fn base_difference(&self, a: &Vec<usize>, b: &Vec<usize>) -> Option<BTreeSet<usize>> {
        let a: BTreeSet<usize> = a.iter().copied().collect();
        let b: BTreeSet<usize> = b.iter().copied().collect();
        Some(a.symmetric_difference(&b).copied().collect())
    }

    fn component_of(&self, _base: &Vec<usize>) -> String {
        "all".into()
    }

    fn components(&self) -> ComponentReport {
        ComponentReport {
            lattice: self.name(),
            classes: vec![ComponentClass {
                label: "all".into(),
                representative: json!(IdealDescriptor::<Vec<usize>, usize>::new(Vec::new(), [])),
                iso_type: format!("L ({} elements)", self.lattice().len()),
                image_of_phi: true,
            }],
            counts: ComponentCounts {
                finite_classes: 1,
                unbounded_note: None,
            },
        }
    }
}

/// Component report of a built-in; bare oracles have no symbolic primes.
pub fn components_symbolic<L: SymbolicIdeals>(l: &L) -> ComponentReport {
    l.components()
}

/// The graph on the order ideals of a finite poset, with an edge between
/// ideals differing in one element.
#[derive(Clone, Debug)]
pub struct IdealGraph {
    pub poset: Poset,
    pub ideals: Vec<Subset>,
    pub edges: Vec<(usize, usize)>,
    pub component: Vec<usize>,
    pub components: usize,
}

pub fn components_finite(p: &Poset, limit: usize) -> Result<IdealGraph> {
    let ideals: Vec<Subset> = p.order_ideals(limit)?.into_iter().map(|i| i.into_members()).collect();
    let index: HashMap<&Subset, usize> = ideals.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut edges = Vec::new();
    let mut adj = vec![Vec::new(); ideals.len()];
    for (i, s) in ideals.iter().enumerate() {
        for e in 0..p.len() {
            if s.contains(e) {
                continue;
            }
            if let Some(&j) = index.get(&s.with(e)) {
                edges.push((i, j));
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    edges.sort();
    let mut component = vec![usize::MAX; ideals.len()];
    let mut count = 0;
    for start in 0..ideals.len() {
        if component[start] != usize::MAX {
            continue;
        }
        component[start] = count;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v] {
                if component[u] == usize::MAX {
                    component[u] = count;
                    queue.push_back(u);
                }
            }
        }
        count += 1;
    }
    Ok(IdealGraph {
        poset: p.clone(),
        ideals,
        edges,
        component,
        components: count,
    })
}

impl IdealGraph {
    pub fn report(&self) -> ComponentReport {
        let classes = (0..self.components)
            .map(|c| {
                let members: Vec<usize> = (0..self.ideals.len()).filter(|&i| self.component[i] == c).collect();
                ComponentClass {
                    label: format!("component {c}"),
                    representative: json!(self.ideals[members[0]]),
                    iso_type: format!("finite distributive lattice ({} ideals)", members.len()),
                    image_of_phi: members.iter().any(|&i| self.ideals[i].is_empty()),
                }
            })
            .collect::<Vec<_>>();
        ComponentReport {
            lattice: format!("ideals of a {}-element poset", self.poset.len()),
            counts: ComponentCounts {
                finite_classes: classes.len(),
                unbounded_note: None,
            },
            classes,
        }
    }
}

/// Side-by-side widths for the component-count question: antichains in
/// windows of the lattice, antichains among primes of a region, and the
/// symbolic component count. No conclusion is drawn.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProbeWindow {
    pub radius: i64,
    pub elements: usize,
    pub lattice_width: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prime_width: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProbeReport {
    pub lattice: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prime_family: Option<PrimeFamily>,
    pub windows: Vec<ProbeWindow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub component_classes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unbounded_note: Option<String>,
}

pub fn conjecture_probe<L: SymbolicIdeals>(l: &L, radii: &[i64], limit: usize) -> Result<ProbeReport> {
    let mut windows = Vec::new();
    for &r in radii {
        let (a, b) = l.sample_window(r);
        let w = interval(l, &a, &b, limit)?;
        let primes = l.primes_in(&l.sufficient_region(&[&a, &b]).union(&Region::radius(r)));
        let order = Poset::from_relation(primes.len(), |i, j| l.prime_leq(&primes[i], &primes[j]))?;
        windows.push(ProbeWindow {
            radius: r,
            elements: w.len(),
            lattice_width: w.lattice().poset().width(),
            prime_width: Some(order.width()),
        });
    }
    let comps = l.components();
    Ok(ProbeReport {
        lattice: l.name(),
        prime_family: Some(l.family()),
        windows,
        component_classes: Some(comps.classes.len()),
        unbounded_note: comps.counts.unbounded_note,
    })
}

/// The probe for a bare oracle: only lattice-window widths are available.
pub fn conjecture_probe_bare<L: LocallyFiniteLattice + ?Sized>(
    l: &L,
    windows: &[(i64, L::Elem, L::Elem)],
) -> Result<ProbeReport> {
    let mut out = Vec::new();
    for (r, a, b) in windows {
        let w = interval(l, a, b, DEFAULT_WINDOW_LIMIT)?;
        out.push(ProbeWindow {
            radius: *r,
            elements: w.len(),
            lattice_width: w.lattice().poset().width(),
            prime_width: None,
        });
    }
    Ok(ProbeReport {
        lattice: l.name(),
        prime_family: None,
        windows: out,
        component_classes: None,
        unbounded_note: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::FiniteLattice;
    use Contains;
    use crate::poset::DEFAULT_IDEAL_LIMIT;

    fn set(xs: &[u64]) -> BTreeSet<u64> {
        xs.iter().copied().collect()
    }

    #[test]
    fn periodic_bases_normalize() {
        assert_eq!(SetBase::periodic(4, [0, 2]), SetBase::periodic(2, [0]));
        assert_eq!(SetBase::periodic(3, []), SetBase::Empty);
        assert_eq!(SetBase::periodic(2, [0, 1]), SetBase::All);
        assert!(SetBase::periodic(2, [1]).contains(7));
    }

    #[test]
    fn finite_difference_membership() {
        let z = ZGrid::new(2);
        let q = z.phi(&vec![0, 0]);
        assert!(in_dp(&z, &q, &q));
        let empty: Descriptor<ZGrid> = IdealDescriptor::new(vec![Level::NegInf, Level::NegInf], []);
        assert!(!in_dp(&z, &q, &empty));
        let a: Descriptor<BFin> = IdealDescriptor::new(SetBase::Empty, [Contains(1), Contains(3)]);
        let b: Descriptor<BFin> = IdealDescriptor::new(SetBase::Empty, [Contains(2)]);
        assert!(in_dp(&BFin, &a, &b));
        assert_eq!(sym_diff(&BFin, &a, &b).unwrap().len(), 3);
    }

    #[test]
    fn descriptor_lattice_ops() {
        let z = ZGrid::new(2);
        let q = z.phi(&vec![1, 0]);
        assert!(same_ideal(&z, &dp_meet(&z, &q, &q).unwrap(), &q));
        let m = dp_meet(&z, &z.phi(&vec![1, 0]), &z.phi(&vec![0, 1])).unwrap();
        assert!(same_ideal(&z, &m, &z.phi(&vec![0, 0])));
        let j = dp_join(&BFin, &BFin.phi(&set(&[1])), &BFin.phi(&set(&[2]))).unwrap();
        assert!(same_ideal(&BFin, &j, &BFin.phi(&set(&[1, 2]))));
        let far: Descriptor<ZGrid> = IdealDescriptor::new(vec![Level::PosInf, Level::At(0)], []);
        assert!(matches!(dp_meet(&z, &q, &far), Err(Error::IncomparableBases(_))));
    }

    #[test]
    fn ideal_check() {
        let z = ZGrid::new(2);
        let mut q = z.phi(&vec![0, 0]);
        q.delta.insert(GridPrime::new(0, 2));
        assert!(!is_ideal(&z, &q));
        q.delta.insert(GridPrime::new(0, 1));
        assert!(is_ideal(&z, &q));
        assert!(matches!(
            inverse_phi(&z, &vec![0, 0], &IdealDescriptor::new(grid_phi(&[0, 0]), [GridPrime::new(0, 2)])),
            Err(Error::NotAnIdeal(_))
        ));
    }

    #[test]
    fn reconstruction() {
        let z = ZGrid::new(2);
        let x0 = vec![0, 0];
        let r = inverse_phi(&z, &x0, &z.phi(&x0)).unwrap();
        assert_eq!(r.element, x0);
        assert!(r.steps.is_empty());

        let q = IdealDescriptor::new(
            grid_phi(&x0),
            [GridPrime::new(0, 1), GridPrime::new(0, 2), GridPrime::new(1, 1)],
        );
        let r = inverse_phi(&z, &x0, &q).unwrap();
        assert_eq!(r.element, vec![2, 1]);
        assert_eq!(r.steps.len(), 3);
        assert!(same_ideal(&z, &z.phi(&vec![2, 1]), &q));

        let q = IdealDescriptor::new(SetBase::Empty, [Contains(2), Contains(7)]);
        let r = inverse_phi(&BFin, &set(&[]), &q).unwrap();
        assert_eq!(r.element, set(&[2, 7]));
        assert_eq!(r.steps.len(), 2);

        // removals come before insertions
        let r = inverse_phi(&z, &vec![2, 0], &z.phi(&vec![0, 1])).unwrap();
        let kinds: Vec<StepKind> = r.steps.iter().map(|s| s.kind).collect();
        assert_eq!(kinds, vec![StepKind::Remove, StepKind::Remove, StepKind::Insert]);
        assert_eq!(r.steps[0].prime, GridPrime::new(0, 2));
    }

    #[test]
    fn symbolic_components() {
        let r = components_symbolic(&ZGrid::new(2));
        assert_eq!(r.classes.len(), 9);
        let central: Vec<_> = r.classes.iter().filter(|c| c.label == "central").collect();
        assert_eq!(central.len(), 1);
        assert_eq!(central[0].iso_type, "ℤ×ℤ");
        assert_eq!(components_symbolic(&ZGrid::new(1)).classes.len(), 3);
        let r = components_symbolic(&BFin);
        let isos: Vec<&str> = r.classes.iter().map(|c| c.iso_type.as_str()).collect();
        assert_eq!(isos, vec!["𝔹_fin", "𝔹_cofin", "𝔹_fin × 𝔹_cofin"]);
        assert_eq!(components_symbolic(&NGrid::new(2)).classes.len(), 4);
    }

    #[test]
    fn finite_ideal_graphs() {
        let g = components_finite(&Poset::antichain(3), DEFAULT_IDEAL_LIMIT).unwrap();
        assert_eq!((g.components, g.ideals.len(), g.edges.len()), (1, 8, 12));
        let g = components_finite(&Poset::chain(4), DEFAULT_IDEAL_LIMIT).unwrap();
        assert_eq!((g.components, g.ideals.len(), g.edges.len()), (1, 5, 4));
        let p = Poset::from_covers(4, &[(0, 1), (2, 1), (2, 3)]).unwrap();
        let g = components_finite(&p, DEFAULT_IDEAL_LIMIT).unwrap();
        let l = p.ideal_lattice(DEFAULT_IDEAL_LIMIT).unwrap();
        let mut covers = l.poset().covers().to_vec();
        covers.sort();
        assert_eq!(g.edges, covers);
    }

    #[test]
    fn probes() {
        let r = conjecture_probe(&ZGrid::new(2), &[1, 2], DEFAULT_WINDOW_LIMIT).unwrap();
        assert_eq!(r.windows[1].prime_width, Some(2));
        assert_eq!(r.windows[1].lattice_width, 5);
        assert_eq!(r.component_classes, Some(9));
        let r = conjecture_probe(&BFin, &[2, 4], DEFAULT_WINDOW_LIMIT).unwrap();
        assert!(r.windows[1].lattice_width > r.windows[0].lattice_width);
        let fa = FiniteAdapter::new(FiniteLattice::divisors(12)).unwrap();
        let r = conjecture_probe(&fa, &[1], DEFAULT_WINDOW_LIMIT).unwrap();
        assert_eq!(r.component_classes, Some(1));
        assert_eq!(r.windows[0].prime_width, Some(2));
    }
}
