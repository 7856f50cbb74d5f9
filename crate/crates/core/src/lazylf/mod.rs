//! Locally-finite lattices presented by oracles, finite interval windows,
//! and the symbolic prime-filter interface implemented by the built-ins.

mod builtins;
pub mod plugin;
mod window;

use std::collections::BTreeSet;
use std::fmt::Debug;
use std::hash::Hash;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use builtins::{BFin, Contains, FiniteAdapter, GridPrime, NGrid, Product, ProductPrime, ZGrid};
pub use window::{interval, rank_diff_in_window, WindowLattice, DEFAULT_WINDOW_LIMIT};

/// Bounds required of element and prime encodings.
pub trait Token: Clone + Eq + Ord + Hash + Debug + Serialize + DeserializeOwned + Send + Sync {}
impl<T: Clone + Eq + Ord + Hash + Debug + Serialize + DeserializeOwned + Send + Sync> Token for T {}

/// A lattice in which every interval `[a, b]` is finite, given by its order,
/// meet, join and cover oracles. The element `Ord` is the canonical order
/// used for every tie-break.
pub trait LocallyFiniteLattice: Send + Sync {
    type Elem: Token;

    fn name(&self) -> String;

    /// Rejects encodings that are not elements of this lattice.
    fn validate(&self, _x: &Self::Elem) -> Result<()> {
        Ok(())
    }

    fn leq(&self, x: &Self::Elem, y: &Self::Elem) -> bool;
    fn meet(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn join(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;

    /// All upper covers, or `None` when there are infinitely many.
    fn upper_covers(&self, x: &Self::Elem) -> Option<Vec<Self::Elem>>;

    /// Lower covers; always a finite list for the lattices handled here.
    fn lower_covers(&self, x: &Self::Elem) -> Vec<Self::Elem>;

    /// Upper covers of `x` lying below `bound`, sorted. Without a finite
    /// cover list this walks lower covers down from `bound` through [x, bound].
    fn upper_covers_below(&self, x: &Self::Elem, bound: &Self::Elem) -> Vec<Self::Elem> {
        let mut v: Vec<_> = match self.upper_covers(x) {
            Some(ups) => ups.into_iter().filter(|z| self.leq(z, bound)).collect(),
            None if !self.leq(x, bound) => Vec::new(),
            None => {
                let mut seen = std::collections::BTreeSet::from([bound.clone()]);
                let mut stack = vec![bound.clone()];
                let mut found = Vec::new();
                while let Some(z) = stack.pop() {
                    let downs = self.lower_covers(&z);
                    if downs.contains(x) {
                        found.push(z.clone());
                    }
                    for d in downs {
                        if d != *x && self.leq(x, &d) && seen.insert(d.clone()) {
                            stack.push(d);
                        }
                    }
                }
                found
            }
        };
        v.sort();
        v
    }

    fn bottom(&self) -> Option<Self::Elem> {
        None
    }

    fn top(&self) -> Option<Self::Elem> {
        None
    }

    fn lt(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        x != y && self.leq(x, y)
    }

    fn is_covering(&self, lower: &Self::Elem, upper: &Self::Elem) -> bool {
        self.lt(lower, upper) && self.upper_covers_below(lower, upper).contains(upper)
    }
}

/// A covering pair `lower ⋖ upper`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Covering<E> {
    pub lower: E,
    pub upper: E,
}

impl<E: Token> Covering<E> {
    pub fn new<L: LocallyFiniteLattice<Elem = E> + ?Sized>(l: &L, lower: E, upper: E) -> Result<Self> {
        let c = Covering { lower, upper };
        c.check(l)?;
        Ok(c)
    }

    pub fn check<L: LocallyFiniteLattice<Elem = E> + ?Sized>(&self, l: &L) -> Result<()> {
        l.validate(&self.lower)?;
        l.validate(&self.upper)?;
        if l.is_covering(&self.lower, &self.upper) {
            Ok(())
        } else {
            Err(Error::NotACovering(format!(
                "{} ⋖ {}",
                to_json(&self.lower),
                to_json(&self.upper)
            )))
        }
    }
}

/// Principal primes carry their generator; secondary primes have none.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeKind<E> {
    Principal(E),
    Secondary,
}

impl<E> PrimeKind<E> {
    pub fn is_principal(&self) -> bool {
        matches!(self, PrimeKind::Principal(_))
    }

    pub fn tag(&self) -> &'static str {
        match self {
            PrimeKind::Principal(_) => "principal",
            PrimeKind::Secondary => "secondary",
        }
    }
}

/// A finite band of prime indices: thresholds for grids, integers for
/// the finite-subset lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub lo: i64,
    pub hi: i64,
}

impl Region {
    pub fn new(lo: i64, hi: i64) -> Self {
        Region { lo, hi }
    }

    pub fn radius(r: i64) -> Self {
        Region { lo: -r, hi: r }
    }

    pub fn contains(&self, k: i64) -> bool {
        self.lo <= k && k <= self.hi
    }

    pub fn union(&self, other: &Region) -> Region {
        Region {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }
}

/// Shape of the prime poset of a built-in, for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeFamily {
    pub lattice: String,
    pub description: String,
    pub families: usize,
    pub kind: String,
}

/// Built-ins whose prime filters are known in closed form. Primes are
/// ordered as in the prime poset: `p ≤ q` iff `q ⊆ p`.
pub trait SymbolicPrimes: LocallyFiniteLattice {
    type Prime: Token;

    fn family(&self) -> PrimeFamily;

    fn contains(&self, p: &Self::Prime, x: &Self::Elem) -> bool;
    fn kind(&self, p: &Self::Prime) -> PrimeKind<Self::Elem>;
    fn prime_leq(&self, p: &Self::Prime, q: &Self::Prime) -> bool;
    fn prime_lower_covers(&self, p: &Self::Prime) -> Vec<Self::Prime>;
    fn prime_upper_covers(&self, p: &Self::Prime) -> Vec<Self::Prime>;

    /// Every prime whose index lies in `region`, sorted.
    fn primes_in(&self, region: &Region) -> Vec<Self::Prime>;

    /// Smallest region deciding prime-ideal questions about these elements.
    fn sufficient_region(&self, elems: &[&Self::Elem]) -> Region;

    /// A window `[a, b]` of the given radius around a reference point.
    fn sample_window(&self, radius: i64) -> (Self::Elem, Self::Elem);

    /// Closed-form separator of a covering.
    fn separator(&self, c: &Covering<Self::Elem>) -> Result<Self::Prime>;

    /// `x ⇑ p`: the minimum of `PF(x) ∩ p`.
    fn raise(&self, x: &Self::Elem, p: &Self::Prime) -> Result<Self::Elem>;

    /// `x ⇓ p′` for the complementary ideal `p′ = L ∖ p`: the maximum of
    /// `PI(x) ∖ p`. Requires `x ∈ p`.
    fn lower(&self, x: &Self::Elem, p: &Self::Prime) -> Result<Self::Elem>;

    fn prime_lt(&self, p: &Self::Prime, q: &Self::Prime) -> bool {
        p != q && self.prime_leq(p, q)
    }
}

/// Primes of `region` containing `x`.
pub fn phi_restricted<L: SymbolicPrimes>(l: &L, x: &L::Elem, region: &Region) -> BTreeSet<L::Prime> {
    l.primes_in(region)
        .into_iter()
        .filter(|p| l.contains(p, x))
        .collect()
}

/// Length of a saturated chain from `x` up to `y`, found greedily by
/// stepping to the least upper cover still below `y`.
pub fn rank_diff<L: LocallyFiniteLattice + ?Sized>(l: &L, x: &L::Elem, y: &L::Elem) -> Result<usize> {
    if !l.leq(x, y) {
        return Err(Error::NotComparable(format!("{} ≰ {}", to_json(x), to_json(y))));
    }
    let mut cur = x.clone();
    let mut steps = 0;
    while cur != *y {
        cur = l
            .upper_covers_below(&cur, y)
            .into_iter()
            .next()
            .expect("an element strictly below y has an upper cover below y");
        steps += 1;
    }
    Ok(steps)
}

/// Checks that the prime filter predicate is closed upward, meet-closed and
/// prime on the elements of a window.
pub fn prime_on_window<L: SymbolicPrimes>(l: &L, w: &WindowLattice<L::Elem>, p: &L::Prime) -> bool {
    let members = crate::subset::Subset::from_indices(
        w.len(),
        (0..w.len()).filter(|&i| l.contains(p, w.element(i))),
    );
    if members.is_empty() || members.is_full() {
        // the window sits entirely inside or outside p
        return true;
    }
    let f = match crate::filters::LatticeFilter::new(w.lattice(), members) {
        Ok(f) => f,
        Err(_) => return false,
    };
    crate::filters::is_prime_filter(w.lattice(), &f)
}

pub(crate) fn to_json<T: Serialize>(x: &T) -> String {
    serde_json::to_string(x).unwrap_or_else(|_| "<unserializable>".to_string())
}

/// Parses an element literal. Accepts JSON, plus `(..)` tuples, `{..}`
/// sets and `∅`.
pub fn parse_elem<E: DeserializeOwned>(s: &str) -> Result<E> {
    let t = s.trim();
    let t = if t == "∅" || t == "{}" {
        "[]".to_string()
    } else {
        t.replace(['(', '{'], "[").replace([')', '}'], "]")
    };
    serde_json::from_str(&t).map_err(|e| Error::Parse(format!("element `{s}`: {e}")))
}

/// Parses `lower<upper` or `lower⋖upper`.
pub fn parse_covering<E: DeserializeOwned>(s: &str) -> Result<(E, E)> {
    let (a, b) = s
        .split_once('⋖')
        .or_else(|| s.split_once('<'))
        .ok_or_else(|| Error::Parse(format!("covering `{s}` must look like `x<y`")))?;
    Ok((parse_elem(a)?, parse_elem(b)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_literals() {
        let v: Vec<i64> = parse_elem("(0,-1)").unwrap();
        assert_eq!(v, vec![0, -1]);
        let s: BTreeSet<u64> = parse_elem("{3,1}").unwrap();
        assert_eq!(s.into_iter().collect::<Vec<_>>(), vec![1, 3]);
        let e: BTreeSet<u64> = parse_elem("∅").unwrap();
        assert!(e.is_empty());
        let (a, b): (Vec<i64>, Vec<i64>) = parse_covering("(0,0)<(1,0)").unwrap();
        assert_eq!((a, b), (vec![0, 0], vec![1, 0]));
        assert!(parse_elem::<Vec<i64>>("(0,").is_err());
    }
}
