use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::lattice::FiniteLattice;
use crate::poset::Poset;
use crate::subset::Subset;

use super::{to_json, Covering, LocallyFiniteLattice, Token};

/// Default bound on the number of elements in a window.
pub const DEFAULT_WINDOW_LIMIT: usize = 4096;

/// The interval `[a, b]` of a locally-finite lattice as a finite lattice.
/// Element `i` of the finite lattice is `elements[i]`; elements are sorted by
/// rank above `a`, then by the canonical element order.
#[derive(Clone, Debug)]
pub struct WindowLattice<E> {
    a: E,
    b: E,
    elements: Vec<E>,
    index: HashMap<E, usize>,
    rank: Vec<usize>,
    lattice: FiniteLattice,
}

/// Enumerates `[a, b]` by walking upper covers from `a`, then takes meet and
/// join tables from the oracle. The tables are checked against the cover
/// order, so an oracle whose meets leave the window is rejected.
pub fn interval<L: LocallyFiniteLattice + ?Sized>(
    l: &L,
    a: &L::Elem,
    b: &L::Elem,
    limit: usize,
) -> Result<WindowLattice<L::Elem>> {
    l.validate(a)?;
    l.validate(b)?;
    if !l.leq(a, b) {
        return Err(Error::NotComparable(format!("{} ≰ {}", to_json(a), to_json(b))));
    }
    let mut depth: HashMap<L::Elem, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    depth.insert(a.clone(), 0);
    queue.push_back(a.clone());
    let mut cover_pairs: Vec<(L::Elem, L::Elem)> = Vec::new();
    while let Some(z) = queue.pop_front() {
        let d = depth[&z];
        for u in l.upper_covers_below(&z, b) {
            cover_pairs.push((z.clone(), u.clone()));
            if !depth.contains_key(&u) {
                if depth.len() >= limit {
                    return Err(Error::WindowTooLarge { limit });
                }
                depth.insert(u.clone(), d + 1);
                queue.push_back(u);
            }
        }
    }
    let mut elements: Vec<L::Elem> = depth.keys().cloned().collect();
    elements.sort_by(|x, y| depth[x].cmp(&depth[y]).then_with(|| x.cmp(y)));
    let index: HashMap<L::Elem, usize> = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let rank: Vec<usize> = elements.iter().map(|e| depth[e]).collect();
    let pairs: Vec<(usize, usize)> = cover_pairs.iter().map(|(x, y)| (index[x], index[y])).collect();
    let n = elements.len();
    let labels = elements.iter().map(to_json).collect();
    let poset = Poset::from_covers(n, &pairs)?.with_labels(labels);

    let mut meet = vec![0usize; n * n];
    let mut join = vec![0usize; n * n];
    for i in 0..n {
        meet[i * n + i] = i;
        join[i * n + i] = i;
        for j in i + 1..n {
            let (x, y) = (&elements[i], &elements[j]);
            let outside = |op: &str, z: &L::Elem| {
                Error::UnsupportedLattice(format!(
                    "{op} of {} and {} is {}, outside the window",
                    to_json(x),
                    to_json(y),
                    to_json(z)
                ))
            };
            let m = l.meet(x, y);
            let mi = *index.get(&m).ok_or_else(|| outside("meet", &m))?;
            let jn = l.join(x, y);
            let ji = *index.get(&jn).ok_or_else(|| outside("join", &jn))?;
            meet[i * n + j] = mi;
            meet[j * n + i] = mi;
            join[i * n + j] = ji;
            join[j * n + i] = ji;
        }
    }
    let lattice = FiniteLattice::from_tables(poset, meet, join)?;
    Ok(WindowLattice {
        a: a.clone(),
        b: b.clone(),
        elements,
        index,
        rank,
        lattice,
    })
}

impl<E: Token> WindowLattice<E> {
    pub fn bounds(&self) -> (&E, &E) {
        (&self.a, &self.b)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &E {
        &self.elements[i]
    }

    /// Element index to lattice element.
    pub fn to_global(&self, i: usize) -> E {
        self.elements[i].clone()
    }

    /// Lattice element to element index, if it lies in the window.
    pub fn from_global(&self, x: &E) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// Rank above the lower bound of the window.
    pub fn rank(&self, i: usize) -> usize {
        self.rank[i]
    }

    /// Indices of window elements satisfying `pred`.
    pub fn select(&self, pred: impl Fn(&E) -> bool) -> Subset {
        Subset::from_indices(self.len(), (0..self.len()).filter(|&i| pred(&self.elements[i])))
    }

    /// Brute-force minimum of a subset of the window, if it has one.
    pub fn minimum(&self, s: &Subset) -> Option<usize> {
        s.iter().find(|&m| s.iter().all(|z| self.lattice.leq(m, z)))
    }

    /// Brute-force maximum of a subset of the window, if it has one.
    pub fn maximum(&self, s: &Subset) -> Option<usize> {
        s.iter().find(|&m| s.iter().all(|z| self.lattice.leq(z, m)))
    }

    /// The window's prime filter separating a covering: the up-set of the
    /// minimum of `{z ≤ x⁺ : z ≰ x⁻}`. Returns the member set.
    pub fn separator(&self, c: &Covering<E>) -> Result<Subset> {
        let not_covering = || Error::NotACovering(format!("{} ⋖ {}", to_json(&c.lower), to_json(&c.upper)));
        let lo = self.from_global(&c.lower).ok_or_else(not_covering)?;
        let hi = self.from_global(&c.upper).ok_or_else(not_covering)?;
        if !self.lattice.poset().is_cover(lo, hi) {
            return Err(not_covering());
        }
        let cands = Subset::from_indices(
            self.len(),
            (0..self.len()).filter(|&z| self.lattice.leq(z, hi) && !self.lattice.leq(z, lo)),
        );
        let g = self.minimum(&cands).ok_or_else(|| Error::PropertyViolated {
            property: "covering-unique-separator".into(),
            detail: "separating set has no minimum in the window".into(),
        })?;
        Ok(self.lattice.poset().up_set(g).clone())
    }

    /// Join-irreducibles `g` of the window with `g ≤ x⁺` and `g ≰ x⁻`; by
    /// the finite correspondence these index the window primes in
    /// `φ(x⁺) ∖ φ(x⁻)`.
    pub fn phi_difference(&self, lower: usize, upper: usize) -> Vec<usize> {
        let ji = self.lattice.join_irreducibles_by_covers();
        ji.iter()
            .filter(|&g| self.lattice.leq(g, upper) && !self.lattice.leq(g, lower))
            .collect()
    }
}

/// Rank difference by breadth-first search over the window's cover graph.
pub fn rank_diff_in_window<E: Token>(w: &WindowLattice<E>, x: &E, y: &E) -> Option<usize> {
    let s = w.from_global(x)?;
    let t = w.from_global(y)?;
    if !w.lattice.leq(s, t) {
        return None;
    }
    let mut dist = vec![usize::MAX; w.len()];
    dist[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(z) = queue.pop_front() {
        if z == t {
            return Some(dist[z]);
        }
        for &u in w.lattice.upper_covers(z) {
            if dist[u] == usize::MAX {
                dist[u] = dist[z] + 1;
                queue.push_back(u);
            }
        }
    }
    None
}
