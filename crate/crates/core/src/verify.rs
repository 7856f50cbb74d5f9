//! Property suites. Every check compares library results against a direct
//! brute-force computation or against a structural identity, over
//! exhaustive small instances and seeded random ones. All randomness flows
//! from one seed; reports are assembled in instance order.

use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::filters::{
    complement, enumerate_filters, is_lattice_ideal, is_prime_filter, ji_prime_check, prime_poset, principal_filter,
    separating_prime, union_join, union_join_raw, union_meet, union_meet_raw, LatticeFilter,
    LatticeIdeal,
};
use crate::lattice::{birkhoff_iso_check, FiniteLattice};
use crate::lazylf::{
    interval, rank_diff, rank_diff_in_window, to_json, BFin, Contains, Covering, FiniteAdapter, LocallyFiniteLattice,
    NGrid, PrimeKind, SymbolicPrimes, ZGrid, DEFAULT_WINDOW_LIMIT,
};
use crate::poset::{Poset, DEFAULT_IDEAL_LIMIT};
use crate::report::ReportSet;
use crate::repr::{
    dp_join, dp_meet, in_dp, inverse_phi, is_ideal, same_ideal, sym_diff, Descriptor, IdealDescriptor, SymbolicIdeals,
};
use crate::subset::Subset;
use crate::transpose::{
    build_chain, classify_prime_symbolic, directedness_witness, is_downward_transpose, Outcome, TransposeChain,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Posets up to this size are enumerated exhaustively.
    pub max_poset: usize,
    /// Random posets for the Birkhoff check.
    pub instances: usize,
    pub random_poset_max: usize,
    /// Random distributive lattices for the filter checks.
    pub lattice_instances: usize,
    pub lattice_max: usize,
    pub lattice_poset_max: usize,
    /// Cases per check on infinite lattices.
    pub cases: usize,
    pub radius: i64,
    pub budget: usize,
    pub window_limit: usize,
    /// Corrupts one meet-table entry of the first random lattice.
    pub inject_fault: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            max_poset: 5,
            instances: 500,
            random_poset_max: 8,
            lattice_instances: 200,
            lattice_max: 16,
            lattice_poset_max: 6,
            cases: 200,
            radius: 10,
            budget: 32,
            window_limit: DEFAULT_WINDOW_LIMIT,
            inject_fault: false,
        }
    }
}

impl SuiteConfig {
    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(stream);
        r
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyReport {
    pub config: SuiteConfig,
    pub properties: ReportSet,
    pub total_instances: usize,
    pub total_failures: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl VerifyReport {
    pub fn new(config: SuiteConfig, properties: ReportSet) -> Self {
        VerifyReport {
            total_instances: properties.instances(),
            total_failures: properties.failed(),
            passed: properties.failed() == 0,
            first_failure: properties.first_failure(),
            config,
            properties,
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Runs every section.
pub fn run_suite(cfg: &SuiteConfig) -> VerifyReport {
    let mut all = ReportSet::default();
    for section in [
        birkhoff_section,
        filter_section,
        window_section,
        transpose_section,
        classifier_section,
        representation_section,
    ] {
        all.merge(section(cfg));
    }
    VerifyReport::new(cfg.clone(), all)
}

/// Every poset on `n` points whose order extends `0 < 1 < … < n-1`, one per
/// distinct order. Every finite poset is isomorphic to one of these.
pub fn all_posets(n: usize) -> Vec<Poset> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let chosen: Vec<(usize, usize)> = (0..pairs.len()).filter(|b| mask >> b & 1 == 1).map(|b| pairs[b]).collect();
        let p = Poset::from_covers(n, &chosen).expect("increasing pairs are acyclic");
        let mut key = p.covers().to_vec();
        key.sort();
        if seen.insert(key) {
            out.push(p);
        }
    }
    out
}

/// A poset on `1..=max_n` points with random density and labelling.
pub fn random_poset(rng: &mut impl Rng, max_n: usize) -> Poset {
    let n = rng.gen_range(1..=max_n.max(1));
    let density: f64 = rng.gen();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                pairs.push((perm[i], perm[j]));
            }
        }
    }
    Poset::from_covers(n, &pairs).expect("pairs follow a linear order")
}

/// The ideal lattice of a random poset, resampled until it has at most
/// `max_size` elements.
pub fn random_distributive_lattice(rng: &mut impl Rng, poset_max: usize, max_size: usize) -> FiniteLattice {
    loop {
        let p = random_poset(rng, poset_max);
        let l = p.ideal_lattice(DEFAULT_IDEAL_LIMIT).expect("small posets");
        if l.len() <= max_size {
            return l;
        }
    }
}

/// The random lattices shared by the filter and finite transpose checks.
pub fn suite_lattices(cfg: &SuiteConfig) -> Vec<FiniteLattice> {
    let mut rng = cfg.rng(2);
    let mut ls: Vec<FiniteLattice> = (0..cfg.lattice_instances)
        .map(|_| random_distributive_lattice(&mut rng, cfg.lattice_poset_max, cfg.lattice_max))
        .collect();
    if cfg.inject_fault {
        if let Some(l) = ls.first_mut() {
            let atom = l.upper_covers(l.bottom())[0];
            let (top, bottom) = (l.top(), l.bottom());
            l.tamper_meet(atom, top, bottom);
        }
    }
    ls
}

fn guarded(name: &str, f: impl FnOnce() -> ReportSet) -> ReportSet {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        let mut r = ReportSet::default();
        r.get_mut(name).record(false, || format!("panicked: {msg}"));
        r
    })
}

fn merge_all(parts: Vec<ReportSet>) -> ReportSet {
    let mut out = ReportSet::default();
    for p in parts {
        out.merge(p);
    }
    out
}

// ---------------------------------------------------------------- Birkhoff

pub fn birkhoff_section(cfg: &SuiteConfig) -> ReportSet {
    let mut posets: Vec<Poset> = (1..=cfg.max_poset).flat_map(all_posets).collect();
    let mut rng = cfg.rng(1);
    posets.extend((0..cfg.instances).map(|_| random_poset(&mut rng, cfg.random_poset_max)));
    let parts = posets
        .par_iter()
        .map(|p| guarded("birkhoff-isomorphism", || check_ideal_lattice(p)))
        .collect();
    merge_all(parts)
}

/// The ideal lattice of `p` is distributive, the Birkhoff map is an
/// isomorphism, its irreducibles are counted by cover degree, and ideals
/// are closed under union and intersection.
pub fn check_ideal_lattice(p: &Poset) -> ReportSet {
    let mut r = ReportSet::default();
    let l = match p.ideal_lattice(DEFAULT_IDEAL_LIMIT) {
        Ok(l) => l,
        Err(e) => {
            r.get_mut("birkhoff-isomorphism").record(false, || format!("{}: {e}", poset_desc(p)));
            return r;
        }
    };
    r.get_mut("birkhoff-isomorphism").record_result(
        birkhoff_iso_check(&l),
        |rep| rep.holds && rep.join_irreducibles == p.len(),
        || poset_desc(p),
    );
    check_single_lower_cover(&l, &mut r);
    let ideals: Vec<Subset> = p
        .order_ideals(DEFAULT_IDEAL_LIMIT)
        .expect("bounded")
        .into_iter()
        .map(|i| i.into_members())
        .collect();
    let set: HashSet<&Subset> = ideals.iter().collect();
    let closed = ideals
        .iter()
        .all(|a| ideals.iter().all(|b| set.contains(&a.union(b)) && set.contains(&a.intersection(b))));
    r.get_mut("ideals-ring-of-sets").record(closed, || poset_desc(p));
    r
}

fn poset_desc(p: &Poset) -> String {
    format!("poset n={} covers={:?}", p.len(), p.covers())
}

fn lattice_desc(l: &FiniteLattice) -> String {
    format!("lattice n={} covers={:?}", l.len(), l.poset().covers())
}

fn check_single_lower_cover(l: &FiniteLattice, r: &mut ReportSet) {
    let ok = l.join_irreducibles_by_covers() == l.join_irreducibles_by_definition()
        && l.meet_irreducibles_by_covers() == l.meet_irreducibles_by_definition();
    r.get_mut("single-lower-cover").record(ok, || lattice_desc(l));
}

// ---------------------------------------------------------------- filters

pub fn filter_section(cfg: &SuiteConfig) -> ReportSet {
    let ls = suite_lattices(cfg);
    let parts = ls
        .par_iter()
        .map(|l| guarded("finite-filters-principal", || check_filter_algebra(l)))
        .collect();
    merge_all(parts)
}

fn bits(l: &FiniteLattice, s: &Subset) -> u32 {
    debug_assert!(l.len() <= 32);
    s.iter().fold(0u32, |m, i| m | 1 << i)
}

fn subset_of(l: &FiniteLattice, m: u32) -> Subset {
    Subset::from_indices(l.len(), (0..l.len()).filter(|i| m >> i & 1 == 1))
}

/// Every lattice filter (`up` = principal filters) or lattice ideal (`up` =
/// principal ideals), by scanning all subsets against the definition.
fn brute_closed_sets(l: &FiniteLattice, filters: bool) -> Vec<u32> {
    let n = l.len();
    assert!(n <= 20, "brute-force subset scan is limited to 20 elements");
    let cone: Vec<u32> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| if filters { l.leq(i, j) } else { l.leq(j, i) })
                .fold(0, |m, j| m | 1 << j)
        })
        .collect();
    let op = |x, y| if filters { l.meet(x, y) } else { l.join(x, y) };
    let mut out = Vec::new();
    for m in 1u32..(1u32 << n) {
        let members: Vec<usize> = (0..n).filter(|i| m >> i & 1 == 1).collect();
        if members.iter().any(|&i| cone[i] & !m != 0) {
            continue;
        }
        if members.iter().all(|&x| members.iter().all(|&y| m >> op(x, y) & 1 == 1)) {
            out.push(m);
        }
    }
    out
}

fn brute_prime(l: &FiniteLattice, m: u32) -> bool {
    let n = l.len();
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let has = |x: usize| m >> x & 1 == 1;
    m != full && (0..n).all(|x| (0..n).all(|y| !has(l.join(x, y)) || has(x) || has(y)))
}

fn brute_closure(l: &FiniteLattice, start: u32, filters: bool) -> u32 {
    let n = l.len();
    let mut m = start;
    loop {
        let mut next = m;
        for x in (0..n).filter(|x| m >> x & 1 == 1) {
            for y in (0..n).filter(|y| m >> y & 1 == 1) {
                next |= 1 << if filters { l.meet(x, y) } else { l.join(x, y) };
            }
        }
        if next == m {
            return m;
        }
        m = next;
    }
}

pub fn check_filter_algebra(l: &FiniteLattice) -> ReportSet {
    let mut r = ReportSet::default();
    let desc = || lattice_desc(l);
    let n = l.len();

    r.get_mut("birkhoff-isomorphism")
        .record_result(birkhoff_iso_check(l), |rep| rep.holds, desc);
    check_single_lower_cover(l, &mut r);

    let fl = match enumerate_filters(l, DEFAULT_IDEAL_LIMIT) {
        Ok(fl) => fl,
        Err(e) => {
            r.get_mut("finite-filters-principal").record(false, || format!("{}: {e}", desc()));
            return r;
        }
    };
    let brute: Vec<u32> = brute_closed_sets(l, true);
    let brute_ideals: Vec<u32> = brute_closed_sets(l, false);
    let filters: Vec<LatticeFilter> = brute
        .iter()
        .map(|&m| LatticeFilter::new(l, subset_of(l, m)).expect("scanned filters satisfy the axioms"))
        .collect();
    let ideals: Vec<LatticeIdeal> = brute_ideals
        .iter()
        .map(|&m| LatticeIdeal::new(l, subset_of(l, m)).expect("scanned ideals satisfy the axioms"))
        .collect();
    let lib: BTreeSet<u32> = fl.filters.iter().map(|f| bits(l, f.members())).collect();
    let scanned: BTreeSet<u32> = brute.iter().copied().collect();
    let pp = prime_poset(l);
    let ji = l.join_irreducibles_by_definition();
    let principal_witnesses_ok = pp.as_ref().is_ok_and(|pp| {
        pp.witnesses.iter().all(Option::is_some)
            && pp.witnesses.iter().flatten().copied().collect::<BTreeSet<_>>() == ji.iter().collect()
    });
    r.get_mut("finite-filters-principal").record(
        lib == scanned && fl.filters.len() == n && fl.all_principal() && principal_witnesses_ok,
        || format!("{}: {} enumerated, {} scanned", desc(), fl.filters.len(), brute.len()),
    );

    for (f, &m) in filters.iter().zip(&brute) {
        let lib_prime = is_prime_filter(l, f);
        r.get_mut("prime-filter-definition")
            .record(lib_prime == brute_prime(l, m), || format!("{}: filter {:?}", desc(), f.members()));
        if f.is_proper() {
            let co = f.members().complement();
            let co_ideal = is_lattice_ideal(l, &co);
            let via_fn = complement(l, f).is_ok();
            r.get_mut("prime-complement-is-ideal").record(co_ideal == lib_prime && via_fn == lib_prime, || {
                format!("{}: filter {:?}", desc(), f.members())
            });
        }
    }
    for x in 0..n {
        let pf = principal_filter(l, x);
        r.get_mut("principal-prime-iff-join-irreducible")
            .record(is_prime_filter(l, &pf) == ji.contains(x), || format!("{}: x={}", desc(), l.label(x)));
    }

    // 𝓕 order is inverse inclusion.
    for x in 0..n {
        let ix = fl.index_of(&principal_filter(l, x)).expect("principal filters are filters");
        for (j, f) in fl.filters.iter().enumerate() {
            let a = fl.lattice.leq(j, ix);
            let b = principal_filter(l, x).members().is_subset(f.members());
            let c = f.contains(x);
            r.get_mut("filter-order-equivalence")
                .record(a == b && b == c, || format!("{}: x={}, filter {:?}", desc(), l.label(x), f.members()));
        }
    }

    for f in &filters {
        for g in &filters {
            let raw = union_meet_raw(l, f, g);
            let both = f.members().union(g.members());
            r.get_mut("union-meet-contains-operands")
                .record(both.is_subset(&raw), || format!("{}: {:?} ⩓ {:?}", desc(), f.members(), g.members()));
            let closure = subset_of(l, brute_closure(l, bits(l, &both), true));
            let um = union_meet(l, f, g);
            r.get_mut("union-meet-is-meet-closure").record(
                raw == closure && um.as_ref().is_ok_and(|u| *u.members() == closure),
                || format!("{}: {:?} ⩓ {:?}", desc(), f.members(), g.members()),
            );
        }
    }
    for a in &ideals {
        for b in &ideals {
            let raw = union_join_raw(l, a, b);
            let both = a.members().union(b.members());
            let closure = subset_of(l, brute_closure(l, bits(l, &both), false));
            let uj = union_join(l, a, b);
            r.get_mut("union-join-is-join-closure").record(
                both.is_subset(&raw) && raw == closure && uj.as_ref().is_ok_and(|u| *u.members() == closure),
                || format!("{}: {:?} ⩔ {:?}", desc(), a.members(), b.members()),
            );
        }
    }

    // ∩ is the least upper bound and ⩓ the greatest lower bound under ⊇.
    let m = fl.filters.len();
    let ge = |a: usize, b: usize| fl.filters[b].members().is_subset(fl.filters[a].members());
    for a in 0..m {
        for b in 0..m {
            let j = fl.lattice.join(a, b);
            let mt = fl.lattice.meet(a, b);
            let mut ok = *fl.filters[j].members() == fl.filters[a].members().intersection(fl.filters[b].members());
            for h in 0..m {
                ok &= (ge(j, h) == (ge(a, h) && ge(b, h))) && (ge(h, mt) == (ge(h, a) && ge(h, b)));
            }
            r.get_mut("filter-lattice-bounds").record(ok, || format!("{}: filters {a}, {b}", desc()));
        }
    }
    r.get_mut("filter-lattice-distributive")
        .record(fl.lattice.is_distributive(), desc);
    match ji_prime_check(l, DEFAULT_IDEAL_LIMIT) {
        Ok(rep) => r.get_mut("join-irreducible-prime").absorb(rep),
        Err(e) => r.get_mut("join-irreducible-prime").record(false, || format!("{}: {e}", desc())),
    }

    for x in 0..n {
        for y in 0..n {
            let meet_ok = union_meet(l, &principal_filter(l, x), &principal_filter(l, y))
                .is_ok_and(|u| u == principal_filter(l, l.meet(x, y)));
            let join_ok = principal_filter(l, x).intersection(&principal_filter(l, y))
                == principal_filter(l, l.join(x, y));
            r.get_mut("principal-filter-embedding")
                .record(meet_ok && join_ok, || format!("{}: x={}, y={}", desc(), l.label(x), l.label(y)));
        }
    }

    let pp = match pp {
        Ok(pp) => pp,
        Err(e) => {
            r.get_mut("prime-separation").record(false, || format!("{}: {e}", desc()));
            return r;
        }
    };
    for x in 0..n {
        for f in filters.iter().filter(|f| !f.contains(x)) {
            let found = pp
                .primes
                .iter()
                .any(|p| f.members().is_subset(p.members()) && !p.contains(x));
            r.get_mut("join-irreducible-separation")
                .record(found, || format!("{}: x={}, filter {:?}", desc(), l.label(x), f.members()));
        }
    }
    for x in 0..n {
        for y in (0..n).filter(|&y| !l.leq(x, y)) {
            r.get_mut("prime-separation").record_result(
                separating_prime(l, &pp, x, y),
                |p| p.contains(x) && !p.contains(y) && is_prime_filter(l, p),
                || format!("{}: x={}, y={}", desc(), l.label(x), l.label(y)),
            );
        }
    }
    let phis: Vec<Subset> = (0..n).map(|x| pp.phi(x)).collect();
    for x in 0..n {
        r.get_mut("phi-is-ideal")
            .record(pp.order.is_order_ideal(&phis[x]), || format!("{}: x={}", desc(), l.label(x)));
    }
    let distinct: HashSet<&Subset> = phis.iter().collect();
    let mut ok = distinct.len() == n;
    for x in 0..n {
        for y in 0..n {
            ok &= phis[l.meet(x, y)] == phis[x].intersection(&phis[y]);
            ok &= phis[l.join(x, y)] == phis[x].union(&phis[y]);
        }
    }
    r.get_mut("phi-embedding").record(ok, desc);
    r
}

// ---------------------------------------------------------------- sampling

/// Random elements and valid ideal descriptors of a built-in.
pub trait Sampled: SymbolicIdeals {
    fn sample_elem(&self, rng: &mut ChaCha8Rng, radius: i64) -> Self::Elem;

    /// `(x0, q, y)`: a start element, a valid descriptor anchored away from
    /// `x0`, and the element `q` should reconstruct to.
    fn sample_descriptor(&self, rng: &mut ChaCha8Rng, radius: i64) -> (Self::Elem, Descriptor<Self>, Self::Elem);
}

fn grid_elem(rng: &mut ChaCha8Rng, dim: usize, lo: i64, hi: i64) -> Vec<i64> {
    (0..dim).map(|_| rng.gen_range(lo..=hi)).collect()
}

fn reanchored<L: SymbolicIdeals>(l: &L, anchor: &L::Elem, y: &L::Elem) -> Descriptor<L> {
    let a = l.phi(anchor);
    let delta = sym_diff(l, &a, &l.phi(y)).expect("elements lie in one class");
    IdealDescriptor { base: a.base, delta }
}

impl Sampled for ZGrid {
    fn sample_elem(&self, rng: &mut ChaCha8Rng, radius: i64) -> Vec<i64> {
        grid_elem(rng, self.dim, -radius, radius)
    }

    fn sample_descriptor(&self, rng: &mut ChaCha8Rng, radius: i64) -> (Vec<i64>, Descriptor<Self>, Vec<i64>) {
        let x0 = self.sample_elem(rng, radius);
        let anchor = self.sample_elem(rng, radius);
        let y = self.sample_elem(rng, radius);
        (x0, reanchored(self, &anchor, &y), y)
    }
}

impl Sampled for NGrid {
    fn sample_elem(&self, rng: &mut ChaCha8Rng, radius: i64) -> Vec<i64> {
        grid_elem(rng, self.dim, 0, radius)
    }

    fn sample_descriptor(&self, rng: &mut ChaCha8Rng, radius: i64) -> (Vec<i64>, Descriptor<Self>, Vec<i64>) {
        let x0 = self.sample_elem(rng, radius);
        let anchor = self.sample_elem(rng, radius);
        let y = self.sample_elem(rng, radius);
        (x0, reanchored(self, &anchor, &y), y)
    }
}

impl Sampled for BFin {
    fn sample_elem(&self, rng: &mut ChaCha8Rng, radius: i64) -> BTreeSet<u64> {
        let r = radius.max(1) as u64;
        (0..r).filter(|_| rng.gen_bool(0.5)).collect()
    }

    /// Any finite set of primes is an ideal of the antichain.
    fn sample_descriptor(
        &self,
        rng: &mut ChaCha8Rng,
        radius: i64,
    ) -> (BTreeSet<u64>, Descriptor<Self>, BTreeSet<u64>) {
        let x0 = self.sample_elem(rng, radius);
        let r = 2 * radius.max(1) as u64;
        let y: BTreeSet<u64> = (0..r).filter(|_| rng.gen_bool(0.3)).collect();
        let q = IdealDescriptor::new(crate::repr::SetBase::Empty, y.iter().map(|&k| Contains(k)));
        (x0, q, y)
    }
}

// ---------------------------------------------------------------- windows

pub fn window_section(cfg: &SuiteConfig) -> ReportSet {
    let (a, b) = rayon::join(
        || guarded("raise-matches-window", || check_window(&ZGrid::new(2), cfg, 3)),
        || guarded("raise-matches-window", || check_window(&BFin, cfg, 4)),
    );
    merge_all(vec![a, b])
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, v: &'a [T]) -> Option<&'a T> {
    v.choose(rng)
}

/// Raising, lowering, separators and rank differences against brute-force
/// search in the finite window `sample_window(radius)`.
pub fn check_window<L: Sampled>(l: &L, cfg: &SuiteConfig, stream: u64) -> ReportSet {
    let mut r = ReportSet::default();
    let name = l.name();
    let (a, b) = l.sample_window(cfg.radius);
    let w = match interval(l, &a, &b, cfg.window_limit) {
        Ok(w) => w,
        Err(e) => {
            r.get_mut("raise-matches-window").record(false, || format!("{name}: window: {e}"));
            return r;
        }
    };
    let primes = l.primes_in(&l.sufficient_region(&[&a, &b]));
    let mut rng = cfg.rng(stream);
    let elems = w.elements();
    let one_prime = |x: &L::Elem, y: &L::Elem, p: &L::Prime| {
        l.is_covering(x, y) && sym_diff(l, &l.phi(x), &l.phi(y)).is_some_and(|d| d.len() == 1 && d.contains(p))
    };

    let mut done = 0;
    while done < cfg.cases {
        let x = pick(&mut rng, elems).expect("windows are nonempty").clone();
        let outside: Vec<&L::Prime> = primes.iter().filter(|p| !l.contains(p, &x)).collect();
        let Some(&p) = pick(&mut rng, &outside) else { continue };
        done += 1;
        let brute = w.minimum(&w.select(|z| l.leq(&x, z) && l.contains(p, z)));
        let lib = l.raise(&x, p);
        let wit = || format!("{name}: {} ⇑ {}", to_json(&x), to_json(p));
        let matches = match (&lib, brute) {
            (Ok(y), Some(i)) => *y == *w.element(i),
            (Ok(y), None) => w.from_global(y).is_none(),
            (Err(_), _) => false,
        };
        r.get_mut("raise-matches-window").record(matches, wit);
        if l.prime_lower_covers(p).iter().all(|q| l.contains(q, &x)) {
            r.get_mut("raise-adds-one-prime")
                .record(lib.as_ref().is_ok_and(|y| one_prime(&x, y, p)), wit);
            r.get_mut("raise-lower-inverse")
                .record(lib.as_ref().is_ok_and(|y| l.lower(y, p).is_ok_and(|z| z == x)), wit);
        }
    }

    let mut done = 0;
    while done < cfg.cases {
        let x = pick(&mut rng, elems).expect("windows are nonempty").clone();
        let inside: Vec<&L::Prime> = primes.iter().filter(|p| l.contains(p, &x)).collect();
        let Some(&p) = pick(&mut rng, &inside) else { continue };
        done += 1;
        let brute = w.maximum(&w.select(|z| l.leq(z, &x) && !l.contains(p, z)));
        let lib = l.lower(&x, p);
        let wit = || format!("{name}: {} ⇓ {}", to_json(&x), to_json(p));
        let matches = match (&lib, brute) {
            (Ok(y), Some(i)) => *y == *w.element(i),
            (Ok(y), None) => w.from_global(y).is_none(),
            (Err(_), _) => false,
        };
        r.get_mut("lower-matches-window").record(matches, wit);
        if l.prime_upper_covers(p).iter().all(|q| !l.contains(q, &x)) {
            r.get_mut("lower-removes-one-prime")
                .record(lib.as_ref().is_ok_and(|y| one_prime(y, &x, p)), wit);
        }
    }

    let mut done = 0;
    while done < cfg.cases {
        let x = pick(&mut rng, elems).expect("windows are nonempty").clone();
        let ups = l.upper_covers_below(&x, &b);
        let Some(y) = pick(&mut rng, &ups).cloned() else { continue };
        done += 1;
        let c = Covering {
            lower: x.clone(),
            upper: y.clone(),
        };
        let wit = || format!("{name}: {} ⋖ {}", to_json(&x), to_json(&y));
        let lib = l.separator(&c);
        let brute = w.separator(&c);
        let ok = match (&lib, &brute) {
            (Ok(p), Ok(s)) => w.select(|z| l.contains(p, z)) == *s,
            _ => false,
        };
        r.get_mut("separator-matches-window").record(ok, wit);
        let (i, j) = (w.from_global(&x).unwrap(), w.from_global(&y).unwrap());
        let unique = w.phi_difference(i, j).len() == 1
            && lib.is_ok_and(|p| sym_diff(l, &l.phi(&x), &l.phi(&y)).is_some_and(|d| d.len() == 1 && d.contains(&p)));
        r.get_mut("covering-unique-separator").record(unique, wit);
    }

    for _ in 0..cfg.cases {
        let x = pick(&mut rng, elems).unwrap().clone();
        let y = pick(&mut rng, elems).unwrap().clone();
        let m = l.meet(&x, &y);
        let wit = || format!("{name}: x={}, y={}", to_json(&x), to_json(&y));
        let lib = rank_diff(l, &m, &x);
        let brute = rank_diff_in_window(&w, &m, &x);
        r.get_mut("rank-diff-matches-window")
            .record(lib.as_ref().ok().copied() == brute, wit);
        let rho = brute.zip(rank_diff_in_window(&w, &m, &y)).map(|(s, t)| s + t);
        let d = sym_diff(l, &l.phi(&x), &l.phi(&y)).map(|d| d.len());
        r.get_mut("phi-difference-rank").record(rho.is_some() && rho == d, wit);
    }
    r
}

// ---------------------------------------------------------------- transposes

/// All downward transposes of `c` one step down: for each other lower
/// cover `u` of `c⁺`, the pair `(u ∧ c⁻, u)` when it qualifies.
pub fn one_step_transposes<L: LocallyFiniteLattice + ?Sized>(l: &L, c: &Covering<L::Elem>) -> Vec<Covering<L::Elem>> {
    l.lower_covers(&c.upper)
        .into_iter()
        .filter(|u| *u != c.lower)
        .map(|u| Covering {
            lower: l.meet(&u, &c.lower),
            upper: u,
        })
        .filter(|y| is_downward_transpose(l, c, y).unwrap_or(false))
        .collect()
}

/// Builds the descent chain from `c` and checks every link.
pub fn check_chain<L: SymbolicPrimes>(
    l: &L,
    c: &Covering<L::Elem>,
    max_len: usize,
    r: &mut ReportSet,
) -> Option<(TransposeChain<L::Elem>, bool)> {
    let name = l.name();
    let wit = || format!("{name}: chain from {}", to_json(c));
    let (chain, stopped) = match build_chain(l, c, max_len) {
        Ok(v) => v,
        Err(e) => {
            r.get_mut("down-step").record(false, || format!("{}: {e}", wit()));
            return None;
        }
    };
    r.get_mut("down-step").record(chain.verify(l).is_ok(), wit);
    let cs = &chain.coverings;
    for i in 0..cs.len() {
        for j in i + 1..cs.len() {
            r.get_mut("transpose-transitive").record(is_downward_transpose(l, &cs[i], &cs[j]).unwrap_or(false), || {
                format!("{}: links {i}, {j}", wit())
            });
        }
        let mut alts = one_step_transposes(l, &cs[i]);
        alts.extend(cs.iter().skip(i + 1).take(2).cloned());
        for y in &alts {
            for z in &alts {
                r.get_mut("transpose-directed").record(directedness_witness(l, &cs[i], y, z).is_ok(), || {
                    format!("{}: link {i}, y={}, z={}", wit(), to_json(y), to_json(z))
                });
            }
        }
    }
    let seps: Vec<Option<L::Prime>> = cs.iter().map(|c| l.separator(c).ok()).collect();
    let constant = seps[0].is_some() && seps.iter().all(|s| *s == seps[0]);
    r.get_mut("transpose-preserves-separator").record(constant, wit);
    Some((chain, stopped))
}

fn random_covering<L: Sampled>(l: &L, rng: &mut ChaCha8Rng, radius: i64) -> Covering<L::Elem> {
    let (_, top) = l.sample_window(radius);
    loop {
        let x = l.sample_elem(rng, radius);
        let ups = l.upper_covers_below(&x, &top);
        if let Some(y) = ups.choose(rng) {
            return Covering {
                lower: x,
                upper: y.clone(),
            };
        }
    }
}

pub fn transpose_section(cfg: &SuiteConfig) -> ReportSet {
    let z = ZGrid::new(2);
    let mut rng = cfg.rng(5);
    let grid_cases: Vec<_> = (0..cfg.cases).map(|_| random_covering(&z, &mut rng, cfg.radius)).collect();
    let bfin_cases: Vec<_> = (0..cfg.cases).map(|_| random_covering(&BFin, &mut rng, cfg.radius)).collect();
    let ls = suite_lattices(cfg);
    let finite_cases: Vec<(usize, (usize, usize))> = ls
        .iter()
        .enumerate()
        .filter_map(|(i, l)| l.poset().covers().choose(&mut rng).map(|&c| (i, c)))
        .collect();

    let mut parts: Vec<ReportSet> = grid_cases
        .par_iter()
        .map(|c| {
            guarded("down-step", || {
                let mut r = ReportSet::default();
                check_chain(&z, c, cfg.budget, &mut r);
                r
            })
        })
        .collect();
    parts.extend(bfin_cases.par_iter().map(|c| {
        guarded("down-step", || {
            let mut r = ReportSet::default();
            if let Some((_, stopped)) = check_chain(&BFin, c, usize::MAX, &mut r) {
                r.get_mut("down-step").record(stopped, || format!("bfin: chain from {} did not stop", to_json(c)));
            }
            r
        })
    }).collect::<Vec<_>>());
    parts.extend(finite_cases.par_iter().map(|&(i, (lo, hi))| {
        guarded("down-step", || {
            let mut r = ReportSet::default();
            match FiniteAdapter::new(ls[i].clone()) {
                Ok(fa) => {
                    check_chain(&fa, &Covering { lower: lo, upper: hi }, usize::MAX, &mut r);
                }
                Err(e) => r.get_mut("down-step").record(false, || format!("{}: {e}", lattice_desc(&ls[i]))),
            }
            r
        })
    }).collect::<Vec<_>>());
    merge_all(parts)
}

// ---------------------------------------------------------------- classifier

/// Finite-subset coverings are principal with the inserted singleton as
/// generator; integer-grid coverings exhaust the budget with a secondary
/// separator; natural-grid coverings are principal.
pub fn classifier_section(cfg: &SuiteConfig) -> ReportSet {
    let mut r = ReportSet::default();
    let mut rng = cfg.rng(6);
    let name = "classifier-ground-truth";
    for _ in 0..cfg.cases {
        let c = random_covering(&BFin, &mut rng, cfg.radius);
        let k: BTreeSet<u64> = c.upper.difference(&c.lower).copied().collect();
        let v = classify_prime_symbolic(&BFin, &c, cfg.budget);
        r.get_mut(name).record_result(
            v,
            |v| {
                matches!(&v.outcome, Outcome::Principal { generator, chain_length }
                    if *generator == k && *chain_length == c.upper.len())
                    && v.oracle_kind == Some("principal")
            },
            || format!("bfin: {}", to_json(&c)),
        );
    }
    let z = ZGrid::new(2);
    for _ in 0..cfg.cases {
        let c = random_covering(&z, &mut rng, cfg.radius);
        let v = classify_prime_symbolic(&z, &c, cfg.budget);
        r.get_mut(name).record_result(
            v,
            |v| {
                matches!(v.outcome, Outcome::BudgetExceeded { budget } if budget == cfg.budget)
                    && v.oracle_kind == Some("secondary")
            },
            || format!("zgrid2: {}", to_json(&c)),
        );
    }
    let ng = NGrid::new(2);
    for _ in 0..cfg.cases {
        let c = random_covering(&ng, &mut rng, cfg.radius);
        let expected = ng.separator(&c).ok().and_then(|p| match ng.kind(&p) {
            PrimeKind::Principal(g) => Some(g),
            PrimeKind::Secondary => None,
        });
        let v = classify_prime_symbolic(&ng, &c, cfg.budget);
        r.get_mut(name).record_result(
            v,
            |v| expected.is_some() && v.generator() == expected.as_ref(),
            || format!("ngrid2: {}", to_json(&c)),
        );
    }
    r
}

// ---------------------------------------------------------------- representation

pub fn representation_section(cfg: &SuiteConfig) -> ReportSet {
    let parts = vec![
        guarded("representation-bijection", || check_representation(&ZGrid::new(2), cfg, 7)),
        guarded("representation-bijection", || check_representation(&ZGrid::new(3), cfg, 8)),
        guarded("representation-bijection", || check_representation(&BFin, cfg, 9)),
    ];
    merge_all(parts)
}

fn replay_ok<L: SymbolicIdeals>(l: &L, steps: &[crate::repr::Step<L::Elem, L::Prime>]) -> bool {
    steps.iter().all(|s| {
        let (lo, hi) = match s.kind {
            crate::repr::StepKind::Insert => (&s.from, &s.to),
            crate::repr::StepKind::Remove => (&s.to, &s.from),
        };
        l.is_covering(lo, hi)
            && sym_diff(l, &l.phi(&s.from), &l.phi(&s.to)).is_some_and(|d| d.len() == 1 && d.contains(&s.prime))
    })
}

/// `φ` followed by reconstruction is the identity on elements, and
/// reconstruction followed by `φ` is the identity on valid descriptors;
/// each replay uses one cover move per prime of the symmetric difference.
pub fn check_representation<L: Sampled>(l: &L, cfg: &SuiteConfig, stream: u64) -> ReportSet {
    let mut r = ReportSet::default();
    let name = l.name();
    let mut rng = cfg.rng(stream);
    for _ in 0..cfg.cases {
        let x0 = l.sample_elem(&mut rng, cfg.radius);
        let x = l.sample_elem(&mut rng, cfg.radius);
        let expected = sym_diff(l, &l.phi(&x0), &l.phi(&x)).map(|d| d.len());
        r.get_mut("representation-bijection").record_result(
            inverse_phi(l, &x0, &l.phi(&x)),
            |rec| rec.element == x && Some(rec.steps.len()) == expected && replay_ok(l, &rec.steps),
            || format!("{name}: from {} to φ({})", to_json(&x0), to_json(&x)),
        );
    }
    let mut descs = Vec::new();
    for _ in 0..cfg.cases {
        let (x0, q, y) = l.sample_descriptor(&mut rng, cfg.radius);
        let expected = sym_diff(l, &l.phi(&x0), &q).map(|d| d.len());
        r.get_mut("representation-bijection").record_result(
            inverse_phi(l, &x0, &q),
            |rec| {
                rec.element == y
                    && same_ideal(l, &l.phi(&rec.element), &q)
                    && Some(rec.steps.len()) == expected
                    && replay_ok(l, &rec.steps)
            },
            || format!("{name}: from {} to {}", to_json(&x0), to_json(&q)),
        );
        descs.push((x0, q, y));
    }
    for pair in descs.chunks(2) {
        let [(x0, q1, y1), (_, q2, y2)] = pair else { continue };
        let wit = || format!("{name}: {} and {}", to_json(q1), to_json(q2));
        let ok = match (dp_meet(l, q1, q2), dp_join(l, q1, q2)) {
            (Ok(m), Ok(j)) => {
                let closed = [&m, &j]
                    .iter()
                    .all(|d| in_dp(l, d, q1) && in_dp(l, d, q2) && is_ideal(l, d));
                let pointwise = sym_diff(l, q1, q2).is_some_and(|support| {
                    support.iter().chain(&m.delta).chain(&j.delta).all(|p| {
                        let (a, b) = (crate::repr::contains(l, q1, p), crate::repr::contains(l, q2, p));
                        crate::repr::contains(l, &m, p) == (a && b) && crate::repr::contains(l, &j, p) == (a || b)
                    })
                });
                let embeds = inverse_phi(l, x0, &m).is_ok_and(|rec| rec.element == l.meet(y1, y2))
                    && inverse_phi(l, x0, &j).is_ok_and(|rec| rec.element == l.join(y1, y2));
                closed && pointwise && embeds
            }
            _ => false,
        };
        r.get_mut("finite-difference-sublattice").record(ok, wit);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_poset_counts() {
        // naturally labelled posets: 1, 2, 7, 40
        let counts: Vec<usize> = (1..=4).map(|n| all_posets(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 7, 40]);
    }

    #[test]
    fn random_lattices_are_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let l = random_distributive_lattice(&mut rng, 6, 16);
            assert!(l.len() <= 16 && l.is_distributive());
        }
    }

    fn small() -> SuiteConfig {
        SuiteConfig {
            max_poset: 3,
            instances: 10,
            lattice_instances: 5,
            cases: 10,
            radius: 4,
            ..Default::default()
        }
    }

    #[test]
    fn small_suite_passes() {
        let rep = run_suite(&small());
        assert!(rep.passed, "{}", rep.to_json_pretty());
        assert!(rep.properties.0.iter().all(|l| l.instances > 0));
    }

    #[test]
    fn injected_fault_is_named() {
        let rep = run_suite(&SuiteConfig {
            inject_fault: true,
            ..small()
        });
        assert!(!rep.passed);
        let first = rep.first_failure.unwrap();
        assert!(first.starts_with("birkhoff-isomorphism") || first.contains('-'), "{first}");
    }
}
