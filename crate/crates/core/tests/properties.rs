use std::collections::{BTreeSet, HashSet};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lattice_repr::filters::{is_prime_filter, LatticeFilter};
use lattice_repr::lattice::{birkhoff_map, FiniteLattice};
use lattice_repr::lazylf::{interval, BFin, Covering, LocallyFiniteLattice, NGrid, Region, SymbolicPrimes, ZGrid};
use lattice_repr::poset::{Poset, DEFAULT_IDEAL_LIMIT};
use lattice_repr::repr::{dp_join, dp_meet, in_dp, inverse_phi, is_ideal, sym_diff, IdealDescriptor, SymbolicIdeals};
use lattice_repr::subset::Subset;
use lattice_repr::transpose::{build_chain, classify_prime_symbolic, is_downward_transpose, Outcome};
use lattice_repr::verify::{check_filter_algebra, random_distributive_lattice, random_poset};

fn poset(seed: u64, max_n: usize) -> Poset {
    random_poset(&mut ChaCha8Rng::seed_from_u64(seed), max_n)
}

fn lattice(seed: u64) -> FiniteLattice {
    random_distributive_lattice(&mut ChaCha8Rng::seed_from_u64(seed), 6, 16)
}

fn grid_point(dim: usize, lo: i64, hi: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(lo..=hi, dim)
}

fn fin_set() -> impl Strategy<Value = BTreeSet<u64>> {
    prop::collection::btree_set(0u64..12, 0..8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ideals_form_a_ring_of_sets(seed in any::<u64>()) {
        let p = poset(seed, 7);
        let ideals: Vec<Subset> = p.order_ideals(DEFAULT_IDEAL_LIMIT).unwrap().into_iter().map(|i| i.into_members()).collect();
        let set: HashSet<&Subset> = ideals.iter().collect();
        for a in &ideals {
            for b in &ideals {
                prop_assert!(set.contains(&a.union(b)));
                prop_assert!(set.contains(&a.intersection(b)));
            }
        }
    }

    #[test]
    fn chain_and_antichain_ideal_counts(k in 0usize..12) {
        prop_assert_eq!(Poset::chain(k).order_ideals(DEFAULT_IDEAL_LIMIT).unwrap().len(), k + 1);
        prop_assert_eq!(Poset::antichain(k).order_ideals(DEFAULT_IDEAL_LIMIT).unwrap().len(), 1 << k);
    }

    #[test]
    fn reduction_then_closure_is_identity(seed in any::<u64>()) {
        let p = poset(seed, 8);
        let q = Poset::from_covers(p.len(), p.covers()).unwrap();
        for i in 0..p.len() {
            for j in 0..p.len() {
                prop_assert_eq!(p.leq(i, j), q.leq(i, j));
            }
        }
    }

    #[test]
    fn birkhoff_map_is_a_graded_embedding(seed in any::<u64>()) {
        let l = lattice(seed);
        let images: Vec<Subset> = (0..l.len()).map(|x| birkhoff_map(&l, x).unwrap().into_members()).collect();
        let rank = l.rank_info().rank;
        for x in 0..l.len() {
            for y in 0..l.len() {
                prop_assert_eq!(&images[l.meet(x, y)], &images[x].intersection(&images[y]));
                prop_assert_eq!(&images[l.join(x, y)], &images[x].union(&images[y]));
                if l.leq(x, y) {
                    prop_assert_eq!(images[y].difference(&images[x]).len(), rank[y] - rank[x]);
                }
            }
        }
        for &(x, y) in l.poset().covers() {
            prop_assert_eq!(images[y].difference(&images[x]).len(), 1);
        }
    }

    #[test]
    fn one_lower_cover_iff_join_irreducible(seed in any::<u64>()) {
        let l = lattice(seed);
        let by_def = l.join_irreducibles_by_definition();
        for x in 0..l.len() {
            prop_assert_eq!(l.lower_covers(x).len() == 1, by_def.contains(x));
        }
    }

    #[test]
    fn filter_algebra_checks_hold(seed in any::<u64>()) {
        let r = check_filter_algebra(&lattice(seed));
        prop_assert_eq!(r.failed(), 0, "{:?}", r.first_failure());
    }

    #[test]
    fn raise_and_lower_invert_across_covers(x in grid_point(3, -6, 6), axis in 0usize..3, k in -6i64..=7) {
        let z = ZGrid::new(3);
        let p = z.primes_in(&Region::new(k, k)).into_iter().nth(axis).unwrap();
        let addable = !z.contains(&p, &x) && z.prime_lower_covers(&p).iter().all(|q| z.contains(q, &x));
        if addable {
            let y = z.raise(&x, &p).unwrap();
            prop_assert!(z.is_covering(&x, &y));
            prop_assert_eq!(z.lower(&y, &p).unwrap(), x);
        }
    }

    #[test]
    fn finite_set_raise_lower(x in fin_set(), k in 0u64..12) {
        let p = BFin.primes_in(&Region::new(k as i64, k as i64)).remove(0);
        if !BFin.contains(&p, &x) {
            let y = BFin.raise(&x, &p).unwrap();
            prop_assert!(BFin.is_covering(&x, &y));
            prop_assert_eq!(BFin.lower(&y, &p).unwrap(), x);
        }
    }

    #[test]
    fn separator_stable_under_enlargement(x in grid_point(2, -3, 2), axis in 0usize..2, grow in 1i64..4) {
        let z = ZGrid::new(2);
        let mut y = x.clone();
        y[axis] += 1;
        let c = Covering { lower: x.clone(), upper: y };
        let (a, b) = (vec![-3, -3], vec![3, 3]);
        let small = interval(&z, &a, &b, 4096).unwrap();
        let big = interval(&z, &vec![-3 - grow; 2], &vec![3 + grow; 2], 4096).unwrap();
        let s = small.separator(&c).unwrap();
        let t = big.separator(&c).unwrap();
        for (i, e) in small.elements().iter().enumerate() {
            prop_assert_eq!(s.contains(i), t.contains(big.from_global(e).unwrap()));
        }
    }

    #[test]
    fn symbolic_primes_restrict_to_window_primes(k in -3i64..=3, axis in 0usize..2) {
        let z = ZGrid::new(2);
        let w = interval(&z, &vec![-3, -3], &vec![3, 3], 4096).unwrap();
        let p = z.primes_in(&Region::new(k, k)).into_iter().nth(axis).unwrap();
        let s = w.select(|e| z.contains(&p, e));
        if !s.is_empty() && !s.is_full() {
            let f = LatticeFilter::new(w.lattice(), s).unwrap();
            prop_assert!(is_prime_filter(w.lattice(), &f));
        }
    }

    #[test]
    fn grid_window_irreducibles_sit_on_the_boundary(a in grid_point(2, -4, 0), size in grid_point(2, 0, 4)) {
        let z = ZGrid::new(2);
        let b: Vec<i64> = a.iter().zip(&size).map(|(x, s)| x + s).collect();
        let w = interval(&z, &a, &b, 4096).unwrap();
        for g in w.lattice().join_irreducibles().iter() {
            let e = w.element(g);
            prop_assert!(e.iter().zip(&a).any(|(v, lo)| v == lo), "{:?} is interior", e);
        }
    }

    #[test]
    fn chains_are_transitive(x in fin_set(), k in 0u64..12) {
        if !x.contains(&k) {
            let mut y = x.clone();
            y.insert(k);
            let (chain, stopped) = build_chain(&BFin, &Covering { lower: x, upper: y }, 64).unwrap();
            prop_assert!(stopped);
            let cs = &chain.coverings;
            for i in 0..cs.len() {
                for j in i + 1..cs.len() {
                    prop_assert!(is_downward_transpose(&BFin, &cs[i], &cs[j]).unwrap());
                }
            }
        }
    }

    #[test]
    fn principal_verdicts_are_sound(x in grid_point(2, 0, 5), axis in 0usize..2) {
        let n = NGrid::new(2);
        let mut y = x.clone();
        y[axis] += 1;
        let c = Covering { lower: x, upper: y };
        let v = classify_prime_symbolic(&n, &c, 32).unwrap();
        let Outcome::Principal { generator, .. } = &v.outcome else {
            return Err(TestCaseError::fail("natural-grid coverings are principal"));
        };
        prop_assert_eq!(v.oracle_kind, Some("principal"));
        let p = n.separator(&c).unwrap();
        let w = interval(&n, &vec![0, 0], &vec![7, 7], 4096).unwrap();
        let pf = w.select(|e| n.leq(generator, e));
        prop_assert_eq!(&pf, &w.select(|e| n.contains(&p, e)));
        prop_assert!(is_prime_filter(w.lattice(), &LatticeFilter::new(w.lattice(), pf).unwrap()));
    }

    #[test]
    fn verdicts_agree_with_prime_kinds(x in grid_point(2, -5, 5), axis in 0usize..2, s in fin_set(), k in 0u64..12) {
        let z = ZGrid::new(2);
        let mut y = x.clone();
        y[axis] += 1;
        let v = classify_prime_symbolic(&z, &Covering { lower: x, upper: y }, 16).unwrap();
        prop_assert!(!v.is_principal() || v.oracle_kind == Some("principal"));
        if !s.contains(&k) {
            let mut t = s.clone();
            t.insert(k);
            let v = classify_prime_symbolic(&BFin, &Covering { lower: s, upper: t }, 32).unwrap();
            prop_assert!(v.is_principal() && v.oracle_kind == Some("principal"));
        }
    }

    #[test]
    fn reconstruction_moves_one_cover_at_a_time(x0 in grid_point(2, -5, 5), x in grid_point(2, -5, 5)) {
        let z = ZGrid::new(2);
        let rec = inverse_phi(&z, &x0, &z.phi(&x)).unwrap();
        prop_assert_eq!(&rec.element, &x);
        for s in &rec.steps {
            let d = sym_diff(&z, &z.phi(&s.from), &z.phi(&s.to)).unwrap();
            prop_assert_eq!(d.len(), 1);
            prop_assert!(z.is_covering(&s.from, &s.to) || z.is_covering(&s.to, &s.from));
        }
    }

    #[test]
    fn finite_difference_ideals_are_closed_and_convex(
        x in grid_point(2, -4, 4),
        y in grid_point(2, -4, 4),
        pick in prop::collection::vec(any::<bool>(), 0..20),
    ) {
        let z = ZGrid::new(2);
        let (q1, q2) = (z.phi(&x), z.phi(&y));
        for d in [dp_meet(&z, &q1, &q2).unwrap(), dp_join(&z, &q1, &q2).unwrap()] {
            prop_assert!(in_dp(&z, &d, &q1) && in_dp(&z, &d, &q2) && is_ideal(&z, &d));
        }
        // R between φ(x∧y) and φ(x∨y)
        let lo = z.phi(&z.meet(&x, &y));
        let hi = z.phi(&z.join(&x, &y));
        let gap: Vec<_> = sym_diff(&z, &lo, &hi).unwrap().into_iter().collect();
        let chosen = gap.iter().zip(pick.iter().chain(std::iter::repeat(&false))).filter(|(_, &b)| b).map(|(p, _)| p.clone());
        let r = IdealDescriptor { base: lo.base.clone(), delta: chosen.collect() };
        if is_ideal(&z, &r) {
            prop_assert!(in_dp(&z, &r, &lo));
        }
    }
}
