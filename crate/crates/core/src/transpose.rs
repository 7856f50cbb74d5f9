//! Downward transposes between coverings, chains of them, and the descent
//! procedure that tells principal primes from secondary ones.

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::lazylf::{Covering, LocallyFiniteLattice, PrimeKind, SymbolicPrimes};

/// `x⁺ = x⁻ ∨ y⁺` and `y⁻ = x⁻ ∧ y⁺`, with no distinctness requirement.
pub fn transpose_equations<L: LocallyFiniteLattice + ?Sized>(
    l: &L,
    x: &Covering<L::Elem>,
    y: &Covering<L::Elem>,
) -> bool {
    l.join(&x.lower, &y.upper) == x.upper && l.meet(&x.lower, &y.upper) == y.lower
}

/// Whether `y` is a downward transpose of `x`. A covering is not counted as
/// a transpose of itself: the equations hold trivially there, but chains
/// need the upper elements to strictly decrease.
pub fn is_downward_transpose<L: LocallyFiniteLattice + ?Sized>(
    l: &L,
    x: &Covering<L::Elem>,
    y: &Covering<L::Elem>,
) -> Result<bool> {
    x.check(l)?;
    y.check(l)?;
    Ok(x != y && transpose_equations(l, x, y))
}

/// One descent step: the least lower cover `y⁺ ≠ x⁻` of `x⁺`, paired with
/// `y⁻ = y⁺ ∧ x⁻`. `None` when `x⁻` is the only lower cover of `x⁺`.
/// The result is checked to be a covering and a downward transpose.
pub fn down_step<L: LocallyFiniteLattice + ?Sized>(l: &L, c: &Covering<L::Elem>) -> Result<Option<Covering<L::Elem>>> {
    let Some(y_up) = l.lower_covers(&c.upper).into_iter().filter(|z| *z != c.lower).min() else {
        return Ok(None);
    };
    let y = Covering {
        lower: l.meet(&y_up, &c.lower),
        upper: y_up,
    };
    if !l.is_covering(&y.lower, &y.upper) || !transpose_equations(l, c, &y) {
        return Err(Error::PropertyViolated {
            property: "down-step".into(),
            detail: format!(
                "step from {} produced {} which is not a transposed covering",
                crate::lazylf::to_json(c),
                crate::lazylf::to_json(&y)
            ),
        });
    }
    Ok(Some(y))
}

/// A sequence of coverings, each a downward transpose of the previous one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct TransposeChain<E> {
    pub coverings: Vec<Covering<E>>,
}

impl<E: crate::lazylf::Token> TransposeChain<E> {
    pub fn len(&self) -> usize {
        self.coverings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coverings.is_empty()
    }

    pub fn last(&self) -> &Covering<E> {
        self.coverings.last().expect("chains are nonempty")
    }

    /// Checks consecutive links and strictly decreasing upper elements.
    pub fn verify<L: LocallyFiniteLattice<Elem = E> + ?Sized>(&self, l: &L) -> Result<()> {
        for w in self.coverings.windows(2) {
            if !is_downward_transpose(l, &w[0], &w[1])? || !l.lt(&w[1].upper, &w[0].upper) {
                return Err(Error::PropertyViolated {
                    property: "transpose-chain".into(),
                    detail: format!(
                        "{} → {} is not a downward transpose",
                        crate::lazylf::to_json(&w[0]),
                        crate::lazylf::to_json(&w[1])
                    ),
                });
            }
        }
        Ok(())
    }
}

/// Follows `down_step` from `c` until it stops or the chain reaches
/// `max_len` coverings. The flag reports whether descent stopped on its own.
pub fn build_chain<L: LocallyFiniteLattice + ?Sized>(
    l: &L,
    c: &Covering<L::Elem>,
    max_len: usize,
) -> Result<(TransposeChain<L::Elem>, bool)> {
    c.check(l)?;
    let mut coverings = vec![c.clone()];
    loop {
        let next = down_step(l, coverings.last().expect("nonempty"))?;
        match next {
            None => return Ok((TransposeChain { coverings }, true)),
            Some(y) => {
                if coverings.len() >= max_len {
                    return Ok((TransposeChain { coverings }, false));
                }
                coverings.push(y);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome<E> {
    Principal { generator: E, chain_length: usize },
    BudgetExceeded { budget: usize },
}

/// Result of classifying the separator of a covering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict<E> {
    pub covering: Covering<E>,
    pub outcome: Outcome<E>,
    pub chain: TransposeChain<E>,
    pub budget: usize,
    /// Separator descriptor, when the lattice has symbolic primes.
    pub separator: Option<Value>,
    /// Exact kind of the separator, when the lattice has symbolic primes.
    pub oracle_kind: Option<&'static str>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct VerdictJson<'a, E> {
    covering: &'a Covering<E>,
    #[serde(skip_serializing_if = "Option::is_none")]
    separator: &'a Option<Value>,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    generator: Option<&'a E>,
    #[serde(skip_serializing_if = "Option::is_none")]
    chain_length: Option<usize>,
    chain: &'a TransposeChain<E>,
    budget: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_kind: Option<&'static str>,
}

impl<E: crate::lazylf::Token> Verdict<E> {
    pub fn is_principal(&self) -> bool {
        matches!(self.outcome, Outcome::Principal { .. })
    }

    pub fn generator(&self) -> Option<&E> {
        match &self.outcome {
            Outcome::Principal { generator, .. } => Some(generator),
            Outcome::BudgetExceeded { .. } => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let (verdict, generator, chain_length) = match &self.outcome {
            Outcome::Principal {
                generator,
                chain_length,
            } => ("principal", Some(generator), Some(*chain_length)),
            Outcome::BudgetExceeded { .. } => ("budget_exceeded", None, None),
        };
        serde_json::to_value(VerdictJson {
            covering: &self.covering,
            separator: &self.separator,
            verdict,
            generator,
            chain_length,
            chain: &self.chain,
            budget: self.budget,
            oracle_kind: self.oracle_kind,
        })
        .expect("verdicts serialize")
    }
}

/// Semi-decision by descent. Stopping within `budget` coverings means the
/// separator is the principal filter of the last upper element; running out
/// of budget proves nothing by itself.
pub fn classify_prime<L: LocallyFiniteLattice + ?Sized>(
    l: &L,
    c: &Covering<L::Elem>,
    budget: usize,
) -> Result<Verdict<L::Elem>> {
    let budget = budget.max(1);
    let (chain, stopped) = build_chain(l, c, budget)?;
    let outcome = if stopped {
        Outcome::Principal {
            generator: chain.last().upper.clone(),
            chain_length: chain.len(),
        }
    } else {
        Outcome::BudgetExceeded { budget }
    };
    Ok(Verdict {
        covering: c.clone(),
        outcome,
        chain,
        budget,
        separator: None,
        oracle_kind: None,
    })
}

/// `classify_prime` plus the separator and its exact kind from the symbolic
/// description.
pub fn classify_prime_symbolic<L: SymbolicPrimes>(
    l: &L,
    c: &Covering<L::Elem>,
    budget: usize,
) -> Result<Verdict<L::Elem>> {
    let mut v = classify_prime(l, c, budget)?;
    let p = l.separator(c)?;
    v.separator = Some(serde_json::to_value(&p)?);
    v.oracle_kind = Some(match l.kind(&p) {
        PrimeKind::Principal(_) => "principal",
        PrimeKind::Secondary => "secondary",
    });
    Ok(v)
}

/// Given two downward transposes `y`, `z` of `x`, returns
/// `w = (y⁻ ∧ z⁻, y⁺ ∧ z⁺)` after checking it is a covering that both `y`
/// and `z` transpose down to (or equal).
pub fn directedness_witness<L: LocallyFiniteLattice + ?Sized>(
    l: &L,
    x: &Covering<L::Elem>,
    y: &Covering<L::Elem>,
    z: &Covering<L::Elem>,
) -> Result<Covering<L::Elem>> {
    for (name, t) in [("y", y), ("z", z)] {
        if !is_downward_transpose(l, x, t)? {
            return Err(Error::HypothesisFailed(format!(
                "{name} = {} is not a downward transpose of {}",
                crate::lazylf::to_json(t),
                crate::lazylf::to_json(x)
            )));
        }
    }
    let w = Covering {
        lower: l.meet(&y.lower, &z.lower),
        upper: l.meet(&y.upper, &z.upper),
    };
    let ok = l.is_covering(&w.lower, &w.upper) && transpose_equations(l, y, &w) && transpose_equations(l, z, &w);
    if !ok {
        return Err(Error::PropertyViolated {
            property: "transpose-directed".into(),
            detail: format!("w = {} fails for x = {}", crate::lazylf::to_json(&w), crate::lazylf::to_json(x)),
        });
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::FiniteLattice;
    use crate::lazylf::{BFin, FiniteAdapter, NGrid, ZGrid};
    use std::collections::BTreeSet;

    fn cov<L: LocallyFiniteLattice>(l: &L, a: L::Elem, b: L::Elem) -> Covering<L::Elem> {
        Covering::new(l, a, b).unwrap()
    }

    fn set(xs: &[u64]) -> BTreeSet<u64> {
        xs.iter().copied().collect()
    }

    #[test]
    fn transpose_examples() {
        let z = ZGrid::new(2);
        let x = cov(&z, vec![0, 0], vec![1, 0]);
        let y = cov(&z, vec![0, -1], vec![1, -1]);
        assert!(is_downward_transpose(&z, &x, &y).unwrap());
        assert!(!is_downward_transpose(&z, &x, &x).unwrap());
        assert!(transpose_equations(&z, &x, &x));
        let other = cov(&z, vec![0, 0], vec![0, 1]);
        assert!(!is_downward_transpose(&z, &x, &other).unwrap());
        let bad = Covering {
            lower: vec![0, 0],
            upper: vec![2, 0],
        };
        assert!(matches!(is_downward_transpose(&z, &x, &bad), Err(Error::NotACovering(_))));
    }

    #[test]
    fn down_steps() {
        let z = ZGrid::new(2);
        let next = down_step(&z, &cov(&z, vec![0, 0], vec![1, 0])).unwrap().unwrap();
        assert_eq!(next, cov(&z, vec![0, -1], vec![1, -1]));
        assert_eq!(down_step(&BFin, &cov(&BFin, set(&[]), set(&[5]))).unwrap(), None);
        let next = down_step(&BFin, &cov(&BFin, set(&[1]), set(&[1, 5]))).unwrap().unwrap();
        assert_eq!(next, cov(&BFin, set(&[]), set(&[5])));
    }

    #[test]
    fn classifications() {
        let v = classify_prime_symbolic(&BFin, &cov(&BFin, set(&[1, 3]), set(&[1, 3, 5])), 32).unwrap();
        assert_eq!(
            v.outcome,
            Outcome::Principal {
                generator: set(&[5]),
                chain_length: 3
            }
        );
        assert_eq!(v.oracle_kind, Some("principal"));
        let uppers: Vec<_> = v.chain.coverings.iter().map(|c| c.upper.clone()).collect();
        assert_eq!(uppers, vec![set(&[1, 3, 5]), set(&[1, 5]), set(&[5])]);

        let z = ZGrid::new(2);
        let v = classify_prime_symbolic(&z, &cov(&z, vec![0, 0], vec![1, 0]), 32).unwrap();
        assert_eq!(v.outcome, Outcome::BudgetExceeded { budget: 32 });
        assert_eq!(v.oracle_kind, Some("secondary"));
        assert_eq!(v.chain.len(), 32);
        v.chain.verify(&z).unwrap();
        let json = v.to_json();
        assert_eq!(json["verdict"], "budget_exceeded");
        assert_eq!(json["separator"], serde_json::json!({"axis": 0, "threshold": 1}));

        let v = classify_prime(&BFin, &cov(&BFin, set(&[]), set(&[5])), 32).unwrap();
        assert_eq!(v.generator(), Some(&set(&[5])));
        assert_eq!(v.chain.len(), 1);

        let n = NGrid::new(2);
        let v = classify_prime_symbolic(&n, &cov(&n, vec![1, 0], vec![1, 1]), 32).unwrap();
        assert_eq!(v.generator(), Some(&vec![0, 1]));
    }

    #[test]
    fn finite_descent() {
        // divisors of 12: 1 2 3 4 6 12 at indices 0..6
        let fa = FiniteAdapter::new(FiniteLattice::divisors(12)).unwrap();
        // 6 ⋖ 12 is separated by PF(4)
        let v = classify_prime_symbolic(&fa, &cov(&fa, 4, 5), 32).unwrap();
        assert_eq!(fa.lattice().label(*v.generator().unwrap()), "4");
        let v = classify_prime_symbolic(&fa, &cov(&fa, 1, 3), 32).unwrap();
        assert_eq!(fa.lattice().label(*v.generator().unwrap()), "4");
    }

    #[test]
    fn directedness() {
        let z = ZGrid::new(2);
        let x = cov(&z, vec![0, 0], vec![1, 0]);
        let y = cov(&z, vec![0, -1], vec![1, -1]);
        let w = cov(&z, vec![0, -2], vec![1, -2]);
        assert_eq!(directedness_witness(&z, &x, &y, &w).unwrap(), w);
        assert_eq!(directedness_witness(&z, &x, &y, &y).unwrap(), y);
        let not = cov(&z, vec![0, 0], vec![0, 1]);
        assert!(matches!(
            directedness_witness(&z, &x, &not, &y),
            Err(Error::HypothesisFailed(_))
        ));
    }
}
