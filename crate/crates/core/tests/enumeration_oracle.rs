mod common;

use std::collections::{BTreeMap, HashSet};

use autnorm::enumerate::{alpha, beta, enumerate_automorphisms, CanonicalKey, TableOptions};
use autnorm::nielsen::{invert, is_basis};
use autnorm::outer::outer_norm;
use autnorm::{Endomorphism, PNorm};
use common::{all_tuples, is_basis_by_folding};

struct Brute {
    alpha: BTreeMap<usize, u64>,
    beta: BTreeMap<usize, u64>,
    classes: HashSet<CanonicalKey>,
}

/// Maxima over every basis tuple of norm `≤ n`, bases decided by folding.
fn brute(r: usize, n: usize) -> Brute {
    let mut by_norm: BTreeMap<usize, u64> = BTreeMap::new();
    let mut by_outer: BTreeMap<usize, u64> = BTreeMap::new();
    let mut classes = HashSet::new();
    for tuple in all_tuples(r, n) {
        if !is_basis_by_folding(&tuple) {
            continue;
        }
        let aut = invert(&Endomorphism::new(tuple.clone()).unwrap()).unwrap();
        let norm = aut.norm1() as usize;
        let e = by_norm.entry(norm).or_default();
        *e = (*e).max(aut.inverse_norm1());
        let level = outer_norm(aut.forward(), PNorm::One).unwrap().value as usize;
        let e = by_outer.entry(level).or_default();
        *e = (*e).max(outer_norm(aut.inverse(), PNorm::One).unwrap().value);
        classes.insert(CanonicalKey::of_images(&tuple));
    }
    let prefix = |m: &BTreeMap<usize, u64>| {
        let mut best = 0;
        (r..=n)
            .map(|k| {
                best = best.max(m.get(&k).copied().unwrap_or(0));
                (k, best)
            })
            .collect()
    };
    Brute {
        alpha: prefix(&by_norm),
        beta: prefix(&by_outer),
        classes,
    }
}

fn check_against_brute(r: usize, n: usize) {
    let b = brute(r, n);
    let opts = TableOptions { workers: 1, allow_infeasible: true };
    let a = alpha(r, n, &opts).unwrap();
    let bt = beta(r, n, &opts).unwrap();
    assert_eq!(a.values(), b.alpha.into_iter().collect::<Vec<_>>(), "alpha, rank {r}");
    assert_eq!(bt.values(), b.beta.into_iter().collect::<Vec<_>>(), "beta, rank {r}");

    let listed = enumerate_automorphisms(r, n).unwrap();
    let keys: HashSet<CanonicalKey> = listed.iter().map(|a| CanonicalKey::of_images(a.images())).collect();
    assert_eq!(keys.len(), listed.len(), "one representative per class");
    assert_eq!(keys, b.classes);
    assert_eq!(a.rows.last().unwrap().examined as usize, listed.len());
    for phi in &listed {
        assert_eq!(CanonicalKey::of_images(phi.images()).images(r), phi.images(), "representative is the key");
    }
}

#[test]
fn rank2_tables_match_exhaustive_search() {
    check_against_brute(2, 8);
}

#[test]
fn rank3_tables_match_exhaustive_search() {
    check_against_brute(3, 6);
}

#[test]
fn is_basis_matches_folding_oracle_rank2() {
    let mut bases = 0;
    for tuple in all_tuples(2, 6) {
        let expected = is_basis_by_folding(&tuple);
        assert_eq!(is_basis(&tuple).unwrap(), expected, "{tuple:?}");
        bases += expected as usize;
    }
    assert!(bases > 0);
}

#[test]
fn is_basis_matches_folding_oracle_rank3() {
    for tuple in all_tuples(3, 5) {
        assert_eq!(is_basis(&tuple).unwrap(), is_basis_by_folding(&tuple), "{tuple:?}");
    }
}
