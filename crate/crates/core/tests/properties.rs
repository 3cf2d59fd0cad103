mod common;

use proptest::prelude::*;

use autnorm::enumerate::{random_automorphism, random_delta_sequence};
use autnorm::families::{n_matrix, phi_p, phi_p_inverse_lengths, psi_k};
use autnorm::nielsen::invert;
use autnorm::outer::{outer_norm, outer_norm_bruteforce};
use autnorm::rank2::{compose_delta, delta_decompose, full_decompose, is_positive};
use autnorm::{Automorphism, Endomorphism, Error, IntMatrix, PNorm, Word};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn raw_letters(rank: usize, max_len: usize) -> impl Strategy<Value = Vec<i32>> {
    let r = rank as i32;
    prop::collection::vec((1..=r, any::<bool>()).prop_map(|(g, s)| if s { g } else { -g }), 0..=max_len)
}

fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    raw_letters(rank, max_len).prop_map(move |raw| Word::from_signed(rank, &raw).unwrap())
}

fn automorphism(ranks: std::ops::RangeInclusive<usize>, max_steps: usize) -> impl Strategy<Value = Automorphism> {
    (ranks, 0..=max_steps, any::<u64>()).prop_map(|(r, s, seed)| random_automorphism(r, s, seed).unwrap())
}

fn letter_permutation(rank: usize) -> impl Strategy<Value = Automorphism> {
    let all = Automorphism::all_letter_permutations(rank);
    (0..all.len()).prop_map(move |i| all[i].clone())
}

fn aut_with_perms(rank: usize, max_steps: usize) -> impl Strategy<Value = (Automorphism, Automorphism, Automorphism)> {
    (
        automorphism(rank..=rank, max_steps),
        letter_permutation(rank),
        letter_permutation(rank),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn reduce_is_idempotent(raw in raw_letters(3, 20)) {
        let w = Word::from_signed(3, &raw).unwrap();
        let again = Word::reduce(3, w.letters().iter().copied()).unwrap();
        prop_assert_eq!(again, w);
    }

    #[test]
    fn multiply_length_and_parity(u in word(3, 12), v in word(3, 12)) {
        let uv = u.multiply(&v).unwrap();
        prop_assert!(uv.len() <= u.len() + v.len());
        prop_assert_eq!(uv.len() % 2, (u.len() + v.len()) % 2);
    }

    #[test]
    fn abelianize_is_a_homomorphism(u in word(4, 12), v in word(4, 12)) {
        let uv = u.multiply(&v).unwrap();
        prop_assert_eq!(uv.abelianize(), &u.abelianize() + &v.abelianize());
    }

    #[test]
    fn abelian_norm_bound(w in word(3, 16)) {
        let both_signs = (0..3).any(|g| {
            w.letters().iter().any(|x| x.generator() == g && x.is_positive())
                && w.letters().iter().any(|x| x.generator() == g && !x.is_positive())
        });
        let n = w.abelianize().norm1();
        prop_assert!(n <= w.len() as u64);
        prop_assert_eq!(n == w.len() as u64, !both_signs);
    }

    #[test]
    fn cyclic_reduction_factorizes(w in word(2, 16)) {
        let (core, g) = w.cyclically_reduce();
        prop_assert!(core.is_cyclically_reduced());
        prop_assert_eq!(g.multiply(&core).unwrap().multiply(&g.inverse()).unwrap(), w);
    }

    #[test]
    fn norm_relations((phi, p1, p2) in aut_with_perms(3, 8)) {
        let f = phi.forward();
        let r = f.rank() as u64;
        prop_assert!(f.norm1() <= r * f.norm_inf() && f.norm_inf() < f.norm1());
        let moved = p1.compose(&phi).unwrap().compose(&p2).unwrap();
        for p in [PNorm::One, PNorm::Infinity] {
            prop_assert_eq!(moved.forward().norm(p), f.norm(p));
            prop_assert_eq!(moved.inverse().norm(p), phi.inverse().norm(p));
        }
        prop_assert!(f.norm1() >= f.abelianization_matrix().norm1() as u64);
    }

    #[test]
    fn composition_norm_bound(phi in automorphism(2..=2, 6), theta in automorphism(2..=2, 6)) {
        let prod = phi.forward().compose(theta.forward()).unwrap();
        prop_assert!(prod.norm1() <= phi.norm1() * theta.forward().norm_inf());
        prop_assert!(phi.norm1() * theta.forward().norm_inf() < phi.norm1() * theta.norm1());
    }

    #[test]
    fn inner_norm_bound(phi in automorphism(2..=4, 6), g in word(4, 6)) {
        let r = phi.rank();
        let g = Word::reduce(r, g.letters().iter().copied().filter(|x| x.generator() < r)).unwrap();
        prop_assume!(!g.is_empty());
        let lambda_phi = Automorphism::inner(&g).compose(&phi).unwrap();
        let bound = (2 * r as u64 * g.len() as u64 + r as u64 - 2) * phi.forward().norm_inf();
        prop_assert!(lambda_phi.norm1() <= bound);
    }

    #[test]
    fn abelianization_of_inverse_is_matrix_inverse(phi in automorphism(2..=5, 10)) {
        let m: IntMatrix = phi.forward().abelianization_matrix();
        prop_assert_eq!(m.inverse_unimodular().unwrap(), phi.inverse().abelianization_matrix());
        prop_assert!((&m * &phi.inverse().abelianization_matrix()).is_identity());
    }

    #[test]
    fn nielsen_round_trip(phi in automorphism(2..=5, 30)) {
        let inv = invert(phi.forward()).unwrap();
        prop_assert_eq!(&inv, &phi);
        prop_assert!(inv.forward().compose(inv.inverse()).unwrap().is_identity());
        prop_assert!(inv.inverse().compose(inv.forward()).unwrap().is_identity());
    }

    #[test]
    fn determinant_failures_are_rejected(u in word(2, 6), v in word(2, 6)) {
        let phi = Endomorphism::new(vec![u, v]).unwrap();
        prop_assume!(phi.has_trivial_image().is_none());
        prop_assume!(!phi.abelianization_matrix().is_unimodular());
        prop_assert!(matches!(invert(&phi), Err(Error::NotAnAutomorphism(_))));
    }

    #[test]
    fn outer_descent_is_optimal(phi in automorphism(2..=3, 4)) {
        let f = phi.forward();
        let radius = f.norm_inf() as usize;
        prop_assume!(radius <= 7);
        for p in [PNorm::One, PNorm::Infinity] {
            let d = outer_norm(f, p).unwrap().value;
            prop_assert_eq!(d, outer_norm_bruteforce(f, p, radius).unwrap().value);
            prop_assert_eq!(d, outer_norm_bruteforce(f, p, radius + 2).unwrap().value);
        }
    }

    #[test]
    fn outer_norm_relations((phi, p1, p2) in aut_with_perms(3, 6), theta in automorphism(3..=3, 6), g in word(3, 6)) {
        let f = phi.forward();
        let o = outer_norm(f, PNorm::One).unwrap();
        prop_assert!(f.norm1() >= o.value);
        prop_assert!(o.value >= f.abelianization_matrix().norm1() as u64);
        if f.is_cyclically_reduced() {
            prop_assert_eq!(o.value, f.norm1());
        }
        let moved = p1.compose(&phi).unwrap().compose(&p2).unwrap();
        prop_assert_eq!(outer_norm(moved.forward(), PNorm::One).unwrap().value, o.value);
        let conj = phi.compose(&Automorphism::inner(&g)).unwrap();
        prop_assert_eq!(outer_norm(conj.forward(), PNorm::One).unwrap().value, o.value);
        let prod = phi.compose(&theta).unwrap();
        let ot = outer_norm(theta.forward(), PNorm::One).unwrap().value;
        prop_assert!(outer_norm(prod.forward(), PNorm::One).unwrap().value <= o.value * ot);
    }

    #[test]
    fn positive_automorphisms(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let seq = random_delta_sequence(25, &mut rng);
        let theta = compose_delta(&seq);
        prop_assert!(is_positive(theta.forward()));
        prop_assert_eq!(theta.inverse_norm1(), theta.norm1());
        let (u, v) = (&theta.inverse().images()[0], &theta.inverse().images()[1]);
        prop_assert!(u.is_cyclically_reduced() && v.is_cyclically_reduced());
        let within = |w: &Word, allowed: [i32; 2]| w.letters().iter().all(|x| allowed.contains(&x.signed()));
        prop_assert!(
            (within(u, [1, -2]) && within(v, [-1, 2])) || (within(u, [-1, 2]) && within(v, [1, -2]))
        );
        prop_assert_eq!(compose_delta(&delta_decompose(&theta).unwrap()), theta);
    }

    #[test]
    fn rank2_decomposition(phi in automorphism(2..=2, 12)) {
        let d = full_decompose(&phi).unwrap();
        prop_assert_eq!(d.recompose().unwrap(), phi.clone());
        prop_assert!(is_positive(d.core.forward()));
        prop_assert!(d.core.norm1() + 2 * d.conjugator.len() as u64 <= phi.norm1());
        prop_assert!(d.pre.forward().is_letter_permutation() && d.post.forward().is_letter_permutation());
        let (f, i) = autnorm::outer::outer_gap_pair(&phi).unwrap();
        prop_assert_eq!(f.value, i.value);
    }
}

#[test]
fn psi_k_outer_norms() {
    for k in 0..=20u64 {
        let psi = psi_k(k as u32).unwrap();
        assert_eq!(invert(psi.forward()).unwrap(), psi);
        assert_eq!(outer_norm(psi.forward(), PNorm::One).unwrap().value, 4 * k + 3);
        assert_eq!(outer_norm(psi.inverse(), PNorm::One).unwrap().value, 4 * k + 3);
    }
}

#[test]
fn phi_p_structure() {
    for r in 2..=5 {
        for p in 2..=8u64 {
            let phi = phi_p(r, p).unwrap();
            assert_eq!(phi.inverse().abelianization_matrix(), n_matrix::<i64>(r, p).unwrap());
            let lengths = phi_p_inverse_lengths(r, p).unwrap();
            for (i, w) in phi.inverse().images().iter().enumerate() {
                assert_eq!(w.len() as u64, lengths[i]);
                if i + 1 < r {
                    assert_eq!(w.first().unwrap().signed(), i as i32 + 1);
                    assert_eq!(w.last().unwrap().signed(), -(i as i32 + 2));
                }
            }
            let n_norm = n_matrix::<i64>(r, p).unwrap().norm1() as u64;
            assert!(phi.inverse_norm1() >= n_norm && n_norm >= p.pow(r as u32 - 1));
        }
    }
}

#[test]
fn rank2_decomposition_on_enumerated_classes() {
    for phi in autnorm::enumerate::enumerate_automorphisms(2, 9).unwrap() {
        for psi in common::double_orbit(&phi) {
            let d = full_decompose(&psi).unwrap();
            assert_eq!(d.recompose().unwrap(), psi);
            assert!(d.core.norm1() + 2 * d.conjugator.len() as u64 <= psi.norm1());
        }
    }
}
