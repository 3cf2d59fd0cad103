//! Seeded sampling of automorphisms.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::morphisms::Automorphism;
use crate::nielsen::ElementaryMove;
use crate::rank2::Delta;

fn elementary(rank: usize, mv: ElementaryMove) -> Automorphism {
    let undo = match mv {
        ElementaryMove::LeftMultiply { i, j, sign } => ElementaryMove::LeftMultiply { i, j, sign: -sign },
        ElementaryMove::RightMultiply { i, j, sign } => ElementaryMove::RightMultiply { i, j, sign: -sign },
        other => other,
    };
    Automorphism::from_parts_unchecked(mv.automorphism(rank), undo.automorphism(rank))
}

fn random_move<R: Rng>(rank: usize, rng: &mut R) -> ElementaryMove {
    let i = rng.gen_range(0..rank);
    let mut j = rng.gen_range(0..rank - 1);
    if j >= i {
        j += 1;
    }
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    match rng.gen_range(0..4) {
        0 => ElementaryMove::LeftMultiply { i, j, sign },
        1 => ElementaryMove::RightMultiply { i, j, sign },
        2 => ElementaryMove::Swap { i: i.min(j), j: i.max(j) },
        _ => ElementaryMove::Invert { i },
    }
}

/// A uniformly chosen letter permutation followed by `steps` uniformly chosen
/// elementary automorphisms (multiplications, swaps and inversions). The
/// inverse is carried along, so no reduction is needed.
pub fn random_automorphism(rank: usize, steps: usize, seed: u64) -> Result<Automorphism> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_automorphism_with(rank, steps, &mut rng)
}

pub fn random_automorphism_with<R: Rng>(rank: usize, steps: usize, rng: &mut R) -> Result<Automorphism> {
    let mut perm: Vec<usize> = (0..rank).collect();
    perm.shuffle(rng);
    let signs: Vec<i8> = (0..rank).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
    let mut phi = Automorphism::letter_permutation(&perm, &signs)?;
    for _ in 0..steps {
        phi = elementary(rank, random_move(rank, rng)).compose(&phi)?;
    }
    Ok(phi)
}

/// A sequence of between 0 and `max_factors` uniformly chosen Δ-generators.
pub fn random_delta_sequence<R: Rng>(max_factors: usize, rng: &mut R) -> Vec<Delta> {
    let n = rng.gen_range(0..=max_factors);
    (0..n)
        .map(|_| match rng.gen_range(0..3) {
            0 => Delta::Swap,
            1 => Delta::AppendA,
            _ => Delta::PrependA,
        })
        .collect()
}
