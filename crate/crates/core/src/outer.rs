//! Outer norms `‖[φ]‖_p = min_g ‖φ λ_g‖_p` for `p ∈ {1, ∞}`.
//!
//! Each `|g^-1 u g|` is convex along geodesics of the Cayley tree, so the
//! objective is too, and greedy single-letter descent from `g = 1` reaches the
//! global minimum. [`outer_norm_bruteforce`] scans a ball exhaustively and is
//! kept as a test oracle.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::morphisms::{Automorphism, Endomorphism, PNorm};
use crate::words::{push_reduced, Letter, Word};

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct OuterNormResult {
    pub value: u64,
    /// Conjugator `g` with `‖φ λ_g‖_p = value`.
    pub minimizer: Word,
    /// The images of `φ λ_g`.
    pub images: Vec<Word>,
}

/// `|x^-1 w x|` for reduced `w`.
#[inline]
fn conjugated_len(w: &Word, x: Letter) -> usize {
    if w.is_empty() {
        return 0;
    }
    let left = w.first() == Some(x);
    let right = w.last() == Some(x.inverse());
    match (left, right) {
        (true, true) => w.len() - 2,
        (false, false) => w.len() + 2,
        _ => w.len(),
    }
}

fn conjugate_by_letter(w: &Word, x: Letter) -> Word {
    let mut letters = Vec::with_capacity(w.len() + 2);
    letters.push(x.inverse());
    for &y in w.letters().iter().chain(std::iter::once(&x)) {
        push_reduced(&mut letters, y);
    }
    Word::from_reduced_unchecked(w.rank(), letters)
}

fn objective(images: &[Word], p: PNorm) -> u64 {
    p.of_lengths(images.iter().map(|w| w.len() as u64))
}

fn check(phi: &Endomorphism) -> Result<()> {
    match phi.has_trivial_image() {
        Some(i) => Err(Error::DegenerateTuple(i)),
        None => Ok(()),
    }
}

/// Greedy descent: extend `g` by the first letter (order `a_1, a_1^-1, a_2, …`)
/// that strictly lowers the objective, until none does.
pub fn outer_norm(phi: &Endomorphism, p: PNorm) -> Result<OuterNormResult> {
    check(phi)?;
    let r = phi.rank();
    let mut images = phi.images().to_vec();
    let mut value = objective(&images, p);
    let mut g: Vec<Letter> = Vec::new();
    'descent: loop {
        for code in 0..2 * r as u32 {
            let x = Letter::from_code(code);
            if g.last() == Some(&x.inverse()) {
                continue;
            }
            let candidate = p.of_lengths(images.iter().map(|w| conjugated_len(w, x) as u64));
            if candidate < value {
                for w in images.iter_mut() {
                    *w = conjugate_by_letter(w, x);
                }
                g.push(x);
                value = candidate;
                continue 'descent;
            }
        }
        break;
    }
    Ok(OuterNormResult {
        value,
        minimizer: Word::from_reduced_unchecked(r, g),
        images,
    })
}

/// Exhaustive minimum over every reduced `g` with `|g| ≤ radius`. Among equal
/// values the shortest conjugator found first in depth-first order wins.
pub fn outer_norm_bruteforce(phi: &Endomorphism, p: PNorm, radius: usize) -> Result<OuterNormResult> {
    check(phi)?;
    let r = phi.rank();
    let start = phi.images().to_vec();
    let mut best = OuterNormResult {
        value: objective(&start, p),
        minimizer: Word::identity(r),
        images: start.clone(),
    };
    let mut g = Vec::new();
    dfs(&start, &mut g, radius, r, p, &mut best);
    Ok(best)
}

fn dfs(images: &[Word], g: &mut Vec<Letter>, radius: usize, r: usize, p: PNorm, best: &mut OuterNormResult) {
    if g.len() == radius {
        return;
    }
    for code in 0..2 * r as u32 {
        let x = Letter::from_code(code);
        if g.last() == Some(&x.inverse()) {
            continue;
        }
        let next: Vec<Word> = images.iter().map(|w| conjugate_by_letter(w, x)).collect();
        g.push(x);
        let v = objective(&next, p);
        if v < best.value || (v == best.value && g.len() < best.minimizer.len()) {
            *best = OuterNormResult {
                value: v,
                minimizer: Word::from_reduced_unchecked(r, g.clone()),
                images: next.clone(),
            };
        }
        dfs(&next, g, radius, r, p, best);
        g.pop();
    }
}

/// Outer 1-norms of `[φ]` and `[φ^-1]`.
pub fn outer_gap_pair(phi: &Automorphism) -> Result<(OuterNormResult, OuterNormResult)> {
    Ok((
        outer_norm(phi.forward(), PNorm::One)?,
        outer_norm(phi.inverse(), PNorm::One)?,
    ))
}
