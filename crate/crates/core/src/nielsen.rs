//! Basis recognition and inversion by Nielsen reduction.
//!
//! A tuple `(u_1, …, u_r)` is reduced by elementary moves that replace `u_i`
//! with `u_j^δ u_i` or `u_i u_j^δ`. The main loop greedily takes the first
//! strictly length-decreasing move in the scan order `(i, j, side, δ)`. When it
//! stalls above total length `r` on a unimodular tuple, a breadth-first search
//! over length-preserving moves looks for a tuple from which the descent can
//! continue; a generating `r`-tuple always reaches the permuted signed basis
//! along a non-increasing path, so this terminates with the right answer.
//!
//! This is basis recognition for `r` words in rank `r`, not a subgroup
//! membership solver.
//!
//! Indices in [`ElementaryMove`] are zero-based.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::morphisms::{Automorphism, Endomorphism};
use crate::words::{Letter, Word};

/// Upper bound on the number of tuples visited by one plateau search.
pub const PLATEAU_STATE_LIMIT: usize = 2_000_000;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ElementaryMove {
    Swap { i: usize, j: usize },
    Invert { i: usize },
    /// `u_i ← u_j^sign · u_i`
    LeftMultiply { i: usize, j: usize, sign: i8 },
    /// `u_i ← u_i · u_j^sign`
    RightMultiply { i: usize, j: usize, sign: i8 },
}

impl ElementaryMove {
    pub fn apply(&self, tuple: &mut [Word]) {
        match *self {
            ElementaryMove::Swap { i, j } => tuple.swap(i, j),
            ElementaryMove::Invert { i } => tuple[i] = tuple[i].inverse(),
            ElementaryMove::LeftMultiply { i, j, sign } => {
                tuple[i] = tuple[j].pow(sign as i64).multiply(&tuple[i]).expect("same rank");
            }
            ElementaryMove::RightMultiply { i, j, sign } => {
                tuple[i] = tuple[i].multiply(&tuple[j].pow(sign as i64)).expect("same rank");
            }
        }
    }

    /// The elementary automorphism `ε` with `tuple_after = (a_k ε φ)_k` when
    /// `tuple_before = (a_k φ)_k`.
    pub fn automorphism(&self, rank: usize) -> Endomorphism {
        let mut images: Vec<Word> = (0..rank).map(|k| Word::generator(rank, k)).collect();
        self.apply(&mut images);
        Endomorphism::new(images).expect("rank ≥ 2")
    }
}

/// Final tuple `u_i = a_{perm[i]}^{signs[i]}` of a successful reduction.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Terminal {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
}

impl Terminal {
    pub fn automorphism(&self) -> Automorphism {
        Automorphism::letter_permutation(&self.perm, &self.signs).expect("terminal is a permutation")
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct NielsenTrace {
    pub moves: Vec<ElementaryMove>,
    pub terminal: Option<Terminal>,
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub tuple: Vec<Word>,
    pub trace: NielsenTrace,
}

impl Reduction {
    pub fn total_length(&self) -> usize {
        self.tuple.iter().map(Word::len).sum()
    }

    pub fn is_signed_basis(&self) -> bool {
        self.trace.terminal.is_some()
    }
}

/// Length of `x^ex · y^ey` after free reduction, for reduced `x`, `y`.
#[inline]
fn product_len(x: &[Letter], x_inv: bool, y: &[Letter], y_inv: bool) -> usize {
    let (nx, ny) = (x.len(), y.len());
    let m = nx.min(ny);
    let mut k = 0;
    while k < m {
        let tail = if x_inv { x[k].inverse() } else { x[nx - 1 - k] };
        let head = if y_inv { y[ny - 1 - k].inverse() } else { y[k] };
        if tail != head.inverse() {
            break;
        }
        k += 1;
    }
    nx + ny - 2 * k
}

/// Length of `u_i` after `mv`, without materializing it.
fn moved_len(tuple: &[Word], mv: ElementaryMove) -> usize {
    match mv {
        ElementaryMove::LeftMultiply { i, j, sign } => {
            product_len(tuple[j].letters(), sign < 0, tuple[i].letters(), false)
        }
        ElementaryMove::RightMultiply { i, j, sign } => {
            product_len(tuple[i].letters(), false, tuple[j].letters(), sign < 0)
        }
        ElementaryMove::Swap { .. } | ElementaryMove::Invert { .. } => unreachable!(),
    }
}

/// Multiplication moves in scan order `(i, j, side, sign)`.
fn multiplication_moves(r: usize) -> impl Iterator<Item = ElementaryMove> {
    (0..r).flat_map(move |i| {
        (0..r).filter(move |&j| j != i).flat_map(move |j| {
            [1i8, -1]
                .into_iter()
                .map(move |sign| ElementaryMove::LeftMultiply { i, j, sign })
                .chain([1i8, -1].into_iter().map(move |sign| ElementaryMove::RightMultiply { i, j, sign }))
        })
    })
}

fn target(mv: ElementaryMove) -> usize {
    match mv {
        ElementaryMove::LeftMultiply { i, .. } | ElementaryMove::RightMultiply { i, .. } => i,
        ElementaryMove::Swap { i, .. } | ElementaryMove::Invert { i } => i,
    }
}

/// First strictly length-decreasing move that keeps every entry nontrivial.
fn first_decreasing_move(tuple: &[Word], moves: &[ElementaryMove]) -> Option<ElementaryMove> {
    moves.iter().copied().find(|&mv| {
        let new = moved_len(tuple, mv);
        new > 0 && new < tuple[target(mv)].len()
    })
}

fn terminal_of(tuple: &[Word]) -> Option<Terminal> {
    let r = tuple.len();
    let mut seen = vec![false; r];
    let mut perm = Vec::with_capacity(r);
    let mut signs = Vec::with_capacity(r);
    for w in tuple {
        if w.len() != 1 {
            return None;
        }
        let x = w.letters()[0];
        if std::mem::replace(&mut seen[x.generator()], true) {
            return None;
        }
        perm.push(x.generator());
        signs.push(if x.is_positive() { 1 } else { -1 });
    }
    Some(Terminal { perm, signs })
}

fn check_tuple(tuple: &[Word]) -> Result<usize> {
    let r = tuple.len();
    if r < 2 {
        return Err(Error::Malformed(format!("expected at least 2 words, got {r}")));
    }
    for (i, w) in tuple.iter().enumerate() {
        if w.rank() != r {
            return Err(Error::Malformed(format!(
                "tuple of {r} words must live in rank {r}, word {i} has rank {}",
                w.rank()
            )));
        }
        if w.is_empty() {
            return Err(Error::DegenerateTuple(i));
        }
    }
    Ok(r)
}

/// Greedy Nielsen reduction only: no length-preserving moves are taken.
pub fn nielsen_reduce_greedy(tuple: &[Word]) -> Result<Reduction> {
    let r = check_tuple(tuple)?;
    let moves: Vec<ElementaryMove> = multiplication_moves(r).collect();
    let mut cur = tuple.to_vec();
    let mut trace = NielsenTrace::default();
    descend(&mut cur, &moves, &mut trace.moves);
    trace.terminal = terminal_of(&cur);
    Ok(Reduction { tuple: cur, trace })
}

fn descend(cur: &mut [Word], moves: &[ElementaryMove], log: &mut Vec<ElementaryMove>) {
    while let Some(mv) = first_decreasing_move(cur, moves) {
        mv.apply(cur);
        log.push(mv);
    }
}

/// Full reduction: greedy descent, with plateau search when it stalls on a
/// tuple whose abelianization is unimodular.
pub fn nielsen_reduce(tuple: &[Word]) -> Result<Reduction> {
    let r = check_tuple(tuple)?;
    let moves: Vec<ElementaryMove> = multiplication_moves(r).collect();
    let mut cur = tuple.to_vec();
    let mut trace = NielsenTrace::default();
    loop {
        descend(&mut cur, &moves, &mut trace.moves);
        if let Some(t) = terminal_of(&cur) {
            trace.terminal = Some(t);
            break;
        }
        if !abelian_unimodular(&cur) {
            break;
        }
        match plateau_search(&cur, &moves)? {
            Some(path) => {
                for mv in path {
                    mv.apply(&mut cur);
                    trace.moves.push(mv);
                }
            }
            None => break,
        }
    }
    Ok(Reduction { tuple: cur, trace })
}

fn abelian_unimodular(tuple: &[Word]) -> bool {
    Endomorphism::new(tuple.to_vec())
        .map(|e| e.abelianization_matrix().is_unimodular())
        .unwrap_or(false)
}

/// Breadth-first search over length-preserving moves for a tuple that admits
/// a strictly decreasing move. Returns the level path to it, or `None` when
/// the whole level set is stuck.
fn plateau_search(start: &[Word], moves: &[ElementaryMove]) -> Result<Option<Vec<ElementaryMove>>> {
    let r = start.len();
    let level_moves: Vec<ElementaryMove> = moves
        .iter()
        .copied()
        .chain((0..r).map(|i| ElementaryMove::Invert { i }))
        .collect();
    let mut parent: HashMap<Vec<Word>, Option<(usize, ElementaryMove)>> = HashMap::new();
    let mut order: Vec<Vec<Word>> = Vec::new();
    let mut queue = VecDeque::new();
    parent.insert(start.to_vec(), None);
    order.push(start.to_vec());
    queue.push_back(0usize);
    while let Some(idx) = queue.pop_front() {
        let state = order[idx].clone();
        if idx > 0 && first_decreasing_move(&state, moves).is_some() {
            let mut path = Vec::new();
            let mut at = state;
            while let Some(Some((prev, mv))) = parent.get(&at).cloned() {
                path.push(mv);
                at = order[prev].clone();
            }
            path.reverse();
            return Ok(Some(path));
        }
        for &mv in &level_moves {
            let keeps_length = match mv {
                ElementaryMove::Invert { .. } => true,
                _ => moved_len(&state, mv) == state[target(mv)].len(),
            };
            if !keeps_length {
                continue;
            }
            let mut next = state.clone();
            mv.apply(&mut next);
            if parent.contains_key(&next) {
                continue;
            }
            if order.len() >= PLATEAU_STATE_LIMIT {
                return Err(Error::PlateauLimit(PLATEAU_STATE_LIMIT));
            }
            parent.insert(next.clone(), Some((idx, mv)));
            order.push(next);
            queue.push_back(order.len() - 1);
        }
    }
    Ok(None)
}

/// Whether `tuple` is a basis of `F_r`, `r = tuple.len()`.
pub fn is_basis(tuple: &[Word]) -> Result<bool> {
    let r = tuple.len();
    if r < 2 || tuple.iter().any(|w| w.rank() != r) {
        return Err(Error::Malformed(format!(
            "a basis candidate needs r words of rank r, got {r} words"
        )));
    }
    if tuple.iter().any(Word::is_empty) || !abelian_unimodular(tuple) {
        return Ok(false);
    }
    Ok(nielsen_reduce(tuple)?.is_signed_basis())
}

/// Rebuilds `φ^-1` from a successful trace: with `ψ` the terminal
/// permutation and `ε_1, …, ε_k` the moves, `φ^-1 = ψ^-1 ε_k ⋯ ε_1`.
pub fn inverse_from_trace(rank: usize, trace: &NielsenTrace) -> Result<Endomorphism> {
    let terminal = trace
        .terminal
        .as_ref()
        .ok_or_else(|| Error::NotAnAutomorphism("trace does not end at a signed basis".into()))?;
    let mut images = terminal.automorphism().inverse().clone().into_images();
    for mv in trace.moves.iter().rev() {
        let eps = mv.automorphism(rank);
        for w in images.iter_mut() {
            *w = eps.apply(w)?;
        }
    }
    Endomorphism::new(images)
}

/// Pairs `φ` with its inverse, or reports that the images are not a basis.
pub fn invert(phi: &Endomorphism) -> Result<Automorphism> {
    if let Some(i) = phi.has_trivial_image() {
        return Err(Error::DegenerateTuple(i));
    }
    if !phi.abelianization_matrix().is_unimodular() {
        return Err(Error::NotAnAutomorphism(format!(
            "{phi} has abelianization determinant ≠ ±1"
        )));
    }
    let red = nielsen_reduce(phi.images())?;
    if !red.is_signed_basis() {
        return Err(Error::NotAnAutomorphism(format!(
            "{phi}: Nielsen reduction stops at total length {}",
            red.total_length()
        )));
    }
    let inverse = inverse_from_trace(phi.rank(), &red.trace)?;
    let aut = Automorphism::from_parts_unchecked(phi.clone(), inverse);
    aut.verify()?;
    Ok(aut)
}

/// Applies `moves` in order to a copy of `tuple`.
pub fn replay(tuple: &[Word], moves: &[ElementaryMove]) -> Vec<Word> {
    let mut cur = tuple.to_vec();
    for mv in moves {
        mv.apply(&mut cur);
    }
    cur
}
