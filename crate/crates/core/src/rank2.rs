//! Constructive theory of `Aut F_2`.
//!
//! Every automorphism factors as `ψ_1 θ ψ_2 λ_g` with `ψ_1`, `ψ_2` letter
//! permutations, `θ` positive and `‖θ‖_1 + 2|g| ≤ ‖φ‖_1`; positive
//! automorphisms factor over `Δ = {η_{b,a}, η_{a,ab}, η_{a,ba}}`. The
//! factorizations below are deterministic conventions: `θ` is not unique.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::morphisms::{Automorphism, Endomorphism};
use crate::words::{Letter, Word};

/// The monoid generators of positive rank-2 automorphisms.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum Delta {
    /// `η_{b,a}`
    Swap,
    /// `η_{a,ab}`
    AppendA,
    /// `η_{a,ba}`
    PrependA,
}

impl Delta {
    pub fn automorphism(self) -> Automorphism {
        let (fwd, inv): (&[&str; 2], &[&str; 2]) = match self {
            Delta::Swap => (&["b", "a"], &["b", "a"]),
            Delta::AppendA => (&["a", "ab"], &["a", "Ab"]),
            Delta::PrependA => (&["a", "ba"], &["a", "bA"]),
        };
        Automorphism::from_verified_pair(
            Endomorphism::parse(2, fwd).expect("literal"),
            Endomorphism::parse(2, inv).expect("literal"),
        )
        .expect("Δ elements are automorphisms")
    }
}

/// Composes a Δ-sequence left to right (first element applied first).
pub fn compose_delta(seq: &[Delta]) -> Automorphism {
    seq.iter().fold(Automorphism::identity(2), |acc, d| {
        acc.compose(&d.automorphism()).expect("rank 2")
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SignNormalization {
    pub pre: Automorphism,
    pub core: Automorphism,
    pub post: Automorphism,
}

#[derive(Clone, Debug, Serialize)]
pub struct Decomposition2 {
    pub pre: Automorphism,
    pub core: Automorphism,
    pub post: Automorphism,
    pub conjugator: Word,
}

impl Decomposition2 {
    /// `pre · core · post · λ_conjugator`.
    pub fn recompose(&self) -> Result<Automorphism> {
        self.pre
            .compose(&self.core)?
            .compose(&self.post)?
            .compose(&Automorphism::inner(&self.conjugator))
    }
}

fn require_rank2(rank: usize) -> Result<()> {
    if rank != 2 {
        return Err(Error::Domain(format!("rank-2 routine called with rank {rank}")));
    }
    Ok(())
}

/// Every image is a nonempty positive word.
pub fn is_positive(phi: &Endomorphism) -> bool {
    phi.images().iter().all(|w| !w.is_empty() && w.is_positive())
}

/// Factors a positive automorphism over `Δ`.
///
/// Peeling priority: `v = u·v'` (emit `η_{a,ab}`), `u = v·u'` (emit
/// `η_{b,a}, η_{a,ab}`), `v = v'·u` (emit `η_{a,ba}`), `u = u'·v` (emit
/// `η_{b,a}, η_{a,ba}`), until the images are `(a, b)` or `(b, a)`.
pub fn delta_decompose(theta: &Automorphism) -> Result<Vec<Delta>> {
    require_rank2(theta.rank())?;
    if !is_positive(theta.forward()) {
        return Err(Error::NotPositive);
    }
    let (a, b) = (Letter::new(0, true), Letter::new(1, true));
    let mut u: Vec<Letter> = theta.images()[0].letters().to_vec();
    let mut v: Vec<Letter> = theta.images()[1].letters().to_vec();
    let mut out = Vec::new();
    loop {
        if u == [a] && v == [b] {
            break;
        }
        if u == [b] && v == [a] {
            out.push(Delta::Swap);
            break;
        }
        let (nu, nv) = (u.len(), v.len());
        if nv > nu && v.starts_with(&u) {
            out.push(Delta::AppendA);
            v.drain(..nu);
        } else if nu > nv && u.starts_with(&v) {
            out.extend([Delta::Swap, Delta::AppendA]);
            u.drain(..nv);
            std::mem::swap(&mut u, &mut v);
        } else if nv > nu && v.ends_with(&u) {
            out.push(Delta::PrependA);
            v.truncate(nv - nu);
        } else if nu > nv && u.ends_with(&v) {
            out.extend([Delta::Swap, Delta::PrependA]);
            u.truncate(nu - nv);
            std::mem::swap(&mut u, &mut v);
        } else {
            let show = |w: &[Letter]| Word::reduce(2, w.iter().copied()).map(|w| w.to_string()).unwrap_or_default();
            return Err(Error::PeelingStuck(format!("({}, {})", show(&u), show(&v))));
        }
    }
    if compose_delta(&out).forward() != theta.forward() {
        return Err(Error::Invariant(format!("Δ-factorization of {theta} does not recompose")));
    }
    Ok(out)
}

/// `(‖θ‖_1, ‖θ^-1‖_1)` for a positive rank-2 automorphism.
pub fn positive_inverse_norm_check(theta: &Automorphism) -> Result<(u64, u64)> {
    require_rank2(theta.rank())?;
    if !is_positive(theta.forward()) {
        return Err(Error::NotPositive);
    }
    Ok((theta.norm1(), theta.inverse_norm1()))
}

fn letter_perm(images: [&str; 2]) -> Automorphism {
    let fwd = Endomorphism::parse(2, &images).expect("literal");
    let inv = crate::nielsen::invert(&fwd).expect("letter permutation");
    inv
}

/// Writes a cyclically reduced `φ` as `ψ_1 θ ψ_2` with `θ` positive.
///
/// The signs of `ψ_2` are read off an image in which two distinct letters
/// occur (image 1 first); `ψ_1` is either the identity or inverts the
/// remaining all-negative image.
pub fn sign_normalize(phi: &Automorphism) -> Result<SignNormalization> {
    require_rank2(phi.rank())?;
    for (i, w) in phi.images().iter().enumerate() {
        if !w.is_cyclically_reduced() {
            return Err(Error::NotCyclicallyReduced(i));
        }
    }
    let (u, v) = (&phi.images()[0], &phi.images()[1]);
    let (su, sv) = (u.letter_set(), v.letter_set());
    if su.len() > 2 || sv.len() > 2 {
        return Err(Error::Invariant(format!(
            "cyclically reduced {phi} has an image with more than two letters"
        )));
    }
    let mut signs: [Option<i8>; 2] = [None, None];
    let source: Vec<Letter> = if su.len() == 2 {
        su.clone()
    } else if sv.len() == 2 {
        sv.clone()
    } else {
        vec![su[0], sv[0]]
    };
    for x in &source {
        let s = if x.is_positive() { 1 } else { -1 };
        if signs[x.generator()].replace(s).is_some() {
            return Err(Error::NotAnAutomorphism(format!(
                "{phi}: a generator occurs with both signs"
            )));
        }
    }
    let signs = [signs[0].unwrap_or(1), signs[1].unwrap_or(1)];
    let post = Automorphism::letter_permutation(&[0, 1], &signs)?;
    // post is an involution, so φ = η_{u',v'} · post with (u', v') = (u post, v post)
    let up = post.forward().apply(u)?;
    let vp = post.forward().apply(v)?;
    let all_negative = |w: &Word| w.letters().iter().all(|x| !x.is_positive());
    let pre = if up.is_positive() && vp.is_positive() {
        Automorphism::identity(2)
    } else if up.is_positive() && all_negative(&vp) {
        letter_perm(["a", "B"])
    } else if vp.is_positive() && all_negative(&up) {
        letter_perm(["A", "b"])
    } else {
        return Err(Error::NotAnAutomorphism(format!(
            "{phi}: sign pattern incompatible with a unimodular abelianization"
        )));
    };
    let core = pre.inverted().compose(phi)?.compose(&post.inverted())?;
    if !is_positive(core.forward()) || core.norm1() != phi.norm1() {
        return Err(Error::Invariant(format!("sign normalization of {phi} produced {core}")));
    }
    Ok(SignNormalization { pre, core, post })
}

/// Writes `φ = φ' λ_g` with `φ'` cyclically reduced and `‖φ'‖_1 + 2|g| ≤ ‖φ‖_1`.
///
/// While some image is `c^-1 u' c` (image 1 checked first), it is replaced by
/// `u'`, the other image `v` by `c v c^-1`, and `c` is prepended to `g`.
pub fn peel_conjugator(phi: &Automorphism) -> Result<(Automorphism, Word)> {
    require_rank2(phi.rank())?;
    let mut images = phi.images().to_vec();
    let mut g = Word::identity(2);
    loop {
        let Some(k) = images.iter().position(|w| !w.is_cyclically_reduced()) else {
            break;
        };
        let c = images[k].last().expect("nonempty");
        let other = 1 - k;
        let v = &images[other];
        if v.first() != Some(c.inverse()) && v.last() != Some(c) {
            return Err(Error::NotAnAutomorphism(format!(
                "{phi}: image {} neither starts with the inverse of nor ends with the peeled letter",
                other + 1
            )));
        }
        let c_inv = Word::letter(2, c.inverse());
        images[k] = images[k].conjugate(&c_inv)?;
        images[other] = images[other].conjugate(&c_inv)?;
        g = Word::letter(2, c).multiply(&g)?;
    }
    let peeled = phi.compose(&Automorphism::inner(&g.inverse()))?;
    if peeled.images() != images.as_slice()
        || peeled.norm1() + 2 * g.len() as u64 > phi.norm1()
        || &peeled.compose(&Automorphism::inner(&g))? != phi
    {
        return Err(Error::Invariant(format!("conjugator peeling of {phi} is inconsistent")));
    }
    Ok((peeled, g))
}

/// `φ = pre · core · post · λ_g` with `core` positive.
pub fn full_decompose(phi: &Automorphism) -> Result<Decomposition2> {
    let (reduced, conjugator) = peel_conjugator(phi)?;
    let SignNormalization { pre, core, post } = sign_normalize(&reduced)?;
    let d = Decomposition2 {
        pre,
        core,
        post,
        conjugator,
    };
    if &d.recompose()? != phi || d.core.norm1() + 2 * d.conjugator.len() as u64 > phi.norm1() {
        return Err(Error::Invariant(format!("decomposition of {phi} fails its invariants")));
    }
    Ok(d)
}
