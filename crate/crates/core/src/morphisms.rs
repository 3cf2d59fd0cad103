//! Endomorphisms of `F_r` as image tuples.
//!
//! Maps act on the right: `compose(φ, θ)` applies `φ` first, so
//! `a_i(φθ) = (a_i φ)θ`. Every other module relies on this order.

use std::fmt;

use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{push_reduced, Letter, Word, DEFAULT_LETTER_BUDGET};
use crate::IntMatrix;

/// The two exact p-norms used by the theorem checks.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum PNorm {
    One,
    Infinity,
}

impl PNorm {
    pub fn of_lengths<I: IntoIterator<Item = u64>>(self, lengths: I) -> u64 {
        match self {
            PNorm::One => lengths.into_iter().sum(),
            PNorm::Infinity => lengths.into_iter().max().unwrap_or(0),
        }
    }
}

impl std::str::FromStr for PNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<PNorm> {
        match s {
            "1" => Ok(PNorm::One),
            "inf" | "infinity" | "∞" => Ok(PNorm::Infinity),
            _ => Err(Error::Malformed(format!("p must be 1 or inf, got {s:?}"))),
        }
    }
}

impl fmt::Display for PNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PNorm::One => "1",
            PNorm::Infinity => "inf",
        })
    }
}

/// An endomorphism given by the images of the generators.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(into = "EndomorphismRepr", try_from = "EndomorphismRepr")]
pub struct Endomorphism {
    images: Vec<Word>,
}

#[derive(Serialize, Deserialize)]
struct EndomorphismRepr {
    rank: usize,
    images: Vec<String>,
}

impl From<Endomorphism> for EndomorphismRepr {
    fn from(e: Endomorphism) -> Self {
        EndomorphismRepr {
            rank: e.rank(),
            images: e.images.iter().map(|w| w.to_string()).collect(),
        }
    }
}

impl TryFrom<EndomorphismRepr> for Endomorphism {
    type Error = Error;

    fn try_from(r: EndomorphismRepr) -> Result<Self> {
        Endomorphism::parse(r.rank, &r.images)
    }
}

impl Endomorphism {
    pub fn new(images: Vec<Word>) -> Result<Endomorphism> {
        let rank = images.len();
        if rank < 2 {
            return Err(Error::Domain(format!("rank must be at least 2, got {rank}")));
        }
        for w in &images {
            if w.rank() != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    found: w.rank(),
                });
            }
        }
        Ok(Endomorphism { images })
    }

    pub fn parse<S: AsRef<str>>(rank: usize, images: &[S]) -> Result<Endomorphism> {
        if images.len() != rank {
            return Err(Error::Malformed(format!(
                "expected {rank} images, got {}",
                images.len()
            )));
        }
        let words = images
            .iter()
            .map(|s| Word::parse(s.as_ref(), rank))
            .collect::<Result<Vec<_>>>()?;
        Endomorphism::new(words)
    }

    pub fn identity(rank: usize) -> Endomorphism {
        Endomorphism {
            images: (0..rank).map(|i| Word::generator(rank, i)).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn into_images(self) -> Vec<Word> {
        self.images
    }

    pub fn image(&self, generator: usize) -> &Word {
        &self.images[generator]
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, w)| w.letters() == [Letter::new(i, true)])
    }

    pub fn lengths(&self) -> impl Iterator<Item = u64> + '_ {
        self.images.iter().map(|w| w.len() as u64)
    }

    pub fn norm1(&self) -> u64 {
        PNorm::One.of_lengths(self.lengths())
    }

    pub fn norm_inf(&self) -> u64 {
        PNorm::Infinity.of_lengths(self.lengths())
    }

    pub fn norm(&self, p: PNorm) -> u64 {
        p.of_lengths(self.lengths())
    }

    /// `(Σ |a_i φ|^p)^(1/p)` for a real `p > 0`; `p = ∞` gives the maximum.
    pub fn norm_p<F: Float>(&self, p: F) -> F {
        assert!(p > F::zero(), "p must be positive");
        let lengths = self.lengths().map(|l| F::from(l).expect("length fits float"));
        if p.is_infinite() {
            return lengths.fold(F::zero(), F::max);
        }
        lengths.map(|l| l.powf(p)).fold(F::zero(), |a, b| a + b).powf(p.recip())
    }

    pub fn has_trivial_image(&self) -> Option<usize> {
        self.images.iter().position(|w| w.is_empty())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.images.iter().all(|w| w.is_cyclically_reduced())
    }

    pub fn is_letter_permutation(&self) -> bool {
        let mut seen = vec![false; self.rank()];
        for w in &self.images {
            if w.len() != 1 {
                return false;
            }
            let g = w.letters()[0].generator();
            if std::mem::replace(&mut seen[g], true) {
                return false;
            }
        }
        true
    }

    fn check_rank(&self, rank: usize) -> Result<()> {
        if self.rank() != rank {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                found: rank,
            });
        }
        Ok(())
    }

    /// Image of `w` with the default letter budget.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        self.apply_with_budget(w, DEFAULT_LETTER_BUDGET)
    }

    pub fn apply_with_budget(&self, w: &Word, budget: usize) -> Result<Word> {
        self.check_rank(w.rank())?;
        let needed: u128 = w
            .letters()
            .iter()
            .map(|x| self.images[x.generator()].len() as u128)
            .sum();
        if needed > budget as u128 {
            return Err(Error::BudgetExceeded { needed, budget });
        }
        let mut out = Vec::with_capacity(needed as usize);
        for &x in w.letters() {
            let img = self.images[x.generator()].letters();
            if x.is_positive() {
                for &y in img {
                    push_reduced(&mut out, y);
                }
            } else {
                for &y in img.iter().rev() {
                    push_reduced(&mut out, y.inverse());
                }
            }
        }
        Ok(Word::from_reduced_unchecked(self.rank(), out))
    }

    /// `self` first, then `then`.
    pub fn compose(&self, then: &Endomorphism) -> Result<Endomorphism> {
        self.check_rank(then.rank())?;
        let images = self
            .images
            .iter()
            .map(|u| then.apply(u))
            .collect::<Result<Vec<_>>>()?;
        Ok(Endomorphism { images })
    }

    pub fn abelianization_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(self.images.iter().map(|w| w.abelianize().0).collect())
    }

    /// Images conjugated by `g`: the endomorphism `self · λ_g`.
    pub fn conjugated(&self, g: &Word) -> Result<Endomorphism> {
        let images = self
            .images
            .iter()
            .map(|u| u.conjugate(g))
            .collect::<Result<Vec<_>>>()?;
        Ok(Endomorphism { images })
    }

    /// Image tuple joined with `;`, the textual witness format of gap tables.
    pub fn to_text(&self) -> String {
        self.images
            .iter()
            .map(|w| w.to_string())
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl fmt::Display for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "η(")?;
        for (i, w) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{w}")?;
        }
        f.write_str(")")
    }
}

/// An endomorphism together with a verified two-sided inverse.
///
/// Values only come from constructors that know the inverse (letter
/// permutations, inner automorphisms, composition) or from
/// [`crate::nielsen::invert`], which derives it from a reduction trace.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(into = "AutomorphismRepr", try_from = "AutomorphismRepr")]
pub struct Automorphism {
    forward: Endomorphism,
    inverse: Endomorphism,
}

#[derive(Serialize, Deserialize)]
struct AutomorphismRepr {
    rank: usize,
    images: Vec<String>,
    inverse_images: Vec<String>,
}

impl From<Automorphism> for AutomorphismRepr {
    fn from(a: Automorphism) -> Self {
        AutomorphismRepr {
            rank: a.rank(),
            images: a.forward.images.iter().map(|w| w.to_string()).collect(),
            inverse_images: a.inverse.images.iter().map(|w| w.to_string()).collect(),
        }
    }
}

impl TryFrom<AutomorphismRepr> for Automorphism {
    type Error = Error;

    fn try_from(r: AutomorphismRepr) -> Result<Self> {
        Automorphism::from_verified_pair(
            Endomorphism::parse(r.rank, &r.images)?,
            Endomorphism::parse(r.rank, &r.inverse_images)?,
        )
    }
}

impl Automorphism {
    pub fn identity(rank: usize) -> Automorphism {
        Automorphism {
            forward: Endomorphism::identity(rank),
            inverse: Endomorphism::identity(rank),
        }
    }

    pub(crate) fn from_parts_unchecked(forward: Endomorphism, inverse: Endomorphism) -> Automorphism {
        Automorphism { forward, inverse }
    }

    /// Accepts a forward/inverse pair after checking both composites are the identity.
    pub fn from_verified_pair(forward: Endomorphism, inverse: Endomorphism) -> Result<Automorphism> {
        if forward.rank() != inverse.rank() {
            return Err(Error::RankMismatch {
                expected: forward.rank(),
                found: inverse.rank(),
            });
        }
        if !forward.compose(&inverse)?.is_identity() || !inverse.compose(&forward)?.is_identity() {
            return Err(Error::NotAnAutomorphism(format!(
                "{inverse} is not a two-sided inverse of {forward}"
            )));
        }
        Ok(Automorphism { forward, inverse })
    }

    /// `a_i ↦ a_{perm[i]}^{signs[i]}`; `perm` is zero-based.
    pub fn letter_permutation(perm: &[usize], signs: &[i8]) -> Result<Automorphism> {
        let r = perm.len();
        if signs.len() != r {
            return Err(Error::Malformed("perm and signs differ in length".into()));
        }
        let mut seen = vec![false; r];
        for &p in perm {
            if p >= r || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Malformed(format!("{perm:?} is not a permutation")));
            }
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Malformed("signs must be ±1".into()));
        }
        let mut fwd = vec![Word::identity(r); r];
        let mut inv = vec![Word::identity(r); r];
        for i in 0..r {
            let positive = signs[i] > 0;
            fwd[i] = Word::letter(r, Letter::new(perm[i], positive));
            inv[perm[i]] = Word::letter(r, Letter::new(i, positive));
        }
        Ok(Automorphism {
            forward: Endomorphism::new(fwd)?,
            inverse: Endomorphism::new(inv)?,
        })
    }

    /// All `r!·2^r` letter permutation automorphisms, in a fixed order.
    pub fn all_letter_permutations(rank: usize) -> Vec<Automorphism> {
        let mut out = Vec::new();
        for perm in permutations(rank) {
            for mask in 0..(1u32 << rank) {
                let signs: Vec<i8> = (0..rank)
                    .map(|i| if mask >> i & 1 == 0 { 1 } else { -1 })
                    .collect();
                out.push(Automorphism::letter_permutation(&perm, &signs).expect("valid permutation"));
            }
        }
        out
    }

    /// Right conjugation `x ↦ g^-1 x g`.
    pub fn inner(g: &Word) -> Automorphism {
        let r = g.rank();
        let id = Endomorphism::identity(r);
        Automorphism {
            forward: id.conjugated(g).expect("same rank"),
            inverse: id.conjugated(&g.inverse()).expect("same rank"),
        }
    }

    /// `self` first, then `then`.
    pub fn compose(&self, then: &Automorphism) -> Result<Automorphism> {
        Ok(Automorphism {
            forward: self.forward.compose(&then.forward)?,
            inverse: then.inverse.compose(&self.inverse)?,
        })
    }

    pub fn rank(&self) -> usize {
        self.forward.rank()
    }

    pub fn forward(&self) -> &Endomorphism {
        &self.forward
    }

    pub fn inverse(&self) -> &Endomorphism {
        &self.inverse
    }

    pub fn inverted(&self) -> Automorphism {
        Automorphism {
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }

    pub fn images(&self) -> &[Word] {
        self.forward.images()
    }

    pub fn norm1(&self) -> u64 {
        self.forward.norm1()
    }

    pub fn inverse_norm1(&self) -> u64 {
        self.inverse.norm1()
    }

    /// Re-checks that both composites are the identity.
    pub fn verify(&self) -> Result<()> {
        if !self.forward.compose(&self.inverse)?.is_identity()
            || !self.inverse.compose(&self.forward)?.is_identity()
        {
            return Err(Error::Invariant(format!(
                "inverse witness {} does not invert {}",
                self.inverse, self.forward
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.forward.fmt(f)
    }
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).expect("exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(images: &[&str]) -> Endomorphism {
        Endomorphism::parse(images.len(), images).unwrap()
    }

    fn w2(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    #[test]
    fn apply_examples() {
        assert_eq!(e(&["a", "ab"]).apply(&w2("ab")).unwrap(), w2("aab"));
        let x = Word::parse("abCa", 3).unwrap();
        assert_eq!(Endomorphism::identity(3).apply(&x).unwrap(), x);
        let lam = Automorphism::inner(&w2("b"));
        assert_eq!(lam.forward().apply(&w2("a")).unwrap(), w2("Bab"));
    }

    #[test]
    fn apply_respects_budget() {
        let phi = e(&["aaaa", "b"]);
        let err = phi.apply_with_budget(&w2("aaa"), 10).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { needed: 12, budget: 10 }));
    }

    #[test]
    fn compose_examples() {
        let t = e(&["a", "ab"]);
        assert_eq!(t.compose(&t).unwrap(), e(&["a", "aab"]));
        assert_eq!(t.compose(&Endomorphism::identity(2)).unwrap(), t);
        assert!(t.compose(&e(&["a", "Ab"])).unwrap().is_identity());
    }

    #[test]
    fn norm_examples() {
        let psi1 = e(&["BaabbAb", "BaabbbAb"]);
        assert_eq!(psi1.norm1(), 15);
        assert_eq!(psi1.norm_inf(), 8);
        assert_eq!(Endomorphism::identity(5).norm1(), 5);
        assert!((psi1.norm_p(2.0f64) - (49.0f64 + 64.0).sqrt()).abs() < 1e-12);
        assert_eq!(psi1.norm_p(f32::INFINITY), 8.0);
    }

    #[test]
    fn letter_permutation_examples() {
        let id = Automorphism::letter_permutation(&[0, 1, 2], &[1, 1, 1]).unwrap();
        assert!(id.forward().is_identity());
        let swap = Automorphism::letter_permutation(&[1, 0], &[1, 1]).unwrap();
        assert_eq!(swap.forward(), &e(&["b", "a"]));
        assert_eq!(swap.inverse(), swap.forward());
        for r in 2..=4 {
            let all = Automorphism::all_letter_permutations(r);
            let expected = (1..=r).product::<usize>() << r;
            assert_eq!(all.len(), expected);
            let distinct: std::collections::HashSet<_> = all.iter().map(|a| a.forward().clone()).collect();
            assert_eq!(distinct.len(), expected);
            for a in &all {
                a.verify().unwrap();
                assert_eq!(a.norm1(), r as u64);
            }
        }
        assert!(Automorphism::letter_permutation(&[0, 0], &[1, 1]).is_err());
    }

    #[test]
    fn inner_examples() {
        assert!(Automorphism::inner(&Word::identity(2)).forward().is_identity());
        let lam = Automorphism::inner(&w2("b"));
        assert_eq!(lam.forward(), &e(&["Bab", "b"]));
        assert_eq!(lam.norm1(), 4);
        lam.verify().unwrap();
    }

    #[test]
    fn abelianization_examples() {
        let m = e(&["a", "ab"]).abelianization_matrix();
        assert_eq!(m.rows(), vec![vec![1, 0], vec![1, 1]]);
        assert!(Endomorphism::identity(3).abelianization_matrix().is_identity());
        let phi2 = e(&["abb", "bcc", "c"]);
        assert_eq!(phi2.abelianization_matrix().norm1(), 7);
    }

    #[test]
    fn json_roundtrip_and_validation() {
        let lam = Automorphism::inner(&w2("ab"));
        let s = serde_json::to_string(&lam).unwrap();
        assert!(s.contains("\"inverse_images\""));
        let back: Automorphism = serde_json::from_str(&s).unwrap();
        assert_eq!(back, lam);
        let bogus = r#"{"rank":2,"images":["a","ab"],"inverse_images":["a","ab"]}"#;
        assert!(serde_json::from_str::<Automorphism>(bogus).is_err());
        let endo: Endomorphism = serde_json::from_str(r#"{"rank":2,"images":["aa","1"]}"#).unwrap();
        assert_eq!(endo.has_trivial_image(), Some(1));
    }

    #[test]
    fn permutations_are_complete() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(1), vec![vec![0]]);
    }
}
