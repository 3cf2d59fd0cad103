//! Reduced words in the free group `F_r`.
//!
//! Letters are nonzero signed integers: `+i` is the generator `a_i`, `-i` its
//! inverse. A [`Word`] always holds a freely reduced letter sequence together
//! with its ambient rank.
//!
//! Text syntax: lowercase `a`..`z` are the generators in order, uppercase
//! `A`..`Z` their inverses, juxtaposition is concatenation and `""` or `"1"` is
//! the identity. The numeric syntax is a whitespace-separated list of signed
//! indices (`"1 -2 1"`) or of `a<i>` / `a<i>^<e>` tokens (`"a1 a2^-1"`).

use std::fmt;
use std::ops::Add;

use crate::error::{Error, Result};

/// Largest rank that has an alphabetic spelling.
pub const MAX_ALPHABETIC_RANK: usize = 26;

/// Default cap on the number of letters a single materialized word may hold.
pub const DEFAULT_LETTER_BUDGET: usize = 10_000_000;

/// A generator or its formal inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Letter(i32);

impl Letter {
    /// `generator` is zero-based.
    pub fn new(generator: usize, positive: bool) -> Letter {
        let v = generator as i32 + 1;
        Letter(if positive { v } else { -v })
    }

    pub fn from_signed(v: i32) -> Option<Letter> {
        (v != 0).then_some(Letter(v))
    }

    pub fn signed(self) -> i32 {
        self.0
    }

    /// Zero-based generator index.
    pub fn generator(self) -> usize {
        self.0.unsigned_abs() as usize - 1
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn sign(self) -> i64 {
        if self.0 > 0 {
            1
        } else {
            -1
        }
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    /// Position in the order `a_1 < a_1^-1 < a_2 < a_2^-1 < ...`.
    pub fn code(self) -> u32 {
        2 * self.generator() as u32 + u32::from(self.0 < 0)
    }

    pub fn from_code(code: u32) -> Letter {
        Letter::new((code / 2) as usize, code % 2 == 0)
    }

    fn alphabetic(self) -> Option<char> {
        let g = self.generator();
        if g >= MAX_ALPHABETIC_RANK {
            return None;
        }
        let base = if self.is_positive() { b'a' } else { b'A' };
        Some((base + g as u8) as char)
    }
}

/// Appends `x` to an already reduced sequence, cancelling if needed.
#[inline]
pub(crate) fn push_reduced(buf: &mut Vec<Letter>, x: Letter) {
    if buf.last() == Some(&x.inverse()) {
        buf.pop();
    } else {
        buf.push(x);
    }
}

/// A freely reduced word over the alphabet of rank `rank`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

/// Exponent-sum vector of a word.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AbelianVector(pub Vec<i64>);

impl AbelianVector {
    pub fn norm1(&self) -> u64 {
        self.0.iter().map(|x| x.unsigned_abs()).sum()
    }
}

impl Add for &AbelianVector {
    type Output = AbelianVector;

    fn add(self, rhs: &AbelianVector) -> AbelianVector {
        AbelianVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Word {
    pub fn identity(rank: usize) -> Word {
        Word {
            rank,
            letters: Vec::new(),
        }
    }

    /// The single-letter word `a_{generator+1}`.
    pub fn generator(rank: usize, generator: usize) -> Word {
        assert!(generator < rank, "generator {generator} out of range for rank {rank}");
        Word {
            rank,
            letters: vec![Letter::new(generator, true)],
        }
    }

    pub fn letter(rank: usize, x: Letter) -> Word {
        assert!(x.generator() < rank);
        Word {
            rank,
            letters: vec![x],
        }
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(rank: usize, raw: I) -> Result<Word> {
        let mut letters = Vec::new();
        for x in raw {
            if x.generator() >= rank {
                return Err(Error::Malformed(format!(
                    "letter {} out of range for rank {rank}",
                    x.signed()
                )));
            }
            push_reduced(&mut letters, x);
        }
        Ok(Word { rank, letters })
    }

    pub fn from_signed(rank: usize, raw: &[i32]) -> Result<Word> {
        let letters = raw
            .iter()
            .map(|&v| Letter::from_signed(v).ok_or_else(|| Error::Malformed("zero letter".into())))
            .collect::<Result<Vec<_>>>()?;
        Word::reduce(rank, letters)
    }

    /// Builds a word from letters the caller guarantees are reduced and in range.
    pub(crate) fn from_reduced_unchecked(rank: usize, letters: Vec<Letter>) -> Word {
        debug_assert!(letters.windows(2).all(|w| w[0] != w[1].inverse()));
        debug_assert!(letters.iter().all(|x| x.generator() < rank));
        Word { rank, letters }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    fn check_rank(&self, other: &Word) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: other.rank,
            });
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Word) -> Result<Word> {
        self.check_rank(other)?;
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        for &x in &other.letters {
            push_reduced(&mut letters, x);
        }
        Ok(Word {
            rank: self.rank,
            letters,
        })
    }

    pub fn inverse(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|x| x.inverse()).collect(),
        }
    }

    /// `w^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            for &x in &base.letters {
                push_reduced(&mut letters, x);
            }
        }
        Word {
            rank: self.rank,
            letters,
        }
    }

    /// `g^-1 · self · g`, reduced.
    pub fn conjugate(&self, g: &Word) -> Result<Word> {
        self.check_rank(g)?;
        let mut letters = Vec::with_capacity(self.len() + 2 * g.len());
        for x in g.letters.iter().rev() {
            push_reduced(&mut letters, x.inverse());
        }
        for &x in self.letters.iter().chain(&g.letters) {
            push_reduced(&mut letters, x);
        }
        Ok(Word {
            rank: self.rank,
            letters,
        })
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(f), Some(l)) => self.len() == 1 || f != l.inverse(),
            _ => true,
        }
    }

    /// Splits `self` as `g · core · g^-1` with `core` cyclically reduced and
    /// `g` as short as possible. Returns `(core, g)`.
    pub fn cyclically_reduce(&self) -> (Word, Word) {
        let n = self.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.letters[k] == self.letters[n - 1 - k].inverse() {
            k += 1;
        }
        let core = Word {
            rank: self.rank,
            letters: self.letters[k..n - k].to_vec(),
        };
        let g = Word {
            rank: self.rank,
            letters: self.letters[..k].to_vec(),
        };
        (core, g)
    }

    pub fn abelianize(&self) -> AbelianVector {
        let mut v = vec![0i64; self.rank];
        for x in &self.letters {
            v[x.generator()] += x.sign();
        }
        AbelianVector(v)
    }

    /// True when no inverse letter occurs.
    pub fn is_positive(&self) -> bool {
        self.letters.iter().all(|x| x.is_positive())
    }

    /// Distinct signed letters occurring in the word.
    pub fn letter_set(&self) -> Vec<Letter> {
        let mut seen: Vec<Letter> = Vec::new();
        for &x in &self.letters {
            if !seen.contains(&x) {
                seen.push(x);
            }
        }
        seen
    }

    /// Same letters viewed in a larger ambient rank.
    pub fn with_rank(&self, rank: usize) -> Result<Word> {
        if self.letters.iter().any(|x| x.generator() >= rank) {
            return Err(Error::Malformed(format!("word {self} does not fit rank {rank}")));
        }
        Ok(Word {
            rank,
            letters: self.letters.clone(),
        })
    }

    /// Parses either syntax. See the module docs.
    pub fn parse(text: &str, rank: usize) -> Result<Word> {
        let t = text.trim();
        if t.is_empty() || t == "1" {
            return Ok(Word::identity(rank));
        }
        let raw = if t.chars().any(|c| c.is_ascii_digit()) {
            parse_numeric(t)?
        } else {
            parse_alphabetic(t)?
        };
        Word::reduce(rank, raw)
    }

    /// Parses a word, taking the smallest rank (at least 2) that fits it.
    pub fn parse_infer(text: &str) -> Result<Word> {
        let w = Word::parse(text, usize::MAX)?;
        let rank = w.letters.iter().map(|x| x.generator() + 1).max().unwrap_or(0).max(2);
        Ok(Word {
            rank,
            letters: w.letters,
        })
    }

    /// Numeric spelling, e.g. `"1 -2 1"`; `"1"` would be ambiguous so the
    /// identity is spelled as the empty string.
    pub fn to_numeric(&self) -> String {
        self.letters
            .iter()
            .map(|x| x.signed().to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn parse_alphabetic(t: &str) -> Result<Vec<Letter>> {
    t.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            'a'..='z' => Ok(Letter::new(c as usize - 'a' as usize, true)),
            'A'..='Z' => Ok(Letter::new(c as usize - 'A' as usize, false)),
            _ => Err(Error::Malformed(format!("unknown symbol {c:?}"))),
        })
        .collect()
}

fn parse_numeric(t: &str) -> Result<Vec<Letter>> {
    let mut out = Vec::new();
    for tok in t.split_whitespace() {
        let bad = || Error::Malformed(format!("bad numeric token {tok:?}"));
        if let Some(rest) = tok.strip_prefix('a') {
            let (idx, exp) = match rest.split_once('^') {
                Some((i, e)) => (i, e.parse::<i64>().map_err(|_| bad())?),
                None => (rest, 1),
            };
            let idx: usize = idx.parse().map_err(|_| bad())?;
            if idx == 0 {
                return Err(bad());
            }
            let x = Letter::new(idx - 1, exp > 0);
            out.extend(std::iter::repeat(x).take(exp.unsigned_abs() as usize));
        } else {
            let v: i32 = tok.parse().map_err(|_| bad())?;
            out.push(Letter::from_signed(v).ok_or_else(bad)?);
        }
    }
    Ok(out)
}

impl serde::Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        if self.rank <= MAX_ALPHABETIC_RANK {
            for x in &self.letters {
                write!(f, "{}", x.alphabetic().expect("rank checked"))?;
            }
            Ok(())
        } else {
            let toks: Vec<String> = self
                .letters
                .iter()
                .map(|x| {
                    if x.is_positive() {
                        format!("a{}", x.generator() + 1)
                    } else {
                        format!("a{}^-1", x.generator() + 1)
                    }
                })
                .collect();
            f.write_str(&toks.join(" "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn raw(s: &str) -> Vec<Letter> {
        parse_alphabetic(s).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert!(Word::reduce(2, raw("aA")).unwrap().is_empty());
        assert!(Word::reduce(2, raw("BabBAb")).unwrap().is_empty());
        assert_eq!(Word::reduce(2, raw("aBbab")).unwrap(), w("aab"));
        assert!(Word::reduce(2, raw("ac")).is_err());
    }

    #[test]
    fn multiply_examples() {
        assert!(w("ab").multiply(&w("BA")).unwrap().is_empty());
        assert_eq!(w("a").multiply(&w("b")).unwrap(), w("ab"));
        // letter-by-letter: B a b·B a b b -> B a a b b
        assert_eq!(w("Bab").multiply(&w("Babb")).unwrap(), w("Baabb"));
        let three = Word::parse("c", 3).unwrap();
        assert!(matches!(w("a").multiply(&three), Err(Error::RankMismatch { .. })));
    }

    #[test]
    fn invert_examples() {
        assert_eq!(w("").inverse(), w(""));
        assert_eq!(w("ab").inverse(), w("BA"));
        assert_eq!(w("Bab").inverse(), w("BAb"));
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(w("a").conjugate(&w("b")).unwrap(), w("Bab"));
        assert_eq!(w("Bab").conjugate(&w("B")).unwrap(), w("a"));
        let w3 = Word::identity(3);
        assert!(w3.conjugate(&Word::parse("abc", 3).unwrap()).unwrap().is_empty());
    }

    #[test]
    fn cyclic_reduction_examples() {
        assert_eq!(w("Bab").cyclically_reduce(), (w("a"), w("B")));
        assert_eq!(w("abab").cyclically_reduce(), (w("abab"), w("")));
        let (core, g) = w("BaBab").cyclically_reduce();
        assert_eq!((core.clone(), g.clone()), (w("aBa"), w("B")));
        let back = g.multiply(&core).unwrap().multiply(&g.inverse()).unwrap();
        assert_eq!(back, w("BaBab"));
    }

    #[test]
    fn abelianize_examples() {
        // a1 a2 a1^-2 has a1-exponent -1
        let x = Word::parse("abAA", 2).unwrap().abelianize();
        assert_eq!(x.0[0], -1);
        assert_eq!(w("").abelianize(), AbelianVector(vec![0, 0]));
        assert_eq!(w("BaBab").abelianize(), AbelianVector(vec![2, -1]));
    }

    #[test]
    fn parse_examples() {
        assert_eq!(
            w("Bab").letters(),
            &[Letter::new(1, false), Letter::new(0, true), Letter::new(1, true)]
        );
        assert_eq!(
            Word::parse("a1 a2^-1", 2).unwrap().letters(),
            &[Letter::new(0, true), Letter::new(1, false)]
        );
        assert_eq!(Word::parse("1 -2 1", 2).unwrap(), w("aBa"));
        assert!(Word::parse("ax", 2).is_err());
        assert!(Word::parse("a?", 2).is_err());
        assert!(Word::parse("1", 2).unwrap().is_empty());
        assert_eq!(Word::parse_infer("abc").unwrap().rank(), 3);
    }

    #[test]
    fn high_rank_uses_numeric_display() {
        let x = Word::from_signed(30, &[30, -1]).unwrap();
        assert_eq!(x.to_string(), "a30 a1^-1");
        assert_eq!(Word::parse(&x.to_string(), 30).unwrap(), x);
    }
}
