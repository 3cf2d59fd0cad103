//! Reduced-word lists and canonical representatives of letter-permutation
//! double cosets.
//!
//! Tuples are compared by their length vector, then by the concatenated
//! letter codes (`a_1 < a_1^-1 < a_2 < …`). Right multiplication by a letter
//! permutation renames letters; left multiplication permutes and inverts the
//! entries. A tuple is canonical when it is the least element of its double
//! orbit, which forces non-decreasing lengths and first-occurrence normal
//! letters (each new generator appears first as the next positive letter).

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::morphisms::permutations;
use crate::words::{Letter, Word};

/// Least image tuple of a double coset.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CanonicalKey {
    lengths: Vec<u8>,
    codes: Vec<u8>,
}

impl CanonicalKey {
    pub fn lengths(&self) -> &[u8] {
        &self.lengths
    }

    /// The key of the double coset of `images`.
    pub fn of_images(images: &[Word]) -> CanonicalKey {
        let r = images.len();
        let mut best: Option<CanonicalKey> = None;
        for perm in permutations(r) {
            for mask in 0..1u32 << r {
                let entries: Vec<Vec<u8>> = perm
                    .iter()
                    .enumerate()
                    .map(|(slot, &src)| {
                        let w = &images[src];
                        if mask >> slot & 1 == 1 {
                            w.inverse().letters().iter().map(|x| x.code() as u8).collect()
                        } else {
                            w.letters().iter().map(|x| x.code() as u8).collect()
                        }
                    })
                    .collect();
                let key = CanonicalKey {
                    lengths: entries.iter().map(|e| e.len() as u8).collect(),
                    codes: normalize(entries.concat(), r),
                };
                if best.as_ref().map_or(true, |b| key < *b) {
                    best = Some(key);
                }
            }
        }
        best.expect("at least one permutation")
    }

    pub fn images(&self, rank: usize) -> Vec<Word> {
        let mut out = Vec::with_capacity(self.lengths.len());
        let mut at = 0;
        for &l in &self.lengths {
            let letters = self.codes[at..at + l as usize]
                .iter()
                .map(|&c| Letter::from_code(c as u32))
                .collect();
            out.push(Word::from_reduced_unchecked(rank, letters));
            at += l as usize;
        }
        out
    }
}

impl Ord for CanonicalKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lengths.cmp(&other.lengths).then_with(|| self.codes.cmp(&other.codes))
    }
}

impl PartialOrd for CanonicalKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.lengths.len();
        let text: Vec<String> = self.images(r).iter().map(Word::to_string).collect();
        f.write_str(&text.join(";"))
    }
}

impl Serialize for CanonicalKey {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Lexicographically least renaming of a letter sequence.
fn normalize(codes: Vec<u8>, r: usize) -> Vec<u8> {
    let mut map = vec![u8::MAX; r];
    let mut next = 0u8;
    codes
        .into_iter()
        .map(|c| {
            let g = (c >> 1) as usize;
            if map[g] == u8::MAX {
                map[g] = next << 1 | (c & 1);
                next += 1;
            }
            (map[g] & !1) | ((c ^ map[g]) & 1)
        })
        .collect()
}

/// Reduced words of each length, and for every `k` the words that are
/// first-occurrence normal after generators `0..k` have been used.
pub(crate) struct WordLists {
    pub rank: usize,
    words: Vec<Vec<u8>>,
    /// `normal[l][k]`: `(index into words[l], generators used afterwards)`.
    normal: Vec<Vec<Vec<(u32, u8)>>>,
}

impl WordLists {
    pub fn new(rank: usize, max_len: usize) -> WordLists {
        let letters = 2 * rank as u8;
        let mut words: Vec<Vec<u8>> = vec![Vec::new(), (0..letters).collect()];
        for l in 2..=max_len {
            let prev = &words[l - 1];
            let mut cur = Vec::with_capacity(prev.len() / (l - 1) * (letters as usize - 1) * l);
            for w in prev.chunks_exact(l - 1) {
                let last = w[l - 2];
                for c in 0..letters {
                    if c != last ^ 1 {
                        cur.extend_from_slice(w);
                        cur.push(c);
                    }
                }
            }
            words.push(cur);
        }
        let mut normal = vec![Vec::new()];
        for (l, flat) in words.iter().enumerate().skip(1) {
            let mut per_k = vec![Vec::new(); rank + 1];
            for (idx, w) in flat.chunks_exact(l).enumerate() {
                for (k, list) in per_k.iter_mut().enumerate() {
                    if let Some(after) = normal_after(w, k as u8) {
                        list.push((idx as u32, after));
                    }
                }
            }
            normal.push(per_k);
        }
        WordLists { rank, words, normal }
    }

    pub fn word(&self, l: usize, idx: u32) -> &[u8] {
        let i = idx as usize * l;
        &self.words[l][i..i + l]
    }

    pub fn normal(&self, l: usize, k: u8) -> &[(u32, u8)] {
        &self.normal[l][k as usize]
    }
}

fn normal_after(w: &[u8], mut k: u8) -> Option<u8> {
    for &c in w {
        let g = c >> 1;
        if g < k {
            continue;
        }
        if g == k && c & 1 == 0 {
            k += 1;
        } else {
            return None;
        }
    }
    Some(k)
}

/// Left actions (entry permutation, inversion mask) that keep a length vector.
pub(crate) fn left_actions(lengths: &[usize]) -> Vec<(Vec<usize>, u32)> {
    let r = lengths.len();
    let mut out = Vec::new();
    for perm in permutations(r) {
        if perm.iter().enumerate().all(|(slot, &src)| lengths[src] == lengths[slot]) {
            for mask in 0..1u32 << r {
                out.push((perm.clone(), mask));
            }
        }
    }
    out
}

/// Whether a first-occurrence normal tuple is the least element of its orbit.
pub(crate) fn is_canonical(entries: &[&[u8]], actions: &[(Vec<usize>, u32)]) -> bool {
    let r = entries.len();
    let target: Vec<u8> = entries.concat();
    let mut map = [u8::MAX; 8];
    'action: for (perm, mask) in actions {
        map[..r].fill(u8::MAX);
        let mut next = 0u8;
        let mut at = 0;
        for (slot, &src) in perm.iter().enumerate() {
            let w = entries[src];
            let inverted = mask >> slot & 1 == 1;
            for t in 0..w.len() {
                let c = if inverted { w[w.len() - 1 - t] ^ 1 } else { w[t] };
                let g = (c >> 1) as usize;
                if map[g] == u8::MAX {
                    map[g] = next << 1 | (c & 1);
                    next += 1;
                }
                let mapped = (map[g] & !1) | ((c ^ map[g]) & 1);
                match mapped.cmp(&target[at]) {
                    Ordering::Less => return false,
                    Ordering::Greater => continue 'action,
                    Ordering::Equal => {}
                }
                at += 1;
            }
        }
    }
    true
}
