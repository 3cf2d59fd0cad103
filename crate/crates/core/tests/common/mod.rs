#![allow(dead_code)]

use std::collections::HashSet;

use autnorm::{Automorphism, Word};

/// Subgroup membership by folding the petal graph of `gens` (no Nielsen
/// moves involved).
pub struct FoldedGraph {
    /// `(from, generator, to)` for positive letters only.
    edges: Vec<(usize, i32, usize)>,
}

impl FoldedGraph {
    pub fn new(gens: &[Vec<i32>]) -> FoldedGraph {
        let mut edges = Vec::new();
        let mut next = 1;
        for g in gens {
            let mut at = 0;
            for (k, &x) in g.iter().enumerate() {
                let to = if k + 1 == g.len() {
                    0
                } else {
                    next += 1;
                    next - 1
                };
                if x > 0 {
                    edges.push((at, x, to));
                } else {
                    edges.push((to, -x, at));
                }
                at = to;
            }
        }
        let mut graph = FoldedGraph { edges };
        graph.fold();
        graph
    }

    fn fold(&mut self) {
        loop {
            self.edges.sort_unstable();
            self.edges.dedup();
            let mut merge = None;
            'scan: for (i, &(u, g, v)) in self.edges.iter().enumerate() {
                for &(u2, g2, v2) in &self.edges[i + 1..] {
                    if g != g2 {
                        continue;
                    }
                    if u == u2 && v != v2 {
                        merge = Some((v.min(v2), v.max(v2)));
                        break 'scan;
                    }
                    if v == v2 && u != u2 {
                        merge = Some((u.min(u2), u.max(u2)));
                        break 'scan;
                    }
                }
            }
            let Some((keep, gone)) = merge else { return };
            for e in self.edges.iter_mut() {
                if e.0 == gone {
                    e.0 = keep;
                }
                if e.2 == gone {
                    e.2 = keep;
                }
            }
        }
    }

    pub fn accepts(&self, word: &[i32]) -> bool {
        let mut at = 0;
        for &x in word {
            let next = if x > 0 {
                self.edges.iter().find(|e| e.0 == at && e.1 == x).map(|e| e.2)
            } else {
                self.edges.iter().find(|e| e.2 == at && e.1 == -x).map(|e| e.0)
            };
            match next {
                Some(v) => at = v,
                None => return false,
            }
        }
        at == 0
    }
}

/// An `r`-tuple generates `F_r` iff every generator is in the subgroup it
/// generates; a generating `r`-tuple of `F_r` is a basis.
pub fn is_basis_by_folding(tuple: &[Word]) -> bool {
    if tuple.iter().any(Word::is_empty) {
        return false;
    }
    let gens: Vec<Vec<i32>> = tuple.iter().map(|w| w.letters().iter().map(|x| x.signed()).collect()).collect();
    let graph = FoldedGraph::new(&gens);
    (1..=tuple.len() as i32).all(|g| graph.accepts(&[g]))
}

/// All reduced words of length exactly `len` over rank `r`.
pub fn reduced_words(r: usize, len: usize) -> Vec<Word> {
    let mut out: Vec<Vec<i32>> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &out {
            for g in 1..=r as i32 {
                for x in [g, -g] {
                    if w.last() != Some(&-x) {
                        let mut v = w.clone();
                        v.push(x);
                        next.push(v);
                    }
                }
            }
        }
        out = next;
    }
    out.iter().map(|w| Word::from_signed(r, w).unwrap()).collect()
}

/// Every `r`-tuple of nonempty reduced words with total length `≤ n`.
pub fn all_tuples(r: usize, n: usize) -> Vec<Vec<Word>> {
    let by_len: Vec<Vec<Word>> = (0..=n).map(|l| reduced_words(r, l)).collect();
    let mut out = Vec::new();
    fn rec(r: usize, left: usize, by_len: &[Vec<Word>], cur: &mut Vec<Word>, out: &mut Vec<Vec<Word>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        let min_rest = r - cur.len() - 1;
        for l in 1..=left.saturating_sub(min_rest) {
            for w in &by_len[l] {
                cur.push(w.clone());
                rec(r, left - l, by_len, cur, out);
                cur.pop();
            }
        }
    }
    rec(r, n, &by_len, &mut Vec::new(), &mut out);
    out
}

/// `{ψ_1 φ ψ_2}` over all letter permutations.
pub fn double_orbit(phi: &Automorphism) -> Vec<Automorphism> {
    let perms = Automorphism::all_letter_permutations(phi.rank());
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for p1 in &perms {
        for p2 in &perms {
            let a = p1.compose(phi).unwrap().compose(p2).unwrap();
            if seen.insert(a.clone()) {
                out.push(a);
            }
        }
    }
    out
}
