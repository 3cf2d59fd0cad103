//! Exact inversion-gap tables by exhaustive enumeration.
//!
//! `α_r(n) = max{‖φ^-1‖_1 : ‖φ‖_1 ≤ n}` and
//! `β_r(n) = max{‖[φ^-1]‖_1 : ‖[φ]‖_1 ≤ n}`. Both are invariant under
//! `φ ↦ ψ_1 φ ψ_2` for letter permutations `ψ_i`, so one representative per
//! double coset is enough.
//!
//! Candidates of norm exactly `N` are generated per length composition
//! `ℓ_1 ≤ … ≤ ℓ_r`, already first-occurrence normal, then filtered by the
//! abelian determinant, by the full canonical check and finally by Nielsen
//! reduction. Levels are processed in increasing `N`; within a level the
//! shards run on a private thread pool and their partial maxima are merged
//! with an associative, order-free rule, so tables do not depend on the
//! worker count.

mod cache;
mod canonical;
mod random;

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

pub use cache::{Cache, CACHE_DIR_ENV};
pub use canonical::CanonicalKey;
pub use random::{random_automorphism, random_automorphism_with, random_delta_sequence};

use crate::error::{Error, Result};
use crate::families::{phi_p, psi_p_family};
use crate::matrix::Matrix;
use crate::morphisms::{Automorphism, Endomorphism, PNorm};
use crate::nielsen::invert;
use crate::outer::outer_norm;
use crate::words::{Letter, Word};
use canonical::{is_canonical, left_actions, WordLists};

/// Largest rank with exhaustive tables.
pub const MAX_TABLE_RANK: usize = 5;

/// Default largest `n` per rank (index = rank).
const DEFAULT_LIMITS: [usize; MAX_TABLE_RANK + 1] = [0, 0, 14, 8, 7, 6];

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GapKind {
    Alpha,
    Beta,
}

impl GapKind {
    pub fn name(self) -> &'static str {
        match self {
            GapKind::Alpha => "alpha",
            GapKind::Beta => "beta",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GapRow {
    pub n: usize,
    pub value: u64,
    /// Canonical representative attaining `value`, least key among ties.
    pub witness: Automorphism,
    /// Canonical classes counted up to this `n`.
    pub examined: u64,
    pub millis: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapTable {
    pub kind: GapKind,
    pub rank: usize,
    pub rows: Vec<GapRow>,
}

impl GapTable {
    pub fn max_n(&self) -> Option<usize> {
        self.rows.last().map(|r| r.n)
    }

    pub fn value(&self, n: usize) -> Option<u64> {
        self.rows.iter().find(|r| r.n == n).map(|r| r.value)
    }

    pub fn values(&self) -> Vec<(usize, u64)> {
        self.rows.iter().map(|r| (r.n, r.value)).collect()
    }

    pub fn truncated(&self, max_n: usize) -> GapTable {
        GapTable {
            kind: self.kind,
            rank: self.rank,
            rows: self.rows.iter().filter(|r| r.n <= max_n).cloned().collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TableOptions {
    /// Worker threads; `0` uses the available parallelism.
    pub workers: usize,
    /// Skip the feasibility guard.
    pub allow_infeasible: bool,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions {
            workers: 0,
            allow_infeasible: false,
        }
    }
}

/// Non-decreasing compositions of `total` into `r` positive parts.
fn compositions(r: usize, total: usize) -> Vec<Vec<usize>> {
    fn rec(r: usize, left: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() + 1 == r {
            if left >= min {
                cur.push(left);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        let slots = r - cur.len();
        for l in min..=left / slots {
            cur.push(l);
            rec(r, left - l, l, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if total >= r {
        rec(r, total, 1, &mut Vec::new(), &mut out);
    }
    out
}

/// Raw tuples over all sorted compositions with sum `≤ n`, divided by the
/// size of the letter-renaming group.
pub fn estimate_candidates(r: usize, n: usize) -> u128 {
    let letters = 2 * r as u128;
    let count = |l: usize| letters * (letters - 1).pow(l as u32 - 1);
    let group: u128 = (1..=r as u128).product::<u128>() << r;
    (r..=n)
        .flat_map(|t| compositions(r, t))
        .map(|c| c.iter().map(|&l| count(l)).product::<u128>())
        .sum::<u128>()
        / group
}

fn guard(r: usize, n: usize, opts: &TableOptions) -> Result<()> {
    if !(2..=MAX_TABLE_RANK).contains(&r) {
        return Err(Error::Domain(format!("exhaustive tables support ranks 2..={MAX_TABLE_RANK}, got {r}")));
    }
    if n > u8::MAX as usize {
        return Err(Error::Domain(format!("n = {n} is too large")));
    }
    if !opts.allow_infeasible && n > DEFAULT_LIMITS[r] {
        return Err(Error::Infeasible {
            reason: format!("rank {r} tables stop at n = {} by default", DEFAULT_LIMITS[r]),
            estimated_tuples: estimate_candidates(r, n),
        });
    }
    Ok(())
}

#[derive(Clone, Debug)]
struct Best {
    value: u64,
    key: CanonicalKey,
    witness: Automorphism,
}

impl Best {
    fn better_than(&self, other: &Best) -> bool {
        self.value > other.value || (self.value == other.value && self.key < other.key)
    }
}

#[derive(Clone, Debug, Default)]
struct LevelAcc {
    best: Option<Best>,
    examined: u64,
}

impl LevelAcc {
    fn offer(&mut self, cand: Best) {
        if self.best.as_ref().map_or(true, |b| cand.better_than(b)) {
            self.best = Some(cand);
        }
    }

    fn merge(mut self, other: LevelAcc) -> LevelAcc {
        self.examined += other.examined;
        if let Some(b) = other.best {
            self.offer(b);
        }
        self
    }
}

/// One unit of parallel work: a composition, a first word and a slice of
/// the candidates for the second word.
#[derive(Clone, Debug)]
struct Shard {
    composition: usize,
    first: u32,
    after_first: u8,
    second: std::ops::Range<usize>,
}

const SECOND_CHUNK: usize = 2048;

fn shards(lists: &WordLists, comps: &[Vec<usize>]) -> Vec<Shard> {
    let mut out = Vec::new();
    for (ci, c) in comps.iter().enumerate() {
        for &(first, k) in lists.normal(c[0], 0) {
            let len = lists.normal(c[1], k).len();
            let mut start = 0;
            while start < len {
                let end = (start + SECOND_CHUNK).min(len);
                out.push(Shard {
                    composition: ci,
                    first,
                    after_first: k,
                    second: start..end,
                });
                start = end;
            }
        }
    }
    out
}

fn to_words(rank: usize, entries: &[&[u8]]) -> Vec<Word> {
    entries
        .iter()
        .map(|e| Word::from_reduced_unchecked(rank, e.iter().map(|&c| Letter::from_code(c as u32)).collect()))
        .collect()
}

fn abelian_det(rank: usize, entries: &[&[u8]]) -> Option<i64> {
    let rows = entries
        .iter()
        .map(|e| {
            let mut row = vec![0i64; rank];
            for &c in e.iter() {
                row[(c >> 1) as usize] += if c & 1 == 0 { 1 } else { -1 };
            }
            row
        })
        .collect();
    Matrix::from_rows(rows).determinant()
}

/// Calls `visit` on every canonical automorphism of the shard.
fn scan_shard<F>(lists: &WordLists, comp: &[usize], actions: &[(Vec<usize>, u32)], shard: &Shard, mut visit: F) -> Result<()>
where
    F: FnMut(Automorphism, CanonicalKey) -> Result<()>,
{
    let r = lists.rank;
    let mut entries: Vec<&[u8]> = vec![&[]; r];
    entries[0] = lists.word(comp[0], shard.first);
    let seconds = &lists.normal(comp[1], shard.after_first)[shard.second.clone()];
    for &(idx, k) in seconds {
        entries[1] = lists.word(comp[1], idx);
        rest(lists, comp, actions, 2, k, &mut entries, &mut visit)?;
    }
    Ok(())
}

fn rest<'a, F>(
    lists: &'a WordLists,
    comp: &[usize],
    actions: &[(Vec<usize>, u32)],
    pos: usize,
    k: u8,
    entries: &mut Vec<&'a [u8]>,
    visit: &mut F,
) -> Result<()>
where
    F: FnMut(Automorphism, CanonicalKey) -> Result<()>,
{
    let r = lists.rank;
    if pos == r {
        if k as usize != r || !matches!(abelian_det(r, entries), Some(1) | Some(-1)) {
            return Ok(());
        }
        if !is_canonical(entries, actions) {
            return Ok(());
        }
        let images = to_words(r, entries);
        let phi = Endomorphism::new(images.clone())?;
        match invert(&phi) {
            Ok(aut) => {
                let key = CanonicalKey::of_images(&images);
                return visit(aut, key);
            }
            Err(Error::NotAnAutomorphism(_)) => return Ok(()),
            Err(e) => return Err(e),
        }
    }
    // later entries may still introduce generators, but at most one per letter
    let capacity: usize = comp[pos..].iter().sum();
    if (k as usize) + capacity < r {
        return Ok(());
    }
    for &(idx, k2) in lists.normal(comp[pos], k) {
        entries[pos] = lists.word(comp[pos], idx);
        rest(lists, comp, actions, pos + 1, k2, entries, visit)?;
    }
    Ok(())
}

/// Measures a canonical automorphism: `Some((level, value))` if it counts.
fn measure(kind: GapKind, aut: &Automorphism) -> Result<Option<(usize, u64)>> {
    match kind {
        GapKind::Alpha => Ok(Some((aut.norm1() as usize, aut.inverse_norm1()))),
        GapKind::Beta => {
            // every outer class with ‖Φ‖_1 ≤ n has a representative of norm ‖Φ‖_1
            let norm = aut.norm1();
            if outer_norm(aut.forward(), PNorm::One)?.value != norm {
                return Ok(None);
            }
            Ok(Some((norm as usize, outer_norm(aut.inverse(), PNorm::One)?.value)))
        }
    }
}

struct Context {
    lists: WordLists,
    pool: rayon::ThreadPool,
}

impl Context {
    fn new(r: usize, n: usize, workers: usize) -> Result<Context> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Invariant(format!("thread pool: {e}")))?;
        Ok(Context {
            lists: WordLists::new(r, n + 1 - r),
            pool,
        })
    }

    fn level(&self, kind: GapKind, total: usize) -> Result<LevelAcc> {
        let r = self.lists.rank;
        let comps = compositions(r, total);
        let actions: Vec<_> = comps.iter().map(|c| left_actions(c)).collect();
        let work = shards(&self.lists, &comps);
        self.pool.install(|| {
            work.par_iter()
                .map(|shard| {
                    let mut acc = LevelAcc::default();
                    let comp = &comps[shard.composition];
                    scan_shard(&self.lists, comp, &actions[shard.composition], shard, |aut, key| {
                        if let Some((level, value)) = measure(kind, &aut)? {
                            debug_assert_eq!(level, total);
                            acc.examined += 1;
                            acc.offer(Best { value, key, witness: aut });
                        }
                        Ok(())
                    })?;
                    Ok(acc)
                })
                .try_reduce(LevelAcc::default, |a, b| Ok(a.merge(b)))
        })
    }
}

/// Extends `resume` (or starts from scratch) up to `max_n`; `on_row` sees
/// each new row as soon as it is final.
pub fn compute_table<F>(
    kind: GapKind,
    rank: usize,
    max_n: usize,
    opts: &TableOptions,
    resume: Option<GapTable>,
    mut on_row: F,
) -> Result<GapTable>
where
    F: FnMut(&GapRow) -> Result<()>,
{
    guard(rank, max_n, opts)?;
    let mut table = resume.unwrap_or(GapTable { kind, rank, rows: Vec::new() });
    if table.kind != kind || table.rank != rank {
        return Err(Error::Invariant("resumed table has a different kind or rank".into()));
    }
    if table.max_n().map_or(false, |m| m >= max_n) {
        return Ok(table.truncated(max_n));
    }
    let start_level = table.max_n().map_or(rank, |m| m + 1);
    let mut running = LevelAcc::default();
    if let Some(last) = table.rows.last() {
        running.examined = last.examined;
        running.best = Some(Best {
            value: last.value,
            key: CanonicalKey::of_images(last.witness.images()),
            witness: last.witness.clone(),
        });
    }
    let ctx = Context::new(rank, max_n, opts.workers)?;
    let clock = Instant::now();
    for total in start_level..=max_n {
        running = running.merge(ctx.level(kind, total)?);
        let best = running
            .best
            .clone()
            .ok_or_else(|| Error::Invariant(format!("no automorphism of norm ≤ {total}")))?;
        let row = GapRow {
            n: total,
            value: best.value,
            witness: best.witness,
            examined: running.examined,
            millis: clock.elapsed().as_millis() as u64,
        };
        on_row(&row)?;
        table.rows.push(row);
    }
    Ok(table)
}

pub fn alpha(rank: usize, max_n: usize, opts: &TableOptions) -> Result<GapTable> {
    compute_table(GapKind::Alpha, rank, max_n, opts, None, |_| Ok(()))
}

pub fn beta(rank: usize, max_n: usize, opts: &TableOptions) -> Result<GapTable> {
    compute_table(GapKind::Beta, rank, max_n, opts, None, |_| Ok(()))
}

/// One representative per letter-permutation double coset of
/// `{φ ∈ Aut F_r : ‖φ‖_1 ≤ n}`, ordered by norm and then by key.
pub fn enumerate_automorphisms(rank: usize, n: usize) -> Result<Vec<Automorphism>> {
    guard(rank, n, &TableOptions { workers: 1, allow_infeasible: true })?;
    if n < rank {
        return Ok(Vec::new());
    }
    let lists = WordLists::new(rank, n + 1 - rank);
    let mut out = Vec::new();
    for total in rank..=n {
        let comps = compositions(rank, total);
        let mut level = Vec::new();
        for (ci, comp) in comps.iter().enumerate() {
            let actions = left_actions(comp);
            for shard in shards(&lists, &comps).iter().filter(|s| s.composition == ci) {
                scan_shard(&lists, comp, &actions, shard, |aut, key| {
                    level.push((key, aut));
                    Ok(())
                })?;
            }
        }
        level.sort_by(|a, b| a.0.cmp(&b.0));
        out.extend(level.into_iter().map(|(_, a)| a));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundCheck {
    pub n: usize,
    pub name: String,
    pub value: u128,
    pub bound: u128,
    pub satisfied: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundsReport {
    pub kind: GapKind,
    pub rank: usize,
    pub checks: Vec<BoundCheck>,
    pub passed: bool,
}

fn check(n: usize, name: &str, value: u128, bound: u128, satisfied: bool) -> BoundCheck {
    BoundCheck {
        n,
        name: name.to_string(),
        value,
        bound,
        satisfied,
    }
}

/// Compares every row with the applicable known bounds. Quantities with
/// fractions are compared after clearing denominators.
pub fn verify_bounds(table: &GapTable) -> Result<BoundsReport> {
    let mut checks = Vec::new();
    let r = table.rank;
    for pair in table.rows.windows(2) {
        checks.push(check(
            pair[1].n,
            "non-decreasing",
            pair[1].value as u128,
            pair[0].value as u128,
            pair[1].value >= pair[0].value,
        ));
    }
    for row in &table.rows {
        let (n, v) = (row.n as i128, row.value as i128);
        let witness_norm = match table.kind {
            GapKind::Alpha => row.witness.norm1(),
            GapKind::Beta => outer_norm(row.witness.forward(), PNorm::One)?.value,
        };
        checks.push(check(row.n, "witness within n", witness_norm as u128, row.n as u128, witness_norm as usize <= row.n));
        match (table.kind, r) {
            (GapKind::Alpha, 2) => {
                if n >= 4 {
                    let rhs = (n - 1) * (n - 1);
                    checks.push(check(row.n, "2α₂(n) ≤ (n−1)²", 2 * v as u128, rhs as u128, 2 * v <= rhs));
                }
                if n >= 10 {
                    let rhs = n * n - 24 * n + 168;
                    checks.push(check(row.n, "4α₂(n) ≥ n²−24n+168", 4 * v as u128, rhs as u128, 4 * v >= rhs));
                }
                if n % 8 == 7 {
                    let rhs = n * n - 10 * n + 49;
                    checks.push(check(row.n, "4α₂(n) ≥ n²−10n+49", 4 * v as u128, rhs as u128, 4 * v >= rhs));
                }
            }
            (GapKind::Beta, 2) => {
                checks.push(check(row.n, "β₂(n) = n", v as u128, n as u128, v == n));
            }
            _ => {}
        }
        if r >= 3 {
            // φ_p has ‖φ_p‖_1 = ‖[φ_p]‖_1 = r + (r-1)p
            for p in 2.. {
                let level = r + (r - 1) * p;
                if level > row.n {
                    break;
                }
                let phi = phi_p(r, p as u64)?;
                let (name, bound) = match table.kind {
                    GapKind::Alpha => ("α_r(n) ≥ ‖φ_p⁻¹‖₁", phi.inverse_norm1()),
                    GapKind::Beta => ("β_r(n) ≥ ‖[φ_p⁻¹]‖₁", outer_norm(phi.inverse(), PNorm::One)?.value),
                };
                checks.push(check(row.n, &format!("{name}, p = {p}"), v as u128, bound as u128, row.value >= bound));
            }
        }
    }
    if r >= 3 && table.kind == GapKind::Alpha {
        for p in r..=r + 2 {
            let rep = psi_p_family(r, p as u64)?;
            checks.push(check(
                3 * r * p,
                &format!("ψ_p family report, p = {p}"),
                rep.inverse_norm,
                rep.forward_norm,
                rep.passed,
            ));
        }
    }
    let passed = checks.iter().all(|c| c.satisfied);
    Ok(BoundsReport {
        kind: table.kind,
        rank: r,
        checks,
        passed,
    })
}

/// `β_r(n) ≤ α_r(n)` on every common row.
pub fn check_beta_le_alpha(alpha: &GapTable, beta: &GapTable) -> Vec<BoundCheck> {
    beta.rows
        .iter()
        .filter_map(|b| {
            alpha
                .value(b.n)
                .map(|a| check(b.n, "β ≤ α", b.value as u128, a as u128, b.value <= a))
        })
        .collect()
}

/// `α_{r+1}(n+1) ≥ 1 + α_r(n)` wherever both sides are known.
pub fn check_inclusion(lower: &GapTable, upper: &GapTable) -> Vec<BoundCheck> {
    lower
        .rows
        .iter()
        .filter_map(|row| {
            upper.value(row.n + 1).map(|u| {
                check(row.n + 1, "α_{r+1}(n+1) ≥ 1 + α_r(n)", u as u128, row.value as u128 + 1, u > row.value)
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single() -> TableOptions {
        TableOptions { workers: 1, allow_infeasible: false }
    }

    #[test]
    fn composition_lists() {
        assert_eq!(compositions(2, 4), vec![vec![1, 3], vec![2, 2]]);
        assert_eq!(compositions(3, 3), vec![vec![1, 1, 1]]);
        assert!(compositions(3, 2).is_empty());
    }

    #[test]
    fn enumeration_examples() {
        let two = enumerate_automorphisms(2, 2).unwrap();
        assert_eq!(two.len(), 1);
        assert!(two[0].forward().is_letter_permutation());
        let three = enumerate_automorphisms(2, 3).unwrap();
        let eta = invert(&Endomorphism::parse(2, &["a", "ab"]).unwrap()).unwrap();
        assert!(three.contains(&eta));
        for phi in enumerate_automorphisms(2, 4).unwrap() {
            assert!(phi.inverse_norm1() <= 4);
        }
    }

    #[test]
    fn small_tables() {
        let a = alpha(2, 4, &single()).unwrap();
        assert_eq!(a.value(2), Some(2));
        assert_eq!(a.value(3), Some(3));
        let b = beta(2, 5, &single()).unwrap();
        assert_eq!(b.values(), vec![(2, 2), (3, 3), (4, 4), (5, 5)]);
        assert!(verify_bounds(&b).unwrap().passed);
    }

    #[test]
    fn resume_matches_fresh() {
        let fresh = alpha(2, 6, &single()).unwrap();
        let partial = alpha(2, 4, &single()).unwrap();
        let resumed = compute_table(GapKind::Alpha, 2, 6, &single(), Some(partial), |_| Ok(())).unwrap();
        assert_eq!(fresh.values(), resumed.values());
        for (x, y) in fresh.rows.iter().zip(&resumed.rows) {
            assert_eq!((&x.witness, x.examined), (&y.witness, y.examined));
        }
    }

    #[test]
    fn guard_refuses_large_requests() {
        assert!(matches!(alpha(2, 15, &single()), Err(Error::Infeasible { .. })));
        assert!(matches!(alpha(6, 6, &single()), Err(Error::Domain(_))));
        assert!(estimate_candidates(2, 14) > estimate_candidates(2, 12));
    }
}
