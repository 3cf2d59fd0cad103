//! Explicit automorphism families with large inversion gaps.
//!
//! * `ψ_k = η_{ab^{2k}, ab^{2k+1}} λ_{a^-k b}` in rank 2, with
//!   `‖ψ_k‖_1 = 8k+7` and `‖ψ_k^-1‖_1 = 16k²+8k+7`.
//! * `φ_p : a_i ↦ a_i a_{i+1}^p (i < r), a_r ↦ a_r`, whose abelianization is the
//!   unipotent matrix `M^(p)` with inverse `N^(p)`, `N_ij = (-p)^{j-i}`.
//! * `ψ_p = φ_p λ_{a_1^p}` for `p ≥ r ≥ 3`, with `‖ψ_p‖_1 ≤ 3rp` and
//!   `‖ψ_p^-1‖_1 > (r-2)p^r`.
//!
//! Inverse images of `φ_p` grow like `p^{r-1}`, so every length is also
//! available from an exact recurrence that never materializes words.

use num_traits::{PrimInt, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::morphisms::{Automorphism, Endomorphism};
use crate::words::{Word, DEFAULT_LETTER_BUDGET};
use crate::IntMatrix;

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Comparison {
    pub name: String,
    pub lhs: u128,
    pub rhs: u128,
    pub satisfied: bool,
}

impl Comparison {
    fn new(name: impl Into<String>, lhs: u128, rhs: u128, satisfied: bool) -> Comparison {
        Comparison {
            name: name.into(),
            lhs,
            rhs,
            satisfied,
        }
    }

    fn eq(name: impl Into<String>, lhs: u128, rhs: u128) -> Comparison {
        Comparison::new(name, lhs, rhs, lhs == rhs)
    }

    fn le(name: impl Into<String>, lhs: u128, rhs: u128) -> Comparison {
        Comparison::new(name, lhs, rhs, lhs <= rhs)
    }

    fn lt(name: impl Into<String>, lhs: u128, rhs: u128) -> Comparison {
        Comparison::new(name, lhs, rhs, lhs < rhs)
    }

    fn ge(name: impl Into<String>, lhs: u128, rhs: u128) -> Comparison {
        Comparison::new(name, lhs, rhs, lhs >= rhs)
    }

    fn gt(name: impl Into<String>, lhs: u128, rhs: u128) -> Comparison {
        Comparison::new(name, lhs, rhs, lhs > rhs)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub family: String,
    pub parameters: Vec<(String, u64)>,
    pub forward_norm: u128,
    pub inverse_norm: u128,
    /// `true` when the inverse norm comes from materialized words rather than
    /// the length recurrence alone.
    pub materialized: bool,
    pub comparisons: Vec<Comparison>,
    pub passed: bool,
}

impl FamilyReport {
    fn new(
        family: &str,
        parameters: Vec<(&str, u64)>,
        forward_norm: u128,
        inverse_norm: u128,
        materialized: bool,
        comparisons: Vec<Comparison>,
    ) -> FamilyReport {
        let passed = comparisons.iter().all(|c| c.satisfied);
        FamilyReport {
            family: family.to_string(),
            parameters: parameters.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            forward_norm,
            inverse_norm,
            materialized,
            comparisons,
            passed,
        }
    }
}

fn word(rank: usize, signed: &[(i32, i64)]) -> Word {
    signed
        .iter()
        .fold(Word::identity(rank), |acc, &(g, e)| {
            let x = Word::from_signed(rank, &[g]).expect("valid generator");
            acc.multiply(&x.pow(e)).expect("same rank")
        })
}

/// `ψ_k` with its inverse built in closed form.
pub fn psi_k(k: u32) -> Result<Automorphism> {
    let k = k as i64;
    let eta = Endomorphism::new(vec![word(2, &[(1, 1), (2, 2 * k)]), word(2, &[(1, 1), (2, 2 * k + 1)])])?;
    // η^-1: a ↦ a(Ba)^{2k}, b ↦ Ab
    let eta_inv = Endomorphism::new(vec![
        Word::generator(2, 0).multiply(&word(2, &[(2, -1), (1, 1)]).pow(2 * k))?,
        word(2, &[(1, -1), (2, 1)]),
    ])?;
    let eta = Automorphism::from_verified_pair(eta, eta_inv)?;
    let g = word(2, &[(1, -k), (2, 1)]);
    let psi = eta.compose(&Automorphism::inner(&g))?;
    let k = k as u64;
    let (f, i) = (8 * k + 7, 16 * k * k + 8 * k + 7);
    if psi.norm1() != f || psi.inverse_norm1() != i {
        return Err(Error::Invariant(format!(
            "ψ_{k}: norms ({}, {}) differ from ({f}, {i})",
            psi.norm1(),
            psi.inverse_norm1()
        )));
    }
    Ok(psi)
}

pub fn psi_k_report(k: u32) -> Result<FamilyReport> {
    let psi = psi_k(k)?;
    let k = k as u128;
    Ok(FamilyReport::new(
        "psi-k",
        vec![("r", 2), ("k", k as u64)],
        psi.norm1() as u128,
        psi.inverse_norm1() as u128,
        true,
        vec![
            Comparison::eq("‖ψ_k‖₁ = 8k+7", psi.norm1() as u128, 8 * k + 7),
            Comparison::eq("‖ψ_k⁻¹‖₁ = 16k²+8k+7", psi.inverse_norm1() as u128, 16 * k * k + 8 * k + 7),
        ],
    ))
}

fn scalar<T: PrimInt>(v: u64) -> Result<T> {
    T::from(v).ok_or_else(|| Error::Overflow(format!("{v} does not fit the scalar type")))
}

/// `M^(p)`: identity plus `p` on the superdiagonal.
pub fn m_matrix<T: PrimInt + Signed>(r: usize, p: u64) -> Result<Matrix<T>> {
    if r < 2 {
        return Err(Error::Domain(format!("rank {r} < 2")));
    }
    let mut m = Matrix::identity(r);
    let p = scalar::<T>(p)?;
    for i in 0..r - 1 {
        m[(i, i + 1)] = p;
    }
    Ok(m)
}

/// `N^(p) = (M^(p))^-1`, upper triangular with `N_ij = (-p)^{j-i}`.
pub fn n_matrix<T: PrimInt + Signed>(r: usize, p: u64) -> Result<Matrix<T>> {
    let m = m_matrix::<T>(r, p)?;
    let minus_p = -scalar::<T>(p)?;
    let mut n = Matrix::identity(r);
    for i in 0..r {
        let mut e = T::one();
        for j in i + 1..r {
            e = e
                .checked_mul(&minus_p)
                .ok_or_else(|| Error::Overflow(format!("(-{p})^{} in N^(p)", j - i)))?;
            n[(i, j)] = e;
        }
    }
    let prod = m
        .checked_mul(&n)
        .ok_or_else(|| Error::Overflow("M^(p)·N^(p)".into()))?;
    if !prod.is_identity() {
        return Err(Error::Invariant(format!("M^({p})·N^({p}) ≠ I in rank {r}")));
    }
    Ok(n)
}

fn check_phi_domain(r: usize, p: u64) -> Result<()> {
    if r < 2 || p < 2 {
        return Err(Error::Domain(format!("φ_p needs r ≥ 2 and p ≥ 2, got r = {r}, p = {p}")));
    }
    Ok(())
}

/// `|a_i φ_p^-1|` for `i = 1..r`: `L_r = 1`, `L_i = 1 + p L_{i+1}`.
pub fn phi_p_inverse_lengths(r: usize, p: u64) -> Result<Vec<u64>> {
    check_phi_domain(r, p)?;
    let mut lengths = vec![1u64; r];
    for i in (0..r - 1).rev() {
        lengths[i] = p
            .checked_mul(lengths[i + 1])
            .and_then(|x| x.checked_add(1))
            .ok_or_else(|| Error::Overflow(format!("|a_{}φ_p⁻¹| for r = {r}, p = {p}", i + 1)))?;
    }
    let total: u128 = lengths.iter().map(|&l| l as u128).sum();
    if total >= 2 * lengths[0] as u128 {
        return Err(Error::Invariant(format!("Σ L_i = {total} ≥ 2 L_1 for r = {r}, p = {p}")));
    }
    Ok(lengths)
}

pub fn phi_p(r: usize, p: u64) -> Result<Automorphism> {
    phi_p_with_budget(r, p, DEFAULT_LETTER_BUDGET)
}

/// `φ_p` with `a_i φ_p^-1 = a_i (a_{i+1} φ_p^-1)^{-p}`; fails with
/// [`Error::BudgetExceeded`] when the inverse would exceed `budget` letters.
pub fn phi_p_with_budget(r: usize, p: u64, budget: usize) -> Result<Automorphism> {
    let lengths = phi_p_inverse_lengths(r, p)?;
    let needed: u128 = lengths.iter().map(|&l| l as u128).sum();
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let e = p as i64;
    let forward = Endomorphism::new(
        (0..r)
            .map(|i| {
                let mut w = Word::generator(r, i);
                if i + 1 < r {
                    w = w.multiply(&Word::generator(r, i + 1).pow(e)).expect("same rank");
                }
                w
            })
            .collect(),
    )?;
    let mut inv = vec![Word::generator(r, r - 1); r];
    for i in (0..r - 1).rev() {
        inv[i] = Word::generator(r, i).multiply(&inv[i + 1].pow(-e))?;
    }
    for (i, w) in inv.iter().enumerate() {
        if w.len() as u64 != lengths[i] {
            return Err(Error::Invariant(format!("|a_{}φ_p⁻¹| = {} ≠ {}", i + 1, w.len(), lengths[i])));
        }
    }
    let phi = Automorphism::from_verified_pair(forward, Endomorphism::new(inv)?)?;
    if phi.forward().abelianization_matrix() != m_matrix::<i64>(r, p)? {
        return Err(Error::Invariant(format!("φ_{p}^ab ≠ M^({p}) in rank {r}")));
    }
    Ok(phi)
}

/// `‖φ_p‖_1`, `‖φ_p^-1‖_1` and the abelian bound `‖φ_p^-1‖_1 ≥ ‖N^(p)‖_1 ≥ p^{r-1}`.
pub fn phi_p_report(r: usize, p: u64) -> Result<FamilyReport> {
    let lengths = phi_p_inverse_lengths(r, p)?;
    let inverse: u128 = lengths.iter().map(|&l| l as u128).sum();
    let forward = (r as u128) + (r as u128 - 1) * p as u128;
    let n_norm = n_matrix::<i128>(r, p).map(|n| n.norm1() as u128);
    let pow = (p as u128).checked_pow(r as u32 - 1);
    let (materialized, forward_norm, inverse_norm) = match phi_p(r, p) {
        Ok(phi) => (true, phi.norm1() as u128, phi.inverse_norm1() as u128),
        Err(Error::BudgetExceeded { .. }) => (false, forward, inverse),
        Err(e) => return Err(e),
    };
    let mut comparisons = vec![
        Comparison::eq("‖φ_p‖₁ = r+(r−1)p", forward_norm, forward),
        Comparison::eq("‖φ_p⁻¹‖₁ = ΣL_i", inverse_norm, inverse),
        Comparison::lt("‖φ_p⁻¹‖₁ < 2|a₁φ_p⁻¹|", inverse_norm, 2 * lengths[0] as u128),
    ];
    if let Ok(n) = n_norm {
        comparisons.push(Comparison::ge("‖φ_p⁻¹‖₁ ≥ ‖N^(p)‖₁", inverse_norm, n));
    }
    if let Some(pow) = pow {
        comparisons.push(Comparison::ge("‖φ_p⁻¹‖₁ ≥ p^(r−1)", inverse_norm, pow));
    }
    Ok(FamilyReport::new(
        "phi-p",
        vec![("r", r as u64), ("p", p)],
        forward_norm,
        inverse_norm,
        materialized,
        comparisons,
    ))
}

/// `ψ_p = φ_p λ_{a_1^p}`.
pub fn psi_p(r: usize, p: u64) -> Result<Automorphism> {
    check_psi_domain(r, p)?;
    let phi = phi_p(r, p)?;
    phi.compose(&Automorphism::inner(&Word::generator(r, 0).pow(p as i64)))
}

fn check_psi_domain(r: usize, p: u64) -> Result<()> {
    if r < 3 || p < r as u64 {
        return Err(Error::Domain(format!("ψ_p needs r ≥ 3 and p ≥ r, got r = {r}, p = {p}")));
    }
    Ok(())
}

/// Exact `‖ψ_p^-1‖_1` from the inverse lengths of `φ_p`.
///
/// With `w = a_1 φ_p^-1 = a_1 X^-p`, `X = a_2 φ_p^-1`, the image of `a_2` is
/// `w^{p-1} a_1 X a_1^-1 w^{-(p-1)}` and every other product
/// `w^p (a_i φ_p^-1) w^-p` (`i ≥ 3`) is reduced as written.
pub fn psi_p_inverse_norm(r: usize, p: u64) -> Result<u128> {
    check_psi_domain(r, p)?;
    let l: Vec<u128> = phi_p_inverse_lengths(r, p)?.into_iter().map(u128::from).collect();
    let p = p as u128;
    let overflow = || Error::Overflow(format!("‖ψ_p⁻¹‖₁ for r = {r}, p = {p}"));
    let mut total = l[0]
        .checked_add(2 * (p - 1) * l[0])
        .and_then(|t| t.checked_add(2 + l[1]))
        .ok_or_else(overflow)?;
    for &li in &l[2..] {
        total = (2 * p)
            .checked_mul(l[0])
            .and_then(|x| x.checked_add(li))
            .and_then(|x| total.checked_add(x))
            .ok_or_else(overflow)?;
    }
    Ok(total)
}

/// `‖ψ_p‖_1 ≤ 3rp` and `‖ψ_p^-1‖_1 > (r-2)p^r`, with the inverse norm taken
/// from materialized words when they fit the default budget.
pub fn psi_p_family(r: usize, p: u64) -> Result<FamilyReport> {
    check_psi_domain(r, p)?;
    let exact = psi_p_inverse_norm(r, p)?;
    let pu = p as u128;
    let ru = r as u128;
    // |a_1^{-p}(a_i φ_p)a_1^p|: 3p-1 for i = 1, 3p+1 for 1 < i < r, 2p+1 for i = r
    let forward_closed = (3 * pu - 1) + (ru - 2) * (3 * pu + 1) + (2 * pu + 1);
    let (materialized, forward_norm, inverse_norm) = match psi_p(r, p) {
        Ok(psi) => (true, psi.norm1() as u128, psi.inverse_norm1() as u128),
        Err(Error::BudgetExceeded { .. }) => (false, forward_closed, exact),
        Err(e) => return Err(e),
    };
    let lower = (ru - 2)
        .checked_mul(pu.checked_pow(r as u32).ok_or_else(|| Error::Overflow(format!("{p}^{r}")))?)
        .ok_or_else(|| Error::Overflow(format!("(r−2)p^r for r = {r}, p = {p}")))?;
    let comparisons = vec![
        Comparison::eq("‖ψ_p‖₁ = 3rp−p+r−2", forward_norm, forward_closed),
        Comparison::eq("‖ψ_p⁻¹‖₁ = length formula", inverse_norm, exact),
        Comparison::le("‖ψ_p‖₁ ≤ 3rp", forward_norm, 3 * ru * pu),
        Comparison::gt("‖ψ_p⁻¹‖₁ > (r−2)p^r", inverse_norm, lower),
    ];
    Ok(FamilyReport::new(
        "psi-p",
        vec![("r", r as u64), ("p", p)],
        forward_norm,
        inverse_norm,
        materialized,
        comparisons,
    ))
}

/// Abelianization matrix of `φ_p` computed from the words, for comparison
/// with [`m_matrix`].
pub fn phi_p_abelianization(r: usize, p: u64) -> Result<(IntMatrix, IntMatrix)> {
    let phi = phi_p(r, p)?;
    Ok((phi.forward().abelianization_matrix(), phi.inverse().abelianization_matrix()))
}
