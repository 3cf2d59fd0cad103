use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use autnorm::enumerate::{self, random_automorphism_with, random_delta_sequence, verify_bounds, TableOptions};
use autnorm::families::{m_matrix, n_matrix, phi_p_report, psi_k_report, psi_p_family};
use autnorm::nielsen::invert;
use autnorm::outer::{outer_norm, outer_norm_bruteforce};
use autnorm::rank2::{compose_delta, delta_decompose};
use autnorm::{IntMatrix, PNorm, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Rank2Bounds,
    Families,
    Invariants,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(out: &mut Vec<Check>, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
    out.push(Check {
        name: name.into(),
        passed,
        detail: detail.into(),
    });
}

pub struct SuiteOptions {
    pub max_n: usize,
    pub samples: usize,
    pub seed: u64,
    pub workers: usize,
}

pub fn run(suite: Suite, opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    match suite {
        Suite::Rank2Bounds => rank2_bounds(opts, &mut out)?,
        Suite::Families => families(&mut out)?,
        Suite::Invariants => invariants(opts, &mut out)?,
    }
    Ok(out)
}

fn rank2_bounds(opts: &SuiteOptions, out: &mut Vec<Check>) -> Result<()> {
    let table_opts = TableOptions {
        workers: opts.workers,
        allow_infeasible: false,
    };
    let alpha = enumerate::alpha(2, opts.max_n, &table_opts)?;
    let beta = enumerate::beta(2, opts.max_n, &table_opts)?;
    for table in [&alpha, &beta] {
        for c in verify_bounds(table)?.checks {
            check(out, format!("{} n={}: {}", table.kind.name(), c.n, c.name), c.satisfied, format!("{} vs {}", c.value, c.bound));
        }
    }
    for c in enumerate::check_beta_le_alpha(&alpha, &beta) {
        check(out, format!("n={}: {}", c.n, c.name), c.satisfied, format!("{} vs {}", c.value, c.bound));
    }
    Ok(())
}

fn families(out: &mut Vec<Check>) -> Result<()> {
    for k in 0..=20 {
        let rep = psi_k_report(k)?;
        check(out, format!("psi-k k={k}"), rep.passed, format!("({}, {})", rep.forward_norm, rep.inverse_norm));
    }
    for r in 2..=8 {
        for p in 0..=10u64 {
            let m: IntMatrix = m_matrix(r, p)?;
            let n: IntMatrix = n_matrix(r, p)?;
            let m_norm = (r as u64 + (r as u64 - 1) * p) as i64;
            let ok = (&m * &n).is_identity() && m.norm1() == m_norm && n.norm1() >= (p as i64).pow(r as u32 - 1);
            check(out, format!("M/N r={r} p={p}"), ok, format!("‖M‖₁={} ‖N‖₁={}", m.norm1(), n.norm1()));
        }
    }
    for r in 2..=5 {
        for p in 2..=8 {
            let rep = phi_p_report(r, p)?;
            check(out, format!("phi-p r={r} p={p}"), rep.passed, format!("({}, {})", rep.forward_norm, rep.inverse_norm));
        }
    }
    for r in 3..=4 {
        for p in r as u64..=6 {
            let rep = psi_p_family(r, p)?;
            check(out, format!("psi-p r={r} p={p}"), rep.passed, format!("({}, {})", rep.forward_norm, rep.inverse_norm));
        }
    }
    Ok(())
}

fn invariants(opts: &SuiteOptions, out: &mut Vec<Check>) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut fails = [0usize; 4];
    for _ in 0..opts.samples {
        let r = rng.gen_range(2..=5);
        let steps = rng.gen_range(0..=8);
        let phi = random_automorphism_with(r, steps, &mut rng)?;
        let theta = random_automorphism_with(r, steps, &mut rng)?;

        if invert(phi.forward())? != phi {
            fails[0] += 1;
        }
        let prod = phi.compose(&theta)?;
        if prod.norm1() > phi.norm1() * theta.norm1() || prod.inverse_norm1() > phi.inverse_norm1() * theta.inverse_norm1() {
            fails[1] += 1;
        }
        if r <= 3 && phi.forward().norm_inf() <= 6 {
            let radius = phi.forward().norm_inf() as usize + 2;
            let descent = outer_norm(phi.forward(), PNorm::One)?.value;
            if descent != outer_norm_bruteforce(phi.forward(), PNorm::One, radius)?.value {
                fails[2] += 1;
            }
        }
        let theta = compose_delta(&random_delta_sequence(25, &mut rng));
        if theta.norm1() != theta.inverse_norm1() || compose_delta(&delta_decompose(&theta)?) != theta {
            fails[3] += 1;
        }
    }
    let names = [
        "nielsen round trip",
        "submultiplicative norms",
        "outer descent = brute force",
        "positive inverse norm and Δ round trip",
    ];
    for (name, f) in names.iter().zip(fails) {
        check(out, *name, f == 0, format!("{f} failures in {} samples (seed {})", opts.samples, opts.seed));
    }
    Ok(())
}
