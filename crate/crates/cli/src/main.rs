mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use autnorm::enumerate::{self, random_automorphism, Cache, GapKind, GapTable, TableOptions};
use autnorm::families::{phi_p_report, psi_k_report, psi_p_family, FamilyReport};
use autnorm::nielsen::{invert, is_basis};
use autnorm::outer::{outer_norm, outer_norm_bruteforce};
use autnorm::rank2::full_decompose;
use autnorm::words::DEFAULT_LETTER_BUDGET;
use autnorm::{Endomorphism, Error, PNorm, Word};

use output::{Format, Report};
use verify::{Suite, SuiteOptions};

const EXIT_USER: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;

#[derive(Parser, Serialize)]
#[command(name = "autnorm", version, about = "Norms and inversion gaps of free-group automorphisms")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Largest number of letters a materialized word may hold.
    #[arg(long, global = true, default_value_t = DEFAULT_LETTER_BUDGET)]
    budget: usize,
    /// Worker threads for table computations (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    /// Table cache directory (default: $AUTNORM_CACHE_DIR or ./autnorm-cache).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Serialize)]
struct Images {
    /// Generator images, separated by commas or semicolons.
    #[arg(long)]
    images: String,
    /// Rank of the free group (default: number of images).
    #[arg(long)]
    rank: Option<usize>,
}

#[derive(clap::Args, Serialize)]
struct TableArgs {
    #[arg(long)]
    rank: usize,
    #[arg(long)]
    max_n: usize,
    /// Compute beyond the default feasibility limits.
    #[arg(long)]
    allow_infeasible: bool,
    /// Neither read nor write the table cache.
    #[arg(long)]
    no_cache: bool,
}

#[derive(Subcommand, Serialize)]
enum Command {
    /// Freely reduce a word.
    Reduce {
        word: String,
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Apply an endomorphism to a word.
    Apply {
        #[command(flatten)]
        map: Images,
        word: String,
    },
    /// Compose two endomorphisms, FIRST applied first.
    Compose {
        #[arg(long)]
        first: String,
        #[arg(long)]
        then: String,
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Invert an automorphism by Nielsen reduction.
    Invert {
        #[command(flatten)]
        map: Images,
    },
    /// p-norm of an endomorphism.
    Norm {
        #[command(flatten)]
        map: Images,
        #[arg(long, default_value = "1", value_parser = parse_p)]
        p: PNorm,
    },
    /// Outer p-norm of the class of an endomorphism.
    OuterNorm {
        #[command(flatten)]
        map: Images,
        #[arg(long, default_value = "1", value_parser = parse_p)]
        p: PNorm,
        /// Also minimize exhaustively over conjugators of at most this length.
        #[arg(long)]
        brute_force_radius: Option<usize>,
    },
    /// Decide whether the images form a basis.
    IsAutomorphism {
        #[command(flatten)]
        map: Images,
    },
    /// Rank-2 decomposition φ = ψ₁ θ ψ₂ λ_g with θ positive.
    Decompose2 {
        #[command(flatten)]
        map: Images,
    },
    /// Norm reports for the explicit families.
    Family {
        #[command(subcommand)]
        family: Family,
    },
    /// Exact α_r(n) table.
    Alpha {
        #[command(flatten)]
        table: TableArgs,
    },
    /// Exact β_r(n) table.
    Beta {
        #[command(flatten)]
        table: TableArgs,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 10)]
        max_n: usize,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sample random automorphisms.
    Random {
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        samples: usize,
    },
}

#[derive(Subcommand, Serialize)]
enum Family {
    PsiK {
        #[arg(long)]
        k: u32,
    },
    PhiP {
        #[arg(long, default_value_t = 3)]
        rank: usize,
        #[arg(long)]
        p: u64,
    },
    PsiP {
        #[arg(long, default_value_t = 3)]
        rank: usize,
        #[arg(long)]
        p: u64,
    },
}

fn parse_p(s: &str) -> Result<PNorm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Command failures, mapped to exit codes in `main`.
enum Failure {
    Lib(Error),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Lib(Error::Io(e))
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Infeasible { .. } => EXIT_INFEASIBLE,
        Error::Invariant(_) => EXIT_VERIFY,
        _ => EXIT_USER,
    }
}

fn hint(e: &Error) -> Option<&'static str> {
    match e {
        Error::Infeasible { .. } => Some("pass --allow-infeasible to compute anyway"),
        Error::BudgetExceeded { .. } => Some("raise --budget or use a smaller instance"),
        Error::RankMismatch { .. } => Some("check --rank against the letters used"),
        Error::NotAnAutomorphism(_) => Some("the images do not form a basis"),
        _ => None,
    }
}

fn endomorphism(map: &Images) -> Result<Endomorphism, Error> {
    let parts: Vec<&str> = map.images.split([',', ';']).map(str::trim).collect();
    Endomorphism::parse(map.rank.unwrap_or(parts.len()), &parts)
}

fn images_json(e: &Endomorphism) -> Vec<String> {
    e.images().iter().map(Word::to_string).collect()
}

fn family_report(rep: FamilyReport) -> Report {
    let params: Vec<String> = rep.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let mut report = Report::new(
        vec!["family", "parameters", "forward_norm", "inverse_norm", "materialized", "passed"],
        serde_json::to_value(&rep).expect("serializable"),
    )
    .row(&[
        rep.family.clone(),
        params.join(" "),
        rep.forward_norm.to_string(),
        rep.inverse_norm.to_string(),
        rep.materialized.to_string(),
        rep.passed.to_string(),
    ]);
    for c in &rep.comparisons {
        report.push(&[
            String::new(),
            c.name.clone(),
            c.lhs.to_string(),
            c.rhs.to_string(),
            String::new(),
            c.satisfied.to_string(),
        ]);
    }
    report
}

fn table_report(table: &GapTable) -> Report {
    let mut report = Report::new(
        vec!["n", "value", "witness", "inverse", "examined", "millis"],
        serde_json::to_value(table).expect("serializable"),
    );
    for row in &table.rows {
        report.push(&[
            row.n.to_string(),
            row.value.to_string(),
            row.witness.forward().to_text(),
            row.witness.inverse().to_text(),
            row.examined.to_string(),
            row.millis.to_string(),
        ]);
    }
    report
}

fn cache(cli: &Cli) -> Cache {
    match &cli.cache_dir {
        Some(dir) => Cache::new(dir),
        None => Cache::from_env_or("autnorm-cache"),
    }
}

fn gap_table(cli: &Cli, kind: GapKind, args: &TableArgs) -> Result<Report, Failure> {
    let opts = TableOptions {
        workers: cli.workers,
        allow_infeasible: args.allow_infeasible,
    };
    let table = if args.no_cache {
        enumerate::compute_table(kind, args.rank, args.max_n, &opts, None, |_| Ok(()))?
    } else {
        cache(cli).table(kind, args.rank, args.max_n, &opts)?
    };
    Ok(table_report(&table))
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let report = match &cli.command {
        Command::Reduce { word, rank } => {
            let w = match rank {
                Some(r) => Word::parse(word, *r)?,
                None => Word::parse_infer(word)?,
            };
            Report::new(vec!["word", "length"], json!({ "word": w.to_string(), "length": w.len() }))
                .row(&[w.to_string(), w.len().to_string()])
        }
        Command::Apply { map, word } => {
            let phi = endomorphism(map)?;
            let w = Word::parse(word, phi.rank())?;
            let img = phi.apply_with_budget(&w, cli.budget)?;
            Report::new(vec!["image", "length"], json!({ "image": img.to_string(), "length": img.len() }))
                .row(&[img.to_string(), img.len().to_string()])
        }
        Command::Compose { first, then, rank } => {
            let f = endomorphism(&Images { images: first.clone(), rank: *rank })?;
            let t = endomorphism(&Images { images: then.clone(), rank: *rank })?;
            let c = f.compose(&t)?;
            Report::new(vec!["images", "norm1"], serde_json::to_value(&c).expect("serializable"))
                .row(&[c.to_text(), c.norm1().to_string()])
        }
        Command::Invert { map } => {
            let aut = invert(&endomorphism(map)?)?;
            Report::new(
                vec!["images", "inverse_images", "norm1", "inverse_norm1"],
                json!({
                    "rank": aut.rank(),
                    "images": images_json(aut.forward()),
                    "inverse_images": images_json(aut.inverse()),
                    "norm1": aut.norm1(),
                    "inverse_norm1": aut.inverse_norm1(),
                }),
            )
            .row(&[
                aut.forward().to_text(),
                aut.inverse().to_text(),
                aut.norm1().to_string(),
                aut.inverse_norm1().to_string(),
            ])
        }
        Command::Norm { map, p } => {
            let phi = endomorphism(map)?;
            let v = phi.norm(*p);
            Report::new(vec!["p", "norm"], json!({ "p": p.to_string(), "norm": v })).row(&[p.to_string(), v.to_string()])
        }
        Command::OuterNorm { map, p, brute_force_radius } => {
            let phi = endomorphism(map)?;
            let res = outer_norm(&phi, *p)?;
            let mut json = serde_json::to_value(&res).expect("serializable");
            if let Some(radius) = brute_force_radius {
                let brute = outer_norm_bruteforce(&phi, *p, *radius)?;
                json["bruteforce_value"] = json!(brute.value);
                if brute.value != res.value {
                    return Err(Failure::Verification(format!(
                        "descent value {} differs from brute-force value {}",
                        res.value, brute.value
                    )));
                }
            }
            let text: Vec<String> = res.images.iter().map(Word::to_string).collect();
            Report::new(vec!["p", "value", "minimizer", "images"], json).row(&[
                p.to_string(),
                res.value.to_string(),
                res.minimizer.to_string(),
                text.join(";"),
            ])
        }
        Command::IsAutomorphism { map } => {
            let phi = endomorphism(map)?;
            let yes = is_basis(phi.images())?;
            Report::new(vec!["automorphism"], json!({ "automorphism": yes })).row(&[yes])
        }
        Command::Decompose2 { map } => {
            let aut = invert(&endomorphism(map)?)?;
            let d = full_decompose(&aut)?;
            Report::new(vec!["pre", "core", "post", "conjugator"], serde_json::to_value(&d).expect("serializable")).row(&[
                d.pre.forward().to_text(),
                d.core.forward().to_text(),
                d.post.forward().to_text(),
                d.conjugator.to_string(),
            ])
        }
        Command::Family { family } => {
            let rep = match family {
                Family::PsiK { k } => psi_k_report(*k)?,
                Family::PhiP { rank, p } => phi_p_report(*rank, *p)?,
                Family::PsiP { rank, p } => psi_p_family(*rank, *p)?,
            };
            let passed = rep.passed;
            let report = family_report(rep);
            if !passed {
                report.print(cli.format)?;
                return Err(Failure::Verification("family report has failing comparisons".into()));
            }
            report
        }
        Command::Alpha { table } => gap_table(cli, GapKind::Alpha, table)?,
        Command::Beta { table } => gap_table(cli, GapKind::Beta, table)?,
        Command::Verify { suite, max_n, samples, seed } => {
            let opts = SuiteOptions {
                max_n: *max_n,
                samples: *samples,
                seed: *seed,
                workers: cli.workers,
            };
            let checks = verify::run(*suite, &opts)?;
            let failures: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
            let mut report = Report::new(
                vec!["check", "passed", "detail"],
                json!({ "suite": suite, "passed": failures.is_empty(), "checks": checks, "failures": failures }),
            );
            for c in &checks {
                report.push(&[c.name.clone(), c.passed.to_string(), c.detail.clone()]);
            }
            if !failures.is_empty() {
                report.print(cli.format)?;
                return Err(Failure::Verification(format!("{} of {} checks failed", failures.len(), checks.len())));
            }
            report
        }
        Command::Random { rank, steps, seed, samples } => {
            let mut report = Report::new(vec!["seed", "images", "inverse_images", "norm1", "inverse_norm1"], json!([]));
            let mut items = Vec::new();
            for s in 0..*samples as u64 {
                let aut = random_automorphism(*rank, *steps, seed + s)?;
                report.push(&[
                    (seed + s).to_string(),
                    aut.forward().to_text(),
                    aut.inverse().to_text(),
                    aut.norm1().to_string(),
                    aut.inverse_norm1().to_string(),
                ]);
                items.push(json!({
                    "seed": seed + s,
                    "images": images_json(aut.forward()),
                    "inverse_images": images_json(aut.inverse()),
                    "norm1": aut.norm1(),
                    "inverse_norm1": aut.inverse_norm1(),
                }));
            }
            report.json = json!(items);
            report
        }
    };
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut config = serde_json::to_value(&cli).expect("serializable");
    config["effective_cache_dir"] = json!(cache(&cli).dir());
    eprintln!("config: {config}");
    match run(&cli).and_then(|r| r.print(cli.format).map_err(Failure::from)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            if let Some(h) = hint(&e) {
                eprintln!("hint: {h}");
            }
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(EXIT_VERIFY)
        }
    }
}
