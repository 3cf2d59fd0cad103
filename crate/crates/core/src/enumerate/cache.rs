//! On-disk table cache: one CSV per (kind, rank) with columns
//! `n,value,witness,examined,millis`, and a JSON sidecar with full witnesses.
//! Rows are only ever appended; cached witnesses are re-verified on load.

use std::fs::{self, File, OpenOptions};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{compute_table, measure, GapKind, GapRow, GapTable, TableOptions};
use crate::error::{Error, Result};
use crate::morphisms::Endomorphism;
use crate::nielsen::invert;

/// Environment variable overriding the cache directory.
pub const CACHE_DIR_ENV: &str = "AUTNORM_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct CsvRow {
    n: usize,
    value: u64,
    witness: String,
    examined: u64,
    millis: u64,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    tool_version: &'static str,
    #[serde(flatten)]
    table: &'a GapTable,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Cache {
        Cache { dir: dir.into() }
    }

    /// `$AUTNORM_CACHE_DIR` if set, else `fallback`.
    pub fn from_env_or(fallback: impl Into<PathBuf>) -> Cache {
        match std::env::var_os(CACHE_DIR_ENV) {
            Some(dir) if !dir.is_empty() => Cache::new(dir),
            _ => Cache::new(fallback),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn csv_path(&self, kind: GapKind, rank: usize) -> PathBuf {
        self.dir.join(format!("{}_r{rank}.csv", kind.name()))
    }

    fn json_path(&self, kind: GapKind, rank: usize) -> PathBuf {
        self.dir.join(format!("{}_r{rank}.json", kind.name()))
    }

    /// Cached rows, each witness re-inverted and re-measured.
    pub fn load(&self, kind: GapKind, rank: usize) -> Result<Option<GapTable>> {
        let path = self.csv_path(kind, rank);
        if !path.exists() {
            return Ok(None);
        }
        let mut reader = csv::Reader::from_path(&path)?;
        let mut rows: Vec<GapRow> = Vec::new();
        for rec in reader.deserialize() {
            let rec: CsvRow = rec?;
            let images: Vec<&str> = rec.witness.split(';').collect();
            let witness = invert(&Endomorphism::parse(rank, &images)?)?;
            let measured = measure(kind, &witness)?;
            let expected_n = rows.last().map_or(rank, |r| r.n + 1);
            let consistent = rec.n == expected_n
                && measured.map_or(false, |(level, value)| level <= rec.n && value == rec.value);
            if !consistent {
                return Err(Error::Invariant(format!(
                    "cache row n = {} in {} does not verify",
                    rec.n,
                    path.display()
                )));
            }
            rows.push(GapRow {
                n: rec.n,
                value: rec.value,
                witness,
                examined: rec.examined,
                millis: rec.millis,
            });
        }
        Ok(Some(GapTable { kind, rank, rows }))
    }

    fn append(&self, kind: GapKind, rank: usize, row: &GapRow) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let path = self.csv_path(kind, rank);
        let fresh = !path.exists();
        let file = OpenOptions::new().create(true).append(true).open(&path)?;
        let mut w = csv::WriterBuilder::new().has_headers(fresh).from_writer(file);
        w.serialize(CsvRow {
            n: row.n,
            value: row.value,
            witness: row.witness.forward().to_text(),
            examined: row.examined,
            millis: row.millis,
        })?;
        w.flush()?;
        Ok(())
    }

    fn write_sidecar(&self, table: &GapTable) -> Result<()> {
        let file = File::create(self.json_path(table.kind, table.rank))?;
        serde_json::to_writer_pretty(
            file,
            &Sidecar {
                tool_version: env!("CARGO_PKG_VERSION"),
                table,
            },
        )?;
        Ok(())
    }

    /// Reads cached rows, computes only the missing ones and appends them.
    pub fn table(&self, kind: GapKind, rank: usize, max_n: usize, opts: &TableOptions) -> Result<GapTable> {
        let cached = self.load(kind, rank)?;
        let cached_max = cached.as_ref().and_then(GapTable::max_n);
        let table = compute_table(kind, rank, max_n, opts, cached, |row| self.append(kind, rank, row))?;
        if table.max_n() > cached_max {
            self.write_sidecar(&table)?;
        }
        Ok(table)
    }
}
