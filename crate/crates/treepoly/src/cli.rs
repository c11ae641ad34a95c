//! Command-line front end.
//!
//! Exit statuses: 0 success, 1 verification failure (including count
//! mismatches and coefficient overflow during enumeration), 2 usage error,
//! 3 store or IO error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use treepoly_core::{
    argmax_lowest, brute_force_polynomial, decode, free_code, independence_polynomial, monotonic,
    poly, rooted_code, MemoCache, Tree,
};

use crate::analysis::{self, AnalysisError, Scope};
use crate::format::join;
use crate::pipeline::{self, PipelineError, RunOptions, DEFAULT_HARD_CAP};
use crate::store::{Store, StoreError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_STORE: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "treepoly",
    version,
    about = "Enumerate trees and check their independence polynomials"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct StoreArg {
    /// Store directory.
    #[arg(long, env = "TREEPOLY_STORE")]
    pub store: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build (or resume) the store up to --max-n vertices.
    Enumerate {
        #[command(flatten)]
        store: StoreArg,
        #[arg(long, default_value_t = 20)]
        max_n: usize,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_HARD_CAP)]
        hard_cap: usize,
        /// Discard existing levels and start over.
        #[arg(long)]
        no_resume: bool,
    },
    /// Print the code, polynomial and predicates of one tree (edge-list file).
    Poly { file: PathBuf },
    /// Print the canonical code of one tree (edge-list file).
    Canon { file: PathBuf },
    /// Audit a store: checksums, flags, and the subset-enumeration oracle.
    Verify {
        #[command(flatten)]
        store: StoreArg,
        #[arg(long, default_value_t = 12)]
        oracle_max_n: usize,
    },
    /// Write reports over sealed levels.
    Analyze {
        #[command(flatten)]
        store: StoreArg,
        /// flags | histogram | duplicates | special | all
        #[arg(long, default_value = "all")]
        report: String,
        #[arg(long)]
        min_n: Option<usize>,
        #[arg(long)]
        max_n: Option<usize>,
        /// Shorthand for --min-n N --max-n N.
        #[arg(long, conflicts_with_all = ["min_n", "max_n"])]
        only_n: Option<usize>,
    },
}

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    ExitCode::from(execute(cli.command, &mut out, &mut err))
}

/// Runs one command, writing its output to `out` and diagnostics to `err`.
pub fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let status = match command {
        Command::Enumerate {
            store,
            max_n,
            workers,
            hard_cap,
            no_resume,
        } => {
            let workers = workers.unwrap_or_else(|| {
                std::thread::available_parallelism()
                    .map(|n| n.get())
                    .unwrap_or(1)
            });
            cmd_enumerate(&store.store, max_n, workers, hard_cap, !no_resume, out, err)
        }
        Command::Poly { file } => cmd_poly(&file, out, err),
        Command::Canon { file } => cmd_canon(&file, out, err),
        Command::Verify {
            store,
            oracle_max_n,
        } => cmd_verify(&store.store, oracle_max_n, out, err),
        Command::Analyze {
            store,
            report,
            min_n,
            max_n,
            only_n,
        } => {
            let (min_n, max_n) = match only_n {
                Some(n) => (Some(n), Some(n)),
                None => (min_n, max_n),
            };
            cmd_analyze(&store.store, &report, min_n, max_n, out, err)
        }
    };
    let _ = out.flush();
    status
}

fn store_status(e: &StoreError) -> u8 {
    match e {
        StoreError::CountMismatch { .. } => EXIT_VERIFY,
        _ => EXIT_STORE,
    }
}

fn pipeline_status(e: &PipelineError) -> u8 {
    match e {
        PipelineError::Store(e) => store_status(e),
        PipelineError::CountMismatch { .. } | PipelineError::Overflow(_) => EXIT_VERIFY,
        PipelineError::AboveHardCap { .. } | PipelineError::NoWorkers => EXIT_USAGE,
        _ => EXIT_STORE,
    }
}

fn analysis_status(e: &AnalysisError) -> u8 {
    match e {
        AnalysisError::Store(e) => store_status(e),
        AnalysisError::UnknownReport(_) | AnalysisError::EmptyScope { .. } => EXIT_USAGE,
        AnalysisError::Unsealed(_) | AnalysisError::Write { .. } => EXIT_STORE,
        AnalysisError::MixedSizes { .. } => EXIT_VERIFY,
    }
}

pub fn cmd_enumerate(
    store_dir: &Path,
    max_n: usize,
    workers: usize,
    hard_cap: usize,
    resume: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> u8 {
    if max_n > hard_cap {
        let _ = writeln!(
            err,
            "error: --max-n {max_n} exceeds the hard cap {hard_cap} (raise --hard-cap)"
        );
        return EXIT_USAGE;
    }
    let store = match Store::open(store_dir) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_STORE;
        }
    };
    if !resume {
        if let Err(e) = store.truncate_from(0) {
            let _ = writeln!(err, "error: {e}");
            return EXIT_STORE;
        }
    }
    let options = RunOptions {
        max_n,
        workers,
        hard_cap,
        progress: true,
    };
    let summary = match pipeline::run(&options, &store) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return pipeline_status(&e);
        }
    };
    for level in &summary.levels {
        let state = if level.built { "built" } else { "sealed" };
        let _ = writeln!(out, "n={}\t{}\t{}", level.n, level.count, state);
    }
    if summary.all_skipped() {
        let _ = writeln!(out, "all levels sealed");
    }
    let _ = writeln!(
        out,
        "total {} (+P0 = {}), new records {}",
        summary.total_without_empty(),
        summary.total_with_empty(),
        summary.new_records()
    );
    EXIT_OK
}

fn read_tree(file: &Path, err: &mut dyn Write) -> Result<Tree, u8> {
    let text = fs::read_to_string(file).map_err(|e| {
        let _ = writeln!(err, "error: {}: {e}", file.display());
        EXIT_STORE
    })?;
    Tree::parse_edge_list(&text).map_err(|e| {
        let _ = writeln!(err, "error: {}: {e}", file.display());
        EXIT_USAGE
    })
}

pub fn cmd_poly(file: &Path, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let tree = match read_tree(file, err) {
        Ok(t) => t,
        Err(status) => return status,
    };
    let p = match independence_polynomial(&tree, &MemoCache::new()) {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_VERIFY;
        }
    };
    let s = p.coeffs();
    let flag = |b: bool| u8::from(b);
    let _ = writeln!(out, "uid: {}", free_code(&tree));
    let _ = writeln!(out, "n: {}", tree.len());
    let _ = writeln!(out, "degrees: {}", join(&tree.degree_sequence()));
    let _ = writeln!(out, "coeffs: {p}");
    let _ = writeln!(out, "unimodal: {}", flag(poly::is_unimodal(s)));
    let _ = writeln!(out, "log_concave: {}", flag(poly::is_log_concave(s)));
    let _ = writeln!(out, "symmetric: {}", flag(poly::is_symmetric(s)));
    let _ = writeln!(out, "fibonacci: {}", flag(poly::is_fibonacci(s)));
    let _ = writeln!(out, "monotonic: {}", monotonic(s).as_str());
    let _ = writeln!(out, "argmax: {}", argmax_lowest(s));
    EXIT_OK
}

pub fn cmd_canon(file: &Path, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    match read_tree(file, err) {
        Ok(tree) => {
            let _ = writeln!(out, "{}", free_code(&tree));
            EXIT_OK
        }
        Err(status) => status,
    }
}

/// One problem found by [`audit_store`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrepancy {
    pub n: usize,
    /// Empty for level-wide problems such as a checksum mismatch.
    pub uid: String,
    pub reason: String,
}

/// Re-checks every sealed level: file checksum, record invariants and flags,
/// canonical form of each uid, and, up to `oracle_max_n` vertices, the
/// stored coefficients against subset enumeration.
pub fn audit_store(store: &Store, oracle_max_n: usize) -> Result<Vec<Discrepancy>, StoreError> {
    let mut found = Vec::new();
    let Some(top) = store.max_sealed()? else {
        found.push(Discrepancy {
            n: 0,
            uid: String::new(),
            reason: "store has no sealed levels".into(),
        });
        return Ok(found);
    };
    for n in 0..=top {
        if store.verify_checksum(n)? != Some(true) {
            found.push(Discrepancy {
                n,
                uid: String::new(),
                reason: "level file checksum mismatch".into(),
            });
        }
        for rec in store.fetch_level(n)? {
            let uid = rec.uid.to_string();
            let mut flag = |reason: String| {
                found.push(Discrepancy {
                    n,
                    uid: uid.clone(),
                    reason,
                })
            };
            if rec.n != n {
                flag(format!("record in level {n} claims n = {}", rec.n));
            }
            if let Err(e) = rec.validate() {
                flag(e.to_string());
            }
            if n == 0 {
                continue;
            }
            let tree = match decode(&rec.uid) {
                Ok(t) => t,
                Err(e) => {
                    flag(format!("uid does not decode: {e}"));
                    continue;
                }
            };
            if rooted_code(&tree).ok().as_ref() != Some(&rec.uid) || free_code(&tree) != rec.uid {
                flag("uid is not in canonical form".into());
            }
            if tree.degree_sequence() != rec.degrees {
                flag("degree sequence does not match the uid".into());
            }
            if n <= oracle_max_n {
                match brute_force_polynomial(&tree) {
                    Ok(p) if p == rec.poly => {}
                    Ok(p) => flag(format!(
                        "coefficients {} but subset enumeration gives {p}",
                        rec.poly
                    )),
                    Err(e) => flag(e.to_string()),
                }
            }
        }
    }
    Ok(found)
}

pub fn cmd_verify(
    store_dir: &Path,
    oracle_max_n: usize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> u8 {
    let store = match Store::open(store_dir) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_STORE;
        }
    };
    let mut discrepancies = match audit_store(&store, oracle_max_n) {
        Ok(d) => d,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return store_status(&e);
        }
    };
    if let Ok(Some(top)) = store.max_sealed() {
        match analysis::verify_flags(&store, Scope { lo: 0, hi: top }) {
            Ok(counts) => {
                let _ = writeln!(out, "records: {} (n <= {top})", counts.records);
                let _ = writeln!(
                    out,
                    "non-unimodal: {}, non-log-concave: {}",
                    counts.non_unimodal, counts.non_log_concave
                );
                if counts.non_unimodal + counts.non_log_concave > 0 {
                    discrepancies.push(Discrepancy {
                        n: top,
                        uid: String::new(),
                        reason: "store contains non-unimodal or non-log-concave records".into(),
                    });
                }
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return analysis_status(&e);
            }
        }
    }
    if discrepancies.is_empty() {
        let _ = writeln!(
            out,
            "ok: no discrepancies (oracle checked up to n = {oracle_max_n})"
        );
        return EXIT_OK;
    }
    for d in &discrepancies {
        let _ = writeln!(err, "discrepancy: n={} uid={} {}", d.n, d.uid, d.reason);
    }
    let _ = writeln!(out, "FAILED: {} discrepancies", discrepancies.len());
    EXIT_VERIFY
}

pub fn cmd_analyze(
    store_dir: &Path,
    report: &str,
    min_n: Option<usize>,
    max_n: Option<usize>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> u8 {
    let store = match Store::open(store_dir) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_STORE;
        }
    };
    let top = match store.max_sealed() {
        Ok(Some(top)) => top,
        Ok(None) => {
            let _ = writeln!(err, "error: store has no sealed levels");
            return EXIT_STORE;
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_STORE;
        }
    };
    let names: Vec<&str> = if report == "all" {
        analysis::REPORT_NAMES.to_vec()
    } else {
        vec![report]
    };
    for name in names {
        let lo = min_n.unwrap_or_else(|| analysis::default_min_n(name));
        let hi = max_n.unwrap_or(top);
        let result =
            Scope::new(lo, hi).and_then(|scope| analysis::build_reports(&store, name, Some(scope)));
        let reports = match result {
            Ok(r) => r,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return analysis_status(&e);
            }
        };
        for r in reports {
            match r.write(&store) {
                Ok(path) => {
                    let _ = write!(out, "{}", r.to_table());
                    let _ = writeln!(out, "-> {}\n", path.display());
                }
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return analysis_status(&e);
                }
            }
        }
    }
    EXIT_OK
}
