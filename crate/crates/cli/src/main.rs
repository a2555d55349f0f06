//! `tormono`: classify torus bundles over the circle from monodromy literals.
//!
//! Exit codes: 0 success (any verdict), 1 usage or expected-mismatch,
//! 2 parse error, 3 semantic error.

use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use tormono::batch::{run_batch, BatchOptions};
use tormono::bundles::{fiber_product, isomorphic, thicken, IsoResult, ThickenedBundle, TorusBundle};
use tormono::classify::{classify_decomposable, classify_stable, verify_certificate, Certificate};
use tormono::exactmat::IMat;
use tormono::monodromy3::StableBudget;
use tormono::oracle::{brute_block_split, brute_similarity, probe_stabilizers, random_slnz, SimilaritySearchReport};
use tormono::report::{describe_certificate, VerdictRecord};
use tormono::sweep::Execution;
use tormono::Error;

const DEFAULT_BOUND: u32 = 16;

#[derive(Parser)]
#[command(name = "tormono", version, about = "Decomposability of torus bundles over the circle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Common {
    /// lattice-coefficient bound for searches
    #[arg(long, default_value_t = DEFAULT_BOUND)]
    bound: u32,
    /// machine-readable output
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Decide (stable) decomposability of one monodromy, e.g. "1,1;0,1"
    Classify {
        #[arg(allow_hyphen_values = true)]
        matrix: String,
        #[arg(long)]
        stable: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Decide whether two bundles are isomorphic
    Iso {
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
        #[command(flatten)]
        common: Common,
    },
    /// Fiber product of bundles: the block sum of their monodromies
    Product {
        #[arg(required = true, allow_hyphen_values = true)]
        matrices: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// View a bundle over the torus T^m, "literal@m" or literal with --base
    Thicken {
        #[arg(allow_hyphen_values = true)]
        bundle: String,
        #[arg(long)]
        base: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Print and re-verify every certificate for a monodromy
    Witness {
        #[arg(allow_hyphen_values = true)]
        matrix: String,
        #[command(flatten)]
        common: Common,
    },
    /// Deterministic random SL(n, Z) matrices, one literal per line
    Gen {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Classify a JSON Lines corpus of {"id", "matrix", "expected"?}
    Batch {
        path: std::path::PathBuf,
        #[arg(long)]
        parallel: bool,
        #[arg(long)]
        stable: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Bounded search oracles
    Oracle {
        #[command(subcommand)]
        query: OracleQuery,
    },
}

#[derive(Subcommand)]
enum OracleQuery {
    /// Search P with A·P = P·B in the intertwiner lattice
    Similarity {
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
        #[command(flatten)]
        common: Common,
    },
    /// Search a block-diagonal conjugate (n = 3 or 4)
    Split {
        #[arg(allow_hyphen_values = true)]
        matrix: String,
        #[command(flatten)]
        common: Common,
    },
    /// Try A + (1) for splits into blocks of size at most 2 (3x3 A)
    Probe {
        #[arg(allow_hyphen_values = true)]
        matrix: String,
        #[command(flatten)]
        common: Common,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Parse(_)) { 2 } else { 3 };
        Failure { code, message: e.to_string() }
    }
}

type Outcome = Result<(String, u8), Failure>;

fn bundle(lit: &str) -> Result<TorusBundle, Failure> {
    let m: IMat = lit.parse()?;
    Ok(TorusBundle::from_matrix(m)?)
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report types serialize")
}

fn record_text(r: &VerdictRecord) -> String {
    let mut out = format!("{}: {}", r.input, r.verdict);
    if let Some(c) = &r.case {
        let _ = write!(out, " ({c})");
    }
    if let (Some(m), Some(v)) = (&r.modulus, &r.values) {
        let _ = write!(out, "\n  values ({}) mod {m}", v.join(","));
    }
    if !r.flags.is_empty() {
        let _ = write!(out, "\n  flags: {}", r.flags.join(", "));
    }
    if let Some(c) = &r.certificate {
        let _ = write!(out, "\n  certificate: {c} [{}]", r.certificate_status);
    } else if r.certificate_status != "None" {
        let _ = write!(out, "\n  certificate status: {}", r.certificate_status);
    }
    for (k, v) in &r.extras {
        let _ = write!(out, "\n  {k}: {v}");
    }
    out
}

fn classify_record(b: &TorusBundle, stable: bool, bound: u32) -> Result<VerdictRecord, Failure> {
    let m = b.monodromy();
    let mut r = if stable {
        VerdictRecord::from_stable(m.as_mat(), &classify_stable(m, StableBudget::default())?)
    } else {
        VerdictRecord::from_verdict(m.as_mat(), &classify_decomposable(m, bound)?)
    };
    r.extras.insert("bound".into(), bound.to_string());
    Ok(r)
}

fn cmd_classify(lit: &str, stable: bool, c: Common) -> Outcome {
    let r = classify_record(&bundle(lit)?, stable, c.bound)?;
    Ok((if c.json { to_json(&r) } else { record_text(&r) }, 0))
}

fn cmd_iso(l: &str, r: &str, c: Common) -> Outcome {
    let (a, b) = (bundle(l)?, bundle(r)?);
    let result = isomorphic(&a, &b, c.bound)?;
    let (certificate, invariant) = match &result {
        IsoResult::Iso(p) => (Some(p.as_mat().to_string()), None),
        IsoResult::NotIso(inv) => (None, Some(inv.to_string())),
        IsoResult::Unknown { .. } => (None, None),
    };
    if c.json {
        let v = json!({
            "left": a.to_string(),
            "right": b.to_string(),
            "result": result.label(),
            "certificate": certificate,
            "invariant": invariant,
            "bound": c.bound,
        });
        return Ok((to_json(&v), 0));
    }
    let mut out = format!("{a} vs {b}: {}", result.label());
    match (certificate, invariant) {
        (Some(p), _) => {
            let _ = write!(out, "\n  P = {p} (P^-1 A P = B, verified)");
        }
        (_, Some(inv)) => {
            let _ = write!(out, "\n  invariant: {inv}");
        }
        _ => {
            let _ = write!(out, "\n  no conjugator within bound {}", c.bound);
        }
    }
    Ok((out, 0))
}

fn cmd_product(lits: &[String], json: bool) -> Outcome {
    // literals may start with '-', so the list also swallows a trailing --json
    let json = json || lits.iter().any(|l| l == "--json");
    let lits: Vec<&String> = lits.iter().filter(|l| *l != "--json").collect();
    let Some((first, rest)) = lits.split_first() else {
        return Err(Failure { code: 1, message: "product needs at least one matrix".into() });
    };
    let mut acc = bundle(first)?;
    for lit in rest {
        acc = fiber_product(&acc, &bundle(lit)?);
    }
    if json {
        return Ok((to_json(&json!({ "monodromy": acc.to_string(), "fiber_dim": acc.fiber_dim() })), 0));
    }
    Ok((acc.to_string(), 0))
}

fn cmd_thicken(lit: &str, base: Option<usize>, c: Common) -> Outcome {
    let t: ThickenedBundle = match base {
        Some(m) => thicken(&bundle(lit)?, m)?,
        None => lit.parse()?,
    };
    let plain = classify_record(t.core(), false, c.bound)?;
    let stable = match t.core().fiber_dim() {
        1..=3 => Some(classify_record(t.core(), true, c.bound)?),
        _ => None,
    };
    if c.json {
        let v = json!({ "bundle": t.to_string(), "base_dim": t.base_dim(), "verdict": plain, "stable": stable });
        return Ok((to_json(&v), 0));
    }
    let mut out = format!("{t} over T^{}\n{}", t.base_dim(), record_text(&plain));
    if let Some(s) = stable {
        let _ = write!(out, "\n{}", record_text(&s));
    }
    Ok((out, 0))
}

fn cmd_witness(lit: &str, c: Common) -> Outcome {
    let b = bundle(lit)?;
    let m = b.monodromy();
    let base = classify_decomposable(m, c.bound)?;
    let stable = classify_stable(m, StableBudget::default())?;
    let mut certs: Vec<(&str, Certificate)> = Vec::new();
    if let Some(x) = base.certificate() {
        certs.push(("split", x));
    }
    if let Some(x) = stable.certificate() {
        if !base.is_decomposable() {
            certs.push(("stable", x));
        }
    }
    let checked: Vec<(&str, String, bool)> = certs
        .iter()
        .map(|(kind, cert)| (*kind, describe_certificate(cert), verify_certificate(m.as_mat(), cert)))
        .collect();
    let ok = checked.iter().all(|c| c.2);
    if c.json {
        let items: Vec<_> = checked
            .iter()
            .map(|(k, d, v)| json!({ "kind": k, "certificate": d, "verified": v }))
            .collect();
        let v = json!({
            "input": m.as_mat().to_string(),
            "verdict": base.label(),
            "stable": stable.label(),
            "witness": stable.witness_label(),
            "certificates": items,
        });
        return Ok((to_json(&v), if ok { 0 } else { 3 }));
    }
    let mut out = format!("{}: {}, {}", m.as_mat(), base.label(), stable.label());
    if let Some(w) = stable.witness_label() {
        let _ = write!(out, " ({w})");
    }
    if checked.is_empty() {
        out.push_str("\n  no certificate");
    }
    for (k, d, v) in &checked {
        let _ = write!(out, "\n  {k}: {d} [{}]", if *v { "verified" } else { "FAILED" });
    }
    Ok((out, if ok { 0 } else { 3 }))
}

fn cmd_gen(dim: usize, steps: usize, seed: u64, count: usize) -> Outcome {
    if !(1..=4).contains(&dim) {
        return Err(Failure { code: 1, message: format!("--dim must be in 1..=4, got {dim}") });
    }
    let lines: Vec<String> = (0..count as u64)
        .map(|i| random_slnz(dim, steps, seed.wrapping_add(i)).as_mat().to_string())
        .collect();
    Ok((lines.join("\n"), 0))
}

fn cmd_batch(path: &std::path::Path, parallel: bool, stable: bool, c: Common) -> Outcome {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure { code: 3, message: format!("cannot read {}: {e}", path.display()) })?;
    let execution = if parallel { Execution::Parallel } else { Execution::Sequential };
    let summary = run_batch(&text, BatchOptions { bound: c.bound, stable, execution });
    let code = if summary.all_malformed() {
        2
    } else if !summary.mismatches.is_empty() {
        1
    } else {
        0
    };
    if c.json {
        return Ok((to_json(&summary), code));
    }
    let mut out = String::new();
    for e in &summary.entries {
        match (&e.record, &e.error) {
            (Some(r), _) => {
                let _ = writeln!(out, "{}: {}{}", e.id, r.verdict, r.case.as_ref().map(|c| format!(" ({c})")).unwrap_or_default());
            }
            (None, Some(err)) => {
                let _ = writeln!(out, "{}: error: {err}", e.id);
            }
            (None, None) => unreachable!("an entry has a record or an error"),
        }
    }
    let _ = writeln!(out, "entries: {}, errors: {}", summary.entries.len(), summary.errors);
    for (k, v) in &summary.verdict_counts {
        let _ = writeln!(out, "verdict {k}: {v}");
    }
    for (k, v) in &summary.case_counts {
        let _ = writeln!(out, "case {k}: {v}");
    }
    for m in &summary.mismatches {
        let _ = writeln!(out, "mismatch {}: expected {}, got {}", m.id, m.expected, m.got);
    }
    Ok((out.trim_end().to_string(), code))
}

fn search_text(r: &SimilaritySearchReport) -> String {
    let head = match r.found() {
        Some(p) => format!("Found P = {}", p.as_mat()),
        None if r.exhaustive => "NoneWithinBound (search exhaustive)".to_string(),
        None => "NoneWithinBound".to_string(),
    };
    let mut out = format!("{head}\n  bound {}, lattice rank {}, evaluations {}", r.bound, r.lattice_rank, r.evaluations);
    if let Some(t) = &r.target {
        let _ = write!(out, "\n  target {t}");
    }
    out
}

fn search_json(r: &SimilaritySearchReport) -> serde_json::Value {
    json!({
        "outcome": if r.found().is_some() { "Found" } else { "NoneWithinBound" },
        "certificate": r.found().map(|p| p.as_mat().to_string()),
        "target": r.target.as_ref().map(|t| t.to_string()),
        "bound": r.bound,
        "lattice_rank": r.lattice_rank,
        "evaluations": r.evaluations,
        "exhaustive": r.exhaustive,
    })
}

fn cmd_oracle(q: &OracleQuery) -> Outcome {
    let (report, c) = match q {
        OracleQuery::Similarity { left, right, common } => {
            let (a, b) = (bundle(left)?, bundle(right)?);
            (brute_similarity(a.monodromy().as_mat(), b.monodromy().as_mat(), common.bound)?, *common)
        }
        OracleQuery::Split { matrix, common } => (brute_block_split(bundle(matrix)?.monodromy().as_mat(), common.bound)?, *common),
        OracleQuery::Probe { matrix, common } => {
            let a = bundle(matrix)?;
            let probes = probe_stabilizers(a.monodromy().as_mat(), &[IMat::identity(1)], common.bound)?;
            let p = &probes[0];
            let split = p.split.as_ref().map(|s| s.as_mat().to_string());
            if common.json {
                let v = json!({ "input": a.to_string(), "stabilizer": p.stabilizer.to_string(), "split": split });
                return Ok((to_json(&v), 0));
            }
            let line = match split {
                Some(s) => format!("{a} + (1): split into blocks of size <= 2 by P = {s}"),
                None => format!("{a} + (1): no split found within bound {}", common.bound),
            };
            return Ok((line, 0));
        }
    };
    Ok((if c.json { to_json(&search_json(&report)) } else { search_text(&report) }, 0))
}

fn run(cli: Cli) -> Outcome {
    match &cli.command {
        Command::Classify { matrix, stable, common } => cmd_classify(matrix, *stable, *common),
        Command::Iso { left, right, common } => cmd_iso(left, right, *common),
        Command::Product { matrices, json } => cmd_product(matrices, *json),
        Command::Thicken { bundle, base, common } => cmd_thicken(bundle, *base, *common),
        Command::Witness { matrix, common } => cmd_witness(matrix, *common),
        Command::Gen { dim, steps, seed, count } => cmd_gen(*dim, *steps, *seed, *count),
        Command::Batch { path, parallel, stable, common } => cmd_batch(path, *parallel, *stable, *common),
        Command::Oracle { query } => cmd_oracle(query),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { 1 } else { 0 };
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((text, code)) => {
            // a closed pipe downstream is not an error worth a panic
            if !text.is_empty() {
                let _ = writeln!(std::io::stdout(), "{text}");
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
