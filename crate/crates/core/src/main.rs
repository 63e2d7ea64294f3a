//! Command-line surface: construct, verify, oracle, compose, extend,
//! claims, and gray.
//!
//! Exit codes: 0 success (and claim met where one was checked), 1
//! verification failure, 2 infeasible request (no split, no plan), 3 search
//! budget exhausted, 4 I/O or parse error.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use runtorus::compose::{compose, compose_best, SplitParams};
use runtorus::document::{self, CycleDocument};
use runtorus::error::Error;
use runtorus::extend::{extend_even, extend_multiple, Extended};
use runtorus::oracle::{self, Decision, SearchBudget};
use runtorus::planner::{self, ClaimOutcome, ClaimStatus, Family, Strategy};
use runtorus::torus::{TorusSpec, Walk};

const WORKERS_ENV: &str = "RUNTORUS_WORKERS";

#[derive(Parser)]
#[command(name = "runtorus", version, about = "Hamiltonian cycles of high run length on tori")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plan and build a certified cycle for a torus.
    Construct {
        /// Comma-separated dimension sizes, e.g. 3,3,9
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        /// Construction strategy: auto, exp, or exp2
        #[arg(long, default_value = "auto")]
        strategy: String,
        /// Write the cycle document to this file
        #[arg(long)]
        out: Option<PathBuf>,
        /// Node budget per base-case search
        #[arg(long)]
        budget: Option<u64>,
        /// Print the cycle document as JSON on stdout
        #[arg(long)]
        json: bool,
        /// Write --out in the text format instead of JSON
        #[arg(long)]
        text: bool,
    },
    /// Verify a cycle document and report Hamiltonicity and run length.
    Verify {
        file: PathBuf,
        /// Fail (exit 1) unless the measured run length reaches this value
        #[arg(long)]
        expect_rl: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Exact search: decide a target run length or compute the exact maximum.
    Oracle {
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        /// Treat every dimension as directed
        #[arg(long)]
        directed: bool,
        /// Decide "is there a cycle with run length >= N" instead of the maximum
        #[arg(long)]
        target_rl: Option<usize>,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Compose two cycle documents into one on the product torus.
    Compose {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        /// Interleave count for the first role (requires --s2)
        #[arg(long)]
        s1: Option<usize>,
        /// Interleave count for the second role (requires --s1)
        #[arg(long)]
        s2: Option<usize>,
        /// Hand the first role to the right cycle
        #[arg(long)]
        swapped: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Stack a cycle into an extra dimension of size m.
    Extend {
        #[arg(long = "in")]
        input: PathBuf,
        /// Reflection stacking over this even-sized dimension (0-based)
        #[arg(long, conflicts_with = "multiple_dim")]
        even_dim: Option<usize>,
        /// Translation stacking along this dimension (0-based)
        #[arg(long)]
        multiple_dim: Option<usize>,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a family of bound claims against machine-checked instances.
    Claims {
        /// Family descriptor: rlk2:LO..HI, compose2:LO..HI, exp:D1,..,
        /// exp2:D1,.., thm3:D1,..:MLO..MHI, thm4:D1,..:J:M1,..
        #[arg(long)]
        family: String,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Export the coordinate listing (Gray code) of a Hamiltonian cycle.
    Gray {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::NotHamiltonian(_) | Error::CompositionDefect(_) => 1,
        Error::Unplannable(_)
        | Error::InvalidSplit(_)
        | Error::NotMultiple { .. }
        | Error::NoEvenDimension { .. }
        | Error::NoSeamEdge { .. } => 2,
        Error::BudgetExceeded { .. } | Error::SeamExhausted { .. } => 3,
        _ => 4,
    }
}

fn budget_from(nodes: Option<u64>) -> SearchBudget {
    match nodes {
        Some(n) => SearchBudget::nodes(n),
        None => SearchBudget::default(),
    }
}

fn workers_from_env() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&w| w >= 1)
        .unwrap_or(1)
}

fn load_walk(path: &Path) -> Result<Walk, Error> {
    let text = std::fs::read_to_string(path)?;
    document::parse_document(&text)?.to_walk()
}

fn write_document(doc: &CycleDocument, out: Option<&Path>, text: bool) -> Result<(), Error> {
    if let Some(path) = out {
        let body = if text { document::to_text(doc) } else { doc.to_json() };
        std::fs::write(path, body)?;
    }
    Ok(())
}

fn emit_document(doc: &CycleDocument, json: bool, summary: &[(&str, String)]) {
    if json {
        print!("{}", doc.to_json());
    } else {
        for (key, value) in summary {
            println!("{key}: {value}");
        }
    }
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Construct { dims, strategy, out, budget, json, text } => {
            let spec = TorusSpec::undirected(dims)?;
            let strategy = Strategy::parse(&strategy)?;
            let cert = planner::construct(&spec, strategy, &budget_from(budget))?;
            let doc = document::encode(&cert);
            write_document(&doc, out.as_deref(), text)?;
            emit_document(
                &doc,
                json,
                &[
                    ("dims", join_sizes(cert.walk.torus().sizes())),
                    ("vertices", cert.walk.torus().vertex_count().to_string()),
                    ("claimed_rl", cert.claimed_rl.to_string()),
                    ("measured_rl", cert.measured_rl.to_string()),
                    ("claim_met", cert.claim_met.to_string()),
                    ("provenance", cert.provenance.to_string()),
                ],
            );
            Ok(0)
        }
        Command::Verify { file, expect_rl, json } => {
            let walk = load_walk(&file)?;
            let report = walk.verify();
            let expect_met = expect_rl.map(|want| report.is_hamiltonian && report.run_length >= want);
            if json {
                let payload = serde_json::json!({
                    "is_closed": report.is_closed,
                    "is_hamiltonian": report.is_hamiltonian,
                    "run_length": report.run_length,
                    "duplicate_vertex": report.duplicate_vertex.as_ref().map(|v| v.coords().to_vec()),
                    "missing_count": report.missing_count,
                    "expect_rl": expect_rl,
                    "expect_rl_met": expect_met,
                });
                println!("{}", serde_json::to_string_pretty(&payload)?);
            } else {
                println!("is_closed: {}", report.is_closed);
                println!("is_hamiltonian: {}", report.is_hamiltonian);
                println!("run_length: {}", report.run_length);
                if let Some(v) = &report.duplicate_vertex {
                    println!("duplicate_vertex: {}", join_sizes(v.coords()));
                }
                println!("missing_count: {}", report.missing_count);
                if let Some(met) = expect_met {
                    println!("expect_rl_met: {met}");
                }
            }
            let ok = report.is_hamiltonian && expect_met.unwrap_or(true);
            Ok(if ok { 0 } else { 1 })
        }
        Command::Oracle { dims, directed, target_rl, budget, json } => {
            let spec = if directed {
                TorusSpec::fully_directed(dims)?
            } else {
                TorusSpec::undirected(dims)?
            };
            let budget = budget_from(budget);
            match target_rl {
                Some(r) => {
                    let res = oracle::exists_cycle_with_rl(&spec, r, &budget);
                    let decision = match res.decision {
                        Decision::Yes => "yes",
                        Decision::No => "no",
                        Decision::Unknown => "unknown",
                    };
                    let word = res.witness.as_ref().map(|w| document::format_step_word(w.steps()));
                    if json {
                        let payload = serde_json::json!({
                            "dims": spec.sizes(),
                            "directed": spec.directed_flags(),
                            "target_rl": r,
                            "decision": decision,
                            "exhausted": res.exhausted,
                            "nodes_explored": res.nodes_explored,
                            "witness_word": word,
                        });
                        println!("{}", serde_json::to_string_pretty(&payload)?);
                    } else {
                        println!("decision: {decision}");
                        println!("exhausted: {}", res.exhausted);
                        println!("nodes_explored: {}", res.nodes_explored);
                        if let Some(word) = word {
                            println!("witness: {word}");
                        }
                    }
                    Ok(if res.decision == Decision::Unknown { 3 } else { 0 })
                }
                None => {
                    let res = oracle::exact_mrl(&spec, &budget);
                    let word = res.witness.as_ref().map(|w| document::format_step_word(w.steps()));
                    if json {
                        let payload = serde_json::json!({
                            "dims": spec.sizes(),
                            "directed": spec.directed_flags(),
                            "mrl": res.value,
                            "exhausted": res.exhausted,
                            "nodes_explored": res.nodes_explored,
                            "witness_word": word,
                        });
                        println!("{}", serde_json::to_string_pretty(&payload)?);
                    } else {
                        println!("mrl: {}", res.value);
                        println!("exhausted: {}", res.exhausted);
                        println!("nodes_explored: {}", res.nodes_explored);
                        if let Some(word) = word {
                            println!("witness: {word}");
                        }
                    }
                    Ok(if res.exhausted { 0 } else { 3 })
                }
            }
        }
        Command::Compose { left, right, s1, s2, swapped, out, json } => {
            let h1 = load_walk(&left)?;
            let h2 = load_walk(&right)?;
            let (walk, split, order) = match (s1, s2) {
                (Some(s1), Some(s2)) => {
                    let split = SplitParams::new(s1, s2);
                    (compose(&h1, &h2, &split, swapped)?, split, swapped)
                }
                (None, None) => {
                    let best = compose_best(&h1, &h2)?;
                    (best.walk, best.split, best.order_swapped)
                }
                _ => {
                    return Err(Error::Parse {
                        line: None,
                        message: "--s1 and --s2 must be given together".into(),
                    })
                }
            };
            let rl = walk.run_length();
            let mut meta = BTreeMap::new();
            meta.insert("measured_rl".into(), rl.to_string());
            meta.insert("split".into(), format!("{}+{}", split.s1, split.s2));
            meta.insert("order_swapped".into(), order.to_string());
            let doc = CycleDocument::from_walk(&walk, meta);
            write_document(&doc, out.as_deref(), false)?;
            emit_document(
                &doc,
                json,
                &[
                    ("dims", join_sizes(walk.torus().sizes())),
                    ("split", format!("{}+{}", split.s1, split.s2)),
                    ("order_swapped", order.to_string()),
                    ("measured_rl", rl.to_string()),
                ],
            );
            Ok(0)
        }
        Command::Extend { input, even_dim, multiple_dim, m, out, json } => {
            let h = load_walk(&input)?;
            let label;
            let ext: Extended = match (even_dim, multiple_dim) {
                (Some(d), None) => {
                    label = format!("even dimension {d}");
                    extend_even(&h, d, m)?
                }
                (None, Some(d)) => {
                    label = format!("multiple of dimension {d}");
                    extend_multiple(&h, d, m)?
                }
                _ => {
                    return Err(Error::Parse {
                        line: None,
                        message: "exactly one of --even-dim or --multiple-dim is required".into(),
                    })
                }
            };
            let mut meta = BTreeMap::new();
            meta.insert("measured_rl".into(), ext.measured_rl.to_string());
            meta.insert("extension".into(), label.clone());
            if let Some(from) = ext.regressed_from {
                meta.insert("run_length_regression_from".into(), from.to_string());
            }
            let doc = CycleDocument::from_walk(&ext.walk, meta);
            write_document(&doc, out.as_deref(), false)?;
            let mut summary = vec![
                ("dims", join_sizes(ext.walk.torus().sizes())),
                ("extension", label),
                ("measured_rl", ext.measured_rl.to_string()),
            ];
            if let Some(from) = ext.regressed_from {
                summary.push(("run_length_regression_from", from.to_string()));
            }
            emit_document(&doc, json, &summary);
            Ok(0)
        }
        Command::Claims { family, budget, json } => {
            let family = Family::parse(&family)?;
            let workers = workers_from_env();
            let rows = planner::claims_report(&family, &budget_from(budget), workers)?;
            if json {
                let payload: Vec<serde_json::Value> = rows.iter().map(claim_row_json).collect();
                println!("{}", serde_json::to_string_pretty(&payload)?);
            } else {
                for row in &rows {
                    println!("{}", claim_row_line(row));
                }
            }
            let any_skipped = rows.iter().any(|r| r.status == ClaimOutcome::Skipped);
            Ok(if any_skipped { 3 } else { 0 })
        }
        Command::Gray { input, json } => {
            let walk = load_walk(&input)?;
            let rows = document::gray_export(&walk)?;
            if json {
                let payload = serde_json::json!({
                    "dims": walk.torus().sizes(),
                    "gap": walk.run_length(),
                    "rows": rows,
                });
                println!("{}", serde_json::to_string_pretty(&payload)?);
            } else {
                let compact = walk.torus().sizes().iter().all(|&s| s <= 10);
                for row in &rows {
                    let line: Vec<String> = row.iter().map(|c| c.to_string()).collect();
                    println!("{}", line.join(if compact { "" } else { " " }));
                }
            }
            Ok(0)
        }
    }
}

fn join_sizes(sizes: &[usize]) -> String {
    sizes.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
}

fn claim_label(status: &ClaimStatus) -> String {
    let dirs = if status.instance.directed_flags().iter().all(|&d| d) { "directed " } else { "" };
    format!("{dirs}[{}]", join_sizes(status.instance.sizes()))
}

fn claim_row_line(row: &ClaimStatus) -> String {
    let status = match row.status {
        ClaimOutcome::Met => "met",
        ClaimOutcome::Unmet => "unmet",
        ClaimOutcome::Counterexample => "counterexample",
        ClaimOutcome::Skipped => "skipped",
    };
    let witness = row
        .witness
        .as_ref()
        .map(|w| format!(" witness=\"{}\"", document::format_step_word(w.steps())))
        .unwrap_or_default();
    format!(
        "claim={:?} instance={} expected={} measured={} status={status}{witness}",
        row.claim_id,
        claim_label(row),
        row.expected,
        row.measured,
    )
}

fn claim_row_json(row: &ClaimStatus) -> serde_json::Value {
    serde_json::json!({
        "claim_id": row.claim_id,
        "instance": {
            "dims": row.instance.sizes(),
            "directed": row.instance.directed_flags(),
        },
        "expected": row.expected.to_string(),
        "measured": row.measured,
        "status": row.status,
        "witness_word": row.witness.as_ref().map(|w| document::format_step_word(w.steps())),
    })
}
