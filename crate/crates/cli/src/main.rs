use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use spinbranch::base::{res_p, Characteristic, Weight};
use spinbranch::crystal::{
    beta_signature, branching_tables, content_reports, crystal_graph, spin_stats, PStrictPartition,
};
use spinbranch::indices::{index_report, non_normal_certificate, primitive_plan};
use spinbranch::sigseq::r_beta;
use spinbranch::verify::{self, VerifyOptions};

#[derive(Parser)]
#[command(name = "spinbranch", version, about = "Modular spin branching combinatorics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Index, signature and node report for a weight or a p-strict partition.
    Analyze {
        #[arg(long)]
        p: i64,
        /// Comma-separated integers.
        #[arg(long, conflicts_with = "partition", required_unless_present = "partition")]
        weight: Option<String>,
        /// Comma-separated parts of a p-strict partition.
        #[arg(long)]
        partition: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Crystal graph on restricted p-strict partitions of size at most --max.
    Crystal {
        #[arg(long)]
        p: i64,
        #[arg(long, default_value_t = 4)]
        max: i64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite; exits 1 when any case fails.
    Verify {
        suite: String,
        #[arg(long)]
        p: Option<i64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        max: Option<i64>,
        #[arg(long)]
        width: Option<i64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

fn parse_ints(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<i64>()
                .with_context(|| format!("parse error: {t:?} is not an integer"))
        })
        .collect()
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn weight_section(w: &Weight, p: Characteristic) -> Result<Value> {
    let n = w.n();
    let residues: Vec<Value> = (1..=n).map(|i| json!(w.residue(i, p))).collect();
    let mut betas: Vec<_> = (1..=n)
        .flat_map(|i| [w.residue(i, p), res_p(w.at(i) + 1, p)])
        .collect();
    betas.sort();
    betas.dedup();
    let dominant = w.is_dominant_p_strict(p);
    let mut maps = BTreeMap::new();
    for &b in &betas {
        let u = r_beta(w, b, p);
        let mut entry = json!({
            "map": u,
            "reduced": u.reduced(),
        });
        if dominant {
            entry["node_signature"] = json!(beta_signature(w, b, p, true)?);
        }
        maps.insert(b.to_string(), entry);
    }
    let mut certificates = BTreeMap::new();
    let mut plans = BTreeMap::new();
    let report = index_report(w, p);
    for i in 1..n {
        if report.indices[&i].normal {
            plans.insert(i.to_string(), json!(primitive_plan(w, i, p)?));
        } else {
            certificates.insert(i.to_string(), json!(non_normal_certificate(w, i, p)?));
        }
    }
    Ok(json!({
        "weight": w.parts(),
        "p": p.get(),
        "dominant_p_strict": dominant,
        "residues": residues,
        "r_beta": maps,
        "indices": report,
        "certificates": certificates,
        "plans": plans,
    }))
}

fn analyze(p: i64, weight: Option<&str>, partition: Option<&str>) -> Result<Value> {
    let p = Characteristic::new(p)?;
    if let Some(s) = weight {
        let w = Weight::new(parse_ints(s)?)?;
        return weight_section(&w, p);
    }
    let parts = parse_ints(partition.expect("clap requires one input"))?;
    let lam = PStrictPartition::new(parts, p)?;
    let branching = if lam.is_restricted() {
        json!(branching_tables(&lam)?)
    } else {
        Value::Null
    };
    Ok(json!({
        "partition": lam.parts(),
        "p": p.get(),
        "restricted": lam.is_restricted(),
        "contents": content_reports(&lam),
        "spin": spin_stats(&lam),
        "branching": branching,
        "weight": weight_section(&lam.pad(), p)?,
    }))
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    if let Ok(v) = std::env::var("SPINBRANCH_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .with_context(|| format!("SPINBRANCH_THREADS={v:?} is not a thread count"))?;
        if n > 0 {
            rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
        }
    }
    match cli.command {
        Command::Analyze {
            p,
            weight,
            partition,
            out,
        } => {
            let v = analyze(p, weight.as_deref(), partition.as_deref())?;
            emit(&to_json(&v), out.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Crystal { p, max, format, out } => {
            let p = Characteristic::new(p)?;
            if max < 0 {
                bail!("--max must be nonnegative");
            }
            let g = crystal_graph(p, max);
            let text = match format {
                Format::Dot => g.to_dot(),
                Format::Json => to_json(&json!({
                    "p": p.get(),
                    "max": max,
                    "vertices": g.vertices,
                    "edges": g.edges,
                })),
            };
            emit(&text, out.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            suite,
            p,
            n,
            max,
            width,
            samples,
            seed,
            out,
        } => {
            let opts = VerifyOptions {
                p,
                n,
                max,
                width,
                samples,
                seed,
            };
            let report = verify::run(&suite, &opts)?;
            emit(&to_json(&json!(report)), out.as_ref())?;
            Ok(if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
