//! `packlab` command-line front end. Every subcommand prints one JSON document
//! on stdout. Exit codes: 0 positive verdict, 1 negative verdict, 2 usage or
//! input error, 3 budget exhausted.

use clap::{Parser, Subcommand, ValueEnum};
use packlab::constructions;
use packlab::cover::Cover;
use packlab::derange::{bad_permutations, common_derangements, min_permanent_family, permanent, BipartiteGraph, FamilyOptions, PermMatrix};
use packlab::frac::{has_fractional_packing, verify_fractional_clique, Certificate, FracResult};
use packlab::graph::read_graph;
use packlab::packing::{
    corr_packing_upper_from, count_transversals, find_packing_with_budget, list_packing_upper, SearchResult, UpperReport, Verdict,
};
use packlab::verify::{self, parse_count, RunOptions, Tier};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "packlab", version, about = "Exact list and correspondence packing tools")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Search for a packing of a cover.
    Pack {
        #[arg(long)]
        cover: PathBuf,
        #[arg(long, value_parser = parse_budget)]
        budget: Option<u64>,
    },
    /// Count independent transversals.
    Count {
        #[arg(long)]
        cover: PathBuf,
    },
    /// Check that every k-fold cover of a graph (file or catalog name) packs.
    Upper {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "corr")]
        mode: Mode,
        #[arg(long, value_parser = parse_budget)]
        budget: Option<u64>,
        /// Cover index to start from (correspondence mode).
        #[arg(long, default_value_t = 0)]
        resume_from: u64,
    },
    /// Common derangements of the permutations in a file, and the bad fifth
    /// rows when the file holds four permutations of [8].
    Derange {
        #[arg(long)]
        perms: PathBuf,
    },
    /// Permanent of a 0/1 matrix file.
    Permanent {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Minimum permanent over edge-minimal graphs of given minimum degree on 8+8 vertices.
    Family {
        #[arg(long)]
        mindeg: usize,
        #[arg(long, value_parser = parse_budget)]
        budget: Option<u64>,
    },
    /// Decide whether a cover has a fractional packing.
    Frac {
        #[arg(long)]
        cover: PathBuf,
        /// Re-check the certificate independently before printing.
        #[arg(long)]
        certify: bool,
    },
    /// Write one of the explicit instances with its checked claims.
    Construct {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(constructions::NAMES))]
        name: String,
        #[arg(long, default_value_t = 5)]
        g: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run an exhaustive check by identifier, or `all`.
    Verify {
        id: String,
        #[arg(long, default_value = "fast")]
        tier: String,
        /// State file for resumable runs.
        #[arg(long)]
        resume: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Corr,
    List,
}

fn parse_budget(s: &str) -> Result<u64, String> {
    parse_count(s).ok_or_else(|| format!("not a count: {s}"))
}

/// Error with the exit code to use.
struct Fail(u8, String);

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail(2, e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Fail> {
    std::fs::read_to_string(path).map_err(|e| Fail(2, format!("{}: {e}", path.display())))
}

fn load_cover(path: &Path) -> Result<Cover, Fail> {
    Ok(Cover::from_json(&read(path)?)?)
}

fn budget_or_env(b: Option<u64>) -> u64 {
    b.unwrap_or(RunOptions::from_env().budget)
}

fn upper_json(r: &UpperReport) -> (Value, u8) {
    let (verdict, extra, code) = match &r.verdict {
        Verdict::Holds { checked } => ("HOLDS", json!({"checked": checked}), 0),
        Verdict::Fails { witness, index } => ("FAILS", json!({"witness": witness, "index": index}), 1),
        Verdict::Inconclusive { resume_from } => ("INCONCLUSIVE", json!({"resume_from": resume_from}), 3),
    };
    let mut v = json!({"verdict": verdict, "nodes_expanded": r.nodes_expanded, "elapsed": r.elapsed.as_secs_f64()});
    v.as_object_mut().unwrap().extend(extra.as_object().unwrap().clone());
    (v, code)
}

fn run(cmd: Cmd) -> Result<(Value, u8), Fail> {
    let t0 = Instant::now();
    Ok(match cmd {
        Cmd::Pack { cover, budget } => {
            let c = load_cover(&cover)?;
            let (r, nodes) = find_packing_with_budget(&c, budget_or_env(budget))?;
            let (verdict, witness, code) = match r {
                SearchResult::Found(p) => {
                    let rows: Vec<Vec<usize>> = (0..p.k).map(|i| p.row(i)).collect();
                    ("FOUND", json!(rows), 0)
                }
                SearchResult::None => ("NONE", Value::Null, 1),
                SearchResult::Inconclusive => ("INCONCLUSIVE", Value::Null, 3),
            };
            (json!({"verdict": verdict, "witness": witness, "nodes_expanded": nodes, "elapsed": t0.elapsed().as_secs_f64()}), code)
        }
        Cmd::Count { cover } => {
            let c = load_cover(&cover)?;
            (json!({"transversals": count_transversals(&c).to_string()}), 0)
        }
        Cmd::Upper { graph, k, mode, budget, resume_from } => {
            let g = read_graph(&graph)?;
            let budget = budget_or_env(budget);
            let r = match mode {
                Mode::Corr => corr_packing_upper_from(&g, k, budget, resume_from),
                Mode::List => list_packing_upper(&g, k, budget, &[]),
            };
            upper_json(&r)
        }
        Cmd::Derange { perms } => {
            let a = PermMatrix::parse(&read(&perms)?)?;
            let common = common_derangements(a.rows())?;
            let mut v = json!({"k": a.k(), "rows": a.rows().len(), "common_derangements": common});
            if a.k() == 8 && a.rows().len() == 4 {
                v["bad_fifth_rows"] = serde_json::to_value(bad_permutations(&a)?)?;
            }
            (v, 0)
        }
        Cmd::Permanent { matrix } => {
            let g = BipartiteGraph::parse(&read(&matrix)?)?;
            (json!({"n": g.n(), "permanent": permanent(&g)?}), 0)
        }
        Cmd::Family { mindeg, budget } => {
            let opts = FamilyOptions { budget: budget_or_env(budget), ..Default::default() };
            let r = min_permanent_family(mindeg, &opts)?;
            let code = if r.complete { 0 } else { 3 };
            (serde_json::to_value(&r)?, code)
        }
        Cmd::Frac { cover, certify } => {
            let c = load_cover(&cover)?;
            let r = has_fractional_packing(&c)?;
            let mut v = serde_json::to_value(&r)?;
            if certify {
                let ok = match &r {
                    FracResult::Packing(d) => d.validate(&c),
                    FracResult::Infeasible(Certificate::Clique(w)) => {
                        let (valid, total) = verify_fractional_clique(&c, w);
                        valid && total == w.total
                    }
                    FracResult::Infeasible(Certificate::Farkas(f)) => f.verify(&c)?,
                    FracResult::Infeasible(Certificate::EmptyList(v)) => c.size(*v) == 0,
                };
                v = json!({"result": v, "certified": ok});
                if !ok {
                    return Err(Fail(2, "certificate failed its own check".into()));
                }
            }
            let code = if r.is_feasible() { 0 } else { 1 };
            (v, code)
        }
        Cmd::Construct { name, g, out } => {
            let inst = constructions::construct(&name, g).ok_or_else(|| Fail(2, format!("unknown construction {name}")))?;
            std::fs::create_dir_all(&out)?;
            let checks = inst.verify();
            let holds = checks.iter().all(|c| c.holds);
            std::fs::write(out.join("graph.json"), serde_json::to_string_pretty(&inst.graph)?)?;
            std::fs::write(out.join("cover.json"), inst.cover.to_json())?;
            let manifest = json!({"name": inst.name, "vertices": inst.graph.n(), "edges": inst.graph.m(), "claims": checks});
            std::fs::write(out.join("claims.json"), serde_json::to_string_pretty(&manifest)?)?;
            (manifest, if holds { 0 } else { 1 })
        }
        Cmd::Verify { id, tier, resume, jobs } => {
            let tier: Tier = tier.parse().map_err(|e: String| Fail(2, e))?;
            let mut opts = RunOptions::from_env();
            opts.jobs = jobs.max(1);
            opts.state = resume;
            let reports = if id == "all" {
                verify::run_all(tier, &opts)
            } else {
                vec![verify::run(&id, &opts).ok_or_else(|| Fail(2, format!("unknown lemma id {id}")))?]
            };
            let code = if reports.iter().all(|r| r.is_verified()) {
                0
            } else if reports.iter().any(|r| matches!(r.status, verify::Status::Refuted { .. })) {
                1
            } else {
                3
            };
            let v = if reports.len() == 1 { serde_json::to_value(&reports[0])? } else { serde_json::to_value(&reports)? };
            (v, code)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok((v, code)) => {
            println!("{}", serde_json::to_string_pretty(&v).expect("JSON output"));
            ExitCode::from(code)
        }
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
