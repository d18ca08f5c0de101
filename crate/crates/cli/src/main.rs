//! `hlc`: derivations, grammar membership, conversions, models and the
//! experiment suites from the command line.
//!
//! Exit codes: 0 affirmative, 1 negative, 2 usage or format error, 3 budget
//! exceeded or undecided.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use hl_core::calculus::{check_derivation, derivation_to_json, SearchStats, DEFAULT_MAX_NODES};
use hl_core::fixtures::{in_l1, is_bipartite, is_regular};
use hl_core::format::{
    parse_graph, parse_hl_grammar, parse_hrg, parse_sequent, parse_valuation, print_graph, print_graph_canonical,
    print_hl_grammar, print_hrg, print_inline_graph, print_sequent, print_sequent_canonical, print_type,
};
use hl_core::grammar::{hrg_generate, hrg_member, hrg_step_bound, wgnf_to_hl, ConvertOptions};
use hl_core::matching::enumerate_decompositions;
use hl_core::models::sequent_holds;
use hl_core::suite::run_suite;
use hl_core::{hl_member, Apportionment, Budget, MemberVerdict, Prover, Truth, Verdict};

#[derive(Parser)]
#[command(name = "hlc", version, about = "Hypergraph Lambek calculus toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct SearchFlags {
    /// Most search nodes expanded per sequent.
    #[arg(long, env = "HLC_BUDGET_NODES", default_value_t = DEFAULT_MAX_NODES)]
    budget_nodes: u64,
    /// Deepest backward rule chain; defaults to a bound the search never exceeds.
    #[arg(long, env = "HLC_BUDGET_DEPTH")]
    budget_depth: Option<usize>,
    /// Let isolated nodes move into any part of a decomposition.
    #[arg(long)]
    exhaustive: bool,
}

impl SearchFlags {
    fn prover(self) -> Prover {
        let mode = if self.exhaustive { Apportionment::Exhaustive } else { Apportionment::Minimal };
        Prover::new().with_budget(Budget { max_nodes: self.budget_nodes, max_depth: self.budget_depth }).with_mode(mode)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleCheck {
    Bipartite,
    Regular,
    L1,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a sequent and optionally emit its derivation.
    Derive {
        sequent: PathBuf,
        #[command(flatten)]
        search: SearchFlags,
        /// Write the derivation as JSON to this file.
        #[arg(long)]
        emit_tree: Option<PathBuf>,
        /// Print the derivation as JSON on stdout.
        #[arg(long)]
        json: bool,
        /// Search the invertible rules instead of applying them upfront.
        #[arg(long)]
        no_eager: bool,
    },
    /// Membership of a graph in an HL-grammar or an HRG.
    Member {
        #[arg(long, conflicts_with = "hrg", required_unless_present = "hrg")]
        grammar: Option<PathBuf>,
        #[arg(long)]
        hrg: Option<PathBuf>,
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        search: SearchFlags,
        /// Write the membership derivation as JSON to this file.
        #[arg(long)]
        emit_tree: Option<PathBuf>,
    },
    /// Every terminal graph of an HRG up to a size bound.
    HrgGenerate {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long)]
        max_edges: usize,
        /// Derivation length bound; defaults to the bound for `max_edges`.
        #[arg(long)]
        max_steps: Option<usize>,
    },
    /// Convert an HRG in weak Greibach normal form into an HL-grammar.
    Convert {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Divide by the `$`-handle for terminal-handle productions.
        #[arg(long)]
        divide_handles: bool,
    },
    /// Isomorphism of two graphs.
    Iso {
        first: PathBuf,
        second: PathBuf,
        /// Print the node and edge maps.
        #[arg(long)]
        witness: bool,
    },
    /// Decompositions of a host graph along a pattern.
    Match {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        exhaustive: bool,
        /// Print only the number of decompositions.
        #[arg(long)]
        count: bool,
    },
    /// Truth of a sequent under a finite valuation.
    ModelCheck {
        #[arg(long)]
        valuation: PathBuf,
        #[arg(long)]
        sequent: PathBuf,
    },
    /// Graph-class oracles.
    Oracle {
        #[arg(long, value_enum)]
        check: OracleCheck,
        graph: PathBuf,
    },
    /// Reprint a file; the format follows the extension.
    Print {
        file: PathBuf,
        /// Bring graphs into canonical order first.
        #[arg(long)]
        canonical: bool,
    },
    /// Run an experiment suite and report.
    Suite {
        name: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        search: SearchFlags,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Outcome {
    Yes,
    No,
    Exceeded,
}

impl Outcome {
    fn of(b: bool) -> Outcome {
        if b {
            Outcome::Yes
        } else {
            Outcome::No
        }
    }

    fn code(self) -> ExitCode {
        ExitCode::from(match self {
            Outcome::Yes => 0,
            Outcome::No => 1,
            Outcome::Exceeded => 3,
        })
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn parsed<T, E: std::fmt::Display>(path: &Path, r: std::result::Result<T, E>) -> Result<T> {
    r.map_err(|e| anyhow::anyhow!("{}:{e}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn exceeded(st: &SearchStats) -> String {
    format!("budget exceeded after {} expansions (depth {})", st.expanded, st.deepest)
}

fn derive(path: &Path, search: SearchFlags, emit: Option<&Path>, json: bool, no_eager: bool) -> Result<Outcome> {
    let s = parsed(path, parse_sequent(&read(path)?))?;
    let prover = search.prover().with_eager_normalization(!no_eager);
    match prover.derive(&s)? {
        Verdict::Proved(t) => {
            check_derivation(&t).context("derivation failed verification")?;
            let text = derivation_to_json(&t);
            if let Some(out) = emit {
                write(out, &text)?;
            }
            if json {
                println!("{text}");
            } else {
                let c = t.rule_counts();
                println!("derivable: {} nodes, height {}", t.size(), t.height());
                println!("rules: axiom {} div-left {} div-right {} times-left {} times-right {}", c[0], c[1], c[2], c[3], c[4]);
            }
            Ok(Outcome::Yes)
        }
        Verdict::NotDerivable => {
            println!("not derivable");
            Ok(Outcome::No)
        }
        Verdict::BudgetExceeded(st) => {
            println!("{}", exceeded(&st));
            Ok(Outcome::Exceeded)
        }
    }
}

fn member(grammar: Option<&Path>, hrg: Option<&Path>, graph: &Path, search: SearchFlags, emit: Option<&Path>) -> Result<Outcome> {
    let g = parsed(graph, parse_graph(&read(graph)?))?;
    if let Some(path) = hrg {
        let h = parsed(path, parse_hrg(&read(path)?))?;
        let yes = hrg_member(&h, &g);
        println!("{}", if yes { "member" } else { "not a member" });
        return Ok(Outcome::of(yes));
    }
    let Some(path) = grammar else { bail!("one of --grammar or --hrg is required") };
    let hl = parsed(path, parse_hl_grammar(&read(path)?))?;
    match hl_member(&hl, &g, &search.prover())? {
        MemberVerdict::Member(m) => {
            println!("member");
            for (e, t) in m.relabeling.iter().enumerate() {
                println!("  e{e} {} -> {}", g.label(e), print_type(t));
            }
            if let Some(out) = emit {
                write(out, &derivation_to_json(&m.derivation))?;
            }
            Ok(Outcome::Yes)
        }
        MemberVerdict::NotMember => {
            println!("not a member");
            Ok(Outcome::No)
        }
        MemberVerdict::BudgetExceeded(st) => {
            println!("{}", exceeded(&st));
            Ok(Outcome::Exceeded)
        }
    }
}

fn generate(path: &Path, max_edges: usize, max_steps: Option<usize>) -> Result<Outcome> {
    let g = parsed(path, parse_hrg(&read(path)?))?;
    let steps = max_steps.unwrap_or_else(|| hrg_step_bound(&g, max_edges));
    let mut lines: Vec<String> = hrg_generate(&g, max_edges, steps).iter().map(|h| print_inline_graph(&h.canonical_graph())).collect();
    lines.sort();
    for l in &lines {
        println!("{l}");
    }
    eprintln!("{} graphs", lines.len());
    Ok(Outcome::of(!lines.is_empty()))
}

fn convert(input: &Path, out: Option<&Path>, divide_handles: bool) -> Result<Outcome> {
    let g = parsed(input, parse_hrg(&read(input)?))?;
    let hl = wgnf_to_hl(&g, ConvertOptions { divide_by_handles: divide_handles })?;
    let text = print_hl_grammar(&hl);
    match out {
        Some(p) => write(p, &text)?,
        None => print!("{text}"),
    }
    Ok(Outcome::Yes)
}

fn iso(first: &Path, second: &Path, witness: bool) -> Result<Outcome> {
    let g = parsed(first, parse_graph(&read(first)?))?;
    let h = parsed(second, parse_graph(&read(second)?))?;
    match g.isomorphism(&h) {
        Some(w) => {
            println!("isomorphic");
            if witness {
                let nodes: Vec<String> = w.node_map.iter().enumerate().map(|(v, u)| format!("n{v}->n{u}")).collect();
                let edges: Vec<String> = w.edge_map.iter().enumerate().map(|(e, f)| format!("e{e}->e{f}")).collect();
                println!("nodes: {}", nodes.join(" "));
                println!("edges: {}", edges.join(" "));
            }
            Ok(Outcome::Yes)
        }
        None => {
            println!("not isomorphic");
            Ok(Outcome::No)
        }
    }
}

fn match_cmd(host: &Path, pattern: &Path, exhaustive: bool, count: bool) -> Result<Outcome> {
    let g = parsed(host, parse_graph(&read(host)?))?;
    let p = parsed(pattern, parse_graph(&read(pattern)?))?;
    let mode = if exhaustive { Apportionment::Exhaustive } else { Apportionment::Minimal };
    let ds = enumerate_decompositions(&g, &p, mode);
    if count {
        println!("{}", ds.len());
    } else {
        for (i, d) in ds.iter().enumerate() {
            let map: Vec<String> = d.node_map.iter().enumerate().map(|(v, u)| format!("n{v}->n{u}")).collect();
            println!("decomposition {i}: {}", map.join(" "));
            for (e, part) in d.parts.iter().enumerate() {
                println!("  e{e} {}: {}", p.label(e), print_inline_graph(part));
            }
        }
    }
    Ok(Outcome::of(!ds.is_empty()))
}

fn model_check(valuation: &Path, sequent: &Path) -> Result<Outcome> {
    let base = valuation.parent().unwrap_or(Path::new("."));
    let w = parsed(valuation, parse_valuation(&read(valuation)?, base))?;
    let s = parsed(sequent, parse_sequent(&read(sequent)?))?;
    let t = sequent_holds(&w, &s);
    println!("{}", match t {
        Truth::True => "true",
        Truth::False => "false",
        Truth::Undecided => "undecided",
    });
    Ok(match t.as_bool() {
        Some(b) => Outcome::of(b),
        None => Outcome::Exceeded,
    })
}

fn oracle(check: OracleCheck, path: &Path) -> Result<Outcome> {
    let g = parsed(path, parse_graph(&read(path)?))?;
    let yes = match check {
        OracleCheck::Bipartite => is_bipartite(&g)?,
        OracleCheck::Regular => is_regular(&g)?,
        OracleCheck::L1 => in_l1(&g),
    };
    println!("{yes}");
    Ok(Outcome::of(yes))
}

fn print_file(path: &Path, canonical: bool) -> Result<Outcome> {
    let text = read(path)?;
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    let out = match ext {
        "hgf" => {
            let g = parsed(path, parse_graph(&text))?;
            if canonical {
                print_graph_canonical(&g)
            } else {
                print_graph(&g)
            }
        }
        "seq" => {
            let s = parsed(path, parse_sequent(&text))?;
            let line = if canonical { print_sequent_canonical(&s) } else { print_sequent(&s) };
            line + "\n"
        }
        "hlg" => print_hl_grammar(&parsed(path, parse_hl_grammar(&text))?),
        "hrg" => print_hrg(&parsed(path, parse_hrg(&text))?),
        other => bail!("{}: unknown file kind {other:?}; expected hgf, seq, hlg or hrg", path.display()),
    };
    print!("{out}");
    Ok(Outcome::Yes)
}

fn suite(name: &str, seed: u64, search: SearchFlags, json: bool) -> Result<Outcome> {
    let report = run_suite(name, seed, &search.prover())?;
    if json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!(
            "{}: {} of {} cases passed, {} budget exceeded, {} skipped, {} ms",
            report.suite, report.passed, report.cases, report.budget_exceeded, report.skipped, report.elapsed_ms
        );
        for (k, v) in &report.counts {
            println!("  {k}: {v}");
        }
        for n in &report.notes {
            println!("  note: {n}");
        }
        for f in &report.failures {
            println!("  failure: {f}");
        }
    }
    Ok(if report.ok() {
        Outcome::Yes
    } else if report.failures.len() == report.budget_exceeded {
        Outcome::Exceeded
    } else {
        Outcome::No
    })
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Derive { sequent, search, emit_tree, json, no_eager } => derive(&sequent, search, emit_tree.as_deref(), json, no_eager),
        Command::Member { grammar, hrg, graph, search, emit_tree } => {
            member(grammar.as_deref(), hrg.as_deref(), &graph, search, emit_tree.as_deref())
        }
        Command::HrgGenerate { grammar, max_edges, max_steps } => generate(&grammar, max_edges, max_steps),
        Command::Convert { input, out, divide_handles } => convert(&input, out.as_deref(), divide_handles),
        Command::Iso { first, second, witness } => iso(&first, &second, witness),
        Command::Match { host, pattern, exhaustive, count } => match_cmd(&host, &pattern, exhaustive, count),
        Command::ModelCheck { valuation, sequent } => model_check(&valuation, &sequent),
        Command::Oracle { check, graph } => oracle(check, &graph),
        Command::Print { file, canonical } => print_file(&file, canonical),
        Command::Suite { name, seed, search, json } => suite(&name, seed, search, json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(o) => o.code(),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
