use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use k4graph_core::catalog::{shared, Catalog};
use k4graph_core::classes::{
    construct_witness, exists_class, search_witness_with, target_square, ElementClass, SearchConfig,
    DEFAULT_BUDGET,
};
use k4graph_core::graph::{build_k3_graph, build_k4_graph, DeformationGraph, IRR};
use k4graph_core::verify::{all_passed, Suite, Verifier};

const BUDGET_VAR: &str = "K4GRAPH_SEARCH_BUDGET";

#[derive(Parser)]
#[command(name = "k4graph", version, about = "Adjacency graphs of real K3 and K4 surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CatalogFormat {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphKind {
    K3,
    K4,
}

#[derive(Subcommand)]
enum Command {
    /// Print the 75 catalog entries.
    Catalog {
        #[arg(long, value_enum, default_value = "table")]
        format: CatalogFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a graph; the summary line goes to stderr.
    Build {
        #[arg(long, value_enum)]
        graph: GraphKind,
        #[arg(long, value_enum, default_value = "json")]
        format: GraphFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide which element classes of the given square occur in L−.
    Classify {
        #[arg(long)]
        vertex: String,
        #[arg(long, allow_negative_numbers = true, value_parser = parse_square)]
        square: i64,
        /// Also run the bounded search with this coordinate bound.
        #[arg(long)]
        bound: Option<i64>,
    },
    /// Run the self-check suites.
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Vec<Suite>,
    },
    /// Write the catalog and both graphs in every format into a directory.
    Export {
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_square(s: &str) -> Result<i64, String> {
    match s.parse::<i64>() {
        Ok(x @ (-2 | 6)) => Ok(x),
        _ => Err(format!("square must be -2 or 6, got `{s}`")),
    }
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}

enum Failure {
    /// Exits with 2.
    Usage(String),
    Verification(String),
    Other(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

impl From<k4graph_core::Error> for Failure {
    fn from(e: k4graph_core::Error) -> Self {
        Failure::Other(e.into())
    }
}

fn budget() -> Result<u128, Failure> {
    match std::env::var(BUDGET_VAR) {
        Err(_) => Ok(DEFAULT_BUDGET),
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{BUDGET_VAR} must be a number, got `{s}`"))),
    }
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn catalog_text(cat: &Catalog, format: CatalogFormat) -> anyhow::Result<String> {
    Ok(match format {
        CatalogFormat::Json => serde_json::to_string_pretty(&cat.to_json())? + "\n",
        CatalogFormat::Table => cat.to_table(),
    })
}

fn graph(cat: &Catalog, kind: GraphKind) -> Result<(DeformationGraph, &'static str), Failure> {
    let built = match kind {
        GraphKind::K3 => build_k3_graph(cat).map(|g| (g, "[8S]_I")),
        GraphKind::K4 => build_k4_graph(cat).map(|g| (g.graph, IRR)),
    };
    let (g, irregular) = built.map_err(|e| Failure::Verification(e.to_string()))?;
    let bad = g.invariant_violations();
    if !bad.is_empty() {
        return Err(Failure::Verification(bad.join("\n")));
    }
    Ok((g, irregular))
}

fn graph_text(g: &DeformationGraph, format: GraphFormat) -> anyhow::Result<String> {
    Ok(match format {
        GraphFormat::Json => serde_json::to_string_pretty(&g.to_json())? + "\n",
        GraphFormat::Dot => g.to_dot(),
    })
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Catalog { format, out } => {
            emit(out.as_deref(), &catalog_text(shared(), format)?)?;
        }
        Command::Build { graph: kind, format, out } => {
            let (g, irregular) = graph(shared(), kind)?;
            emit(out.as_deref(), &graph_text(&g, format)?)?;
            eprintln!("{}", g.summary(&[irregular]));
        }
        Command::Classify { vertex, square, bound } => {
            let budget = budget()?;
            let v = shared()
                .by_id(&vertex)
                .map_err(|_| Failure::Usage(format!("unknown vertex `{vertex}`")))?;
            let n = u8::from(square == 6);
            let mut out = format!("vertex={} square={}\n", v.id, target_square(n));
            for cls in ElementClass::ALL {
                let exists = exists_class(v, n, cls);
                out.push_str(&format!("{}: {exists}", cls.as_str()));
                if exists {
                    out.push_str(&format!(" witness={}", construct_witness(v, n, cls)?));
                }
                if let Some(b) = bound {
                    let cfg = SearchConfig { bound: b, budget };
                    match search_witness_with(&v.lminus, target_square(n), cls, &cfg)? {
                        Some(x) => out.push_str(&format!(" search={x}")),
                        None => out.push_str(" search=none"),
                    }
                }
                out.push('\n');
            }
            emit(None, &out)?;
        }
        Command::Verify { suite } => {
            let verifier = Verifier::default().with_budget(budget()?);
            let reports: Vec<_> = if suite.is_empty() {
                verifier.run_all()
            } else {
                suite.iter().map(|&s| verifier.run(s)).collect()
            };
            let text: String = reports.iter().map(|r| r.line() + "\n").collect();
            emit(None, &text)?;
            if !all_passed(&reports) {
                return Err(Failure::Verification("verification failed".into()));
            }
        }
        Command::Export { out } => {
            fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            let cat = shared();
            emit(Some(&out.join("catalog.json")), &catalog_text(cat, CatalogFormat::Json)?)?;
            emit(Some(&out.join("catalog.txt")), &catalog_text(cat, CatalogFormat::Table)?)?;
            for (kind, name) in [(GraphKind::K3, "k3"), (GraphKind::K4, "k4")] {
                let (g, _) = graph(cat, kind)?;
                emit(Some(&out.join(format!("{name}.json"))), &graph_text(&g, GraphFormat::Json)?)?;
                emit(Some(&out.join(format!("{name}.dot"))), &graph_text(&g, GraphFormat::Dot)?)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squares_are_restricted() {
        assert_eq!(parse_square("-2"), Ok(-2));
        assert_eq!(parse_square("6"), Ok(6));
        assert!(parse_square("2").is_err());
        assert!(parse_square("x").is_err());
    }

    #[test]
    fn flags_parse() {
        let cli = Cli::try_parse_from(["k4graph", "classify", "--vertex", "[S]", "--square", "-2"]);
        assert!(cli.is_ok());
        assert!(Cli::try_parse_from(["k4graph", "catalog", "--format", "xml"]).is_err());
        assert!(Cli::try_parse_from(["k4graph", "verify", "--suite", "nope"]).is_err());
    }
}
