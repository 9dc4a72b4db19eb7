//! Command-line interface. Every command returns an [`Outcome`] instead of
//! printing, so the binary is a thin wrapper and tests can drive it.

use std::ffi::OsString;
use std::fmt::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::algebra::GraphPattern;
use crate::bind::bind_pattern;
use crate::eval::{eval_pattern_with, EvalOptions};
use crate::fixtures::{fixture, mapping_name, FIXTURES};
use crate::normalize::{normalize_pattern, NormalizeOptions, Semantics};
use crate::parser::{parse_pattern, parse_query};
use crate::results::{result_vars, to_json_string, to_tsv};
use crate::scope::in_domain;
use crate::serialize::{serialize, serialize_query};
use crate::solution::{format_mapping, format_set, parse_mapping, SolutionSet};
use crate::term::{Dataset, Graph};
use crate::turtle::parse_data;

/// Environment variable fixing the first fresh-variable index.
pub const SEED_VAR: &str = "EXISTS_LAB_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_EVAL: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "exists-lab", version, about = "Evaluate correlated EXISTS under three substitution semantics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SemanticsArg {
    S1,
    S2,
    S3,
}

impl From<SemanticsArg> for Semantics {
    fn from(s: SemanticsArg) -> Self {
        match s {
            SemanticsArg::S1 => Semantics::S1,
            SemanticsArg::S2 => Semantics::S2,
            SemanticsArg::S3 => Semantics::S3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a query and print its results.
    Run {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        query: PathBuf,
        #[arg(long, value_enum, default_value = "s2")]
        semantics: SemanticsArg,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Use this named graph as the active graph.
        #[arg(long)]
        graph: Option<String>,
    },
    /// Evaluate a query under all three semantics side by side.
    Compare {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        query: PathBuf,
        #[arg(long)]
        graph: Option<String>,
    },
    /// Run the embedded reference queries and check every cell.
    PaperTable {
        /// Only this row.
        #[arg(long)]
        only: Option<u8>,
        /// Debugging aid: skip the S3 correlation of unprojected
        /// sub-select variables.
        #[arg(long, hide = true)]
        no_s3_select_links: bool,
    },
    /// Print the normalized pattern and its d and g records.
    Normalize {
        #[arg(long)]
        query: PathBuf,
        #[arg(long, value_enum, default_value = "s2")]
        semantics: SemanticsArg,
    },
    /// Print the in-domain variables of a query or pattern.
    Dom {
        #[arg(long)]
        query: PathBuf,
    },
    /// Print a query correlated with a solution mapping.
    Bind {
        #[arg(long)]
        query: PathBuf,
        #[arg(long, value_enum, default_value = "s2")]
        semantics: SemanticsArg,
        /// Bindings such as `?x=:a,?y=1`.
        #[arg(long, default_value = "")]
        mapping: String,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, message: impl std::fmt::Display) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run_args<I, T>(args: I, seed: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_INPUT,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome::ok(text)
            };
        }
    };
    let opts = match seed.map(str::parse::<u32>) {
        None => NormalizeOptions::default(),
        Some(Ok(seed)) => NormalizeOptions {
            seed,
            ..Default::default()
        },
        Some(Err(e)) => return Outcome::fail(EXIT_INPUT, format!("{SEED_VAR}: {e}")),
    };
    execute(cli.command, opts)
}

pub fn execute(command: Command, opts: NormalizeOptions) -> Outcome {
    let result = match command {
        Command::Run {
            data,
            query,
            semantics,
            format,
            graph,
        } => cmd_run(&data, &query, semantics.into(), format, graph.as_deref(), opts),
        Command::Compare { data, query, graph } => cmd_compare(&data, &query, graph.as_deref(), opts),
        Command::PaperTable {
            only,
            no_s3_select_links,
        } => {
            let opts = NormalizeOptions {
                s3_select_links: !no_s3_select_links,
                ..opts
            };
            return cmd_paper_table(only, opts);
        }
        Command::Normalize { query, semantics } => cmd_normalize(&query, semantics.into(), opts),
        Command::Dom { query } => cmd_dom(&query),
        Command::Bind {
            query,
            semantics,
            mapping,
        } => cmd_bind(&query, semantics.into(), &mapping, opts),
    };
    result.unwrap_or_else(|(code, message)| Outcome::fail(code, message))
}

type CmdResult = Result<Outcome, (i32, String)>;

fn input_error(e: impl std::fmt::Display) -> (i32, String) {
    (EXIT_INPUT, e.to_string())
}

fn read(path: &Path) -> Result<String, (i32, String)> {
    std::fs::read_to_string(path).map_err(|e| (EXIT_INPUT, format!("{}: {e}", path.display())))
}

/// A full `SELECT` query, or else a bare group body.
fn load_pattern(path: &Path) -> Result<GraphPattern, (i32, String)> {
    let text = read(path)?;
    match parse_query(&text) {
        Ok(q) => Ok(q),
        Err(e) => parse_pattern(&text).map_err(|_| (EXIT_INPUT, format!("{}: {e}", path.display()))),
    }
}

fn load_data(path: &Path) -> Result<Dataset, (i32, String)> {
    parse_data(&read(path)?).map_err(|e| (EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn active_graph<'d>(dataset: &'d Dataset, name: Option<&str>, empty: &'d Graph) -> &'d Graph {
    match name {
        None => dataset.default_graph(),
        Some(n) => {
            let iri = n.strip_prefix('<').and_then(|s| s.strip_suffix('>')).unwrap_or(n);
            dataset.named_graph(iri).unwrap_or(empty)
        }
    }
}

fn evaluate(
    dataset: &Dataset,
    graph: &Graph,
    query: &GraphPattern,
    semantics: Semantics,
    opts: NormalizeOptions,
) -> Result<SolutionSet, (i32, String)> {
    let opts = EvalOptions {
        semantics,
        normalize: opts,
    };
    eval_pattern_with(dataset, graph, query, &opts).map_err(|e| (EXIT_EVAL, e.to_string()))
}

pub fn cmd_run(
    data: &Path,
    query: &Path,
    semantics: Semantics,
    format: Format,
    graph: Option<&str>,
    opts: NormalizeOptions,
) -> CmdResult {
    let dataset = load_data(data)?;
    let q = load_pattern(query)?;
    let empty = Graph::new();
    let omega = evaluate(&dataset, active_graph(&dataset, graph, &empty), &q, semantics, opts)?;
    let vars = result_vars(&q);
    let mut out = match format {
        Format::Json => to_json_string(&vars, &omega),
        Format::Tsv => to_tsv(&vars, &omega),
    };
    if !out.ends_with('\n') {
        out.push('\n');
    }
    Ok(Outcome::ok(out))
}

pub fn cmd_compare(data: &Path, query: &Path, graph: Option<&str>, opts: NormalizeOptions) -> CmdResult {
    let dataset = load_data(data)?;
    let q = load_pattern(query)?;
    let empty = Graph::new();
    let g = active_graph(&dataset, graph, &empty);
    let mut out = String::new();
    for sem in Semantics::ALL {
        let omega = evaluate(&dataset, g, &q, sem, opts)?;
        writeln!(out, "{sem}\t{}", format_set(&omega)).unwrap();
    }
    Ok(Outcome::ok(out))
}

fn named_cell(omega: &SolutionSet) -> String {
    let names: Vec<String> = omega
        .iter()
        .map(|mu| mapping_name(mu).map_or_else(|| format_mapping(mu), str::to_owned))
        .collect();
    format!("{{{}}}", names.join(", "))
}

pub fn cmd_paper_table(only: Option<u8>, opts: NormalizeOptions) -> Outcome {
    let rows: Vec<_> = match only {
        None => FIXTURES.iter().collect(),
        Some(id) => match fixture(id) {
            Some(f) => vec![f],
            None => return Outcome::fail(EXIT_INPUT, format!("no row {id} (rows are 1 to {})", FIXTURES.len())),
        },
    };
    let start = Instant::now();
    let mut out = String::new();
    let mut mismatches = Vec::new();
    let mut cells = 0;
    writeln!(out, "{:<4}{:<18}{:<18}S3", "#", "S1", "S2").unwrap();
    for f in rows {
        let dataset = f.data.dataset();
        let q = match f.parse() {
            Ok(q) => q,
            Err(e) => return Outcome::fail(EXIT_INPUT, format!("row {}: {e}", f.id)),
        };
        let mut line = format!("{:<4}", f.id);
        for sem in Semantics::ALL {
            cells += 1;
            let got = match evaluate(&dataset, dataset.default_graph(), &q, sem, opts) {
                Ok(omega) => omega,
                Err((code, message)) => return Outcome::fail(code, format!("row {}: {message}", f.id)),
            };
            let want = f.expected(sem);
            let mut cell = named_cell(&got);
            if got != want {
                cell.push('*');
                mismatches.push(format!(
                    "row {} {sem}: expected {}, got {}",
                    f.id,
                    named_cell(&want),
                    named_cell(&got)
                ));
            }
            write!(line, "{cell:<18}").unwrap();
        }
        writeln!(out, "{}", line.trim_end()).unwrap();
    }
    let elapsed = start.elapsed();
    writeln!(
        out,
        "{}/{cells} cells match ({} ms)",
        cells - mismatches.len(),
        elapsed.as_millis()
    )
    .unwrap();
    if mismatches.is_empty() {
        Outcome::ok(out)
    } else {
        let mut stderr = String::new();
        for m in &mismatches {
            writeln!(stderr, "mismatch: {m}").unwrap();
        }
        Outcome {
            code: EXIT_MISMATCH,
            stdout: out,
            stderr,
        }
    }
}

pub fn cmd_normalize(query: &Path, semantics: Semantics, opts: NormalizeOptions) -> CmdResult {
    let p = load_pattern(query)?;
    let n = normalize_pattern(&p, semantics, &opts);
    let text = serialize_query(&n.pattern).unwrap_or_else(|| serialize(&n.pattern));
    Ok(Outcome::ok(format!("{text}\nd:\n{}g:\n{}", n.d, n.g)))
}

pub fn cmd_dom(query: &Path) -> CmdResult {
    let p = load_pattern(query)?;
    let mut names: Vec<String> = in_domain(&p).iter().map(|v| v.name()).collect();
    names.sort();
    let mut out = String::new();
    for n in names {
        writeln!(out, "{n}").unwrap();
    }
    Ok(Outcome::ok(out))
}

pub fn cmd_bind(query: &Path, semantics: Semantics, mapping: &str, opts: NormalizeOptions) -> CmdResult {
    let p = load_pattern(query)?;
    let mu = parse_mapping(mapping).map_err(input_error)?;
    let bound = bind_pattern(&p, &mu, semantics, &opts);
    Ok(Outcome::ok(format!("{}\n", serialize(&bound))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Outcome {
        let mut full = vec!["exists-lab"];
        full.extend_from_slice(args);
        run_args(full, None)
    }

    #[test]
    fn paper_table_passes() {
        let o = run(&["paper-table"]);
        assert_eq!(o.code, EXIT_OK, "{}{}", o.stdout, o.stderr);
        assert!(o.stdout.contains("30/30 cells match"));
    }

    #[test]
    fn disabling_select_links_breaks_row_two() {
        let o = run(&["paper-table", "--no-s3-select-links"]);
        assert_eq!(o.code, EXIT_MISMATCH);
        assert!(o.stderr.contains("row 2 s3"), "{}", o.stderr);
    }

    #[test]
    fn single_row() {
        let o = run(&["paper-table", "--only", "10"]);
        assert_eq!(o.code, EXIT_OK);
        assert!(o.stdout.contains("{mu_abc, mu_hi}"));
        assert!(o.stdout.contains("3/3 cells match"));
        assert_eq!(run(&["paper-table", "--only", "11"]).code, EXIT_INPUT);
    }

    #[test]
    fn usage_errors_and_help() {
        assert_eq!(run(&["frobnicate"]).code, EXIT_INPUT);
        let help = run(&["--help"]);
        assert_eq!(help.code, EXIT_OK);
        assert!(help.stdout.contains("paper-table"));
    }

    #[test]
    fn bad_seed_is_rejected() {
        let o = run_args(["exists-lab", "paper-table"], Some("minus one"));
        assert_eq!(o.code, EXIT_INPUT);
    }
}
