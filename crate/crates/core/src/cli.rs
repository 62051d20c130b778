//! The `pgx` command line.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::catalog::CensusDir;
use crate::census;
use crate::config::{CliConfig, Overrides};
use crate::error::{Error, Result};
use crate::groupspec::GroupSpec;
use crate::powergraph::{build_directed, ExportFormat};
use crate::report::{OutputFormat, Table, VerificationReport};
use crate::spectrum::{GroupStats, OrderSpectrum};

/// Exit code for input, parse and resource errors.
pub const EXIT_ERROR: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "pgx",
    version,
    about = "Power graphs of finite groups: exact statistics, graph export and extremal checks"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Largest group order for which explicit power graphs are built.
    #[arg(long, global = true)]
    brute_cap: Option<usize>,
    /// Largest group order validated with every associativity triple.
    #[arg(long, global = true)]
    assoc_cap: Option<usize>,
    /// Directory of Cayley tables laid out as <dir>/<order>/*.cayley.
    #[arg(long, global = true)]
    census_dir: Option<PathBuf>,
    /// Seed for sampled validation and randomized checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Configuration file (default: ./pgx.toml when present).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Text,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Text => OutputFormat::Text,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Order sum, phi sum and edge counts of a group.
    Stats { spec: String },
    /// Element-order spectrum of a group.
    Spectrum { spec: String },
    /// Export the power graph of a group.
    Graph {
        spec: String,
        #[arg(value_enum)]
        kind: GraphKind,
        #[arg(value_enum)]
        export: GraphFormat,
        /// Output file (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a claim over a parameter range.
    Verify(VerifyArgs),
    /// Exploratory scans with no pass/fail contract.
    Scan {
        #[arg(value_enum)]
        target: ScanTarget,
        #[arg(long)]
        n_max: u128,
    },
    /// Manage the census directory.
    Census {
        #[command(subcommand)]
        action: CensusAction,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GraphKind {
    Directed,
    Undirected,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GraphFormat {
    Dot,
    EdgeCsv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ScanTarget {
    #[value(name = "conjecture-2.9")]
    Conjecture29,
}

#[derive(Debug, Subcommand)]
enum CensusAction {
    /// Validate the .cayley files in DIR and copy them into the census.
    Ingest { dir: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Claim {
    #[value(name = "main-theorem")]
    MainTheorem,
    #[value(name = "prop-2.2")]
    Prop22,
    #[value(name = "cor-2.3")]
    Cor23,
    #[value(name = "lemma-2.4")]
    Lemma24,
    #[value(name = "lemma-2.5")]
    Lemma25,
    #[value(name = "cor-2.6")]
    Cor26,
    #[value(name = "prop-2.8")]
    Prop28,
    #[value(name = "lemma-2.1")]
    Lemma21,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    claim: Claim,
    /// Group order (main-theorem) or exponent of p (prop-2.2, cor-2.3, prop-2.8).
    #[arg(long)]
    n: Option<u128>,
    /// Check every admissible order up to this bound (main-theorem).
    #[arg(long)]
    n_max: Option<u128>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    p_max: Option<u64>,
    #[arg(long)]
    m_max: Option<u32>,
    #[arg(long)]
    q_max: Option<u64>,
    #[arg(long)]
    t_max: Option<u32>,
    /// Number of random pairs (lemma-2.1).
    #[arg(long)]
    pairs: Option<usize>,
    /// Largest factor order in the random pool (lemma-2.1).
    #[arg(long)]
    max_order: Option<u64>,
    /// Run main-theorem on even orders; the verdict is exploratory.
    #[arg(long)]
    allow_even: bool,
    /// With --n-max, skip orders whose catalog is incomplete.
    #[arg(long)]
    complete_only: bool,
}

impl VerifyArgs {
    fn given(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        let mut flag = |set: bool, name| {
            if set {
                v.push(name)
            }
        };
        flag(self.n.is_some(), "--n");
        flag(self.n_max.is_some(), "--n-max");
        flag(self.p.is_some(), "--p");
        flag(self.p_max.is_some(), "--p-max");
        flag(self.m_max.is_some(), "--m-max");
        flag(self.q_max.is_some(), "--q-max");
        flag(self.t_max.is_some(), "--t-max");
        flag(self.pairs.is_some(), "--pairs");
        flag(self.max_order.is_some(), "--max-order");
        flag(self.allow_even, "--allow-even");
        flag(self.complete_only, "--complete-only");
        v
    }

    fn allowed(&self) -> &'static [&'static str] {
        match self.claim {
            Claim::MainTheorem => &["--n", "--n-max", "--allow-even", "--complete-only"],
            Claim::Prop22 | Claim::Cor23 | Claim::Prop28 => &["--p", "--n"],
            Claim::Lemma24 | Claim::Lemma25 => &["--p-max", "--m-max"],
            Claim::Cor26 => &["--q-max", "--t-max"],
            Claim::Lemma21 => &["--pairs", "--max-order"],
        }
    }

    fn check_flags(&self, claim: &str) -> Result<()> {
        let allowed = self.allowed();
        if let Some(f) = self.given().into_iter().find(|f| !allowed.contains(f)) {
            return Err(Error::input(format!(
                "{f} does not apply to {claim} (accepted: {})",
                allowed.join(", ")
            )));
        }
        Ok(())
    }

    fn exponent(&self) -> Result<u32> {
        let n = self.n.unwrap_or(3);
        u32::try_from(n).map_err(|_| Error::input(format!("--n {n} is too large for an exponent")))
    }

    fn prime(&self) -> Result<u64> {
        self.p.ok_or_else(|| Error::input("--p is required"))
    }
}

fn claim_name(c: Claim) -> String {
    c.to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default()
}

/// Parses a group spec, pointing at the offending column on syntax errors.
fn parse_spec(text: &str) -> Result<GroupSpec> {
    GroupSpec::parse(text).map_err(|e| match e {
        Error::Syntax { column, .. } => Error::input(format!(
            "{e}\n  {text}\n  {}^",
            " ".repeat(column.saturating_sub(1))
        )),
        other => other,
    })
}

struct Ctx {
    cfg: CliConfig,
}

impl Ctx {
    fn census(&self) -> Option<CensusDir> {
        self.cfg
            .census_dir
            .as_ref()
            .map(|d| CensusDir::new(d, self.cfg.validation_policy()))
    }
}

#[derive(Serialize)]
struct StatsOutput<'a> {
    spec: String,
    stats: &'a GroupStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<&'static str>,
}

fn write_json<T: Serialize>(value: &T, out: &mut dyn Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)
        .map_err(|e| Error::invariant(format!("json: {e}")))?;
    writeln!(out)?;
    Ok(())
}

fn cmd_stats(ctx: &Ctx, text: &str, out: &mut dyn Write) -> Result<i32> {
    let spec = parse_spec(text)?;
    let spectrum = spec.spectrum()?;
    let stats = GroupStats::from_spectrum(spec.to_string(), &spectrum)?;
    let oracle = if spectrum.total() <= ctx.cfg.brute_cap as u128 {
        let g = spec.build()?;
        let counts = build_directed(&g, ctx.cfg.brute_cap)?.counts();
        if stats.directed_arcs != counts.arcs.into()
            || stats.mutual_edges != counts.mutual_pairs.into()
            || stats.undirected_edges != counts.edges.into()
        {
            return Err(Error::invariant(format!(
                "{spec}: spectrum formulas disagree with the explicit graph ({counts:?})"
            )));
        }
        Some("consistent")
    } else {
        None
    };
    match ctx.cfg.format {
        OutputFormat::Json => write_json(
            &StatsOutput {
                spec: spec.to_string(),
                stats: &stats,
                oracle,
            },
            out,
        )?,
        OutputFormat::Csv => {
            let mut t = Table::new(&GroupStats::CSV_HEADER);
            t.push(stats.csv_record().to_vec());
            t.write_csv(out)?;
        }
        OutputFormat::Text => {
            let mut t = Table::new(&["field", "value"]);
            for (k, v) in GroupStats::CSV_HEADER.iter().zip(stats.csv_record()) {
                t.push(vec![k.to_string(), v]);
            }
            if let Some(o) = oracle {
                t.push(vec!["oracle".into(), o.into()]);
            }
            t.write_text(out)?;
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct SpectrumOutput<'a> {
    spec: String,
    size: String,
    spectrum: &'a OrderSpectrum,
}

fn cmd_spectrum(ctx: &Ctx, text: &str, out: &mut dyn Write) -> Result<i32> {
    let spec = parse_spec(text)?;
    let spectrum = spec.spectrum()?;
    match ctx.cfg.format {
        OutputFormat::Json => write_json(
            &SpectrumOutput {
                spec: spec.to_string(),
                size: spectrum.total().to_string(),
                spectrum: &spectrum,
            },
            out,
        )?,
        format => {
            let mut t = Table::new(&["order", "count"]);
            for (o, c) in spectrum.iter() {
                t.push(vec![o.to_string(), c.to_string()]);
            }
            if format == OutputFormat::Csv {
                t.write_csv(out)?;
            } else {
                t.write_text(out)?;
            }
        }
    }
    Ok(0)
}

fn cmd_graph(
    ctx: &Ctx,
    text: &str,
    kind: GraphKind,
    export: GraphFormat,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32> {
    let spec = parse_spec(text)?;
    let order = spec.order()?;
    if order > ctx.cfg.brute_cap as u128 {
        return Err(Error::Resource(format!(
            "{spec} has order {order} above the explicit-graph cap {}",
            ctx.cfg.brute_cap
        )));
    }
    let g = spec.build()?;
    let graph = build_directed(&g, ctx.cfg.brute_cap)?;
    let format = match export {
        GraphFormat::Dot => ExportFormat::Dot,
        GraphFormat::EdgeCsv => ExportFormat::EdgeCsv,
    };
    let write = |sink: &mut dyn Write| match kind {
        GraphKind::Directed => graph.export(format, sink),
        GraphKind::Undirected => graph.undirected().export(format, sink),
    };
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|source| Error::File {
                path: p.to_path_buf(),
                source,
            })?;
            let mut w = BufWriter::new(file);
            write(&mut w)?;
            w.flush()?;
        }
        None => write(out)?,
    }
    Ok(0)
}

fn cmd_verify(ctx: &Ctx, args: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let name = claim_name(args.claim);
    args.check_flags(&name)?;
    let census = ctx.census();
    let census = census.as_ref();
    let report = match args.claim {
        Claim::MainTheorem => match (args.n, args.n_max) {
            (Some(n), None) => {
                if args.complete_only {
                    return Err(Error::input("--complete-only needs --n-max"));
                }
                census::verify_main_theorem(n, census, args.allow_even)?
            }
            (None, Some(m)) => {
                census::verify_main_theorem_range(m, census, args.allow_even, args.complete_only)?
            }
            _ => {
                return Err(Error::input(
                    "main-theorem needs exactly one of --n, --n-max",
                ))
            }
        },
        Claim::Prop22 => census::verify_prop_2_2(args.prime()?, args.exponent()?, census)?,
        Claim::Cor23 => census::verify_cor_2_3(args.prime()?, args.exponent()?, census)?,
        Claim::Prop28 => census::verify_prop_2_8(args.prime()?, args.exponent()?, census)?,
        Claim::Lemma24 => {
            census::verify_lemma_2_4(args.p_max.unwrap_or(97), args.m_max.unwrap_or(12))?
        }
        Claim::Lemma25 => {
            census::verify_lemma_2_5(args.p_max.unwrap_or(97), args.m_max.unwrap_or(12))?
        }
        Claim::Cor26 => census::verify_cor_2_6(args.q_max.unwrap_or(97), args.t_max.unwrap_or(12))?,
        Claim::Lemma21 => census::verify_lemma_2_1(
            args.pairs.unwrap_or(200),
            args.max_order.unwrap_or(200),
            ctx.cfg.seed,
            ctx.cfg.brute_cap,
            census,
        )?,
    };
    emit(ctx, &report, out)
}

fn emit(ctx: &Ctx, report: &VerificationReport, out: &mut dyn Write) -> Result<i32> {
    report.check()?;
    report.render(ctx.cfg.format, out)?;
    Ok(report.exit_code())
}

#[derive(Serialize)]
struct IngestRow {
    file: String,
    order: usize,
    destination: String,
    validation: String,
}

fn cmd_ingest(ctx: &Ctx, dir: &Path, out: &mut dyn Write) -> Result<i32> {
    let census = ctx.census().ok_or_else(|| {
        Error::input("census ingest needs a census directory (--census-dir or PGX_CENSUS_DIR)")
    })?;
    let records = census.ingest(dir)?;
    let rows: Vec<IngestRow> = records
        .iter()
        .map(|r| IngestRow {
            file: r
                .source
                .file_name()
                .unwrap_or_default()
                .to_string_lossy()
                .into_owned(),
            order: r.order,
            destination: r.destination.display().to_string(),
            validation: match r.validation.mode {
                crate::group::ValidationMode::Full => "full".to_string(),
                crate::group::ValidationMode::Sampled { triples, .. } => {
                    format!("sampled ({triples} triples)")
                }
            },
        })
        .collect();
    match ctx.cfg.format {
        OutputFormat::Json => write_json(&rows, out)?,
        format => {
            let mut t = Table::new(&["file", "order", "destination", "validation"]);
            for r in &rows {
                t.push(vec![
                    r.file.clone(),
                    r.order.to_string(),
                    r.destination.clone(),
                    r.validation.clone(),
                ]);
            }
            if format == OutputFormat::Csv {
                t.write_csv(out)?;
            } else {
                t.write_text(out)?;
            }
        }
    }
    Ok(0)
}

fn dispatch(cli: Cli, cfg: CliConfig, out: &mut dyn Write) -> Result<i32> {
    let ctx = Ctx { cfg };
    match &cli.command {
        Command::Stats { spec } => cmd_stats(&ctx, spec, out),
        Command::Spectrum { spec } => cmd_spectrum(&ctx, spec, out),
        Command::Graph {
            spec,
            kind,
            export,
            out: path,
        } => cmd_graph(&ctx, spec, *kind, *export, path.as_deref(), out),
        Command::Verify(args) => cmd_verify(&ctx, args, out),
        Command::Scan {
            target: ScanTarget::Conjecture29,
            n_max,
        } => {
            let census = ctx.census();
            let report = census::scan_conjecture_2_9(*n_max, census.as_ref())?;
            emit(&ctx, &report, out)
        }
        Command::Census {
            action: CensusAction::Ingest { dir },
        } => cmd_ingest(&ctx, dir, out),
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(
    args: I,
    env: impl Fn(&str) -> Option<String>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    0
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    EXIT_ERROR
                }
            };
        }
    };
    let overrides = Overrides {
        brute_cap: cli.brute_cap,
        assoc_cap: cli.assoc_cap,
        census_dir: cli.census_dir.clone(),
        format: cli.format.map(OutputFormat::from),
        seed: cli.seed,
    };
    let result = CliConfig::resolve(&overrides, cli.config.as_deref(), env)
        .and_then(|cfg| dispatch(cli, cfg, out));
    let _ = out.flush();
    match result {
        Ok(code) => code,
        // reader went away (`pgx ... | head`); nothing left to report to
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pgx(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("pgx").chain(args.iter().copied());
        let code = run(argv, |_| None, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn stats_text_and_oracle() {
        let (code, out, _) = pgx(&["stats", "Q8"]);
        assert_eq!(code, 0);
        assert!(out.contains("undirected_edges  16"), "{out}");
        assert!(out.contains("oracle            consistent"), "{out}");
    }

    #[test]
    fn stats_csv_has_seven_columns() {
        let (code, out, _) = pgx(&["stats", "C9xC3", "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(
            out,
            "name,size,sigma,phi_sum,directed_arcs,mutual_edges,undirected_edges\nC9xC3,27,187,125,160,49,111\n"
        );
    }

    #[test]
    fn stats_json_big_cyclic_has_no_oracle() {
        let (code, out, _) = pgx(&["stats", "C1000000", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(v.get("oracle").is_none());
        assert_eq!(v["stats"]["size"].to_string(), "1000000");
    }

    #[test]
    fn syntax_errors_point_at_column() {
        let (code, _, err) = pgx(&["stats", "C9xZ3"]);
        assert_eq!(code, 3);
        assert!(err.contains("column 4"), "{err}");
        assert!(err.contains("\n     ^"), "{err}");
    }

    #[test]
    fn verify_exit_codes() {
        assert_eq!(pgx(&["verify", "main-theorem", "--n", "135"]).0, 0);
        assert_eq!(pgx(&["verify", "main-theorem", "--n", "30"]).0, 3);
        assert_eq!(pgx(&["verify", "prop-2.8", "--p", "2", "--n", "4"]).0, 2);
        assert_eq!(pgx(&["verify", "main-theorem", "--p", "3"]).0, 3);
        assert_eq!(pgx(&["verify", "nonsense"]).0, 3);
        assert_eq!(
            pgx(&["verify", "lemma-2.4", "--p-max", "11", "--m-max", "4"]).0,
            0
        );
    }

    #[test]
    fn graph_to_stdout() {
        let (code, out, _) = pgx(&["graph", "C2", "undirected", "edge-csv"]);
        assert_eq!(code, 0);
        assert_eq!(out, "a,b\n0,1\n");
        let (code, _, err) = pgx(&["graph", "C5000", "directed", "dot"]);
        assert_eq!(code, 3);
        assert!(err.contains("cap"), "{err}");
    }

    #[test]
    fn spectrum_table() {
        let (code, out, _) = pgx(&["spectrum", "D8", "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(out, "order,count\n1,1\n2,5\n4,2\n");
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = pgx(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("verify"));
    }
}
