use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use qpb::algebra::show_vec;
use qpb::braiding::classicality_report;
use qpb::gauge::Gauge;
use qpb::linalg::{add_entry, SVec};
use qpb::runner::{run_suites, RunOptions, Suite};
use qpb::specfile::{generate_example, load, Built, GenOptions};
use qpb::{Error, Result, Scalar};

#[derive(Parser)]
#[command(name = "qpb", version, about = "Exact checks for quantum principal bundles over finite quantum groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write an example specification file.
    Gen {
        /// c-group, group-algebra, trivial-bundle or point-bundle.
        preset: String,
        #[arg(long, default_value = "Z2")]
        group: String,
        /// function or group-algebra.
        #[arg(long)]
        kind: Option<String>,
        #[arg(long, default_value_t = 1)]
        base_points: usize,
        /// universal or zero.
        #[arg(long)]
        fodc: Option<String>,
        /// trivial or universal.
        #[arg(long)]
        base_calculus: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Parse and build a file, checking its `expect` block.
    Validate { file: PathBuf },
    /// Run identity suites.
    Check {
        file: PathBuf,
        /// translation, braiding, gauge, classical, differential or all;
        /// comma-separated.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 2)]
        degree: u8,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        report: Format,
        #[arg(long)]
        fail_fast: bool,
        /// Include wall times (reports are then not byte-stable).
        #[arg(long)]
        timing: bool,
    },
    /// Print the Haar integral on the structure Hopf algebra.
    Haar { file: PathBuf },
    /// Run the four classicality tests.
    Classicality { file: PathBuf },
    #[command(subcommand)]
    Gauge(GaugeCommand),
}

#[derive(Subcommand)]
enum GaugeCommand {
    /// List the gauge transformations and their group table.
    Enumerate { file: PathBuf },
    /// Apply the `K`-th gauge transformation to an element of the bundle.
    Act {
        file: PathBuf,
        #[arg(long)]
        gamma: usize,
        /// `;`-separated terms `label` or `scalar*label`.
        #[arg(long)]
        element: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn read(path: &Path) -> Result<Built> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    load(&text)
}

fn parse_element(built: &Built, expr: &str) -> Result<SVec> {
    let space = &built.bundle.total.space;
    let mut v = SVec::new();
    for term in expr.split(';').map(str::trim).filter(|t| !t.is_empty()) {
        let (coef, label) = match term.rsplit_once('*') {
            Some((c, l)) if space.index_of(l.trim()).is_some() => (Scalar::parse(c, built.conductor)?, l.trim()),
            _ => (Scalar::one(), term),
        };
        let i = space.index_of(label).ok_or_else(|| Error::Input(format!("unknown basis element `{label}`")))?;
        add_entry(&mut v, i, &coef);
    }
    Ok(v)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen { preset, group, kind, base_points, fodc, base_calculus, output } => {
            let spec = generate_example(&preset, &GenOptions { group, kind, base_points, fodc, base_calculus })?;
            let text = spec.to_json();
            match output {
                Some(p) => std::fs::write(&p, text).map_err(|e| Error::Input(format!("{}: {e}", p.display())))?,
                None => print!("{text}"),
            }
        }
        Command::Validate { file } => {
            let built = read(&file)?;
            let rep = run_suites(&built, &[], RunOptions::default())?;
            let b = &built.bundle;
            println!("hopf: dim {}", b.dim_h());
            println!("bundle: dim {}, base dim {}", b.dim(), b.base.len());
            if let Some(f) = &built.fodc {
                println!("fodc: dim Γ_inv {}", f.dim());
            }
            print!("{}", rep.to_text());
            if !rep.all_pass() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Check { file, suite, degree, report, fail_fast, timing } => {
            let suites: Vec<Suite> = Suite::parse_list(&suite)?;
            let built = read(&file)?;
            let rep = run_suites(&built, &suites, RunOptions { degree, fail_fast, timing })?;
            match report {
                Format::Text => print!("{}", rep.to_text()),
                Format::Json => println!("{}", rep.to_json()),
            }
            if !rep.all_pass() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Haar { file } => {
            let built = read(&file)?;
            let h = &built.bundle.group;
            let haar = h.haar.as_ref().ok_or(Error::NoHaar)?;
            let out: serde_json::Map<_, _> =
                haar.iter().enumerate().map(|(i, x)| (h.label(i).to_string(), json!(x.to_string()))).collect();
            println!("{}", serde_json::to_string_pretty(&out).expect("json"));
        }
        Command::Classicality { file } => {
            let built = read(&file)?;
            let d = classicality_report(&built.bundle)?;
            println!("{}", serde_json::to_string_pretty(&d.to_json()).expect("json"));
        }
        Command::Gauge(GaugeCommand::Enumerate { file }) => {
            let built = read(&file)?;
            let g = Gauge::new(&built.bundle)?;
            let gg = g.gauge_group()?;
            let b = &built.bundle;
            for (k, t) in gg.elements.iter().enumerate() {
                let vals: Vec<String> = t.values.iter().map(|v| show_vec(v, &b.total.space)).collect();
                println!("{k}: {} = [{}]", t.name, vals.join(", "));
            }
            if let Some(t) = &gg.table {
                println!("group table:");
                for row in &t.mul {
                    println!("  {}", row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
                }
            }
            print!("{}", gg.report.to_text());
            if !gg.report.all_pass() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Gauge(GaugeCommand::Act { file, gamma, element }) => {
            let built = read(&file)?;
            let x = parse_element(&built, &element)?;
            let g = Gauge::new(&built.bundle)?;
            let gg = g.gauge_group()?;
            let t = gg
                .elements
                .get(gamma)
                .ok_or_else(|| Error::Input(format!("gauge transformation {gamma} out of range ({})", gg.elements.len())))?;
            println!("{}", show_vec(&g.act(t, &x), &built.bundle.total.space));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
