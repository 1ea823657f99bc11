//! Command-line surface of the verification toolkit.
//!
//! Exit codes: 0 when every executed check passes, 1 when at least one
//! fails, 2 for usage or configuration errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use polyext::extension::extend;
use polyext::field::{load_field, make_test_function_by_name, write_field_file, ExtensionField, RhoGrid, YLadder};
use polyext::orders::{d_constant, hardy_constant, kappa, make_order, poisson_normalizer, HardyParams};
use polyext::report::{render_report, run_suite, write_report, ReportFormat, SuiteConfig};

#[derive(Parser)]
#[command(name = "polyext", version, about = "Fractional-order extension operators and their verification suite")]
struct Cli {
    /// JSON suite configuration (defaults apply field-by-field)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// write the report (or field) here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// multiply every tolerance (loose-grid smoke runs)
    #[arg(long, global = true)]
    tol_scale: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> ReportFormat {
        match f {
            Format::Json => ReportFormat::Json,
            Format::Text => ReportFormat::Text,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the closed-form constants for requested orders
    Constants {
        /// fractional orders, comma separated
        #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.5, 2.5])]
        s: Vec<f64>,
        /// trace dimension for the kernel normalizer
        #[arg(long, default_value_t = 2)]
        n: u32,
    },
    /// Kernel battery: mass, Fourier transform, differential identities
    Kernel,
    /// Extend a trace family and dump the field file
    Extend {
        #[arg(long, default_value = "gaussian")]
        family: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        s: f64,
    },
    /// Energy identity battery
    Energy,
    /// Boundary-limit (conormal derivative) battery
    Dtn,
    /// Taylor expansion battery
    Taylor,
    /// Weighted Hardy inequality battery
    Hardy,
    /// Run the full configured suite
    Suite,
    /// Inspect a field file and optionally re-emit it
    Dump {
        /// path of a v1 field file
        #[arg(long)]
        input: PathBuf,
    },
}

fn load_config(cli: &Cli) -> Result<SuiteConfig, String> {
    let mut config = match &cli.config {
        None => SuiteConfig::default(),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            serde_json::from_str(&text).map_err(|e| format!("bad config: {e}"))?
        }
    };
    if let Some(ts) = cli.tol_scale {
        config.tol_scale = ts;
    }
    config.validate().map_err(|e| e.to_string())?;
    Ok(config)
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), String> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
    }
}

fn run_groups(cli: &Cli, groups: &[&str]) -> Result<ExitCode, String> {
    let mut config = load_config(cli)?;
    config.groups = groups.iter().map(|s| s.to_string()).collect();
    let report = run_suite(&config).map_err(|e| e.to_string())?;
    let rendered = render_report(&report, cli.format.into());
    match &cli.out {
        None => print!("{rendered}"),
        Some(path) => {
            write_report(&report, path, cli.format.into()).map_err(|e| e.to_string())?;
        }
    }
    Ok(if report.all_pass() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn constants_table(s_values: &[f64], n: u32, format: Format) -> Result<String, String> {
    let mut rows = Vec::new();
    for &s in s_values {
        let order = make_order(n.max(2 * s.ceil() as u32), s).map_err(|e| e.to_string())?;
        let d = d_constant(s).map_err(|e| e.to_string())?;
        let mut kappas = Vec::new();
        for m in 0..=order.int_part {
            kappas.push(kappa(s, m).map_err(|e| e.to_string())?);
        }
        let c = poisson_normalizer(n, s).map_err(|e| e.to_string())?;
        let h = HardyParams::new(n.max(2 * s.ceil() as u32 + 1), 1 + order.int_part, 0.0, order.b)
            .ok()
            .map(|p| hardy_constant(p).unwrap());
        rows.push(serde_json::json!({
            "s": s,
            "b": order.b,
            "d": d,
            "kappa": kappas,
            "poisson_norm": { "n": n, "value": c },
            "hardy": h,
        }));
    }
    match format {
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&rows).unwrap();
            text.push('\n');
            Ok(text)
        }
        Format::Text => {
            let mut out = String::new();
            out.push_str(&format!(
                "{:>6} {:>8} {:>14} {:>14} {:>12} {:>28}\n",
                "s", "b", "d_s", "c_{n,s}", "H_{1+[s]}", "kappa_{s,m}"
            ));
            for row in rows {
                let kappas: Vec<String> = row["kappa"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|v| format!("{:.6}", v.as_f64().unwrap()))
                    .collect();
                let hardy = row["hardy"].as_f64().map_or("-".to_string(), |h| format!("{h:.8}"));
                out.push_str(&format!(
                    "{:>6} {:>8} {:>14.10} {:>14.10} {:>12} {:>28}\n",
                    row["s"],
                    row["b"],
                    row["d"].as_f64().unwrap(),
                    row["poisson_norm"]["value"].as_f64().unwrap(),
                    hardy,
                    kappas.join(", ")
                ));
            }
            Ok(out)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, String> {
    match &cli.command {
        Command::Constants { s, n } => {
            let table = constants_table(s, *n, cli.format)?;
            emit(&table, &cli.out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Kernel => run_groups(cli, &["kernel"]),
        Command::Energy => run_groups(cli, &["energy"]),
        Command::Dtn => run_groups(cli, &["dtn"]),
        Command::Taylor => run_groups(cli, &["taylor"]),
        Command::Hardy => run_groups(cli, &["hardy"]),
        Command::Suite => {
            let config = load_config(cli)?;
            let report = run_suite(&config).map_err(|e| e.to_string())?;
            let rendered = render_report(&report, cli.format.into());
            match &cli.out {
                None => print!("{rendered}"),
                Some(path) => write_report(&report, path, cli.format.into()).map_err(|e| e.to_string())?,
            }
            Ok(if report.all_pass() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Extend { family, n, s } => {
            let order = make_order(*n, *s).map_err(|e| e.to_string())?;
            let u = make_test_function_by_name(family, RhoGrid::standard(*n)).map_err(|e| e.to_string())?;
            let field = extend(&u, order.s, &YLadder::standard()).map_err(|e| e.to_string())?;
            let file = field.to_file();
            let path = cli
                .out
                .as_deref()
                .ok_or_else(|| "extend needs --out <path> for the field file".to_string())?;
            write_field_file(&file, path).map_err(|e| e.to_string())?;
            eprintln!("wrote {} rows to {}", file.rows.len(), path.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Dump { input } => {
            let file = load_field(input).map_err(|e| e.to_string())?;
            let summary = serde_json::json!({
                "kind": if file.kind == polyext::field::FieldKind::Spectral { "spectral" } else { "physical" },
                "n": file.n,
                "alpha": file.alpha,
                "b": file.b,
                "rows": file.rows.len(),
                "reconstructs": ExtensionField::from_file(&file).is_ok(),
            });
            emit(&format!("{}\n", serde_json::to_string_pretty(&summary).unwrap()), &cli.out)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse(); // clap exits with code 2 on usage errors
    match run(&cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
