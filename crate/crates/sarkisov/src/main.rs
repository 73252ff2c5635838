use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sarkisov::catalog::{fixture, fixtures};
use sarkisov::diagram::{render, Format};
use sarkisov::report::{run_batch, run_family, BatchSummary, CaseReport, RunOptions};
use sarkisov::schema::{parse_family, FamilySpec, SpecError};

#[derive(Parser)]
#[command(name = "sarkisov", version, about = "Two-ray games on Kawamata blow-ups of Fano complete intersections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Upper bound on unprojections per case.
    #[arg(long, global = true, default_value_t = 3)]
    max_unprojections: usize,
    /// Treat advisory mismatches (printed flip labels) as failures.
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run one or more family files.
    Run { files: Vec<PathBuf> },
    /// Run the bundled catalogue and print a summary.
    Catalog,
    /// Draw the cone and game of a family file or bundled family id.
    Diagram { family: String },
}

fn load(path: &PathBuf) -> Result<FamilySpec, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_family(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn describe(r: &CaseReport) -> String {
    let mut s = render(r, Format::Text);
    if let Some(b) = &r.blowup {
        s.push_str(&format!("blow-up: tangents {:?}, m = [{}], -K = ({},{})\n", b.tangents, b.valuations.join(", "), b.minus_k[0], b.minus_k[1]));
    }
    for u in &r.unprojections {
        s.push_str(&format!("unprojection {} from ({}) of weight ({},{})\n", u.name, u.ideal.join(","), u.weight[0], u.weight[1]));
    }
    if let Some(c) = &r.curve {
        s.push_str(&format!("curve: C.E = {}, C.D = {}, C.(-K) = {}, excluded = {}\n", c.c_e, c.c_d, c.c_k, c.excluded));
    }
    if let Some(e) = &r.endpoint {
        s.push_str(&format!("endpoint: {} contracted, {:?} with weights {:?}\n", e.contracted, e.variables, e.weights));
    }
    for w in &r.warnings {
        s.push_str(&format!("warning: {w}\n"));
    }
    s
}

fn emit(reports: &[CaseReport], summary: &BatchSummary, format: Format) {
    match format {
        Format::Json => {
            let value = serde_json::json!({ "reports": reports, "summary": summary });
            println!("{}", serde_json::to_string_pretty(&value).expect("reports serialize"));
        }
        Format::Svg => {
            for r in reports {
                print!("{}", render(r, Format::Svg));
            }
        }
        Format::Text => {
            for r in reports {
                println!("{}", describe(r));
            }
            print!("{}", summary.render());
        }
    }
}

fn exit_code(summary: &BatchSummary, strict: bool) -> ExitCode {
    if !summary.all_match() || (strict && !summary.advisory_mismatches.is_empty()) {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = RunOptions { max_unprojections: cli.max_unprojections };
    let specs: Result<Vec<FamilySpec>, String> = match &cli.command {
        Command::Run { files } if files.is_empty() => Err("no family files given".into()),
        Command::Run { files } => files.iter().map(load).collect(),
        Command::Catalog => fixtures().map_err(|e: SpecError| e.to_string()),
        Command::Diagram { family } => {
            let path = PathBuf::from(family);
            if path.exists() {
                load(&path).map(|s| vec![s])
            } else {
                fixture(family).map(|s| vec![s]).map_err(|e| e.to_string())
            }
        }
    };
    let specs = match specs {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Command::Diagram { .. } = cli.command {
        return match run_family(&specs[0], opts) {
            Ok(r) => {
                print!("{}", render(&r, cli.format));
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        };
    }
    match run_batch(&specs, opts) {
        Ok((reports, summary)) => {
            emit(&reports, &summary, cli.format);
            exit_code(&summary, cli.strict)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
