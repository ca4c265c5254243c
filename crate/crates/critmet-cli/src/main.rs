//! Command-line entry point: parse, run, emit, exit.

use std::io::Write;

use critmet_cli::{config, presets, registry, runner, table, CliError};

const GRAMMAR: &str = "\
usage:
  critmet <model> <operation> [--<param> VALUE | --<param>-grid MIN:MAX:POINTS[:log]]... [options]
  critmet preset <name> [options]
  critmet --help | --version

options:
  --out PATH        write the table to PATH instead of stdout
  --format NAME     output format: csv (default) or json
  --workers N       worker threads (default: CRITMET_WORKERS or all cores)
  --seed N          seed echoed in metadata and used by seeded presets (default: 42)
  --strict          abort on the first row whose evaluation fails

grids are inclusive of both endpoints; `:log` spaces points geometrically.
sweep rows follow the lexicographic order of the grids as given, last grid
fastest, and are byte-identical for any worker count.";

fn print_help() {
    println!("critmet {}: deterministic sweep tables for critical-metrology models", env!("CARGO_PKG_VERSION"));
    println!();
    println!("{GRAMMAR}");
    println!();
    println!("models and operations:");
    for model in registry::models() {
        for op in registry::operations(model) {
            let spec = registry::find(model, op).expect("listed operation resolves");
            let params: Vec<String> = spec
                .params
                .iter()
                .map(|p| match p.default {
                    Some(d) => format!("{}={d}", p.name),
                    None => p.name.to_string(),
                })
                .collect();
            println!("  {model} {op} ({})", params.join(", "));
            println!("      {}", spec.summary);
        }
    }
    println!();
    println!("presets:");
    for preset in presets::PRESETS {
        println!("  {:<22} {}", preset.name, preset.summary);
    }
}

fn report(table: &table::ResultTable) {
    let wall = table.meta.wall_time.unwrap_or_default();
    eprintln!(
        "critmet: {} {} -> {} rows in {:.3}s",
        table.meta.model,
        table.meta.operation,
        table.rows.len(),
        wall.as_secs_f64()
    );
    for fit in &table.meta.fits {
        eprintln!(
            "critmet: fit {} ~ {}^{:.4} (prefactor {:.6}, r^2 {:.6})",
            fit.y, fit.x, fit.exponent, fit.prefactor, fit.r_squared
        );
    }
    let failed = table.rows.iter().filter(|r| !r.error.is_empty()).count();
    if failed > 0 {
        eprintln!("critmet: {failed} row(s) failed; see the error column");
    }
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let outcome = config::parse_args(&args).and_then(|command| match command {
        config::Command::Help => {
            print_help();
            Ok(())
        }
        config::Command::Version => {
            println!("critmet {}", env!("CARGO_PKG_VERSION"));
            Ok(())
        }
        config::Command::Run(cfg) => {
            let t = runner::run(&cfg)?;
            report(&t);
            table::emit(&t, cfg.out.as_deref())
        }
        config::Command::Preset { name, out, format, workers, strict, seed } => {
            let t = presets::build_table(&name, seed, workers, format, strict)?;
            report(&t);
            table::emit(&t, out.as_deref())
        }
    });
    if let Err(e) = outcome {
        let mut stderr = std::io::stderr().lock();
        let _ = writeln!(stderr, "critmet: {e}");
        if matches!(e, CliError::Usage(_)) {
            let _ = writeln!(stderr, "run `critmet --help` for the full grammar");
        }
        std::process::exit(e.exit_code());
    }
}
