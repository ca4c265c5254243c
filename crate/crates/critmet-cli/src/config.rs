//! Invocation grammar and experiment configuration.
//!
//! ```text
//! critmet <model> <operation> [--<param> VALUE | --<param>-grid MIN:MAX:POINTS[:log]]...
//!         [--out PATH] [--format csv|json] [--workers W] [--seed S] [--strict]
//! critmet preset <name> [--out PATH] [--format csv|json] [--workers W] [--seed S] [--strict]
//! ```
//!
//! Any flag that is not one of the reserved options binds a model parameter:
//! `--omega 1` fixes a value, `--g-grid 0:3:301` sweeps a linear grid,
//! `--t-grid 1e-3:10:40:log` a geometric one.  Hyphens in parameter names
//! map to underscores (`--eps-d` binds `eps_d`).  Grid axes multiply into a
//! cartesian product; rows are ordered lexicographically over grid indices
//! with the first grid flag as the most significant axis.

use std::path::PathBuf;

use crate::error::{CliError, Result};
use crate::table::Format;

/// Grid spacing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Lin,
    Log,
}

/// An inclusive sweep axis with `points >= 1` samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub scale: Scale,
}

impl Grid {
    pub fn new(min: f64, max: f64, points: usize, scale: Scale) -> Result<Self> {
        if !min.is_finite() || !max.is_finite() {
            return Err(CliError::Usage(format!(
                "grid endpoints must be finite, got {min}:{max}"
            )));
        }
        if points == 0 {
            return Err(CliError::Usage("empty grid: points must be at least 1".into()));
        }
        if scale == Scale::Log && (min <= 0.0 || max <= 0.0) {
            return Err(CliError::Usage(format!(
                "log grid endpoints must be strictly positive, got {min}:{max}"
            )));
        }
        Ok(Grid { min, max, points, scale })
    }

    /// Sample values; endpoints are reproduced exactly.
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.min];
        }
        let n = self.points;
        let mut out = Vec::with_capacity(n);
        match self.scale {
            Scale::Lin => {
                let step = (self.max - self.min) / (n - 1) as f64;
                for i in 0..n {
                    out.push(self.min + step * i as f64);
                }
            }
            Scale::Log => {
                let (a, b) = (self.min.ln(), self.max.ln());
                let step = (b - a) / (n - 1) as f64;
                for i in 0..n {
                    out.push((a + step * i as f64).exp());
                }
            }
        }
        out[0] = self.min;
        out[n - 1] = self.max;
        out
    }
}

/// A parameter binding: a fixed value or a sweep axis.
#[derive(Debug, Clone, PartialEq)]
pub enum Binding {
    Value(f64),
    Grid(Grid),
}

/// One experiment: a model operation, its parameter bindings, and output
/// disposition.  `seed` feeds only randomized presets; deterministic sweeps
/// ignore it (it is still echoed in metadata).
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub model: String,
    pub operation: String,
    /// Bindings in command-line order; names are unique.
    pub bindings: Vec<(String, Binding)>,
    /// Raw `(name, value-text)` pairs as typed, for the metadata echo.
    pub echo: Vec<(String, String)>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub workers: Option<usize>,
    pub strict: bool,
    pub seed: u64,
}

pub const DEFAULT_SEED: u64 = 42;

/// A parsed invocation.
#[derive(Debug, Clone)]
pub enum Command {
    Run(ExperimentConfig),
    Preset {
        name: String,
        out: Option<PathBuf>,
        format: Format,
        workers: Option<usize>,
        strict: bool,
        seed: u64,
    },
    Help,
    Version,
}

fn parse_f64(flag: &str, text: &str) -> Result<f64> {
    let v: f64 = text
        .parse()
        .map_err(|_| CliError::Usage(format!("{flag}: `{text}` is not a number")))?;
    if !v.is_finite() {
        return Err(CliError::Usage(format!("{flag}: `{text}` must be finite")));
    }
    Ok(v)
}

/// `MIN:MAX:POINTS[:log|:lin]`.
fn parse_grid(flag: &str, text: &str) -> Result<Grid> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() < 3 || parts.len() > 4 {
        return Err(CliError::Usage(format!(
            "{flag}: expected MIN:MAX:POINTS[:log], got `{text}`"
        )));
    }
    let min = parse_f64(flag, parts[0])?;
    let max = parse_f64(flag, parts[1])?;
    let points: usize = parts[2]
        .parse()
        .map_err(|_| CliError::Usage(format!("{flag}: `{}` is not a point count", parts[2])))?;
    let scale = match parts.get(3) {
        None | Some(&"lin") => Scale::Lin,
        Some(&"log") => Scale::Log,
        Some(other) => {
            return Err(CliError::Usage(format!(
                "{flag}: scale must be `lin` or `log`, got `{other}`"
            )))
        }
    };
    Grid::new(min, max, points, scale)
}

struct FlagStream<'a> {
    args: &'a [String],
    pos: usize,
}

impl<'a> FlagStream<'a> {
    fn next(&mut self) -> Option<&'a str> {
        let a = self.args.get(self.pos)?;
        self.pos += 1;
        Some(a)
    }

    fn value(&mut self, flag: &str) -> Result<&'a str> {
        self.next()
            .ok_or_else(|| CliError::Usage(format!("{flag} expects a value")))
    }
}

#[derive(Default)]
struct CommonFlags {
    out: Option<PathBuf>,
    format: Option<Format>,
    workers: Option<usize>,
    strict: bool,
    seed: Option<u64>,
}

/// Consumes a reserved flag; `Ok(false)` means the token is not reserved.
fn take_common(flags: &mut CommonFlags, token: &str, stream: &mut FlagStream) -> Result<bool> {
    match token {
        "--out" => flags.out = Some(PathBuf::from(stream.value(token)?)),
        "--format" => flags.format = Some(Format::parse(stream.value(token)?)?),
        "--workers" => {
            let text = stream.value(token)?;
            let w: usize = text
                .parse()
                .map_err(|_| CliError::Usage(format!("--workers: `{text}` is not a count")))?;
            if w == 0 {
                return Err(CliError::Usage("--workers must be at least 1".into()));
            }
            flags.workers = Some(w);
        }
        "--seed" => {
            let text = stream.value(token)?;
            flags.seed = Some(text.parse().map_err(|_| {
                CliError::Usage(format!("--seed: `{text}` is not an unsigned integer"))
            })?);
        }
        "--strict" => flags.strict = true,
        _ => return Ok(false),
    }
    Ok(true)
}

/// Parses `argv[1..]`.
pub fn parse_args(args: &[String]) -> Result<Command> {
    let mut stream = FlagStream { args, pos: 0 };
    let first = match stream.next() {
        None => return Err(CliError::Usage("missing model; run `critmet --help`".into())),
        Some(f) => f,
    };
    if matches!(first, "--help" | "-h" | "help") {
        return Ok(Command::Help);
    }
    if matches!(first, "--version" | "-V" | "version") {
        return Ok(Command::Version);
    }

    if first == "preset" {
        let name = stream
            .value("preset")
            .map_err(|_| CliError::Usage("preset expects a name; run `critmet --help`".into()))?
            .to_string();
        let mut flags = CommonFlags::default();
        while let Some(token) = stream.next() {
            if !take_common(&mut flags, token, &mut stream)? {
                return Err(CliError::Usage(format!(
                    "presets are self-contained; unexpected argument `{token}`"
                )));
            }
        }
        return Ok(Command::Preset {
            name,
            out: flags.out,
            format: flags.format.unwrap_or(Format::Csv),
            workers: flags.workers,
            strict: flags.strict,
            seed: flags.seed.unwrap_or(DEFAULT_SEED),
        });
    }

    let model = first.to_string();
    let operation = match stream.next() {
        None => {
            return Err(CliError::Usage(format!(
                "model `{model}` needs an operation; run `critmet --help`"
            )))
        }
        Some(op) => op.to_string(),
    };

    let mut flags = CommonFlags::default();
    let mut bindings: Vec<(String, Binding)> = Vec::new();
    let mut echo: Vec<(String, String)> = Vec::new();
    while let Some(token) = stream.next() {
        if take_common(&mut flags, token, &mut stream)? {
            continue;
        }
        let Some(flag_name) = token.strip_prefix("--") else {
            return Err(CliError::Usage(format!(
                "unexpected argument `{token}`; parameters are bound as --name VALUE"
            )));
        };
        let text = stream.value(token)?;
        let (name, binding) = match flag_name.strip_suffix("-grid") {
            Some(base) => (base, Binding::Grid(parse_grid(token, text)?)),
            None => (flag_name, Binding::Value(parse_f64(token, text)?)),
        };
        let name = name.replace('-', "_");
        if name.is_empty() {
            return Err(CliError::Usage(format!("`{token}` is not a parameter flag")));
        }
        if bindings.iter().any(|(n, _)| *n == name) {
            return Err(CliError::Usage(format!("parameter `{name}` bound twice")));
        }
        echo.push((name.clone(), text.to_string()));
        bindings.push((name, binding));
    }

    Ok(Command::Run(ExperimentConfig {
        model,
        operation,
        bindings,
        echo,
        out: flags.out,
        format: flags.format.unwrap_or(Format::Csv),
        workers: flags.workers,
        strict: flags.strict,
        seed: flags.seed.unwrap_or(DEFAULT_SEED),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn grid_values_hit_endpoints_exactly() {
        let g = Grid::new(0.0, 3.0, 301, Scale::Lin).unwrap();
        let v = g.values();
        assert_eq!(v.len(), 301);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[300], 3.0);
        assert!((v[100] - 1.0).abs() <= 1e-12);

        let lg = Grid::new(8.0, 4096.0, 10, Scale::Log).unwrap();
        let lv = lg.values();
        assert_eq!(lv[0], 8.0);
        assert_eq!(lv[9], 4096.0);
        for (i, x) in lv.iter().enumerate() {
            assert!((x - 8.0 * (1 << i) as f64).abs() <= 1e-6 * x, "{i}: {x}");
        }

        assert_eq!(Grid::new(2.0, 5.0, 1, Scale::Lin).unwrap().values(), vec![2.0]);
    }

    #[test]
    fn grid_validation() {
        assert!(matches!(Grid::new(0.0, 1.0, 0, Scale::Lin), Err(CliError::Usage(_))));
        assert!(matches!(Grid::new(0.0, 1.0, 5, Scale::Log), Err(CliError::Usage(_))));
        assert!(matches!(Grid::new(f64::NAN, 1.0, 5, Scale::Lin), Err(CliError::Usage(_))));
        assert!(matches!(Grid::new(1.0, f64::INFINITY, 5, Scale::Lin), Err(CliError::Usage(_))));
    }

    #[test]
    fn parses_a_full_run_invocation() {
        let cmd = parse_args(&args(&[
            "lz", "qfi", "--omega", "1", "--g-grid", "0:3:301", "--format", "json", "--workers",
            "2", "--strict", "--out", "table.json",
        ]))
        .unwrap();
        let Command::Run(cfg) = cmd else { panic!("expected a run") };
        assert_eq!(cfg.model, "lz");
        assert_eq!(cfg.operation, "qfi");
        assert_eq!(cfg.bindings.len(), 2);
        assert_eq!(cfg.bindings[0].0, "omega");
        assert!(matches!(cfg.bindings[0].1, Binding::Value(v) if v == 1.0));
        assert!(matches!(
            &cfg.bindings[1].1,
            Binding::Grid(g) if g.points == 301 && g.scale == Scale::Lin
        ));
        assert_eq!(cfg.echo[1], ("g".to_string(), "0:3:301".to_string()));
        assert_eq!(cfg.format, Format::Json);
        assert_eq!(cfg.workers, Some(2));
        assert!(cfg.strict);
        assert_eq!(cfg.out.as_deref(), Some(std::path::Path::new("table.json")));
        assert_eq!(cfg.seed, DEFAULT_SEED);
    }

    #[test]
    fn hyphenated_parameters_normalize_to_underscores() {
        let Command::Run(cfg) =
            parse_args(&args(&["mrlm", "qfi", "--eps-d", "0.1", "--gamma-hyb", "1",
                "--temperature-grid", "1e-4:1e-1:7:log"])).unwrap()
        else {
            panic!()
        };
        let names: Vec<&str> = cfg.bindings.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["eps_d", "gamma_hyb", "temperature"]);
    }

    #[test]
    fn rejects_malformed_invocations() {
        for bad in [
            vec![],
            vec!["lz"],
            vec!["lz", "qfi", "stray"],
            vec!["lz", "qfi", "--omega"],
            vec!["lz", "qfi", "--omega", "abc"],
            vec!["lz", "qfi", "--omega", "inf"],
            vec!["lz", "qfi", "--omega", "1", "--omega", "2"],
            vec!["lz", "qfi", "--g-grid", "0:3"],
            vec!["lz", "qfi", "--g-grid", "0:3:10:cubic"],
            vec!["lz", "qfi", "--g-grid", "0:3:0"],
            vec!["lz", "qfi", "--format", "xml"],
            vec!["lz", "qfi", "--workers", "0"],
            vec!["preset"],
            vec!["preset", "lz-ground", "--omega", "2"],
        ] {
            let owned = args(&bad);
            assert!(
                matches!(parse_args(&owned), Err(CliError::Usage(_))),
                "should reject {bad:?}"
            );
        }
    }

    #[test]
    fn help_version_and_preset_forms() {
        assert!(matches!(parse_args(&args(&["--help"])), Ok(Command::Help)));
        assert!(matches!(parse_args(&args(&["-h"])), Ok(Command::Help)));
        assert!(matches!(parse_args(&args(&["--version"])), Ok(Command::Version)));
        let Command::Preset { name, format, seed, .. } =
            parse_args(&args(&["preset", "lz-ground", "--format", "json", "--seed", "7"])).unwrap()
        else {
            panic!()
        };
        assert_eq!(name, "lz-ground");
        assert_eq!(format, Format::Json);
        assert_eq!(seed, 7);
    }
}
