//! Sweep planning and execution.
//!
//! A parsed configuration is first resolved against the operation registry
//! into a [`RunPlan`]: defaults filled in, every binding checked against the
//! operation's parameter list, grids expanded to explicit axis values.  The
//! plan is then executed row by row, optionally on a fixed-size worker pool.
//!
//! Row order is the lexicographic product of the axes in the order they were
//! bound, last axis fastest, and is independent of the worker count: rows
//! are indexed up front and collected by index, so the rendered bytes of a
//! sweep are a pure function of the plan.  Per-row evaluation failures are
//! recorded in the row's `error` column (outputs become NaN); under
//! `--strict` the first failure aborts the run instead.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::iter::{IntoParallelIterator, ParallelIterator};

use crate::config::{Binding, ExperimentConfig};
use crate::error::{CliError, Result};
use crate::registry::{self, FitPlan, OpSpec, ParamValues};
use crate::table::{FitSummary, Format, Meta, ResultTable, Row};

/// Fully resolved sweep: scalars, explicit axis values, execution knobs.
#[derive(Debug)]
pub struct RunPlan {
    pub op: &'static OpSpec,
    /// Scalar bindings with defaults already folded in.
    pub scalars: BTreeMap<String, f64>,
    /// Sweep axes in binding order; the first axis varies slowest.
    pub axes: Vec<(String, Vec<f64>)>,
    pub seed: u64,
    pub strict: bool,
    /// Worker threads; 0 delegates to the pool's own default.
    pub workers: usize,
    pub format: Format,
    /// Human-readable binding echo for the metadata block.
    pub echo: Vec<(String, String)>,
}

fn resolve(model: &str, operation: &str) -> Result<&'static OpSpec> {
    if let Some(op) = registry::find(model, operation) {
        return Ok(op);
    }
    if registry::operations(model).is_empty() {
        return Err(CliError::Usage(format!(
            "unknown model `{model}`; models: {}",
            registry::models().join(", ")
        )));
    }
    Err(CliError::Usage(format!(
        "unknown operation `{operation}` for model `{model}`; operations: {}",
        registry::operations(model).join(", ")
    )))
}

fn param_list(op: &OpSpec) -> String {
    let names: Vec<&str> = op.params.iter().map(|p| p.name).collect();
    names.join(", ")
}

/// Chain-length sweeps are validated up front: a single odd or fractional
/// value would otherwise poison every row of a sweep with the same message.
fn validate_chain_length(op: &OpSpec, scalars: &BTreeMap<String, f64>, axes: &[(String, Vec<f64>)]) -> Result<()> {
    if op.model != "tfim" {
        return Ok(());
    }
    let axis_vals = axes.iter().find(|(n, _)| n == "n").map(|(_, v)| v.as_slice());
    let scalar_val = scalars.get("n").map(std::slice::from_ref);
    for &v in axis_vals.or(scalar_val).unwrap_or(&[]) {
        let r = v.round();
        if !v.is_finite() || (v - r).abs() > 1e-6 || (r as i64).rem_euclid(2) != 0 {
            return Err(CliError::Usage(format!(
                "chain length must be an even integer, got n = {v}"
            )));
        }
    }
    Ok(())
}

/// Operations that fit a power law need their fit abscissa swept, not
/// pinned; catching it here gives a config error instead of a fit failure.
fn validate_fit_axes(op: &OpSpec, axes: &[(String, Vec<f64>)]) -> Result<()> {
    for fp in op.fits {
        if !axes.iter().any(|(n, _)| n == fp.x) {
            return Err(CliError::Usage(format!(
                "{} {} fits {} ~ {}^a and needs `--{}` bound to a grid",
                op.model, op.operation, fp.y, fp.x, fp.x
            )));
        }
    }
    Ok(())
}

fn resolve_workers(cli: Option<usize>) -> Result<usize> {
    if let Some(w) = cli {
        return Ok(w);
    }
    match std::env::var("CRITMET_WORKERS") {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(w) if w >= 1 => Ok(w),
            _ => Err(CliError::Usage(format!(
                "CRITMET_WORKERS must be a positive integer, got `{s}`"
            ))),
        },
        Err(std::env::VarError::NotPresent) => Ok(0),
        Err(e) => Err(CliError::Usage(format!("CRITMET_WORKERS: {e}"))),
    }
}

/// Resolve a parsed configuration against the registry.
pub fn plan(config: &ExperimentConfig) -> Result<RunPlan> {
    let op = resolve(&config.model, &config.operation)?;
    let mut scalars = BTreeMap::new();
    for p in op.params {
        if let Some(d) = p.default {
            scalars.insert(p.name.to_string(), d);
        }
    }
    let mut axes: Vec<(String, Vec<f64>)> = Vec::new();
    for (name, binding) in &config.bindings {
        if !op.params.iter().any(|p| p.name == name) {
            return Err(CliError::Usage(format!(
                "unknown parameter `--{name}` for {} {}; parameters: {}",
                op.model,
                op.operation,
                param_list(op)
            )));
        }
        match binding {
            Binding::Value(v) => {
                scalars.insert(name.clone(), *v);
            }
            Binding::Grid(g) => {
                scalars.remove(name);
                axes.push((name.clone(), g.values()));
            }
        }
    }
    for p in op.params {
        if !scalars.contains_key(p.name) && !axes.iter().any(|(n, _)| n == p.name) {
            return Err(CliError::Usage(format!(
                "missing parameter `--{}` for {} {}; parameters: {}",
                p.name,
                op.model,
                op.operation,
                param_list(op)
            )));
        }
    }
    validate_chain_length(op, &scalars, &axes)?;
    validate_fit_axes(op, &axes)?;
    Ok(RunPlan {
        op,
        scalars,
        axes,
        seed: config.seed,
        strict: config.strict,
        workers: resolve_workers(config.workers)?,
        format: config.format,
        echo: config.echo.clone(),
    })
}

impl RunPlan {
    /// Build a plan directly from explicit values, validating names and
    /// defaults exactly as the flag path does.  Presets use this to sweep
    /// hand-picked axis lists that no uniform grid expresses.
    pub fn assemble(
        model: &str,
        operation: &str,
        scalars: &[(&str, f64)],
        axes: Vec<(&'static str, Vec<f64>)>,
        seed: u64,
    ) -> Result<RunPlan> {
        let op = resolve(model, operation)?;
        let mut echo = Vec::new();
        let mut map = BTreeMap::new();
        for p in op.params {
            if let Some(d) = p.default {
                map.insert(p.name.to_string(), d);
            }
        }
        for &(name, v) in scalars {
            if !op.params.iter().any(|p| p.name == name) {
                return Err(CliError::Usage(format!(
                    "unknown parameter `{name}` for {model} {operation}"
                )));
            }
            map.insert(name.to_string(), v);
            echo.push((name.to_string(), format!("{v}")));
        }
        let mut expanded = Vec::new();
        for (name, values) in axes {
            if !op.params.iter().any(|p| p.name == name) {
                return Err(CliError::Usage(format!(
                    "unknown parameter `{name}` for {model} {operation}"
                )));
            }
            map.remove(name);
            echo.push((name.to_string(), axis_echo(&values)));
            expanded.push((name.to_string(), values));
        }
        for p in op.params {
            if !map.contains_key(p.name) && !expanded.iter().any(|(n, _)| n == p.name) {
                return Err(CliError::Usage(format!(
                    "missing parameter `{}` for {model} {operation}",
                    p.name
                )));
            }
        }
        validate_chain_length(op, &map, &expanded)?;
        validate_fit_axes(op, &expanded)?;
        Ok(RunPlan {
            op,
            scalars: map,
            axes: expanded,
            seed,
            strict: false,
            workers: resolve_workers(None)?,
            format: Format::Csv,
            echo,
        })
    }
}

fn axis_echo(values: &[f64]) -> String {
    if values.len() <= 8 {
        let parts: Vec<String> = values.iter().map(|v| format!("{v}")).collect();
        format!("[{}]", parts.join(", "))
    } else {
        format!("{}..{} ({} points)", values[0], values[values.len() - 1], values.len())
    }
}

fn fit(table: &ResultTable, fp: &FitPlan) -> Result<FitSummary> {
    let (xs, ys) = table.paired_ok(fp.x, fp.y)?;
    let f = critmet::numerics::loglog_fit(&xs, &ys)
        .map_err(|e| CliError::Domain(format!("fit {} ~ {}^a: {e}", fp.y, fp.x)))?;
    Ok(FitSummary {
        x: fp.x.to_string(),
        y: fp.y.to_string(),
        exponent: f.exponent,
        prefactor: f.prefactor,
        r_squared: f.r_squared,
    })
}

/// Execute a plan into a rendered-ready table.
pub fn execute(plan: &RunPlan) -> Result<ResultTable> {
    let start = Instant::now();
    let op = plan.op;
    let n_axes = plan.axes.len();
    let total: usize = plan.axes.iter().map(|(_, v)| v.len()).product();
    let eval_row = |i: usize| -> Row {
        let mut map = plan.scalars.clone();
        let mut axis_vals = vec![0.0; n_axes];
        let mut rem = i;
        for k in (0..n_axes).rev() {
            let vals = &plan.axes[k].1;
            axis_vals[k] = vals[rem % vals.len()];
            rem /= vals.len();
        }
        let mut values = Vec::with_capacity(n_axes + op.outputs.len());
        for (k, (name, _)) in plan.axes.iter().enumerate() {
            map.insert(name.clone(), axis_vals[k]);
            values.push(axis_vals[k]);
        }
        match (op.eval)(&ParamValues::new(&map)) {
            Ok(outs) => {
                values.extend(outs);
                Row { values, error: String::new() }
            }
            Err(e) => {
                values.resize(n_axes + op.outputs.len(), f64::NAN);
                Row { values, error: e.to_string() }
            }
        }
    };
    let rows: Vec<Row> = if plan.workers == 1 || total <= 1 {
        (0..total).map(eval_row).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(plan.workers)
            .build()
            .map_err(|e| CliError::Usage(format!("worker pool: {e}")))?;
        pool.install(|| (0..total).into_par_iter().map(eval_row).collect())
    };
    if plan.strict {
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| !r.error.is_empty()) {
            return Err(CliError::Domain(format!("row {i}: {}", row.error)));
        }
    }
    let columns: Vec<String> = plan
        .axes
        .iter()
        .map(|(n, _)| n.clone())
        .chain(op.outputs.iter().map(|s| s.to_string()))
        .collect();
    let mut table = ResultTable {
        columns,
        rows,
        meta: Meta {
            tool: "critmet",
            version: env!("CARGO_PKG_VERSION"),
            model: op.model.to_string(),
            operation: op.operation.to_string(),
            bindings: plan.echo.clone(),
            format: plan.format,
            seed: plan.seed,
            strict: plan.strict,
            fits: Vec::new(),
            wall_time: None,
        },
    };
    for fp in op.fits {
        let summary = fit(&table, fp)?;
        if let Some(col) = fp.append_column {
            table.columns.push(col.to_string());
            for row in &mut table.rows {
                row.values.push(summary.exponent);
            }
        }
        table.meta.fits.push(summary);
    }
    table.meta.wall_time = Some(start.elapsed());
    debug_assert!(table.is_rectangular());
    Ok(table)
}

/// Plan and execute in one step.
pub fn run(config: &ExperimentConfig) -> Result<ResultTable> {
    execute(&plan(config)?)
}
