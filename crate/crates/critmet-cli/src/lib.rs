//! Experiment harness for the `critmet` library.
//!
//! Turns closed-form estimation results into deterministic parameter-sweep
//! tables.  An invocation names a model and an operation, binds each
//! parameter to a value or a grid, and receives a CSV or JSON table whose
//! bytes depend only on the configuration: row order is the lexicographic
//! product of the grids, floats are printed with enough digits to round-trip
//! exactly, and worker parallelism never reorders output.  Sweep points
//! outside an operation's domain become rows with an error message instead
//! of killing the run, unless `--strict` asks for exactly that.

pub mod config;
pub mod error;
pub mod presets;
pub mod registry;
pub mod runner;
pub mod table;

pub use error::{CliError, Result};
