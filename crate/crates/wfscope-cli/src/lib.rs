//! Support library for the `wfscope` command-line tool: signal-file I/O,
//! layered configuration with canonical hashing, and deterministic report
//! rendering. The binary in `main.rs` is a thin argument-parsing shell over
//! these modules and the `wfscope` detection crate.

pub mod config;
pub mod error;
pub mod report;
pub mod signal;

pub use config::{config_hash, parse_shells, parse_window, resolve, ConfigLayer, Resolved};
pub use error::{CliError, Result};
pub use report::{decay_plot_csv, render_report, sobolev_plot_csv};
pub use signal::{read_signal, to_binary, to_csv, write_signal};
