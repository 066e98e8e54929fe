//! wfscope — classify phase-space points (x, xi) of a sampled distribution
//! as microlocally regular or singular, in smooth or Sobolev mode.
//!
//! Exit codes: 0 regular (or plain success), 10 singular, 11 inconclusive,
//! 1 failed corpus validation, 2 usage error or malformed input.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wfscope::{
    corpus_members, decay_exponent, sample, shell_stats_for, sobolev_cone_norm, standard_grid,
    stft_discrete, validate_against_ground_truth, wf_map, wf_smooth_detect, wf_sobolev_detect,
    Cone, Member, Mode, PhasePoint, Verdict,
};
use wfscope_cli::{
    config::{resolve, ConfigLayer, Resolved},
    decay_plot_csv, read_signal, render_report, sobolev_plot_csv, write_signal, CliError, Result,
};

const EXIT_SINGULAR: u8 = 10;
const EXIT_INCONCLUSIVE: u8 = 11;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "wfscope",
    version,
    about = "Wave-front-set scanner for sampled distributions",
    after_help = "Signal files are WFS1 binary or CSV (t,re,im / t1,t2,re,im); both are \
                  sniffed by content. Settings resolve as flags > WFSCOPE_CONFIG (TOML) > \
                  defaults, and the resolved config hash is stamped into every report.\n\
                  Exit codes: 0 regular/success, 10 singular, 11 inconclusive, 1 failed \
                  validation, 2 usage or malformed input."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

/// Detection settings; every flag is optional and falls back to the
/// WFSCOPE_CONFIG file, then to built-in defaults.
#[derive(Args, Debug, Clone, Default)]
struct CfgFlags {
    /// detection mode: smooth or sobolev
    #[arg(long)]
    mode: Option<String>,

    /// Sobolev order s (requires --mode sobolev)
    #[arg(long, allow_hyphen_values = true)]
    s: Option<f64>,

    /// half-width of the position ball K around the scan point
    #[arg(long)]
    radius: Option<f64>,

    /// scan cone half-angle theta' in radians (detection cone uses theta'/2)
    #[arg(long)]
    cone_angle: Option<f64>,

    /// analysis window: bump:<r>, bspline:<r>, or bspline<m>:<r>
    #[arg(long)]
    window: Option<String>,

    /// dyadic frequency shells <R0>:<J>
    #[arg(long)]
    shells: Option<String>,

    /// smooth mode: regular iff the fitted exponent reaches this threshold
    #[arg(long)]
    n_threshold: Option<f64>,

    /// Sobolev mode: dead band around ratio 1 in the tail classification
    #[arg(long)]
    rho_tol: Option<f64>,

    /// cap the worker count (results are identical for any value)
    #[arg(long)]
    threads: Option<usize>,

    /// audit seed; recorded in the config hash for replay
    #[arg(long)]
    seed: Option<u64>,
}

impl CfgFlags {
    fn layer(&self) -> ConfigLayer {
        ConfigLayer {
            mode: self.mode.clone(),
            s: self.s,
            radius: self.radius,
            cone_angle: self.cone_angle,
            window: self.window.clone(),
            shells: self.shells.clone(),
            n_threshold: self.n_threshold,
            rho_tol: self.rho_tol,
            threads: self.threads,
            seed: self.seed,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify one phase-space point of a signal file
    Analyze {
        /// signal file (WFS1 binary or CSV)
        input: PathBuf,

        /// scan position x, comma-separated coordinates in 2-d (e.g. 0.5 or 0.5,0)
        #[arg(long, allow_hyphen_values = true)]
        point: String,

        /// scan direction xi (any nonzero vector; normalized internally)
        #[arg(long, allow_hyphen_values = true)]
        direction: String,

        /// also write the report to this file
        #[arg(long)]
        report: Option<PathBuf>,

        #[command(flatten)]
        cfg: CfgFlags,
    },

    /// Scan a grid of positions x directions and report every verdict
    Map {
        /// signal file (WFS1 binary or CSV)
        input: PathBuf,

        /// positions, semicolon-separated (e.g. "-1;0;1" or "0,0;1,0")
        #[arg(long, allow_hyphen_values = true)]
        xs: String,

        /// directions, semicolon-separated (e.g. "1;-1" or "1,0;0,1")
        #[arg(long, allow_hyphen_values = true)]
        dirs: String,

        /// write the report to this file instead of stdout
        #[arg(long)]
        report: Option<PathBuf>,

        #[command(flatten)]
        cfg: CfgFlags,
    },

    /// List, export, or validate the built-in distribution corpus
    Corpus {
        #[command(subcommand)]
        cmd: CorpusCmd,
    },

    /// Write plot-ready CSV data for one phase-space point
    EmitPlot {
        /// signal file (WFS1 binary or CSV)
        input: PathBuf,

        /// scan position x
        #[arg(long, allow_hyphen_values = true)]
        point: String,

        /// scan direction xi
        #[arg(long, allow_hyphen_values = true)]
        direction: String,

        /// output prefix: writes <prefix>_decay.csv with columns
        /// shell_radius (R_j^mid), log_m (ln of the shell sup of |V|),
        /// fit_line (intercept - n_hat * ln(1 + R)); with --mode sobolev
        /// also <prefix>_sobolev.csv with columns shell_top (R_J),
        /// cumulative_sum (S_J)
        #[arg(long)]
        out: String,

        #[command(flatten)]
        cfg: CfgFlags,
    },
}

#[derive(Subcommand)]
enum CorpusCmd {
    /// List the corpus members
    List,
    /// Sample a member on its standard grid and write it to a signal file
    Export { member: String, path: PathBuf },
    /// Re-run the ground-truth validation table (all members when omitted)
    Validate { member: Option<String> },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("wfscope: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Analyze { input, point, direction, report, cfg } => {
            cmd_analyze(&input, &point, &direction, report.as_deref(), &cfg)
        }
        Cmd::Map { input, xs, dirs, report, cfg } => {
            cmd_map(&input, &xs, &dirs, report.as_deref(), &cfg)
        }
        Cmd::Corpus { cmd } => match cmd {
            CorpusCmd::List => cmd_corpus_list(),
            CorpusCmd::Export { member, path } => cmd_corpus_export(&member, &path),
            CorpusCmd::Validate { member } => cmd_corpus_validate(member.as_deref()),
        },
        Cmd::EmitPlot { input, point, direction, out, cfg } => {
            cmd_emit_plot(&input, &point, &direction, &out, &cfg)
        }
    }
}

fn init_threads(resolved: &Resolved) {
    if let Some(t) = resolved.threads {
        // Silently keep the existing pool if one was already installed.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
}

fn parse_coords(flag: &str, s: &str) -> Result<Vec<f64>> {
    let coords = s
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("{flag}: {c:?} is not a number")))
        })
        .collect::<Result<Vec<f64>>>()?;
    if coords.is_empty() || coords.len() > 2 {
        return Err(CliError::Usage(format!(
            "{flag}: expected 1 or 2 comma-separated coordinates, got {}",
            coords.len()
        )));
    }
    Ok(coords)
}

fn parse_coord_list(flag: &str, s: &str) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::new();
    for chunk in s.split(';') {
        let chunk = chunk.trim();
        if chunk.is_empty() {
            continue;
        }
        out.push(parse_coords(flag, chunk)?);
    }
    if out.is_empty() {
        return Err(CliError::Usage(format!("{flag}: needs at least one entry")));
    }
    Ok(out)
}

fn phase_point(point: &str, direction: &str) -> Result<PhasePoint> {
    let x = parse_coords("--point", point)?;
    let dir = parse_coords("--direction", direction)?;
    Ok(PhasePoint::new(&x, &dir)?)
}

fn emit_report(text: &str, file: Option<&std::path::Path>) -> Result<()> {
    print!("{text}");
    if let Some(path) = file {
        fs::write(path, text).map_err(|e| CliError::io(path, e))?;
    }
    Ok(())
}

fn verdict_exit(v: Verdict) -> ExitCode {
    match v {
        Verdict::Regular => ExitCode::SUCCESS,
        Verdict::Singular => ExitCode::from(EXIT_SINGULAR),
        Verdict::Inconclusive => ExitCode::from(EXIT_INCONCLUSIVE),
    }
}

fn cmd_analyze(
    input: &std::path::Path,
    point: &str,
    direction: &str,
    report: Option<&std::path::Path>,
    cfg: &CfgFlags,
) -> Result<ExitCode> {
    let resolved = resolve(cfg.layer())?;
    init_threads(&resolved);
    let p = phase_point(point, direction)?;
    let f = read_signal(input)?;
    let verdict = match resolved.detector.mode() {
        Mode::Smooth => wf_smooth_detect(&f, &p, &resolved.detector),
        Mode::Sobolev(s) => wf_sobolev_detect(&f, &p, s, &resolved.detector),
    };
    let text = render_report(&f.label, &resolved.hash, std::slice::from_ref(&verdict));
    emit_report(&text, report)?;
    Ok(verdict_exit(verdict.verdict))
}

fn cmd_map(
    input: &std::path::Path,
    xs: &str,
    dirs: &str,
    report: Option<&std::path::Path>,
    cfg: &CfgFlags,
) -> Result<ExitCode> {
    let resolved = resolve(cfg.layer())?;
    init_threads(&resolved);
    let xs = parse_coord_list("--xs", xs)?;
    let dirs = parse_coord_list("--dirs", dirs)?;
    let f = read_signal(input)?;
    let verdicts = wf_map(&f, &xs, &dirs, &resolved.detector);
    let text = render_report(&f.label, &resolved.hash, &verdicts);
    match report {
        Some(path) => fs::write(path, &text).map_err(|e| CliError::io(path, e))?,
        None => print!("{text}"),
    }
    // The map itself always succeeds; per-point failures are inconclusive
    // records in the report.
    Ok(ExitCode::SUCCESS)
}

fn cmd_corpus_list() -> Result<ExitCode> {
    for m in corpus_members() {
        println!("{:<16} {}", m.name(), m.describe());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_corpus_export(member: &str, path: &std::path::Path) -> Result<ExitCode> {
    let m = Member::from_name(member)?;
    let f = sample(m, &standard_grid(m))?;
    write_signal(path, &f)?;
    println!("wrote {} ({} samples, {}-d)", path.display(), f.samples.len(), f.grid.dim());
    Ok(ExitCode::SUCCESS)
}

fn cmd_corpus_validate(member: Option<&str>) -> Result<ExitCode> {
    let members = match member {
        Some(name) => vec![Member::from_name(name)?],
        None => corpus_members(),
    };
    let mut all_pass = true;
    for m in members {
        let table = validate_against_ground_truth(m)?;
        print!("{table}");
        all_pass &= table.passed();
    }
    println!("corpus validation: {}", if all_pass { "PASS" } else { "FAIL" });
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_emit_plot(
    input: &std::path::Path,
    point: &str,
    direction: &str,
    out: &str,
    cfg: &CfgFlags,
) -> Result<ExitCode> {
    let resolved = resolve(cfg.layer())?;
    init_threads(&resolved);
    let p = phase_point(point, direction)?;
    let f = read_signal(input)?;
    let positions = f.grid.ball_nodes(&p.x, resolved.detector.k_radius);
    if positions.is_empty() {
        return Err(CliError::Usage(format!(
            "K = ball({point}, {}) contains no grid nodes",
            resolved.detector.k_radius
        )));
    }
    let table = stft_discrete(&f, &resolved.detector.window, &positions, resolved.detector.cap_factor)?;
    let rows: Vec<usize> = (0..table.positions.len()).collect();
    let cone = Cone::new(&p.direction, resolved.detector.inner_angle())?;
    let stats = shell_stats_for(&table, &rows, &cone, &resolved.detector.shells)?;
    let fit = decay_exponent(&stats)?;
    let decay_path = format!("{out}_decay.csv");
    fs::write(&decay_path, decay_plot_csv(&stats, &fit))
        .map_err(|e| CliError::io(std::path::Path::new(&decay_path), e))?;
    println!("wrote {decay_path}");
    if let Mode::Sobolev(s) = resolved.detector.mode() {
        let tail = sobolev_cone_norm(&table, &rows, &cone, s, &resolved.detector.shells)?;
        let sob_path = format!("{out}_sobolev.csv");
        fs::write(&sob_path, sobolev_plot_csv(&tail))
            .map_err(|e| CliError::io(std::path::Path::new(&sob_path), e))?;
        println!("wrote {sob_path}");
    }
    Ok(ExitCode::SUCCESS)
}
