//! Command-line front end: construct spectra, emit eigenfunctions, run the
//! verification suites, exercise the Calogero-Sutherland map, and check the
//! SU(1,1) Fock structure.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

mod config;
mod verify_suite;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use bncsm::fock::{fock_orthogonality_check, su11_fock_check_with, OrthogonalityReport, Su11Report};
use bncsm::operators::{
    apply_transformed_h_cs, exp_neg_half_a, ModelParams, ModelParamsJson,
};
use bncsm::rational::{format_rational, parse_rational, rat_int, Rational};
use bncsm::spectrum::{
    build_eigenfunction, level_basis, spectrum_table, EigenfunctionJson, SpectrumRow,
};
use bncsm::symfun::{partitions_of, Partition, SymPoly, SymPolyJson, VarTag};

use config::FileConfig;
use verify_suite::{VerifyOptions, VerifyReport};

#[derive(Parser)]
#[command(
    name = "bncsm",
    about = "Exact spectra and eigenfunctions of the B_N Calogero-Sutherland-Moser model",
    version
)]
struct Cli {
    /// Optional key = value config file mirroring the long flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads (default: BNCSM_THREADS or all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Args)]
struct ModelArgs {
    /// Particle number N.
    #[arg(long)]
    n_particles: Option<usize>,

    /// Pair coupling lambda, an exact rational like `1` or `3/2`.
    #[arg(long, value_parser = rational_arg)]
    lambda: Option<Rational>,

    /// One-body coupling lambda1, an exact rational.
    #[arg(long, value_parser = rational_arg)]
    lambda1: Option<Rational>,

    /// Pair coupling alpha of the Calogero-Sutherland side.
    #[arg(long, value_parser = rational_arg)]
    alpha: Option<Rational>,
}

#[derive(Subcommand)]
enum Command {
    /// Build the complete degenerate eigenbasis at one level.
    Solve {
        #[command(flatten)]
        model: ModelArgs,
        /// Level n (energy 2n + E0).
        #[arg(long)]
        level: Option<u64>,
        /// Restrict to one label, e.g. `2,1` (parts <= N, weight = level).
        #[arg(long)]
        label: Option<String>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Print energies and degeneracies for levels 0..=n-max.
    Spectrum {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        n_max: Option<u64>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Run the verification suites (exit 1 on the first counterexample).
    Verify {
        /// Cap on the particle number grid (default 4).
        #[arg(long)]
        max_particles: Option<usize>,
        /// Cap on the level grid (default 6).
        #[arg(long)]
        max_level: Option<u64>,
        /// Symbolic suites only.
        #[arg(long)]
        skip_numeric: bool,
        /// Fault injection: offset every expected energy by this rational.
        #[arg(long, value_parser = rational_arg)]
        perturb_energy: Option<Rational>,
        /// Seed for sample points and random polynomials (default 42).
        #[arg(long)]
        seed: Option<u64>,
        /// Finite-difference step (default 1e-3).
        #[arg(long)]
        fd_step: Option<f64>,
        /// Quadrature nodes per dimension for exact Gram runs (default 16).
        #[arg(long)]
        quad_nodes: Option<usize>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Map even-degree seeds to the Calogero-Sutherland side and verify.
    CsMap {
        #[command(flatten)]
        model: ModelArgs,
        /// Even x-space degree 2n of the seed polynomials.
        #[arg(long)]
        degree: Option<u64>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// SU(1,1) commutator and occupation-orthogonality checks.
    FockCheck {
        /// Truncation (even, >= 6; default 12).
        #[arg(long)]
        cutoff: Option<u64>,
        /// Largest level for the orthogonality sweep (default 4).
        #[arg(long)]
        n_max: Option<u64>,
        /// Mode count for the orthogonality sweep (default 2).
        #[arg(long)]
        n_particles: Option<usize>,
        /// Fault injection: double K+ so the commutators break.
        #[arg(long)]
        tamper: bool,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

enum CliError {
    Usage(String),
    Verification(String),
}

impl CliError {
    fn usage(e: impl std::fmt::Display) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let file_config = match &cli.config {
        Some(path) => match FileConfig::load(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
        None => FileConfig::empty(),
    };

    if let Err(e) = init_threads(&cli, &file_config) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }

    match run(&cli, &file_config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Verification(msg)) => {
            eprintln!("verification failure: {msg}");
            ExitCode::from(1)
        }
    }
}

fn init_threads(cli: &Cli, cfg: &FileConfig) -> Result<(), String> {
    let from_env = std::env::var("BNCSM_THREADS")
        .ok()
        .map(|v| {
            v.parse::<usize>()
                .map_err(|_| format!("BNCSM_THREADS must be an integer, got `{v}`"))
        })
        .transpose()?;
    let threads = match cli.threads.or(from_env) {
        Some(t) => Some(t),
        None => match cfg.get("threads") {
            Some(raw) => Some(
                raw.parse::<usize>()
                    .map_err(|_| format!("config key `threads`: cannot parse `{raw}`"))?,
            ),
            None => None,
        },
    };
    if let Some(t) = threads {
        if t == 0 {
            return Err("thread count must be positive".into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn run(cli: &Cli, cfg: &FileConfig) -> Result<(), CliError> {
    match &cli.command {
        Command::Solve {
            model,
            level,
            label,
            format,
        } => cmd_solve(cli, cfg, model, *level, label.as_deref(), *format),
        Command::Spectrum {
            model,
            n_max,
            format,
        } => cmd_spectrum(cli, cfg, model, *n_max, *format),
        Command::Verify {
            max_particles,
            max_level,
            skip_numeric,
            perturb_energy,
            seed,
            fd_step,
            quad_nodes,
            format,
        } => {
            let opts = VerifyOptions {
                max_particles: cfg
                    .resolve(*max_particles, "max-particles", 4)
                    .map_err(CliError::usage)?,
                max_level: cfg
                    .resolve(*max_level, "max-level", 6)
                    .map_err(CliError::usage)?,
                skip_numeric: *skip_numeric,
                perturb_energy: cfg
                    .resolve_with(perturb_energy.clone(), "perturb-energy", rat_int(0), |s| {
                        rational_arg(s)
                    })
                    .map_err(CliError::usage)?,
                seed: cfg.resolve(*seed, "seed", 42).map_err(CliError::usage)?,
                fd_step: cfg
                    .resolve(*fd_step, "fd-step", 1e-3)
                    .map_err(CliError::usage)?,
                quad_nodes: cfg
                    .resolve(*quad_nodes, "quad-nodes", 16)
                    .map_err(CliError::usage)?,
            };
            cmd_verify(cli, cfg, &opts, *format)
        }
        Command::CsMap {
            model,
            degree,
            format,
        } => cmd_cs_map(cli, cfg, model, *degree, *format),
        Command::FockCheck {
            cutoff,
            n_max,
            n_particles,
            tamper,
            format,
        } => cmd_fock_check(cli, cfg, *cutoff, *n_max, *n_particles, *tamper, *format),
    }
}

fn resolve_model(model: &ModelArgs, cfg: &FileConfig) -> Result<ModelParams, CliError> {
    let n = cfg
        .resolve(model.n_particles, "n-particles", 0)
        .map_err(CliError::usage)?;
    if n == 0 {
        return Err(CliError::Usage(
            "--n-particles is required (or set n-particles in the config file)".into(),
        ));
    }
    let lambda = cfg
        .resolve_with(model.lambda.clone(), "lambda", rat_int(0), |s| {
            rational_arg(s)
        })
        .map_err(CliError::usage)?;
    let lambda1 = cfg
        .resolve_with(model.lambda1.clone(), "lambda1", rat_int(0), |s| {
            rational_arg(s)
        })
        .map_err(CliError::usage)?;
    let alpha = cfg
        .resolve_with(model.alpha.clone(), "alpha", rat_int(0), rational_arg)
        .map_err(CliError::usage)?;
    ModelParams::new(n, lambda, lambda1, alpha).map_err(CliError::usage)
}

fn resolve_format(
    cli_format: Option<Format>,
    cfg: &FileConfig,
    default: Format,
) -> Result<Format, CliError> {
    if let Some(f) = cli_format {
        return Ok(f);
    }
    match cfg.get("format") {
        Some("json") => Ok(Format::Json),
        Some("csv") => Ok(Format::Csv),
        Some("pretty") => Ok(Format::Pretty),
        Some(other) => Err(CliError::Usage(format!("unknown format `{other}`"))),
        None => Ok(default),
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| {
                    if text.ends_with('\n') {
                        Ok(())
                    } else {
                        stdout.write_all(b"\n")
                    }
                })
                .map_err(|e| CliError::Usage(format!("cannot write to stdout: {e}")))
        }
    }
}

fn to_pretty_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serialization cannot fail")
}

// ---- solve ----

#[derive(Serialize)]
struct SolveOutput {
    schema_version: u32,
    params: ModelParamsJson,
    non_normalizable_risk: bool,
    level: u64,
    eigenfunctions: Vec<EigenfunctionJson>,
}

fn cmd_solve(
    cli: &Cli,
    cfg: &FileConfig,
    model: &ModelArgs,
    level: Option<u64>,
    label: Option<&str>,
    format: Option<Format>,
) -> Result<(), CliError> {
    let params = resolve_model(model, cfg)?;
    let format = resolve_format(format, cfg, Format::Json)?;
    if format == Format::Csv {
        return Err(CliError::Usage(
            "solve emits structured eigenfunctions; use --format json or pretty".into(),
        ));
    }
    let level = match (level, cfg.get("level")) {
        (Some(n), _) => Some(n),
        (None, Some(raw)) => Some(
            raw.parse()
                .map_err(|_| CliError::Usage(format!("config key `level`: bad value `{raw}`")))?,
        ),
        (None, None) => None,
    };

    let efs = match label {
        Some(text) => {
            let label = parse_label(text)?;
            if let Some(n) = level {
                if label.weight() != n {
                    return Err(CliError::Usage(format!(
                        "label {label} has weight {} but --level is {n}",
                        label.weight()
                    )));
                }
            }
            vec![build_eigenfunction(&params, &label).map_err(CliError::usage)?]
        }
        None => {
            let n = level.ok_or_else(|| {
                CliError::Usage("--level (or --label) is required for solve".into())
            })?;
            level_basis(&params, n).map_err(CliError::usage)?
        }
    };
    let level = efs.first().map(|ef| ef.level()).unwrap_or(0);

    match format {
        Format::Json => {
            let out = SolveOutput {
                schema_version: 1,
                params: params.to_json(),
                non_normalizable_risk: params.normalizability_risk(),
                level,
                eigenfunctions: efs.iter().map(|ef| ef.to_json()).collect(),
            };
            emit(cli, &to_pretty_json(&out))
        }
        Format::Pretty => {
            let mut text = format!(
                "N = {}, lambda = {}, lambda1 = {}, E0 = {}\nlevel {level}: {} state(s), energy {}\n",
                params.n_particles(),
                format_rational(params.lambda()),
                format_rational(params.lambda1()),
                format_rational(&params.e0()),
                efs.len(),
                efs.first()
                    .map(|ef| format_rational(ef.energy()))
                    .unwrap_or_default(),
            );
            for ef in &efs {
                text.push_str(&format!("  {}  ->  {}\n", ef.label(), ef.poly()));
            }
            emit(cli, &text)
        }
        Format::Csv => unreachable!(),
    }
}

fn parse_label(text: &str) -> Result<Partition, CliError> {
    let mut parts = Vec::new();
    for piece in text.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        parts.push(piece.parse::<u32>().map_err(|_| {
            CliError::Usage(format!("label part `{piece}` is not a positive integer"))
        })?);
    }
    Partition::new(parts)
        .map_err(|e| CliError::Usage(format!("{e} (labels list parts weakly decreasing)")))
}

// ---- spectrum ----

#[derive(Serialize)]
struct SpectrumOutput {
    schema_version: u32,
    params: ModelParamsJson,
    non_normalizable_risk: bool,
    rows: Vec<SpectrumRow>,
}

fn cmd_spectrum(
    cli: &Cli,
    cfg: &FileConfig,
    model: &ModelArgs,
    n_max: Option<u64>,
    format: Option<Format>,
) -> Result<(), CliError> {
    let params = resolve_model(model, cfg)?;
    let format = resolve_format(format, cfg, Format::Pretty)?;
    let n_max = cfg.resolve(n_max, "n-max", 6).map_err(CliError::usage)?;
    let rows = spectrum_table(&params, n_max);
    match format {
        Format::Json => {
            let out = SpectrumOutput {
                schema_version: 1,
                params: params.to_json(),
                non_normalizable_risk: params.normalizability_risk(),
                rows,
            };
            emit(cli, &to_pretty_json(&out))
        }
        Format::Csv => {
            let mut text = String::from("n,energy,degeneracy\n");
            for r in &rows {
                text.push_str(&format!("{},{},{}\n", r.level, r.energy, r.degeneracy));
            }
            emit(cli, &text)
        }
        Format::Pretty => {
            let mut text = format!(
                "N = {}, lambda = {}, lambda1 = {}, E0 = {}\n{:>4}  {:>10}  {:>10}\n",
                params.n_particles(),
                format_rational(params.lambda()),
                format_rational(params.lambda1()),
                format_rational(&params.e0()),
                "n",
                "energy",
                "degeneracy"
            );
            for r in &rows {
                text.push_str(&format!(
                    "{:>4}  {:>10}  {:>10}\n",
                    r.level, r.energy, r.degeneracy
                ));
            }
            emit(cli, &text)
        }
    }
}

// ---- verify ----

fn cmd_verify(
    cli: &Cli,
    cfg: &FileConfig,
    opts: &VerifyOptions,
    format: Option<Format>,
) -> Result<(), CliError> {
    let format = resolve_format(format, cfg, Format::Json)?;
    let report = verify_suite::run(opts);
    let text = match format {
        Format::Json | Format::Csv => to_pretty_json(&report),
        Format::Pretty => pretty_verify(&report),
    };
    emit(cli, &text)?;
    if report.pass {
        Ok(())
    } else {
        Err(CliError::Verification(
            report
                .first_failure()
                .unwrap_or("see report for details")
                .to_string(),
        ))
    }
}

fn pretty_verify(report: &VerifyReport) -> String {
    let mut text = String::new();
    let status = |b: bool| if b { "PASS" } else { "FAIL" };
    text.push_str(&format!(
        "symbolic eigen-equations: {} ({} eigenfunctions, {} rank checks, {} parameter sets)\n",
        status(report.symbolic.pass),
        report.symbolic.eigenfunctions_verified,
        report.symbolic.rank_checks,
        report.symbolic.parameter_sets
    ));
    text.push_str(&format!(
        "commutator identity:      {} ({} cases)\n",
        status(report.commutator.pass),
        report.commutator.cases
    ));
    if let Some(fd) = &report.fd {
        let worst = fd
            .records
            .iter()
            .map(|r| r.max_fd_residual)
            .fold(0.0f64, f64::max);
        text.push_str(&format!(
            "finite-difference oracle: {} ({} records, worst residual {worst:.3e})\n",
            status(fd.pass),
            fd.records.len()
        ));
    }
    if let Some(gram) = &report.gram {
        let worst = gram
            .reports
            .iter()
            .map(|r| r.max_off_block)
            .fold(0.0f64, f64::max);
        text.push_str(&format!(
            "cross-level gram blocks:  {} ({} runs, worst off-block {worst:.3e})\n",
            status(gram.pass),
            gram.reports.len()
        ));
    }
    if let Some(failure) = report.first_failure() {
        text.push_str(&format!("first failure: {failure}\n"));
    }
    text.push_str(&format!("overall: {}\n", status(report.pass)));
    text
}

// ---- cs-map ----

#[derive(Serialize)]
struct CsMapEntry {
    label: Vec<u32>,
    seed: SymPolyJson,
    poly: SymPolyJson,
    eigenvalue: String,
}

#[derive(Serialize)]
struct CsMapOutput {
    schema_version: u32,
    params: ModelParamsJson,
    degree: u64,
    note: String,
    entries: Vec<CsMapEntry>,
}

fn cmd_cs_map(
    cli: &Cli,
    cfg: &FileConfig,
    model: &ModelArgs,
    degree: Option<u64>,
    format: Option<Format>,
) -> Result<(), CliError> {
    let params = resolve_model(model, cfg)?;
    let format = resolve_format(format, cfg, Format::Json)?;
    if format == Format::Csv {
        return Err(CliError::Usage(
            "cs-map emits structured polynomials; use --format json or pretty".into(),
        ));
    }
    let degree = match (degree, cfg.get("degree")) {
        (Some(d), _) => d,
        (None, Some(raw)) => raw
            .parse()
            .map_err(|_| CliError::Usage(format!("config key `degree`: bad value `{raw}`")))?,
        (None, None) => return Err(CliError::Usage("--degree is required for cs-map".into())),
    };
    if degree % 2 != 0 {
        return Err(CliError::Usage(format!(
            "degree {degree} is odd: the image of the even-sector model lies in even oscillator \
             degrees only"
        )));
    }
    let n = degree / 2;
    let n_vars = params.n_particles();
    let labels = partitions_of(n, n_vars as u32, n.max(1) as usize);
    let eigenvalue = rat_int(degree as i64) + params.e0_prime();
    let mut entries = Vec::new();
    for label in labels {
        let mut seed = SymPoly::one(n_vars, VarTag::X);
        for (l, mult) in label.multiplicities() {
            let p2l = SymPoly::monomial(
                Partition::new(vec![2 * l]).map_err(CliError::usage)?,
                n_vars,
                VarTag::X,
            )
            .map_err(CliError::usage)?;
            for _ in 0..mult {
                seed = seed.multiply(&p2l).map_err(CliError::usage)?;
            }
        }
        let mapped = exp_neg_half_a(&seed, &params).map_err(CliError::usage)?;
        let lhs = apply_transformed_h_cs(&mapped, &params).map_err(CliError::usage)?;
        if lhs != mapped.scale(&eigenvalue) {
            return Err(CliError::Verification(format!(
                "transformed eigen-equation failed for label {label} at eigenvalue {}",
                format_rational(&eigenvalue)
            )));
        }
        entries.push(CsMapEntry {
            label: label.parts().to_vec(),
            seed: seed.to_json(),
            poly: mapped.to_json(),
            eigenvalue: format_rational(&eigenvalue),
        });
    }
    let note = "seeds are even power-sum products, so every mapped state lies in the even \
                sector of the oscillator basis"
        .to_string();
    match format {
        Format::Json => {
            let out = CsMapOutput {
                schema_version: 1,
                params: params.to_json(),
                degree,
                note,
                entries,
            };
            emit(cli, &to_pretty_json(&out))
        }
        Format::Pretty => {
            let mut text = format!(
                "N = {}, alpha = {}, E0' = {}\ndegree {degree}: eigenvalue {}\n{note}\n",
                params.n_particles(),
                format_rational(params.alpha()),
                format_rational(&params.e0_prime()),
                format_rational(&eigenvalue),
            );
            for e in &entries {
                let poly = SymPoly::from_json(&e.poly).map_err(CliError::usage)?;
                text.push_str(&format!("  {:?}  ->  {}\n", e.label, poly));
            }
            emit(cli, &text)
        }
        Format::Csv => unreachable!(),
    }
}

// ---- fock-check ----

#[derive(Serialize)]
struct FockOutput {
    schema_version: u32,
    su11: Su11Report,
    orthogonality: OrthogonalityReport,
    pass: bool,
}

fn cmd_fock_check(
    cli: &Cli,
    cfg: &FileConfig,
    cutoff: Option<u64>,
    n_max: Option<u64>,
    n_particles: Option<usize>,
    tamper: bool,
    format: Option<Format>,
) -> Result<(), CliError> {
    let format = resolve_format(format, cfg, Format::Json)?;
    let cutoff = cfg.resolve(cutoff, "cutoff", 12).map_err(CliError::usage)?;
    let n_max = cfg.resolve(n_max, "n-max", 4).map_err(CliError::usage)?;
    let n_modes = cfg
        .resolve(n_particles, "n-particles", 2)
        .map_err(CliError::usage)?;
    let su11 = su11_fock_check_with(cutoff, tamper).map_err(CliError::usage)?;
    let orthogonality = fock_orthogonality_check(n_max, n_modes);
    let pass = su11.passed() && orthogonality.passed();
    let out = FockOutput {
        schema_version: 1,
        su11,
        orthogonality,
        pass,
    };
    let text = match format {
        Format::Json | Format::Csv => to_pretty_json(&out),
        Format::Pretty => {
            let status = |b: bool| if b { "PASS" } else { "FAIL" };
            format!(
                "su(1,1) relations at cutoff {cutoff}: {} ({} states)\noccupation orthogonality \
                 (N={n_modes}, levels <= {n_max}): {} ({} pairs)\noverall: {}\n",
                status(out.su11.passed()),
                out.su11.states_checked,
                status(out.orthogonality.passed()),
                out.orthogonality.pairs_checked,
                status(pass)
            )
        }
    };
    emit(cli, &text)?;
    if pass {
        Ok(())
    } else {
        let detail = out
            .su11
            .violations
            .first()
            .or(out.orthogonality.violations.first())
            .cloned()
            .unwrap_or_else(|| "see report".into());
        Err(CliError::Verification(detail))
    }
}
