//! Command-line interface: exact flow counting, projected transforms,
//! Lorentzian checks, volume polynomials, and randomized theorem sweeps.
//!
//! Exit codes: 0 when every requested check passes, 1 on a verification
//! failure (with a certificate on stdout), 2 on usage or input errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use flowpoly::kostant;
use flowpoly::lorentzian::{
    self, conjugate_antidiagonal, inertia, is_lorentzian_normalized, log_concavity_check,
};
use flowpoly::multigraph::Multigraph;
use flowpoly::projections::{self, SigmaMode};
use flowpoly::verify::{self, SweepConfig};
use flowpoly::volume;
use flowpoly::{SparsePolynomial, SymmetricIntMatrix};

#[derive(Parser)]
#[command(
    name = "flowpoly",
    version,
    about = "Exact Kostant partition functions, projected integer point transforms, and Lorentzian verification for flow polytopes"
)]
struct Cli {
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Worker threads for sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,

    /// Output format where both are supported.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MapKind {
    Phi,
    Psi,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeKind {
    Formula,
    Bruteforce,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Count integer flows with the given netflow; optionally list them.
    Kostant {
        graph_file: PathBuf,
        /// Netflow entries, one per vertex.
        #[arg(allow_negative_numbers = true, num_args = 1..)]
        netflow: Vec<i64>,
        /// Print the flows, one per line, as edge values in edge order.
        #[arg(long)]
        enumerate: bool,
    },
    /// Compute a projected integer point transform.
    Sigma {
        #[arg(long, value_enum)]
        map: MapKind,
        #[arg(long, value_enum, default_value_t = ModeKind::Both)]
        mode: ModeKind,
        graph_file: PathBuf,
        #[arg(allow_negative_numbers = true, num_args = 1..)]
        netflow: Vec<i64>,
    },
    /// Check that the normalized projected transform is Lorentzian.
    CheckLorentzian {
        #[arg(long, value_enum)]
        map: MapKind,
        graph_file: PathBuf,
        #[arg(allow_negative_numbers = true, num_args = 1..)]
        netflow: Vec<i64>,
    },
    /// Print the volume polynomial, or verify the Hessian-via-volume
    /// pipeline against the conjugated Kostant matrix.
    Volume {
        graph_file: PathBuf,
        /// Run the pipeline check; expects the netflow entries followed by
        /// the escaping-flow entries.
        #[arg(long)]
        verify_pipeline: bool,
        #[arg(allow_negative_numbers = true, num_args = 0..)]
        rest: Vec<i64>,
    },
    /// Randomized verification sweep over the library's standing identities.
    VerifyTheorem {
        #[arg(long, default_value_t = 100)]
        instances: usize,
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long, default_value_t = 8)]
        max_edges: usize,
        #[arg(long, default_value_t = 3)]
        max_netflow: i64,
    },
    /// Exact inertia of a symmetric integer matrix (whitespace-separated
    /// rows).
    Inertia { matrix_file: PathBuf },
    /// Check coefficient log-concavity of a polynomial file.
    LogConcavity { poly_file: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(cli: &Cli, content: &str) -> Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, content)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{content}"),
    }
    Ok(())
}

fn load_graph(path: &PathBuf) -> Result<Multigraph> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading graph file {}", path.display()))?;
    Multigraph::from_text(&text).map_err(|e| anyhow!("{e}"))
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Kostant {
            graph_file,
            netflow,
            enumerate,
        } => {
            let graph = load_graph(graph_file)?;
            if *enumerate {
                let flows = kostant::enumerate_flows(&graph, netflow)?;
                let mut lines: Vec<String> = Vec::with_capacity(flows.len());
                for flow in &flows {
                    let fields: Vec<String> =
                        flow.values().iter().map(u32::to_string).collect();
                    lines.push(fields.join(" "));
                }
                let body = match cli.format {
                    Format::Text => {
                        let mut text = lines.join("\n");
                        if !text.is_empty() {
                            text.push('\n');
                        }
                        text
                    }
                    Format::Json => serde_json::to_string_pretty(&serde_json::json!({
                        "count": flows.len(),
                        "flows": flows.iter().map(|f| f.values().to_vec()).collect::<Vec<_>>(),
                    }))? + "\n",
                };
                emit(cli, &body)?;
            } else {
                let count = kostant::kostant(&graph, netflow)?;
                let body = match cli.format {
                    Format::Text => format!("{count}\n"),
                    Format::Json => serde_json::to_string_pretty(&serde_json::json!({
                        "count": count.to_string(),
                    }))? + "\n",
                };
                emit(cli, &body)?;
            }
            Ok(true)
        }

        Command::Sigma {
            map,
            mode,
            graph_file,
            netflow,
        } => {
            let graph = load_graph(graph_file)?;
            let compute = |m: SigmaMode| -> Result<SparsePolynomial> {
                let sigma = match map {
                    MapKind::Phi => projections::sigma_phi(&graph, netflow, m)?,
                    MapKind::Psi => projections::sigma_psi(&graph, netflow, m)?,
                };
                Ok(sigma)
            };
            let (poly, matched) = match mode {
                ModeKind::Formula => (compute(SigmaMode::Formula)?, true),
                ModeKind::Bruteforce => (compute(SigmaMode::BruteForce)?, true),
                ModeKind::Both => {
                    let formula = compute(SigmaMode::Formula)?;
                    let brute = compute(SigmaMode::BruteForce)?;
                    let matched = formula == brute;
                    (formula, matched)
                }
            };
            let body = match cli.format {
                Format::Text => {
                    if matched {
                        poly.to_text()
                    } else {
                        format!("MISMATCH between formula and bruteforce modes\n{}", poly.to_text())
                    }
                }
                Format::Json => serde_json::to_string_pretty(&serde_json::json!({
                    "matched": matched,
                    "polynomial": poly.to_text(),
                }))? + "\n",
            };
            emit(cli, &body)?;
            Ok(matched)
        }

        Command::CheckLorentzian {
            map,
            graph_file,
            netflow,
        } => {
            let graph = load_graph(graph_file)?;
            let sigma = match map {
                MapKind::Phi => projections::sigma_phi(&graph, netflow, SigmaMode::Formula)?,
                MapKind::Psi => projections::sigma_psi(&graph, netflow, SigmaMode::Formula)?,
            };
            let verdict = is_lorentzian_normalized(&sigma)?;
            let body = match cli.format {
                Format::Text => format!("{verdict}\n"),
                Format::Json => serde_json::to_string_pretty(&serde_json::json!({
                    "lorentzian": verdict.is_lorentzian(),
                    "certificate": if verdict.is_lorentzian() { None } else { Some(verdict.to_string()) },
                }))? + "\n",
            };
            emit(cli, &body)?;
            Ok(verdict.is_lorentzian())
        }

        Command::Volume {
            graph_file,
            verify_pipeline,
            rest,
        } => {
            let graph = load_graph(graph_file)?;
            if !verify_pipeline {
                if !rest.is_empty() {
                    bail!("unexpected trailing arguments without --verify-pipeline");
                }
                let vol = volume::volume_polynomial(&graph)?;
                let body = match cli.format {
                    Format::Text => vol.poly.to_text(),
                    Format::Json => serde_json::to_string_pretty(&serde_json::json!({
                        "degree": vol.degree,
                        "polynomial": vol.poly.to_text(),
                    }))? + "\n",
                };
                emit(cli, &body)?;
                return Ok(true);
            }

            let n = graph.vertex_count() - 1;
            if rest.len() != 2 * n + 1 {
                bail!(
                    "--verify-pipeline expects {} netflow entries followed by {} escaping-flow entries",
                    n + 1,
                    n
                );
            }
            let netflow = &rest[..=n];
            let efd: Vec<u32> = rest[n + 1..]
                .iter()
                .map(|&v| u32::try_from(v).map_err(|_| anyhow!("escaping flow entries must be nonnegative")))
                .collect::<Result<_>>()?;

            let via_volume = volume::hessian_via_volume(&graph, netflow, &efd)?;
            let sinkinfo = graph.sink_structure()?;
            let d: Vec<u32> = sinkinfo
                .t_g()
                .iter()
                .map(|&t| efd[t - 1])
                .collect();
            let direct = conjugate_antidiagonal(&lorentzian::build_k_matrix(
                &graph, netflow, &d,
            )?);
            let matched = via_volume == direct;
            let body = match cli.format {
                Format::Text => {
                    if matched {
                        format!("pipeline matches\n{via_volume}")
                    } else {
                        format!(
                            "PIPELINE MISMATCH\nvolume route:\n{via_volume}conjugated Kostant matrix:\n{direct}"
                        )
                    }
                }
                Format::Json => serde_json::to_string_pretty(&serde_json::json!({
                    "matched": matched,
                    "via_volume": via_volume.to_text(),
                    "conjugated_k_matrix": direct.to_text(),
                }))? + "\n",
            };
            emit(cli, &body)?;
            Ok(matched)
        }

        Command::VerifyTheorem {
            instances,
            max_n,
            max_edges,
            max_netflow,
        } => {
            let cfg = SweepConfig {
                max_n: *max_n,
                max_edges: *max_edges,
                max_netflow_entry: *max_netflow,
                instance_count: *instances,
                rng_seed: cli.seed,
                parallel_workers: cli.workers,
            };
            let report = verify::verify_theorem(&cfg)?;
            let body = match cli.format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json() + "\n",
            };
            emit(cli, &body)?;
            Ok(report.all_passed())
        }

        Command::Inertia { matrix_file } => {
            let text = fs::read_to_string(matrix_file)
                .with_context(|| format!("reading matrix file {}", matrix_file.display()))?;
            let matrix = SymmetricIntMatrix::from_text(&text)?;
            let sig = inertia(&matrix);
            let body = match cli.format {
                Format::Text => format!("{sig}\n"),
                Format::Json => serde_json::to_string_pretty(&serde_json::json!({
                    "positive": sig.positive,
                    "negative": sig.negative,
                    "zero": sig.zero,
                }))? + "\n",
            };
            emit(cli, &body)?;
            Ok(true)
        }

        Command::LogConcavity { poly_file } => {
            let text = fs::read_to_string(poly_file)
                .with_context(|| format!("reading polynomial file {}", poly_file.display()))?;
            let poly = SparsePolynomial::from_text(&text)?;
            let witness = log_concavity_check(&poly);
            let body = match cli.format {
                Format::Text => match &witness {
                    None => "log-concave\n".to_string(),
                    Some(w) => format!("NOT log-concave: {w}\n"),
                },
                Format::Json => serde_json::to_string_pretty(&serde_json::json!({
                    "log_concave": witness.is_none(),
                    "witness": witness.as_ref().map(|w| w.to_string()),
                }))? + "\n",
            };
            emit(cli, &body)?;
            Ok(witness.is_none())
        }
    }
}
