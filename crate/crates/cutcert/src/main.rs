//! `cutcert`: sketch dynamic edge streams and certify k-edge-connectivity.
//!
//! Exit codes for `certify`: 0 positive, 10 negative (small cut witness),
//! 11 negative (disconnected), 20 sketch decoding failure.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use cutcert::certify::{build_certificate, Certificate, CutEnumMode, RoundStats};
use cutcert::distributed::simulate;
use cutcert::graph_sketch::{ConnSketch, SketchStats};
use cutcert::oracle::validate_certificate;
use cutcert::stream::{ingest, parse_stream, replay_exact, Stream};
use cutcert::supportfind::DEFAULT_W;

const CERT_FORMAT_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "cutcert", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SeedArg {
    /// Master seed for all sketch randomness.
    #[arg(long, env = "CUTCERT_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Read an edge stream and write the end-of-stream sketch state.
    Ingest {
        /// Stream file ("n <N> k <K>" header, then "+ u v" / "- u v" lines).
        #[arg(long)]
        stream: PathBuf,
        /// Output path for the serialized sketch.
        #[arg(long)]
        out: PathBuf,
        /// Reject duplicate inserts and deletes of absent edges.
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Decode a sketch into a connectivity certificate.
    Certify {
        #[arg(long)]
        sketch: PathBuf,
        /// Output path for the JSON certificate.
        #[arg(long)]
        out: PathBuf,
        /// Use sampled cut enumeration regardless of graph size.
        #[arg(long)]
        sampled: bool,
    },
    /// Check a certificate against the exact stream replay.
    Verify {
        #[arg(long)]
        stream: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Run the one-round player/referee protocol and certify the merge.
    SimulateDistributed {
        #[arg(long)]
        stream: PathBuf,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Report exact serialized sizes, from a sketch file or from (n, k).
    Stats {
        #[arg(long, conflicts_with_all = ["n", "k"])]
        sketch: Option<PathBuf>,
        #[arg(long, requires = "k")]
        n: Option<u32>,
        #[arg(long, requires = "n")]
        k: Option<u32>,
    },
    /// Exact minimum cut of the replayed stream (reference computation).
    OracleMincut {
        #[arg(long)]
        stream: PathBuf,
    },
}

/// On-disk certificate envelope.
#[derive(Serialize, Deserialize)]
struct CertificateFile {
    format_version: u32,
    n: u32,
    k: u32,
    seed: u64,
    certificate: Certificate,
    rounds: Vec<RoundStats>,
}

fn load_stream(path: &PathBuf) -> anyhow::Result<Stream> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(parse_stream(BufReader::new(file))?)
}

fn certificate_exit(cert: &Certificate) -> u8 {
    match cert {
        Certificate::Positive { .. } => 0,
        Certificate::NegativeCut { .. } => 10,
        Certificate::NegativeDisconnected { .. } => 11,
    }
}

fn run() -> anyhow::Result<u8> {
    match Cli::parse().command {
        Command::Ingest {
            stream,
            out,
            strict,
            seed,
        } => {
            let s = load_stream(&stream)?;
            if strict {
                replay_exact(&s, true)?;
            }
            let sketch = ingest(&s, seed.seed)?;
            std::fs::write(&out, sketch.serialize())
                .with_context(|| format!("writing {}", out.display()))?;
            let stats = sketch.stats();
            println!(
                "ingested {} events into an (n = {}, k = {}) sketch: {} bits -> {}",
                s.updates.len(),
                s.header.n,
                s.header.k,
                stats.total_bits,
                out.display()
            );
            Ok(0)
        }
        Command::Certify { sketch, out, sampled } => {
            let bytes = std::fs::read(&sketch)
                .with_context(|| format!("reading {}", sketch.display()))?;
            let cs = ConnSketch::deserialize(&bytes)?;
            let mode = if !sampled && cs.n() <= 22 {
                CutEnumMode::Exhaustive
            } else {
                CutEnumMode::Contraction {
                    seed: cs.seed(),
                    stall: 2000,
                }
            };
            match build_certificate(&cs, mode) {
                Ok((certificate, rounds)) => {
                    let file = CertificateFile {
                        format_version: CERT_FORMAT_VERSION,
                        n: cs.n(),
                        k: cs.k(),
                        seed: cs.seed(),
                        certificate,
                        rounds,
                    };
                    let mut w = BufWriter::new(
                        File::create(&out)
                            .with_context(|| format!("creating {}", out.display()))?,
                    );
                    serde_json::to_writer_pretty(&mut w, &file)?;
                    writeln!(w)?;
                    w.flush()?;
                    let verdict = match &file.certificate {
                        Certificate::Positive { edges } => {
                            format!("positive ({} certificate edges)", edges.len())
                        }
                        Certificate::NegativeCut { crossing, .. } => {
                            format!("negative: cut of size {}", crossing.len())
                        }
                        Certificate::NegativeDisconnected { component } => {
                            format!("negative: disconnected ({} vertices reachable)", component.len())
                        }
                    };
                    println!("{verdict} -> {}", out.display());
                    Ok(certificate_exit(&file.certificate))
                }
                Err(e @ cutcert::Error::CertifyFailed(_)) => {
                    eprintln!("{e}");
                    Ok(20)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Verify { stream, cert } => {
            let s = load_stream(&stream)?;
            let file: CertificateFile = serde_json::from_reader(BufReader::new(
                File::open(&cert).with_context(|| format!("opening {}", cert.display()))?,
            ))?;
            if file.format_version != CERT_FORMAT_VERSION {
                bail!("unsupported certificate format version {}", file.format_version);
            }
            if file.n != s.header.n || file.k != s.header.k {
                bail!(
                    "certificate is for (n = {}, k = {}), stream has (n = {}, k = {})",
                    file.n,
                    file.k,
                    s.header.n,
                    s.header.k
                );
            }
            let g = replay_exact(&s, false)?;
            let verdict = validate_certificate(&g, file.k, &file.certificate)?;
            match verdict {
                cutcert::oracle::Verdict::Valid => {
                    println!("certificate is valid for the replayed graph");
                    Ok(0)
                }
                cutcert::oracle::Verdict::Invalid(reason) => {
                    eprintln!("certificate is invalid: {reason}");
                    Ok(1)
                }
            }
        }
        Command::SimulateDistributed { stream, seed } => {
            let s = load_stream(&stream)?;
            let outcome = simulate(s.header.n, s.header.k, seed.seed, &s.updates)?;
            let central = ingest(&s, seed.seed)?;
            if outcome.sketch.serialize() != central.serialize() {
                bail!("merged referee state differs from central ingest");
            }
            println!(
                "{} players, {} bits per message, {} bits total; merge matches central ingest",
                outcome.messages.len(),
                outcome.max_message_bits(),
                outcome.total_message_bits()
            );
            let mode = if s.header.n <= 22 {
                CutEnumMode::Exhaustive
            } else {
                CutEnumMode::Contraction {
                    seed: seed.seed,
                    stall: 2000,
                }
            };
            let (certificate, _) = build_certificate(&outcome.sketch, mode)?;
            match &certificate {
                Certificate::Positive { edges } => {
                    println!("referee verdict: positive ({} certificate edges)", edges.len())
                }
                Certificate::NegativeCut { crossing, .. } => {
                    println!("referee verdict: negative, cut of size {}", crossing.len())
                }
                Certificate::NegativeDisconnected { component } => println!(
                    "referee verdict: negative, disconnected ({} vertices reachable)",
                    component.len()
                ),
            }
            Ok(certificate_exit(&certificate))
        }
        Command::Stats { sketch, n, k } => {
            let stats = match (sketch, n, k) {
                (Some(path), _, _) => {
                    let bytes = std::fs::read(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    ConnSketch::deserialize(&bytes)?.stats()
                }
                (None, Some(n), Some(k)) => SketchStats::for_params(n, k, DEFAULT_W)?,
                _ => bail!("pass either --sketch or both --n and --k"),
            };
            print_stats(&stats);
            Ok(0)
        }
        Command::OracleMincut { stream } => {
            let s = load_stream(&stream)?;
            let g = replay_exact(&s, false)?;
            let (value, side) = g.min_cut()?;
            if value == 0 {
                println!("graph is disconnected; component of vertex 1: {side:?}");
            } else {
                println!("minimum cut value {value}, witness side {side:?}");
            }
            Ok(0)
        }
    }
}

fn print_stats(stats: &SketchStats) {
    println!("n = {}, k = {}", stats.n, stats.k);
    println!(
        "forest: {} instances, {} bits",
        stats.forest_instances, stats.forest_bits
    );
    for &(r, budget, t, bits) in &stats.stacks {
        println!("stack {r}: budget {budget}, t = {t}, {bits} bits");
    }
    println!("total: {} bits ({} bytes)", stats.total_bits, stats.total_bits / 8);
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
