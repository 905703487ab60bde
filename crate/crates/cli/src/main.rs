//! Command-line front door for the lattice toolkit.
//!
//! Exit codes: 0 = success / bounds hold, 1 = a checked bound or membership
//! failed, 2 = usage or parse errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand};
use num_bigint::BigInt;

use latk_core::cvp::{collect_bit_stats, cvp_solve, CvpInstance};
use latk_core::bdd::solve_bdd;
use latk_core::instance::{generate, GeneratorKind, GeneratorSpec, InstanceFile};
use latk_core::lattice::{is_member, LatticeVector};
use latk_core::linalg::RatVector;
use latk_core::rational::{format_rational, parse_rational, Rational};
use latk_core::reference::{brute_cvp, successive_minima, EnumerationBudget};
use latk_core::svp::{enumerate_shortest, oracle_query, OracleSpec};

const ANSWER_HEADER: &str = "latk-answer-v1";
const CORPUS_HEADER: &str = "latk-corpus-v1";

#[derive(Parser)]
#[command(name = "latk", about = "Exact-arithmetic lattice toolkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file.
    Gen {
        /// uniform | planted-bdd | planted-cvp
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: usize,
        /// Ambient dimension; defaults to n.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 5)]
        entry_bits: u32,
        #[arg(long)]
        seed: u64,
        /// Oracle quality the instance is meant for (rational literal).
        #[arg(long, default_value = "1")]
        gamma: String,
        /// Fraction of lambda_1/(2 gamma) used for planted-bdd offsets.
        #[arg(long, default_value = "1/2")]
        bdd_slack: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Query the SVP oracle on an instance's lattice.
    Svp {
        #[arg(long)]
        instance: PathBuf,
        /// exact | lll | adversarial:<gamma>:<seed>
        #[arg(long, default_value = "exact")]
        oracle: String,
    },
    /// Solve approximate CVP on an instance.
    Cvp {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value = "exact")]
        oracle: String,
        /// Write the per-level trace to this path.
        #[arg(long)]
        emit_trace: Option<PathBuf>,
        /// Write the answer to this path (readable by `check`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Verify the distance bound by brute force up to this dimension.
        #[arg(long, default_value_t = 10)]
        max_brute_dim: usize,
    },
    /// Solve BDD on an instance.
    Bdd {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value = "exact")]
        oracle: String,
    },
    /// Validate an answer file: lattice membership plus the gamma^2 sqrt(n)
    /// distance bound (via brute force, when the dimension allows).
    Check {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        answer: PathBuf,
        #[arg(long, default_value_t = 10)]
        max_brute_dim: usize,
    },
    /// Run the regression corpus in a directory (expects expectations.tsv).
    Corpus {
        #[arg(long)]
        dir: PathBuf,
        /// Recompute and write expectations.tsv instead of checking it.
        #[arg(long, default_value_t = false)]
        write_expectations: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Gen { kind, n, m, entry_bits, seed, gamma, bdd_slack, out } => {
            let spec = GeneratorSpec {
                kind: GeneratorKind::parse(&kind)?,
                n,
                m: m.unwrap_or(n),
                entry_bits,
                seed,
                gamma: parse_rational(&gamma)?,
                bdd_slack: parse_rational(&bdd_slack)?,
            };
            let instance = generate(&spec)?;
            std::fs::write(&out, instance.serialize())
                .with_context(|| format!("writing {}", out.display()))?;
            println!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Svp { instance, oracle } => {
            let inst = load_instance(&instance)?;
            let spec = OracleSpec::parse(&oracle)?;
            let result = oracle_query(&spec, &inst.basis)?;
            println!("vector {}", result.vector.coords().to_literals());
            println!("norm_sq {}", format_rational(&result.vector.norm_sq()));
            println!("gamma_sq {}", format_rational(&result.gamma_sq));
            Ok(ExitCode::SUCCESS)
        }
        Command::Cvp { instance, oracle, emit_trace, out, max_brute_dim } => {
            let inst = load_instance(&instance)?;
            let target = require_target(&inst)?;
            let spec = OracleSpec::parse(&oracle)?;
            let cvp_inst = CvpInstance::new(inst.basis.clone(), target.clone(), spec)?;
            let result = cvp_solve(&cvp_inst)?;

            println!("answer {}", result.answer.coords().to_literals());
            println!("dist_sq {}", format_rational(&result.dist_sq_achieved));
            println!("bound_factor_sq {}", format_rational(&result.bound_factor_sq));
            println!("M {}", result.trace.m_param);
            println!("max_bits {}", collect_bit_stats(&result.trace));

            if let Some(path) = emit_trace {
                std::fs::write(&path, result.trace.render())
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            if let Some(path) = out {
                let mut text = format!("{ANSWER_HEADER}\n");
                text.push_str(&format!("vector {}\n", result.answer.coords().to_literals()));
                text.push_str(&format!("dist_sq {}\n", format_rational(&result.dist_sq_achieved)));
                std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            }

            if inst.n() <= max_brute_dim {
                let d_sq = brute_cvp(&inst.basis, &target, &EnumerationBudget::default())?
                    .dist_sq(&target);
                if result.dist_sq_achieved <= &result.bound_factor_sq * &d_sq {
                    println!("bound ok");
                } else {
                    println!("bound violated");
                    return Ok(ExitCode::from(1));
                }
            } else {
                println!("bound unchecked");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bdd { instance, oracle } => {
            let inst = load_instance(&instance)?;
            let target = require_target(&inst)?;
            let spec = OracleSpec::parse(&oracle)?;
            let outcome = solve_bdd(&inst.basis, &target, &spec)?;
            println!("candidate {}", outcome.candidate.coords().to_literals());
            println!("dist_sq {}", format_rational(&outcome.candidate.dist_sq(&target)));
            println!("certified {}", outcome.promise_certified);
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { instance, answer, max_brute_dim } => {
            let inst = load_instance(&instance)?;
            let target = require_target(&inst)?;
            let vector = load_answer(&answer, inst.m())?;
            let Some(coeffs) = is_member(&inst.basis, &vector)? else {
                println!("not a lattice member");
                return Ok(ExitCode::from(1));
            };
            let answer_vec = LatticeVector::new(&inst.basis, coeffs);
            let dist_sq = answer_vec.dist_sq(&target);
            println!("member ok");
            println!("dist_sq {}", format_rational(&dist_sq));
            if inst.n() <= max_brute_dim {
                let d_sq = brute_cvp(&inst.basis, &target, &EnumerationBudget::default())?
                    .dist_sq(&target);
                let g2 = &inst.gamma * &inst.gamma;
                let bound = &g2 * &g2 * Rational::from_integer(BigInt::from(inst.n())) * &d_sq;
                if dist_sq <= bound {
                    println!("bound ok");
                } else {
                    println!("bound violated");
                    return Ok(ExitCode::from(1));
                }
            } else {
                println!("bound unchecked");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Corpus { dir, write_expectations } => run_corpus(&dir, write_expectations),
    }
}

fn load_instance(path: &Path) -> anyhow::Result<InstanceFile> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    Ok(InstanceFile::parse(&text)?)
}

fn require_target(inst: &InstanceFile) -> anyhow::Result<RatVector> {
    inst.target
        .clone()
        .ok_or_else(|| anyhow!("instance has no target (SVP-only file)"))
}

fn load_answer(path: &Path, m: usize) -> anyhow::Result<RatVector> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| anyhow!("empty answer file"))?;
    if header != ANSWER_HEADER {
        bail!("unexpected answer header {header:?}");
    }
    for line in lines {
        if let Some(rest) = line.strip_prefix("vector ") {
            let entries = rest
                .split_whitespace()
                .map(parse_rational)
                .collect::<Result<Vec<_>, _>>()?;
            if entries.len() != m {
                bail!("answer vector has dimension {}, expected {m}", entries.len());
            }
            return Ok(RatVector::new(entries));
        }
    }
    bail!("answer file has no vector line")
}

/// Regression corpus: per instance, the brute-force distance must match the
/// stored expectation, the solver output must respect the Theorem bound and
/// the bit-size gate 64*M^2, and the two independent enumerations must agree
/// on lambda_1^2.
fn run_corpus(dir: &Path, write_expectations: bool) -> anyhow::Result<ExitCode> {
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".lat"))
        .collect();
    names.sort();
    if names.is_empty() {
        bail!("no .lat instances in {}", dir.display());
    }

    if write_expectations {
        let mut out = format!("{CORPUS_HEADER}\n");
        for name in &names {
            let inst = load_instance(&dir.join(name))?;
            let target = require_target(&inst)?;
            let d_sq = brute_cvp(&inst.basis, &target, &EnumerationBudget::default())?
                .dist_sq(&target);
            let cvp_inst =
                CvpInstance::new(inst.basis.clone(), target.clone(), OracleSpec::exact())?;
            let result = cvp_solve(&cvp_inst)?;
            let gate = 64 * result.trace.m_param * result.trace.m_param;
            out.push_str(&format!("{name} {} {gate}\n", format_rational(&d_sq)));
        }
        let path = dir.join("expectations.tsv");
        std::fs::write(&path, out).with_context(|| format!("writing {}", path.display()))?;
        println!("wrote {}", path.display());
        return Ok(ExitCode::SUCCESS);
    }

    let expectations = load_expectations(&dir.join("expectations.tsv"))?;
    let mut all_ok = true;
    let mut max_bits_seen = 0u64;
    for name in &names {
        let Some((expected_d_sq, gate)) = expectations.iter().find(|(n, _, _)| n == name).map(|(_, d, g)| (d.clone(), *g))
        else {
            println!("{name} FAIL missing-expectation");
            all_ok = false;
            continue;
        };
        match check_corpus_instance(&dir.join(name), &expected_d_sq, gate) {
            Ok(report) => {
                max_bits_seen = max_bits_seen.max(report.bits);
                if report.failures.is_empty() {
                    println!(
                        "{name} PASS dist_sq={} bits={}/{}",
                        format_rational(&report.dist_sq),
                        report.bits,
                        gate
                    );
                } else {
                    all_ok = false;
                    println!("{name} FAIL {}", report.failures.join(","));
                }
            }
            Err(err) => {
                all_ok = false;
                println!("{name} FAIL error: {err:#}");
            }
        }
    }
    println!(
        "corpus {} max_bits={max_bits_seen}",
        if all_ok { "pass" } else { "FAIL" }
    );
    Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn load_expectations(path: &Path) -> anyhow::Result<Vec<(String, Rational, u64)>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {} (generate it with --write-expectations)", path.display()))?;
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| anyhow!("empty expectations file"))?;
    if header != CORPUS_HEADER {
        bail!("unexpected expectations header {header:?}");
    }
    let mut out = Vec::new();
    for line in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            bail!("malformed expectations line {line:?}");
        }
        out.push((
            fields[0].to_string(),
            parse_rational(fields[1])?,
            fields[2].parse::<u64>().with_context(|| format!("bad gate in {line:?}"))?,
        ));
    }
    Ok(out)
}

struct CorpusReport {
    dist_sq: Rational,
    bits: u64,
    failures: Vec<String>,
}

fn check_corpus_instance(
    path: &Path,
    expected_d_sq: &Rational,
    gate: u64,
) -> anyhow::Result<CorpusReport> {
    let inst = load_instance(path)?;
    let target = require_target(&inst)?;
    let mut failures = Vec::new();

    let brute = brute_cvp(&inst.basis, &target, &EnumerationBudget::default())?;
    let d_sq = brute.dist_sq(&target);
    if &d_sq != expected_d_sq {
        failures.push(format!(
            "brute-distance-drift expected={} got={}",
            format_rational(expected_d_sq),
            format_rational(&d_sq)
        ));
    }

    let cvp_inst = CvpInstance::new(inst.basis.clone(), target.clone(), OracleSpec::exact())?;
    let result = cvp_solve(&cvp_inst)?;
    if is_member(&inst.basis, result.answer.coords())?.is_none() {
        failures.push("answer-not-member".into());
    }
    if result.dist_sq_achieved < d_sq {
        failures.push("answer-beats-optimum".into());
    }
    let bound = Rational::from_integer(BigInt::from(inst.n())) * &d_sq;
    if result.dist_sq_achieved > bound {
        failures.push("theorem-bound-violated".into());
    }

    let bits = collect_bit_stats(&result.trace);
    let recomputed_gate = 64 * result.trace.m_param * result.trace.m_param;
    if recomputed_gate != gate {
        failures.push(format!("gate-drift expected={gate} got={recomputed_gate}"));
    }
    if bits > gate {
        failures.push(format!("bit-gate-exceeded bits={bits} gate={gate}"));
    }

    // Cross-oracle consistency on lambda_1^2.
    if inst.n() <= 6 {
        let lambda1_enum = enumerate_shortest(&inst.basis)?.norm_sq();
        let minima = successive_minima(&inst.basis, &EnumerationBudget::default())?;
        if lambda1_enum != minima[0] {
            failures.push("lambda1-disagreement".into());
        }
    }

    Ok(CorpusReport { dist_sq: d_sq, bits, failures })
}
